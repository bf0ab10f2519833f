import itertools

import numpy as np
import pytest

from lotsizer.bench import bomberger_case
from lotsizer.formulations import (
    BINARY,
    INTEGER,
    ModelBuilder,
    build_dls_1p,
    build_dls_mp,
    build_dls_mp_cs,
    build_elsp_bomberger,
    build_general_dls,
    column_counts,
    extract_schedule,
    schedule_to_values,
)
from lotsizer.model import DlsInstance, check_schedule, evaluate_cost
from lotsizer.oracle import wagner_whitin_dp
from lotsizer.solver import branch_and_bound, solve_lp


def changeover_rows_hold(x1: int, x2: int, w: int) -> bool:
    inst = DlsInstance(demand=[[1.0], [1.0]], holding_cost=1.0, setup_cost=1.0,
                       shortage_cost=5.0)
    model, cat = build_general_dls(inst)
    x = np.zeros(model.n_cols)
    x[cat["X", 0, 0]], x[cat["X", 1, 0]], x[cat["omega", 1, 0]] = x1, x2, w
    rows = [r for r in model.rows if r.name in ("chg_ge_t2_p1", "chg_le_t2_p1")]
    assert len(rows) == 2
    sub = ModelBuilder("chg")
    for c in model.columns:
        sub.add_column(c.name, c.lb, c.ub, c.kind, c.obj)
    for r in rows:
        sub.add_row(r.name, r.coefs, r.sense, r.rhs)
    return sub.build().max_violation(x) <= 1e-9


@pytest.mark.parametrize("x1,x2,w", list(itertools.product((0, 1), repeat=3)))
def test_changeover_truth_table(x1, x2, w):
    assert changeover_rows_hold(x1, x2, w) == (w == int((not x1) and x2))


def test_dls1p_shape_and_styles(ww_instance):
    one, cat = build_dls_1p(ww_instance)
    two, _ = build_dls_1p(ww_instance, "two-sided")
    assert one.n_cols == two.n_cols == 36
    assert (one.n_rows, two.n_rows) == (24, 36)
    assert column_counts(one)[BINARY] == 12
    assert cat.setup_rule == "per_period"
    with pytest.raises(ValueError):
        build_dls_1p(ww_instance, "sideways")


def test_one_sided_relaxation_is_at_least_as_tight(ww_instance):
    one = solve_lp(build_dls_1p(ww_instance)[0])
    two = solve_lp(build_dls_1p(ww_instance, "two-sided")[0])
    assert one.status == two.status == "optimal"
    assert one.objective >= two.objective - 1e-7


def test_both_styles_reach_the_same_integer_optimum(ww_instance):
    a = branch_and_bound(build_dls_1p(ww_instance)[0])
    b = branch_and_bound(build_dls_1p(ww_instance, "two-sided")[0])
    assert a.objective == pytest.approx(864.0, abs=1e-6)
    assert b.objective == pytest.approx(864.0, abs=1e-6)


def test_dlsmp_decomposes_into_single_products():
    rng = np.random.default_rng(3)
    demand = rng.integers(0, 40, (6, 2)).astype(float)
    hold, setup = [1.0, 2.0], [60.0, 30.0]
    inst = DlsInstance(demand=demand, holding_cost=hold, setup_cost=setup)
    total = sum(wagner_whitin_dp(DlsInstance(demand=demand[:, [p]], holding_cost=[hold[p]],
                                             setup_cost=[setup[p]])).cost for p in range(2))
    sol = branch_and_bound(build_dls_mp(inst)[0])
    assert sol.objective == pytest.approx(total, abs=1e-6)


def test_common_setup_is_charged_once_per_period():
    inst = DlsInstance(demand=[[10.0, 10.0], [10.0, 10.0]], holding_cost=[100.0, 100.0],
                       setup_cost=[1.0, 2.0], common_setup_cost=50.0)
    model, cat = build_dls_mp_cs(inst)
    sol = branch_and_bound(model)
    # holding is expensive, so both periods produce both products
    assert sol.objective == pytest.approx(2 * (1 + 2 + 50))
    assert cat.vector("Omega", sol.values).tolist() == [1.0, 1.0]
    with pytest.raises(ValueError):
        build_dls_mp(inst)


def test_general_model_counts():
    inst = DlsInstance(demand=np.ones((3, 2)), holding_cost=[1, 1], setup_cost=[1, 1],
                       shortage_cost=[5, 5], batch_size=[2, 2], production_limit=4.0,
                       changeover_limit=[1, 1, 1], quantity_mode="multi-batch")
    model, cat = build_general_dls(inst)
    counts = column_counts(model)
    assert model.n_cols == 5 * 6 + 6
    assert counts[INTEGER] == 6 and counts[BINARY] == 12
    assert cat.integer_roles == frozenset({"X", "omega", "N"})
    names = [r.name for r in model.rows]
    assert sum(n.startswith("chg_") for n in names) == 2 * 2 * 2
    assert sum(n.startswith("chglimit") for n in names) == 3


def test_general_model_never_costs_more_than_per_period_setups(ww_instance):
    a = branch_and_bound(build_general_dls(ww_instance)[0])
    b = branch_and_bound(build_dls_1p(ww_instance)[0])
    assert a.objective <= b.objective + 1e-6


def test_min_quantity_enforced():
    inst = DlsInstance(demand=[[3.0], [3.0]], holding_cost=1.0, setup_cost=1.0,
                       min_quantity=[5.0])
    model, cat = build_general_dls(inst)
    sol = branch_and_bound(model)
    s = extract_schedule(cat, sol)
    assert s.quantities[:, 0].tolist() == [6.0, 0.0]
    assert check_schedule(inst, s) == []


def test_schedule_round_trips_through_values(ww_instance):
    model, cat = build_dls_1p(ww_instance)
    plan = wagner_whitin_dp(ww_instance).schedule
    x = schedule_to_values(cat, plan)
    assert model.is_feasible(x)
    assert model.evaluate(x) == pytest.approx(evaluate_cost(ww_instance, plan).total)
    assert extract_schedule(cat, x) == plan


def test_extract_rejects_fractional_binaries(ww_instance):
    model, cat = build_dls_1p(ww_instance)
    x = np.zeros(model.n_cols)
    x[cat["omega", 0, 0]] = 0.4
    with pytest.raises(ValueError, match="integrality"):
        extract_schedule(cat, x)


def test_elsp_model_shape():
    inst = bomberger_case(120)
    model, cat = build_elsp_bomberger(inst)
    n, m = 2, 10
    assert model.n_cols == 4 * n * m
    assert column_counts(model)[BINARY] == n * m
    assert model.n_rows == n * (m + 1 + 4 * m)
    assert cat.formulation == "elsp"


def test_elsp_rejects_demand_above_rate():
    inst = bomberger_case(120)
    bad = inst.replace(demand_rate=inst.production_rate * 1.5)
    with pytest.raises(ValueError, match="rate"):
        build_elsp_bomberger(bad)


def test_model_validation():
    b = ModelBuilder("m")
    b.add_column("x")
    b.add_column("x")
    with pytest.raises(ValueError, match="duplicate"):
        b.build()


def plain_big_m(model, inst):
    """The same ELSP model with the textbook ``q <= q_hat * omega`` rows."""
    from dataclasses import replace as dc_replace

    from lotsizer.formulations import Row
    from lotsizer.model import elsp_derived_parameters

    qmax = elsp_derived_parameters(inst).max_quantity
    rows = []
    for r in model.rows:
        if r.name.startswith("setup_on_"):
            p = int(r.name.rsplit("_p", 1)[1]) - 1
            (jq, _), (jw, _) = sorted(r.coefs, key=lambda c: -c[1])
            r = Row(r.name, tuple(sorted([(jq, 1.0), (jw, -float(qmax[p]))])), r.sense, r.rhs)
        rows.append(r)
    return dc_replace(model, rows=tuple(rows))


@pytest.mark.parametrize("seed", range(6))
def test_elsp_big_m_tightening_keeps_the_optimum(seed):
    from lotsizer.model import ElspInstance

    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 4))
    rate = rng.uniform(500, 2000, m)
    demand = rate * rng.uniform(0.05, 0.3, m)
    inst = ElspInstance(setup_cost=rng.uniform(10, 200, m), piece_cost=rng.uniform(0.01, 1, m),
                        production_rate=rate, demand_rate=demand,
                        setup_time=rng.integers(1, 6, m).astype(float), period_length=5.0,
                        horizon_days=20.0, initial_inventory=demand * rng.uniform(0, 12, m))
    tight, _ = build_elsp_bomberger(inst)
    a = branch_and_bound(tight)
    b = branch_and_bound(plain_big_m(tight, inst))
    assert a.status == b.status
    if a.status == "optimal":
        assert a.objective == pytest.approx(b.objective, rel=1e-7, abs=1e-6)
