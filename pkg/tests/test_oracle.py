import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_batch_instance, random_single_product
from lotsizer.formulations import build_general_dls
from lotsizer.model import DlsInstance, check_schedule, evaluate_cost
from lotsizer.oracle import (
    brute_force_batch_schedules,
    brute_force_single_product,
    wagner_whitin_dp,
)
from lotsizer.solver import branch_and_bound


def test_classic_data(ww_instance):
    res = wagner_whitin_dp(ww_instance)
    assert res.cost == 864.0
    assert res.schedule.quantities[:, 0].tolist() == [98, 0, 97, 0, 121, 0, 0, 112, 0, 67,
                                                      135, 0]
    assert res.table.values[-1] == 864.0
    assert brute_force_single_product(ww_instance).cost == 864.0


def test_both_holding_conventions_agree_without_initial_stock(ww_instance):
    assert wagner_whitin_dp(ww_instance, holding_convention="entering").cost == 864.0


def test_steady_state_alternates():
    inst = DlsInstance(demand=np.full((12, 1), 52.5), holding_cost=1.0, setup_cost=102.8)
    res = wagner_whitin_dp(inst)
    q = res.schedule.quantities[:, 0]
    assert q[::2].tolist() == [105.0] * 6 and not q[1::2].any()
    assert res.cost == pytest.approx(6 * (102.8 + 52.5))


def test_entering_convention_shifts_holding():
    inst = DlsInstance(demand=[[0.0], [10.0]], holding_cost=[[1.0], [3.0]], setup_cost=1.0,
                       initial_inventory=[4.0])
    a = wagner_whitin_dp(inst)
    b = wagner_whitin_dp(inst, holding_convention="entering")
    # end of period: 4 units held through period 1 at rate 1
    assert a.cost == pytest.approx(1.0 + 4.0)
    # entering: 4 units on hand entering period 1 (rate h1) and period 2 (rate h1)
    assert b.cost == pytest.approx(1.0 + 4.0 + 4.0)
    with pytest.raises(ValueError):
        wagner_whitin_dp(inst, holding_convention="midpoint")


def test_regeneration_property_holds():
    rng = np.random.default_rng(7)
    for _ in range(30):
        inst = random_single_product(rng)
        s = wagner_whitin_dp(inst).schedule
        prev = np.concatenate([[0.0], s.inventory[:-1, 0]])
        assert np.all(prev * s.quantities[:, 0] == 0)
        assert check_schedule(inst, s, setup_rule="per_period") == []


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 60), min_size=1, max_size=9), st.integers(0, 100),
       st.floats(0.5, 3), st.floats(10, 200))
def test_dp_matches_enumeration(demand, i0, h, c):
    inst = DlsInstance(demand=np.array(demand, float)[:, None], holding_cost=h, setup_cost=c,
                       initial_inventory=[float(i0)])
    a = wagner_whitin_dp(inst)
    b = brute_force_single_product(inst)
    assert a.cost == pytest.approx(b.cost, abs=1e-6)
    assert evaluate_cost(inst, a.schedule).total == pytest.approx(a.cost, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 60), min_size=2, max_size=8), st.integers(0, 60))
def test_cost_nonincreasing_in_small_initial_stock(demand, i0):
    d = np.array(demand, float)[:, None]
    i0 = min(i0, demand[0])
    base = DlsInstance(demand=d, holding_cost=1.0, setup_cost=50.0)
    more = base.replace(initial_inventory=[float(i0)])
    assert wagner_whitin_dp(more).cost <= wagner_whitin_dp(base).cost + 1e-9


def test_single_product_oracle_rejects_other_models():
    with pytest.raises(ValueError):
        wagner_whitin_dp(DlsInstance(demand=[[1.0, 1.0]], holding_cost=[1, 1],
                                     setup_cost=[1, 1]))
    with pytest.raises(ValueError):
        wagner_whitin_dp(DlsInstance(demand=[[1.0]], holding_cost=1, setup_cost=1,
                                     shortage_cost=1))
    with pytest.raises(ValueError):
        brute_force_single_product(DlsInstance(demand=np.ones((21, 1)), holding_cost=1,
                                               setup_cost=1))


def test_batch_oracle_hand_example():
    # one batch of 10 covers both periods; holding 4 is cheaper than a second setup
    inst = DlsInstance(demand=[[6.0], [4.0]], holding_cost=1.0, setup_cost=5.0,
                       batch_size=[10.0], quantity_mode="single-batch")
    res = brute_force_batch_schedules(inst)
    assert res.cost == 9.0
    assert res.schedule.quantities[:, 0].tolist() == [10.0, 0.0]


def test_batch_oracle_reports_infeasible():
    inst = DlsInstance(demand=[[20.0]], holding_cost=1.0, setup_cost=5.0, batch_size=[10.0],
                       quantity_mode="single-batch")
    res = brute_force_batch_schedules(inst)
    assert not res.feasible and res.schedule is None
    assert branch_and_bound(build_general_dls(inst)[0]).status == "infeasible"


def test_batch_oracle_agrees_with_search():
    rng = np.random.default_rng(99)
    for _ in range(25):
        inst = random_batch_instance(rng)
        ref = brute_force_batch_schedules(inst)
        sol = branch_and_bound(build_general_dls(inst)[0])
        assert ref.feasible == (sol.status == "optimal")
        if ref.feasible:
            assert sol.objective == pytest.approx(ref.cost, abs=1e-6)
            assert check_schedule(inst, ref.schedule) == []
