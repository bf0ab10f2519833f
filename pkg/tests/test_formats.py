import json
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import GOLDEN
from lotsizer.bench import bundled_instance, bundled_text
from lotsizer.formats import (
    export_lp,
    export_mps,
    format_number,
    parse_instance,
    read_mps,
    read_schedule,
    serialize_instance,
    write_schedule,
)
from lotsizer.formulations import BINARY, INTEGER, ModelBuilder, build_dls_1p
from lotsizer.model import DlsInstance, InstanceError, evaluate_cost
from lotsizer.oracle import wagner_whitin_dp
from lotsizer.solver import branch_and_bound


def minus_x():
    b = ModelBuilder("minus_x")
    b.add_column("x", 0.0, 1.0, obj=-1.0)
    return b.build()


def mixed():
    b = ModelBuilder("mixed")
    b.add_column("x", 0, 4, kind=INTEGER, obj=-2.0)
    b.add_column("y", obj=1.5)
    b.add_column("z", kind=BINARY, obj=3.0)
    b.add_column("f", -np.inf, np.inf, obj=0.25)
    b.add_row("c1", [(0, 1.0), (1, -1.0), (2, 2.5)], "<=", 3.0)
    b.add_row("c2", [(0, 1.0), (3, 1.0)], ">=", -1.0)
    b.add_row("c3", [(1, 1.0), (3, -1.0)], "=", 0.5)
    return b.build()


def ww_model():
    return build_dls_1p(bundled_instance("wagner_whitin"))[0]


def golden(name: str) -> str:
    return (GOLDEN / name).read_text(encoding="utf-8")


@pytest.mark.parametrize("name, build", [("minus_x", minus_x), ("mixed", mixed),
                                         ("wagner_whitin", ww_model)])
def test_mps_and_lp_match_fixtures(name, build):
    model = build()
    assert export_mps(model) == golden(f"{name}.mps")
    assert export_lp(model) == golden(f"{name}.lp")


def test_schedule_csv_matches_fixture():
    inst = bundled_instance("wagner_whitin")
    sched = wagner_whitin_dp(inst).schedule
    text = write_schedule(sched, evaluate_cost(inst, sched))
    assert text == golden("wagner_whitin.csv")
    back, costs = read_schedule(text)
    assert back == sched
    assert costs["total"] == 864.0


@pytest.mark.parametrize("build", [minus_x, mixed, ww_model])
def test_mps_reads_back(build):
    model = build()
    back = read_mps(export_mps(model))
    assert back.columns == model.columns
    assert [(r.name, r.sense, r.rhs, r.coefs) for r in back.rows] == \
        [(r.name, r.sense, r.rhs, r.coefs) for r in model.rows]
    assert branch_and_bound(back).objective == pytest.approx(branch_and_bound(model).objective)


def test_mps_keeps_objective_offset():
    model = replace(mixed(), objective_offset=12.5)
    back = read_mps(export_mps(model))
    assert back.objective_offset == 12.5
    assert branch_and_bound(back).objective == pytest.approx(branch_and_bound(model).objective)


@pytest.mark.parametrize("name", ["wagner_whitin", "steady_state", "bomberger"])
def test_bundled_documents_round_trip_byte_for_byte(name):
    text = bundled_text(f"{name}.json")
    inst = parse_instance(text)
    assert serialize_instance(inst) == text
    assert parse_instance(serialize_instance(inst)) == inst


def test_money_strings_keep_decimals():
    doc = {"kind": "dls", "demand": [[1]], "holding_cost": ["0.0065"], "setup_cost": ["85"]}
    inst = parse_instance(json.dumps(doc))
    assert inst.holding_cost[0] == 0.0065
    assert '"holding_cost": ["0.0065"]' in serialize_instance(inst)


@pytest.mark.parametrize("doc, code", [
    ("{", "E_SYNTAX"),
    ("[]", "E_TYPE"),
    ('{"kind": "cls"}', "E_KIND"),
    ('{"kind": "dls", "demand": [[1]], "holding_cost": [1], "setup_cost": [1], "x": 1}',
     "E_UNKNOWN_FIELD"),
    ('{"kind": "dls", "demand": [[1]], "holding_cost": [1]}', "E_MISSING"),
    ('{"kind": "dls", "demand": [1, 2], "holding_cost": [1], "setup_cost": [1]}', "E_DIMENSION"),
    ('{"kind": "dls", "demand": [[1], [2, 3]], "holding_cost": [1], "setup_cost": [1]}',
     "E_DIMENSION"),
    ('{"kind": "dls", "demand": [[1]], "holding_cost": ["-1"], "setup_cost": [1]}',
     "E_NEGATIVE_COST"),
    ('{"kind": "dls", "demand": [[-1]], "holding_cost": [1], "setup_cost": [1]}', "E_NEGATIVE"),
    ('{"kind": "dls", "demand": [["1"]], "holding_cost": [1], "setup_cost": [1]}', "E_TYPE"),
    ('{"kind": "dls", "demand": [[true]], "holding_cost": [1], "setup_cost": [1]}', "E_TYPE"),
    ('{"kind": "dls", "demand": [[1]], "holding_cost": [1], "setup_cost": [1], '
     '"max_products_per_period": 1.5}', "E_VALUE"),
])
def test_parse_errors_are_coded(doc, code):
    with pytest.raises(InstanceError) as info:
        parse_instance(doc)
    assert info.value.code == code


def test_number_format():
    assert format_number(3.0) == "3"
    assert format_number(-0.0) == "0"
    assert format_number(0.1) == "0.1"
    assert float(format_number(1 / 3)) == 1 / 3
    with pytest.raises(ValueError):
        format_number(float("nan"))


finite = st.floats(0, 1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), st.data())
def test_generated_instances_round_trip(n, m, data):
    vec = st.lists(finite, min_size=m, max_size=m)
    inst = DlsInstance(
        demand=data.draw(st.lists(vec, min_size=n, max_size=n)),
        holding_cost=data.draw(vec),
        setup_cost=data.draw(vec),
        shortage_cost=data.draw(st.none() | vec),
        production_limit=data.draw(st.none() | finite),
        initial_inventory=data.draw(vec),
        name=data.draw(st.text(max_size=8)),
    )
    text = serialize_instance(inst)
    back = parse_instance(text)
    assert back == inst
    assert serialize_instance(back) == text


def test_schedule_reader_rejects_bad_input():
    with pytest.raises(ValueError):
        read_schedule("period,product\n")
    with pytest.raises(ValueError):
        read_schedule(golden("wagner_whitin.csv").replace("1,1,98,1,1,29,0\n", ""))
