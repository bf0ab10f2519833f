import numpy as np
import pytest

from conftest import random_batch_instance
from lotsizer.formulations import INTEGER, ModelBuilder, build_general_dls
from lotsizer.solver import SolveOptions, branch_and_bound, presolve


def small_model():
    b = ModelBuilder("p")
    b.add_column("x", 0, 10, INTEGER, obj=1.0)
    b.add_column("y", 0, 10, obj=2.0)
    b.add_column("z", 0, 10, obj=-1.0)
    b.add_row("fix", [(0, 2.0)], "=", 6.0)
    b.add_row("cap", [(1, 1.0), (2, 1.0)], "<=", 4.0)
    b.add_row("link", [(0, 1.0), (1, 1.0)], ">=", 4.0)
    return b.build()


def test_singleton_equality_fixes_and_postsolves():
    res = presolve(small_model())
    assert res.status == "reduced"
    assert res.fixed_values[0] == 3.0
    assert 0 not in res.kept_columns
    sol = branch_and_bound(small_model(), SolveOptions(enable_presolve=False))
    x = res.postsolve(res.reduce(sol.values))
    np.testing.assert_allclose(x, sol.values)


def test_fractional_singleton_on_integer_is_infeasible():
    b = ModelBuilder("p")
    b.add_column("x", 0, 10, INTEGER)
    b.add_row("fix", [(0, 2.0)], "=", 5.0)
    res = presolve(b.build())
    assert res.status == "infeasible" and res.reason


def test_conflicting_bounds_are_infeasible():
    b = ModelBuilder("p")
    b.add_column("x", 0, 1)
    b.add_row("lo", [(0, 1.0)], ">=", 2.0)
    assert presolve(b.build()).status == "infeasible"
    assert branch_and_bound(b.build()).status == "infeasible"


def test_model_without_reductions_is_returned_as_is():
    b = ModelBuilder("p")
    b.add_column("x", 0, 5, obj=1.0)
    b.add_column("y", 0, 5, obj=1.0)
    b.add_row("r", [(0, 1.0), (1, 1.0)], ">=", 3.0)
    m = b.build()
    assert presolve(m).unchanged


@pytest.mark.parametrize("seed", range(4))
def test_presolve_preserves_optimum(seed):
    rng = np.random.default_rng(100 + seed)
    for _ in range(10):
        model, _ = build_general_dls(random_batch_instance(rng))
        on = branch_and_bound(model)
        off = branch_and_bound(model, SolveOptions(enable_presolve=False))
        assert on.status == off.status
        if on.status == "optimal":
            assert on.objective == pytest.approx(off.objective, abs=1e-6)
            assert model.is_feasible(on.values)
