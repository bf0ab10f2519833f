import numpy as np
import pytest

from lotsizer.solver.lp import LpData, extend_basis, solve

linprog = pytest.importorskip("scipy.optimize").linprog

STATUS = {0: "optimal", 2: "infeasible", 3: "unbounded"}


def reference(A, b, c, lo, hi, senses):
    ub = [(A[i], b[i]) if s == "<=" else (-A[i], -b[i]) for i, s in enumerate(senses) if s != "="]
    eq = [(A[i], b[i]) for i, s in enumerate(senses) if s == "="]
    r = linprog(c,
                A_ub=np.array([a for a, _ in ub]) if ub else None,
                b_ub=[v for _, v in ub] or None,
                A_eq=np.array([a for a, _ in eq]) if eq else None,
                b_eq=[v for _, v in eq] or None,
                bounds=list(zip(lo, hi)), method="highs")
    return STATUS[r.status], r.fun


def random_lp(rng, free_columns=True):
    m, n = int(rng.integers(1, 12)), int(rng.integers(1, 15))
    A = rng.integers(-5, 6, size=(m, n)).astype(float)
    A[rng.random((m, n)) < 0.4] = 0
    b = rng.integers(-10, 20, size=m).astype(float)
    c = rng.integers(-5, 6, size=n).astype(float)
    senses = rng.choice(["<=", ">=", "="], size=m, p=[0.5, 0.3, 0.2])
    lo = rng.integers(-3, 2, n).astype(float)
    hi = lo + rng.integers(0, 6, n)
    if free_columns:
        lo = np.where(rng.random(n) < 0.2, -np.inf, lo)
        hi = np.where(rng.random(n) < 0.3, np.inf, hi)
        hi = np.where(np.isinf(lo) & np.isinf(hi), 5.0, hi)
    return A, b, c, lo, hi, senses


def test_textbook_lp():
    # max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18
    A = [[1, 0], [0, 2], [3, 2]]
    r = solve(LpData(A, [4, 12, 18], [-3, -5], [0, 0], [np.inf, np.inf], ["<="] * 3))
    assert r.status == "optimal"
    assert r.objective == pytest.approx(-36)
    np.testing.assert_allclose(r.x, [2, 6], atol=1e-9)


def test_infeasible_and_unbounded():
    r = solve(LpData([[1.0]], [5.0], [1.0], [0.0], [2.0], [">="]))
    assert r.status == "infeasible"
    r = solve(LpData([[1.0, -1.0]], [1.0], [-1.0, 0.0], [0.0, 0.0], [np.inf, np.inf], ["<="]))
    assert r.status == "unbounded"


def test_degenerate_cycling_example_terminates():
    # Beale's example cycles under plain Dantzig pricing
    A = [[0.25, -60, -1 / 25, 9], [0.5, -90, -1 / 50, 3], [0, 0, 1, 0]]
    c = [-0.75, 150, -1 / 50, 6]
    r = solve(LpData(A, [0, 0, 1], c, [0] * 4, [np.inf] * 4, ["<="] * 3))
    assert r.status == "optimal"
    assert r.objective == pytest.approx(-0.05)


@pytest.mark.parametrize("seed", range(3))
def test_cold_solves_match_highs(seed):
    rng = np.random.default_rng(seed)
    for _ in range(100):
        A, b, c, lo, hi, senses = random_lp(rng)
        r = solve(LpData(A, b, c, lo, hi, senses))
        status, fun = reference(A, b, c, lo, hi, senses)
        assert r.status == status
        if status == "optimal":
            assert r.objective == pytest.approx(fun, abs=1e-6)


def test_warm_bound_changes_match_highs():
    rng = np.random.default_rng(11)
    checked = 0
    for _ in range(200):
        A, b, c, lo, hi, senses = random_lp(rng, free_columns=False)
        data = LpData(A, b, c, lo, hi, senses)
        r = solve(data)
        if r.status != "optimal":
            continue
        for _ in range(3):
            j = rng.integers(len(c))
            lo2, hi2 = lo.copy(), hi.copy()
            v = r.x[j] + rng.uniform(-1, 1)
            if rng.random() < 0.5:
                hi2[j] = max(lo2[j], np.floor(v))
            else:
                lo2[j] = min(hi2[j], np.ceil(v))
            w = solve(data, lo2, hi2, r.basis)
            status, fun = reference(A, b, c, lo2, hi2, senses)
            assert w.status == status
            if status == "optimal":
                assert w.objective == pytest.approx(fun, abs=1e-6)
                r, lo, hi = w, lo2, hi2
            checked += 1
    assert checked > 100


def test_extended_basis_after_adding_a_row():
    A = np.array([[1.0, 1.0]])
    data = LpData(A, [4.0], [-1.0, -1.0], [0, 0], [3, 3], ["<="])
    r = solve(data)
    assert r.objective == pytest.approx(-4)
    A2 = np.vstack([A, [[1.0, 0.0]]])
    data2 = LpData(A2, [4.0, 0.5], [-1.0, -1.0], [0, 0], [3, 3], ["<=", "<="])
    w = solve(data2, basis=extend_basis(r.basis, 2, 1, 2))
    assert w.status == "optimal"
    assert w.objective == pytest.approx(-3.5)
