"""Bounded-variable primal simplex.

Every row ``a x (<=|>=|=) b`` gets a slack ``s = b - a x`` whose bounds
encode the sense, so the working system is ``[A I] (x, s) = b`` with
``l <= (x, s) <= u``. Phase 1 minimises the sum of bound violations of the
basic variables starting from any basis (slack basis or a warm start);
phase 2 minimises the true objective. Dantzig pricing is used until a run
of degenerate pivots is detected, then Bland's rule takes over until the
objective moves again.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

INF = np.inf


@dataclass(frozen=True)
class Basis:
    basic: np.ndarray       # column indices in the extended (x, s) space, one per row
    at_upper: np.ndarray    # nonbasic status flags over extended columns


@dataclass
class LpResult:
    status: str             # optimal | infeasible | unbounded | iteration_limit | time_limit
    x: Optional[np.ndarray]
    objective: float
    iterations: int = 0
    basis: Optional[Basis] = None


class LpData:
    """Dense working form of a linear program."""

    def __init__(self, A, b, c, lower, upper, senses, offset: float = 0.0):
        A = np.asarray(A, dtype=float)
        self.m, self.n = A.shape
        self.A = np.hstack([A, np.eye(self.m)])
        self.b = np.asarray(b, dtype=float).copy()
        self.c = np.concatenate([np.asarray(c, dtype=float), np.zeros(self.m)])
        self.lower = np.asarray(lower, dtype=float).copy()
        self.upper = np.asarray(upper, dtype=float).copy()
        slack_lo = np.zeros(self.m)
        slack_hi = np.zeros(self.m)
        for i, s in enumerate(senses):
            if s == "<=":
                slack_hi[i] = INF
            elif s == ">=":
                slack_lo[i] = -INF
            elif s != "=":
                raise ValueError(f"unknown sense {s!r}")
        self.slack_lower = slack_lo
        self.slack_upper = slack_hi
        self.offset = offset
        self.cmax = max(1.0, float(np.max(np.abs(self.c), initial=0.0)))

    @classmethod
    def from_model(cls, model) -> "LpData":
        return cls(model.matrix, model.rhs, model.objective, model.lower, model.upper,
                   model.senses, model.objective_offset)

    def slack_basis(self) -> Basis:
        N = self.n + self.m
        return Basis(np.arange(self.n, N), np.zeros(N, dtype=bool))


def extend_basis(basis: Basis, n: int, old_m: int, new_m: int) -> Basis:
    """Carry a basis over to a model with extra rows appended (new slacks basic)."""
    old_cols = n + old_m
    at = np.zeros(n + new_m, dtype=bool)
    at[:old_cols] = basis.at_upper[:old_cols]
    basic = np.concatenate([basis.basic, np.arange(n + old_m, n + new_m)])
    return Basis(basic, at)


def solve(data: LpData, lower=None, upper=None, basis: Optional[Basis] = None, *,
          tol: float = 1e-7, max_iter: Optional[int] = None,
          deadline: Optional[float] = None) -> LpResult:
    """Solve ``min c x`` over the rows of ``data`` with the given column bounds."""
    return _Simplex(data, lower, upper, basis, tol, max_iter, deadline).run()


class _Simplex:
    REFACTOR = 60
    DEGENERATE_LIMIT = 25
    RECHECK = 12            # eta updates tolerated before optimality is re-confirmed
    PIVOT_TOL = 1e-9

    def __init__(self, data: LpData, lower, upper, basis, tol, max_iter, deadline):
        self.d = data
        m, n = data.m, data.n
        lo = data.lower if lower is None else np.asarray(lower, dtype=float)
        hi = data.upper if upper is None else np.asarray(upper, dtype=float)
        self.lb = np.concatenate([lo, data.slack_lower])
        self.ub = np.concatenate([hi, data.slack_upper])
        self.N = n + m
        self.tol = tol
        self.ptol = 1e-9 * (1.0 + np.where(np.isfinite(self.lb), np.abs(self.lb), 0.0)
                            + np.where(np.isfinite(self.ub), np.abs(self.ub), 0.0))
        self.dtol = 1e-9 * data.cmax
        self.max_iter = max_iter if max_iter is not None else 60 * (self.N + 10)
        self.deadline = deadline
        self.iterations = 0
        self.warm = basis is not None
        self._init_basis(basis)

    # -- setup -----------------------------------------------------------

    def _init_basis(self, basis):
        d = self.d
        if basis is None or len(basis.basic) != d.m or len(basis.at_upper) != self.N:
            basis = d.slack_basis()
        self.basic = np.array(basis.basic, dtype=int)
        self.at_upper = np.array(basis.at_upper, dtype=bool)
        if not self._factor():
            basis = d.slack_basis()
            self.basic = np.array(basis.basic, dtype=int)
            self.at_upper = np.array(basis.at_upper, dtype=bool)
            self._factor()
        self.is_basic = np.zeros(self.N, dtype=bool)
        self.is_basic[self.basic] = True
        self.x = np.zeros(self.N)
        self._place_nonbasic()
        self._recompute_xb()

    def _factor(self) -> bool:
        B = self.d.A[:, self.basic]
        try:
            Binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        if not np.all(np.isfinite(Binv)):
            return False
        resid = np.max(np.abs(Binv @ B - np.eye(self.d.m)), initial=0.0)
        if resid > 1e-6:
            return False
        self.Binv = Binv
        return True

    def _place_nonbasic(self):
        lb, ub, x = self.lb, self.ub, self.x
        nb = ~self.is_basic
        up = nb & self.at_upper & np.isfinite(ub)
        low = nb & ~up & np.isfinite(lb)
        up2 = nb & ~up & ~low & np.isfinite(ub)
        free = nb & ~up & ~low & ~up2
        x[up | up2] = ub[up | up2]
        x[low] = lb[low]
        x[free] = 0.0
        self.at_upper = np.where(nb, up | up2, False)

    def _recompute_xb(self):
        xn = self.x.copy()
        xn[self.basic] = 0.0
        self.xb = self.Binv @ (self.d.b - self.d.A @ xn)

    # -- main loop -----------------------------------------------------

    def _dual_phase(self) -> Optional[str]:
        """Dual simplex from a dual-feasible basis (typical after a bound change).

        Returns "infeasible" when a row proves primal infeasibility, "done"
        when the basis became primal feasible, or None to hand over to the
        primal method (basis not dual feasible, or no progress).
        """
        d = self.d
        nb = ~self.is_basic
        y = d.c[self.basic] @ self.Binv
        dj = d.c - y @ d.A
        dtol = self.dtol * 10
        at_lo = nb & ~self.at_upper
        at_hi = nb & self.at_upper
        free = nb & ~np.isfinite(self.lb) & ~np.isfinite(self.ub)
        if np.any(free) or np.any(dj[at_lo & np.isfinite(self.lb)] < -dtol) \
                or np.any(dj[at_hi] > dtol):
            return None
        limit = 4 * (self.d.m + 10)
        for _ in range(limit):
            if self.deadline is not None and self.iterations % 20 == 0 \
                    and time.perf_counter() > self.deadline:
                return None
            lbB, ubB = self.lb[self.basic], self.ub[self.basic]
            ptolB = self.ptol[self.basic]
            low = lbB - self.xb
            high = self.xb - ubB
            viol = np.maximum(low, high)
            r = int(np.argmax(viol))
            if viol[r] <= ptolB[r]:
                return "done"
            to_upper = high[r] > low[r]
            target = ubB[r] if to_upper else lbB[r]
            row = self.Binv[r] @ d.A
            nb = ~self.is_basic
            movable = nb & (self.ub - self.lb > self.ptol)
            at_hi = self.at_upper & movable
            at_lo = ~self.at_upper & movable
            if to_upper:
                # basic value must fall: increase j with row_j > 0 or decrease with row_j < 0
                cand = (at_lo & (row > self.PIVOT_TOL)) | (at_hi & (row < -self.PIVOT_TOL))
            else:
                cand = (at_lo & (row < -self.PIVOT_TOL)) | (at_hi & (row > self.PIVOT_TOL))
            if not cand.any():
                return "infeasible"
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(cand, np.abs(dj) / np.abs(row), INF)
            best = float(np.min(ratio))
            ties = np.flatnonzero(ratio <= best + 1e-12 * (1.0 + best))
            j = int(ties[np.argmax(np.abs(row[ties]))])
            alpha = self.Binv @ d.A[:, j]
            step = (self.xb[r] - target) / alpha[r]
            self.x[j] += step
            self.xb -= step * alpha
            leaving = self.basic[r]
            self.x[leaving] = target
            self.at_upper[leaving] = bool(to_upper)
            self.is_basic[leaving] = False
            self.is_basic[j] = True
            self.at_upper[j] = False
            self.basic[r] = j
            self.xb[r] = self.x[j]
            piv = alpha[r]
            prow = self.Binv[r] / piv
            self.Binv -= np.outer(alpha, prow)
            self.Binv[r] = prow
            # reduced costs: dj -= (dj_j / row_j) * row
            dj = dj - (dj[j] / row[j]) * row
            dj[j] = 0.0
            self.iterations += 1
        return None

    def run(self) -> LpResult:
        d = self.d
        if self.warm:
            verdict = self._dual_phase()
            if verdict is not None and self._factor():
                self._recompute_xb()
                if verdict == "infeasible" and self._dual_phase() == "infeasible":
                    # re-derived from a fresh factorisation
                    return self._result("infeasible")
        degenerate = 0
        bland = False
        since_factor = 0
        rechecks = 0
        while True:
            if self.iterations >= self.max_iter:
                return self._result("iteration_limit")
            if self.deadline is not None and self.iterations % 20 == 0 \
                    and time.perf_counter() > self.deadline:
                return self._result("time_limit")
            if since_factor >= self.REFACTOR:
                if self._factor():
                    self._recompute_xb()
                since_factor = 0

            lbB, ubB = self.lb[self.basic], self.ub[self.basic]
            ptolB = self.ptol[self.basic]
            below = self.xb < lbB - ptolB
            above = self.xb > ubB + ptolB
            phase1 = bool(below.any() or above.any())
            if phase1:
                cB = np.where(below, -1.0, np.where(above, 1.0, 0.0))
                y = cB @ self.Binv
                dj = -(y @ d.A)
                dtol = 1e-11
            else:
                cB = d.c[self.basic]
                y = cB @ self.Binv
                dj = d.c - y @ d.A
                dtol = self.dtol
            dj[self.basic] = 0.0

            j, direction = self._price(dj, dtol, bland)
            if j < 0:
                # confirm with a fresh factorisation before concluding
                if since_factor >= self.RECHECK and rechecks < 3 and self._factor():
                    self._recompute_xb()
                    since_factor = 0
                    rechecks += 1
                    continue
                return self._result("infeasible" if phase1 else "optimal")

            alpha = self.Binv @ d.A[:, j]
            delta = -direction * alpha
            theta, r, target_upper = self._ratio(delta, phase1, below, above, bland)
            span = self.ub[j] - self.lb[j]
            flip = span < theta
            if flip:
                theta = span
            if not np.isfinite(theta):
                if phase1:
                    # cannot happen with exact arithmetic; recover via refactor/Bland
                    if self._factor():
                        self._recompute_xb()
                    bland = True
                    self.iterations += 1
                    since_factor = 0
                    continue
                return self._result("unbounded")

            self.iterations += 1
            since_factor += 1
            if theta <= 1e-12:
                degenerate += 1
                if degenerate > self.DEGENERATE_LIMIT:
                    bland = True
            else:
                degenerate = 0
                bland = False

            self.x[j] += direction * theta
            self.xb += theta * delta
            if flip:
                self.at_upper[j] = direction > 0
                self.x[j] = self.ub[j] if direction > 0 else self.lb[j]
                continue
            leaving = self.basic[r]
            self.x[leaving] = self.ub[leaving] if target_upper else self.lb[leaving]
            self.at_upper[leaving] = target_upper
            self.is_basic[leaving] = False
            self.is_basic[j] = True
            self.at_upper[j] = False
            self.basic[r] = j
            self.xb[r] = self.x[j]
            piv = alpha[r]
            row = self.Binv[r] / piv
            self.Binv -= np.outer(alpha, row)
            self.Binv[r] = row

    def _price(self, dj, dtol, bland):
        x, lb, ub = self.x, self.lb, self.ub
        nb = ~self.is_basic
        can_inc = nb & (x < ub - self.ptol)
        can_dec = nb & (x > lb + self.ptol)
        inc = can_inc & (dj < -dtol)
        dec = can_dec & (dj > dtol)
        cand = inc | dec
        if not cand.any():
            return -1, 0
        if bland:
            j = int(np.flatnonzero(cand)[0])
        else:
            score = np.where(cand, np.abs(dj), -1.0)
            j = int(np.argmax(score))
        return j, (1 if inc[j] else -1)

    def _ratio(self, delta, phase1, below, above, bland):
        xb = self.xb
        lbB, ubB = self.lb[self.basic], self.ub[self.basic]
        ratios = np.full(xb.shape, INF)
        to_upper = np.zeros(xb.shape, dtype=bool)
        dec = delta < -self.PIVOT_TOL
        inc = delta > self.PIVOT_TOL
        with np.errstate(divide="ignore", invalid="ignore"):
            if phase1:
                # infeasible variables stop at the bound they are moving towards
                dec_above = dec & above
                dec_ok = dec & ~above & ~below & np.isfinite(lbB)
                inc_below = inc & below
                inc_ok = inc & ~above & ~below & np.isfinite(ubB)
                ratios = np.where(dec_above, (xb - ubB) / -delta, ratios)
                to_upper |= dec_above
                ratios = np.where(dec_ok, (xb - lbB) / -delta, ratios)
                ratios = np.where(inc_below, (lbB - xb) / delta, ratios)
                ratios = np.where(inc_ok, (ubB - xb) / delta, ratios)
                to_upper |= inc_ok
            else:
                dec_ok = dec & np.isfinite(lbB)
                inc_ok = inc & np.isfinite(ubB)
                ratios = np.where(dec_ok, (xb - lbB) / -delta, ratios)
                ratios = np.where(inc_ok, (ubB - xb) / delta, ratios)
                to_upper = inc_ok
        ratios = np.maximum(ratios, 0.0)
        theta = float(np.min(ratios)) if ratios.size else INF
        if not np.isfinite(theta):
            return INF, -1, False
        ties = np.flatnonzero(ratios <= theta + 1e-12 * (1.0 + theta))
        if bland:
            r = int(ties[np.argmin(self.basic[ties])])
        else:
            r = int(ties[np.argmax(np.abs(delta[ties]))])
        return float(ratios[r]), r, bool(to_upper[r])

    def _result(self, status: str) -> LpResult:
        d = self.d
        x = self.x.copy()
        x[self.basic] = self.xb
        basis = Basis(self.basic.copy(), self.at_upper.copy())
        if status != "optimal":
            return LpResult(status, None if status == "infeasible" else x[:d.n],
                            INF if status == "infeasible" else float(d.c @ x + d.offset),
                            self.iterations, basis)
        xs = x[:d.n]
        # snap structural values onto their bounds when within tolerance
        lo, hi = self.lb[:d.n], self.ub[:d.n]
        xs = np.where(np.abs(xs - lo) <= self.ptol[:d.n], lo, xs)
        xs = np.where(np.abs(xs - hi) <= self.ptol[:d.n], hi, xs)
        obj = float(d.c[:d.n] @ xs + d.offset)
        return LpResult("optimal", xs, obj, self.iterations, basis)
