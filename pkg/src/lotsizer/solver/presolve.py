"""Primal presolve: singleton rows, activity-based bound propagation,
redundant-row removal and substitution of fixed columns."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ..formulations import MipModel, Row

FEAS_TOL = 1e-9


@dataclass(frozen=True)
class PresolveResult:
    status: str                      # "reduced" or "infeasible"
    model: Optional[MipModel]
    original: MipModel
    kept_columns: np.ndarray         # original index of every reduced column
    fixed_values: np.ndarray         # value of every original column (nan if kept)
    kept_rows: tuple = ()
    reason: str = ""

    @property
    def unchanged(self) -> bool:
        return self.model is self.original

    def postsolve(self, x_reduced) -> np.ndarray:
        """Map a reduced-model solution back to the original column space."""
        x = self.fixed_values.copy()
        x[self.kept_columns] = np.asarray(x_reduced, dtype=float)
        return x

    def reduce(self, x_full) -> np.ndarray:
        return np.asarray(x_full, dtype=float)[self.kept_columns]


def _activity(coefs, lb, ub):
    """Min/max activity and the count of infinite contributions to each."""
    lo = hi = 0.0
    lo_inf = hi_inf = 0
    for j, a in coefs:
        if a > 0:
            l, u = a * lb[j], a * ub[j]
        else:
            l, u = a * ub[j], a * lb[j]
        if math.isinf(l):
            lo_inf += 1
        else:
            lo += l
        if math.isinf(u):
            hi_inf += 1
        else:
            hi += u
    return lo, lo_inf, hi, hi_inf


def _tighten(j, new_lb, new_ub, lb, ub, integer) -> bool:
    changed = False
    if integer[j]:
        if new_ub is not None:
            new_ub = math.floor(new_ub + 1e-6)
        if new_lb is not None:
            new_lb = math.ceil(new_lb - 1e-6)
    if new_ub is not None and new_ub < ub[j] - 1e-7 * (1.0 + abs(new_ub)):
        if math.isinf(ub[j]) or integer[j] or ub[j] - new_ub > 1e-3 * (1.0 + abs(ub[j])):
            ub[j] = new_ub
            changed = True
    if new_lb is not None and new_lb > lb[j] + 1e-7 * (1.0 + abs(new_lb)):
        if math.isinf(lb[j]) or integer[j] or new_lb - lb[j] > 1e-3 * (1.0 + abs(lb[j])):
            lb[j] = new_lb
            changed = True
    return changed


def presolve(model: MipModel, max_passes: int = 20) -> PresolveResult:
    """Reduce ``model``; any reduced solution maps back with equal objective."""
    n = model.n_cols
    lb = [c.lb for c in model.columns]
    ub = [c.ub for c in model.columns]
    integer = [c.is_integer for c in model.columns]
    rows = [(r.name, list(r.coefs), r.sense, r.rhs) for r in model.rows]
    active = [True] * len(rows)
    changed_any = False

    def infeasible(reason):
        return PresolveResult("infeasible", None, model, np.arange(0), np.full(n, np.nan),
                              (), reason)

    for _ in range(max_passes):
        changed = False
        for i, (name, coefs, sense, rhs) in enumerate(rows):
            if not active[i]:
                continue
            if len(coefs) == 0:
                ok = ((sense == "<=" and rhs >= -FEAS_TOL) or (sense == ">=" and rhs <= FEAS_TOL)
                      or (sense == "=" and abs(rhs) <= FEAS_TOL))
                if not ok:
                    return infeasible(f"empty row {name} cannot be satisfied")
                active[i] = False
                changed = True
                continue
            if len(coefs) == 1:
                j, a = coefs[0]
                v = rhs / a
                if sense == "=":
                    if integer[j]:
                        if abs(v - round(v)) > 1e-9:
                            return infeasible(f"row {name} fixes integer column to {v}")
                        v = float(round(v))
                    scale = 1e-9 * (1.0 + abs(v))
                    if v < lb[j] - scale or v > ub[j] + scale:
                        return infeasible(f"row {name} fixes column outside its bounds")
                    lb[j] = ub[j] = v
                elif (sense == "<=") == (a > 0):
                    changed |= _tighten(j, None, v, lb, ub, integer)
                else:
                    changed |= _tighten(j, v, None, lb, ub, integer)
                active[i] = False
                changed = True
                if lb[j] > ub[j] + 1e-9 * (1.0 + abs(ub[j])):
                    return infeasible(f"column {model.columns[j].name} has empty domain")
                continue

            lo, lo_inf, hi, hi_inf = _activity(coefs, lb, ub)
            tol = 1e-9 * (1.0 + abs(rhs))
            if sense in ("<=", "=") and lo_inf == 0 and lo > rhs + tol:
                return infeasible(f"row {name}: min activity {lo} > {rhs}")
            if sense in (">=", "=") and hi_inf == 0 and hi < rhs - tol:
                return infeasible(f"row {name}: max activity {hi} < {rhs}")
            if sense == "<=" and hi_inf == 0 and hi <= rhs + tol:
                active[i] = False
                changed = True
                continue
            if sense == ">=" and lo_inf == 0 and lo >= rhs - tol:
                active[i] = False
                changed = True
                continue

            for j, a in coefs:
                # implied bounds on column j from the remaining activity
                if sense in ("<=", "="):
                    c_lo = a * (lb[j] if a > 0 else ub[j])
                    rest_inf = lo_inf - (1 if math.isinf(c_lo) else 0)
                    if rest_inf == 0:
                        rest = lo - (0.0 if math.isinf(c_lo) else c_lo)
                        v = (rhs - rest) / a
                        if a > 0:
                            changed |= _tighten(j, None, v, lb, ub, integer)
                        else:
                            changed |= _tighten(j, v, None, lb, ub, integer)
                if sense in (">=", "="):
                    c_hi = a * (ub[j] if a > 0 else lb[j])
                    rest_inf = hi_inf - (1 if math.isinf(c_hi) else 0)
                    if rest_inf == 0:
                        rest = hi - (0.0 if math.isinf(c_hi) else c_hi)
                        v = (rhs - rest) / a
                        if a > 0:
                            changed |= _tighten(j, v, None, lb, ub, integer)
                        else:
                            changed |= _tighten(j, None, v, lb, ub, integer)
                if lb[j] > ub[j] + 1e-9 * (1.0 + abs(ub[j])):
                    return infeasible(f"column {model.columns[j].name} has empty domain")
                if lb[j] > ub[j]:
                    lb[j] = ub[j]
            if changed:
                lo, lo_inf, hi, hi_inf = _activity(coefs, lb, ub)
        changed_any |= changed
        if not changed:
            break

    fixed = [lb[j] == ub[j] or abs(ub[j] - lb[j]) <= 1e-12 for j in range(n)]
    if not changed_any and not any(fixed):
        return PresolveResult("reduced", model, model, np.arange(n), np.full(n, np.nan),
                              tuple(range(model.n_rows)))

    fixed_values = np.full(n, np.nan)
    kept = []
    for j in range(n):
        if fixed[j]:
            v = lb[j]
            if integer[j]:
                v = float(round(v))
            fixed_values[j] = v
        else:
            kept.append(j)
    new_index = {j: k for k, j in enumerate(kept)}
    offset = model.objective_offset + sum(model.columns[j].obj * fixed_values[j]
                                          for j in range(n) if fixed[j])
    cols = tuple(replace(model.columns[j], lb=float(lb[j]), ub=float(ub[j])) for j in kept)
    new_rows = []
    kept_rows = []
    for i, (name, coefs, sense, rhs) in enumerate(rows):
        if not active[i]:
            continue
        shift = sum(a * fixed_values[j] for j, a in coefs if fixed[j])
        terms = tuple((new_index[j], a) for j, a in coefs if not fixed[j])
        rhs2 = rhs - shift
        if not terms:
            ok = ((sense == "<=" and rhs2 >= -1e-9 * (1 + abs(rhs)))
                  or (sense == ">=" and rhs2 <= 1e-9 * (1 + abs(rhs)))
                  or (sense == "=" and abs(rhs2) <= 1e-9 * (1 + abs(rhs))))
            if not ok:
                return infeasible(f"row {name} violated by fixed columns")
            continue
        new_rows.append(Row(name, terms, sense, rhs2))
        kept_rows.append(i)
    reduced = MipModel(model.name, cols, tuple(new_rows), offset)
    return PresolveResult("reduced", reduced, model, np.array(kept, dtype=int), fixed_values,
                          tuple(kept_rows))


__all__ = ["presolve", "PresolveResult"]
