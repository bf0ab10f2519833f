"""Primal heuristics: rounding of LP solutions with an LP repair step."""
from __future__ import annotations

from typing import Optional

import numpy as np

from ..formulations import MipModel
from . import lp as lpmod


def _repair(model: MipModel, data: lpmod.LpData, fixed: np.ndarray, tol: float,
            deadline: Optional[float]) -> Optional[np.ndarray]:
    """Fix integer columns at ``fixed`` and re-solve for the continuous ones."""
    mask = model.integer_mask
    lower = model.lower.copy()
    upper = model.upper.copy()
    lower[mask] = fixed[mask]
    upper[mask] = fixed[mask]
    res = lpmod.solve(data, lower, upper, tol=tol, deadline=deadline)
    if res.status != "optimal":
        return None
    x = res.x.copy()
    x[mask] = fixed[mask]
    return x if model.is_feasible(x, tol=1e-6) else None


def rounding_heuristic(model: MipModel, lp_values, *, data: Optional[lpmod.LpData] = None,
                       integrality_tolerance: float = 1e-6, lp_tolerance: float = 1e-7,
                       deadline: Optional[float] = None) -> Optional[np.ndarray]:
    """Round an LP solution to an integer-feasible assignment, or return None.

    Candidates are tried in order: the LP point itself when already integral,
    nearest rounding, then rounding every fractional value up. Each rounded
    point has its continuous columns recomputed by an LP with the integer
    columns fixed. Anything returned satisfies every row and bound.
    """
    x = np.asarray(lp_values, dtype=float)
    mask = model.integer_mask
    frac = np.abs(x - np.round(x))
    if not np.any(frac[mask] > integrality_tolerance):
        cand = x.copy()
        cand[mask] = np.round(cand[mask])
        if model.is_feasible(cand, tol=1e-6):
            return cand
    if data is None:
        data = lpmod.LpData.from_model(model)
    lo, hi = model.lower, model.upper
    tried = set()
    for rounded in (np.round(x), np.ceil(x - integrality_tolerance)):
        cand = x.copy()
        cand[mask] = np.clip(rounded[mask], lo[mask], hi[mask])
        key = cand[mask].tobytes()
        if key in tried:
            continue
        tried.add(key)
        fixed = _repair(model, data, cand, lp_tolerance, deadline)
        if fixed is not None:
            return fixed
    return None


__all__ = ["rounding_heuristic"]
