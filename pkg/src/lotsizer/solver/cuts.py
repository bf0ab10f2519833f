"""Minimal-cover cuts for knapsack rows over binary columns."""
from __future__ import annotations

import itertools
import math
from typing import Mapping, Optional

import numpy as np

from ..formulations import BINARY, MipModel, Row

VIOLATION_TOL = 1e-6
EXACT_LIMIT = 16


def _minimalize(cover: list, a: dict, x: dict, rhs: float) -> list:
    # drop members with the smallest LP value first; a cut on a smaller cover
    # is at least as violated since every dropped member contributes x_j <= 1
    total = sum(a[j] for j in cover)
    for j in sorted(cover, key=lambda j: (x[j], a[j], j)):
        if total - a[j] > rhs:
            total -= a[j]
            cover = [k for k in cover if k != j]
    return sorted(cover)


def _greedy_cover(items: list, a: dict, x: dict, rhs: float) -> Optional[list]:
    order = sorted(items, key=lambda j: ((1.0 - x[j]) / a[j], j))
    cover, total = [], 0.0
    for j in order:
        cover.append(j)
        total += a[j]
        if total > rhs:
            return cover
    return None


def _exact_cover(items: list, a: dict, x: dict, rhs: float) -> Optional[list]:
    """Cover minimising sum(1 - x_j), by enumeration over ``items``."""
    best, best_val = None, math.inf
    for r in range(1, len(items) + 1):
        for combo in itertools.combinations(items, r):
            if sum(a[j] for j in combo) <= rhs:
                continue
            val = sum(1.0 - x[j] for j in combo)
            if val < best_val - 1e-12:
                best, best_val = list(combo), val
    return best


def _violation(cover, x) -> float:
    return sum(x[j] for j in cover) - (len(cover) - 1)


def derive_cover_cuts(coefs: Mapping[int, float], rhs: float, point, *,
                      name: str = "cover") -> list[Row]:
    """Cover cuts ``sum_{j in S} x_j <= |S| - 1`` violated by ``point``.

    ``coefs`` maps column index to a positive weight of the knapsack row
    ``sum a_j x_j <= rhs`` over binary columns. Each cover is made minimal
    before it is returned. An empty list means no violated cover was found.
    """
    a = {int(j): float(v) for j, v in coefs.items() if v != 0.0}
    if any(v < 0 for v in a.values()):
        raise ValueError("cover separation needs positive coefficients")
    if sum(a.values()) <= rhs:
        return []
    pt = np.asarray(point, dtype=float)
    x = {j: min(1.0, max(0.0, float(pt[j]))) for j in a}
    # a cover containing an item at zero can never be violated
    support = [j for j in sorted(a) if x[j] > 1e-9]
    if sum(a[j] for j in support) <= rhs:
        return []
    cover = _greedy_cover(support, a, x, rhs)
    if cover is not None:
        cover = _minimalize(cover, a, x, rhs)
    if (cover is None or _violation(cover, x) <= VIOLATION_TOL) and len(support) <= EXACT_LIMIT:
        exact = _exact_cover(support, a, x, rhs)
        if exact is not None:
            cover = _minimalize(exact, a, x, rhs)
    if cover is None or _violation(cover, x) <= VIOLATION_TOL:
        return []
    return [Row(name, tuple((j, 1.0) for j in cover), "<=", float(len(cover) - 1))]


def _knapsack_views(row: Row, model: MipModel):
    """Yield (weights, rhs, complemented set) for each <= reading of a row."""
    signs = {"<=": (1.0,), ">=": (-1.0,), "=": (1.0, -1.0)}[row.sense]
    for sgn in signs:
        rhs = sgn * row.rhs
        weights, comp = {}, set()
        ok = True
        for j, v in row.coefs:
            v = sgn * v
            col = model.columns[j]
            if col.kind == BINARY and col.lb == 0.0 and col.ub == 1.0:
                if v < 0:
                    # v x = v - v (1 - x): complement to get a positive weight
                    comp.add(j)
                    rhs -= v
                    weights[j] = -v
                else:
                    weights[j] = v
            else:
                low = min(v * col.lb, v * col.ub)
                if not math.isfinite(low):
                    ok = False
                    break
                rhs -= low
        if ok and len(weights) >= 2 and rhs >= 0 and sum(weights.values()) > rhs + 1e-9:
            yield weights, rhs, comp


def separate_cover_cuts(model: MipModel, x, max_cuts: int = 50, *,
                        prefix: str = "cover") -> list[Row]:
    """Separate cover cuts from every row that reads as a binary knapsack."""
    x = np.asarray(x, dtype=float)
    cuts: list[tuple[float, Row]] = []
    seen = set()
    for row in model.rows:
        for weights, rhs, comp in _knapsack_views(row, model):
            y = x.copy()
            for j in comp:
                y[j] = 1.0 - x[j]
            for cut in derive_cover_cuts(weights, rhs, y):
                cover = [j for j, _ in cut.coefs]
                key = (tuple(cover), tuple(sorted(comp & set(cover))))
                if key in seen:
                    continue
                seen.add(key)
                terms = tuple((j, -1.0 if j in comp else 1.0) for j in cover)
                new_rhs = cut.rhs - sum(1 for j in cover if j in comp)
                viol = _violation(cover, {j: y[j] for j in cover})
                cuts.append((viol, Row("", terms, "<=", float(new_rhs))))
    cuts.sort(key=lambda vc: -vc[0])
    out = []
    for k, (_, r) in enumerate(cuts[:max_cuts]):
        out.append(Row(f"{prefix}_{k + 1}", r.coefs, r.sense, r.rhs))
    return out


__all__ = ["derive_cover_cuts", "separate_cover_cuts"]
