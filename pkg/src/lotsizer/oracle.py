"""Exact reference solvers used to validate the MIP stack.

``wagner_whitin_dp`` runs the single-product recursion over regeneration
points: an optimal plan only produces when the entering stock is zero, so
a lot produced in period i covers the net demand of periods i..j exactly.
The two enumerators are deliberately naive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    QTY_TOL,
    DlsInstance,
    Schedule,
    changeovers_from_flags,
    evaluate_cost,
    schedule_from_quantities,
)

HOLDING_CONVENTIONS = ("end_of_period", "entering")


@dataclass(frozen=True)
class DpTable:
    values: np.ndarray        # values[j]: cheapest cost of covering periods 1..j
    lot_start: np.ndarray     # start period of the lot covering j (-1: no lot needed)


@dataclass(frozen=True)
class OracleResult:
    cost: float
    schedule: Schedule | None
    feasible: bool = True
    table: DpTable | None = None


def _net_demand(demand: np.ndarray, stock: float):
    """Demand left after serving from initial stock, and the stock left each period."""
    net = np.empty_like(demand)
    left = np.empty_like(demand)
    for t, d in enumerate(demand):
        use = min(stock, d)
        stock -= use
        net[t] = d - use
        left[t] = stock
    return net, left


def _single_product_data(instance: DlsInstance):
    if instance.n_products != 1:
        raise ValueError("the single-product oracle needs exactly one product")
    if instance.shortage_cost is not None or instance.initial_shortage[0] > 0:
        raise ValueError("the single-product oracle does not model shortages")
    if instance.quantity_mode != "continuous":
        raise ValueError("the single-product oracle needs continuous quantities")
    hold = instance.holding_matrix[:, 0]
    setup = instance.setup_matrix[:, 0]
    net, left = _net_demand(instance.demand[:, 0], float(instance.initial_inventory[0]))
    return hold, setup, net, left


def _residual_holding(hold, left, initial, convention) -> float:
    if convention == "end_of_period":
        return float(hold @ left)
    # entering stock of period t is charged at the previous period's rate;
    # the rate before period 1 is taken equal to period 1's
    entering = np.concatenate([[initial], left[:-1]])
    rates = np.concatenate([[hold[0]], hold[:-1]])
    return float(rates @ entering)


def wagner_whitin_dp(instance: DlsInstance, *,
                     holding_convention: str = "end_of_period") -> OracleResult:
    """Minimum-cost single-product plan (setup charged per producing period).

    Ties between plans of equal cost go to the plan whose last lot starts
    earliest, then to skipping production in zero-demand periods.
    """
    if holding_convention not in HOLDING_CONVENTIONS:
        raise ValueError(f"unknown holding convention {holding_convention!r}")
    hold, setup, net, left = _single_product_data(instance)
    n = net.size
    # cum[k] = holding rate accumulated over periods 0..k-1
    cum = np.concatenate([[0.0], np.cumsum(hold)])
    F = np.zeros(n + 1)
    start = np.full(n + 1, -1, dtype=int)
    for j in range(1, n + 1):
        best, arg = np.inf, -1
        if net[j - 1] <= QTY_TOL:
            best = F[j - 1]
        for i in range(1, j + 1):
            block = net[i - 1:j]
            if block.sum() <= QTY_TOL:
                continue
            carry = float(block @ (cum[i - 1:j] - cum[i - 1]))
            val = F[i - 1] + setup[i - 1] + carry
            if val < best - 1e-9 * (1.0 + abs(val)):
                best, arg = val, i
        F[j] = best
        start[j] = arg
    q = np.zeros(n)
    j = n
    while j > 0:
        i = start[j]
        if i < 0:
            j -= 1
            continue
        q[i - 1] = net[i - 1:j].sum()
        j = i - 1
    schedule = schedule_from_quantities(instance, q[:, None], setup_rule="per_period")
    cost = float(F[n]) + _residual_holding(hold, left, float(instance.initial_inventory[0]),
                                            holding_convention)
    return OracleResult(cost, schedule, True, DpTable(F.copy(), start.copy()))


def brute_force_single_product(instance: DlsInstance, *, max_periods: int = 20,
                               chunk: int = 1 << 14) -> OracleResult:
    """Enumerate all 2^n setup patterns; each lot covers demand until the next setup."""
    hold, setup, net, left = _single_product_data(instance)
    n = net.size
    if n > max_periods:
        raise ValueError(f"{n} periods exceeds the enumeration cap of {max_periods}")
    cum = np.concatenate([[0.0], np.cumsum(hold)])[:n]
    idx = np.arange(n)
    best_cost, best_pat = np.inf, None
    total = 1 << n
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        pats = ((codes[:, None] >> idx[None, :]) & 1).astype(bool)
        last = np.maximum.accumulate(np.where(pats, idx[None, :], -1), axis=1)
        uncovered = (net[None, :] > QTY_TOL) & (last < 0)
        ok = ~uncovered.any(axis=1)
        if not ok.any():
            continue
        safe = np.maximum(last, 0)
        carry = (net[None, :] * (cum[None, :] - cum[safe])).sum(axis=1)
        cost = carry + pats.astype(float) @ setup
        cost = np.where(ok, cost, np.inf)
        k = int(np.argmin(cost))
        if np.isfinite(cost[k]) and cost[k] < best_cost - 1e-9 * (1.0 + abs(cost[k])):
            best_cost, best_pat = float(cost[k]), pats[k]
    if best_pat is None:
        return OracleResult(np.inf, None, False)
    q = np.zeros(n)
    last = np.maximum.accumulate(np.where(best_pat, idx, -1))
    for t in range(n):
        if last[t] >= 0:
            q[last[t]] += net[t]
    schedule = schedule_from_quantities(instance, q[:, None], setup_rule="per_period")
    cost = evaluate_cost(instance, schedule).total
    return OracleResult(cost, schedule, True)


def brute_force_batch_schedules(instance: DlsInstance, *, max_cells: int = 16,
                                chunk: int = 1 << 12) -> OracleResult:
    """Enumerate every production-flag matrix of a single-batch instance.

    Quantities follow from the batch sizes, changeovers from run starts,
    and each candidate is screened against the product-count, production
    and changeover limits and the shortage rule.
    """
    if instance.quantity_mode != "single-batch":
        raise ValueError("brute_force_batch_schedules needs single-batch mode")
    n, m = instance.demand.shape
    cells = n * m
    if cells > max_cells:
        raise ValueError(f"{cells} cells exceeds the enumeration cap of {max_cells}")
    bsz = instance.batch_size
    hold, setup = instance.holding_matrix, instance.setup_matrix
    short_cost = instance.shortage_matrix
    net0 = instance.initial_inventory - instance.initial_shortage
    bits = np.arange(cells)
    best_cost, best_x = np.inf, None
    total = 1 << cells
    for lo in range(0, total, chunk):
        codes = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
        X = ((codes[:, None] >> bits[None, :]) & 1).astype(float).reshape(-1, n, m)
        Q = X * bsz[None, None, :]
        net = net0[None, None, :] + np.cumsum(Q - instance.demand[None], axis=1)
        inv = np.maximum(net, 0.0)
        short = np.maximum(-net, 0.0)
        prev = np.concatenate([np.zeros((X.shape[0], 1, m)), X[:, :-1]], axis=1)
        W = X * (1.0 - prev)
        count = X.sum(axis=2)
        if instance.exactly_one_product:
            ok = np.all(count == 1, axis=1)
        else:
            ok = np.all(count <= instance.product_limit, axis=1)
        if instance.production_limit is not None:
            tot = Q.sum(axis=2)
            ok &= np.all(tot <= instance.production_limit + QTY_TOL * (1 + tot), axis=1)
        if instance.changeover_limit is not None:
            ok &= np.all(W.sum(axis=2) <= instance.changeover_limit[None, :] + QTY_TOL, axis=1)
        cost = (inv * hold[None]).sum(axis=(1, 2)) + (W * setup[None]).sum(axis=(1, 2))
        if short_cost is None:
            ok &= np.all(short <= QTY_TOL, axis=(1, 2))
        else:
            cost = cost + (short * short_cost[None]).sum(axis=(1, 2))
        cost = np.where(ok, cost, np.inf)
        k = int(np.argmin(cost))
        if np.isfinite(cost[k]) and cost[k] < best_cost - 1e-9 * (1.0 + abs(cost[k])):
            best_cost, best_x = float(cost[k]), X[k].copy()
    if best_x is None:
        return OracleResult(np.inf, None, False)
    Q = best_x * bsz[None, :]
    base = schedule_from_quantities(instance, Q, setup_rule="changeover")
    schedule = Schedule(Q, best_x, changeovers_from_flags(best_x), base.inventory, base.shortage)
    return OracleResult(evaluate_cost(instance, schedule).total, schedule, True)


__all__ = ["wagner_whitin_dp", "brute_force_single_product", "brute_force_batch_schedules",
           "OracleResult", "DpTable", "HOLDING_CONVENTIONS"]
