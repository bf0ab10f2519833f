"""LP-based branch-and-bound with presolve, root cover cuts and rounding.

Search keeps a best-bound heap plus a LIFO dive stack. While no incumbent is
known every branching continues depth-first; afterwards a dive is started
every ``dive_period`` nodes. In parallel mode a coordinator thread hands
batches of node LPs to a worker pool; only the coordinator touches the
incumbent, the heap and the bound bookkeeping.
"""
from __future__ import annotations

import heapq
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from ..formulations import MipModel
from . import lp as lpmod
from .cuts import separate_cover_cuts
from .heuristics import rounding_heuristic
from .presolve import presolve

STATUSES = ("optimal", "feasible", "infeasible", "unbounded", "time_limit", "node_limit")


@dataclass(frozen=True)
class SolveOptions:
    time_limit: Optional[float] = None
    node_limit: Optional[int] = None
    relative_gap_target: float = 1e-6
    integrality_tolerance: float = 1e-6
    lp_tolerance: float = 1e-7
    enable_cover_cuts: bool = True
    enable_heuristics: bool = True
    enable_presolve: bool = True
    warm_start: Optional[Union[np.ndarray, Mapping[str, float]]] = None
    deterministic: bool = True
    worker_count: int = 1
    max_cuts: int = 50
    cut_rounds: int = 5
    dive_period: int = 10
    heuristic_period: int = 25

    def __post_init__(self):
        for name in ("relative_gap_target", "integrality_tolerance", "lp_tolerance"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.worker_count < 1:
            raise ValueError("worker_count must be at least 1")
        if self.time_limit is not None and self.time_limit < 0:
            raise ValueError("time_limit must be nonnegative")
        if self.node_limit is not None and self.node_limit < 0:
            raise ValueError("node_limit must be nonnegative")
        if self.max_cuts < 0 or self.cut_rounds < 0:
            raise ValueError("cut limits must be nonnegative")
        if self.dive_period < 1 or self.heuristic_period < 1:
            raise ValueError("periods must be at least 1")


@dataclass
class MipSolution:
    status: str
    values: Optional[np.ndarray]
    objective: float
    best_bound: float
    relative_gap: float
    node_count: int = 0
    wall_time: float = 0.0
    lp_iterations: int = 0
    cuts_added: int = 0

    @property
    def has_solution(self) -> bool:
        return self.values is not None


def relative_gap(objective: float, bound: float) -> float:
    if not math.isfinite(objective):
        return math.inf
    if not math.isfinite(bound):
        return math.inf
    return max(0.0, (objective - bound) / max(abs(objective), 1e-9))


@dataclass(order=True)
class _Node:
    bound: float
    seq: int
    depth: int = field(compare=False)
    lower: np.ndarray = field(compare=False, repr=False)
    upper: np.ndarray = field(compare=False, repr=False)
    basis: Optional[lpmod.Basis] = field(compare=False, default=None, repr=False)


def solve_lp(model: MipModel, *, tol: float = 1e-7,
             deadline: Optional[float] = None) -> lpmod.LpResult:
    """Solve the continuous relaxation of ``model``."""
    return lpmod.solve(lpmod.LpData.from_model(model), tol=tol, deadline=deadline)


def _warm_vector(model: MipModel, warm) -> np.ndarray:
    if isinstance(warm, Mapping):
        x = np.full(model.n_cols, np.nan)
        for name, v in warm.items():
            x[model.column_index(name)] = float(v)
        return x
    x = np.asarray(warm, dtype=float)
    if x.shape != (model.n_cols,):
        raise ValueError(f"warm start has {x.size} values for {model.n_cols} columns")
    return x


def _polish(model: MipModel, x: np.ndarray, tol: float,
            deadline: Optional[float]) -> Optional[np.ndarray]:
    """Fix the integer part of ``x`` and re-optimise the continuous part."""
    mask = model.integer_mask
    xi = np.round(x[mask])
    if np.any(np.isnan(xi)):
        return None
    lower, upper = model.lower.copy(), model.upper.copy()
    lower[mask] = xi
    upper[mask] = xi
    if np.any(lower > upper):
        return None
    res = lpmod.solve(lpmod.LpData.from_model(model), lower, upper, tol=tol, deadline=deadline)
    if res.status != "optimal":
        return None
    out = res.x.copy()
    out[mask] = xi
    return out if model.is_feasible(out) else None


class _Search:
    def __init__(self, model: MipModel, options: SolveOptions):
        self.original = model
        self.opt = options
        self.t0 = time.perf_counter()
        self.deadline = None if options.time_limit is None else self.t0 + options.time_limit
        self.incumbent: Optional[np.ndarray] = None
        self.inc_obj = math.inf
        self.pruned_min = math.inf
        self.nodes = 0
        self.iterations = 0
        self.cuts_added = 0
        self.incomplete = False
        self.seq = 0

    # -- incumbent handling (coordinator only) ----------------------------

    def offer(self, x_full: Optional[np.ndarray]) -> bool:
        if x_full is None or not self.original.is_feasible(x_full):
            return False
        x = x_full.copy()
        mask = self.original.integer_mask
        x[mask] = np.round(x[mask])
        obj = self.original.evaluate(x)
        if obj < self.inc_obj - 1e-12 * (1.0 + abs(obj)):
            self.incumbent, self.inc_obj = x, obj
            return True
        return False

    def cutoff(self) -> float:
        if self.incumbent is None:
            return math.inf
        return self.inc_obj - self.opt.relative_gap_target * max(abs(self.inc_obj), 1e-9)

    def timed_out(self) -> bool:
        return self.deadline is not None and time.perf_counter() > self.deadline

    # -- result ------------------------------------------------------------

    def finish(self, status: str, bound: float) -> MipSolution:
        values, obj = self.incumbent, self.inc_obj
        if values is not None:
            polished = _polish(self.original, values, self.opt.lp_tolerance, None)
            if polished is not None:
                pobj = self.original.evaluate(polished)
                if pobj < obj - 1e-12 * (1.0 + abs(obj)):
                    values, obj = polished, pobj
        if status in ("optimal", "infeasible") and values is None:
            status = "feasible" if self.incomplete else "infeasible"
            bound = bound if self.incomplete else math.inf
        elif status == "optimal" and self.incomplete:
            status = "feasible"
        bound = min(bound, obj)
        gap = relative_gap(obj, bound)
        return MipSolution(status, values, obj, bound, gap, self.nodes,
                           time.perf_counter() - self.t0, self.iterations, self.cuts_added)

    # -- main --------------------------------------------------------------

    def run(self) -> MipSolution:
        model, opt = self.original, self.opt
        if opt.warm_start is not None:
            w = _warm_vector(model, opt.warm_start)
            if not np.any(np.isnan(w)) and model.is_feasible(w):
                self.offer(w)
            self.offer(_polish(model, w, opt.lp_tolerance, self.deadline))

        if opt.enable_presolve:
            pres = presolve(model)
            if pres.status == "infeasible":
                return self.finish("infeasible", math.inf)
        else:
            pres = None
        work = model if pres is None else pres.model
        post = (lambda x: x) if pres is None else pres.postsolve

        if work.n_cols == 0:
            self.nodes = 1
            self.offer(post(np.zeros(0)))
            return self.finish("optimal", self.inc_obj)

        data = lpmod.LpData.from_model(work)
        if self.timed_out():
            return self.finish("time_limit", -math.inf)
        root = lpmod.solve(data, tol=opt.lp_tolerance, deadline=self.deadline)
        self.iterations += root.iterations
        self.nodes = 1
        if root.status == "time_limit":
            return self.finish("time_limit", -math.inf)
        if root.status == "infeasible":
            return self.finish("infeasible", math.inf)
        if root.status == "unbounded":
            return MipSolution("unbounded", None, -math.inf, -math.inf, math.inf, 1,
                               time.perf_counter() - self.t0, self.iterations, 0)
        if root.status != "optimal":
            self.incomplete = True
            return self.finish("feasible", -math.inf)

        mask = work.integer_mask
        tol_int = opt.integrality_tolerance
        x, bound, basis = root.x, root.objective, root.basis
        if opt.enable_cover_cuts and mask.any() and opt.max_cuts > 0:
            for rnd in range(opt.cut_rounds):
                budget = opt.max_cuts - self.cuts_added
                if budget <= 0 or self.timed_out():
                    break
                if not np.any(np.abs(x[mask] - np.round(x[mask])) > tol_int):
                    break
                cuts = separate_cover_cuts(work, x, budget, prefix=f"cover_r{rnd + 1}")
                if not cuts:
                    break
                old_m = work.n_rows
                work = work.with_rows(cuts)
                data = lpmod.LpData.from_model(work)
                basis = lpmod.extend_basis(basis, work.n_cols, old_m, work.n_rows)
                res = lpmod.solve(data, basis=basis, tol=opt.lp_tolerance, deadline=self.deadline)
                self.iterations += res.iterations
                self.cuts_added += len(cuts)
                if res.status != "optimal":
                    if res.status == "infeasible":
                        return self.finish("infeasible", math.inf)
                    return self.finish("time_limit", bound)
                x, bound, basis = res.x, max(bound, res.objective), res.basis

        if opt.enable_heuristics:
            h = rounding_heuristic(work, x, data=data, integrality_tolerance=tol_int,
                                   lp_tolerance=opt.lp_tolerance, deadline=self.deadline)
            if h is not None:
                self.offer(post(h))

        self.work, self.data, self.post = work, data, post
        rootnode = _Node(bound, 0, 0, work.lower.copy(), work.upper.copy(), basis)
        return self._search(rootnode, root_result=(x, bound, basis))

    def _solve_node(self, node: _Node):
        res = lpmod.solve(self.data, node.lower, node.upper, node.basis,
                          tol=self.opt.lp_tolerance, deadline=self.deadline)
        if res.status == "iteration_limit":
            res = lpmod.solve(self.data, node.lower, node.upper, None,
                              tol=self.opt.lp_tolerance, deadline=self.deadline)
        return res

    def _search(self, rootnode: _Node, root_result) -> MipSolution:
        opt = self.opt
        work = self.work
        mask = work.integer_mask
        int_idx = np.flatnonzero(mask)
        tol_int = opt.integrality_tolerance
        heap: list[_Node] = []
        dive: list[_Node] = []
        from_heap = 0
        parallel = opt.worker_count > 1 and not opt.deterministic
        pool = ThreadPoolExecutor(max_workers=opt.worker_count) if parallel else None

        def open_bound() -> float:
            b = min((n.bound for n in heap), default=math.inf)
            b = min(b, min((n.bound for n in dive), default=math.inf))
            return b

        def current_bound(extra=math.inf) -> float:
            return min(open_bound(), self.pruned_min, self.inc_obj, extra)

        def handle(node: _Node, x, obj, basis) -> list[_Node]:
            """Bookkeeping for a solved node; returns its children."""
            if obj >= self.cutoff():
                self.pruned_min = min(self.pruned_min, obj)
                return []
            frac = np.abs(x[int_idx] - np.round(x[int_idx]))
            if not np.any(frac > tol_int):
                cand = x.copy()
                cand[mask] = np.round(cand[mask])
                full = self.post(cand)
                if not self.original.is_feasible(full):
                    full = _polish(self.original, full, opt.lp_tolerance, self.deadline)
                if full is None:
                    # numerically integral but unusable; keep the bound honest
                    self.pruned_min = min(self.pruned_min, obj)
                    self.incomplete = True
                else:
                    self.offer(full)
                return []
            if opt.enable_heuristics and self.nodes % opt.heuristic_period == 0:
                h = rounding_heuristic(work, x, data=self.data, integrality_tolerance=tol_int,
                                       lp_tolerance=opt.lp_tolerance, deadline=self.deadline)
                if h is not None:
                    self.offer(self.post(h))
                    if obj >= self.cutoff():
                        self.pruned_min = min(self.pruned_min, obj)
                        return []
            score = np.round(np.minimum(frac, 1.0 - frac), 9)
            k = int(np.argmax(score))
            j = int(int_idx[k])
            v = x[j]
            down_u = node.upper.copy()
            down_u[j] = math.floor(v + tol_int)
            up_l = node.lower.copy()
            up_l[j] = math.ceil(v - tol_int)
            self.seq += 1
            down = _Node(obj, self.seq, node.depth + 1, node.lower, down_u, basis)
            self.seq += 1
            up = _Node(obj, self.seq, node.depth + 1, up_l, node.upper, basis)
            if self.incumbent is None:
                return [down, up]          # last entry is explored first
            return [up, down] if v - math.floor(v) < 0.5 else [down, up]

        x, bound, basis = root_result
        pending = [handle(rootnode, x, bound, basis)]
        diving = True
        status = "optimal"
        try:
            while True:
                for kids in pending:
                    if not kids:
                        continue
                    if diving or self.incumbent is None:
                        heapq.heappush(heap, kids[0])
                        dive.append(kids[1])
                    else:
                        for c in kids:
                            heapq.heappush(heap, c)
                pending = []
                batch: list[_Node] = []
                size = opt.worker_count if parallel else 1
                while len(batch) < size:
                    if dive:
                        node = dive.pop()
                    elif heap:
                        node = heapq.heappop(heap)
                        from_heap += 1
                        diving = self.incumbent is None or from_heap % opt.dive_period == 0
                    else:
                        break
                    if node.bound >= self.cutoff():
                        self.pruned_min = min(self.pruned_min, node.bound)
                        continue
                    batch.append(node)
                if not batch:
                    break
                if self.timed_out():
                    heap.extend(batch)
                    heapq.heapify(heap)
                    status = "time_limit"
                    break
                if opt.node_limit is not None and self.nodes >= opt.node_limit:
                    heap.extend(batch)
                    heapq.heapify(heap)
                    status = "node_limit"
                    break
                if pool is not None and len(batch) > 1:
                    results = list(pool.map(self._solve_node, batch))
                else:
                    results = [self._solve_node(n) for n in batch]
                for node, res in zip(batch, results):
                    self.nodes += 1
                    self.iterations += res.iterations
                    if res.status == "infeasible":
                        continue
                    if res.status == "time_limit":
                        heapq.heappush(heap, node)
                        status = "time_limit"
                        continue
                    if res.status != "optimal":
                        self.pruned_min = min(self.pruned_min, node.bound)
                        self.incomplete = True
                        continue
                    obj = max(res.objective, node.bound)
                    pending.append(handle(node, res.x, obj, res.basis))
                if status == "time_limit":
                    break
        finally:
            if pool is not None:
                pool.shutdown(wait=True)

        for kids in pending:
            for c in kids:
                heapq.heappush(heap, c)
        if status == "optimal":
            return self.finish("optimal", min(self.pruned_min, self.inc_obj))
        return self.finish(status, current_bound())


def branch_and_bound(model: MipModel, options: Optional[SolveOptions] = None) -> MipSolution:
    """Minimise ``model``; see :class:`SolveOptions` for the controls."""
    return _Search(model, options or SolveOptions()).run()


solve = branch_and_bound

__all__ = ["SolveOptions", "MipSolution", "branch_and_bound", "solve", "solve_lp",
           "relative_gap", "STATUSES"]
