"""Benchmark suites and their CSV / text reports."""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import astuple, dataclass, fields
from importlib import resources
from typing import Optional

import numpy as np

from .formats import format_number, parse_instance
from .formulations import BUILDERS, build_elsp_bomberger
from .model import DlsInstance, ElspInstance
from .oracle import brute_force_single_product, wagner_whitin_dp
from .solver import MipSolution, SolveOptions, branch_and_bound

SUITES = ("wagner", "bomberger", "synthetic")
BOMBERGER_PERIODS = (120.0, 80.0, 40.0, 20.0)
BOMBERGER_STRETCH = (10.0, 5.0)

# cost structure of the food-manufacturing products, ordered by total demand:
# (name, holding, setup, shortage, batch size, demand share in %)
FOOD_PRODUCTS = (
    ("G02SN", 2.40, 7900.0, 7.60, 5000.0, 37.7),
    ("G01SL", 1.30, 5600.0, 7.20, 4000.0, 19.8),
    ("O08SN", 3.00, 7700.0, 8.10, 3800.0, 19.7),
    ("O06MN", 1.60, 7100.0, 8.60, 1300.0, 6.9),
    ("G05MM", 1.10, 7000.0, 4.60, 1100.0, 5.9),
    ("G07ML", 2.30, 5600.0, 7.30, 700.0, 3.8),
    ("G03MH", 1.50, 5600.0, 6.60, 700.0, 3.8),
    ("O09LN", 2.30, 5200.0, 6.80, 300.0, 1.8),
    ("R10LN", 2.20, 8300.0, 8.30, 100.0, 0.6),
    ("R04TN", 2.20, 6500.0, 8.10, 100.0, 0.03),
)
WEEKLY_CAPACITY = 5000.0
TARGET_LOAD = 0.7


@dataclass(frozen=True)
class BenchRow:
    instance: str
    n: int
    m: int
    formulation: str
    status: str
    objective: float
    bound: float
    gap: float
    nodes: int
    wall_seconds: float


COLUMNS = tuple(f.name for f in fields(BenchRow))
TIMING_COLUMNS = ("wall_seconds",)


def _cell(v, timing: bool = False) -> str:
    if isinstance(v, float):
        if timing:
            return f"{v:.3f}"
        if not math.isfinite(v):
            return "inf" if v > 0 else "-inf"
        return format_number(round(v, 6))
    return str(v)


@dataclass
class BenchReport:
    suite: str
    rows: list

    def to_csv(self, *, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = [c for c in COLUMNS if timing or c not in TIMING_COLUMNS]
        w.writerow(cols)
        for r in self.rows:
            d = dict(zip(COLUMNS, astuple(r)))
            w.writerow([_cell(d[c], c in TIMING_COLUMNS) for c in cols])
        return buf.getvalue()

    def to_table(self, *, timing: bool = True) -> str:
        cols = [c for c in COLUMNS if timing or c not in TIMING_COLUMNS]
        body = []
        for r in self.rows:
            d = dict(zip(COLUMNS, astuple(r)))
            body.append([_cell(d[c], c in TIMING_COLUMNS) for c in cols])
        widths = [max(len(c), *(len(row[k]) for row in body)) if body else len(c)
                  for k, c in enumerate(cols)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        lines.append("  ".join("-" * w for w in widths))
        for row in body:
            lines.append("  ".join(v.rjust(w) if k > 0 else v.ljust(w)
                                   for k, (v, w) in enumerate(zip(row, widths))))
        return "\n".join(lines) + "\n"

    def solved_count(self) -> tuple[int, int]:
        mip = [r for r in self.rows if r.formulation not in ("dp", "brute_force")]
        return sum(r.status == "optimal" for r in mip), len(mip)


def bundled_text(name: str) -> str:
    return resources.files("lotsizer").joinpath("data", name).read_text(encoding="utf-8")


def bundled_instance(name: str):
    return parse_instance(bundled_text(name if name.endswith(".json") else name + ".json"))


def default_formulation(instance) -> str:
    if isinstance(instance, ElspInstance):
        return "elsp"
    simple = (instance.shortage_cost is None and instance.quantity_mode == "continuous"
              and instance.max_products_per_period is None
              and instance.changeover_limit is None and instance.min_quantity is None
              and not np.any(instance.initial_shortage > 0))
    common = instance.common_setup_cost is not None and np.any(instance.common_setup_cost > 0)
    if simple and common:
        return "dlsmpcs"
    if simple and instance.n_products == 1 and instance.production_limit is None:
        return "dls1p"
    if simple:
        return "dlsmp"
    return "general"


def _mip_row(label: str, instance, formulation: str, sol: MipSolution, n: int, m: int,
             scale: float = 1.0) -> BenchRow:
    return BenchRow(label, n, m, formulation, sol.status, sol.objective / scale,
                    sol.best_bound / scale, sol.relative_gap, sol.node_count, sol.wall_time)


def run_wagner(options: SolveOptions) -> BenchReport:
    rows = []
    for label in ("wagner_whitin", "steady_state"):
        inst = bundled_instance(label)
        n, m = inst.demand.shape
        model, _ = BUILDERS["dls1p"](inst)
        rows.append(_mip_row(label, inst, "dls1p", branch_and_bound(model, options), n, m))
        for name, fn in (("dp", wagner_whitin_dp), ("brute_force", brute_force_single_product)):
            t0 = time.perf_counter()
            res = fn(inst)
            dt = time.perf_counter() - t0
            rows.append(BenchRow(label, n, m, name, "optimal", res.cost, res.cost, 0.0, 0, dt))
    return BenchReport("wagner", rows)


def bomberger_case(tau: float, base: Optional[ElspInstance] = None) -> ElspInstance:
    """The bundled ELSP data at period length ``tau`` with the matching start stock.

    Periods of 20 days start with half a period of demand in stock. The short
    periods (below 20 days) start with five days of demand and use a two-hour
    minimum run.
    """
    base = base or bundled_instance("bomberger")
    d = base.demand_rate
    if tau < 20:
        return base.replace(period_length=tau, initial_inventory=5.0 * d, min_run_hours=2.0,
                            name=f"bomberger_tau{tau:g}")
    if tau == 20:
        return base.replace(period_length=tau, initial_inventory=d * tau / 2,
                            name=f"bomberger_tau{tau:g}")
    return base.replace(period_length=tau, initial_inventory=np.zeros_like(d),
                        name=f"bomberger_tau{tau:g}")


def run_bomberger(options: SolveOptions, *, stretch: bool = False) -> BenchReport:
    rows = []
    taus = BOMBERGER_PERIODS + (BOMBERGER_STRETCH if stretch else ())
    for tau in taus:
        inst = bomberger_case(tau)
        model, _ = build_elsp_bomberger(inst)
        sol = branch_and_bound(model, options)
        rows.append(_mip_row(inst.name, inst, "elsp", sol, inst.n_periods, inst.n_products,
                             scale=inst.horizon_days))
    return BenchReport("bomberger", rows)


def synthetic_demand(n_periods: int, n_products: int, seed: int = 0) -> np.ndarray:
    """Seeded weekly demand: uniform within +-50% of each product's mean.

    Means split ``TARGET_LOAD`` of the weekly capacity in proportion to the
    products' demand shares. Each week draws all ten products, so shorter
    horizons see the leading weeks of the same series.
    """
    rng = np.random.default_rng(seed)
    shares = np.array([p[5] for p in FOOD_PRODUCTS[:n_products]])
    means = TARGET_LOAD * WEEKLY_CAPACITY * shares / shares.sum()
    u = rng.uniform(0.5, 1.5, size=(n_periods, len(FOOD_PRODUCTS)))
    return np.round(means[None, :] * u[:, :n_products])


def synthetic_instance(n_periods: int, n_products: int, seed: int = 0) -> DlsInstance:
    if not 1 <= n_products <= len(FOOD_PRODUCTS):
        raise ValueError(f"n_products must be in 1..{len(FOOD_PRODUCTS)}")
    spec = FOOD_PRODUCTS[:n_products]
    return DlsInstance(
        demand=synthetic_demand(n_periods, n_products, seed),
        holding_cost=[p[1] for p in spec],
        setup_cost=[p[2] for p in spec],
        shortage_cost=[p[3] for p in spec],
        batch_size=[p[4] for p in spec],
        production_limit=WEEKLY_CAPACITY,
        quantity_mode="multi-batch",
        name=f"synthetic_{n_periods}x{n_products}",
    )


def parse_grid(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        a, b = int(a), int(b)
    except ValueError:
        raise ValueError(f"grid must look like 3x2, got {text!r}") from None
    if a < 1 or b < 1:
        raise ValueError("grid dimensions must be positive")
    return a, b


def run_synthetic(options: SolveOptions, *, grid: tuple[int, int] = (2, 2),
                  period_step: int = 10, product_step: int = 1, seed: int = 0) -> BenchReport:
    rows = []
    for i in range(grid[0]):
        for k in range(grid[1]):
            n = period_step * (i + 1)
            m = min(product_step * (k + 1), len(FOOD_PRODUCTS))
            inst = synthetic_instance(n, m, seed)
            model, _ = BUILDERS["general"](inst)
            rows.append(_mip_row(inst.name, inst, "general", branch_and_bound(model, options),
                                 n, m))
    return BenchReport("synthetic", rows)


def run_suite(suite: str, options: SolveOptions, **kw) -> BenchReport:
    if suite == "wagner":
        return run_wagner(options)
    if suite == "bomberger":
        return run_bomberger(options, stretch=kw.get("stretch", False))
    if suite == "synthetic":
        return run_synthetic(options, grid=kw.get("grid", (2, 2)),
                             period_step=kw.get("period_step", 10),
                             product_step=kw.get("product_step", 1), seed=kw.get("seed", 0))
    raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
