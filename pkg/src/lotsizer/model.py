"""Problem and schedule data model, cost evaluation and closed-form helpers.

Indices are 0-based everywhere in the Python API (period ``t``, product
``p``); names written to files and exports are 1-based.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

QUANTITY_MODES = ("continuous", "single-batch", "multi-batch")

QTY_TOL = 1e-6
MONEY_RTOL = 1e-9


class InstanceError(ValueError):
    """Invalid instance data.

    ``code`` is a stable diagnostic identifier, ``field`` names the
    offending field (with an index suffix where useful).
    """

    def __init__(self, code: str, field: str, message: str):
        super().__init__(f"{code} [{field}]: {message}")
        self.code = code
        self.field = field
        self.message = message


class InfeasibleScheduleError(ValueError):
    pass


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def _check_nonneg(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise InstanceError("E_VALUE", name, "values must be finite")
    if np.any(arr < 0):
        idx = tuple(int(i) for i in np.argwhere(arr < 0)[0])
        code = "E_NEGATIVE_COST" if name.endswith("_cost") else "E_NEGATIVE"
        raise InstanceError(code, f"{name}{list(idx)}", "must be >= 0")


def _per_product(name: str, arr: np.ndarray, n: int, m: int) -> None:
    """Cost arrays may be given per product (m,) or per period and product (n, m)."""
    if arr.shape not in ((m,), (n, m)):
        raise InstanceError(
            "E_DIMENSION", name, f"expected shape ({m},) or ({n}, {m}), got {arr.shape}")


def _arrays_equal(a, b) -> bool:
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        a = np.asarray(a)
        b = np.asarray(b)
        return a.shape == b.shape and bool(np.array_equal(a, b))
    return a == b


class _ArrayEq:
    """Value equality for frozen dataclasses holding numpy arrays."""

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return all(_arrays_equal(getattr(self, f.name), getattr(other, f.name))
                   for f in fields(self))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class DlsInstance(_ArrayEq):
    """A period-indexed multi-product dynamic lot-sizing problem.

    ``shortage_cost=None`` forbids backorders. ``common_setup_cost`` is a
    scalar or a per-period vector and is only used by the joint
    (common-setup) formulation. ``max_products_per_period=None`` means no
    product-count limit beyond the number of products.
    """

    demand: np.ndarray
    holding_cost: np.ndarray
    setup_cost: np.ndarray
    shortage_cost: Optional[np.ndarray] = None
    common_setup_cost: Optional[np.ndarray] = None
    batch_size: Optional[np.ndarray] = None
    production_limit: Optional[float] = None
    max_products_per_period: Optional[int] = None
    changeover_limit: Optional[np.ndarray] = None
    initial_inventory: Optional[np.ndarray] = None
    initial_shortage: Optional[np.ndarray] = None
    quantity_mode: str = "continuous"
    min_quantity: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        demand = np.array(self.demand, dtype=float)
        if demand.ndim == 1:
            demand = demand[:, None]
        if demand.ndim != 2 or demand.shape[0] < 1 or demand.shape[1] < 1:
            raise InstanceError("E_DIMENSION", "demand", "must be a non-empty n x m matrix")
        n, m = demand.shape
        _check_nonneg("demand", demand)
        set_("demand", _frozen(demand))

        for key in ("holding_cost", "setup_cost", "shortage_cost"):
            val = getattr(self, key)
            if val is None:
                if key != "shortage_cost":
                    raise InstanceError("E_MISSING", key, "required")
                continue
            arr = np.array(val, dtype=float)
            if arr.ndim == 0:
                arr = np.full(m, float(arr))
            _per_product(key, arr, n, m)
            _check_nonneg(key, arr)
            set_(key, _frozen(arr))

        if self.common_setup_cost is not None:
            arr = np.array(self.common_setup_cost, dtype=float)
            if arr.shape not in ((), (n,)):
                raise InstanceError("E_DIMENSION", "common_setup_cost",
                                    f"expected scalar or ({n},), got {arr.shape}")
            _check_nonneg("common_setup_cost", arr)
            set_("common_setup_cost", _frozen(arr))

        for key in ("batch_size", "min_quantity", "initial_inventory", "initial_shortage"):
            val = getattr(self, key)
            if val is None:
                if key.startswith("initial_"):
                    set_(key, _frozen(np.zeros(m)))
                continue
            arr = np.array(val, dtype=float)
            if arr.ndim == 0:
                arr = np.full(m, float(arr))
            if arr.shape != (m,):
                raise InstanceError("E_DIMENSION", key, f"expected ({m},), got {arr.shape}")
            _check_nonneg(key, arr)
            set_(key, _frozen(arr))

        both = (self.initial_inventory > 0) & (self.initial_shortage > 0)
        if np.any(both):
            p = int(np.argmax(both))
            raise InstanceError("E_INVARIANT", f"initial_inventory[{p}]",
                                "initial inventory and shortage both positive")

        if self.quantity_mode not in QUANTITY_MODES:
            raise InstanceError("E_VALUE", "quantity_mode",
                                f"must be one of {QUANTITY_MODES}")
        if self.quantity_mode != "continuous":
            if self.batch_size is None:
                raise InstanceError("E_MISSING", "batch_size",
                                    f"required in {self.quantity_mode} mode")
        if self.batch_size is not None and np.any(self.batch_size <= 0):
            p = int(np.argmax(self.batch_size <= 0))
            raise InstanceError("E_VALUE", f"batch_size[{p}]", "must be > 0")

        if self.production_limit is not None:
            q = float(self.production_limit)
            if not math.isfinite(q) or q < 0:
                raise InstanceError("E_NEGATIVE", "production_limit", "must be finite and >= 0")
            set_("production_limit", q)
            if self.min_quantity is not None and np.any(self.min_quantity > q):
                raise InstanceError("E_INVARIANT", "min_quantity",
                                    "min_quantity exceeds production_limit")

        if self.max_products_per_period is not None:
            x = int(self.max_products_per_period)
            if x != self.max_products_per_period or x < 1:
                raise InstanceError("E_VALUE", "max_products_per_period",
                                    "must be an integer >= 1")
            set_("max_products_per_period", x)

        if self.changeover_limit is not None:
            arr = np.array(self.changeover_limit, dtype=float)
            if arr.ndim == 0:
                arr = np.full(n, float(arr))
            if arr.shape != (n,):
                raise InstanceError("E_DIMENSION", "changeover_limit",
                                    f"expected ({n},), got {arr.shape}")
            _check_nonneg("changeover_limit", arr)
            set_("changeover_limit", _frozen(arr))

    @property
    def n_periods(self) -> int:
        return self.demand.shape[0]

    @property
    def n_products(self) -> int:
        return self.demand.shape[1]

    def _matrix(self, arr):
        return np.broadcast_to(arr, (self.n_periods, self.n_products))

    @property
    def holding_matrix(self) -> np.ndarray:
        return self._matrix(self.holding_cost)

    @property
    def setup_matrix(self) -> np.ndarray:
        return self._matrix(self.setup_cost)

    @property
    def shortage_matrix(self) -> Optional[np.ndarray]:
        return None if self.shortage_cost is None else self._matrix(self.shortage_cost)

    @property
    def common_setup_vector(self) -> np.ndarray:
        if self.common_setup_cost is None:
            return np.zeros(self.n_periods)
        return np.broadcast_to(self.common_setup_cost, (self.n_periods,))

    @property
    def product_limit(self) -> int:
        if self.max_products_per_period is None:
            return self.n_products
        return min(self.max_products_per_period, self.n_products)

    @property
    def exactly_one_product(self) -> bool:
        """Single-product-per-period ELSP rule: one batch is produced every period."""
        return self.max_products_per_period == 1 and self.quantity_mode == "single-batch"

    def replace(self, **changes) -> "DlsInstance":
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class ElspInstance(_ArrayEq):
    """Rate-based economic lot scheduling problem (Bomberger style).

    Rates are per day, ``setup_time`` is in hours and ``period_length`` and
    ``horizon_days`` are in days.
    """

    setup_cost: np.ndarray
    piece_cost: np.ndarray
    production_rate: np.ndarray
    demand_rate: np.ndarray
    setup_time: np.ndarray
    period_length: float
    horizon_days: float = 240.0
    holding_fraction: float = 0.10
    hours_per_day: float = 8.0
    min_run_hours: float = 1.0
    initial_inventory: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        set_ = lambda k, v: object.__setattr__(self, k, v)  # noqa: E731
        arrays = {}
        for key in ("setup_cost", "piece_cost", "production_rate", "demand_rate", "setup_time"):
            arr = np.array(getattr(self, key), dtype=float)
            if arr.ndim != 1 or arr.size == 0:
                raise InstanceError("E_DIMENSION", key, "must be a non-empty vector")
            arrays[key] = arr
        m = arrays["setup_cost"].size
        for key, arr in arrays.items():
            if arr.shape != (m,):
                raise InstanceError("E_DIMENSION", key, f"expected ({m},), got {arr.shape}")
            _check_nonneg(key, arr)
            set_(key, _frozen(arr))
        if np.any(self.production_rate <= 0):
            p = int(np.argmax(self.production_rate <= 0))
            raise InstanceError("E_VALUE", f"production_rate[{p}]", "must be > 0")
        inv = np.zeros(m) if self.initial_inventory is None else np.array(
            self.initial_inventory, dtype=float)
        if inv.ndim == 0:
            inv = np.full(m, float(inv))
        if inv.shape != (m,):
            raise InstanceError("E_DIMENSION", "initial_inventory", f"expected ({m},)")
        _check_nonneg("initial_inventory", inv)
        set_("initial_inventory", _frozen(inv))
        for key in ("period_length", "horizon_days", "holding_fraction", "hours_per_day",
                    "min_run_hours"):
            v = float(getattr(self, key))
            if not math.isfinite(v) or v < 0:
                raise InstanceError("E_NEGATIVE", key, "must be finite and >= 0")
            set_(key, v)
        if self.period_length <= 0:
            raise InstanceError("E_VALUE", "period_length", "must be > 0")
        if self.hours_per_day <= 0:
            raise InstanceError("E_VALUE", "hours_per_day", "must be > 0")

    @property
    def n_products(self) -> int:
        return self.setup_cost.size

    @property
    def n_periods(self) -> int:
        """Number of periods ``y / tau``; raises if the horizon is not a multiple."""
        ratio = self.horizon_days / self.period_length
        n = round(ratio)
        if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, ratio):
            raise InstanceError("E_INVARIANT", "period_length",
                                f"horizon {self.horizon_days:g} is not a multiple of "
                                f"period length {self.period_length:g}")
        return int(n)

    @property
    def setup_days(self) -> np.ndarray:
        return self.setup_time / self.hours_per_day

    def with_period(self, period_length: float, initial_inventory=None) -> "ElspInstance":
        changes = {"period_length": float(period_length)}
        if initial_inventory is not None:
            changes["initial_inventory"] = initial_inventory
        return replace(self, **changes)

    def replace(self, **changes) -> "ElspInstance":
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class Schedule(_ArrayEq):
    """Production plan matrices, all of shape (n_periods, n_products).

    ``produce`` holds binary production flags, batch counts in multi-batch
    mode, or production days for ELSP schedules.
    """

    quantities: np.ndarray
    produce: np.ndarray
    changeovers: np.ndarray
    inventory: np.ndarray
    shortage: np.ndarray

    def __post_init__(self):
        shape = np.shape(self.quantities)
        for f in fields(self):
            arr = np.array(getattr(self, f.name), dtype=float)
            if arr.ndim != 2 or arr.shape != shape:
                raise ValueError(f"{f.name}: expected shape {shape}, got {arr.shape}")
            object.__setattr__(self, f.name, _frozen(arr))

    @property
    def shape(self):
        return self.quantities.shape

    @classmethod
    def empty(cls, n: int, m: int) -> "Schedule":
        z = np.zeros((n, m))
        return cls(z, z, z, z, z)


@dataclass(frozen=True)
class CostBreakdown:
    holding: float
    shortage: float
    setup: float
    common_setup: float
    total: float

    def as_dict(self) -> dict:
        return {"holding": self.holding, "shortage": self.shortage, "setup": self.setup,
                "common_setup": self.common_setup, "total": self.total}


@dataclass(frozen=True)
class Violation:
    constraint: str
    period: Optional[int]
    product: Optional[int]
    lhs: float
    rhs: float

    def __str__(self):
        where = []
        if self.period is not None:
            where.append(f"t={self.period + 1}")
        if self.product is not None:
            where.append(f"p={self.product + 1}")
        return f"{self.constraint}({', '.join(where)}): lhs={self.lhs:.10g} rhs={self.rhs:.10g}"


@dataclass(frozen=True, eq=False)
class FeasibilityReport(_ArrayEq):
    utilization: np.ndarray
    max_utilization: float
    max_utilization_product: int
    demand_time_days: float
    setup_time_days: float
    total_required_days: float
    period_days: float
    feasible: bool
    reason: str = ""


# ---------------------------------------------------------------------------
# inventory and cost


def propagate_inventory(instance: DlsInstance, quantities) -> tuple[np.ndarray, np.ndarray]:
    """Roll the balance equation forward and split the net position.

    Returns ``(I, S)`` with ``I = max(net, 0)`` and ``S = max(-net, 0)``.
    """
    q = np.asarray(quantities, dtype=float)
    if q.shape != instance.demand.shape:
        raise ValueError(f"quantities shape {q.shape} != demand shape {instance.demand.shape}")
    net0 = instance.initial_inventory - instance.initial_shortage
    net = net0 + np.cumsum(q - instance.demand, axis=0)
    inv = np.maximum(net, 0.0)
    short = np.maximum(-net, 0.0)
    return inv, short


def schedule_from_quantities(instance: DlsInstance, quantities, *,
                             setup_rule: str = "per_period") -> Schedule:
    """Build a consistent schedule from production quantities alone."""
    q = np.asarray(quantities, dtype=float)
    inv, short = propagate_inventory(instance, q)
    flags = (q > QTY_TOL).astype(float)
    if setup_rule == "changeover":
        omega = changeovers_from_flags(flags)
    else:
        omega = flags.copy()
    if instance.quantity_mode == "multi-batch" and instance.batch_size is not None:
        produce = np.round(q / instance.batch_size)
    else:
        produce = flags
    return Schedule(q, produce, omega, inv, short)


def changeovers_from_flags(flags) -> np.ndarray:
    """Changeover matrix from production indicators: start of each run."""
    x = (np.asarray(flags, dtype=float) > 0.5).astype(float)
    prev = np.vstack([np.zeros((1, x.shape[1])), x[:-1]])
    return x * (1.0 - prev)


def balance_residual(instance: DlsInstance, schedule: Schedule) -> np.ndarray:
    """Residual of (I_{t-1}-S_{t-1}) + q - d - (I_t - S_t) at every cell."""
    pos = schedule.inventory - schedule.shortage
    prev = np.vstack([(instance.initial_inventory - instance.initial_shortage)[None, :],
                      pos[:-1]])
    return prev + schedule.quantities - instance.demand - pos


def evaluate_cost(instance: DlsInstance, schedule: Schedule) -> CostBreakdown:
    """Holding, shortage, setup and common-setup cost of a balanced schedule."""
    if schedule.shape != instance.demand.shape:
        raise ValueError(f"schedule shape {schedule.shape} != {instance.demand.shape}")
    resid = balance_residual(instance, schedule)
    bad = np.abs(resid) > QTY_TOL * (1.0 + np.abs(instance.demand))
    if np.any(bad):
        t, p = (int(i) for i in np.argwhere(bad)[0])
        raise ValueError(f"inventory balance violated at t={t + 1}, p={p + 1} "
                         f"(residual {resid[t, p]:.6g})")
    if instance.shortage_cost is None and np.any(schedule.shortage > QTY_TOL):
        t, p = (int(i) for i in np.argwhere(schedule.shortage > QTY_TOL)[0])
        raise InfeasibleScheduleError(
            f"shortage {schedule.shortage[t, p]:.6g} at t={t + 1}, p={p + 1} "
            "but shortages are not permitted")
    holding = float(np.sum(instance.holding_matrix * schedule.inventory))
    shortage = 0.0
    if instance.shortage_cost is not None:
        shortage = float(np.sum(instance.shortage_matrix * schedule.shortage))
    omega = schedule.changeovers > 0.5
    setup = float(np.sum(instance.setup_matrix * omega))
    common = float(np.sum(instance.common_setup_vector * omega.any(axis=1)))
    return CostBreakdown(holding, shortage, setup, common, holding + shortage + setup + common)


# ---------------------------------------------------------------------------
# schedule checking


def _is_integral(a: np.ndarray, tol: float) -> np.ndarray:
    return np.abs(a - np.round(a)) <= tol


def check_schedule(instance: DlsInstance, schedule: Schedule, *,
                   setup_rule: str = "changeover", tol: float = QTY_TOL) -> list[Violation]:
    """List every constraint of the instance's mode that the schedule breaks.

    ``setup_rule="changeover"`` applies the run-start rule of the general
    model (a changeover happens when production starts); ``"per_period"``
    requires a setup in every period with production, as in the classical
    single- and multi-product programs.
    """
    if setup_rule not in ("changeover", "per_period"):
        raise ValueError(f"unknown setup_rule {setup_rule!r}")
    n, m = instance.demand.shape
    if schedule.shape != (n, m):
        return [Violation("dimension", None, None, float(schedule.shape[0]), float(n))]
    out: list[Violation] = []
    Q, X, W = schedule.quantities, schedule.produce, schedule.changeovers
    I, S = schedule.inventory, schedule.shortage

    for name, arr in (("nonnegative_Q", Q), ("nonnegative_X", X), ("nonnegative_I", I),
                      ("nonnegative_S", S)):
        for t, p in np.argwhere(arr < -tol):
            out.append(Violation(name, int(t), int(p), float(arr[t, p]), 0.0))

    resid = balance_residual(instance, schedule)
    for t, p in np.argwhere(np.abs(resid) > tol * (1.0 + np.abs(instance.demand))):
        out.append(Violation("inventory_balance", int(t), int(p), float(resid[t, p]), 0.0))
    if instance.shortage_cost is None:
        for t, p in np.argwhere(S > tol):
            out.append(Violation("no_shortage", int(t), int(p), float(S[t, p]), 0.0))

    for t, p in np.argwhere(~_is_integral(W, tol) | (W < -tol) | (W > 1 + tol)):
        out.append(Violation("changeover_binary", int(t), int(p), float(W[t, p]), 1.0))

    mode = instance.quantity_mode
    if mode == "multi-batch":
        for t, p in np.argwhere(~_is_integral(X, tol)):
            out.append(Violation("batch_count_integer", int(t), int(p), float(X[t, p]), 0.0))
        ind = (X > 0.5).astype(float)
    else:
        for t, p in np.argwhere(~_is_integral(X, tol) | (X > 1 + tol)):
            out.append(Violation("produce_binary", int(t), int(p), float(X[t, p]), 1.0))
        ind = (X > 0.5).astype(float)

    if mode in ("single-batch", "multi-batch"):
        target = np.round(X) * instance.batch_size
        for t, p in np.argwhere(np.abs(Q - target) > tol * (1.0 + target)):
            out.append(Violation("batch_limit", int(t), int(p), float(Q[t, p]),
                                 float(target[t, p])))
    else:
        for t, p in np.argwhere((Q > tol) & (ind < 0.5)):
            out.append(Violation("production_flag", int(t), int(p), float(Q[t, p]), 0.0))
        if instance.min_quantity is not None:
            low = ind * instance.min_quantity
            for t, p in np.argwhere(Q < low - tol):
                out.append(Violation("min_quantity", int(t), int(p), float(Q[t, p]),
                                     float(low[t, p])))

    count = ind.sum(axis=1)
    if instance.exactly_one_product:
        for t in np.flatnonzero(np.abs(count - 1) > 0.5):
            out.append(Violation("products_per_period", int(t), None, float(count[t]), 1.0))
    else:
        for t in np.flatnonzero(count > instance.product_limit + 0.5):
            out.append(Violation("products_per_period", int(t), None, float(count[t]),
                                 float(instance.product_limit)))

    if instance.production_limit is not None:
        tot = Q.sum(axis=1)
        for t in np.flatnonzero(tot > instance.production_limit + tol * (1 + tot)):
            out.append(Violation("production_limit", int(t), None, float(tot[t]),
                                 instance.production_limit))

    wb = (W > 0.5).astype(float)
    expected = changeovers_from_flags(ind) if setup_rule == "changeover" else ind
    for t, p in np.argwhere(wb != expected):
        out.append(Violation("changeover", int(t), int(p), float(wb[t, p]),
                             float(expected[t, p])))

    if instance.changeover_limit is not None:
        tot = wb.sum(axis=1)
        for t in np.flatnonzero(tot > instance.changeover_limit + tol):
            out.append(Violation("changeover_limit", int(t), None, float(tot[t]),
                                 float(instance.changeover_limit[t])))
    return out


# ---------------------------------------------------------------------------
# ELSP helpers


@dataclass(frozen=True, eq=False)
class ElspDerived(_ArrayEq):
    n_periods: int
    holding_cost: np.ndarray
    max_quantity: np.ndarray
    min_quantity: np.ndarray
    period_demand: np.ndarray


def elsp_derived_parameters(instance: ElspInstance) -> ElspDerived:
    """Per-period holding cost, quantity window and demand of an ELSP instance."""
    tau = instance.period_length
    setup_days = instance.setup_days
    if np.any(setup_days >= tau):
        p = int(np.argmax(setup_days >= tau))
        raise InstanceError("E_INVARIANT", f"setup_time[{p}]",
                            "setup time leaves no producible time in a period")
    return ElspDerived(
        n_periods=instance.n_periods,
        holding_cost=_frozen(instance.holding_fraction * instance.piece_cost * tau),
        max_quantity=_frozen((tau - setup_days) * instance.production_rate),
        min_quantity=_frozen(instance.min_run_hours / instance.hours_per_day
                             * instance.production_rate),
        period_demand=_frozen(instance.demand_rate * tau),
    )


def check_elsp_feasibility(instance: ElspInstance) -> FeasibilityReport:
    """Necessary first-cycle capacity condition.

    Each product with a positive net first-period requirement needs
    ``(d*tau - I0)/b`` production days plus its setup time; the sum must fit
    into one period.
    """
    tau = instance.period_length
    util = instance.demand_rate / instance.production_rate
    worst = int(np.argmax(util))
    required = np.maximum(instance.demand_rate * tau - instance.initial_inventory, 0.0)
    demand_days = float(np.sum(required / instance.production_rate))
    setup_days = float(np.sum(instance.setup_days[required > 0]))
    total = demand_days + setup_days
    feasible = total <= tau + 1e-9
    reason = ""
    if util[worst] > 1:
        feasible = False
        reason = (f"product {worst + 1} demand rate exceeds its production rate "
                  f"({util[worst]:.4g} > 1)")
    elif not feasible:
        reason = f"required {total:.4g} days > period {tau:g} days"
    return FeasibilityReport(
        utilization=_frozen(util),
        max_utilization=float(util[worst]),
        max_utilization_product=worst,
        demand_time_days=demand_days,
        setup_time_days=setup_days,
        total_required_days=total,
        period_days=tau,
        feasible=bool(feasible),
        reason=reason,
    )


def elsp_to_dls(instance: ElspInstance) -> DlsInstance:
    """Per-period lot-sizing view of an ELSP instance (costs and demand only).

    The time capacity is not representable in a :class:`DlsInstance`; use
    :func:`check_elsp_schedule` for full validation.
    """
    derived = elsp_derived_parameters(instance)
    n = derived.n_periods
    return DlsInstance(
        demand=np.tile(derived.period_demand, (n, 1)),
        holding_cost=derived.holding_cost,
        setup_cost=instance.setup_cost,
        initial_inventory=instance.initial_inventory,
        name=instance.name,
    )


def check_elsp_schedule(instance: ElspInstance, schedule: Schedule, *,
                        tol: float = QTY_TOL) -> list[Violation]:
    """Validate a rate-based schedule (``produce`` holds production days)."""
    derived = elsp_derived_parameters(instance)
    dls = elsp_to_dls(instance)
    n, m = dls.demand.shape
    if schedule.shape != (n, m):
        return [Violation("dimension", None, None, float(schedule.shape[0]), float(n))]
    out: list[Violation] = []
    Q, X, W, I = schedule.quantities, schedule.produce, schedule.changeovers, schedule.inventory
    scale = 1.0 + np.abs(Q)
    resid = balance_residual(dls, schedule)
    for t, p in np.argwhere(np.abs(resid) > tol * (1.0 + dls.demand)):
        out.append(Violation("inventory_balance", int(t), int(p), float(resid[t, p]), 0.0))
    for t, p in np.argwhere((schedule.shortage > tol) | (I < -tol) | (Q < -tol) | (X < -tol)):
        out.append(Violation("nonnegative", int(t), int(p), float(min(I[t, p], Q[t, p])), 0.0))
    for t, p in np.argwhere(~_is_integral(W, tol)):
        out.append(Violation("setup_binary", int(t), int(p), float(W[t, p]), 1.0))
    wb = (W > 0.5).astype(float)
    used = X.sum(axis=1) + (wb * instance.setup_days).sum(axis=1)
    for t in np.flatnonzero(used > instance.period_length + tol):
        out.append(Violation("max_time", int(t), None, float(used[t]), instance.period_length))
    rate = X * instance.production_rate
    for t, p in np.argwhere(np.abs(rate - Q) > tol * scale):
        out.append(Violation("production_rate", int(t), int(p), float(rate[t, p]),
                             float(Q[t, p])))
    hi = wb * derived.max_quantity
    for t, p in np.argwhere(Q > hi + tol * scale):
        out.append(Violation("quantity_limit", int(t), int(p), float(Q[t, p]), float(hi[t, p])))
    lo = wb * derived.min_quantity
    for t, p in np.argwhere(Q < lo - tol * scale):
        out.append(Violation("min_quantity", int(t), int(p), float(Q[t, p]), float(lo[t, p])))
    return out


# ---------------------------------------------------------------------------
# closed forms


def safety_buffer(z: float, mean_demand: float, sd_demand: float,
                  mean_lead: float, sd_lead: float) -> float:
    """Safety stock for normally distributed demand and lead time."""
    args = dict(z=z, mean_demand=mean_demand, sd_demand=sd_demand,
                mean_lead=mean_lead, sd_lead=sd_lead)
    for k, v in args.items():
        if not v >= 0:
            raise ValueError(f"{k} must be >= 0, got {v}")
    return z * math.sqrt(mean_demand ** 2 * sd_lead ** 2 + mean_lead ** 2 * sd_demand ** 2)


def eoq(mean_demand: float, setup_cost: float, holding_cost: float) -> float:
    """Economic order quantity sqrt(2 d c_o / c_h)."""
    if not holding_cost > 0:
        raise ValueError("holding_cost must be > 0")
    if mean_demand < 0 or setup_cost < 0:
        raise ValueError("mean_demand and setup_cost must be >= 0")
    return math.sqrt(2.0 * mean_demand * setup_cost / holding_cost)
