"""Lot-sizing formulations as generic sparse MIP models."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Optional

import numpy as np

from .model import (
    DlsInstance,
    ElspInstance,
    Schedule,
    elsp_derived_parameters,
)

CONTINUOUS = "continuous"
BINARY = "binary"
INTEGER = "integer"
KINDS = (CONTINUOUS, BINARY, INTEGER)
SENSES = ("<=", ">=", "=")
INF = math.inf

ROLE_PREFIX = {"Q": "Q", "X": "X", "omega": "W", "I": "I", "S": "S", "Omega": "CS", "N": "N"}


@dataclass(frozen=True)
class Column:
    name: str
    lb: float = 0.0
    ub: float = INF
    kind: str = CONTINUOUS
    obj: float = 0.0

    @property
    def is_integer(self) -> bool:
        return self.kind != CONTINUOUS


@dataclass(frozen=True)
class Row:
    name: str
    coefs: tuple  # ((col, value), ...) sorted by column index
    sense: str
    rhs: float

    def as_dict(self) -> dict:
        return dict(self.coefs)


@dataclass(frozen=True, eq=True)
class MipModel:
    """Minimisation MIP ``min c'x + offset`` over linear rows and column bounds."""

    name: str
    columns: tuple
    rows: tuple
    objective_offset: float = 0.0

    def __post_init__(self):
        names = set()
        for j, col in enumerate(self.columns):
            if col.kind not in KINDS:
                raise ValueError(f"column {col.name}: unknown kind {col.kind!r}")
            if not col.lb <= col.ub:
                raise ValueError(f"column {col.name}: lb {col.lb} > ub {col.ub}")
            if col.kind == BINARY and (col.lb < 0 or col.ub > 1):
                raise ValueError(f"binary column {col.name} has bounds outside [0, 1]")
            if col.name in names:
                raise ValueError(f"duplicate column name {col.name}")
            names.add(col.name)
        rnames = set()
        n = len(self.columns)
        for row in self.rows:
            if row.sense not in SENSES:
                raise ValueError(f"row {row.name}: unknown sense {row.sense!r}")
            if row.name in rnames:
                raise ValueError(f"duplicate row name {row.name}")
            rnames.add(row.name)
            for j, _ in row.coefs:
                if not 0 <= j < n:
                    raise ValueError(f"row {row.name} references missing column {j}")

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @cached_property
    def lower(self) -> np.ndarray:
        return np.array([c.lb for c in self.columns], dtype=float)

    @cached_property
    def upper(self) -> np.ndarray:
        return np.array([c.ub for c in self.columns], dtype=float)

    @cached_property
    def objective(self) -> np.ndarray:
        return np.array([c.obj for c in self.columns], dtype=float)

    @cached_property
    def integer_mask(self) -> np.ndarray:
        return np.array([c.is_integer for c in self.columns], dtype=bool)

    @cached_property
    def matrix(self) -> np.ndarray:
        A = np.zeros((self.n_rows, self.n_cols))
        for i, row in enumerate(self.rows):
            for j, v in row.coefs:
                A[i, j] = v
        return A

    @cached_property
    def rhs(self) -> np.ndarray:
        return np.array([r.rhs for r in self.rows], dtype=float)

    @cached_property
    def senses(self) -> tuple:
        return tuple(r.sense for r in self.rows)

    def column_index(self, name: str) -> int:
        return self._col_index[name]

    @cached_property
    def _col_index(self) -> dict:
        return {c.name: j for j, c in enumerate(self.columns)}

    def evaluate(self, x) -> float:
        return float(self.objective @ np.asarray(x, dtype=float) + self.objective_offset)

    def max_violation(self, x, *, integrality: bool = True) -> float:
        """Largest bound, row or integrality violation of an assignment."""
        x = np.asarray(x, dtype=float)
        worst = 0.0
        if self.n_cols:
            worst = max(worst, float(np.max(self.lower - x, initial=0.0)),
                        float(np.max(x - self.upper, initial=0.0)))
            if integrality and self.integer_mask.any():
                xi = x[self.integer_mask]
                worst = max(worst, float(np.max(np.abs(xi - np.round(xi)), initial=0.0)))
        if self.n_rows:
            act = self.matrix @ x
            for a, row in zip(act, self.rows):
                scale = 1.0 + abs(row.rhs)
                if row.sense == "<=":
                    v = a - row.rhs
                elif row.sense == ">=":
                    v = row.rhs - a
                else:
                    v = abs(a - row.rhs)
                worst = max(worst, v / scale)
        return worst

    def is_feasible(self, x, tol: float = 1e-6) -> bool:
        return self.max_violation(x) <= tol

    def with_rows(self, rows: Iterable[Row]) -> "MipModel":
        return replace(self, rows=self.rows + tuple(rows))

    def with_bounds(self, lower, upper) -> "MipModel":
        cols = tuple(replace(c, lb=float(lo), ub=float(hi))
                     for c, lo, hi in zip(self.columns, lower, upper))
        return replace(self, columns=cols)


class ModelBuilder:
    def __init__(self, name: str = "model"):
        self.name = name
        self._cols: list[Column] = []
        self._rows: list[Row] = []
        self.objective_offset = 0.0

    def add_column(self, name: str, lb: float = 0.0, ub: float = INF,
                   kind: str = CONTINUOUS, obj: float = 0.0) -> int:
        if kind == BINARY:
            lb, ub = max(lb, 0.0), min(ub, 1.0)
        self._cols.append(Column(name, float(lb), float(ub), kind, float(obj)))
        return len(self._cols) - 1

    def add_row(self, name: str, coefs, sense: str, rhs: float) -> int:
        merged: dict[int, float] = {}
        items = coefs.items() if isinstance(coefs, Mapping) else coefs
        for j, v in items:
            merged[j] = merged.get(j, 0.0) + float(v)
        terms = tuple(sorted((j, v) for j, v in merged.items() if v != 0.0))
        self._rows.append(Row(name, terms, sense, float(rhs)))
        return len(self._rows) - 1

    def build(self) -> MipModel:
        return MipModel(self.name, tuple(self._cols), tuple(self._rows), self.objective_offset)


@dataclass(frozen=True)
class VariableCatalog:
    """Map (role, t, p) to column index; ``p`` is ``None`` for period-only roles."""

    formulation: str
    n_periods: int
    n_products: int
    index: Mapping
    integer_roles: frozenset = field(default_factory=frozenset)

    @cached_property
    def inverse(self) -> dict:
        return {j: key for key, j in self.index.items()}

    @property
    def roles(self) -> set:
        return {k[0] for k in self.index}

    def __getitem__(self, key) -> int:
        return self.index[key]

    def get(self, role: str, t: int, p: Optional[int] = None) -> Optional[int]:
        return self.index.get((role, t, p))

    def has_role(self, role: str) -> bool:
        return role in self.roles

    def matrix(self, role: str, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        out = np.zeros((self.n_periods, self.n_products))
        for (r, t, p), j in self.index.items():
            if r == role and p is not None:
                out[t, p] = values[j]
        return out

    def vector(self, role: str, values) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        out = np.zeros(self.n_periods)
        for (r, t, p), j in self.index.items():
            if r == role and p is None:
                out[t] = values[j]
        return out

    @property
    def setup_rule(self) -> str:
        return "changeover" if self.formulation == "general" else "per_period"


class _Grid:
    """Column allocation helper keeping the catalog in sync."""

    def __init__(self, builder: ModelBuilder, n: int, m: int):
        self.b = builder
        self.n, self.m = n, m
        self.index: dict = {}

    def add(self, role, t, p, **kw) -> int:
        if p is None:
            name = f"{ROLE_PREFIX[role]}_t{t + 1}"
        else:
            name = f"{ROLE_PREFIX[role]}_t{t + 1}_p{p + 1}"
        j = self.b.add_column(name, **kw)
        self.index[(role, t, p)] = j
        return j

    def catalog(self, formulation, integer_roles) -> VariableCatalog:
        return VariableCatalog(formulation, self.n, self.m, dict(self.index),
                               frozenset(integer_roles))


def _remaining_demand(demand: np.ndarray) -> np.ndarray:
    """Suffix sums: demand still to be served from period t to the horizon."""
    return np.flip(np.cumsum(np.flip(demand, axis=0), axis=0), axis=0)


def _balance_rows(b: ModelBuilder, g: _Grid, instance: DlsInstance, q, inv, short=None):
    n, m = instance.demand.shape
    net0 = instance.initial_inventory - instance.initial_shortage
    for p in range(m):
        for t in range(n):
            coefs = [(inv[t, p], 1.0), (q[t, p], -1.0)]
            rhs = -instance.demand[t, p]
            if short is not None:
                coefs.append((short[t, p], -1.0))
            if t == 0:
                rhs += net0[p]
            else:
                coefs.append((inv[t - 1, p], -1.0))
                if short is not None:
                    coefs.append((short[t - 1, p], 1.0))
            b.add_row(f"balance_t{t + 1}_p{p + 1}", coefs, "=", rhs)


def build_dls_1p(instance: DlsInstance, bigM_style: str = "one-sided"):
    """Single-product uncapacitated lot sizing (setup in every producing period).

    ``two-sided`` emits ``omega <= M q`` and ``omega >= q / M`` with ``M`` the
    total demand; ``one-sided`` emits ``q_t <= M_t omega_t`` with ``M_t`` the
    demand remaining from ``t`` on. Columns: 3n. Rows: n balance rows plus
    2n (two-sided) or n (one-sided) linking rows.
    """
    if instance.n_products != 1:
        raise ValueError("build_dls_1p needs a single-product instance")
    if instance.shortage_cost is not None:
        raise ValueError("build_dls_1p does not model shortages")
    if instance.quantity_mode != "continuous":
        raise ValueError("build_dls_1p needs continuous quantities")
    if bigM_style not in ("one-sided", "two-sided"):
        raise ValueError(f"unknown bigM_style {bigM_style!r}")
    return _build_per_period(instance, "dls1p", bigM_style)


def build_dls_mp(instance: DlsInstance):
    """Independent per-product copies of the single-product model, optionally
    coupled by a per-period production limit. Columns: 3nm. Rows: nm balance,
    2nm linking and n production-limit rows (if a limit is given)."""
    if instance.common_setup_cost is not None and np.any(instance.common_setup_cost != 0):
        raise ValueError("build_dls_mp needs a zero common setup cost; use build_dls_mp_cs")
    if instance.shortage_cost is not None:
        raise ValueError("build_dls_mp does not model shortages")
    if instance.quantity_mode != "continuous":
        raise ValueError("build_dls_mp needs continuous quantities")
    return _build_per_period(instance, "dlsmp", "two-sided")


def _build_per_period(instance: DlsInstance, formulation: str, style: str):
    n, m = instance.demand.shape
    b = ModelBuilder(instance.name or formulation)
    g = _Grid(b, n, m)
    hold, setup = instance.holding_matrix, instance.setup_matrix
    remaining = _remaining_demand(instance.demand)
    total = instance.demand.sum(axis=0)
    qcap = INF if instance.production_limit is None else instance.production_limit
    q = np.empty((n, m), dtype=int)
    w = np.empty((n, m), dtype=int)
    inv = np.empty((n, m), dtype=int)
    for p in range(m):
        for t in range(n):
            q[t, p] = g.add("Q", t, p, ub=qcap if total[p] > 0 else 0.0)
    for p in range(m):
        for t in range(n):
            w[t, p] = g.add("omega", t, p, kind=BINARY, obj=setup[t, p],
                            ub=1.0 if total[p] > 0 else 0.0)
    for p in range(m):
        for t in range(n):
            inv[t, p] = g.add("I", t, p, obj=hold[t, p])
    _balance_rows(b, g, instance, q, inv)
    for p in range(m):
        for t in range(n):
            tag = f"t{t + 1}_p{p + 1}"
            if style == "two-sided":
                big = total[p]
                if big <= 0:
                    continue
                b.add_row(f"setup_hi_{tag}", [(w[t, p], 1.0), (q[t, p], -big)], "<=", 0.0)
                b.add_row(f"setup_lo_{tag}", [(w[t, p], 1.0), (q[t, p], -1.0 / big)], ">=", 0.0)
            else:
                b.add_row(f"bigm_{tag}", [(q[t, p], 1.0), (w[t, p], -remaining[t, p])], "<=", 0.0)
    if instance.production_limit is not None and m > 1:
        for t in range(n):
            b.add_row(f"prodlimit_t{t + 1}", [(q[t, p], 1.0) for p in range(m)], "<=",
                      instance.production_limit)
    return b.build(), g.catalog(formulation, {"omega"})


def build_dls_mp_cs(instance: DlsInstance):
    """Multi-product lot sizing with a common (joint) setup cost per period.

    Adds one binary ``Omega_t`` per period; ``sum_p omega_tp <= m * Omega_t``
    links the individual setups. Columns: 3nm + n. Rows: nm balance, nm
    big-M, n linking and n production-limit rows (if given).
    """
    if instance.shortage_cost is not None:
        raise ValueError("build_dls_mp_cs does not model shortages")
    if instance.quantity_mode != "continuous":
        raise ValueError("build_dls_mp_cs needs continuous quantities")
    n, m = instance.demand.shape
    b = ModelBuilder(instance.name or "dlsmpcs")
    g = _Grid(b, n, m)
    hold, setup = instance.holding_matrix, instance.setup_matrix
    common = instance.common_setup_vector
    remaining = _remaining_demand(instance.demand)
    qcap = INF if instance.production_limit is None else instance.production_limit
    q = np.empty((n, m), dtype=int)
    w = np.empty((n, m), dtype=int)
    inv = np.empty((n, m), dtype=int)
    for p in range(m):
        for t in range(n):
            q[t, p] = g.add("Q", t, p, ub=qcap)
    for p in range(m):
        for t in range(n):
            w[t, p] = g.add("omega", t, p, kind=BINARY, obj=setup[t, p])
    for p in range(m):
        for t in range(n):
            inv[t, p] = g.add("I", t, p, obj=hold[t, p])
    cs = [g.add("Omega", t, None, kind=BINARY, obj=common[t]) for t in range(n)]
    _balance_rows(b, g, instance, q, inv)
    for p in range(m):
        for t in range(n):
            b.add_row(f"bigm_t{t + 1}_p{p + 1}",
                      [(q[t, p], 1.0), (w[t, p], -remaining[t, p])], "<=", 0.0)
    for t in range(n):
        coefs = [(w[t, p], 1.0) for p in range(m)] + [(cs[t], -float(m))]
        b.add_row(f"link_t{t + 1}", coefs, "<=", 0.0)
    if instance.production_limit is not None:
        for t in range(n):
            b.add_row(f"prodlimit_t{t + 1}", [(q[t, p], 1.0) for p in range(m)], "<=",
                      instance.production_limit)
    return b.build(), g.catalog("dlsmpcs", {"omega", "Omega"})


def build_general_dls(instance: DlsInstance):
    """The general multi-product model with shortages, batches, production,
    product-count and changeover limits.

    Columns: 5nm (Q, X, omega, I, S), plus nm batch counts N in multi-batch
    mode. Rows: nm balance, n product-count, nm batch coupling (2nm more in
    multi-batch, nm more in continuous mode), n production-limit (if given),
    2(n-1)m changeover, m initial-setup and n changeover-limit rows (if given).
    """
    if instance.common_setup_cost is not None and np.any(instance.common_setup_cost != 0):
        raise ValueError("the general model has no common setup cost; use build_dls_mp_cs")
    n, m = instance.demand.shape
    mode = instance.quantity_mode
    b = ModelBuilder(instance.name or "general")
    g = _Grid(b, n, m)
    hold, setup = instance.holding_matrix, instance.setup_matrix
    short_cost = instance.shortage_matrix
    qcap = instance.production_limit
    remaining = _remaining_demand(instance.demand) + instance.initial_shortage

    q = np.empty((n, m), dtype=int)
    x = np.empty((n, m), dtype=int)
    w = np.empty((n, m), dtype=int)
    inv = np.empty((n, m), dtype=int)
    short = np.empty((n, m), dtype=int)
    bigm = np.full((n, m), INF)
    if mode == "continuous":
        bigm = remaining.copy()
        if qcap is not None:
            bigm = np.minimum(bigm, qcap)
    for p in range(m):
        for t in range(n):
            ub = INF if qcap is None else qcap
            if mode == "continuous":
                ub = bigm[t, p]
            elif mode == "single-batch":
                ub = min(ub, instance.batch_size[p])
            q[t, p] = g.add("Q", t, p, ub=ub)
    for p in range(m):
        for t in range(n):
            ub = 0.0 if mode == "continuous" and bigm[t, p] <= 0 else 1.0
            x[t, p] = g.add("X", t, p, kind=BINARY, ub=ub)
    for p in range(m):
        for t in range(n):
            w[t, p] = g.add("omega", t, p, kind=BINARY, obj=setup[t, p])
    for p in range(m):
        for t in range(n):
            inv[t, p] = g.add("I", t, p, obj=hold[t, p])
    for p in range(m):
        for t in range(n):
            if short_cost is None:
                short[t, p] = g.add("S", t, p, ub=0.0)
            else:
                short[t, p] = g.add("S", t, p, obj=short_cost[t, p])
    nb = None
    if mode == "multi-batch":
        nb = np.empty((n, m), dtype=int)
        caps = batch_count_bounds(instance)
        for p in range(m):
            for t in range(n):
                nb[t, p] = g.add("N", t, p, kind=INTEGER, ub=caps[p])

    _balance_rows(b, g, instance, q, inv, short)

    for t in range(n):
        coefs = [(x[t, p], 1.0) for p in range(m)]
        if instance.exactly_one_product:
            b.add_row(f"prodcount_t{t + 1}", coefs, "=", 1.0)
        else:
            b.add_row(f"prodcount_t{t + 1}", coefs, "<=", float(instance.product_limit))

    for p in range(m):
        for t in range(n):
            tag = f"t{t + 1}_p{p + 1}"
            if mode == "single-batch":
                b.add_row(f"batch_{tag}", [(q[t, p], 1.0), (x[t, p], -instance.batch_size[p])],
                          "=", 0.0)
            elif mode == "multi-batch":
                b.add_row(f"batch_{tag}", [(q[t, p], 1.0), (nb[t, p], -instance.batch_size[p])],
                          "=", 0.0)
                b.add_row(f"nlink_hi_{tag}", [(nb[t, p], 1.0), (x[t, p], -caps[p])], "<=", 0.0)
                b.add_row(f"nlink_lo_{tag}", [(nb[t, p], 1.0), (x[t, p], -1.0)], ">=", 0.0)
            else:
                big = bigm[t, p]
                if big <= 0:
                    continue
                low = (instance.min_quantity[p] if instance.min_quantity is not None
                       else 1.0 / big)
                b.add_row(f"bigm_{tag}", [(q[t, p], 1.0), (x[t, p], -big)], "<=", 0.0)
                b.add_row(f"minq_{tag}", [(q[t, p], 1.0), (x[t, p], -low)], ">=", 0.0)

    if qcap is not None:
        for t in range(n):
            b.add_row(f"prodlimit_t{t + 1}", [(q[t, p], 1.0) for p in range(m)], "<=", qcap)

    for p in range(m):
        for t in range(1, n):
            tag = f"t{t + 1}_p{p + 1}"
            coefs = [(x[t, p], 1.0), (x[t - 1, p], -1.0), (w[t, p], -2.0)]
            b.add_row(f"chg_ge_{tag}", coefs, ">=", -1.0)
            b.add_row(f"chg_le_{tag}", coefs, "<=", 0.0)
    for p in range(m):
        b.add_row(f"initsetup_p{p + 1}", [(w[0, p], 1.0), (x[0, p], -1.0)], "=", 0.0)

    if instance.changeover_limit is not None:
        for t in range(n):
            b.add_row(f"chglimit_t{t + 1}", [(w[t, p], 1.0) for p in range(m)], "<=",
                      float(instance.changeover_limit[t]))
    roles = {"X", "omega"} | ({"N"} if mode == "multi-batch" else set())
    return b.build(), g.catalog("general", roles)


def batch_count_bounds(instance: DlsInstance) -> np.ndarray:
    """Upper bound on batches per period: floor(q_hat / b) or, without a
    production limit, enough batches to cover all outstanding demand."""
    bsz = instance.batch_size
    if instance.production_limit is not None:
        return np.floor(instance.production_limit / bsz + 1e-9)
    need = instance.demand.sum(axis=0) + instance.initial_shortage
    return np.ceil(need / bsz - 1e-9)


def build_elsp_bomberger(instance: ElspInstance):
    """Rate-based ELSP as a period model: I, q, x (production days) and
    setup binaries omega per (t, p).

    Rows per period: m balance, one max-time, m production-rate, m quantity
    limit and 2m setup-linking rows; 4nm columns.
    """
    if np.any(instance.demand_rate > instance.production_rate):
        raise ValueError("demand rate exceeds production rate for some product")
    d = elsp_derived_parameters(instance)
    n, m = d.n_periods, instance.n_products
    tau = instance.period_length
    b = ModelBuilder(instance.name or "elsp")
    g = _Grid(b, n, m)
    inv_ub = n * float(np.max(d.period_demand)) + float(np.max(instance.initial_inventory))
    q_ub = float(np.max(d.max_quantity))
    inv = np.empty((n, m), dtype=int)
    q = np.empty((n, m), dtype=int)
    x = np.empty((n, m), dtype=int)
    w = np.empty((n, m), dtype=int)
    for p in range(m):
        for t in range(n):
            inv[t, p] = g.add("I", t, p, ub=inv_ub, obj=d.holding_cost[p])
    for p in range(m):
        for t in range(n):
            q[t, p] = g.add("Q", t, p, ub=q_ub)
    for p in range(m):
        for t in range(n):
            x[t, p] = g.add("X", t, p, ub=tau)
    for p in range(m):
        for t in range(n):
            w[t, p] = g.add("omega", t, p, kind=BINARY, obj=instance.setup_cost[p])
    for p in range(m):
        for t in range(n):
            coefs = [(inv[t, p], 1.0), (q[t, p], -1.0)]
            rhs = -d.period_demand[p]
            if t == 0:
                rhs += instance.initial_inventory[p]
            else:
                coefs.append((inv[t - 1, p], -1.0))
            b.add_row(f"balance_t{t + 1}_p{p + 1}", coefs, "=", rhs)
    # producing more than the outstanding net demand only adds holding cost;
    # the start stock still on hand at t is at least I0 less the demand before t
    before = np.arange(n)[:, None] * d.period_demand[None, :]
    on_hand = np.maximum(instance.initial_inventory[None, :] - before, 0.0)
    rest = (n - np.arange(n))[:, None] * d.period_demand[None, :] - on_hand
    big = np.minimum(d.max_quantity, np.maximum(rest, d.min_quantity))
    for t in range(n):
        coefs = [(x[t, p], 1.0) for p in range(m)]
        coefs += [(w[t, p], instance.setup_days[p]) for p in range(m)]
        b.add_row(f"maxtime_t{t + 1}", coefs, "<=", tau)
    for p in range(m):
        for t in range(n):
            tag = f"t{t + 1}_p{p + 1}"
            b.add_row(f"rate_{tag}", [(x[t, p], instance.production_rate[p]), (q[t, p], -1.0)],
                      "=", 0.0)
            b.add_row(f"qlimit_{tag}", [(q[t, p], 1.0)], "<=", d.max_quantity[p])
            b.add_row(f"setup_on_{tag}", [(q[t, p], 1.0), (w[t, p], -big[t, p])],
                      "<=", 0.0)
            b.add_row(f"minqty_{tag}", [(q[t, p], 1.0), (w[t, p], -d.min_quantity[p])],
                      ">=", 0.0)
    return b.build(), g.catalog("elsp", {"omega"})


BUILDERS = {
    "dls1p": build_dls_1p,
    "dlsmp": build_dls_mp,
    "dlsmpcs": build_dls_mp_cs,
    "general": build_general_dls,
    "elsp": build_elsp_bomberger,
}


def extract_schedule(catalog: VariableCatalog, solution, *, tol: float = 1e-6) -> Schedule:
    """Schedule matrices from a solution vector (or an object with ``values``)."""
    values = getattr(solution, "values", solution)
    if values is None:
        raise ValueError("solution carries no values")
    values = np.array(values, dtype=float)
    for (role, t, p), j in catalog.index.items():
        if role in catalog.integer_roles:
            v = values[j]
            if abs(v - round(v)) > tol:
                raise ValueError(f"integrality violated for {role}[t={t + 1}, p={p}]: {v!r}")
            values[j] = float(round(v))
        elif abs(values[j]) < 1e-9:
            values[j] = 0.0
    Q = catalog.matrix("Q", values)
    W = catalog.matrix("omega", values)
    inv = catalog.matrix("I", values)
    S = catalog.matrix("S", values) if catalog.has_role("S") else np.zeros_like(Q)
    if catalog.has_role("N"):
        X = catalog.matrix("N", values)
    elif catalog.has_role("X"):
        X = catalog.matrix("X", values)
    else:
        X = W.copy()
    clip = lambda a: np.where(a < 0, 0.0, a)  # noqa: E731
    return Schedule(clip(Q), clip(X), W, clip(inv), clip(S))


def schedule_to_values(catalog: VariableCatalog, schedule: Schedule) -> np.ndarray:
    """Column assignment encoding a schedule (used for warm starts)."""
    size = max(catalog.index.values()) + 1
    x = np.zeros(size)
    mats = {
        "Q": schedule.quantities,
        "omega": schedule.changeovers,
        "I": schedule.inventory,
        "S": schedule.shortage,
    }
    if catalog.has_role("N"):
        mats["N"] = schedule.produce
        mats["X"] = (schedule.produce > 0.5).astype(float)
    else:
        mats["X"] = schedule.produce
    omega_any = (schedule.changeovers > 0.5).any(axis=1).astype(float)
    for (role, t, p), j in catalog.index.items():
        if role == "Omega":
            x[j] = omega_any[t]
        elif role in mats:
            x[j] = mats[role][t, p]
    return x


def column_counts(model: MipModel) -> dict:
    kinds = [c.kind for c in model.columns]
    return {k: kinds.count(k) for k in KINDS}


__all__ = [
    "Column", "Row", "MipModel", "ModelBuilder", "VariableCatalog",
    "build_dls_1p", "build_dls_mp", "build_dls_mp_cs", "build_general_dls",
    "build_elsp_bomberger", "extract_schedule", "schedule_to_values", "BUILDERS",
    "CONTINUOUS", "BINARY", "INTEGER",
]
