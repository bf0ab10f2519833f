"""Instance documents (JSON), schedule CSV files and MPS / LP model export.

Every number is written in the shortest form that reads back to the same
double: integral values without a fractional part, everything else via
``repr``. Monetary fields are JSON strings so that decimal inputs such as
``"0.0065"`` survive tooling that would otherwise reformat them.
"""
from __future__ import annotations

import json
import math
from typing import Any, Optional, Union

import numpy as np

from .formulations import BINARY, CONTINUOUS, INTEGER, Column, MipModel, Row
from .model import CostBreakdown, DlsInstance, ElspInstance, InstanceError, Schedule

Instance = Union[DlsInstance, ElspInstance]

DLS_FIELDS = ("name", "demand", "holding_cost", "setup_cost", "shortage_cost",
              "common_setup_cost", "batch_size", "production_limit", "max_products_per_period",
              "changeover_limit", "initial_inventory", "initial_shortage", "quantity_mode",
              "min_quantity")
ELSP_FIELDS = ("name", "setup_cost", "piece_cost", "production_rate", "demand_rate",
               "setup_time", "period_length", "horizon_days", "holding_fraction",
               "hours_per_day", "min_run_hours", "initial_inventory")
MONEY = {"holding_cost", "setup_cost", "shortage_cost", "common_setup_cost", "piece_cost"}
REQUIRED = {"dls": ("demand", "holding_cost", "setup_cost"),
            "elsp": ("setup_cost", "piece_cost", "production_rate", "demand_rate",
                     "setup_time", "period_length")}
CSV_HEADER = "period,product,produced,setup,changeover,inventory,shortage"


def format_number(v: float) -> str:
    v = float(v)
    if not math.isfinite(v):
        raise ValueError(f"cannot serialise non-finite value {v!r}")
    if v == 0.0:
        return "0"
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


# ---------------------------------------------------------------------------
# instance documents


def _to_number(value: Any, where: str, money: bool) -> float:
    if isinstance(value, bool):
        raise InstanceError("E_TYPE", where, "expected a number, got a boolean")
    if isinstance(value, str):
        if not money:
            raise InstanceError("E_TYPE", where, "expected a number, got a string")
        try:
            v = float(value)
        except ValueError:
            raise InstanceError("E_TYPE", where, f"not a decimal number: {value!r}") from None
    elif isinstance(value, (int, float)):
        v = float(value)
    else:
        raise InstanceError("E_TYPE", where, f"expected a number, got {type(value).__name__}")
    if not math.isfinite(v):
        raise InstanceError("E_VALUE", where, "must be finite")
    return v


def _to_array(value: Any, where: str, money: bool):
    if isinstance(value, list):
        if value and all(isinstance(r, list) for r in value):
            rows = [[_to_number(v, f"{where}[{i}][{j}]", money) for j, v in enumerate(r)]
                    for i, r in enumerate(value)]
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                bad = next(i for i, r in enumerate(rows) if len(r) != len(rows[0]))
                raise InstanceError("E_DIMENSION", f"{where}[{bad}]",
                                    f"row has {len(rows[bad])} entries, expected {len(rows[0])}")
            return np.array(rows, dtype=float)
        return np.array([_to_number(v, f"{where}[{i}]", money) for i, v in enumerate(value)],
                        dtype=float)
    return _to_number(value, where, money)


def _check_negative(key: str, value) -> None:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if np.any(arr < 0):
        idx = np.argwhere(arr < 0)[0]
        loc = "".join(f"[{int(i)}]" for i in idx) if np.ndim(value) else ""
        code = "E_NEGATIVE_COST" if key in MONEY else "E_NEGATIVE"
        raise InstanceError(code, f"{key}{loc}", "must be >= 0")


def parse_instance(text: str) -> Instance:
    """Validated instance from a JSON document; raises InstanceError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError("E_SYNTAX", f"line {exc.lineno}, column {exc.colno}",
                            exc.msg) from None
    if not isinstance(doc, dict):
        raise InstanceError("E_TYPE", "$", "document must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("dls", "elsp"):
        raise InstanceError("E_KIND", "kind", f"unknown instance kind {kind!r}")
    allowed = DLS_FIELDS if kind == "dls" else ELSP_FIELDS
    for key in doc:
        if key != "kind" and key not in allowed:
            raise InstanceError("E_UNKNOWN_FIELD", key, f"not a field of a {kind} instance")
    for key in REQUIRED[kind]:
        if doc.get(key) is None:
            raise InstanceError("E_MISSING", key, "required")
    kwargs: dict[str, Any] = {}
    for key, value in doc.items():
        if key == "kind" or value is None:
            continue
        if key in ("name", "quantity_mode"):
            if not isinstance(value, str):
                raise InstanceError("E_TYPE", key, "expected a string")
            kwargs[key] = value
            continue
        arr = _to_array(value, key, key in MONEY)
        _check_negative(key, arr)
        if key == "max_products_per_period":
            if np.ndim(arr) != 0:
                raise InstanceError("E_TYPE", key, "expected a single integer")
            if float(arr) != int(arr):
                raise InstanceError("E_VALUE", key, "must be an integer")
            arr = int(arr)
        kwargs[key] = arr
    if kind == "dls":
        demand = kwargs.get("demand")
        if np.ndim(demand) != 2:
            raise InstanceError("E_DIMENSION", "demand", "must be a matrix [periods][products]")
        return DlsInstance(**kwargs)
    return ElspInstance(**kwargs)


def _json_value(key: str, value) -> str:
    money = key in MONEY

    def one(v):
        s = format_number(v)
        return f'"{s}"' if money else s

    if isinstance(value, str):
        return json.dumps(value)
    arr = np.asarray(value)
    if arr.ndim == 0:
        if key == "max_products_per_period":
            return str(int(value))
        return one(arr)
    if arr.ndim == 1:
        return "[" + ", ".join(one(v) for v in arr) + "]"
    rows = ["[" + ", ".join(one(v) for v in r) + "]" for r in arr]
    return "[\n    " + ",\n    ".join(rows) + "\n  ]"


def serialize_instance(instance: Instance) -> str:
    """Canonical JSON document; ``parse_instance`` inverts it exactly."""
    if isinstance(instance, DlsInstance):
        kind, keys = "dls", DLS_FIELDS
    elif isinstance(instance, ElspInstance):
        kind, keys = "elsp", ELSP_FIELDS
    else:
        raise TypeError(f"cannot serialise {type(instance).__name__}")
    lines = [f'  "kind": "{kind}"']
    for key in keys:
        value = getattr(instance, key)
        if value is None or (key == "name" and value == ""):
            continue
        lines.append(f'  "{key}": {_json_value(key, value)}')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


# ---------------------------------------------------------------------------
# schedules


def write_schedule(schedule: Schedule, costs: Optional[CostBreakdown] = None) -> str:
    """CSV with one row per (period, product), periods outer, then cost comments."""
    out = [CSV_HEADER]
    n, m = schedule.shape
    mats = (schedule.quantities, schedule.produce, schedule.changeovers,
            schedule.inventory, schedule.shortage)
    for t in range(n):
        for p in range(m):
            vals = ",".join(format_number(a[t, p]) for a in mats)
            out.append(f"{t + 1},{p + 1},{vals}")
    if costs is None:
        costs = CostBreakdown(0.0, 0.0, 0.0, 0.0, 0.0)
    for key, v in costs.as_dict().items():
        out.append(f"# {key},{format_number(v)}")
    return "\n".join(out) + "\n"


def read_schedule(text: str) -> tuple[Schedule, dict]:
    """Inverse of :func:`write_schedule`; returns the schedule and cost comments."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError("schedule CSV must start with the header " + CSV_HEADER)
    cells: dict[tuple[int, int], list[float]] = {}
    costs: dict[str, float] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition(",")
            costs[key.strip()] = float(val)
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise ValueError(f"line {lineno}: expected 7 fields, got {len(parts)}")
        t, p = int(parts[0]), int(parts[1])
        if t < 1 or p < 1:
            raise ValueError(f"line {lineno}: period and product are 1-based")
        cells[(t - 1, p - 1)] = [float(v) for v in parts[2:]]
    if not cells:
        z = np.zeros((0, 0))
        return Schedule(z, z, z, z, z), costs
    n = 1 + max(t for t, _ in cells)
    m = 1 + max(p for _, p in cells)
    if len(cells) != n * m:
        raise ValueError(f"schedule has {len(cells)} rows, expected {n * m}")
    mats = np.zeros((5, n, m))
    for (t, p), vals in cells.items():
        mats[:, t, p] = vals
    return Schedule(*mats), costs


# ---------------------------------------------------------------------------
# MPS / LP export


def _mps_bounds(col: Column) -> list[tuple[str, Optional[float]]]:
    lb, ub = col.lb, col.ub
    if col.kind == BINARY:
        # BV declares [0, 1]; narrower binaries get an extra bound line
        out: list[tuple[str, Optional[float]]] = [("BV", None)]
        if lb != 0.0:
            out.append(("LO", lb))
        if ub != 1.0:
            out.append(("UP", ub))
        return out
    if lb == ub:
        return [("FX", lb)]
    if math.isinf(lb) and math.isinf(ub):
        return [("FR", None)]
    out = [("MI", None) if math.isinf(lb) else ("LO", lb)]
    out.append(("PL", None) if math.isinf(ub) else ("UP", ub))
    return out


def export_mps(model: MipModel) -> str:
    """Fixed-layout MPS; fields widen when names exceed eight characters."""
    names = [c.name for c in model.columns] + [r.name for r in model.rows] + ["OBJ"]
    assert len(set(names)) == len(names), "column and row names must be unique"
    w = max(8, max((len(s) for s in names), default=8))
    nums = [format_number(c.obj) for c in model.columns]
    nw = max(12, max((len(s) for s in nums), default=12))

    def entry(code: str, a: str, b: str = "", v: Optional[str] = None) -> str:
        line = f" {code:<2} {a:<{w}}"
        if b:
            line += f"  {b:<{w}}"
        if v is not None:
            line += f"  {v:>{nw}}"
        return line.rstrip()

    sense_code = {"<=": "L", ">=": "G", "=": "E"}
    out = [f"NAME          {model.name}", "ROWS", entry("N", "OBJ")]
    for r in model.rows:
        out.append(entry(sense_code[r.sense], r.name))
    out.append("COLUMNS")
    by_col: list[list[tuple[str, float]]] = [[] for _ in model.columns]
    for r in model.rows:
        for j, v in r.coefs:
            by_col[j].append((r.name, v))
    in_int = False
    marker = 0
    for j, col in enumerate(model.columns):
        integer = col.kind != CONTINUOUS
        if integer != in_int:
            tag = "'INTORG'" if integer else "'INTEND'"
            out.append(entry("", f"MARKER{marker:04d}", "'MARKER'", None) + f"  {tag}")
            marker += 1
            in_int = integer
        items = [("OBJ", col.obj)] if col.obj != 0.0 or not by_col[j] else []
        items += by_col[j]
        for rname, v in items:
            out.append(entry("", col.name, rname, format_number(v)))
    if in_int:
        out.append(entry("", f"MARKER{marker:04d}", "'MARKER'", None) + "  'INTEND'")
    out.append("RHS")
    if model.objective_offset != 0.0:
        out.append(entry("", "RHS", "OBJ", format_number(-model.objective_offset)))
    for r in model.rows:
        if r.rhs != 0.0:
            out.append(entry("", "RHS", r.name, format_number(r.rhs)))
    out.append("BOUNDS")
    for col in model.columns:
        for code, v in _mps_bounds(col):
            out.append(entry(code, "BND", col.name, None if v is None else format_number(v)))
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def read_mps(text: str) -> MipModel:
    """Read MPS written by :func:`export_mps` (whitespace-separated fields)."""
    section = None
    name = ""
    row_sense: dict[str, str] = {}
    row_order: list[str] = []
    obj_row = None
    cols: dict[str, dict] = {}
    col_order: list[str] = []
    rhs: dict[str, float] = {}
    integer = False
    sense_of = {"L": "<=", "G": ">=", "E": "="}
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("*"):
            continue
        if not raw[0].isspace():
            head = raw.split()
            section = head[0]
            if section == "NAME":
                name = head[1] if len(head) > 1 else ""
            continue
        tok = raw.split()
        if section == "ROWS":
            code, rname = tok
            if code == "N":
                obj_row = rname
            else:
                row_sense[rname] = sense_of[code]
                row_order.append(rname)
        elif section == "COLUMNS":
            if len(tok) >= 3 and tok[1] == "'MARKER'":
                integer = tok[2] == "'INTORG'"
                continue
            cname = tok[0]
            if cname not in cols:
                cols[cname] = {"obj": 0.0, "coefs": {}, "integer": integer,
                               "lb": 0.0, "ub": math.inf, "binary": False}
                col_order.append(cname)
            for k in range(1, len(tok) - 1, 2):
                rname, v = tok[k], float(tok[k + 1])
                if rname == obj_row:
                    cols[cname]["obj"] = v
                else:
                    cols[cname]["coefs"][rname] = v
        elif section == "RHS":
            for k in range(1, len(tok) - 1, 2):
                rhs[tok[k]] = float(tok[k + 1])
        elif section == "BOUNDS":
            code, cname = tok[0], tok[2]
            c = cols[cname]
            v = float(tok[3]) if len(tok) > 3 else None
            if code == "BV":
                c.update(lb=0.0, ub=1.0, binary=True)
            elif code == "FX":
                c.update(lb=v, ub=v)
            elif code == "FR":
                c.update(lb=-math.inf, ub=math.inf)
            elif code == "MI":
                c["lb"] = -math.inf
            elif code == "PL":
                c["ub"] = math.inf
            elif code == "LO":
                c["lb"] = v
            elif code == "UP":
                c["ub"] = v
            else:
                raise ValueError(f"unsupported bound type {code}")
    columns = []
    for cname in col_order:
        c = cols[cname]
        kind = BINARY if c["binary"] else (INTEGER if c["integer"] else CONTINUOUS)
        columns.append(Column(cname, float(c["lb"]), float(c["ub"]), kind, c["obj"]))
    index = {cname: j for j, cname in enumerate(col_order)}
    terms: dict[str, list] = {r: [] for r in row_order}
    for cname in col_order:
        for rname, v in cols[cname]["coefs"].items():
            terms[rname].append((index[cname], v))
    rows = tuple(Row(r, tuple(sorted(terms[r])), row_sense[r], rhs.get(r, 0.0))
                 for r in row_order)
    offset = -rhs.get(obj_row, 0.0) if obj_row else 0.0
    return MipModel(name, tuple(columns), rows, offset + 0.0)


def _lp_expr(terms, names) -> list[str]:
    parts = []
    for k, (j, v) in enumerate(terms):
        mag = format_number(abs(v))
        sign = "-" if v < 0 else "+"
        coef = "" if mag == "1" else f"{mag} "
        if k == 0:
            parts.append(f"{'-' if v < 0 else ''}{coef}{names[j]}")
        else:
            parts.append(f"{sign} {coef}{names[j]}")
    return parts


def _wrap(head: str, parts: list[str], tail: str = "", width: int = 78) -> list[str]:
    lines, cur = [], head
    for part in parts + ([tail] if tail else []):
        if len(cur) + 1 + len(part) > width and cur.strip():
            lines.append(cur)
            cur = "   " + part
        else:
            cur = f"{cur} {part}" if cur else part
    lines.append(cur)
    return lines


def export_lp(model: MipModel) -> str:
    """CPLEX LP text of the model (minimisation)."""
    names = [c.name for c in model.columns]
    assert len(set(names)) == len(names), "column names must be unique"
    out = [f"\\ {model.name}", "Minimize"]
    obj = [(j, c.obj) for j, c in enumerate(model.columns) if c.obj != 0.0]
    parts = _lp_expr(obj, names) or ["0 " + names[0]] if model.columns else []
    if model.objective_offset != 0.0:
        off = model.objective_offset
        parts.append(f"{'-' if off < 0 else '+'} {format_number(abs(off))}")
    out += _wrap(" obj:", parts)
    out.append("Subject To")
    for r in model.rows:
        expr = _lp_expr(r.coefs, names) or ["0 " + names[0]]
        out += _wrap(f" {r.name}:", expr, f"{r.sense} {format_number(r.rhs)}")
    out.append("Bounds")
    for c in model.columns:
        if c.kind == BINARY and c.lb == 0.0 and c.ub == 1.0:
            continue
        if c.lb == c.ub:
            out.append(f" {c.name} = {format_number(c.lb)}")
        elif math.isinf(c.lb) and math.isinf(c.ub):
            out.append(f" {c.name} free")
        else:
            lo = "-inf" if math.isinf(c.lb) else format_number(c.lb)
            hi = "+inf" if math.isinf(c.ub) else format_number(c.ub)
            out.append(f" {lo} <= {c.name} <= {hi}")
    gens = [c.name for c in model.columns if c.kind == INTEGER]
    bins = [c.name for c in model.columns if c.kind == BINARY]
    if gens:
        out.append("General")
        out += _wrap("", gens)
    if bins:
        out.append("Binary")
        out += _wrap("", bins)
    out.append("End")
    return "\n".join(out) + "\n"


__all__ = ["parse_instance", "serialize_instance", "load_instance", "write_schedule",
           "read_schedule", "export_mps", "read_mps", "export_lp", "format_number",
           "CSV_HEADER"]
