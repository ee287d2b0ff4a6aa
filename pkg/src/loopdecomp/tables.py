"""Markdown and JSON emitters for the classical and exceptional result tables."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from . import arith
from .catalog import case_keys, case_record, is_classical, raw_case
from .errors import LoopDecompError
from .exponent import ExponentInterval, exponent_report
from .fibre import loop_decomposition
from .space import SpaceExpr, render, to_dict

SWEEP_PRIMES = (5, 7, 11, 13)
_PRIMES = (5, 7, 11, 13, 17, 19, 23, 29, 31)


def band_prime(band: str) -> int:
    """Listed prime of a band like "p=5", or the least prime of "p>=7"."""
    if band.startswith("p>="):
        low = int(band[3:])
        return next(q for q in _PRIMES if q >= low)
    if band.startswith("p="):
        return int(band[2:])
    raise ValueError(f"cannot read prime band {band!r}")


def band_label(band: str) -> str:
    return band.replace(">=", "≥")


def exponent_text(iv: ExponentInterval) -> str:
    return f"= p^{iv.lo}" if iv.exact else f"≤ p^{iv.hi}"


@dataclass(frozen=True)
class BandEntry:
    band: str
    prime: int
    expression: SpaceExpr
    exponent: str


@dataclass(frozen=True)
class ExceptionalRow:
    key: str
    label: str
    entries: tuple[BandEntry, ...]


def exceptional_keys() -> list[str]:
    return [k for k in case_keys() if not is_classical(k)]


def exceptional_rows() -> list[ExceptionalRow]:
    rows = []
    for key in exceptional_keys():
        raw = raw_case(key)
        entries = []
        for band in raw["table_bands"]:
            p = band_prime(band)
            c = case_record(key, {}, p)
            expr = loop_decomposition(c)
            entries.append(BandEntry(band, p, expr, exponent_text(exponent_report(c).interval)))
        rows.append(ExceptionalRow(key, raw["label"], tuple(entries)))
    return rows


def exceptional_markdown(rows: list[ExceptionalRow]) -> str:
    lines = [
        "| Type | G/H | Ω(G/H) | Exponent |",
        "|---|---|---|---|",
    ]
    for row in rows:
        loops = "<br>".join(f"{band_label(e.band)}: {render(e.expression)}" for e in row.entries)
        exps = "<br>".join(f"{band_label(e.band)}: {e.exponent}" for e in row.entries)
        lines.append(f"| {row.key} | {row.label} | {loops} | {exps} |")
    return "\n".join(lines) + "\n"


def exceptional_json(rows: list[ExceptionalRow]) -> str:
    data = [
        {
            "type": row.key,
            "label": row.label,
            "bands": [
                {
                    "band": e.band,
                    "prime": e.prime,
                    "expression": render(e.expression, omega="Omega"),
                    "factors": to_dict(e.expression),
                    "exponent": e.exponent,
                }
                for e in row.entries
            ],
        }
        for row in rows
    ]
    return json.dumps(data, indent=2, ensure_ascii=True) + "\n"


def golden_exceptional() -> str:
    ref = resources.files("loopdecomp").joinpath("data").joinpath("golden").joinpath("exceptional.md")
    return ref.read_text(encoding="utf-8")


# classical sweep ------------------------------------------------------------

@dataclass(frozen=True)
class SweepPoint:
    key: str
    params: dict
    prime: int
    status: str
    expression: SpaceExpr | None
    note: str = ""


def _param_grid(key: str, max_n: int) -> list[dict]:
    raw = raw_case(key)
    names = raw.get("params", [])
    side = raw.get("side")
    out = []
    for n in range(1, max_n + 1):
        ms = range(1, n + 1) if "m" in names else [None]
        for m in ms:
            params = {"n": n} if m is None else {"n": n, "m": m}
            if side and not arith.holds(side, **params):
                continue
            out.append(params)
    return out


def classical_sweep(max_n: int = 6, primes=SWEEP_PRIMES) -> list[SweepPoint]:
    """Evaluate every classical row with n <= max_n at each prime meeting its condition."""
    points = []
    for key in case_keys():
        if not is_classical(key):
            continue
        cond = raw_case(key)["bands"][0]["primes"]
        for params in _param_grid(key, max_n):
            for p in primes:
                if not arith.holds(cond, p=p, **params):
                    continue
                try:
                    expr = loop_decomposition(case_record(key, params, p))
                    points.append(SweepPoint(key, params, p, "ok", expr))
                except LoopDecompError as exc:
                    points.append(SweepPoint(key, params, p, "error", None, str(exc)))
    return points


def _params_text(params: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in params.items())


def classical_markdown(points: list[SweepPoint]) -> str:
    lines = ["| Row | Parameters | p | Ω(G/H) |", "|---|---|---|---|"]
    for pt in points:
        cell = render(pt.expression) if pt.expression is not None else f"error: {pt.note}"
        lines.append(f"| {pt.key} | {_params_text(pt.params)} | {pt.prime} | {cell} |")
    return "\n".join(lines) + "\n"


def classical_json(points: list[SweepPoint]) -> str:
    data = []
    for pt in points:
        item = {"row": pt.key, "params": pt.params, "prime": pt.prime, "status": pt.status}
        if pt.expression is not None:
            item["expression"] = render(pt.expression, omega="Omega")
            item["factors"] = to_dict(pt.expression)
        else:
            item["error"] = pt.note
        data.append(item)
    return json.dumps(data, indent=2, ensure_ascii=True) + "\n"


def plain(points_or_rows) -> str:
    out = []
    for item in points_or_rows:
        if isinstance(item, ExceptionalRow):
            for e in item.entries:
                out.append(f"{item.key} {e.band}: {render(e.expression)} | exp {e.exponent}")
        else:
            cell = render(item.expression) if item.expression is not None else f"error: {item.note}"
            out.append(f"{item.key} [{_params_text(item.params)}] p={item.prime}: {cell}")
    return "\n".join(out) + "\n"
