"""Quasi-p-regular decompositions of Lie groups and the symmetric-space case database."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any

from . import arith
from .errors import (
    NotQuasiRegularError,
    ParameterError,
    ParseError,
    PrimeError,
    SlotError,
    UnsupportedError,
    ValidationError,
)
from .space import Atom, SpaceExpr, bcell, make, parse, point, product, rational_type, sphere

RECIPES = (
    "SLOT_MATCH",
    "SLOT_MATCH_WITH_S1",
    "HARRIS_COMPLEMENT",
    "PRODUCT_SPLIT",
    "REDUCTION",
    "ASSEMBLY",
    "EXTENSION_P7",
    "UNDETERMINED_P7",
)
SLOT_MATCH_FAMILY = ("SLOT_MATCH", "SLOT_MATCH_WITH_S1", "PRODUCT_SPLIT", "REDUCTION", "EXTENSION_P7")

EXCEPTIONAL_FAMILIES = ("G2", "F4", "E6", "E7", "E8")
PARAM_FAMILIES = ("SU", "Sp", "SO", "Spin", "U", "Ss", "PSp")


@lru_cache(maxsize=None)
def _load(name: str) -> dict:
    text = resources.files("loopdecomp").joinpath("data").joinpath(name).read_text(encoding="utf-8")
    return json.loads(text)


def group_data() -> dict:
    return _load("groups.json")


def case_data() -> dict:
    return _load("cases.json")


# groups ------------------------------------------------------------------

@dataclass(frozen=True)
class GroupId:
    family: str
    n: int = 0
    parts: tuple["GroupId", ...] = ()
    quotient: str = ""

    def __str__(self) -> str:
        if self.family == "prod":
            return "·".join(str(g) for g in self.parts)
        if self.family == "S":
            return f"S^{self.n}"
        if self.family in EXCEPTIONAL_FAMILIES or self.family == "T1":
            return self.family
        text = f"{self.family}({self.n})"
        if self.quotient:
            text += "/" + self.quotient
        return text


_COMPONENT = re.compile(
    r"""^(?:
        (?P<fam>SU|Sp|SO|Spin|U|Ss|PSp)\((?P<arg>[^()]*(?:\([^()]*\)[^()]*)*)\)(?P<quot>/\{\s*(?:±|\+-|\+/-)\s*I\s*\})?
      | (?P<exc>G2|F4|E6|E7|E8)
      | (?P<torus>T1|T\^1|S1|S\^1)
      | S\^\{?(?P<sph>[^{}]+)\}?
    )$""",
    re.VERBOSE,
)


def _split_product(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        if depth == 0 and ch in "·.*×":
            parts.append("".join(cur))
            cur = []
            continue
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def parse_group(text: str, **params) -> GroupId:
    """Parse tokens like ``SU(8)``, ``Spin(9)``, ``SU(2)·Sp(3)``, ``SU(8)/{±I}``.

    Arguments may be templates in the case parameters, e.g. ``SU(2n+1)``.
    """
    text = text.strip()
    comps = _split_product(text)
    if not comps:
        raise ParseError(f"empty group token {text!r}")
    if len(comps) > 1:
        return GroupId("prod", parts=tuple(parse_group(c, **params) for c in comps))
    m = _COMPONENT.match(comps[0].replace(" ", ""))
    if not m:
        raise ParseError(f"cannot parse group {text!r}")
    if m.group("exc"):
        return GroupId(m.group("exc"))
    if m.group("torus"):
        return GroupId("T1")
    if m.group("sph"):
        return GroupId("S", arith.integer(m.group("sph"), **params))
    n = arith.integer(m.group("arg"), **params)
    if n < 0:
        raise ParseError(f"negative rank in {text!r}")
    quot = "{±I}" if m.group("quot") else ""
    if quot and (m.group("fam") != "SU" or n != 8):
        raise UnsupportedError(f"central quotient {text!r} is not in the catalog")
    return GroupId(m.group("fam"), n, quotient=quot)


@dataclass(frozen=True)
class Decomposition:
    expr: SpaceExpr
    citations: tuple[str, ...]


def _cond_fails(group, p, condition):
    raise NotQuasiRegularError(str(group), p, condition)


def _su_atoms(n: int, p: int) -> list[Atom]:
    atoms = [bcell(2 * i - 1, 2 * i + 2 * p - 3) for i in range(2, n - p + 2)]
    atoms += [sphere(2 * j - 1) for j in range(max(2, n - p + 2), min(n, p) + 1)]
    return atoms


def _sp_atoms(n: int, p: int) -> list[Atom]:
    h = (p - 1) // 2
    atoms = [bcell(4 * i - 1, 4 * i + 2 * p - 3) for i in range(1, n - h + 1)]
    # the printed lower sphere index n-(p-3)/2 is clamped at 1
    atoms += [sphere(4 * j - 1) for j in range(max(1, n - (p - 3) // 2), min(n, h) + 1)]
    return atoms


def _so_even_atoms(n: int, p: int) -> list[Atom]:
    h = (p - 1) // 2
    atoms = [bcell(4 * i - 1, 4 * i + 2 * p - 3) for i in range(1, n - (p + 1) // 2 + 1)]
    atoms += [sphere(4 * j - 1) for j in range(max(1, n - h), min(n - 1, h) + 1)]
    if n >= 1:
        atoms.append(sphere(2 * n - 1))
    return atoms


def _extension_entry(key: str, p: int) -> SpaceExpr | None:
    entry = group_data()["extension"].get(key, {}).get(str(p))
    return parse(entry, p) if entry else None


def _classical(g: GroupId, p: int) -> Decomposition:
    fam, n = g.family, g.n
    mt = group_data()["classical_citation"]
    harris = group_data()["harris_citation"]
    if fam == "SU":
        if n <= 1:
            return Decomposition(point(p), ())
        if not 2 * p > n:
            _cond_fails(g, p, "p > n/2")
        return Decomposition(make(p, *_su_atoms(n, p)), (mt,))
    if fam == "U":
        if n == 0:
            return Decomposition(point(p), ())
        su = _classical(GroupId("SU", n), p)
        return Decomposition(product(make(p, sphere(1)), su.expr),
                             su.citations + ("U(n) is S^1 x SU(n)",))
    if fam == "Sp":
        if n == 0:
            return Decomposition(point(p), ())
        if not p > n:
            _cond_fails(g, p, "p > n")
        return Decomposition(make(p, *_sp_atoms(n, p)), (mt,))
    if fam in ("SO", "Spin"):
        if n <= 1:
            return Decomposition(point(p), ())
        ext = _extension_entry(str(g), p)
        if n % 2:
            k = (n - 1) // 2
            if not p > k:
                if ext is not None:
                    return Decomposition(ext, (group_data()["extension_citation"],))
                _cond_fails(g, p, f"p > {k}")
            return Decomposition(make(p, *_sp_atoms(k, p)), (mt, harris))
        k = n // 2
        if not p > k - 1:
            if ext is not None:
                return Decomposition(ext, (group_data()["extension_citation"],))
            _cond_fails(g, p, f"p > {k - 1}")
        return Decomposition(make(p, *_so_even_atoms(k, p)), (mt, harris))
    raise UnsupportedError(f"no decomposition rule for {g}")


def decompose(g: GroupId | str, p: int) -> Decomposition:
    """qr_decomposition together with the citations used."""
    if isinstance(g, str):
        g = parse_group(g)
    if p < 5 or not _prime(p):
        raise ValidationError(f"prime must be a prime >= 5, got {p}")
    if g.family == "prod":
        parts = [decompose(c, p) for c in g.parts]
        cites = tuple(dict.fromkeys(c for d in parts for c in d.citations))
        return Decomposition(product(*(d.expr for d in parts)), cites)
    if g.family == "S":
        if g.n % 2 == 0:
            raise ValidationError(f"{g} is not an odd sphere")
        return Decomposition(make(p, sphere(g.n)), ())
    if g.family == "T1":
        return Decomposition(make(p, sphere(1)), ())
    data = group_data()
    ext = _extension_entry(str(g), p)
    if g.family in EXCEPTIONAL_FAMILIES:
        for band in data["exceptional"][g.family]:
            if arith.holds(band["primes"], p=p):
                return Decomposition(parse(band["atoms"], p), (data["exceptional_citation"],))
        if ext is not None:
            return Decomposition(ext, (data["extension_citation"],))
        least = data["exceptional"][g.family][0]["primes"]
        _cond_fails(g, p, least.replace("=", ">=") if ">" not in least else least)
    if str(g) in data["rewrites"]:
        if ext is not None:
            return Decomposition(ext, (data["extension_citation"],))
        rule = data["rewrites"][str(g)]
        inner = decompose(parse_group(rule["to"]), p)
        return Decomposition(inner.expr, (rule["citation"],) + inner.citations)
    return _classical(g, p)


def qr_decomposition(g: GroupId | str, p: int) -> SpaceExpr:
    return decompose(g, p).expr


def _prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def reference_type(g: GroupId | str) -> tuple[int, ...]:
    """Known generator degrees of a group, independent of any prime."""
    if isinstance(g, str):
        g = parse_group(g)
    fam, n = g.family, g.n
    if fam == "prod":
        return tuple(sorted(d for c in g.parts for d in reference_type(c)))
    fixed = {
        "G2": (3, 11),
        "F4": (3, 11, 15, 23),
        "E6": (3, 9, 11, 15, 17, 23),
        "E7": (3, 11, 15, 19, 23, 27, 35),
        "E8": (3, 15, 23, 27, 35, 39, 47, 59),
        "T1": (1,),
    }
    if fam in fixed:
        return fixed[fam]
    if fam == "S":
        return (n,)
    if fam == "SU":
        return tuple(range(3, 2 * n, 2))
    if fam == "U":
        return tuple(range(1, 2 * n, 2))
    if fam == "Sp":
        return tuple(range(3, 4 * n, 4))
    if fam in ("SO", "Spin"):
        if n <= 1:
            return ()
        if n % 2:
            return tuple(range(3, 2 * n - 2, 4))
        k = n // 2
        return tuple(sorted(list(range(3, 4 * k - 4, 4)) + [2 * k - 1]))
    if fam == "PSp" and n == 4:
        return reference_type("Spin(9)")
    if fam == "Ss" and n == 16:
        return reference_type("Spin(16)")
    raise UnsupportedError(f"no reference type for {g}")


def slot_index(atom: Atom, p: int) -> int:
    b = atom.bottom
    if b % 2 == 0 or not 3 <= b <= 4 * p - 3:
        raise SlotError(f"{atom} has bottom cell {b} outside 3..{4 * p - 3} at p={p}")
    m = (b + 1) // 2
    return m if m <= p else m - (p - 1)


# cases -------------------------------------------------------------------

@dataclass(frozen=True)
class CaseRecord:
    key: str
    cartan_type: str
    label: str
    params: dict
    prime: int
    prime_condition: str
    recipe: str
    D: tuple[int, ...]
    D_citation: str
    G: GroupId
    H: GroupId
    citations: tuple[str, ...]
    extra: dict = field(default_factory=dict, compare=False, hash=False)
    table_bands: tuple[str, ...] = ()

    def __str__(self) -> str:
        if self.params:
            args = ",".join(f"{k}={v}" for k, v in self.params.items())
            return f"{self.key}[{args}]"
        return self.key

    def group(self, key: str) -> GroupId:
        return parse_group(self.extra[key], **self.params)


def case_keys() -> list[str]:
    data = case_data()
    return [c["key"] for c in data["classical"]] + [c["key"] for c in data["exceptional"]]


def _raw_case(key: str) -> tuple[dict, bool]:
    data = case_data()
    for family, classical in (("classical", True), ("exceptional", False)):
        for c in data[family]:
            if c["key"] == key:
                return c, classical
    matches = [c["key"] for c in data["classical"] if c["type"] == key]
    if len(matches) == 1:
        return _raw_case(matches[0])
    if matches:
        raise ParameterError(f"{key} has several rows; pick one of {', '.join(matches)}")
    raise UnsupportedError(f"unknown case {key!r}; known: {', '.join(case_keys())}")


def is_classical(key: str) -> bool:
    return _raw_case(key)[1]


def raw_case(key: str) -> dict:
    return _raw_case(key)[0]


def _eval_D(spec: Any, params: dict, p: int) -> tuple[int, ...]:
    if isinstance(spec, list):
        return tuple(sorted(spec))
    spec = spec.strip()
    if spec.startswith("type(") and spec.endswith(")"):
        g = parse_group(spec[5:-1], **params)
        return rational_type(qr_decomposition(g, p))
    if spec.startswith("arith(") and spec.endswith(")"):
        start, stop, step = (arith.integer(x, **params) for x in spec[6:-1].split(","))
        return tuple(range(start, stop + 1, step))
    raise ParseError(f"cannot read degree set {spec!r}")


def case_record(key: str, params: dict | None = None, p: int = 5) -> CaseRecord:
    raw, classical = _raw_case(key)
    params = dict(params or {})
    names = raw.get("params", [])
    unknown = set(params) - set(names)
    missing = [n for n in names if n not in params]
    if unknown or missing:
        raise ParameterError(
            f"{raw['key']} takes parameters {names}; got {sorted(params)}"
        )
    params = {k: int(params[k]) for k in names}
    side = raw.get("side")
    if side and not arith.holds(side, **params):
        raise ParameterError(f"{raw['key']}: side condition {side} fails for {params}")
    band = None
    for b in raw["bands"]:
        if arith.holds(b["primes"], p=p, **params):
            band = b
            break
    if band is None:
        conds = " or ".join(b["primes"] for b in raw["bands"])
        raise PrimeError(f"{raw['key']} {params or ''} needs {conds}; got p={p}".replace("  ", " "))
    D = _eval_D(band["D"], params, p)
    extra = {k: v for k, v in band.items() if k not in ("primes", "recipe", "D", "D_citation")}
    return CaseRecord(
        key=raw["key"],
        cartan_type=raw["type"],
        label=raw["label"],
        params=params,
        prime=p,
        prime_condition=band["primes"],
        recipe=band["recipe"],
        D=D,
        D_citation=band["D_citation"],
        G=parse_group(raw["G"], **params),
        H=parse_group(raw["H"], **params),
        citations=tuple(raw.get("citations", [])),
        extra=extra,
        table_bands=tuple(raw.get("table_bands", [])),
    )
