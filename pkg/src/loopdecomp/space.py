"""Formal p-local space expressions.

An expression is a finite product of atoms, each possibly looped once.
Atoms are opaque symbols carrying their odd cell dimensions: the point,
the circle, odd spheres, and the two families of few-cell complexes
A(c1, ..., ck) (skeleta) and B(c1, ..., ck) (the H-spaces they generate).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable

from .errors import ContractError, ParseError, ValidationError

KINDS = ("pt", "S1", "S", "A", "B")
_KIND_RANK = {"pt": 0, "S1": 1, "S": 2, "A": 3, "B": 4}


@dataclass(frozen=True)
class Atom:
    kind: str
    cells: tuple[int, ...] = ()

    @property
    def bottom(self) -> int:
        return self.cells[0] if self.cells else 0

    @property
    def top(self) -> int:
        return self.cells[-1] if self.cells else 0

    @property
    def is_point(self) -> bool:
        return self.kind == "pt"

    def with_kind(self, kind: str) -> "Atom":
        if self.kind in ("A", "B"):
            return Atom(kind, self.cells)
        return self

    def __str__(self) -> str:
        return render_atom(self)


POINT = Atom("pt", ())
CIRCLE = Atom("S1", (1,))


def sphere(d: int) -> Atom:
    if d == 1:
        return CIRCLE
    return Atom("S", (d,))


def acell(*cells: int) -> Atom:
    return Atom("A", tuple(cells))


def bcell(*cells: int) -> Atom:
    return Atom("B", tuple(cells))


def cell_atom(cells: Iterable[int], kind: str = "B") -> Atom:
    """Smallest atom with the given cells: point, sphere, or a few-cell complex."""
    cells = tuple(cells)
    if not cells:
        return POINT
    if len(cells) == 1:
        return sphere(cells[0])
    return Atom(kind, cells)


def validate_atom(atom: Atom, p: int, looped: bool = False) -> None:
    kind, cells = atom.kind, atom.cells
    if kind not in KINDS:
        raise ValidationError(f"unknown atom kind {kind!r}")
    if kind == "pt":
        if cells:
            raise ValidationError("point atom carries no cells")
        return
    if kind == "S1":
        if cells != (1,):
            raise ValidationError(f"malformed circle atom {cells}")
        return
    if kind == "S":
        if len(cells) != 1:
            raise ValidationError(f"sphere atom needs one cell, got {cells}")
        d = cells[0]
        if d < 2:
            raise ValidationError(f"sphere S^{d} out of range")
        if d % 2 == 0 and not looped:
            raise ValidationError(f"even sphere S^{d} may only appear looped")
        return
    if len(cells) < 2:
        raise ValidationError(f"{kind}-atom needs at least two cells, got {cells}")
    if cells[0] < 3 or any(c % 2 == 0 for c in cells):
        raise ValidationError(f"{render_atom(atom)}: cells must be odd and at least 3")
    gap = 2 * (p - 1)
    for a, b in zip(cells, cells[1:]):
        if b - a != gap:
            raise ValidationError(
                f"{render_atom(atom)}: consecutive cells must differ by {gap} at p={p}"
            )


@dataclass(frozen=True)
class Factor:
    atom: Atom
    looped: bool = False

    def sort_key(self):
        return (self.atom.bottom, _KIND_RANK[self.atom.kind], self.looped, self.atom.cells)


@dataclass(frozen=True)
class SpaceExpr:
    prime: int
    factors: tuple[Factor, ...] = ()

    def __post_init__(self):
        if not isinstance(self.prime, int) or self.prime < 5 or not _is_prime(self.prime):
            raise ValidationError(f"prime must be a prime >= 5, got {self.prime!r}")
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            validate_atom(f.atom, self.prime, f.looped)

    @property
    def is_point(self) -> bool:
        return all(f.atom.is_point for f in self.factors)

    @property
    def has_loops(self) -> bool:
        return any(f.looped for f in self.factors)

    def atoms(self) -> list[Atom]:
        return [f.atom for f in self.factors if not f.atom.is_point]

    def __mul__(self, other: "SpaceExpr") -> "SpaceExpr":
        return product(self, other)

    def __str__(self) -> str:
        return render(self)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def make(p: int, *items) -> SpaceExpr:
    """Build and normalize.  Items are atoms or (atom, looped) pairs."""
    factors = []
    for it in items:
        if isinstance(it, Factor):
            factors.append(it)
        elif isinstance(it, Atom):
            factors.append(Factor(it, False))
        else:
            atom, looped = it
            factors.append(Factor(atom, bool(looped)))
    return normalize(SpaceExpr(p, tuple(factors)))


def point(p: int) -> SpaceExpr:
    return SpaceExpr(p, ())


def normalize(expr: SpaceExpr) -> SpaceExpr:
    out = []
    for f in expr.factors:
        atom = f.atom
        if atom.is_point:
            continue
        if atom.kind == "S1" and f.looped:
            continue
        if atom.kind == "S" and atom.cells[0] % 2 == 0:
            # odd-primary splitting of the loops on an even sphere
            n2 = atom.cells[0]
            out.append(Factor(sphere(n2 - 1), False))
            out.append(Factor(sphere(2 * n2 - 1), True))
            continue
        out.append(f)
    out.sort(key=Factor.sort_key)
    return SpaceExpr(expr.prime, tuple(out))


def product(*exprs: SpaceExpr) -> SpaceExpr:
    if not exprs:
        raise ContractError("product of no expressions")
    p = exprs[0].prime
    if any(e.prime != p for e in exprs):
        raise ContractError("cannot multiply expressions at different primes")
    return normalize(SpaceExpr(p, tuple(f for e in exprs for f in e.factors)))


def loop(expr: SpaceExpr) -> SpaceExpr:
    if expr.has_loops:
        raise ContractError(f"cannot loop {render(expr)} twice")
    return normalize(SpaceExpr(expr.prime, tuple(Factor(f.atom, True) for f in expr.factors)))


def skeleton(atom: Atom) -> Atom:
    if atom.kind == "B":
        return Atom("A", atom.cells)
    return atom


def rational_type(expr: SpaceExpr) -> tuple[int, ...]:
    """Generator degrees, as a sorted tuple standing for a multiset."""
    if expr.has_loops:
        raise ContractError("rational_type is defined for loop-free expressions only")
    return tuple(sorted(c for f in expr.factors for c in f.atom.cells))


def homotopy_degrees(expr: SpaceExpr) -> tuple[int, ...]:
    """Degrees of the rational homotopy of the space the expression denotes."""
    out = []
    for f in expr.factors:
        if not f.looped:
            out.extend(f.atom.cells)
        elif f.atom.kind == "S" and f.atom.cells[0] % 2 == 0:
            d = f.atom.cells[0]
            out.extend((d - 1, 2 * d - 2))
        else:
            out.extend(c - 1 for c in f.atom.cells if c > 1)
    return tuple(sorted(out))


def cells_by_loop(expr: SpaceExpr) -> tuple[tuple[int, ...], tuple[int, ...]]:
    unlooped = sorted(c for f in expr.factors if not f.looped for c in f.atom.cells)
    looped = sorted(c for f in expr.factors if f.looped for c in f.atom.cells)
    return tuple(unlooped), tuple(looped)


# rendering ----------------------------------------------------------------

def render_atom(atom: Atom) -> str:
    if atom.kind == "pt":
        return "*"
    if atom.kind == "S1":
        return "S^1"
    if atom.kind == "S":
        return f"S^{atom.cells[0]}"
    return f"{atom.kind}({','.join(str(c) for c in atom.cells)})"


def render(expr: SpaceExpr, sep: str = " x ", omega: str = "Ω") -> str:
    parts = [(omega if f.looped else "") + render_atom(f.atom)
             for f in expr.factors if not f.atom.is_point]
    return sep.join(parts) if parts else "*"


def to_dict(expr: SpaceExpr) -> dict:
    factors = []
    for f in normalize(expr).factors:
        kind = f.atom.kind
        factors.append({"kind": kind, "cells": list(f.atom.cells), "looped": f.looped})
    return {"prime": expr.prime, "factors": factors}


def from_dict(data: dict) -> SpaceExpr:
    try:
        p = int(data["prime"])
        factors = []
        for item in data["factors"]:
            kind = item["kind"]
            if kind not in ("S1", "S", "A", "B"):
                raise ParseError(f"unknown factor kind {kind!r}")
            factors.append(Factor(Atom(kind, tuple(int(c) for c in item["cells"])),
                                  bool(item["looped"])))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed expression object: {exc}") from exc
    return normalize(SpaceExpr(p, tuple(factors)))


def to_json(expr: SpaceExpr) -> str:
    return json.dumps(to_dict(expr), separators=(",", ":"))


def from_json(text: str) -> SpaceExpr:
    return from_dict(json.loads(text))


_TOKEN = re.compile(
    r"""^(?P<loop>Ω|Omega|\\Omega)?
        (?:
          S\^?\{?(?P<dim>\d+)\}?
        | (?P<kind>[AB])\((?P<cells>[\d,\s]+)\)
        )$""",
    re.VERBOSE,
)


def parse(text: str, p: int) -> SpaceExpr:
    """Parse the plain or markdown rendering back into an expression.

    Accepts separators ``x``, ``×`` and ``\\times`` and the point ``*``.
    """
    text = text.strip().replace("\\times", "×").replace("$", "")
    if text in ("*", "pt", ""):
        return point(p)
    tokens = [t.strip() for t in re.split(r"\s+x\s+|×", text)]
    factors = []
    for tok in tokens:
        m = _TOKEN.match(re.sub(r"\s+", "", tok))
        if not m:
            raise ParseError(f"cannot parse factor {tok!r}")
        looped = m.group("loop") is not None
        if m.group("dim"):
            atom = sphere(int(m.group("dim")))
        else:
            cells = tuple(int(c) for c in m.group("cells").split(","))
            atom = Atom(m.group("kind"), cells)
        factors.append(Factor(atom, looped))
    return normalize(SpaceExpr(p, tuple(factors)))
