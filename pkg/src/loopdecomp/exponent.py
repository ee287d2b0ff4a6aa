"""p-primary homotopy exponent bounds for decomposition outputs.

Spheres have exponent p^n on S^{2n+1}.  B(3, 2p+1) has exponent p^(p+1), and
the other two-cell B(2m-1, 2m+2p-3) lie between p^(m+p-2) and p^(m+p-1).
Looping does not change an exponent, and a product takes the factor-wise max.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import CaseRecord
from .errors import ContractError, UnsupportedError
from .fibre import loop_decomposition
from .space import Atom, SpaceExpr


@dataclass(frozen=True, order=True)
class ExponentInterval:
    lo: int
    hi: int

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise ContractError(f"bad exponent interval [{self.lo}, {self.hi}]")

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def join(self, other: "ExponentInterval") -> "ExponentInterval":
        return ExponentInterval(max(self.lo, other.lo), max(self.hi, other.hi))

    def describe(self, p: int | str = "p") -> str:
        if self.exact:
            return f"exp = {p}^{self.lo}"
        return f"{p}^{self.lo} ≤ exp ≤ {p}^{self.hi}"

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


ZERO = ExponentInterval(0, 0)


def exponent_atom(atom: Atom, looped: bool, p: int) -> ExponentInterval:
    """Exponent interval of one factor; the loop flag does not matter."""
    if atom.kind in ("pt", "S1"):
        return ZERO
    if atom.kind == "S":
        d = atom.cells[0]
        if d % 2 == 0:
            raise UnsupportedError(f"even sphere {atom} has no entry; split its loops first")
        return ExponentInterval((d - 1) // 2, (d - 1) // 2)
    if len(atom.cells) != 2:
        raise UnsupportedError(f"no exponent bound is known for {atom}")
    a, b = atom.cells
    if b - a != 2 * (p - 1):
        raise UnsupportedError(f"{atom} is not a two-cell complex at p={p}")
    m = (a + 1) // 2
    if m == 2:
        return ExponentInterval(p + 1, p + 1)
    return ExponentInterval(m + p - 2, m + p - 1)


def exponent(expr: SpaceExpr, p: int | None = None) -> ExponentInterval:
    p = expr.prime if p is None else p
    out = ZERO
    for f in expr.factors:
        out = out.join(exponent_atom(f.atom, f.looped, p))
    return out


@dataclass(frozen=True)
class ExponentReport:
    case: str
    prime: int
    interval: ExponentInterval
    top_sphere: int

    @property
    def exact(self) -> bool:
        return self.interval.exact

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "prime": self.prime,
            "lo": self.interval.lo,
            "hi": self.interval.hi,
            "exact": self.exact,
            "top_sphere": self.top_sphere,
        }


def exponent_report(c: CaseRecord, p: int | None = None) -> ExponentReport:
    """Exponent of G/H, which agrees with that of its loop space.

    `top_sphere` is the largest rational sphere dimension among the factors,
    given so the top-dimension reading of classical bounds can be compared.
    """
    expr = loop_decomposition(c, p)
    top = max((f.atom.top for f in expr.factors), default=0)
    return ExponentReport(str(c), expr.prime, exponent(expr), top)
