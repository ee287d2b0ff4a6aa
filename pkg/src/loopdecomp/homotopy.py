"""p-local homotopy groups of odd spheres and two-cell B-spaces in the Toda range.

Offsets are measured from the bottom cell: the group asked for is
pi_{2m-1+t} of S^{2m-1} or of B(2m-1, 2m+2p-3), valid for
1 <= t <= 2p(p-1)-3.  Anything outside that window raises.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import (
    ExcludedCaseError,
    LoopDecompError,
    NotApplicableError,
    OutOfRangeError,
    ValidationError,
)
from .space import Atom


class GroupDesc(enum.Enum):
    ZERO = "0"
    ZMODP = "Z/p"
    ZMODP2 = "Z/p^2"
    ZLOCAL = "Z_(p)"

    def __str__(self) -> str:
        return self.value

    @property
    def is_zero(self) -> bool:
        return self is GroupDesc.ZERO


@dataclass(frozen=True)
class RangeQuery:
    m: int
    t: int
    p: int

    def check(self) -> None:
        if self.p < 5:
            raise ValidationError(f"prime must be at least 5, got {self.p}")
        if self.m < 2:
            raise ValidationError(f"slot parameter m must be at least 2, got {self.m}")
        if not 1 <= self.t <= window(self.p):
            raise OutOfRangeError(
                f"offset t={self.t} outside 1..{window(self.p)} at p={self.p}"
            )


def window(p: int) -> int:
    return 2 * p * (p - 1) - 3


def _odd_family(t: int, p: int, lo: int) -> bool:
    # t = 2i(p-1) - 1 with lo <= i <= p-1
    if (t + 1) % (2 * (p - 1)):
        return False
    return lo <= (t + 1) // (2 * (p - 1)) <= p - 1


def _even_family(t: int, p: int, lo: int) -> bool:
    # t = 2i(p-1) - 2 with lo <= i <= p-1
    if (t + 2) % (2 * (p - 1)):
        return False
    return lo <= (t + 2) // (2 * (p - 1)) <= p - 1


def pi_sphere(m: int, t: int, p: int) -> GroupDesc:
    """pi_{2m-1+t}(S^{2m-1}) localized at p."""
    RangeQuery(m, t, p).check()
    if _odd_family(t, p, 1):
        return GroupDesc.ZMODP
    if _even_family(t, p, m):
        return GroupDesc.ZMODP
    return GroupDesc.ZERO


def pi_B(m: int, t: int, p: int) -> GroupDesc:
    """pi_{2m-1+t}(B(2m-1, 2m+2p-3)) localized at p."""
    RangeQuery(m, t, p).check()
    if _odd_family(t, p, 2):
        return GroupDesc.ZMODP2
    if t == 2 * p - 2:
        return GroupDesc.ZLOCAL
    # the B(3, 2p+1) row has no even family
    if m > 2 and _even_family(t, p, m):
        return GroupDesc.ZMODP
    return GroupDesc.ZERO


def pi_atom(atom: Atom, k: int, p: int) -> GroupDesc:
    """pi_k of a sphere or two-cell B/A atom, using connectivity below the bottom cell.

    For an A-skeleton the answer agrees with its B-space below the product cell,
    which is the only range this is asked about.
    """
    if atom.is_point:
        return GroupDesc.ZERO
    if atom.kind == "S1":
        return GroupDesc.ZLOCAL if k == 1 else GroupDesc.ZERO
    b = atom.bottom
    if k < b:
        return GroupDesc.ZERO
    if k == b:
        return GroupDesc.ZLOCAL
    m = (b + 1) // 2
    if atom.kind == "S":
        return pi_sphere(m, k - b, p)
    if len(atom.cells) != 2 or atom.cells[1] - b != 2 * (p - 1):
        raise NotApplicableError(f"no homotopy table for {atom} at p={p}")
    if atom.kind == "A" and k >= atom.cells[0] + atom.cells[1] - 1:
        raise OutOfRangeError(f"pi_{k} of {atom} is beyond the skeleton's stable range")
    return pi_B(m, k - b, p)


def _lemma_slot(atom: Atom, p: int, source: bool) -> int:
    """Slot parameter of an atom in the lemma's lists, or raise if it is not listed."""
    c = atom.cells
    gap = 2 * (p - 1)
    if atom.kind == "S":
        d = c[0]
        if d % 2 and 3 <= d <= 2 * p - 1:
            return (d + 1) // 2
        if not source and d % 2 and 2 * p + 1 <= d <= 4 * p - 3:
            return (d + 3) // 2 - p
    elif atom.kind == ("A" if source else "B") and len(c) == 2 and c[1] - c[0] == gap:
        if 3 <= c[0] <= 2 * p - 1:
            return (c[0] + 1) // 2
        if not source and c[0] <= 4 * p - 3:
            return (c[0] + 3) // 2 - p
    raise NotApplicableError(f"{atom} is not in the lemma's {'source' if source else 'target'} list at p={p}")


def maps_vanish(source: Atom, target: Atom, p: int) -> bool:
    """Decide [source, target] = 0 for atoms in different slots.

    The two relevant homotopy groups of the target are recomputed from the
    tables instead of trusting the lemma outright.
    """
    if source.is_point or target.is_point:
        return True
    m = _lemma_slot(source, p, source=True)
    n = _lemma_slot(target, p, source=False)
    if m == n:
        raise NotApplicableError(f"{source} and {target} share slot {m}")
    if source.kind == "A" and source.cells == (2 * p - 1, 4 * p - 3) and target == Atom("S", (3,)):
        raise ExcludedCaseError(
            f"[A({2 * p - 1},{4 * p - 3}), S^3] need not vanish: pi_{4 * p - 3}(S^3) = Z/p"
        )
    # a sphere only needs its bottom cell; the skeleton needs both
    for k in source.cells:
        g = pi_atom(target.with_kind("B"), k, p)
        if not g.is_zero:
            raise LoopDecompError(f"table gives pi_{k}({target}) = {g}, contradicting vanishing")
    return True


def target_groups(m: int, target: Atom, p: int) -> tuple[GroupDesc, GroupDesc]:
    """The pair (pi_{2m-1}, pi_{2m+2p-3}) of a target atom."""
    t = target.with_kind("B")
    return pi_atom(t, 2 * m - 1, p), pi_atom(t, 2 * m + 2 * p - 3, p)
