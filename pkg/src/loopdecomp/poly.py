"""Sparse multivariate polynomials over F_p and modular linear algebra."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import ContractError, ValidationError


@dataclass(frozen=True)
class Ring:
    p: int
    names: tuple[str, ...]

    def __post_init__(self):
        if self.p < 2 or any(self.p % d == 0 for d in range(2, int(self.p ** 0.5) + 1)):
            raise ValidationError(f"characteristic must be prime, got {self.p}")
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: int) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def gen(self, name_or_index) -> "Polynomial":
        i = name_or_index if isinstance(name_or_index, int) else self.names.index(name_or_index)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.gen(i) for i in range(self.nvars)]

    def linear(self, coeffs: Sequence[int]) -> "Polynomial":
        terms = {}
        for i, c in enumerate(coeffs):
            if c % self.p:
                e = [0] * self.nvars
                e[i] = 1
                terms[tuple(e)] = c
        return Polynomial(self, terms)

    def inv(self, c: int) -> int:
        c %= self.p
        if not c:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(c, -1, self.p)

    def frac(self, num: int, den: int) -> int:
        return num * self.inv(den) % self.p

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        """Exponent vectors of total degree `degree`, in a fixed order."""
        out = []
        for combo in combinations_with_replacement(range(self.nvars), degree):
            e = [0] * self.nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        return out


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Mapping[tuple[int, ...], int]):
        self.ring = ring
        p = ring.p
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                if len(e) != ring.nvars:
                    raise ValidationError(f"exponent {e} does not fit {ring.nvars} variables")
                clean[tuple(e)] = c
        self.terms = clean

    # arithmetic ------------------------------------------------------------

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise ContractError("polynomials live in different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.p
        out: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % p
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # inspection ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def min_power(self, i: int) -> int:
        """Largest k with this polynomial in the ideal (x_i^k); -1 for zero."""
        if not self.terms:
            return -1
        return min(e[i] for e in self.terms)

    def truncate(self, i: int, k: int) -> "Polynomial":
        """Drop every term divisible by x_i^k."""
        return Polynomial(self.ring, {e: c for e, c in self.terms.items() if e[i] < k})

    def divides_power(self, i: int, k: int) -> bool:
        return all(e[i] >= k for e in self.terms)

    # substitution ----------------------------------------------------------

    def subs(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute x_i -> images[i]; the images fix the target ring."""
        if len(images) != self.ring.nvars:
            raise ContractError("need one image per variable")
        target = images[0].ring
        cache: list[dict[int, Polynomial]] = [{0: target.one(), 1: img} for img in images]

        def power(i: int, k: int) -> Polynomial:
            if k not in cache[i]:
                cache[i][k] = power(i, k - 1) * images[i]
            return cache[i][k]

        out: dict[tuple[int, ...], int] = {}
        p = target.p
        for e, c in self.terms.items():
            term = target.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for e2, c2 in term.terms.items():
                out[e2] = (out.get(e2, 0) + c2) % p
        return Polynomial(target, out)

    def __repr__(self) -> str:
        return f"Polynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)


def elementary_symmetric(forms: Sequence[Polynomial], k: int) -> Polynomial:
    """e_k of the given polynomials, by the recurrence e_j <- e_j + x*e_{j-1}."""
    if not forms:
        raise ContractError("need at least one form")
    if not 0 <= k <= len(forms):
        raise ValidationError(f"k={k} outside 0..{len(forms)}")
    ring = forms[0].ring
    e = [ring.one()] + [ring.zero()] * k
    for x in forms:
        for j in range(k, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[k]


def all_elementary_symmetric(forms: Sequence[Polynomial]) -> list[Polynomial]:
    ring = forms[0].ring
    e = [ring.one()] + [ring.zero()] * len(forms)
    for i, x in enumerate(forms, start=1):
        for j in range(i, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e


# linear algebra over F_p ----------------------------------------------------

def rref(rows: Iterable[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form with left-to-right pivoting."""
    mat = [[x % p for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = pow(mat[r][col], -1, p)
        mat[r] = [x * inv % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col]:
                f = mat[i][col]
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of {v : A v = 0} over F_p, one vector per free column."""
    reduced, pivots = rref(rows, ncols, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f] % p
        basis.append(v)
    return basis
