"""Slot matching and fibre identification.

A homomorphism H -> G between quasi-p-regular groups is replaced slot by slot
by maps q_m from a wedge of H-side skeleta to a single G-side skeleton.  Each
q_m is classified from cell shapes plus the set D of degrees where the map is
nonzero on indecomposables, and the loop space of G/H is the product of the
fibres of the resulting maps.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field

from . import arith
from .catalog import (
    SLOT_MATCH_FAMILY,
    CaseRecord,
    case_record,
    decompose,
    group_data,
    slot_index,
)
from .errors import (
    ConfigurationError,
    ContractError,
    ExcludedCaseError,
    LoopDecompError,
    NotApplicableError,
    OutOfRangeError,
    SlotError,
    UndeterminedError,
    UnsupportedError,
    ValidationError,
)
from .homotopy import maps_vanish, pi_atom
from .space import (
    Atom,
    SpaceExpr,
    cell_atom,
    cells_by_loop,
    loop,
    make,
    point,
    product,
    rational_type,
    render,
    skeleton,
)


class QClass(enum.Enum):
    V1 = "V1"
    V2 = "V2"
    V3 = "V3"
    V4 = "V4"
    V5 = "V5"
    V6 = "V6"
    V7 = "V7"
    V8 = "V8"
    NULL = "NullMap"
    DOMAIN_EMPTY = "DomainEmpty"
    CODOMAIN_EMPTY = "CodomainEmpty"
    UNDETERMINED = "Undetermined"

    def __str__(self) -> str:
        return self.value

    @property
    def is_matched(self) -> bool:
        return self.name.startswith("V")

    @property
    def is_wedge(self) -> bool:
        return self in (QClass.V5, QClass.V6, QClass.V7, QClass.V8)


_FIBRE_NOTES = {
    QClass.V1: "fibre of an equivalence is a point",
    QClass.V2: "inclusion of the bottom cell: fibre is the loops on the cofibre",
    QClass.V3: "pinch to the top cell: fibre is the bottom sphere",
    QClass.V4: "pinch then include: fibre is bottom sphere times loops on the new top cell",
    QClass.V5: "wedge of equivalences: one summand survives as a factor",
    QClass.V6: "wedge of bottom-cell inclusions",
    QClass.V7: "bottom-cell inclusion wedge an equivalence",
    QClass.V8: "wedge of equivalences onto a two-cell complex",
    QClass.NULL: "fibre of a null map between H-spaces splits as source times loops on target",
    QClass.DOMAIN_EMPTY: "empty source: fibre is the loops on the target",
    QClass.CODOMAIN_EMPTY: "empty target: the source factor survives",
}


@dataclass(frozen=True)
class SlotAssignment:
    m: int
    domain: tuple[Atom, ...] = ()
    codomain: Atom | None = None

    def check(self, p: int) -> None:
        if not self.domain and self.codomain is None:
            raise SlotError(f"slot {self.m} is empty")
        if len(self.domain) > 2:
            raise SlotError(f"slot {self.m} has {len(self.domain)} source summands; at most 2 allowed")
        for a in self.members():
            if slot_index(a, p) != self.m:
                raise SlotError(f"{a} belongs to slot {slot_index(a, p)}, not {self.m}")

    def members(self) -> list[Atom]:
        return list(self.domain) + ([self.codomain] if self.codomain is not None else [])

    def __str__(self) -> str:
        dom = " v ".join(str(a) for a in self.domain) or "*"
        cod = str(self.codomain) if self.codomain is not None else "*"
        return f"slot {self.m}: {dom} -> {cod}"


@dataclass(frozen=True)
class SlotOutcome:
    slot: SlotAssignment
    qclass: QClass
    fibre: SpaceExpr
    consumed: tuple[int, ...]
    note: str = ""


def _overlap(a: Atom, c: Atom) -> tuple[int, ...] | None:
    """Shared cells when they form a top segment of a and a bottom segment of c."""
    shared = tuple(x for x in a.cells if x in c.cells)
    if not shared:
        return None
    k = len(shared)
    if a.cells[-k:] == shared and c.cells[:k] == shared:
        return shared
    return None


def _obstruction(s: SlotAssignment, p: int) -> str | None:
    c = s.codomain
    if c is None or len(c.cells) < 2:
        return None
    product_cell = c.cells[0] + c.cells[1]
    for a in s.domain:
        if len(a.cells) >= 3 and a.top >= product_cell:
            return (
                f"π_{a.top}(S^{product_cell}) ≅ Z/{p}Z: the {a.top}-skeleton of "
                f"{c.with_kind('B')} is {a} with an extra {product_cell}-cell, so lifting "
                f"{' v '.join(map(str, s.domain))} into {c} may be obstructed"
            )
    return None


def _table_null(a: Atom, c: Atom, p: int) -> bool:
    target = c.with_kind("B")
    degrees = (a.bottom,) if a.kind == "S" else a.cells
    try:
        return all(pi_atom(target, k, p).is_zero for k in degrees)
    except (NotApplicableError, OutOfRangeError, ValidationError):
        return False


def _null_reason(s: SlotAssignment, D: frozenset, p: int) -> str | None:
    c = s.codomain
    if c.bottom > max(a.top for a in s.domain):
        return f"connectivity: {c} is {c.bottom - 1}-connected"
    if all(_table_null(a, c, p) for a in s.domain):
        return f"homotopy tables give [{' v '.join(map(str, s.domain))}, {c}] = 0"
    if len(s.domain) == 1:
        o = _overlap(s.domain[0], c)
        # one shared degree: the class is read off cohomology, which is zero there
        if o is not None and len(o) == 1 and o[0] not in D:
            return f"degree {o[0]} is not in D and the class is detected in cohomology"
    return None


def _classify(s: SlotAssignment, D: frozenset, p: int) -> tuple[QClass, str]:
    s.check(p)
    if not s.domain:
        return QClass.DOMAIN_EMPTY, ""
    if s.codomain is None:
        return QClass.CODOMAIN_EMPTY, ""
    c = s.codomain
    blocked = _obstruction(s, p)
    if blocked:
        return QClass.UNDETERMINED, blocked
    if len(s.domain) == 1:
        a = s.domain[0]
        o = _overlap(a, c)
        if o is not None and set(o) <= D:
            if o == a.cells == c.cells:
                return QClass.V1, ""
            if o == a.cells:
                return QClass.V2, ""
            if o == c.cells:
                return QClass.V3, ""
            return QClass.V4, ""
    else:
        b = c.bottom
        if all(a.bottom == b for a in s.domain) and b in D:
            spheres = sum(1 for a in s.domain if a.kind == "S")
            complexes_fit = all(
                _overlap(a, c) == a.cells for a in s.domain if a.kind != "S"
            )
            if spheres == 2:
                return (QClass.V5 if c.kind == "S" else QClass.V6), ""
            if complexes_fit and c.kind != "S":
                return (QClass.V7 if spheres == 1 else QClass.V8), ""
    reason = _null_reason(s, D, p)
    if reason:
        return QClass.NULL, reason
    return QClass.UNDETERMINED, f"{s}: a nonzero map may exist and D does not decide it"


def classify_q(s: SlotAssignment, D, p: int) -> QClass:
    """Classify the slot map q_m from the cell shapes and the degree set D."""
    return _classify(s, frozenset(D), p)[0]


def _primary(s: SlotAssignment) -> Atom:
    # the summand carrying the matched class: the one with the most cells
    return max(s.domain, key=lambda a: (len(a.cells), a.kind == "A"))


def _remove_one(atoms: tuple[Atom, ...], atom: Atom) -> list[Atom]:
    rest = list(atoms)
    rest.remove(atom)
    return rest


def fibre(c: QClass, s: SlotAssignment, p: int) -> SpaceExpr:
    """Homotopy fibre of M(q_m) for a classified slot, as a normalized expression."""
    if c is QClass.UNDETERMINED:
        raise UndeterminedError(f"{s} is undetermined", slot=s.m)
    if c is QClass.DOMAIN_EMPTY:
        return make(p, (s.codomain.with_kind("B"), True))
    if c is QClass.CODOMAIN_EMPTY:
        return make(p, *(a.with_kind("B") for a in s.domain))
    if c is QClass.NULL:
        return make(p, *(a.with_kind("B") for a in s.domain), (s.codomain.with_kind("B"), True))
    a = _primary(s) if c.is_wedge else s.domain[0]
    o = _overlap(a, s.codomain)
    if o is None:
        raise ContractError(f"{c} does not fit {s}")
    left = cell_atom([x for x in a.cells if x not in o])
    right = cell_atom([x for x in s.codomain.cells if x not in o])
    extras = _remove_one(s.domain, a) if c.is_wedge else []
    return make(p, left, (right, True), *(e.with_kind("B") for e in extras))


def consumed_degrees(c: QClass, s: SlotAssignment) -> tuple[int, ...]:
    if not c.is_matched:
        return ()
    a = _primary(s) if c.is_wedge else s.domain[0]
    return _overlap(a, s.codomain) or ()


# slot matching ------------------------------------------------------------

@dataclass(frozen=True)
class SlotMatchAudit:
    H: SpaceExpr
    G: SpaceExpr
    D: tuple[int, ...]
    outcomes: tuple[SlotOutcome, ...]
    passthrough: tuple[Atom, ...]
    result: SpaceExpr

    @property
    def consumed(self) -> tuple[int, ...]:
        return tuple(sorted(d for o in self.outcomes for d in o.consumed))


def assign_slots(H: SpaceExpr, G: SpaceExpr, p: int) -> tuple[list[SlotAssignment], list[Atom]]:
    """Group H-side skeleta and G-side skeleta by slot.  Circles on the H side pass through."""
    if H.has_loops or G.has_loops:
        raise ContractError("slot matching needs unlooped group decompositions")
    circles = [a for a in H.atoms() if a.kind == "S1"]
    if any(a.kind == "S1" for a in G.atoms()):
        raise UnsupportedError("a circle factor on the target group is not supported")
    dom: dict[int, list[Atom]] = {}
    cod: dict[int, Atom] = {}
    for a in H.atoms():
        if a.kind != "S1":
            dom.setdefault(slot_index(a, p), []).append(skeleton(a))
    for b in G.atoms():
        m = slot_index(b, p)
        if m in cod:
            raise SlotError(f"slot {m} holds both {cod[m]} and {skeleton(b)} on the target side")
        cod[m] = skeleton(b)
    slots = [
        SlotAssignment(m, tuple(dom.get(m, ())), cod.get(m))
        for m in sorted(set(dom) | set(cod))
    ]
    for s in slots:
        s.check(p)
    return slots, circles


def cross_slot_check(H: SpaceExpr, G: SpaceExpr, p: int) -> None:
    """Every H-side skeleton must map trivially into the G-side factors of other slots."""
    for a in H.atoms():
        if a.kind == "S1":
            continue
        for b in G.atoms():
            if slot_index(a, p) == slot_index(b, p):
                continue
            try:
                maps_vanish(skeleton(a), b.with_kind("B"), p)
            except NotApplicableError:
                continue
            except ExcludedCaseError as exc:
                raise ConfigurationError(f"cannot separate slots: {exc}") from exc
            except LoopDecompError as exc:
                raise ConfigurationError(f"cross-slot vanishing fails: {exc}") from exc


def slot_match(H: SpaceExpr, G: SpaceExpr, D, p: int) -> SlotMatchAudit:
    D = frozenset(D)
    cross_slot_check(H, G, p)
    slots, circles = assign_slots(H, G, p)
    outcomes = []
    for s in slots:
        cls, note = _classify(s, D, p)
        if cls is QClass.UNDETERMINED:
            raise UndeterminedError(f"{s} is undetermined: {note}", note=note, slot=s.m)
        outcomes.append(
            SlotOutcome(s, cls, fibre(cls, s, p), consumed_degrees(cls, s), note or _FIBRE_NOTES[cls])
        )
    result = product(make(p, *circles), *(o.fibre for o in outcomes))
    return SlotMatchAudit(H, G, tuple(sorted(D)), tuple(outcomes), tuple(circles), result)


# case recipes -------------------------------------------------------------

@dataclass(frozen=True)
class LoopResult:
    case: str
    prime: int
    status: str
    expression: SpaceExpr | None
    consumed: tuple[int, ...]
    citations: tuple[str, ...]
    recipe: str = ""
    audits: tuple[SlotMatchAudit, ...] = field(default=(), compare=False)
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "case": self.case,
            "prime": self.prime,
            "status": self.status,
            "expression": render(self.expression) if self.expression is not None else None,
            "consumed": list(self.consumed),
            "citations": list(self.citations),
        }
        if self.note:
            out["note"] = self.note
        return out


def _group_expr(g, p: int, cites: list[str]) -> SpaceExpr:
    d = decompose(g, p)
    cites.extend(d.citations)
    return d.expr


def _atom_difference(G: SpaceExpr, K: SpaceExpr) -> SpaceExpr:
    left = Counter(G.atoms())
    right = Counter(K.atoms())
    if right - left:
        missing = ", ".join(str(a) for a in (right - left).elements())
        raise ConfigurationError(f"{render(K)} is not a factor of {render(G)}: missing {missing}")
    return make(G.prime, *(left - right).elements())


def _solve(c: CaseRecord) -> LoopResult:
    p = c.prime
    cites = list(c.citations) + [c.D_citation]
    recipe = c.recipe
    audits: list[SlotMatchAudit] = []
    consumed: tuple[int, ...] = ()
    if recipe == "UNDETERMINED_P7" or recipe == "EXTENSION_P7":
        cites.append(group_data()["extension_citation"])
        cites.extend(c.extra.get("vanishing", []))
    if recipe in ("SLOT_MATCH", "SLOT_MATCH_WITH_S1", "EXTENSION_P7", "UNDETERMINED_P7"):
        audit = slot_match(_group_expr(c.H, p, cites), _group_expr(c.G, p, cites), c.D, p)
        audits.append(audit)
        expr, consumed = audit.result, audit.consumed
        if recipe == "UNDETERMINED_P7":
            raise UndeterminedError(
                f"{c}: no obstruction was found although the case is listed as undetermined",
                slot=None,
            )
    elif recipe == "HARRIS_COMPLEMENT":
        G = _group_expr(c.G, p, cites)
        K = _group_expr(c.group("complement"), p, cites)
        expr = loop(_atom_difference(G, K))
        consumed = rational_type(K)
    elif recipe == "PRODUCT_SPLIT":
        split = _group_expr(c.group("split"), p, cites)
        audit = slot_match(
            _group_expr(c.group("core_H"), p, cites), _group_expr(c.group("core_G"), p, cites), c.D, p
        )
        audits.append(audit)
        expr, consumed = product(split, audit.result), audit.consumed
    elif recipe == "REDUCTION" and "reduce_to" in c.extra:
        target = c.extra["reduce_to"]
        params = {k: arith.integer(v, **c.params) for k, v in target["params"].items()}
        sub = _solve(case_record(target["case"], params, p))
        cites.extend(sub.citations)
        audits.extend(sub.audits)
        expr, consumed = sub.expression, sub.consumed
    elif recipe == "REDUCTION":
        parts = [_group_expr(c.group("split"), p, cites)]
        if "extra_unlooped" in c.extra:
            parts.append(_group_expr(c.group("extra_unlooped"), p, cites))
        if "extra_looped" in c.extra:
            parts.append(loop(_group_expr(c.group("extra_looped"), p, cites)))
        audit = slot_match(
            _group_expr(c.group("core_H"), p, cites), _group_expr(c.group("core_G"), p, cites), c.D, p
        )
        audits.append(audit)
        expr, consumed = product(*parts, audit.result), audit.consumed
    elif recipe == "ASSEMBLY":
        subs = [_solve(case_record(k, None, p)) for k in c.extra["parts"]]
        for s in subs:
            cites.extend(s.citations)
            audits.extend(s.audits)
        expr = product(*(s.expression for s in subs))
        consumed = tuple(sorted(d for s in subs for d in s.consumed))
    else:
        raise UnsupportedError(f"no recipe {recipe!r}")
    return LoopResult(
        case=str(c),
        prime=p,
        status="ok",
        expression=expr,
        consumed=tuple(sorted(consumed)),
        citations=tuple(dict.fromkeys(cites)),
        recipe=recipe,
        audits=tuple(audits),
    )


def _record(c: CaseRecord, p: int | None) -> CaseRecord:
    if p is None or p == c.prime:
        return c
    return case_record(c.key, c.params, p)


def solve(c: CaseRecord, p: int | None = None) -> LoopResult:
    """Run a case and report undetermined outcomes as a result instead of raising."""
    c = _record(c, p)
    try:
        return _solve(c)
    except UndeterminedError as exc:
        cites = list(c.citations) + [c.D_citation]
        return LoopResult(str(c), c.prime, "undetermined", None, (), tuple(dict.fromkeys(cites)),
                          recipe=c.recipe, note=exc.note)


def loop_decomposition(c: CaseRecord, p: int | None = None) -> SpaceExpr:
    """p-local decomposition of Ω(G/H); raises UndeterminedError when the engine cannot decide."""
    return _solve(_record(c, p)).expression


def rational_homotopy_degrees(c: CaseRecord, p: int | None = None) -> tuple[int, ...]:
    """Degrees of π_*(G/H) ⊗ Q read off the loop decomposition, one shift up for unlooped cells."""
    expr = loop_decomposition(c, p)
    out = []
    for f in expr.factors:
        if f.looped:
            out.extend(f.atom.cells)
        else:
            out.extend(d + 1 for d in f.atom.cells)
    return tuple(sorted(out))


@dataclass(frozen=True)
class BalanceReport:
    ok: bool
    consumed: tuple[int, ...]
    unlooped: tuple[int, ...]
    looped: tuple[int, ...]
    type_H: tuple[int, ...]
    type_G: tuple[int, ...]
    H_diff: dict
    G_diff: dict


def _diff(lhs: Counter, rhs: Counter) -> dict:
    out = {}
    extra = lhs - rhs
    missing = rhs - lhs
    if extra:
        out["extra"] = sorted(extra.elements())
    if missing:
        out["missing"] = sorted(missing.elements())
    return out


def audit_balance(audit: SlotMatchAudit) -> BalanceReport:
    consumed = Counter(audit.consumed)
    slots_only = product(point(audit.result.prime), *(o.fibre for o in audit.outcomes))
    unlooped, looped = cells_by_loop(slots_only)
    type_H = [d for d in rational_type(audit.H) if d != 1]
    type_G = list(rational_type(audit.G))
    hd = _diff(consumed + Counter(unlooped), Counter(type_H))
    gd = _diff(consumed + Counter(looped), Counter(type_G))
    return BalanceReport(not hd and not gd, audit.consumed, unlooped, looped,
                         tuple(sorted(type_H)), tuple(sorted(type_G)), hd, gd)


def balance_reports(c: CaseRecord, p: int | None = None) -> list[BalanceReport]:
    c = _record(c, p)
    if c.recipe not in SLOT_MATCH_FAMILY:
        raise ContractError(f"{c.key} uses {c.recipe}, outside the slot-matching family")
    return [audit_balance(a) for a in _solve(c).audits]


def verify_rational_balance(c: CaseRecord, p: int | None = None) -> bool:
    reports = balance_reports(c, p)
    return bool(reports) and all(r.ok for r in reports)
