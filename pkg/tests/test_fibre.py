import json

import pytest

from loopdecomp.catalog import case_record
from loopdecomp.errors import SlotError, UndeterminedError
from loopdecomp.fibre import (
    QClass, SlotAssignment, balance_reports, classify_q, consumed_degrees, fibre, loop_decomposition,
    rational_homotopy_degrees, solve, verify_rational_balance,
)
from loopdecomp.space import acell, cells_by_loop, make, parse, point, sphere

PRIMES_UP_TO_13 = (5, 7, 11, 13)


def test_classify_examples():
    assert classify_q(SlotAssignment(8, (sphere(15),), acell(15, 35)), {15}, 11) is QClass.V2
    assert classify_q(SlotAssignment(4, (acell(7, 27),), acell(27, 47)), {27}, 11) is QClass.V4
    assert classify_q(SlotAssignment(4, (sphere(7),), sphere(27)), {3, 11, 15}, 11) is QClass.NULL
    assert classify_q(SlotAssignment(6, (sphere(11), sphere(11)), sphere(11)), {11}, 11) is QClass.V5


def test_empty_sides():
    assert classify_q(SlotAssignment(4, (), sphere(7)), set(), 5) is QClass.DOMAIN_EMPTY
    assert classify_q(SlotAssignment(4, (sphere(7),), None), set(), 5) is QClass.CODOMAIN_EMPTY
    with pytest.raises(SlotError):
        classify_q(SlotAssignment(4, (), None), set(), 5)


def test_slot_membership_is_checked():
    with pytest.raises(SlotError):
        classify_q(SlotAssignment(3, (sphere(7),), sphere(7)), {7}, 5)


def test_matching_without_D_is_not_guessed():
    # same shape as V1 but the degrees are not in D: the table says nothing
    s = SlotAssignment(2, (acell(3, 11),), acell(3, 11))
    assert classify_q(s, set(), 5) is QClass.UNDETERMINED
    with pytest.raises(UndeterminedError):
        fibre(QClass.UNDETERMINED, s, 5)


def test_fibre_examples():
    s = SlotAssignment(8, (sphere(15),), acell(15, 35))
    assert fibre(QClass.V2, s, 11) == parse("ΩS^35", 11)
    s = SlotAssignment(4, (acell(7, 15),), acell(15, 23))
    assert fibre(QClass.V4, s, 5) == parse("S^7 x ΩS^23", 5)
    s = SlotAssignment(2, (acell(3, 11),), acell(3, 11))
    assert fibre(QClass.V1, s, 5) == point(5)
    s = SlotAssignment(10, (sphere(19),), acell(39, 59))
    assert classify_q(s, {3, 11}, 11) is QClass.NULL
    assert fibre(QClass.NULL, s, 11) == parse("S^19 x ΩB(39,59)", 11)


def _shapes(m, p):
    g = 2 * (p - 1)
    b = 2 * m - 1
    S, A = sphere(b), acell(b, b + g)
    return {
        QClass.V1: [(SlotAssignment(m, (A,), A), {b, b + g}), (SlotAssignment(m, (S,), S), {b})],
        QClass.V2: [(SlotAssignment(m, (S,), A), {b})],
        QClass.V3: [(SlotAssignment(m, (A,), sphere(b + g)), {b + g})],
        QClass.V4: [(SlotAssignment(m, (A,), acell(b + g, b + 2 * g)), {b + g})],
        QClass.V5: [(SlotAssignment(m, (S, S), S), {b})],
        QClass.V6: [(SlotAssignment(m, (S, S), A), {b})],
        QClass.V7: [(SlotAssignment(m, (S, A), A), {b, b + g})],
        QClass.V8: [(SlotAssignment(m, (A, A), A), {b, b + g})],
    }


def _remove(cells, used):
    out = list(cells)
    for d in used:
        out.remove(d)
    return sorted(out)


def test_fibre_table_consistency_exhaustive():
    count = 0
    for p in PRIMES_UP_TO_13:
        for m in range(2, p + 1):
            for cls, items in _shapes(m, p).items():
                for s, D in items:
                    assert classify_q(s, D, p) is cls, (cls, s, p)
                    used = consumed_degrees(cls, s)
                    unlooped, looped = cells_by_loop(fibre(cls, s, p))
                    dom = [c for a in s.domain for c in a.cells]
                    assert list(unlooped) == _remove(dom, used)
                    assert list(looped) == _remove(s.codomain.cells, used)
                    count += 1
    # nine shapes for each of the p-1 slots at each prime
    assert count == 9 * sum(p - 1 for p in PRIMES_UP_TO_13)


@pytest.mark.parametrize("key, params, p, expected", [
    ("FII", {}, 5, "S^7 x ΩS^23"),
    ("G", {}, 7, "S^3 x ΩS^11"),
    ("EVIII", {}, 13, "S^7 x S^11 x S^15 x S^19 x ΩB(35,59) x ΩS^39 x ΩS^47"),
    ("CII", {"n": 5, "m": 2}, 7, "S^3 x S^7 x ΩS^15 x ΩS^19"),
    ("EV", {}, 7, "S^5 x S^7 x S^9 x S^13 x ΩS^27 x ΩB(23,35) x ΩS^19"),
])
def test_loop_decomposition_examples(key, params, p, expected):
    assert loop_decomposition(case_record(key, params, p)) == parse(expected, p)


def test_undetermined_cites_obstruction():
    for key in ("EVIII", "EIX"):
        c = case_record(key, {}, 7)
        with pytest.raises(UndeterminedError):
            loop_decomposition(c)
        r = solve(c)
        assert r.status == "undetermined"
        assert "π_27(S^18) ≅ Z/7Z" in r.note


@pytest.mark.parametrize("key, p, degrees", [
    ("G", 7, (4, 11)), ("FII", 5, (8, 23)), ("EIII", 5, (2, 8, 17, 23)),
])
def test_rational_degrees(key, p, degrees):
    assert rational_homotopy_degrees(case_record(key, {}, p)) == degrees


def test_balance_examples():
    (rep,) = balance_reports(case_record("FII", {}, 5))
    assert rep.ok and rep.consumed == (3, 11, 15) and rep.unlooped == (7,) and rep.looped == (23,)
    (rep,) = balance_reports(case_record("EVI", {}, 11))
    assert rep.ok and rep.consumed == (3, 11, 15, 19)
    assert rep.unlooped == (3, 7, 11) and rep.looped == (23, 27, 35)
    assert verify_rational_balance(case_record("EV", {}, 11))


def test_result_json_shape_and_determinism():
    c = case_record("EVII", {}, 11)
    a = json.dumps(solve(c).to_dict(), sort_keys=True)
    b = json.dumps(solve(case_record("EVII", {}, 11)).to_dict(), sort_keys=True)
    assert a == b
    d = json.loads(a)
    assert set(d) == {"case", "prime", "status", "expression", "consumed", "citations"}
    assert d["status"] == "ok"
    assert parse(d["expression"], 11) == loop_decomposition(c)


def test_make_fibre_is_normalized():
    s = SlotAssignment(4, (acell(7, 15),), acell(15, 23))
    out = fibre(QClass.V4, s, 5)
    assert out == make(5, sphere(7), (sphere(23), True))
