import time

import pytest

from loopdecomp.errors import ContractError, ValidationError
from loopdecomp.weyl import (
    COMPLEMENTS, appendix_table_checks, elem_sym, fi_substitutions, generator_checks,
    invariant_generator_oracle, invariant_oracle, reflection_rho, symbols, t_ring, to_u,
    verify_appendix_table, verify_FI_no_splitting, verify_generator_formulas,
)


def test_elem_sym_examples():
    R = t_ring(7)
    t = R.gens()
    assert elem_sym(1, [1, 2, 3, 4]) == t[0] + t[1] + t[2] + t[3]
    assert elem_sym(0, ["t5"]) == R.one()
    assert elem_sym(2, ["t1", "t2"]) == t[0] * t[1]
    with pytest.raises(ValidationError):
        elem_sym(3, ["t1", "t2"])


def test_a1_is_twice_tau_in_working_ring():
    # with c1 = 0 the root α2 = (a1 - b1)/2 equals a1, and τ = a1/2
    for comp in COMPLEMENTS:
        S = symbols(7, comp)
        assert S.a[1] == S.tau * 2
        assert S.c[1].is_zero()


@pytest.mark.parametrize("comp", COMPLEMENTS)
def test_reflection_examples(comp):
    S = symbols(7, comp)
    assert S.rho_c[2] == S.c[2]
    assert S.rho_c[3] == S.c[3] + (S.a[2] - S.b[2]) * S.tau * 2
    assert reflection_rho(S.c[2]) == S.c[2]
    assert reflection_rho(reflection_rho(S.c[5])) == S.c[5]


def test_reflection_on_t_ring_matches_working_ring():
    R = t_ring(11)
    c5 = elem_sym(5, range(1, 9), 11)
    assert to_u(reflection_rho(c5)) == reflection_rho(to_u(c5))
    assert reflection_rho(reflection_rho(c5)) == c5


def test_reflection_needs_p_at_least_7():
    with pytest.raises(ValidationError):
        reflection_rho(t_ring(5).gen(0))
    with pytest.raises(ContractError):
        reflection_rho(t_ring(7).gen(0), 11)


@pytest.mark.parametrize("p", [7, 11, 13])
@pytest.mark.parametrize("comp", COMPLEMENTS)
def test_appendix_table(p, comp):
    checks = appendix_table_checks(p, comp)
    assert len(checks) == 6
    assert all(ch.ok for ch in checks), [ch.to_dict() for ch in checks if not ch.ok]
    assert verify_appendix_table(p, comp)


@pytest.mark.parametrize("p", [7, 11, 13])
@pytest.mark.parametrize("comp", COMPLEMENTS)
def test_generator_formulas(p, comp):
    assert verify_generator_formulas(p, comp)
    assert all(ch.residual == "0" for ch in generator_checks(p, comp))


def test_membership_check_can_fail():
    # c6 alone moves at first order in τ, so it must not pass the (τ^2) test
    S = symbols(7)
    diff = (S.rho_c[6] - S.c[6]).truncate(0, 2)
    assert not diff.is_zero()
    # a wrong coefficient in the c3 identity is caught
    wrong = S.c[3] + (S.a[2] - S.b[2]) * S.tau * 3
    assert S.rho_c[3] != wrong


@pytest.mark.parametrize("degree, target", [(4, "c2"), (12, "c6"), (16, "c8")])
def test_oracle_at_seven(degree, target):
    start = time.perf_counter()
    r = invariant_oracle(7, degree)
    assert r.ok and r.target == target
    assert time.perf_counter() - start < 120
    assert invariant_generator_oracle(7, degree)


@pytest.mark.parametrize("p", [11, 13])
def test_oracle_other_primes_and_complement(p):
    for d in (4, 12, 16):
        assert invariant_oracle(p, d).ok
        assert invariant_oracle(p, d, "B").ok


def test_oracle_kernel_is_invariant():
    S = symbols(7)
    r = invariant_oracle(7, 12)
    polys = {"c6": S.c[6], "c4*c2": S.c[4] * S.c[2], "c3*c3": S.c[3] ** 2, "c2*c2*c2": S.c[2] ** 3}
    for v in r.kernel:
        f = S.ring.zero()
        for name, coef in zip(r.basis, v):
            f = f + polys[name] * coef
        assert reflection_rho(f) == f


def test_oracle_without_c1_relation_fails():
    # in F_p[t1..t8] with c1 kept, no invariant carries c6 or c8
    assert invariant_oracle(7, 4, "free").ok
    assert not invariant_oracle(7, 12, "free").ok
    assert not invariant_oracle(7, 16, "free").ok


def test_oracle_guard():
    with pytest.raises(ContractError):
        invariant_oracle(7, 16, limit=100)
    with pytest.raises(ValidationError):
        invariant_oracle(7, 8)


def test_fi_substitutions():
    subs = fi_substitutions()
    assert len(subs) == 20
    assert {(s.a, s.b) for s in subs} == {(a, b) for a in range(1, 5) for b in range(5)}
    first = next(s for s in subs if (s.a, s.b) == (1, 0))
    # f4^4 - 2 f4^2 f8' - f8'^2 with coefficients reduced mod 5
    assert first.result == "f4^4 + 3*f4^2*f8' + 4*f8'^2"
    mixed = next(s for s in subs if (s.a, s.b) == (2, 3))
    assert "f4^2*f8'" in mixed.result and not mixed.splits
    assert verify_FI_no_splitting()
