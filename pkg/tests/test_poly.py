import pytest

from loopdecomp.errors import ContractError, ValidationError
from loopdecomp.poly import Ring, elementary_symmetric, nullspace, rref


@pytest.fixture
def R():
    return Ring(7, ("x", "y", "z"))


def test_zero_coefficients_not_stored(R):
    x, y, _ = R.gens()
    f = x * 7 + y
    assert f.terms == {(0, 1, 0): 1}
    assert (x - x).is_zero()


def test_arithmetic(R):
    x, y, _ = R.gens()
    assert (x + y) ** 2 == x * x + x * y * 2 + y * y
    assert (x + y) ** 7 == x ** 7 + y ** 7  # Frobenius in characteristic 7
    assert 3 - x == -(x - 3)
    assert (x * y).degree() == 2 and R.zero().degree() == -1


def test_substitution(R):
    x, y, z = R.gens()
    f = x * y + z
    assert f.subs([y, x, R.const(2)]) == x * y + 2


def test_truncate_and_powers(R):
    x, y, _ = R.gens()
    f = x ** 3 * y + x * y ** 2 + y ** 4
    assert f.truncate(0, 2) == x * y ** 2 + y ** 4
    assert f.min_power(0) == 0 and (x ** 2 * f).min_power(0) == 2
    assert (x ** 2 * f).divides_power(0, 2)


def test_string(R):
    x, y, _ = R.gens()
    assert str(x ** 2 * 3 + y + 1) == "3*x^2 + y + 1"


def test_rings_do_not_mix(R):
    other = Ring(11, ("x", "y", "z"))
    with pytest.raises(ContractError):
        R.gen(0) + other.gen(0)


def test_ring_needs_prime():
    with pytest.raises(ValidationError):
        Ring(9, ("x",))


def test_elementary_symmetric(R):
    x, y, z = R.gens()
    assert elementary_symmetric([x, y, z], 2) == x * y + x * z + y * z
    assert elementary_symmetric([x, y, z], 0) == R.one()
    with pytest.raises(ValidationError):
        elementary_symmetric([x, y], 3)


def test_nullspace_small():
    # x + 2y + 3z = 0 and y + z = 0 over F_7
    basis = nullspace([[1, 2, 3], [0, 1, 1]], 3, 7)
    assert len(basis) == 1
    v = basis[0]
    assert (v[0] + 2 * v[1] + 3 * v[2]) % 7 == 0 and (v[1] + v[2]) % 7 == 0
    assert v[2] == 1


def test_nullspace_full_rank_and_zero_matrix():
    assert nullspace([[1, 0], [0, 1]], 2, 5) == []
    assert nullspace([[0, 0]], 2, 5) == [[1, 0], [0, 1]]


def test_rref_pivots():
    mat, piv = rref([[0, 2, 4], [1, 1, 1]], 3, 5)
    assert piv == [0, 1]
    assert mat == [[1, 0, 4], [0, 1, 2]]
