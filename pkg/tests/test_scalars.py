from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fermionic_tn.scalars import Gaussian, I, as_scalar, conj, inverse, is_zero, root_of_unity, scalar_close

gauss = st.builds(Gaussian, st.fractions(-20, 20, max_denominator=7), st.fractions(-20, 20, max_denominator=7))


def test_i_squared():
    assert I * I == Gaussian(-1)


def test_roots_exact():
    assert [root_of_unity(k, 4) for k in range(4)] == [Gaussian(1), I, Gaussian(-1), -I]
    assert root_of_unity(1, 2) == Gaussian(-1)


def test_roots_float():
    assert abs(root_of_unity(1, 8) ** 8 - 1) < 1e-12


def test_as_scalar_pairs():
    assert as_scalar(["1/2", -1]) == Gaussian(Fraction(1, 2), -1)
    assert as_scalar(1j) == I
    assert isinstance(as_scalar(1j, exact=False), complex)
    with pytest.raises(TypeError):
        as_scalar("x")


@given(gauss, gauss)
def test_field_ops_match_complex(a, b):
    assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9
    assert abs(complex(a + b) - (complex(a) + complex(b))) < 1e-9
    if b:
        assert (a / b) * b == a


@given(gauss)
def test_inverse_and_conj(a):
    if a:
        assert a * inverse(a) == Gaussian(1)
    assert conj(conj(a)) == a
    assert (a * conj(a)).im == 0


def test_mixed_comparison():
    assert scalar_close(I, 1j)
    assert scalar_close(I, 1j + 1e-12, 1e-9)
    assert is_zero(Gaussian(0)) and not is_zero(Gaussian(0, 1))
