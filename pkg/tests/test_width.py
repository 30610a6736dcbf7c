from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from joinwidth.generators import gen_star, gen_triangle
from joinwidth.width import as_fraction, count_cap, count_width, fits, iroot, width_base


@given(n=st.integers(0, 10**40), k=st.integers(1, 7))
def test_iroot_is_floor_root(n, k):
    x = iroot(n, k)
    assert x ** k <= n < (x + 1) ** k


@given(count=st.integers(0, 10**6), base=st.integers(2, 50),
       omega=st.fractions(min_value=0, max_value=5, max_denominator=12))
def test_fits_is_exact(count, base, omega):
    p, q = omega.numerator, omega.denominator
    assert fits(count, base, omega) == (count <= 1 or count ** q <= base ** p)


@given(base=st.integers(2, 60), omega=st.fractions(min_value=0, max_value=4, max_denominator=9))
def test_count_cap_is_floor_power(base, omega):
    cap = count_cap(base, omega)
    p, q = omega.numerator, omega.denominator
    assert cap ** q <= base ** p < (cap + 1) ** q


@pytest.mark.parametrize("base,omega,cap", [(5, 1, 5), (2, 0, 1), (4, 0.5, 2), (8, "2/3", 4), (9, 1.5, 27)])
def test_count_cap_boundaries(base, omega, cap):
    assert count_cap(base, omega) == cap


def test_cap_with_huge_denominator_is_fast():
    w = Fraction(999_983, 1_000_003)
    assert count_cap(7, w) == 6


def test_as_fraction_uses_decimal_repr():
    assert as_fraction(0.1) == Fraction(1, 10)
    assert as_fraction("3/2") == Fraction(3, 2)
    with pytest.raises(ValueError):
        as_fraction(-1)


def test_count_width_and_base():
    assert count_width(0, 5) == 0.0 and count_width(1, 5) == 0.0
    assert count_width(25, 5) == pytest.approx(2.0)
    assert math.isclose(count_width(11, 5), math.log(11, 5))
    assert width_base(gen_triangle(3)) == 5
    assert width_base(gen_star(3)) == 2
    assert width_base(gen_triangle(1)) == 2


def test_fits_near_tie_with_float_width_is_fast():
    w = math.log(11) / math.log(5)
    exact = Fraction(repr(w))
    expected = 11 ** exact.denominator <= 5 ** exact.numerator if exact.denominator < 10**4 else None
    assert fits(11, 5, w + 1e-9) and not fits(11, 5, w - 1e-9)
    assert count_cap(5, w + 1e-9) == 11
    assert expected is None or fits(11, 5, w) == expected


def test_fits_exact_power_tie_with_large_exponents():
    # 2**40 = (2**8)**5 exactly, so the cap at width 5 over base 2**8 is attained
    assert fits(2**40, 2**8, 5)
    assert not fits(2**40 + 1, 2**8, 5)
    assert fits(3**7, 3**11, Fraction(7, 11))
    assert not fits(3**7 + 1, 3**11, Fraction(7, 11))
