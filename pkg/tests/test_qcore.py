from fractions import Fraction

import pytest
import sympy as sp

import oracle
from qseries import qcore
from qseries.errors import InvalidParameter
from qseries.polyq import ONE, ZERO, LaurentPoly

L = LaurentPoly.from_coeffs


def test_binomial_4_2():
    assert qcore.q_binomial(4, 2) == L([1, 1, 2, 1, 1])


def test_binomial_out_of_range_is_zero():
    assert qcore.q_binomial(3, 5) == ZERO
    assert qcore.q_binomial(3, -1) == ZERO


@pytest.mark.parametrize("n", range(0, 16))
def test_binomial_row_against_product_formula(n):
    for k in range(n + 1):
        assert qcore.q_binomial(n, k) == oracle.to_lp(oracle.qbinom(n, k))


@pytest.mark.parametrize("b", [2, Fraction(1, 2), 3])
def test_binomial_other_bases(b):
    for n in range(8):
        for k in range(n + 1):
            expected = oracle.to_lp(oracle.qbinom(n, k, b))
            assert qcore.q_binomial(n, k, b) == expected


def test_pascal_and_division_routes_agree():
    for n in range(30):
        for k in range(n + 1):
            assert qcore.q_binomial(n, k) == qcore.q_binomial_by_division(n, k)


def test_binomial_at_one_is_classical():
    from math import comb

    for n in range(25):
        assert [qcore.q_binomial(n, k).eval_at_one() for k in range(n + 1)] == [comb(n, k) for k in range(n + 1)]


def test_q_int_and_factorial():
    assert qcore.q_int(3) == L([1, 1, 1])
    assert qcore.q_int(0) == ZERO
    assert qcore.q_factorial(3) == L([1, 1, 1]) * L([1, 1])
    with pytest.raises(InvalidParameter):
        qcore.q_int(-1)
    with pytest.raises(InvalidParameter):
        qcore.q_binomial(4, 2, 0)


def test_poch():
    assert qcore.poch(1, 1, 2, 2) == L([1, -1]) * L([1, 0, 0, -1])
    assert qcore.poch(1, 0, 1, 3) == ZERO
    assert qcore.poch(-1, 0, 1, 0) == ONE
    with pytest.raises(InvalidParameter):
        qcore.poch(2, 0, 1, 1)


def test_s_sum_values():
    assert qcore.s_sum(3, 1) == -(L([1, -1]) * L([1, 0, 0, -1]))
    assert qcore.s_sum(5, 0) == ZERO
    assert qcore.s_sum(4, 0) == qcore.gauss_product(2)


def test_sigma_value():
    assert qcore.sigma(2, 1) == L([1, 1, 1, 1])


def test_sigma_against_oracle():
    for N in range(8):
        for g in (1, 3, -1, Fraction(1, 2)):
            ref = sum(oracle.qbinom(N, k, 2) * oracle.qpow(g * k) for k in range(N + 1))
            assert qcore.sigma(N, g) == oracle.to_lp(ref)


def test_c_coefficients():
    assert qcore.c_coeff_closed(2, 2) == ONE
    assert qcore.c_coeff_closed(3, 4) == ZERO
    for l in range(12):
        for s in range(l + 1):
            assert qcore.c_coeff_closed(l, s) == qcore.c_coeff_rec(l, s)


def test_gauss_product_is_alternating_sum():
    for m in range(10):
        assert qcore.s_sum(2 * m, 0) == qcore.gauss_product(m)
        assert qcore.s_sum(2 * m + 1, 0) == ZERO
