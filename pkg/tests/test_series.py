from fractions import Fraction

import pytest
import sympy as sp

import oracle
from qseries import series
from qseries.errors import DivergentTruncation, NonUnitConstantTerm, VariableMismatch
from qseries.polyq import ONE, LaurentPoly
from qseries.qcore import q_binomial
from qseries.series import INT, LAURENT, TruncSeries


def _odd_part_partitions(order):
    counts = [1] + [0] * (order - 1)
    for part in range(1, order, 2):
        for n in range(part, order):
            counts[n] += counts[n - part]
    return counts


def test_sigma_infty_counts_odd_partitions():
    for order in (8, 30):
        assert series.sigma_infty(1, order).coeffs == tuple(_odd_part_partitions(order))


def test_sigma_infty_first_terms():
    assert list(series.sigma_infty(1, 8).coeffs) == [1, 1, 1, 2, 2, 3, 4, 5]


def test_sigma_infty_diverges_for_nonpositive_gamma():
    with pytest.raises(DivergentTruncation):
        series.sigma_infty(0, 5)


def test_infinite_poch_against_product():
    order = 25
    ref = sp.expand(sp.prod([1 - oracle.u ** (2 * (2 * k + 1)) for k in range(order)]))
    want = [int(ref.coeff(oracle.u, 2 * n)) for n in range(order)]
    assert list(series.infinite_poch(1, 1, 2, order).coeffs) == want
    assert list(series.infinite_poch(1, 1, 2, 4).coeffs) == [1, -1, 0, -1]


def test_negative_binomial_coefficients():
    for N in range(5):
        s = series.euler_negative_binomial(N, 10)
        assert list(s.coeffs) == [q_binomial(N + k, k) for k in range(10)]


def test_reciprocal_and_division():
    a = TruncSeries([1, -1], "t", 10, INT)
    inv = a.reciprocal()
    assert list(inv.coeffs) == [1] * 10
    assert (a * inv) == TruncSeries.one("t", 10, INT)
    with pytest.raises(NonUnitConstantTerm):
        TruncSeries([2, 1], "t", 5, INT).reciprocal()


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        TruncSeries([1], "t", 4, INT) + TruncSeries([1], "z", 4, INT)


def test_truncation_takes_smaller_order():
    s = TruncSeries([1, 1, 1], "t", 3, INT) * TruncSeries([1, 1, 1, 1, 1], "t", 5, INT)
    assert s.order == 3


def test_carlitz_low_coefficients():
    lhs, rhs = series.carlitz_sides(12)
    assert lhs == rhs
    one_minus_q = LaurentPoly.from_coeffs([1, -1])
    assert lhs.coeff(2) == one_minus_q
    assert lhs.coeff(4) == one_minus_q * LaurentPoly.from_coeffs([1, 0, 0, -1])
    assert lhs.coeff(3).is_zero()


@pytest.mark.parametrize("r", [0, Fraction(1, 2), 1, 2])
def test_geometric_sides(r):
    lhs, rhs = series.geometric_q_sides(15, r)
    assert lhs == rhs


def test_bivariate_sides():
    lhs, rhs = series.bivariate_geometric_sides(6, 6)
    assert lhs == rhs
    cl, cr = series.classical_bivariate_sides(6, 6)
    assert cl == cr
    assert lhs.eval_at_one() == cl


def test_limit_and_functional():
    for l in range(4):
        lhs, rhs = series.limit_identity_sides(l, 20)
        assert lhs == rhs
    lhs, rhs = series.fine_functional_sides(5, 20)
    assert lhs == rhs


@pytest.mark.parametrize("N", [1, 3, 5])
def test_odd_v_matches_expanded_reading_only(N):
    v, readings = series.fine_v_readings(N, 30)
    matched = [name for name, s in readings.items() if s == v]
    assert matched == ["1/(q;q^2)_{k+1}"]


def test_text_rendering():
    s = TruncSeries([1, 0, -2], "t", 4, INT)
    assert s.text() == "1 + -2*t^2 + O(t^4)"
