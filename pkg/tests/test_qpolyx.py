import pytest
import sympy as sp

import oracle
from qseries import qpolyx
from qseries.errors import InvalidParameter
from qseries.polyq import ONE, ZERO, LaurentPoly, RationalFunction
from qseries.qcore import gauss_G, q_binomial, q_int
from qseries.qpolyx import X, XPoly

L = LaurentPoly.from_coeffs
qp = LaurentPoly.q_power


def test_S2():
    assert qpolyx.rogers_szego_S(2) == XPoly([ONE, -L([1, 1]), ONE])


@pytest.mark.parametrize("N", range(0, 9))
def test_S_against_oracle(N):
    assert list(qpolyx.rogers_szego_S(N).coeffs) == oracle.xpoly_coeffs(oracle.rogers_szego(N))


def test_closed_form_equals_sum():
    for N in range(15):
        assert qpolyx.rogers_szego_S(N) == qpolyx.closed_form_S_tilde(N)


def test_q_derivative_of_cube():
    assert qpolyx.q_derivative(X**3) == XPoly.monomial(2, q_int(3))


def test_q_derivative_matches_difference_quotient():
    f = qpolyx.rogers_szego_S(6) + X * qp(3)
    assert qpolyx.q_derivative(f) == qpolyx.q_derivative_quotient(f)


def test_op_O_steps_S():
    for N in range(10):
        assert qpolyx.op_O(qpolyx.rogers_szego_S(N)) == qpolyx.rogers_szego_S(N + 1)


def test_rising_against_oracle():
    for l in range(6):
        ref = sp.expand(sp.prod([oracle.x - oracle.Q**k for k in range(l)]))
        assert list(qpolyx.rising_x(LaurentPoly.const(-1), l).coeffs) == oracle.xpoly_coeffs(ref)


def test_q_taylor_of_square():
    assert qpolyx.q_taylor(X**2, ONE) == [ONE, L([1, 1]), ONE]


def test_taylor_round_trip_generic_point():
    f = qpolyx.rogers_szego_S(7)
    for a in (ONE, qp(2), LaurentPoly.const(-3)):
        assert qpolyx.taylor_reconstruct(qpolyx.q_taylor(f, a), a) == f


def test_e_coefficients_agree():
    for N in range(14):
        for k in range(N // 2 + 1):
            assert qpolyx.e_coeff(N, k) == qpolyx.e_coeff_rec(N, k)


@pytest.mark.parametrize("alpha2", [0, 1, 2, 3])
def test_P_recurrences(alpha2):
    for N in range(1, 8):
        assert qpolyx.recurrence_check_P(N, alpha2)


def test_rho_leading_coefficient():
    for a2 in (0, 1, 2):
        for n in range(6):
            assert qpolyx.rho_n(n, a2).coeff(n) == LaurentPoly.u_power(a2 * n * n)


def test_theta_alpha_zero_is_signed_gauss():
    th = qpolyx.theta_solve(10, 0)
    assert th == [RationalFunction(gauss_G(k) * (-1) ** k) for k in range(11)]


def test_theta_alpha_half_is_delta():
    th = qpolyx.theta_solve(8, 1)
    assert th == [RationalFunction(ONE if k == 0 else ZERO) for k in range(9)]


def test_theta_residual_zero_alpha_one():
    th = qpolyx.theta_solve(10, 2)
    for N in range(11):
        assert qpolyx.theta_residual(N, 2, th).is_zero()


def test_euler_binomial():
    for N in range(10):
        prod, total = qpolyx.euler_binomial(N)
        assert prod == total


def test_xpoly_text():
    assert XPoly([ONE]).text() == "1"
    assert XPoly().text() == "0"
    assert qpolyx.rogers_szego_S(1).text() == "(-1) + (1)*x^1"


def test_negative_power_rejected():
    with pytest.raises(InvalidParameter):
        X ** -1
