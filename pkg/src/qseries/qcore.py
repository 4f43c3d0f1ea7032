"""Scalar q-combinatorial primitives.

All functions return :class:`LaurentPoly` values. Bases and exponents are
half-integers (int, Fraction or "n/2" strings); ``b`` means the working base
is q^b.
"""
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidParameter, NonExactDivision
from .polyq import ONE, ZERO, LaurentPoly, exact_div, half, substitute_q_power, to_u


@dataclass(frozen=True)
class BaseStep:
    """Exponent b of the working base q^b."""

    step: Fraction

    def __post_init__(self):
        object.__setattr__(self, "step", Fraction(half(self.step)))
        if self.step == 0:
            raise InvalidParameter("base step must be non-zero")


def _step(b):
    if isinstance(b, BaseStep):
        return b.step
    return BaseStep(b).step


def _nonneg(n, name="n"):
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InvalidParameter(f"{name} must be a non-negative integer, got {n!r}")


@lru_cache(maxsize=None)
def _q_int1(n):
    return LaurentPoly._raw({2 * i: 1 for i in range(n)})


def q_int(n, b=1):
    """[n]_{q^b} = 1 + q^b + ... + q^{b(n-1)}."""
    _nonneg(n)
    b = _step(b)
    p = _q_int1(n)
    return p if b == 1 else substitute_q_power(p, b)


@lru_cache(maxsize=None)
def _q_factorial1(n):
    if n == 0:
        return ONE
    return _q_factorial1(n - 1) * _q_int1(n)


def q_factorial(n, b=1):
    _nonneg(n)
    b = _step(b)
    p = _q_factorial1(n)
    return p if b == 1 else substitute_q_power(p, b)


_rows = [(ONE,)]
_rows_lock = threading.Lock()


def _q_binomial1(n, k):
    """Row n of the Pascal triangle [n k] = [n-1 k-1] + q^k [n-1 k], grown on demand."""
    if n >= len(_rows):
        with _rows_lock:
            while len(_rows) <= n:
                prev = _rows[-1]
                m = len(prev)
                row = [ONE]
                for j in range(1, m):
                    row.append(prev[j - 1] + prev[j].shift_u(2 * j))
                row.append(ONE)
                _rows.append(tuple(row))
    return _rows[n][k]


@lru_cache(maxsize=None)
def q_binomial_by_division(n, k):
    """[n k] as [n][n-1]...[n-k+1] / [k]!, an independent route used as a cross-check."""
    _nonneg(n)
    if k < 0 or k > n:
        return ZERO
    k = min(k, n - k)
    num = ONE
    for i in range(k):
        num = num * _q_int1(n - i)
    try:
        return exact_div(num, _q_factorial1(k))
    except NonExactDivision as exc:  # pragma: no cover - would be a bug
        raise AssertionError(f"Gaussian binomial [{n} {k}] failed to divide") from exc


def q_binomial(n, k, b=1):
    """Gaussian binomial [n over k] in base q^b; zero outside 0 <= k <= n."""
    b = _step(b)
    if n < 0 or k < 0 or k > n:
        return ZERO
    p = _q_binomial1(n, k)
    return p if b == 1 else substitute_q_power(p, b)


def poch(a_coeff, a_exp, step_exp, length):
    """(a; Q)_len with a = a_coeff*q^a_exp and Q = q^step_exp."""
    if a_coeff not in (1, -1):
        raise InvalidParameter("a_coeff must be +1 or -1")
    _nonneg(length, "len")
    a_u = to_u(a_exp)
    s_u = to_u(step_exp)
    out = ONE
    for k in range(length):
        e = a_u + k * s_u
        if e == 0:
            factor = LaurentPoly.const(1 - a_coeff)
        else:
            factor = LaurentPoly._raw({0: 1, e: -a_coeff})
        out = out * factor
    return out


@lru_cache(maxsize=None)
def gauss_product(i):
    """g_i = (1-q)(1-q^3)...(1-q^{2i-1}); g_0 = 1."""
    _nonneg(i, "i")
    if i == 0:
        return ONE
    return gauss_product(i - 1) * LaurentPoly._raw({0: 1, 2 * (2 * i - 1): -1})


def s_sum(N, r):
    """Alternating Gauss-type sum (-1)^N sum_l [N l] (-q^r)^l."""
    _nonneg(N, "N")
    r_u = to_u(r)
    total = ZERO
    for l in range(N + 1):
        sign = -1 if (N + l) % 2 else 1
        total = total + q_binomial(N, l).shift_u(r_u * l).scale(sign)
    return total


def gauss_G(k):
    """G_k = S_k(1): zero for odd k, g_{k/2} for even k."""
    _nonneg(k, "k")
    if k % 2:
        return ZERO
    return gauss_product(k // 2)


def sigma(N, gamma):
    """Non-alternating sum sum_k [N k]_{q^2} q^{gamma k}."""
    _nonneg(N, "N")
    g_u = to_u(gamma)
    total = ZERO
    for k in range(N + 1):
        total = total + q_binomial(N, k, 2).shift_u(g_u * k)
    return total


@lru_cache(maxsize=None)
def c_coeff_closed(l, s):
    """c_{l|s} from the closed product/quotient form."""
    _nonneg(l, "l")
    if s < 0 or s > l:
        return ZERO
    r, odd = divmod(s, 2)
    if odd:
        top, bottom = l - r - 1, r
        den = gauss_product(r + 1)
    else:
        top, bottom = l - r, r
        den = gauss_product(r)
    try:
        ratio = exact_div(gauss_product(l - r), den)
    except NonExactDivision as exc:  # pragma: no cover - would be a bug
        raise AssertionError(f"g-quotient for c_{{{l}|{s}}} failed to divide") from exc
    return q_binomial(top, bottom, 2) * ratio


@lru_cache(maxsize=None)
def c_coeff_rec(l, s):
    """c_{l|s} from the recurrence c_{l+1|s} = (q^s - q^{2l+1}) c_{l|s} + c_{l|s-1}."""
    _nonneg(l, "l")
    if s < 0 or s > l:
        return ZERO
    if l == 0:
        return ONE
    p = l - 1
    lead = LaurentPoly.q_power(s) - LaurentPoly.q_power(2 * p + 1)
    return lead * c_coeff_rec(p, s) + c_coeff_rec(p, s - 1)
