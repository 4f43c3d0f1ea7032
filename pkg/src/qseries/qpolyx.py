"""Polynomials in x with Laurent-polynomial coefficients.

Houses the q-derivative, the shift operator f -> x f(x) - f(qx), rising
powers, the Rogers-Szego family S_N with its closed form, q-Taylor expansion
and the P_N / rho_n connection problem.
"""
from functools import lru_cache

from .errors import InvalidParameter, NonExactDivision, ThetaInconsistent
from .polyq import ONE, ZERO, LaurentPoly, RationalFunction, exact_div, to_u
from .qcore import poch, q_binomial, q_factorial, q_int


def _lp(v):
    if isinstance(v, LaurentPoly):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return LaurentPoly.const(v)
    raise TypeError(f"expected a LaurentPoly, got {type(v).__name__}")


class XPoly:
    """Immutable polynomial sum_n coeffs[n] * x^n."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_lp(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls([c])

    @classmethod
    def monomial(cls, n, c=ONE):
        return cls([ZERO] * n + [c])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def coeff(self, n):
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else ZERO

    @staticmethod
    def _coerce(other):
        if isinstance(other, XPoly):
            return other
        if isinstance(other, LaurentPoly) or (isinstance(other, int) and not isinstance(other, bool)):
            return XPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return XPoly([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return XPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return XPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return XPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise InvalidParameter("x-polynomial powers must be non-negative integers")
        out = XPoly([ONE])
        for _ in range(n):
            out = out * self
        return out

    def mul_x(self, k=1):
        return XPoly([ZERO] * k + list(self.coeffs)) if self.coeffs else self

    def scale_arg(self, c):
        """f(q^c x): multiply the x^n coefficient by q^{c n}."""
        c_u = to_u(c)
        return XPoly([a.shift_u(c_u * n) for n, a in enumerate(self.coeffs)])

    def scale_arg_by(self, v):
        """f(v x) for a LaurentPoly v."""
        v = _lp(v)
        out, pw = [], ONE
        for a in self.coeffs:
            out.append(a * pw)
            pw = pw * v
        return XPoly(out)

    def evaluate(self, v):
        """Horner evaluation at x = v (a LaurentPoly)."""
        v = _lp(v)
        acc = ZERO
        for a in reversed(self.coeffs):
            acc = acc * v + a
        return acc

    def map_coeffs(self, fn):
        return XPoly([fn(a) for a in self.coeffs])

    def eval_at_one(self):
        """Integer coefficient list after q -> 1."""
        return [a.eval_at_one() for a in self.coeffs]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def text(self):
        """Degree-ascending text; a constant prints as its coefficient alone."""
        if not self.coeffs:
            return "0"
        if len(self.coeffs) == 1:
            return self.coeffs[0].text()
        parts = []
        for n, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            if n == 0:
                parts.append(f"({a.text()})")
            else:
                parts.append(f"({a.text()})*x^{n}")
        return " + ".join(parts)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"XPoly({self.text()!r})"

    def to_json(self):
        return [a.to_json() for a in self.coeffs]

    def latex(self):
        if not self.coeffs:
            return "0"
        if len(self.coeffs) == 1:
            return self.coeffs[0].latex()
        parts = []
        for n, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            xs = "" if n == 0 else ("x" if n == 1 else f"x^{{{n}}}")
            if a == ONE and xs:
                parts.append(xs)
            else:
                parts.append(f"\\left({a.latex()}\\right){xs}")
        return " + ".join(parts)


X = XPoly([ZERO, ONE])


def epsilon(N):
    """1 for even N, 0 for odd N."""
    return 1 if N % 2 == 0 else 0


def epsilon_floor(N):
    return (N + 2) // 2 - (N + 1) // 2


def q_derivative(f):
    """(f(qx) - f(x)) / (qx - x), computed coefficient-wise."""
    return XPoly([q_int(n) * a for n, a in enumerate(f.coeffs)][1:])


def q_derivative_quotient(f):
    """The same derivative via the literal difference quotient; used as a cross-check."""
    diff = f.scale_arg(1) - f
    if diff.is_zero():
        return XPoly()
    # diff has zero constant term; divide by (q - 1) x
    out = []
    for a in diff.coeffs[1:]:
        out.append(exact_div(a, LaurentPoly.q_power(1) - ONE))
    return XPoly(out)


def op_O(f):
    """x f(x) - f(qx)."""
    return f.mul_x() - f.scale_arg(1)


@lru_cache(maxsize=None)
def rising_x(v, l):
    """(x +. v)^l = prod_{k<l} (x + q^k v)."""
    v = _lp(v)
    if l < 0:
        raise InvalidParameter("rising power length must be non-negative")
    if l == 0:
        return XPoly([ONE])
    return rising_x(v, l - 1) * XPoly([v.shift_u(2 * (l - 1)), ONE])


def rising_scalar(a, b, l):
    """(a +. b)^l = prod_{k<l} (a + q^k b) for scalars."""
    a, b = _lp(a), _lp(b)
    out = ONE
    for k in range(l):
        out = out * (a + b.shift_u(2 * k))
    return out


@lru_cache(maxsize=None)
def rogers_szego_S(N):
    """(-1)^N sum_l [N l] (-x)^l."""
    if N < 0:
        raise InvalidParameter("N must be non-negative")
    coeffs = []
    for l in range(N + 1):
        c = q_binomial(N, l)
        coeffs.append(-c if (N + l) % 2 else c)
    return XPoly(coeffs)


def e_coeff(N, k):
    """Coefficient of (x -. 1)^{N-2k} in the closed form of S_N."""
    if N < 0:
        raise InvalidParameter("N must be non-negative")
    m = N // 2
    if k < 0 or k > m:
        return ZERO
    return q_binomial(m, k, 2) * poch(1, N - epsilon(N), -2, k)


@lru_cache(maxsize=None)
def e_coeff_rec(N, k):
    """Same coefficients from e_{N+1|k} = e_{N|k} + e_{N|k-1} q^{N+1-2k}(1 - q^{N+2-2k})."""
    if k < 0 or k > N // 2:
        return ZERO
    if N == 0:
        return ONE
    p = N - 1
    step = LaurentPoly.q_power(p + 1 - 2 * k) - LaurentPoly.q_power(2 * p + 3 - 4 * k)
    return e_coeff_rec(p, k) + e_coeff_rec(p, k - 1) * step


@lru_cache(maxsize=None)
def closed_form_S_tilde(N):
    """sum_k [floor(N/2) k]_{q^2} (x -. 1)^{N-2k} (q^{N-eps(N)}; q^{-2})_k."""
    if N < 0:
        raise InvalidParameter("N must be non-negative")
    total = XPoly()
    minus_one = LaurentPoly.const(-1)
    for k in range(N // 2 + 1):
        total = total + rising_x(minus_one, N - 2 * k) * e_coeff(N, k)
    return total


def q_taylor(f, a):
    """Coefficients c_k with f = sum_k c_k (x -. a)^k, c_k = (D_q^k f)(a) / [k]!."""
    a = _lp(a)
    out = []
    g = f
    for k in range(f.degree + 1):
        value = g.evaluate(a)
        try:
            out.append(exact_div(value, q_factorial(k)))
        except NonExactDivision as exc:  # pragma: no cover - impossible for polynomial f
            raise AssertionError(f"q-Taylor coefficient {k} is not exact") from exc
        g = q_derivative(g)
    return out


def taylor_reconstruct(coeffs, a):
    a = _lp(a)
    total = XPoly()
    for k, c in enumerate(coeffs):
        total = total + rising_x(-a, k) * c
    return total


def monomial_expansion_sides(n, a, b):
    """Both sides of x^n = sum [n k] a^{n-k} (x -. a)^k and of the (x +. b) generalisation."""
    a, b = _lp(a), _lp(b)
    lhs1 = XPoly.monomial(n)
    rhs1 = XPoly()
    lhs2 = XPoly()
    rhs2 = XPoly()
    for k in range(n + 1):
        nk = q_binomial(n, k)
        rhs1 = rhs1 + rising_x(-a, k) * (nk * a ** (n - k))
        lhs2 = lhs2 + rising_x(b, k) * (nk * a ** (n - k))
        rhs2 = rhs2 + XPoly.monomial(n - k, nk * rising_scalar(a, b, k))
    return (lhs1, rhs1), (lhs2, rhs2)


def monomial_expansion_check(n, a, b):
    (l1, r1), (l2, r2) = monomial_expansion_sides(n, a, b)
    return l1 == r1 and l2 == r2


def _alpha_u(alpha2):
    if not isinstance(alpha2, int) or alpha2 < 0:
        raise InvalidParameter("alpha2 (twice alpha) must be a non-negative integer")
    return alpha2


@lru_cache(maxsize=None)
def P_N(N, alpha2):
    """sum_l [N l] x^l q^{alpha l^2}, alpha = alpha2/2."""
    _alpha_u(alpha2)
    return XPoly([q_binomial(N, l).shift_u(alpha2 * l * l) for l in range(N + 1)])


def euler_product(N):
    """(1 - x)(1 - qx)...(1 - q^{N-1}x)."""
    out = XPoly([ONE])
    for k in range(N):
        out = out * XPoly([ONE, LaurentPoly.q_power(k, -1)])
    return out


def euler_sum(N):
    """sum_l [N l] (-x)^l q^{C(l,2)}."""
    return XPoly([q_binomial(N, l).shift(l * (l - 1) // 2).scale((-1) ** l) for l in range(N + 1)])


def euler_binomial(N):
    """Both forms of Euler's q-binomial product, (product, sum)."""
    return euler_product(N), euler_sum(N)


@lru_cache(maxsize=None)
def rho_n(n, alpha2):
    """q^{(1-2a)C(n,2)} (-q^{(2n-1)a} x; q^{-1})_n with a = alpha2/2."""
    _alpha_u(alpha2)
    # u-exponent of the prefactor is 2(1-2a)C(n,2) = (1 - alpha2) n (n-1)
    out = XPoly([LaurentPoly.u_power((1 - alpha2) * n * (n - 1))])
    for k in range(n):
        out = out * XPoly([ONE, LaurentPoly.u_power((2 * n - 1) * alpha2 - 2 * k)])
    return out


def _theta_solve_at(N, alpha2):
    pn = P_N(N, alpha2)
    rhos = [rho_n(N - j, alpha2) for j in range(N + 1)]
    thetas = []
    for k in range(N + 1):
        deg = N - k
        acc = RationalFunction(pn.coeff(deg))
        for j in range(k):
            contrib = q_binomial(N, j) * rhos[j].coeff(deg)
            if not contrib.is_zero():
                acc = acc - thetas[j] * contrib
        lead = q_binomial(N, k) * rhos[k].coeff(deg)
        thetas.append((acc / RationalFunction(lead)).simplify())
    return thetas


def theta_residual(N, alpha2, thetas):
    """P_N - sum_k [N k] rho_{N-k} theta_k, cleared of denominators."""
    den = ONE
    for t in thetas[: N + 1]:
        if t.den != ONE:
            den = den * t.den
    total = P_N(N, alpha2) * den
    for k in range(N + 1):
        t = thetas[k]
        scale = t.num * exact_div(den, t.den)
        total = total - rho_n(N - k, alpha2) * (q_binomial(N, k) * scale)
    return total


def theta_solve(N_max, alpha2, check=True):
    """Connection coefficients theta_0..theta_{N_max}, checked against every smaller N."""
    if N_max < 0:
        raise InvalidParameter("N_max must be non-negative")
    thetas = _theta_solve_at(N_max, alpha2)
    if check:
        for N in range(N_max):
            lower = _theta_solve_at(N, alpha2)
            for k, (a, b) in enumerate(zip(lower, thetas)):
                if a != b:
                    raise ThetaInconsistent(k, a, b, N, N_max)
        for N in range(N_max + 1):
            if not theta_residual(N, alpha2, thetas).is_zero():
                raise ThetaInconsistent(N, "residual", "non-zero", N, N_max)
    return thetas


def recurrence_sides_P(N, alpha2):
    """(lhs, rhs) pairs for the derivative rule and both step recurrences of P_N."""
    p = P_N(N, alpha2)
    q_alpha = LaurentPoly.u_power(alpha2)
    lhs_d = q_derivative(p)
    rhs_d = P_N(N - 1, alpha2).scale_arg(alpha2) * (q_int(N) * q_alpha)
    nxt = P_N(N + 1, alpha2)
    rhs_a = p.scale_arg(alpha2).mul_x() * q_alpha + p.scale_arg(1)
    rhs_b = p.scale_arg(alpha2 - 1).mul_x() * LaurentPoly.u_power(2 * N + alpha2) + p
    return [(lhs_d, rhs_d), (nxt, rhs_a), (nxt, rhs_b)]


def recurrence_check_P(N, alpha2):
    if N < 1:
        raise InvalidParameter("N must be at least 1")
    return all(l == r for l, r in recurrence_sides_P(N, alpha2))
