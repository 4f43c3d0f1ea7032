"""Sparse Laurent polynomials in q with half-integer exponents.

Exponents are stored as integers in units of u = q^(1/2), so q^e is kept under
the key 2*e. Coefficients are Python ints (arbitrary precision).
"""
from fractions import Fraction
from math import gcd

from . import _kernels
from .errors import DivisionByZero, InvalidParameter, NonExactDivision

# below this many term pairs the sparse double loop beats building dense arrays
_DENSE_MIN_PAIRS = 64


def to_u(e):
    """Convert a half-integer exponent (int, Fraction or "n/2" string) to u units."""
    if isinstance(e, bool):
        raise InvalidParameter(f"not a half-integer: {e!r}")
    if isinstance(e, int):
        return 2 * e
    if isinstance(e, str):
        try:
            e = Fraction(e.strip())
        except ValueError:
            raise InvalidParameter(f"not a half-integer: {e!r}") from None
    if isinstance(e, Fraction):
        twice = 2 * e
        if twice.denominator != 1:
            raise InvalidParameter(f"exponent {e} is not a half-integer")
        return int(twice)
    raise InvalidParameter(f"not a half-integer: {e!r}")


def half(e):
    """Normalize a half-integer to int when integral, else Fraction."""
    u = to_u(e)
    return u // 2 if u % 2 == 0 else Fraction(u, 2)


def _fmt_u_exp(k):
    if k % 2 == 0:
        return str(k // 2)
    return f"({k}/2)"


class LaurentPoly:
    """Immutable exact Laurent polynomial in q over the integers."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for k, c in dict(terms).items():
                if not isinstance(k, int) or isinstance(k, bool):
                    raise InvalidParameter(f"u-exponent must be an int, got {k!r}")
                c = int(c)
                if c:
                    clean[k] = clean.get(k, 0) + c
            clean = {k: c for k, c in clean.items() if c}
        self._t = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        # trusted constructor: terms already has ints and no zeros
        obj = cls.__new__(cls)
        obj._t = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        c = int(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def q_power(cls, e, coeff=1):
        """coeff * q^e for a half-integer e."""
        coeff = int(coeff)
        return cls._raw({to_u(e): coeff} if coeff else {})

    @classmethod
    def u_power(cls, k, coeff=1):
        coeff = int(coeff)
        return cls._raw({int(k): coeff} if coeff else {})

    @classmethod
    def from_coeffs(cls, coeffs, start=0):
        """Polynomial sum(coeffs[i] * q^(start + i))."""
        s = to_u(start)
        return cls._raw({s + 2 * i: int(c) for i, c in enumerate(coeffs) if c})

    # -- inspection ---------------------------------------------------------

    def terms(self):
        """(u_exponent, coefficient) pairs in ascending exponent order."""
        return sorted(self._t.items())

    def coeff_u(self, k):
        return self._t.get(k, 0)

    def coeff(self, e):
        return self._t.get(to_u(e), 0)

    def is_zero(self):
        return not self._t

    def __bool__(self):
        return bool(self._t)

    def __len__(self):
        return len(self._t)

    def is_monomial(self):
        return len(self._t) == 1

    def is_unit(self):
        if len(self._t) != 1:
            return False
        (c,) = self._t.values()
        return c in (1, -1)

    def min_u(self):
        return min(self._t) if self._t else None

    def max_u(self):
        return max(self._t) if self._t else None

    def lowest_term(self):
        k = min(self._t)
        return k, self._t[k]

    def highest_term(self):
        k = max(self._t)
        return k, self._t[k]

    def is_integral(self):
        """True when every exponent is an integer power of q."""
        return all(k % 2 == 0 for k in self._t)

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int) and not isinstance(other, bool):
            return LaurentPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._t:
            return self
        if not self._t:
            return other
        out = dict(self._t)
        for k, c in other._t.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -c for k, c in self._t.items()})

    def __pos__(self):
        return self

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
        return _mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            return NotImplemented
        if n < 0:
            raise InvalidParameter("negative power of a Laurent polynomial")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, e):
        """Multiply by q^e."""
        d = to_u(e)
        return self.shift_u(d)

    def shift_u(self, d):
        if d == 0:
            return self
        return LaurentPoly._raw({k + d: c for k, c in self._t.items()})

    def scale(self, c):
        c = int(c)
        if c == 0:
            return ZERO
        return LaurentPoly._raw({k: c * v for k, v in self._t.items()})

    def inverse_unit(self):
        if not self.is_unit():
            raise NonExactDivision(f"{self} is not a unit")
        ((k, c),) = self._t.items()
        return LaurentPoly._raw({-k: c})

    def exact_div(self, other):
        return exact_div(self, other)

    def substitute_q_power(self, r):
        return substitute_q_power(self, r)

    def eval_at_one(self):
        return sum(self._t.values())

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._t == other._t
        if isinstance(other, int) and not isinstance(other, bool):
            return self._t == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- serialization ------------------------------------------------------

    def text(self):
        """Canonical text: ascending terms, ``c``, ``c*q^e`` or ``c*q^(e/2)``."""
        if not self._t:
            return "0"
        parts = []
        for i, (k, c) in enumerate(sorted(self._t.items())):
            body = str(abs(c)) if k == 0 else f"{abs(c)}*q^{_fmt_u_exp(k)}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"LaurentPoly({self.text()!r})"

    def to_json(self):
        return [[k, str(c)] for k, c in sorted(self._t.items())]

    @classmethod
    def from_json(cls, data):
        return cls({int(k): int(c) for k, c in data})

    def latex(self):
        if not self._t:
            return "0"
        parts = []
        for i, (k, c) in enumerate(sorted(self._t.items())):
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                e = str(k // 2) if k % 2 == 0 else f"{k}/2"
                power = "q" if k == 2 else f"q^{{{e}}}"
                body = power if mag == 1 else f"{mag}{power}"
            sign = "-" if c < 0 else "+"
            parts.append(("-" if c < 0 else "") + body if i == 0 else f" {sign} {body}")
        return "".join(parts)


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({0: 1})
Q = LaurentPoly._raw({2: 1})


def _lattice(*polys):
    """Common base point and exponent step of the given non-zero polys."""
    base = min(p.min_u() for p in polys)
    g = 0
    for p in polys:
        for k in p._t:
            g = gcd(g, k - base)
    return base, g or 1


def _dense(p, base, step):
    lo, hi = p.min_u(), p.max_u()
    out = [0] * ((hi - lo) // step + 1)
    for k, c in p._t.items():
        out[(k - lo) // step] = c
    return out


def _mul(a, b):
    if not a._t or not b._t:
        return ZERO
    na, nb = len(a._t), len(b._t)
    if na == 1 or nb == 1 or na * nb < _DENSE_MIN_PAIRS:
        return _mul_sparse(a, b)
    _, step = _lattice(a, b)
    span_a = (a.max_u() - a.min_u()) // step + 1
    span_b = (b.max_u() - b.min_u()) // step + 1
    # dense only pays off when both operands are reasonably full
    if 4 * na < span_a or 4 * nb < span_b:
        return _mul_sparse(a, b)
    prod = _kernels.convolve(_dense(a, None, step), _dense(b, None, step))
    lo = a.min_u() + b.min_u()
    return LaurentPoly._raw({lo + i * step: c for i, c in enumerate(prod) if c})


def _mul_sparse(a, b):
    out = {}
    for ka, ca in a._t.items():
        for kb, cb in b._t.items():
            k = ka + kb
            out[k] = out.get(k, 0) + ca * cb
    return LaurentPoly._raw({k: c for k, c in out.items() if c})


def exact_div(a, b):
    """Return c with b*c == a, or raise NonExactDivision."""
    if not isinstance(b, LaurentPoly):
        b = LaurentPoly.const(b)
    if not isinstance(a, LaurentPoly):
        a = LaurentPoly.const(a)
    if b.is_zero():
        raise DivisionByZero("division by the zero polynomial")
    if a.is_zero():
        return ZERO
    if b.is_monomial():
        ((kb, cb),) = b._t.items()
        out = {}
        for k, c in a._t.items():
            qt, rem = divmod(c, cb)
            if rem:
                raise NonExactDivision(f"({a}) / ({b}) is not a Laurent polynomial")
            out[k - kb] = qt
        return LaurentPoly._raw(out)
    base, step = _lattice(a, b)
    if (a.min_u() - b.min_u()) % step or (a.max_u() - b.max_u()) % step:
        raise NonExactDivision(f"({a}) / ({b}) is not a Laurent polynomial")
    num = _dense(a, base, step)
    den = _dense(b, base, step)
    n_q = len(num) - len(den) + 1
    if n_q <= 0:
        raise NonExactDivision(f"({a}) / ({b}) is not a Laurent polynomial")
    lead = den[0]
    quot = [0] * n_q
    # synthetic division from the lowest-degree end
    for i in range(n_q):
        c = num[i]
        if c == 0:
            continue
        qt, rem = divmod(c, lead)
        if rem:
            raise NonExactDivision(f"({a}) / ({b}) is not a Laurent polynomial")
        quot[i] = qt
        for j, d in enumerate(den):
            if d:
                num[i + j] -= qt * d
    if any(num[n_q:]):
        raise NonExactDivision(f"({a}) / ({b}) is not a Laurent polynomial")
    lo = a.min_u() - b.min_u()
    return LaurentPoly._raw({lo + i * step: c for i, c in enumerate(quot) if c})


def substitute_q_power(p, r):
    """Replace q by q^r: every exponent e becomes e*r."""
    r = Fraction(r) if not isinstance(r, Fraction) else r
    if r == 0:
        raise InvalidParameter("substitution exponent must be non-zero")
    out = {}
    for k, c in p._t.items():
        nk = k * r
        if nk.denominator != 1:
            raise InvalidParameter(f"q^{Fraction(k, 2)} -> exponent {Fraction(k, 2) * r} leaves the half lattice")
        out[int(nk)] = c
    return LaurentPoly._raw(out)


def eval_at_one(p):
    return p.eval_at_one()


class RationalFunction:
    """Quotient num/den of Laurent polynomials; equality by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if den.lowest_term()[1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    @classmethod
    def of(cls, value):
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    def simplify(self):
        """Collapse to denominator 1 when the division is exact."""
        if self.den == ONE:
            return self
        try:
            return RationalFunction(exact_div(self.num, self.den))
        except NonExactDivision:
            return self

    def is_polynomial(self):
        return self.den == ONE

    def as_poly(self):
        s = self.simplify()
        if s.den != ONE:
            raise NonExactDivision(f"{self} is not a Laurent polynomial")
        return s.num

    def __add__(self, other):
        other = RationalFunction.of(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.of(other))

    def __rsub__(self, other):
        return RationalFunction.of(other) - self

    def __mul__(self, other):
        other = RationalFunction.of(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.of(other)
        if other.num.is_zero():
            raise DivisionByZero("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        if isinstance(other, (LaurentPoly, int)) and not isinstance(other, bool):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def text(self):
        if self.den == ONE:
            return self.num.text()
        return f"({self.num.text()})/({self.den.text()})"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"RationalFunction({self.text()!r})"

    def to_json(self):
        return {"num": self.num.to_json(), "den": self.den.to_json()}
