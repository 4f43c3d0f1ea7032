"""Additive q-difference tables and their inversion from boundary values."""
import csv
import io
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidParameter
from .polyq import ONE, ZERO, LaurentPoly, substitute_q_power, to_u
from .qcore import poch, q_binomial, q_int, sigma


def canonical_theta(k):
    return k


@dataclass(frozen=True)
class SeqTable:
    """rows[k][n] = (Delta^k a)_n; theta[k] is the twist exponent used at level k."""

    rows: tuple
    theta: tuple

    def entry(self, k, n):
        return self.rows[k][n]

    def column(self, n=0):
        return [row[n] for row in self.rows if n < len(row)]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        width = len(self.rows[0]) if self.rows else 0
        w.writerow(["k"] + [f"n={n}" for n in range(width)])
        for k, row in enumerate(self.rows):
            w.writerow([k] + [c.text() for c in row] + [""] * (width - len(row)))
        return buf.getvalue()


def _theta_values(theta, K):
    if theta is None:
        theta = canonical_theta
    if callable(theta):
        return [theta(k) for k in range(K)]
    theta = list(theta)
    if len(theta) < K:
        raise InvalidParameter(f"theta has {len(theta)} entries, {K} needed")
    return theta[:K]


def delta_table(a, K, theta=None):
    """Triangle (Delta^k a)_n for k <= K, with (Delta^{k+1} a)_n = (Delta^k a)_{n+1} - q^theta(k) (Delta^k a)_n."""
    a = [LaurentPoly.const(v) if isinstance(v, int) else v for v in a]
    if K < 0 or K > len(a) - 1:
        raise InvalidParameter(f"K={K} needs at least {K + 1} terms, got {len(a)}")
    th = _theta_values(theta, K)
    rows = [tuple(a)]
    for k in range(K):
        prev = rows[-1]
        tw = to_u(th[k])
        rows.append(tuple(prev[n + 1] - prev[n].shift_u(tw) for n in range(len(prev) - 1)))
    return SeqTable(tuple(rows), tuple(th))


def reconstruct(b, n_max):
    """a_n = sum_s b_s [n s] for n <= n_max (canonical theta only)."""
    b = [LaurentPoly.const(v) if isinstance(v, int) else v for v in b]
    if n_max > len(b) - 1:
        raise InvalidParameter(f"n_max={n_max} needs {n_max + 1} boundary values, got {len(b)}")
    out = []
    for n in range(n_max + 1):
        total = ZERO
        for s in range(n + 1):
            if not b[s].is_zero():
                total = total + b[s] * q_binomial(n, s)
        out.append(total)
    return out


def table_entry_from_boundary(b, k, n):
    """(Delta^k a)_n = sum_s b_{k+n-s} [n s] q^{ks}."""
    total = ZERO
    for s in range(n + 1):
        bv = b[k + n - s]
        if isinstance(bv, int):
            bv = LaurentPoly.const(bv)
        total = total + bv * q_binomial(n, s).shift(k * s)
    return total


def crux_boundary(s, r, rho):
    """b_s = [s rho] q^{(s - rho)(r + 1/2)}."""
    return q_binomial(s, rho).shift(Fraction((s - rho) * (2 * r + 1), 2))


def crux_family(n, r, rho):
    """Reconstruction of a_n from the boundary sequence [s rho] q^{(s-rho)(r+1/2)}."""
    for name, v in (("n", n), ("r", r), ("rho", rho)):
        if not isinstance(v, int) or v < 0:
            raise InvalidParameter(f"{name} must be a non-negative integer")
    b = [crux_boundary(s, r, rho) for s in range(n + 1)]
    return reconstruct(b, n)[n]


def crux_closed(n, r, rho):
    """[n rho] * sigma_{n-rho}(2r+1) with q replaced by q^(1/2)."""
    if rho > n:
        return ZERO
    return q_binomial(n, rho) * substitute_q_power(sigma(n - rho, 2 * r + 1), Fraction(1, 2))


def crux_r0_rho1(n):
    """[n] (-q^{1/2}; q^{1/2})_{n-1}."""
    if n == 0:
        return ZERO
    return q_int(n) * poch(-1, Fraction(1, 2), Fraction(1, 2), n - 1)


def alternating_boundary(sign, r, length):
    """Boundary (sign*q^r)^n whose reconstruction gives the Gauss-type sums."""
    base = LaurentPoly.q_power(r, sign)
    out, p = [], ONE
    for _ in range(length):
        out.append(p)
        p = p * base
    return out
