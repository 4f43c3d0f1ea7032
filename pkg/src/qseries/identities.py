"""Registry of parameterized bit-exact identity checks.

Every entry names an identity, the equations it covers, a parameter schema
with per-scale default ranges, and a check function that returns a list of
:class:`~qseries.report.Comparison` objects for one parameter point.
"""
import itertools
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import qcore, qdiff, qpolyx, series
from .errors import InvalidParameter, UnknownIdentity
from .polyq import ONE, ZERO, LaurentPoly, RationalFunction, exact_div, substitute_q_power
from .qcore import c_coeff_closed, c_coeff_rec, gauss_G, gauss_product, poch, q_binomial, q_int, s_sum, sigma
from .qpolyx import XPoly, closed_form_S_tilde, op_O, q_derivative, rising_x, rogers_szego_S
from .report import FAIL, PASS, Comparison, IdentityReport, evaluate

SCALES = ("small", "default", "large")

qp = LaurentPoly.q_power
MINUS_ONE = LaurentPoly.const(-1)


@dataclass(frozen=True)
class Param:
    name: str
    lo: int = 0
    hi: tuple = (0, 0, 0)  # inclusive upper bound per scale
    override: str | None = None
    choices: tuple | None = None
    single: bool = False  # take only the upper bound (series orders)

    def values(self, scale, overrides):
        if self.name in overrides:
            v = overrides[self.name]
            return list(v) if isinstance(v, (list, tuple, range)) else [v] if self.single else list(range(self.lo, v + 1))
        if self.choices is not None:
            return list(self.choices)
        hi = self.hi[SCALES.index(scale)]
        if self.override and self.override in overrides:
            hi = overrides[self.override]
        return [hi] if self.single else list(range(self.lo, hi + 1))


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    anchor: str
    equations: tuple
    params: tuple
    check: object = field(compare=False)

    def points(self, scale="default", overrides=None):
        overrides = overrides or {}
        grids = [p.values(scale, overrides) for p in self.params]
        names = [p.name for p in self.params]
        return [dict(zip(names, combo)) for combo in itertools.product(*grids)]


REGISTRY = {}


def register(name, anchor, equations, *params):
    def deco(fn):
        if name in REGISTRY:
            raise ValueError(f"duplicate identity {name}")
        REGISTRY[name] = IdentitySpec(name, anchor, tuple(equations), tuple(params), fn)
        return fn

    return deco


def rng(name, lo, small, default, large, override="n_max"):
    return Param(name, lo, (small, default, large), override)


def order(name, small, default, large, override="order"):
    return Param(name, 0, (small, default, large), override, single=True)


def choice(name, *values):
    return Param(name, choices=tuple(values))


def C(a, b, label=None):
    return Comparison(label or "", a, b)


# -- section 1 ----------------------------------------------------------------


@register("euler-1.3", "(1.3) (1 -. x)^N = sum [N l] (-x)^l q^C(l,2)", ("1.1", "1.2", "1.3", "4.1"),
          rng("N", 0, 8, 25, 40))
def _euler(N):
    prod, total = qpolyx.euler_binomial(N)
    classical = [(-1) ** l * comb(N, l) for l in range(N + 1)]
    return [
        C(prod, total, "product = sum"),
        C(total.eval_at_one(), classical, "q=1: (1-x)^N = sum C(N,l)(-x)^l"),
        C(sum(classical), 1 if N == 0 else 0, "q=1: sum C(N,l)(-1)^l = delta"),
    ]


@register("euler-delta-1.5/4.4", "(1.5)/(4.4) sum [N l] (-1)^l q^C(l,2) = delta_N0", ("1.5", "4.4"),
          rng("N", 0, 8, 30, 50))
def _euler_delta(N):
    return [C(qpolyx.euler_sum(N).evaluate(ONE), ONE if N == 0 else ZERO, "x=1")]


@register("gauss-1.7", "(1.7) s_{2m+1|0} = 0, s_{2m+2|0} = (1-q)(1-q^3)...(1-q^{2m+1})",
          ("1.6", "1.7", "1.19"), rng("N", 1, 10, 62, 100))
def _gauss(N):
    expected = ZERO if N % 2 else gauss_product(N // 2)
    out = [C(s_sum(N, 0), expected, "s_{N|0}")]
    if N <= 40:
        out.append(C(rogers_szego_S(N).evaluate(ONE), closed_form_S_tilde(N).evaluate(ONE), "S_N(1) = S~_N(1)"))
    return out


@register("s-r1-1.10", "(1.10a)/(1.10b) s_{N|1} in terms of s_{N|0}", ("1.8", "1.9", "1.10"),
          rng("m", 0, 6, 30, 45))
def _s_r1(m):
    odd_prod = poch(1, 1, 2, m + 1)
    return [
        C(s_sum(2 * m + 1, 1), -(ONE - qp(2 * m + 1)) * s_sum(2 * m, 0), "(1.10a) first form"),
        C(s_sum(2 * m + 1, 1), -odd_prod, "(1.10a) product"),
        C(s_sum(2 * m, 1), s_sum(2 * m, 0), "(1.10b) first form"),
        C(s_sum(2 * m, 1), poch(1, 1, 2, m), "(1.10b) product"),
    ]


@register("main-1.12/1.16", "(1.16) S_N(x) = sum_k [N/2 k]_{q^2} (x -. 1)^{N-2k} (q^{N-eps}; q^-2)_k",
          ("1.11", "1.12", "1.15", "1.16", "1.17", "2.2"), rng("N", 1, 12, 30, 45))
def _main(N):
    return [
        C(rogers_szego_S(N), closed_form_S_tilde(N), "S_N = S~_N"),
        C(qpolyx.epsilon(N), qpolyx.epsilon_floor(N), "eps parity = floor form"),
        C(rogers_szego_S(N).coeff(N), ONE, "monic"),
        C(rogers_szego_S(N).coeff(0), LaurentPoly.const((-1) ** N), "constant term"),
    ]


@register("x0-1.33", "(1.33) sum_k [N/2 k]_{q^2} q^C(N-2k,2) (q^{N-eps}; q^-2)_k = 1", ("1.33",),
          rng("N", 1, 12, 30, 45))
def _x0(N):
    m = N // 2
    total = ZERO
    for k in range(m + 1):
        w = N - 2 * k
        total = total + q_binomial(m, k, 2) * poch(1, N - qpolyx.epsilon(N), -2, k).shift(w * (w - 1) // 2) * (
            (-1) ** w
        )
    # (x -. 1)^w at x=0 is prod(-q^j) = (-1)^w q^C(w,2)
    return [
        C(total * ((-1) ** N), ONE, "x=0 column"),
        C(closed_form_S_tilde(N).evaluate(ZERO), rogers_szego_S(N).coeff(0), "S~_N(0) = S_N(0)"),
    ]


@register("qderiv-1.18", "(1.18) dS_N/d_q x = [N] S_{N-1}, same for S~", ("1.18", "1.20", "1.21", "1.24"),
          rng("N", 1, 10, 25, 40))
def _qderiv(N):
    S, St = rogers_szego_S(N), closed_form_S_tilde(N)
    return [
        C(q_derivative(S), rogers_szego_S(N - 1) * q_int(N), "(1.18a)"),
        C(q_derivative(St), closed_form_S_tilde(N - 1) * q_int(N), "(1.18b)"),
        C(q_derivative(S), qpolyx.q_derivative_quotient(S), "difference quotient"),
    ]


@register("factor-1.22", "(1.22) [w l][l] = [w][w-1 l-1]", ("1.22",), rng("w", 1, 10, 20, 30))
def _factor(w):
    return [C(q_binomial(w, l) * q_int(l), q_int(w) * q_binomial(w - 1, l - 1), f"l={l}") for l in range(1, w + 1)]


@register("rising-deriv-1.23", "(1.23) d(x +. v)^l/d_q x = [l](x +. v)^{l-1}", ("1.13", "1.23"),
          rng("l", 1, 8, 20, 30), choice("v", "1", "-1", "q", "-q"))
def _rising_deriv(l, v):
    val = {"1": ONE, "-1": MINUS_ONE, "q": qp(1), "-q": qp(1, -1)}[v]
    return [C(q_derivative(rising_x(val, l)), rising_x(val, l - 1) * q_int(l), "derivative")]


@register("shift-1.25", "(1.25) [2m+3-2k](q^{2m+3}; q^-2)_k = [2m+3](q^{2m+1}; q^-2)_k", ("1.14", "1.25"),
          rng("m", 0, 5, 10, 16))
def _shift(m):
    return [
        C(q_int(2 * m + 3 - 2 * k) * poch(1, 2 * m + 3, -2, k), q_int(2 * m + 3) * poch(1, 2 * m + 1, -2, k), f"k={k}")
        for k in range(0, min(10, m + 1) + 1)
    ]


@register("base-1.26/1.27", "(1.26) [m+1 k]_{q^2}[2m+2-2k] = [2m+2][m k]_{q^2}", ("1.26", "1.27"),
          rng("m", 0, 5, 10, 16))
def _base(m):
    out = [
        C(q_binomial(m + 1, k, 2) * q_int(2 * m + 2 - 2 * k), q_int(2 * m + 2) * q_binomial(m, k, 2), f"k={k}")
        for k in range(0, min(10, m + 1) + 1)
    ]
    out.append(C(q_int(m + 1, 2), exact_div(q_int(2 * m + 2), q_int(2)), "(1.27) [u]_{q^2} = [2u]/[2]"))
    return out


@register("step-1.28..1.31", "(1.28)-(1.32) the four steps to Gauss's formula",
          ("1.28", "1.29", "1.30", "1.31", "1.32"), rng("m", 0, 8, 20, 30))
def _steps(m):
    def alt(N, r):
        # sum_l [N l] (-q^r)^l
        return s_sum(N, r) * ((-1) ** N)

    out = [
        C(alt(2 * m, 1), alt(2 * m, 0), "(1.28)"),
        C(alt(2 * m + 1, 1), (ONE - qp(2 * m + 1)) * alt(2 * m, 0), "(1.29)"),
        C(s_sum(2 * m + 2, 0), (ONE - qp(2 * m + 1)) * s_sum(2 * m, 0), "(1.31)"),
        C(s_sum(2, 0), ONE - qp(1), "(1.32)"),
    ]
    for l in range(2 * m + 2):
        out.append(C(q_binomial(2 * m + 1, l), q_binomial(2 * m, l) + q_binomial(2 * m, l - 1).shift(2 * m + 1 - l),
                     f"(1.30) l={l}"))
    return out


# -- section 2 ----------------------------------------------------------------


@register("pascal-2.8", "(2.8a)/(2.8b) q-Pascal recurrences", ("1.4", "2.6", "2.7", "2.8"),
          rng("N", 0, 10, 24, 30), choice("b", 1, 2))
def _pascal(N, b):
    out = []
    for r in range(N + 2):
        lhs = q_binomial(N + 1, r, b)
        out.append(C(lhs, q_binomial(N, r - 1, b) + q_binomial(N, r, b).shift(b * r), f"(2.8a) r={r}"))
        out.append(C(lhs, q_binomial(N, r - 1, b).shift(b * (N + 1 - r)) + q_binomial(N, r, b), f"(2.8b) r={r}"))
    out.append(C([q_binomial(N, k, b) for k in range(N + 1)], [q_binomial(N, N - k, b) for k in range(N + 1)],
                 "symmetry"))
    if b == 1:
        out.append(C([q_binomial(N, k) for k in range(N + 1)],
                     [qcore.q_binomial_by_division(N, k) for k in range(N + 1)], "(1.4) quotient of q-factorials"))
    return out


@register("recur-2.10", "(2.10a) S_{N+1} = x S_N(x) - S_N(qx) = q^N x S_N(x/q) - S_N(x)",
          ("2.1", "2.3", "2.4", "2.5", "2.9", "2.10"), rng("N", 0, 10, 25, 40))
def _recur(N):
    S, nxt = rogers_szego_S(N), rogers_szego_S(N + 1)
    at_one = nxt.eval_at_one()
    return [
        C(nxt, S.mul_x() - S.scale_arg(1), "(2.10a)"),
        C(nxt, S.scale_arg(-1).mul_x() * qp(N) - S, "(2.10b)"),
        C(at_one, [(-1) ** (N + 1 - l) * comb(N + 1, l) for l in range(N + 2)], "q=1: (x-1)^{N+1}"),
    ]


@register("opO-2.12/2.17", "(2.12) O(S~_N) = S~_{N+1}; (2.17) O((x -. 1)^s)", ("2.11", "2.12", "2.17"),
          rng("N", 0, 10, 25, 40))
def _opO(N):
    s = N
    rhs17 = rising_x(MINUS_ONE, s + 1)
    if s >= 1:
        rhs17 = rhs17 + rising_x(MINUS_ONE, s - 1) * (qp(s - 1) - qp(2 * s - 1))
    return [
        C(op_O(closed_form_S_tilde(N)), closed_form_S_tilde(N + 1), "(2.12)"),
        C(op_O(rising_x(MINUS_ONE, s)), rhs17, "(2.17)"),
    ]


@register("ecoef-2.19/2.22/2.27", "(2.27) e_{N+1|k} = e_{N|k} + e_{N|k-1} q^{N+1-2k}(1 - q^{N+2-2k})",
          ("2.13", "2.14", "2.15", "2.16", "2.18", "2.19", "2.20", "2.21", "2.22", "2.23", "2.25", "2.26", "2.27"),
          rng("N", 0, 10, 25, 40))
def _ecoef(N):
    e = qpolyx.e_coeff
    out = []
    for k in range(N // 2 + 2):
        step = qp(N + 1 - 2 * k) - qp(2 * N + 3 - 4 * k)
        out.append(C(e(N + 1, k), e(N, k) + e(N, k - 1) * step, f"(2.27) k={k}"))
        out.append(C(e(N, k), qpolyx.e_coeff_rec(N, k), f"closed = recurrence k={k}"))
    m = N // 2
    cm = lambda k: ZERO if k < 0 else q_binomial(m, k, 2) * poch(1, 2 * m + 1, -2, k)  # noqa: E731
    dm = lambda mm, k: ZERO if k < 0 else q_binomial(mm, k, 2) * poch(1, 2 * mm - 1, -2, k)  # noqa: E731
    for k in range(m + 2):
        out.append(C(dm(m + 1, k), cm(k) + cm(k - 1) * (qp(2 * m + 2 - 2 * k) - qp(4 * m + 5 - 4 * k)), f"(2.19) k={k}"))
        out.append(C(cm(k), dm(m, k) + dm(m, k - 1) * (qp(2 * m + 1 - 2 * k) - qp(4 * m + 3 - 4 * k)), f"(2.22) k={k}"))
        out.append(C(q_binomial(m + 1, k, 2), q_binomial(m, k, 2) + q_binomial(m, k - 1, 2).shift(2 * (m + 1 - k)),
                     f"(2.20) k={k}"))
        out.append(C(q_binomial(m, k, 2) * q_int(k, 2), q_binomial(m, k - 1, 2) * q_int(m + 1 - k, 2), f"(2.23) k={k}"))
    # (2.26): e ties to c_{m|k} and d_{m|k}
    out.append(C([e(2 * m + 1, k) for k in range(m + 1)], [cm(k) for k in range(m + 1)], "(2.26) odd"))
    out.append(C([e(2 * m, k) for k in range(m + 1)], [dm(m, k) for k in range(m + 1)], "(2.26) even"))
    return out


# -- section 3 ----------------------------------------------------------------

_A_VALUES = {"1": ONE, "-1": MINUS_ONE, "q": qp(1), "0": ZERO}


@register("taylor-3.3/3.6/3.7", "(3.3) f = sum f^(k)(a)/[k]! (x -. a)^k; (3.6), (3.7)",
          ("3.1", "3.2", "3.3", "3.4", "3.5", "3.6", "3.7"),
          rng("n", 0, 8, 20, 28), choice("a", "1", "-1", "q", "0"))
def _taylor(n, a):
    av = _A_VALUES[a]
    xn = XPoly.monomial(n)
    coeffs = qcore_taylor = qpolyx.q_taylor(xn, av)
    expected = [q_binomial(n, k) * av ** (n - k) for k in range(n + 1)]
    out = [
        C(qpolyx.taylor_reconstruct(coeffs, av), xn, "(3.3) reconstruction"),
        C(qcore_taylor, expected, "(3.5)/(3.6) coefficients"),
    ]
    (l1, r1), (l2, r2) = qpolyx.monomial_expansion_sides(n, av, -av)
    out += [C(l1, r1, "(3.6)"), C(l2, r2, "(3.7) b=-a")]
    (_, _), (l3, r3) = qpolyx.monomial_expansion_sides(n, av, qp(1))
    out.append(C(l3, r3, "(3.7) b=q"))
    if a == "1":
        out.append(C([c.eval_at_one() for c in coeffs], [comb(n, k) for k in range(n + 1)], "q=1 classical Taylor"))
    f = qpolyx.P_N(n, 2)  # a non-monomial test function
    out.append(C(qpolyx.taylor_reconstruct(qpolyx.q_taylor(f, av), av), f, "(3.3) on P_n"))
    return out


@register("taylor-S-3.10/3.12", "(3.10) S_N = sum [N k] G_{N-k} (x -. 1)^k; (3.12)",
          ("3.8", "3.9", "3.10", "3.11", "3.12"), rng("N", 0, 8, 20, 28))
def _taylor_S(N):
    S = rogers_szego_S(N)
    coeffs = qpolyx.q_taylor(S, ONE)
    out = [C(coeffs, [q_binomial(N, k) * gauss_G(N - k) for k in range(N + 1)], "(3.10) coefficients")]
    second = XPoly()
    for k in range(N + 1):
        second = second + rising_x(MINUS_ONE, N - k) * (q_binomial(N, k) * gauss_G(k))
    out.append(C(S, second, "(3.10) second form"))
    form312 = XPoly()
    for k in range(N // 2 + 1):
        form312 = form312 + rising_x(MINUS_ONE, N - 2 * k) * (q_binomial(N, 2 * k) * poch(1, 2 * k - 1, -2, k))
    out.append(C(S, form312, "(3.12)"))
    g = S
    for k in range(N + 1):
        out.append(C(g, rogers_szego_S(N - k) * (qcore.q_factorial(k) * q_binomial(N, k)), f"(3.9) k={k}"))
        g = q_derivative(g)
    for k in range(N + 1):
        out.append(C(gauss_G(k), rogers_szego_S(k).evaluate(ONE), f"(3.11) G_{k} = S_{k}(1)"))
        if k % 2 == 0:
            out.append(C(gauss_G(k), poch(1, k - 1, -2, k // 2), f"(3.11) Pochhammer form k={k}"))
    return out


@register("bridge-3.13/3.14", "(3.13) [N 2k]_q (q^{2k-1}; q^-2)_k = [m k]_{q^2} (q^{2m+-1}; q^-2)_k",
          ("3.13", "3.14"), rng("N", 0, 10, 25, 35))
def _bridge(N):
    m = N // 2
    top = 2 * m + 1 if N % 2 else 2 * m - 1
    out = [
        C(q_binomial(N, 2 * k) * poch(1, 2 * k - 1, -2, k), q_binomial(m, k, 2) * poch(1, top, -2, k), f"k={k}")
        for k in range(m + 1)
    ]
    form314 = XPoly()
    for k in range(m + 1):
        form314 = form314 + rising_x(MINUS_ONE, N - 2 * k) * (q_binomial(N, 2 * k) * poch(1, 2 * k - 1, -2, k))
    out.append(C(form314, closed_form_S_tilde(N), "(3.14) = (1.16)"))
    return out


@register("P-recur-3.17/3.18", "(3.17) dP_N = [N] q^a P_{N-1}(q^{2a}x); (3.18a)/(3.18b)",
          ("3.16", "3.17", "3.18"), rng("N", 1, 6, 12, 18), choice("alpha2", 0, 1, 2))
def _P_recur(N, alpha2):
    sides = qpolyx.recurrence_sides_P(N, alpha2)
    labels = ("(3.17)", "(3.18a)", "(3.18b)")
    out = [C(lhs, rhs, lab) for lab, (lhs, rhs) in zip(labels, sides)]
    if alpha2 == 0:
        out.append(C(qpolyx.P_N(N, 0), rogers_szego_S(N).scale_arg_by(MINUS_ONE) * ((-1) ** N), "alpha=0: (-1)^N S_N(-x)"))
    if alpha2 == 1:
        out.append(C(qpolyx.P_N(N, 1), qpolyx.euler_sum(N).scale_arg_by(LaurentPoly.u_power(1, -1)),
                     "alpha=1/2: Euler sum at x -> -q^(1/2) x"))
    return out


@register("rho-3.21", "(3.21) d rho_n/d_q x = [n] q^a rho_{n-1}(q^{2a} x)", ("3.20", "3.21"),
          rng("n", 1, 6, 12, 18), choice("alpha2", 0, 1, 2, 3))
def _rho(n, alpha2):
    rho = qpolyx.rho_n(n, alpha2)
    return [
        C(q_derivative(rho), qpolyx.rho_n(n - 1, alpha2).scale_arg(alpha2) * (q_int(n) * LaurentPoly.u_power(alpha2)),
          "(3.21)"),
        C(rho.coeff(n), LaurentPoly.u_power(alpha2 * n * n), "leading coefficient q^{a n^2}"),
    ]


def theta_sides(N, alpha2, thetas):
    """P_N and sum [N k] rho_{N-k} theta_k, both multiplied by the common denominator."""
    den = ONE
    for t in thetas[: N + 1]:
        if t.den != ONE:
            den = den * t.den
    rhs = XPoly()
    for k in range(N + 1):
        t = thetas[k]
        rhs = rhs + qpolyx.rho_n(N - k, alpha2) * (q_binomial(N, k) * t.num * exact_div(den, t.den))
    return qpolyx.P_N(N, alpha2) * den, rhs


@register("theta-3.19", "(3.19) P_N = sum [N k] rho_{N-k} theta_k", ("3.19",),
          order("N_max", 6, 12, 16, override="n_max"), choice("alpha2", 0, 1, 2))
def _theta(N_max, alpha2):
    thetas = qpolyx._theta_solve_at(N_max, alpha2)
    wider = qpolyx._theta_solve_at(N_max + 2, alpha2)
    out = []
    for N in range(N_max + 1):
        lhs, rhs = theta_sides(N, alpha2, thetas)
        out.append(C(lhs, rhs, f"residual N={N}"))
    out.append(C(thetas, wider[: N_max + 1], f"theta agree at N={N_max} and N={N_max + 2}"))
    if alpha2 == 0:
        out.append(C(thetas, [RationalFunction(gauss_G(k) * ((-1) ** k)) for k in range(N_max + 1)],
                     "alpha=0: theta_k = (-1)^k G_k"))
    polys = all(t.is_polynomial() for t in thetas)
    return out, f"thetas {'are Laurent polynomials' if polys else 'need rational form'}"


# -- section 4 ----------------------------------------------------------------


@register("geom-4.2/4.5/4.9", "(4.9) sum (q^r t)^l q^C(l,2)/(1 +. t)^{l+1} = sum (1 -. q^r)^N (-t)^N",
          ("4.2", "4.5", "4.9"), order("order", 12, 40, 60),
          choice("r", 0, Fraction(1, 2), 1, 2, 3))
def _geom(order, r):
    lhs, rhs = series.geometric_q_sides(order, r)
    out = [C(lhs, rhs, "(4.9)")]
    if r == 0:
        out.append(C(rhs, series.TruncSeries.one("t", order, series.LAURENT), "(4.5) right side is 1"))
        one_plus_t = series.TruncSeries([1, 1], "t", order, series.INT)
        classical = series.TruncSeries.zero("t", order, series.INT)
        inv = one_plus_t.reciprocal()
        power = inv
        for l in range(order):
            classical = classical + power.shift(l)
            power = power * inv
        out.append(C(lhs.eval_at_one(), classical, "q=1 shadow of lhs"))
        out.append(C(classical, series.TruncSeries.one("t", order, series.INT), "(4.2)"))
    return out


@register("carlitz-4.8", "(4.8) sum t^k/(1 +. t)^{k+1} = 1 + sum (1-q)...(1-q^{2m-1}) t^{2m}", ("4.7", "4.8"),
          order("order", 12, 40, 60))
def _carlitz(order):
    lhs, rhs = series.carlitz_sides(order)
    out = [C(lhs, rhs, "(4.8)")]
    gseries = series.TruncSeries([gauss_G(N) for N in range(order)], "t", order, series.LAURENT)
    out.append(C(rhs, gseries, "(4.7) sum (-t)^N G_N"))
    return out


@register("bivar-4.10/4.11", "(4.10) sum z^l q^C(l,2)/(1 +. t)^{l+1} = sum (-1)^N (t -. z)^N",
          ("4.10", "4.11"), order("order_z", 6, 12, 16), order("order_t", 6, 12, 16))
def _bivar(order_z, order_t):
    lhs, rhs = series.bivariate_geometric_sides(order_z, order_t)
    c_lhs, c_rhs = series.classical_bivariate_sides(order_z, order_t)
    return [
        C(lhs, rhs, "(4.10)"),
        C(lhs.eval_at_one(), c_lhs, "q=1 lhs"),
        C(c_lhs, c_rhs, "(4.11)"),
    ]


@register("negbinom-4.3/4.6", "(4.6) 1/(1 -. t)^{N+1} = sum [N+s s] t^s", ("4.3", "4.6"),
          rng("N", 0, 6, 15, 20), order("order", 15, 30, 40))
def _negbinom(N, order):
    s = series.euler_negative_binomial(N, order)
    prod = s * series.rising_t(-1, N + 1, order)
    return [
        C(prod, series.TruncSeries.one("t", order, series.LAURENT), "(4.6)"),
        C(s.eval_at_one(), series.TruncSeries([comb(N + k, k) for k in range(order)], "t", order, series.INT),
          "(4.3) at q=1"),
    ]


@register("delta-sum-4.4", "(4.4) times (-t)^N summed over N regenerates (4.5)", ("4.4",),
          order("order", 12, 30, 40))
def _delta_sum(order):
    coeffs = [qpolyx.euler_sum(N).evaluate(ONE) * ((-1) ** N) for N in range(order)]
    lhs = series.TruncSeries(coeffs, "t", order, series.LAURENT)
    geo, _ = series.geometric_q_sides(order, 0)
    return [C(lhs, geo, "sum_N (-t)^N delta = lhs of (4.5)")]


# -- section 5 ----------------------------------------------------------------


@register("sigma-5.4/5.5/5.8", "(5.5) sigma_N = sum [N l]_{q^2} q^l = (1 +. q)^N; (5.4), (5.8)",
          ("5.1", "5.2", "5.3", "5.4", "5.5", "5.6", "5.7", "5.8", "5.9"), rng("N", 0, 10, 30, 40))
def _sigma(N):
    s1 = sigma(N, 1)
    rising = qpolyx.rising_scalar(ONE, qp(1), N)
    half_sum = ZERO
    for l in range(N + 1):
        half_sum = half_sum + q_binomial(N, l).shift(Fraction(l, 2))
    euler_plus = ZERO
    for l in range(N + 1):
        euler_plus = euler_plus + q_binomial(N, l).shift(l * (l + 1) // 2)
    mirrored = ZERO
    for l in range(N + 1):
        mirrored = mirrored + q_binomial(N, l, 2).shift(N - l)
    return [
        C(s1, rising, "(5.5)"),
        C(sigma(N + 1, 1), (ONE + qp(N + 1)) * s1, "(5.8)"),
        C(half_sum, poch(-1, Fraction(1, 2), Fraction(1, 2), N), "(5.4)"),
        C(half_sum, substitute_q_power(s1, Fraction(1, 2)), "(5.4) = (5.5) under q -> q^(1/2)"),
        C(euler_plus, rising, "(5.2)"),
        C(mirrored, s1, "(5.6)"),
        C(s1.eval_at_one(), 2 ** N, "(5.1) at q=1"),
    ]


@register("sigma-sym-5.10", "(5.10) sigma_N(-g) = q^{-gN} sigma_N(g)", ("5.10",),
          rng("N", 0, 8, 20, 30), choice("gamma", 1, 3, 5))
def _sigma_sym(N, gamma):
    return [C(sigma(N, -gamma), sigma(N, gamma).shift(-gamma * N), "(5.10)")]


@register("sigma-rec-5.11", "(5.11) sigma_N(g+2) = sigma_{N+1}(g) - q^g sigma_N(g)", ("5.11",),
          rng("N", 0, 8, 20, 30), choice("gamma", 1, 3, 5, 7))
def _sigma_rec(N, gamma):
    return [C(sigma(N, gamma + 2), sigma(N + 1, gamma) - sigma(N, gamma).shift(gamma), "(5.11)")]


@register("ccoef-5.13/5.16", "(5.16) closed c_{l|s} against the recurrence (5.13)",
          ("5.13", "5.14", "5.15", "5.16", "5.17"), rng("l", 0, 8, 20, 28))
def _ccoef(l):
    out = [C(c_coeff_closed(l, s), c_coeff_rec(l, s), f"s={s}") for s in range(-1, l + 2)]
    for s in range(l + 1):
        rec = (qp(s) - qp(2 * l + 1)) * c_coeff_closed(l, s) + c_coeff_closed(l, s - 1)
        out.append(C(c_coeff_closed(l + 1, s), rec, f"(5.13) s={s}"))
    out.append(C(c_coeff_closed(0, 0), ONE, "(5.15)"))
    out.append(C(gauss_product(l), poch(1, 1, 2, l), "(5.17) g_l"))
    return out


def sigma_ratio_coeffs(l):
    """Coefficients of Q^s in sigma_N(2l+1)/sigma_N(1): c_{l|s} q^C(s+1,2)."""
    return [c_coeff_closed(l, s).shift(s * (s + 1) // 2) for s in range(l + 1)]


def reference_sigma_ratios():
    """Factored forms of the first four ratios, expanded."""
    g = lambda *ts: _prod([ONE - qp(t) for t in ts])  # noqa: E731
    two2 = q_int(2, 2)
    three2 = q_int(3, 2)
    return {
        1: [g(1), qp(1)],
        2: [g(1, 3), qp(1) * g(3), qp(3)],
        3: [g(1, 3, 5), qp(1) * g(3, 5), qp(3) * g(3) * two2, qp(6)],
        4: [g(1, 3, 5, 7), qp(1) * g(3, 5, 7), qp(3) * g(3, 5) * three2, qp(6) * g(5) * two2, qp(10)],
    }


def _prod(items):
    out = ONE
    for x in items:
        out = out * x
    return out


@register("sigma-table-5.18", "(5.12) sigma_N(2l+1) = sigma_N(1) sum c_{l|s} q^C(s+1,2) Q^s, Q = q^N",
          ("5.12", "5.18"), rng("N", 0, 6, 15, 20), rng("l", 0, 3, 6, 8, override="l_max"))
def _sigma_table(N, l):
    coeffs = sigma_ratio_coeffs(l)
    ratio = ZERO
    for s, c in enumerate(coeffs):
        ratio = ratio + c.shift(N * s)
    out = [C(sigma(N, 2 * l + 1), sigma(N, 1) * ratio, "(5.12)")]
    factored = reference_sigma_ratios()
    if l in factored:
        out.append(C(coeffs, factored[l], f"(5.18) l={l} factored form"))
    return out


@register("limit-5.19/5.21", "(5.21) sum q^{(2l+1)k}/(q^2;q^2)_k = (q;q^2)_l sum q^k/(q^2;q^2)_k",
          ("5.19", "5.20", "5.21"), rng("l", 0, 4, 8, 10, override="l_max"), order("order", 20, 40, 60))
def _limit(l, order):
    lhs, rhs = series.limit_identity_sides(l, order)
    direct = series.TruncSeries.one("q", order, series.INT)
    term = series.TruncSeries.one("q", order, series.INT)
    for k in range(1, order):
        # q^{k}/(1-q^2)...(1-q^{2k}) built term by term
        den = [0] * (2 * k + 1)
        den[0], den[2 * k] = 1, -1
        term = term / series.TruncSeries(den, "q", order, series.INT)
        direct = direct + term.shift(k)
    return [
        C(lhs, rhs, "(5.21)"),
        C(c_coeff_closed(l, 0), gauss_product(l), "(5.19) Q^0 coefficient"),
        C(series.sigma_infty(1, order), direct, "(5.20) sigma_inf(1)"),
    ]


@register("fine-5.22/5.23", "(5.23) (1/(q;q^2)_inf) sum z^k/(q^2;q^2)_k = (1/(z;q^2)_inf) sum q^k/(q^2;q^2)_k",
          ("5.22", "5.23", "5.24"), order("order_z", 4, 8, 10), order("order_q", 20, 40, 60))
def _fine(order_z, order_q):
    lhs, rhs = series.fine_functional_sides(order_z, order_q)
    out = [C(lhs, rhs, "(5.23)")]
    for l in range(5):
        pl, pr = series.poch_ratio_sides(1, 1, 2, l, order_q)
        out.append(C(pl, pr, f"(5.22) l={l}"))
    inf_q = series.infinite_poch(1, 1, 2, order_q)
    for l in range(4):
        e = 2 * l + 1
        at = series.substitute_z_power(lhs, e) * inf_q.truncate(min(order_q, e * order_z))
        limit_lhs, _ = series.limit_identity_sides(l, order_q)
        out.append(C(at, limit_lhs.truncate(at.order), f"(5.24) z = q^{e}"))
    return out, "formal truncated check in place of the analytic continuation argument"


# -- section 6 ----------------------------------------------------------------


def _random_boundary(n):
    rnd = random.Random(1000 + n)
    return [LaurentPoly({rnd.randint(-4, 4): rnd.randint(-3, 3), rnd.randint(-4, 4): rnd.randint(-3, 3)})
            for _ in range(n + 1)]


@register("qdiff-6.4/6.5", "(6.4) (Delta^k a)_n = sum b_{k+n-s} [n s] q^{ks}; (6.5)",
          ("6.1", "6.2", "6.3", "6.4", "6.5", "6.6"), rng("n", 0, 8, 15, 20))
def _qdiff(n):
    b = _random_boundary(n)
    a = qdiff.reconstruct(b, n)
    table = qdiff.delta_table(a, n)
    out = [C(table.column(0), b, "boundary round trip")]
    entries = [table.entry(k, j) for k in range(n + 1) for j in range(n + 1 - k)]
    formula = [qdiff.table_entry_from_boundary(b, k, j) for k in range(n + 1) for j in range(n + 1 - k)]
    out.append(C(entries, formula, "(6.4) full table"))
    for sign, r in ((-1, 0), (-1, 1), (-1, 2)):
        rec = qdiff.reconstruct(qdiff.alternating_boundary(sign, r, n + 1), n)
        out.append(C(rec[n], s_sum(n, r) * ((-1) ** n), f"(6.6) boundary (-q^{r})^s"))
    rec = qdiff.reconstruct(qdiff.alternating_boundary(1, Fraction(1, 2), n + 1), n)
    out.append(C(rec[n], substitute_q_power(sigma(n, 1), Fraction(1, 2)), "(6.6) boundary (q^(1/2))^s"))
    return out


@register("crux-6.8/6.10/6.11", "(6.8) a_n = [n rho] sigma~_{n-rho}(2r+1); (6.10); (6.11)",
          ("6.7", "6.8", "6.9", "6.10", "6.11"),
          rng("n", 0, 8, 15, 18), rng("r", 0, 1, 3, 3, override="r_max"), rng("rho", 0, 1, 3, 3, override="rho_max"))
def _crux(n, r, rho):
    a = qdiff.crux_family(n, r, rho)
    out = [C(a, qdiff.crux_closed(n, r, rho), "(6.8)")]
    if r == 0 and rho == 1:
        out.append(C(a, qdiff.crux_r0_rho1(n), "(6.10)"))
        out.append(C(a.eval_at_one(), n * 2 ** (n - 1) if n else 0, "(6.11) n 2^{n-1}"))
        out.append(C(qdiff.crux_boundary(n, 0, 1).eval_at_one(), n, "(6.11) b_n = n"))
    return out


@register("fine-v-6.14/6.15", "(6.14) V_N(t) = sum [N+s s] t^s q^C(s,2); v_N = V_N(q) per (6.15)",
          ("6.14", "6.15"), rng("N", 0, 5, 5, 9), order("order", 20, 30, 40))
def _fine_v(N, order):
    v, readings = series.fine_v_readings(N, order)
    matching = [name for name, s in readings.items() if s == v]
    if N % 2:
        chosen = "1/(q;q^2)_{k+1}"
        out = [C(v, readings[chosen], "(6.15b) expanded-product reading")]
        note = f"matching reading(s): {', '.join(matching) or 'none'}"
    else:
        chosen = next(iter(readings))
        theta_lhs, theta_rhs = series.theta_like_sides(order)
        out = [C(v, readings[chosen], "(6.15a)"), C(theta_lhs, theta_rhs, "(6.15a) product form")]
        note = "(6.15a) form"
    Vt = series.V_N(N, False, order)
    out.append(C(Vt.coeff(0), ONE, "V_N(t) constant term"))
    return out, note


# -- running ------------------------------------------------------------------


def bump(value):
    """Shift every exponent of q by one: the mutation used by the self-test."""
    if isinstance(value, LaurentPoly):
        return value.shift(1) if not value.is_zero() else value
    if isinstance(value, XPoly):
        return value * qp(1)
    if isinstance(value, RationalFunction):
        return RationalFunction(value.num.shift(1), value.den)
    if isinstance(value, series.TruncSeries):
        if value.ring is series.INT:
            return value.shift(1) if value.var in ("q", "u") else value.map(lambda c: 2 * c, series.INT)
        return value.map(bump, value.ring)
    if isinstance(value, list):
        return [bump(v) for v in value]
    if isinstance(value, int) and not isinstance(value, bool):
        return 2 * value
    return value


def _run_point(spec, point, mutate):
    started = time.perf_counter()
    result = spec.check(**point)
    note = ""
    if isinstance(result, tuple):
        result, note = result
    if mutate:
        result = [Comparison(c.label, c.lhs, bump(c.rhs)) for c in result]
    return evaluate(spec.name, point, result, note=note, started=started)


def get(name):
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownIdentity(name) from None


def _workers(workers):
    if workers is not None:
        return max(1, workers)
    return max(1, min(4, os.cpu_count() or 1))


def run(name, overrides=None, scale="default", mutate=False, workers=None):
    """One report per parameter point, sorted by (name, params)."""
    spec = get(name)
    if scale not in SCALES:
        raise InvalidParameter(f"unknown scale {scale!r}")
    points = spec.points(scale, overrides or {})
    with ThreadPoolExecutor(max_workers=_workers(workers)) as pool:
        reports = list(pool.map(lambda p: _run_point(spec, p, mutate), points))
    return sorted(reports, key=IdentityReport.sort_key)


@dataclass
class Summary:
    reports: list
    elapsed: float

    @property
    def passed(self):
        return sum(r.status == PASS for r in self.reports)

    @property
    def failed(self):
        return sum(r.status == FAIL for r in self.reports)

    @property
    def failures(self):
        return [r for r in self.reports if r.status == FAIL]

    def by_identity(self):
        out = {}
        for r in self.reports:
            out.setdefault(r.name, []).append(r)
        return out

    def slowest(self, n=5):
        totals = {name: sum(r.elapsed for r in rs) for name, rs in self.by_identity().items()}
        return sorted(totals.items(), key=lambda kv: -kv[1])[:n]

    @property
    def ok(self):
        return self.failed == 0


def run_all(scale="default", workers=None, mutate=()):
    """Run every registered identity; ``mutate`` names identities to corrupt."""
    if scale not in SCALES:
        raise InvalidParameter(f"unknown scale {scale!r}")
    mutate = set(mutate)
    unknown = mutate - set(REGISTRY)
    if unknown:
        raise UnknownIdentity(sorted(unknown)[0])
    jobs = [(spec, p) for spec in REGISTRY.values() for p in spec.points(scale)]
    started = time.perf_counter()
    with ThreadPoolExecutor(max_workers=_workers(workers)) as pool:
        reports = list(pool.map(lambda job: _run_point(job[0], job[1], job[0].name in mutate), jobs))
    reports.sort(key=IdentityReport.sort_key)
    return Summary(reports, time.perf_counter() - started)


def covered_equations():
    out = set()
    for spec in REGISTRY.values():
        out.update(spec.equations)
    return out
