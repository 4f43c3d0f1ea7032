"""Command-line front end and the small expression language behind ``eval``.

Expression grammar (``^`` binds tightest, everything left associative)::

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := '-' factor | atom ['^' exponent]
    atom     := literal | ident | call | '(' expr ')'
    literal  := integer ['/' '2']
    exponent := ['-'] integer ['/' '2'] | '(' ['-'] integer ['/' '2'] ')'

So ``q^3/2`` is q^(3/2). Variables are ``q``, ``u`` (= q^(1/2)) and ``x``.
"""
import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import identities, qcore, qpolyx
from .errors import EvalError, ParseError, QSeriesError, ThetaInconsistent, UnknownIdentity
from .polyq import LaurentPoly, half
from .qpolyx import XPoly

# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Half:
    """The literal ``n/2``."""

    num: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: Fraction


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


VARIABLES = ("q", "u", "x")

# argument kinds: "int" and "half" must be constant literals, "expr" is anything
FUNCTIONS = {
    "qint": (("int",), ("half",)),
    "qfact": (("int",), ("half",)),
    "qbinom": (("int", "int"), ("half",)),
    "poch": (("int", "half", "half", "int"), ()),
    "rising": (("expr", "int"), ()),
    "S": (("int",), ()),
    "Stilde": (("int",), ()),
    "sigma": (("int", "half"), ()),
    "s": (("int", "half"), ()),
    "G": (("int",), ()),
    "dq": (("expr",), ()),
}

# -- tokenizer and parser -----------------------------------------------------

_PUNCT = set("+-*^/(),")


def _tokenize(src):
    data = src.encode("utf-8")
    toks = []
    i = 0
    while i < len(data):
        ch = chr(data[i])
        if not ch.isascii():
            raise ParseError(f"unexpected non-ASCII byte 0x{data[i]:02x}", i, ("expression",))
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(data) and chr(data[j]).isdigit():
                j += 1
            toks.append(("int", data[i:j].decode(), i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(data) and data[j] < 128 and (chr(data[j]).isalnum() or chr(data[j]) == "_"):
                j += 1
            toks.append(("ident", data[i:j].decode(), i))
            i = j
        elif ch in _PUNCT:
            toks.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i, ("expression",))
    toks.append(("end", "", len(data)))
    return toks


class _Parser:
    def __init__(self, src):
        self.toks = _tokenize(src)
        self.pos = 0

    @property
    def tok(self):
        return self.toks[self.pos]

    def take(self, kind):
        if self.tok[0] != kind:
            self.fail((kind,))
        t = self.tok
        self.pos += 1
        return t

    def fail(self, expected):
        kind, text, off = self.tok
        what = "end of input" if kind == "end" else f"token {text!r}"
        raise ParseError(f"unexpected {what}", off, expected)

    def parse(self):
        node = self.expr()
        if self.tok[0] != "end":
            self.fail(("+", "-", "*", "end of input"))
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] in ("+", "-"):
            op = self.take(self.tok[0])[0]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok[0] == "*":
            self.take("*")
            node = BinOp("*", node, self.factor())
        return node

    def factor(self):
        if self.tok[0] == "-":
            self.take("-")
            return Neg(self.factor())
        node = self.atom()
        if self.tok[0] == "^":
            self.take("^")
            node = Pow(node, self.exponent())
        return node

    def exponent(self):
        if self.tok[0] == "(":
            self.take("(")
            e = self._signed_half()
            self.take(")")
            return e
        return self._signed_half()

    def _signed_half(self):
        sign = 1
        if self.tok[0] == "-":
            self.take("-")
            sign = -1
        if self.tok[0] != "int":
            self.fail(("integer",) if sign < 0 else ("integer", "-", "("))
        n = int(self.take("int")[1])
        if self.tok[0] == "/":
            self.take("/")
            if self.tok != ("int", "2", self.tok[2]):
                self.fail(("2",))
            self.take("int")
            return Fraction(sign * n, 2)
        return Fraction(sign * n)

    def atom(self):
        kind, text, off = self.tok
        if kind == "int":
            self.take("int")
            if self.tok[0] == "/":
                self.take("/")
                if self.tok != ("int", "2", self.tok[2]):
                    self.fail(("2",))
                self.take("int")
                return Half(int(text))
            return Num(int(text))
        if kind == "(":
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        if kind == "ident":
            self.take("ident")
            if text in VARIABLES:
                return Var(text)
            if text in FUNCTIONS:
                return self.call(text, off)
            raise ParseError(f"unknown name {text!r}", off, VARIABLES + tuple(FUNCTIONS))
        self.fail(("integer", "variable", "function", "(", "-"))

    def call(self, name, off):
        self.take("(")
        args = [self.expr()]
        while self.tok[0] == ",":
            self.take(",")
            args.append(self.expr())
        if self.tok[0] != ")":
            self.fail((",", ")"))
        self.take(")")
        _check_call(name, args, off)
        return Call(name, tuple(args))


def _is_const(node, allow_half):
    if isinstance(node, Neg):
        node = node.operand
    return isinstance(node, Num) or (allow_half and isinstance(node, Half))


def _check_call(name, args, off):
    required, optional = FUNCTIONS[name]
    if not len(required) <= len(args) <= len(required) + len(optional):
        want = len(required) if not optional else f"{len(required)}-{len(required) + len(optional)}"
        raise ParseError(f"{name} takes {want} argument(s), got {len(args)}", off, (name,))
    for kind, arg in zip(required + optional, args):
        if kind == "int" and not _is_const(arg, False):
            raise ParseError(f"{name} expects an integer literal argument", off, ("integer",))
        if kind == "half" and not _is_const(arg, True):
            raise ParseError(f"{name} expects an integer or n/2 literal argument", off, ("integer", "n/2"))


def parse(src):
    """Parse an expression into an AST; raises ParseError with a byte offset."""
    return _Parser(src).parse()


# -- printing -----------------------------------------------------------------

_LEVEL = {"+": 1, "-": 1, "*": 2}


def _fmt_exp(e):
    e = Fraction(e)
    if e.denominator == 1:
        return str(e.numerator)
    return f"{e.numerator}/2"


def to_source(node, level=0):
    """Print an AST so that parsing the output gives the same AST back."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Half):
        return f"{node.num}/2"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(to_source(a) for a in node.args) + ")"
    if isinstance(node, Pow):
        base = to_source(node.base)
        if not isinstance(node.base, (Num, Var, Call)):
            base = f"({base})"
        return f"{base}^{_fmt_exp(node.exp)}"
    if isinstance(node, Neg):
        inner = to_source(node.operand, 3)
        out = "-" + inner
    elif isinstance(node, BinOp):
        mine = _LEVEL[node.op]
        left = to_source(node.left, mine)
        right = to_source(node.right, mine + 1)
        out = f"{left} {node.op} {right}"
    else:
        raise TypeError(f"not an expression node: {node!r}")
    mine = 3 if isinstance(node, Neg) else _LEVEL[node.op]
    return f"({out})" if mine < level else out


def _latex_exp(e):
    e = Fraction(e)
    return str(e.numerator) if e.denominator == 1 else f"{e.numerator}/2"


def _latex_base(args, idx):
    if len(args) <= idx:
        return "q"
    b = _const_value(args[idx])
    return "q" if b == 1 else f"q^{{{_latex_exp(b)}}}"


def to_latex(node):
    """LaTeX for an AST; Gaussian binomials use the bmatrix bracket notation."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Half):
        return f"\\frac{{{node.num}}}{{2}}"
    if isinstance(node, Var):
        return "q^{1/2}" if node.name == "u" else node.name
    if isinstance(node, Neg):
        inner = to_latex(node.operand)
        return f"-\\left({inner}\\right)" if isinstance(node.operand, BinOp) else f"-{inner}"
    if isinstance(node, BinOp):
        left, right = to_latex(node.left), to_latex(node.right)
        if node.op == "*":
            if isinstance(node.left, BinOp) and node.left.op != "*":
                left = f"\\left({left}\\right)"
            if isinstance(node.right, BinOp):
                right = f"\\left({right}\\right)"
            return f"{left} \\cdot {right}"
        if node.op == "-" and isinstance(node.right, BinOp) and node.right.op != "*":
            right = f"\\left({right}\\right)"
        return f"{left} {node.op} {right}"
    if isinstance(node, Pow):
        base = to_latex(node.base)
        if not isinstance(node.base, (Num, Var, Call)) or (isinstance(node.base, Var) and node.base.name == "u"):
            base = f"\\left({base}\\right)"
        return f"{base}^{{{_latex_exp(node.exp)}}}"
    a = node.args
    n = node.name
    if n == "qbinom":
        return f"\\begin{{bmatrix}}{to_latex(a[0])}\\\\{to_latex(a[1])}\\end{{bmatrix}}_{{{_latex_base(a, 2)}}}"
    if n == "qint":
        return f"[{to_latex(a[0])}]_{{{_latex_base(a, 1)}}}"
    if n == "qfact":
        return f"[{to_latex(a[0])}]_{{{_latex_base(a, 1)}}}!"
    if n == "poch":
        sign = "" if _const_value(a[0]) == 1 else "-"
        return f"({sign}q^{{{_latex_exp(_const_value(a[1]))}}};q^{{{_latex_exp(_const_value(a[2]))}}})_{{{to_latex(a[3])}}}"
    if n == "rising":
        return f"(x \\dotplus {to_latex(a[0])})^{{{to_latex(a[1])}}}"
    if n == "S":
        return f"S_{{{to_latex(a[0])}}}(x)"
    if n == "Stilde":
        return f"\\tilde S_{{{to_latex(a[0])}}}(x)"
    if n == "sigma":
        return f"\\sigma_{{{to_latex(a[0])}}}({to_latex(a[1])})"
    if n == "s":
        return f"s_{{{to_latex(a[0])}|{to_latex(a[1])}}}"
    if n == "G":
        return f"G_{{{to_latex(a[0])}}}"
    return f"D_q\\left({to_latex(a[0])}\\right)"


# -- evaluation ---------------------------------------------------------------


def _const_value(node):
    sign = 1
    if isinstance(node, Neg):
        node, sign = node.operand, -1
    if isinstance(node, Num):
        return sign * node.value
    return half(Fraction(sign * node.num, 2))


def _int_arg(node, name, nonneg=True):
    v = _const_value(node)
    if nonneg and v < 0:
        raise EvalError(f"{name}: argument must be non-negative, got {v}")
    return v


def _scalar(value, what):
    if value.degree > 0:
        raise EvalError(f"{what} must not depend on x")
    return value.coeff(0)


def _power(base, e):
    if e.denominator == 1 and e >= 0:
        return base ** int(e)
    lp = _scalar(base, "a base with a negative or half-integer exponent")
    if not lp.is_monomial() or abs(lp.lowest_term()[1]) != 1:
        raise EvalError("negative or half-integer powers need a monomial +-q^e base")
    k, c = lp.lowest_term()
    if e.denominator != 1 and c != 1:
        raise EvalError("half-integer powers need a positive monomial base")
    ku = k * e
    if ku.denominator != 1:
        raise EvalError(f"q^({Fraction(k, 2)}) to the power {e} leaves the half-integer lattice")
    sign = c ** int(e) if e.denominator == 1 else 1
    return XPoly.const(LaurentPoly.u_power(int(ku), sign))


def evaluate(node):
    """Exact value of an AST as an XPoly (constants are degree-0)."""
    try:
        return _eval(node)
    except EvalError:
        raise
    except QSeriesError as exc:
        raise EvalError(str(exc)) from exc


def _eval(node):
    if isinstance(node, Num):
        return XPoly.const(LaurentPoly.const(node.value))
    if isinstance(node, Half):
        if node.num % 2:
            raise EvalError(f"{node.num}/2 is not an integer; half-integers are only exponents")
        return XPoly.const(LaurentPoly.const(node.num // 2))
    if isinstance(node, Var):
        if node.name == "x":
            return qpolyx.X
        return XPoly.const(LaurentPoly.u_power(2 if node.name == "q" else 1))
    if isinstance(node, Neg):
        return -_eval(node.operand)
    if isinstance(node, BinOp):
        a, b = _eval(node.left), _eval(node.right)
        return a + b if node.op == "+" else a - b if node.op == "-" else a * b
    if isinstance(node, Pow):
        return _power(_eval(node.base), Fraction(node.exp))
    return _eval_call(node)


def _eval_call(node):
    n, a = node.name, node.args
    b = _const_value(a[-1]) if n in ("qint", "qfact") and len(a) == 2 else 1
    if n == "qint":
        return XPoly.const(qcore.q_int(_int_arg(a[0], n), b))
    if n == "qfact":
        return XPoly.const(qcore.q_factorial(_int_arg(a[0], n), b))
    if n == "qbinom":
        base = _const_value(a[2]) if len(a) == 3 else 1
        return XPoly.const(qcore.q_binomial(_int_arg(a[0], n, False), _int_arg(a[1], n, False), base))
    if n == "poch":
        sign = _const_value(a[0])
        if sign not in (1, -1):
            raise EvalError("poch: sign must be 1 or -1")
        return XPoly.const(qcore.poch(sign, _const_value(a[1]), _const_value(a[2]), _int_arg(a[3], n)))
    if n == "rising":
        v = _scalar(_eval(a[0]), "rising: the shift")
        return qpolyx.rising_x(v, _int_arg(a[1], n))
    if n == "S":
        return qpolyx.rogers_szego_S(_int_arg(a[0], n))
    if n == "Stilde":
        return qpolyx.closed_form_S_tilde(_int_arg(a[0], n))
    if n == "sigma":
        return XPoly.const(qcore.sigma(_int_arg(a[0], n), _const_value(a[1])))
    if n == "s":
        return XPoly.const(qcore.s_sum(_int_arg(a[0], n), _const_value(a[1])))
    if n == "G":
        return XPoly.const(qcore.gauss_G(_int_arg(a[0], n)))
    return qpolyx.q_derivative(_eval(a[0]))


def eval_expr(src):
    return evaluate(parse(src))


# -- tables -------------------------------------------------------------------


def _parse_alpha(text):
    """``--alpha`` accepts n/2 syntax; returns alpha2 = 2*alpha."""
    try:
        v = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a half-integer: {text!r}") from None
    if (2 * v).denominator != 1:
        raise argparse.ArgumentTypeError(f"alpha must be a multiple of 1/2, got {text}")
    return int(2 * v)


def build_table(kind, n_max, alpha2=0):
    """(header, rows) where every cell is a LaurentPoly, RationalFunction or label."""
    if kind == "s":
        rs = (0, Fraction(1, 2), 1)
        header = ["N"] + [f"r={r}" for r in rs]
        rows = [[N] + [qcore.s_sum(N, r) for r in rs] for N in range(n_max + 1)]
    elif kind == "sigma":
        header = ["l"] + [f"Q^{s}" for s in range(n_max + 1)]
        rows = [[l] + identities.sigma_ratio_coeffs(l) + [None] * (n_max - l) for l in range(1, n_max + 1)]
    elif kind == "ccoef":
        header = ["l"] + [f"s={s}" for s in range(n_max + 1)]
        rows = [[l] + [qcore.c_coeff_closed(l, s) for s in range(l + 1)] + [None] * (n_max - l)
                for l in range(n_max + 1)]
    elif kind == "theta":
        header = ["k", "theta_k"]
        rows = [[k, t] for k, t in enumerate(qpolyx.theta_solve(n_max, alpha2))]
    elif kind == "gauss":
        header = ["m", "g_m", "s_{2m|0}", "s_{2m+1|0}"]
        rows = [[m, qcore.gauss_product(m), qcore.s_sum(2 * m, 0), qcore.s_sum(2 * m + 1, 0)] for m in range(n_max + 1)]
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(kind)
    return header, rows


def _cell_text(c):
    if c is None:
        return ""
    return c.text() if hasattr(c, "text") else str(c)


def _cell_latex(c):
    if c is None:
        return ""
    if hasattr(c, "latex"):
        return f"${c.latex()}$"
    if hasattr(c, "num"):
        return f"$\\frac{{{c.num.latex()}}}{{{c.den.latex()}}}$"
    return str(c)


def _cell_json(c):
    if c is None or isinstance(c, int):
        return c
    return {"text": c.text(), "terms": c.to_json()}


def render_table(header, rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell_text(c) for c in row])
        return buf.getvalue()
    if fmt == "latex":
        lines = ["\\begin{tabular}{" + "l" * len(header) + "}", " & ".join(f"${h}$" for h in header) + " \\\\",
                 "\\hline"]
        lines += [" & ".join(_cell_latex(c) for c in row) + " \\\\" for row in rows]
        lines.append("\\end{tabular}")
        return "\n".join(lines) + "\n"
    return json.dumps([dict(zip(header, (_cell_json(c) for c in row))) for row in rows], indent=2) + "\n"


# -- commands -----------------------------------------------------------------


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _print_witness(r, out):
    w = r.witness
    print(f"  witness [{w['label']}]", file=out)
    print(f"    lhs = {w['lhs']}", file=out)
    print(f"    rhs = {w['rhs']}", file=out)


def cmd_verify(args, out):
    overrides = {}
    if args.n_max is not None:
        overrides["n_max"] = args.n_max
    if args.order is not None:
        overrides["order"] = args.order
    reports = identities.run(args.name, overrides, scale=args.scale)
    for r in reports:
        print(r.line(), file=out)
        if not r.passed:
            _print_witness(r, out)
    if args.json:
        _write_json(args.json, [r.to_json() for r in reports])
    failed = sum(not r.passed for r in reports)
    print(f"{args.name}: {len(reports) - failed}/{len(reports)} passed", file=sys.stderr)
    return 1 if failed else 0


def cmd_verify_all(args, out):
    summary = identities.run_all(args.scale)
    for name, reports in summary.by_identity().items():
        bad = [r for r in reports if not r.passed]
        status = "FAIL" if bad else "PASS"
        print(f"{status:7s} {name}  {len(reports) - len(bad)}/{len(reports)}", file=out)
        for r in bad:
            print(f"  at {r.params}", file=out)
            _print_witness(r, out)
    print(f"total: {summary.passed} passed, {summary.failed} failed", file=out)
    print(f"elapsed {summary.elapsed:.1f}s; slowest:", file=sys.stderr)
    for name, secs in summary.slowest():
        print(f"  {name}: {secs:.2f}s", file=sys.stderr)
    if args.json:
        _write_json(args.json, [r.to_json() for r in summary.reports])
    return 0 if summary.ok else 1


def cmd_eval(args, out):
    ast = parse(args.expr)
    value = evaluate(ast)
    if args.format == "text":
        print(value.text(), file=out)
    elif args.format == "latex":
        print(f"{to_latex(ast)} = {value.latex()}", file=out)
    else:
        print(json.dumps({"expr": to_source(ast), "text": value.text(), "coeffs": value.to_json()}), file=out)
    return 0


def cmd_table(args, out):
    header, rows = build_table(args.kind, args.n_max, args.alpha)
    out.write(render_table(header, rows, args.format))
    return 0


def cmd_theta(args, out):
    try:
        thetas = qpolyx.theta_solve(args.n_max, args.alpha)
    except ThetaInconsistent as exc:
        print(f"inconsistent: {exc}", file=out)
        return 1
    for k, t in enumerate(thetas):
        print(f"theta_{k} = {t.text()}", file=out)
    if args.json:
        _write_json(args.json, {"alpha2": args.alpha, "n_max": args.n_max,
                                "theta": [{"k": k, "text": t.text(), **t.to_json()} for k, t in enumerate(thetas)]})
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="qseries", description="Exact q-binomial identities and expressions.")
    sub = p.add_subparsers(dest="command", required=True)
    default_scale = os.environ.get("QSERIES_SCALE", "default")
    if default_scale not in identities.SCALES:
        default_scale = "default"

    v = sub.add_parser("verify", help="check one registered identity")
    v.add_argument("name")
    v.add_argument("--n-max", type=int)
    v.add_argument("--order", type=int)
    v.add_argument("--scale", choices=identities.SCALES, default=default_scale)
    v.add_argument("--json", metavar="PATH")
    v.set_defaults(func=cmd_verify)

    va = sub.add_parser("verify-all", help="check every registered identity")
    va.add_argument("--scale", choices=identities.SCALES, default=default_scale)
    va.add_argument("--json", metavar="PATH")
    va.set_defaults(func=cmd_verify_all)

    e = sub.add_parser("eval", help="evaluate an expression exactly")
    e.add_argument("expr")
    e.add_argument("--format", choices=("text", "json", "latex"), default="text")
    e.set_defaults(func=cmd_eval)

    t = sub.add_parser("table", help="emit a coefficient table")
    t.add_argument("kind", choices=("s", "sigma", "ccoef", "theta", "gauss"))
    t.add_argument("--n-max", type=int, default=4)
    t.add_argument("--alpha", type=_parse_alpha, default=0)
    t.add_argument("--format", choices=("csv", "latex", "json"), default="csv")
    t.set_defaults(func=cmd_table)

    th = sub.add_parser("theta", help="solve for the connection coefficients")
    th.add_argument("--alpha", type=_parse_alpha, required=True)
    th.add_argument("--n-max", type=int, required=True)
    th.add_argument("--json", metavar="PATH")
    th.set_defaults(func=cmd_theta)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if getattr(args, "n_max", None) is not None and args.n_max < 0:
        print("error: --n-max must be non-negative", file=sys.stderr)
        return 2
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except UnknownIdentity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EvalError, QSeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
