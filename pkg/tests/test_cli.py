import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qseries import cli
from qseries.cli import BinOp, Call, Half, Neg, Num, Pow, Var
from qseries.errors import EvalError, ParseError
from qseries.polyq import LaurentPoly
from qseries.qcore import q_binomial


def run(*argv):
    import io

    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


# -- parser -------------------------------------------------------------------


def test_call_node():
    assert cli.parse("qbinom(4,2)") == Call("qbinom", (Num(4), Num(2)))


def test_half_exponent_binds_to_power():
    ast = cli.parse("q^3/2 * (1 + x)")
    assert ast == BinOp("*", Pow(Var("q"), Fraction(3, 2)), BinOp("+", Num(1), Var("x")))


def test_precedence_and_associativity():
    assert cli.parse("1 - 2 - 3") == BinOp("-", BinOp("-", Num(1), Num(2)), Num(3))
    assert cli.parse("-q^2") == Neg(Pow(Var("q"), Fraction(2)))
    assert cli.parse("1 + 2*x") == BinOp("+", Num(1), BinOp("*", Num(2), Var("x")))


def test_unclosed_call_reports_end_of_input():
    with pytest.raises(ParseError) as info:
        cli.parse("qint(2")
    assert info.value.offset == 6
    assert ")" in info.value.expected


def test_bad_tokens():
    with pytest.raises(ParseError) as info:
        cli.parse("q ^ 3/3")
    assert info.value.expected == ("2",)
    with pytest.raises(ParseError):
        cli.parse("foo(1)")
    with pytest.raises(ParseError):
        cli.parse("qbinom(1)")
    with pytest.raises(ParseError):
        cli.parse("qint(x)")
    with pytest.raises(ParseError) as info:
        cli.parse("1 $ 2")
    assert info.value.offset == 2


def test_offsets_are_bytes():
    with pytest.raises(ParseError) as info:
        cli.parse("q + é")
    assert info.value.offset == 4


def test_canonical_text_reparses():
    p = LaurentPoly({-3: 2, -2: -1, 1: 5, 0: 1})
    assert cli.evaluate(cli.parse(p.text())).coeff(0) == p
    s = cli.eval_expr("S(3)")
    assert cli.eval_expr(s.text()) == s


# -- evaluation ---------------------------------------------------------------


def test_eval_examples():
    assert cli.eval_expr("qbinom(4,2)").coeff(0) == q_binomial(4, 2)
    assert cli.eval_expr("S(2)").text() == "(1) + (-1 - 1*q^1)*x^1 + (1)*x^2"
    assert cli.eval_expr("dq(x^3)").text() == "(1 + 1*q^1 + 1*q^2)*x^2"
    assert cli.eval_expr("qbinom(3,5)").text() == "0"
    assert cli.eval_expr("u^2 - q").text() == "0"
    assert cli.eval_expr("S(5) - Stilde(5)").text() == "0"
    assert cli.eval_expr("(-q)^-3").text() == "-1*q^-3"


def test_eval_errors():
    for src in ("x^1/2", "(1+q)^-1", "3/2", "rising(x, 2)", "poch(2, 0, 1, 1)"):
        with pytest.raises(EvalError):
            cli.eval_expr(src)


# -- print/parse fixpoint -----------------------------------------------------

_const = st.one_of(st.builds(Num, st.integers(0, 9)), st.builds(Half, st.integers(0, 9)))
_signed_const = st.one_of(_const, st.builds(Neg, _const))
_int_const = st.one_of(st.builds(Num, st.integers(0, 9)), st.builds(Neg, st.builds(Num, st.integers(0, 9))))
_exps = st.builds(Fraction, st.integers(-7, 7), st.sampled_from([1, 2]))


def _calls(expr):
    return st.one_of(
        st.builds(lambda n: Call("qint", (n,)), _int_const),
        st.builds(lambda n, k, b: Call("qbinom", (n, k, b)), _int_const, _int_const, _signed_const),
        st.builds(lambda s, a, b, n: Call("poch", (s, a, b, n)), _int_const, _signed_const, _signed_const, _int_const),
        st.builds(lambda v, n: Call("rising", (v, n)), expr, _int_const),
        st.builds(lambda n, g: Call("sigma", (n, g)), _int_const, _signed_const),
        st.builds(lambda e: Call("dq", (e,)), expr),
        st.builds(lambda n: Call("S", (n,)), _int_const),
    )


def _extend(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from(["+", "-", "*"]), children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, _exps),
        _calls(children),
    )


asts = st.recursive(st.one_of(_const, st.builds(Var, st.sampled_from(["q", "u", "x"]))), _extend, max_leaves=12)


@settings(max_examples=200, deadline=None)
@given(asts)
def test_print_parse_fixpoint(ast):
    printed = cli.to_source(ast)
    assert cli.parse(printed) == ast
    assert cli.to_source(cli.parse(printed)) == printed


# -- commands -----------------------------------------------------------------


def test_verify_twenty_lines():
    code, out = run("verify", "gauss-1.7", "--n-max", "20")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 20 and all(line.startswith("PASS") for line in lines)


def test_verify_unknown_exit_two():
    assert run("verify", "nope")[0] == 2


def test_usage_error_exit_two():
    assert run("table", "bogus")[0] == 2
    assert run("eval", "qint(2")[0] == 2


def test_eval_formats():
    assert run("eval", "qbinom(3,5)") == (0, "0\n")
    code, out = run("eval", "qbinom(4,2)", "--format", "latex")
    assert code == 0 and out.startswith("\\begin{bmatrix}4\\\\2\\end{bmatrix}_{q} = 1 + q + 2q^{2}")
    code, out = run("eval", "qint(2)", "--format", "json")
    assert json.loads(out)["text"] == "1 + 1*q^1"


def test_table_sigma_structure():
    code, out = run("table", "sigma", "--n-max", "4")
    assert code == 0
    rows = out.splitlines()
    assert rows[0] == "l,Q^0,Q^1,Q^2,Q^3,Q^4"
    assert rows[1] == "1,1 - 1*q^1,1*q^1,,,"
    assert rows[4].endswith(",1*q^10")


def test_table_formats():
    for fmt in ("csv", "latex", "json"):
        for kind in ("s", "sigma", "ccoef", "theta", "gauss"):
            code, out = run("table", kind, "--n-max", "3", "--format", fmt)
            assert code == 0 and out


def test_theta_command(tmp_path):
    path = tmp_path / "theta.json"
    code, out = run("theta", "--alpha", "0", "--n-max", "4", "--json", str(path))
    assert code == 0
    assert out.splitlines()[2] == "theta_2 = 1 - 1*q^1"
    assert json.loads(path.read_text())["alpha2"] == 0
    assert run("theta", "--alpha", "1/3", "--n-max", "2")[0] == 2


def test_verify_json(tmp_path):
    path = tmp_path / "r.json"
    assert run("verify", "factor-1.22", "--n-max", "3", "--json", str(path))[0] == 0
    data = json.loads(path.read_text())
    assert [d["params"]["w"] for d in data] == [1, 2, 3]


def test_stdout_is_deterministic():
    cmd = [sys.executable, "-m", "qseries.cli", "verify", "sigma-rec-5.11", "--n-max", "3"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, text=True, check=True).stdout
    assert a == b and a
