"""Exception hierarchy shared by every module of the package."""


class QSeriesError(Exception):
    pass


class InvalidParameter(QSeriesError, ValueError):
    pass


class NonExactDivision(QSeriesError, ArithmeticError):
    pass


class DivisionByZero(QSeriesError, ZeroDivisionError):
    pass


class VariableMismatch(QSeriesError, ValueError):
    pass


class NonUnitConstantTerm(QSeriesError, ArithmeticError):
    pass


class DivergentTruncation(QSeriesError, ValueError):
    pass


class ThetaInconsistent(QSeriesError):
    """The same connection coefficient came out different at two sizes."""

    def __init__(self, k, first, second, n_first, n_second):
        self.k = k
        self.first = first
        self.second = second
        super().__init__(
            f"theta_{k} differs between N={n_first} ({first}) and N={n_second} ({second})"
        )


class UnknownIdentity(QSeriesError, KeyError):
    def __str__(self):
        return f"unknown identity: {self.args[0]!r}"


class ParseError(QSeriesError):
    def __init__(self, message, offset, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


class EvalError(QSeriesError):
    pass
