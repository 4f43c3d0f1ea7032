"""Outcome records for identity checks."""
import time
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


@dataclass
class IdentityReport:
    name: str
    params: dict
    status: str
    witness: dict | None = None
    elapsed: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.status == FAIL and self.witness is None:
            raise ValueError("a failing report must carry a witness")

    @property
    def passed(self):
        return self.status == PASS

    def sort_key(self):
        return (self.name, sorted((k, str(v)) for k, v in self.params.items()))

    def to_json(self, with_elapsed=True):
        out = {
            "name": self.name,
            "params": {k: _jsonable(v) for k, v in self.params.items()},
            "status": self.status,
            "witness": self.witness,
        }
        if self.note:
            out["note"] = self.note
        if with_elapsed:
            out["elapsed"] = round(self.elapsed, 6)
        return out

    def line(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        tail = f"  [{self.note}]" if self.note else ""
        return f"{self.status.upper():7s} {self.name}({ps}){tail}"


def _jsonable(v):
    if isinstance(v, (int, str, float, bool)) or v is None:
        return v
    return str(v)


def as_text(value):
    text = getattr(value, "text", None)
    if callable(text):
        return text()
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(as_text(v) for v in value) + "]"
    return str(value)


@dataclass
class Comparison:
    """One lhs == rhs assertion inside a check."""

    label: str
    lhs: object
    rhs: object
    extra: dict = field(default_factory=dict)

    def holds(self):
        return self.lhs == self.rhs


def evaluate(name, params, comparisons, note="", started=None):
    """Turn a list of comparisons into a report; the first failing one becomes the witness."""
    started = time.perf_counter() if started is None else started
    for c in comparisons:
        if not c.holds():
            witness = {
                "params": {k: _jsonable(v) for k, v in params.items()},
                "label": c.label,
                "lhs": as_text(c.lhs),
                "rhs": as_text(c.rhs),
            }
            return IdentityReport(name, dict(params), FAIL, witness, time.perf_counter() - started, note)
    return IdentityReport(name, dict(params), PASS, None, time.perf_counter() - started, note)
