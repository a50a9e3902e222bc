"""Audit verdicts: one recorded inequality with its direction and margin."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .padic import INF, exponent_str


def _fmt(x):
    """Render a value for a JSON report."""
    if x is None or isinstance(x, (bool, str, int)):
        return x
    if x is INF or isinstance(x, Fraction):
        return exponent_str(x)
    if isinstance(x, dict):
        return {str(k): _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if hasattr(x, "to_dict"):
        return x.to_dict()
    return str(x)


@dataclass(frozen=True)
class Verdict:
    """``holds`` records whether ``lhs <relation> rhs`` was certified."""

    name: str
    holds: bool
    lhs: Any = None
    rhs: Any = None
    relation: str = ">="
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    @property
    def margin(self):
        try:
            return self.lhs - self.rhs
        except Exception:
            return None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "holds": self.holds,
            "relation": self.relation,
            "lhs": _fmt(self.lhs),
            "rhs": _fmt(self.rhs),
        }
        m = self.margin
        if m is not None:
            out["margin"] = _fmt(m)
        if self.details:
            out["details"] = _fmt(self.details)
        return out
