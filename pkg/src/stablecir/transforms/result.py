from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class TransformResult:
    """A transform value with solver/quadrature diagnostics."""

    value: float
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"value": self.value, "diagnostics": dict(self.diagnostics)}
