"""Calibration report container shared by the fitting routines."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class CalibrationReport:
    """Fitted parameters, objective value, and fit diagnostics."""

    method: str
    params: dict[str, Any]
    objective: float
    diagnostics: dict[str, Any] = field(default_factory=dict)
    table: tuple[dict[str, Any], ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "method": self.method,
            "params": self.params,
            "objective": self.objective,
            "diagnostics": self.diagnostics,
        }
        if self.table is not None:
            out["table"] = list(self.table)
        return out
