"""Trajectory record shared by every model runner."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class Trajectory:
    """Time-indexed record of a single simulation run.

    z is the adoption fraction (or model-specific uptake) sampled at z_times.
    For binary-state models run at cadence 1, states holds the full per-round
    state matrix and switches the per-round count of agents changing action.
    Axelrod runs sample at coarser checkpoints and leave states/switches None.
    """

    z_times: np.ndarray
    z: np.ndarray
    states: np.ndarray | None = None
    state_times: np.ndarray | None = None
    switches: np.ndarray | None = None
    terminal: str = "budget"  # fixed_point | consensus | absorbing | budget
    cadence: int = 1
    extra: dict[str, Any] = field(default_factory=dict)

    @property
    def final_z(self) -> float:
        return float(self.z[-1])

    @property
    def n(self) -> int | None:
        if "n" in self.extra:
            return int(self.extra["n"])
        if self.states is not None:
            return int(self.states.shape[1])
        return None
