"""Bass diffusion: population-level adoption recursion and (p, q) fitting.

The one-step map is z' = z + p(1-z) + q z(1-z). With p, q >= 0 and
p + q <= 1 the fraction z stays in [0, 1] and the trajectory is monotone,
tracing the familiar S-shaped adoption curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IdentifiabilityError, InputError
from .reports import CalibrationReport


@dataclass(frozen=True)
class BassParams:
    p: float
    q: float

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise InputError(f"rates must be non-negative, got p={self.p}, q={self.q}")
        if self.p + self.q > 1.0:
            # keeps the recursion inside [0, 1]: the step gain is at most (p+q)(1-z)
            raise InputError(f"p + q must not exceed 1, got {self.p + self.q}")


def bass_step(z: float, params: BassParams) -> float:
    """One step of the adoption recursion."""
    if not 0.0 <= z <= 1.0:
        raise InputError(f"adoption fraction must lie in [0, 1], got {z}")
    return z + params.p * (1.0 - z) + params.q * z * (1.0 - z)


def bass_trajectory(z0: float, params: BassParams, steps: int) -> np.ndarray:
    """Adoption series z(0..steps) from iterating bass_step."""
    if steps < 0:
        raise InputError(f"steps must be non-negative, got {steps}")
    out = np.empty(steps + 1, dtype=np.float64)
    z = float(z0)
    if not 0.0 <= z <= 1.0:
        raise InputError(f"z0 must lie in [0, 1], got {z0}")
    out[0] = z
    for t in range(1, steps + 1):
        z = bass_step(z, params)
        out[t] = z
    return out


def fit_bass(series) -> CalibrationReport:
    """Least-squares fit of (p, q) from a recorded adoption series.

    The increment model dz = p(1-z) + q z(1-z) is linear in (p, q), so the
    fit is a direct two-parameter least squares on the one-step increments.
    """
    z = np.asarray(series, dtype=np.float64)
    if z.ndim != 1 or len(z) < 4:
        raise InputError(f"series must be 1-d with at least 4 entries, got shape {z.shape}")
    if np.any(z < 0) or np.any(z > 1):
        raise InputError("series entries must lie in [0, 1]")
    zt = z[:-1]
    dz = np.diff(z)
    interior = np.unique(zt[(zt > 0) & (zt < 1)])
    if len(interior) < 2:
        raise IdentifiabilityError(
            "series is degenerate: need at least two distinct interior values"
        )
    design = np.column_stack([1.0 - zt, zt * (1.0 - zt)])
    coef, _, rank, sv = np.linalg.lstsq(design, dz, rcond=None)
    if rank < 2:
        raise IdentifiabilityError("regression design is rank deficient")
    residuals = dz - design @ coef
    rss = float(residuals @ residuals)
    return CalibrationReport(
        method="bass_regression",
        params={"p": float(coef[0]), "q": float(coef[1])},
        objective=rss,
        diagnostics={
            "n_increments": int(len(dz)),
            "rank": int(rank),
            "singular_values": [float(s) for s in sv],
        },
    )
