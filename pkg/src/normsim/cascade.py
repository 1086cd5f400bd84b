"""Granovetter threshold dynamics: cascades, seeding, and adoption analytics.

Adoption here is absorbing: an agent that switches to the innovation never
reverts. Reversible choice dynamics live in the games module. Seeds are
agents with threshold exactly 0; a cascade starts from the all-status-quo
population, so the recorded state at t=0 is the seed set itself.
"""

from __future__ import annotations

import numpy as np

from .errors import DataError, InputError
from .graphs import Graph, neighbor_adopter_counts
from .trajectory import Trajectory

SIGMA_CATEGORIES = ("very_low", "low", "high", "very_high")


def _check_profile(g: Graph, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (g.n,):
        raise InputError(f"threshold profile shape {theta.shape} does not match n={g.n}")
    if np.any(theta < 0) or np.any(theta > 1):
        raise InputError("thresholds must lie in [0, 1]")
    return theta


def ltm_step(g: Graph, x, theta, strict=False) -> np.ndarray:
    """One synchronous threshold update; adopters never revert.

    An agent adopts when the adopting fraction of its neighbors reaches its
    threshold (>=). With strict=True the comparison is >, except that
    zero-threshold agents still adopt unconditionally (seed semantics).
    Isolated agents have exposure 0, so only those with threshold 0 adopt.
    """
    theta = _check_profile(g, theta)
    x = np.asarray(x)
    if x.shape != (g.n,):
        raise InputError(f"state shape {x.shape} does not match n={g.n}")
    deg = g.degrees
    counts = neighbor_adopter_counts(g, x)
    exposure = np.where(deg > 0, counts / np.maximum(deg, 1), 0.0)
    if strict:
        adopt = (exposure > theta) | (theta == 0.0)
    else:
        adopt = exposure >= theta
    return np.where((x == 1) | adopt, 1, 0).astype(np.int8)


def run_cascade(g: Graph, theta, max_steps=None, strict=False) -> Trajectory:
    """Run the cascade from the all-zero population to its fixed point.

    The recorded t=0 state is the seed set (one threshold update of the
    all-zero state), so seeds adopt at t=0. Monotonicity guarantees a fixed
    point within n further steps; max_steps can cap the run short of it.
    """
    theta = _check_profile(g, theta)
    x = (theta == 0.0).astype(np.int8)
    states = [x]
    cap = g.n if max_steps is None else min(max_steps, g.n)
    terminal = "fixed_point"
    for _ in range(cap):
        nxt = ltm_step(g, x, theta, strict=strict)
        if np.array_equal(nxt, x):
            break
        states.append(nxt)
        x = nxt
    else:
        if not np.array_equal(ltm_step(g, x, theta, strict=strict), x):
            terminal = "budget"
    mat = np.stack(states).astype(np.int8)
    z = mat.mean(axis=1) if g.n > 0 else np.zeros(len(states))
    times = np.arange(len(states))
    switches = np.abs(np.diff(mat.astype(np.int64), axis=0)).sum(axis=1)
    return Trajectory(
        z_times=times,
        z=z,
        states=mat,
        state_times=times,
        switches=switches,
        terminal=terminal,
        cadence=1,
        extra={"n": g.n, "model": "ltm"},
    )


def final_adoption(g: Graph, theta, strict=False) -> float:
    """Adoption fraction at the cascade fixed point."""
    return run_cascade(g, theta, strict=strict).final_z


def greedy_seed_selection(g: Graph, theta_base, k, strict=False):
    """Greedily pick k seed locations maximizing the final adoption fraction.

    Each round converts to a seed (threshold -> 0) the node giving the
    largest final adoption, ties broken by lowest node index. Returns
    (seeds in selection order, achieved spread). No optimality guarantee.
    """
    theta = _check_profile(g, theta_base).copy()
    if not 0 <= k <= g.n:
        raise InputError(f"k must lie in [0, {g.n}], got {k}")
    seeds: list[int] = []
    for _ in range(k):
        best_node = -1
        best_spread = -1.0
        for v in range(g.n):
            if v in seeds:
                continue
            saved = theta[v]
            theta[v] = 0.0
            spread = final_adoption(g, theta, strict=strict)
            theta[v] = saved
            if spread > best_spread:
                best_spread = spread
                best_node = v
        seeds.append(best_node)
        theta[best_node] = 0.0
    return seeds, final_adoption(g, theta, strict=strict)


def adoption_times(traj: Trajectory) -> np.ndarray:
    """First time each agent holds state 1; -1 for agents that never adopt."""
    if traj.states is None or traj.cadence != 1:
        raise DataError("adoption times need a cadence-1 trajectory with recorded states")
    states = traj.states
    ever = states.max(axis=0) == 1
    first = states.argmax(axis=0)
    return np.where(ever, first, -1).astype(np.int64)


def exposure_at_adoption(traj: Trajectory, g: Graph) -> np.ndarray:
    """Adopting-neighbor fraction seen by each agent when it adopted.

    NaN flags the undefined cases: agents that never adopt, agents already
    adopting at t=0 (seeds), and isolated agents.
    """
    if traj.states is None or traj.cadence != 1:
        raise DataError("exposure analysis needs a cadence-1 trajectory with recorded states")
    states = traj.states
    if states.shape[1] != g.n:
        raise InputError(f"trajectory width {states.shape[1]} does not match n={g.n}")
    times = adoption_times(traj)
    out = np.full(g.n, np.nan)
    for i in range(g.n):
        t = times[i]
        d = g.degree(i)
        if t <= 0 or d == 0:
            continue
        prev = states[t - 1]
        out[i] = sum(int(prev[j]) for j in g.neighbors(i)) / d
    return out


def classify_sigma_categories(values) -> list[str]:
    """Classify each value against the mean and population standard deviation.

    Intervals: (-inf, mu-sigma) -> very_low, [mu-sigma, mu) -> low,
    [mu, mu+sigma) -> high, [mu+sigma, inf) -> very_high. Used both for
    time-of-adoption (early adopters .. laggards) and exposure thresholds.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1 or len(v) < 2:
        raise InputError("need at least two values to classify")
    mu = float(v.mean())
    sigma = float(v.std())  # population standard deviation
    if sigma == 0.0:
        raise DataError("cannot classify values with zero variance")
    out = []
    for x in v:
        if x < mu - sigma:
            out.append("very_low")
        elif x < mu:
            out.append("low")
        elif x < mu + sigma:
            out.append("high")
        else:
            out.append("very_high")
    return out


def cross_tabulate(cat_a, cat_b):
    """4x4 contingency table of category pairs plus the diagonal agreement."""
    if len(cat_a) != len(cat_b):
        raise InputError(f"category lists differ in length: {len(cat_a)} vs {len(cat_b)}")
    if len(cat_a) == 0:
        raise InputError("category lists are empty")
    index = {name: i for i, name in enumerate(SIGMA_CATEGORIES)}
    table = np.zeros((4, 4), dtype=np.int64)
    for a, b in zip(cat_a, cat_b):
        if a not in index or b not in index:
            raise InputError(f"unknown category in pair ({a!r}, {b!r})")
        table[index[a], index[b]] += 1
    agreement = float(np.trace(table)) / len(cat_a)
    return table, agreement
