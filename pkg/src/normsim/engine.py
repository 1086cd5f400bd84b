"""Unified simulation driver: dispatch, seeded runs, ensembles, and metrics.

Randomness policy: every run owns a numpy PCG64 generator seeded from the
64-bit config seed; ensembles derive rep seeds as base_seed + rep index.
No wall clock or OS entropy enters the run path, so a run is a pure
function of its config. For asynchronous dynamics one round is n single
agent activations, which keeps z(t) and switching rates comparable across
schedules.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any

import numpy as np

from . import bass, cascade, cultures, games
from .errors import DataError, InputError
from .graphs import Graph
from .trajectory import Trajectory

MODELS = ("bass", "ltm", "axelrod", "naming_game", "game")


@dataclass
class SimConfig:
    """Resolved configuration of a single run.

    horizon counts model rounds: recursion steps for bass, synchronous
    updates for ltm, and rounds of n activations for the asynchronous
    models (axelrod, naming_game) and for game schedules.
    """

    model: str
    horizon: int
    seed: int = 0
    graph: Graph | None = None
    schedule: str = "async_uniform"
    cadence: int = 1
    params: dict[str, Any] = field(default_factory=dict)

    def validate(self) -> None:
        if self.model not in MODELS:
            raise InputError(f"unknown model {self.model!r}; expected one of {MODELS}")
        if self.horizon < 0:
            raise InputError(f"horizon must be non-negative, got {self.horizon}")
        if not -(1 << 63) <= int(self.seed) < (1 << 64):
            raise InputError(f"seed must fit in 64 bits, got {self.seed}")
        if self.cadence < 1:
            raise InputError(f"cadence must be at least 1, got {self.cadence}")
        if self.model != "bass" and self.graph is None:
            raise InputError(f"model {self.model!r} needs a graph")


def run(config: SimConfig) -> Trajectory:
    """Run one simulation; deterministic given the config (seed included)."""
    config.validate()
    rng = np.random.default_rng(int(config.seed) % (1 << 64))
    p = dict(config.params)
    if config.model == "bass":
        return _run_bass(config, p)
    if config.model == "ltm":
        return _run_ltm(config, p)
    if config.model == "axelrod":
        return _run_axelrod(config, p, rng)
    if config.model == "naming_game":
        return _run_naming_game(config, p, rng)
    return _run_game(config, p, rng)


def _run_bass(config, p):
    params = bass.BassParams(p=float(p.get("p", 0.0)), q=float(p.get("q", 0.0)))
    z0 = float(p.get("z0", 0.0))
    z = bass.bass_trajectory(z0, params, config.horizon)
    return Trajectory(
        z_times=np.arange(len(z)),
        z=z,
        terminal="budget",
        cadence=1,
        extra={"model": "bass"},
    )


def _theta_from_params(g: Graph, p) -> np.ndarray:
    theta_spec = p.get("theta", 1.0)
    if np.ndim(theta_spec) == 0:
        theta = np.full(g.n, float(theta_spec))
    else:
        theta = np.asarray(theta_spec, dtype=np.float64)
    theta = theta.copy()
    for s in p.get("seeds", []):
        if not 0 <= int(s) < g.n:
            raise InputError(f"seed node {s} outside [0, {g.n})")
        theta[int(s)] = 0.0
    return theta


def _run_ltm(config, p):
    theta = _theta_from_params(config.graph, p)
    traj = cascade.run_cascade(
        config.graph, theta, max_steps=config.horizon, strict=bool(p.get("strict", False))
    )
    traj.extra["theta"] = theta
    return traj


def _run_axelrod(config, p, rng):
    if "m" not in p:
        raise InputError("axelrod config needs the trait count m")
    steps = config.horizon * max(1, config.graph.n)
    traj, _ = cultures.run_axelrod(
        config.graph,
        int(p["m"]),
        init=p.get("init", "random"),
        max_steps=steps,
        rng=rng,
        check_every=p.get("check_every"),
    )
    return traj


def _run_naming_game(config, p, rng):
    steps = config.horizon * max(1, config.graph.n)
    pre_horizon = p.get("pre_horizon")
    traj, _ = cultures.run_naming_game(
        config.graph,
        int(p.get("objects", 1)),
        float(p.get("committed_fraction", 0.0)),
        p.get("committed_word", "X"),
        steps,
        rng=rng,
        pre_consensus=bool(p.get("pre_consensus", False)),
        pre_max_steps=None if pre_horizon is None else int(pre_horizon) * config.graph.n,
        record_every=p.get("record_every"),
    )
    return traj


def _resolve_committed(g: Graph, spec, rng) -> cultures.CommittedSet:
    if spec is None:
        return cultures.CommittedSet(agents=frozenset(), action=None)
    if isinstance(spec, cultures.CommittedSet):
        return spec
    action = int(spec.get("action", 1))
    if "agents" in spec:
        agents = frozenset(int(a) for a in spec["agents"])
    else:
        frac = float(spec.get("fraction", 0.0))
        if not 0.0 <= frac <= 1.0:
            raise InputError(f"committed fraction must lie in [0, 1], got {frac}")
        count = int(round(frac * g.n))
        agents = frozenset(int(a) for a in rng.choice(g.n, size=count, replace=False))
    bad = [a for a in agents if not 0 <= a < g.n]
    if bad:
        raise InputError(f"committed agents outside [0, {g.n}): {bad[:5]}")
    return cultures.CommittedSet(agents=agents, action=action)


def _initial_state(g: Graph, spec, committed, rng) -> np.ndarray:
    if spec is None:
        spec = {"value": 0}
    if "explicit" in spec:
        x = np.asarray(spec["explicit"], dtype=np.int8)
        if x.shape != (g.n,):
            raise InputError(f"explicit initial state has shape {x.shape}, expected ({g.n},)")
        x = x.copy()
    elif "fraction_ones" in spec:
        f = float(spec["fraction_ones"])
        if not 0.0 <= f <= 1.0:
            raise InputError(f"fraction_ones must lie in [0, 1], got {f}")
        x = np.zeros(g.n, dtype=np.int8)
        ones = rng.choice(g.n, size=int(round(f * g.n)), replace=False)
        x[ones] = 1
    else:
        v = int(spec.get("value", 0))
        if v not in (0, 1):
            raise InputError(f"initial value must be 0 or 1, got {v}")
        x = np.full(g.n, v, dtype=np.int8)
    if committed.agents:
        x[sorted(committed.agents)] = committed.action
    return x


def _build_payoff_spec(payoff) -> games.PayoffSpec:
    if isinstance(payoff, (games.PayoffMatrix, games.Coordination, games.Extended)):
        return payoff
    raise InputError("game config needs a PayoffSpec under params['payoff']")


def _run_game(config, p, rng):
    g = config.graph
    spec = _build_payoff_spec(p.get("payoff"))
    rule = p.get("rule", "best_response")
    # Draw order: committed set first, then the initial state, then dynamics.
    committed = _resolve_committed(g, p.get("committed"), rng)
    x = _initial_state(g, p.get("initial"), committed, rng)
    beta = p.get("beta")

    states = [x]
    z = [x.mean() if g.n else 0.0]
    switches = []
    x_prev = x  # neutral trend at t=0
    terminal = "budget"
    for _ in range(config.horizon):
        nxt = games.game_step(
            g, x, x_prev, spec,
            rule=rule, schedule=config.schedule,
            committed=committed if committed.agents else None,
            rng=rng, beta=beta,
        )
        switches.append(int(np.abs(nxt.astype(np.int64) - x.astype(np.int64)).sum()))
        states.append(nxt)
        z.append(nxt.mean())
        if rule == "best_response" and np.array_equal(nxt, x) and np.array_equal(x, x_prev):
            terminal = "fixed_point"
            break
        x_prev = x
        x = nxt
    if terminal == "budget" and g.n and len(set(states[-1].tolist())) == 1:
        terminal = "consensus"
    mat = np.stack(states).astype(np.int8)
    times = np.arange(len(states))
    keep = times[:: config.cadence] if config.cadence > 1 else times
    return Trajectory(
        z_times=times,
        z=np.asarray(z, dtype=np.float64),
        states=mat[keep] if config.cadence > 1 else mat,
        state_times=keep,
        switches=np.asarray(switches, dtype=np.int64) if config.cadence == 1 else None,
        terminal=terminal,
        cadence=config.cadence,
        extra={
            "n": g.n,
            "model": "game",
            "committed": sorted(committed.agents),
            "committed_action": committed.action,
        },
    )


# ---------------------------------------------------------------------------
# Ensembles
# ---------------------------------------------------------------------------

@dataclass
class EnsembleSummary:
    """Per-time mean and quantiles of z plus per-run terminal statistics."""

    times: np.ndarray
    mean_z: np.ndarray
    q10: np.ndarray
    q50: np.ndarray
    q90: np.ndarray
    seeds: np.ndarray
    final_z: np.ndarray
    terminals: list[str]


def _run_seeded(args) -> Trajectory:
    config, seed = args
    return run(replace(config, seed=seed))


def ensemble(config: SimConfig, reps, base_seed=None, workers=1) -> EnsembleSummary:
    """Run reps independent runs seeded base_seed .. base_seed + reps - 1.

    Shorter runs (early fixed point or consensus) are padded with their
    final value before aggregation. Assembly is in seed order, so the
    summary does not depend on the worker count.
    """
    if reps < 1:
        raise InputError(f"need at least one repetition, got {reps}")
    base = config.seed if base_seed is None else base_seed
    seeds = [int(base) + r for r in range(reps)]
    jobs = [(config, s) for s in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trajectories = list(pool.map(_run_seeded, jobs))
    else:
        trajectories = [_run_seeded(j) for j in jobs]
    length = max(len(t.z) for t in trajectories)
    zmat = np.empty((reps, length))
    for r, t in enumerate(trajectories):
        zmat[r, : len(t.z)] = t.z
        zmat[r, len(t.z):] = t.z[-1]
    times_src = max(trajectories, key=lambda t: len(t.z))
    q10, q50, q90 = np.quantile(zmat, [0.1, 0.5, 0.9], axis=0)
    return EnsembleSummary(
        times=times_src.z_times.copy(),
        mean_z=zmat.mean(axis=0),
        q10=q10,
        q50=q50,
        q90=q90,
        seeds=np.asarray(seeds, dtype=np.int64),
        final_z=np.asarray([t.final_z for t in trajectories]),
        terminals=[t.terminal for t in trajectories],
    )


# ---------------------------------------------------------------------------
# Population-level metrics
# ---------------------------------------------------------------------------

def switching_rate(traj: Trajectory) -> np.ndarray:
    """Per-round fraction of agents changing action."""
    if traj.cadence != 1 or traj.switches is None:
        raise DataError("switching rate needs a cadence-1 trajectory with switch counts")
    n = traj.n
    if not n:
        raise DataError("switching rate needs the population size on the trajectory")
    return traj.switches / n


def conformity_metrics(g: Graph, x) -> dict[str, float]:
    """Edge agreement fraction and number of agreeing regions.

    Regions are connected components of the subgraph keeping only edges
    whose endpoints share the action; isolated nodes count as regions.
    """
    x = np.asarray(x)
    if x.shape != (g.n,):
        raise InputError(f"state shape {x.shape} does not match n={g.n}")
    agree = sum(1 for i, j in g.edges if x[i] == x[j])
    agreement = agree / g.m if g.m else 1.0
    parent = list(range(g.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in g.edges:
        if x[i] == x[j]:
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    regions = len({find(v) for v in range(g.n)})
    return {"edge_agreement": agreement, "regions": regions}


def s_shape_check(series, window=5) -> dict[str, Any]:
    """Monotonicity flag and inflection count of an adoption series.

    Inflections are sign changes of the second difference smoothed by a
    centered moving average (width 5 by default, edges replicated); values
    within a small tolerance of zero are ignored so saturated tails do not
    produce spurious crossings.
    """
    z = np.asarray(series, dtype=np.float64)
    if z.ndim != 1 or len(z) < 3:
        raise DataError("s-shape analysis needs a series of at least 3 values")
    monotone = bool(np.all(np.diff(z) >= 0))
    d2 = np.diff(z, 2)
    if window > 1:
        pad = window // 2
        padded = np.pad(d2, pad, mode="edge")
        kernel = np.ones(window) / window
        smooth = np.convolve(padded, kernel, mode="valid")
    else:
        smooth = d2
    tol = 1e-9 * max(1.0, float(np.ptp(z)))
    signs = np.sign(smooth)
    signs[np.abs(smooth) <= tol] = 0
    nonzero = signs[signs != 0]
    inflections = int(np.count_nonzero(np.diff(nonzero) != 0)) if len(nonzero) else 0
    return {"monotone": monotone, "inflections": inflections}
