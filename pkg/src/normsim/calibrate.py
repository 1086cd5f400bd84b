"""Parameter estimation and tipping-point measurement.

grid_search_bkr fits the extended-payoff weights (b, k, r) by exhaustive
search on the unit simplex, scoring each candidate by the discrepancy
between simulated and observed switch counts. critical_mass_sweep measures
terminal uptake of a committed alternative across committed fractions and
locates the smallest fraction that flips the population.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import engine, games
from .errors import DataError, InputError
from .reports import CalibrationReport
from .trajectory import Trajectory

SWEEP_MODELS = ("naming_game", "game_extended", "game_loglinear")


@dataclass(frozen=True)
class SwitchObservations:
    """Per-agent total switch counts over an observation window.

    Counts may be fractional when they aggregate several observed groups
    (the mean count per agent position across groups).
    """

    counts: np.ndarray
    window: int

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.float64)
        object.__setattr__(self, "counts", counts)
        if counts.ndim != 1 or len(counts) == 0:
            raise InputError("switch observations need a non-empty 1-d count vector")
        if self.window < 1:
            raise InputError(f"observation window must be positive, got {self.window}")
        if np.any(counts < 0) or np.any(counts > self.window):
            raise InputError("switch counts must lie in [0, window]")


@dataclass
class TippingResult:
    """Sweep of committed fractions with the estimated critical mass."""

    fractions: np.ndarray
    mean_uptake: np.ndarray
    std_uptake: np.ndarray
    reps: int
    critical_mass: float | None  # None: above the swept range
    ci_low: np.ndarray
    ci_high: np.ndarray


def simplex_grid(step) -> list[tuple[float, float, float]]:
    """All (b, k, r) with b, k multiples of step on the simplex b+k+r = 1.

    Ordered by b descending then k descending, so earlier candidates carry
    larger coordination weight (used as the deterministic tie order).
    """
    if not 0.0 < step <= 0.5:
        raise InputError(f"grid step must lie in (0, 0.5], got {step}")
    levels = int(np.floor(1.0 / step + 1e-9))
    out = []
    for i in range(levels, -1, -1):
        b = round(i * step, 12)
        if b > 1.0 + 1e-12:
            continue
        for j in range(levels - i, -1, -1):
            k = round(j * step, 12)
            r = 1.0 - b - k
            if r < -1e-12:
                continue
            out.append((min(b, 1.0), min(k, 1.0), max(r, 0.0)))
    if not out:
        raise InputError("empty parameter grid")
    return out


def agent_switch_counts(traj: Trajectory) -> np.ndarray:
    """Per-agent number of action changes along a cadence-1 trajectory."""
    if traj.states is None or traj.cadence != 1:
        raise DataError("switch counts need a cadence-1 trajectory with recorded states")
    return np.abs(np.diff(traj.states.astype(np.int64), axis=0)).sum(axis=0)


def assign_classes(counts, classes) -> np.ndarray:
    """Class index per observed agent.

    With two classes, agents are ranked by observed switch count (ties by
    index) and the top half goes to class 1, the rest to class 0.
    """
    counts = np.asarray(counts, dtype=np.float64)
    n = len(counts)
    if classes == 1:
        return np.zeros(n, dtype=np.int64)
    order = np.argsort(counts, kind="stable")
    assignment = np.zeros(n, dtype=np.int64)
    assignment[order[n - n // 2:]] = 1
    return assignment


def _observed_agents(scenario: engine.SimConfig) -> list[int]:
    """Non-committed agent indices of the scenario, in ascending order."""
    committed = scenario.params.get("committed") or {}
    if hasattr(committed, "agents"):
        pinned = set(committed.agents)
    else:
        pinned = {int(a) for a in committed.get("agents", [])}
    return [a for a in range(scenario.graph.n) if a not in pinned]


def _scenario_with_weights(scenario, weights, assignment_full):
    spec = scenario.params.get("payoff")
    if not isinstance(spec, games.Extended):
        raise InputError("grid search needs a scenario with an extended payoff spec")
    new_classes = tuple(
        games.ClassParams(b=w[0], k=w[1], r=w[2], beta=spec.classes[c].beta)
        for c, w in enumerate(weights)
    )
    new_spec = games.Extended(
        classes=new_classes, assignment=assignment_full, trend_scope=spec.trend_scope
    )
    params = dict(scenario.params)
    params["payoff"] = new_spec
    return replace(scenario, params=params)


def _evaluate_candidate(args):
    scenario, weights, assignment_full, class_of_obs, obs_totals, seeds, observed_idx, loss = args
    cand_config = _scenario_with_weights(scenario, weights, assignment_full)
    errs = []
    for seed in seeds:
        traj = engine.run(replace(cand_config, seed=seed))
        counts = agent_switch_counts(traj)[observed_idx]
        sim_totals = np.array(
            [counts[class_of_obs == c].sum() for c in range(len(weights))], dtype=np.float64
        )
        gap = np.abs(sim_totals - obs_totals)
        errs.append(gap * gap if loss == "l2" else gap)
    return float(np.mean(errs))


def grid_search_bkr(
    observed: SwitchObservations,
    scenario: engine.SimConfig,
    grid_step,
    classes=1,
    *,
    ensemble_size=50,
    workers=1,
    loss="mae",
) -> CalibrationReport:
    """Exhaustive simplex search for the extended-payoff weights.

    The scenario is a game config with an extended payoff spec; its class
    betas are kept and only the (b, k, r) weights vary over the grid. Every
    candidate is scored with the same seed schedule (common random numbers:
    seeds scenario.seed .. scenario.seed + ensemble_size - 1) by the mean
    absolute error between per-class total switch counts of the simulated
    non-committed agents and of the observations. Ties keep the earlier
    candidate, which by grid order means the largest b of the lowest class.
    """
    if classes not in (1, 2):
        raise InputError(f"classes must be 1 or 2, got {classes}")
    if loss not in ("mae", "l2"):
        raise InputError(f"unknown loss {loss!r}")
    if ensemble_size < 1:
        raise InputError(f"ensemble size must be positive, got {ensemble_size}")
    scenario.validate()
    if scenario.model != "game":
        raise InputError("grid search scenario must use the game model")

    observed_idx = np.asarray(_observed_agents(scenario), dtype=np.int64)
    if len(observed_idx) != len(observed.counts):
        raise InputError(
            f"observations cover {len(observed.counts)} agents but the scenario "
            f"has {len(observed_idx)} non-committed agents"
        )
    class_of_obs = assign_classes(observed.counts, classes)
    obs_totals = np.array(
        [observed.counts[class_of_obs == c].sum() for c in range(classes)], dtype=np.float64
    )
    # Full-population class assignment; committed agents never update, so
    # their class is irrelevant and defaults to 0.
    assignment_full = np.zeros(scenario.graph.n, dtype=np.int64)
    assignment_full[observed_idx] = class_of_obs
    assignment_full = tuple(int(c) for c in assignment_full)

    cells = simplex_grid(grid_step)
    if classes == 1:
        candidates = [(cell,) for cell in cells]
    else:
        candidates = [(c0, c1) for c0 in cells for c1 in cells]
    seeds = [int(scenario.seed) + r for r in range(ensemble_size)]
    jobs = [
        (scenario, weights, assignment_full, class_of_obs, obs_totals, seeds, observed_idx, loss)
        for weights in candidates
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            objectives = list(pool.map(_evaluate_candidate, jobs))
    else:
        objectives = [_evaluate_candidate(j) for j in jobs]

    best = int(np.argmin(objectives))  # argmin keeps the first (largest-b) tie
    table = []
    for weights, obj in zip(candidates, objectives):
        for c, (b, k, r) in enumerate(weights):
            table.append({"class": c, "b": b, "k": k, "r": r, "objective": obj})
    best_weights = candidates[best]
    spec = scenario.params["payoff"]
    return CalibrationReport(
        method="grid_bkr",
        params={
            "classes": [
                {"b": w[0], "k": w[1], "r": w[2], "beta": spec.classes[c].beta}
                for c, w in enumerate(best_weights)
            ],
        },
        objective=float(objectives[best]),
        diagnostics={
            "grid_step": float(grid_step),
            "n_candidates": len(candidates),
            "ensemble_size": ensemble_size,
            "loss": loss,
            "class_assignment": [int(c) for c in class_of_obs],
        },
        table=tuple(table),
    )


def _terminal_uptake(traj: Trajectory) -> float:
    """Terminal uptake of the committed alternative among non-committed agents."""
    model = traj.extra.get("model")
    if model == "naming_game":
        value = traj.final_z
        return 1.0 if np.isnan(value) else float(value)
    committed = set(traj.extra.get("committed", []))
    action = traj.extra.get("committed_action")
    if traj.states is None:
        raise DataError("uptake needs recorded states for game trajectories")
    final = traj.states[-1]
    others = [a for a in range(len(final)) if a not in committed]
    if not others:
        return 1.0  # everyone committed: consensus by construction
    if action is None:
        action = 1
    return float(np.mean([final[a] == action for a in others]))


def critical_mass_sweep(
    model,
    fractions,
    reps,
    scenario: engine.SimConfig,
    *,
    base_seed=None,
    workers=1,
    uptake_threshold=0.5,
) -> TippingResult:
    """Terminal uptake of the committed alternative across committed fractions.

    The critical mass estimate is the smallest swept fraction whose mean
    uptake reaches uptake_threshold (default 0.5); None means no swept
    fraction reached it. The confidence band is the normal approximation
    mean +- 1.96 std/sqrt(reps). Rep seeds are disjoint per fraction.
    """
    if model not in SWEEP_MODELS:
        raise InputError(f"unknown sweep model {model!r}; expected one of {SWEEP_MODELS}")
    fr = np.asarray(list(fractions), dtype=np.float64)
    if len(fr) == 0 or np.any(fr < 0) or np.any(fr > 1):
        raise InputError("fractions must be a non-empty subset of [0, 1]")
    if np.any(np.diff(fr) <= 0):
        raise InputError("fractions must be strictly increasing")
    if reps < 1:
        raise InputError(f"need at least one repetition, got {reps}")
    scenario.validate()
    expected = "naming_game" if model == "naming_game" else "game"
    if scenario.model != expected:
        raise InputError(f"sweep model {model!r} needs a {expected!r} scenario")
    if model == "game_extended" and not isinstance(
        scenario.params.get("payoff"), games.Extended
    ):
        raise InputError("game_extended sweep needs an extended payoff spec")

    base = scenario.seed if base_seed is None else base_seed
    means, stds, los, his = [], [], [], []
    for fi, frac in enumerate(fr):
        params = dict(scenario.params)
        if model == "naming_game":
            params["committed_fraction"] = float(frac)
        else:
            committed = dict(params.get("committed") or {})
            committed["fraction"] = float(frac)
            committed.setdefault("action", 1)
            committed.pop("agents", None)
            params["committed"] = committed
        cfg = replace(scenario, params=params)
        seeds = [int(base) + fi * reps + r for r in range(reps)]
        jobs = [(cfg, s) for s in seeds]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                trajectories = list(pool.map(engine._run_seeded, jobs))
        else:
            trajectories = [engine._run_seeded(j) for j in jobs]
        uptakes = np.array([_terminal_uptake(t) for t in trajectories])
        mean = float(uptakes.mean())
        std = float(uptakes.std(ddof=1)) if reps > 1 else 0.0
        half = 1.96 * std / np.sqrt(reps)
        means.append(mean)
        stds.append(std)
        los.append(mean - half)
        his.append(mean + half)

    means_arr = np.asarray(means)
    crossing = np.flatnonzero(means_arr >= uptake_threshold)
    critical = float(fr[crossing[0]]) if len(crossing) else None
    return TippingResult(
        fractions=fr,
        mean_uptake=means_arr,
        std_uptake=np.asarray(stds),
        reps=reps,
        critical_mass=critical,
        ci_low=np.asarray(los),
        ci_high=np.asarray(his),
    )
