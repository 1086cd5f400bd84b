"""Network game payoffs and decision rules.

Payoffs for the binary action set {0 = status quo, 1 = innovation} come in
three forms: a general 2x2 matrix, a diagonal coordination game with relative
advantage alpha, and an extended per-class payoff adding inertia and trend
terms. Decisions are best response (ties keep the current action) or the
log-linear rule with rationality beta.

Per-agent payoffs average over neighbors, so they are undefined for isolated
agents; stepping rules skip isolated agents instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cultures import CommittedSet
from .errors import InputError
from .graphs import Graph, neighbor_adopter_counts


@dataclass(frozen=True)
class PayoffMatrix:
    """General 2x2 payoff matrix: rows are own action 0/1, columns the peer's."""

    a: float
    b: float
    c: float
    d: float


@dataclass(frozen=True)
class Coordination:
    """Diagonal coordination game: 1 for matching on 0, 1+alpha for matching on 1."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > -1.0:
            raise InputError(f"relative advantage must exceed -1, got {self.alpha}")


@dataclass(frozen=True)
class ClassParams:
    """Extended-payoff weights for one behavioral class.

    b weighs coordination, k inertia (keeping the current action), r the
    trend signal; they must be non-negative and sum to 1. beta is the
    log-linear rationality of agents in the class.
    """

    b: float
    k: float
    r: float
    beta: float

    def __post_init__(self):
        if self.b < 0 or self.k < 0 or self.r < 0:
            raise InputError("class weights must be non-negative")
        if abs(self.b + self.k + self.r - 1.0) > 1e-12:
            raise InputError(f"class weights must sum to 1, got {self.b + self.k + self.r}")
        if self.beta < 0:
            raise InputError(f"rationality must be non-negative, got {self.beta}")


@dataclass(frozen=True)
class Extended:
    """Extended payoff spec: per-class weights plus an agent -> class map.

    assignment is a tuple with one class index per agent; None puts every
    agent in class 0. trend_scope selects the population-wide trend signal
    ("global", the default) or a neighbors-only variant ("neighbors").
    """

    classes: tuple[ClassParams, ...]
    assignment: tuple[int, ...] | None = None
    trend_scope: str = "global"

    def __post_init__(self):
        if not self.classes:
            raise InputError("extended spec needs at least one class")
        if self.trend_scope not in ("global", "neighbors"):
            raise InputError(f"unknown trend scope {self.trend_scope!r}")
        if self.assignment is not None:
            bad = [c for c in self.assignment if not 0 <= c < len(self.classes)]
            if bad:
                raise InputError(f"class assignment out of range: {bad[:5]}")

    def class_of(self, i: int) -> ClassParams:
        if self.assignment is None:
            return self.classes[0]
        return self.classes[self.assignment[i]]


PayoffSpec = PayoffMatrix | Coordination | Extended


def _adopter_count(g: Graph, x, i) -> int:
    return sum(int(x[j]) for j in g.neighbors(i))


def general_payoffs(g: Graph, x, i, matrix: PayoffMatrix):
    """Average payoffs (u0, u1) of agent i under a general 2x2 matrix."""
    d = g.degree(i)
    if d == 0:
        raise InputError(f"payoff undefined for isolated agent {i}")
    s = _adopter_count(g, x, i)
    u0 = (matrix.a * (d - s) + matrix.b * s) / d
    u1 = (matrix.c * (d - s) + matrix.d * s) / d
    return u0, u1


def coordination_payoffs(g: Graph, x, i, alpha):
    """Average payoffs (u0, u1) of agent i in the coordination game."""
    d = g.degree(i)
    if d == 0:
        raise InputError(f"payoff undefined for isolated agent {i}")
    if not alpha > -1.0:
        raise InputError(f"relative advantage must exceed -1, got {alpha}")
    s = _adopter_count(g, x, i)
    u0 = (d - s) / d
    u1 = (1.0 + alpha) * (s / d)
    return u0, u1


def best_response(u0, u1, current):
    """Payoff-maximizing action; exact ties keep the current action."""
    if u1 > u0:
        return 1
    if u0 > u1:
        return 0
    return int(current)


def reduce_to_coordination(matrix: PayoffMatrix) -> float:
    """Relative advantage of the coordination game equivalent to the matrix.

    Requires a > c and d > b (both actions strict best replies to
    themselves); the reduction is alpha = (d-b)/(a-c) - 1.
    """
    if not (matrix.a > matrix.c and matrix.d > matrix.b):
        raise InputError(
            "not a coordination game: need a > c and d > b, got "
            f"a={matrix.a}, b={matrix.b}, c={matrix.c}, d={matrix.d}"
        )
    return (matrix.d - matrix.b) / (matrix.a - matrix.c) - 1.0


def loglinear_prob(u0, u1, beta) -> float:
    """Probability of picking action 1 under the log-linear rule.

    Computed with max subtraction so large beta cannot overflow; beta = 0
    gives 1/2 regardless of payoffs.
    """
    if beta < 0:
        raise InputError(f"rationality must be non-negative, got {beta}")
    b0 = beta * u0
    b1 = beta * u1
    m = max(b0, b1)
    e0 = math.exp(b0 - m)
    e1 = math.exp(b1 - m)
    return e1 / (e0 + e1)


def trend_signal(x_now, x_prev, i) -> float:
    """Population trend seen by agent i: above 1/2 when adoption is rising.

    Equals (1/2) (1 + sum of state changes of all other agents / (n-1)).
    """
    x_now = np.asarray(x_now)
    x_prev = np.asarray(x_prev)
    if x_now.shape != x_prev.shape:
        raise InputError("state snapshots differ in shape")
    n = len(x_now)
    if n < 2:
        raise InputError("trend needs at least two agents")
    total = int(x_now.sum()) - int(x_prev.sum())
    own = int(x_now[i]) - int(x_prev[i])
    return 0.5 * (1.0 + (total - own) / (n - 1))


def extended_payoffs(g: Graph, x_now, x_prev, i, params: ClassParams, trend_scope="global"):
    """Extended payoffs (u0, u1): coordination plus inertia plus trend.

    With k = r = 0 this reduces exactly to the coordination payoffs at
    alpha = 0. The trend term uses the previous-step snapshot; passing
    x_prev = x_now yields the neutral trend 1/2 (the t = 0 convention).
    """
    d = g.degree(i)
    if d == 0:
        raise InputError(f"payoff undefined for isolated agent {i}")
    s = _adopter_count(g, x_now, i)
    if trend_scope == "global":
        xh = trend_signal(x_now, x_prev, i)
    elif trend_scope == "neighbors":
        diff = sum(int(x_now[j]) - int(x_prev[j]) for j in g.neighbors(i))
        xh = 0.5 * (1.0 + diff / d)
    else:
        raise InputError(f"unknown trend scope {trend_scope!r}")
    xi = float(x_now[i])
    u1 = params.b * (s / d) + params.k * xi + params.r * xh
    u0 = params.b * ((d - s) / d) + params.k * (1.0 - xi) + params.r * (1.0 - xh)
    return u0, u1


def _payoff_arrays(g: Graph, x_now, x_prev, spec: PayoffSpec):
    """Vectorized (u0, u1) for all agents; entries for isolated agents are 0.

    Count sums are integer-valued, so these match the per-agent functions
    bit for bit on non-isolated agents.
    """
    n = g.n
    deg = g.degrees.astype(np.float64)
    safe = np.maximum(deg, 1.0)
    s = neighbor_adopter_counts(g, x_now)
    if isinstance(spec, PayoffMatrix):
        u0 = (spec.a * (deg - s) + spec.b * s) / safe
        u1 = (spec.c * (deg - s) + spec.d * s) / safe
    elif isinstance(spec, Coordination):
        u0 = (deg - s) / safe
        u1 = (1.0 + spec.alpha) * (s / safe)
    else:
        xn = np.asarray(x_now, dtype=np.int64)
        xp = np.asarray(x_prev, dtype=np.int64)
        total = int(xn.sum()) - int(xp.sum())
        if spec.trend_scope == "global":
            if n < 2:
                raise InputError("trend needs at least two agents")
            xh = 0.5 * (1.0 + (total - (xn - xp)) / (n - 1))
        else:
            ndiff = neighbor_adopter_counts(g, xn) - neighbor_adopter_counts(g, xp)
            xh = 0.5 * (1.0 + ndiff / safe)
        if spec.assignment is None:
            bw = np.full(n, spec.classes[0].b)
            kw = np.full(n, spec.classes[0].k)
            rw = np.full(n, spec.classes[0].r)
        else:
            assign = np.asarray(spec.assignment, dtype=np.int64)
            bw = np.array([spec.classes[c].b for c in assign])
            kw = np.array([spec.classes[c].k for c in assign])
            rw = np.array([spec.classes[c].r for c in assign])
        xi = np.asarray(x_now, dtype=np.float64)
        u1 = bw * (s / safe) + kw * xi + rw * xh
        u0 = bw * ((deg - s) / safe) + kw * (1.0 - xi) + rw * (1.0 - xh)
    u0 = np.where(deg > 0, u0, 0.0)
    u1 = np.where(deg > 0, u1, 0.0)
    return u0, u1


def _beta_array(g: Graph, spec: PayoffSpec, beta):
    if isinstance(spec, Extended):
        if spec.assignment is None:
            return np.full(g.n, spec.classes[0].beta)
        return np.array([spec.classes[c].beta for c in spec.assignment])
    if beta is None:
        raise InputError("log-linear updates need beta for matrix/coordination payoffs")
    arr = np.asarray(beta, dtype=np.float64)
    if arr.ndim == 0:
        arr = np.full(g.n, float(arr))
    if arr.shape != (g.n,):
        raise InputError(f"beta shape {arr.shape} does not match n={g.n}")
    if np.any(arr < 0):
        raise InputError("rationality must be non-negative")
    return arr


def game_step(
    g: Graph,
    x_now,
    x_prev,
    spec: PayoffSpec,
    rule="best_response",
    schedule="synchronous",
    committed: CommittedSet | None = None,
    rng=None,
    beta=None,
) -> np.ndarray:
    """Advance the game one round and return the new state vector.

    schedule "synchronous" updates every agent from the same snapshot;
    "async_uniform" performs n uniformly random single-agent activations,
    each seeing the live state (one round = n activations). Committed agents
    always keep their committed action; isolated agents never update.
    """
    x = np.asarray(x_now).astype(np.int8)
    xp = np.asarray(x_prev).astype(np.int8)
    if x.shape != (g.n,) or xp.shape != (g.n,):
        raise InputError("state shape does not match the graph")
    if rule not in ("best_response", "loglinear"):
        raise InputError(f"unknown update rule {rule!r}")
    if schedule not in ("synchronous", "async_uniform"):
        raise InputError(f"unknown schedule {schedule!r}")
    if rng is None and (rule == "loglinear" or schedule == "async_uniform"):
        raise InputError("log-linear or asynchronous updates need an rng")
    if committed and committed.agents and committed.action is None:
        raise InputError("committed set for a game needs a committed action")
    committed_idx = np.array(sorted(committed.agents), dtype=np.int64) if committed else None
    deg = g.degrees

    if schedule == "synchronous":
        u0, u1 = _payoff_arrays(g, x, xp, spec)
        if rule == "best_response":
            new = np.where(u1 > u0, 1, np.where(u0 > u1, 0, x)).astype(np.int8)
        else:
            barr = _beta_array(g, spec, beta)
            t = barr * u1 - barr * u0
            p1 = np.where(t >= 0, 1.0 / (1.0 + np.exp(-np.abs(t))),
                          np.exp(-np.abs(t)) / (1.0 + np.exp(-np.abs(t))))
            draws = rng.random(g.n)
            new = (draws < p1).astype(np.int8)
        new = np.where(deg > 0, new, x).astype(np.int8)
        if committed_idx is not None and len(committed_idx):
            new[committed_idx] = committed.action
        return new

    # async_uniform: n activations on the live state
    new = x.copy()
    committed_set = committed.agents if committed else frozenset()
    barr = _beta_array(g, spec, beta) if rule == "loglinear" else None
    order = rng.integers(0, g.n, size=g.n)
    for a in order:
        a = int(a)
        if a in committed_set:
            new[a] = committed.action
            continue
        if deg[a] == 0:
            continue
        if isinstance(spec, Extended):
            u0, u1 = extended_payoffs(g, new, xp, a, spec.class_of(a),
                                      trend_scope=spec.trend_scope)
        elif isinstance(spec, Coordination):
            u0, u1 = coordination_payoffs(g, new, a, spec.alpha)
        else:
            u0, u1 = general_payoffs(g, new, a, spec)
        if rule == "best_response":
            new[a] = best_response(u0, u1, new[a])
        else:
            p1 = loglinear_prob(u0, u1, float(barr[a]))
            new[a] = 1 if rng.random() < p1 else 0
    if committed_idx is not None and len(committed_idx):
        new[committed_idx] = committed.action
    return new
