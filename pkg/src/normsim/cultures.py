"""Evolutionary convention dynamics: Axelrod dissemination and the Naming Game.

Both are asynchronous pairwise dynamics driven by a seeded generator. One
round is defined as n single-interaction steps, so uptake series are
comparable with the round-based game dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .graphs import Graph
from .trajectory import Trajectory


@dataclass(frozen=True)
class CommittedSet:
    """Agents whose state is pinned: a word for the Naming Game, an action for games."""

    agents: frozenset[int]
    word: str | None = None
    action: int | None = None

    def __contains__(self, i) -> bool:
        return i in self.agents

    def __len__(self) -> int:
        return len(self.agents)


def as_rng(seed_or_rng) -> np.random.Generator:
    """Normalize an int seed or Generator to a Generator (PCG64)."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


# ---------------------------------------------------------------------------
# Axelrod cultural dissemination
# ---------------------------------------------------------------------------

def random_culture(n, m, rng) -> np.ndarray:
    """Uniform random binary trait matrix of shape (n, m)."""
    if m < 1:
        raise InputError(f"need at least one trait, got m={m}")
    return as_rng(rng).integers(0, 2, size=(n, m)).astype(np.int8)


def axelrod_step(g: Graph, culture, rng) -> np.ndarray:
    """One imitation attempt; at most one trait entry of one agent changes.

    Draw order: agent i uniform on V, then (if i has neighbors) a uniform
    neighbor j, a uniform gate variable compared against the similarity
    fraction, and finally a uniform choice among the disagreeing entries.
    Drawing an isolated agent wastes the step.
    """
    rng = as_rng(rng)
    c = np.asarray(culture, dtype=np.int8)
    if c.ndim != 2 or c.shape[0] != g.n:
        raise InputError(f"culture shape {c.shape} does not match n={g.n}")
    out = c.copy()
    i = int(rng.integers(g.n))
    nbrs = g.neighbors(i)
    if not nbrs:
        return out
    j = nbrs[int(rng.integers(len(nbrs)))]
    m = c.shape[1]
    same = int((c[i] == c[j]).sum())
    if rng.random() < same / m:
        diff = np.flatnonzero(c[i] != c[j])
        if len(diff):
            ell = int(diff[int(rng.integers(len(diff)))])
            out[i, ell] = c[j, ell]
    return out


def _is_absorbing(g: Graph, rows) -> bool:
    """Absorbing iff every edge has similarity 0 or 1 (no partial overlap)."""
    for i, j in g.edges:
        a, b = rows[i], rows[j]
        same = sum(1 for u, v in zip(a, b) if u == v)
        if 0 < same < len(a):
            return False
    return True


def region_sizes(g: Graph, culture) -> list[int]:
    """Sizes (descending) of the identical-culture connected components."""
    c = np.asarray(culture)
    parent = list(range(g.n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for i, j in g.edges:
        if np.array_equal(c[i], c[j]):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    sizes: dict[int, int] = {}
    for v in range(g.n):
        r = find(v)
        sizes[r] = sizes.get(r, 0) + 1
    return sorted(sizes.values(), reverse=True)


def count_cultural_regions(g: Graph, culture) -> int:
    """Connected components of the identical-culture subgraph."""
    return len(region_sizes(g, culture))


def run_axelrod(g: Graph, m, init="random", max_steps=100_000, rng=0, check_every=None):
    """Iterate imitation steps until the state is absorbing or the budget ends.

    init is "random" or an explicit (n, m) binary matrix. Region statistics
    (count and largest-region fraction) are recorded at every absorbing
    check; the recorded z series is the largest-region fraction. Returns
    (Trajectory, absorbing flag).
    """
    rng = as_rng(rng)
    if g.n == 0:
        raise InputError("axelrod dynamics need at least one agent")
    if init == "random":
        culture = random_culture(g.n, m, rng)
    else:
        culture = np.asarray(init, dtype=np.int8)
        if culture.shape != (g.n, m):
            raise InputError(f"explicit init shape {culture.shape} != ({g.n}, {m})")
        culture = culture.copy()
    if check_every is None:
        check_every = max(1, g.n)
    rows = [list(map(int, culture[i])) for i in range(g.n)]
    adjacency = g.adjacency
    n = g.n

    check_times = [0]
    sizes = region_sizes(g, np.asarray(rows, dtype=np.int8))
    regions = [len(sizes)]
    largest = [sizes[0] / n]
    absorbing = _is_absorbing(g, rows)
    steps_done = 0
    batch = 4096

    while not absorbing and steps_done < max_steps:
        todo = min(batch, max_steps - steps_done, check_every - steps_done % check_every)
        i_draws = rng.integers(0, n, size=todo)
        u_draws = rng.random((todo, 3))
        for step in range(todo):
            i = int(i_draws[step])
            nbrs = adjacency[i]
            if not nbrs:
                continue
            j = nbrs[int(u_draws[step, 0] * len(nbrs))]
            ri, rj = rows[i], rows[j]
            same = sum(1 for u, v in zip(ri, rj) if u == v)
            if same == m:
                continue
            if u_draws[step, 1] < same / m:
                diff = [k for k in range(m) if ri[k] != rj[k]]
                ell = diff[int(u_draws[step, 2] * len(diff))]
                ri[ell] = rj[ell]
        steps_done += todo
        if steps_done % check_every == 0 or steps_done >= max_steps:
            absorbing = _is_absorbing(g, rows)
            snap = np.asarray(rows, dtype=np.int8)
            sizes = region_sizes(g, snap)
            check_times.append(steps_done)
            regions.append(len(sizes))
            largest.append(sizes[0] / n)

    final = np.asarray(rows, dtype=np.int8)
    traj = Trajectory(
        z_times=np.asarray(check_times, dtype=np.int64),
        z=np.asarray(largest, dtype=np.float64),
        terminal="absorbing" if absorbing else "budget",
        cadence=max(1, check_every // max(1, n)),
        extra={
            "n": n,
            "model": "axelrod",
            "regions": np.asarray(regions, dtype=np.int64),
            "final_culture": final,
            "steps": steps_done,
        },
    )
    return traj, absorbing


# ---------------------------------------------------------------------------
# Naming Game
# ---------------------------------------------------------------------------

class Inventory:
    """Per-agent word lists per object, plus the fresh-word counter.

    Word collections are insertion-ordered unique lists rather than sets so
    that uniform member draws are reproducible across processes (set
    iteration order depends on string hash randomization).
    """

    def __init__(self, n, objects, namespace=""):
        if objects < 1:
            raise InputError(f"need at least one object, got {objects}")
        self.n = n
        self.objects = objects
        self.namespace = str(namespace)
        self.words: list[list[list[str]]] = [
            [[] for _ in range(objects)] for _ in range(n)
        ]
        self._counter = 0

    def fresh_word(self) -> str:
        self._counter += 1
        return f"w{self.namespace}.{self._counter}"

    def set_committed(self, agents, word) -> None:
        for a in agents:
            self.words[a] = [[word] for _ in range(self.objects)]

    def agent_settled_on(self, a, word) -> bool:
        return all(lst == [word] for lst in self.words[a])

    def consensus_word(self) -> str | None:
        """The single word shared by every agent for every object, if any."""
        first = self.words[0][0]
        if len(first) != 1:
            return None
        w = first[0]
        for a in range(self.n):
            for lst in self.words[a]:
                if lst != [w]:
                    return None
        return w


def naming_game_step(g: Graph, inv: Inventory, committed: CommittedSet | None, rng) -> Inventory:
    """One speaker-listener interaction; the inventory is updated in place.

    Draw order: agent uniform on V; if isolated the step is a no-op;
    neighbor uniform; speaker role uniform between the two; object uniform;
    word uniform from the speaker's list (or freshly invented if empty).
    Success collapses both participants' lists for that object to the spoken
    word; failure adds the word to the listener's list. Committed agents
    never change their inventory.
    """
    rng = as_rng(rng)
    a = int(rng.integers(g.n))
    nbrs = g.neighbors(a)
    if not nbrs:
        return inv
    b = nbrs[int(rng.integers(len(nbrs)))]
    if rng.random() < 0.5:
        speaker, listener = a, b
    else:
        speaker, listener = b, a
    obj = int(rng.integers(inv.objects))
    _exchange(inv, committed, speaker, listener, obj, rng.random())
    return inv


def _exchange(inv: Inventory, committed, speaker, listener, obj, word_draw) -> None:
    committed_agents = committed.agents if committed else frozenset()
    s_list = inv.words[speaker][obj]
    if speaker in committed_agents:
        word = committed.word
    elif not s_list:
        word = inv.fresh_word()
        s_list.append(word)
    else:
        word = s_list[int(word_draw * len(s_list))]
    l_list = inv.words[listener][obj]
    if word in l_list:
        if speaker not in committed_agents:
            inv.words[speaker][obj] = [word]
        if listener not in committed_agents:
            inv.words[listener][obj] = [word]
    else:
        if listener not in committed_agents:
            l_list.append(word)


def run_naming_game(
    g: Graph,
    objects,
    committed_fraction,
    committed_word,
    max_steps,
    rng=0,
    *,
    pre_consensus=False,
    pre_max_steps=None,
    record_every=None,
):
    """Run the Naming Game and track uptake of the committed word.

    With pre_consensus=True the population first plays without committed
    agents until it reaches consensus on some (invented) status-quo word;
    the committed minority is then injected and only the second stage is
    recorded. Committed agents are chosen uniformly at random. Uptake is
    the fraction of non-committed agents settled on the committed word
    (NaN when everyone is committed). Returns (Trajectory, consensus flag).
    """
    rng = as_rng(rng)
    if not 0.0 <= committed_fraction <= 1.0:
        raise InputError(f"committed fraction must lie in [0, 1], got {committed_fraction}")
    n = g.n
    if n == 0:
        raise InputError("naming game needs at least one agent")
    n_committed = int(round(committed_fraction * n))
    inv = Inventory(n, objects, namespace=str(rng.integers(1 << 32)))

    stage1_steps = 0
    status_quo = None
    if pre_consensus:
        budget = pre_max_steps if pre_max_steps is not None else 2000 * n * objects
        stage1_steps, status_quo = _run_stage(
            g, inv, None, budget, rng, record=None, check_every=max(1, n)
        )

    if n_committed:
        chosen = rng.choice(n, size=n_committed, replace=False)
        committed = CommittedSet(agents=frozenset(int(c) for c in chosen), word=committed_word)
        inv.set_committed(committed.agents, committed_word)
    else:
        committed = CommittedSet(agents=frozenset(), word=committed_word)

    record_every = record_every if record_every is not None else max(1, n)
    uptake: list[float] = []
    times: list[int] = []

    def record(step):
        times.append(step)
        uptake.append(_uptake(inv, committed))

    record(0)
    steps, consensus_word = _run_stage(
        g, inv, committed, max_steps, rng, record=record, check_every=record_every
    )
    consensus = consensus_word is not None
    traj = Trajectory(
        z_times=np.asarray(times, dtype=np.int64),
        z=np.asarray(uptake, dtype=np.float64),
        terminal="consensus" if consensus else "budget",
        cadence=1,
        extra={
            "n": n,
            "model": "naming_game",
            "committed": sorted(committed.agents),
            "consensus_word": consensus_word,
            "status_quo_word": status_quo,
            "stage1_steps": stage1_steps,
            "steps": steps,
        },
    )
    return traj, consensus


def _uptake(inv: Inventory, committed: CommittedSet) -> float:
    others = [a for a in range(inv.n) if a not in committed.agents]
    if not others:
        return float("nan")
    settled = sum(1 for a in others if inv.agent_settled_on(a, committed.word))
    return settled / len(others)


def _run_stage(g, inv, committed, max_steps, rng, record, check_every):
    """Drive interactions until consensus or budget; returns (steps, word)."""
    n = g.n
    adjacency = g.adjacency
    word = inv.consensus_word()
    if word is not None:
        return 0, word
    steps = 0
    batch = 4096
    while steps < max_steps:
        upto = min(batch, max_steps - steps, check_every - steps % check_every)
        a_draws = rng.integers(0, n, size=upto)
        u_draws = rng.random((upto, 4))
        for s in range(upto):
            a = int(a_draws[s])
            nbrs = adjacency[a]
            if not nbrs:
                continue
            b = nbrs[int(u_draws[s, 0] * len(nbrs))]
            if u_draws[s, 1] < 0.5:
                speaker, listener = a, b
            else:
                speaker, listener = b, a
            obj = int(u_draws[s, 2] * inv.objects)
            _exchange(inv, committed, speaker, listener, obj, u_draws[s, 3])
        steps += upto
        if steps % check_every == 0 or steps >= max_steps:
            if record:
                record(steps)
            word = inv.consensus_word()
            if word is not None:
                return steps, word
    return steps, inv.consensus_word()
