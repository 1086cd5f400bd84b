"""Undirected simple graphs: construction, generators, and edge-list files.

Nodes are dense integers 0..n-1. Graphs are immutable after construction, so
a single instance can be shared freely between parallel simulation runs.
Edge-list files may carry arbitrary node labels; these are re-indexed on read
and the label map is kept on the Graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InputError, ParseError

GENERATOR_KINDS = (
    "complete",
    "ring_lattice",
    "grid2d",
    "erdos_renyi",
    "watts_strogatz",
    "barabasi_albert",
)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph with canonical (i < j) edges."""

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.adjacency], dtype=np.int64)

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoints as two int arrays, for vectorized per-node sums."""
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        arr = np.asarray(self.edges, dtype=np.int64)
        return arr[:, 0], arr[:, 1]


def build_from_edges(n, edges, labels=None) -> Graph:
    """Build a canonical Graph from an iterable of node pairs.

    Duplicate pairs (in either orientation) collapse to one edge. Endpoints
    outside [0, n) and self-loops raise InputError.
    """
    if n < 0:
        raise InputError(f"node count must be non-negative, got {n}")
    canonical = set()
    for pair in edges:
        i, j = pair
        i, j = int(i), int(j)
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"edge ({i}, {j}) has an endpoint outside [0, {n})")
        if i == j:
            raise InputError(f"self-loop ({i}, {i}) is not allowed")
        canonical.add((i, j) if i < j else (j, i))
    edge_tuple = tuple(sorted(canonical))
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edge_tuple:
        adj[i].append(j)
        adj[j].append(i)
    adjacency = tuple(tuple(sorted(a)) for a in adj)
    return Graph(n=n, edges=edge_tuple, adjacency=adjacency, labels=labels)


def generate(kind, n, seed=0, *, k=None, p=None, rows=None, cols=None, m=None) -> Graph:
    """Generate a graph of the given kind, deterministic in (kind, params, n, seed).

    Kinds and their parameters:
      complete            no parameters
      ring_lattice        k (even, 0 <= k < n): each node linked to k/2 nodes per side
      grid2d              rows, cols (n must equal rows*cols): 4-neighbor lattice
      erdos_renyi         p in [0, 1]: each pair present independently
      watts_strogatz      k (even), p: ring lattice with clockwise edges rewired
                          with probability p to a uniform non-neighbor
      barabasi_albert     m >= 1: seeded with an m-clique, then preferential
                          attachment of m edges per new node
    """
    if kind not in GENERATOR_KINDS:
        raise InputError(f"unknown graph kind {kind!r}; expected one of {GENERATOR_KINDS}")
    if n < 0:
        raise InputError(f"node count must be non-negative, got {n}")
    rng = np.random.default_rng(seed)
    if kind == "complete":
        return build_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if kind == "ring_lattice":
        return build_from_edges(n, _ring_lattice_edges(n, k))
    if kind == "grid2d":
        if rows is None or cols is None:
            raise InputError("grid2d requires rows and cols")
        if rows < 1 or cols < 1:
            raise InputError("grid2d requires rows >= 1 and cols >= 1")
        if n != rows * cols:
            raise InputError(f"grid2d needs n == rows*cols, got n={n} for {rows}x{cols}")
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return build_from_edges(n, edges)
    if kind == "erdos_renyi":
        if p is None or not (0.0 <= p <= 1.0):
            raise InputError(f"erdos_renyi requires p in [0, 1], got {p}")
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        if not pairs:
            return build_from_edges(n, [])
        keep = rng.random(len(pairs)) < p
        return build_from_edges(n, [e for e, kf in zip(pairs, keep) if kf])
    if kind == "watts_strogatz":
        if p is None or not (0.0 <= p <= 1.0):
            raise InputError(f"watts_strogatz requires p in [0, 1], got {p}")
        base = _ring_lattice_edges(n, k)
        neighbor_sets = [set() for _ in range(n)]
        for i, j in base:
            neighbor_sets[i].add(j)
            neighbor_sets[j].add(i)
        edges = list(base)
        # Rewire clockwise edges in construction order, keeping endpoint i.
        for idx, (i, j) in enumerate(base):
            if rng.random() >= p:
                continue
            if len(neighbor_sets[i]) >= n - 1:
                continue  # no non-neighbor available
            while True:
                t = int(rng.integers(n))
                if t != i and t not in neighbor_sets[i]:
                    break
            neighbor_sets[i].discard(j)
            neighbor_sets[j].discard(i)
            neighbor_sets[i].add(t)
            neighbor_sets[t].add(i)
            edges[idx] = (i, t)
        return build_from_edges(n, edges)
    # barabasi_albert
    if m is None or m < 1:
        raise InputError(f"barabasi_albert requires m >= 1, got {m}")
    if n < m:
        raise InputError(f"barabasi_albert requires n >= m, got n={n}, m={m}")
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    repeated: list[int] = []  # one entry per edge endpoint: degree-proportional pool
    for i, j in edges:
        repeated.append(i)
        repeated.append(j)
    for v in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            if repeated:
                t = repeated[int(rng.integers(len(repeated)))]
            else:
                t = int(rng.integers(v))  # m=1 start: no edges yet, pick uniformly
            targets.add(t)
        for t in targets:
            edges.append((t, v))
            repeated.append(t)
            repeated.append(v)
    return build_from_edges(n, edges)


def _ring_lattice_edges(n, k):
    if k is None or k < 0 or k % 2 != 0:
        raise InputError(f"ring lattice requires an even k >= 0, got {k}")
    if k >= n and not (k == 0 and n >= 0):
        raise InputError(f"ring lattice requires k < n, got k={k}, n={n}")
    edges = []
    for i in range(n):
        for d in range(1, k // 2 + 1):
            edges.append((i, (i + d) % n))
    return edges


def write_edge_list(g: Graph, path) -> None:
    """Write the canonical edge-list format: 'n <count>' then one edge per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"n {g.n}\n")
        for i, j in g.edges:
            fh.write(f"{i} {j}\n")


def read_edge_list(path) -> Graph:
    """Read an edge list; arbitrary labels are re-indexed by first appearance.

    Format: optional '#' comment lines, a header line 'n <count>', then
    '<i> <j>' pairs. If every endpoint parses as an integer in [0, n), labels
    are the identity; otherwise endpoints are treated as opaque labels and
    mapped to dense indices, with the label map kept on the returned Graph.
    """
    n = None
    raw: list[tuple[str, str, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            tokens = text.split()
            if n is None:
                if len(tokens) != 2 or tokens[0] != "n":
                    raise ParseError("expected header 'n <count>'", line=lineno)
                try:
                    n = int(tokens[1])
                except ValueError:
                    raise ParseError(f"bad node count {tokens[1]!r}", line=lineno) from None
                if n < 0:
                    raise ParseError(f"negative node count {n}", line=lineno)
                continue
            if len(tokens) != 2:
                raise ParseError(f"expected two endpoints, got {len(tokens)}", line=lineno)
            if tokens[0] == tokens[1]:
                raise ParseError(f"self-loop on {tokens[0]!r}", line=lineno)
            raw.append((tokens[0], tokens[1], lineno))
    if n is None:
        raise ParseError("missing header 'n <count>'", line=1)

    def as_index(token):
        try:
            v = int(token)
        except ValueError:
            return None
        return v if 0 <= v < n else None

    if all(as_index(a) is not None and as_index(b) is not None for a, b, _ in raw):
        return build_from_edges(n, [(int(a), int(b)) for a, b, _ in raw])

    index: dict[str, int] = {}
    edges = []
    for a, b, lineno in raw:
        for token in (a, b):
            if token not in index:
                if len(index) >= n:
                    raise ParseError(f"more than {n} distinct labels", line=lineno)
                index[token] = len(index)
        edges.append((index[a], index[b]))
    labels = list(index)
    labels += [str(i) for i in range(len(labels), n)]
    return build_from_edges(n, edges, labels=tuple(labels))


def neighbor_adopter_counts(g: Graph, x: np.ndarray) -> np.ndarray:
    """Per-node count of neighbors with state 1; exact integers as floats."""
    ei, ej = g.edge_arrays
    xf = np.asarray(x, dtype=np.float64)
    counts = np.bincount(ei, weights=xf[ej], minlength=g.n)
    counts += np.bincount(ej, weights=xf[ei], minlength=g.n)
    return counts
