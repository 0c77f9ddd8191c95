"""Undirected simple graphs stored as rows of integer bitsets."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_VERTICES = 32768


class GraphError(ValueError):
    """Raised on malformed graph input."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(members: Iterable[int]) -> int:
    m = 0
    for v in members:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    """Graph on vertices ``0..n-1``; ``adj[i]`` is the neighbor bitset of ``i``."""

    n: int
    adj: tuple[int, ...]
    duplicate_edges: int = field(default=0, compare=False)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for i, row in enumerate(self.adj):
            if row & ~full:
                raise GraphError(f"row {i} has bits outside the vertex range")
            if (row >> i) & 1:
                raise GraphError(f"self-loop at {i}")
            for j in bits(row):
                if not (self.adj[j] >> i) & 1:
                    raise GraphError(f"asymmetric edge {i}-{j}")

    @classmethod
    def trusted(cls, n: int, adj: Sequence[int]) -> "Graph":
        """Build without the O(m) symmetry check; for constructions known to be valid."""
        g = object.__new__(cls)
        object.__setattr__(g, "n", n)
        object.__setattr__(g, "adj", tuple(adj))
        object.__setattr__(g, "duplicate_edges", 0)
        return g

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_adjacency(cls, a) -> "Graph":
        a = np.asarray(a)
        n = a.shape[0]
        return cls.from_edges(n, ((int(i), int(j)) for i, j in zip(*np.nonzero(np.triu(a, 1)))))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << i) for i in range(n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        return cls.from_edges(leaves + 1, ((0, i) for i in range(1, leaves + 1)))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    @property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_array(self) -> np.ndarray:
        e = self.edges()
        return np.array(e, dtype=np.int64).reshape(len(e), 2)

    def adjacency_matrix(self, dtype=np.int8) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        e = self.edge_array()
        a[e[:, 0], e[:, 1]] = 1
        a[e[:, 1], e[:, 0]] = 1
        return a

    def is_independent(self, members: Iterable[int]) -> bool:
        m = members if isinstance(members, int) else mask_of(members)
        return all(not (self.adj[v] & m) for v in bits(m))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.num_edges})"


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph.trusted(g.n, tuple(full ^ row ^ (1 << i) for i, row in enumerate(g.adj)))


def induced_subgraph(g: Graph, s: Iterable[int] | int) -> tuple[Graph, list[int]]:
    """Return ``(G[s], mapping)`` where ``mapping[new] = old``.

    ``s`` may be a bitset or an iterable of vertex ids.
    """
    if isinstance(s, int):
        if s < 0 or s >> g.n:
            raise GraphError("vertex set has members outside the vertex range")
        verts = list(bits(s))
    else:
        verts = sorted(set(s))
        if verts and (verts[0] < 0 or verts[-1] >= g.n):
            raise GraphError("vertex set has members outside the vertex range")
    pos = {v: i for i, v in enumerate(verts)}
    keep = mask_of(verts)
    rows = []
    for v in verts:
        rows.append(mask_of(pos[u] for u in bits(g.adj[v] & keep)))
    return Graph(len(verts), tuple(rows)), verts


def max_degree_vertex(g: Graph) -> int:
    if g.n == 0:
        raise GraphError("max_degree_vertex of an empty graph")
    degs = g.degrees()
    return degs.index(max(degs))


def disjoint_union(graphs: Sequence[Graph]) -> Graph:
    edges, offset = [], 0
    for h in graphs:
        edges.extend((u + offset, v + offset) for u, v in h.edges())
        offset += h.n
    return Graph.from_edges(offset, edges)


def load_edge_list(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format.

    Lines starting with ``#`` and blank lines are ignored. Duplicate edges are
    collapsed and counted in ``Graph.duplicate_edges``.
    """
    header = None
    rows: list[int] = []
    seen = 0
    dups = 0
    m = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise EdgeListParseError(lineno, f"non-integer token in {line!r}") from None
        if len(nums) != 2:
            raise EdgeListParseError(lineno, f"expected two integers, got {line!r}")
        if header is None:
            n, m = nums
            if n < 0 or m < 0:
                raise EdgeListParseError(lineno, "negative count in header")
            if n > MAX_VERTICES:
                raise EdgeListParseError(lineno, f"n={n} exceeds {MAX_VERTICES}")
            header = (n, m)
            rows = [0] * n
            continue
        u, v = nums
        n = header[0]
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListParseError(lineno, f"index out of range in {line!r} (n={n})")
        if u == v:
            raise EdgeListParseError(lineno, f"self-loop {u}")
        if (rows[u] >> v) & 1:
            dups += 1
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        seen += 1
    if header is None:
        raise EdgeListParseError(0, "missing header")
    if seen != m:
        raise EdgeListParseError(0, f"header declares {m} edges, found {seen}")
    return Graph(header[0], tuple(rows), duplicate_edges=dups)


def save_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


def random_graph(n: int, p: float, seed: int | None = None) -> Graph:
    rng = random.Random(seed)
    return Graph.from_edges(n, ((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p))


def gen_bounded_minrank_instance(
    n: int, k: int, p: float, seed: int | None = None, return_labels: bool = False
):
    """Random graph ``G`` with ``minrk2(complement(G)) <= k``.

    Every vertex draws a uniform label in ``G_k``; a pair may be joined only
    when the labels are adjacent in ``G_k``, and each such pair is joined with
    probability ``p``. The labelling is then a homomorphism ``G -> G_k``.
    """
    from .gk import build_gk

    if k < 1:
        raise GraphError("k must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise GraphError("p must lie in [0, 1]")
    gk = build_gk(k)
    rng = random.Random(seed)
    labels = [rng.randrange(gk.graph.n) for _ in range(n)]
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if gk.graph.has_edge(labels[u], labels[v]) and rng.random() < p:
                edges.append((u, v))
    g = Graph.from_edges(n, edges)
    return (g, labels) if return_labels else g
