"""Independent sets and colorings for graphs whose complement has small minrank."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .gk import kappa
from .graph import Graph, induced_subgraph, max_degree_vertex
from .rounding import (RoundingParams, augmented_kms, default_t_grid, default_trials,
                       greedy_independent_set, kms_prime)
from .vector_coloring import solve_vector_coloring

HIGH_DEGREE_EXPONENT = 0.7426


class NotBipartite(ValueError):
    def __init__(self, cycle: list[int]):
        super().__init__(f"odd cycle of length {len(cycle)}: {cycle}")
        self.cycle = cycle


class PreconditionViolation(RuntimeError):
    """A structural guarantee of the minrank assumption failed, so the assumption was false."""


@dataclass(frozen=True)
class Coloring:
    colors: tuple[int, ...]

    @property
    def count(self) -> int:
        return max(self.colors) + 1 if self.colors else 0

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out

    def is_valid(self, g: Graph) -> bool:
        if len(self.colors) != g.n or sorted(set(self.colors)) != list(range(self.count)):
            return False
        return all(self.colors[u] != self.colors[v] for u, v in g.edges())


def two_color(g: Graph) -> Coloring:
    """BFS 2-coloring; raises NotBipartite with an odd cycle."""
    color = [-1] * g.n
    parent = [-1] * g.n
    depth = [0] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if color[w] < 0:
                    color[w], parent[w], depth[w] = 1 - color[u], u, depth[u] + 1
                    queue.append(w)
                elif color[w] == color[u]:
                    raise NotBipartite(_odd_cycle(u, w, parent, depth))
    return Coloring(tuple(color))


def _odd_cycle(u, w, parent, depth):
    """Cycle through the tree paths of u and w to their common ancestor, closed by edge u-w."""
    left, right = [u], [w]
    a, b = u, w
    while depth[a] > depth[b]:
        a = parent[a]
        left.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        right.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        left.append(a)
        right.append(b)
    return left + right[-2::-1]


def larger_class(c: Coloring) -> list[int]:
    classes = c.classes()
    return max(classes, key=len) if classes else []  # first of the largest on ties


def greedy_coloring(g: Graph) -> Coloring:
    """Color classes taken one at a time by the min-degree greedy independent set."""
    colors = [-1] * g.n
    remaining = list(range(g.n))
    c = 0
    while remaining:
        sub, mapping = induced_subgraph(g, remaining)
        for v in greedy_independent_set(sub):
            colors[mapping[v]] = c
        remaining = [v for v in remaining if colors[v] < 0]
        c += 1
    return Coloring(tuple(colors))


def g_exponent(k: int) -> float:
    """Independent-set exponent: g(1) = g(2) = 1, g(k) = g(k-1) / (g(k-1) + 1 - 2/kappa_k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = 1.0
    for j in range(3, k + 1):
        g = g / (g + 1.0 - 2.0 / kappa(j))
    return g


def _bipartite_side(g: Graph, k: int) -> list[int]:
    try:
        return larger_class(two_color(g))
    except NotBipartite as exc:
        raise PreconditionViolation(
            f"graph is not 2-colorable, so its complement does not have minrank <= {k} ({exc})"
        ) from exc


def minrank_basic(g: Graph, k: int, seed: int = 0, tol: float = 1e-4, restarts: int = 1,
                  trials: int | None = None, t_grid_size: int = 20) -> list[int]:
    """Recursive independent set for ``g`` with ``minrk2(complement(g)) <= k``.

    For k <= 2 the graph is bipartite and the larger side is returned.
    Otherwise the larger of KMS' rounding (threshold from ``kappa(k)``) and
    the recursion on the neighborhood of a maximum-degree vertex with k-1;
    KMS' wins ties.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if g.n == 0:
        return []
    if k <= 2:
        return sorted(_bipartite_side(g, k))
    if g.num_edges == 0:
        return list(range(g.n))
    vc = solve_vector_coloring(g, strict=True, tol=tol, seed=seed, restarts=restarts)
    sigma_k = 1.0 / (kappa(k) - 1.0)
    params = RoundingParams(default_t_grid(g.n, g.max_degree(), sigma_k, 0.0, t_grid_size),
                            trials or default_trials(g.n), seed)
    kms = list(kms_prime(g, vc.vectors, params).members)
    v = max_degree_vertex(g)
    sub, mapping = induced_subgraph(g, g.adj[v])
    rec = [mapping[u] for u in minrank_basic(sub, k - 1, seed, tol, restarts, trials, t_grid_size)]
    best = kms if len(kms) >= len(rec) else sorted(rec)
    if not g.is_independent(best):
        raise AssertionError("minrank_basic produced a dependent set")
    return best


def independent_set_minrank3(g: Graph, seed: int = 0, tol: float = 1e-4, restarts: int = 1,
                             trials: int | None = None, t_grid_size: int = 20) -> list[int]:
    """Half of a high-degree neighborhood when one exists, else Augmented-KMS."""
    if g.n == 0:
        return []
    v = max_degree_vertex(g)
    if g.degree(v) > 0 and g.degree(v) >= g.n ** HIGH_DEGREE_EXPONENT:
        sub, mapping = induced_subgraph(g, g.adj[v])
        return sorted(mapping[u] for u in _bipartite_side(sub, 3))
    res = augmented_kms(g, tol=tol, seed=seed, restarts=restarts, trials=trials, t_grid_size=t_grid_size)
    return list(res.members)


def color_graph(g: Graph, k: int, seed: int = 0, mode: str = "basic", tol: float = 1e-4,
                restarts: int = 1, trials: int | None = None, t_grid_size: int = 20) -> Coloring:
    """Color by repeatedly removing an independent set; every residual graph is re-solved."""
    if mode not in ("basic", "minrank3"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "minrank3" and k != 3:
        raise ValueError("mode 'minrank3' needs k = 3")
    colors = [-1] * g.n
    remaining = list(range(g.n))
    c = 0
    while remaining:
        sub, mapping = induced_subgraph(g, remaining)
        if mode == "basic":
            found = minrank_basic(sub, k, seed, tol, restarts, trials, t_grid_size)
        else:
            found = independent_set_minrank3(sub, seed, tol, restarts, trials, t_grid_size)
        if not found:
            raise AssertionError("empty independent set on a non-empty graph")
        for u in found:
            colors[mapping[u]] = c
        remaining = [v for v in remaining if colors[v] < 0]
        c += 1
    out = Coloring(tuple(colors))
    if not out.is_valid(g):
        raise AssertionError("color_graph produced an invalid coloring")
    return out
