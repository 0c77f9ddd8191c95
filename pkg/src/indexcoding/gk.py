"""The graphs G_k: vertex pairs (v1, v2) in GF(2)^k x GF(2)^k with <v1, v2> = 1.

Two vertices (u1, u2), (v1, v2) are adjacent iff <u1, v2> = <v1, u2> = 0.
Vertices are numbered in lexicographic order of (v1, v2) read as integers,
with bit 0 holding the first coordinate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gf2 import BitMatrix, GF2Error, dot, gf2_rank
from .graph import Graph, bits
from .spectral import eigenvalues_sym, partition_quotient, quotient_eigenvalues

MAX_MATERIALIZED_K = 8
MAX_QUOTIENT_K = 30

E1 = 1  # first coordinate
E2 = 2  # second coordinate


@dataclass(frozen=True)
class LabeledGkGraph:
    k: int
    graph: Graph
    labels: tuple[tuple[int, int], ...]
    index: dict
    orbit_class: tuple[int, ...] | None

    @property
    def v0(self) -> int:
        """Id of (e1, e1)."""
        return self.index[(E1, E1)]

    def classes(self) -> list[list[int]]:
        if self.orbit_class is None:
            raise ValueError("orbit classes are defined for k >= 3")
        return [[v for v, c in enumerate(self.orbit_class) if c == i] for i in range(1, 6)]


def orbit_class_of(v1: int, v2: int) -> int:
    """Class 1..5 of a vertex in the partition around (e1, e1)."""
    f1, f2 = v1 & 1, v2 & 1
    if v1 == E1 and v2 == E1:
        return 1
    if not f1 and not f2:
        return 2
    if f1 != f2:
        return 3
    if E1 in (v1, v2):
        return 4
    return 5


def _parity_table(k: int) -> np.ndarray:
    size = 1 << k
    x = np.arange(size)
    anded = x[:, None] & x[None, :]
    par = np.zeros_like(anded)
    while anded.any():
        par ^= anded & 1
        anded >>= 1
    return par.astype(bool)


@lru_cache(maxsize=None)
def build_gk(k: int) -> LabeledGkGraph:
    if not 1 <= k <= MAX_MATERIALIZED_K:
        raise ValueError(f"k={k} outside [1, {MAX_MATERIALIZED_K}]")
    labels = tuple((a, b) for a in range(1, 1 << k) for b in range(1, 1 << k) if dot(a, b) == 1)
    n = len(labels)
    par = _parity_table(k)
    v1 = np.array([a for a, _ in labels])
    v2 = np.array([b for _, b in labels])
    rows = []
    chunk = max(1, 4_000_000 // n)
    for start in range(0, n, chunk):
        sl = slice(start, min(n, start + chunk))
        adj = ~par[v1[sl, None], v2[None, :]] & ~par[v1[None, :], v2[sl, None]]
        packed = np.packbits(adj, axis=1, bitorder="little")
        rows.extend(int.from_bytes(r.tobytes(), "little") for r in packed)
    graph = Graph.trusted(n, rows)
    orbit = tuple(orbit_class_of(a, b) for a, b in labels) if k >= 3 else None
    return LabeledGkGraph(k, graph, labels, {lab: i for i, lab in enumerate(labels)}, orbit)


def vertex_count(k: int) -> int:
    return ((1 << k) - 1) << (k - 1)


def degree(k: int) -> int:
    """Degree of G_k; for k = 1 the graph is a single isolated vertex."""
    if k == 1:
        return 0
    return ((1 << (k - 1)) - 1) << (k - 2)


def class_sizes(k: int) -> list[int]:
    a = (1 << (k - 1)) - 1
    return [1, (1 << (k - 2)) * a, (1 << (k - 1)) * a, 2 * a, ((1 << (k - 2)) - 1) * a]


def canonical_independent_set(k: int) -> list[int]:
    """Ids of (e_i, e_i), i = 1..k: pairwise adjacent in G_k, independent in its complement."""
    gk = build_gk(k)
    ids = [gk.index[(1 << i, 1 << i)] for i in range(k)]
    for a in ids:
        for b in ids:
            if a != b and not gk.graph.has_edge(a, b):
                raise AssertionError("(e_i, e_i) vertices are not pairwise adjacent")
    return ids


def is_automorphism(g: Graph, perm) -> bool:
    n = g.n
    if sorted(perm) != list(range(n)):
        return False
    for u in range(n):
        image = 0
        for v in bits(g.adj[u]):
            image |= 1 << perm[v]
        if image != g.adj[perm[u]]:
            return False
    return True


def automorphism_from_matrix(a: BitMatrix, gk: LabeledGkGraph, check: bool = True) -> list[int]:
    """Permutation induced by (x, y) -> (A x, A^{-T} y)."""
    if a.shape != (gk.k, gk.k):
        raise GF2Error(f"expected a {gk.k}x{gk.k} matrix")
    inv_t = a.inverse().transpose()  # raises on singular input
    perm = [gk.index[(a.mul_vec(x), inv_t.mul_vec(y))] for x, y in gk.labels]
    if check and not is_automorphism(gk.graph, perm):
        raise AssertionError("induced map is not an automorphism")
    return perm


def swap_matrix(k: int, i: int, j: int) -> BitMatrix:
    """Permutation matrix exchanging (0-based) coordinates ``i`` and ``j``."""
    rows = [1 << r for r in range(k)]
    rows[i], rows[j] = rows[j], rows[i]
    return BitMatrix(tuple(rows), k)


def lift_matrix(v1: int, v2: int, k: int) -> BitMatrix:
    """Invertible A with A e1 = v1 and A^T v2 = e1 (needs both first bits set).

    First column ``v1``, first row ``v2``, identity on the remaining block; the
    induced automorphism sends (e1, e1) to (v1, v2).
    """
    if not (v1 & 1 and v2 & 1):
        raise ValueError("both vectors need a one in the first coordinate")
    rows = [v2]
    for r in range(1, k):
        rows.append(((v1 >> r) & 1) | (1 << r))
    return BitMatrix(tuple(rows), k)


def vertex_map_matrix(v1: int, v2: int, k: int) -> BitMatrix:
    """Matrix whose automorphism sends (e1, e1) to the vertex (v1, v2)."""
    common = v1 & v2
    if not common:
        raise ValueError("(v1, v2) is not a vertex of G_k")
    i = (common & -common).bit_length() - 1
    swap = swap_matrix(k, 0, i)
    w1, w2 = swap.mul_vec(v1), swap.mul_vec(v2)
    # swap is its own inverse and inverse-transpose
    return swap @ lift_matrix(w1, w2, k)


def edge_map_matrix(u: tuple[int, int], v: tuple[int, int], k: int) -> BitMatrix:
    """Matrix whose automorphism sends ``u`` to (e1, e1) and ``v`` to (e2, e2).

    Composition follows the edge-transitivity argument: move ``v`` onto
    (e2, e2), swap a coordinate shared by the image of ``u`` into first
    position, then undo a lift that fixes (e2, e2).
    """
    if k < 2:
        raise ValueError("G_1 has no edges")
    to_v = vertex_map_matrix(*v, k)
    f1 = swap_matrix(k, 0, 1) @ to_v.inverse()  # sends v to (e2, e2)
    f1_inv_t = f1.inverse().transpose()
    w1, w2 = f1.mul_vec(u[0]), f1_inv_t.mul_vec(u[1])
    common = w1 & w2 & ~E2
    if not common:
        raise ValueError("u and v are not adjacent")
    i = (common & -common).bit_length() - 1
    f2 = swap_matrix(k, 0, i)
    x1, x2 = f2.mul_vec(w1), f2.mul_vec(w2)
    f3 = lift_matrix(x1, x2, k)
    return f3.inverse() @ f2 @ f1


def random_invertible(k: int, rng: random.Random) -> BitMatrix:
    while True:
        m = BitMatrix(tuple(rng.getrandbits(k) for _ in range(k)), k)
        if gf2_rank(m) == k:
            return m


def embed_fixing_first(b: BitMatrix) -> BitMatrix:
    """``diag(1, B)``: fixes the first coordinate of both vectors, hence (e1, e1)."""
    return BitMatrix((1,) + tuple(r << 1 for r in b.rows), b.ncols + 1)


def random_stabilizer_matrix(k: int, rng: random.Random) -> BitMatrix:
    return embed_fixing_first(random_invertible(k - 1, rng))


def class5_map_matrix(v1: int, v2: int, k: int) -> BitMatrix:
    """Stabilizer element sending ((1, e1'), (1, e2')) to a class-5 vertex (v1, v2).

    Primes denote the last k-1 coordinates.
    """
    if orbit_class_of(v1, v2) != 5:
        raise ValueError("vertex is not in class 5")
    p1, p2 = v1 >> 1, v2 >> 1
    m = k - 1
    low = p2 & -p2
    pivot = low.bit_length() - 1
    # basis of the orthogonal complement of p2 in GF(2)^{k-1}
    perp = [(1 << j) | (low if (p2 >> j) & 1 else 0) for j in range(m) if j != pivot]
    cols = [p1]
    for w in perp:
        if len(cols) == m - 1:
            break
        if gf2_rank(cols + [w]) == len(cols) + 1:
            cols.append(w)
    cols.insert(1, low)  # <low, p2> = 1
    b = BitMatrix.from_columns(cols, m)
    return embed_fixing_first(b)


def class5_reference(k: int) -> tuple[int, int]:
    """((1, e1'), (1, e2')) in full coordinates."""
    return (E1 | E2, E1 | (1 << 2))


def quotient_matrix(k: int) -> np.ndarray:
    """Quotient of G_k over its five classes, computed from the built graph."""
    if k < 3:
        raise ValueError("the five-class partition needs k >= 3")
    gk = build_gk(k)
    b, _, _ = partition_quotient(gk.graph, gk.classes())
    return b


def quotient_matrix_closed_form(k: int) -> np.ndarray:
    if not 3 <= k <= MAX_QUOTIENT_K:
        raise ValueError(f"k={k} outside [3, {MAX_QUOTIENT_K}]")
    p = lambda e: 2.0 ** e  # noqa: E731
    a = p(k - 2) - 1
    return np.array(
        [
            [0, p(k - 2) * (p(k - 1) - 1), 0, 0, 0],
            [1, p(k - 3) * a, p(k - 2) * a, 2 * a, a * (p(k - 3) - 1)],
            [0, p(k - 3) * a, p(k - 2) * a, p(k - 2), p(k - 3) * a],
            [0, p(k - 2) * a, p(2 * k - 4), 0, 0],
            [0, p(k - 2) * (p(k - 3) - 1), p(2 * k - 4), 0, p(2 * k - 5)],
        ]
    )


def quotient_spectrum(k: int) -> np.ndarray:
    """Ascending eigenvalues of the closed-form quotient (distinct values of the G_k spectrum)."""
    return quotient_eigenvalues(quotient_matrix_closed_form(k), class_sizes(k))


def eigenvalues_closed_form(k: int) -> list[float]:
    return sorted(
        [
            2.0 ** (k - 2) * (2.0 ** (k - 1) - 1),
            2.0 ** (1.5 * k - 3),
            2.0 ** (k - 3),
            -(2.0 ** (k - 2)),
            -(2.0 ** (1.5 * k - 3)),
        ]
    )


def kappa(k: int) -> float:
    """Strict vector chromatic number of G_k: 2^{k/2} + 1 - 2^{1-k/2}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2.0 ** (k / 2) + 1.0 - 2.0 ** (1 - k / 2)


def theta_gk_complement(k: int) -> float:
    """Lovasz theta of complement(G_k) as 1 - lambda_max / lambda_min of the quotient spectrum."""
    vals = quotient_spectrum(k)
    return float(1.0 - vals[-1] / vals[0])


def sigma(k: int) -> float:
    """Edge inner-product magnitude 1 / (kappa_k - 1) of the optimal strict coloring."""
    return 1.0 / (kappa(k) - 1.0)


def greedy_coloring_bound(k: int) -> int:
    from .coloring import greedy_coloring

    return greedy_coloring(build_gk(k).graph).count

