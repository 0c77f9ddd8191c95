"""Linear algebra over GF(2) with integer bitsets, and exact minrank search.

Vectors are Python ints: bit ``i`` holds coordinate ``i`` (so coordinate 1 of
the usual 1-based notation is bit 0). A matrix is a tuple of row bitsets plus
a column count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, bits, complement


class GF2Error(ValueError):
    pass


def parity(x: int) -> int:
    return x.bit_count() & 1


def dot(a: int, b: int) -> int:
    """Inner product over GF(2)."""
    return (a & b).bit_count() & 1


def vec_from_bits(s: Sequence[int] | str) -> int:
    """``"101"`` or ``[1, 0, 1]`` -> int with bit i = s[i]."""
    return sum(1 << i for i, b in enumerate(s) if int(b))


def vec_to_str(x: int, width: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(width))


def unit(i: int) -> int:
    """Standard basis vector with a one at (0-based) coordinate ``i``."""
    return 1 << i


@dataclass(frozen=True)
class BitMatrix:
    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise GF2Error("row has bits beyond the column count")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def identity(cls, k: int) -> "BitMatrix":
        return cls(tuple(1 << i for i in range(k)), k)

    @classmethod
    def zeros(cls, r: int, c: int) -> "BitMatrix":
        return cls((0,) * r, c)

    @classmethod
    def ones(cls, r: int, c: int) -> "BitMatrix":
        return cls(((1 << c) - 1,) * r, c)

    @classmethod
    def from_array(cls, a) -> "BitMatrix":
        a = np.asarray(a, dtype=np.int64) & 1
        if a.ndim != 2:
            raise GF2Error("expected a 2-d array")
        return cls(tuple(vec_from_bits(row) for row in a.tolist()), a.shape[1])

    @classmethod
    def from_columns(cls, cols: Sequence[int], nrows: int) -> "BitMatrix":
        rows = [0] * nrows
        for j, c in enumerate(cols):
            for i in bits(c):
                rows[i] |= 1 << j
        return cls(tuple(rows), len(cols))

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for j in bits(r):
                out[i, j] = 1
        return out

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        return sum(((r >> j) & 1) << i for i, r in enumerate(self.rows))

    def transpose(self) -> "BitMatrix":
        return BitMatrix(tuple(self.column(j) for j in range(self.ncols)), self.nrows)

    @property
    def T(self) -> "BitMatrix":
        return self.transpose()

    def mul_vec(self, x: int) -> int:
        """``A x`` for a column vector ``x``."""
        return sum(dot(r, x) << i for i, r in enumerate(self.rows))

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise GF2Error(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            for j in bits(r):
                acc ^= other.rows[j]
            out.append(acc)
        return BitMatrix(tuple(out), other.ncols)

    def rank(self) -> int:
        return gf2_rank(self)

    def inverse(self) -> "BitMatrix":
        n = self.nrows
        if n != self.ncols:
            raise GF2Error("inverse of a non-square matrix")
        # augmented rows: low n bits = A, high n bits = I
        work = [r | (1 << (n + i)) for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if (work[r] >> col) & 1), None)
            if piv is None:
                raise GF2Error("matrix is singular over GF(2)")
            work[col], work[piv] = work[piv], work[col]
            for r in range(n):
                if r != col and (work[r] >> col) & 1:
                    work[r] ^= work[col]
        return BitMatrix(tuple(w >> n for w in work), n)

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and gf2_rank(self) == self.nrows

    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        lines.extend(vec_to_str(r, self.ncols) for r in self.rows)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BitMatrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not lines:
            raise GF2Error("empty matrix text")
        try:
            r, c = (int(t) for t in lines[0].split())
        except ValueError:
            raise GF2Error(f"bad matrix header {lines[0]!r}") from None
        body = lines[1:]
        if len(body) != r:
            raise GF2Error(f"expected {r} rows, found {len(body)}")
        rows = []
        for ln in body:
            if len(ln) != c or set(ln) - {"0", "1"}:
                raise GF2Error(f"bad matrix row {ln!r}")
            rows.append(vec_from_bits(ln))
        return cls(tuple(rows), c)


def gf2_rank(m: BitMatrix | Sequence[int]) -> int:
    """Rank over GF(2) by elimination on row bitsets."""
    rows = list(m.rows if isinstance(m, BitMatrix) else m)
    rank = 0
    # pivot on the lowest set bit of each surviving row
    while rows:
        r = rows.pop()
        if not r:
            continue
        rank += 1
        low = r & -r
        rows = [x ^ r if x & low else x for x in rows]
    return rank


def row_basis(m: BitMatrix) -> tuple[list[int], list[int]]:
    """Lowest-index rows of ``m`` forming a basis of its row space.

    Returns ``(basis_indices, coords)`` where ``coords[i]`` is a bitset over
    positions in ``basis_indices`` whose XOR of basis rows equals row ``i``.
    """
    pivots: list[tuple[int, int, int]] = []  # (pivot bit, reduced row, combination over basis positions)
    basis: list[int] = []
    coords: list[int] = []
    for i, row in enumerate(m.rows):
        r, comb = row, 0
        for low, red, c in pivots:
            if r & low:
                r ^= red
                comb ^= c
        if r:
            pos = len(basis)
            basis.append(i)
            comb ^= 1 << pos
            low = r & -r
            # keep reduced rows in echelon form on their pivot bits
            pivots = [(pl, pr ^ r, pc ^ comb) if pr & low else (pl, pr, pc) for pl, pr, pc in pivots]
            pivots.append((low, r, comb))
            coords.append(1 << pos)
        else:
            coords.append(comb)
    return basis, coords


def represents(m: BitMatrix, g: Graph) -> bool:
    """Unit diagonal and zeros on every non-adjacent distinct pair."""
    if m.shape != (g.n, g.n):
        raise GF2Error(f"matrix shape {m.shape} does not match n={g.n}")
    for i, row in enumerate(m.rows):
        if not (row >> i) & 1:
            return False
        if row & ~(g.adj[i] | (1 << i)):
            return False
    return True


@dataclass(frozen=True)
class BiRepresentation:
    k: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for a1, a2 in self.pairs:
            if a1 >> self.k or a2 >> self.k:
                raise GF2Error("bi-representation vector wider than k")

    def matrix(self) -> BitMatrix:
        """``A[i][j] = <a_i^1, a_j^2>``; factors through GF(2)^k so rank <= k."""
        rows = []
        for a1, _ in self.pairs:
            rows.append(sum(dot(a1, b2) << j for j, (_, b2) in enumerate(self.pairs)))
        return BitMatrix(tuple(rows), len(self.pairs))


def check_bi_representation(b: BiRepresentation, g: Graph) -> bool:
    if len(b.pairs) != g.n:
        raise GF2Error("bi-representation does not cover every vertex")
    for v, (a1, a2) in enumerate(b.pairs):
        if dot(a1, a2) != 1:
            return False
    for u in range(g.n):
        u1, u2 = b.pairs[u]
        non_nbrs = ((1 << g.n) - 1) ^ g.adj[u] ^ (1 << u)
        for v in bits(non_nbrs >> (u + 1) << (u + 1)):
            v1, v2 = b.pairs[v]
            if dot(u1, v2) or dot(v1, u2):
                return False
    return True


def minrank_upper_from_matrix(m: BitMatrix, g: Graph) -> int:
    if not represents(m, g):
        raise GF2Error("matrix does not represent the graph")
    return gf2_rank(m)


@dataclass(frozen=True)
class MinrankResult:
    """Outcome of :func:`minrank_oracle`.

    ``status`` is ``"exact"`` (``value`` is the minrank and ``witness`` a
    bi-representation in dimension ``value``), ``"exceeds"`` (minrank is
    larger than ``k_max``) or ``"unknown"`` (node budget hit while testing
    dimension ``lower``; the minrank is at least ``lower``).
    """

    status: str
    value: int | None
    lower: int
    nodes: int
    witness: BiRepresentation | None = None

    def __int__(self) -> int:
        if self.value is None:
            raise GF2Error(f"minrank not determined ({self.status})")
        return self.value


class BudgetExhausted(Exception):
    pass


def _components(h: Graph) -> list[list[int]]:
    seen = 0
    comps = []
    for s in range(h.n):
        if (seen >> s) & 1:
            continue
        comp, frontier = 1 << s, 1 << s
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= h.adj[v]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(list(bits(comp)))
    return comps


def _search_order(h: Graph, comp: list[int]) -> list[int]:
    """Most-constrained-first: start at max degree, then most assigned neighbors."""
    deg = {v: h.degree(v) for v in comp}
    first = min(comp, key=lambda v: (-deg[v], v))
    order, placed = [first], 1 << first
    remaining = set(comp) - {first}
    while remaining:
        nxt = min(remaining, key=lambda v: (-(h.adj[v] & placed).bit_count(), -deg[v], v))
        order.append(nxt)
        placed |= 1 << nxt
        remaining.discard(nxt)
    return order


def find_homomorphism(h: Graph, target: Graph, budget: int, anchor: tuple[int, int] | None = None):
    """Backtracking search for a homomorphism ``h -> target``.

    ``anchor = (a, b)`` fixes the first vertex of every component to ``a`` and
    a neighboring second vertex to ``b``; valid when the target is vertex- and
    arc-transitive with ``a ~ b``. Returns ``(mapping or None, nodes)`` and
    raises :class:`BudgetExhausted` past ``budget`` nodes.
    """
    image = [0] * h.n
    nodes = 0
    all_targets = (1 << target.n) - 1
    tadj = target.adj
    for comp in _components(h):
        if len(comp) == 1:
            image[comp[0]] = anchor[0] if anchor else 0
            continue
        order = _search_order(h, comp)
        prev = [[] for _ in order]
        pos = {v: i for i, v in enumerate(order)}
        for i, v in enumerate(order):
            prev[i] = [u for u in bits(h.adj[v]) if pos[u] < i]

        def domain(i: int) -> int:
            d = all_targets
            for u in prev[i]:
                d &= tadj[image[u]]
            if anchor is not None:
                if i == 0:
                    d &= 1 << anchor[0]
                elif i == 1 and prev[1]:
                    d &= 1 << anchor[1]
            return d

        depth = 0
        stack = [domain(0)]
        while True:
            if nodes > budget:
                raise BudgetExhausted
            d = stack[depth]
            if not d:
                depth -= 1
                if depth < 0:
                    return None, nodes
                stack.pop()
                continue
            low = d & -d
            stack[depth] = d ^ low
            image[order[depth]] = low.bit_length() - 1
            nodes += 1
            if depth + 1 == len(order):
                break
            depth += 1
            stack.append(domain(depth))
    return image, nodes


def minrank_oracle(g: Graph, k_max: int = 5, budget: int = 10**8) -> MinrankResult:
    """Exact ``minrk2(g)`` when it is at most ``k_max``.

    Searches, for k = 1, 2, ..., for a homomorphism from ``complement(g)`` into
    ``G_k``; the first success yields an orthogonal bi-representation read off
    the ``G_k`` vertex labels.
    """
    from .gk import build_gk

    if g.n == 0:
        return MinrankResult("exact", 0, 0, 0, BiRepresentation(0, ()))
    h = complement(g)
    total = 0
    for k in range(1, k_max + 1):
        gk = build_gk(k)
        anchor = (gk.index[(1, 1)], gk.index[(2, 2)]) if k >= 2 else (0, 0)
        try:
            image, nodes = find_homomorphism(h, gk.graph, budget - total, anchor=anchor)
        except BudgetExhausted:
            return MinrankResult("unknown", None, k, budget)
        total += nodes
        if image is not None:
            witness = BiRepresentation(k, tuple(gk.labels[x] for x in image))
            return MinrankResult("exact", k, k, total, witness)
    return MinrankResult("exceeds", None, k_max + 1, total)
