"""Linear index codes over GF(2): construction, encoding, decoding and verification.

A code broadcasts ``E x`` (one bit per encoder row). Receiver ``i`` knows the
bits ``x_j`` for ``j`` in its side set and recovers
``x_i = <c_i, E x> + sum_j a_ij x_j``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix, BiRepresentation, GF2Error, dot, represents, row_basis, vec_from_bits, vec_to_str
from .graph import Graph, bits, complement

EXHAUSTIVE_MAX_N = 20


class CodeFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Decoder:
    coeffs: int  # c_i over the broadcast bits
    side: tuple[tuple[int, int], ...]  # (j, a_ij), ascending j

    @property
    def side_mask(self) -> int:
        """Bitset of side bits that enter with coefficient 1."""
        m = 0
        for j, a in self.side:
            if a:
                m |= 1 << j
        return m


@dataclass(frozen=True)
class LinearIndexCode:
    n: int
    encoder: BitMatrix  # length x n
    decoders: tuple[Decoder, ...]

    def __post_init__(self):
        if self.encoder.ncols != self.n or len(self.decoders) != self.n:
            raise GF2Error("encoder or decoder count does not match n")
        for d in self.decoders:
            if d.coeffs >> self.length:
                raise GF2Error("decoder coefficients wider than the code length")

    @property
    def length(self) -> int:
        return self.encoder.nrows

    def to_text(self) -> str:
        lines = [f"{self.n} {self.length}"]
        lines.extend(vec_to_str(r, self.n) for r in self.encoder.rows)
        for i, d in enumerate(self.decoders):
            side = ",".join(f"{j}:{a}" for j, a in d.side)
            lines.append(f"{i} : {vec_to_str(d.coeffs, self.length)} | {side}".rstrip())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearIndexCode":
        lines = [(k, ln.strip()) for k, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
        if not lines:
            raise CodeFormatError(0, "empty code file")
        k0, head = lines[0]
        try:
            n, length = (int(p) for p in head.split())
        except ValueError:
            raise CodeFormatError(k0, f"expected 'n l', got {head!r}") from None
        if len(lines) != 1 + length + n:
            raise CodeFormatError(0, f"expected {1 + length + n} non-empty lines, found {len(lines)}")
        rows = []
        for k, ln in lines[1:1 + length]:
            if len(ln) != n or set(ln) - {"0", "1"}:
                raise CodeFormatError(k, f"encoder row must be {n} bits")
            rows.append(vec_from_bits(ln))
        decoders = []
        for expect, (k, ln) in enumerate(lines[1 + length:]):
            try:
                left, side_txt = ln.split("|", 1) if "|" in ln else (ln, "")
                idx, coeff_txt = (p.strip() for p in left.split(":"))
                if int(idx) != expect:
                    raise CodeFormatError(k, f"receiver {idx} out of order (expected {expect})")
                if len(coeff_txt) != length or set(coeff_txt) - {"0", "1"}:
                    raise CodeFormatError(k, f"coefficients must be {length} bits")
                side = []
                for item in filter(None, (s.strip() for s in side_txt.split(","))):
                    j, a = item.split(":")
                    side.append((int(j), int(a)))
            except CodeFormatError:
                raise
            except ValueError:
                raise CodeFormatError(k, f"malformed receiver line {ln!r}") from None
            decoders.append(Decoder(vec_from_bits(coeff_txt) if length else 0, tuple(side)))
        return cls(n, BitMatrix(tuple(rows), n), tuple(decoders))


def code_from_coloring(g: Graph, colors) -> LinearIndexCode:
    """One XOR per color class of a proper coloring of ``complement(g)``.

    ``colors`` is a per-vertex color list (or an object with ``.colors``).
    """
    colors = list(getattr(colors, "colors", colors))
    if len(colors) != g.n:
        raise ValueError("coloring does not cover the graph")
    h = complement(g)
    for u, v in h.edges():
        if colors[u] == colors[v]:
            raise ValueError(f"not a coloring of the complement: {u} and {v} share color {colors[u]}")
    labels = sorted(set(colors))
    pos = {c: r for r, c in enumerate(labels)}
    rows = [0] * len(labels)
    for v, c in enumerate(colors):
        rows[pos[c]] |= 1 << v
    decoders = []
    for i, c in enumerate(colors):
        mates = tuple((j, 1) for j in bits(rows[pos[c]] & ~(1 << i)))
        decoders.append(Decoder(1 << pos[c], mates))
    return LinearIndexCode(g.n, BitMatrix(tuple(rows), g.n), tuple(decoders))


def code_from_matrix(a: BitMatrix, g: Graph) -> LinearIndexCode:
    """Broadcast a row basis of a representing matrix; length = rank."""
    if not represents(a, g):
        raise ValueError("matrix does not represent the graph")
    basis, coords = row_basis(a)
    encoder = BitMatrix(tuple(a.rows[i] for i in basis), g.n)
    decoders = []
    for i, row in enumerate(a.rows):
        side = tuple((j, 1) for j in bits(row & ~(1 << i)))
        decoders.append(Decoder(coords[i], side))
    return LinearIndexCode(g.n, encoder, tuple(decoders))


def code_from_bi_representation(b: BiRepresentation, g: Graph) -> LinearIndexCode:
    return code_from_matrix(b.matrix(), g)


def encode(code: LinearIndexCode, x: int) -> int:
    if x < 0 or x >> code.n:
        raise ValueError(f"message wider than n={code.n}")
    return code.encoder.mul_vec(x)


def decode_receiver(code: LinearIndexCode, i: int, broadcast: int, side_bits) -> int:
    """``side_bits`` is a mapping ``j -> bit`` covering the side set, or a bitset read at those positions."""
    if broadcast < 0 or broadcast >> code.length:
        raise ValueError(f"broadcast wider than the code length {code.length}")
    d = code.decoders[i]
    out = dot(d.coeffs, broadcast)
    for j, a in d.side:
        if isinstance(side_bits, int):
            bit = (side_bits >> j) & 1
        else:
            if j not in side_bits:
                raise ValueError(f"side information for receiver {i} lacks bit {j}")
            bit = int(side_bits[j]) & 1
        out ^= a & bit
    return out


@dataclass(frozen=True)
class Verdict:
    ok: bool
    words_checked: int
    counterexample: tuple[int, int] | None = None  # (word, receiver)
    reason: str = ""


def _structure_problem(g: Graph, code: LinearIndexCode) -> str:
    if code.n != g.n:
        return f"code is for n={code.n}, graph has n={g.n}"
    for i, d in enumerate(code.decoders):
        for j, _ in d.side:
            if not g.has_edge(i, j):
                return f"receiver {i} uses bit {j}, which is not side information"
    return ""


def _popcount_parity(a: np.ndarray) -> np.ndarray:
    return (np.bitwise_count(a) & 1).astype(np.uint8)


def verify_code(g: Graph, code: LinearIndexCode, mode: str = "exhaustive", trials: int = 10_000,
                seed: int = 0) -> Verdict:
    """Check every receiver decodes its own bit.

    Exhaustive mode runs all ``2^n`` words (n <= 20) and reports the lowest
    failing word (lowest receiver among its failures). Sampled mode draws
    uniform words.
    """
    problem = _structure_problem(g, code)
    if problem:
        return Verdict(False, 0, None, problem)
    if mode == "exhaustive":
        if g.n > EXHAUSTIVE_MAX_N:
            raise ValueError(f"exhaustive verification needs n <= {EXHAUSTIVE_MAX_N}")
        words = np.arange(1 << g.n, dtype=np.uint32)
        enc = [_popcount_parity(words & np.uint32(r)) for r in code.encoder.rows]
        first = None
        for i, d in enumerate(code.decoders):
            got = _popcount_parity(words & np.uint32(d.side_mask))
            for r in bits(d.coeffs):
                got ^= enc[r]
            bad = np.flatnonzero(got != ((words >> np.uint32(i)) & 1))
            if len(bad) and (first is None or bad[0] < first[0]):
                first = (int(bad[0]), i)
        if first:
            return Verdict(False, len(words), first, "decoding failure")
        return Verdict(True, len(words))
    if mode == "sampled":
        rng = random.Random(seed)
        for t in range(trials):
            x = rng.getrandbits(g.n) if g.n else 0
            y = encode(code, x)
            for i in range(g.n):
                if decode_receiver(code, i, y, x) != (x >> i) & 1:
                    return Verdict(False, t + 1, (x, i), "decoding failure")
        return Verdict(True, trials)
    raise ValueError(f"unknown mode {mode!r}")
