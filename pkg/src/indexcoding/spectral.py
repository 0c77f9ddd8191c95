"""Dense symmetric eigenvalues by cyclic Jacobi, and partition-quotient spectra."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph


class ConvergenceError(RuntimeError):
    pass


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint index pairs covering every pair exactly once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def jacobi_diagonalize(m, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Return the (unsorted) diagonal after cyclic Jacobi convergence.

    Each sweep visits all pairs in round-robin order; the ``n/2`` rotations of
    a round act on disjoint index pairs, so they are applied together.
    """
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix is not exactly symmetric")
    n = a.shape[0]
    if n <= 1:
        return np.diag(a).copy()
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n)
    rounds = _round_robin(n)
    for _ in range(max_sweeps):
        # direct norm: subtracting the diagonal mass cancels down to sqrt(eps) * scale
        off = np.linalg.norm(a[~np.eye(n, dtype=bool)])
        if off <= tol * scale:
            return np.diag(a).copy()
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            with np.errstate(over="ignore", divide="ignore"):  # huge theta means t -> 0
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            a[p, q] = 0.0
            a[q, p] = 0.0
    raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps")


def eigenvalues_sym(m, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix in ascending order."""
    return np.sort(jacobi_diagonalize(m, tol=tol, max_sweeps=max_sweeps))


def group_eigenvalues(values, resolution: float) -> list[tuple[float, int]]:
    """Collapse sorted eigenvalues closer than ``resolution`` into (mean, multiplicity)."""
    values = np.sort(np.asarray(values, dtype=float))
    groups: list[list[float]] = []
    for v in values:
        if groups and v - groups[-1][-1] <= resolution:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(float(np.mean(g)), len(g)) for g in groups]


def spectrum(g: Graph, tol: float = 1e-12) -> list[tuple[float, int]]:
    """Distinct adjacency eigenvalues of ``g`` with multiplicities."""
    a = g.adjacency_matrix(dtype=float)
    vals = eigenvalues_sym(a, tol=tol)
    return group_eigenvalues(vals, 10 * tol * max(1.0, np.linalg.norm(a)))


def _normalize_partition(partition, n: int) -> list[list[int]]:
    if len(partition) == n and all(isinstance(c, (int, np.integer)) for c in partition):
        labels = sorted(set(int(c) for c in partition))
        classes = [[v for v in range(n) if partition[v] == lab] for lab in labels]
    else:
        classes = [sorted(int(v) for v in c) for c in partition]
    flat = sorted(v for c in classes for v in c)
    if flat != list(range(n)):
        raise ValueError("partition does not cover the vertex set exactly once")
    if any(not c for c in classes):
        raise ValueError("partition has an empty class")
    return classes


def partition_quotient(g: Graph, partition) -> tuple[np.ndarray, np.ndarray, list[list[int]]]:
    """Quotient matrix of a vertex partition.

    Off-diagonal entry ``(a, b)`` is the number of edges between classes
    ``a`` and ``b`` divided by ``|a|``; the diagonal entry is twice the number of
    internal edges divided by ``|a|``. Also returns the symmetric similar
    matrix ``D^{1/2} B D^{-1/2}``.

    ``partition`` is either a per-vertex class label sequence or a list of
    vertex lists.
    """
    classes = _normalize_partition(partition, g.n)
    a = g.adjacency_matrix(dtype=np.int64)
    ind = np.zeros((len(classes), g.n), dtype=np.int64)
    for ci, c in enumerate(classes):
        ind[ci, c] = 1
    counts = ind @ a @ ind.T  # edges between classes; internal edges counted twice
    sizes = ind.sum(axis=1).astype(float)
    b = counts / sizes[:, None]
    sym = counts / np.sqrt(np.outer(sizes, sizes))
    sym = (sym + sym.T) / 2
    return b, sym, classes


@dataclass
class QuotientCheck:
    quotient: np.ndarray
    quotient_eigenvalues: list[float]
    graph_eigenvalues: list[float]
    contained: bool
    equal: bool


def quotient_spectrum_check(g: Graph, partition, tol: float = 1e-9) -> QuotientCheck:
    """Compare the quotient spectrum of ``partition`` with the spectrum of ``g``.

    ``contained`` says every quotient eigenvalue occurs in the spectrum of
    ``g``; ``equal`` says the two value sets coincide.
    """
    b, sym, _ = partition_quotient(g, partition)
    q_vals = [v for v, _ in group_eigenvalues(eigenvalues_sym(sym), tol)]
    g_vals = [v for v, _ in spectrum(g)]
    contained = all(min(abs(x - y) for y in g_vals) <= tol for x in q_vals) if g_vals else not q_vals
    covered = all(min(abs(x - y) for y in q_vals) <= tol for x in g_vals) if q_vals else not g_vals
    return QuotientCheck(b, q_vals, g_vals, contained, contained and covered)


def quotient_eigenvalues(b: np.ndarray, sizes: Sequence[float]) -> np.ndarray:
    """Eigenvalues of a quotient matrix given the class sizes it was built from."""
    d = np.sqrt(np.asarray(sizes, dtype=float))
    sym = b * d[:, None] / d[None, :]
    sym = (sym + sym.T) / 2
    return eigenvalues_sym(sym)
