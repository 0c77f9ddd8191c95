"""Vector colorings: low-rank SDP solve, validation, symmetrization, tensor combiner.

A vector kappa-coloring assigns unit vectors with inner product at most
``-1/(kappa-1)`` across every edge; a strict one has equality on every edge.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize
import scipy.sparse

from .graph import Graph

log = logging.getLogger(__name__)


class VectorColoringError(RuntimeError):
    pass


@dataclass
class VectorColoring:
    vectors: np.ndarray
    kappa: float
    strict: bool
    residuals: dict = field(default_factory=dict)

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @property
    def sigma(self) -> float:
        """Magnitude of the target edge inner product, 1/(kappa-1)."""
        return 1.0 / (self.kappa - 1.0) if self.kappa > 1 else float("inf")

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T

    def to_json(self, include_vectors: bool = False) -> str:
        out = {"kappa": self.kappa, "d": self.d, "strict": self.strict, "residuals": self.residuals}
        if include_vectors:
            out["vectors"] = self.vectors.tolist()
        return json.dumps(out)

    @classmethod
    def from_json(cls, text: str) -> "VectorColoring":
        data = json.loads(text)
        vecs = np.array(data.get("vectors", []), dtype=float)
        return cls(vecs, float(data["kappa"]), bool(data["strict"]), data.get("residuals", {}))


def edge_products(g: Graph, vectors: np.ndarray) -> np.ndarray:
    e = g.edge_array()
    return np.einsum("ij,ij->i", vectors[e[:, 0]], vectors[e[:, 1]])


def check_vector_coloring(g: Graph, vc: VectorColoring) -> dict:
    """Residuals of ``vc`` against ``g``.

    ``norm``: worst deviation of a vector norm from 1. ``edge``: worst edge
    violation (amount above ``-1/(kappa-1)``, or absolute deviation when strict).
    """
    if vc.vectors.shape[0] != g.n:
        raise ValueError("vector count does not match the graph")
    norms = np.linalg.norm(vc.vectors, axis=1)
    norm_dev = float(np.max(np.abs(norms - 1.0))) if g.n else 0.0
    if g.num_edges == 0:
        return {"norm": norm_dev, "edge": 0.0, "valid": norm_dev <= 1e-6}
    target = -1.0 / (vc.kappa - 1.0) if vc.kappa > 1 else -np.inf
    prods = edge_products(g, vc.vectors)
    if vc.strict:
        edge = float(np.max(np.abs(prods - target)))
    else:
        edge = float(max(0.0, np.max(prods - target)))
    return {"norm": norm_dev, "edge": edge, "max_product": float(np.max(prods)),
            "min_product": float(np.min(prods))}


def is_valid_coloring(g: Graph, vc: VectorColoring, tol: float = 1e-6) -> bool:
    r = check_vector_coloring(g, vc)
    return r["norm"] <= tol and r["edge"] <= tol


DENSE_LIMIT = 3000


class _Problem:
    """Augmented Lagrangian of min t s.t. <v_i, v_j> (=|<=) t on edges, ||v_i|| = 1.

    Unit norms are enforced by the parametrization v_i = y_i / ||y_i||.
    Multipliers live on edges; graphs up to ``DENSE_LIMIT`` vertices evaluate
    through the dense Gram matrix, larger ones through sparse incidence.
    """

    def __init__(self, n: int, edges: np.ndarray, d: int, strict: bool, rho: float = 1.0):
        self.n, self.d, self.strict = n, d, strict
        self.i, self.j = edges[:, 0], edges[:, 1]
        m = len(edges)
        self.lam = np.full(m, 1.0 / m)
        self.rho = rho
        self.dense = n <= DENSE_LIMIT
        if self.dense:
            self.mask = np.zeros((n, n))
            self.mask[self.i, self.j] = self.mask[self.j, self.i] = 1.0
        else:
            rows = np.arange(m)
            self.inc_i = scipy.sparse.csr_matrix((np.ones(m), (self.i, rows)), shape=(n, m))
            self.inc_j = scipy.sparse.csr_matrix((np.ones(m), (self.j, rows)), shape=(n, m))
        self.set_lam(self.lam)

    def set_lam(self, lam: np.ndarray):
        self.lam = lam
        if self.dense:
            self.lam_mat = np.zeros((self.n, self.n))
            self.lam_mat[self.i, self.j] = self.lam_mat[self.j, self.i] = lam

    def products(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("ij,ij->i", v[self.i], v[self.j])

    def _weights(self, lam, h):
        w = lam + self.rho * h
        return w if self.strict else np.maximum(w, 0.0)

    def fun(self, x: np.ndarray):
        y = x[:-1].reshape(self.n, self.d)
        t = x[-1]
        r = np.maximum(np.linalg.norm(y, axis=1), 1e-12)
        v = y / r[:, None]
        if self.dense:
            # every edge appears twice in the symmetric matrices
            h = (v @ v.T - t) * self.mask
            w = self._weights(self.lam_mat, h)
            if self.strict:
                val = t + 0.5 * np.sum(self.lam_mat * h) + 0.25 * self.rho * np.sum(h * h)
            else:
                val = t + (np.sum(w * w) - np.sum(self.lam_mat ** 2)) / (4 * self.rho)
            g = w @ v
            wsum = 0.5 * w.sum()
        else:
            h = self.products(v) - t
            w = self._weights(self.lam, h)
            if self.strict:
                val = t + self.lam @ h + 0.5 * self.rho * h @ h
            else:
                val = t + (w @ w - self.lam @ self.lam) / (2 * self.rho)
            g = self.inc_i @ (w[:, None] * v[self.j]) + self.inc_j @ (w[:, None] * v[self.i])
            wsum = w.sum()
        g -= np.sum(g * v, axis=1)[:, None] * v
        g /= r[:, None]
        grad = np.empty_like(x)
        grad[:-1] = g.ravel()
        grad[-1] = 1.0 - wsum
        return val, grad

    def violation(self, h: np.ndarray) -> float:
        if self.strict:
            return float(np.max(np.abs(h)))
        # standard ALM residual: infeasibility and complementarity together
        return float(np.max(np.abs(np.maximum(h, -self.lam / self.rho))))


def _solve_once(n, edges, d, strict, rng, tol, max_outer=60):
    prob = _Problem(n, edges, d, strict)
    y = rng.standard_normal((n, d))
    y /= np.linalg.norm(y, axis=1)[:, None]
    p = prob.products(y)
    t = float(np.max(p)) if not strict else float(np.mean(p))
    x = np.concatenate([y.ravel(), [t]])
    prev_viol, prev_t, viol = np.inf, np.inf, 1.0
    for outer in range(max_outer):
        # inner accuracy follows the current infeasibility
        gtol = max(1e-2 * tol, min(1e-4, 1e-2 * viol))
        res = scipy.optimize.minimize(prob.fun, x, jac=True, method="L-BFGS-B",
                                      options={"maxiter": 20000, "gtol": gtol, "ftol": 0.0})
        x = res.x
        y = x[:-1].reshape(n, d)
        y /= np.linalg.norm(y, axis=1)[:, None]
        x[:-1] = y.ravel()
        t = x[-1]
        h = prob.products(y) - t
        viol = prob.violation(h)
        lam = prob.lam + prob.rho * h
        prob.set_lam(lam if strict else np.maximum(lam, 0.0))
        if viol < tol and abs(t - prev_t) < tol:
            break
        if viol > 0.25 * prev_viol:
            prob.rho = min(prob.rho * 5.0, 1e7)
        prev_viol, prev_t = viol, t
    else:
        log.debug("augmented Lagrangian hit max_outer=%d (violation %.2e)", max_outer, viol)
    return y, outer + 1


def solve_vector_coloring(
    g: Graph,
    strict: bool = False,
    tol: float = 1e-6,
    seed: int = 0,
    rank: int | None = None,
    restarts: int = 5,
) -> VectorColoring:
    """Low-rank solve of the (strict) vector chromatic number SDP.

    Minimizes the largest (strict: the common) edge inner product ``m*`` over
    unit vectors in dimension ``rank`` (default ``min(n, 30)``) and reports
    ``kappa = 1 + 1/(-m*)``. Each restart draws a fresh random start; the
    lowest kappa wins, ties going to the lower restart index.
    """
    n = g.n
    if n == 0 or g.num_edges == 0:
        vecs = np.zeros((n, 1))
        vecs[:, 0] = 1.0
        return VectorColoring(vecs, 1.0, strict, {"norm": 0.0, "edge": 0.0})
    d = rank or min(n, 30)
    edges = g.edge_array()
    best = None
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        y, iters = _solve_once(n, edges, d, strict, rng, tol)
        prods = np.einsum("ij,ij->i", y[edges[:, 0]], y[edges[:, 1]])
        m_star = float(np.mean(prods)) if strict else float(np.max(prods))
        if m_star >= 0:
            continue
        kap = 1.0 - 1.0 / m_star
        if best is None or kap < best[0] - 1e-12:
            best = (kap, y, r, iters)
    if best is None:
        raise VectorColoringError("edge inner products not negative: kappa unbounded below 2")
    kap, y, r, iters = best
    vc = VectorColoring(y, kap, strict)
    vc.residuals = check_vector_coloring(g, vc)
    vc.residuals.update(restart=r, outer_iterations=iters)
    return vc


def symmetrize_gram(vc: VectorColoring, automorphisms, g: Graph) -> VectorColoring:
    """Average the Gram matrix over the given automorphisms and refactor it.

    The average ``(1/|F|) sum_f P_f^T M P_f`` keeps unit diagonal and cannot
    raise the worst edge product, so the kappa bound carries over. When the
    permutations act transitively on edges, every edge product becomes equal.
    """
    from .gk import is_automorphism

    perms = [np.asarray(p, dtype=np.intp) for p in automorphisms]
    if not perms:
        raise ValueError("need at least one permutation")
    for p in perms:
        if not is_automorphism(g, p.tolist()):
            raise ValueError("permutation is not an automorphism of the graph")
    gram = vc.gram()
    avg = np.zeros_like(gram)
    for p in perms:
        avg += gram[np.ix_(p, p)]
    avg /= len(perms)
    avg = (avg + avg.T) / 2
    w, u = np.linalg.eigh(avg)
    keep = w > 1e-12 * max(1.0, w.max())
    vecs = u[:, keep] * np.sqrt(w[keep])
    vecs /= np.linalg.norm(vecs, axis=1)[:, None]
    prods = edge_products(g, vecs) if g.num_edges else np.zeros(0)
    spread = float(np.ptp(prods)) if len(prods) else 0.0
    out = VectorColoring(vecs, vc.kappa, vc.strict or spread <= 1e-9)
    out.residuals = check_vector_coloring(g, out)
    out.residuals["edge_spread"] = spread
    return out


@dataclass
class SdpAssignment:
    """Vectors ``v[x, i]`` for graph vertex ``x`` and ``G_k`` vertex ``i``; shape (n, N, D)."""

    vectors: np.ndarray

    @classmethod
    def from_homomorphism(cls, hom, gk_n: int) -> "SdpAssignment":
        """Integral solution: ``v[x, h(x)] = e_1`` and zero elsewhere."""
        v = np.zeros((len(hom), gk_n, 1))
        for x, i in enumerate(hom):
            v[x, i, 0] = 1.0
        return cls(v)


def assignment_residuals(a: SdpAssignment, g: Graph, gk: Graph) -> dict:
    """Worst violation of each constraint family of the minrank relaxation.

    ``own``: <v_{x,i}, v_{x,j}> = 0 for i != j. ``cross``: <v_{x,i}, v_{y,j}> = 0
    for distinct non-adjacent x, y whenever i = j or i, j are non-adjacent in
    G_k. ``mass``: sum_{i,j} <v_{x,i}, v_{y,j}> = 1 for all x, y.
    """
    v = a.vectors
    n, big_n, _ = v.shape
    ka = gk.adjacency_matrix(dtype=bool)
    allowed = ka  # pairs (i, j) exempt from the cross constraint
    own = 0.0
    for x in range(n):
        gram = v[x] @ v[x].T
        np.fill_diagonal(gram, 0.0)
        own = max(own, float(np.max(np.abs(gram))))
    cross = 0.0
    for x in range(n):
        for y in range(x + 1, n):
            if g.has_edge(x, y):
                continue
            block = v[x] @ v[y].T
            cross = max(cross, float(np.max(np.abs(block[~allowed]))))
    s = v.sum(axis=1)
    mass = float(np.max(np.abs(s @ s.T - 1.0)))
    return {"own": own, "cross": cross, "mass": mass}


def tensor_combine(a: SdpAssignment, u: VectorColoring, g: Graph, gk: Graph, tol: float = 1e-6) -> np.ndarray:
    """``w_x = sum_i v_{x,i} (x) u_i``: a vector coloring of ``complement(g)``.

    ``u`` must be a strict vector coloring of ``G_k``; the result lives in
    dimension ``D * u.d`` and should be checked against ``complement(g)`` with
    ``kappa = u.kappa``.
    """
    if a.vectors.shape[:2] != (g.n, gk.n):
        raise ValueError("assignment shape does not match the graphs")
    res = assignment_residuals(a, g, gk)
    if max(res.values()) > tol:
        raise ValueError(f"assignment violates the relaxation constraints: {res}")
    if u.vectors.shape[0] != gk.n:
        raise ValueError("coloring does not cover G_k")
    w = np.einsum("xiD,id->xDd", a.vectors, u.vectors)
    return w.reshape(g.n, -1)
