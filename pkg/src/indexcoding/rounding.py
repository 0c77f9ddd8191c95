"""Threshold rounding of vector colorings into independent sets.

KMS' keeps the vertices whose projection on a random Gaussian direction is at
least ``t`` and then deletes both endpoints of every surviving edge.
Augmented-KMS also reruns KMS' on shells ``W_i(b)`` around each vertex with
the vectors projected away from ``w_i``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .graph import Graph, bits

SQRT2 = math.sqrt(2.0)
SAME_VECTOR = 1.0 - 1e-9  # products above this count as ``<w_i, w_j> = 1``


def normal_tail(s: float) -> float:
    """N(s) = P[Z >= s] for a standard normal Z."""
    return 0.5 * math.erfc(s / SQRT2)


@lru_cache(maxsize=4096)
def inverse_normal_tail(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError(f"tail probability {p} outside (0, 1)")
    return scipy.optimize.bisect(lambda s: normal_tail(s) - p, -40.0, 40.0, xtol=1e-12, rtol=1e-15)


def kms_threshold(delta_max_degree: float, sigma: float, c: float = 0.0) -> float:
    """Threshold with N(t) = Delta^{-(1-sigma)/((1+sigma)(1+c))}, or 0 once that tail reaches 1/2."""
    if delta_max_degree < 1:
        raise ValueError("maximum degree must be at least 1")
    tail = delta_max_degree ** (-(1.0 - sigma) / ((1.0 + sigma) * (1.0 + c)))
    if tail >= 0.5:
        return 0.0
    return inverse_normal_tail(tail)


@dataclass
class RoundingParams:
    t_grid: list[float]
    trials: int
    seed: int = 0
    b_grid: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.t_grid or any(t < 0 for t in self.t_grid):
            raise ValueError("t_grid must be a non-empty list of non-negative thresholds")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        self.t_grid = sorted(float(t) for t in self.t_grid)


def default_trials(n: int) -> int:
    return max(1, math.ceil(8 * math.log(max(n, 2))))


def default_t_grid(n: int, max_degree: int, sigma: float, c: float = 0.0, size: int = 20) -> list[float]:
    """The KMS threshold plus ``size`` thresholds whose tails are geometric in [1/n, 1/2]."""
    grid = {0.0}
    if max_degree >= 1 and 0 < sigma < 1:
        grid.add(kms_threshold(max_degree, sigma, c))
    if n > 2 and size > 0:
        for p in np.geomspace(1.0 / n, 0.5, size):
            grid.add(0.0 if p >= 0.5 else inverse_normal_tail(float(p)))
    return sorted(grid)


def default_params(g: Graph, sigma: float, c: float = 0.0, seed: int = 0,
                   trials: int | None = None, t_grid_size: int = 20) -> RoundingParams:
    return RoundingParams(default_t_grid(g.n, g.max_degree(), sigma, c, t_grid_size),
                          trials or default_trials(g.n), seed)


@dataclass(frozen=True)
class RoundingResult:
    members: tuple[int, ...]
    t: float
    trial: int
    mode: str
    vertex: int | None = None  # center i of the winning shell (Augmented-KMS)
    b: float | None = None

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        out = {"set": list(self.members), "size": self.size, "t": self.t, "trial": self.trial,
               "mode": self.mode}
        if self.vertex is not None:
            out.update(vertex=self.vertex, b=self.b)
        return out


def _eliminate(adj: np.ndarray, alive: np.ndarray) -> np.ndarray:
    """Delete both endpoints of surviving edges, edges taken in ascending (i, j) order.

    ``adj`` is a boolean adjacency matrix and ``alive`` an (n, runs) boolean
    matrix, one column per independent run. Scanning ``u`` upwards and
    pairing it with its lowest surviving higher neighbor reproduces the
    lexicographic edge order exactly.
    """
    alive = alive.copy()
    for u in range(adj.shape[0]):
        runs = np.flatnonzero(alive[u])
        if not len(runs):
            continue
        nbrs = u + 1 + np.flatnonzero(adj[u, u + 1:])
        if not len(nbrs):
            continue
        cand = alive[nbrs][:, runs]
        hit = cand.any(axis=0)
        if not hit.any():
            continue
        runs = runs[hit]
        v = nbrs[np.argmax(cand[:, hit], axis=0)]
        alive[u, runs] = False
        alive[v, runs] = False
    return alive


def _kms_core(adj: np.ndarray, vectors: np.ndarray, params: RoundingParams, stream=()):
    """(survivor indices, threshold index, trial) of the best run."""
    d = vectors.shape[1]
    runs = []
    for a, t in enumerate(params.t_grid):
        rng = np.random.default_rng([params.seed, *stream, a])
        zeta = rng.standard_normal((params.trials, d))
        runs.append(vectors @ zeta.T >= t)
    alive = _eliminate(adj, np.hstack(runs))
    best = int(np.argmax(alive.sum(axis=0)))  # first maximum: smaller t, then smaller trial
    a, r = divmod(best, params.trials)
    return np.flatnonzero(alive[:, best]), a, r


def kms_prime(g: Graph, vectors: np.ndarray, params: RoundingParams, stream=()) -> RoundingResult:
    """Best survivor set over all thresholds and trials.

    Trial ``r`` at the ``a``-th threshold uses the ``r``-th Gaussian row drawn
    from ``default_rng([seed, *stream, a])``. Ties go to the smaller threshold,
    then the smaller trial.
    """
    vectors = np.asarray(vectors, dtype=float)
    if vectors.shape[0] != g.n:
        raise ValueError("vector count does not match the graph")
    if g.n == 0:
        return RoundingResult((), params.t_grid[0], 0, "kms")
    found, a, r = _kms_core(g.adjacency_matrix(dtype=bool), vectors, params, stream)
    members = tuple(int(v) for v in found)
    if not g.is_independent(members):
        raise AssertionError("KMS' produced a dependent set")
    return RoundingResult(members, params.t_grid[a], r, "kms")


def greedy_independent_set(g: Graph) -> list[int]:
    """Min-degree greedy: take a vertex of least residual degree (lowest index on ties), drop its neighbors."""
    remaining = (1 << g.n) - 1
    chosen = []
    while remaining:
        best, best_deg = -1, None
        for v in bits(remaining):
            deg = (g.adj[v] & remaining).bit_count()
            if best_deg is None or deg < best_deg:
                best, best_deg = v, deg
                if deg == 0:
                    break
        chosen.append(best)
        remaining &= ~(g.adj[best] | (1 << best))
    return chosen


@dataclass(frozen=True)
class AnalysisPoint:
    sigma: float
    c: float
    alpha_corr: float
    mu: float
    pi: float
    rho: float
    s: float
    phi: float

    @property
    def objective(self) -> float:
        """rho^2 / (pi (1 + c)) + phi, the quantity minimized in the threshold condition."""
        return self.rho ** 2 / (self.pi * (1 + self.c)) + self.phi


def _check_domain(sigma, c, alpha):
    if not 0.0 < sigma < 1.0:
        raise ValueError(f"sigma={sigma} outside (0, 1)")
    if c < 0:
        raise ValueError("c must be non-negative")
    top = c / (1 + c)
    if np.any(np.asarray(alpha) < -1e-12) or np.any(np.asarray(alpha) > top + 1e-12):
        raise ValueError(f"alpha outside [0, {top}]")


def _analysis_arrays(sigma, c, alpha):
    alpha = np.asarray(alpha, dtype=float)
    mu = sigma ** 2 + (1 - sigma ** 2) * alpha
    pi = (1 - alpha) * (1 + sigma ** 2 + alpha * (1 - sigma ** 2))
    rho = 1 + sigma - sigma * alpha - np.sqrt(np.maximum(1 - alpha ** 2, 0.0) * c)
    s = (sigma + mu ** 2) / (1 - mu ** 2)
    phi = (1 - sigma) / ((1 + sigma) * (1 + c)) - (1 - s) / (1 + s)
    return mu, pi, rho, s, phi


def analysis_functions(sigma: float, c: float, alpha_corr: float) -> AnalysisPoint:
    _check_domain(sigma, c, alpha_corr)
    mu, pi, rho, s, phi = (float(x) for x in _analysis_arrays(sigma, c, alpha_corr))
    return AnalysisPoint(sigma, c, alpha_corr, mu, pi, rho, s, phi)


def _objective(sigma, c, alpha):
    mu, pi, rho, s, phi = _analysis_arrays(sigma, c, alpha)
    return rho ** 2 / (pi * (1 + c)) + phi


def shell_condition_minimum(sigma: float, c: float) -> tuple[float, float]:
    """(alpha, value) minimizing the objective over [0, c/(1+c)]: grid 1e-4, then bounded refinement to 1e-8."""
    _check_domain(sigma, c, 0.0)
    top = c / (1 + c)
    if top == 0.0:
        return 0.0, float(_objective(sigma, c, 0.0))
    grid = np.append(np.arange(0.0, top, 1e-4), top)
    vals = _objective(sigma, c, grid)
    k = int(np.argmin(vals))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    best_a, best_v = float(grid[k]), float(vals[k])
    if hi > lo:
        res = scipy.optimize.minimize_scalar(lambda a: float(_objective(sigma, c, a)), bounds=(lo, hi),
                                             method="bounded", options={"xatol": 1e-8})
        if res.fun < best_v:
            best_a, best_v = float(res.x), float(res.fun)
    return best_a, best_v


def shell_condition_margin(sigma: float, c: float, delta: float) -> float:
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    return shell_condition_minimum(sigma, c)[1] - 1.0 / delta


def find_best_c(sigma: float, delta: float, tol: float = 1e-6, c_max: float = 10.0) -> float | None:
    """Largest c >= 0 with non-negative margin (bisection); None when even c = 0 fails."""
    if shell_condition_margin(sigma, 0.0, delta) < 0:
        return None
    lo, hi = 0.0, 0.01
    while shell_condition_margin(sigma, hi, delta) >= 0:
        lo, hi = hi, 2 * hi
        if hi > c_max:
            return c_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if shell_condition_margin(sigma, mid, delta) >= 0:
            lo = mid
        else:
            hi = mid
    return lo


def default_b_grid(sigma: float, c: float, b_step: float = 0.05) -> list[float]:
    """Shell lower ends: the band mu_sigma([0, c/(1+c)]) plus a full-range sweep of (-1, 1)."""
    band = [sigma ** 2 + (1 - sigma ** 2) * a for a in np.linspace(0.0, c / (1 + c), 3)] if 0 < sigma < 1 else []
    sweep = np.arange(-1.0 + b_step, 1.0, b_step)
    return sorted(set(round(float(b), 12) for b in [*band, *sweep]))


def _sigma_of(g: Graph, vectors: np.ndarray) -> float:
    """-max edge product, clipped into (0, 1)."""
    e = g.edge_array()
    worst = float(np.max(np.einsum("ij,ij->i", vectors[e[:, 0]], vectors[e[:, 1]])))
    return min(max(-worst, 1e-6), 1 - 1e-6)


def augmented_params(g: Graph, vectors: np.ndarray, seed: int = 0, trials: int | None = None,
                     t_grid_size: int = 20) -> tuple[float, float, RoundingParams]:
    """(sigma, c, params) of the plain KMS' run inside :func:`augmented_kms`.

    ``c`` is the largest admissible value at ``delta = log Delta / log n``, or 0
    when there is none.
    """
    sigma = _sigma_of(g, vectors)
    delta = math.log(max(g.max_degree(), 2)) / math.log(max(g.n, 3))
    c = find_best_c(sigma, min(max(delta, 1e-3), 1 - 1e-3)) if delta < 1 else None
    c = 0.0 if c is None else c
    return sigma, c, default_params(g, sigma, c, seed, trials, t_grid_size)


def augmented_kms(
    g: Graph,
    tol: float = 1e-6,
    seed: int = 0,
    vc=None,
    trials: int | None = None,
    t_grid_size: int = 20,
    b_step: float = 0.05,
    restarts: int = 5,
) -> RoundingResult:
    """KMS' on ``g`` plus KMS' on every shell ``G[W_i(b)]`` with projected vectors.

    ``vc`` may carry a precomputed strict coloring; otherwise one is solved
    with ``tol``, ``seed`` and ``restarts``. Identical shells of the same
    center are rounded once.
    """
    from .vector_coloring import solve_vector_coloring

    if g.num_edges == 0:
        return RoundingResult(tuple(range(g.n)), 0.0, 0, "augmented")
    if vc is None:
        vc = solve_vector_coloring(g, strict=True, tol=tol, seed=seed, restarts=restarts)
    w = vc.vectors
    sigma, c, params = augmented_params(g, w, seed, trials, t_grid_size)
    plain = kms_prime(g, w, params)
    best = RoundingResult(plain.members, plain.t, plain.trial, "augmented")
    b_grid = default_b_grid(sigma, c, b_step)
    adj = g.adjacency_matrix(dtype=bool)
    gram = w @ w.T
    for i in range(g.n):
        prods = gram[i]
        seen = set()
        for bi, b in enumerate(b_grid):
            shell = np.flatnonzero((prods >= b) & (prods < SAME_VECTOR))
            key = len(shell)  # shells of one center are nested in b
            if key == 0 or key in seen or key <= best.size:
                continue
            seen.add(key)
            sub_adj = adj[np.ix_(shell, shell)]
            z = w[shell] - prods[shell, None] * w[i]
            z /= np.linalg.norm(z, axis=1)[:, None]
            sub_deg = int(sub_adj.sum(axis=1).max())
            sub_sigma = min(max(-float(np.max((z @ z.T)[sub_adj])), 1e-6), 1 - 1e-6) if sub_deg else 0.0
            sub_params = RoundingParams(default_t_grid(key, sub_deg, sub_sigma, c, t_grid_size),
                                        trials or default_trials(key), seed)
            found, a, r = _kms_core(sub_adj, z, sub_params, stream=(i + 1, bi))
            if len(found) > best.size:
                best = RoundingResult(tuple(int(v) for v in shell[found]), sub_params.t_grid[a], r,
                                      "augmented", i, b)
    if not g.is_independent(best.members):
        raise AssertionError("Augmented-KMS produced a dependent set")
    return best
