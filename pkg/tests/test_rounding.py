import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from indexcoding.gk import kappa
from indexcoding.graph import Graph, gen_bounded_minrank_instance, random_graph
from indexcoding.rounding import (RoundingParams, analysis_functions, augmented_kms, default_b_grid,
                                  default_t_grid, default_trials, find_best_c, greedy_independent_set,
                                  inverse_normal_tail, kms_prime, kms_threshold, normal_tail,
                                  shell_condition_margin, shell_condition_minimum)
from indexcoding.vector_coloring import solve_vector_coloring

SIGMA3 = 1 / (kappa(3) - 1)
# inverse tail of 100^(-1/3), frozen from scipy quad + brentq (see the oracle below)
T_100_HALF = 0.7876748195463684


def quad_tail(s):
    return quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), s, np.inf,
                epsabs=1e-14, epsrel=1e-13)[0]


def test_tail_at_zero_and_symmetry():
    assert normal_tail(0.0) == 0.5
    for s in (0.3, 1.1, 2.5):
        assert abs(normal_tail(s) + normal_tail(-s) - 1) < 1e-15


@pytest.mark.parametrize("s", [0.0, 0.5, 1.0, 1.959964, 3.0, 5.0, 8.0])
def test_tail_matches_quadrature(s):
    assert abs(normal_tail(s) - quad_tail(s)) <= 1e-12


def test_tail_sandwich():
    c = 1 / math.sqrt(2 * math.pi)
    for s in (0.5, 1, 2, 3, 4):
        e = math.exp(-s * s / 2)
        assert c * (1 / s - 1 / s**3) * e <= normal_tail(s) <= c / s * e


def test_inverse_round_trip():
    for s in np.linspace(0, 6, 61):
        assert abs(inverse_normal_tail(normal_tail(float(s))) - s) <= 1e-9


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_inverse_rejects_out_of_range(p):
    with pytest.raises(ValueError):
        inverse_normal_tail(p)


def test_threshold_matches_oracle():
    assert abs(kms_threshold(100, 0.5, 0.0) - T_100_HALF) <= 1e-9
    assert abs(normal_tail(kms_threshold(100, 0.5, 0.0)) - 100 ** (-1 / 3)) <= 1e-12


def test_threshold_boundaries():
    assert kms_threshold(1, 0.5, 0.0) == 0.0
    assert kms_threshold(10**6, 1 - 1e-12, 0.0) == 0.0
    with pytest.raises(ValueError):
        kms_threshold(0, 0.5)


def test_params_validation_and_defaults():
    with pytest.raises(ValueError):
        RoundingParams([], 3)
    with pytest.raises(ValueError):
        RoundingParams([-0.1], 3)
    assert RoundingParams([0.5, 0.1], 2).t_grid == [0.1, 0.5]
    assert default_trials(200) == math.ceil(8 * math.log(200))
    grid = default_t_grid(200, 40, SIGMA3, 0.0, 20)
    assert grid[0] == 0.0 and kms_threshold(40, SIGMA3) in grid and grid == sorted(grid)
    assert abs(normal_tail(grid[-1]) - 1 / 200) < 1e-9


def test_edgeless_graph_keeps_all_vertices_above_threshold_zero():
    g = Graph.empty(6)
    vecs = np.tile([1.0, 0.0], (6, 1))
    res = kms_prime(g, vecs, RoundingParams([0.0], 4, seed=1))
    assert g.is_independent(res.members) and res.size in (0, 6)
    assert augmented_kms(g).members == tuple(range(6))


def test_antipodal_edge_keeps_at_most_one_endpoint():
    g = Graph.complete(2)
    vecs = np.array([[1.0, 0.0], [-1.0, 0.0]])
    res = kms_prime(g, vecs, RoundingParams([1e-9, 0.5, 1.0], 50, seed=3))
    assert res.size == 1


def test_kms_prime_is_deterministic_and_independent():
    for seed in range(15):
        g = random_graph(18, 0.3, seed=seed)
        if g.num_edges == 0:
            continue
        vc = solve_vector_coloring(g, restarts=1, tol=1e-4)
        params = RoundingParams(default_t_grid(g.n, g.max_degree(), 0.3), 10, seed=seed)
        a = kms_prime(g, vc.vectors, params)
        assert g.is_independent(a.members)
        assert a == kms_prime(g, vc.vectors, params)


def test_elimination_follows_lexicographic_edge_order():
    # path 0-1-2-3 with all vertices alive: edge (0,1) goes first, then (2,3)
    g = Graph.path(4)
    res = kms_prime(g, np.ones((4, 1)), RoundingParams([0.0], 1))
    assert res.members == ()
    # path 0-1-2: (0,1) removed, 2 survives when the draw is non-negative
    g = Graph.path(3)
    for seed in range(5):
        res = kms_prime(g, np.ones((3, 1)), RoundingParams([0.0], 1, seed=seed))
        assert res.members in ((), (2,))


def test_greedy_baseline():
    assert greedy_independent_set(Graph.star(5)) == [1, 2, 3, 4, 5]
    assert sorted(greedy_independent_set(Graph.cycle(6))) == [0, 2, 4]
    g = random_graph(30, 0.2, seed=2)
    assert g.is_independent(greedy_independent_set(g))


def test_analysis_point_at_alpha_zero():
    s, c = 0.4, 0.05
    p = analysis_functions(s, c, 0.0)
    assert p.mu == pytest.approx(s**2)
    assert p.pi == pytest.approx(1 + s**2)
    assert p.rho == pytest.approx(1 + s - math.sqrt(c))
    assert p.s == pytest.approx((s + s**4) / (1 - s**4))


def test_analysis_point_at_the_upper_end():
    s, c = 0.4, 0.05
    a = c / (1 + c)
    p = analysis_functions(s, c, a)
    assert p.rho == pytest.approx(1 + s - s * a - math.sqrt((1 - a * a) * c))


def test_analysis_domain_errors():
    with pytest.raises(ValueError):
        analysis_functions(1.2, 0.1, 0.0)
    with pytest.raises(ValueError):
        analysis_functions(0.4, 0.1, 0.5)


def test_margin_at_c_zero_is_the_alpha_zero_value():
    s, d = SIGMA3, 0.7426
    p = analysis_functions(s, 0.0, 0.0)
    closed = (1 + s) ** 2 / (1 + s**2) + (1 - s) / (1 + s) - (1 - p.s) / (1 + p.s) - 1 / d
    assert shell_condition_margin(s, 0.0, d) == pytest.approx(closed, abs=1e-14)


def mp_objective(sigma, c, alpha):
    sigma, c, alpha = mpmath.mpf(sigma), mpmath.mpf(c), mpmath.mpf(alpha)
    mu = sigma**2 + (1 - sigma**2) * alpha
    pi = (1 - alpha) * (1 + sigma**2 + alpha * (1 - sigma**2))
    rho = 1 + sigma - sigma * alpha - mpmath.sqrt((1 - alpha**2) * c)
    s = (sigma + mu**2) / (1 - mu**2)
    phi = (1 - sigma) / ((1 + sigma) * (1 + c)) - (1 - s) / (1 + s)
    return rho**2 / (pi * (1 + c)) + phi


def test_minimum_agrees_with_a_high_precision_grid():
    mpmath.mp.dps = 40
    c = 0.03678
    top = c / (1 + c)
    grid_min = min(mp_objective(SIGMA3, c, top * i / 4000) for i in range(4001))
    _, value = shell_condition_minimum(SIGMA3, c)
    assert value <= float(grid_min) + 1e-12
    assert value >= float(grid_min) - 1e-8


def test_margin_sign_at_the_quoted_constants():
    # frozen: the margin is slightly negative at c = 0.03678, delta = 0.7426
    m = shell_condition_margin(SIGMA3, 0.03678, 0.7426)
    assert -1e-4 < m < 0


def test_best_c_and_monotone_margin():
    c = find_best_c(SIGMA3, 0.7426)
    assert abs(c - 0.03678) <= 1e-3
    assert shell_condition_margin(SIGMA3, c, 0.7426) >= 0
    assert shell_condition_margin(SIGMA3, c + 2e-6, 0.7426) < 0
    sweep = [shell_condition_margin(SIGMA3, x, 0.7426) for x in np.arange(0, 0.1 + 1e-12, 1e-3)]
    assert all(b <= a + 1e-12 for a, b in zip(sweep, sweep[1:]))


def test_best_c_none_when_even_zero_fails():
    assert find_best_c(SIGMA3, 0.5) is None


def test_b_grid_contains_the_band():
    grid = default_b_grid(SIGMA3, 0.03678, 0.05)
    assert round(SIGMA3**2, 12) in grid
    assert grid == sorted(grid) and -1 < grid[0] and grid[-1] < 1


def test_augmented_kms_includes_the_plain_run():
    from indexcoding.rounding import augmented_params

    for seed in range(3):
        g = gen_bounded_minrank_instance(60, 3, 0.7, seed=seed)
        vc = solve_vector_coloring(g, strict=True, tol=1e-4, restarts=1)
        _, _, params = augmented_params(g, vc.vectors, seed)
        plain = kms_prime(g, vc.vectors, params)
        aug = augmented_kms(g, seed=seed, vc=vc)
        assert g.is_independent(aug.members) and aug.size >= plain.size
