import itertools
import math

import numpy as np
import pytest

from indexcoding.gf2 import BitMatrix, gf2_rank
from indexcoding.gk import automorphism_from_matrix, build_gk, kappa
from indexcoding.graph import Graph, complement, gen_bounded_minrank_instance, induced_subgraph, max_degree_vertex
from indexcoding.vector_coloring import (SdpAssignment, VectorColoring, assignment_residuals,
                                         check_vector_coloring, edge_products, is_valid_coloring,
                                         solve_vector_coloring, symmetrize_gram, tensor_combine)


def theta_oracle(g):
    """Strict optimum for a vertex- and edge-transitive graph: 1 - lambda_max / lambda_min."""
    vals = np.linalg.eigvalsh(g.adjacency_matrix(dtype=float))
    return 1 - vals[-1] / vals[0]


@pytest.mark.parametrize("n", range(3, 9))
@pytest.mark.parametrize("strict", [False, True])
def test_complete_graphs(n, strict):
    vc = solve_vector_coloring(Graph.complete(n), strict=strict)
    assert abs(vc.kappa - n) <= 1e-3
    assert is_valid_coloring(Graph.complete(n), vc, tol=1e-5)


@pytest.mark.parametrize("n", [5, 7, 9])
def test_odd_cycles_match_the_eigenvalue_oracle(n):
    g = Graph.cycle(n)
    vc = solve_vector_coloring(g, strict=True)
    assert abs(vc.kappa - theta_oracle(g)) <= 1e-4


def test_c5_value():
    assert abs(solve_vector_coloring(Graph.cycle(5), strict=True).kappa - math.sqrt(5)) <= 1e-4


def test_bipartite_and_edgeless():
    assert abs(solve_vector_coloring(Graph.cycle(6)).kappa - 2) <= 1e-4
    vc = solve_vector_coloring(Graph.empty(4))
    assert vc.kappa == 1.0 and vc.vectors.shape == (4, 1)


def test_g3_strict_value_and_restart_stability():
    g = build_gk(3).graph
    values = [solve_vector_coloring(g, strict=True, seed=s, restarts=1).kappa for s in range(3)]
    assert all(abs(v - kappa(3)) <= 1e-5 for v in values)
    assert max(values) - min(values) <= 1e-5


def test_check_reports_residuals():
    g = Graph.complete(3)
    ang = 2 * math.pi / 3
    v = np.array([[math.cos(a * ang), math.sin(a * ang)] for a in range(3)])
    res = check_vector_coloring(g, VectorColoring(v, 3.0, True))
    assert res["norm"] < 1e-12 and res["edge"] < 1e-12
    # claiming kappa 2.5 needs products <= -2/3, but they are -1/2
    res = check_vector_coloring(g, VectorColoring(v, 2.5, False))
    assert abs(res["edge"] - (1 / 6)) < 1e-12
    with pytest.raises(ValueError):
        check_vector_coloring(Graph.complete(4), VectorColoring(v, 3.0, True))


def test_json_round_trip():
    vc = solve_vector_coloring(Graph.cycle(5), strict=True)
    back = VectorColoring.from_json(vc.to_json(include_vectors=True))
    assert back.kappa == vc.kappa and np.allclose(back.vectors, vc.vectors)


def gl3_automorphisms(gk):
    perms = []
    for rows in itertools.product(range(1, 8), repeat=3):
        m = BitMatrix(rows, 3)
        if gf2_rank(m) == 3:
            perms.append(automorphism_from_matrix(m, gk, check=False))
    return perms


def test_symmetrizing_over_the_group_equalizes_edge_products():
    gk = build_gk(3)
    perms = gl3_automorphisms(gk)
    assert len(perms) == 168
    vc = solve_vector_coloring(gk.graph, strict=False, restarts=1)
    sym = symmetrize_gram(vc, perms, gk.graph)
    prods = edge_products(gk.graph, sym.vectors)
    assert np.ptp(prods) <= 1e-9
    assert prods.max() <= edge_products(gk.graph, vc.vectors).max() + 1e-9
    assert sym.strict


def test_symmetrize_rejects_non_automorphisms():
    g = Graph.path(3)
    vc = solve_vector_coloring(g)
    with pytest.raises(ValueError):
        symmetrize_gram(vc, [[1, 0, 2]], g)


@pytest.mark.parametrize("seed", range(20))
def test_bounded_minrank_instances_stay_below_kappa3(seed):
    g = gen_bounded_minrank_instance(30, 3, 0.8, seed=200 + seed)
    vc = solve_vector_coloring(g, restarts=2)
    assert vc.kappa <= kappa(3) + 0.05


@pytest.mark.parametrize("seed", range(4))
def test_neighborhoods_drop_by_one(seed):
    g = gen_bounded_minrank_instance(30, 3, 0.8, seed=300 + seed)
    vc = solve_vector_coloring(g, restarts=3)
    v = max_degree_vertex(g)
    sub, _ = induced_subgraph(g, g.adj[v])
    assert solve_vector_coloring(sub, restarts=3).kappa <= vc.kappa - 1 + 0.05


def test_integral_assignment_satisfies_the_relaxation():
    gk = build_gk(3)
    g = complement(gk.graph)
    a = SdpAssignment.from_homomorphism(list(range(gk.graph.n)), gk.graph.n)
    assert max(assignment_residuals(a, g, gk.graph).values()) == 0.0


def test_tensor_combine_on_a_generated_instance():
    gk = build_gk(3)
    h, labels = gen_bounded_minrank_instance(12, 3, 0.9, seed=1, return_labels=True)
    g = complement(h)  # labels map complement(g) = h into G_3
    u = solve_vector_coloring(gk.graph, strict=True, restarts=1)
    a = SdpAssignment.from_homomorphism(labels, gk.graph.n)
    w = tensor_combine(a, u, g, gk.graph)
    res = check_vector_coloring(h, VectorColoring(w, u.kappa, False))
    assert res["norm"] <= 1e-9 and res["edge"] <= 1e-6


def test_tensor_combine_rejects_infeasible_assignments():
    gk = build_gk(3)
    g = Graph.empty(2)  # both pairs are non-adjacent, so equal images are forbidden
    u = solve_vector_coloring(gk.graph, strict=True, restarts=1)
    a = SdpAssignment.from_homomorphism([0, 0], gk.graph.n)
    with pytest.raises(ValueError):
        tensor_combine(a, u, g, gk.graph)
