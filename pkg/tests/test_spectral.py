import math

import numpy as np
import pytest

from indexcoding.gk import build_gk
from indexcoding.graph import Graph, random_graph
from indexcoding.spectral import (eigenvalues_sym, group_eigenvalues, partition_quotient, quotient_spectrum_check,
                                  spectrum)


def test_jacobi_matches_numpy_on_random_symmetric_matrices():
    rng = np.random.default_rng(0)
    for n in list(range(1, 30)) + [40, 57]:
        a = rng.normal(size=(n, n))
        a = a + a.T
        assert np.allclose(eigenvalues_sym(a), np.linalg.eigvalsh(a), atol=1e-10)


def test_trace_is_preserved():
    g = random_graph(30, 0.3, seed=1)
    vals = eigenvalues_sym(g.adjacency_matrix(dtype=float))
    assert abs(vals.sum()) < 1e-10
    assert abs((vals**2).sum() - 2 * g.num_edges) < 1e-8


def test_cycle_spectrum():
    spec = spectrum(Graph.cycle(4))
    assert [(round(v, 9), m) for v, m in spec] == [(-2.0, 1), (0.0, 2), (2.0, 1)]
    c5 = dict((round(v, 9), m) for v, m in spectrum(Graph.cycle(5)))
    assert c5[2.0] == 1 and c5[round(2 * math.cos(2 * math.pi / 5), 9)] == 2


def test_c4_distance_partition_quotient():
    # classes: {0}, {1, 3}, {2}
    b, sym, _ = partition_quotient(Graph.cycle(4), [[0], [1, 3], [2]])
    assert np.array_equal(b, np.array([[0, 2, 0], [1, 0, 1], [0, 2, 0]]))
    assert np.allclose(np.sort(np.linalg.eigvals(b).real), [-2, 0, 2], atol=1e-12)
    assert np.allclose(sym, sym.T)
    check = quotient_spectrum_check(Graph.cycle(4), [0, 1, 2, 1])
    assert check.contained and check.equal


def test_non_equitable_partition_detected_as_not_equal():
    check = quotient_spectrum_check(Graph.path(4), [[0, 1, 2, 3]])
    assert not check.equal


def test_partition_must_cover_vertices():
    with pytest.raises(ValueError):
        partition_quotient(Graph.cycle(4), [[0, 1], [2]])


def test_group_eigenvalues():
    assert group_eigenvalues([1.0, 1.0 + 1e-13, 2.0], 1e-9) == [(pytest.approx(1.0), 2), (2.0, 1)]


def test_g3_and_g4_spectra():
    for k, expect in ((3, {6: 1, 2 * math.sqrt(2): 6, 1: 8, -2: 7, -2 * math.sqrt(2): 6}),
                      (4, {28: 1, 8: None, 2: None, -4: None, -8: None})):
        spec = spectrum(build_gk(k).graph)
        assert len(spec) == 5
        assert sum(m for _, m in spec) == build_gk(k).graph.n
        for (v, m), (ev, em) in zip(spec, sorted(expect.items())):
            assert abs(v - ev) < 1e-9
            if em is not None:
                assert m == em
