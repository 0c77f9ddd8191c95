"""From a bounded-minrank instance to a coloring and an index code.

A random graph G that maps into G_3 has minrk2(complement(G)) <= 3. We solve
its strict vector coloring, round it to independent sets, and compare with the
min-degree greedy baseline. The coloring of G then gives an index code for the
side-information graph complement(G).

Run: python3 demos/rounding_pipeline.py  (about 20 s)
"""

import time

from indexcoding.coloring import color_graph, greedy_coloring
from indexcoding.gk import kappa
from indexcoding.graph import complement, gen_bounded_minrank_instance
from indexcoding.index_code import code_from_coloring, verify_code
from indexcoding.rounding import augmented_kms, augmented_params, greedy_independent_set, kms_prime
from indexcoding.vector_coloring import solve_vector_coloring

g = gen_bounded_minrank_instance(120, 3, 0.7, seed=4)
print(f"instance: n={g.n}, m={g.num_edges}, max degree {g.max_degree()}")

t0 = time.perf_counter()
vc = solve_vector_coloring(g, strict=True, tol=1e-4, restarts=1)
print(f"strict vector coloring: kappa = {vc.kappa:.5f} (G_3 bound {kappa(3):.5f}), {time.perf_counter() - t0:.1f} s")

_, c, params = augmented_params(g, vc.vectors)
kms = kms_prime(g, vc.vectors, params)
aug = augmented_kms(g, vc=vc)
print(f"independent sets: greedy {len(greedy_independent_set(g))}, KMS' {kms.size} (t = {kms.t:.3f}), "
      f"augmented {aug.size}, c = {c:.5f}")

col = color_graph(g, 3, mode="minrank3")
print(f"colors: pipeline {col.count}, greedy {greedy_coloring(g).count}")

# the color classes of G are cliques of the side-information graph complement(G)
side = complement(g)
code = code_from_coloring(side, col)
v = verify_code(side, code, mode="sampled", trials=2000, seed=1)
print(f"index code for complement(G): length {code.length} instead of {g.n}, sampled check ok: {v.ok}")
