"""Build G_3, split it into the five classes around (e1, e1) and read off theta.

Run: python3 demos/gk_spectrum.py
"""

import numpy as np

from indexcoding.gk import build_gk, kappa, quotient_matrix, quotient_spectrum, theta_gk_complement
from indexcoding.spectral import spectrum

gk = build_gk(3)
print(f"G_3: {gk.graph.n} vertices, {gk.graph.num_edges} edges, degree {gk.graph.degree(0)}")
print("class sizes:", [len(c) for c in gk.classes()])
print("quotient matrix:\n", quotient_matrix(3).astype(int))

# the 5x5 quotient already carries every distinct eigenvalue of the 28x28 adjacency matrix
print("quotient eigenvalues:", np.round(quotient_spectrum(3), 9))
print("full spectrum (value, multiplicity):", [(round(v, 9), m) for v, m in spectrum(gk.graph)])

for k in range(3, 9):
    print(f"k={k}: theta from spectrum {theta_gk_complement(k):.12f}, closed form {kappa(k):.12f}")
