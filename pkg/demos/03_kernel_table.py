"""
The +1 kernel on complete graphs
================================

For K_N with a uniform coin H and the standard labeling, the dimension of
the +1 eigenspace of the optical walk depends only on N, whether d is
real, and m = -det H. We sweep coins with m on the 2N-th roots of unity
and compare the numerical null space with the closed form.
"""

import numpy as np

from circwalk import assemble_optical, coin_with_real_d, kernel_basis, kn_kernel_dim
from circwalk.graph import complete_graph, default_labeling

rng = np.random.default_rng(0)

for N in range(3, 9):
    G = complete_graph(N)
    L = default_labeling(G)
    row = []
    for k in range(2 * N):
        H = coin_with_real_d(0.6, -np.exp(1j * np.pi * k / N), float(rng.uniform(0, 2 * np.pi)))
        numeric, _ = kernel_basis(assemble_optical(G, L, {u: H for u in G.vertices}))
        assert numeric == kn_kernel_dim(N, H)
        row.append(numeric)
    print(f"N={N}: dim ker by k (m = e^(i pi k/N)) -> {row}")
