"""
Circulant coins from a 2x2 unitary
==================================

A vertex of degree kappa scatters with a kappa x kappa circulant matrix
built from one 2x2 coin. We build a few, check they are unitary, and watch
a single island of the optical walk settle onto the same matrix.
"""

import numpy as np

from circwalk import IslandWalk, SimConfig, circulant, hadamard, run_until_converged

H = hadamard()

# the weights w[0..kappa-1]; row i of Circ is w rolled by i
for kappa in (1, 2, 3, 5):
    C = circulant(H, kappa)
    err = np.abs(C.matrix @ C.matrix.conj().T - np.eye(kappa)).max()
    print(f"kappa={kappa}: w = {np.round(C.weights, 4)}  |CC* - I| = {err:.1e}")

# a lone island: kappa vertices on a directed cycle, one port each
kappa = 4
phi_in = np.array([1, 0, 0, 0], dtype=complex)
walk = IslandWalk(H, kappa)
state, rep = run_until_converged(walk, SimConfig(residual_tol=1e-13), walk.initial_state(phi_in))

print(f"\nisland settled after {rep.steps_used} steps")
print("outflow         ", np.round(state.outflow, 6))
print("Circ(H) @ phi_in", np.round(circulant(H, kappa).matrix @ phi_in, 6))
