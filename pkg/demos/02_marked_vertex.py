"""
Both walks on K_10
==================

Every vertex of the complete graph K_10 gets a tail carrying a constant
unit inflow. We run the circulant walk and its optical counterpart side by
side, first with a uniform Hadamard coin and then with one marked vertex,
and compare the relative probabilities mu(j) they settle to.

With the uniform coin both walks converge quickly, to different values.
With the marked vertex the label/coin design sits on arcs (0,1) and (0,9),
yet the +1 kernel of the optical walk is still three-dimensional and the
two stationary states do not coincide.
"""

import numpy as np

from circwalk import (
    CirculantWalk,
    OpticalWalk,
    SimConfig,
    WalkState,
    blow_up,
    check_implementation,
    load_preset,
    run_until_converged,
)
from circwalk.coins import coin_assignment

np.set_printoptions(precision=4, suppress=True)

for name in ("example2", "example1"):
    G, L, spec = load_preset(name)
    coins = coin_assignment(G, spec)
    print(f"--- {name} ---")
    for walk in (CirculantWalk(G, L, coins), OpticalWalk(blow_up(G, L), coins)):
        _, rep = run_until_converged(walk, SimConfig(max_steps=10_000))
        print(f"{walk.kind:>9}: converged={rep.converged} after {rep.steps_used} steps, mu = {rep.mu_history[-1]}")

    v = check_implementation(G, L, coins)
    print(f"design arcs (1): {v.condition1_arcs}  (2): {v.condition2_arcs}")
    print(f"optical +1 kernel dim {v.kernel_dim}; max gap on original arcs {v.numeric_agreement:.4f}")
    # the solver's stationary state, read out the same way as the iterates
    circ = CirculantWalk(G, L, coins)
    fixed = WalkState(v.circulant.internal, np.ones(G.n_vertices, complex), v.circulant.outflow)
    print(f"stationary mu (solver, circulant): {circ.mu(fixed)}\n")
