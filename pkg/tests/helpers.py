"""Shared instance generators for the test suite."""

import numpy as np
from hypothesis import strategies as st

from circwalk.coins import Coin2, CoinSpec, coin_assignment, coin_with_real_d, hadamard, random_coin
from circwalk.graph import Labeling, build_graph, complete_graph, default_labeling

S2 = 1 / np.sqrt(2)

# one "PASS/FAIL criterion N: ..." line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []
PERTURBED = Coin2(S2, S2, -S2, S2)


def example1():
    G = complete_graph(10)
    return G, default_labeling(G), coin_assignment(G, CoinSpec(PERTURBED, {0: hadamard()}))


def example2():
    G = complete_graph(10)
    return G, default_labeling(G), coin_assignment(G, CoinSpec.uniform(hadamard()))


def random_connected_edges(rng, n, p_extra=0.3):
    """Random spanning tree plus each remaining pair with probability ``p_extra``."""
    perm = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        i, j = int(perm[k]), int(perm[rng.integers(k)])
        edges.add((min(i, j), max(i, j)))
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < p_extra:
                edges.add((i, j))
    return sorted(edges)


def random_labeling(rng, G):
    labels = []
    for u in G.vertices:
        arcs = list(G.incoming(u))
        perm = rng.permutation(len(arcs))
        labels.append({a: int(p) for a, p in zip(arcs, perm)})
    return Labeling(G, labels)


def random_graph(rng, n_min=1, n_max=8):
    n = int(rng.integers(n_min, n_max + 1))
    return build_graph(random_connected_edges(rng, n), n_vertices=n)


@st.composite
def graphs(draw, n_min=1, n_max=8):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_graph(np.random.default_rng(seed), n_min, n_max)


@st.composite
def instances(draw, n_max=6):
    """(graph, labeling, coins) with a random labeling and Haar coins."""
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    G = random_graph(rng, 1, n_max)
    L = random_labeling(rng, G)
    coins = {u: random_coin(rng) for u in G.vertices}
    return G, L, coins


def uniform_kn(N, H):
    G = complete_graph(N)
    return G, default_labeling(G), {u: H for u in G.vertices}


def kn_case_coins(N, rng):
    """Coins for K_N hitting each row of the closed-form kernel table.

    Returns ``(tag, coin)`` pairs.
    """
    out = []
    d = float(rng.uniform(0.2, 0.8)) * rng.choice([-1, 1])
    # -det on the 2N-th roots of unity; for odd N the odd powers miss the N-th roots
    for k in range(2 * N):
        m = np.exp(2j * np.pi * k / (2 * N))
        tag = "m^N=1" if abs(m**N - 1) < 1e-9 else "m^2N=1"
        out.append((tag, coin_with_real_d(d, -m, float(rng.uniform(0, 2 * np.pi)))))
    H = random_coin(rng)
    while abs(H.d.imag) < 1e-3:
        H = random_coin(rng)
    out.append(("d complex", H))
    out.append(("det^2N!=1", coin_with_real_d(d, -np.exp(1j * (np.pi / N + 0.37)), 0.3)))
    return out
