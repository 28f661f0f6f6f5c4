import math

import numpy as np
import pytest
from hypothesis import given, settings

from circwalk.blowup import blow_up
from circwalk.coins import circulant, hadamard, random_coin
from circwalk.errors import DimensionMismatch, MaxStepsExceeded, UnknownVertex
from circwalk.graph import build_graph, complete_graph, default_labeling
from circwalk.stationary import assemble_internal
from circwalk.walk import (
    CirculantWalk,
    IslandWalk,
    OpticalWalk,
    SimConfig,
    WalkState,
    relative_probability,
    run_until_converged,
    step_circulant,
    step_optical,
    write_mu_csv,
)
from helpers import example2, instances, random_graph, random_labeling


def both_walks(G, L, coins):
    return CirculantWalk(G, L, coins), OpticalWalk(blow_up(G, L), coins)


def test_first_step_is_tail_column():
    rng = np.random.default_rng(3)
    G = random_graph(rng, 4, 6)
    L = random_labeling(rng, G)
    coins = {u: random_coin(rng) for u in G.vertices}
    walk = CirculantWalk(G, L, coins)
    new = walk.step(walk.initial_state())
    for u in G.vertices:
        C = circulant(coins[u], G.degree(u)).matrix
        t = L(u, G.tail_in(u))
        for a in G.incoming(u):
            i = L(u, a)
            back = G.arcs[a].inverse
            got = new.outflow[u] if G.arcs[a].origin is None else new.internal[back]
            assert got == pytest.approx(C[i, t], abs=1e-14)


def test_isolated_vertex_reflects_unit_amplitude():
    G = build_graph([], n_vertices=1)
    H = random_coin(np.random.default_rng(0))
    walk = CirculantWalk(G, default_labeling(G), {0: H})
    s = walk.step(walk.initial_state())
    assert abs(s.outflow[0]) == pytest.approx(1.0, abs=1e-12)
    assert s.outflow[0] == pytest.approx(circulant(H, 1).weights[0])


@settings(max_examples=30, deadline=None)
@given(instances())
def test_inflow_constant_and_locality(inst):
    G, L, coins = inst
    for walk in both_walks(G, L, coins):
        s = walk.initial_state()
        for _ in range(5):
            s = walk.step(s)
            assert np.array_equal(s.inflow, np.ones(walk.n_boundary))
    # one optical step from psi_0 touches only arcs leaving tail-attached island vertices
    B = blow_up(G, L)
    walk = OpticalWalk(B, coins)
    s = walk.step(walk.initial_state())
    internal = [a for a in B.arcs if a.kind in ("cycle", "retained")]
    for amp, a in zip(s.internal, internal):
        if a.origin not in B.tail_vertex:
            assert amp == 0


@pytest.mark.parametrize("kappa", [1, 2, 3, 5, 8])
def test_island_converges_to_circulant(kappa):
    H = random_coin(np.random.default_rng(kappa))
    walk = IslandWalk(H, kappa)
    phi_in = np.zeros(kappa, dtype=complex)
    phi_in[0] = 1
    state, rep = run_until_converged(walk, SimConfig(max_steps=200_000, residual_tol=1e-13),
                                     walk.initial_state(phi_in))
    assert rep.converged
    C = circulant(H, kappa).matrix
    assert np.max(np.abs(state.outflow - C @ phi_in)) < 1e-8
    assert np.max(np.abs(state.internal - (C - H.d * np.eye(kappa)) @ phi_in / H.c)) < 1e-8


@settings(max_examples=20, deadline=None)
@given(instances())
def test_zero_state_and_linearity(inst):
    G, L, coins = inst
    rng = np.random.default_rng(0)
    for walk in both_walks(G, L, coins):
        zero = walk.initial_state(np.zeros(walk.n_boundary))
        out = walk.step(zero)
        assert not out.internal.any() and not out.outflow.any()

        def rand_state():
            v = rng.standard_normal(walk.n_internal) + 1j * rng.standard_normal(walk.n_internal)
            return WalkState(v, np.zeros(walk.n_boundary, complex), np.zeros(walk.n_boundary, complex))

        s1, s2 = rand_state(), rand_state()
        al, be = 0.3 - 1.1j, 2.0 + 0.5j
        mix = WalkState(al * s1.internal + be * s2.internal, s1.inflow, s1.outflow)
        lhs = walk.step(mix)
        r1, r2 = walk.step(s1), walk.step(s2)
        assert np.allclose(lhs.internal, al * r1.internal + be * r2.internal, atol=1e-12)
        assert np.allclose(lhs.outflow, al * r1.outflow + be * r2.outflow, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(instances())
def test_step_matches_assembled_matrices(inst):
    G, L, coins = inst
    rng = np.random.default_rng(1)
    for walk in both_walks(G, L, coins):
        sys = assemble_internal(walk.kind, G, L, coins)
        x = rng.standard_normal(walk.n_internal) + 1j * rng.standard_normal(walk.n_internal)
        s = rng.standard_normal(walk.n_boundary) + 1j * rng.standard_normal(walk.n_boundary)
        new = walk.step(WalkState(x, s, np.zeros_like(s)))
        assert np.allclose(new.internal, sys.E @ x + sys.R @ s, atol=1e-12)
        assert np.allclose(new.outflow, sys.F @ x + sys.D @ s, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(instances())
def test_norm_preserved_per_step(inst):
    # unitarity: |internal|^2 + |inflow|^2 in = |internal|^2 + |outflow|^2 out
    G, L, coins = inst
    rng = np.random.default_rng(2)
    for walk in both_walks(G, L, coins):
        x = rng.standard_normal(walk.n_internal) + 1j * rng.standard_normal(walk.n_internal)
        s = np.exp(1j * rng.uniform(0, 2 * np.pi, walk.n_boundary))
        new = walk.step(WalkState(x, s, np.zeros_like(s)))
        before = np.vdot(x, x).real + np.vdot(s, s).real
        after = np.vdot(new.internal, new.internal).real + np.vdot(new.outflow, new.outflow).real
        assert after == pytest.approx(before, rel=1e-12)


def materialized_tails(G, L, coins, n_steps):
    """Brute-force circulant walk with explicit tails of length ``n_steps + 1``.

    Tail vertices transmit perfectly; the far end is fed amplitude 1.
    Returns the per-step (internal amplitudes by arc id, outflow into tail 1).
    """
    T = n_steps + 1
    psi = {}
    # ("in", u, k): arc from tail vertex k to k-1 toward u (k=1 ends at u); ("out", u, k): away from u
    for u in G.vertices:
        for k in range(1, T + 1):
            psi[("in", u, k)] = 1.0 + 0j
            psi[("out", u, k)] = 0j
    for a in G.internal_arcs:
        psi[a.id] = 0j
    history = []
    for _ in range(n_steps):
        new = {}
        for u in G.vertices:
            C = circulant(coins[u], G.degree(u)).matrix
            inc = []
            for j in range(G.degree(u)):
                a = G.arcs[L.arc_at(u, j)]
                inc.append(psi[("in", u, 1)] if a.origin is None else psi[a.id])
            outv = C @ np.array(inc)
            for i in range(G.degree(u)):
                a = G.arcs[L.arc_at(u, i)]
                new[("out", u, 1) if a.origin is None else a.inverse] = outv[i]
            for k in range(1, T):
                new[("in", u, k)] = psi[("in", u, k + 1)]
                new[("out", u, k + 1)] = psi[("out", u, k)]
            new[("in", u, T)] = 1.0 + 0j
        psi = new
        history.append((np.array([psi[a.id] for a in G.internal_arcs]),
                        np.array([psi[("out", u, 1)] for u in G.vertices])))
    return history


@settings(max_examples=15, deadline=None)
@given(instances(n_max=5))
def test_tail_reduction_matches_explicit_tails(inst):
    G, L, coins = inst
    hist = materialized_tails(G, L, coins, 8)
    walk = CirculantWalk(G, L, coins)
    s = walk.initial_state()
    for internal, outflow in hist:
        s = walk.step(s)
        assert np.allclose(s.internal, internal, atol=1e-12)
        assert np.allclose(s.outflow, outflow, atol=1e-12)


def test_dimension_mismatch():
    G = complete_graph(3)
    L = default_labeling(G)
    coins = {u: hadamard() for u in G.vertices}
    walk = CirculantWalk(G, L, coins)
    bad = WalkState(np.zeros(5, complex), np.ones(3, complex), np.zeros(3, complex))
    with pytest.raises(DimensionMismatch):
        walk.step(bad)
    with pytest.raises(DimensionMismatch):
        step_optical(blow_up(G, L), coins, bad)
    with pytest.raises(DimensionMismatch):
        walk.initial_state(np.ones(4))
    ok = step_circulant(G, L, coins, walk.initial_state())
    assert ok.step == 1


def test_infinite_tolerance_returns_immediately():
    G, L, coins = example2()
    state, rep = run_until_converged(CirculantWalk(G, L, coins), SimConfig(residual_tol=math.inf))
    assert rep.converged and rep.steps_used == 0 and state.step == 0


def test_soft_and_strict_step_limit():
    G, L, coins = example2()
    walk = OpticalWalk(blow_up(G, L), coins)
    state, rep = run_until_converged(walk, SimConfig(max_steps=5))
    assert not rep.converged and rep.steps_used == 5 and state.step == 5
    assert rep.final_residual > 1e-9
    with pytest.raises(MaxStepsExceeded):
        run_until_converged(walk, SimConfig(max_steps=5), strict=True)
    with pytest.raises(ValueError):
        SimConfig(residual_tol=0)


@settings(max_examples=20, deadline=None)
@given(instances())
def test_mu_of_initial_state_is_one(inst):
    G, L, coins = inst
    for walk in both_walks(G, L, coins):
        s = walk.initial_state()
        assert np.array_equal(walk.mu(s), np.ones(G.n_vertices))
        assert relative_probability(walk, s, G.n_vertices - 1) == 1.0
        with pytest.raises(UnknownVertex):
            relative_probability(walk, s, G.n_vertices)


def test_cycle_amplitude_does_not_count_toward_mu():
    G = complete_graph(3)
    L = default_labeling(G)
    walk = OpticalWalk(blow_up(G, L), {u: hadamard() for u in G.vertices})
    s = walk.initial_state(np.zeros(3))
    s.internal[0] = 1.0  # first cycle arc of island 0
    assert np.array_equal(walk.mu(s), np.zeros(3))


def test_example2_time_courses():
    G, L, coins = example2()
    circ_state, circ = run_until_converged(CirculantWalk(G, L, coins))
    opt_state, opt = run_until_converged(OpticalWalk(blow_up(G, L), coins))
    assert circ.converged and opt.converged
    for rep in (circ, opt):
        assert np.ptp(rep.mu_history, axis=1).max() < 1e-9
    assert circ.mu_history[-1, 0] == pytest.approx(6.335066, abs=1e-6)
    assert opt.mu_history[-1, 0] == pytest.approx(9.199096, abs=1e-6)
    for state in (circ_state, opt_state):
        assert np.vdot(state.outflow, state.outflow).real == pytest.approx(10, abs=1e-6)


def test_record_every_and_csv(tmp_path):
    G, L, coins = example2()
    _, rep = run_until_converged(CirculantWalk(G, L, coins), SimConfig(record_every=10))
    assert rep.mu_steps[0] == 0 and rep.mu_steps[-1] == rep.steps_used
    assert all(n % 10 == 0 for n in rep.mu_steps[1:-1])
    path = tmp_path / "mu.csv"
    write_mu_csv(path, rep, "circulant")
    lines = path.read_text().splitlines()
    assert lines[0] == "step,vertex,mu,walk_kind"
    assert len(lines) == 1 + 10 * len(rep.mu_steps)
    assert lines[1].split(",")[:2] == ["0", "0"] and lines[1].endswith(",circulant")
