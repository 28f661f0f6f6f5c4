"""
Time stepping for the circulant walk and the optical walk.

Tails are never simulated. Their dynamics is free transmission, so the
inflow arc of every tail carries the same amplitude forever and whatever
reaches an outflow arc never returns. A :class:`WalkState` therefore keeps
three vectors: amplitudes on internal arcs, the clamped inflow on the tail
arcs entering the graph, and the latest outflow on the tail arcs leaving it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .blowup import CYCLE, RETAINED, TAIL_IN, TAIL_OUT, BlowupGraph
from .coins import Coin2, circulant, validate_coin
from .errors import DimensionMismatch, MaxStepsExceeded, UnknownVertex
from .graph import Labeling, SymmetricDigraph, validate_labeling


@dataclass
class WalkState:
    internal: np.ndarray
    inflow: np.ndarray
    outflow: np.ndarray
    step: int = 0

    @property
    def amplitudes(self) -> np.ndarray:
        """Internal, inflow and outflow amplitudes concatenated."""
        return np.concatenate([self.internal, self.inflow, self.outflow])

    def copy(self) -> "WalkState":
        return WalkState(self.internal.copy(), self.inflow.copy(), self.outflow.copy(), self.step)


@dataclass
class SimConfig:
    max_steps: Optional[int] = None
    residual_tol: float = 1e-9
    record_every: int = 1

    def __post_init__(self):
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")


@dataclass
class ConvergenceReport:
    converged: bool
    steps_used: int
    final_residual: float
    mu_steps: list[int] = field(default_factory=list)
    mu_history: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)))

    def to_json(self) -> dict:
        return {
            "converged": self.converged,
            "steps_used": self.steps_used,
            "final_residual": None if math.isinf(self.final_residual) else self.final_residual,
            "final_mu": self.mu_history[-1].tolist() if len(self.mu_history) else [],
        }


class _LinearWalk:
    """Shared machinery: one step is ``(internal, inflow) -> (internal, outflow)``.

    Subclasses fill ``n_internal``, ``n_boundary`` and ``_mu_arcs`` (for each
    vertex, the indices into ``concat(internal, inflow)`` whose squared
    moduli make up the relative probability).
    """

    kind = "walk"
    n_internal: int
    n_boundary: int
    _mu_index: np.ndarray
    _mu_vertex: np.ndarray
    n_vertices: int

    def initial_state(self, inflow=None) -> WalkState:
        s = np.ones(self.n_boundary, dtype=complex) if inflow is None else np.asarray(inflow, dtype=complex)
        if s.shape != (self.n_boundary,):
            raise DimensionMismatch(f"inflow must have length {self.n_boundary}")
        return WalkState(
            np.zeros(self.n_internal, dtype=complex),
            s.copy(),
            np.zeros(self.n_boundary, dtype=complex),
            0,
        )

    def _check(self, state: WalkState) -> None:
        if (state.internal.shape != (self.n_internal,) or state.inflow.shape != (self.n_boundary,)
                or state.outflow.shape != (self.n_boundary,)):
            raise DimensionMismatch(
                f"state shapes {state.internal.shape}/{state.inflow.shape}/{state.outflow.shape} "
                f"do not match walk ({self.n_internal}, {self.n_boundary})"
            )

    def step(self, state: WalkState) -> WalkState:
        self._check(state)
        x = np.concatenate([state.internal, state.inflow])
        y = self._apply(x)
        return WalkState(
            y[: self.n_internal],
            state.inflow.copy(),
            y[self.n_internal:],
            state.step + 1,
        )

    def _apply(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def default_max_steps(self) -> int:
        return max(10 * (self.n_internal + 2 * self.n_boundary) * self.max_degree, 10_000)

    def mu(self, state: WalkState) -> np.ndarray:
        """Relative probability at every vertex."""
        x = np.concatenate([state.internal, state.inflow])
        return np.bincount(self._mu_vertex, weights=np.abs(x[self._mu_index]) ** 2, minlength=self.n_vertices)

    def residual(self, old: WalkState, new: WalkState) -> float:
        if self.n_internal == 0:
            return float(np.max(np.abs(new.outflow - old.outflow), initial=0.0))
        return float(np.max(np.abs(new.internal - old.internal)))


def _coin_arrays(coins: Mapping[int, Coin2], owners: Sequence[int]):
    for u in set(owners):
        validate_coin(coins[u])
    return tuple(np.array([getattr(coins[u], k) for u in owners], dtype=complex) for k in "abcd")


class CirculantWalk(_LinearWalk):
    """Scattering by ``Circ(H_u)`` at every vertex followed by the flip-flop shift.

    Internal amplitudes are indexed by internal arc id of ``graph``; the
    boundary index is the vertex the tail hangs on.
    """

    kind = "circulant"

    def __init__(self, graph: SymmetricDigraph, labeling: Labeling, coins: Mapping[int, Coin2]):
        validate_labeling(graph, labeling)
        self.graph = graph
        self.labeling = labeling
        self.coins = dict(coins)
        self.n_vertices = graph.n_vertices
        self.n_internal = graph.n_internal
        self.n_boundary = graph.n_vertices
        self.max_degree = max(graph.degree(u) for u in graph.vertices)
        m = self.n_internal

        def ext(arc_id):
            # index into concat(internal, boundary) for both inputs and outputs
            a = graph.arcs[arc_id]
            if a.is_internal:
                return arc_id
            return m + (a.terminus if a.origin is None else a.origin)

        groups: dict[int, list] = {}
        for u in graph.vertices:
            order = labeling.ordered_arcs(u)
            src = [ext(a) for a in order]
            dst = [ext(graph.arcs[a].inverse) for a in order]
            groups.setdefault(len(order), []).append((circulant(coins[u], len(order)).matrix, src, dst))
        self._groups = [
            (np.stack([g[0] for g in grp]), np.array([g[1] for g in grp]), np.array([g[2] for g in grp]))
            for grp in groups.values()
        ]
        mu_index, mu_vertex = [], []
        for u in graph.vertices:
            for a in graph.incoming(u):
                mu_index.append(ext(a))
                mu_vertex.append(u)
        self._mu_index = np.array(mu_index)
        self._mu_vertex = np.array(mu_vertex)

    def _apply(self, x):
        y = np.zeros(self.n_internal + self.n_boundary, dtype=complex)
        for blocks, src, dst in self._groups:
            y[dst] = np.einsum("vij,vj->vi", blocks, x[src])
        return y


class OpticalWalk(_LinearWalk):
    """The 2-in/2-out walk on a blow-up graph.

    At island vertex ``(u;j)`` the coin ``H_u`` maps ``[cycle in, other in]``
    to ``[cycle out, other out]``. Internal amplitudes are the cycle arcs
    followed by the retained arcs, in the order of ``B.arcs``.
    """

    kind = "optical"

    def __init__(self, B: BlowupGraph, coins: Mapping[int, Coin2]):
        self.blowup = B
        self.coins = dict(coins)
        self.n_vertices = B.n_islands
        self.n_boundary = B.n_islands
        self.max_degree = max(B.degrees)
        internal = [a for a in B.arcs if a.kind in (CYCLE, RETAINED)]
        self.n_internal = m = len(internal)

        cyc_in, cyc_out, oth_in, oth_out = {}, {}, {}, {}
        for i, a in enumerate(internal):
            if a.kind == CYCLE:
                cyc_in[a.terminus] = i
                cyc_out[a.origin] = i
            else:
                oth_in[a.terminus] = i
                oth_out[a.origin] = i
        for a in B.arcs:
            if a.kind == TAIL_IN:
                oth_in[a.terminus] = m + a.terminus[0]
            elif a.kind == TAIL_OUT:
                oth_out[a.origin] = m + a.origin[0]
        verts = B.island_vertices
        self._cin = np.array([cyc_in[v] for v in verts])
        self._cout = np.array([cyc_out[v] for v in verts])
        self._oin = np.array([oth_in[v] for v in verts])
        self._oout = np.array([oth_out[v] for v in verts])
        self._a, self._b, self._c, self._d = _coin_arrays(coins, [v[0] for v in verts])

        mu_index, mu_vertex = [], []
        for i, a in enumerate(internal):
            if a.kind == RETAINED:
                mu_index.append(i)
                mu_vertex.append(a.terminus[0])
        for u in range(B.n_islands):
            mu_index.append(m + u)
            mu_vertex.append(u)
        self._mu_index = np.array(mu_index)
        self._mu_vertex = np.array(mu_vertex)

    def _apply(self, x):
        y = np.zeros(self.n_internal + self.n_boundary, dtype=complex)
        ci, oi = x[self._cin], x[self._oin]
        y[self._cout] = self._a * ci + self._b * oi
        y[self._oout] = self._c * ci + self._d * oi
        return y


class IslandWalk(_LinearWalk):
    """A single island of ``kappa`` vertices, each with its own external port.

    Internal amplitude ``j`` sits on the cycle arc ending at ``(u;j)``; port
    ``j`` feeds into and drains out of ``(u;j)``.
    """

    kind = "island"

    def __init__(self, H: Coin2, kappa: int):
        validate_coin(H)
        self.coin = H
        self.n_vertices = 1
        self.n_internal = self.n_boundary = self.max_degree = kappa
        self._mu_index = np.arange(kappa, 2 * kappa)
        self._mu_vertex = np.zeros(kappa, dtype=int)

    def _apply(self, x):
        k = self.n_internal
        f, s = x[:k], x[k:]
        H = self.coin
        y = np.empty(2 * k, dtype=complex)
        y[:k] = np.roll(H.a * f + H.b * s, 1)
        y[k:] = H.c * f + H.d * s
        return y


def step_circulant(graph, labeling, coins, state: WalkState) -> WalkState:
    return CirculantWalk(graph, labeling, coins).step(state)


def step_optical(B: BlowupGraph, coins, state: WalkState) -> WalkState:
    return OpticalWalk(B, coins).step(state)


def run_until_converged(
    walk: _LinearWalk,
    config: Optional[SimConfig] = None,
    state: Optional[WalkState] = None,
    strict: bool = False,
) -> tuple[WalkState, ConvergenceReport]:
    """Iterate from the unit-inflow initial state until the update stalls.

    The residual is the sup-norm of the change of internal amplitudes over
    one step. A run that exhausts ``max_steps`` returns its last state with
    ``converged=False``, or raises :class:`MaxStepsExceeded` when ``strict``.
    """
    config = config or SimConfig()
    max_steps = walk.default_max_steps if config.max_steps is None else config.max_steps
    state = walk.initial_state() if state is None else state
    steps = [state.step]
    history = [walk.mu(state)]
    residual = math.inf
    n = 0
    while not residual <= config.residual_tol and n < max_steps:
        new = walk.step(state)
        residual = walk.residual(state, new)
        state = new
        n += 1
        if n % config.record_every == 0:
            steps.append(state.step)
            history.append(walk.mu(state))
    if steps[-1] != state.step:
        steps.append(state.step)
        history.append(walk.mu(state))
    converged = residual <= config.residual_tol
    if strict and not converged:
        raise MaxStepsExceeded(f"no convergence after {n} steps (residual {residual:.3e})")
    report = ConvergenceReport(converged, n, residual, steps, np.array(history))
    return state, report


def relative_probability(walk: _LinearWalk, state: WalkState, j: int) -> float:
    """Sum of ``|psi(a)|**2`` over the original arcs (tail inflow included) ending at ``j``."""
    if not 0 <= j < walk.n_vertices:
        raise UnknownVertex(f"unknown vertex {j}")
    return float(walk.mu(state)[j])


def write_mu_csv(path, report: ConvergenceReport, walk_kind: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["step", "vertex", "mu", "walk_kind"])
        for n, row in zip(report.mu_steps, report.mu_history):
            for v, mu in enumerate(row):
                w.writerow([n, v, repr(float(mu)), walk_kind])
