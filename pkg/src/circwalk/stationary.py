"""
Stationary states by direct solve, +1 kernels, and implementability checks.

Restricting either walk to its internal arcs gives an affine map
``x -> E x + R s`` with ``s`` the (constant) tail inflow. The stationary
state is the solution of ``(1 - E) x = rho`` with ``rho = R s``. When
``1 - E`` is singular the kernel consists of +1 eigenvectors living entirely
inside the graph; the iterated limit is then the solution orthogonal to
that kernel, i.e. the minimum-norm least-squares solution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .coins import Coin2, NONZERO_TOL, circulant, validate_coin
from .errors import InconsistentSystem
from .graph import Labeling, SymmetricDigraph, validate_labeling

KERNEL_TOL = 1e-8
COND_LIMIT = 1e12
RESIDUAL_TOL = 1e-8


@dataclass
class InternalSystem:
    """Internal truncation of a walk.

    ``E`` acts on internal arcs, ``R`` feeds the inflow in, ``F`` and ``D``
    produce the outflow: ``outflow = F x + D s``.
    """

    kind: str
    E: np.ndarray
    R: np.ndarray
    F: np.ndarray
    D: np.ndarray
    inflow: np.ndarray
    arc_names: list[str]
    retained: Optional[np.ndarray] = None  # optical only: internal index of original arc k

    @property
    def rho(self) -> np.ndarray:
        return self.R @ self.inflow

    @property
    def size(self) -> int:
        return self.E.shape[0]


@dataclass
class StationaryResult:
    internal: np.ndarray
    outflow: np.ndarray
    kernel_dim: int
    method: str
    residual: float
    kernel: np.ndarray = field(repr=False, default=None)


@dataclass
class ImplementabilityVerdict:
    guaranteed: bool
    condition1_arcs: list[tuple[int, int]]
    condition2_arcs: list[tuple[int, int]]
    kernel_dim: Optional[int] = None
    numeric_agreement: Optional[float] = None
    circulant: Optional[StationaryResult] = field(default=None, repr=False)
    optical: Optional[StationaryResult] = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "guaranteed": self.guaranteed,
            "kernel_dim": self.kernel_dim,
            "numeric_agreement": self.numeric_agreement,
            "condition1_arcs": [list(a) for a in self.condition1_arcs],
            "condition2_arcs": [list(a) for a in self.condition2_arcs],
        }


def _split(T: np.ndarray, m: int):
    return T[:m, :m], T[:m, m:], T[m:, :m], T[m:, m:]


def _inflow(n: int, inflow) -> np.ndarray:
    if inflow is None:
        return np.ones(n, dtype=complex)
    return np.asarray(inflow, dtype=complex)


def assemble_circulant(graph: SymmetricDigraph, labeling: Labeling, coins: Mapping[int, Coin2],
                       inflow=None) -> InternalSystem:
    validate_labeling(graph, labeling)
    m, n = graph.n_internal, graph.n_vertices
    T = np.zeros((m + n, m + n), dtype=complex)

    def ext(arc_id):
        a = graph.arcs[arc_id]
        if a.is_internal:
            return arc_id
        return m + (a.terminus if a.origin is None else a.origin)

    for u in graph.vertices:
        C = circulant(coins[u], graph.degree(u)).matrix
        for i in range(graph.degree(u)):
            out = ext(graph.arcs[labeling.arc_at(u, i)].inverse)
            for j in range(graph.degree(u)):
                T[out, ext(labeling.arc_at(u, j))] += C[i, j]
    names = [f"{a.origin}->{a.terminus}" for a in graph.internal_arcs]
    return InternalSystem("circulant", *_split(T, m), _inflow(n, inflow), names)


def optical_offsets(graph: SymmetricDigraph) -> np.ndarray:
    """Start index of each island's cycle arcs in the optical internal vector."""
    return np.concatenate([[0], np.cumsum([graph.degree(u) for u in graph.vertices])])


def assemble_optical(graph: SymmetricDigraph, labeling: Labeling, coins: Mapping[int, Coin2],
                     inflow=None) -> InternalSystem:
    validate_labeling(graph, labeling)
    off = optical_offsets(graph)
    n_cycle = int(off[-1])
    m = n_cycle + graph.n_internal
    n = graph.n_vertices
    T = np.zeros((m + n, m + n), dtype=complex)
    names = []
    for u in graph.vertices:
        k = graph.degree(u)
        names += [f"({u};{(j - 1) % k})->({u};{j})" for j in range(k)]
        H = coins[u]
        validate_coin(H)
        for j in range(k):
            cin, cout = off[u] + j, off[u] + (j + 1) % k
            e = graph.arcs[labeling.arc_at(u, j)]
            if e.origin is None:
                oin = oout = m + u
            else:
                oin, oout = n_cycle + e.id, n_cycle + e.inverse
            T[cout, cin] += H.a
            T[cout, oin] += H.b
            T[oout, cin] += H.c
            T[oout, oin] += H.d
    for e in graph.internal_arcs:
        u, v = e.origin, e.terminus
        names.append(f"({u};{labeling(u, e.inverse)})->({v};{labeling(v, e.id)})")
    return InternalSystem("optical", *_split(T, m), _inflow(n, inflow), names,
                          retained=n_cycle + np.arange(graph.n_internal))


def assemble_island(H: Coin2, kappa: int, inflow=None) -> InternalSystem:
    """A lone island with one external port per vertex."""
    validate_coin(H)
    k = kappa
    P = np.roll(np.eye(k), 1, axis=0)  # P[j+1, j] = 1
    E = H.a * P
    R = H.b * P
    F = H.c * np.eye(k)
    D = H.d * np.eye(k)
    names = [f"({(j - 1) % k})->({j})" for j in range(k)]
    return InternalSystem("island", E.astype(complex), R.astype(complex), F.astype(complex),
                          D.astype(complex), _inflow(k, inflow), names)


def assemble_internal(walk: str, graph: SymmetricDigraph, labeling: Labeling,
                      coins: Mapping[int, Coin2], inflow=None) -> InternalSystem:
    if walk == "circulant":
        return assemble_circulant(graph, labeling, coins, inflow)
    if walk == "optical":
        return assemble_optical(graph, labeling, coins, inflow)
    raise ValueError(f"unknown walk kind {walk!r}")


def kernel_basis(sys: InternalSystem, tol: float = KERNEL_TOL) -> tuple[int, np.ndarray]:
    """Orthonormal basis (columns) of ``ker(1 - E)``.

    Singular values below ``tol`` times the largest count as zero.
    """
    M = np.eye(sys.size) - sys.E
    if sys.size == 0:
        return 0, np.zeros((0, 0), dtype=complex)
    _, s, vh = np.linalg.svd(M)
    null = s <= tol * s[0]
    basis = vh[null].conj().T
    return int(null.sum()), basis


def solve_stationary(sys: InternalSystem, kernel_tol: float = KERNEL_TOL) -> StationaryResult:
    """Stationary internal amplitudes and outflow.

    Well-conditioned systems are solved directly; otherwise the
    minimum-norm least-squares solution is taken, which is the one
    orthogonal to ``ker(1 - E)``.
    """
    M = np.eye(sys.size) - sys.E
    rho = sys.rho
    if sys.size == 0:
        x = np.zeros(0, dtype=complex)
        return StationaryResult(x, sys.D @ sys.inflow, 0, "direct", 0.0, np.zeros((0, 0), dtype=complex))
    u, s, vh = np.linalg.svd(M)
    null = s <= kernel_tol * s[0]
    kernel = vh[null].conj().T
    if s[-1] > 0 and s[0] / s[-1] < COND_LIMIT:
        x = np.linalg.solve(M, rho)
        method = "direct"
    else:
        keep = ~null
        x = vh[keep].conj().T @ ((u[:, keep].conj().T @ rho) / s[keep])
        method = "pseudoinverse"
    residual = float(np.linalg.norm(M @ x - rho))
    if not residual <= RESIDUAL_TOL:
        raise InconsistentSystem(f"stationary equation residual {residual:.3e} exceeds {RESIDUAL_TOL}")
    outflow = sys.F @ x + sys.D @ sys.inflow
    return StationaryResult(x, outflow, int(null.sum()), method, residual, kernel)


def restrict_to_original(sys: InternalSystem, optical_internal: np.ndarray) -> np.ndarray:
    """Amplitudes on the retained (original) arcs of an optical internal vector."""
    return np.asarray(optical_internal)[sys.retained]


def extend_to_optical(graph: SymmetricDigraph, labeling: Labeling, coins: Mapping[int, Coin2],
                      internal: np.ndarray, inflow=None) -> np.ndarray:
    """Lift a circulant-walk internal vector to the optical walk.

    Retained arcs copy the original amplitudes; the cycle arcs of island
    ``u`` get ``(Circ(H_u) - d_u I) phi_in / c_u`` with ``phi_in`` the
    amplitudes arriving at ``u`` in label order.
    """
    s = np.zeros(graph.n_vertices, dtype=complex) if inflow is None else np.asarray(inflow, dtype=complex)
    off = optical_offsets(graph)
    out = np.zeros(int(off[-1]) + graph.n_internal, dtype=complex)
    out[int(off[-1]):] = internal
    for u in graph.vertices:
        k = graph.degree(u)
        phi_in = np.array([
            s[u] if graph.arcs[a].origin is None else internal[a]
            for a in labeling.ordered_arcs(u)
        ])
        H = coins[u]
        out[off[u]: off[u] + k] = (circulant(H, k).matrix - H.d * np.eye(k)) @ phi_in / H.c
    return out


def _signs(diff: int, k: int) -> set[int]:
    s = set()
    if diff % k == 1 % k:
        s.add(1)
    if diff % k == (-1) % k:
        s.add(-1)
    return s


def check_symmetry_breaking(graph: SymmetricDigraph, labeling: Labeling,
                            coins: Mapping[int, Coin2]) -> ImplementabilityVerdict:
    """Scan internal arcs for the two symmetry-breaking designs.

    For arc ``e`` from ``o`` to ``t`` compare the label offset of ``e``'s
    reverse from the tail at ``o`` with the offset of ``e`` from the tail at
    ``t`` (both modulo the local degree). Equal ``+-1`` offsets are design
    (1); opposite ``+-1`` offsets with ``d_o != conj(d_t)`` are design (2).
    On a degree-2 vertex ``+1`` and ``-1`` coincide and both signs count.
    """
    cond1, cond2 = [], []
    for e in graph.internal_arcs:
        o, t = e.origin, e.terminus
        s1 = _signs(labeling(o, e.inverse) - labeling(o, graph.tail_in(o)), graph.degree(o))
        s2 = _signs(labeling(t, e.id) - labeling(t, graph.tail_in(t)), graph.degree(t))
        if s1 & s2:
            cond1.append((o, t))
        if s1 & {-x for x in s2} and abs(coins[o].d - np.conj(coins[t].d)) > NONZERO_TOL:
            cond2.append((o, t))
    return ImplementabilityVerdict(bool(cond1 or cond2), cond1, cond2)


def kn_kernel_dim(N: int, H: Coin2, tol: float = 1e-9) -> int:
    """Closed-form ``dim ker(1 - U)`` of the optical walk on ``K_N``.

    Uniform coin ``H``, labeling ``xi_i((i, j)) = j``. With
    ``m = -det H``: ``N/2 - 1`` if ``d`` is real, ``m**(2N) = 1`` and ``N``
    is even; for odd ``N`` and real ``d``, ``(N-1)/2`` if ``m**N = 1`` and
    ``(N-3)/2`` if only ``m**(2N) = 1``; zero otherwise.
    """
    if N < 3:
        raise ValueError("N must be >= 3")
    validate_coin(H)
    if abs(H.d.imag) > NONZERO_TOL:
        return 0
    m = -H.det
    if N % 2 == 0:
        return N // 2 - 1 if abs(m ** (2 * N) - 1) <= tol else 0
    if abs(m**N - 1) <= tol:
        return (N - 1) // 2
    if abs(m ** (2 * N) - 1) <= tol:
        return (N - 3) // 2
    return 0


def check_implementation(graph: SymmetricDigraph, labeling: Labeling, coins: Mapping[int, Coin2],
                         kernel_tol: float = KERNEL_TOL) -> ImplementabilityVerdict:
    """Kernel test on the optical walk plus a numeric comparison of both stationary states.

    ``guaranteed`` is true when ``ker(1 - U)`` of the optical walk is trivial.
    ``numeric_agreement`` is the largest amplitude difference over the
    original arcs, tail outflow included.
    """
    verdict = check_symmetry_breaking(graph, labeling, coins)
    circ_sys = assemble_circulant(graph, labeling, coins)
    opt_sys = assemble_optical(graph, labeling, coins)
    circ = solve_stationary(circ_sys, kernel_tol)
    opt = solve_stationary(opt_sys, kernel_tol)
    diff = np.concatenate([
        restrict_to_original(opt_sys, opt.internal) - circ.internal,
        opt.outflow - circ.outflow,
    ])
    verdict.kernel_dim = opt.kernel_dim
    verdict.guaranteed = opt.kernel_dim == 0
    verdict.numeric_agreement = float(np.max(np.abs(diff), initial=0.0))
    verdict.circulant = circ
    verdict.optical = opt
    return verdict


def _pairs(z: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(z)]


def stationary_report(sys: InternalSystem, result: StationaryResult) -> dict:
    return {
        "walk": sys.kind,
        "method": result.method,
        "kernel_dim": result.kernel_dim,
        "residual": result.residual,
        "internal": {name: pair for name, pair in zip(sys.arc_names, _pairs(result.internal))},
        "outflow": _pairs(result.outflow),
        "inflow": _pairs(sys.inflow),
    }
