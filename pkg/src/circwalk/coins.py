"""
2x2 coins and the circulant scattering matrices they induce.

A vertex of degree ``kappa`` carrying the coin ``H = [[a, b], [c, d]]``
scatters with the ``kappa x kappa`` circulant matrix whose ``(i, j)`` entry
is ``w[(i - j) % kappa]``, where

    w[0] = d + b c a**(kappa-1) / (1 - a**kappa)
    w[l] = b c a**(l-1) / (1 - a**kappa),   l = 1 .. kappa-1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import CoinError, NotUnitary, UnknownVertex, ZeroEntry

UNITARY_TOL = 1e-10
NONZERO_TOL = 1e-12


@dataclass(frozen=True)
class Coin2:
    """Row-major entries of a 2x2 coin ``[[a, b], [c, d]]``."""

    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_matrix(cls, m) -> "Coin2":
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise CoinError(f"coin must be 2x2, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c


def hadamard() -> Coin2:
    s = 1 / np.sqrt(2)
    return Coin2(s, s, s, -s)


def validate_coin(H: Coin2) -> None:
    """Raise unless ``H`` is unitary with all four entries nonzero."""
    m = H.matrix
    if not np.all(np.isfinite(m)):
        raise NotUnitary("coin has non-finite entries")
    err = np.max(np.abs(m @ m.conj().T - np.eye(2)))
    if err > UNITARY_TOL:
        raise NotUnitary(f"coin is not unitary (max |HH* - I| = {err:.3e})")
    for name in "abcd":
        if abs(getattr(H, name)) <= NONZERO_TOL:
            raise ZeroEntry(f"coin entry {name} is zero")


@dataclass(frozen=True)
class CirculantCoin:
    kappa: int
    weights: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        k = self.kappa
        idx = (np.arange(k)[:, None] - np.arange(k)[None, :]) % k
        return self.weights[idx]


def circulant(H: Coin2, kappa: int) -> CirculantCoin:
    """Circulant scattering matrix of degree ``kappa`` induced by ``H``."""
    if kappa < 1:
        raise CoinError("kappa must be >= 1")
    validate_coin(H)
    w = np.empty(kappa, dtype=complex)
    scale = H.b * H.c / (1 - H.a**kappa)
    w[1:] = scale * H.a ** np.arange(0, kappa - 1)
    w[0] = H.d + scale * H.a ** (kappa - 1)
    return CirculantCoin(kappa, w)


def random_coin(rng: np.random.Generator, real_d: bool = False) -> Coin2:
    """Haar-random 2x2 unitary, optionally rephased so that ``d`` is real."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    if real_d:
        q[:, 1] *= np.exp(-1j * np.angle(q[1, 1]))
    return Coin2.from_matrix(q)


def coin_with_real_d(d: float, det: complex, b_phase: float = 0.0) -> Coin2:
    """The unitary with real ``d``, determinant ``det`` and ``arg b = b_phase``.

    Unitarity fixes ``a = det * conj(d)`` and ``c = -det * conj(b)``.
    """
    if not 0 < abs(d) < 1:
        raise CoinError("need 0 < |d| < 1 for all entries to be nonzero")
    b = np.sqrt(1 - d * d) * np.exp(1j * b_phase)
    det = complex(det) / abs(det)
    return Coin2(det * d, complex(b), -det * np.conj(b), complex(d))


def _parse_matrix(m) -> Coin2:
    arr = np.asarray(m, dtype=float)
    if arr.shape == (4, 2):
        arr = arr.reshape(2, 2, 2)
    if arr.shape != (2, 2, 2):
        raise CoinError("coin matrix must be 4 [re, im] pairs or a 2x2 grid of [re, im] pairs")
    return Coin2.from_matrix(arr[..., 0] + 1j * arr[..., 1])


def _format_matrix(H: Coin2) -> list:
    return [[float(z.real), float(z.imag)] for z in (H.a, H.b, H.c, H.d)]


def coin_assignment(graph, spec: Mapping | "CoinSpec") -> dict[int, Coin2]:
    """Expand a default coin plus per-vertex overrides into a total map.

    ``spec`` is either a :class:`CoinSpec` or its JSON form
    ``{"default": [[re, im] x 4], "overrides": {vertex: matrix}}``.
    """
    if not isinstance(spec, CoinSpec):
        spec = CoinSpec.from_json(spec)
    coins = {}
    for v in spec.overrides:
        if not 0 <= v < graph.n_vertices:
            raise UnknownVertex(f"coin override for unknown vertex {v}")
    for u in graph.vertices:
        H = spec.overrides.get(u, spec.default)
        validate_coin(H)
        coins[u] = H
    return coins


@dataclass
class CoinSpec:
    default: Coin2
    overrides: dict[int, Coin2]

    @classmethod
    def uniform(cls, H: Coin2) -> "CoinSpec":
        return cls(H, {})

    @classmethod
    def from_json(cls, doc: Mapping | str) -> "CoinSpec":
        if isinstance(doc, str):
            doc = json.loads(doc)
        if "default" not in doc:
            raise CoinError("coin spec needs a 'default' coin")
        overrides = {int(k): _parse_matrix(v) for k, v in (doc.get("overrides") or {}).items()}
        return cls(_parse_matrix(doc["default"]), overrides)

    def to_json(self) -> dict:
        return {
            "default": _format_matrix(self.default),
            "overrides": {str(k): _format_matrix(v) for k, v in sorted(self.overrides.items())},
        }


def circulant_blocks(graph, coins: Mapping[int, Coin2]) -> list[np.ndarray]:
    """``Circ(H_u)`` for every vertex, sized by its degree."""
    return [circulant(coins[u], graph.degree(u)).matrix for u in graph.vertices]
