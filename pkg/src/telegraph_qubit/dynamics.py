"""Reduced qubit state under pure dephasing.

Populations never change; only the coherence is multiplied by the averaged
phase factor. In the ``{|e>, |g>}`` basis

    rho_ee = (1 + cos theta) / 2
    rho_eg = sin(theta) / 2 * exp(-i (phi + omega0 t)) * conj(G(t))

Fields of :class:`DensityMatrix2` may be scalars or equally shaped arrays, so
a whole time series is a single object.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .params import PureStateAngles, QubitParams

__all__ = ["DensityMatrix2", "evolve", "eigendecompose"]

_POS_TOL = 1e-12


@dataclass(frozen=True)
class DensityMatrix2:
    """Trace-one Hermitian 2x2 matrix stored as ``(rho_ee, rho_eg)``."""

    ee: np.ndarray
    eg: np.ndarray

    def __post_init__(self):
        ee = np.asarray(self.ee, dtype=float)
        eg = np.asarray(self.eg, dtype=complex)
        if np.any(ee < -_POS_TOL) or np.any(ee > 1 + _POS_TOL):
            raise DomainError("population rho_ee must lie in [0, 1]")
        # determinant test; stays meaningful when rho_ee rounds to exactly 0 or 1
        if np.any(ee * (1.0 - ee) - np.abs(eg) ** 2 < -_POS_TOL):
            raise DomainError("|rho_eg| exceeds sqrt(rho_ee rho_gg): matrix is not positive")
        object.__setattr__(self, "ee", ee)
        object.__setattr__(self, "eg", eg)

    @property
    def gg(self):
        return 1.0 - self.ee

    @property
    def ge(self):
        return np.conj(self.eg)

    def matrix(self):
        """Dense ``(..., 2, 2)`` complex array."""
        ee, eg = np.broadcast_arrays(self.ee, self.eg)
        out = np.empty(ee.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = ee
        out[..., 0, 1] = eg
        out[..., 1, 0] = np.conj(eg)
        out[..., 1, 1] = 1.0 - ee
        return out

    def purity(self):
        return self.ee**2 + self.gg**2 + 2.0 * np.abs(self.eg) ** 2

    def bloch_vector(self):
        """``(x, y, z)`` with ``rho = (1 + r . sigma) / 2``."""
        return np.stack([2.0 * self.eg.real, -2.0 * self.eg.imag, 2.0 * self.ee - 1.0])

    @classmethod
    def from_matrix(cls, rho):
        rho = np.asarray(rho)
        return cls(rho[..., 0, 0].real, rho[..., 0, 1])


def evolve(state: PureStateAngles, qubit: QubitParams, G, t=0.0) -> DensityMatrix2:
    """State at time ``t`` given the decoherence factor ``G = G(t)``.

    ``G`` and ``t`` may be arrays of the same shape.
    """
    G = np.asarray(G, dtype=complex)
    t = np.asarray(t, dtype=float)
    mag = np.abs(G)
    if np.any(mag > 1.0 + 1e-6):
        raise DomainError(f"|G| = {np.max(mag):.9g} > 1: upstream numerical failure")
    # round-off overshoot of |G| would make the state marginally non-positive
    G = np.divide(G, mag, out=G.copy(), where=mag > 1.0)
    ee = 0.5 * (1.0 + np.cos(state.theta)) * np.ones(np.broadcast(G, t).shape)
    phase = np.exp(-1j * (state.phi + qubit.omega0 * t))
    eg = 0.5 * np.sin(state.theta) * phase * np.conj(G)
    return DensityMatrix2(ee, eg)


def _fix_phase(v):
    """Rotate the global phase so the first non-negligible component is real positive."""
    for i, c in enumerate(v):
        if abs(c) > 1e-15:
            out = v * (abs(c) / c)
            out[i] = abs(c)
            return out
    return v


def eigendecompose(rho: DensityMatrix2):
    """Closed-form spectrum of a single 2x2 density matrix.

    Returns ``(p1, p2, v1, v2)`` with ``p1 >= p2``. In the maximally mixed
    case the computational basis is returned.
    """
    ee = float(rho.ee)
    eg = complex(rho.eg)
    d = ee - 0.5
    mag = abs(eg)
    radius = float(np.hypot(d, mag))
    p1, p2 = 0.5 + radius, 0.5 - radius
    if radius == 0.0:
        return p1, p2, np.array([1.0, 0.0], dtype=complex), np.array([0.0, 1.0], dtype=complex)
    # Bloch polar angle alpha and azimuth chi of the leading eigenvector
    half = 0.5 * np.arctan2(mag, d)
    chi = np.angle(eg) if mag > 0 else 0.0
    v1 = np.array([np.cos(half), np.exp(-1j * chi) * np.sin(half)], dtype=complex)
    v2 = np.array([np.sin(half), -np.exp(-1j * chi) * np.cos(half)], dtype=complex)
    return p1, p2, _fix_phase(v1), _fix_phase(v2)
