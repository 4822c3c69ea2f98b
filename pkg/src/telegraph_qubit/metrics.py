"""Trace distance, BLP non-Markovianity, quantum Fisher information, l1 coherence."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .decoherence import DecoherenceFunction, eval_G
from .dynamics import DensityMatrix2, eigendecompose, evolve
from .exceptions import DegenerateSpectrumError, DomainError, GridWarning, IdentityViolation
from .params import PureStateAngles, QubitParams

__all__ = [
    "TimeGrid",
    "MetricSeries",
    "NonMarkovianityResult",
    "IdentityReport",
    "trace_distance",
    "equatorial_pair",
    "bloch_grid_pairs",
    "positive_variation",
    "blp_measure",
    "qfi_closed_form",
    "qfi_spectral",
    "phi_family",
    "theta_family",
    "l1_coherence",
    "compute_series",
    "verify_identity",
]

ZERO_EIGENVALUE_CUTOFF = 1e-12
IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class TimeGrid:
    """Uniform samples ``t_k = k * t_max / (n - 1)``, ``k = 0 .. n-1``."""

    t_max: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise DomainError(f"t_max must be > 0, got {self.t_max!r}")
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "t_max", float(self.t_max))
        object.__setattr__(self, "n", int(self.n))

    @property
    def times(self):
        return np.arange(self.n) * (self.t_max / (self.n - 1))

    def refined(self) -> TimeGrid:
        """Grid with half the spacing; contains every point of this one."""
        return TimeGrid(self.t_max, 2 * self.n - 1)


@dataclass(frozen=True)
class MetricSeries:
    """Per-time trace distance, phase QFI and l1 coherence on a grid.

    ``D`` is the distance between the chosen initial state and its antipode
    (for an equatorial state this is the BLP-optimal pair).
    """

    grid: TimeGrid
    D: np.ndarray
    F_phi: np.ndarray
    C_l: np.ndarray
    G: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("D", "F_phi", "C_l"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.grid.n,):
                raise ValueError(f"{name} must have one entry per grid point")
            object.__setattr__(self, name, arr)
        if np.any(self.D < -1e-12) or np.any(self.D > 1 + 1e-12):
            raise DomainError("trace distance outside [0, 1]")
        if np.any(self.F_phi < 0) or np.any(self.C_l < 0):
            raise DomainError("F_phi and C_l must be non-negative")


@dataclass(frozen=True)
class NonMarkovianityResult:
    N: float
    pair: tuple
    horizon: TimeGrid
    per_pair: tuple = ()


@dataclass(frozen=True)
class IdentityReport:
    max_abs_error: float
    worst_index: int
    worst_time: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_abs_error < self.tol


def trace_distance(r1: DensityMatrix2, r2: DensityMatrix2):
    """``D = Tr|rho1 - rho2| / 2``; for qubits ``sqrt(d^2 + |c|^2)``."""
    d = r1.ee - r2.ee
    c = r1.eg - r2.eg
    return np.sqrt(d * d + np.abs(c) ** 2)


def equatorial_pair(phi=0.0):
    """Antipodal pair on the equator, ``(pi/2, phi)`` and ``(pi/2, phi + pi)``."""
    s = PureStateAngles.wrapped(math.pi / 2, phi)
    return (s, s.antipode())


def bloch_grid_pairs(n_theta, n_phi):
    """Antipodal pairs from a coarse grid over the upper Bloch hemisphere."""
    pairs = []
    for theta in np.linspace(0.0, math.pi / 2, n_theta):
        for phi in np.linspace(0.0, 2 * math.pi, n_phi, endpoint=False):
            s = PureStateAngles.wrapped(float(theta), float(phi))
            pairs.append((s, s.antipode()))
    return pairs


def positive_variation(values):
    """Sum of the positive increments of a sampled curve."""
    return float(np.clip(np.diff(values), 0.0, None).sum())


def _pair_distance(pair, G, times, qubit):
    r1 = evolve(pair[0], qubit, G, times)
    r2 = evolve(pair[1], qubit, G, times)
    return trace_distance(r1, r2)


def _blp_on_grid(df, grid, pairs, qubit):
    times = grid.times
    G = eval_G(df, times)
    return [positive_variation(_pair_distance(pr, G, times, qubit)) for pr in pairs]


def blp_measure(p, grid=None, pairs=None, *, qubit=None, check_grid=True):
    """BLP non-Markovianity: max over pairs of the summed positive growth of D.

    Parameters
    ----------
    p : NoiseParams or DecoherenceFunction
    grid : TimeGrid, optional
        Integration horizon. Defaults to ``t_max = 50 / lam`` with 5001
        points. The result is horizon dependent whenever ``kappa = 0``.
    pairs : sequence of (PureStateAngles, PureStateAngles), optional
        Candidate initial pairs; defaults to the equatorial antipodal pair.
    check_grid : bool
        Re-evaluate on a twice finer grid and emit :class:`GridWarning` if
        ``N`` moves by more than 1 %.
    """
    df = p if isinstance(p, DecoherenceFunction) else DecoherenceFunction.from_params(p)
    if grid is None:
        grid = TimeGrid(50.0 / df.params.lam, 5001)
    if pairs is None:
        pairs = [equatorial_pair()]
    pairs = list(pairs)
    if not pairs:
        raise ValueError("at least one initial-state pair is required")
    qubit = qubit or QubitParams()

    values = _blp_on_grid(df, grid, pairs, qubit)
    best = int(np.argmax(values))
    N = values[best]
    if check_grid:
        fine = _blp_on_grid(df, grid.refined(), [pairs[best]], qubit)[0]
        if abs(fine - N) > 0.01 * max(abs(N), 1e-12) and abs(fine - N) > 1e-12:
            warnings.warn(
                f"N changed from {N:.6g} to {fine:.6g} on grid refinement (n={grid.n})",
                GridWarning,
            )
    return NonMarkovianityResult(N=N, pair=pairs[best], horizon=grid, per_pair=tuple(values))


def qfi_closed_form(param, state: PureStateAngles, G):
    """QFI of the evolved state w.r.t. ``theta`` (always 1) or ``phi``."""
    if param == "theta":
        return np.ones_like(np.abs(G), dtype=float) if np.ndim(G) else 1.0
    if param == "phi":
        return np.abs(G) ** 2 * math.sin(state.theta) ** 2
    raise ValueError(f"param must be 'theta' or 'phi', got {param!r}")


def phi_family(theta, G, omega0=0.0, t=0.0):
    """``phi -> rho(t)`` at fixed polar angle and decoherence factor."""

    def family(phi):
        return evolve(PureStateAngles.wrapped(theta, phi), QubitParams(omega0), G, t)

    return family


def theta_family(phi, G, omega0=0.0, t=0.0):
    """``theta -> rho(t)`` at fixed azimuth and decoherence factor."""

    def family(theta):
        state = PureStateAngles.wrapped(theta, phi)
        return evolve(state, QubitParams(omega0), G, t)

    return family


def _spectral_once(family, x0, h):
    lo = eigendecompose(family(x0 - h))
    mid = eigendecompose(family(x0))
    hi = eigendecompose(family(x0 + h))
    p = mid[:2]
    vecs = mid[2:]
    dp = [(hi[i] - lo[i]) / (2 * h) for i in range(2)]
    dv = [(hi[2 + i] - lo[2 + i]) / (2 * h) for i in range(2)]

    if abs(p[0] - p[1]) < 1e-8:
        drho = np.abs(family(x0 + h).matrix() - family(x0 - h).matrix()).max() / (2 * h)
        if drho > 1e-8:
            raise DegenerateSpectrumError(
                f"degenerate spectrum at {x0!r} while the state still depends on the parameter"
            )
        return 0.0

    classical = sum(dp[i] ** 2 / p[i] for i in range(2) if p[i] >= ZERO_EIGENVALUE_CUTOFF)
    quantum = 0.0
    for i in range(2):
        for j in range(2):
            if i != j:
                overlap = np.vdot(vecs[i], dv[j])
                quantum += (p[i] - p[j]) ** 2 / (p[i] + p[j]) * abs(overlap) ** 2
    return float(classical + 2.0 * quantum)


def qfi_spectral(family, x0, dx=1e-5, *, richardson=True):
    """QFI from the spectral formula with finite-difference derivatives.

    ``family(x)`` must return a scalar :class:`DensityMatrix2`. Eigenvalues
    below ``1e-12`` are left out of the classical part. With ``richardson``
    the value is recomputed at ``dx / 2`` and a :class:`RuntimeWarning` is
    issued if the two disagree beyond ``1e-6``.
    """
    F = _spectral_once(family, x0, dx)
    if richardson:
        F_half = _spectral_once(family, x0, dx / 2)
        if abs(F - F_half) > 1e-6 * max(1.0, abs(F)):
            warnings.warn(
                f"spectral QFI not converged in step: {F:.10g} vs {F_half:.10g}", RuntimeWarning
            )
    return F


def l1_coherence(rho: DensityMatrix2):
    """Sum of absolute off-diagonal elements, ``2 |rho_eg|``."""
    return 2.0 * np.abs(rho.eg)


def compute_series(p, state: PureStateAngles, grid: TimeGrid, qubit=None) -> MetricSeries:
    """Evaluate D, F_phi and C_l on every grid point for one environment."""
    df = p if isinstance(p, DecoherenceFunction) else DecoherenceFunction.from_params(p)
    qubit = qubit or QubitParams()
    times = grid.times
    G = eval_G(df, times)
    rho = evolve(state, qubit, G, times)
    D = trace_distance(rho, evolve(state.antipode(), qubit, G, times))
    F_phi = qfi_closed_form("phi", state, G)
    C_l = l1_coherence(rho)
    return MetricSeries(grid, D, F_phi, C_l, G)


def verify_identity(series: MetricSeries, tol=IDENTITY_TOL, *, raise_on_fail=True) -> IdentityReport:
    """Check ``F_phi == C_l**2`` pointwise."""
    err = np.abs(series.F_phi - series.C_l**2)
    k = int(np.argmax(err))
    report = IdentityReport(float(err[k]), k, float(series.grid.times[k]), tol)
    if raise_on_fail and not report.passed:
        raise IdentityViolation(
            f"|F_phi - C_l^2| = {err[k]:.3e} at index {k} (t = {report.worst_time:.6g})",
            index=k,
            time=report.worst_time,
        )
    return report
