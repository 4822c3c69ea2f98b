"""Physical parameters of the qubit and its telegraph-noise environment.

All rates are absolute inverse-time quantities. The jump rate ``lam`` is the
natural unit: the CLI and the figure presets quote ``kappa`` and ``nu`` as
multiples of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import DomainError

__all__ = ["NoiseParams", "QubitParams", "PureStateAngles", "validate"]


def _finite(name: str, value) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class NoiseParams:
    """Nonequilibrium random-telegraph environment.

    Parameters
    ----------
    a : float
        Nonequilibrium parameter, ``|a| <= 1``. The noise starts in ``+nu``
        with probability ``(1 + a) / 2``; ``a = 0`` is the equilibrium case.
    kappa : float
        Decay rate of the exponential memory kernel ``kappa * exp(-kappa*t)``.
        ``kappa = 0`` is admitted (frozen noise).
    lam : float
        Mean jump rate of the telegraph process, ``lam > 0``.
    nu : float
        Noise amplitude; the process jumps between ``+nu`` and ``-nu``.
    """

    a: float
    kappa: float
    lam: float = 1.0
    nu: float = 1.0

    def __post_init__(self):
        a = _finite("a", self.a)
        kappa = _finite("kappa", self.kappa)
        lam = _finite("lam", self.lam)
        nu = _finite("nu", self.nu)
        if abs(a) > 1.0:
            raise DomainError(f"a must satisfy |a| <= 1, got a={a!r}")
        if kappa < 0.0:
            raise DomainError(f"kappa must be >= 0, got kappa={kappa!r}")
        if lam <= 0.0:
            raise DomainError(f"lam must be > 0, got lam={lam!r}")
        if nu <= 0.0:
            raise DomainError(f"nu must be > 0, got nu={nu!r}")
        # normalise ints/numpy scalars to plain floats
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "nu", nu)

    @classmethod
    def in_lambda_units(cls, a, kappa_over_lambda, nu_over_lambda, lam=1.0):
        """Build from rates quoted as multiples of the jump rate."""
        lam = _finite("lam", lam)
        return cls(a=a, kappa=kappa_over_lambda * lam, lam=lam, nu=nu_over_lambda * lam)

    @property
    def is_equilibrium(self) -> bool:
        return self.a == 0.0

    def scaled(self, c: float) -> NoiseParams:
        """Same environment with every rate multiplied by ``c``."""
        return NoiseParams(a=self.a, kappa=c * self.kappa, lam=c * self.lam, nu=c * self.nu)


@dataclass(frozen=True)
class QubitParams:
    """Bare qubit: ``H = (omega0 + xi(t)) sigma_z / 2`` with hbar = 1."""

    omega0: float = 0.0

    def __post_init__(self):
        omega0 = _finite("omega0", self.omega0)
        if omega0 < 0.0:
            raise DomainError(f"omega0 must be >= 0, got omega0={omega0!r}")
        object.__setattr__(self, "omega0", omega0)


@dataclass(frozen=True)
class PureStateAngles:
    """Initial state ``cos(theta/2)|e> + exp(i phi) sin(theta/2)|g>``."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = _finite("theta", self.theta)
        phi = _finite("phi", self.phi)
        if not 0.0 <= theta <= math.pi:
            raise DomainError(f"theta must lie in [0, pi], got theta={theta!r}")
        if not 0.0 <= phi < 2.0 * math.pi:
            raise DomainError(f"phi must lie in [0, 2*pi), got phi={phi!r}")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    @classmethod
    def wrapped(cls, theta, phi) -> PureStateAngles:
        """Construct with ``phi`` reduced modulo 2*pi."""
        phi = math.fmod(_finite("phi", phi), 2.0 * math.pi)
        if phi < 0.0:
            phi += 2.0 * math.pi
        if phi >= 2.0 * math.pi:  # fmod rounding at the boundary
            phi = 0.0
        return cls(theta=theta, phi=phi)

    def antipode(self) -> PureStateAngles:
        """The orthogonal pure state (opposite point on the Bloch sphere)."""
        return PureStateAngles.wrapped(math.pi - self.theta, self.phi + math.pi)


def validate(params):
    """Re-check a parameter object and return it unchanged.

    Accepts a :class:`NoiseParams` or a mapping with keys ``a``, ``kappa``,
    ``lam`` and ``nu``. Raises :class:`DomainError` naming the violated
    constraint.
    """
    if isinstance(params, NoiseParams):
        return NoiseParams(params.a, params.kappa, params.lam, params.nu)
    if isinstance(params, dict):
        try:
            return NoiseParams(**params)
        except TypeError as exc:
            raise DomainError(str(exc)) from None
    raise DomainError(f"cannot validate object of type {type(params).__name__}")
