"""Exact decoherence function of a qubit under nonequilibrium telegraph noise.

The environment-averaged phase factor ``G(t) = <exp(i int_0^t xi)>`` has the
proper rational Laplace transform

    G(s) = [s^2 + (kappa + i a nu) s + kappa (2 lam + i a nu)]
           / [s^3 + kappa s^2 + (2 kappa lam + nu^2) s + kappa nu^2]

so ``G(t)`` is the sum of the residues of ``G(s) exp(s t)`` over the three
roots of the real cubic denominator. Simple poles give

    G(t) = sum_j r_j exp(s_j t),   r_j = numer(s_j) / prod_{k != j} (s_j - s_k).

When two or three poles (nearly) coincide the residues above blow up and
cancel. Such poles are grouped and their joint contribution is evaluated as a
divided difference expanded about the group centre, which reduces to the
confluent ``t**k exp(s t)`` formula for exactly repeated poles.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConvergenceError, DomainError, NearDegenerateRoots, StabilityWarning
from .params import NoiseParams

__all__ = [
    "RationalTransform",
    "DecoherenceFunction",
    "build_transform",
    "solve_poles",
    "residues",
    "eval_G",
    "decoherence_function",
    "dump_poles_csv",
    "DEGENERACY_TOL",
]

#: relative pole separation below which poles are treated as one cluster.
#: Companion-matrix roots of a triple pole come back ~eps**(1/3) apart, so
#: the threshold has to sit well above 1e-6.
DEGENERACY_TOL = 1e-4
_CLUSTER_ORDER = 40
_RESIDUAL_TOL = 1e-10


def _frozen(arr, dtype):
    arr = np.array(arr, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class RationalTransform:
    """Laplace-domain decoherence function as a (quadratic, cubic) ratio.

    Coefficients are stored highest power first, as for :func:`numpy.polyval`.
    """

    numer_coeffs: np.ndarray
    denom_coeffs: np.ndarray

    def __post_init__(self):
        num = _frozen(self.numer_coeffs, complex)
        den = _frozen(self.denom_coeffs, float)
        if num.shape != (3,) or num[0] != 1:
            raise ValueError("numerator must be a monic quadratic")
        if den.shape != (4,) or den[0] != 1:
            raise ValueError("denominator must be a monic cubic")
        object.__setattr__(self, "numer_coeffs", num)
        object.__setattr__(self, "denom_coeffs", den)

    def numerator(self, s):
        return np.polyval(self.numer_coeffs, s)

    def denominator(self, s):
        return np.polyval(self.denom_coeffs, s)

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        return self.numerator(s) / self.denominator(s)

    def numerator_roots(self):
        """Zeros ``u_+, u_-`` of the numerator (diagnostic only)."""
        return np.roots(self.numer_coeffs)

    @property
    def scale(self) -> float:
        """Fujiwara bound on the modulus of the denominator roots."""
        _, b, c, d = self.denom_coeffs
        return 2.0 * max(abs(b), abs(c) ** 0.5, abs(d / 2.0) ** (1.0 / 3.0))


def build_transform(p: NoiseParams) -> RationalTransform:
    """Coefficients of ``G(s)`` for the environment ``p``."""
    a, kappa, lam, nu = p.a, p.kappa, p.lam, p.nu
    numer = [1.0, complex(kappa, a * nu), kappa * complex(2.0 * lam, a * nu)]
    denom = [1.0, kappa, 2.0 * kappa * lam + nu * nu, kappa * nu * nu]
    return RationalTransform(numer, denom)


def _sort_roots(roots):
    # Re descending, then Im ascending
    return np.array(sorted(roots, key=lambda z: (-z.real, z.imag)), dtype=complex)


def _near(z, w, tol):
    """Relative closeness measured against the larger of the two moduli."""
    return abs(z - w) < tol * max(abs(z), abs(w))


def _any_near(roots, tol):
    n = len(roots)
    return any(_near(roots[i], roots[j], tol) for i in range(n) for j in range(i + 1, n))


def _conjugate_close(roots):
    """Impose exact conjugate symmetry on the roots of a real cubic."""
    roots = np.asarray(roots, dtype=complex)
    i_real = int(np.argmin(np.abs(roots.imag)))
    real_root = complex(roots[i_real].real, 0.0)
    z1, z2 = np.delete(roots, i_real)
    if abs(z1 - np.conj(z2)) < abs(z1 - z2):
        # conjugate pair (or a double root that came back slightly complex)
        m = 0.5 * (z1 + np.conj(z2))
        pair = [m, np.conj(m)]
    else:
        pair = [complex(z1.real, 0.0), complex(z2.real, 0.0)]
    return np.array([real_root, *pair], dtype=complex)


def solve_poles(rt: RationalTransform, *, degeneracy_tol=DEGENERACY_TOL):
    """Roots of the denominator cubic, polished and deterministically ordered.

    Companion-matrix eigenvalues followed by one Newton step per root.

    Raises
    ------
    NearDegenerateRoots
        If two roots ``z, w`` satisfy ``|z - w| < degeneracy_tol * max(|z|, |w|)``.
        The roots are attached to the exception.
    ConvergenceError
        If a polished root still leaves a residual above
        ``1e-10 * max(1, |s|^3)``.
    """
    coeffs = rt.denom_coeffs
    dcoeffs = np.polyder(coeffs)
    roots = np.roots(coeffs).astype(complex)
    polished = []
    for z in roots:
        dp = np.polyval(dcoeffs, z)
        if dp != 0:
            step = np.polyval(coeffs, z) / dp
            # a Newton step near a double root can overshoot; keep the better point
            cand = z - step
            if abs(np.polyval(coeffs, cand)) <= abs(np.polyval(coeffs, z)):
                z = cand
        polished.append(z)
    roots = _sort_roots(_conjugate_close(polished))

    for z in roots:
        resid = abs(np.polyval(coeffs, z))
        if resid > _RESIDUAL_TOL * max(1.0, abs(z) ** 3):
            raise ConvergenceError(
                f"pole {z!r} has residual {resid:.3e}",
                diagnostics={"roots": roots, "residual": resid},
            )

    if _any_near(roots, degeneracy_tol):
        raise NearDegenerateRoots(
            f"poles {roots!r} are closer than {degeneracy_tol:g} relative", roots=roots
        )
    return roots


def residues(rt: RationalTransform, poles, *, degeneracy_tol=DEGENERACY_TOL):
    """Simple-pole residues ``numer(s_j) / prod_{k != j}(s_j - s_k)``."""
    poles = np.asarray(poles, dtype=complex)
    if _any_near(poles, degeneracy_tol):
        raise NearDegenerateRoots("residues requested at near-degenerate poles", roots=poles)
    out = np.empty(len(poles), dtype=complex)
    for j, sj in enumerate(poles):
        others = np.delete(poles, j)
        out[j] = rt.numerator(sj) / np.prod(sj - others)
    return out


def _cluster(roots, tol):
    """Index groups of roots closer than ``tol`` (single linkage)."""
    groups = []
    for i, z in enumerate(roots):
        for g in groups:
            if any(_near(z, roots[j], tol) for j in g):
                g.append(i)
                break
        else:
            groups.append([i])
    return groups


def _taylor(coeffs, x0, order):
    """Taylor coefficients ``c_k = p^(k)(x0) / k!`` of a polynomial, k < order."""
    out = np.zeros(order, dtype=complex)
    p = np.asarray(coeffs, dtype=complex)
    for k in range(order):
        if p.size == 0:
            break
        out[k] = np.polyval(p, x0) / math.factorial(k)
        p = np.polyder(p) if p.size > 1 else p[:0]
    return out


def _series_divide(num, den, order):
    """First ``order`` coefficients of the power series ``num / den``."""
    q = np.zeros(order, dtype=complex)
    for k in range(order):
        acc = num[k] - sum(q[i] * den[k - i] for i in range(k))
        q[k] = acc / den[0]
    return q


def _cluster_terms(rt, roots, tol, order=_CLUSTER_ORDER):
    """Per pole cluster, polynomial-in-t coefficients of its residue contribution.

    The residues of ``N(s) e^{st} / prod(s - s_j)`` summed over a cluster equal
    the divided difference of ``f(s) = N(s) e^{st} / Q(s)`` (``Q`` collects the
    poles outside the cluster) over the cluster nodes. Expanding ``f`` around
    the cluster centre ``s0`` turns that into ``e^{s0 t} P(t)`` with

        P_k = (1/k!) sum_i h_i H_{i + k - m + 1},

    ``h_i`` the Taylor coefficients of ``N/Q`` at ``s0`` and ``H_j`` the complete
    homogeneous symmetric polynomials of the node offsets from ``s0``.

    Clustered roots are badly conditioned, so neither the centre nor the
    ``H_j`` are taken from them: ``s0`` follows from the root sum (Vieta) and
    the ``H_j`` are the series coefficients of ``1 / prod(1 - x_i z)``, read off
    the Taylor-shifted cubic divided by ``Q``. Exactly repeated poles give the
    usual confluent formula. Truncation error scales like
    ``(|offset| t)^order / order!``.
    """
    den = rt.denom_coeffs
    terms = []
    for group in _cluster(roots, tol):
        m = len(group)
        if m == 1:
            s = roots[group[0]]
            others = np.array([z for i, z in enumerate(roots) if i != group[0]])
            terms.append((s, (rt.numerator(s) / np.prod(s - others),)))
            continue
        rest = [z for i, z in enumerate(roots) if i not in group]
        s0 = (-den[1] - sum(rest)) / m
        q = np.poly(rest) if rest else np.array([1.0])
        q_local = _taylor(q, s0, order)
        h = _series_divide(_taylor(rt.numer_coeffs, s0, order), q_local, order)
        # local monic polynomial prod(x - x_i), ascending powers of x
        local = _series_divide(_taylor(den, s0, 4), q_local, m + 1)
        reciprocal = np.zeros(order, dtype=complex)
        reciprocal[: m + 1] = local[::-1] / local[m]
        unit = np.zeros(order, dtype=complex)
        unit[0] = 1.0
        H = _series_divide(unit, reciprocal, order)
        coeffs = []
        for k in range(order):
            acc = 0j
            for i in range(order):
                j = i + k - (m - 1)
                if 0 <= j < order:
                    acc += h[i] * H[j]
            coeffs.append(acc / math.factorial(k))
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        terms.append((complex(s0), tuple(coeffs)))
    return terms


@dataclass(frozen=True)
class DecoherenceFunction:
    """Pole/residue representation of ``G(t)`` for one environment.

    Attributes
    ----------
    params : NoiseParams
    poles : ndarray of complex
        Distinct poles in deterministic order. Three entries unless poles
        were merged by the confluent path.
    residues : ndarray of complex
        Coefficient of ``1/(s - s_j)`` at each pole; they always sum to one.
    confluent : bool
        True when near-degenerate poles were merged.
    """

    params: NoiseParams
    poles: np.ndarray
    residues: np.ndarray
    confluent: bool = False
    _terms: tuple = field(default=(), repr=False, compare=False)

    @classmethod
    def from_params(cls, p: NoiseParams, *, degeneracy_tol=DEGENERACY_TOL):
        rt = build_transform(p)
        try:
            poles = solve_poles(rt, degeneracy_tol=degeneracy_tol)
        except NearDegenerateRoots as exc:
            terms = _cluster_terms(rt, list(exc.roots), degeneracy_tol)
            poles = _frozen([s for s, _ in terms], complex)
            res = _frozen([c[0] for _, c in terms], complex)
            df = cls(p, poles, res, True, tuple(terms))
        else:
            res = residues(rt, poles, degeneracy_tol=degeneracy_tol)
            terms = tuple((s, (r,)) for s, r in zip(poles, res))
            df = cls(p, _frozen(poles, complex), _frozen(res, complex), False, terms)
        df._check_stability()
        return df

    def _check_stability(self):
        for s in self.poles:
            if s.real > 1e-9 * max(1.0, abs(s)):
                warnings.warn(
                    f"pole {s!r} has positive real part for {self.params}", StabilityWarning
                )

    @property
    def transform(self) -> RationalTransform:
        return build_transform(self.params)

    def __call__(self, t):
        return eval_G(self, t)

    def derivative_at_zero(self) -> complex:
        """``G'(0)``; equals ``i a nu`` for every admissible environment."""
        total = 0j
        for s, coeffs in self._terms:
            total += coeffs[0] * s
            if len(coeffs) > 1:
                total += coeffs[1]
        return total


def decoherence_function(p: NoiseParams, **kwargs) -> DecoherenceFunction:
    return DecoherenceFunction.from_params(p, **kwargs)


def eval_G(df: DecoherenceFunction, t):
    """Evaluate ``G(t)`` at a scalar or array of non-negative times."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or not np.all(np.isfinite(t_arr)):
        raise DomainError("G(t) is defined for finite t >= 0 only")
    out = np.zeros(t_arr.shape, dtype=complex)
    for s, coeffs in df._terms:
        poly = np.zeros(t_arr.shape, dtype=complex)
        for c in reversed(coeffs):
            poly = poly * t_arr + c
        out += poly * np.exp(s * t_arr)
    if out.ndim == 0:
        return complex(out)
    return out


def dump_poles_csv(df: DecoherenceFunction, fh):
    """Write ``re_pole,im_pole,re_res,im_res`` rows in pole order."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["re_pole", "im_pole", "re_res", "im_res"])
    for s, r in zip(df.poles, df.residues):
        writer.writerow([f"{v:.17g}" for v in (s.real, s.imag, r.real, r.imag)])
