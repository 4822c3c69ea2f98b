"""scikit-learn style front end.

Hyperparameters live in ``__init__`` so ``get_params`` / ``set_params`` and
``sklearn.base.clone`` work, which is what the sweep code relies on: a sweep
is a base estimator plus a sequence of ``set_params`` calls. ``fit`` takes no
data; it solves for the poles of the environment. Time points play the role
of samples in ``predict`` / ``transform``.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_times
from .decoherence import DEGENERACY_TOL, DecoherenceFunction, eval_G
from .dynamics import evolve
from .laplace import eval_G_oracle
from .metrics import (
    TimeGrid,
    bloch_grid_pairs,
    blp_measure,
    equatorial_pair,
    l1_coherence,
    qfi_closed_form,
    trace_distance,
)
from .params import NoiseParams, PureStateAngles, QubitParams

__all__ = ["DecoherenceModel", "CoherenceMetrics", "NonMarkovianity"]


class _NoiseMixin:
    def _noise_params(self):
        return NoiseParams(a=self.a, kappa=self.kappa, lam=self.lam, nu=self.nu)


class DecoherenceModel(_NoiseMixin, BaseEstimator):
    """Decoherence function ``G(t)`` of the telegraph-noise environment.

    Parameters
    ----------
    a, kappa, lam, nu : float
        Environment parameters in absolute rate units (see
        :class:`~telegraph_qubit.params.NoiseParams`).
    degeneracy_tol : float
        Relative pole separation below which the confluent formula is used.

    Attributes
    ----------
    params_ : NoiseParams
    function_ : DecoherenceFunction
    poles_, residues_ : ndarray of complex
    """

    def __init__(self, a=0.0, kappa=0.0, lam=1.0, nu=1.0, degeneracy_tol=DEGENERACY_TOL):
        self.a = a
        self.kappa = kappa
        self.lam = lam
        self.nu = nu
        self.degeneracy_tol = degeneracy_tol

    def fit(self, X=None, y=None):
        self.params_ = self._noise_params()
        self.function_ = DecoherenceFunction.from_params(
            self.params_, degeneracy_tol=self.degeneracy_tol
        )
        self.poles_ = self.function_.poles
        self.residues_ = self.function_.residues
        return self

    def predict(self, X):
        """Complex ``G(t)`` for each time in ``X``."""
        check_is_fitted(self, "function_")
        return eval_G(self.function_, check_times(X))

    def predict_oracle(self, X):
        """Same as :meth:`predict` via numerical Laplace inversion (``t > 0``)."""
        check_is_fitted(self, "function_")
        return eval_G_oracle(self.params_, check_times(X, strictly_positive=True))


class CoherenceMetrics(_NoiseMixin, TransformerMixin, BaseEstimator):
    """Map time points to ``[Re G, Im G, D, F_phi, C_l]``.

    ``D`` is the trace distance between the initial state and its antipode.
    """

    columns = ("G_re", "G_im", "D", "F_phi", "C_l")

    def __init__(self, a=0.0, kappa=0.0, lam=1.0, nu=1.0, theta=math.pi / 2, phi=0.0, omega0=0.0):
        self.a = a
        self.kappa = kappa
        self.lam = lam
        self.nu = nu
        self.theta = theta
        self.phi = phi
        self.omega0 = omega0

    def fit(self, X=None, y=None):
        self.state_ = PureStateAngles(self.theta, self.phi)
        self.qubit_ = QubitParams(self.omega0)
        self.function_ = DecoherenceFunction.from_params(self._noise_params())
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "function_")
        t = check_times(X)
        G = eval_G(self.function_, t)
        rho = evolve(self.state_, self.qubit_, G, t)
        D = trace_distance(rho, evolve(self.state_.antipode(), self.qubit_, G, t))
        F_phi = qfi_closed_form("phi", self.state_, G)
        C_l = l1_coherence(rho)
        return np.column_stack([G.real, G.imag, D, F_phi, C_l])

    def get_feature_names_out(self, input_features=None):
        return np.array(self.columns, dtype=object)


class NonMarkovianity(_NoiseMixin, BaseEstimator):
    """BLP measure of the environment on a finite horizon.

    Parameters
    ----------
    t_max : float, optional
        Horizon in absolute time; default ``50 / lam``.
    n_steps : int
        Number of grid points.
    pair_search : tuple of int or None
        ``(n_theta, n_phi)`` for a Bloch-sphere search over antipodal pairs;
        ``None`` uses only the equatorial pair.

    Attributes
    ----------
    result_ : NonMarkovianityResult
    N_ : float
    """

    def __init__(self, a=0.0, kappa=0.0, lam=1.0, nu=1.0, t_max=None, n_steps=5001, pair_search=None):
        self.a = a
        self.kappa = kappa
        self.lam = lam
        self.nu = nu
        self.t_max = t_max
        self.n_steps = n_steps
        self.pair_search = pair_search

    def fit(self, X=None, y=None):
        p = self._noise_params()
        t_max = self.t_max if self.t_max is not None else 50.0 / p.lam
        pairs = [equatorial_pair()]
        if self.pair_search is not None:
            pairs += bloch_grid_pairs(*self.pair_search)
        self.result_ = blp_measure(p, TimeGrid(t_max, self.n_steps), pairs)
        self.N_ = self.result_.N
        return self
