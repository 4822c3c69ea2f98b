"""Qubit dephasing in a nonequilibrium random-telegraph environment.

Exact decoherence function by residue inversion, plus the derived BLP
non-Markovianity, quantum Fisher information and l1 coherence.
"""

from .decoherence import (
    DecoherenceFunction,
    RationalTransform,
    build_transform,
    decoherence_function,
    dump_poles_csv,
    eval_G,
    residues,
    solve_poles,
)
from .dynamics import DensityMatrix2, eigendecompose, evolve
from .estimators import CoherenceMetrics, DecoherenceModel, NonMarkovianity
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DegenerateSpectrumError,
    DomainError,
    GridWarning,
    IdentityViolation,
    NearDegenerateRoots,
    StabilityWarning,
    UnknownFigure,
)
from .laplace import eval_G_oracle, oracle_with_error
from .metrics import (
    MetricSeries,
    NonMarkovianityResult,
    TimeGrid,
    blp_measure,
    compute_series,
    l1_coherence,
    qfi_closed_form,
    qfi_spectral,
    trace_distance,
    verify_identity,
)
from .params import NoiseParams, PureStateAngles, QubitParams, validate
from .sweep import FIGURES, FigureRecipe, SweepSpec, run_figure, run_sweep

__all__ = [
    "DecoherenceFunction",
    "RationalTransform",
    "build_transform",
    "decoherence_function",
    "dump_poles_csv",
    "eval_G",
    "residues",
    "solve_poles",
    "DensityMatrix2",
    "eigendecompose",
    "evolve",
    "CoherenceMetrics",
    "DecoherenceModel",
    "NonMarkovianity",
    "ConfigError",
    "ConvergenceError",
    "DegenerateSpectrumError",
    "DomainError",
    "GridWarning",
    "IdentityViolation",
    "NearDegenerateRoots",
    "StabilityWarning",
    "UnknownFigure",
    "eval_G_oracle",
    "oracle_with_error",
    "MetricSeries",
    "NonMarkovianityResult",
    "TimeGrid",
    "blp_measure",
    "compute_series",
    "l1_coherence",
    "qfi_closed_form",
    "qfi_spectral",
    "trace_distance",
    "verify_identity",
    "NoiseParams",
    "PureStateAngles",
    "QubitParams",
    "validate",
    "FIGURES",
    "FigureRecipe",
    "SweepSpec",
    "run_figure",
    "run_sweep",
]

__version__ = "0.1.0"
