"""Fast consistency checks behind ``telegraph-qubit selftest``."""

import math

import numpy as np

from .decoherence import DecoherenceFunction, eval_G
from .laplace import oracle_with_error
from .metrics import TimeGrid, compute_series, verify_identity
from .params import NoiseParams, PureStateAngles

_CASES = [
    NoiseParams(0.5, 8.0, 1.0, 0.8),
    NoiseParams(-0.3, 1.0, 1.0, 4.0),
    NoiseParams(1.0, 0.5, 2.0, 3.0),
    NoiseParams(0.0, 0.0, 1.0, 0.8),
]


def _checks():
    t = np.linspace(0.01, 20.0, 200)
    for p in _CASES:
        df = DecoherenceFunction.from_params(p)
        r = complex(np.sum(df.residues))
        yield f"residue sum {p}", abs(r - 1) < 1e-10, abs(r - 1)
        d = abs(df.derivative_at_zero() - 1j * p.a * p.nu)
        yield f"G'(0) = i a nu {p}", d < 1e-8 * max(1.0, abs(p.a * p.nu)), d
        g = eval_G(df, t)
        o, err = oracle_with_error(p, t)
        diff = float(np.max(np.abs(g - o) / np.maximum(np.abs(g), 1e-3)))
        yield f"oracle agreement {p}", diff < 1e-6 and float(err.max()) < 1e-7, diff
        series = compute_series(p, PureStateAngles(math.pi / 2), TimeGrid(20.0, 401))
        rep = verify_identity(series, raise_on_fail=False)
        yield f"F_phi = C_l^2 {p}", rep.passed, rep.max_abs_error
    p = NoiseParams(0.5, 0.0, 1.0, 0.8)
    t = np.linspace(0.0, 25.0, 500)
    closed = np.cos(0.8 * t) + 0.5j * np.sin(0.8 * t)
    d = float(np.max(np.abs(eval_G(DecoherenceFunction.from_params(p), t) - closed)))
    yield "kappa = 0 closed form", d < 1e-8, d


def run_selftest(out):
    ok = True
    for name, passed, value in _checks():
        ok &= bool(passed)
        out.write(f"{'PASS' if passed else 'FAIL'}  {name}  ({value:.3e})\n")
    return ok
