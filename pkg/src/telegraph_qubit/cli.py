"""Command line interface.

Rates ``--kappa`` and ``--nu`` are multiples of the jump rate ``--lambda``;
``--tmax`` is in units of ``1/lambda``. A ``--config`` file holds the same
options as ``key=value`` lines (dashes or underscores, without the leading
``--``); explicit flags win over the file.

Exit status: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import re
import sys

import numpy as np

from .decoherence import DecoherenceFunction, dump_poles_csv, eval_G
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DegenerateSpectrumError,
    DomainError,
    IdentityViolation,
    NearDegenerateRoots,
    UnknownFigure,
)
from .laplace import oracle_with_error
from .metrics import TimeGrid, bloch_grid_pairs, blp_measure, equatorial_pair
from .params import NoiseParams, PureStateAngles, QubitParams
from .sweep import FIGURES, KNOBS, OUTPUTS, SweepSpec, format_float, run_figure, run_sweep

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

_CONFIG_ERRORS = (ConfigError, DomainError, UnknownFigure)
_NUMERICAL_ERRORS = (NearDegenerateRoots, ConvergenceError, DegenerateSpectrumError, IdentityViolation)

_DEFAULTS = {
    "a": 0.5,
    "kappa": 8.0,
    "nu": 0.8,
    "lambda": 1.0,
    "theta": "pi/2",
    "phi": "0",
    "omega0": 0.0,
    "tmax": None,
    "steps": None,
    "out": None,
    "format": "csv",
    "jobs": 1,
}

_ANGLE = re.compile(r"^\s*([0-9.eE+-]*)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_angle(text) -> float:
    """Parse ``1.2``, ``pi``, ``pi/3`` or ``2*pi/3`` into radians."""
    if isinstance(text, (int, float)):
        return float(text)
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(str(text))
    if not m:
        raise ConfigError(f"cannot parse angle {text!r}")
    coef = {"": "1", "+": "1", "-": "-1"}.get(m.group(1), m.group(1))
    try:
        return float(coef) * math.pi / (float(m.group(2)) if m.group(2) else 1.0)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


def parse_values(text):
    """Comma list ``0,0.5,1`` or linear range ``start:stop:num``."""
    text = text.strip()
    if not text:
        raise ConfigError("empty value list")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:num, got {text!r}")
        start, stop = parse_angle(parts[0]), parse_angle(parts[1])
        try:
            num = int(parts[2])
        except ValueError:
            raise ConfigError(f"range count must be an integer, got {parts[2]!r}") from None
        if num < 1:
            raise ConfigError("range count must be >= 1")
        return tuple(round(float(v), 12) for v in np.linspace(start, stop, num))
    return tuple(parse_angle(v) for v in text.split(",") if v.strip())


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    options = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            options[key.lstrip("-").replace("-", "_")] = value
    return options


def _add_common(p):
    g = p.add_argument_group("model")
    g.add_argument("--config", help="key=value file with defaults for these options")
    g.add_argument("--a", type=float, help="nonequilibrium parameter, |a| <= 1")
    g.add_argument("--kappa", type=float, help="memory decay rate / lambda")
    g.add_argument("--nu", type=float, help="noise amplitude / lambda")
    g.add_argument("--lambda", dest="lambda_", type=float, help="jump rate (absolute)")
    g.add_argument("--theta", help="initial polar angle, e.g. pi/2")
    g.add_argument("--phi", help="initial azimuth")
    g.add_argument("--omega0", type=float, help="qubit frequency (absolute)")
    g.add_argument("--tmax", type=float, help="horizon in units of 1/lambda")
    g.add_argument("--steps", type=int, help="number of time points")
    g.add_argument("--out", help="output path (file, or directory for 'figure')")
    g.add_argument("--format", choices=["csv"], help="output format")
    g.add_argument("--jobs", type=int, help="worker threads for sweeps")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="telegraph-qubit",
        description="Qubit dephasing under nonequilibrium random telegraph noise.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gfunc", help="tabulate the decoherence function G(t)")
    _add_common(p)
    p.add_argument("--oracle", action="store_true", help="add numerical-inversion columns")
    p.add_argument("--poles", action="store_true", help="dump poles and residues instead")

    p = sub.add_parser("sweep", help="vary one knob and tabulate metrics")
    _add_common(p)
    p.add_argument("--vary", choices=KNOBS, required=True)
    p.add_argument("--values", required=True, help="'v1,v2,...' or 'start:stop:num'")
    p.add_argument("--outputs", default="F_phi,C_l", help=f"subset of {','.join(OUTPUTS)}")

    p = sub.add_parser("nonmarkov", help="BLP non-Markovianity on a finite horizon")
    _add_common(p)
    p.add_argument("--pair-search", help="'n_theta,n_phi' Bloch grid of antipodal pairs")

    p = sub.add_parser("figure", help="write the CSV panels of a figure preset")
    _add_common(p)
    p.add_argument("id", help=f"one of {', '.join(FIGURES)}, or 'all'")

    p = sub.add_parser("selftest", help="quick internal consistency checks")
    _add_common(p)
    return parser


def resolve_options(args):
    """Merge defaults, config file and explicit flags (in that order)."""
    opts = dict(_DEFAULTS)
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            if key == "lambda_":
                key = "lambda"
            if key not in opts:
                raise ConfigError(f"unknown config key {key!r}")
            opts[key] = value
    for key in opts:
        flag = getattr(args, "lambda_" if key == "lambda" else key, None)
        if flag is not None:
            opts[key] = flag
    try:
        for key in ("a", "kappa", "nu", "lambda", "omega0"):
            opts[key] = float(opts[key])
        if opts["tmax"] is not None:
            opts["tmax"] = float(opts["tmax"])
        for key in ("steps", "jobs"):
            if opts[key] is not None:
                opts[key] = int(opts[key])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    opts["theta"] = parse_angle(opts["theta"])
    opts["phi"] = parse_angle(opts["phi"])
    if opts["format"] != "csv":
        raise ConfigError(f"unsupported format {opts['format']!r}")
    if opts["jobs"] < 1:
        raise ConfigError("--jobs must be >= 1")
    return opts


def _noise(opts):
    lam = opts["lambda"]
    return NoiseParams.in_lambda_units(opts["a"], opts["kappa"], opts["nu"], lam=lam)


def _grid(opts, t_max, n):
    return TimeGrid(opts["tmax"] if opts["tmax"] is not None else t_max, opts["steps"] or n)


def _emit(text, opts):
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows):
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_gfunc(args, opts):
    p = _noise(opts)
    df = DecoherenceFunction.from_params(p)
    if args.poles:
        buf = io.StringIO()
        dump_poles_csv(df, buf)
        _emit(buf.getvalue(), opts)
        return 0
    grid = _grid(opts, 20.0, 201)
    lt = grid.times
    t = lt / p.lam
    G = eval_G(df, t)
    header = ["lambda_t", "G_re", "G_im", "G_abs"]
    extra = None
    if args.oracle:
        header += ["oracle_re", "oracle_im", "oracle_err_est"]
        pos = t > 0
        og, oe = np.full(t.shape, np.nan, complex), np.full(t.shape, np.nan)
        og[~pos], oe[~pos] = 1.0, 0.0
        if pos.any():
            og[pos], oe[pos] = oracle_with_error(p, t[pos])
        extra = (og, oe)
    rows = [header]
    for k in range(grid.n):
        row = [lt[k], G[k].real, G[k].imag, abs(G[k])]
        if extra:
            row += [extra[0][k].real, extra[0][k].imag, extra[1][k]]
        rows.append([format_float(v) for v in row])
    _emit(_rows_to_csv(rows), opts)
    return 0


def cmd_sweep(args, opts):
    outputs = tuple(o.strip() for o in args.outputs.split(",") if o.strip())
    spec = SweepSpec(
        vary=args.vary,
        values=parse_values(args.values),
        noise=_noise(opts),
        state=PureStateAngles.wrapped(opts["theta"], opts["phi"]),
        qubit=QubitParams(opts["omega0"]),
        grid=_grid(opts, 50.0 if outputs == ("N",) else 20.0, 5001 if outputs == ("N",) else 2001),
        outputs=outputs,
    )
    _emit(run_sweep(spec, jobs=opts["jobs"]), opts)
    return 0


def cmd_nonmarkov(args, opts):
    p = _noise(opts)
    grid = _grid(opts, 50.0, 5001)
    grid = TimeGrid(grid.t_max / p.lam, grid.n)
    pairs = [equatorial_pair(opts["phi"])]
    if args.pair_search:
        try:
            n_theta, n_phi = (int(x) for x in args.pair_search.split(","))
        except ValueError:
            raise ConfigError("--pair-search expects 'n_theta,n_phi'") from None
        pairs += bloch_grid_pairs(n_theta, n_phi)
    res = blp_measure(p, grid, pairs)
    s1, s2 = res.pair
    rows = [
        ["N", "theta1", "phi1", "theta2", "phi2", "lambda_t_max", "steps"],
        [
            format_float(res.N),
            format_float(s1.theta),
            format_float(s1.phi),
            format_float(s2.theta),
            format_float(s2.phi),
            format_float(grid.t_max * p.lam),
            str(grid.n),
        ],
    ]
    _emit(_rows_to_csv(rows), opts)
    return 0


def cmd_figure(args, opts):
    ids = list(FIGURES) if args.id == "all" else [args.id]
    for fig in ids:
        for path in run_figure(fig, opts["out"] or ".", jobs=opts["jobs"]):
            print(path)
    return 0


def cmd_selftest(args, opts):
    from .selftest import run_selftest

    ok = run_selftest(sys.stdout)
    return 0 if ok else EXIT_NUMERICAL


_COMMANDS = {
    "gfunc": cmd_gfunc,
    "sweep": cmd_sweep,
    "nonmarkov": cmd_nonmarkov,
    "figure": cmd_figure,
    "selftest": cmd_selftest,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        opts = resolve_options(args)
        return _COMMANDS[args.command](args, opts)
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
