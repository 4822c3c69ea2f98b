"""Parameter sweeps and the figure presets, emitted as deterministic CSV.

Every float is written with 17 significant digits so a rerun reproduces the
file byte for byte. Rows are ordered knob-major, time-minor.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sklearn.base import clone

from .estimators import CoherenceMetrics, NonMarkovianity
from .exceptions import ConfigError, DomainError, UnknownFigure
from .metrics import MetricSeries, TimeGrid, verify_identity
from .params import NoiseParams, PureStateAngles, QubitParams

__all__ = [
    "KNOBS",
    "OUTPUTS",
    "SweepSpec",
    "FigureRecipe",
    "FIGURES",
    "run_sweep",
    "sweep_rows",
    "run_figure",
    "format_float",
]

KNOBS = ("a", "kappa_over_lambda", "nu_over_lambda", "theta")
OUTPUTS = ("G", "D", "N", "F_phi", "C_l")
_PARAM_COLUMNS = ("a", "kappa_over_lambda", "nu_over_lambda", "theta", "phi")


def format_float(x) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.17g}"


@dataclass(frozen=True)
class SweepSpec:
    """One knob varied over explicit values, everything else fixed.

    ``grid`` is in units of ``1/lam``: the physical times are
    ``grid.times / noise.lam``. When ``N`` is the only requested output the
    sweep emits one row per knob value, evaluated on ``grid`` as horizon.
    """

    vary: str
    values: tuple
    noise: NoiseParams = field(default_factory=lambda: NoiseParams(a=0.5, kappa=8.0, lam=1.0, nu=0.8))
    state: PureStateAngles = field(default_factory=lambda: PureStateAngles(math.pi / 2, 0.0))
    qubit: QubitParams = field(default_factory=QubitParams)
    grid: TimeGrid = field(default_factory=lambda: TimeGrid(20.0, 2001))
    outputs: tuple = ("F_phi", "C_l")

    def __post_init__(self):
        if self.vary not in KNOBS:
            raise ConfigError(f"unknown knob {self.vary!r}; choose from {', '.join(KNOBS)}")
        try:
            values = tuple(float(v) for v in self.values)
        except (TypeError, ValueError):
            raise ConfigError(f"sweep values must be numbers, got {self.values!r}") from None
        if not values:
            raise ConfigError("sweep values list is empty")
        outputs = tuple(self.outputs)
        bad = [o for o in outputs if o not in OUTPUTS]
        if bad or not outputs:
            raise ConfigError(f"unknown outputs {bad!r}; choose from {', '.join(OUTPUTS)}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "outputs", tuple(o for o in OUTPUTS if o in outputs))
        for v in values:
            try:
                self.point(v)
            except DomainError as exc:
                raise ConfigError(f"{self.vary}={v!r} is not admissible: {exc}") from None

    @property
    def per_time(self) -> bool:
        return self.outputs != ("N",)

    def point(self, value):
        """Noise parameters and initial state with the knob set to ``value``."""
        n = self.noise
        noise, state = n, self.state
        if self.vary == "a":
            noise = NoiseParams(value, n.kappa, n.lam, n.nu)
        elif self.vary == "kappa_over_lambda":
            noise = NoiseParams(n.a, value * n.lam, n.lam, n.nu)
        elif self.vary == "nu_over_lambda":
            noise = NoiseParams(n.a, n.kappa, n.lam, value * n.lam)
        else:
            state = PureStateAngles(value, self.state.phi)
        return noise, state

    def describe(self) -> dict:
        n = self.noise
        return {
            "vary": self.vary,
            "values": ",".join(format_float(v) for v in self.values),
            "a": format_float(n.a),
            "kappa_over_lambda": format_float(n.kappa / n.lam),
            "nu_over_lambda": format_float(n.nu / n.lam),
            "lambda": format_float(n.lam),
            "theta": format_float(self.state.theta),
            "phi": format_float(self.state.phi),
            "omega0": format_float(self.qubit.omega0),
            "lambda_t_max": format_float(self.grid.t_max),
            "steps": str(self.grid.n),
            "outputs": ",".join(self.outputs),
        }


def _header(spec: SweepSpec):
    cols = list(_PARAM_COLUMNS)
    if spec.per_time:
        cols.append("lambda_t")
    for o in spec.outputs:
        cols.extend(["G_re", "G_im"] if o == "G" else [o])
    return cols


_metrics_template = CoherenceMetrics()
_blp_template = NonMarkovianity()


def _evaluate_point(spec: SweepSpec, value):
    noise, state = spec.point(value)
    noise_kw = {"a": noise.a, "kappa": noise.kappa, "lam": noise.lam, "nu": noise.nu}
    try:
        N = None
        if "N" in spec.outputs:
            blp = clone(_blp_template).set_params(
                **noise_kw, t_max=spec.grid.t_max / noise.lam, n_steps=spec.grid.n
            )
            N = blp.fit().N_
        cols = None
        if spec.per_time:
            est = clone(_metrics_template).set_params(
                **noise_kw, theta=state.theta, phi=state.phi, omega0=spec.qubit.omega0
            )
            cols = est.fit().transform(spec.grid.times / noise.lam)
            series = MetricSeries(spec.grid, cols[:, 2], cols[:, 3], cols[:, 4])
            verify_identity(series)
    except Exception as exc:
        try:
            wrapped = type(exc)(f"{spec.vary}={format_float(value)}: {exc}")
        except Exception:
            raise exc
        wrapped.knob = (spec.vary, value)
        raise wrapped from exc
    return noise, state, N, cols


def sweep_rows(spec: SweepSpec, jobs=1):
    """Header plus data rows (lists of strings) in deterministic order."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda v: _evaluate_point(spec, v), spec.values))
    else:
        results = [_evaluate_point(spec, v) for v in spec.values]

    rows = [_header(spec)]
    index = {"G": [0, 1], "D": [2], "F_phi": [3], "C_l": [4]}
    lt = spec.grid.times
    for noise, state, N, cols in results:
        params = [
            format_float(noise.a),
            format_float(noise.kappa / noise.lam),
            format_float(noise.nu / noise.lam),
            format_float(state.theta),
            format_float(state.phi),
        ]
        if not spec.per_time:
            rows.append(params + [format_float(N)])
            continue
        for k in range(spec.grid.n):
            row = params + [format_float(lt[k])]
            for o in spec.outputs:
                if o == "N":
                    row.append(format_float(N))
                else:
                    row.extend(format_float(cols[k, i]) for i in index[o])
            rows.append(row)
    return rows


def run_sweep(spec: SweepSpec, out=None, jobs=1) -> str:
    """Run a sweep; write CSV to ``out`` (path or text stream) and return it."""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(sweep_rows(spec, jobs=jobs))
    text = buf.getvalue()
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            Path(out).write_text(text, encoding="utf-8", newline="\n")
    return text


@dataclass(frozen=True)
class FigureRecipe:
    """Named panels, each a list of sweeps concatenated into one CSV."""

    id: str
    description: str
    panels: dict

    def panel_rows(self, name, jobs=1):
        rows = []
        for i, spec in enumerate(self.panels[name]):
            block = sweep_rows(spec, jobs=jobs)
            rows.extend(block if i == 0 else block[1:])
        return rows


def _spec(vary, values, *, a=0.5, kappa=8.0, nu=0.8, theta=math.pi / 2, t_max=20.0, n=2001, outputs=("F_phi",)):
    return SweepSpec(
        vary=vary,
        values=tuple(values),
        noise=NoiseParams(a=a, kappa=kappa, lam=1.0, nu=nu),
        state=PureStateAngles(theta, 0.0),
        grid=TimeGrid(t_max, n),
        outputs=outputs,
    )


def _round(xs):
    return [round(float(x), 12) for x in xs]


def _build_figures():
    nu_axis = _round(np.linspace(0.1, 8.0, 80))
    kappa_axis = _round(np.linspace(0.0, 10.0, 101))
    blp = {"t_max": 50.0, "n": 5001, "outputs": ("N",)}
    # nu up to 8 lambda needs a finer step than the default for a 1 % stable N
    blp_fine = dict(blp, n=10001)
    figs = {}

    figs["fig1"] = FigureRecipe(
        "fig1",
        "BLP measure against nu/lambda; kappa = 8 lambda, theta = pi/2, phi = 0, one curve per a",
        {"a": [_spec("nu_over_lambda", nu_axis, a=a, kappa=8.0, **blp_fine) for a in (0.0, 0.5, -0.5, 1.0, -1.0)]},
    )
    figs["fig2"] = FigureRecipe(
        "fig2",
        "BLP measure against kappa/lambda; a = 0.5, theta = pi/2, phi = 0, nu in {0.8, 4} lambda",
        {"a": [_spec("kappa_over_lambda", kappa_axis, a=0.5, nu=nu, **blp) for nu in (0.8, 4.0)]},
    )

    kappas = (0.0, 1.0, 10.0)
    figs["fig3"] = FigureRecipe(
        "fig3",
        "F_phi (a, b) and C_l (c, d) against lambda t; a = 0.5, kappa in {0, 1, 10} lambda, nu = 0.8 lambda (a, c) or 4 lambda (b, d)",
        {
            "a": [_spec("kappa_over_lambda", kappas, nu=0.8, outputs=("F_phi",))],
            "b": [_spec("kappa_over_lambda", kappas, nu=4.0, outputs=("F_phi",))],
            "c": [_spec("kappa_over_lambda", kappas, nu=0.8, outputs=("C_l",))],
            "d": [_spec("kappa_over_lambda", kappas, nu=4.0, outputs=("C_l",))],
        },
    )
    surf_kappa = _round(np.linspace(0.0, 20.0, 41))
    figs["fig4"] = FigureRecipe(
        "fig4",
        "F_phi surface over (lambda t, kappa/lambda); a = 0.5, theta = pi/2, nu = 0.8 lambda (a) or 4 lambda (b)",
        {
            "a": [_spec("kappa_over_lambda", surf_kappa, nu=0.8, t_max=20.0, n=401)],
            "b": [_spec("kappa_over_lambda", surf_kappa, nu=4.0, t_max=20.0, n=401)],
        },
    )
    fine_kappa = _round(np.linspace(0.0, 10.0, 51))
    figs["fig5"] = FigureRecipe(
        "fig5",
        "F_phi surface over (lambda t, kappa/lambda) at short times; a = 0.5, theta = pi/2, nu = 0.8 lambda (a) or 4 lambda (b)",
        {
            "a": [_spec("kappa_over_lambda", fine_kappa, nu=0.8, t_max=10.0, n=501)],
            "b": [_spec("kappa_over_lambda", fine_kappa, nu=4.0, t_max=10.0, n=501)],
        },
    )
    a_values = (-1.0, -0.5, 0.0, 0.5, 1.0)
    panels6 = {}
    for name, nu, out in (("a", 0.8, "F_phi"), ("b", 4.0, "F_phi"), ("c", 0.8, "C_l"), ("d", 4.0, "C_l")):
        panels6[name] = [_spec("a", a_values, kappa=8.0, nu=nu, outputs=(out,))]
        panels6[name + "_inset"] = [_spec("a", a_values, kappa=8.0, nu=nu, t_max=0.5, n=501, outputs=(out,))]
    figs["fig6"] = FigureRecipe(
        "fig6",
        "F_phi (a, b) and C_l (c, d) against lambda t for a in {-1, -0.5, 0, 0.5, 1}; kappa = 8 lambda, nu = 0.8 lambda (a, c) or 4 lambda (b, d); *_inset panels cover lambda t <= 0.5",
        panels6,
    )
    figs["fig7"] = FigureRecipe(
        "fig7",
        "Equilibrium noise with kappa = 0 (a = 0): F_phi against lambda t for nu in {0.2, 0.4, 0.6, 0.8} lambda at theta = pi/2 (a) and for theta in {pi/2, pi/3, pi/4, pi/5} at nu = 0.8 lambda (b)",
        {
            "a": [_spec("nu_over_lambda", (0.2, 0.4, 0.6, 0.8), a=0.0, kappa=0.0)],
            "b": [
                _spec("theta", [math.pi / 2, math.pi / 3, math.pi / 4, math.pi / 5], a=0.0, kappa=0.0, nu=0.8)
            ],
        },
    )
    return figs


FIGURES = _build_figures()


def _sidecar(recipe: FigureRecipe) -> str:
    lines = [f"figure: {recipe.id}", f"description: {recipe.description}"]
    for name, specs in recipe.panels.items():
        for i, spec in enumerate(specs):
            lines.append(f"[{recipe.id}_{name}.csv curve {i}]")
            lines.extend(f"{k} = {v}" for k, v in spec.describe().items())
            if spec.outputs == ("N",):
                lines.append(f"horizon = lambda t in [0, {format_float(spec.grid.t_max)}], {spec.grid.n} points")
    return "\n".join(lines) + "\n"


def run_figure(fig_id, out_dir=".", jobs=1):
    """Write ``<fig>_<panel>.csv`` for every panel plus ``<fig>_params.txt``.

    Returns the list of written paths.
    """
    try:
        recipe = FIGURES[fig_id]
    except KeyError:
        raise UnknownFigure(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}") from None
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for name in recipe.panels:
        path = out_dir / f"{recipe.id}_{name}.csv"
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(recipe.panel_rows(name, jobs=jobs))
        path.write_text(buf.getvalue(), encoding="utf-8", newline="\n")
        written.append(path)
    side = out_dir / f"{recipe.id}_params.txt"
    side.write_text(_sidecar(recipe), encoding="utf-8", newline="\n")
    written.append(side)
    return written
