"""Parameter sweeps, cooling-power optimization and low-temperature exponent fits.

Evaluators take a flat parameter mapping (see :data:`DEFAULT_PARAMS`) so that
sweeps, optimizers and the command line all speak the same vocabulary.  Two
tie keys express parameters that scale with the cold frequency:
``lambda_per_omega_c`` (kick rate) and ``zeta_per_omega_c`` (constant
transport rate of all dressed channels).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Literal, Mapping, Sequence

import numpy as np
from scipy import optimize, stats

from . import gaussian, poisson
from .errors import ConfigError, ConvergenceError, NoInteriorMaximumError, PhysicsConstraintError
from .thermo import LAW_RTOL, SteadyStateReport, check_cop_chain

logger = logging.getLogger(__name__)

Family = Literal["gaussian", "poisson"]

DEFAULT_PARAMS: dict[str, dict[str, Any]] = {
    "gaussian": {
        "omega_h": 2.0, "omega_c": 1.0,
        "t_hot": 2.0 / math.log(5.0), "t_cold": 1.0 / math.log(3.0),
        "eta": 0.5, "gamma_h": 1.0, "gamma_c": 1.0,
        "kappa_h": 0.1, "kappa_c": 0.1, "d": None, "d_h": 1, "d_c": 1,
    },
    "poisson": {
        "omega_h": 10.0, "omega_c": 1e-3, "t_hot": 2.0, "t_cold": 1e-3,
        "lambda_rate": None, "lambda_per_omega_c": 1.0, "xi0": math.pi / 2,
        "zeta": None, "zeta_per_omega_c": 0.1,
        "kappa_h": 0.1, "kappa_c": 0.1, "d": None, "d_h": 1, "d_c": 1, "mode": "full",
    },
}

#: entropy-production floor used by the law audits
SIGMA_FLOOR = -1e-12


def _check_family(family: str) -> None:
    if family not in DEFAULT_PARAMS:
        raise ConfigError(f"unknown model family {family!r}; expected one of {sorted(DEFAULT_PARAMS)}")


def resolve_params(family: Family, params: Mapping[str, Any] | None = None) -> dict[str, Any]:
    """Defaults overlaid with ``params``; unknown keys are rejected."""
    _check_family(family)
    out = dict(DEFAULT_PARAMS[family])
    for key, value in (params or {}).items():
        if key not in out:
            raise ConfigError(f"unknown {family} parameter {key!r}")
        out[key] = value
    return out


def _tied(p: dict, name: str, tie: str) -> float | None:
    if p[name] is not None and p[tie] is not None:
        raise ConfigError(f"set either {name} or {tie}, not both")
    if p[tie] is not None:
        return p[tie] * p["omega_c"]
    return p[name]


def build_model(family: Family, params: Mapping[str, Any] | None = None):
    """Model dataclass for ``family`` from a flat parameter mapping."""
    p = resolve_params(family, params)
    d_h, d_c = (p["d"], p["d"]) if p["d"] is not None else (p["d_h"], p["d_c"])
    common = dict(kappa_h=p["kappa_h"], kappa_c=p["kappa_c"], d_h=d_h, d_c=d_c)
    if family == "gaussian":
        return gaussian.make_model(p["omega_h"], p["omega_c"], p["t_hot"], p["t_cold"], p["eta"],
                                   gamma_h=p["gamma_h"], gamma_c=p["gamma_c"], **common)
    lam = _tied(p, "lambda_rate", "lambda_per_omega_c")
    if lam is None:
        raise ConfigError("poisson model needs lambda_rate or lambda_per_omega_c")
    return poisson.make_model(p["omega_h"], p["omega_c"], p["t_hot"], p["t_cold"], lam,
                              xi0=p["xi0"], zeta=_tied(p, "zeta", "zeta_per_omega_c"),
                              mode=p["mode"], **common)


def evaluate(family: Family, params: Mapping[str, Any] | None = None) -> SteadyStateReport:
    model = build_model(family, params)
    return gaussian.evaluate(model) if family == "gaussian" else poisson.evaluate(model)


# --- law audits -------------------------------------------------------------------

@dataclass(frozen=True)
class LawAudit:
    first_law: bool
    second_law: bool
    cop_chain: bool | None

    @property
    def ok(self) -> bool:
        return self.first_law and self.second_law and self.cop_chain is not False


def audit(report: SteadyStateReport) -> LawAudit:
    """First law, entropy production and, at cooling points, the COP ordering."""
    cur = report.currents
    chain = None
    if report.cop is not None and report.cop_otto is not None and report.cop_carnot is not None:
        chain = check_cop_chain(report.cop, report.cop_otto, report.cop_carnot)
        dressed = report.details.get("cop_dressed")
        if dressed is not None:
            chain = chain and report.cop <= dressed * (1 + 1e-10) and dressed <= report.cop_otto
    return LawAudit(cur.first_law_ok(LAW_RTOL), report.entropy.sigma_total >= SIGMA_FLOOR, chain)


# --- sweeps -------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter on a linear or logarithmic grid, the rest frozen."""

    parameter: str
    start: float
    stop: float
    points: int
    scale: Literal["linear", "log"] = "linear"
    family: Family = "gaussian"
    fixed: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        _check_family(self.family)
        if self.points < 2:
            raise ConfigError(f"a sweep needs at least 2 points, got {self.points}")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"grid scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and not (self.start > 0 and self.stop > 0):
            raise ConfigError("log grids need positive endpoints")
        resolve_params(self.family, {self.parameter: self.start, **self.fixed})

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepRow:
    value: float
    j_hot: float
    j_cold: float
    j_noise: float
    sigma_hot: float
    sigma_cold: float
    sigma_total: float
    cop: float
    eta: float
    feasible: bool
    audit_ok: bool
    message: str = ""

    COLUMNS = ("value", "j_hot", "j_cold", "j_noise", "sigma_hot", "sigma_cold",
               "sigma_total", "cop", "eta", "feasible")


def evaluate_row(family: Family, params: Mapping[str, Any], value: float) -> SweepRow:
    """Sweep row for one point; physics-constraint failures give an infeasible row."""
    nan = math.nan
    try:
        rep = evaluate(family, params)
    except PhysicsConstraintError as exc:
        return SweepRow(value, nan, nan, nan, nan, nan, nan, nan, nan, False, True, str(exc))
    cur, ent = rep.currents, rep.entropy
    cop = rep.cop if rep.cop is not None else nan
    return SweepRow(value, cur.j_hot, cur.j_cold, cur.j_noise, ent.sigma_hot, ent.sigma_cold,
                    ent.sigma_total, cop, rep.details["eta"], True, audit(rep).ok)


def _row_task(args):
    return evaluate_row(*args)


def _map(fn: Callable, tasks: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, tasks))


def sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """One row per grid point, in grid order; infeasible points are kept and flagged."""
    tasks = [(spec.family, {**spec.fixed, spec.parameter: float(v)}, float(v))
             for v in spec.grid()]
    rows = _map(_row_task, tasks, jobs)
    bad = [r.value for r in rows if r.feasible and not r.audit_ok]
    if bad:
        logger.warning("law audit failed at %s=%s", spec.parameter, bad)
    return rows


# --- optimization ----------------------------------------------------------------

@dataclass(frozen=True)
class CoolingOptimum:
    parameter: str
    argmax: float
    j_cold: float
    bracket: tuple[float, float]
    bracket_j_cold: tuple[float, float]
    grid_argmax: float
    grid_step: float
    report: SteadyStateReport

    @property
    def interior(self) -> bool:
        return self.j_cold >= max(self.bracket_j_cold)


def _j_cold(family, params) -> float:
    try:
        return evaluate(family, params).currents.j_cold
    except PhysicsConstraintError:
        return -math.inf


def _default_bounds(family: Family, p: dict, parameter: str) -> tuple[float, float, str]:
    if parameter == "xi0":
        return 0.0, math.pi, "linear"
    if parameter == "omega_c":
        # bare cooling window; above it the Otto bound exceeds the Carnot bound
        edge = p["omega_h"] * p["t_cold"] / p["t_hot"]
        return 1e-3 * edge, edge * (1 - 1e-12), "log"
    raise ConfigError(f"no default optimization range for {parameter!r}; pass bounds")


def optimize_cooling(family: Family, params: Mapping[str, Any] | None = None,
                     parameter: str = "omega_c", bounds: tuple[float, float] | None = None,
                     scale: Literal["linear", "log"] | None = None, grid_points: int = 121,
                     xtol: float = 1e-6) -> CoolingOptimum:
    """Maximize the cooling current over one parameter.

    A grid scan locates the best point, whose neighbours bracket the maximum;
    the bracket is refined by bounded Brent search (golden section with
    parabolic steps) in the grid variable to relative ``xtol`` in the argument.
    """
    p = resolve_params(family, params)
    if parameter not in p:
        raise ConfigError(f"unknown {family} parameter {parameter!r}")
    if not p["t_cold"] < p["t_hot"]:
        raise PhysicsConstraintError(
            f"no cooling window: t_cold={p['t_cold']} is not below t_hot={p['t_hot']}")
    lo, hi, default_scale = _default_bounds(family, p, parameter) if bounds is None else (
        *bounds, "linear")
    scale = scale or default_scale
    if scale == "log":
        to_x, from_x = math.log, math.exp
    else:
        to_x = from_x = float

    xs = np.linspace(to_x(lo), to_x(hi), grid_points)

    def f(x):
        return _j_cold(family, {**p, parameter: from_x(x)})

    js = np.array([f(x) for x in xs])
    i = int(np.argmax(js))
    if not js[i] > 0:
        raise NoInteriorMaximumError(
            f"no cooling anywhere on {parameter} in [{lo:.6g}, {hi:.6g}]")
    if i in (0, grid_points - 1):
        raise NoInteriorMaximumError(
            f"cooling current is largest at the {parameter} boundary {from_x(xs[i]):.6g}")
    a, b = xs[i - 1], xs[i + 1]
    # absolute tolerance in log x is relative tolerance in x
    atol = xtol if scale == "log" else xtol * max(abs(xs[i]), 1e-300)
    # infeasible points are -inf on the grid but must stay finite for the refinement
    res = optimize.minimize_scalar(lambda x: -max(f(x), -1e300), bounds=(a, b), method="bounded",
                                   options={"xatol": atol})
    x_best, j_best = (res.x, -res.fun) if -res.fun >= js[i] else (xs[i], js[i])
    ja, jb = js[i - 1], js[i + 1]
    if not j_best >= max(ja, jb):
        raise NoInteriorMaximumError(f"refined {parameter} is not above its bracket endpoints")
    argmax = from_x(x_best)
    step = (xs[1] - xs[0]) if scale == "linear" else from_x(xs[i]) * (math.exp(xs[1] - xs[0]) - 1)
    return CoolingOptimum(parameter, float(argmax), float(j_best), (from_x(a), from_x(b)),
                          (float(ja), float(jb)), float(from_x(xs[i])), float(step),
                          evaluate(family, {**p, parameter: argmax}))


# --- exponent fits -------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingResult:
    """Power law ``J_c ~ T_c**alpha`` fitted over ``window``."""

    rows: tuple[tuple[float, float, float], ...]   # (t_cold, optimal omega_c, optimal j_cold)
    alpha: float
    alpha_stderr: float
    r_squared: float
    prefactor: float
    window: tuple[float, float]
    label: str = ""
    audit_failures: int = 0
    extra: Mapping[str, Any] = field(default_factory=dict)


def fit_exponent(points: Iterable[tuple[float, float]] | Iterable[tuple[float, float, float]],
                 window: tuple[float, float] | None = None, label: str = "") -> ScalingResult:
    """Least-squares slope of ``log J`` against ``log T``.

    ``points`` holds ``(T, J)`` or ``(T, argmax, J)``; only points with ``T``
    inside ``window`` (inclusive) enter the fit and all of those need ``J > 0``.
    """
    rows = []
    for pt in points:
        pt = tuple(float(v) for v in pt)
        rows.append(pt if len(pt) == 3 else (pt[0], math.nan, pt[1]))
    if window is None:
        window = (min(r[0] for r in rows), max(r[0] for r in rows))
    inside = [r for r in rows if window[0] <= r[0] <= window[1]]
    if len(inside) < 3:
        raise ConfigError(f"exponent fit needs at least 3 points in the window, got {len(inside)}")
    if any(not (r[0] > 0 and r[2] > 0) for r in inside):
        raise PhysicsConstraintError("exponent fit needs positive T and J inside the window")
    logt = np.log([r[0] for r in inside])
    logj = np.log([r[2] for r in inside])
    fit = stats.linregress(logt, logj)
    alpha = float(fit.slope)
    if not math.isfinite(alpha):
        raise ConvergenceError("exponent fit produced a non-finite slope")
    return ScalingResult(tuple(rows), alpha, float(fit.stderr), float(fit.rvalue ** 2),
                         float(math.exp(fit.intercept)), (float(window[0]), float(window[1])),
                         label)


# --- third-law study -----------------------------------------------------------------

@dataclass(frozen=True)
class ThirdLawConfig:
    omega_h: float = 10.0
    t_hot: float = 2.0
    kappa: float = 0.1
    t_cold_min: float = 1e-4
    t_cold_max: float = 1e-2
    points: int = 20
    eta_factor: float = 1e3
    sensitivity_factor: float | None = 1e2
    xi0: float = math.pi / 2
    lambda_per_omega_c: float = 1.0

    def t_cold_grid(self) -> np.ndarray:
        return np.geomspace(self.t_cold_min, self.t_cold_max, self.points)


def third_law_params(family: Family, d: int, cfg: ThirdLawConfig,
                     eta_factor: float | None = None) -> dict[str, Any]:
    """Frozen parameters of one third-law run (spectral rates throughout)."""
    base = {"omega_h": cfg.omega_h, "t_hot": cfg.t_hot, "kappa_h": cfg.kappa,
            "kappa_c": cfg.kappa, "d": d}
    if family == "gaussian":
        factor = cfg.eta_factor if eta_factor is None else eta_factor
        # the cold rate is largest at the top of the window, at the cooling edge
        edge = cfg.omega_h * cfg.t_cold_max / cfg.t_hot
        return {**base, "gamma_h": None, "gamma_c": None,
                "eta": factor * cfg.kappa * edge ** d}
    return {**base, "lambda_per_omega_c": cfg.lambda_per_omega_c, "xi0": cfg.xi0,
            "zeta_per_omega_c": None, "mode": "lowT"}


def _optimum_task(args):
    family, params, t_cold = args
    opt = optimize_cooling(family, {**params, "t_cold": t_cold}, "omega_c")
    return t_cold, opt.argmax, opt.j_cold, audit(opt.report).ok


def scaling_run(family: Family, params: Mapping[str, Any], t_cold_grid: Sequence[float],
                jobs: int = 1, label: str = "") -> ScalingResult:
    """Optimal cooling current at every ``T_c`` of the grid and its exponent fit."""
    out = _map(_optimum_task, [(family, dict(params), float(t)) for t in t_cold_grid], jobs)
    rows = [(t, w, j) for t, w, j, _ in out]
    failures = sum(1 for *_, ok in out if not ok)
    res = fit_exponent(rows, label=label)
    return ScalingResult(res.rows, res.alpha, res.alpha_stderr, res.r_squared, res.prefactor,
                         res.window, label, failures, {"params": dict(params)})


@dataclass(frozen=True)
class ThirdLawEntry:
    d: int
    result: ScalingResult
    sensitivity: ScalingResult | None = None


def third_law_study(family: Family, d_values: Sequence[int] = (1, 2, 3),
                    config: ThirdLawConfig | None = None, jobs: int = 1) -> list[ThirdLawEntry]:
    """Exponent of the optimized cooling current for each bath dimension ``d``.

    The Gaussian run is repeated with a smaller noise strength when
    ``config.sensitivity_factor`` is set.
    """
    _check_family(family)
    cfg = config or ThirdLawConfig()
    grid = cfg.t_cold_grid()
    entries = []
    for d in d_values:
        main = scaling_run(family, third_law_params(family, d, cfg), grid, jobs,
                           f"{family} d={d}")
        extra = None
        if family == "gaussian" and cfg.sensitivity_factor is not None:
            extra = scaling_run(family, third_law_params(family, d, cfg, cfg.sensitivity_factor),
                                grid, jobs, f"{family} d={d} eta x{cfg.sensitivity_factor:g}")
        entries.append(ThirdLawEntry(d, main, extra))
    return entries
