"""Command-line entry point: ``qfridge {steady,sweep,fig2,scaling,oracle}``.

Exit codes: 0 success, 2 invalid configuration, 3 physics constraint
violated, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__, oracle, scaling
from .config import FIG2_PARAMS, build_config
from .errors import ConvergenceError, QFridgeError
from .output import RunReport, Table, write_csv, write_report

logger = logging.getLogger("qfridge")


def _audit_summary(reports) -> dict:
    """Law-audit counts over steady-state reports (infeasible points skipped)."""
    audits = [scaling.audit(r) for r in reports]
    residuals = [abs(r.currents.first_law_residual) / max(r.currents.scale, 1e-300) for r in reports]
    return {
        "points": len(audits),
        "first_law_failures": sum(not a.first_law for a in audits),
        "second_law_failures": sum(not a.second_law for a in audits),
        "cop_chain_failures": sum(a.cop_chain is False for a in audits),
        "max_relative_first_law_residual": max(residuals, default=0.0),
        "min_sigma_total": min((r.entropy.sigma_total for r in reports), default=0.0),
    }


def _row_audit(rows) -> dict:
    feasible = [r for r in rows if r.feasible]
    return {
        "points": len(rows),
        "infeasible": len(rows) - len(feasible),
        "audit_failures": sum(not r.audit_ok for r in feasible),
        "min_sigma_total": min((r.sigma_total for r in feasible), default=0.0),
    }


# --- commands ---------------------------------------------------------------------
# each returns (tables, results, audit, summary lines)

def cmd_steady(cfg: dict):
    family, params = cfg["model"], cfg["params"]
    rep = scaling.evaluate(family, params)
    n1, n2 = rep.populations
    m, cur, ent = rep.moments, rep.currents, rep.entropy
    columns = ["model", "population_1", "population_2", "x", "y", "z", "n",
               "j_hot", "j_cold", "j_noise", "first_law_residual",
               "sigma_hot", "sigma_cold", "sigma_total", "cop", "cop_otto", "cop_carnot", "cooling"]
    row = [family, n1, n2, m.x, m.y, m.z, m.n, cur.j_hot, cur.j_cold, cur.j_noise,
           cur.first_law_residual, ent.sigma_hot, ent.sigma_cold, ent.sigma_total,
           rep.cop, rep.cop_otto, rep.cop_carnot, rep.is_cooling]
    table = Table(columns, [row])
    summary = [
        f"populations = ({n1:.6g}, {n2:.6g})",
        f"J_h = {cur.j_hot:.6g}  J_c = {cur.j_cold:.6g}  J_n = {cur.j_noise:.6g}",
        f"entropy production = {ent.sigma_total:.6g}  (hot {ent.sigma_hot:.6g}, cold {ent.sigma_cold:.6g})",
        f"COP = {rep.cop}  Otto = {rep.cop_otto}  Carnot = {rep.cop_carnot}",
    ]
    results = {**table.records()[0], "details": rep.details}
    return {"steady": table}, results, _audit_summary([rep]), summary


def _sweep_table(parameter: str, rows) -> Table:
    columns = [parameter, *scaling.SweepRow.COLUMNS[1:]]
    return Table(columns, [[getattr(r, c) for c in scaling.SweepRow.COLUMNS] for r in rows])


def cmd_sweep(cfg: dict):
    s = cfg["sweep"]
    spec = scaling.SweepSpec(s["parameter"], s["start"], s["stop"], s["points"], s["scale"],
                             cfg["model"], cfg["params"])
    rows = scaling.sweep(spec, jobs=cfg["jobs"])
    audit = _row_audit(rows)
    summary = [f"{len(rows)} points over {spec.parameter} in [{spec.start:g}, {spec.stop:g}], "
               f"{audit['infeasible']} infeasible, {audit['audit_failures']} law-audit failures"]
    return {"sweep": _sweep_table(spec.parameter, rows)}, {"rows": len(rows)}, audit, summary


FIG2_COLUMNS = ("xi0", "sigma_hot", "sigma_cold", "sigma_total", "j_cold", "feasible")


def cmd_fig2(cfg: dict):
    f = cfg["fig2"]
    params = {**FIG2_PARAMS, **f["params"]}
    spec = scaling.SweepSpec("xi0", f["xi0_start"], f["xi0_stop"], f["points"], "linear",
                             "poisson", params)
    rows = scaling.sweep(spec, jobs=cfg["jobs"])
    table = Table(FIG2_COLUMNS, [[r.value, r.sigma_hot, r.sigma_cold, r.sigma_total, r.j_cold,
                                  r.feasible] for r in rows])
    audit = _row_audit(rows)
    summary = [f"{len(rows)} impulse values, minimum entropy production "
               f"{audit['min_sigma_total']:.3g}, {audit['audit_failures']} law-audit failures"]
    return {"fig2": table}, {"rows": len(rows), "params": params}, audit, summary


def cmd_scaling(cfg: dict):
    s = dict(cfg["scaling"])
    d_values = s.pop("d_values")
    law = scaling.ThirdLawConfig(**s)
    entries = scaling.third_law_study(cfg["model"], d_values, law, jobs=cfg["jobs"])
    points, fits, summary = [], [], []
    for e in entries:
        for run, res in (("main", e.result), ("sensitivity", e.sensitivity)):
            if res is None:
                continue
            points += [[e.d, run, t, w, j] for t, w, j in res.rows]
            fits.append([e.d, run, res.alpha, res.alpha_stderr, res.r_squared,
                         res.window[0], res.window[1], res.audit_failures])
            summary.append(f"d={e.d} {run}: alpha = {res.alpha:.4f} ± {res.alpha_stderr:.2g} "
                           f"(R^2 = {res.r_squared:.8f})")
    tables = {
        "scaling": Table(["d", "run", "t_cold", "omega_c_opt", "j_cold_opt"], points),
        "alpha": Table(["d", "run", "alpha", "alpha_stderr", "r_squared", "t_cold_min",
                        "t_cold_max", "audit_failures"], fits),
    }
    audit = {"points": len(points), "audit_failures": sum(f[-1] for f in fits)}
    return tables, {"alpha": tables["alpha"].records()}, audit, summary


def _oracle_setup(cfg: dict):
    o = cfg["oracle"]
    family = cfg["model"]
    caps = {"max_dim": o["max_dim"], "max_liouville_dim": o["max_liouville_dim"]}
    if family == "gaussian":
        model = scaling.build_model(family, cfg["params"])
        top = o["shells"] or oracle.auto_config(model.n_hot, model.n_cold, o["edge_tol"]).max_excitation

        def build(fc):
            return oracle.gaussian_generator(model, fc)

        reference = scaling.evaluate(family, cfg["params"])
        theta = 0.0
    else:
        # the oracle carries every dressed channel, so compare with the full moment model
        params = {**cfg["params"], "mode": "full"}
        model = scaling.build_model(family, params)
        top = o["shells"] or oracle.poisson_auto_config(model, o["edge_tol"]).max_excitation

        def build(fc):
            return oracle.poisson_generator(model, fc, o["variant"])

        reference = scaling.evaluate(family, params)
        theta = model.frame.theta
    ladder = [oracle.FockConfig.shells(k, **caps) for k in sorted({max(top - 4, 2), max(top - 2, 2), top})]
    return build, ladder, reference, theta


def cmd_oracle(cfg: dict):
    o = cfg["oracle"]
    build, ladder, reference, theta = _oracle_setup(cfg)
    sweep = oracle.truncation_sweep(build, ladder, tol=o["tol"], edge_tol=o["edge_tol"], theta=theta)
    ref = reference.currents
    rows = []
    for step in sweep.steps:
        cur = step.currents
        rows.append([step.config.max_excitation, step.config.dim, cur.j_hot, cur.j_cold, cur.j_noise,
                     ref.j_cold, abs(cur.j_cold - ref.j_cold) / abs(ref.j_cold) if ref.j_cold else None,
                     step.rel_change, step.edge_population])
    table = Table(["shells", "dim", "j_hot", "j_cold", "j_noise", "model_j_cold",
                   "relative_mismatch", "relative_change", "edge_population"], rows)
    final = sweep.final
    mismatch = rows[-1][6]
    summary = [f"model J_c = {ref.j_cold:.10g}, oracle J_c = {final.currents.j_cold:.10g} "
               f"at {final.config.max_excitation} shells",
               f"relative current mismatch = {mismatch:.3g} (tolerance {o['tol']:g})",
               f"truncation converged: {sweep.converged} (last change {sweep.achieved_tol:.3g}, "
               f"edge population {final.edge_population:.3g})"]
    results = {"converged": sweep.converged, "relative_mismatch": mismatch,
               "oracle_moments": list(final.moments.as_tuple()),
               "model_moments": list(reference.moments.as_tuple()), "warnings": sweep.warnings}
    return {"oracle": table}, results, _audit_summary([reference]), summary


COMMANDS: dict[str, Callable] = {
    "steady": cmd_steady, "sweep": cmd_sweep, "fig2": cmd_fig2,
    "scaling": cmd_scaling, "oracle": cmd_oracle,
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="YAML configuration file")
    common.add_argument("--model", choices=["gaussian", "poisson"])
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--jobs", type=int, metavar="N", help="worker processes")
    common.add_argument("--format", choices=["csv", "structured"], dest="fmt")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config entry, e.g. params.eta=0.3 (repeatable)")
    common.add_argument("-v", "--verbose", action="store_true")
    parser = argparse.ArgumentParser(prog="qfridge", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "steady": "one operating point: populations, currents, COP, entropy production",
        "sweep": "one parameter swept on a grid",
        "fig2": "impulse sweep of the kicked refrigerator at its reference parameters",
        "scaling": "low-temperature exponent of the optimized cooling power",
        "oracle": "moment model against a truncated-Fock master-equation solve",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def run(argv: list[str] | None = None) -> RunReport:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides: dict = {}
    if args.model:
        overrides["model"] = args.model
    if args.jobs is not None:
        overrides["jobs"] = args.jobs
    if args.out or args.fmt:
        overrides["output"] = {k: v for k, v in (("dir", args.out), ("format", args.fmt)) if v}
    cfg = build_config(args.config, overrides, args.set)

    start = time.perf_counter()
    tables, results, audit, summary = COMMANDS[args.command](cfg)
    elapsed = time.perf_counter() - start

    out = Path(cfg["output"]["dir"])
    fmt = cfg["output"]["format"]
    files = {}
    if fmt == "csv":
        for name, table in tables.items():
            fname = f"{args.command}.csv" if name == args.command else f"{args.command}_{name}.csv"
            files[name] = str(write_csv(out / fname, table).name)
        results = {**results, "tables": files}
    else:
        results = {**results, "tables": {name: t.records() for name, t in tables.items()}}
    report = RunReport(args.command, __version__, cfg, results, audit,
                       {"elapsed_seconds": elapsed, "numpy": np.__version__})
    path = write_report(out / f"{args.command}_report.json", report)
    for line in summary:
        print(line)
    print(f"wrote {', '.join([*files.values(), path.name])} to {out}")
    if args.command == "oracle" and not results["converged"]:
        raise ConvergenceError("oracle truncation ladder did not converge; see the report")
    return report


def main(argv: list[str] | None = None) -> int:
    try:
        run(argv)
    except QFridgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
