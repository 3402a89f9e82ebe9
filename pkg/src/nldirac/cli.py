"""Command-line interface.

Exit codes: 0 success, 2 verification failure, 3 input error, 4 numerical
failure.  Settings resolve in the order defaults < ``--config`` file <
``NLDIRAC_*`` environment variables < command-line flags.
"""

from __future__ import annotations

import argparse
import io
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfg
from . import evolve as ev
from . import fieldio, models, odesolve, oracles, reductions, scaling
from .fd import DerivativeOperator, effective_wavenumber
from .grid import Grid1D, Grid2D
from .models import ModelSpec
from .spinor import SpinorState
from .transforms import phi_from_psi

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- value parsers ---------------------------------------------------------------

def float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def key_values(text):
    """``a=1,b=2`` -> {"a": 1.0, "b": 2.0}"""
    out = {}
    for item in (x.strip() for x in text.split(",")):
        if not item:
            continue
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = float(v)
    return out


def row_constants(text):
    """``4.m=2,4.alpha_plus=0.5`` -> {4: {"m": 2.0, "alpha_plus": 0.5}}"""
    out = {}
    for key, value in key_values(text).items():
        row, _, name = key.partition(".")
        if not name:
            raise argparse.ArgumentTypeError(f"expected ROW.NAME=VALUE, got {key!r}")
        out.setdefault(int(row), {})[name] = value
    return out


def sweep_param(text):
    name, sep, values = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=v1,v2,..., got {text!r}")
    float_list(values)
    return text.strip()


def row_id(text):
    row = int(text.lower().removeprefix("row"))
    if row not in oracles.TABLE1:
        raise argparse.ArgumentTypeError(f"no closed-form row {text!r}")
    return row


def model_id(text):
    if text not in models.COUPLING_NAMES:
        raise argparse.ArgumentTypeError(f"unknown model {text!r}; choose from {sorted(models.COUPLING_NAMES)}")
    return text


# -- parser ----------------------------------------------------------------------

def _model_options(p, required=True):
    p.add_argument("--model", type=model_id, help="equation id, e.g. eq7")
    p.add_argument("--m", type=float, default=0.0, help="mass")
    p.add_argument("--couplings", type=key_values, default={}, help="name=value,...")


def build_parser():
    parser = _Parser(prog="nldirac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="key = value file")
        return p

    p = add("verify-table1", "residual verdicts for the closed-form solutions")
    p.add_argument("--rows", type=int_list, default=[1, 2, 3, 4])
    p.add_argument("--constants", type=row_constants, default={}, help="ROW.NAME=VALUE,...")
    p.add_argument("--n-probes", type=int, default=7)
    p.add_argument("--row1-reading", choices=["root-r", "linear-r"], default="root-r",
                   help="debug: linear-r is the rejected argument reading and must fail")
    p.add_argument("--tol", type=float, default=oracles.RESIDUAL_TOL)
    p.add_argument("--output", help="also write the report here")

    p = add("residual", "residual table for an oracle profile or a field file")
    _model_options(p)
    p.add_argument("--solution", type=row_id, help="closed-form row (1-4 or row1-row4)")
    p.add_argument("--constants", type=key_values, default={})
    p.add_argument("--assignment", choices=["auto", *oracles.ASSIGNMENTS], default="auto")
    p.add_argument("--field", help="field CSV (single time slice)")
    p.add_argument("--epsilon", type=float, default=0.0, help="stationary energy for d/dt")
    p.add_argument("--wavenumber", type=float, default=0.0, help="k (or kappa) for 1D field files")
    p.add_argument("--periodic", action="store_true", help="Cartesian field axes wrap")
    p.add_argument("--stencil", type=int, choices=[2, 4], default=4)
    p.add_argument("--probes", type=float_list, default=None)
    p.add_argument("--tol", type=float, default=oracles.RESIDUAL_TOL)
    p.add_argument("--report-only", action="store_true")
    p.add_argument("--output", help="residual table CSV")

    p = add("evolve", "time-evolve a model and write snapshots and diagnostics")
    _model_options(p)
    p.add_argument("--init", choices=["gaussian", "plane-wave", "zero", "file"], default="gaussian")
    p.add_argument("--init-file")
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--q", type=float, default=1.0, help="x wavenumber of the initial data")
    p.add_argument("--nx", type=int, default=64)
    p.add_argument("--ny", type=int, default=64, help="1 gives a y-independent 1D run")
    p.add_argument("--bounds", type=float_list, default=None,
                   help="xmin,xmax,ymin,ymax (Cartesian) or rmin,rmax (polar)")
    p.add_argument("--boundary", choices=["periodic", "dirichlet-zero"], default="periodic")
    p.add_argument("--wavenumber", type=float, default=0.0, help="y wavenumber of 1D runs")
    p.add_argument("--scheme", choices=["rk4", "rk45"], default="rk4")
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--cfl", type=float, default=0.5)
    p.add_argument("--t-final", type=float, default=1.0)
    p.add_argument("--sample-every", type=int, default=10)
    p.add_argument("--stencil", type=int, choices=[2, 4], default=4)
    p.add_argument("--output-dir")

    p = add("reduce", "integrate a reduced profile system from a seed")
    _model_options(p)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--wavenumber", type=float, default=0.0)
    p.add_argument("--from-row", type=row_id, help="seed from a closed-form row and compare")
    p.add_argument("--constants", type=key_values, default={})
    p.add_argument("--seed-plus", type=complex, default=None)
    p.add_argument("--seed-minus", type=complex, default=None)
    p.add_argument("--s-start", type=float, default=None)
    p.add_argument("--s-end", type=float, default=None)
    p.add_argument("--n-out", type=int, default=201)
    p.add_argument("--atol", type=float, default=1e-10)
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--output", help="profile CSV")

    p = add("scale-check", "dilation covariance of the residual")
    _model_options(p)
    p.add_argument("--lam", type=float, default=2.0)

    p = add("sweep", "oracle-seeded IVP runs over a parameter grid")
    p.add_argument("--family", type=row_id, default=4)
    p.add_argument("--param", type=sweep_param, action="append", default=[],
                   help="name=v1,v2,... (repeatable; ';' separates them in config files)")
    p.add_argument("--s-start", type=float, default=None)
    p.add_argument("--s-end", type=float, default=None)
    p.add_argument("--n-out", type=int, default=201)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", help="summary CSV (default stdout)")
    return parser


def parse(argv, environ):
    parser = build_parser()
    first = parser.parse_args(argv)
    subparser = parser._subparsers._group_actions[0].choices[first.command]
    config_path = first.config or environ.get(cfg.ENV_PREFIX + "CONFIG")
    subparser.set_defaults(**cfg.layered_defaults(subparser, config_path, environ))
    args = parser.parse_args(argv)
    args.config = config_path
    return args


def resolved(args):
    return {k: v for k, v in vars(args).items() if k not in ("command", "config")}


def _emit(report, path=None):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _spec(args):
    if not args.model:
        raise InputError("--model is required")
    try:
        return ModelSpec(args.model, args.m, args.couplings)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# -- subcommands -----------------------------------------------------------------

def cmd_verify_table1(args):
    entries = []
    for row in args.rows:
        if row not in oracles.TABLE1:
            raise InputError(f"no closed-form row {row}")
        sets = [("default", None)]
        if row in args.constants:
            sets.append(("override", args.constants[row]))
        for label, consts in sets:
            try:
                c = oracles.TABLE1[row].constants(consts)
                probes = oracles.default_probes(row, args.n_probes, c, args.row1_reading)
                rep = oracles.verify_row(row, c, probes, args.row1_reading, args.tol)
            except (KeyError, oracles.DomainError) as exc:
                raise InputError(str(exc)) from None
            d = rep.as_dict()
            d["constants_set"] = label
            entries.append(d)
    unknown = set(args.constants) - set(args.rows)
    if unknown:
        raise InputError(f"constants given for rows not requested: {sorted(unknown)}")
    ok = all(e["pass"] for e in entries)
    _emit({"command": "verify-table1", "all_pass": ok, "rows": entries,
           "config": cfg.dump(resolved(args))}, args.output)
    return EXIT_OK if ok else EXIT_VERIFY


def _write_table(header, rows, path):
    buf = io.StringIO()
    w = fieldio.writer(buf)
    w.writerow(header)
    for row in rows:
        w.writerow([fieldio.fmt(v) for v in row])
    if path:
        Path(path).write_text(buf.getvalue(), encoding="utf-8")
    return buf.getvalue()


def cmd_residual(args):
    if (args.solution is None) == (args.field is None):
        raise InputError("give exactly one of --solution or --field")
    if args.solution is not None:
        row = args.solution
        sol = oracles.TABLE1[row]
        if args.model and args.model != sol.equation:
            raise InputError(f"row {row} belongs to {sol.equation}, not {args.model}")
        try:
            c = sol.constants(args.constants)
            probes = np.asarray(args.probes if args.probes else oracles.default_probes(row, constants=c))
            values = oracles.evaluate(row, probes, c)
        except (KeyError, oracles.DomainError) as exc:
            raise InputError(str(exc)) from None
        assignment = sol.default_assignment if args.assignment == "auto" else args.assignment
        system = oracles.system_for(row, c)
        chi = oracles.assign(values, assignment)
        rp, rm = system.residual_at(probes, *chi)
        rel = oracles.relative_residual(system, probes, chi)
        table = [(s, a.real, a.imag, b.real, b.imag, max(abs(a), abs(b)), max(abs(chi[0][i]), abs(chi[1][i])))
                 for i, (s, a, b) in enumerate(zip(probes, rp, rm))]
        header = ("s", "re_r_plus", "im_r_plus", "re_r_minus", "im_r_minus", "abs_r", "magnitude")
        summary = {"solution": row, "model": sol.equation, "assignment": assignment,
                   "max_residual": float(np.max(rel)), "max_abs_residual": float(max(r[5] for r in table))}
    else:
        spec = _spec(args)
        try:
            state = fieldio.read_fields(args.field, args.periodic, args.wavenumber)
        except OSError as exc:
            raise InputError(str(exc)) from None
        if state.coords != spec.coords:
            raise InputError(f"{spec.equation} is {spec.coords} but the field file is {state.coords}")
        deriv = DerivativeOperator(args.stencil, edge="one-sided")
        dt = (-1j * args.epsilon * state.plus, -1j * args.epsilon * state.minus)
        rp, rm = models.residual(spec, state, dt, deriv)
        mag = np.maximum(np.abs(state.plus), np.abs(state.minus))
        grid = state.grid
        ax1 = grid if isinstance(grid, Grid1D) else grid.x_axis
        margin = 0 if ax1.periodic else args.stencil // 2
        idx1 = np.arange(margin, ax1.n - margin)
        if args.probes:
            idx1 = np.unique([int(np.argmin(np.abs(ax1.points - s))) for s in args.probes])
        if isinstance(grid, Grid1D):
            pts = [(i, None) for i in idx1]
            s2 = np.zeros(1)
        else:
            m2 = 0 if grid.y_axis.periodic else args.stencil // 2
            pts = [(i, j) for i in idx1 for j in range(m2, grid.y_axis.n - m2)]
            s2 = grid.y_axis.points
        table = []
        for i, j in pts:
            k = (i,) if j is None else (i, j)
            a, b = rp[k], rm[k]
            table.append((ax1.points[i], s2[0 if j is None else j], a.real, a.imag, b.real, b.imag,
                          max(abs(a), abs(b)), mag[k]))
        header = (fieldio.FIELD_HEADER[state.coords][1], fieldio.FIELD_HEADER[state.coords][2],
                  "re_r_plus", "im_r_plus", "re_r_minus", "im_r_minus", "abs_r", "magnitude")
        worst = float(max((r[6] for r in table), default=0.0))
        summary = {"field": args.field, "model": spec.equation, "max_residual": worst, "max_abs_residual": worst}
    csv_text = _write_table(header, table, args.output)
    ok = summary["max_residual"] <= args.tol
    report = {"command": "residual", **summary, "pass": ok, "tol": args.tol, "n_probes": len(table),
              "config": cfg.dump(resolved(args))}
    if not args.output:
        report["table"] = csv_text
    _emit(report)
    return EXIT_OK if ok or args.report_only else EXIT_VERIFY


def free_eigen_partner(m, qx, qy):
    """Positive-energy spinor of the free symbol with effective wavenumbers."""
    e = np.sqrt(m * m + qx * qx + qy * qy)
    a, b = 1j * qx + qy, e - m
    if abs(a) == 0 and abs(b) == 0:
        return e, 1.0 + 0j, 0j
    n = np.hypot(abs(a), abs(b))
    return e, a / n, b / n


def initial_state(args, spec):
    cyl = spec.coords == "cylindrical"
    if args.init == "file":
        if not args.init_file:
            raise InputError("--init file needs --init-file")
        state = fieldio.read_fields(args.init_file, args.boundary == "periodic", args.wavenumber)
        if state.coords != spec.coords:
            raise InputError("initial field coordinates do not match the model")
        return state
    if cyl:
        r_min, r_max = args.bounds if args.bounds else (0.5, 8.0)
        grid = Grid2D.polar(args.nx, (r_min, r_max), args.ny)
        r, theta = grid.mesh()
        ring = args.amplitude * np.exp(-((r - 0.5 * (r_min + r_max)) / args.width) ** 2)
        if args.init == "zero":
            ring = 0 * ring
        psi = SpinorState(grid, ring * np.exp(1j * theta), 0.5 * ring)
        return phi_from_psi(psi)
    b = args.bounds if args.bounds else (-5.0, 5.0, -5.0, 5.0)
    periodic = args.boundary == "periodic"
    if args.ny == 1:
        grid = Grid1D(args.nx, b[0], b[1], periodic=periodic)
        x, y = grid.points, 0.0
    else:
        grid = Grid2D.cartesian(args.nx, args.ny, b[:2], b[2:4], args.boundary)
        x, y = grid.mesh()
    if args.init == "zero":
        return SpinorState.zeros(grid, wavenumber=args.wavenumber)
    if args.init == "plane-wave":
        if not periodic:
            raise InputError("plane-wave data needs a periodic grid")
        xa = grid if isinstance(grid, Grid1D) else grid.x_axis
        # snap q to the nearest wavenumber that fits the periodic box
        q = 2 * np.pi / (xa.s_max - xa.s_min) * round(args.q * (xa.s_max - xa.s_min) / (2 * np.pi))
        qx = effective_wavenumber(q, xa.spacing, args.stencil)
        _, a, c = free_eigen_partner(spec.m, qx, args.wavenumber)
        wave = args.amplitude * np.exp(1j * q * x) * np.ones_like(np.asarray(y, dtype=float) + x)
        return SpinorState(grid, a * wave, c * wave, wavenumber=args.wavenumber)
    g = args.amplitude * np.exp(-(x**2 + np.asarray(y) ** 2) / (2 * args.width**2))
    return SpinorState(grid, g * np.exp(1j * args.q * x), 0.5 * g, wavenumber=args.wavenumber)


def cmd_evolve(args):
    spec = _spec(args)
    if not args.output_dir:
        raise InputError("--output-dir is required")
    try:
        state = initial_state(args, spec)
        integ = ev.Integrator(args.scheme, args.dt, args.cfl)
        integ.step_size(state.grid)
    except (ValueError, OSError) as exc:
        raise InputError(str(exc)) from None
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.resolved").write_text(cfg.dump(resolved(args)), encoding="utf-8")
    marker = out / "TRUNCATED"
    if marker.exists():
        marker.unlink()
    deriv = DerivativeOperator(args.stencil, edge="dirichlet")
    with open(out / "fields.csv", "w", newline="", encoding="utf-8") as ff, \
            open(out / "diagnostics.csv", "w", newline="", encoding="utf-8") as fd_:
        fieldio.write_field_header(ff, state.coords)
        fieldio.write_diagnostics_header(fd_)

        def sink(s, rec):
            fieldio.write_field_rows(ff, s)
            fieldio.write_diagnostics_row(fd_, rec)

        try:
            traj = ev.evolve(spec, state, args.t_final, integ, deriv, args.sample_every, on_sample=sink)
            failure = None
        except ev.EvolutionError as exc:
            traj, failure = exc.trajectory, exc
    report = {
        "command": "evolve", "model": spec.equation, "hermitian": models.hermiticity(spec).is_hermitian,
        "samples": len(traj.diagnostics), "steps": traj.diagnostics[-1].step_count,
        "t_reached": traj.diagnostics[-1].time, "norm_initial": traj.diagnostics[0].norm,
        "norm_final": traj.diagnostics[-1].norm, "max_rel_norm_drift": traj.relative_norm_drift(),
        "truncated": failure is not None, "output_dir": str(out),
    }
    if failure is not None:
        marker.write_text(f"{failure}\n", encoding="utf-8")
        report["error"] = str(failure)
        _emit(report)
        return EXIT_NUMERIC
    _emit(report)
    return EXIT_OK


def cmd_reduce(args):
    if args.from_row is not None:
        row = args.from_row
        sol = oracles.TABLE1[row]
        lo, hi = oracles.default_probes(row, constants=sol.constants(args.constants))[::6]
        s0 = lo if args.s_start is None else args.s_start
        s1 = hi if args.s_end is None else args.s_end
        try:
            problem = odesolve.seeded_problem(row, s0, s1, args.constants, atol=args.atol, rtol=args.rtol)
        except (KeyError, oracles.DomainError) as exc:
            raise InputError(str(exc)) from None
    else:
        spec = _spec(args)
        if None in (args.seed_plus, args.seed_minus, args.s_start, args.s_end):
            raise InputError("--seed-plus, --seed-minus, --s-start and --s-end are required without --from-row")
        try:
            system = reductions.reduce(spec, args.epsilon, args.wavenumber)
        except reductions.UnsupportedModel as exc:
            raise InputError(str(exc)) from None
        problem = odesolve.IvpProblem(system, args.s_start, args.s_end, (args.seed_plus, args.seed_minus),
                                      args.atol, args.rtol)
    result = odesolve.integrate(problem, args.n_out)
    report = {"command": "reduce", "model": problem.system.model.equation, "halt_reason": result.reason,
              "s_start": problem.s_start, "s_end": problem.s_end, "s_reached": result.s_reached,
              "message": result.message, "config": cfg.dump(resolved(args))}
    if args.from_row is not None:
        report["max_deviation"] = odesolve.oracle_deviation(result, args.from_row, args.constants)
    if args.output and result.profile is not None:
        with open(args.output, "w", newline="", encoding="utf-8") as fh:
            fieldio.write_profile(fh, result.profile)
    _emit(report)
    return EXIT_NUMERIC if result.reason in ("step-underflow", "failed") else EXIT_OK


def cmd_scale_check(args):
    spec = _spec(args)
    if not args.couplings:
        spec = spec.with_(**{k: 0.5 + 0.25 * i for i, k in enumerate(spec.couplings)})
    rep = scaling.scale_check(spec, args.lam)
    d = rep.as_dict()
    d.update(command="scale-check", couplings=dict(spec.couplings))
    verdict = rep.covariant
    if spec.m != 0.0:
        # the verdict is taken on the massless model; the mass term is reported separately
        massless = scaling.scale_check(spec.with_(m=0.0), args.lam)
        d["massless"] = massless.as_dict()
        d["note"] = "mismatch attributed to the mass term" if rep.attributed_to_mass else "mismatch not explained by the mass term"
        verdict = massless.covariant and rep.attributed_to_mass
    d["verdict_covariant"] = verdict
    _emit(d)
    return EXIT_OK if verdict else EXIT_VERIFY


SWEEP_COLUMNS = ("s_start", "s_end", "outcome", "halt_reason", "s_reached", "max_deviation", "message")


def sweep_task(task):
    row, constants, s0, s1, n_out = task
    try:
        problem = odesolve.seeded_problem(row, s0, s1, constants)
        result = odesolve.integrate(problem, n_out)
        dev = odesolve.oracle_deviation(result, row, constants)
        outcome = "ok" if result.reason == "reached-end" else "halted"
        return outcome, result.reason, result.s_reached, dev, ""
    except Exception as exc:  # recorded in-row; a sweep never aborts on one tuple
        return "error", "", float("nan"), float("nan"), f"{type(exc).__name__}: {exc}"


def cmd_sweep(args):
    row = args.family
    sol = oracles.TABLE1[row]
    names, grids = [], []
    for spec_text in args.param:
        name, _, values = spec_text.partition("=")
        name = name.strip()
        if name not in sol.defaults:
            raise InputError(f"row {row} has no parameter {name!r}; expected {sorted(sol.defaults)}")
        if name in names:
            raise InputError(f"parameter {name!r} given twice")
        names.append(name)
        grids.append(float_list(values))
    lo, hi = sol.probe_interval
    s0 = lo if args.s_start is None else args.s_start
    s1 = hi if args.s_end is None else args.s_end
    tasks = [(row, dict(zip(names, combo)), s0, s1, args.n_out) for combo in itertools.product(*grids)]
    if args.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(sweep_task, tasks))
    else:
        results = [sweep_task(t) for t in tasks]
    rows = []
    for (r, consts, a, b, _), (outcome, reason, reached, dev, msg) in zip(tasks, results):
        rows.append([f"row{r}", *(fieldio.fmt(consts[n]) for n in names), fieldio.fmt(a), fieldio.fmt(b),
                     outcome, reason, fieldio.fmt(reached), fieldio.fmt(dev), msg])
    buf = io.StringIO()
    w = fieldio.writer(buf)
    w.writerow(["family", *names, *SWEEP_COLUMNS])
    w.writerows(rows)
    if args.output:
        out = Path(args.output)
        out.write_text(buf.getvalue(), encoding="utf-8")
        out.with_name(out.name + ".config").write_text(cfg.dump(resolved(args)), encoding="utf-8")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


COMMANDS = {
    "verify-table1": cmd_verify_table1,
    "residual": cmd_residual,
    "evolve": cmd_evolve,
    "reduce": cmd_reduce,
    "scale-check": cmd_scale_check,
    "sweep": cmd_sweep,
}


def main(argv=None, environ=None):
    environ = os.environ if environ is None else environ
    try:
        args = parse(argv, environ)
        return COMMANDS[args.command](args)
    except (InputError, cfg.ConfigError, fieldio.SchemaError) as exc:
        print(f"nldirac: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
