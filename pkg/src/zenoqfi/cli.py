"""Command-line entry point: ``zenoqfi <command> [flags]``.

Every run writes one artifact (JSON object or CSV table) to stdout or
``--output``.  Failures print a single line ``error: <code>: <message>`` to
stderr and exit 1 (domain error) or 2 (usage error).
"""

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .bounds import single_experiment_reports, total_time_reports
from .dephasing import gamma_at, load_tabulated
from .errors import DimensionError, UnsupportedCaseError, ZenoQfiError
from .hilbert import N_MAX, css_state, ghz_state, random_pure_state
from .protocol import (
    make_model,
    optimize_time_analytic,
    optimize_time_closed_form,
    optimize_time_numeric,
    total_time_bound,
    verify_uniform_allocation,
)
from .qfi import analytic_qfi_css_local, analytic_qfi_ghz, qfi_at, sld_initial_factor
from .scaling import (
    SweepCase,
    figure_lines,
    fit_exponent,
    log_grid,
    ordering_violations,
    sweep_bound,
    sweep_max_qfi,
)

UNITS_NOTE = (
    "All quantities are in one consistent, user-chosen unit system "
    "(gamma in 1/time, t and T in time); no unit conversion is performed."
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(kind=float):
    def parse(text):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not v > 0 or (kind is float and not math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
        return v
    return parse


def _state_spec(text):
    if text in ("ghz", "css"):
        return (text, None)
    if text.startswith("random:"):
        try:
            return ("random", int(text.split(":", 1)[1]))
        except ValueError:
            pass
    raise argparse.ArgumentTypeError(f"state must be ghz, css or random:<seed>, got {text!r}")


def _model_spec(text):
    if text in ("markovian", "zeno"):
        return (text, None)
    if text.startswith("tabulated:") and len(text) > len("tabulated:"):
        return ("tabulated", text.split(":", 1)[1])
    raise argparse.ArgumentTypeError(
        f"model must be markovian, zeno or tabulated:<path>, got {text!r}"
    )


def build_parser():
    p = _Parser(prog="zenoqfi", description=__doc__.splitlines()[0], epilog=UNITS_NOTE)
    p.add_argument("--version", action="version", version=f"zenoqfi {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", "-o", help="output path (default: stdout)")

    def state_flags(sp):
        sp.add_argument("--state", type=_state_spec, default=("ghz", None),
                        help="ghz | css | random:<seed> (default ghz)")
        sp.add_argument("--n", type=_positive(int), required=True, help="number of atoms N")
        sp.add_argument("--n-limit", type=_positive(int), default=N_MAX,
                        help=f"largest N for dense 2^N matrices (default {N_MAX})")

    def noise_flags(sp):
        sp.add_argument("--gamma", type=_positive(), required=True,
                        help="decoherence rate (Markovian) or Zeno gamma, 1/time")
        sp.add_argument("--model", type=_model_spec, default=("markovian", None),
                        help="markovian | zeno | tabulated:<csv with header t,gamma>")
        sp.add_argument("--geometry", choices=("local", "collective"), default="local")

    sp = sub.add_parser("qfi", help="exact and analytic QFI of one experiment", epilog=UNITS_NOTE)
    state_flags(sp)
    noise_flags(sp)
    sp.add_argument("--t", type=_positive(), required=True, help="interrogation time")
    common(sp)

    sp = sub.add_parser("bounds", help="closed-form QFI bounds", epilog=UNITS_NOTE)
    state_flags(sp)
    sp.add_argument("--gamma", type=_positive(), required=True)
    sp.add_argument("--model", type=_model_spec, default=("markovian", None))
    sp.add_argument("--t", type=_positive(), help="interrogation time (single-experiment bounds)")
    sp.add_argument("--t-total", type=_positive(), help="total time T (total-time bounds)")
    common(sp)

    sp = sub.add_parser("optimize", help="optimal interrogation time", epilog=UNITS_NOTE)
    state_flags(sp)
    noise_flags(sp)
    sp.add_argument("--t-total", type=_positive(), required=True)
    sp.add_argument("--t-min", type=_positive())
    sp.add_argument("--t-max", type=_positive())
    common(sp)

    sp = sub.add_parser("verify-uniform", help="test uniform division of total time",
                        epilog=UNITS_NOTE)
    sp.add_argument("--experiments", type=_positive(int), required=True, help="n >= 2")
    sp.add_argument("--t-total", type=_positive(), required=True)
    sp.add_argument("--c", type=_positive(), required=True, help="1/N (local) or 1/N^2 (collective)")
    sp.add_argument("--gamma", type=_positive(), required=True)
    sp.add_argument("--trials", type=_positive(int), default=20)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)

    def grid_flags(sp):
        sp.add_argument("--n-min", type=_positive(), default=10.0)
        sp.add_argument("--n-max", type=_positive(), default=10_000.0)
        sp.add_argument("--points-per-decade", type=_positive(int), default=20)
        sp.add_argument("--t-total", type=_positive(), required=True)
        sp.add_argument("--gamma", type=_positive(), required=True)

    sp = sub.add_parser("scaling", help="sweep N and fit the power-law exponent",
                        epilog=UNITS_NOTE)
    grid_flags(sp)
    sp.add_argument("--state", choices=("ghz", "css"), default="ghz")
    sp.add_argument("--geometry", choices=("local", "collective"), default="local")
    sp.add_argument("--model", choices=("markovian", "zeno"), default="zeno")
    sp.add_argument("--bound", choices=("markovian_local", "markovian_collective", "zeno_local",
                                        "zeno_collective", "zeno_css_collective"),
                    help="sweep a total-time bound instead of the state's optimum")
    common(sp)

    sp = sub.add_parser("figure", help="resolution-scaling lines", epilog=UNITS_NOTE)
    grid_flags(sp)
    common(sp)
    return p


def _model(spec, gamma):
    kind, path = spec
    if kind == "tabulated":
        try:
            return load_tabulated(path)
        except OSError as exc:
            raise ZenoQfiError(f"cannot read {path}: {exc.strerror}") from None
    return make_model(kind, gamma)


def _state(spec, n, n_limit):
    kind, seed = spec
    if kind == "ghz":
        return ghz_state(n, n_max=n_limit)
    if kind == "css":
        return css_state(n, n_max=n_limit)
    return random_pure_state(n, seed, n_max=n_limit)


def _state_label(spec):
    kind, seed = spec
    return kind if seed is None else f"{kind}:{seed}"


def _model_label(spec):
    kind, path = spec
    return kind if path is None else f"{kind}:{path}"


def _rel_gap(a, b):
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def cmd_qfi(args):
    model = _model(args.model, args.gamma)
    rho = _state(args.state, args.n, args.n_limit)
    exact = qfi_at(rho, args.t, model, args.geometry)
    analytic = None
    kind = args.state[0]
    if kind == "ghz":
        analytic = float(analytic_qfi_ghz(args.n, args.t, model, args.geometry))
    elif kind == "css" and args.geometry == "local":
        analytic = float(analytic_qfi_css_local(args.n, args.t, model))
    g_t = gamma_at(model, args.t)
    i_rho = sld_initial_factor(rho)
    reports = {r.bound_name: r.value for r in single_experiment_reports(args.n, args.t, g_t, i_rho)}
    bound_key = "single_local" if args.geometry == "local" else "single_collective"
    results = {
        "qfi_exact": exact,
        "qfi_analytic": analytic,
        "relative_gap": None if analytic is None else _rel_gap(exact, analytic),
        "gamma_t": g_t,
        "i_rho": i_rho,
        "bound": reports[bound_key],
    }
    params = {"state": _state_label(args.state), "N": args.n, "t": args.t, "gamma": args.gamma,
              "model": _model_label(args.model), "geometry": args.geometry}
    return params, results, []


def cmd_bounds(args):
    warnings = []
    params = {"state": _state_label(args.state), "N": args.n, "gamma": args.gamma,
              "model": _model_label(args.model), "t": args.t, "T": args.t_total}
    if args.t is None and args.t_total is None:
        raise UsageError("bounds needs --t and/or --t-total")
    out = []
    if args.t is not None:
        model = _model(args.model, args.gamma)
        i_rho = sld_initial_factor(_state(args.state, args.n, args.n_limit))
        out += single_experiment_reports(args.n, args.t, gamma_at(model, args.t), i_rho)
    if args.t_total is not None:
        out += total_time_reports(args.n, args.t_total, args.gamma)
        warnings.append("total_zeno_* bounds assume gamma(t) ~ gamma^2 t^2 / 2 at t_opt")
    results = {"bounds": [
        {"name": r.bound_name, "value": r.value, "t_opt": r.t_opt, "caveat": r.caveat}
        for r in out
    ]}
    table = (["bound", "value", "t_opt", "caveat"],
             [[r.bound_name, r.value, r.t_opt, r.caveat] for r in out])
    return params, results, warnings, table


def _report_dict(rep):
    return {"t_star": rep.t_star, "n_star": rep.n_star, "f_max": rep.f_max,
            "method": rep.method, "n_int": rep.n_int, "f_at_n_int": rep.f_at_n_int}


def cmd_optimize(args):
    model = _model(args.model, args.gamma)
    bracket = None
    if args.t_min is not None or args.t_max is not None:
        if args.t_min is None or args.t_max is None:
            raise UsageError("--t-min and --t-max go together")
        bracket = (args.t_min, args.t_max)
    kind = args.state[0]
    warnings = []
    if args.n <= args.n_limit:
        rep = optimize_time_numeric(_state(args.state, args.n, args.n_limit), args.t_total,
                                    model, args.geometry, bracket)
    elif kind in ("ghz", "css"):
        rep = optimize_time_analytic(kind, args.n, args.t_total, model, args.geometry, bracket)
        warnings.append(f"N > {args.n_limit}: optimized the closed-form QFI instead of the exact solver")
    else:
        raise DimensionError(f"N={args.n} exceeds n_max={args.n_limit} for a random state")
    closed = bound = None
    model_kind = args.model[0]
    if model_kind != "tabulated":
        if kind in ("ghz", "css"):
            try:
                closed = _report_dict(optimize_time_closed_form(
                    kind, args.n, args.t_total, model_kind, args.gamma, args.geometry))
            except UnsupportedCaseError as exc:
                warnings.append(str(exc))
        bound = total_time_bound(args.n, args.t_total, model_kind, args.gamma, args.geometry)
    results = _report_dict(rep)
    results["closed_form"] = closed
    results["total_time_bound"] = bound
    params = {"state": _state_label(args.state), "N": args.n, "T": args.t_total,
              "gamma": args.gamma, "model": _model_label(args.model), "geometry": args.geometry}
    return params, results, warnings


def cmd_verify_uniform(args):
    rep = verify_uniform_allocation(args.experiments, args.t_total, args.c, args.gamma,
                                    args.trials, args.seed)
    warnings = []
    if not rep.uniform_is_best:
        warnings.append("a non-uniform allocation beats uniform division")
    results = {
        "best_allocation": list(rep.best_allocation), "best_value": rep.best_value,
        "uniform_value": rep.uniform_value, "gap": rep.gap, "relative_gap": rep.relative_gap,
        "max_deviation": rep.max_deviation, "uniform_is_best": rep.uniform_is_best,
    }
    params = {"n": args.experiments, "T": args.t_total, "c": args.c, "gamma": args.gamma,
              "trials": args.trials, "seed": args.seed}
    return params, results, warnings


def _grid(args):
    if not args.n_min < args.n_max:
        raise UsageError("--n-min must be below --n-max")
    return [float(n) for n in log_grid(args.n_min, args.n_max, args.points_per_decade)]


def cmd_scaling(args):
    ns = _grid(args)
    if args.bound:
        sweep = sweep_bound(args.bound, ns, args.t_total, args.gamma)
        t_opt = {"zeno_local": lambda n: 1 / (args.gamma * math.sqrt(n)),
                 "zeno_collective": lambda n: 1 / (args.gamma * n),
                 "zeno_css_collective": lambda n: 1 / (args.gamma * math.sqrt(n))}.get(args.bound)
        rows = [(n, v, t_opt(n) if t_opt else None) for n, v in sweep]
    else:
        case = SweepCase(args.state, args.geometry, args.model)
        rows = sweep_max_qfi(case, ns, args.t_total, args.gamma)
    fit = fit_exponent([(n, f) for n, f, _ in rows])
    params = {"state": args.state, "geometry": args.geometry, "model": args.model,
              "bound": args.bound, "n_min": args.n_min, "n_max": args.n_max,
              "points_per_decade": args.points_per_decade, "T": args.t_total, "gamma": args.gamma}
    results = {
        "points": [{"N": n, "f_max": f, "t_star": t} for n, f, t in rows],
        "fit": {"exponent": fit.exponent, "intercept": fit.intercept,
                "r_squared": fit.r_squared, "residual_std": fit.residual_std,
                "n_range": list(fit.n_range)},
    }
    table = (["N", "f_max", "t_star"], [[n, f, t] for n, f, t in rows])
    return params, results, [], table


def cmd_figure(args):
    ns = _grid(args)
    lines = figure_lines(ns, args.t_total, args.gamma)
    bad = ordering_violations(lines)
    warnings = []
    if bad:
        warnings.append(
            f"bottom-to-top ordering heisenberg < zeno < shot_noise < constant fails at "
            f"{len(bad)} N values (outside the regime 2 gamma/T >= 1, T N >= 1)"
        )
    params = {"n_min": args.n_min, "n_max": args.n_max,
              "points_per_decade": args.points_per_decade, "T": args.t_total, "gamma": args.gamma}
    results = {
        "lines": [{"line": ln.label, "points": [{"N": n, "resolution": r} for n, r in ln.points]}
                  for ln in lines],
        "ordering_violations": bad,
    }
    table = (["line", "N", "resolution"],
             [[ln.label, n, r] for ln in lines for n, r in ln.points])
    return params, results, warnings, table


COMMANDS = {
    "qfi": cmd_qfi,
    "bounds": cmd_bounds,
    "optimize": cmd_optimize,
    "verify-uniform": cmd_verify_uniform,
    "scaling": cmd_scaling,
    "figure": cmd_figure,
}


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _flatten(prefix, obj, rows):
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, rows)
    elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
        for i, v in enumerate(obj):
            _flatten(f"{prefix}[{i}]", v, rows)
    elif isinstance(obj, list):
        rows.append([prefix, ";".join(_cell(v) for v in obj)])
    else:
        rows.append([prefix, _cell(obj)])


def render(command, params, results, warnings, fmt, table=None):
    if fmt == "json":
        doc = {"command": command, "params": params, "results": results, "warnings": warnings}
        return json.dumps(_clean(doc), indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if table is not None:
        header, rows = table
        w.writerow(header)
        w.writerows([_cell(v) for v in row] for row in rows)
    else:
        w.writerow(["key", "value"])
        rows = []
        _flatten("", results, rows)
        w.writerows(rows)
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None):
    """Execute one command; returns the process exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        out = COMMANDS[args.command](args)
        params, results, warnings = out[:3]
        table = out[3] if len(out) > 3 else None
        text = render(args.command, params, results, warnings, args.format, table)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=stderr)
        return 2
    except ZenoQfiError as exc:
        print(f"error: {exc.code}: {exc}", file=stderr)
        return 1
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())
