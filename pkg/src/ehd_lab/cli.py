"""``ehd-lab`` command line.

Every run prints (or writes) a manifest with the command, its full parameter
set, the package version and the grid/tolerance settings that produced the
numbers.  CSV output embeds the manifest as ``#`` lines; JSON output stores
it under ``"manifest"``.  No timestamps are recorded, so identical
parameters give byte-identical output.

Exit codes: 0 success, 2 invalid input or usage, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .arcs import ArcSet, Phase, eigenvalue, matched_homogeneity, taylor_cone
from .errors import NumericalError, ValidationError
from .fields import (
    acf_phi,
    caccioppoli_check,
    cusp_ratio,
    first_variation_residual,
    jm_relation_residual,
    monitor,
    random_test_fields,
)
from .partition import beta_star_connected, beta_star_two_component
from .solver import SolverState, extract_free_boundary, read_config, recover_u, solve
from .tables import read_curve, read_field, write_curve, write_field, write_monitor


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(f"{self.prog}: {message}")


def _parse_arcs(text: str) -> ArcSet:
    pairs = []
    for chunk in text.split(";"):
        try:
            a, b = (float(x) for x in chunk.split(","))
        except ValueError:
            raise ValidationError(f"--arc expects 'lo,hi' (radians), optionally ';'-separated; got {text!r}") from None
        pairs.append((a, b))
    return ArcSet.of(*pairs)


def _clean(value):
    if isinstance(value, float | np.floating):
        v = float(value)
        return v if math.isfinite(v) else repr(v)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_clean(v) for v in value]
    return value


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(_fmt(v) for v in value)
    return str(value)


def _emit(args, result: dict, table=None, table_writer=None, ledger=None, outputs=()) -> None:
    """Write ``result`` (key/value record) and an optional table in the chosen format."""
    params = {k: v for k, v in vars(args).items() if k not in ("func", "format", "output")}
    manifest = {
        "command": args.command,
        "parameters": _clean(params),
        "version": __version__,
        "ledger": _clean(ledger or {}),
        "outputs": list(outputs),
    }
    if args.format == "json":
        doc = {"manifest": manifest, "result": _clean(result)}
        if table is not None:
            doc["table"] = _clean(table)
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# command = {args.command}\n# version = {__version__}\n")
        for group in ("parameters", "ledger"):
            for k, v in sorted(manifest[group].items()):
                buf.write(f"# {group}.{k} = {_fmt(v)}\n")
        for path in outputs:
            buf.write(f"# output = {path}\n")
        if table_writer is not None:
            table_writer(buf)
        else:
            buf.write("key,value\n")
            for k, v in _clean(result).items():
                buf.write(f"{k},{_fmt(v)}\n")
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands -------------------------------------------------------------


def cmd_eigen(args):
    arcs = _parse_arcs(args.arc)
    res = eigenvalue(arcs, Phase.coerce(args.phase), args.n)
    outputs = []
    if args.out:
        np.savetxt(
            args.out, np.column_stack((res.grid, res.eigenfunction)), fmt="%.17g", delimiter=",", header="theta,f", comments=""
        )
        outputs.append(args.out)
    result = {
        "lambda": res.lam,
        "alpha": res.alpha,
        "phase": res.phase.value,
        "arc_lo": res.arc.theta_lo,
        "arc_hi": res.arc.theta_hi,
        "bc_lo": res.bc[0],
        "bc_hi": res.bc[1],
        "n_grid": res.n_grid,
    }
    _emit(args, result, ledger={"n_grid": args.n, "discretization": "finite differences, O(h^2)"}, outputs=outputs)


def cmd_taylor(args):
    t = taylor_cone(args.tol, args.n, args.method)
    result = {
        "theta_T": t.theta_T,
        "theta_T_deg": t.theta_T_deg,
        "opening_deg": t.opening_deg,
        "lambda": t.lam,
        "alpha": t.alpha,
    }
    _emit(args, result, ledger={"tol": args.tol, "n_grid": args.n, "method": args.method})


def cmd_matched(args):
    m = matched_homogeneity(args.tol, args.n, args.method)
    result = {
        "theta1": m.theta1,
        "alpha_star": m.alpha_star,
        "lambda_star": m.lambda_star,
        "residual": m.residual,
        "gas_arc": [m.gas_arc.theta_lo, m.gas_arc.theta_hi],
        "fluid_arc": [m.fluid_arc.theta_lo, m.fluid_arc.theta_hi],
        "split_value": m.split_value,
    }
    _emit(args, result, ledger={"tol": args.tol, "n_grid": args.n, "method": args.method})


def cmd_betastar(args):
    if args.family == "connected":
        rep = beta_star_connected(args.scan, args.tol, args.n)
    else:
        rep = beta_star_two_component(args.scan, args.tol, args.n)
    result = {
        "family": args.family,
        "best_value": rep.best_value,
        "minimizer": list(rep.minimizer),
        "certified_lower_bound_ok": rep.certified_lower_bound_ok,
        "grid_error": rep.grid_error,
        "evaluations": rep.evaluations,
    }
    if rep.connected_value is not None:
        result["connected_value"] = rep.connected_value
        result["undercuts_connected"] = rep.undercuts_connected
        result["note"] = rep.note
    _emit(args, result, ledger={"tol": args.tol, "n_grid": args.n, "n_scan": args.scan})


def cmd_monitor(args):
    field = read_field(args.field)
    if not hasattr(field, "dr"):
        raise ValidationError("monitor needs a polar field table")
    ledger = {"dr": field.dr, "n_r": field.n_r, "n_theta": field.n_theta, "tolerance": field.tolerance()}
    check = args.check
    if check in ("phi", "weiss", "flux"):
        kind = {"phi": "phi", "weiss": "weiss_m", "flux": "residual"}[check]
        curve = monitor(field, kind, beta=args.beta, beta_star=args.betastar)
    elif check == "jm":
        curve = jm_relation_residual(field, args.beta)
    elif check == "firstvar":
        rng = np.random.default_rng(args.seed)
        tests = random_test_fields(rng, args.tests, field)
        values = [first_variation_residual(field, t) for t in tests]
        rows = [{"index": k, "residual": v} for k, v in enumerate(values)]
        result = {"max_abs_residual": max(abs(v) for v in values), "tolerance": field.tolerance() * max(field.scale, 1e-300)}

        def writer(buf):
            buf.write("index,residual\n")
            for k, v in enumerate(values):
                buf.write(f"{k},{v!r}\n")

        _emit(args, result, table=rows, table_writer=writer, ledger=ledger)
        return
    else:
        rep = caccioppoli_check(field)
        result = {k: getattr(rep, k) for k in ("radius", "lhs_plus", "rhs_plus", "lhs_minus", "rhs_minus", "C_min")}
        _emit(args, result, ledger=ledger)
        return
    result = {"kind": curve.kind, "samples": len(curve), "max_abs": float(np.max(np.abs(curve.values)))}
    if check == "phi":
        result["nondecreasing"] = bool(np.all(np.diff(curve.values) >= -ledger["tolerance"]))
        result["phi_at_rmax"] = acf_phi(field, field.r_max, args.betastar)
    table = [{"r": r, "value": v} for r, v in zip(curve.radii, curve.values)]
    _emit(args, result, table=table, table_writer=lambda buf: write_monitor(buf, curve), ledger=ledger)


def cmd_solve(args):
    cfg = read_config(args.config)
    state: SolverState = solve(cfg)
    outputs = []
    if args.out_field:
        write_field(args.out_field, recover_u(state), {"source": "solve"})
        outputs.append(args.out_field)
    curve = extract_free_boundary(state)
    if args.out_curve:
        write_curve(args.out_curve, curve)
        outputs.append(args.out_curve)
    result = {
        "converged": state.converged,
        "iterations": state.iterations,
        "residual_norm": state.residual_norm,
        "picard_steps": state.picard_steps,
        "note": state.note,
        "grid": list(cfg.shape),
        "free_boundary_points": len(curve),
    }
    _emit(args, result, ledger=cfg.as_dict(), outputs=outputs)
    if not state.converged:
        raise NumericalError(f"solver did not converge: residual {state.residual_norm:.3e}")


def cmd_cusp(args):
    curve = read_curve(args.curve)
    mc = cusp_ratio(curve)
    result = {"slope": mc.meta["slope"], "vertices": len(mc), "infinite": len(mc.meta["infinite"])}
    table = [{"arclength": r, "ratio": v} for r, v in zip(mc.radii, mc.values)]

    def writer(buf):
        buf.write(f"# slope = {mc.meta['slope']!r}\narclength,ratio\n")
        for r, v in zip(mc.radii, mc.values):
            buf.write(f"{r!r},{v!r}\n")

    _emit(args, result, table=table, table_writer=writer)


# --- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ehd-lab", description="Spectral, monitor and solver computations for axisymmetric EHD free boundaries.")
    p.add_argument("--version", action="version", version=f"ehd-lab {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eigen", parents=[common], help="ground-state eigenvalue on an arc set")
    s.add_argument("--arc", required=True, help="lo,hi in radians; join several arcs with ';'")
    s.add_argument("--phase", choices=("gas", "fluid"), required=True)
    s.add_argument("--n", type=int, default=2048, help="grid cells on [0, pi]")
    s.add_argument("--out", help="CSV file for the sampled eigenfunction")
    s.set_defaults(func=cmd_eigen)

    for name, func, text in (
        ("taylor", cmd_taylor, "Taylor-cone angle (degree-1/2 gas cap)"),
        ("matched", cmd_matched, "matched homogeneity exponent"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("--tol", type=float, default=1e-8)
        s.add_argument("--n", type=int, default=2048)
        s.add_argument("--method", choices=("grid", "shoot"), default="grid")
        s.set_defaults(func=func)

    s = sub.add_parser("betastar", parents=[common], help="minimize the split value over gas caps")
    s.add_argument("--family", choices=("connected", "two"), default="connected")
    s.add_argument("--scan", type=int, default=256)
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--n", type=int, default=1024)
    s.set_defaults(func=cmd_betastar)

    s = sub.add_parser("monitor", parents=[common], help="diagnostics on a sampled field table")
    s.add_argument("--field", required=True)
    s.add_argument("--check", choices=("phi", "weiss", "flux", "firstvar", "jm", "cacc"), required=True)
    s.add_argument("--beta", type=float, default=1.0)
    s.add_argument("--betastar", type=float, default=2.0)
    s.add_argument("--tests", type=int, default=100, help="random test fields for firstvar")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_monitor)

    s = sub.add_parser("solve", parents=[common], help="regularized solver from a key=value config")
    s.add_argument("--config", required=True)
    s.add_argument("--out-field", help="field table of the recovered u")
    s.add_argument("--out-curve", help="CSV of the extracted free boundary")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("cusp", parents=[common], help="cusp ratio of an x1,x2 polyline")
    s.add_argument("--curve", required=True)
    s.set_defaults(func=cmd_cusp)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
