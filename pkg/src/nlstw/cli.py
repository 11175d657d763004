"""Command-line front end.

Subcommands: ansatz, report, project, minimize, regularize, verify.
Exit codes: 0 success, 2 configuration error, 3 non-converged, 4 invariant
failure.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .ansatz import AnsatzBoundsRow, AnsatzConfigError, AnsatzSpec, evaluate_bounds, vortex_field
from .config import (ConfigError, build_cutoffs, build_grid, build_model,
                     default_config_text, load_config, resolve_speed)
from .fieldio import FieldFormatError, load_field, save_field
from .functionals import report
from .grid import GridError
from .nonlinearity import CutoffPhi
from .regularize import RegularizeConfig, g_audit, g_minimize
from .variational import (MinimizeConfig, ProjectionInfeasibleError, SeedError,
                          minimize, project_field)
from .verify import run_checks

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGED = 3
EXIT_INVARIANT = 4


def _add_common(p):
    p.add_argument("--config", help="INI config file")
    p.add_argument("--threads", type=int, help="cap worker threads")


def build_parser():
    ap = argparse.ArgumentParser(prog="nlstw", description=__doc__)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("--print-config", action="store_true",
                    help="print all defaults as a config file and exit")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("ansatz", help="build a vortex-ring field, check its bounds")
    _add_common(p)
    p.add_argument("--R", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--A", type=float)
    p.add_argument("--grid", help="points per axis (int or comma list)")
    p.add_argument("--half-width", dest="half_width",
                   help="box half-width (float or comma list)")
    p.add_argument("--c", type=float)
    p.add_argument("--out", required=True, help="output .nlsw field")
    p.add_argument("--csv", help="bounds CSV path")

    p = sub.add_parser("report", help="evaluate every functional of a stored field")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--c", type=float)
    p.add_argument("--csv", help="write the report row here (default stdout)")

    p = sub.add_parser("project", help="exact Pohozaev projection of a stored field")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--c", type=float)
    p.add_argument("--out", required=True)

    p = sub.add_parser("minimize", help="constrained minimization from a seed field")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--c", type=float)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="iteration trace CSV")
    p.add_argument("--max-iters", type=int, dest="max_iters")

    p = sub.add_parser("regularize", help="penalized energy regularization")
    _add_common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--h", type=float, dest="hpen")
    p.add_argument("--out", required=True)
    p.add_argument("--audit", help="audit CSV path")

    p = sub.add_parser("verify", help="run the invariant suite (JSON lines)")
    _add_common(p)
    p.add_argument("--size", type=int)
    p.add_argument("--seed", type=int)
    return ap


def _setup(args, overrides):
    if getattr(args, "threads", None):
        os.environ["NLSW_THREADS"] = str(args.threads)
    return load_config(getattr(args, "config", None), overrides)


def cmd_ansatz(args):
    overrides = {
        ("ansatz", "R"): args.R,
        ("ansatz", "eps"): args.eps,
        ("ansatz", "A"): args.A,
        ("grid", "sizes"): args.grid,
        ("grid", "half_widths"): args.half_width,
        ("speed", "c"): args.c,
    }
    cfg = _setup(args, overrides)
    model = build_model(cfg)
    grid = build_grid(cfg)
    c = resolve_speed(cfg, model)
    phi, chi = build_cutoffs(model)
    a_val = cfg["ansatz"]["A"].strip()
    spec = AnsatzSpec(R=float(cfg["ansatz"]["R"]), eps=float(cfg["ansatz"]["eps"]),
                      A=float(a_val) if a_val else None, r0=model.r0)
    u = vortex_field(spec, grid)
    save_field(args.out, u, model.r0, CutoffPhi.construction_id)
    row = evaluate_bounds(spec, grid, c, model, phi, chi,
                          slack=float(cfg["ansatz"]["slack"]))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(AnsatzBoundsRow.CSV_HEADER + "\n")
            fh.write(row.csv_row() + "\n")
    print("ansatz: Q=%.6g in [%.6g, %.6g] -> %s"
          % (row.q, row.q_lo, row.q_hi, "pass" if row.q_in_bounds else "FAIL"))
    return EXIT_OK if row.q_in_bounds else EXIT_INVARIANT


def cmd_report(args):
    cfg = _setup(args, {("speed", "c"): args.c})
    model = build_model(cfg)
    phi, chi = build_cutoffs(model)
    c = resolve_speed(cfg, model)
    u, r0, _ = load_field(args.infile)
    if abs(r0 - model.r0) > 1e-12:
        raise ConfigError("field r0=%g does not match the model r0=%g" % (r0, model.r0))
    rep = report(u, c, model, phi, chi)
    line = rep.csv_row()
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.CSV_HEADER + "\n")
            fh.write(line + "\n")
    else:
        print(rep.CSV_HEADER)
        print(line)
    return EXIT_OK


def cmd_project(args):
    cfg = _setup(args, {("speed", "c"): args.c})
    model = build_model(cfg)
    phi, chi = build_cutoffs(model)
    c = resolve_speed(cfg, model)
    u, r0, phi_id = load_field(args.infile)
    out, sigma = project_field(u, c, model, phi, chi)
    save_field(args.out, out, r0, phi_id)
    print("project: sigma = %.12g" % sigma)
    return EXIT_OK


def cmd_minimize(args):
    overrides = {("speed", "c"): args.c,
                 ("minimize", "max_iters"): args.max_iters}
    cfg = _setup(args, overrides)
    model = build_model(cfg)
    phi, chi = build_cutoffs(model)
    c = resolve_speed(cfg, model)
    u0, r0, phi_id = load_field(args.infile)
    m = cfg["minimize"]
    mc = MinimizeConfig(
        c=c,
        max_iters=int(m["max_iters"]),
        tol_residual=float(m["tol_residual"]),
        tol_constraint=float(m["tol_constraint"]),
        project_every=int(m["project_every"]),
        gauge_every=int(m["gauge_every"]),
        step0=float(m["step0"]) if m["step0"].strip() else None,
        armijo_shrink=float(m["armijo_shrink"]),
        armijo_slope=float(m["armijo_slope"]),
    )
    u_star, trace = minimize(u0, mc, model, phi, chi)
    save_field(args.out, u_star, r0, phi_id)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.CSV_HEADER + "\n")
            for line in trace.csv_rows():
                fh.write(line + "\n")
    rep = trace.terminal_report
    print("minimize: converged=%s iters=%d t_c_estimate=%.8g e_gl=%.8g b_c=%.3g"
          % (trace.converged, trace.n_iters, trace.t_c_estimate, rep.e_gl, rep.b_c))
    for w in trace.warnings:
        print("warning: " + w)
    return EXIT_OK if trace.converged else EXIT_NONCONVERGED


def cmd_regularize(args):
    cfg = _setup(args, {("regularize", "h"): args.hpen})
    model = build_model(cfg)
    phi, _ = build_cutoffs(model)
    u, r0, phi_id = load_field(args.infile)
    rc = RegularizeConfig(h=float(cfg["regularize"]["h"]),
                          max_iters=int(cfg["regularize"]["max_iters"]),
                          tol=float(cfg["regularize"]["tol"]))
    v_h, info = g_minimize(u, rc, model, phi)
    save_field(args.out, v_h, r0, phi_id)
    audit = g_audit(u, v_h, rc, model, phi)
    if args.audit:
        with open(args.audit, "w") as fh:
            fh.write(audit.CSV_HEADER + "\n")
            fh.write(audit.csv_row() + "\n")
    if audit.e_gl_vh > audit.e_gl_u + 1e-12 * max(audit.e_gl_u, 1.0):
        print("regularize: INVARIANT FAILURE e_gl increased")
        return EXIT_INVARIANT
    print("regularize: e_gl %.8g -> %.8g, |Q drift| = %.3g, pinch = %.3f"
          % (audit.e_gl_u, audit.e_gl_vh, audit.q_drift, audit.pinch_fraction))
    return EXIT_OK if info["converged"] else EXIT_NONCONVERGED


def cmd_verify(args):
    overrides = {("verify", "size"): args.size, ("verify", "seed"): args.seed}
    cfg = _setup(args, overrides)
    model = build_model(cfg)
    checks = run_checks(n=int(cfg["verify"]["size"]),
                        seed=int(cfg["verify"]["seed"]), model=model)
    ok = True
    for ch in checks:
        print(ch.json_line())
        ok = ok and ch.passed
    return EXIT_OK if ok else EXIT_INVARIANT


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.print_config:
        sys.stdout.write(default_config_text())
        return EXIT_OK
    if not args.command:
        ap.print_help()
        return EXIT_CONFIG
    handlers = {
        "ansatz": cmd_ansatz,
        "report": cmd_report,
        "project": cmd_project,
        "minimize": cmd_minimize,
        "regularize": cmd_regularize,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, AnsatzConfigError, GridError, FieldFormatError,
            SeedError, FileNotFoundError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except ProjectionInfeasibleError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
