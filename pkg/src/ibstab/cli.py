"""Command line front end for the package.

Subcommands:
  kernel-report     periodized kernel coefficients plus the resolved-energy ratio
  predict           critical step from the stability analysis (target or membrane)
  table1            membrane surface maxima over a grid of (N, P)
  simulate          run one configured simulation and emit its energy trace
  find-critical-dt  bisect the empirical stability boundary
  poiseuille        channel-flow convergence study

Numeric output is scientific notation at full round-trip precision with
at least six significant digits.  Exit status: 0 on success, 2 on a
usage error, 1 on a runtime failure.
"""

import argparse
import sys

import numpy as np

from . import harness, kernel, stability


def _fmt(x):
    return np.format_float_scientific(float(x), unique=True, min_digits=6)


def _open_out(path):
    """Return (stream, needs_close) for an --out value; None means stdout."""
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _eps_triple(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated values")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text):
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cmd_kernel_report(args):
    qs = np.arange(-2 * args.n, 2 * args.n + 1)
    vals = kernel.phi_coeff(qs, args.n)
    ratio = kernel.bandlimit_ratio(args.n)
    out, close = _open_out(args.out)
    try:
        out.write("q,Phi\n")
        for q, v in zip(qs, vals):
            out.write(f"{q},{_fmt(v)}\n")
        out.write(f"# R({args.n}) = {_fmt(ratio)}\n")
    finally:
        if close:
            out.close()
    return 0


def _cmd_predict(args):
    if args.kind == "target":
        dtc = stability.critical_dt_target(args.k, args.rho, args.h)
        print(f"dt_critical={_fmt(dtc)}")
        return 0
    mode = "exact" if args.exact else "bandlimited"
    report = stability.stability_surface_membrane(args.n, args.p, mode=mode,
                                                  eps=args.eps)
    h = args.l / args.n
    dtc = stability.critical_dt_membrane(args.k, args.rho, h, args.n, args.p,
                                         mode=mode, eps=args.eps)
    print(f"Cmax={_fmt(report.cmax)}")
    print(f"argmax={report.argmax[0]},{report.argmax[1]}")
    print(f"dt_critical={_fmt(dtc)}")
    return 0


def _cmd_table1(args):
    rows = stability.membrane_cmax_table(args.n, args.p)
    out, close = _open_out(args.out)
    try:
        out.write("N,P,Cmax,xi1,xi2\n")
        for n, p, cmax, x1, x2 in rows:
            out.write(f"{n},{p},{_fmt(cmax)},{x1},{x2}\n")
    finally:
        if close:
            out.close()
    return 0


def _snapshot_base(out_path):
    if out_path is None or out_path == "-":
        return "membrane"
    base = out_path
    if base.endswith(".csv"):
        base = base[:-4]
    return base + "_membrane"


def _cmd_simulate(args):
    cfg = harness.parse_config(args.config)
    every = args.dump_membrane or 0
    verdict = harness.run(cfg, capture_membrane=every)
    out, close = _open_out(args.out)
    try:
        out.write("step,time,relative_energy\n")
        for step, t, rel in verdict.trace:
            out.write(f"{int(step)},{_fmt(t)},{_fmt(rel)}\n")
    finally:
        if close:
            out.close()
    if verdict.snapshots:
        base = _snapshot_base(args.out)
        for step, x in verdict.snapshots:
            with open(f"{base}_{step:08d}.csv", "w") as fh:
                fh.write("k1,k2,X1,X2,X3\n")
                m = x.shape[1]
                for k1 in range(m):
                    for k2 in range(x.shape[2]):
                        fh.write(f"{k1},{k2},{_fmt(x[0, k1, k2])},"
                                 f"{_fmt(x[1, k1, k2])},{_fmt(x[2, k1, k2])}\n")
    print(f"status={verdict.status}", file=sys.stderr)
    return 0


def _cmd_find_critical_dt(args):
    cfg = harness.parse_config(args.config)
    result = harness.find_critical_dt(cfg, args.lo, args.hi,
                                      rel_tol=args.tol, n_seeds=args.seeds)
    for seed, dtc in zip(result.seeds, result.per_seed):
        print(f"seed={seed} dt_critical={_fmt(dtc)}")
    print(f"dt_critical_empirical={_fmt(result.dt_critical)}")
    return 0


def _cmd_poiseuille(args):
    kwargs = {}
    if args.end_time is not None:
        kwargs["end_time"] = args.end_time
    rows = harness.poiseuille_experiment(args.levels, **kwargs)
    out, close = _open_out(args.out)
    try:
        out.write("N,err_u_L1,err_u_L2,err_u_Linf,d_L1,d_L2,d_Linf\n")
        for n, *errs in rows:
            out.write(",".join([str(n)] + [_fmt(e) for e in errs]) + "\n")
    finally:
        if close:
            out.close()
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="ibstab",
        description="Immersed boundary stability laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kernel-report",
                       help="periodized kernel coefficients as CSV")
    p.add_argument("--n", type=int, required=True, help="grid size")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_kernel_report)

    p = sub.add_parser("predict", help="critical step from the analysis")
    kinds = p.add_subparsers(dest="kind", required=True)
    t = kinds.add_parser("target", help="closed form, no surface needed")
    t.add_argument("--k", type=float, required=True, help="spring stiffness")
    t.add_argument("--rho", type=float, required=True, help="fluid density")
    t.add_argument("--h", type=float, required=True, help="grid meshwidth")
    m = kinds.add_parser("membrane", help="surface maximum based")
    m.add_argument("--k", type=float, required=True, help="elastic stiffness")
    m.add_argument("--rho", type=float, required=True, help="fluid density")
    m.add_argument("--n", type=int, required=True, help="grid size")
    m.add_argument("--p", type=int, required=True, help="marker/grid ratio")
    m.add_argument("--l", type=float, default=1.0, help="box size (default 1)")
    m.add_argument("--exact", action="store_true",
                   help="use the exact lattice sums instead of the band limit")
    m.add_argument("--eps", type=_eps_triple, default=None,
                   help="marker offset e1,e2,e3 in meshwidths (exact mode)")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("table1", help="membrane surface maxima as CSV")
    p.add_argument("--n", type=_int_list, default=[16, 32, 64, 128],
                   help="comma-separated grid sizes")
    p.add_argument("--p", type=_int_list, default=[1, 2, 3],
                   help="comma-separated marker/grid ratios")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("simulate", help="run one simulation from a config file")
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument("--out", help="trace CSV path (default stdout)")
    p.add_argument("--dump-membrane", type=int, metavar="EVERY",
                   help="write marker snapshot CSVs every this many steps")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("find-critical-dt",
                       help="bisect the empirical stability boundary")
    p.add_argument("--config", required=True, help="key = value config file")
    p.add_argument("--lo", type=float, required=True, help="stable step")
    p.add_argument("--hi", type=float, required=True, help="unstable step")
    p.add_argument("--tol", type=float, default=1e-3,
                   help="relative bracket tolerance (default 1e-3)")
    p.add_argument("--seeds", type=int, default=10,
                   help="number of random seeds to average (default 10)")
    p.set_defaults(func=_cmd_find_critical_dt)

    p = sub.add_parser("poiseuille", help="channel-flow convergence study")
    p.add_argument("--levels", type=int, required=True,
                   help="number of refinement levels (>= 2)")
    p.add_argument("--end-time", type=float, default=None,
                   help="physical end time (default: two viscous times)")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=_cmd_poiseuille)
    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
