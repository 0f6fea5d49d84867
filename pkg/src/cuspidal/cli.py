"""Command-line interface: classify, fk, ik, boundary, sweep, verify.

All numeric flags are radians and dimensionless lengths; JSON goes to
stdout, figures and tables to --out.  Exit codes: 0 success, 1 verification
failure, 2 invalid arguments or unwritable output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .classify import classify
from .figures import boundary_figure, sweep_figure
from .kinematics import CartesianPoint, Geometry, JointConfig, forward_kinematics, ik_details
from .sweep import boundary_overlay, sweep
from .tracing import detect_cusps, detect_nodes, trace_singular_set
from .verify import run_all


def _num(x: float):
    """Collapse integral floats so emitted numbers read naturally."""
    if isinstance(x, float) and x.is_integer() and abs(x) < 1e15:
        return int(x)
    return x


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        v = _num(x)
        return repr(v) if isinstance(v, float) else str(v)
    return str(x)


def _geometry(args) -> Geometry:
    return Geometry(d3=args.d3, d4=args.d4, r2=args.r2, d2=args.d2)


def _add_geometry_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--d2", type=float, default=1.0, help="second link length (default 1)")
    p.add_argument("--d3", type=float, required=True, help="third link length")
    p.add_argument("--d4", type=float, required=True, help="fourth link length")
    p.add_argument("--r2", type=float, required=True, help="second joint offset")


def cmd_classify(args) -> int:
    geom = _geometry(args)
    res = classify(geom, mode=args.mode, eps=args.eps, n_samples=args.samples)
    doc = {
        "d2": _num(geom.d2), "d3": _num(geom.d3), "d4": _num(geom.d4),
        "r2": _num(geom.r2),
        "domain": res.domain, "wt": res.wt,
        "n_cusps": res.n_cusps, "n_nodes": res.n_nodes,
        "method": res.method, "boundary": res.boundary_flag,
        "agreement": res.agreement,
    }
    print(json.dumps(doc))
    return 0


def cmd_fk(args) -> int:
    geom = _geometry(args)
    p = forward_kinematics(geom, JointConfig(args.t1, args.t2, args.t3))
    print(json.dumps([_num(p.x), _num(p.y), _num(p.z)]))
    return 0


def cmd_ik(args) -> int:
    geom = _geometry(args)
    target = CartesianPoint(args.x, args.y, args.z)
    outcome = ik_details(geom, target, tol=args.tol)
    sols = []
    for q in outcome.solutions:
        fk = forward_kinematics(geom, q)
        resid = ((fk.x - target.x) ** 2 + (fk.y - target.y) ** 2
                 + (fk.z - target.z) ** 2) ** 0.5
        sols.append({"theta1": q.theta1, "theta2": q.theta2,
                     "theta3": q.theta3, "residual": resid})
    print(json.dumps(sols))
    return 0


def _write(path: str, content: str) -> int:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return 2
    return 0


def cmd_boundary(args) -> int:
    geom = _geometry(args)
    curves = trace_singular_set(geom, n_samples=args.samples)
    cusps = detect_cusps(geom, curves)
    nodes = detect_nodes(geom, curves, cusps=cusps)
    if args.format == "csv":
        lines = ["branch,theta2,theta3,rho,z"]
        for c in curves:
            for (t2, t3), (rho, z) in zip(c.joint, c.image):
                lines.append(f"{c.label},{t2:.9g},{t3:.9g},{rho:.9g},{z:.9g}")
        return _write(args.out, "\n".join(lines) + "\n")
    return _write(args.out, boundary_figure(geom, curves, cusps, nodes))


def cmd_sweep(args) -> int:
    resolution = (args.res, args.res)
    raster = sweep(args.r2, (args.d3_min, args.d3_max),
                   (args.d4_min, args.d4_max), resolution,
                   mode=args.mode, spot_check_fraction=args.spot_check)
    rc = 0
    if args.format in ("csv", "both"):
        from .classify import WT_FEATURE_TABLE
        lines = ["d3,d4,r2,domain,wt,n_cusps,n_nodes,boundary"]
        for d3, d4, domain, wt, boundary in raster.rows():
            nc, nn = WT_FEATURE_TABLE[wt]
            lines.append(",".join([_fmt(d3), _fmt(d4), _fmt(args.r2),
                                   str(domain), wt, str(nc), str(nn),
                                   _fmt(boundary)]))
        rc = _write(_with_ext(args.out, "csv", args.format), "\n".join(lines) + "\n")
        if rc:
            return rc
    if args.format in ("svg", "both"):
        overlays = boundary_overlay(args.r2, (args.d3_min, args.d3_max))
        rc = _write(_with_ext(args.out, "svg", args.format),
                    sweep_figure(raster, overlays))
    return rc


def _with_ext(path: str, ext: str, fmt: str) -> str:
    if fmt != "both":
        return path
    base = path[:-4] if path.endswith((".csv", ".svg")) else path
    return f"{base}.{ext}"


def cmd_verify(args) -> int:
    results = run_all(seed=args.seed, n=args.n,
                      tamper_surface=args.tamper_surface)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        ok &= r.passed
        print(f"{status} {r.name}: {r.detail}")
    print("verify: all suites passed" if ok else "verify: FAILURES present")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cuspidal",
        description="Workspace-topology classification of 3R orthogonal "
                    "positioning manipulators (angles in radians).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify one geometry")
    _add_geometry_flags(p)
    p.add_argument("--mode", choices=("surfaces", "numeric", "both"),
                   default="surfaces")
    p.add_argument("--eps", type=float, default=1e-6,
                   help="boundary band half-width in d4")
    p.add_argument("--samples", type=int, default=2000,
                   help="trace samples per branch (numeric modes)")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("fk", help="forward kinematics of one configuration")
    _add_geometry_flags(p)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--t2", type=float, required=True)
    p.add_argument("--t3", type=float, required=True)
    p.set_defaults(fn=cmd_fk)

    p = sub.add_parser("ik", help="inverse kinematics of one point")
    _add_geometry_flags(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(fn=cmd_ik)

    p = sub.add_parser("boundary", help="emit the workspace section figure or table")
    _add_geometry_flags(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("svg", "csv"), default="svg")
    p.add_argument("--samples", type=int, default=2000)
    p.set_defaults(fn=cmd_boundary)

    p = sub.add_parser("sweep", help="partition raster over (d3, d4)")
    p.add_argument("--r2", type=float, required=True)
    p.add_argument("--d3-min", type=float, default=0.02)
    p.add_argument("--d3-max", type=float, default=3.0)
    p.add_argument("--d4-min", type=float, default=0.02)
    p.add_argument("--d4-max", type=float, default=3.0)
    p.add_argument("--res", type=int, default=300)
    p.add_argument("--mode", choices=("surfaces", "numeric"), default="surfaces")
    p.add_argument("--spot-check", type=float, default=0.0,
                   help="fraction of cells re-checked with the oracle")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "svg", "both"), default="both")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("verify", help="run the cross-check suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--tamper-surface", default=None,
                   help="test hook: offset one surface (e.g. C2) by 1e-3")
    p.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
