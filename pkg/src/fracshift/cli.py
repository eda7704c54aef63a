"""Command-line front end: ``fracshift weights|supershift|evolve|verify``.

Every command writes a CSV (or JSON report) plus a JSON run manifest into
``--out``. Exit codes: 0 all checks pass, 2 usage error, 3 domain or
singularity error, 4 tolerance failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import FracshiftError, UsageError
from .evolution import (
    PREFACTOR_CONVENTIONS,
    pde_residual,
    psi_eval,
    solve,
)
from .oscillatory import EXPONENT_CONVENTIONS
from .quadrature import default_rel_tol
from .supershift import (
    SupershiftSpec,
    check_grid,
    disk_grid,
    fractional_F,
    supershift_error,
    supershift_target,
)
from .verify import SUITES, run_suite
from .weights import carleman_diagnostic, mellin_moment, parse_family

N_CAP = 600
A_CAP = 8.0
MOMENT_TOL = 1e-6
RESIDUAL_STEP = 1e-3


def fmt(v) -> str:
    """Round-trip-safe text for a number."""
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, np.integer):
        return int(v)
    return v


class Run:
    """Collects one command's files and writes its manifest."""

    def __init__(self, out: str, tag: str, command: str, params: dict):
        self.dir = Path(out)
        self.tag = re.sub(r"[^A-Za-z0-9_.-]", "_", tag)
        self.command = command
        self.params = params
        self.tolerances: dict = {"rel_tol": default_rel_tol()}
        self.checks: list[dict] = []
        self.extra: dict = {}
        self.files: list[str] = []
        self.start = time.perf_counter()

    def path(self, suffix: str) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        p = self.dir / f"{self.tag}{suffix}"
        self.files.append(p.name)
        return p

    def write_csv(self, header, rows):
        with open(self.path(".csv"), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])

    def write_json(self, suffix, payload):
        with open(self.path(suffix), "w") as fh:
            json.dump(_jsonable(payload), fh, indent=2)
            fh.write("\n")

    def finish(self) -> int:
        passed = all(c["status"] == "PASS" for c in self.checks)
        manifest = {
            "command": self.command,
            "parameters": self.params,
            "version": __version__,
            "tolerances": self.tolerances,
            **self.extra,
            "checks": self.checks,
            "summary": "PASS" if passed else "FAIL",
            "files": list(self.files),
        }
        manifest["duration_s"] = round(time.perf_counter() - self.start, 6)
        # the manifest references itself last so the file list is complete
        p = self.dir / f"{self.tag}.manifest.json"
        manifest["files"].append(p.name)
        self.dir.mkdir(parents=True, exist_ok=True)
        with open(p, "w") as fh:
            json.dump(_jsonable(manifest), fh, indent=2)
            fh.write("\n")
        return 0 if passed else 4

    def check(self, name, measured, tolerance, passed, detail=""):
        self.checks.append({"name": name, "measured": measured, "tolerance": tolerance,
                            "detail": detail, "status": "PASS" if passed else "FAIL"})


def parse_range(text: str) -> np.ndarray:
    """``lo:hi:count`` to an evenly spaced array."""
    parts = text.split(":")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError):
        raise argparse.ArgumentTypeError(f"expected lo:hi:count, got {text!r}") from None
    if len(parts) != 3 or count < 1:
        raise argparse.ArgumentTypeError(f"expected lo:hi:count with count >= 1, got {text!r}")
    return np.linspace(lo, hi, count)


def parse_grid(text: str) -> np.ndarray:
    """``re0:re1:count[,im0:im1:count]`` to a flat complex grid."""
    pieces = text.split(",")
    if len(pieces) > 2:
        raise argparse.ArgumentTypeError(f"grid takes at most two ranges, got {text!r}")
    re_axis = parse_range(pieces[0])
    im_axis = parse_range(pieces[1]) if len(pieces) == 2 else np.zeros(1)
    R, I = np.meshgrid(re_axis, im_axis, indexing="ij")
    return (R + 1j * I).ravel()


def parse_ladder(text: str) -> list[int]:
    try:
        ns = [int(s) for s in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if len(ns) < 2:
        raise argparse.ArgumentTypeError("ladder needs at least two values of n")
    return ns


def _check_caps(args, ns):
    if args.max_n > N_CAP or args.max_a > A_CAP:
        print(f"warning: limits raised above n <= {N_CAP}, a <= {A_CAP:g}; "
              "cancellation may exceed the tolerance budget", file=sys.stderr)
    if max(ns) > args.max_n:
        raise UsageError(f"n = {max(ns)} exceeds the limit {args.max_n} (see --max-n)")
    if args.a > args.max_a:
        raise UsageError(f"a = {args.a:g} exceeds the limit {args.max_a:g} (see --max-a)")
    if not args.a >= 1:
        raise UsageError(f"a must be >= 1, got {args.a:g}")


# --- commands ---------------------------------------------------------------

def cmd_weights_show(args) -> int:
    family = parse_family(args.family)
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    run = Run(args.out, f"weights_{family.name}", "weights show",
              {"family": family.name, "n": args.n})
    run.tolerances["moment_product"] = MOMENT_TOL
    carleman = carleman_diagnostic(family, max(args.n, 10)).terms
    rows, worst = [], 0.0
    for n in range(args.n + 1):
        phi = family.phi(n)
        moment = mellin_moment(family, n)
        product = phi * moment / family.normalization
        worst = max(worst, abs(product - 1))
        rows.append((n, phi, moment, product, carleman[n - 1] if n else math.nan))
    run.write_csv(["n", "phi_n", "mellin_moment", "phi_n_moment_over_normalization",
                   "carleman_term"], rows)
    run.check("moment_product", worst, MOMENT_TOL, worst <= MOMENT_TOL,
              "max |phi_n moment / normalization - 1|")
    return run.finish()


def cmd_supershift_eval(args) -> int:
    family = parse_family(args.family)
    _check_caps(args, [args.n])
    spec = SupershiftSpec(args.n, args.a, family)
    grid = check_grid(spec, args.grid)
    run = Run(args.out, f"supershift_eval_{family.name}", "supershift eval",
              {"family": family.name, "n": args.n, "a": args.a, "grid": args.grid_text})
    values = np.array([fractional_F(spec, z) for z in grid])
    target = np.array([supershift_target(spec, z) for z in grid])
    err = np.abs(values - target)
    run.write_csv(["re_z", "im_z", "re_F", "im_F", "abs_error"],
                  zip(grid.real, grid.imag, values.real, values.imag, err))
    run.extra["max_error"] = float(err.max())
    if args.figure:
        from .plotting import plot_supershift
        plot_supershift(grid, values, target, run.path(".png"),
                        f"{family.name}, n = {args.n}, a = {args.a:g}")
    run.check("finite_error", float(err.max()), math.inf, bool(np.all(np.isfinite(err))))
    return run.finish()


def cmd_supershift_converge(args) -> int:
    family = parse_family(args.family)
    _check_caps(args, args.ladder)
    grid = args.grid if args.grid is not None else disk_grid(args.radius)
    grid_text = args.grid_text or f"disk radius {args.radius:g}"
    check_grid(SupershiftSpec(args.ladder[0], args.a, family), grid)
    run = Run(args.out, f"supershift_converge_{family.name}", "supershift converge",
              {"family": family.name, "a": args.a, "ladder": args.ladder, "grid": grid_text})
    errors = [supershift_error(SupershiftSpec(n, args.a, family), grid) for n in args.ladder]
    run.write_csv(["n", "sup_error"], zip(args.ladder, errors))
    decreasing = all(e1 < e0 for e0, e1 in zip(errors, errors[1:]))
    if args.figure:
        from .plotting import plot_convergence
        plot_convergence(args.ladder, errors, run.path(".png"), f"{family.name}, a = {args.a:g}")
    run.check("strictly_decreasing", max(e1 / e0 for e0, e1 in zip(errors, errors[1:])),
              1.0, decreasing, "successive error ratios below one")
    print(f"verdict: {'PASS' if decreasing else 'FAIL'}")
    return run.finish()


def cmd_evolve(args) -> int:
    family = parse_family(args.family)
    _check_caps(args, [args.n])
    if np.min(np.abs(args.t)) < args.t_min:
        raise UsageError(f"time grid must satisfy |t| >= t_min = {args.t_min:g}")
    spec = SupershiftSpec(args.n, args.a, family)
    sol = solve(spec, args.M, args.exponent_convention, args.prefactor_convention)
    run = Run(args.out, f"evolve_{family.name}", "evolve",
              {"family": family.name, "n": args.n, "a": args.a, "M": args.M,
               "x": args.x_text, "t": args.t_text, "t_min": args.t_min})
    run.extra["conventions"] = {"exponent": args.exponent_convention,
                                "prefactor": args.prefactor_convention,
                                "index_range": "0..n"}
    X, T = np.meshgrid(args.x, args.t, indexing="ij")
    res = psi_eval(sol, X, T)
    psi = res.value
    run.write_csv(["x", "t", "re_psi", "im_psi", "abs_psi", "tail_diag"],
                  zip(X.ravel(), T.ravel(), psi.real.ravel(), psi.imag.ravel(),
                      np.abs(psi).ravel(), np.asarray(res.tail).ravel()))
    residual = pde_residual(sol, args.x, args.t, RESIDUAL_STEP)
    run.tolerances["residual_step"] = RESIDUAL_STEP
    run.extra["truncation_warning"] = res.truncation_warning
    run.extra["pde_residual"] = residual
    print(f"residual: {fmt(residual)} (h = {RESIDUAL_STEP:g}, normalized by max |psi|)")
    if res.truncation_warning:
        print("warning: last retained term exceeds rel_tol; the mode series is not converged",
              file=sys.stderr)
    if args.figure:
        from .plotting import plot_evolution
        plot_evolution(args.x, args.t, psi, run.path(".png"),
                       f"{family.name}, n = {args.n}, a = {args.a:g}, M = {args.M}")
    if args.check_residual is not None:
        run.tolerances["pde_residual"] = args.check_residual
        run.check("pde_residual", residual, args.check_residual, residual <= args.check_residual)
    return run.finish()


def cmd_verify(args) -> int:
    run = Run(args.out, f"verify_{args.suite}", "verify", {"suite": args.suite})
    checks = run_suite(args.suite)
    report = [c.to_dict() for c in checks]
    run.write_json(".report.json", {"suite": args.suite, "checks": report})
    for c in report:
        print(f"{c['status']}  {c['name']}: {fmt(c['measured'])} (tol {fmt(c['tolerance'])})")
        run.checks.append(c)
    return run.finish()


# --- parser -----------------------------------------------------------------

def _grid_arg(text):
    return text, parse_grid(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracshift",
                                description="Fractional supershift and Fock-space numerics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="fracshift-out", help="output directory")

    limits = argparse.ArgumentParser(add_help=False)
    limits.add_argument("--a", type=float, default=2.0, help="supershift parameter (a >= 1)")
    limits.add_argument("--max-n", type=int, default=N_CAP, help="upper limit on n")
    limits.add_argument("--max-a", type=float, default=A_CAP, help="upper limit on a")
    limits.add_argument("--figure", action="store_true", help="also render a PNG figure")

    w = sub.add_parser("weights", help="inspect a weight family")
    wsub = w.add_subparsers(dest="action", required=True)
    ws = wsub.add_parser("show", parents=[common], help="phi_n, moments and Carleman terms")
    ws.add_argument("family")
    ws.add_argument("--n", type=int, default=12)
    ws.set_defaults(func=cmd_weights_show)

    s = sub.add_parser("supershift", help="evaluate or sweep the fractional supershift")
    ssub = s.add_subparsers(dest="action", required=True)
    se = ssub.add_parser("eval", parents=[common, limits], help="evaluate on a grid")
    se.add_argument("family")
    se.add_argument("--n", type=int, default=25)
    se.add_argument("--grid", type=_grid_arg, required=True,
                    help="re0:re1:count[,im0:im1:count]")
    se.set_defaults(func=cmd_supershift_eval)
    sc = ssub.add_parser("converge", parents=[common, limits], help="error along an n-ladder")
    sc.add_argument("family")
    sc.add_argument("--ladder", type=parse_ladder, default=[21, 81, 321])
    sc.add_argument("--grid", type=_grid_arg, default=None)
    sc.add_argument("--radius", type=float, default=1.0,
                    help="disk grid radius when --grid is not given")
    sc.set_defaults(func=cmd_supershift_converge)

    e = sub.add_parser("evolve", parents=[common, limits], help="free Schroedinger evolution")
    e.add_argument("family")
    e.add_argument("--n", type=int, default=11)
    e.add_argument("--M", type=int, default=24)
    e.add_argument("--x", type=lambda t: (t, parse_range(t)), default="-3:3:121")
    e.add_argument("--t", type=lambda t: (t, parse_range(t)), default="0.25:1:16")
    e.add_argument("--t-min", type=float, default=0.1)
    e.add_argument("--exponent-convention", choices=EXPONENT_CONVENTIONS, default="half")
    e.add_argument("--prefactor-convention", choices=PREFACTOR_CONVENTIONS, default="2^-m")
    e.add_argument("--check-residual", type=float, default=None, metavar="TOL",
                   help="exit 4 when the PDE residual exceeds TOL")
    e.set_defaults(func=cmd_evolve)

    v = sub.add_parser("verify", parents=[common], help="run oracle verification suites")
    v.add_argument("suite", choices=[*SUITES, "all"])
    v.set_defaults(func=cmd_verify)
    return p


def _unpack(args):
    for name in ("grid", "x", "t"):
        val = getattr(args, name, None)
        if isinstance(val, tuple):
            setattr(args, f"{name}_text", val[0])
            setattr(args, name, val[1])
        elif name == "grid" and hasattr(args, "grid"):
            args.grid_text = None


RANGE_OPTIONS = ("--grid", "--x", "--t")


def _join_ranges(argv):
    """Attach range values to their option, so ``--x -3:3:121`` is not read as a flag."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in RANGE_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_ranges(argv))
    _unpack(args)
    try:
        default_rel_tol()
    except ValueError:
        print("error: FRACSHIFT_TOL must be a number", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except FracshiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
