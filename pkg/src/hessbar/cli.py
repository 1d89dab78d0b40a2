"""Command-line front end.

Subcommands:
  solve      run AHBA or SAHBA on a problem file, optionally writing a trace
             CSV, a JSON report, and figures
  check-kkt  re-verify the certificate in a report file against a problem file
  bench      sweep an accuracy grid over a directory of problem files and
             tabulate iteration counts
  selftest   quick internal consistency checks of the barrier, step-length,
             and cubic-subproblem primitives

Exit codes: 0 when the run ends with a verified certificate (or the check /
selftest passes), 2 when an iteration limit is hit, 3 on validation, parse,
or usage errors.
"""

from __future__ import annotations

import argparse
import csv
import glob
import math
import os
import sys

import numpy as np

from .ahba import AhbaConfig, ahba_restart_solve, ahba_solve
from .cones import Barrier, ConeSpec, Lorentz, Orthant, Psd, omega
from .cubic import CubicModel, certify_global, solve_cubic
from .errors import MaxIterExceeded, ParseError, SolverError, ValidationError
from .io import load_problem, read_report_certificate, write_report
from .kkt import check_2kkt, check_eps_kkt
from .sahba import SahbaConfig, sahba_solve
from .trace import TraceBuffer, write_trace_csv

EXIT_OK = 0
EXIT_MAX_ITER = 2
EXIT_INVALID = 3


class _Parser(argparse.ArgumentParser):
    # usage errors must map to exit code 3, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hessbar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("problem", help="problem JSON file")
    p_solve.add_argument("--algo", choices=["ahba", "sahba"], default="ahba")
    p_solve.add_argument("--eps", type=float, default=1e-4)
    p_solve.add_argument("--l0", type=float, default=1.0,
                         help="initial Lipschitz guess (ahba)")
    p_solve.add_argument("--m0", type=float, default=None,
                         help="initial cubic Lipschitz guess (sahba)")
    p_solve.add_argument("--mode", choices=["sc", "ss"], default="ss",
                         help="step-length control: local norm (sc) or sigma (ss)")
    p_solve.add_argument("--anytime", action="store_true",
                         help="restart wrapper with halving accuracies (ahba)")
    p_solve.add_argument("--eps0", type=float, default=1e-1,
                         help="starting accuracy for --anytime")
    p_solve.add_argument("--max-iters", type=int, default=200_000)
    p_solve.add_argument("--trace", metavar="out.csv", default=None)
    p_solve.add_argument("--report", metavar="out.json", default=None)
    p_solve.add_argument("--figdir", metavar="DIR", default=None,
                         help="render trace figures into DIR")

    p_check = sub.add_parser("check-kkt", help="re-verify a certificate")
    p_check.add_argument("report", help="report JSON file from solve")
    p_check.add_argument("problem", help="problem JSON file")
    p_check.add_argument("--eps1", type=float, required=True)
    p_check.add_argument("--eps2", type=float, default=None,
                         help="also run the second-order check at this level")

    p_bench = sub.add_parser("bench", help="accuracy sweep over problem files")
    p_bench.add_argument("problems", help="directory of problem JSON files, or one file")
    p_bench.add_argument("--eps-grid", default="1e-1,1e-2,1e-3",
                         help="comma-separated accuracies")
    p_bench.add_argument("--algo", choices=["ahba", "sahba"], default="ahba")
    p_bench.add_argument("--out", metavar="table.csv", default=None)
    p_bench.add_argument("--figdir", metavar="DIR", default=None)

    sub.add_parser("selftest", help="internal consistency checks")
    return parser


def _cmd_solve(args) -> int:
    problem = load_problem(args.problem)
    sink = TraceBuffer()
    if args.algo == "ahba":
        cfg = AhbaConfig(
            eps=args.eps, l0=args.l0, max_iters=args.max_iters,
            mode=args.mode, anytime=args.anytime, trace_sink=sink,
        )
        if args.anytime:
            report = ahba_restart_solve(problem, cfg, eps0=max(args.eps0, args.eps))
        else:
            report = ahba_solve(problem, cfg)
    else:
        cfg = SahbaConfig(
            eps=args.eps, m0=args.m0, max_iters=args.max_iters,
            mode=args.mode, trace_sink=sink,
        )
        report = sahba_solve(problem, cfg)
    report.trace = sink.records

    if args.trace:
        write_trace_csv(args.trace, sink.records)
    if args.report:
        write_report(args.report, report)
    if args.figdir:
        from .plots import render_trace_figures

        stem = os.path.splitext(os.path.basename(args.problem))[0]
        render_trace_figures(args.figdir, sink.records, stem=stem)

    cert = report.certificate
    print(f"status: {report.status}")
    print(f"iterations: {report.iterations}  inner trials: {report.inner_trials_total}")
    print(f"f: {report.f_initial:.12g} -> {report.f_final:.12g}")
    if cert is not None:
        print(f"grad residual: {cert.grad_residual:.3e}  "
              f"complementarity: {cert.complementarity:.3e}  "
              f"eq residual: {cert.eq_residual:.3e}")
        if cert.second_order is not None:
            eps2, margin = cert.second_order
            print(f"second-order level eps2: {eps2:.3e}  min reduced eig: {margin:.3e}")
    return EXIT_OK if report.certified else EXIT_MAX_ITER


def _cmd_check_kkt(args) -> int:
    problem = load_problem(args.problem)
    doc, cert = read_report_certificate(args.report)
    if cert is None:
        print("report carries no certificate", file=sys.stderr)
        return EXIT_INVALID
    if args.eps2 is not None:
        verdict = check_2kkt(problem, cert, args.eps1, args.eps2)
    else:
        verdict = check_eps_kkt(problem, cert, args.eps1)
    for name, ok in verdict.flags().items():
        print(f"{name}: {'pass' if ok else 'FAIL'}")
    print(f"grad_residual: {verdict.grad_residual:.6e}")
    print(f"complementarity: {verdict.complementarity:.6e}")
    print(f"eq_residual: {verdict.eq_residual:.6e}")
    print(f"interior_margin: {verdict.interior_margin:.6e}")
    if verdict.min_eig is not None:
        print(f"min_reduced_eig: {verdict.min_eig:.6e}")
    print(f"verdict: {'pass' if verdict.passed else 'FAIL'}")
    return EXIT_OK if verdict.passed else EXIT_MAX_ITER


def _cmd_bench(args) -> int:
    if os.path.isdir(args.problems):
        files = sorted(glob.glob(os.path.join(args.problems, "*.json")))
    else:
        files = [args.problems]
    if not files:
        raise ValidationError("no_problems", f"no problem files under {args.problems}")
    try:
        grid = [float(tok) for tok in args.eps_grid.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError("bad_grid", f"cannot parse --eps-grid: {exc}") from exc
    if not grid:
        raise ValidationError("bad_grid", "--eps-grid is empty")

    rows = []
    worst = EXIT_OK
    for path in files:
        problem = load_problem(path)
        name = os.path.splitext(os.path.basename(path))[0]
        for eps in sorted(grid, reverse=True):
            try:
                if args.algo == "ahba":
                    report = ahba_solve(problem, AhbaConfig(eps=eps))
                else:
                    report = sahba_solve(problem, SahbaConfig(eps=eps))
            except MaxIterExceeded:
                worst = max(worst, EXIT_MAX_ITER)
                continue
            rows.append({
                "problem": name,
                "algo": args.algo,
                "eps": eps,
                "iterations": report.iterations,
                "inner_trials": report.inner_trials_total,
                "status": report.status,
                "f_final": report.f_final,
            })
            if not report.certified:
                worst = max(worst, EXIT_MAX_ITER)

    header = ["problem", "algo", "eps", "iterations", "inner_trials", "status", "f_final"]
    out_fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out_fh)
        w.writerow(header)
        for row in rows:
            w.writerow([row[h] for h in header])
    finally:
        if args.out:
            out_fh.close()
    if args.figdir:
        from .plots import render_bench_figure

        render_bench_figure(args.figdir, rows)
    return worst


def _cmd_selftest(args) -> int:
    rng = np.random.default_rng(20240817)
    failures = []

    def check(name, ok):
        print(f"{name}: {'pass' if ok else 'FAIL'}")
        if not ok:
            failures.append(name)

    # barrier derivatives against central differences on a product cone
    spec = ConeSpec((Orthant(3), Lorentz(3), Psd(2)))
    barrier = Barrier(spec)
    x = np.concatenate([
        rng.uniform(0.5, 2.0, 3),
        [2.0, 0.3, -0.4],
        [1.5, 0.2, 1.0],
    ])
    g = barrier.grad(x)
    eps_fd = 1e-6
    fd = np.array([
        (barrier.value(x + eps_fd * e) - barrier.value(x - eps_fd * e)) / (2 * eps_fd)
        for e in np.eye(x.size)
    ])
    check("barrier gradient vs finite differences", np.allclose(g, fd, atol=1e-5))

    v = rng.standard_normal(x.size)
    hv = barrier.hessian_apply(x, v)
    fd_hv = (barrier.grad(x + eps_fd * v) - barrier.grad(x - eps_fd * v)) / (2 * eps_fd)
    check("barrier Hessian action vs finite differences",
          np.allclose(hv, fd_hv, rtol=1e-4, atol=1e-4))
    check("Hessian inverse consistency",
          np.allclose(barrier.hessian_inv_apply(x, hv), v, rtol=1e-8, atol=1e-8))
    check("log-homogeneity identities",
          np.allclose(barrier.hessian_apply(x, x), -g)
          and abs(float(x @ barrier.hessian_apply(x, x)) - barrier.nu) < 1e-9)

    # sigma against bisection on the ray x - t d
    def sigma_bisect(xv, dv):
        if spec.is_member(xv - 1e8 * dv, strict=False):
            return 0.0
        lo, hi = 0.0, 1e8
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if spec.is_member(xv - mid * dv, strict=False):
                lo = mid
            else:
                hi = mid
        return 1.0 / hi if hi > 0 else 0.0

    ok_sigma = True
    for _ in range(20):
        d = rng.standard_normal(x.size)
        s_exact = barrier.sigma(x, d)
        s_ref = sigma_bisect(x, d)
        ok_sigma &= abs(s_exact - s_ref) <= 1e-6 * (1.0 + s_ref)
    check("sigma vs bisection", ok_sigma)

    check("omega(1/2) closed form",
          abs(omega(0.5) - (math.log(2.0) - 0.5) / 0.25) < 1e-14)

    # cubic subproblem vs random-start polishing
    ok_cubic = True
    for _ in range(20):
        p = int(rng.integers(1, 4))
        q = rng.standard_normal((p, p))
        j = 0.5 * (q + q.T)
        h = np.eye(p) + 0.1 * (q @ q.T)
        gvec = rng.standard_normal(p)
        model = CubicModel(g=gvec, j=j, h=h, reg=float(rng.uniform(0.5, 3.0)))
        sol = solve_cubic(model)
        ok_cubic &= certify_global(model, sol)
    check("cubic subproblem global certificates", ok_cubic)

    print(f"selftest: {'pass' if not failures else 'FAIL'} "
          f"({len(failures)} failure(s))")
    return EXIT_OK if not failures else EXIT_INVALID


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "check-kkt":
            return _cmd_check_kkt(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_selftest(args)
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except MaxIterExceeded as exc:
        print(f"iteration limit: {exc}", file=sys.stderr)
        return EXIT_MAX_ITER
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    raise SystemExit(run_cli())
