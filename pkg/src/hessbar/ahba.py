"""First-order adaptive Hessian-barrier loop (AHBA).

Each iteration projects the potential gradient onto the tangent space in the
barrier metric to obtain the direction v = -S_x grad F_mu(x), backtracks on
a local Lipschitz estimate, steps with

    alpha = min( 1 / (2^i L_k + 2 mu),  1 / (2 zeta(x, v)) ),

and stops once ||v||_x < eps / sqrt(nu), at which point (x, y, s) with
s = grad f(x) - A^T y is a 2*eps-KKT certificate.  The regularization is
tied to the accuracy: mu = eps / nu.  An optional restart wrapper halves
the accuracy repeatedly for anytime behavior.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import MaxIterExceeded, SolverError
from .kkt import KKTCertificate
from .metric import MetricWorkspace
from .problem import Potential, Problem, analytic_center
from .trace import TraceBuffer, TraceRecord


@dataclass(frozen=True)
class AhbaConfig:
    eps: float = 1e-4
    l0: float = 1.0            # initial Lipschitz guess
    max_iters: int = 200_000
    max_inner: int = 64
    mode: str = "ss"           # "ss": sigma-based long steps; "sc": local-norm
    anytime: bool = False
    trace_sink: Optional[object] = None

    def __post_init__(self):
        if self.eps <= 0 or self.l0 <= 0:
            raise ValueError("eps and l0 must be positive")


@dataclass
class SolveReport:
    status: str                     # "kkt_reached" | "max_iter" | "error"
    certificate: Optional[KKTCertificate]
    iterations: int
    inner_trials_total: int
    trace: list
    eps: float
    m_hat: float                    # largest accepted Lipschitz estimate
    f_initial: float
    f_final: float
    extra: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == "kkt_reached"


# floating-point slack on the backtracking inequality; a quadratic remainder
# that is exactly zero in exact arithmetic must still be accepted
LS_SLACK = 1e-12


def ahba_solve(
    problem: Problem, cfg: AhbaConfig, x0: Optional[np.ndarray] = None
) -> SolveReport:
    barrier = problem.barrier
    nu = barrier.nu
    mu = cfg.eps / nu
    pot = Potential(problem, mu)
    sink = cfg.trace_sink if cfg.trace_sink is not None else TraceBuffer()
    t0 = time.monotonic_ns()

    if x0 is None:
        x = analytic_center(problem, slack=1.0)
        sink.emit(
            TraceRecord(
                k=-1, phase="analytic_center", f=problem.f(x), f_mu=pot.value(x),
                v_norm_x=0.0, alpha=0.0, zeta=0.0, l_estimate=cfg.l0,
                inner_trial=0, grad_residual=math.nan, complementarity=math.nan,
                wall_time_ns=time.monotonic_ns() - t0,
            )
        )
    else:
        x = np.asarray(x0, dtype=float).copy()

    f_initial = problem.f(x)
    l_k = cfg.l0
    m_hat = 0.0
    inner_total = 0
    threshold = cfg.eps / math.sqrt(nu)

    for k in range(cfg.max_iters):
        ws = MetricWorkspace(problem.feasible, barrier, x)
        g_pot = pot.grad(x)
        v, y = ws.project_tangent_metric(g_pot)
        v_norm = barrier.local_norm(x, v)

        if v_norm < threshold:
            cert = KKTCertificate.from_triple(problem, x, y)
            sink.emit(
                TraceRecord(
                    k=k, phase="outer", f=problem.f(x), f_mu=pot.value(x),
                    v_norm_x=v_norm, alpha=0.0, zeta=0.0, l_estimate=l_k,
                    inner_trial=0, grad_residual=cert.grad_residual,
                    complementarity=cert.complementarity,
                    wall_time_ns=time.monotonic_ns() - t0,
                )
            )
            return SolveReport(
                status="kkt_reached", certificate=cert, iterations=k,
                inner_trials_total=inner_total,
                trace=getattr(sink, "records", []), eps=cfg.eps, m_hat=m_hat,
                f_initial=f_initial, f_final=problem.f(x),
            )

        zeta_val = barrier.zeta(x, v, cfg.mode)
        f_x = problem.f(x)
        g_x = problem.grad_f(x)

        accepted = False
        for i in range(cfg.max_inner):
            estimate = (2.0**i) * l_k
            denom = estimate + 2.0 * mu
            alpha = 1.0 / denom
            if zeta_val > 0:
                alpha = min(alpha, 1.0 / (2.0 * zeta_val))
            z = x + alpha * v
            step = z - x
            step_norm = barrier.local_norm(x, step)
            f_z = problem.f(z)
            bound = (
                f_x
                + float(g_x @ step)
                + 0.5 * estimate * step_norm**2
                + LS_SLACK * (1.0 + abs(f_x))
            )
            inner_total += 1
            sink.emit(
                TraceRecord(
                    k=k, phase="inner", f=f_z, f_mu=math.nan, v_norm_x=v_norm,
                    alpha=alpha, zeta=zeta_val, l_estimate=estimate, inner_trial=i,
                    grad_residual=math.nan, complementarity=math.nan,
                    wall_time_ns=time.monotonic_ns() - t0,
                )
            )
            if f_z <= bound:
                accepted = True
                m_hat = max(m_hat, estimate)
                l_k = 0.5 * estimate  # L_{k+1} = 2^{i-1} L_k
                x = z
                break
        if not accepted:
            raise MaxIterExceeded(
                f"ahba: line search exceeded {cfg.max_inner} trials at iteration {k} "
                "(local smoothness assumption violated or oracle inconsistent)"
            )
        sink.emit(
            TraceRecord(
                k=k, phase="outer", f=problem.f(x), f_mu=pot.value(x),
                v_norm_x=v_norm, alpha=alpha, zeta=zeta_val, l_estimate=l_k,
                inner_trial=i, grad_residual=math.nan, complementarity=math.nan,
                wall_time_ns=time.monotonic_ns() - t0,
            )
        )

    return SolveReport(
        status="max_iter", certificate=None, iterations=cfg.max_iters,
        inner_trials_total=inner_total, trace=getattr(sink, "records", []),
        eps=cfg.eps, m_hat=m_hat, f_initial=f_initial, f_final=problem.f(x),
    )


def ahba_restart_solve(
    problem: Problem, cfg: AhbaConfig, eps0: float
) -> SolveReport:
    """Anytime wrapper: run with accuracies eps0, eps0/2, ... down to cfg.eps.

    Each run warm-starts at the previous output; the number of restarts is
    ceil(log2(eps0 / cfg.eps)).
    """
    if eps0 < cfg.eps:
        raise ValueError("eps0 must be >= the target accuracy")
    n_restarts = max(0, math.ceil(math.log2(eps0 / cfg.eps)))
    x = None
    total_inner = 0
    total_iters = 0
    all_trace = []
    report = None
    for i in range(n_restarts + 1):
        eps_i = eps0 * (0.5**i) if i < n_restarts else cfg.eps
        run_cfg = replace(cfg, eps=eps_i, anytime=False)
        report = ahba_solve(problem, run_cfg, x0=x)
        total_inner += report.inner_trials_total
        total_iters += report.iterations
        all_trace.extend(report.trace)
        if report.status != "kkt_reached":
            break
        x = report.certificate.x
    if report is None:
        raise SolverError("restart wrapper made no runs")
    report.inner_trials_total = total_inner
    report.iterations = total_iters
    report.trace = all_trace
    report.extra["restarts"] = n_restarts
    return report
