"""Second-order adaptive Hessian-barrier loop (SAHBA).

Each iteration minimizes a cubic-regularized model of the potential on the
tangent space: the data (grad F_mu, hess f, barrier Hessian) are reduced to
null-space coordinates and handed to the cubic subproblem solver.  Steps use
alpha = min(1, 1/(2 zeta)) and a two-condition line search on the Lipschitz
estimate L_k = 2^i M_k: a cubic descent inequality on f and a gradient-Taylor
inequality in the dual local norm.  The loop stops when the last two accepted
directions are short, ||v^{k-1}|| < Delta_{k-1} and ||v^k|| < Delta_k with
Delta = sqrt(eps / (4 L sqrt(nu))), emitting the certificate
(x^k, y^{k-1}, s = grad f(x^k) - A^T y^{k-1}).  The regularization is
mu = eps / (4 nu) and L is floored at 144 eps.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .ahba import SolveReport
from .cubic import CubicModel, solve_cubic
from .errors import MaxIterExceeded, NoSecondOrderOracle
from .kkt import KKTCertificate, reduced_second_order_matrix
from .metric import reduce_to_nullspace
from .problem import Potential, Problem, analytic_center
from .trace import TraceBuffer, TraceRecord

LS_SLACK = 1e-12


@dataclass(frozen=True)
class SahbaConfig:
    eps: float = 1e-3
    m0: Optional[float] = None   # default max(1, 2 * l_floor)
    max_iters: int = 100_000
    max_inner: int = 64
    mode: str = "ss"
    trace_sink: Optional[object] = None
    tol_cubic: float = 1e-10

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    @property
    def l_floor(self) -> float:
        return 144.0 * self.eps

    def initial_m(self) -> float:
        m0 = self.m0 if self.m0 is not None else max(1.0, 2.0 * self.l_floor)
        # the floor must stay strictly below the estimate
        return max(m0, 2.0 * self.l_floor)


def so_linesearch_check(
    problem: Problem, x: np.ndarray, z: np.ndarray, l_est: float
) -> bool:
    """Both acceptance inequalities of the second-order backtracking."""
    barrier = problem.barrier
    step = z - x
    step_norm = barrier.local_norm(x, step)
    f_x = problem.f(x)
    slack = LS_SLACK * (1.0 + abs(f_x))
    g_x = problem.grad_f(x)
    hv = problem.hess_f_action(x, step)
    cubic_ok = problem.f(z) <= (
        f_x
        + float(g_x @ step)
        + 0.5 * float(hv @ step)
        + l_est / 6.0 * step_norm**3
        + slack
    )
    taylor_gap = problem.grad_f(z) - g_x - hv
    taylor_ok = barrier.dual_local_norm(x, taylor_gap) <= (
        0.5 * l_est * step_norm**2 + slack
    )
    return cubic_ok and taylor_ok


def sahba_solve(
    problem: Problem, cfg: SahbaConfig, x0: Optional[np.ndarray] = None
) -> SolveReport:
    if problem.objective.hess_action is None:
        raise NoSecondOrderOracle("sahba needs a Hessian oracle on the objective")
    barrier = problem.barrier
    fs = problem.feasible
    nu = barrier.nu
    mu = cfg.eps / (4.0 * nu)
    pot = Potential(problem, mu)
    sink = cfg.trace_sink if cfg.trace_sink is not None else TraceBuffer()
    t0 = time.monotonic_ns()

    if x0 is None:
        x = analytic_center(problem, slack=4.0)
        sink.emit(
            TraceRecord(
                k=-1, phase="analytic_center", f=problem.f(x), f_mu=pot.value(x),
                v_norm_x=0.0, alpha=0.0, zeta=0.0, l_estimate=cfg.initial_m(),
                inner_trial=0, grad_residual=math.nan, complementarity=math.nan,
                wall_time_ns=time.monotonic_ns() - t0,
            )
        )
    else:
        x = np.asarray(x0, dtype=float).copy()

    f_initial = problem.f(x)
    m_k = cfg.initial_m()
    m_hat = 0.0
    inner_total = 0
    z_basis = fs.null_basis
    prev = None  # (x, v_norm, delta, y, l) of the previous accepted iteration

    for k in range(cfg.max_iters):
        g_pot = pot.grad(x)
        g_p, j_p, h_p = reduce_to_nullspace(
            fs,
            g_pot,
            lambda w: problem.hess_f_action(x, w),
            lambda w: barrier.hessian_apply(x, w),
        )

        accepted = False
        for i in range(cfg.max_inner):
            l_k = (2.0**i) * m_k
            sol = solve_cubic(CubicModel(g=g_p, j=j_p, h=h_p, reg=l_k), cfg.tol_cubic)
            v = z_basis @ sol.u
            v_norm = sol.r
            # multiplier from full-space stationarity, least squares on A^T y
            full_resid = (
                g_pot
                + problem.hess_f_action(x, v)
                + 0.5 * l_k * v_norm * barrier.hessian_apply(x, v)
            )
            if fs.m:
                y, *_ = np.linalg.lstsq(fs.a.T, full_resid, rcond=None)
            else:
                y = np.zeros(0)
            zeta_val = barrier.zeta(x, v, cfg.mode)
            alpha = 1.0 if zeta_val <= 0 else min(1.0, 1.0 / (2.0 * zeta_val))
            z = x + alpha * v
            inner_total += 1
            sink.emit(
                TraceRecord(
                    k=k, phase="inner", f=problem.f(z), f_mu=math.nan,
                    v_norm_x=v_norm, alpha=alpha, zeta=zeta_val, l_estimate=l_k,
                    inner_trial=i, grad_residual=sol.stationarity_residual,
                    complementarity=math.nan,
                    wall_time_ns=time.monotonic_ns() - t0,
                )
            )
            if so_linesearch_check(problem, x, z, l_k):
                accepted = True
                break
        if not accepted:
            raise MaxIterExceeded(
                f"sahba: line search exceeded {cfg.max_inner} trials at iteration {k}"
            )

        m_hat = max(m_hat, l_k)
        m_k = max(0.5 * l_k, cfg.l_floor)  # M_{k+1} = max(2^{i-1} M_k, floor)
        delta = math.sqrt(cfg.eps / (4.0 * l_k * math.sqrt(nu)))
        current = (x.copy(), v_norm, delta, y, l_k, alpha)
        x = z
        sink.emit(
            TraceRecord(
                k=k, phase="outer", f=problem.f(x), f_mu=pot.value(x),
                v_norm_x=v_norm, alpha=alpha, zeta=zeta_val, l_estimate=l_k,
                inner_trial=i, grad_residual=math.nan, complementarity=math.nan,
                wall_time_ns=time.monotonic_ns() - t0,
            )
        )

        if prev is not None and prev[1] < prev[2] and v_norm < delta:
            # two-iterate stop: certificate pairs x^k with y^{k-1}
            x_k, _, _, _, l_cert, _ = current
            y_prev = prev[3]
            cert = KKTCertificate.from_triple(problem, x_k, y_prev)
            eps2 = l_cert * cfg.eps / (16.0 * math.sqrt(nu))
            m_red = reduced_second_order_matrix(problem, x_k, eps2)
            min_eig = float(scipy.linalg.eigvalsh(m_red)[0]) if m_red.size else 0.0
            cert = KKTCertificate(
                x=cert.x, y=cert.y, s=cert.s,
                grad_residual=cert.grad_residual,
                complementarity=cert.complementarity,
                eq_residual=cert.eq_residual,
                second_order=(eps2, min_eig),
            )
            report = SolveReport(
                status="kkt_reached", certificate=cert, iterations=k + 1,
                inner_trials_total=inner_total,
                trace=getattr(sink, "records", []), eps=cfg.eps, m_hat=m_hat,
                f_initial=f_initial, f_final=problem.f(x_k),
            )
            report.extra["eps2_effective"] = eps2
            report.extra["penultimate_alpha"] = prev[5]
            return report
        prev = current

    return SolveReport(
        status="max_iter", certificate=None, iterations=cfg.max_iters,
        inner_trials_total=inner_total, trace=getattr(sink, "records", []),
        eps=cfg.eps, m_hat=m_hat, f_initial=f_initial, f_final=problem.f(x),
    )
