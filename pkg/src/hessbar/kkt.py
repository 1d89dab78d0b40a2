"""Construction and verification of approximate KKT certificates.

A first-order certificate is a triple (x, y, s) checked against: A x = b,
x strictly interior, s in the dual cone, small dual residual
||grad f(x) - A^T y - s||, and small complementarity |<s, x>|.  The
second-order variant additionally requires the reduced matrix
Z^T (hess f(x) + sqrt(eps2) H(x)) Z to be positive semidefinite up to a
relative eigenvalue tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import NoSecondOrderOracle
from .problem import EQ_TOL, Problem

TOL_PSD = 1e-8


@dataclass(frozen=True)
class KKTCertificate:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    grad_residual: float
    complementarity: float
    eq_residual: float
    second_order: Optional[tuple[float, float]] = None  # (eps2, min_eig_margin)

    @staticmethod
    def from_triple(problem: Problem, x, y, s=None) -> "KKTCertificate":
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        gf = problem.grad_f(x)
        aty = problem.feasible.a.T @ y if problem.feasible.m else np.zeros_like(x)
        if s is None:
            s = gf - aty
        s = np.asarray(s, dtype=float)
        return KKTCertificate(
            x=x,
            y=y,
            s=s,
            grad_residual=float(np.linalg.norm(gf - aty - s)),
            complementarity=abs(float(s @ x)),
            eq_residual=problem.feasible.eq_residual(x),
        )

    def to_dict(self) -> dict:
        d = {
            "x": self.x.tolist(),
            "y": self.y.tolist(),
            "s": self.s.tolist(),
            "grad_residual": self.grad_residual,
            "complementarity": self.complementarity,
            "eq_residual": self.eq_residual,
        }
        if self.second_order is not None:
            d["second_order"] = {
                "eps2": self.second_order[0],
                "min_eig_margin": self.second_order[1],
            }
        return d

    @staticmethod
    def from_dict(d: dict) -> "KKTCertificate":
        so = d.get("second_order")
        return KKTCertificate(
            x=np.asarray(d["x"], dtype=float),
            y=np.asarray(d["y"], dtype=float),
            s=np.asarray(d["s"], dtype=float),
            grad_residual=float(d["grad_residual"]),
            complementarity=float(d["complementarity"]),
            eq_residual=float(d["eq_residual"]),
            second_order=None if so is None else (float(so["eps2"]), float(so["min_eig_margin"])),
        )


@dataclass(frozen=True)
class KKTVerdict:
    eq_ok: bool
    interior_ok: bool
    dual_cone_ok: bool
    grad_ok: bool
    compl_ok: bool
    grad_residual: float
    complementarity: float
    eq_residual: float
    interior_margin: float
    second_order_ok: Optional[bool] = None
    min_eig: Optional[float] = None

    @property
    def passed(self) -> bool:
        base = (
            self.eq_ok
            and self.interior_ok
            and self.dual_cone_ok
            and self.grad_ok
            and self.compl_ok
        )
        if self.second_order_ok is None:
            return base
        return base and self.second_order_ok

    def flags(self) -> dict:
        d = {
            "eq_ok": self.eq_ok,
            "interior_ok": self.interior_ok,
            "dual_cone_ok": self.dual_cone_ok,
            "grad_ok": self.grad_ok,
            "compl_ok": self.compl_ok,
        }
        if self.second_order_ok is not None:
            d["second_order_ok"] = self.second_order_ok
        return d


def _interior_margin(problem: Problem, x: np.ndarray) -> float:
    from .cones import _block_margin  # diagnostic only

    spec = problem.barrier.spec
    return min(
        _block_margin(b, x[s]) for b, s in zip(spec.blocks, spec.slices())
    )


def check_eps_kkt(problem: Problem, cert: KKTCertificate, eps: float) -> KKTVerdict:
    x, s = cert.x, cert.s
    gf = problem.grad_f(x)
    aty = problem.feasible.a.T @ cert.y if problem.feasible.m else np.zeros_like(x)
    grad_residual = float(np.linalg.norm(gf - aty - s))
    complementarity = abs(float(s @ x))
    eq_residual = problem.feasible.eq_residual(x)
    return KKTVerdict(
        eq_ok=problem.feasible.satisfies(x, EQ_TOL),
        interior_ok=problem.barrier.spec.is_member(x, strict=True),
        dual_cone_ok=problem.barrier.spec.is_dual_member(s),
        grad_ok=grad_residual <= eps,
        compl_ok=complementarity <= eps,
        grad_residual=grad_residual,
        complementarity=complementarity,
        eq_residual=eq_residual,
        interior_margin=_interior_margin(problem, x),
    )


def reduced_second_order_matrix(problem: Problem, x: np.ndarray, eps2: float) -> np.ndarray:
    """Z^T (hess f(x) + sqrt(eps2) H(x)) Z."""
    if problem.objective.hess_action is None:
        raise NoSecondOrderOracle("second-order check needs a Hessian oracle")
    z = problem.feasible.null_basis
    cols = []
    for i in range(z.shape[1]):
        zi = z[:, i]
        cols.append(
            problem.hess_f_action(x, zi)
            + np.sqrt(eps2) * problem.barrier.hessian_apply(x, zi)
        )
    m = z.T @ np.column_stack(cols)
    return 0.5 * (m + m.T)


def check_2kkt(
    problem: Problem, cert: KKTCertificate, eps1: float, eps2: float
) -> KKTVerdict:
    base = check_eps_kkt(problem, cert, eps1)
    m = reduced_second_order_matrix(problem, cert.x, eps2)
    if m.size == 0:
        return KKTVerdict(
            **{**base.__dict__, "second_order_ok": True, "min_eig": 0.0}
        )
    w = scipy.linalg.eigvalsh(m)
    scale = max(abs(float(w[0])), abs(float(w[-1])), 1.0)
    return KKTVerdict(
        **{
            **base.__dict__,
            "second_order_ok": bool(w[0] >= -TOL_PSD * scale),
            "min_eig": float(w[0]),
        }
    )
