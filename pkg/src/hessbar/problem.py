"""Objective oracles, problem assembly, the potential, and the analytic center."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .cones import Barrier
from .errors import MaxIterExceeded, NoInitialPoint, ObjectiveFailure
from .metric import FeasibleSet, MetricWorkspace

EQ_TOL = 1e-10


@dataclass(frozen=True)
class ObjectiveOracle:
    """f, grad f, and (optionally) Hessian-vector products."""

    eval: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    hess_action: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    @staticmethod
    def quadratic(q_mat, q_vec, c0: float = 0.0) -> "ObjectiveOracle":
        """f(x) = 1/2 x^T Q x + q^T x + c0, Q symmetric."""
        q_mat = 0.5 * (np.asarray(q_mat, dtype=float) + np.asarray(q_mat, dtype=float).T)
        q_vec = np.asarray(q_vec, dtype=float)
        return ObjectiveOracle(
            eval=lambda x: float(0.5 * x @ (q_mat @ x) + q_vec @ x + c0),
            grad=lambda x: q_mat @ x + q_vec,
            hess_action=lambda x, v: q_mat @ v,
        )

    @staticmethod
    def linear(c) -> "ObjectiveOracle":
        c = np.asarray(c, dtype=float)
        return ObjectiveOracle(
            eval=lambda x: float(c @ x),
            grad=lambda x: c.copy(),
            hess_action=lambda x, v: np.zeros_like(v),
        )

    @staticmethod
    def negative_sqnorm(n: int) -> "ObjectiveOracle":
        return ObjectiveOracle.quadratic(-np.eye(n), np.zeros(n))

    @staticmethod
    def distance_to_point(point) -> "ObjectiveOracle":
        point = np.asarray(point, dtype=float)
        n = point.shape[0]
        return ObjectiveOracle.quadratic(np.eye(n), -point, 0.5 * float(point @ point))


@dataclass(frozen=True)
class Problem:
    objective: ObjectiveOracle
    feasible: FeasibleSet
    barrier: Barrier
    x_init: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.x_init is not None:
            object.__setattr__(self, "x_init", np.asarray(self.x_init, dtype=float))

    @property
    def dim(self) -> int:
        return self.barrier.spec.dim

    def f(self, x: np.ndarray) -> float:
        val = float(self.objective.eval(x))
        if not math.isfinite(val):
            raise ObjectiveFailure(f"objective returned {val}")
        return val

    def grad_f(self, x: np.ndarray) -> np.ndarray:
        g = np.asarray(self.objective.grad(x), dtype=float)
        if not np.all(np.isfinite(g)):
            raise ObjectiveFailure("objective gradient returned non-finite entries")
        return g

    def hess_f_action(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        if self.objective.hess_action is None:
            from .errors import NoSecondOrderOracle

            raise NoSecondOrderOracle("objective carries no Hessian oracle")
        return np.asarray(self.objective.hess_action(x, v), dtype=float)

    def is_strictly_feasible(self, x: np.ndarray) -> bool:
        return self.feasible.satisfies(x, EQ_TOL) and self.barrier.spec.is_member(
            x, strict=True
        )


@dataclass(frozen=True)
class Potential:
    """F_mu = f + mu * h, the merit function both solvers decrease."""

    problem: Problem
    mu: float

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("mu must be positive")

    def value(self, x: np.ndarray) -> float:
        return self.problem.f(x) + self.mu * self.problem.barrier.value(x)

    def grad(self, x: np.ndarray) -> np.ndarray:
        return self.problem.grad_f(x) + self.mu * self.problem.barrier.grad(x)


def analytic_center(
    problem: Problem, slack: float = 1.0, max_iters: int = 500
) -> np.ndarray:
    """Approximate minimizer of the barrier over the affine slice.

    Damped Newton on h restricted to {A x = b}, started at x_init, stopping at
    projected Newton decrement <= 1/2.  That certifies h(x0) - inf h <= 0.194,
    well within the required slack * nu for any slack >= 1 (nu >= 1).

    Requires the barrier to be bounded below on the feasible set; on an
    unbounded slice the iteration diverges and MaxIterExceeded is raised.
    """
    if slack < 1.0:
        raise ValueError("slack must be >= 1")
    if problem.x_init is None:
        raise NoInitialPoint("analytic center needs a strictly feasible x_init")
    barrier = problem.barrier
    x = np.asarray(problem.x_init, dtype=float).copy()
    for _ in range(max_iters):
        ws = MetricWorkspace(problem.feasible, barrier, x)
        v, _ = ws.project_tangent_metric(barrier.grad(x))  # v = -S_x grad h
        lam = barrier.local_norm(x, v)
        if lam <= 0.5:
            return x
        x = x + v / (1.0 + lam)
    raise MaxIterExceeded(
        f"analytic center: damped Newton did not reach decrement 1/2 in {max_iters} steps "
        "(barrier may be unbounded below on the feasible set)"
    )
