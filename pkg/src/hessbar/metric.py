"""Affine-constraint geometry: feasible set, metric projections, null space.

The feasible set is the cone intersected with {x : A x = b}.  At an interior
point x the barrier Hessian H(x) induces a metric; projecting a dual vector g
onto the tangent space ker(A) in that metric yields the search direction
v = -S_x g together with the multiplier y solving

    g + H(x) v - A^T y = 0,     A v = 0.

A QR-derived orthonormal basis Z of ker(A) is computed once per problem and
reused to reduce constrained subproblems to unconstrained ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .cones import Barrier
from .errors import SingularSystem, ValidationError


@dataclass(frozen=True)
class FeasibleSet:
    """Affine constraints A x = b with cached null-space basis."""

    a: np.ndarray          # (m, n), full row rank; m may be 0
    b: np.ndarray          # (m,)
    null_basis: np.ndarray  # (n, p) orthonormal, A Z = 0
    rank_tol: float

    @staticmethod
    def from_constraints(a, b, rank_tol: float | None = None) -> "FeasibleSet":
        a = np.atleast_2d(np.asarray(a, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        m, n = a.shape if a.size else (0, a.shape[1])
        if m == 0:
            return FeasibleSet(
                a=np.zeros((0, n)), b=np.zeros(0), null_basis=np.eye(n), rank_tol=0.0
            )
        if b.shape != (m,):
            raise ValidationError("dim_mismatch", f"b has length {b.shape[0]}, expected {m}")
        if m > n:
            raise ValidationError("rank_deficient", f"more constraints ({m}) than variables ({n})")
        norm_a = float(np.linalg.norm(a))
        tol = rank_tol if rank_tol is not None else 1e-10 * max(norm_a, 1.0)
        _, r, _ = scipy.linalg.qr(a.T, mode="economic", pivoting=True)
        rank = int(np.sum(np.abs(np.diag(r)) > tol))
        if rank < m:
            raise ValidationError(
                "rank_deficient", f"A has rank {rank} < {m}; remove dependent rows"
            )
        q, _ = scipy.linalg.qr(a.T, mode="full")
        z = q[:, m:]
        return FeasibleSet(a=a, b=b, null_basis=z, rank_tol=tol)

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]

    @property
    def p(self) -> int:
        return self.null_basis.shape[1]

    def eq_residual(self, x: np.ndarray) -> float:
        if self.m == 0:
            return 0.0
        return float(np.linalg.norm(self.a @ x - self.b))

    def satisfies(self, x: np.ndarray, tol: float = 1e-10) -> bool:
        return self.eq_residual(x) <= tol * (1.0 + float(np.linalg.norm(self.b)))


@dataclass
class MetricWorkspace:
    """Factorizations tied to one interior point, rebuilt when x moves."""

    feasible: FeasibleSet
    barrier: Barrier
    x: np.ndarray
    _schur: tuple = field(init=False, repr=False, default=None)
    _hinv_at: np.ndarray = field(init=False, repr=False, default=None)
    _hp_chol: tuple = field(init=False, repr=False, default=None)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        fs = self.feasible
        if fs.m == 0:
            return
        if fs.m <= fs.p:
            # Schur form: A H^{-1} A^T is the smaller dense factorization.
            # SPD under full rank; Cholesky failure signals rank loss at x.
            hinv_at = np.column_stack(
                [self.barrier.hessian_inv_apply(self.x, row) for row in fs.a]
            )
            w = fs.a @ hinv_at
            w = 0.5 * (w + w.T)
            try:
                self._schur = scipy.linalg.cho_factor(w)
            except scipy.linalg.LinAlgError as exc:
                raise SingularSystem("A H^{-1} A^T factorization failed") from exc
            self._hinv_at = hinv_at
        else:
            z = fs.null_basis
            h_cols = np.column_stack(
                [self.barrier.hessian_apply(self.x, z[:, i]) for i in range(fs.p)]
            )
            hp = z.T @ h_cols
            hp = 0.5 * (hp + hp.T)
            try:
                self._hp_chol = scipy.linalg.cho_factor(hp)
            except scipy.linalg.LinAlgError as exc:
                raise SingularSystem("Z^T H Z factorization failed") from exc

    def project_tangent_metric(self, g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Return (v, y) with v = -S_x g, g + H(x) v - A^T y = 0, A v = 0."""
        g = np.asarray(g, dtype=float)
        fs = self.feasible
        if fs.m == 0:
            return -self.barrier.hessian_inv_apply(self.x, g), np.zeros(0)
        if self._schur is not None:
            hinv_g = self.barrier.hessian_inv_apply(self.x, g)
            y = scipy.linalg.cho_solve(self._schur, fs.a @ hinv_g)
            v = -(hinv_g - self._hinv_at @ y)
            return v, y
        # null-space form (m > p)
        z = fs.null_basis
        v = -(z @ scipy.linalg.cho_solve(self._hp_chol, z.T @ g))
        resid = g + self.barrier.hessian_apply(self.x, v)
        y, *_ = np.linalg.lstsq(fs.a.T, resid, rcond=None)
        return v, y


def bregman_div(barrier: Barrier, x: np.ndarray, u: np.ndarray) -> float:
    """D_h(u, x) = h(u) - h(x) - <grad h(x), u - x> >= 0."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    return barrier.value(u) - barrier.value(x) - float(barrier.grad(x) @ (u - x))


def reduce_to_nullspace(
    fs: FeasibleSet,
    g: np.ndarray,
    j_action: Callable[[np.ndarray], np.ndarray],
    h_action: Callable[[np.ndarray], np.ndarray],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Project (g, J, H) onto the null-space basis: Z^T g, Z^T J Z, Z^T H Z.

    The reduced metric Z^T H Z must be positive definite; a failed Cholesky
    raises :class:`SingularSystem`.
    """
    z = fs.null_basis
    g_p = z.T @ np.asarray(g, dtype=float)
    j_cols = np.column_stack([j_action(z[:, i]) for i in range(z.shape[1])])
    h_cols = np.column_stack([h_action(z[:, i]) for i in range(z.shape[1])])
    j_p = z.T @ j_cols
    h_p = z.T @ h_cols
    j_p = 0.5 * (j_p + j_p.T)
    h_p = 0.5 * (h_p + h_p.T)
    try:
        scipy.linalg.cho_factor(h_p)
    except scipy.linalg.LinAlgError as exc:
        raise SingularSystem("reduced metric Z^T H Z not positive definite") from exc
    return g_p, j_p, h_p
