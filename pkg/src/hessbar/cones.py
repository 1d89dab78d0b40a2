"""Barrier calculus for symmetric cones.

Supported blocks: non-negative orthant, Lorentz (second-order) cone, and the
cone of positive semidefinite matrices, plus finite products of these.  Points
live in a flat coordinate vector; PSD blocks are stored in packed symmetric
("svec") form with off-diagonal entries scaled by sqrt(2), so the ambient
Euclidean inner product equals the trace inner product and Euclidean norms
equal Frobenius norms.

The canonical barriers are -sum log x_i (orthant, parameter n), -log(x0^2 -
|xbar|^2) (Lorentz, parameter 2) and -log det X (PSD, parameter n).  All are
self-scaled, which permits the long-step quantity sigma_x(d), the reciprocal
of the largest step t with x - t*d still in the cone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg

from .errors import DomainError, NotInterior

# Strict interiority margin and non-strict membership tolerance, both relative.
TOL_INT = 1e-12
TOL_CONE = 1e-9

SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# block descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Orthant:
    dim: int

    @property
    def ambient_dim(self) -> int:
        return self.dim

    @property
    def nu(self) -> float:
        return float(self.dim)


@dataclass(frozen=True)
class Lorentz:
    dim: int  # ambient coordinates (x0, xbar), dim >= 2

    @property
    def ambient_dim(self) -> int:
        return self.dim

    @property
    def nu(self) -> float:
        return 2.0


@dataclass(frozen=True)
class Psd:
    order: int

    @property
    def ambient_dim(self) -> int:
        return self.order * (self.order + 1) // 2

    @property
    def nu(self) -> float:
        return float(self.order)


Block = Union[Orthant, Lorentz, Psd]


def _validate_block(b: Block) -> None:
    if isinstance(b, Orthant) and b.dim < 1:
        raise ValueError("orthant block needs dim >= 1")
    if isinstance(b, Lorentz) and b.dim < 2:
        raise ValueError("lorentz block needs dim >= 2")
    if isinstance(b, Psd) and b.order < 1:
        raise ValueError("psd block needs order >= 1")


@dataclass(frozen=True)
class ConeSpec:
    """Ordered product of cone blocks."""

    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not self.blocks:
            raise ValueError("cone spec needs at least one block")
        for b in self.blocks:
            _validate_block(b)

    @property
    def dim(self) -> int:
        return sum(b.ambient_dim for b in self.blocks)

    @property
    def nu(self) -> float:
        return sum(b.nu for b in self.blocks)

    def slices(self) -> list[slice]:
        out, off = [], 0
        for b in self.blocks:
            out.append(slice(off, off + b.ambient_dim))
            off += b.ambient_dim
        return out

    def is_member(self, z: np.ndarray, strict: bool = False) -> bool:
        z = np.asarray(z, dtype=float)
        if z.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}")
        return all(
            _block_member(b, z[s], strict) for b, s in zip(self.blocks, self.slices())
        )

    def is_dual_member(self, s: np.ndarray) -> bool:
        # All supported blocks are self-dual, so the primal test applies.
        return self.is_member(s, strict=False)


# ---------------------------------------------------------------------------
# packed symmetric (svec) helpers
# ---------------------------------------------------------------------------

def svec(m: np.ndarray) -> np.ndarray:
    """Pack a symmetric matrix, scaling off-diagonals by sqrt(2)."""
    n = m.shape[0]
    iu = np.triu_indices(n)
    v = m[iu].copy()
    v[iu[0] != iu[1]] *= SQRT2
    return v


def smat(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`svec`."""
    k = v.shape[0]
    n = int((math.isqrt(8 * k + 1) - 1) // 2)
    if n * (n + 1) // 2 != k:
        raise ValueError(f"packed length {k} is not triangular")
    m = np.zeros((n, n))
    iu = np.triu_indices(n)
    vals = v.copy()
    off = iu[0] != iu[1]
    vals[off] /= SQRT2
    m[iu] = vals
    m[(iu[1], iu[0])] = vals
    return m


# ---------------------------------------------------------------------------
# per-block primitives
# ---------------------------------------------------------------------------

def _lorentz_q(z: np.ndarray) -> float:
    return float(z[0] ** 2 - z[1:] @ z[1:])


def _block_margin(b: Block, z: np.ndarray) -> float:
    """Defining scalar whose sign decides membership."""
    if isinstance(b, Orthant):
        return float(z.min())
    if isinstance(b, Lorentz):
        if z[0] < 0:
            return float(z[0])
        return _lorentz_q(z)
    m = smat(z)
    return float(scipy.linalg.eigvalsh(m)[0])


def _block_member(b: Block, z: np.ndarray, strict: bool) -> bool:
    scale = 1.0 + float(np.linalg.norm(z))
    margin = _block_margin(b, z)
    if strict:
        return margin >= TOL_INT * scale
    return margin >= -TOL_CONE * scale


def _check_interior(b: Block, z: np.ndarray) -> None:
    if not _block_member(b, z, strict=True):
        raise NotInterior(f"point not strictly interior to {type(b).__name__} block")


def _psd_eigh(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = smat(z)
    w, u = scipy.linalg.eigh(m)
    if w[0] <= TOL_INT * max(abs(w[-1]), 1.0):
        raise NotInterior("psd block not strictly positive definite")
    return w, u


def _lorentz_hess(z: np.ndarray) -> np.ndarray:
    # H = -2J/q + 4 (Jx)(Jx)^T / q^2  with J = diag(1,-1,...,-1)
    q = _lorentz_q(z)
    jz = z.copy()
    jz[1:] *= -1.0
    j = np.diag(np.concatenate(([1.0], -np.ones(z.shape[0] - 1))))
    return (-2.0 / q) * j + (4.0 / q**2) * np.outer(jz, jz)


# ---------------------------------------------------------------------------
# the barrier
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Barrier:
    """Self-scaled log barrier for a :class:`ConeSpec`."""

    spec: ConeSpec

    @property
    def nu(self) -> float:
        return self.spec.nu

    def _per_block(self, x):
        x = np.asarray(x, dtype=float)
        for b, s in zip(self.spec.blocks, self.spec.slices()):
            yield b, s, x[s]

    def value(self, x: np.ndarray) -> float:
        total = 0.0
        for b, _, xb in self._per_block(x):
            _check_interior(b, xb)
            if isinstance(b, Orthant):
                total -= float(np.log(xb).sum())
            elif isinstance(b, Lorentz):
                total -= math.log(_lorentz_q(xb))
            else:
                w, _ = _psd_eigh(xb)
                total -= float(np.log(w).sum())
        return total

    def grad(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        g = np.empty_like(x)
        for b, s, xb in self._per_block(x):
            _check_interior(b, xb)
            if isinstance(b, Orthant):
                g[s] = -1.0 / xb
            elif isinstance(b, Lorentz):
                q = _lorentz_q(xb)
                jx = xb.copy()
                jx[1:] *= -1.0
                g[s] = (-2.0 / q) * jx
            else:
                w, u = _psd_eigh(xb)
                inv = (u / w) @ u.T
                g[s] = -svec(inv)
        return g

    def hessian_apply(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        out = np.empty_like(v)
        for b, s, xb in self._per_block(x):
            _check_interior(b, xb)
            vb = v[s]
            if isinstance(b, Orthant):
                out[s] = vb / xb**2
            elif isinstance(b, Lorentz):
                out[s] = _lorentz_hess(xb) @ vb
            else:
                w, u = _psd_eigh(xb)
                inv = (u / w) @ u.T
                out[s] = svec(inv @ smat(vb) @ inv)
        return out

    def hessian_inv_apply(self, x: np.ndarray, s_vec: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        s_vec = np.asarray(s_vec, dtype=float)
        out = np.empty_like(s_vec)
        for b, s, xb in self._per_block(x):
            _check_interior(b, xb)
            sb = s_vec[s]
            if isinstance(b, Orthant):
                out[s] = sb * xb**2
            elif isinstance(b, Lorentz):
                # H^{-1} = -(q/2) J + x x^T
                q = _lorentz_q(xb)
                js = sb.copy()
                js[1:] *= -1.0
                out[s] = -(q / 2.0) * js + xb * float(xb @ sb)
            else:
                m = smat(xb)
                out[s] = svec(m @ smat(sb) @ m)
        return out

    def hessian_sqrt_apply(
        self, x: np.ndarray, v: np.ndarray, inverse: bool = False
    ) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        out = np.empty_like(v)
        for b, s, xb in self._per_block(x):
            _check_interior(b, xb)
            vb = v[s]
            if isinstance(b, Orthant):
                out[s] = vb * xb if inverse else vb / xb
            elif isinstance(b, Lorentz):
                w, u = scipy.linalg.eigh(_lorentz_hess(xb))
                pw = np.sqrt(w) if not inverse else 1.0 / np.sqrt(w)
                out[s] = (u * pw) @ (u.T @ vb)
            else:
                w, u = _psd_eigh(xb)
                pw = 1.0 / np.sqrt(w) if not inverse else np.sqrt(w)
                root = (u * pw) @ u.T  # X^{-1/2} (forward) or X^{1/2} (inverse)
                out[s] = svec(root @ smat(vb) @ root)
        return out

    def local_norm(self, x: np.ndarray, v: np.ndarray) -> float:
        v = np.asarray(v, dtype=float)
        return math.sqrt(max(float(v @ self.hessian_apply(x, v)), 0.0))

    def dual_local_norm(self, x: np.ndarray, s: np.ndarray) -> float:
        s = np.asarray(s, dtype=float)
        return math.sqrt(max(float(s @ self.hessian_inv_apply(x, s)), 0.0))

    # -- long-step geometry --------------------------------------------------

    def sigma(self, x: np.ndarray, d: np.ndarray) -> float:
        """1 / sup{t : x - t*d in K}; 0 when the ray never leaves the cone."""
        x = np.asarray(x, dtype=float)
        d = np.asarray(d, dtype=float)
        best = 0.0
        for b, s, xb in self._per_block(x):
            _check_interior(b, xb)
            best = max(best, _block_sigma(b, xb, d[s]))
        return best

    def zeta(self, x: np.ndarray, d: np.ndarray, mode: str = "ss") -> float:
        """Unified step-length control: local norm ("sc") or sigma_x(-d) ("ss")."""
        if mode == "sc":
            return self.local_norm(x, d)
        if mode == "ss":
            return self.sigma(x, np.negative(d))
        raise ValueError(f"unknown zeta mode {mode!r}")


def _block_sigma(b: Block, xb: np.ndarray, db: np.ndarray) -> float:
    if isinstance(b, Orthant):
        return max(float((db / xb).max()), 0.0)
    if isinstance(b, Psd):
        _psd_eigh(xb)
        w = scipy.linalg.eigh(smat(db), smat(xb), eigvals_only=True)
        return max(float(w[-1]), 0.0)
    # Lorentz: smallest positive root t of q(x - t d) = 0 with x0 - t d0 >= 0,
    # where q(z) = z0^2 - |zbar|^2; sigma is its reciprocal, 0 if no such root.
    qx = _lorentz_q(xb)
    qd = _lorentz_q(db)
    bxd = float(xb[0] * db[0] - xb[1:] @ db[1:])
    # q(x - t d) = qx - 2 t bxd + t^2 qd
    roots = []
    if abs(qd) > 0.0:
        disc = bxd * bxd - qd * qx
        if disc >= 0.0:
            sq = math.sqrt(disc)
            roots = [(bxd - sq) / qd, (bxd + sq) / qd]
    elif abs(bxd) > 0.0:
        roots = [qx / (2.0 * bxd)]
    valid = [t for t in roots if t > 0.0 and xb[0] - t * db[0] >= -TOL_CONE]
    if not valid:
        return 0.0
    return 1.0 / min(valid)


# ---------------------------------------------------------------------------
# the omega function of self-concordance analysis
# ---------------------------------------------------------------------------

def omega(t: float) -> float:
    """(-t - log(1-t)) / t^2 on [0, 1), with omega(0) = 1/2."""
    if not 0.0 <= t < 1.0:
        raise DomainError(f"omega requires t in [0, 1), got {t}")
    if t < 1e-4:
        # 4-term series avoids cancellation near 0
        return 0.5 + t / 3.0 + t**2 / 4.0 + t**3 / 5.0
    return (-t - math.log1p(-t)) / t**2
