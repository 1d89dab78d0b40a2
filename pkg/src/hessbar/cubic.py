"""Global solver for the cubic-regularized reduced model.

Minimizes  <g, u> + 1/2 <J u, u> + (L/6) ||u||_H^3  over R^p with H positive
definite.  Whitening by H^{-1/2} turns the metric into the Euclidean one;
eigendecomposing the whitened J reduces global optimality to a scalar secular
equation in r = ||u||_H:

    phi(r) := ||(Jt + (L r / 2) I)^{-1} gt|| = r,    r >= max(0, -2 lmin / L),

whose unique root is bracketed and polished by a safeguarded root-finder.  The
hard case (gt orthogonal to the bottom eigenspace with phi jumping below the
admissible boundary) is resolved by adding a bottom-eigenvector component.
The returned solution carries the certificate lmin(Jt) + L r / 2 >= 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import NoConvergence, SingularModel

HARD_CASE_TOL = 1e-12
DEFAULT_TOL = 1e-10
MAX_ROOT_ITERS = 200


@dataclass(frozen=True)
class CubicModel:
    g: np.ndarray       # (p,)
    j: np.ndarray       # (p, p) symmetric, possibly indefinite
    h: np.ndarray       # (p, p) symmetric positive definite metric
    reg: float          # cubic weight L > 0

    def __post_init__(self):
        if self.reg <= 0:
            raise ValueError("cubic weight must be positive")

    def value(self, u: np.ndarray) -> float:
        r = math.sqrt(max(float(u @ (self.h @ u)), 0.0))
        return float(self.g @ u + 0.5 * u @ (self.j @ u) + self.reg / 6.0 * r**3)


@dataclass(frozen=True)
class CubicSolution:
    u: np.ndarray
    r: float                     # ||u||_H
    stationarity_residual: float
    min_eig_shifted: float       # lmin(Jt) + L r / 2 in whitened coordinates


def solve_cubic(model: CubicModel, tol_cubic: float = DEFAULT_TOL) -> CubicSolution:
    g, j, h, reg = model.g, model.j, model.h, model.reg
    p = g.shape[0]
    try:
        hw, he = scipy.linalg.eigh(0.5 * (h + h.T))
    except scipy.linalg.LinAlgError as exc:
        raise SingularModel("metric eigendecomposition failed") from exc
    if hw[0] <= 0:
        raise SingularModel("metric block is not positive definite")
    h_isqrt = (he / np.sqrt(hw)) @ he.T
    h_sqrt = (he * np.sqrt(hw)) @ he.T

    jt = h_isqrt @ (0.5 * (j + j.T)) @ h_isqrt
    jt = 0.5 * (jt + jt.T)
    gt = h_isqrt @ g
    lam, u_vecs = scipy.linalg.eigh(jt)
    gh = u_vecs.T @ gt
    lmin = float(lam[0])
    gnorm = float(np.linalg.norm(gh))

    r_min = max(0.0, -2.0 * lmin / reg)

    def phi(r: float) -> float:
        shift = lam + 0.5 * reg * r
        return float(np.linalg.norm(gh / shift))

    if gnorm == 0.0 and lmin >= 0.0:
        r_star, coeffs = 0.0, np.zeros(p)
    else:
        hard = _is_hard_case(gh, lam, lmin, gnorm)
        if hard and (r_min == 0.0 or _phi_at_rmin(gh, lam, lmin, reg, r_min) <= r_min):
            # shifted system is singular only on the bottom eigenspace, on
            # which gt has no component: fill up to r_min along it
            r_star = r_min
            shift = lam + 0.5 * reg * r_star
            coeffs = np.where(shift > 0, -gh / np.where(shift > 0, shift, 1.0), 0.0)
            norm_perp = float(np.linalg.norm(coeffs))
            tau = math.sqrt(max(r_star**2 - norm_perp**2, 0.0))
            # bottom-eigenvector sign chosen to keep <gt, u> <= 0
            sign = -1.0 if gh[0] > 0 else 1.0
            coeffs[0] += sign * tau
        else:
            r_star = _secular_root(phi, gnorm, lam, reg, r_min, tol_cubic)
            shift = lam + 0.5 * reg * r_star
            coeffs = -gh / shift

    ut = u_vecs @ coeffs
    u = h_isqrt @ ut
    r = math.sqrt(max(float(u @ (h @ u)), 0.0))
    resid = float(np.linalg.norm(g + j @ u + 0.5 * reg * r * (h @ u)))
    return CubicSolution(
        u=u,
        r=r,
        stationarity_residual=resid,
        min_eig_shifted=lmin + 0.5 * reg * r,
    )


def certify_global(
    model: CubicModel, sol: CubicSolution, tol_cubic: float = DEFAULT_TOL
) -> bool:
    """Check the global-optimality certificate of a cubic solution."""
    scale = (1.0 + float(np.linalg.norm(model.g))) * (1.0 + model.reg * sol.r)
    eig_scale = 1.0 + float(np.abs(np.linalg.eigvalsh(model.j)).max()) if model.j.size else 1.0
    ok_stat = sol.stationarity_residual <= 100.0 * tol_cubic * scale
    ok_eig = sol.min_eig_shifted >= -tol_cubic * eig_scale
    ok_norm = abs(math.sqrt(max(float(sol.u @ (model.h @ sol.u)), 0.0)) - sol.r) <= 1e-8 * (
        1.0 + sol.r
    )
    return ok_stat and ok_eig and ok_norm


def _is_hard_case(gh, lam, lmin: float, gnorm: float) -> bool:
    if lmin >= 0:
        return False
    bottom = np.abs(lam - lmin) <= 1e-10 * max(1.0, abs(lmin))
    return float(np.linalg.norm(gh[bottom])) <= HARD_CASE_TOL * max(gnorm, 1.0)


def _phi_at_rmin(gh, lam, lmin: float, reg: float, r_min: float) -> float:
    shift = lam + 0.5 * reg * r_min
    good = shift > 1e-14 * max(1.0, abs(lmin))
    return float(np.linalg.norm(gh[good] / shift[good]))


def _secular_root(phi, gnorm, lam, reg: float, r_min: float, tol: float) -> float:
    """Unique r > r_min with phi(r) = r, via bracketing + Brent."""

    def psi(r: float) -> float:
        return phi(r) - r

    lo = r_min
    # move off the singular boundary until psi(lo) >= 0
    bump = max(r_min, 1.0) * 1e-14
    for _ in range(MAX_ROOT_ITERS):
        if psi(lo + bump) >= 0.0:
            break
        bump *= 0.5
        if bump < 1e-300:
            return lo
    lo = lo + bump
    hi = max(2.0 * lo, 1.0, math.sqrt(2.0 * gnorm / reg))
    for _ in range(MAX_ROOT_ITERS):
        if psi(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise NoConvergence("secular equation: failed to bracket the root")
    if psi(lo) < 0.0:
        return lo
    try:
        r = scipy.optimize.brentq(
            psi, lo, hi, xtol=max(tol * 1e-6, 1e-300), rtol=1e-15, maxiter=MAX_ROOT_ITERS
        )
    except RuntimeError as exc:
        raise NoConvergence("secular equation root-finder stalled") from exc
    return float(r)
