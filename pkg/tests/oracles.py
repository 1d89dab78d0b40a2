"""Independent reference oracles used to freeze expected values.

Everything here deliberately avoids the library's closed forms: membership is
tested from definitions, sigma comes from bisection on the ray, derivatives
from central differences, the cubic model from multi-start polishing, and LP
minima from vertex enumeration.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import scipy.linalg
import scipy.optimize

from hessbar.cones import ConeSpec, Lorentz, Orthant, Psd, smat


def exact_member(spec: ConeSpec, z: np.ndarray, slack: float = 1e-13) -> bool:
    """Membership from cone definitions with a tiny absolute slack."""
    for b, s in zip(spec.blocks, spec.slices()):
        zb = z[s]
        tol = slack * (1.0 + float(np.linalg.norm(zb)))
        if isinstance(b, Orthant):
            if zb.min() < -tol:
                return False
        elif isinstance(b, Lorentz):
            if zb[0] < -tol or zb[0] ** 2 - float(zb[1:] @ zb[1:]) < -tol * (
                1.0 + zb[0] ** 2
            ):
                return False
        elif isinstance(b, Psd):
            if float(scipy.linalg.eigvalsh(smat(zb))[0]) < -tol:
                return False
        else:
            raise TypeError(b)
    return True


def sigma_bisection(spec: ConeSpec, x: np.ndarray, d: np.ndarray, t_cap: float = 1e12) -> float:
    """sigma_x(d) = 1 / sup{t : x - t d in K} by bisection on membership."""
    # the feasible t-set is an interval [0, T] by convexity; bracket T by
    # doubling so non-membership is tested at moderate magnitudes
    hi = 1.0
    while exact_member(spec, x - hi * d):
        hi *= 2.0
        if hi > t_cap:
            return 0.0
    lo = 0.0 if hi == 1.0 else hi / 2.0
    # 48 halvings of the bracket leave a relative width ~4e-15
    for _ in range(48):
        mid = 0.5 * (lo + hi)
        if exact_member(spec, x - mid * d):
            lo = mid
        else:
            hi = mid
    t_max = 0.5 * (lo + hi)
    return 1.0 / t_max if t_max > 0 else math.inf


def fd_grad(func, x: np.ndarray, h: float = 1e-6) -> np.ndarray:
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (func(x + e) - func(x - e)) / (2.0 * h)
    return g


def fd_dir(func, x: np.ndarray, v: np.ndarray, h: float = 1e-6):
    """Central difference of a vector- or scalar-valued func along v."""
    return (func(x + h * v) - func(x - h * v)) / (2.0 * h)


def brute_cubic_min(g, j, h, reg, rng, n_starts: int = 40) -> float:
    """Multi-start quasi-Newton polish of <g,u> + .5 u'Ju + (reg/6)||u||_H^3."""
    g = np.asarray(g, dtype=float)
    j = np.asarray(j, dtype=float)
    h = np.asarray(h, dtype=float)
    p = g.size

    def val(u):
        r = math.sqrt(max(float(u @ (h @ u)), 0.0))
        return float(g @ u + 0.5 * u @ (j @ u) + reg / 6.0 * r**3)

    # radius scale from first-order balance ||g|| ~ (reg/2) r^2 lmin(H)
    hmin = float(scipy.linalg.eigvalsh(h)[0])
    jmax = float(np.abs(scipy.linalg.eigvalsh(j)).max())
    r0 = math.sqrt(2.0 * (np.linalg.norm(g) + jmax + 1.0) / (reg * hmin))
    best = val(np.zeros(p))
    starts = [np.zeros(p)]
    for _ in range(n_starts):
        starts.append(rng.standard_normal(p) * r0 * rng.uniform(0.05, 1.5))
    for u0 in starts:
        res = scipy.optimize.minimize(val, u0, method="Nelder-Mead",
                                      options={"xatol": 1e-10, "fatol": 1e-12,
                                               "maxiter": 4000})
        res = scipy.optimize.minimize(val, res.x, method="Powell",
                                      options={"xtol": 1e-12, "ftol": 1e-14})
        best = min(best, float(res.fun))
    return best


def lp_vertex_min(c, a, b) -> float:
    """min c@x over {x >= 0, A x = b} by enumerating basic feasible points."""
    c = np.asarray(c, dtype=float)
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = a.shape
    best = math.inf
    for cols in itertools.combinations(range(n), m):
        sub = a[:, cols]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        xb = np.linalg.solve(sub, b)
        if xb.min() < -1e-10:
            continue
        x = np.zeros(n)
        x[list(cols)] = xb
        best = min(best, float(c @ x))
    return best


def constrained_lstsq_projection(a, h_mat, g):
    """Reference (v, y): minimize .5 v'Hv + g'v subject to A v = 0, via KKT solve."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    m, n = a.shape
    kkt = np.block([[h_mat, a.T], [a, np.zeros((m, m))]])
    rhs = np.concatenate([-np.asarray(g, dtype=float), np.zeros(m)])
    sol = np.linalg.solve(kkt, rhs)
    return sol[:n], -sol[n:]
