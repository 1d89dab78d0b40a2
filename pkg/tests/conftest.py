import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hessbar import (
    Barrier,
    ConeSpec,
    FeasibleSet,
    Lorentz,
    ObjectiveOracle,
    Orthant,
    Problem,
    Psd,
    svec,
)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_interior_point(spec: ConeSpec, rng) -> np.ndarray:
    """Sample a point comfortably inside each block."""
    parts = []
    for b in spec.blocks:
        if isinstance(b, Orthant):
            parts.append(rng.uniform(0.2, 3.0, b.dim))
        elif isinstance(b, Lorentz):
            xbar = rng.standard_normal(b.dim - 1)
            x0 = float(np.linalg.norm(xbar)) * rng.uniform(1.2, 3.0) + 0.1
            parts.append(np.concatenate([[x0], xbar]))
        elif isinstance(b, Psd):
            m = rng.standard_normal((b.order, b.order))
            parts.append(svec(m @ m.T + 0.2 * np.eye(b.order)))
        else:
            raise TypeError(b)
    return np.concatenate(parts)


def simplex_problem(objective: ObjectiveOracle, n: int, x_init=None) -> Problem:
    spec = ConeSpec((Orthant(n),))
    fs = FeasibleSet.from_constraints(np.ones((1, n)), np.array([1.0]))
    if x_init is None:
        x_init = np.full(n, 1.0 / n)
    return Problem(objective, fs, Barrier(spec), x_init=np.asarray(x_init, dtype=float))
