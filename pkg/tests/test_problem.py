"""Objective oracles, the potential, and the analytic center."""

import math

import numpy as np
import pytest

from hessbar import (
    Barrier,
    ConeSpec,
    FeasibleSet,
    MaxIterExceeded,
    NoInitialPoint,
    ObjectiveOracle,
    Orthant,
    Potential,
    Problem,
    analytic_center,
)
from hessbar.errors import ObjectiveFailure

from conftest import simplex_problem
from oracles import fd_grad


def test_quadratic_oracle(rng):
    q_mat = rng.standard_normal((4, 4))
    q_vec = rng.standard_normal(4)
    obj = ObjectiveOracle.quadratic(q_mat, q_vec, 1.5)
    x = rng.standard_normal(4)
    sym = 0.5 * (q_mat + q_mat.T)
    assert obj.eval(x) == pytest.approx(0.5 * x @ sym @ x + q_vec @ x + 1.5)
    assert np.allclose(obj.grad(x), fd_grad(obj.eval, x), atol=1e-5)
    v = rng.standard_normal(4)
    assert np.allclose(obj.hess_action(x, v), sym @ v)


def test_builtin_oracles(rng):
    x = rng.standard_normal(3)
    lin = ObjectiveOracle.linear([1.0, 2.0, 3.0])
    assert lin.eval(x) == pytest.approx(x @ [1.0, 2.0, 3.0])
    neg = ObjectiveOracle.negative_sqnorm(3)
    assert neg.eval(x) == pytest.approx(-0.5 * x @ x)
    dist = ObjectiveOracle.distance_to_point([1.0, 1.0, 1.0])
    assert dist.eval(np.ones(3)) == pytest.approx(0.0, abs=1e-14)
    assert dist.eval(x) == pytest.approx(0.5 * np.sum((x - 1.0) ** 2))


def test_objective_failure():
    obj = ObjectiveOracle(eval=lambda x: float("nan"), grad=lambda x: x)
    prob = simplex_problem(obj, 3)
    with pytest.raises(ObjectiveFailure):
        prob.f(np.full(3, 1 / 3))


def test_potential(rng):
    prob = simplex_problem(ObjectiveOracle.linear([1.0, 2.0, 3.0]), 3)
    pot = Potential(prob, mu=0.1)
    x = np.array([0.2, 0.3, 0.5])
    expected = (x @ [1.0, 2.0, 3.0]) + 0.1 * (-np.log(x).sum())
    assert pot.value(x) == pytest.approx(expected)
    assert np.allclose(pot.grad(x), fd_grad(pot.value, x), atol=1e-5)
    with pytest.raises(ValueError):
        Potential(prob, mu=0.0)


def test_strict_feasibility():
    prob = simplex_problem(ObjectiveOracle.linear([1.0, 0.0, 0.0]), 3)
    assert prob.is_strictly_feasible(np.full(3, 1 / 3))
    assert not prob.is_strictly_feasible(np.array([0.0, 0.5, 0.5]))   # boundary
    assert not prob.is_strictly_feasible(np.array([0.2, 0.2, 0.2]))   # off the slice


def test_analytic_center_frozen_value():
    # slice {x >= 0, x1 + 2 x2 = 2}: exact center is (1, 1/2)
    spec = ConeSpec((Orthant(2),))
    fs = FeasibleSet.from_constraints(np.array([[1.0, 2.0]]), np.array([2.0]))
    prob = Problem(
        ObjectiveOracle.linear([0.0, 0.0]), fs, Barrier(spec),
        x_init=np.array([0.2, 0.9]),
    )
    x = analytic_center(prob)
    center = np.array([1.0, 0.5])
    b = Barrier(spec)
    gap = b.value(x) - b.value(center)
    # decrement <= 1/2 guarantees a barrier-value gap below -1/2 - ln(1/2)
    assert 0.0 <= gap <= 0.1931471805599454 + 1e-12
    assert np.linalg.norm(x - center) < 0.5


def test_analytic_center_stationary_start():
    spec = ConeSpec((Orthant(2),))
    fs = FeasibleSet.from_constraints(np.array([[1.0, 2.0]]), np.array([2.0]))
    prob = Problem(
        ObjectiveOracle.linear([0.0, 0.0]), fs, Barrier(spec),
        x_init=np.array([1.0, 0.5]),
    )
    assert np.allclose(analytic_center(prob), [1.0, 0.5], atol=1e-12)


def test_analytic_center_needs_x_init():
    spec = ConeSpec((Orthant(2),))
    fs = FeasibleSet.from_constraints(np.array([[1.0, 1.0]]), np.array([1.0]))
    prob = Problem(ObjectiveOracle.linear([0.0, 0.0]), fs, Barrier(spec))
    with pytest.raises(NoInitialPoint):
        analytic_center(prob)


def test_analytic_center_unbounded_diverges():
    # no constraints on the orthant: the barrier is unbounded below
    spec = ConeSpec((Orthant(2),))
    fs = FeasibleSet.from_constraints(np.zeros((0, 2)), np.zeros(0))
    prob = Problem(
        ObjectiveOracle.linear([0.0, 0.0]), fs, Barrier(spec), x_init=np.ones(2)
    )
    with pytest.raises(MaxIterExceeded):
        analytic_center(prob)


def test_analytic_center_barrier_contract(rng):
    # h(x_out) - min h <= slack * nu for several random slices
    for _ in range(5):
        n = 6
        spec = ConeSpec((Orthant(n),))
        a = np.abs(rng.standard_normal((1, n))) + 0.1
        x_feas = np.abs(rng.standard_normal(n)) + 0.1
        fs = FeasibleSet.from_constraints(a, a @ x_feas)
        prob = Problem(
            ObjectiveOracle.linear(np.zeros(n)), fs, Barrier(spec), x_init=x_feas
        )
        x = analytic_center(prob)
        b = Barrier(spec)
        # reference center by heavy damped-Newton polishing
        from hessbar import MetricWorkspace

        xc = x.copy()
        for _ in range(200):
            ws = MetricWorkspace(fs, b, xc)
            v, _ = ws.project_tangent_metric(b.grad(xc))
            lam = b.local_norm(xc, v)
            xc = xc + v / (1.0 + lam)
            if lam < 1e-12:
                break
        assert b.value(x) - b.value(xc) <= 1.0 * spec.nu
