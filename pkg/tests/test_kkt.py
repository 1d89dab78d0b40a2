"""Certificate construction and verification."""

import numpy as np
import pytest

from hessbar import (
    Barrier,
    ConeSpec,
    FeasibleSet,
    KKTCertificate,
    ObjectiveOracle,
    Orthant,
    Problem,
    check_2kkt,
    check_eps_kkt,
    reduced_second_order_matrix,
)
from hessbar.errors import NoSecondOrderOracle

from conftest import simplex_problem
from oracles import lp_vertex_min


def _lp_problem():
    return simplex_problem(ObjectiveOracle.linear([1.0, 2.0, 3.0]), 3)


def test_exact_kkt_passes():
    # LP on the simplex: optimum at e1, exact multipliers y = 1, s = c - y*1
    prob = _lp_problem()
    x = np.array([1.0 - 2e-9, 1e-9, 1e-9])  # interior proxy for the vertex
    y = np.array([1.0])
    cert = KKTCertificate.from_triple(prob, x, y)
    assert np.allclose(cert.s, [0.0, 1.0, 2.0])
    verdict = check_eps_kkt(prob, cert, eps=1e-6)
    # complementarity <s, x> = 3e-9, residual 0
    assert verdict.grad_ok and verdict.compl_ok and verdict.eq_ok
    assert verdict.dual_cone_ok and verdict.interior_ok
    assert verdict.passed


def test_wrong_multiplier_fails():
    prob = _lp_problem()
    x = np.full(3, 1 / 3)
    cert = KKTCertificate.from_triple(prob, x, np.array([0.0]))  # s = c, not optimal
    verdict = check_eps_kkt(prob, cert, eps=1e-4)
    assert not verdict.compl_ok       # <c, x> = 2
    assert not verdict.passed


def test_dual_cone_violation_detected():
    prob = _lp_problem()
    x = np.full(3, 1 / 3)
    s = np.array([-1.0, 0.0, 0.0])
    cert = KKTCertificate.from_triple(prob, x, np.array([2.0]), s=s)
    verdict = check_eps_kkt(prob, cert, eps=10.0)
    assert not verdict.dual_cone_ok


def test_scaling_coherence():
    # scaling (f, y, s, eps) by c > 0 leaves every flag unchanged
    c_obj = np.array([1.0, 2.0, 3.0])
    scale = 7.5
    x = np.array([0.9, 0.05, 0.05])
    y = np.array([1.0])
    for fac in (1.0, scale):
        prob = simplex_problem(ObjectiveOracle.linear(fac * c_obj), 3)
        cert = KKTCertificate.from_triple(prob, x, fac * y)
        verdict = check_eps_kkt(prob, cert, eps=fac * 0.2)
        if fac == 1.0:
            base_flags = verdict.flags()
        else:
            assert verdict.flags() == base_flags


def test_tolerance_monotonicity():
    prob = _lp_problem()
    cert = KKTCertificate.from_triple(prob, np.array([0.98, 0.01, 0.01]), np.array([1.0]))
    v_small = check_eps_kkt(prob, cert, eps=1e-6)
    v_big = check_eps_kkt(prob, cert, eps=1.0)
    assert (not v_small.passed) and v_big.passed


def test_reduced_second_order_matrix():
    prob = simplex_problem(ObjectiveOracle.negative_sqnorm(3), 3)
    x = np.full(3, 1 / 3)
    eps2 = 1e-4
    m = reduced_second_order_matrix(prob, x, eps2)
    z = prob.feasible.null_basis
    ref = z.T @ (-np.eye(3) + np.sqrt(eps2) * np.diag(1.0 / x**2)) @ z
    assert np.allclose(m, ref, atol=1e-12)


def test_2kkt_convex_vs_nonconvex():
    x = np.full(3, 1 / 3)
    convex = simplex_problem(ObjectiveOracle.distance_to_point(x), 3)
    cert_c = KKTCertificate.from_triple(convex, x, np.array([0.0]))
    v = check_2kkt(convex, cert_c, eps1=1e-6, eps2=1e-8)
    assert v.second_order_ok and v.passed

    nonconvex = simplex_problem(ObjectiveOracle.negative_sqnorm(3), 3)
    cert_n = KKTCertificate.from_triple(nonconvex, x, np.array([-1.0 / 3.0]))
    # at the centroid the reduced Hessian is -I_2 + sqrt(eps2) * 9 I_2
    v_bad = check_2kkt(nonconvex, cert_n, eps1=1.0, eps2=1e-6)
    assert not v_bad.second_order_ok
    v_ok = check_2kkt(nonconvex, cert_n, eps1=1.0, eps2=0.5)
    assert v_ok.second_order_ok


def test_2kkt_needs_hessian():
    prob = simplex_problem(
        ObjectiveOracle(eval=lambda x: 0.0, grad=lambda x: np.zeros(3)), 3
    )
    cert = KKTCertificate.from_triple(prob, np.full(3, 1 / 3), np.array([0.0]))
    with pytest.raises(NoSecondOrderOracle):
        check_2kkt(prob, cert, 1e-3, 1e-3)


def test_certificate_roundtrip():
    prob = _lp_problem()
    cert = KKTCertificate.from_triple(prob, np.full(3, 1 / 3), np.array([1.0]))
    cert = KKTCertificate(
        x=cert.x, y=cert.y, s=cert.s, grad_residual=cert.grad_residual,
        complementarity=cert.complementarity, eq_residual=cert.eq_residual,
        second_order=(1e-4, 2e-5),
    )
    back = KKTCertificate.from_dict(cert.to_dict())
    assert np.allclose(back.x, cert.x) and np.allclose(back.s, cert.s)
    assert back.second_order == cert.second_order


def test_lp_vertex_oracle():
    # the vertex-enumeration oracle agrees with the obvious simplex minimum
    assert lp_vertex_min([1.0, 2.0, 3.0], np.ones((1, 3)), [1.0]) == pytest.approx(1.0)
    assert lp_vertex_min([-1.0, 4.0], np.ones((1, 2)), [2.0]) == pytest.approx(-2.0)
