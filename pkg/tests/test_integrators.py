"""Group integrator tests: order, drift control, closed-form comparisons."""

import numpy as np
import pytest

from liebundles.errors import StiffnessError
from liebundles.groups import so3_descriptor, translation_descriptor
from liebundles.integrators import integrate_linear, integrate_on_group

from _oracles import observed_order, taylor_expm

SO3 = so3_descriptor()
T2 = translation_descriptor(2)


def test_zero_rhs_returns_initial_element():
    g0 = SO3.exp(SO3.algebra([0.4, -0.1, 0.2]))
    res = integrate_on_group(lambda t, g: SO3.zero(), g0, (0.0, 1.0), step=0.1)
    assert np.allclose(res.element.matrix, g0.matrix, atol=1e-14)
    assert res.error_estimate <= 1e-14


def test_abelian_constant_rhs_is_quadrature():
    g0 = T2.exp(T2.algebra([1.0, 2.0]))
    c = T2.algebra([0.5, -1.5])
    res = integrate_on_group(lambda t, g: c, g0, (0.0, 1.0), step=0.05)
    assert np.allclose(T2.log(res.element).coords, [1.5, 0.5], atol=1e-12)


def test_so3_constant_rhs_matches_exponential_oracle():
    g0 = SO3.exp(SO3.algebra([0.7, 0.0, 0.0]))
    e3 = SO3.algebra([0.0, 0.0, 1.0])
    res = integrate_on_group(lambda t, g: e3, g0, (0.0, np.pi), step=np.pi / 200)
    expected = taylor_expm(np.pi * e3.matrix) @ g0.matrix
    assert np.linalg.norm(res.element.matrix - expected) <= 1e-10


def test_integrator_order_at_least_3_6():
    # time- and state-dependent rhs keeps the problem contentful
    def rhs(t, g):
        return SO3.algebra([0.6 * np.sin(2 * t), 0.4 * np.cos(t), 0.5 * t])

    g0 = SO3.identity()
    ref = integrate_on_group(rhs, g0, (0.0, 1.0), step=1.0 / 1024, with_error_estimate=False)
    errs = []
    for n in (16, 32, 64):
        res = integrate_on_group(rhs, g0, (0.0, 1.0), step=1.0 / n, with_error_estimate=False)
        errs.append(np.linalg.norm(res.element.matrix - ref.element.matrix))
    assert observed_order(errs) >= 3.6


def test_membership_drift_after_1000_steps():
    def rhs(t, g):
        return SO3.algebra([np.sin(t), np.cos(2 * t), 0.3])

    res = integrate_on_group(
        rhs, SO3.identity(), (0.0, 10.0), step=0.01, with_error_estimate=False
    )
    assert res.steps == 1000
    assert res.membership_residual <= 1e-9


def test_step_underflow_raises_stiffness_error():
    with pytest.raises(StiffnessError):
        integrate_on_group(lambda t, g: SO3.zero(), SO3.identity(), (0.0, 1.0), step=1e-16)


def test_error_estimate_tracks_true_error():
    def rhs(t, g):
        return SO3.algebra([0.9 * np.sin(3 * t), 0.0, 0.8])

    res = integrate_on_group(rhs, SO3.identity(), (0.0, 1.0), step=0.05)
    ref = integrate_on_group(rhs, SO3.identity(), (0.0, 1.0), step=0.05 / 16, with_error_estimate=False)
    true_err = np.linalg.norm(res.element.matrix - ref.element.matrix)
    assert res.error_estimate >= 0.05 * true_err
    assert res.error_estimate <= 1e3 * max(true_err, 1e-16)


def test_linear_integrator_matches_matrix_exponential():
    k = np.array([[0.0, 1.0], [-1.0, 0.0]])
    v = integrate_linear(lambda t: k, np.array([1.0, 0.0]), (0.0, np.pi / 2), step=1e-3)
    expected = taylor_expm((np.pi / 2) * k) @ np.array([1.0, 0.0])
    assert np.allclose(v, expected, atol=1e-9)
    assert np.allclose(v, [0.0, -1.0], atol=1e-9)
