"""Group kernel tests: exponential, logarithm, adjoint, bracket, descriptors."""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liebundles.errors import DescriptorError, DomainError, RangeError, UsageError
from liebundles.groups import (
    descriptor_from_json,
    descriptor_to_json,
    so3_descriptor,
    translation_descriptor,
)

from _oracles import series_logm, so3_hat, taylor_expm

SO3 = so3_descriptor()
T2 = translation_descriptor(2)

coords3 = st.tuples(*[st.floats(-1.2, 1.2) for _ in range(3)]).map(np.array)


def test_descriptor_invariants():
    assert SO3.validate()["jacobi"] <= 1e-12
    assert T2.validate()["commutator"] == 0.0


def test_exp_of_zero_is_identity():
    assert np.allclose(SO3.exp(SO3.zero()).matrix, np.eye(3))
    assert np.allclose(T2.exp(T2.zero()).matrix, np.eye(3))


def test_exp_so3_pi_about_third_axis_matches_taylor_oracle():
    xi = SO3.algebra([0.0, 0.0, np.pi])
    expected = taylor_expm(so3_hat([0.0, 0.0, np.pi]))
    assert np.allclose(SO3.exp(xi).matrix, expected, atol=1e-12)
    assert np.allclose(SO3.exp(xi).matrix, np.diag([-1.0, -1.0, 1.0]), atol=1e-12)


def test_exp_abelian_is_identity_on_coordinates():
    v = np.array([0.7, -0.3])
    g = T2.exp(T2.algebra(v))
    assert np.allclose(g.matrix[:2, 2], v)


def test_exp_rejects_non_finite():
    with pytest.raises(DomainError):
        SO3.exp(SO3.algebra([np.nan, 0.0, 0.0]))


def test_log_identity_is_zero():
    assert SO3.log(SO3.identity()).norm() == 0.0


def test_log_rotation_matches_series_oracle():
    g = SO3.exp(SO3.algebra([0.0, 0.0, 0.3]))
    oracle = series_logm(g.matrix)
    assert np.allclose(SO3.log(g).matrix, oracle, atol=1e-12)
    assert np.allclose(SO3.log(g).coords, [0.0, 0.0, 0.3], atol=1e-12)


def test_log_abelian_roundtrip():
    v = np.array([5.0, -11.0])
    assert np.allclose(T2.log(T2.exp(T2.algebra(v))).coords, v)


def test_log_outside_injectivity_region_raises():
    g = SO3.exp(SO3.algebra([0.0, 0.0, np.pi - 1e-4]))
    with pytest.raises(RangeError):
        SO3.log(g)


def test_adjoint_identity_fixes_algebra():
    xi = SO3.algebra([0.2, -0.4, 0.9])
    assert np.allclose(SO3.Ad(SO3.identity(), xi).coords, xi.coords)


def test_adjoint_rotation_about_third_axis():
    theta = 0.77
    g = SO3.exp(SO3.algebra([0.0, 0.0, theta]))
    got = SO3.Ad(g, SO3.algebra([1.0, 0.0, 0.0])).coords
    # explicit conjugation oracle
    conj = g.matrix @ so3_hat([1.0, 0.0, 0.0]) @ g.matrix.T
    expected = np.array([conj[2, 1], conj[0, 2], conj[1, 0]])
    assert np.allclose(got, expected, atol=1e-12)
    assert np.allclose(got, [np.cos(theta), np.sin(theta), 0.0], atol=1e-12)


def test_adjoint_abelian_is_trivial():
    g = T2.exp(T2.algebra([3.0, 4.0]))
    xi = T2.algebra([-1.0, 2.0])
    assert np.allclose(T2.Ad(g, xi).coords, xi.coords)


def test_bracket_matches_matrix_commutator():
    xi = SO3.algebra([1.0, 0.0, 0.0])
    eta = SO3.algebra([0.0, 1.0, 0.0])
    got = SO3.bracket(xi, eta)
    comm = xi.matrix @ eta.matrix - eta.matrix @ xi.matrix
    assert np.allclose(got.matrix, comm, atol=1e-14)
    assert np.allclose(got.coords, [0.0, 0.0, 1.0])


def test_bracket_antisymmetry_and_abelian():
    xi = SO3.algebra([0.3, 0.1, -0.2])
    assert SO3.bracket(xi, xi).norm() <= 1e-15
    a, b = T2.algebra([1.0, 2.0]), T2.algebra([3.0, -1.0])
    assert T2.bracket(a, b).norm() == 0.0


def test_bracket_descriptor_mismatch_raises():
    with pytest.raises(UsageError):
        SO3.bracket(SO3.algebra([1, 0, 0]), T2.algebra([1, 0]))


@settings(max_examples=60, deadline=None)
@given(coords3)
def test_exp_log_roundtrip_so3(w):
    xi = SO3.algebra(w)
    if xi.norm() > SO3.injectivity_radius:
        return
    back = SO3.log(SO3.exp(xi))
    assert np.linalg.norm(back.coords - xi.coords) <= 1e-10


@settings(max_examples=40, deadline=None)
@given(coords3, coords3, coords3)
def test_adjoint_is_homomorphism(a, b, w):
    g, h = SO3.exp(SO3.algebra(a)), SO3.exp(SO3.algebra(b))
    xi = SO3.algebra(w)
    lhs = SO3.Ad(g @ h, xi).coords
    rhs = SO3.Ad(g, SO3.Ad(h, xi)).coords
    assert np.linalg.norm(lhs - rhs) <= 1e-10


def test_adjoint_derivative_is_bracket_with_second_order_fd():
    rng = np.random.default_rng(3)
    eta = SO3.algebra(rng.uniform(-1, 1, 3))
    xi = SO3.algebra(rng.uniform(-1, 1, 3))
    expected = SO3.bracket(eta, xi).coords

    def fd(h):
        gp = SO3.exp(SO3.algebra(h * eta.coords))
        gm = SO3.exp(SO3.algebra(-h * eta.coords))
        return (SO3.Ad(gp, xi).coords - SO3.Ad(gm, xi).coords) / (2 * h)

    errs = [np.linalg.norm(fd(h) - expected) for h in (1e-2, 5e-3, 2.5e-3)]
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(2)]
    assert np.median(orders) >= 1.9


def test_membership_enforced_and_retraction_repairs():
    bad = np.eye(3) + 1e-3
    with pytest.raises(DescriptorError):
        SO3.element(bad)
    fixed = SO3.retract(bad)
    assert SO3.membership_residual(fixed) <= 1e-12


def test_ad_matrix_consistent_with_ad():
    rng = np.random.default_rng(5)
    g = SO3.random_element(rng)
    xi = SO3.random_algebra(rng)
    assert np.allclose(SO3.Ad_matrix(g) @ xi.coords, SO3.Ad(g, xi).coords, atol=1e-12)


def test_descriptor_json_roundtrip():
    doc = json.dumps(descriptor_to_json(SO3))
    desc = descriptor_from_json(doc)
    rng = np.random.default_rng(11)
    xi = desc.random_algebra(rng)
    assert np.allclose(desc.exp(xi).matrix, SO3.exp(SO3.algebra(xi.coords)).matrix, atol=1e-12)
    assert desc.family == "orthogonal"


def test_descriptor_json_missing_field_raises():
    with pytest.raises(UsageError):
        descriptor_from_json({"name": "broken"})


def test_descriptor_rejects_non_closed_basis():
    # raising and lowering matrices bracket to a diagonal outside their span
    bad = {
        "name": "not-closed",
        "matrix_dim": 2,
        "basis": [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]],
        "family": "generic",
    }
    with pytest.raises(DescriptorError):
        descriptor_from_json(bad)
