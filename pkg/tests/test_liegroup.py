import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liesync import liegroup, matfun
from liesync.errors import OutsideLogNeighbourhood
from liesync.liegroup import SE2, SIGMA1, SIGMA2, SIGMA3, SO2, SO3, SU2

from conftest import rot

ALL = [SO2, SO3, SU2, SE2, liegroup.R, liegroup.torus(2), liegroup.cylinder(1, 1)]


def test_su2_brackets():
    np.testing.assert_allclose(liegroup.commutator(SIGMA1, SIGMA2), 2 * SIGMA3, atol=1e-15)
    np.testing.assert_allclose(liegroup.commutator(SIGMA2, SIGMA3), 2 * SIGMA1, atol=1e-15)
    np.testing.assert_allclose(liegroup.commutator(SIGMA3, SIGMA1), 2 * SIGMA2, atol=1e-15)


def test_commutativity_flags():
    assert SO2.commutative and liegroup.torus(3).commutative and liegroup.cylinder(2, 1).commutative
    assert not SO3.commutative and not SU2.commutative and not SE2.commutative


def test_basis_must_be_independent():
    with pytest.raises(ValueError):
        liegroup.GroupDescriptor("custom", (liegroup.J, 2 * liegroup.J), (0.0, 0.0))


def test_so2_flow_and_coordinates():
    np.testing.assert_allclose(liegroup.composed_flow(SO2, [0.7]), rot(0.7), atol=1e-15)
    np.testing.assert_allclose(liegroup.exponential_coordinates(SO2, rot(-2.5)), [-2.5], atol=1e-13)


def test_coordinates_reject_outside_radius():
    with pytest.raises(OutsideLogNeighbourhood):
        liegroup.exponential_coordinates(SO2, rot(math.pi))
    X = liegroup.composed_flow(SO3, [0, 0, 3.0])
    assert liegroup.in_log_neighbourhood(SO3, X)
    assert not liegroup.in_log_neighbourhood(liegroup.GroupDescriptor("custom", SO3.basis, (0, 0, 0)), X)


def test_torus_flow_is_block_rotation():
    X = liegroup.composed_flow(liegroup.torus(2), [0.3, -1.2])
    np.testing.assert_allclose(X[:2, :2], rot(0.3), atol=1e-15)
    np.testing.assert_allclose(X[2:, 2:], rot(-1.2), atol=1e-15)
    assert np.all(X[:2, 2:] == 0)


def test_cylinder_coordinates_unbounded_translation():
    C = liegroup.cylinder(1, 1)
    X = liegroup.composed_flow(C, [0.5, 40.0])
    np.testing.assert_allclose(liegroup.exponential_coordinates(C, X, check_radius=False), [0.5, 40.0], atol=1e-11)


@pytest.mark.parametrize("group", ALL, ids=lambda g: g.name)
def test_flow_in_group_and_coordinates_invert(group, rng):
    for _ in range(10):
        p = rng.uniform(-0.5, 0.5, size=group.m)
        A = liegroup.algebra_element(group, p)
        X = matfun.exp_matrix(A)
        assert liegroup.check_membership(group, X) < 1e-12
        np.testing.assert_allclose(liegroup.exponential_coordinates(group, X), p, atol=1e-11)
        assert liegroup.check_membership(group, liegroup.composed_flow(group, p)) < 1e-12


def test_membership_detects_non_members():
    assert liegroup.check_membership(SO2, 2 * np.eye(2)) > 0.1
    assert liegroup.check_membership(SU2, np.diag([1j, 1j])) > 0.1
    assert liegroup.check_membership(SO3, np.eye(2)) == math.inf
    bad = np.eye(4)
    bad[0, 3] = 0.2
    assert liegroup.check_membership(liegroup.torus(2), bad) >= 0.2


@pytest.mark.parametrize(
    "group,A,B,limit",
    [
        (SU2, SIGMA1, SIGMA2, 1.0),  # ||[s1, s2] / 2|| = ||s3||
        (SO3, SO3.basis[0], SO3.basis[1], 0.5),
    ],
    ids=["SU2", "SO3"],
)
def test_bch_quadratic_defect(group, A, B, limit):
    ratios = [liegroup.bch_defect(s * A, s * B) / s**2 for s in (1e-1, 1e-2, 1e-3)]
    assert abs(ratios[-1] - limit) < 1e-2
    # quadratic scaling: ratio approaches a constant
    assert abs(ratios[-1] - ratios[-2]) < abs(ratios[-2] - ratios[-3]) + 1e-3


def test_bch_vanishes_for_commuting():
    assert liegroup.bch_defect(0.3 * SIGMA3, 0.7 * SIGMA3) < 1e-14


@pytest.mark.parametrize("group", [SO3, SU2, SE2], ids=lambda g: g.name)
def test_bch_random_bound(group, rng):
    for _ in range(20):
        A = liegroup.random_algebra_element(group, rng, 0.05)
        B = liegroup.random_algebra_element(group, rng, 0.05)
        s = np.linalg.norm(A, 2) + np.linalg.norm(B, 2)
        assert liegroup.bch_defect(A, B) <= 0.5 * np.linalg.norm(liegroup.commutator(A, B), 2) + s**3


def test_morphism_on_commutative_groups(rng):
    for group in (liegroup.torus(3), liegroup.cylinder(2, 2), SO2):
        p = rng.uniform(-1, 1, group.m)
        q = rng.uniform(-1, 1, group.m)
        lhs = liegroup.composed_flow(group, p + q)
        rhs = liegroup.composed_flow(group, p) @ liegroup.composed_flow(group, q)
        np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_root_compatible_with_coordinates(rng):
    group = liegroup.torus(2)
    for K in (1.5, 3.0, 7.0):
        p = rng.uniform(-2.5, 2.5, group.m)
        X = liegroup.composed_flow(group, p)
        np.testing.assert_allclose(
            liegroup.exponential_coordinates(group, matfun.kth_root(X, K)), p / K, atol=1e-12
        )


@pytest.mark.parametrize("group", ALL + [liegroup.direct_product([SO3, SU2])], ids=lambda g: g.name)
def test_descriptor_round_trip(group):
    d = json.loads(json.dumps(group.to_dict()))
    g2 = liegroup.descriptor_from_dict(d)
    assert g2.name == group.name and g2.m == group.m and g2.n == group.n
    for a, b in zip(g2.basis, group.basis):
        np.testing.assert_array_equal(a, b)
    assert g2.kernel_periods == group.kernel_periods


def test_custom_descriptor_round_trip():
    g = liegroup.GroupDescriptor("custom", (SIGMA3,), (2 * math.pi,), radius=1.0)
    g2 = liegroup.descriptor_from_dict(json.loads(json.dumps(g.to_dict())))
    np.testing.assert_array_equal(g2.basis[0], SIGMA3)
    assert g2.radius == 1.0
    assert liegroup.check_membership(g2, matfun.exp_matrix(0.4 * SIGMA3)) < 1e-12


def test_unknown_group_name():
    with pytest.raises(ValueError):
        liegroup.descriptor_from_dict({"name": "SL7"})


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_su2_coordinates_invert_randomly(seed):
    r = np.random.default_rng(seed)
    p = r.normal(size=3)
    p *= r.uniform(0, 3.0) / np.linalg.norm(p)
    X = matfun.exp_matrix(liegroup.algebra_element(SU2, p))
    np.testing.assert_allclose(liegroup.exponential_coordinates(SU2, X), p, atol=1e-9)
