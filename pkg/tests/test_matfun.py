import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from liesync import liegroup, matfun
from liesync.errors import EigenvalueOnNegativeRealAxis, NonFiniteMatrix, ZeroGain

from conftest import rot, taylor_expm

J = liegroup.J


def test_exp_of_zero_is_identity():
    assert np.array_equal(matfun.exp_matrix(np.zeros((3, 3))), np.eye(3))


def test_exp_quarter_turn():
    np.testing.assert_allclose(matfun.exp_matrix(math.pi / 2 * J), [[0, -1], [1, 0]], atol=1e-15)


def test_exp_inverse_identity(rng):
    A = rng.normal(size=(4, 4))
    np.testing.assert_allclose(matfun.exp_matrix(A) @ matfun.exp_matrix(-A), np.eye(4), atol=1e-12)


def test_exp_matches_taylor_oracle(rng):
    for _ in range(20):
        A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        np.testing.assert_allclose(matfun.exp_matrix(A), taylor_expm(A), rtol=1e-11, atol=1e-11)


def test_exp_rejects_nonfinite():
    with pytest.raises(NonFiniteMatrix):
        matfun.exp_matrix(np.array([[np.nan, 0], [0, 1]]))


def test_log_identity_is_zero():
    assert np.allclose(matfun.principal_log(np.eye(4)), 0)


def test_log_rotation():
    A = matfun.principal_log(rot(math.pi / 3))
    assert np.isrealobj(A)
    np.testing.assert_allclose(A, math.pi / 3 * J, atol=1e-14)


@pytest.mark.parametrize("X", [-np.eye(2), np.diag([1.0, 0.0]), np.diag([2.0, -3.0]), rot(math.pi)])
def test_log_rejects_negative_real_axis(X):
    with pytest.raises(EigenvalueOnNegativeRealAxis):
        matfun.principal_log(X)


def test_log_close_to_pi_rotation():
    theta = math.pi - 1e-3
    np.testing.assert_allclose(matfun.principal_log(rot(theta)), theta * J, atol=1e-10)


def test_log_matches_scipy(rng):
    for _ in range(30):
        A = 0.8 * rng.normal(size=(4, 4)) + 0.8j * rng.normal(size=(4, 4))
        X = scipy.linalg.expm(A / max(1.0, np.linalg.norm(A, 2) / 2.5))
        np.testing.assert_allclose(matfun.principal_log(X), scipy.linalg.logm(X), atol=1e-10)


def test_log_real_residue_truncated():
    X = rot(0.4).astype(complex)
    A = matfun.principal_log(X)
    assert np.isrealobj(A)


def test_series_requires_small_argument():
    with pytest.raises(ValueError):
        matfun.log_series(3 * np.eye(2))


def test_sqrt_db_squares_back(rng):
    X = scipy.linalg.expm(0.5 * rng.normal(size=(5, 5)))
    Y = matfun.sqrtm_db(X)
    np.testing.assert_allclose(Y @ Y, X, atol=1e-12)


def test_kth_root_examples(su2):
    np.testing.assert_allclose(matfun.kth_root(np.eye(3), 7), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(matfun.kth_root(rot(math.pi / 2), 2), rot(math.pi / 4), atol=1e-14)
    X = matfun.exp_matrix(0.3 * liegroup.SIGMA1)
    np.testing.assert_allclose(matfun.kth_root(X, 1), X, atol=1e-12)


def test_kth_root_zero_gain():
    with pytest.raises(ZeroGain):
        matfun.kth_root(np.eye(2), 0)


def test_log_of_power_examples():
    assert matfun.log_of_power_check(rot(0.5), 0.5) < 1e-12
    assert matfun.log_of_power_check(np.eye(2), -1) == 0
    X = matfun.exp_matrix(0.2 * liegroup.SIGMA1 + 0.1 * liegroup.SIGMA3)
    assert matfun.log_of_power_check(X, 1 / 3) < 1e-10


def test_spectrum_examples():
    np.testing.assert_allclose(matfun.spectrum(np.eye(3)), [1, 1, 1])
    from liesync.sim import TRIANGULAR_LAPLACIAN

    np.testing.assert_allclose(
        np.sort(matfun.spectrum(TRIANGULAR_LAPLACIAN).real), sorted([0.5, 0.8, 0.9, 0.8, 0.5, 0.0]), atol=1e-12
    )
    ev = matfun.spectrum(rot(0.9))
    np.testing.assert_allclose(sorted(ev, key=lambda z: z.imag), [np.exp(-0.9j), np.exp(0.9j)], atol=1e-14)


# --- randomized invariants -----------------------------------------------


def _random_small(seed, n, complex_=True, scale=None):
    r = np.random.default_rng(seed)
    A = r.normal(size=(n, n)) + (1j * r.normal(size=(n, n)) if complex_ else 0)
    target = r.uniform(0.01, math.log(2)) if scale is None else scale
    return A * target / np.linalg.norm(A, 2)


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 5)


@settings(max_examples=125, deadline=None)
@given(seeds, dims, st.booleans())
def test_round_trip(seed, n, complex_):
    A = _random_small(seed, n, complex_)
    X = matfun.exp_matrix(A)
    assert np.linalg.norm(matfun.exp_matrix(matfun.principal_log(X)) - X, 2) <= 1e-10 * (1 + np.linalg.norm(X, 2))


@settings(max_examples=125, deadline=None)
@given(seeds, dims)
def test_strip_property(seed, n):
    r = np.random.default_rng(seed)
    X = r.normal(size=(n, n)) + 1j * r.normal(size=(n, n)) + 2 * np.eye(n)
    try:
        A = matfun.principal_log(X)
    except EigenvalueOnNegativeRealAxis:
        return
    ev = np.linalg.eigvals(A)
    assert np.all(np.abs(ev.imag) < math.pi)
    np.testing.assert_allclose(matfun.exp_matrix(A), X, atol=1e-9 * (1 + np.linalg.norm(X)))


@settings(max_examples=125, deadline=None)
@given(seeds, dims)
def test_realness(seed, n):
    r = np.random.default_rng(seed)
    X = scipy.linalg.expm(r.normal(size=(n, n)) * 0.7)
    A = matfun.principal_log(X)
    assert np.isrealobj(A)


@settings(max_examples=125, deadline=None)
@given(seeds, dims, st.floats(-1, 1))
def test_power_identity(seed, n, alpha):
    X = matfun.exp_matrix(_random_small(seed, n, scale=1.5))
    assert matfun.log_of_power_check(X, alpha) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(seeds, st.integers(1, 10))
def test_root_composition(seed, K):
    X = matfun.exp_matrix(_random_small(seed, 3, scale=2.0))
    Y = matfun.kth_root(X, K)
    assert np.linalg.norm(np.linalg.matrix_power(Y, K) - X, 2) <= 1e-9


@pytest.mark.parametrize("gap", [1e-3, 1e-5, 1e-7])
def test_log_near_antipodal_rotation(gap):
    # conditioning of Log is ~pi/gap here; the error must stay near that limit
    theta = math.pi - gap
    A = matfun.principal_log(rot(theta))
    assert np.isrealobj(A)
    assert np.abs(A - theta * J).max() <= 1e-14 / gap


def test_schur_root_keeps_real_input_real():
    Y = matfun.sqrtm_schur(rot(3.0))
    assert np.isrealobj(Y)
    np.testing.assert_allclose(Y, rot(1.5), atol=1e-14)
