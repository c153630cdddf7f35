import math

import numpy as np
import pytest

from liesync import control, graph, lincoord, liegroup
from liesync.control import ControlConfig
from liesync.errors import DeadbeatGain, Disconnected, Unstable, ZeroGain
from liesync.graph import CommGraph
from liesync.sim import TRIANGULAR_LAPLACIAN

from conftest import assert_multiset_close


def test_state_matrix_complete3():
    rep = graph.laplacian(CommGraph.complete(3))
    A = lincoord.state_matrix(rep, 2.0)
    expected = np.eye(3) + (np.outer(np.ones(3), rep.L[0]) - rep.L) / 2.0
    np.testing.assert_allclose(A, expected)
    np.testing.assert_allclose(A[0], [1, 0, 0])
    assert lincoord.state_matrix(rep, 2.0, m=3).shape == (9, 9)


def test_state_matrix_zero_gain():
    with pytest.raises(ZeroGain):
        lincoord.state_matrix(graph.laplacian(CommGraph.complete(3)), 0.0)


def test_rank_one_shift_keeps_spectrum(rng):
    for _ in range(50):
        N = int(rng.integers(2, 10))
        rep = graph.laplacian(graph.random_connected_digraph(N, rng))
        L = rep.L
        M = np.outer(np.ones(N), L[0]) - L
        assert_multiset_close(np.linalg.eigvals(M), np.linalg.eigvals(-L), 1e-8)
        K = float(rng.uniform(0.5, 10))
        assert_multiset_close(
            np.linalg.eigvals(lincoord.state_matrix(rep, K)), 1 - rep.spectrum / K, 1e-8
        )


def test_verdicts_triangular():
    rep = graph.laplacian(CommGraph.from_laplacian(TRIANGULAR_LAPLACIAN))
    assert lincoord.stability_verdict(rep, 3.5).stable
    assert lincoord.stability_verdict(rep, 0.46).stable
    assert not lincoord.stability_verdict(rep, 0.44).stable
    d = lincoord.stability_verdict(rep, 3.5).to_dict()
    assert d["stable"] and len(d["restricted_eigenvalues"]) == 5


@pytest.mark.parametrize("N", range(3, 13))
def test_complete_graph_threshold(N):
    rep = graph.laplacian(CommGraph.complete(N))
    assert lincoord.stability_verdict(rep, N / 2 + 0.01).stable
    assert not lincoord.stability_verdict(rep, N / 2 - 0.01).stable


def test_verdict_matches_exact_bound(rng):
    for _ in range(50):
        N = int(rng.integers(3, 9))
        rep = graph.laplacian(graph.random_connected_digraph(N, rng))
        b = graph.exact_gain_bound(rep)
        assert lincoord.stability_verdict(rep, b * 1.001 + 1e-9).stable
        assert not lincoord.stability_verdict(rep, b * 0.999).stable


def test_disconnected_verdict():
    rep = graph.laplacian(CommGraph(np.zeros((3, 3))))
    with pytest.raises(Disconnected):
        lincoord.stability_verdict(rep, 2.0)


def test_linear_model_exact_on_torus(rng):
    group = liegroup.torus(2)
    G = graph.random_connected_digraph(4, rng)
    rep = graph.laplacian(G)
    K = graph.exact_gain_bound(rep) + 1.0
    cfg = ControlConfig(1.0, K)
    p = rng.uniform(-0.4, 0.4, size=(4, 2))
    states = [liegroup.composed_flow(group, q) for q in p]
    t = lincoord.stacked([liegroup.exponential_coordinates(group, control.relative_error(states[0], X)) for X in states])
    for _ in range(30):
        states = control.closed_loop_step(states, G, cfg)
        t = lincoord.linear_step(t, rep, K, m=2)
        meas = lincoord.stacked(
            [liegroup.exponential_coordinates(group, control.relative_error(states[0], X)) for X in states]
        )
        np.testing.assert_allclose(meas, t, atol=1e-11)


def test_settling_examples():
    assert lincoord.settling_time(3, 2.0, 0.1) == 4
    assert lincoord.settling_time(3, 6.0, 0.1) == 4
    assert lincoord.settling_time(5, 4.0, 0.01) == 4  # ceil(3.32)
    with pytest.raises(DeadbeatGain) as info:
        lincoord.settling_time(40, 40.0, 0.1)
    assert info.value.settling_time == 1
    with pytest.raises(Unstable):
        lincoord.settling_time(4, 1.5, 0.1)


@pytest.mark.parametrize("N,K", [(3, 2.0), (5, 4.0), (8, 20.0), (8, 5.0), (6, 9.0)])
def test_settling_derivative_finite_difference(N, K):
    h = 1e-6
    fd = (lincoord.settling_time_real(N, K + h, 0.05) - lincoord.settling_time_real(N, K - h, 0.05)) / (2 * h)
    assert lincoord.settling_time_derivative(N, K, 0.05) == pytest.approx(fd, rel=1e-5)


def test_settling_derivative_sign():
    # faster settling approaching deadbeat from either side
    assert lincoord.settling_time_derivative(4, 3.0, 0.1) < 0
    assert lincoord.settling_time_derivative(4, 6.0, 0.1) > 0


def test_complete_exponent():
    assert lincoord.complete_exponent(3, 2.0) == -0.5
    assert lincoord.complete_exponent(4, 4.0) == 0.0
    assert math.isclose(lincoord.complete_exponent(8, 20.0), 0.6)
