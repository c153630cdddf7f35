import math

import numpy as np
import pytest

from liesync import liegroup


def rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def taylor_expm(A, terms=60):
    """Plain Taylor series with scaling and squaring; independent exp oracle."""
    A = np.asarray(A, dtype=complex)
    s = max(0, int(math.ceil(math.log2(max(np.linalg.norm(A, 1), 1e-300)))) + 1)
    B = A / 2**s
    out = np.eye(A.shape[0], dtype=complex)
    term = np.eye(A.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ B / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def su2():
    return liegroup.SU2


def assert_multiset_close(a, b, tol):
    """Match two eigenvalue multisets by optimal assignment."""
    from scipy.optimize import linear_sum_assignment

    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    assert a.shape == b.shape
    D = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(D)
    assert D[r, c].max() <= tol, D[r, c].max()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
