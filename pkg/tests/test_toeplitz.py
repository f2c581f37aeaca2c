import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.linalg import toeplitz

from sqcchain.toeplitz import (
    ToeplitzBreakdown,
    dense_slogdet,
    levinson_slogdet,
    toeplitz_det,
    toeplitz_slogdet,
)


def test_identity_and_scalar():
    assert toeplitz_det([1.0, 0, 0], [1.0, 0, 0]) == 1.0
    assert toeplitz_det([-2.5], [-2.5]) == -2.5


def test_known_small_determinant():
    c = [2.0, 1.0, 0.5]
    r = [2.0, -1.0, 3.0]
    expected = np.linalg.det(toeplitz(c, r))
    assert math.isclose(toeplitz_det(c, r), expected, rel_tol=1e-13)


def test_nonsymmetric_convention_matches_scipy():
    c = np.array([1.0, 0.3, -0.2, 0.1])
    r = np.array([1.0, -0.4, 0.25, 0.05])
    out = levinson_slogdet(c, r)
    assert out.path == "levinson"
    assert math.isclose(out.sign * math.exp(out.logabs), np.linalg.det(toeplitz(c, r)), rel_tol=1e-12)


def test_input_checks():
    with pytest.raises(ValueError):
        toeplitz_slogdet([1.0, 2.0], [1.0])
    with pytest.raises(ValueError):
        toeplitz_slogdet([1.0, 2.0], [3.0, 2.0])
    with pytest.raises(ValueError):
        toeplitz_slogdet([], [])


def test_zero_leading_minor_falls_back():
    # [[0, 1], [1, 0]] has det -1 but a zero leading element
    with pytest.raises(ToeplitzBreakdown):
        levinson_slogdet([0.0, 1.0], [0.0, 1.0])
    out = toeplitz_slogdet([0.0, 1.0], [0.0, 1.0])
    assert out.path == "dense" and out.value == pytest.approx(-1.0)


def test_singular_matrix():
    out = toeplitz_slogdet([1.0, 1.0, 1.0], [1.0, 1.0, 1.0])
    assert out.value == pytest.approx(0.0, abs=1e-12)


def test_large_determinant_stays_in_log_space():
    n = 900
    c = np.zeros(n)
    c[0] = 0.3
    out = toeplitz_slogdet(c, c)
    assert out.logabs == pytest.approx(n * math.log(0.3), rel=1e-12)
    assert out.value == 0.0 or out.value < 1e-300


@given(
    data=arrays(np.float64, st.integers(2, 40), elements=st.floats(-1, 1)),
    other=st.integers(0, 2**32 - 1),
)
@settings(max_examples=150, deadline=None)
def test_levinson_agrees_with_dense(data, other):
    rng = np.random.default_rng(other)
    c = data
    r = np.concatenate([[c[0]], rng.uniform(-1, 1, c.size - 1)])
    try:
        fast = levinson_slogdet(c, r)
    except ToeplitzBreakdown:
        return
    ref = dense_slogdet(c, r)
    assert fast.sign == ref.sign
    assert abs(fast.logabs - ref.logabs) < 1e-8


def test_wrapper_always_returns(rng):
    for _ in range(200):
        n = int(rng.integers(1, 60))
        c = rng.uniform(-1, 1, n)
        r = rng.uniform(-1, 1, n)
        r[0] = c[0]
        out = toeplitz_slogdet(c, r)
        ref = np.linalg.det(toeplitz(c, r))
        assert out.value == pytest.approx(ref, rel=1e-8, abs=1e-12)
