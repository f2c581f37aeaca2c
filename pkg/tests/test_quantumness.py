import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqcchain.correlators import BlochTensor
from sqcchain.quantumness import (
    PAULI,
    InvalidTensorError,
    TwoSpinState,
    binary_entropy,
    coherence_l1,
    coherence_re,
    concurrence,
    measurement_branches,
    one_spin_state,
    sqc_closed_gradient,
    sqc_closed_l1,
    sqc_closed_re,
    sqc_oracle,
    sqc_paper_l1,
    state_from_bloch,
    von_neumann_entropy,
)
from sqcchain.suites import random_x_tensors

BELL = BlochTensor.from_components(0, 1, -1, 1)
POLARIZED = BlochTensor.from_components(1, 0, 0, 1)


def test_bell_state_reconstruction():
    rho = state_from_bloch(BELL).matrix
    phi = np.array([1, 0, 0, 1]) / math.sqrt(2)
    np.testing.assert_allclose(rho, np.outer(phi, phi), atol=1e-15)


def test_bell_and_polarized_sqc():
    for t, expected in ((BELL, 3.0), (POLARIZED, 2.0)):
        ref = sqc_oracle(state_from_bloch(t))
        assert ref.l1 == pytest.approx(expected, abs=1e-12)
        assert ref.re == pytest.approx(expected, abs=1e-12)
        assert sqc_closed_l1(t) == pytest.approx(expected, abs=1e-12)
        assert sqc_closed_re(t) == pytest.approx(expected, abs=1e-12)


def test_printed_l1_form_differs_on_negative_components():
    # identical on the positive-sign sector, not on the Bell tensor (t_yy < 0)
    t = BlochTensor.from_components(0.5, 0.2, 0.1, 0.3)
    assert sqc_paper_l1(t) == pytest.approx(sqc_closed_l1(t), abs=1e-14)
    assert sqc_paper_l1(BELL) == pytest.approx(1.0)
    assert sqc_closed_l1(BELL) == pytest.approx(3.0)


def test_invalid_states():
    with pytest.raises(InvalidTensorError):
        state_from_bloch(BlochTensor.from_components(0, 1, 1, 1))
    with pytest.raises(InvalidTensorError):
        TwoSpinState(np.eye(4))
    with pytest.raises(InvalidTensorError):
        TwoSpinState(np.eye(3) / 3)
    with pytest.raises(InvalidTensorError):
        sqc_closed_l1(BlochTensor(0.1, 0.2, 0, 0, 0))


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert binary_entropy(1 + 1e-13) == 0.0
    with pytest.raises(ValueError):
        binary_entropy(1.1)


def test_entropy_and_coherence_basics():
    plus = np.array([[0.5, 0.5], [0.5, 0.5]])
    assert von_neumann_entropy(plus) == pytest.approx(0.0, abs=1e-12)
    assert coherence_l1(plus, "z") == pytest.approx(1.0)
    assert coherence_re(plus, "z") == pytest.approx(1.0)
    assert coherence_l1(plus, "x") == pytest.approx(0.0, abs=1e-15)
    assert coherence_re(np.eye(2) / 2, "y") == pytest.approx(0.0, abs=1e-15)


def test_one_spin_coherence_vanishes():
    for tz in np.linspace(-1, 1, 11):
        rho = one_spin_state(tz)
        assert coherence_l1(rho, "z") == 0.0
        assert coherence_re(rho, "z") == pytest.approx(0.0, abs=1e-15)


def test_branch_probabilities_sum():
    state = state_from_bloch(BlochTensor.from_components(0.3, 0.2, -0.1, 0.4))
    branches = measurement_branches(state)
    assert len(branches) == 6
    for axis in "xyz":
        total = sum(b.probability for b in branches if b.axis == axis)
        assert total == pytest.approx(1.0, abs=1e-14)


def test_zero_weight_branch_dropped():
    branches = measurement_branches(state_from_bloch(POLARIZED))
    dropped = [b for b in branches if b.conditional_state is None]
    assert [(b.axis, b.outcome) for b in dropped] == [("z", 1)]


def test_oracle_closed_forms_random(rng):
    for t in random_x_tensors(rng, 300):
        ref = sqc_oracle(state_from_bloch(t))
        assert abs(ref.l1 - sqc_closed_l1(t)) < 1e-10
        assert abs(ref.re - sqc_closed_re(t)) < 1e-10


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_sqc_bounds(seed):
    t = random_x_tensors(np.random.default_rng(seed), 1)[0]
    l1, re = sqc_closed_l1(t), sqc_closed_re(t)
    assert 0 <= re <= 3 + 1e-12
    assert 0 <= l1 <= 3 + 1e-12


def test_concurrence_values():
    assert concurrence(state_from_bloch(BELL)) == pytest.approx(1.0)
    assert concurrence(state_from_bloch(POLARIZED)) == pytest.approx(0.0)
    werner = state_from_bloch(BlochTensor.from_components(0, 0.2, -0.2, 0.2))
    assert concurrence(werner) == pytest.approx(0.0, abs=1e-12)


def test_concurrence_closed_form_matches_wootters(rng):
    from sqcchain.quantumness import _wootters

    for t in random_x_tensors(rng, 200):
        s = state_from_bloch(t)
        assert concurrence(s) == pytest.approx(_wootters(s.matrix), abs=1e-7)


def test_closed_gradient_matches_finite_differences(rng):
    h = 1e-7
    checked = 0
    for t in random_x_tensors(rng, 60):
        z, xx, yy, zz = t.t_0z, t.t_xx, t.t_yy, t.t_zz
        # stay clear of kinks and boundary populations
        if min(abs(z + zz), abs(z - zz), abs(xx), abs(yy)) < 0.05 or abs(z) > 0.9:
            continue
        if not BlochTensor.from_components(z, xx, yy, zz).is_physical(-1e-3):
            continue
        grads = sqc_closed_gradient(t)
        base = dict(t_0z=z, t_xx=xx, t_yy=yy, t_zz=zz)
        for key in base:
            up = dict(base, **{key: base[key] + h})
            dn = dict(base, **{key: base[key] - h})
            tu = BlochTensor.from_components(up["t_0z"], up["t_xx"], up["t_yy"], up["t_zz"])
            td = BlochTensor.from_components(dn["t_0z"], dn["t_xx"], dn["t_yy"], dn["t_zz"])
            assert grads["l1"][key] == pytest.approx((sqc_closed_l1(tu) - sqc_closed_l1(td)) / (2 * h), abs=1e-6)
            assert grads["re"][key] == pytest.approx((sqc_closed_re(tu) - sqc_closed_re(td)) / (2 * h), abs=1e-5)
        checked += 1
    assert checked > 5


def test_pauli_algebra():
    for a in "xyz":
        np.testing.assert_allclose(PAULI[a] @ PAULI[a], np.eye(2))
