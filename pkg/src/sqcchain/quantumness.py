"""Two-spin states and their quantumness: steered coherence, basis coherence
and concurrence.

Steered coherence (SQC) averages, over Alice's three Pauli measurements and
both outcomes, the coherence left on Bob's qubit in the two Pauli bases
complementary to Alice's choice, with an overall factor 1/2. All logarithms
are base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .correlators import BlochTensor

__all__ = [
    "PAULI",
    "InvalidTensorError",
    "TwoSpinState",
    "MeasurementBranch",
    "SqcValues",
    "state_from_bloch",
    "binary_entropy",
    "von_neumann_entropy",
    "coherence_l1",
    "coherence_re",
    "measurement_branches",
    "sqc_oracle",
    "sqc_closed_l1",
    "sqc_closed_re",
    "sqc_paper_l1",
    "sqc_closed_gradient",
    "concurrence",
    "one_spin_state",
]

I2 = np.eye(2, dtype=complex)
PAULI = {
    "0": I2,
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
AXES = ("x", "y", "z")

# columns are the +1 / -1 eigenvectors of each Pauli operator
_s = 1 / math.sqrt(2)
EIGENBASIS = {
    "x": np.array([[_s, _s], [_s, -_s]], dtype=complex),
    "y": np.array([[_s, _s], [1j * _s, -1j * _s]], dtype=complex),
    "z": np.eye(2, dtype=complex),
}

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
ZERO_BRANCH = 1e-14


class InvalidTensorError(ValueError):
    pass


@dataclass(frozen=True)
class TwoSpinState:
    """Two-qubit density matrix in the basis |00>, |01>, |10>, |11>."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidTensorError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise InvalidTensorError("state is not Hermitian")
        if abs(np.trace(m).real - 1.0) > TRACE_TOL:
            raise InvalidTensorError(f"trace {np.trace(m).real!r} != 1")
        if np.linalg.eigvalsh(m).min() < -PSD_TOL:
            raise InvalidTensorError("state is not positive semidefinite")
        object.__setattr__(self, "matrix", m)

    def is_x_state(self, tol: float = 1e-10) -> bool:
        mask = np.ones((4, 4), dtype=bool)
        for i in range(4):
            mask[i, i] = mask[i, 3 - i] = False
        return bool(np.abs(self.matrix[mask]).max() < tol)


class MeasurementBranch(NamedTuple):
    axis: str
    outcome: int
    probability: float
    conditional_state: np.ndarray | None


class SqcValues(NamedTuple):
    l1: float
    re: float


def state_from_bloch(t: BlochTensor) -> TwoSpinState:
    """rho = (1/4) sum t_{mu nu} sigma^mu (x) sigma^nu over the nonzero components."""
    if abs(t.t_0z - t.t_z0) > 1e-12:
        raise InvalidTensorError("t_0z and t_z0 differ")
    rho = np.kron(I2, I2).astype(complex)
    rho = rho + t.t_0z * np.kron(I2, PAULI["z"]) + t.t_z0 * np.kron(PAULI["z"], I2)
    for axis, value in (("x", t.t_xx), ("y", t.t_yy), ("z", t.t_zz)):
        rho = rho + value * np.kron(PAULI[axis], PAULI[axis])
    rho = rho / 4
    if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
        raise InvalidTensorError(f"Bloch tensor {t.as_tuple()} is not a physical state")
    return TwoSpinState(rho)


def one_spin_state(t_z: float) -> np.ndarray:
    """Single-spin reduced state with Bloch vector (0, 0, t_z)."""
    return (I2 + t_z * PAULI["z"]) / 2


def binary_entropy(p: float, slack: float = 1e-12) -> float:
    """-p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0."""
    if not (-slack <= p <= 1 + slack):
        raise ValueError(f"probability {p!r} outside [0, 1]")
    p = min(1.0, max(0.0, p))
    out = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            out -= q * math.log2(q)
    return out


def _shannon(probs) -> float:
    probs = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    probs = probs[probs > 0]
    return float(-(probs * np.log2(probs)).sum())


def von_neumann_entropy(rho) -> float:
    eig = np.linalg.eigvalsh(np.asarray(rho, dtype=complex))
    if eig.min() < -PSD_TOL:
        raise ValueError(f"negative eigenvalue {eig.min():.3e}")
    return _shannon(eig)


def _basis_unitary(rho: np.ndarray, axis: str) -> np.ndarray:
    basis = EIGENBASIS[axis]
    if rho.shape == (2, 2):
        return basis
    if rho.shape == (4, 4):
        return np.kron(basis, basis)
    raise ValueError(f"expected a 2x2 or 4x4 state, got shape {rho.shape}")


def _in_basis(state, axis: str) -> np.ndarray:
    rho = np.asarray(getattr(state, "matrix", state), dtype=complex)
    u = _basis_unitary(rho, axis)
    return u.conj().T @ rho @ u


def coherence_l1(state, basis_axis: str = "z") -> float:
    """Sum of off-diagonal magnitudes in the Pauli eigenbasis ``basis_axis``."""
    rho = _in_basis(state, basis_axis)
    return float(np.abs(rho).sum() - np.abs(np.diag(rho)).sum())


def coherence_re(state, basis_axis: str = "z") -> float:
    """Relative entropy of coherence H(populations) - S(rho)."""
    rho = _in_basis(state, basis_axis)
    value = _shannon(np.diag(rho).real) - von_neumann_entropy(rho)
    return max(0.0, value)


def measurement_branches(state: TwoSpinState) -> list[MeasurementBranch]:
    """Bob's conditional states after each Pauli measurement on qubit A."""
    rho = state.matrix.reshape(2, 2, 2, 2)
    branches = []
    for axis in AXES:
        for outcome in (0, 1):
            proj = (I2 + (-1) ** outcome * PAULI[axis]) / 2
            # tr_A[(P (x) 1) rho] contracts A's row with P and A's column with rho
            bob = np.einsum("ab,bjai->ji", proj, rho)
            p = float(np.trace(bob).real)
            cond = bob / p if p >= ZERO_BRANCH else None
            branches.append(MeasurementBranch(axis, outcome, p, cond))
    return branches


def sqc_oracle(state: TwoSpinState) -> SqcValues:
    """Steered coherence from explicit measurement branches, both functionals."""
    l1 = re = 0.0
    for branch in measurement_branches(state):
        if branch.conditional_state is None:
            continue
        for nu in AXES:
            if nu == branch.axis:
                continue
            l1 += branch.probability * coherence_l1(branch.conditional_state, nu)
            re += branch.probability * coherence_re(branch.conditional_state, nu)
    return SqcValues(l1 / 2, re / 2)


def _require_symmetric(t: BlochTensor) -> None:
    if abs(t.t_0z - t.t_z0) > 1e-12:
        raise InvalidTensorError("closed forms need t_0z == t_z0")


def sqc_closed_l1(t: BlochTensor) -> float:
    """Closed-form l1 steered coherence valid for every sign pattern."""
    _require_symmetric(t)
    z, xx, yy, zz = t.t_0z, t.t_xx, t.t_yy, t.t_zz
    return 0.5 * (abs(z + zz) + abs(z - zz)) + 0.5 * (
        abs(xx) + abs(yy) + math.hypot(z, xx) + math.hypot(z, yy)
    )


def sqc_paper_l1(t: BlochTensor) -> float:
    """Printed closed form without absolute values.

    Agrees with :func:`sqc_closed_l1` only when t_xx, t_yy >= 0 and
    t_0z >= |t_zz|; kept for reproducing published curves.
    """
    _require_symmetric(t)
    z, xx, yy = t.t_0z, t.t_xx, t.t_yy
    return z + 0.5 * (xx + yy + math.hypot(z, xx) + math.hypot(z, yy))


def sqc_closed_re(t: BlochTensor) -> float:
    """Closed-form relative-entropy steered coherence."""
    _require_symmetric(t)
    z, xx, yy, zz = t.t_0z, t.t_xx, t.t_yy, t.t_zz
    h = binary_entropy
    tau1 = 0.5 * (1 + math.hypot(z, xx))
    tau2 = 0.5 * (1 + math.hypot(z, yy))
    value = 2.0 - h(tau1) - h(tau2) + h((1 + z) / 2)
    # branches with vanishing weight (t_z0 = -1 or +1) drop out
    if 1 + z > 0:
        tau3 = 0.5 + abs(z + zz) / (2 * (1 + z))
        value -= (1 + z) * h(tau3) / 2
    if 1 - z > 0:
        tau4 = 0.5 + abs(z - zz) / (2 * (1 - z))
        value -= (1 - z) * h(tau4) / 2
    return value


def _dbinary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return math.nan
    return math.log2((1 - p) / p)


def _sign(v: float) -> float:
    return float(np.sign(v))


def sqc_closed_gradient(t: BlochTensor) -> dict:
    """Partial derivatives of both closed forms with respect to
    ``t_0z`` (with t_z0 tied to it), ``t_xx``, ``t_yy`` and ``t_zz``.

    Undefined (nan) where a conditional population reaches 0 or 1.
    """
    _require_symmetric(t)
    z, xx, yy, zz = t.t_0z, t.t_xx, t.t_yy, t.t_zz
    h1, h2 = math.hypot(z, xx), math.hypot(z, yy)
    q1 = 1 / h1 if h1 > 0 else 0.0
    q2 = 1 / h2 if h2 > 0 else 0.0
    a, b = z + zz, z - zz

    l1 = {
        "t_0z": 0.5 * (_sign(a) + _sign(b)) + 0.5 * z * (q1 + q2),
        "t_xx": 0.5 * (_sign(xx) + xx * q1),
        "t_yy": 0.5 * (_sign(yy) + yy * q2),
        "t_zz": 0.5 * (_sign(a) - _sign(b)),
    }

    dh = _dbinary_entropy
    tau1, tau2 = 0.5 * (1 + h1), 0.5 * (1 + h2)
    re = {
        "t_0z": -dh(tau1) * z * q1 / 2 - dh(tau2) * z * q2 / 2 + dh((1 + z) / 2) / 2,
        "t_xx": -dh(tau1) * xx * q1 / 2,
        "t_yy": -dh(tau2) * yy * q2 / 2,
        "t_zz": 0.0,
    }
    if 1 + z > 0:
        tau3 = 0.5 + abs(a) / (2 * (1 + z))
        dtau_dz = _sign(a) / (2 * (1 + z)) - abs(a) / (2 * (1 + z) ** 2)
        re["t_0z"] += -binary_entropy(tau3) / 2 - (1 + z) / 2 * dh(tau3) * dtau_dz
        re["t_zz"] += -dh(tau3) * _sign(a) / 4
    if 1 - z > 0:
        tau4 = 0.5 + abs(b) / (2 * (1 - z))
        dtau_dz = _sign(b) / (2 * (1 - z)) + abs(b) / (2 * (1 - z) ** 2)
        re["t_0z"] += binary_entropy(tau4) / 2 - (1 - z) / 2 * dh(tau4) * dtau_dz
        re["t_zz"] += dh(tau4) * _sign(b) / 4
    return {"l1": l1, "re": re}


def _wootters(rho: np.ndarray) -> float:
    yy = np.kron(PAULI["y"], PAULI["y"])
    flipped = yy @ rho.conj() @ yy
    eig = np.linalg.eigvals(rho @ flipped)
    lam = np.sort(np.sqrt(np.clip(eig.real, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def concurrence(state: TwoSpinState) -> float:
    """Two-qubit concurrence; closed form for X states, Wootters otherwise."""
    if not state.is_x_state():
        return _wootters(state.matrix)
    m = state.matrix
    p11, p22, p33, p44 = (float(m[i, i].real) for i in range(4))
    c1 = abs(m[1, 2]) - math.sqrt(max(0.0, p11 * p44))
    c2 = abs(m[0, 3]) - math.sqrt(max(0.0, p22 * p33))
    return float(2 * max(0.0, c1, c2))
