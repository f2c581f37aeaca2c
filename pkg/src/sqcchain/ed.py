"""Brute-force exact diagonalization of small periodic rings.

Used only to validate the free-fermion pipeline. Basis states are integers
whose bit ``N-1-n`` is the spin of site n (bit 0 = spin up, Z = +1), so
site 0 is the leftmost tensor factor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .correlators import BlochTensor
from .model import mode_arrays, thermal_weights, ZeroTemperature
from .quantumness import PAULI

__all__ = [
    "MAX_SITES",
    "EXTENDED_MAX_SITES",
    "DenseHamiltonian",
    "build_hamiltonian",
    "ground_state",
    "thermal_state",
    "reduced_state",
    "ed_bloch",
    "translation",
    "free_fermion_bloch",
    "free_fermion_energy",
]

MAX_SITES = 12
EXTENDED_MAX_SITES = 14


@dataclass(frozen=True)
class DenseHamiltonian:
    n_sites: int
    gamma: float
    lam: float
    alpha: float
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _spins(states: np.ndarray, n_sites: int, site: int) -> np.ndarray:
    """Z eigenvalue (+1 / -1) of ``site`` for each basis state."""
    bit = (states >> (n_sites - 1 - site)) & 1
    return 1 - 2 * bit


def _flip_mask(n_sites: int, *sites: int) -> int:
    mask = 0
    for s in sites:
        mask |= 1 << (n_sites - 1 - (s % n_sites))
    return mask


def build_hamiltonian(
    n_sites: int,
    gamma: float,
    lam: float,
    alpha: float = 0.0,
    allow_large: bool = False,
) -> DenseHamiltonian:
    """Dense H on a periodic ring, signs exactly as in the chain model."""
    limit = EXTENDED_MAX_SITES if allow_large else MAX_SITES
    if not 3 <= n_sites <= limit:
        raise ValueError(f"n_sites must lie in [3, {limit}], got {n_sites}")
    dim = 1 << n_sites
    states = np.arange(dim)
    h = np.zeros((dim, dim))
    s = [_spins(states, n_sites, n) for n in range(n_sites)]

    diag = -lam * sum(s)
    h[states, states] += diag
    for n in range(n_sites):
        m = (n + 1) % n_sites
        target = states ^ _flip_mask(n_sites, n, m)
        # X X flips both spins; Y Y does the same with amplitude -s_n s_m
        amp = -(1 + gamma) / 2 + (1 - gamma) / 2 * s[n] * s[m]
        np.add.at(h, (target, states), amp)
        if alpha != 0.0:
            left = (n - 1) % n_sites
            target3 = states ^ _flip_mask(n_sites, left, m)
            amp3 = -alpha * s[n] * (1 - s[left] * s[m])
            np.add.at(h, (target3, states), amp3)
    return DenseHamiltonian(n_sites, gamma, lam, alpha, h)


def translation(vec: np.ndarray, n_sites: int) -> np.ndarray:
    """Shift every site by one step around the ring."""
    psi = np.asarray(vec).reshape((2,) * n_sites)
    return np.moveaxis(psi, -1, 0).reshape(-1)


def ground_state(h: DenseHamiltonian) -> tuple[float, np.ndarray]:
    """Lowest eigenpair; the sign is fixed so the largest-magnitude amplitude is positive."""
    vals, vecs = scipy.linalg.eigh(h.matrix, subset_by_index=[0, 0])
    psi = vecs[:, 0]
    pivot = np.argmax(np.abs(psi) - 1e-12 * np.arange(psi.size))
    if psi[pivot] < 0:
        psi = -psi
    return float(vals[0]), psi


def thermal_state(h: DenseHamiltonian, beta: float) -> np.ndarray:
    """Gibbs state exp(-beta H) / Z."""
    vals, vecs = np.linalg.eigh(h.matrix)
    w = np.exp(-beta * (vals - vals.min()))
    w /= w.sum()
    return (vecs * w) @ vecs.T


def reduced_state(state: np.ndarray, n_sites: int, i: int, j: int) -> np.ndarray:
    """4x4 reduced density matrix of sites (i, j) from a vector or density matrix."""
    if i == j:
        raise ValueError("sites must differ")
    i %= n_sites
    j %= n_sites
    others = [s for s in range(n_sites) if s not in (i, j)]
    state = np.asarray(state)
    if state.ndim == 1:
        psi = state.reshape((2,) * n_sites)
        psi = np.transpose(psi, [i, j] + others).reshape(4, -1)
        return psi @ psi.conj().T
    rho = state.reshape((2,) * (2 * n_sites))
    perm = [i, j] + others
    rho = np.transpose(rho, perm + [n_sites + p for p in perm])
    rest = 1 << (n_sites - 2)
    rho = rho.reshape(4, rest, 4, rest)
    return np.einsum("aibi->ab", rho)


def ed_bloch(state: np.ndarray, n_sites: int, r: int, i: int = 0) -> BlochTensor:
    """Bloch tensor of sites (i, i + r) by partial trace.

    The single-spin component is averaged over all sites.
    """
    if not 1 <= r <= n_sites - 1:
        raise ValueError(f"r must lie in [1, {n_sites - 1}]")
    rho = reduced_state(state, n_sites, i, i + r)

    def comp(a: str, b: str) -> float:
        return float(np.trace(rho @ np.kron(PAULI[a], PAULI[b])).real)

    z_avg = np.mean(
        [
            float(np.trace(reduced_state(state, n_sites, s, s + 1) @ np.kron(PAULI["z"], PAULI["0"])).real)
            for s in range(n_sites)
        ]
    )
    return BlochTensor(z_avg, z_avg, comp("x", "x"), comp("y", "y"), comp("z", "z"), r)


def _ring_labels(n_sites: int) -> np.ndarray:
    # k = -M..M with M = (N-1)/2: integers for odd N, half-integers for even N
    return np.arange(n_sites) - (n_sites - 1) / 2


def free_fermion_energy(n_sites: int, gamma: float, lam: float, alpha: float = 0.0) -> float:
    """-(1/N) sum_k dispersion over k = -M..M, any N."""
    _, _, disp = mode_arrays(_ring_labels(n_sites), gamma, lam, alpha, n_sites)
    return -float(disp.sum()) / n_sites


def free_fermion_bloch(n_sites: int, gamma: float, lam: float, alpha: float, r: int) -> BlochTensor:
    """Toeplitz-determinant Bloch tensor over k = -M..M for any N.

    Mirrors the correlator module without the odd-N requirement so that
    analytic and brute-force results can be compared at equal (even) N.
    For even N the labels are half-integers, which is the even fermion
    parity sector; ED agrees exactly whenever the ground state lives there.
    """
    from .toeplitz import toeplitz_det

    k = _ring_labels(n_sites)
    x, bare, disp = mode_arrays(k, gamma, lam, alpha, n_sites)
    w, _ = thermal_weights(disp, ZeroTemperature())
    n = np.arange(-r, r + 1)[:, None]
    g = -((np.cos(n * x) * bare + gamma * np.sin(n * x) * np.sin(x)) @ w) / n_sites

    def G(m: int) -> float:
        return float(g[m + r])

    mz = float(bare @ w) / n_sites
    txx = toeplitz_det([G(i - 1) for i in range(r)], [G(-j - 1) for j in range(r)])
    tyy = toeplitz_det([G(i + 1) for i in range(r)], [G(1 - j) for j in range(r)])
    return BlochTensor(mz, mz, txx, tyy, mz * mz - G(r) * G(-r), r)
