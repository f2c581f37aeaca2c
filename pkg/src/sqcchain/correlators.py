"""Magnetization, fermionic contractions G_n and two-spin correlators.

All spin-spin correlators of the chain follow from the contraction array

    G_n = -(1/N) sum_k [cos(n x_k) e_k + g sin(n x_k) sin(x_k)] tanh(beta E_k) / E_k

with ``e_k`` the bare energy and ``E_k`` the dispersion. <X_i X_{i+r}> and
<Y_i Y_{i+r}> are r x r Toeplitz determinants over G_n; <Z_i Z_{i+r}> is a
2 x 2 Wick contraction.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .model import ChainParams, DegenerateModeError, mode_arrays, thermal_weights
from .toeplitz import LogDet, toeplitz_slogdet

__all__ = [
    "GWindow",
    "BlochTensor",
    "InconsistentStateError",
    "magnetization",
    "g_window",
    "g_direct",
    "xx_correlator",
    "yy_correlator",
    "zz_correlator",
    "xx_logdet",
    "yy_logdet",
    "bloch_tensor",
    "bloch_from_window",
    "clear_cache",
]

PSD_TOL = 1e-10


class InconsistentStateError(ArithmeticError):
    """Assembled correlators do not form a valid two-spin state."""


@dataclass(frozen=True)
class GWindow:
    """Contractions G_n for n = -r..r; ``values[n + r]`` holds G_n."""

    r: int
    values: np.ndarray
    params_fingerprint: tuple

    def __getitem__(self, n: int) -> float:
        if abs(n) > self.r:
            raise IndexError(f"G_{n} outside window of half-width {self.r}")
        return float(self.values[n + self.r])

    def slice(self, r: int) -> "GWindow":
        if not 1 <= r <= self.r:
            raise ValueError(f"cannot narrow window of half-width {self.r} to {r}")
        lo = self.r - r
        return GWindow(r, self.values[lo : lo + 2 * r + 1], self.params_fingerprint)


@dataclass(frozen=True)
class BlochTensor:
    """Nonzero Pauli-product coefficients of the two-spin state at distance r."""

    t_0z: float
    t_z0: float
    t_xx: float
    t_yy: float
    t_zz: float
    r: int = 0

    @classmethod
    def from_components(cls, t_0z, t_xx, t_yy, t_zz, r: int = 0) -> "BlochTensor":
        return cls(float(t_0z), float(t_0z), float(t_xx), float(t_yy), float(t_zz), r)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.t_0z, self.t_z0, self.t_xx, self.t_yy, self.t_zz)

    def x_state_eigenvalues(self) -> np.ndarray:
        """Spectrum of the reconstructed 4x4 state from its two 2x2 blocks."""
        outer = math.hypot(self.t_0z + self.t_z0, self.t_xx - self.t_yy)
        inner = math.hypot(self.t_0z - self.t_z0, self.t_xx + self.t_yy)
        return 0.25 * np.array(
            [
                1 + self.t_zz + outer,
                1 + self.t_zz - outer,
                1 - self.t_zz + inner,
                1 - self.t_zz - inner,
            ]
        )

    def is_physical(self, tol: float = PSD_TOL) -> bool:
        return bool(self.x_state_eigenvalues().min() >= -tol)


def _modes(params: ChainParams):
    m = params.half_width
    k = np.arange(-m, m + 1)
    x, bare, disp = mode_arrays(k, params.gamma, params.lam, params.alpha, params.n_sites)
    weights, _ = thermal_weights(disp, params.temperature)
    return k, x, bare, disp, weights


def magnetization(params: ChainParams) -> float:
    """<Z> = (1/N) sum_k e_k tanh(beta E_k) / E_k."""
    _, _, bare, _, weights = _modes(params)
    return float(np.dot(bare, weights)) / params.n_sites


def _check_r(params: ChainParams, r: int) -> int:
    if isinstance(r, bool) or int(r) != r:
        raise ValueError(f"separation must be an integer, got {r!r}")
    r = int(r)
    if not 1 <= r <= params.half_width:
        raise ValueError(f"separation r={r} outside [1, {params.half_width}]")
    return r


def g_direct(params: ChainParams, r: int) -> np.ndarray:
    """G_{-r..r} by explicit summation over modes, O(N r)."""
    r = _check_r(params, r)
    _, x, bare, _, weights = _modes(params)
    n = np.arange(-r, r + 1)[:, None]
    phase = n * x[None, :]
    terms = np.cos(phase) * bare + params.gamma * np.sin(phase) * np.sin(x)
    return -(terms @ weights) / params.n_sites


def _g_fft(params: ChainParams, r: int) -> np.ndarray:
    # on the grid x_k = 2 pi k / N every sum_k h_k exp(-i n x_k) is one DFT bin
    k, x, bare, _, weights = _modes(params)
    n_sites = params.n_sites
    even = np.zeros(n_sites)
    odd = np.zeros(n_sites)
    idx = np.mod(k, n_sites)
    even[idx] = bare * weights
    odd[idx] = params.gamma * np.sin(x) * weights
    cos_sum = np.fft.fft(even).real
    sin_sum = -np.fft.fft(odd).imag
    n = np.mod(np.arange(-r, r + 1), n_sites)
    return -(cos_sum[n] + sin_sum[n]) / n_sites


@functools.lru_cache(maxsize=512)
def _cached_window(params: ChainParams, r: int, method: str) -> np.ndarray:
    values = g_direct(params, r) if method == "direct" else _g_fft(params, r)
    values.setflags(write=False)
    return values


def g_window(params: ChainParams, r: int, method: str = "fft") -> GWindow:
    """Contraction window G_{-r..r}, cached per (params, r).

    ``method="direct"`` sums modes explicitly; the default evaluates all n at
    once with one FFT per parity of the summand.
    """
    r = _check_r(params, r)
    if method not in ("fft", "direct"):
        raise ValueError(f"unknown method {method!r}")
    return GWindow(r, _cached_window(params, r, method), params.fingerprint())


def clear_cache() -> None:
    _cached_window.cache_clear()


def _xx_vectors(g: GWindow):
    r = g.r
    col = np.array([g[i - 1] for i in range(r)])
    row = np.array([g[-j - 1] for j in range(r)])
    return col, row


def _yy_vectors(g: GWindow):
    r = g.r
    col = np.array([g[i + 1] for i in range(r)])
    row = np.array([g[1 - j] for j in range(r)])
    return col, row


def xx_logdet(g: GWindow) -> LogDet:
    return toeplitz_slogdet(*_xx_vectors(g))


def yy_logdet(g: GWindow) -> LogDet:
    return toeplitz_slogdet(*_yy_vectors(g))


def xx_correlator(g: GWindow) -> float:
    """<X_i X_{i+r}>: determinant of [G_{i-j-1}]_{i,j<r}."""
    return xx_logdet(g).value


def yy_correlator(g: GWindow) -> float:
    """<Y_i Y_{i+r}>: determinant of [G_{i-j+1}]_{i,j<r}."""
    return yy_logdet(g).value


def zz_correlator(params: ChainParams, g: GWindow) -> float:
    m = magnetization(params)
    return m * m - g[g.r] * g[-g.r]


def bloch_from_window(params: ChainParams, g: GWindow) -> BlochTensor:
    m = magnetization(params)
    tensor = BlochTensor(
        t_0z=m,
        t_z0=m,
        t_xx=xx_correlator(g),
        t_yy=yy_correlator(g),
        t_zz=m * m - g[g.r] * g[-g.r],
        r=g.r,
    )
    eig = tensor.x_state_eigenvalues()
    if eig.min() < -PSD_TOL:
        raise InconsistentStateError(
            f"two-spin state at r={g.r} has eigenvalue {eig.min():.3e} < 0 for {params}"
        )
    return tensor


def bloch_tensor(params: ChainParams, r: int) -> BlochTensor:
    """Bloch tensor of the spin pair (i, i + r)."""
    return bloch_from_window(params, g_window(params, r))


def degenerate_modes(params: ChainParams) -> np.ndarray:
    """Labels k of modes sitting on a gap zero (zero contribution in all sums)."""
    k, _, _, disp, _ = _modes(params)
    return k[disp <= 1e-12]


def require_gapped(params: ChainParams) -> None:
    bad = degenerate_modes(params)
    if bad.size:
        raise DegenerateModeError(f"modes {bad.tolist()} have zero dispersion", k=int(bad[0]))
