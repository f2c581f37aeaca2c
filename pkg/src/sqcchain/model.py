"""Parameters, momentum grid and single-mode energies of the XY chain with
three-spin interaction.

The chain Hamiltonian is

    H = -sum_n [(1+g)/2 X_n X_{n+1} + (1-g)/2 Y_n Y_{n+1} + lam Z_n]
        -sum_n alpha (X_{n-1} Z_n X_{n+1} + Y_{n-1} Z_n Y_{n+1})

on a periodic ring of ``n_sites`` spins. After the Jordan-Wigner and
Bogoliubov transformations it becomes a sum of independent fermion modes
labelled by k = -M..M with M = (N-1)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "DEGENERATE_TOL",
    "ZeroTemperature",
    "InverseTemperature",
    "Temperature",
    "ChainParams",
    "MomentumMode",
    "DegenerateModeError",
    "InvalidParamsError",
    "momentum_grid",
    "mode_arrays",
    "thermal_factor",
    "thermal_weights",
    "ground_energy_per_site",
]

#: modes with dispersion at or below this value are treated as gap zeros
DEGENERATE_TOL = 1e-12


class InvalidParamsError(ValueError):
    """Raised when chain parameters violate their invariants."""


class DegenerateModeError(ArithmeticError):
    """A mode sits on a gap zero where a requested quantity diverges."""

    def __init__(self, message: str, k: int | None = None):
        super().__init__(message)
        self.k = k


@dataclass(frozen=True)
class ZeroTemperature:
    """Ground-state limit, beta -> infinity."""

    def __str__(self) -> str:
        return "zero"


@dataclass(frozen=True)
class InverseTemperature:
    beta: float

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise InvalidParamsError(f"beta must be finite and > 0, got {self.beta!r}")

    def __str__(self) -> str:
        return f"beta={self.beta!r}"


Temperature = Union[ZeroTemperature, InverseTemperature]


@dataclass(frozen=True)
class ChainParams:
    """Couplings, ring size and temperature of one chain.

    Parameters
    ----------
    gamma : float
        Anisotropy of the nearest-neighbour coupling.
    lam : float
        Transverse field.
    alpha : float
        Three-spin coupling.
    n_sites : int
        Odd ring length N >= 3.
    temperature : ZeroTemperature or InverseTemperature
    """

    gamma: float = 1.0
    lam: float = 0.0
    alpha: float = 0.0
    n_sites: int = 2001
    temperature: Temperature = field(default_factory=ZeroTemperature)

    def __post_init__(self):
        for name in ("gamma", "lam", "alpha"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParamsError(f"{name} must be finite, got {value!r}")
        if isinstance(self.n_sites, bool) or int(self.n_sites) != self.n_sites:
            raise InvalidParamsError(f"n_sites must be an integer, got {self.n_sites!r}")
        if self.n_sites < 3:
            raise InvalidParamsError(f"n_sites must be >= 3, got {self.n_sites}")
        if self.n_sites % 2 == 0:
            raise InvalidParamsError(
                f"n_sites must be odd (k runs over -M..M, M=(N-1)/2), got {self.n_sites}"
            )
        if not isinstance(self.temperature, (ZeroTemperature, InverseTemperature)):
            raise InvalidParamsError(f"unsupported temperature {self.temperature!r}")

    @property
    def half_width(self) -> int:
        """M = (N - 1) / 2."""
        return (self.n_sites - 1) // 2

    @property
    def is_zero_temperature(self) -> bool:
        return isinstance(self.temperature, ZeroTemperature)

    def replace(self, **changes) -> "ChainParams":
        values = dict(
            gamma=self.gamma,
            lam=self.lam,
            alpha=self.alpha,
            n_sites=self.n_sites,
            temperature=self.temperature,
        )
        values.update(changes)
        return ChainParams(**values)

    def fingerprint(self) -> tuple:
        """Hashable identity used to key cached correlator windows."""
        return (
            float(self.gamma),
            float(self.lam),
            float(self.alpha),
            int(self.n_sites),
            str(self.temperature),
        )


@dataclass(frozen=True)
class MomentumMode:
    k: int
    x_k: float
    bare_energy: float
    dispersion: float
    bogoliubov_angle: float


def mode_arrays(k, gamma: float, lam: float, alpha: float, n_sites: int):
    """Vectorised mode energies for integer labels ``k`` on a ring of ``n_sites``.

    No parity check is made here; :func:`momentum_grid` enforces odd N.

    Returns
    -------
    x, bare, disp : numpy.ndarray
        Momenta 2 pi k / N, bare energies lam - cos x - 2 alpha cos 2x and
        dispersions sqrt(bare^2 + gamma^2 sin^2 x).
    """
    k = np.asarray(k, dtype=float)
    x = 2.0 * np.pi * k / n_sites
    bare = lam - np.cos(x) - 2.0 * alpha * np.cos(2.0 * x)
    disp = np.hypot(bare, gamma * np.sin(x))
    return x, bare, disp


def _grid_labels(params: ChainParams) -> np.ndarray:
    m = params.half_width
    return np.arange(-m, m + 1)


def momentum_grid(params: ChainParams) -> list[MomentumMode]:
    """All N modes k = -M..M in increasing k."""
    if params.n_sites % 2 == 0:
        raise InvalidParamsError("momentum grid requires odd n_sites")
    k = _grid_labels(params)
    x, bare, disp = mode_arrays(k, params.gamma, params.lam, params.alpha, params.n_sites)
    modes = []
    for kk, xx, eb, ed in zip(k, x, bare, disp):
        if ed > DEGENERATE_TOL:
            ratio = min(1.0, max(-1.0, -params.gamma * math.sin(xx) / ed))
            theta = math.asin(ratio)
        else:
            theta = 0.0
        modes.append(MomentumMode(int(kk), float(xx), float(eb), float(ed), theta))
    return modes


def thermal_factor(mode: MomentumMode, params: ChainParams) -> float:
    """tanh(beta * dispersion) for one mode.

    At zero temperature this is 1 for gapped modes. A mode on a gap zero
    raises :class:`DegenerateModeError`; the sums in the correlator module
    use :func:`thermal_weights`, which assigns such modes a zero contribution
    because every numerator they multiply vanishes with the dispersion.
    """
    if params.is_zero_temperature:
        if mode.dispersion <= DEGENERATE_TOL:
            raise DegenerateModeError(
                f"mode k={mode.k} has zero dispersion at zero temperature", k=mode.k
            )
        return 1.0
    return math.tanh(params.temperature.beta * mode.dispersion)


def thermal_weights(disp: np.ndarray, temperature: Temperature):
    """Weights tanh(beta e)/e for each dispersion value ``e``.

    Returns
    -------
    weights : numpy.ndarray
    degenerate : numpy.ndarray of bool
        Modes with ``e <= DEGENERATE_TOL``. At finite beta their weight is the
        limit beta; at zero temperature it is set to 0 (the accompanying
        numerators are bounded by ``e`` and vanish too).
    """
    disp = np.asarray(disp, dtype=float)
    degenerate = disp <= DEGENERATE_TOL
    safe = np.where(degenerate, 1.0, disp)
    if isinstance(temperature, ZeroTemperature):
        weights = np.where(degenerate, 0.0, 1.0 / safe)
    else:
        beta = temperature.beta
        weights = np.where(degenerate, beta, np.tanh(beta * safe) / safe)
    return weights, degenerate


def ground_energy_per_site(params: ChainParams) -> float:
    """Free-fermion ground energy per site, -(1/N) sum_k e_k."""
    _, _, disp = mode_arrays(
        _grid_labels(params), params.gamma, params.lam, params.alpha, params.n_sites
    )
    return -float(disp.sum()) / params.n_sites
