"""Determinants of general (non-symmetric) Toeplitz matrices.

The matrix is described scipy-style by its first column ``c`` and first row
``r`` so that ``T[i, j] = c[i - j]`` for ``i >= j`` and ``r[j - i]`` otherwise.
Determinants are returned as ``(sign, log|det|)`` because the correlator
determinants of large separations under- or overflow doubles.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.linalg import toeplitz as _dense_toeplitz

__all__ = [
    "PIVOT_TOL",
    "GROWTH_LIMIT",
    "LogDet",
    "ToeplitzBreakdown",
    "levinson_slogdet",
    "dense_slogdet",
    "toeplitz_slogdet",
    "toeplitz_det",
]

#: a step with |1 - rho_f * rho_b| below this follows a near-singular leading
#: minor; later steps would amplify rounding by roughly its inverse
PIVOT_TOL = 1e-5
#: predictor coefficients beyond this amplify rounding; hand over to dense LU
GROWTH_LIMIT = 1e4


class LogDet(NamedTuple):
    sign: float
    logabs: float
    path: str

    @property
    def value(self) -> float:
        if self.sign == 0.0:
            return 0.0
        return self.sign * math.exp(self.logabs)


class ToeplitzBreakdown(ArithmeticError):
    """The Levinson recursion hit a (near) singular leading minor."""

    def __init__(self, step: int, reason: str):
        super().__init__(f"Levinson recursion broke down at step {step}: {reason}")
        self.step = step


def _check(c, r):
    c = np.asarray(c, dtype=float).ravel()
    r = np.asarray(r, dtype=float).ravel()
    if c.size == 0 or c.size != r.size:
        raise ValueError("first column and first row must be non-empty and equally long")
    if c[0] != r[0]:
        raise ValueError("first column and first row disagree on the diagonal")
    return c, r


def levinson_slogdet(c, r, pivot_tol: float = PIVOT_TOL, growth_limit: float = GROWTH_LIMIT) -> LogDet:
    """Log-determinant by the non-symmetric Levinson (Trench/Zohar) recursion.

    The forward vector ``f`` (``f[0] = 1``) and backward vector ``b``
    (``b[-1] = 1``) of the k x k leading block satisfy ``T_k f = e_k u_0`` and
    ``T_k b = e_k u_{k-1}``, where by Cramer's rule ``e_k = det T_k / det T_{k-1}``.
    The determinant is therefore the product of the prediction errors ``e_k``.
    O(n^2) work.

    Raises
    ------
    ToeplitzBreakdown
        On a near-singular leading minor (``|1 - rho_f rho_b| < pivot_tol``),
        predictor growth beyond ``growth_limit`` or a non-finite intermediate.
        Unlike the symmetric case, |rho_f rho_b| > 1 is legitimate and only
        flips the sign of the prediction error.
    """
    c, r = _check(c, r)
    n = c.size
    err = float(c[0])
    if not math.isfinite(err) or err == 0.0:
        raise ToeplitzBreakdown(0, "zero leading element")
    logabs = math.log(abs(err))
    sign = math.copysign(1.0, err)

    fwd = np.zeros(n)
    bwd = np.zeros(n)
    fwd[0] = 1.0
    bwd[0] = 1.0
    for k in range(1, n):
        # bwd holds b in bwd[:k]; the new row/column of T_{k+1} hit f and b
        delta_f = float(np.dot(c[k:0:-1], fwd[:k]))
        delta_b = float(np.dot(r[1 : k + 1], bwd[:k]))
        rho_f = delta_f / err
        rho_b = delta_b / err
        product = rho_f * rho_b
        if not (math.isfinite(rho_f) and math.isfinite(rho_b)):
            raise ToeplitzBreakdown(k, "non-finite reflection")
        if abs(1.0 - product) < pivot_tol:
            raise ToeplitzBreakdown(k, f"reflection product {product:.3e} makes a singular minor")
        f_old = fwd[:k].copy()
        # f' = [f, 0] - rho_f [0, b];  b' = [0, b] - rho_b [f, 0]
        fwd[1 : k + 1] -= rho_f * bwd[:k]
        bwd[1 : k + 1] = bwd[:k].copy()
        bwd[0] = 0.0
        bwd[:k] -= rho_b * f_old
        if max(np.abs(fwd[: k + 1]).max(), np.abs(bwd[: k + 1]).max()) > growth_limit:
            raise ToeplitzBreakdown(k, "predictor growth")
        err = err * (1.0 - product)
        if not math.isfinite(err) or err == 0.0:
            raise ToeplitzBreakdown(k, "vanishing prediction error")
        logabs += math.log(abs(err))
        if err < 0:
            sign = -sign
    if not math.isfinite(logabs):
        raise ToeplitzBreakdown(n - 1, "non-finite log-determinant")
    return LogDet(sign, logabs, "levinson")


def dense_slogdet(c, r) -> LogDet:
    """Log-determinant of the assembled matrix by LU with partial pivoting."""
    c, r = _check(c, r)
    sign, logabs = np.linalg.slogdet(_dense_toeplitz(c, r))
    return LogDet(float(sign), float(logabs), "dense")


def toeplitz_slogdet(c, r) -> LogDet:
    """Levinson fast path with dense fallback on breakdown."""
    try:
        return levinson_slogdet(c, r)
    except ToeplitzBreakdown:
        out = dense_slogdet(c, r)
    if out.sign != 0.0 and not math.isfinite(out.logabs):
        raise ToeplitzBreakdown(len(np.ravel(c)), "dense fallback returned a non-finite determinant")
    return out


def toeplitz_det(c, r) -> float:
    return toeplitz_slogdet(c, r).value
