"""Input-validation helpers shared by the estimators and the command line."""

from __future__ import annotations

import math

import numpy as np

from .measures import MEASURES
from .model import ChainParams, InverseTemperature, ZeroTemperature

__all__ = [
    "MODEL_PRESETS",
    "parse_range",
    "parse_measures",
    "parse_temperature",
    "check_separation",
    "check_workers",
    "check_grid",
    "preset_params",
]

MODEL_PRESETS = {
    "ising": {"gamma": 1.0, "alpha": 0.0},
    "xy": {"gamma": 0.5, "alpha": 0.0},
    "xx3": {"gamma": 0.0, "alpha": 0.8},
}


def parse_range(text: str) -> tuple[float, float, int]:
    """Parse ``low:high:count`` into a validated triple."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise ValueError(f"range {text!r} must look like low:high:count")
    try:
        low, high = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ValueError(f"range {text!r} has non-numeric fields") from None
    if not (math.isfinite(low) and math.isfinite(high)) or not low < high:
        raise ValueError(f"range {text!r} needs finite low < high")
    if count < 2:
        raise ValueError(f"range {text!r} needs at least 2 points")
    return low, high, count


def parse_measures(value) -> tuple[str, ...]:
    """Comma-separated string or iterable of measure names, order preserved."""
    if isinstance(value, str):
        items = [v.strip() for v in value.split(",") if v.strip()]
    else:
        items = list(value)
    if not items:
        raise ValueError("at least one measure is required")
    bad = [m for m in items if m not in MEASURES]
    if bad:
        raise ValueError(f"unknown measures {bad}; choose from {list(MEASURES)}")
    return tuple(dict.fromkeys(items))


def parse_temperature(value):
    """``"zero"``, ``0`` or a positive temperature T (beta = 1/T)."""
    if isinstance(value, (ZeroTemperature, InverseTemperature)):
        return value
    if value is None or str(value).strip().lower() in ("zero", "0", "0.0"):
        return ZeroTemperature()
    try:
        t = float(value)
    except ValueError:
        raise ValueError(f"temperature {value!r} is neither 'zero' nor a number") from None
    if not (t > 0 and math.isfinite(t)):
        raise ValueError(f"temperature must be positive, got {value!r}")
    return InverseTemperature(1.0 / t)


def check_separation(r, params: ChainParams | None = None) -> int:
    if isinstance(r, bool) or int(r) != r:
        raise ValueError(f"separation must be an integer, got {r!r}")
    r = int(r)
    upper = params.half_width if params is not None else None
    if r < 1 or (upper is not None and r > upper):
        raise ValueError(f"separation r={r} outside [1, {upper if upper else 'M'}]")
    return r


def check_workers(value) -> int:
    w = int(value)
    if w < 1:
        raise ValueError(f"worker count must be >= 1, got {value!r}")
    return w


def check_grid(X) -> np.ndarray:
    """Accept a 1-D array or an (n, 1) column of parameter values."""
    from sklearn.utils import check_array

    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    arr = check_array(arr, ensure_2d=True, dtype=float)
    if arr.shape[1] != 1:
        raise ValueError(f"expected a single parameter column, got shape {arr.shape}")
    return arr[:, 0]


def preset_params(
    model: str | None = None,
    gamma: float | None = None,
    lam: float = 0.0,
    alpha: float | None = None,
    n_sites: int = 2001,
    temperature=None,
) -> ChainParams:
    """ChainParams from a model preset with explicit overrides."""
    if model is not None and model not in MODEL_PRESETS:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(MODEL_PRESETS)}")
    base = dict(MODEL_PRESETS[model or "ising"])
    if gamma is not None:
        base["gamma"] = gamma
    if alpha is not None:
        base["alpha"] = alpha
    return ChainParams(
        gamma=float(base["gamma"]),
        lam=float(lam),
        alpha=float(base["alpha"]),
        n_sites=n_sites,
        temperature=parse_temperature(temperature),
    )
