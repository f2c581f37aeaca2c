"""Evaluation of named observables at one parameter point."""

from __future__ import annotations

import math

from .correlators import bloch_from_window, g_window
from .model import ChainParams
from .quantumness import (
    coherence_l1,
    coherence_re,
    concurrence,
    sqc_closed_l1,
    sqc_closed_re,
    sqc_paper_l1,
    state_from_bloch,
)

__all__ = [
    "MEASURES",
    "CSV_COLUMNS",
    "AXES",
    "DERIVATIVE_STEP",
    "axis_field",
    "with_axis",
    "scalar_measure",
    "evaluate_point",
]

MEASURES = (
    "sqc_l1",
    "sqc_re",
    "d_sqc_l1_dlambda",
    "d_sqc_re_dlambda",
    "two_spin_coherence_l1",
    "two_spin_coherence_re",
    "concurrence",
    "bloch_components",
)

CSV_COLUMNS = (
    "lambda",
    "gamma",
    "alpha",
    "N",
    "r",
    "sqc_l1",
    "sqc_re",
    "d_sqc_l1_dlambda",
    "d_sqc_re_dlambda",
    "t_0z",
    "t_xx",
    "t_yy",
    "t_zz",
    "concurrence",
    "coh2_l1",
    "coh2_re",
    "error",
)

AXES = {"lambda": "lam", "gamma": "gamma", "alpha": "alpha"}

DERIVATIVE_STEP = 1e-6


def axis_field(axis: str) -> str:
    try:
        return AXES[axis]
    except KeyError:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {sorted(AXES)}") from None


def with_axis(params: ChainParams, axis: str, value: float) -> ChainParams:
    return params.replace(**{axis_field(axis): float(value)})


def _tensor(params: ChainParams, r: int):
    return bloch_from_window(params, g_window(params, r))


def scalar_measure(params: ChainParams, r: int, measure: str, paper_form_l1: bool = False) -> float:
    """A single observable as a plain float; used by refinement loops."""
    if measure in ("d_sqc_l1_dlambda", "d_sqc_re_dlambda"):
        base = "sqc_l1" if "l1" in measure else "sqc_re"
        h = DERIVATIVE_STEP
        up = scalar_measure(params.replace(lam=params.lam + h), r, base, paper_form_l1)
        down = scalar_measure(params.replace(lam=params.lam - h), r, base, paper_form_l1)
        return (up - down) / (2 * h)
    t = _tensor(params, r)
    if measure == "sqc_l1":
        return sqc_paper_l1(t) if paper_form_l1 else sqc_closed_l1(t)
    if measure == "sqc_re":
        return sqc_closed_re(t)
    if measure in ("t_0z", "t_xx", "t_yy", "t_zz"):
        return getattr(t, measure)
    state = state_from_bloch(t)
    if measure in ("two_spin_coherence_l1", "coh2_l1"):
        return coherence_l1(state, "z")
    if measure in ("two_spin_coherence_re", "coh2_re"):
        return coherence_re(state, "z")
    if measure == "concurrence":
        return concurrence(state)
    raise ValueError(f"unknown measure {measure!r}")


def evaluate_point(
    params: ChainParams,
    r: int,
    measures=("sqc_l1", "sqc_re"),
    paper_form_l1: bool = False,
) -> dict:
    """One CSV-shaped row. Failures are recorded in ``error`` instead of raised."""
    row: dict = {c: None for c in CSV_COLUMNS}
    row["lambda"] = params.lam
    row["gamma"] = params.gamma
    row["alpha"] = params.alpha
    row["N"] = params.n_sites
    row["r"] = r
    if paper_form_l1:
        row["sqc_l1_paper"] = None
    unknown = set(measures) - set(MEASURES)
    if unknown:
        raise ValueError(f"unknown measures {sorted(unknown)}")
    try:
        t = _tensor(params, r)
        if "sqc_l1" in measures:
            row["sqc_l1"] = sqc_closed_l1(t)
            if paper_form_l1:
                row["sqc_l1_paper"] = sqc_paper_l1(t)
        if "sqc_re" in measures:
            row["sqc_re"] = sqc_closed_re(t)
        if "bloch_components" in measures:
            row.update(t_0z=t.t_0z, t_xx=t.t_xx, t_yy=t.t_yy, t_zz=t.t_zz)
        wants_state = {"two_spin_coherence_l1", "two_spin_coherence_re", "concurrence"} & set(measures)
        if wants_state:
            state = state_from_bloch(t)
            if "two_spin_coherence_l1" in measures:
                row["coh2_l1"] = coherence_l1(state, "z")
            if "two_spin_coherence_re" in measures:
                row["coh2_re"] = coherence_re(state, "z")
            if "concurrence" in measures:
                row["concurrence"] = concurrence(state)
        for name in ("d_sqc_l1_dlambda", "d_sqc_re_dlambda"):
            if name in measures:
                row[name] = scalar_measure(params, r, name)
    except (ArithmeticError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    for key, value in row.items():
        if isinstance(value, float) and not math.isfinite(value):
            row["error"] = row["error"] or f"non-finite {key}"
    return row
