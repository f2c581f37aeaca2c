"""scikit-learn style wrappers around the sweep and detector functions.

Inputs ``X`` are columns of values of one chain parameter (the sweep axis);
every other parameter is a constructor hyper-parameter, so ``get_params`` /
``set_params`` and grid searches over model settings work as usual.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .criticality import (
    SweepSpec,
    SweepTable,
    detect_boundaries,
    detect_cusp,
    detect_jump,
    measure_function,
    sweep,
)
from .measures import scalar_measure
from .validation import check_grid, check_separation, parse_measures, preset_params

__all__ = ["SqcTransformer", "CuspLocator", "JumpLocator", "BoundaryLocator"]


class _ChainEstimator(BaseEstimator):
    """Shared hyper-parameters: the fixed chain couplings and the swept axis."""

    def __init__(self, gamma=1.0, alpha=0.0, lam=0.0, n_sites=2001, r=1, axis="lambda",
                 temperature="zero", workers=1):
        self.gamma = gamma
        self.alpha = alpha
        self.lam = lam
        self.n_sites = n_sites
        self.r = r
        self.axis = axis
        self.temperature = temperature
        self.workers = workers

    def _base_params(self):
        params = preset_params(None, self.gamma, self.lam, self.alpha, self.n_sites, self.temperature)
        check_separation(self.r, params)
        return params

    def _table(self, grid, measures) -> SweepTable:
        grid = np.asarray(grid, dtype=float)
        steps = np.diff(grid)
        if grid.size < 2 or not (steps > 0).all():
            raise ValueError("parameter grid must be strictly increasing with >= 2 points")
        spec = SweepSpec(self._base_params(), self.axis, float(grid[0]), float(grid[-1]),
                         grid.size, int(self.r), tuple(measures))
        if not np.allclose(spec.grid(), grid, rtol=0, atol=1e-12 * max(1.0, np.abs(grid).max())):
            raise ValueError("parameter grid must be uniform")
        return sweep(spec, self.workers)


class SqcTransformer(TransformerMixin, _ChainEstimator):
    """Map parameter values to observables.

    Parameters
    ----------
    measures : str or sequence of str
        Any of the scalar measure names, e.g. ``"sqc_l1,sqc_re"``.
    paper_form_l1 : bool
        Use the printed l1 closed form instead of the sign-robust one.
    """

    def __init__(self, gamma=1.0, alpha=0.0, lam=0.0, n_sites=2001, r=1, axis="lambda",
                 temperature="zero", workers=1, measures="sqc_l1,sqc_re", paper_form_l1=False):
        super().__init__(gamma, alpha, lam, n_sites, r, axis, temperature, workers)
        self.measures = measures
        self.paper_form_l1 = paper_form_l1

    def fit(self, X, y=None):
        check_grid(X)
        self._base_params()
        self.measures_ = tuple(m for m in parse_measures(self.measures) if m != "bloch_components")
        if not self.measures_:
            raise ValueError("bloch_components is not a scalar; request t_* via the CLI instead")
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "measures_")
        values = check_grid(X)
        base = self._base_params()
        spec = SweepSpec(base, self.axis, 0.0, 1.0, 2, int(self.r), self.measures_)
        out = np.empty((values.size, len(self.measures_)))
        for i, v in enumerate(values):
            params = spec.params_at(float(v))
            for j, m in enumerate(self.measures_):
                out[i, j] = scalar_measure(params, spec.r, m, self.paper_form_l1)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "measures_")
        return np.array(self.measures_, dtype=object)


class CuspLocator(_ChainEstimator):
    """Fit on a uniform parameter grid; ``location_`` is the refined cusp."""

    def __init__(self, gamma=1.0, alpha=0.0, lam=0.0, n_sites=2001, r=100, axis="lambda",
                 temperature="zero", workers=1, measure="sqc_l1", near=None, tol=1e-12):
        super().__init__(gamma, alpha, lam, n_sites, r, axis, temperature, workers)
        self.measure = measure
        self.near = near
        self.tol = tol

    def fit(self, X, y=None):
        table = self._table(check_grid(X), (self.measure,))
        self.result_ = detect_cusp(table, self.measure, near=self.near, tol=self.tol)
        self.found_ = bool(self.result_)
        self.location_ = self.result_.location if self.found_ else np.nan
        self.refinement_width_ = self.result_.refinement_width if self.found_ else np.nan
        self.table_ = table
        return self

    def predict(self, X=None):
        check_is_fitted(self, "result_")
        return self.location_


class JumpLocator(_ChainEstimator):
    """Derivative-discontinuity detector on ``d_sqc_*_dlambda`` columns."""

    def __init__(self, gamma=1.0, alpha=0.0, lam=0.0, n_sites=2001, r=1, axis="lambda",
                 temperature="zero", workers=1, measure="d_sqc_l1_dlambda", threshold=10.0):
        super().__init__(gamma, alpha, lam, n_sites, r, axis, temperature, workers)
        self.measure = measure
        self.threshold = threshold

    def fit(self, X, y=None):
        table = self._table(check_grid(X), (self.measure,))
        self.result_ = detect_jump(table, self.measure, threshold=self.threshold)
        self.found_ = bool(self.result_)
        self.location_ = self.result_.location if self.found_ else np.nan
        self.jump_magnitude_ = self.result_.jump_magnitude if self.found_ else np.nan
        self.table_ = table
        return self

    def predict(self, X=None):
        check_is_fitted(self, "result_")
        return self.location_


class BoundaryLocator(_ChainEstimator):
    """Plateau edges and curvature features along one column of a phase diagram."""

    def __init__(self, gamma=0.0, alpha=0.8, lam=0.0, n_sites=2001, r=100, axis="lambda",
                 temperature="zero", workers=1, measure="sqc_l1", threshold=10.0):
        super().__init__(gamma, alpha, lam, n_sites, r, axis, temperature, workers)
        self.measure = measure
        self.threshold = threshold

    def fit(self, X, y=None):
        table = self._table(check_grid(X), (self.measure,))
        self.boundaries_ = detect_boundaries(
            table, self.measure, measure_function(table.spec, self.measure), threshold=self.threshold
        )
        self.locations_ = np.array([b.location for b in self.boundaries_])
        self.table_ = table
        return self

    def predict(self, X=None):
        check_is_fitted(self, "boundaries_")
        return self.locations_
