import math

import pytest

from sqcchain.measures import CSV_COLUMNS, MEASURES, evaluate_point, scalar_measure, with_axis
from sqcchain.model import ChainParams


P = ChainParams(1.0, 0.7, 0.0, 201)


def test_row_schema_and_missing_fields():
    row = evaluate_point(P, 2, ("sqc_l1",))
    assert list(row)[: len(CSV_COLUMNS)] == list(CSV_COLUMNS)
    assert row["sqc_re"] is None and row["error"] is None
    assert row["N"] == 201 and row["r"] == 2 and row["lambda"] == 0.7


def test_all_measures_populate():
    row = evaluate_point(P, 2, MEASURES, paper_form_l1=True)
    for key in ("sqc_l1", "sqc_re", "d_sqc_l1_dlambda", "d_sqc_re_dlambda", "t_0z", "t_xx", "t_yy",
                "t_zz", "concurrence", "coh2_l1", "coh2_re", "sqc_l1_paper"):
        assert row[key] is not None and math.isfinite(row[key]), key


def test_scalar_measure_consistency():
    row = evaluate_point(P, 3, MEASURES)
    for name, key in (("sqc_l1", "sqc_l1"), ("two_spin_coherence_l1", "coh2_l1"), ("concurrence", "concurrence"),
                      ("t_xx", "t_xx")):
        assert scalar_measure(P, 3, name) == pytest.approx(row[key], abs=1e-15)


def test_errors_go_to_error_column():
    row = evaluate_point(ChainParams(1.0, 0.7, 0.0, 5), 4, ("sqc_l1",))
    assert row["error"] and row["sqc_l1"] is None
    with pytest.raises(ValueError):
        evaluate_point(P, 1, ("nope",))
    with pytest.raises(ValueError):
        scalar_measure(P, 1, "nope")


def test_with_axis():
    assert with_axis(P, "gamma", 0.3).gamma == 0.3
    assert with_axis(P, "alpha", 0.2).alpha == 0.2
    with pytest.raises(ValueError):
        with_axis(P, "beta", 1.0)
