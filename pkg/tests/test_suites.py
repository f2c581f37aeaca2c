import pytest

import sqcchain.correlators as corr
from sqcchain.suites import SUITES, ed_crosscheck, levinson_dense, oracle_closed_form, run_suites


def test_quick_suites_pass():
    for result in run_suites(["thermodynamic_goldens", "analytic_derivatives"]):
        assert result.passed, result.as_dict()


def test_oracle_suite_small():
    assert oracle_closed_form(count=200).passed


def test_levinson_suite_small():
    result = levinson_dense(count=100)
    assert result.passed and result.checks + result.skipped == 100


def test_ed_suite_passes():
    result = ed_crosscheck(sizes=(7, 9))
    assert result.passed, result.as_dict()


def test_ed_suite_catches_yy_sign_error(monkeypatch):
    original = corr.yy_correlator
    monkeypatch.setattr(corr, "yy_correlator", lambda g: -original(g))
    result = ed_crosscheck(sizes=(7, 9))
    assert not result.passed
    assert result.failures


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites(["nope"])
    assert set(SUITES) >= {"oracle_closed_form", "levinson_dense", "ed_crosscheck"}
