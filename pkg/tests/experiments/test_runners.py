import math
import os

import numpy as np
import pytest

from burgesspy.errors import HardCheckFailed, InsufficientSpread
from burgesspy.experiments import (
    ExperimentConfig,
    ReportRow,
    burgess_exponent,
    count_large_values,
    dyadic_classify,
    fit_exponent,
    has_hard_failure,
    raise_for_hard_failures,
    run_chain_check,
    run_lemma_check,
    run_theorem_check,
    theorem_exponent,
)
from burgesspy.experiments.runners import (
    NO_CHARACTER,
    ORACLE_MISMATCH,
    hypothesis_flags,
)
from burgesspy.logger import BurgessLogger


def _explicit(moduli, **params):
    return ExperimentConfig(
        moduli_family="explicit_list", moduli=moduli, **params
    )


def test_theorem_exponents():
    assert np.isclose(theorem_exponent(2, 0.3), 2.025)
    assert np.isclose(theorem_exponent(1, 0.7), 1.5)
    assert np.isclose(burgess_exponent(2, 0.3), 0.3375)
    assert np.isclose(burgess_exponent(1, 0.7), 0.5)


@pytest.mark.parametrize(
    "q,r,H,expected",
    [
        (100, 1, 5, ["hyp_i"]),
        (100, 1, 11, ["hyp_i", "hyp_ii", "hyp_iii"]),
        (1000, 4, 10, ["hypothesis_violated"]),
        (1001, 4, 10, ["hyp_iii"]),
        (1000, 2, 10, ["hyp_ii"]),
        (1001, 2, 5, ["hypothesis_violated"]),
    ],
)
def test_hypothesis_flags(q, r, H, expected):
    assert hypothesis_flags(q, r, H) == expected


def test_count_large_values():
    # threshold q^{1/2 - eps} at r = 1
    assert count_large_values([10.0, 9.9, 11.0], 50, 100, 1, 0.0) == 2
    assert count_large_values([10.0, 9.9, 11.0], 50, 100, 1, 0.5) == 3
    assert count_large_values([], 50, 100, 1, 0.0) == 0


def test_dyadic_classify():
    assert dyadic_classify([3.0, 1.2, 0.0], 2) == {16: 1, 2: 1, 1: 1}
    assert dyadic_classify([2.0, 4.0, 4.5], 1) == {2: 1, 4: 1, 8: 1}
    with pytest.raises(ValueError):
        dyadic_classify([-1.0], 1)


def _synthetic_rows(moduli, exponent, J=1, r=1):
    return [
        ReportRow(q, 1, r, 10, 0, J, 5.0 * q ** exponent, 1.0)
        for q in moduli
    ]


def test_fit_exponent():
    rows = _synthetic_rows([10 ** 3, 10 ** 4, 10 ** 5], 1.5)
    rows.append(ReportRow(10 ** 6, 1, 1, 10, 0, 1, math.nan, 1.0))
    slope, intercept = fit_exponent(rows)
    assert np.isclose(slope, 1.5)
    assert np.isclose(intercept, math.log(5.0))
    slope, _ = fit_exponent(rows, "max")
    assert np.isclose(slope, 0.5)


def test_fit_exponent_rejects():
    with pytest.raises(InsufficientSpread):
        fit_exponent(_synthetic_rows([10 ** 3, 10 ** 5], 1.0))
    with pytest.raises(InsufficientSpread):
        fit_exponent(_synthetic_rows([1000, 2000, 3000], 1.0))
    with pytest.raises(ValueError):
        fit_exponent(_synthetic_rows([10 ** 3, 10 ** 4, 10 ** 5], 1.0), "x")


def test_has_hard_failure():
    ok = ReportRow(101, 1, 1, 10, 0, 3, 1.0, 1.0, flags=["oracle_ok"])
    bad = ReportRow(101, 2, 1, 10, 0, 3, 1.0, 1.0, flags=[ORACLE_MISMATCH])
    assert not has_hard_failure([ok])
    assert has_hard_failure([ok, bad])
    raise_for_hard_failures([ok])
    with pytest.raises(HardCheckFailed, match="q=101 chi=2"):
        raise_for_hard_failures([ok, bad])


def test_run_theorem_check():
    config = _explicit([1009, 10007, 100003], J=3, seed=1)
    rows = run_theorem_check(config)
    assert [row.q for row in rows] == [1009, 10007, 100003]
    for row in rows:
        assert row.lhs > 0
        assert row.rhs > 0
        assert row.P > 0
        assert row.has_flag("large_values")
        assert row.has_flag("hyp_ii")
        assert all(math.isnan(v) for v in row.chain_ratios)
    assert run_theorem_check(config) == rows


@pytest.mark.parametrize("r", [1, 2, 3])
def test_run_theorem_check_sweep(r):
    config = _explicit(
        [1009, 3001, 10007, 30011, 100003],
        r=r,
        J=3,
        eps_slack=0.25,
        characters_per_q=2,
        seed=0,
    )
    rows = run_theorem_check(config)
    assert len(rows) == 10
    assert not has_hard_failure(rows)
    for row in rows:
        assert math.isfinite(row.ratio)
        assert row.ratio <= 100.0
    slope, _ = fit_exponent(rows, "lhs")
    assert slope <= theorem_exponent(r, 1.0 / (2 * r) + 0.3) + 0.1


def test_run_theorem_check_with_logger(tmp_path):
    config = _explicit([1009, 10007], J=2)
    logger = BurgessLogger(
        "theorem", root_dir=str(tmp_path), with_timestamp=False
    )
    rows = run_theorem_check(config, logger=logger)
    logger.close()
    data = np.loadtxt(
        os.path.join(logger.logdir, "ratio.csv"), delimiter=",", ndmin=2
    )
    assert data.shape[0] == len(rows)
    assert os.path.exists(os.path.join(logger.logdir, "time_row.csv"))


def test_run_theorem_check_failures():
    config = _explicit([2, 211], J=20)
    rows = run_theorem_check(config)
    no_character, too_many = rows
    assert no_character.chi == -1
    assert no_character.has_flag(NO_CHARACTER)
    assert math.isnan(no_character.lhs)
    # 20 points spaced by H do not fit below 211
    assert too_many.has_flag("SpacingViolated")
    assert math.isnan(too_many.ratio)


def test_run_chain_check():
    config = _explicit([211], J=3, oracle=True)
    rows = run_chain_check(config)
    assert len(rows) == 1
    row = rows[0]
    assert row.P == 29
    assert row.has_flag("p_oversized")
    assert row.has_flag("oracle_ok")
    assert not has_hard_failure(rows)
    assert row.lhs <= row.rhs
    assert all(v >= 0 for v in row.chain_ratios)


def test_run_chain_check_quadratic():
    config = _explicit([211, 307], J=2, character_kind="quadratic")
    rows = run_chain_check(config)
    assert len(rows) == 2
    assert not has_hard_failure(rows)
    for row in rows:
        assert row.lhs <= row.rhs


def test_run_lemma_check():
    config = _explicit([1009, 10007], J=3, r=1)
    rows = run_lemma_check(config)
    assert len(rows) == 2
    for row in rows:
        assert row.r == 1
        assert row.lhs > 0
        assert math.isfinite(row.ratio)
    # 3^6 <= 1009
    short = run_lemma_check(_explicit([1009], J=3, r=3, H_rule="3"))
    assert short[0].has_flag("HTooSmall")
