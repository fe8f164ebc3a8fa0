import math

import numpy as np
import pytest

from burgesspy.arith import is_prime
from burgesspy.characters import (
    DirichletCharacter,
    RationalFunctionPair,
    enumerate_characters,
    quadratic_character,
)
from burgesspy.context import budget
from burgesspy.errors import (
    BudgetExceeded,
    NotPrimitive,
    OverlapDetected,
    SpacingViolated,
)
from burgesspy.experiments.sampling import sample_spaced_family
from burgesspy.meanvalue import (
    MomentReport,
    check_spacing,
    disjoint_report,
    disjoint_second_moment,
    lemma1_report,
    lemma2_report,
    lemma3_report,
    moment_full,
    moment_max,
    moment_reports,
    polya_vinogradov_max,
    polya_vinogradov_report,
    spaced_max_moment,
)
from burgesspy.sums import (
    build_mixed_prefix,
    build_prefix,
    interval_sum,
    max_partials,
)
from tests import performance_params, performance_test


def test_moment_full_example():
    table = build_prefix(quadratic_character(7))
    assert np.isclose(moment_full(table, 2, 1), 10.0)


@pytest.mark.parametrize("p", [11, 53, 101])
@pytest.mark.parametrize("h", [1, 4, 10])
def test_second_moment_closed_form(p, h):
    # sum_n |S(n;h)|^2 = h (p - h) for a non-principal character mod p
    for index in (1, (p - 1) // 2, p - 2):
        table = build_prefix(DirichletCharacter.from_index(p, index))
        assert np.isclose(moment_full(table, h, 1), h * (p - h))


@pytest.mark.parametrize("r", [1, 2, 3])
def test_moment_full_brute(r):
    chi = DirichletCharacter.from_index(45, 7)
    table = build_prefix(chi)
    expected = sum(
        abs(interval_sum(table, n, 6)) ** (2 * r) for n in range(1, 46)
    )
    assert np.isclose(moment_full(table, 6, r), expected)


def test_moment_max_dominates_full():
    table = build_prefix(DirichletCharacter.from_index(97, 5))
    for r in (1, 2):
        assert moment_max(table, 12, r) >= moment_full(table, 12, r) - 1e-9
    expected = float(np.sum(max_partials(table, np.arange(1, 98), 12) ** 4))
    assert np.isclose(moment_max(table, 12, 2), expected)


def test_moment_rejects():
    table = build_prefix(quadratic_character(7))
    with pytest.raises(ValueError):
        moment_full(table, 2, 0)
    with pytest.raises(ValueError):
        moment_max(table, 2, 0)
    with budget(10):
        with pytest.raises(BudgetExceeded):
            moment_full(table, 2, 1)


def test_check_spacing():
    check_spacing([0, 10, 20], 10, 30)
    check_spacing([], 10, 30)
    with pytest.raises(SpacingViolated):
        check_spacing([0, 9], 10, 30)
    with pytest.raises(SpacingViolated):
        check_spacing([5, 3], 1, 30)
    with pytest.raises(ValueError):
        check_spacing([0, 30], 10, 30)


def test_spaced_max_moment():
    chi = DirichletCharacter.from_index(101, 21)
    table = build_prefix(chi)
    points = [3, 30, 57, 90]
    maxima = [
        max(abs(interval_sum(table, N, h)) for h in range(1, 11))
        for N in points
    ]
    expected = sum(m ** 2 for m in maxima)
    assert np.isclose(spaced_max_moment(table, points, 10, 1), expected)
    with pytest.raises(SpacingViolated):
        spaced_max_moment(table, [0, 5], 10, 1)


def test_disjoint_second_moment():
    table = build_prefix(DirichletCharacter.from_index(53, 10))
    intervals = [(20, 5), (0, 10), (30, 23)]
    expected = sum(abs(interval_sum(table, M, h)) ** 2 for M, h in intervals)
    assert np.isclose(disjoint_second_moment(table, intervals), expected)
    # touching intervals are disjoint
    disjoint_second_moment(table, [(0, 10), (10, 10)])
    with pytest.raises(OverlapDetected):
        disjoint_second_moment(table, [(0, 10), (9, 3)])
    with pytest.raises(ValueError):
        disjoint_second_moment(table, [(50, 5)])


@pytest.mark.parametrize("q", [7, 11, 25, 101])
def test_polya_vinogradov_max(q):
    for index in range(1, 6):
        chi = DirichletCharacter.from_index(q, index)
        if not chi.is_primitive():
            continue
        expected = max(
            abs(sum(complex(chi(n)) for n in range(1, N + 1)))
            for N in range(1, q + 1)
        )
        table = build_prefix(chi)
        assert np.isclose(polya_vinogradov_max(table), expected)
        assert expected <= math.sqrt(q) * math.log(q)


@performance_test
def test_polya_vinogradov_all_moduli():
    for q in range(3, 400):
        for chi in enumerate_characters(q):
            if not chi.is_primitive():
                continue
            value = polya_vinogradov_max(build_prefix(chi))
            assert value <= math.sqrt(q) * math.log(q)


def test_polya_vinogradov_rejects():
    with pytest.raises(NotPrimitive):
        polya_vinogradov_max(build_prefix(DirichletCharacter(12, [[0], [1]])))
    pair = RationalFunctionPair(11, g_num=[0, 0, 1])
    mixed = build_mixed_prefix(quadratic_character(11), pair)
    with pytest.raises(NotPrimitive):
        polya_vinogradov_max(mixed)


def test_moment_report():
    report = MomentReport("full_moment", 101, 1, 5, 20.0, 505.0, True)
    assert np.isclose(report.ratio, 20.0 / 505.0)
    params = report.get_params()
    assert params["name"] == "full_moment"
    assert params["hypothesis"]
    assert np.isclose(params["ratio"], report.ratio)
    # float noise below zero is clipped
    assert MomentReport("x", 7, 1, 1, -1e-12, 1.0, True).lhs == 0.0


def test_lemma_reports():
    table = build_prefix(DirichletCharacter.from_index(101, 3))
    r1 = lemma1_report(table, 8, 1)
    assert r1.name == "full_moment"
    assert np.isclose(r1.lhs, 8 * 93)
    assert np.isclose(r1.rhs_shape, 101 * 8)
    assert r1.ratio <= 1.0
    r2 = lemma2_report(table, 8, 2, eps=0.1)
    assert r2.name == "maximal_moment"
    shape = 101 * 8 ** 2 + math.sqrt(101) * 8 ** 4
    assert np.isclose(r2.rhs_shape, shape * 101 ** 0.1)
    assert r2.hypothesis
    # r = 4 needs a cube-free modulus
    cube = build_prefix(DirichletCharacter.from_index(125, 7))
    assert not lemma1_report(cube, 2, 4).hypothesis
    assert not lemma2_report(cube, 2, 4).hypothesis


def test_lemma_hypothesis_needs_primitive_plain_character():
    pair = RationalFunctionPair(11, g_num=[0, 0, 1])
    tables = [
        build_prefix(DirichletCharacter.from_index(101, 0)),
        build_prefix(DirichletCharacter(12, [[0], [1]])),
        build_mixed_prefix(quadratic_character(11), pair),
    ]
    for table in tables:
        assert not lemma1_report(table, 2, 1).hypothesis
        assert not lemma2_report(table, 2, 2).hypothesis
        assert not lemma3_report(table, [0, 5], 2).hypothesis
    table = build_prefix(DirichletCharacter.from_index(101, 3))
    assert lemma1_report(table, 2, 1).hypothesis
    assert lemma2_report(table, 2, 2).hypothesis
    assert lemma3_report(table, [0, 5], 2).hypothesis


@pytest.mark.parametrize("seed", performance_params(range(200), 50))
def test_lemma3_ratio(seed):
    rng = np.random.RandomState(seed)
    q = int(rng.randint(11, 10 ** 4))
    while not is_prime(q):
        q += 1
    chi = DirichletCharacter.from_index(q, int(rng.randint(1, q - 1)))
    H = int(rng.randint(1, q // 2 + 1))
    J = int(rng.randint(1, q // H + 1))
    family = sample_spaced_family(q, H, J, rng)
    report = lemma3_report(build_prefix(chi), list(family), H)
    assert report.hypothesis
    assert report.ratio <= 20.0


def test_lemma3_and_disjoint_reports():
    table = build_prefix(DirichletCharacter.from_index(211, 17))
    report = lemma3_report(table, [0, 50, 100, 150], 40)
    assert report.name == "spaced_moment"
    assert report.hypothesis
    assert report.lhs > 0
    assert np.isclose(report.rhs_shape, 211 * math.log(211) ** 2)
    disjoint = disjoint_report(table, [(0, 40), (50, 60)])
    assert disjoint.name == "disjoint_moment"
    assert disjoint.h == 60
    assert np.isclose(disjoint.rhs_shape, 211 ** 1.25)


def test_moment_reports():
    table = build_prefix(quadratic_character(101))
    names = [report.name for report in moment_reports(table, 5, 1)]
    assert names == ["full_moment", "maximal_moment", "polya_vinogradov"]
    report = polya_vinogradov_report(table)
    assert report.ratio <= 1.0
    principal = build_prefix(DirichletCharacter.from_index(101, 0))
    names = [report.name for report in moment_reports(principal, 5, 1)]
    assert names == ["full_moment", "maximal_moment"]
