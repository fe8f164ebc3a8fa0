import cmath
import math

import numpy as np
import pytest

from burgesspy.arith import factorize
from burgesspy.characters import (
    CharacterComponent,
    DirichletCharacter,
    RationalFunctionPair,
    UnityRoot,
    conductor,
    enumerate_characters,
    induced_primitive,
    is_primitive,
    mixed_eval,
    quadratic_character,
    value_table,
)
from burgesspy.errors import ModulusTooLarge, NotPrime
from tests import performance_params

MODULI = [1, 2, 3, 4, 5, 8, 9, 12, 16, 25, 27, 32, 45, 60, 63, 105]
ALL_MODULI = performance_params(range(1, 201), 60)


def _brute_conductor(chi):
    q = chi.q
    for d in factorize(q).divisors():
        if all(
            chi.exponent(n) == 0
            for n in range(1, q)
            if math.gcd(n, q) == 1 and n % d == 1 % d
        ):
            return d
    raise AssertionError("unreachable")


def _primitive_count(q):
    count = 1
    for p, k in factorize(q):
        if k == 1:
            count *= p - 2
        else:
            count *= p ** (k - 2) * (p - 1) ** 2
    return count


def test_unity_root():
    minus_one = UnityRoot.root(1, 2)
    assert minus_one * minus_one == UnityRoot.root(0, 1)
    assert complex(minus_one) == -1
    assert complex(UnityRoot.root(1, 4)) == 1j
    assert complex(UnityRoot.root(3, 4)) == -1j
    assert UnityRoot.root(2, 6) == UnityRoot.root(1, 3)
    assert UnityRoot.root(7, 6) == UnityRoot.root(1, 6)
    assert UnityRoot.root(1, 3).conjugate() == UnityRoot.root(2, 3)
    assert UnityRoot.zero() * UnityRoot.root(1, 3) == UnityRoot.zero()
    assert complex(UnityRoot.zero()) == 0
    assert UnityRoot.root(1, 3).exponent == UnityRoot.root(4, 3).exponent
    third = cmath.exp(2j * math.pi / 3)
    assert np.isclose(complex(UnityRoot.root(1, 3)), third)
    assert repr(UnityRoot.root(1, 3)) == "Root(1/3)"
    assert repr(UnityRoot.zero()) == "Zero"


@pytest.mark.parametrize(
    "p,k", [(2, 1), (2, 2), (2, 3), (2, 5), (3, 3), (7, 2)]
)
def test_component_logs(p, k):
    component = CharacterComponent(p, k)
    m = p ** k
    for n in range(m):
        if n % p == 0:
            continue
        value = 1
        for axis, e in zip(component.axes, component.logs(n)):
            assert 0 <= e < axis.order
            value = value * pow(axis.generator, e, m) % m
        assert value == n % m


@pytest.mark.parametrize("q", MODULI)
def test_group_size_and_labels(q):
    group = enumerate_characters(q)
    assert len(group) == factorize(q).phi()
    indices = [chi.index for chi in group]
    assert indices == list(range(len(group)))
    assert group[0].is_principal()
    assert len(set(group)) == len(group)


@pytest.mark.parametrize("q", MODULI)
def test_multiplicative_and_periodic(q):
    for chi in enumerate_characters(q)[:12]:
        for m in range(1, min(q, 20) + 1):
            for n in range(1, min(q, 20) + 1):
                assert chi(m * n) == chi(m) * chi(n)
            assert chi(m + q) == chi(m)
            assert chi(m).is_zero == (math.gcd(m, q) > 1)


def _spread_over_subgroup(exponents, D, m):
    # exponents hit each multiple of D/m equally often
    counts = np.bincount(exponents, minlength=D)
    support = np.nonzero(counts)[0]
    return (
        D % m == 0
        and support.tolist() == list(range(0, D, D // m))
        and len(set(counts[support].tolist())) == 1
    )


@pytest.mark.parametrize("q", ALL_MODULI)
def test_multiplicative_exact(q):
    n = np.arange(q, dtype=np.int64)
    products = np.outer(n, n) % q
    for chi in enumerate_characters(q):
        e = chi.exponent_table()
        assert e.tolist() == [chi.exponent(m) for m in range(q)]
        units = e >= 0
        expected = np.where(
            units[:, None] & units[None, :],
            (e[:, None] + e[None, :]) % chi.denominator,
            -1,
        )
        assert np.array_equal(e[products], expected)


@pytest.mark.parametrize("q", ALL_MODULI)
def test_orthogonality_exact(q):
    group = enumerate_characters(q)
    D = group[0].denominator
    tables = np.array([chi.exponent_table() for chi in group])
    # sum over n of chi(n): phi(q) for the principal character, else 0
    for chi, row in zip(group, tables):
        units = row[row >= 0]
        assert len(units) == len(group)
        assert chi.denominator == D
        assert (chi.order() == 1) == chi.is_principal()
        assert _spread_over_subgroup(units, D, chi.order())
    # sum over chi of chi(n): phi(q) for n = 1 mod q, else 0
    for n in range(q):
        column = tables[:, n]
        if math.gcd(n, q) > 1:
            assert (column == -1).all()
            continue
        m = len(np.unique(column))
        if n % q == 1 % q:
            assert column.tolist() == [0] * len(group)
        else:
            assert m >= 2
        assert _spread_over_subgroup(column, D, m)


@pytest.mark.parametrize("q", MODULI)
def test_conductor(q):
    for chi in enumerate_characters(q):
        assert conductor(chi) == _brute_conductor(chi)
        assert chi.conductor() == conductor(chi)
        assert is_primitive(chi) == (conductor(chi) == q)


@pytest.mark.parametrize("q", [3, 4, 8, 9, 12, 16, 25, 45, 60])
def test_primitive_count(q):
    group = enumerate_characters(q)
    assert len(list(group.primitive())) == _primitive_count(q)


@pytest.mark.parametrize("q", [12, 16, 45, 63])
def test_induced_primitive(q):
    for chi in enumerate_characters(q):
        star = induced_primitive(chi)
        assert star.q == conductor(chi)
        assert star.is_primitive()
        for n in range(1, 2 * q):
            if math.gcd(n, q) == 1:
                assert star(n) == chi(n)


def test_conductor_example():
    chi = DirichletCharacter(12, [[0], [1]])
    assert conductor(chi) == 3
    assert not chi.is_primitive()


@pytest.mark.parametrize("p", [3, 7, 11, 101])
def test_quadratic_character(p):
    chi = quadratic_character(p)
    assert chi.order() == 2
    assert chi.is_primitive()
    for n in range(1, p):
        euler = pow(n, (p - 1) // 2, p)
        assert complex(chi(n)) == (1 if euler == 1 else -1)


@pytest.mark.parametrize("p", [2, 15])
def test_quadratic_character_rejects(p):
    with pytest.raises(NotPrime):
        quadratic_character(p)


@pytest.mark.parametrize("q", [1, 7, 24, 100])
def test_value_table(q):
    for chi in enumerate_characters(q)[:6]:
        table = value_table(chi)
        assert table.shape == (q,)
        for n in range(q):
            assert table[n] == chi.exponent(n)


def test_order():
    chi = DirichletCharacter(7, [[2]])
    assert chi.order() == 3
    value = UnityRoot.root(0, 1)
    for _ in range(3):
        value = value * chi(3)
    assert value == UnityRoot.root(0, 1)


def test_character_rejects():
    with pytest.raises(ValueError):
        DirichletCharacter(7, [[6]])
    with pytest.raises(ValueError):
        DirichletCharacter(12, [[0]])
    with pytest.raises(ValueError):
        DirichletCharacter.from_index(7, 6)
    with pytest.raises(ModulusTooLarge):
        DirichletCharacter.from_index(10 ** 7 + 19, 0)


def test_rational_function_pair():
    # f(x) = (x^2 + 1) / x, g(x) = x
    pair = RationalFunctionPair(5, f_num=[1, 0, 1], f_den=[0, 1], g_num=[0, 1])
    assert pair.f_value(0) is None
    assert pair.f_value(2) == (5 * pow(2, -1, 5)) % 5
    assert pair.g_value(3) == 3
    assert not pair.is_degenerate()


@pytest.mark.parametrize(
    "f_num,f_den,g_num,g_den,expected",
    [
        ([3], [1], [], [1], True),
        ([2, 2], [1, 1], [4, 1], [1], True),
        ([0, 1], [1], [], [1], False),
        ([3], [1], [0, 0, 1], [1], False),
        ([3], [1], [0, 0, 1], [0, 1], True),
        ([3], [1], [1], [0, 1], False),
    ],
)
def test_is_degenerate(f_num, f_den, g_num, g_den, expected):
    pair = RationalFunctionPair(7, f_num, f_den, g_num, g_den)
    assert pair.is_degenerate() == expected


def test_mixed_eval():
    p = 11
    chi = quadratic_character(p)
    pair = RationalFunctionPair(p, f_num=[1, 1], g_num=[0, 0, 1])
    for n in range(3 * p):
        value = mixed_eval(chi, pair, n)
        f = (n + 1) % p
        if f == 0:
            assert value.is_zero
            continue
        expected = complex(chi(f)) * cmath.exp(2j * math.pi * (n * n % p) / p)
        assert np.isclose(complex(value), expected)
    with pytest.raises(ValueError):
        mixed_eval(DirichletCharacter(13, [[1]]), pair, 1)
