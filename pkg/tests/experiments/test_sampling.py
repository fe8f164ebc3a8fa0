import numpy as np
import pytest

from burgesspy.characters import quadratic_character
from burgesspy.errors import SpacingViolated
from burgesspy.experiments import (
    ExperimentConfig,
    sample_spaced_family,
    select_characters,
    select_moduli,
)
from burgesspy.experiments.sampling import character_rng


@pytest.mark.parametrize(
    "family,q_range,n_moduli,expected",
    [
        ("primes", (100, 1000), 3, [101, 317]),
        ("primes", (100, 1000), 1, [101]),
        ("prime_squares", (100, 1000), 1, [121]),
        ("cube_full", (2, 30), 1, [8]),
        ("cube_free", (8, 9), 1, [9]),
    ],
)
def test_select_moduli(family, q_range, n_moduli, expected):
    config = ExperimentConfig(
        moduli_family=family, q_range=q_range, n_moduli=n_moduli
    )
    assert select_moduli(config) == expected


def test_select_moduli_explicit():
    config = ExperimentConfig(moduli_family="explicit_list", moduli=[7, 5, 7])
    assert select_moduli(config) == [5, 7]


def test_character_rng():
    a = character_rng(0, 101, 3).randint(1000, size=5)
    b = character_rng(0, 101, 3).randint(1000, size=5)
    c = character_rng(0, 101, 4).randint(1000, size=5)
    assert np.all(a == b)
    assert not np.all(a == c)


def test_select_characters_sampled():
    config = ExperimentConfig(characters_per_q=2)
    chars = select_characters(101, config, character_rng(0, 101))
    assert len(chars) == 2
    assert chars[0].index < chars[1].index
    assert all(chi.is_primitive() for chi in chars)
    again = select_characters(101, config, character_rng(0, 101))
    assert chars == again


def test_select_characters_without_primitive():
    # no primitive character has modulus 2
    config = ExperimentConfig()
    assert select_characters(2, config, character_rng(0, 2)) == []


def test_select_characters_explicit():
    config = ExperimentConfig(character_indices=[3, 1, 1, 1000])
    chars = select_characters(7, config, character_rng(0, 7))
    assert [chi.index for chi in chars] == [1, 3]


def test_select_characters_quadratic():
    config = ExperimentConfig(character_kind="quadratic")
    rng = character_rng(0, 101)
    assert select_characters(101, config, rng) == [quadratic_character(101)]
    assert select_characters(100, config, rng) == []
    assert select_characters(2, config, rng) == []


@pytest.mark.parametrize("q,H,J", [(1009, 40, 3), (211, 20, 10), (50, 1, 50)])
def test_sample_spaced_family(q, H, J):
    rng = np.random.RandomState(0)
    for _ in range(20):
        family = sample_spaced_family(q, H, J, rng)
        points = family.points
        assert len(points) == J
        assert points[0] >= 0
        assert points[-1] < q
        assert all(b - a >= H for a, b in zip(points, points[1:]))


def test_sample_spaced_family_rejects():
    with pytest.raises(SpacingViolated):
        sample_spaced_family(100, 40, 3, np.random.RandomState(0))
