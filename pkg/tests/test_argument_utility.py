import pytest

from burgesspy.argument_utility import (
    check_character_kind,
    check_h_rule,
    check_int_list,
    check_moduli_family,
    check_non_negative_int,
    check_positive_float,
    check_positive_int,
    check_q_range,
    check_report_format,
)
from burgesspy.errors import ConfigError
from burgesspy.h_rule import HRule


@pytest.mark.parametrize(
    "value", ["primes", "prime_squares", "cube_free", "cube_full"]
)
def test_check_moduli_family(value):
    assert check_moduli_family(value) == value


def test_check_moduli_family_rejects():
    with pytest.raises(ConfigError):
        check_moduli_family("squares")


@pytest.mark.parametrize("value", [(2, 2), [100, 1000]])
def test_check_q_range(value):
    assert check_q_range(value) == tuple(value)


@pytest.mark.parametrize("value", [(1, 10), (10, 5), (10,), "ab", (2.0, 5)])
def test_check_q_range_rejects(value):
    with pytest.raises(ConfigError):
        check_q_range(value)


@pytest.mark.parametrize("value", ["q^{0.6}", 40, HRule("sqrt(q)")])
def test_check_h_rule(value):
    rule = check_h_rule(value)
    assert isinstance(rule, HRule)
    if isinstance(value, HRule):
        assert rule is value


@pytest.mark.parametrize("value", [True, 1.5, None])
def test_check_h_rule_rejects(value):
    with pytest.raises(ConfigError):
        check_h_rule(value)


def test_check_numbers():
    assert check_positive_int("J", 3) == 3
    assert check_non_negative_int("seed", 0) == 0
    assert check_positive_float("ratio_cap", 2) == 2.0
    for value in (0, -1, True, 1.0, "1"):
        with pytest.raises(ConfigError):
            check_positive_int("J", value)
    for value in (-1, False, 0.5):
        with pytest.raises(ConfigError):
            check_non_negative_int("seed", value)
    for value in (0, -0.5, False, "1"):
        with pytest.raises(ConfigError):
            check_positive_float("ratio_cap", value)


def test_check_int_list():
    assert check_int_list("points", None) is None
    assert check_int_list("points", (0, 5)) == [0, 5]
    assert check_int_list("moduli", [7], minimum=2) == [7]
    with pytest.raises(ConfigError):
        check_int_list("moduli", [1], minimum=2)
    with pytest.raises(ConfigError):
        check_int_list("points", "05")
    with pytest.raises(ConfigError):
        check_int_list("points", [0, True])


def test_check_character_kind():
    assert check_character_kind("quadratic") == "quadratic"
    with pytest.raises(ConfigError):
        check_character_kind("real")


def test_check_report_format():
    assert check_report_format("json") == "json"
    with pytest.raises(ValueError):
        check_report_format("xml")
