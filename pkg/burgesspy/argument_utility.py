from typing import Any, List, Optional, Sequence, Tuple, Union

from .errors import ConfigError
from .h_rule import HRule

MODULI_FAMILIES = (
    "primes",
    "prime_squares",
    "cube_free",
    "cube_full",
    "explicit_list",
)
REPORT_FORMATS = ("csv", "json")
CHARACTER_KINDS = ("sampled", "quadratic")

HRuleArg = Union[HRule, str, int]


def check_moduli_family(value: str) -> str:
    """Checks value and returns the moduli family name.

    Returns:
        str: one of ``primes``, ``prime_squares``, ``cube_free``,
        ``cube_full`` and ``explicit_list``.

    """
    if value not in MODULI_FAMILIES:
        raise ConfigError(
            "moduli_family must be one of %s, got %r."
            % (", ".join(MODULI_FAMILIES), value)
        )
    return value


def check_q_range(value: Sequence[int]) -> Tuple[int, int]:
    """Checks value and returns a non-empty ``(min, max)`` modulus range.

    Returns:
        tuple: ``(q_min, q_max)`` with ``2 <= q_min <= q_max``.

    """
    if isinstance(value, str) or len(value) != 2:
        raise ConfigError("q_range must be a pair of integers.")
    lo, hi = (check_positive_int("q_range", v) for v in value)
    if lo < 2 or lo > hi:
        raise ConfigError("q_range (%d, %d) is empty." % (lo, hi))
    return lo, hi


def check_h_rule(value: HRuleArg) -> HRule:
    """Checks value and returns HRule object.

    Integers are accepted as constant rules.

    Returns:
        burgesspy.h_rule.HRule: H rule object.

    """
    if isinstance(value, HRule):
        return value
    if isinstance(value, bool):
        raise ConfigError("H_rule must be str or int.")
    if isinstance(value, int):
        return HRule(str(value))
    if isinstance(value, str):
        return HRule(value)
    raise ConfigError("H_rule must be str, int or HRule object.")


def check_positive_int(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(
            "%s must be a positive integer, got %r." % (name, value)
        )
    return value


def check_non_negative_int(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigError(
            "%s must be a non-negative integer, got %r." % (name, value)
        )
    return value


def check_positive_float(name: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("%s must be a number, got %r." % (name, value))
    if value <= 0:
        raise ConfigError("%s must be positive, got %r." % (name, value))
    return float(value)


def check_int_list(
    name: str, value: Optional[Sequence[Any]], minimum: int = 0
) -> Optional[List[int]]:
    """Checks value and returns a list of integers, or None."""
    if value is None:
        return None
    if isinstance(value, str) or not isinstance(value, (list, tuple)):
        raise ConfigError("%s must be a list of integers." % name)
    checked = []
    for v in value:
        if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
            raise ConfigError("%s has invalid entry %r." % (name, v))
        checked.append(v)
    return checked


def check_character_kind(value: str) -> str:
    if value not in CHARACTER_KINDS:
        raise ConfigError(
            "character_kind must be sampled or quadratic, got %r." % value
        )
    return value


def check_report_format(value: str) -> str:
    if value not in REPORT_FORMATS:
        raise ValueError("format must be csv or json, got %r." % value)
    return value
