import math
from typing import Callable, Dict, List

import numpy as np

from ..arith import factorize, is_prime
from ..burgess import SpacedFamily
from ..characters import (
    DirichletCharacter,
    enumerate_characters,
    quadratic_character,
)
from ..errors import SpacingViolated
from .config import ExperimentConfig

# draws per requested character before giving up on finding primitive ones
MAX_DRAWS_PER_CHARACTER = 64


def _is_prime_square(q: int) -> bool:
    root = math.isqrt(q)
    return root * root == q and is_prime(root)


def _is_cube_free(q: int) -> bool:
    return factorize(q).is_cube_free()


def _is_cube_full(q: int) -> bool:
    return not factorize(q).is_cube_free()


FAMILY_PREDICATES: Dict[str, Callable[[int], bool]] = {
    "primes": is_prime,
    "prime_squares": _is_prime_square,
    "cube_free": _is_cube_free,
    "cube_full": _is_cube_full,
}


def select_moduli(config: ExperimentConfig) -> List[int]:
    """Returns the moduli of a sweep in increasing order.

    For a generated family, ``n_moduli`` log-spaced targets are placed over
    ``q_range`` and each is replaced by the smallest family member at or
    above it.

    """
    if config.moduli_family == "explicit_list":
        assert config.moduli is not None
        return sorted(set(config.moduli))
    predicate = FAMILY_PREDICATES[config.moduli_family]
    lo, hi = config.q_range
    n = config.n_moduli
    if n == 1:
        targets = [lo]
    else:
        targets = [
            int(math.ceil(lo * (hi / lo) ** (i / (n - 1)) - 1e-9))
            for i in range(n)
        ]
    moduli = set()
    for target in targets:
        q = max(target, lo)
        while q <= hi and not predicate(q):
            q += 1
        if q <= hi:
            moduli.add(q)
    return sorted(moduli)


def character_rng(seed: int, q: int, index: int = 0) -> np.random.RandomState:
    """Returns the generator of one ``(q, character)`` instance.

    Every instance has its own stream, so rows do not depend on the order
    in which instances are computed.

    """
    return np.random.RandomState([seed & 0xFFFFFFFF, q & 0xFFFFFFFF, index])


def select_characters(
    q: int, config: ExperimentConfig, rng: np.random.RandomState
) -> List[DirichletCharacter]:
    """Returns the characters of modulus ``q`` ordered by label.

    Explicit labels are used as given. Otherwise up to
    ``characters_per_q`` distinct primitive characters are drawn.

    """
    if config.character_indices is not None:
        group = enumerate_characters(q)
        return [
            DirichletCharacter.from_index(q, i)
            for i in sorted(set(config.character_indices))
            if i < len(group)
        ]
    if config.character_kind == "quadratic":
        if q == 2 or not is_prime(q):
            return []
        return [quadratic_character(q)]
    group = enumerate_characters(q)
    wanted = config.characters_per_q
    chosen: Dict[int, DirichletCharacter] = {}
    for _ in range(MAX_DRAWS_PER_CHARACTER * wanted):
        if len(chosen) == wanted:
            break
        index = int(rng.randint(len(group)))
        if index in chosen:
            continue
        chi = group[index]
        if chi.is_primitive():
            chosen[index] = chi
    return [chosen[i] for i in sorted(chosen)]


def sample_spaced_family(
    q: int, H: int, J: int, rng: np.random.RandomState
) -> SpacedFamily:
    """Draws ``J`` points with gaps uniform in ``[H, H + (q - JH)/J]``.

    .. code-block:: python

        rng = np.random.RandomState(0)
        family = sample_spaced_family(1009, 40, 3, rng)
        len(family)  # 3

    """
    if J * H > q:
        raise SpacingViolated("J*H=%d exceeds q=%d." % (J * H, q))
    slack = (q - J * H) // J
    gaps = H + rng.randint(0, slack + 1, size=J)
    points = np.cumsum(gaps) - H
    return SpacedFamily(q, H, points.tolist())
