import random

import numpy as np

from . import (
    arith,
    burgess,
    characters,
    experiments,
    lattice,
    meanvalue,
    sums,
)
from ._version import __version__


def seed(n: int) -> None:
    """Sets random seed value.

    Sweeps draw from their own per-instance generators; this only affects
    ad hoc sampling through ``random`` and ``numpy.random``.

    Args:
        n (int): seed value.

    """
    random.seed(n)
    np.random.seed(n)
