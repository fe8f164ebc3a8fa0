import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .characters import DirichletCharacter, RationalFunctionPair, mixed_eval
from .context import check_budget
from .errors import DegenerateCase, LengthExceedsPeriod, ModulusTooLarge

MAX_PREFIX_MODULUS = 10 ** 7
ERROR_SCALE = 2.0 ** -50
ABSOLUTE_TOLERANCE = 1e-9


def roots_of_unity(order: int) -> np.ndarray:
    """Returns ``e(k / order)`` for ``0 <= k < order``, quarter turns exact."""
    k = np.arange(order, dtype=np.int64)
    roots = np.exp(2j * np.pi * k / order)
    quarter = (4 * k) % order == 0
    exact = np.array([1, 1j, -1, -1j], dtype=np.complex128)
    roots[quarter] = exact[(4 * k[quarter]) // order]
    return roots


class PrefixTable:
    """Prefix sums ``prefix[k] = chi(1) + ... + chi(k)`` over one period.

    Args:
        character: the character summed.
        prefix: array of ``q + 1`` complex prefix sums.
        pair: rational function pair when the summand is
            ``chi(f(n)) e_p(g(n))`` instead of ``chi(n)``.

    """

    _character: DirichletCharacter
    _prefix: np.ndarray
    _norm_budget: float
    _pair: Optional[RationalFunctionPair]

    def __init__(
        self,
        character: DirichletCharacter,
        prefix: np.ndarray,
        pair: Optional[RationalFunctionPair] = None,
    ):
        assert prefix.shape == (character.q + 1,), "need q + 1 prefix sums."
        self._character = character
        self._prefix = prefix
        self._prefix.setflags(write=False)
        self._norm_budget = character.q * ERROR_SCALE
        self._pair = pair

    @property
    def character(self) -> DirichletCharacter:
        return self._character

    @property
    def q(self) -> int:
        return self._character.q

    @property
    def prefix(self) -> np.ndarray:
        return self._prefix

    @property
    def norm_budget(self) -> float:
        return self._norm_budget

    @property
    def tolerance(self) -> float:
        return ABSOLUTE_TOLERANCE + self._norm_budget

    @property
    def pair(self) -> Optional[RationalFunctionPair]:
        return self._pair

    def total(self) -> complex:
        return complex(self._prefix[-1])

    def at(self, k: np.ndarray) -> np.ndarray:
        """Returns the extended prefix ``P(k)`` for ``0 <= k <= 2q``."""
        q = self.q
        return self._prefix[k % q] + (k // q) * self._prefix[q]

    def __len__(self) -> int:
        return int(self._prefix.shape[0])


def _table_from_values(
    character: DirichletCharacter,
    values: np.ndarray,
    pair: Optional[RationalFunctionPair] = None,
) -> PrefixTable:
    # values[n] is the summand at residue n; the period runs over 1..q
    prefix = np.zeros(character.q + 1, dtype=np.complex128)
    prefix[1:] = np.cumsum(np.roll(values, -1))
    return PrefixTable(character, prefix, pair)


def build_prefix(chi: DirichletCharacter) -> PrefixTable:
    """Builds the prefix table of ``chi`` in O(q).

    .. code-block:: python

        from burgesspy.characters import quadratic_character
        from burgesspy.sums import build_prefix, interval_sum

        table = build_prefix(quadratic_character(7))
        table.prefix.real  # [0, 1, 2, 1, 2, 1, 0, 0]
        interval_sum(table, 3, 2)  # 0j

    Args:
        chi: character with modulus at most ``10^7``.

    Returns:
        prefix table.

    """
    if chi.q > MAX_PREFIX_MODULUS:
        raise ModulusTooLarge("prefix tables stop at modulus 10^7.")
    exponents = chi.exponent_table()
    roots = roots_of_unity(chi.denominator)
    values = np.where(exponents >= 0, roots[np.maximum(exponents, 0)], 0)
    return _table_from_values(chi, values.astype(np.complex128))


def _mod_inverse(x: np.ndarray, p: int) -> np.ndarray:
    # x^(p-2) by square and multiply; entries stay below p^2 < 2^63
    result = np.ones_like(x)
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def _poly_values(
    coefficients: Sequence[int], x: np.ndarray, p: int
) -> np.ndarray:
    value = np.zeros_like(x)
    for c in reversed(coefficients):
        value = (value * x + c) % p
    return value


def build_mixed_prefix(
    chi: DirichletCharacter, pair: RationalFunctionPair
) -> PrefixTable:
    """Builds the prefix table of ``n -> chi(f(n)) e_p(g(n))``.

    Every moment of :mod:`burgesspy.meanvalue` then applies unchanged.

    """
    p = pair.p
    if chi.q != p:
        raise ValueError("character modulus %d != %d." % (chi.q, p))
    if pair.is_degenerate():
        raise DegenerateCase("f is constant and g is constant or linear.")
    if p > MAX_PREFIX_MODULUS:
        raise ModulusTooLarge("prefix tables stop at modulus 10^7.")
    x = np.arange(p, dtype=np.int64)
    (f_num, f_den), (g_num, g_den) = pair.f, pair.g
    f_den_values = _poly_values(f_den, x, p)
    g_den_values = _poly_values(g_den, x, p)
    defined = (f_den_values != 0) & (g_den_values != 0)
    f_values = _poly_values(f_num, x, p) * _mod_inverse(f_den_values, p) % p
    g_values = _poly_values(g_num, x, p) * _mod_inverse(g_den_values, p) % p
    chi_exponents = chi.exponent_table()[f_values]
    chi_roots = roots_of_unity(chi.denominator)[np.maximum(chi_exponents, 0)]
    values = chi_roots * roots_of_unity(p)[g_values]
    values = np.where(defined & (chi_exponents >= 0), values, 0)
    return _table_from_values(chi, values.astype(np.complex128), pair)


def _check_length(table: PrefixTable, h: int) -> None:
    if h < 0:
        raise ValueError("length must be non-negative.")
    if h > table.q:
        raise LengthExceedsPeriod("length %d exceeds q=%d." % (h, table.q))


def interval_sums(
    table: PrefixTable, starts: np.ndarray, h: int
) -> np.ndarray:
    """Returns ``S(N; h)`` for every ``N`` in ``starts``."""
    _check_length(table, h)
    s = np.asarray(starts, dtype=np.int64) % table.q
    return table.at(s + h) - table.at(s)


def interval_sum(table: PrefixTable, N: int, h: int) -> complex:
    """Returns ``S(N; h)``, the sum over ``N < n <= N + h``.

    Args:
        table: prefix table.
        N: start, any integer.
        h: length with ``0 <= h <= q``.

    Returns:
        the interval sum.

    """
    _check_length(table, h)
    s = N % table.q
    return complex(table.at(np.int64(s + h)) - table.at(np.int64(s)))


def partial_sums(table: PrefixTable, N: int, H: int) -> np.ndarray:
    """Returns ``S(N; h)`` for ``h = 1, ..., H``."""
    _check_length(table, H)
    s = N % table.q
    ks = s + np.arange(1, H + 1, dtype=np.int64)
    return table.at(ks) - table.at(np.int64(s))


def max_partial(table: PrefixTable, N: int, H: int) -> Tuple[int, float]:
    """Returns ``(h*, m)`` with ``m = max_{1 <= h <= H} |S(N; h)|``.

    ``h*`` is the smallest ``h`` attaining the maximum up to the table
    tolerance.

    .. code-block:: python

        max_partial(legendre7, 0, 6)  # (2, 2.0)

    """
    if H < 1:
        raise ValueError("H must be positive.")
    magnitudes = np.abs(partial_sums(table, N, H))
    m = float(magnitudes.max())
    h_star = int(np.argmax(magnitudes >= m - table.tolerance)) + 1
    return h_star, m


def max_partials(table: PrefixTable, starts: np.ndarray, H: int) -> np.ndarray:
    """Returns ``max_{h <= H} |S(N; h)|`` for every ``N`` in ``starts``."""
    if H < 1:
        raise ValueError("H must be positive.")
    _check_length(table, H)
    s = np.asarray(starts, dtype=np.int64) % table.q
    check_budget(int(s.shape[0]) * H, "maximal sums")
    base = table.at(s)
    best = np.zeros(s.shape[0], dtype=np.float64)
    for h in range(1, H + 1):
        np.maximum(best, np.abs(table.at(s + h) - base), out=best)
    return best


class DyadicPlan:
    """Splitting of ``(0, h]`` into pieces of length ``2^{t-d}``, ``d`` in D.

    The piece for ``d`` starts at ``v_d 2^{t-d}`` where ``v_d`` sums
    ``2^{d-e}`` over the smaller ``e`` in D. Offsets do not depend on the
    start of the interval.

    """

    _t: int
    _D: Tuple[int, ...]
    _pieces: Tuple[Tuple[int, int], ...]

    def __init__(
        self, t: int, D: Sequence[int], pieces: Sequence[Tuple[int, int]]
    ):
        self._t = t
        self._D = tuple(D)
        self._pieces = tuple(pieces)

    @property
    def t(self) -> int:
        return self._t

    @property
    def D(self) -> Tuple[int, ...]:
        return self._D

    @property
    def pieces(self) -> Tuple[Tuple[int, int], ...]:
        return self._pieces

    @property
    def h(self) -> int:
        return sum(length for _, length in self._pieces)

    def v(self, d: int) -> int:
        assert d in self._D, "%d is not in D." % d
        return sum(2 ** (d - e) for e in self._D if e < d)


def dyadic_decompose(h: int, t: int) -> DyadicPlan:
    """Returns the dyadic plan of ``h`` at scale ``H = 2^t``.

    .. code-block:: python

        plan = dyadic_decompose(5, 3)
        plan.D  # (1, 3)
        plan.pieces  # ((0, 4), (4, 1))

    """
    if t < 0 or not 1 <= h <= 2 ** t:
        raise ValueError("need 1 <= h <= 2^t.")
    D = [d for d in range(t + 1) if (h >> (t - d)) & 1]
    pieces: List[Tuple[int, int]] = []
    offset = 0
    for d in D:
        v = sum(2 ** (d - e) for e in D if e < d)
        assert v * 2 ** (t - d) == offset, "offset mismatch at d=%d." % d
        pieces.append((offset, 2 ** (t - d)))
        offset += 2 ** (t - d)
    return DyadicPlan(t, D, pieces)


def reconstruct_via_plan(
    table: PrefixTable, N: int, plan: DyadicPlan
) -> complex:
    """Returns the sum of ``S(N + offset; length)`` over the plan's pieces."""
    total = 0j
    for offset, length in plan.pieces:
        total += interval_sum(table, N + offset, length)
    return total


def holder_dyadic_bound(table: PrefixTable, N: int, t: int, r: int) -> float:
    """Returns the dyadic majorant of ``max_{h <= 2^t} |S(N; h)|^{2r}``.

    The value is ``(t+1)^{2r-1}`` times the sum over ``0 <= d <= t`` and
    ``0 <= v < 2^d`` of ``|S(N + v 2^{t-d}; 2^{t-d})|^{2r}``.

    """
    if 2 ** t > table.q:
        raise LengthExceedsPeriod("2^%d exceeds q=%d." % (t, table.q))
    check_budget(2 ** (t + 1), "dyadic bound")
    total = 0.0
    for d in range(t + 1):
        length = 2 ** (t - d)
        starts = N + np.arange(2 ** d, dtype=np.int64) * length
        sums = interval_sums(table, starts, length)
        total += float(np.sum(np.abs(sums) ** (2 * r)))
    return float((t + 1) ** (2 * r - 1)) * total


def largest_power_of_two(x: float) -> int:
    """Returns the largest power of two not exceeding ``x >= 1``."""
    if x < 1:
        raise ValueError("x must be at least 1.")
    value = 2 ** max(int(math.floor(math.log2(x))), 0)
    while value * 2 <= x:
        value *= 2
    while value > x:
        value //= 2
    return value


def h0_block_bound(table: PrefixTable, N: int, H: int, H0: int) -> float:
    """Returns ``sum_{0 <= j <= H/H0} max_{h <= H0} |S(N + j H0; h)|``.

    Any maximal sum of length up to ``H`` is dominated by this value.

    """
    if not 1 <= H0 <= H:
        raise ValueError("need 1 <= H0 <= H.")
    starts = N + np.arange(H // H0 + 1, dtype=np.int64) * H0
    return float(np.sum(max_partials(table, starts, H0)))


def window_principle(
    table: PrefixTable, N: int, h: int, W: int
) -> Tuple[float, float]:
    """Returns both sides of ``W |S(N;h)| <= 2 sum_n max_{k <= 2W} |S(n;k)|``.

    The sum runs over ``N - W < n <= N``.

    Args:
        table: prefix table.
        N: start.
        h: length with ``1 <= h <= W``.
        W: window with ``2W <= q``.

    Returns:
        tuple of left and right hand sides.

    """
    if not 1 <= h <= W or 2 * W > table.q:
        raise ValueError("need 1 <= h <= W and 2W <= q.")
    lhs = W * abs(interval_sum(table, N, h))
    starts = np.arange(N - W + 1, N + 1, dtype=np.int64)
    rhs = 2.0 * float(np.sum(max_partials(table, starts, 2 * W)))
    return lhs, rhs


def mixed_interval_sum(
    p: int,
    chi: DirichletCharacter,
    pair: RationalFunctionPair,
    N: int,
    h: int,
) -> complex:
    """Returns the sum of ``chi(f(n)) e_p(g(n))`` over ``N < n <= N + h``."""
    if chi.q != p or pair.p != p:
        raise ValueError("character and pair must both live mod %d." % p)
    if pair.is_degenerate():
        raise DegenerateCase("f is constant and g is constant or linear.")
    if h < 0:
        raise ValueError("length must be non-negative.")
    if h > p:
        raise LengthExceedsPeriod("length %d exceeds p=%d." % (h, p))
    total = 0j
    for n in range(N + 1, N + h + 1):
        total += complex(mixed_eval(chi, pair, n))
    return total
