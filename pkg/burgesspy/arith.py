import itertools
import math
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ModulusTooLarge, NotAUnit, NotPrime, WindowEmpty

# witnesses making Miller-Rabin deterministic below 2^64
_MR_WITNESSES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

MAX_FACTOR_INPUT = 2 ** 63
MAX_WINDOW = 2 ** 40
MAX_TABLE_MODULUS = 2 ** 31
SEGMENT_SIZE = 1 << 20


def is_prime(n: int) -> bool:
    """Returns primality of ``n``.

    The test is a Miller-Rabin test with a fixed witness set, which is
    deterministic for every ``n < 2^64``.

    Args:
        n: integer to test.

    Returns:
        True if ``n`` is prime.

    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=16)
def _sieve(limit: int) -> np.ndarray:
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p :: p] = False
    return np.nonzero(is_p)[0].astype(np.int64)


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in itertools.count(1):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError("unreachable")


class Factorization:
    """Prime factorization of a positive integer.

    .. code-block:: python

        from burgesspy.arith import factorize

        f = factorize(360)
        f.factors  # ((2, 3), (3, 2), (5, 1))
        f.is_cube_free()  # False

    Args:
        n: the factorized integer.
        factors: ``(prime, exponent)`` pairs with increasing primes.

    """

    _n: int
    _factors: Tuple[Tuple[int, int], ...]

    def __init__(self, n: int, factors: Sequence[Tuple[int, int]]):
        self._n = n
        self._factors = tuple((int(p), int(e)) for p, e in factors)
        product = 1
        for i, (p, e) in enumerate(self._factors):
            assert e >= 1, "exponents must be positive."
            assert i == 0 or self._factors[i - 1][0] < p, "unsorted primes."
            product *= p ** e
        assert product == n, "factors do not reassemble %d." % n

    @property
    def n(self) -> int:
        return self._n

    @property
    def factors(self) -> Tuple[Tuple[int, int], ...]:
        return self._factors

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self._factors)

    def prime_powers(self) -> List[int]:
        return [p ** e for p, e in self._factors]

    def is_cube_free(self) -> bool:
        """Returns True if no prime divides ``n`` to the third power."""
        return all(e < 3 for _, e in self._factors)

    def phi(self) -> int:
        """Returns Euler's totient of ``n``."""
        value = 1
        for p, e in self._factors:
            value *= (p - 1) * p ** (e - 1)
        return value

    def divisors(self) -> List[int]:
        divisors = [1]
        for p, e in self._factors:
            divisors = [d * p ** k for d in divisors for k in range(e + 1)]
        return sorted(divisors)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self._factors)

    def __len__(self) -> int:
        return len(self._factors)

    def __eq__(self, obj: object) -> bool:
        if isinstance(obj, Factorization):
            return self._factors == obj.factors
        return list(self._factors) == obj

    def __repr__(self) -> str:
        return "Factorization(%d, %s)" % (self._n, list(self._factors))


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    """Returns the prime factorization of ``n``.

    Small primes are removed by trial division, the rest is split with
    Pollard's rho (Brent's variant) and certified with :func:`is_prime`.

    Args:
        n: positive integer up to ``2^63``.

    Returns:
        factorization of ``n``. ``n = 1`` yields an empty factor list.

    """
    if n < 1:
        raise ValueError("n must be positive.")
    if n > MAX_FACTOR_INPUT:
        raise ModulusTooLarge("n must not exceed 2^63.")
    counts: Dict[int, int] = {}
    m = n
    for p in _sieve(1000).tolist():
        if p * p > m:
            break
        while m % p == 0:
            counts[p] = counts.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        x = stack.pop()
        if is_prime(x):
            counts[x] = counts.get(x, 0) + 1
            continue
        d = _pollard_brent(x)
        stack.extend([d, x // d])
    return Factorization(n, sorted(counts.items()))


class PrimeWindow:
    """Sorted primes ``p`` with ``lo < p <= hi``.

    Args:
        lo: exclusive lower end.
        hi: inclusive upper end.
        primes: the primes of the window in increasing order.

    """

    _lo: int
    _hi: int
    _primes: Tuple[int, ...]

    def __init__(self, lo: int, hi: int, primes: Sequence[int]):
        self._lo = lo
        self._hi = hi
        self._primes = tuple(int(p) for p in primes)

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._hi

    @property
    def primes(self) -> Tuple[int, ...]:
        return self._primes

    def total(self) -> int:
        """Returns the sum of the primes in the window."""
        return sum(self._primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self._primes)

    def __len__(self) -> int:
        return len(self._primes)

    def __contains__(self, p: object) -> bool:
        return p in self._primes

    def __repr__(self) -> str:
        return "PrimeWindow((%d, %d], %s)" % (self._lo, self._hi, self._primes)


def primes_in_window(lo: int, hi: int, exclude: int = 1) -> PrimeWindow:
    """Returns all primes in ``(lo, hi]`` not dividing ``exclude``.

    A segmented sieve of Eratosthenes is run over the window with base
    primes up to ``sqrt(hi)``.

    .. code-block:: python

        from burgesspy.arith import primes_in_window

        primes_in_window(10, 20, exclude=77).primes  # (13, 17, 19)

    Args:
        lo: exclusive lower end.
        hi: inclusive upper end, at most ``2^40``.
        exclude: primes dividing this integer are dropped.

    Returns:
        prime window.

    """
    if lo < 0 or lo >= hi:
        raise ValueError("window must satisfy 0 <= lo < hi.")
    if hi > MAX_WINDOW:
        raise ModulusTooLarge("window must end below 2^40.")
    base = _sieve(max(2, math.isqrt(hi))).tolist()
    found: List[int] = []
    start = lo + 1
    while start <= hi:
        stop = min(hi, start + SEGMENT_SIZE - 1)
        segment = np.ones(stop - start + 1, dtype=bool)
        for p in base:
            if p * p > stop:
                break
            first = max(p * p, -(-start // p) * p)
            segment[first - start :: p] = False
        if start == 1:
            segment[0] = False
        for x in (np.nonzero(segment)[0] + start).tolist():
            if exclude % x != 0:
                found.append(x)
        start = stop + 1
    return PrimeWindow(lo, hi, found)


def bertrand_prime(q: int, H: int) -> int:
    """Returns the smallest prime ``l`` with ``q/H < l <= 2q/H``.

    Args:
        q: modulus.
        H: interval length with ``q/H >= 1``.

    Returns:
        the prime ``l``.

    """
    if H < 1 or q < H:
        raise ValueError("q/H must be at least 1.")
    # l > q/H and l <= 2q/H are equivalent to integer floor comparisons
    for candidate in range(q // H + 1, (2 * q) // H + 1):
        if is_prime(candidate):
            return candidate
    raise WindowEmpty("no prime in (%d/%d, 2*%d/%d]." % (q, H, q, H))


@lru_cache(maxsize=1024)
def primitive_root(p: int, k: int = 1) -> int:
    """Returns the smallest generator of ``(Z/p^k)^*`` for an odd prime ``p``.

    Args:
        p: odd prime.
        k: positive exponent.

    Returns:
        smallest primitive root modulo ``p^k``.

    """
    if p == 2 or not is_prime(p):
        raise NotPrime("%d is not an odd prime." % p)
    if k < 1:
        raise ValueError("k must be positive.")
    modulus = p ** k
    phi = p ** (k - 1) * (p - 1)
    divisors = list(factorize(p - 1).primes)
    if k > 1:
        divisors.append(p)
    for g in range(2, modulus):
        if g % p == 0:
            continue
        if all(pow(g, phi // d, modulus) != 1 for d in divisors):
            return g
    raise RuntimeError("no primitive root modulo %d." % modulus)


def _power_sequence(g: int, modulus: int, order: int) -> np.ndarray:
    # g^0 .. g^(order-1) built blockwise: g^(iB + j) = g^(iB) * g^j
    block = max(1, math.isqrt(order))
    n_blocks = -(-order // block)
    small = np.empty(block, dtype=np.int64)
    big = np.empty(n_blocks, dtype=np.int64)
    value = 1
    for i in range(block):
        small[i] = value
        value = value * g % modulus
    step, value = value, 1
    for i in range(n_blocks):
        big[i] = value
        value = value * step % modulus
    return ((big[:, None] * small[None, :]) % modulus).reshape(-1)[:order]


class DiscreteLogTable:
    """Full discrete logarithm table of a cyclic subgroup mod ``modulus``.

    ``logs[x]`` holds ``e`` with ``g^e = x`` for members of the subgroup
    generated by ``g`` and ``-1`` elsewhere.

    Args:
        generator: generator ``g``.
        modulus: modulus.
        order: multiplicative order of ``g``. Defaults to ``phi(modulus)``.

    """

    _generator: int
    _modulus: int
    _order: int
    _logs: np.ndarray

    def __init__(
        self, generator: int, modulus: int, order: Optional[int] = None
    ):
        if modulus > MAX_TABLE_MODULUS:
            raise ModulusTooLarge("log tables stop at 2^31.")
        if order is None:
            order = factorize(modulus).phi()
        self._generator = generator % modulus
        self._modulus = modulus
        self._order = order
        powers = _power_sequence(self._generator, modulus, order)
        self._logs = np.full(modulus, -1, dtype=np.int64)
        self._logs[powers] = np.arange(order, dtype=np.int64)
        if int(np.count_nonzero(self._logs >= 0)) != order:
            raise ValueError(
                "%d does not have order %d mod %d."
                % (generator, order, modulus)
            )
        self._logs.setflags(write=False)

    @property
    def generator(self) -> int:
        return self._generator

    @property
    def modulus(self) -> int:
        return self._modulus

    @property
    def order(self) -> int:
        return self._order

    @property
    def logs(self) -> np.ndarray:
        return self._logs

    def log(self, x: int) -> int:
        """Returns the exponent ``e`` with ``g^e = x`` mod ``modulus``.

        Args:
            x: subgroup member.

        Returns:
            exponent in ``[0, order)``.

        """
        e = int(self._logs[x % self._modulus])
        if e < 0:
            raise NotAUnit(
                "%d is not a power of %d mod %d."
                % (x, self._generator, self._modulus)
            )
        return e


@lru_cache(maxsize=64)
def build_log_table(
    generator: int, modulus: int, order: Optional[int] = None
) -> DiscreteLogTable:
    return DiscreteLogTable(generator, modulus, order)


def discrete_log(g: int, x: int, modulus: int) -> int:
    """Returns the discrete logarithm of ``x`` to base ``g``.

    .. code-block:: python

        from burgesspy.arith import discrete_log

        discrete_log(3, 6, 7)  # 3

    Args:
        g: generator of the unit group modulo ``modulus``.
        x: unit modulo ``modulus``.
        modulus: prime power ``p^k``.

    Returns:
        exponent ``e`` in ``[0, phi(modulus))``.

    """
    if math.gcd(x, modulus) > 1:
        raise NotAUnit("%d is not a unit mod %d." % (x, modulus))
    return build_log_table(g, modulus).log(x)
