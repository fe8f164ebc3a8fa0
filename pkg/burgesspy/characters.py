import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import (
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
    overload,
)

import numpy as np

from .arith import (
    Factorization,
    build_log_table,
    factorize,
    is_prime,
    primitive_root,
)
from .errors import ModulusTooLarge, NotPrime

MAX_CHARACTER_MODULUS = 10 ** 7

Coefficients = Tuple[int, ...]


class UnityRoot:
    """Exact value of a character: zero or ``e^{2 pi i t}`` with rational t.

    .. code-block:: python

        from burgesspy.characters import UnityRoot

        minus_one = UnityRoot.root(1, 2)
        assert minus_one * minus_one == UnityRoot.root(0, 1)
        complex(minus_one)  # (-1+0j)

    """

    ZERO = "zero"
    ROOT = "root"

    _kind: str
    _numerator: int
    _denominator: int

    def __init__(self, kind: str, numerator: int = 0, denominator: int = 1):
        assert kind in (self.ZERO, self.ROOT), "unknown kind %s." % kind
        assert denominator > 0, "denominator must be positive."
        self._kind = kind
        if kind == self.ZERO:
            self._numerator, self._denominator = 0, 1
        else:
            numerator %= denominator
            g = math.gcd(numerator, denominator)
            self._numerator = numerator // g
            self._denominator = denominator // g

    @classmethod
    def zero(cls) -> "UnityRoot":
        return cls(cls.ZERO)

    @classmethod
    def root(cls, numerator: int, denominator: int) -> "UnityRoot":
        return cls(cls.ROOT, numerator, denominator)

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def is_zero(self) -> bool:
        return self._kind == self.ZERO

    @property
    def numerator(self) -> int:
        return self._numerator

    @property
    def denominator(self) -> int:
        return self._denominator

    @property
    def exponent(self) -> Fraction:
        return Fraction(self._numerator, self._denominator)

    def conjugate(self) -> "UnityRoot":
        if self.is_zero:
            return self
        return UnityRoot.root(-self._numerator, self._denominator)

    def __mul__(self, other: "UnityRoot") -> "UnityRoot":
        if self.is_zero or other.is_zero:
            return UnityRoot.zero()
        return UnityRoot.root(
            self._numerator * other.denominator
            + other.numerator * self._denominator,
            self._denominator * other.denominator,
        )

    def __complex__(self) -> complex:
        if self.is_zero:
            return 0j
        # quarter turns are returned exactly
        if (4 * self._numerator) % self._denominator == 0:
            return complex((1, 1j, -1, -1j)[4 * self._numerator // self._denominator])
        return cmath.exp(2j * math.pi * self._numerator / self._denominator)

    def to_complex(self) -> complex:
        return complex(self)

    def __eq__(self, obj: object) -> bool:
        if not isinstance(obj, UnityRoot):
            return NotImplemented
        return (
            self._kind == obj.kind
            and self._numerator == obj.numerator
            and self._denominator == obj.denominator
        )

    def __hash__(self) -> int:
        return hash((self._kind, self._numerator, self._denominator))

    def __repr__(self) -> str:
        if self.is_zero:
            return "Zero"
        return "Root(%d/%d)" % (self._numerator, self._denominator)


class Axis(NamedTuple):
    generator: int
    order: int


class CharacterComponent:
    """Unit group of one prime power, written as a product of cyclic axes.

    Odd ``p^k`` has the single axis of its smallest primitive root, ``4``
    has the axis ``{-1}``, ``2^k`` with ``k >= 3`` has the axes ``{-1, 5}``
    and ``2`` has none.

    Args:
        p: prime.
        k: exponent.

    """

    _p: int
    _k: int
    _modulus: int
    _axes: Tuple[Axis, ...]
    _log_arrays: Tuple[np.ndarray, ...]

    def __init__(self, p: int, k: int):
        self._p = p
        self._k = k
        self._modulus = p ** k
        m = self._modulus
        residues = np.arange(m, dtype=np.int64)
        if p != 2:
            g = primitive_root(p, k)
            self._axes = (Axis(g, m // p * (p - 1)),)
            self._log_arrays = (build_log_table(g, m).logs,)
        elif k == 1:
            self._axes = ()
            self._log_arrays = ()
        elif k == 2:
            self._axes = (Axis(3, 2),)
            sign = np.where(residues % 2 == 1, (residues % 4 == 3), -1)
            self._log_arrays = (sign.astype(np.int64),)
        else:
            self._axes = (Axis(m - 1, 2), Axis(5, 2 ** (k - 2)))
            five = build_log_table(5, m, 2 ** (k - 2)).logs
            odd = residues % 2 == 1
            negative = residues % 4 == 3
            sign = np.where(odd, negative, -1).astype(np.int64)
            # n = 3 mod 4 is written as -(5^b) with -n = 1 mod 4
            flipped = np.where(negative, (m - residues) % m, residues)
            power = np.where(odd, five[flipped], -1).astype(np.int64)
            self._log_arrays = (sign, power)
        for array in self._log_arrays:
            array.setflags(write=False)

    @property
    def p(self) -> int:
        return self._p

    @property
    def k(self) -> int:
        return self._k

    @property
    def modulus(self) -> int:
        return self._modulus

    @property
    def axes(self) -> Tuple[Axis, ...]:
        return self._axes

    @property
    def log_arrays(self) -> Tuple[np.ndarray, ...]:
        return self._log_arrays

    def logs(self, n: int) -> Tuple[int, ...]:
        """Returns the axis exponents of a unit ``n``."""
        r = n % self._modulus
        return tuple(int(array[r]) for array in self._log_arrays)


@lru_cache(maxsize=256)
def get_component(p: int, k: int) -> CharacterComponent:
    return CharacterComponent(p, k)


def _components(
    factorization: Factorization,
) -> Tuple[CharacterComponent, ...]:
    return tuple(get_component(p, k) for p, k in factorization)


def _check_modulus(q: int) -> None:
    if q < 1:
        raise ValueError("modulus must be positive.")
    if q > MAX_CHARACTER_MODULUS:
        raise ModulusTooLarge("characters stop at modulus 10^7.")


class DirichletCharacter:
    """Exact Dirichlet character modulo ``q``.

    A character is given by one twist per cyclic axis of every CRT
    component: the generator of an axis of order ``o`` is sent to
    ``e(twist / o)``.

    .. code-block:: python

        from burgesspy.characters import DirichletCharacter

        legendre = DirichletCharacter(7, [[3]])
        legendre(3)  # Root(1/2)
        legendre.conductor()  # 7

    Args:
        q: modulus.
        twists: twist tuples, one per prime power of ``q`` in increasing
            prime order.

    """

    _q: int
    _factorization: Factorization
    _components: Tuple[CharacterComponent, ...]
    _twists: Tuple[Tuple[int, ...], ...]
    _denominator: int
    _weights: Tuple[Tuple[int, ...], ...]
    _exponent_table: Optional[np.ndarray]

    def __init__(self, q: int, twists: Sequence[Sequence[int]]):
        _check_modulus(q)
        self._q = q
        self._factorization = factorize(q)
        self._components = _components(self._factorization)
        if len(twists) != len(self._components):
            raise ValueError(
                "%d twist groups for %d components."
                % (len(twists), len(self._components))
            )
        normalized = []
        for component, twist in zip(self._components, twists):
            if len(twist) != len(component.axes):
                raise ValueError(
                    "wrong twist count mod %d." % component.modulus
                )
            for a, axis in zip(twist, component.axes):
                if not 0 <= a < axis.order:
                    raise ValueError(
                        "twist %d outside [0, %d)." % (a, axis.order)
                    )
            normalized.append(tuple(int(a) for a in twist))
        self._twists = tuple(normalized)

        orders = [axis.order for c in self._components for axis in c.axes]
        self._denominator = 1
        for o in orders:
            self._denominator = self._denominator * o // math.gcd(
                self._denominator, o
            )
        self._weights = tuple(
            tuple(
                a * (self._denominator // axis.order)
                for a, axis in zip(twist, component.axes)
            )
            for twist, component in zip(self._twists, self._components)
        )
        self._exponent_table = None

    @classmethod
    def from_index(cls, q: int, index: int) -> "DirichletCharacter":
        """Returns character number ``index`` of the lexicographic labeling.

        Args:
            q: modulus.
            index: label in ``[0, phi(q))``; 0 is the principal character.

        Returns:
            character.

        """
        _check_modulus(q)
        components = _components(factorize(q))
        radices = [axis.order for c in components for axis in c.axes]
        total = 1
        for radix in radices:
            total *= radix
        if not 0 <= index < total:
            raise ValueError("index %d outside [0, %d)." % (index, total))
        digits: List[int] = []
        for radix in reversed(radices):
            index, digit = divmod(index, radix)
            digits.append(digit)
        digits.reverse()
        twists = []
        position = 0
        for component in components:
            n_axes = len(component.axes)
            twists.append(digits[position : position + n_axes])
            position += n_axes
        return cls(q, twists)

    @property
    def q(self) -> int:
        return self._q

    @property
    def factorization(self) -> Factorization:
        return self._factorization

    @property
    def components(self) -> Tuple[CharacterComponent, ...]:
        return self._components

    @property
    def twists(self) -> Tuple[Tuple[int, ...], ...]:
        return self._twists

    @property
    def denominator(self) -> int:
        """Exponent of the unit group; every value is a root of this order."""
        return self._denominator

    @property
    def index(self) -> int:
        index = 0
        for twist, component in zip(self._twists, self._components):
            for a, axis in zip(twist, component.axes):
                index = index * axis.order + a
        return index

    def is_principal(self) -> bool:
        return all(a == 0 for twist in self._twists for a in twist)

    def order(self) -> int:
        """Returns the multiplicative order of the character."""
        value = 1
        for twist, component in zip(self._twists, self._components):
            for a, axis in zip(twist, component.axes):
                o = axis.order // math.gcd(a, axis.order)
                value = value * o // math.gcd(value, o)
        return value

    def exponent(self, n: int) -> int:
        """Returns ``e`` with ``chi(n) = e(e / denominator)``; -1 off units."""
        if math.gcd(n, self._q) > 1:
            return -1
        total = 0
        for weights, component in zip(self._weights, self._components):
            for w, e in zip(weights, component.logs(n)):
                total += w * e
        return total % self._denominator

    def __call__(self, n: int) -> UnityRoot:
        e = self.exponent(n)
        if e < 0:
            return UnityRoot.zero()
        return UnityRoot.root(e, self._denominator)

    def exponent_table(self) -> np.ndarray:
        """Returns the exponents of ``chi(0), ..., chi(q - 1)``.

        Non-units carry -1. The table is built once and then shared.

        """
        if self._exponent_table is None:
            residues = np.arange(self._q, dtype=np.int64)
            table = np.zeros(self._q, dtype=np.int64)
            units = np.ones(self._q, dtype=bool)
            for weights, component in zip(self._weights, self._components):
                local = residues % component.modulus
                units &= local % component.p != 0
                for w, array in zip(weights, component.log_arrays):
                    table = (
                        table + w * np.maximum(array[local], 0)
                    ) % self._denominator
            table[~units] = -1
            table.setflags(write=False)
            self._exponent_table = table
        return self._exponent_table

    def conductor(self) -> int:
        return conductor(self)

    def is_primitive(self) -> bool:
        return is_primitive(self)

    def __eq__(self, obj: object) -> bool:
        if not isinstance(obj, DirichletCharacter):
            return NotImplemented
        return self._q == obj.q and self._twists == obj.twists

    def __hash__(self) -> int:
        return hash((self._q, self._twists))

    def __repr__(self) -> str:
        return "DirichletCharacter(q=%d, index=%d)" % (self._q, self.index)


def _valuation(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _primitive_parts(
    chi: DirichletCharacter,
) -> List[Tuple[int, int, Tuple[int, ...]]]:
    # (p, j, twists mod p^j) of the inducing character, trivial parts dropped
    parts = []
    for twist, component in zip(chi.twists, chi.components):
        p, k = component.p, component.k
        if p != 2:
            (a,) = twist
            if a == 0:
                continue
            v = min(_valuation(a, p), k - 1)
            j = k - v
            reduced = a // p ** v
            if j == k:
                parts.append((p, k, (a,)))
                continue
            # component generator of p^k is not the generator used mod p^j
            g_k = component.axes[0].generator
            g_j = primitive_root(p, j)
            phi_j = p ** (j - 1) * (p - 1)
            L = build_log_table(g_j, p ** j).log(g_k % p ** j)
            parts.append((p, j, (reduced * pow(L, -1, phi_j) % phi_j,)))
        elif k == 2:
            if twist[0] == 1:
                parts.append((2, 2, (1,)))
        elif k >= 3:
            a, b = twist
            if b == 0:
                if a == 1:
                    parts.append((2, 2, (1,)))
                continue
            v = _valuation(b, 2)
            j = k - v
            parts.append((2, j, (a, b >> v)))
    return parts


def conductor(chi: DirichletCharacter) -> int:
    """Returns the conductor of ``chi``.

    .. code-block:: python

        chi = DirichletCharacter(12, [[0], [1]])
        conductor(chi)  # 3

    """
    value = 1
    for p, j, _ in _primitive_parts(chi):
        value *= p ** j
    return value


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor(chi) == chi.q


def induced_primitive(chi: DirichletCharacter) -> DirichletCharacter:
    """Returns the primitive character inducing ``chi``."""
    parts = _primitive_parts(chi)
    modulus = 1
    for p, j, _ in parts:
        modulus *= p ** j
    return DirichletCharacter(modulus, [twist for _, _, twist in parts])


def order(chi: DirichletCharacter) -> int:
    return chi.order()


def eval(chi: DirichletCharacter, n: int) -> UnityRoot:
    """Returns the exact value ``chi(n)``."""
    return chi(n)


def value_table(chi: DirichletCharacter) -> np.ndarray:
    return chi.exponent_table()


class CharacterGroup(Sequence[DirichletCharacter]):
    """All characters modulo ``q`` in label order, built on access.

    .. code-block:: python

        from burgesspy.characters import enumerate_characters

        group = enumerate_characters(8)
        len(group)  # 4
        group[0].is_principal()  # True

    """

    _q: int
    _size: int

    def __init__(self, q: int):
        _check_modulus(q)
        self._q = q
        self._size = factorize(q).phi()

    @property
    def q(self) -> int:
        return self._q

    def __len__(self) -> int:
        return self._size

    @overload
    def __getitem__(self, index: int) -> DirichletCharacter:
        ...

    @overload
    def __getitem__(self, index: slice) -> List[DirichletCharacter]:
        ...

    def __getitem__(
        self, index: Union[int, slice]
    ) -> Union[DirichletCharacter, List[DirichletCharacter]]:
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(self._size))]
        if index < 0:
            index += self._size
        if not 0 <= index < self._size:
            raise IndexError("character index out of range.")
        return DirichletCharacter.from_index(self._q, index)

    def __iter__(self) -> Iterator[DirichletCharacter]:
        for i in range(self._size):
            yield DirichletCharacter.from_index(self._q, i)

    def primitive(self) -> Iterator[DirichletCharacter]:
        return (chi for chi in self if chi.is_primitive())


def enumerate_characters(q: int) -> CharacterGroup:
    return CharacterGroup(q)


def quadratic_character(p: int) -> DirichletCharacter:
    """Returns the Legendre symbol modulo an odd prime ``p``."""
    if p == 2 or not is_prime(p):
        raise NotPrime("%d is not an odd prime." % p)
    return DirichletCharacter(p, [[(p - 1) // 2]])


def _trim(coefficients: Sequence[int], p: int) -> Coefficients:
    reduced = [c % p for c in coefficients]
    while reduced and reduced[-1] == 0:
        reduced.pop()
    return tuple(reduced)


def _horner(coefficients: Coefficients, x: int, p: int) -> int:
    value = 0
    for c in reversed(coefficients):
        value = (value * x + c) % p
    return value


def _poly_divmod(
    num: Coefficients, den: Coefficients, p: int
) -> Tuple[Coefficients, Coefficients]:
    remainder = list(num)
    quotient = [0] * max(len(num) - len(den) + 1, 0)
    inverse = pow(den[-1], p - 2, p)
    for shift in range(len(quotient) - 1, -1, -1):
        c = remainder[shift + len(den) - 1] * inverse % p
        quotient[shift] = c
        for i, d in enumerate(den):
            remainder[shift + i] = (remainder[shift + i] - c * d) % p
    return _trim(quotient, p), _trim(remainder, p)


class RationalFunctionPair:
    """Pair ``f = f_num / f_den``, ``g = g_num / g_den`` over the field mod p.

    Coefficients are listed from the constant term upwards.

    .. code-block:: python

        # f(x) = x^2 + 1, g(x) = x
        pair = RationalFunctionPair(5, f_num=[1, 0, 1], g_num=[0, 1])

    Args:
        p: prime.
        f_num: numerator of ``f``.
        f_den: denominator of ``f``.
        g_num: numerator of ``g``.
        g_den: denominator of ``g``.

    """

    _p: int
    _f_num: Coefficients
    _f_den: Coefficients
    _g_num: Coefficients
    _g_den: Coefficients

    def __init__(
        self,
        p: int,
        f_num: Sequence[int] = (0, 1),
        f_den: Sequence[int] = (1,),
        g_num: Sequence[int] = (),
        g_den: Sequence[int] = (1,),
    ):
        if not is_prime(p):
            raise NotPrime("%d is not prime." % p)
        self._p = p
        self._f_num = _trim(f_num, p)
        self._f_den = _trim(f_den, p)
        self._g_num = _trim(g_num, p)
        self._g_den = _trim(g_den, p)
        if not self._f_den or not self._g_den:
            raise ValueError("denominators must not vanish mod %d." % p)

    @property
    def p(self) -> int:
        return self._p

    @property
    def f(self) -> Tuple[Coefficients, Coefficients]:
        return self._f_num, self._f_den

    @property
    def g(self) -> Tuple[Coefficients, Coefficients]:
        return self._g_num, self._g_den

    def f_value(self, n: int) -> Optional[int]:
        """Returns ``f(n)`` mod p, or None at a pole."""
        return self._evaluate(self._f_num, self._f_den, n)

    def g_value(self, n: int) -> Optional[int]:
        return self._evaluate(self._g_num, self._g_den, n)

    def _evaluate(
        self, num: Coefficients, den: Coefficients, n: int
    ) -> Optional[int]:
        d = _horner(den, n % self._p, self._p)
        if d == 0:
            return None
        value = _horner(num, n % self._p, self._p)
        return value * pow(d, -1, self._p) % self._p

    def is_degenerate(self) -> bool:
        """Returns True if f is constant and g is constant or linear."""
        p = self._p
        width = max(len(self._f_num), len(self._f_den))
        num = list(self._f_num) + [0] * (width - len(self._f_num))
        den = list(self._f_den) + [0] * (width - len(self._f_den))
        # f is constant iff num and den are proportional
        f_constant = all(
            (num[i] * den[j] - num[j] * den[i]) % p == 0
            for i in range(width)
            for j in range(i + 1, width)
        )
        if not self._g_num:
            return f_constant
        quotient, remainder = _poly_divmod(self._g_num, self._g_den, p)
        g_linear = not remainder and len(quotient) <= 2
        return f_constant and g_linear


def mixed_eval(
    chi: DirichletCharacter, pair: RationalFunctionPair, n: int
) -> UnityRoot:
    """Returns ``chi(f(n)) e_p(g(n))`` exactly.

    Poles of ``f`` or ``g`` and zeros of ``f`` map to zero.

    Args:
        chi: character modulo the prime ``pair.p``.
        pair: rational function pair.
        n: argument.

    Returns:
        exact value.

    """
    if chi.q != pair.p:
        raise ValueError("character modulus %d != %d." % (chi.q, pair.p))
    fv = pair.f_value(n)
    gv = pair.g_value(n)
    if fv is None or gv is None:
        return UnityRoot.zero()
    return chi(fv) * UnityRoot.root(gv, pair.p)
