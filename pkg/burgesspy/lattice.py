import enum
import math
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import numpy as np

from .arith import is_prime
from .context import check_budget
from .errors import DegenerateInput, NotPrime

INT128_MAX = 2 ** 127 - 1
PRODUCT_CONSTANT = 16
C0 = 32
BOX_FACTOR = 12


def _checked(value: int) -> int:
    if not -INT128_MAX - 1 <= value <= INT128_MAX:
        raise OverflowError("lattice arithmetic left the 128-bit range.")
    return value


class Vec3:
    """Integer vector with sup norm ``|x| = max(|x|, |y|, |z|)``."""

    __slots__ = ("_x", "_y", "_z")

    _x: int
    _y: int
    _z: int

    def __init__(self, x: int, y: int, z: int):
        self._x = _checked(int(x))
        self._y = _checked(int(y))
        self._z = _checked(int(z))

    @property
    def x(self) -> int:
        return self._x

    @property
    def y(self) -> int:
        return self._y

    @property
    def z(self) -> int:
        return self._z

    @property
    def sup_norm(self) -> int:
        return max(abs(self._x), abs(self._y), abs(self._z))

    @property
    def norm2(self) -> int:
        return self._x ** 2 + self._y ** 2 + self._z ** 2

    def as_tuple(self) -> Tuple[int, int, int]:
        return self._x, self._y, self._z

    def dot(self, other: "Vec3") -> int:
        return _checked(
            self._x * other.x + self._y * other.y + self._z * other.z
        )

    def cross(self, other: "Vec3") -> "Vec3":
        return Vec3(
            self._y * other.z - self._z * other.y,
            self._z * other.x - self._x * other.z,
            self._x * other.y - self._y * other.x,
        )

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self._x + other.x, self._y + other.y, self._z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self._x - other.x, self._y - other.y, self._z - other.z)

    def __neg__(self) -> "Vec3":
        return Vec3(-self._x, -self._y, -self._z)

    def __mul__(self, scalar: int) -> "Vec3":
        return Vec3(scalar * self._x, scalar * self._y, scalar * self._z)

    __rmul__ = __mul__

    def __iter__(self) -> Iterator[int]:
        return iter(self.as_tuple())

    def __eq__(self, obj: object) -> bool:
        if isinstance(obj, Vec3):
            return self.as_tuple() == obj.as_tuple()
        return self.as_tuple() == obj

    def __hash__(self) -> int:
        return hash(self.as_tuple())

    def __repr__(self) -> str:
        return "Vec3(%d, %d, %d)" % self.as_tuple()


def det3(a: Vec3, b: Vec3, c: Vec3) -> int:
    return a.dot(b.cross(c))


class Basis3:
    """Three integer vectors spanning a rank-3 lattice."""

    _b1: Vec3
    _b2: Vec3
    _b3: Vec3

    def __init__(self, b1: Vec3, b2: Vec3, b3: Vec3):
        self._b1 = b1
        self._b2 = b2
        self._b3 = b3

    @property
    def b1(self) -> Vec3:
        return self._b1

    @property
    def b2(self) -> Vec3:
        return self._b2

    @property
    def b3(self) -> Vec3:
        return self._b3

    @property
    def vectors(self) -> Tuple[Vec3, Vec3, Vec3]:
        return self._b1, self._b2, self._b3

    def det(self) -> int:
        return det3(self._b1, self._b2, self._b3)

    def norms(self) -> Tuple[int, int, int]:
        return self._b1.sup_norm, self._b2.sup_norm, self._b3.sup_norm

    def norm_product(self) -> int:
        n1, n2, n3 = self.norms()
        return n1 * n2 * n3

    def coefficients(self, x: Vec3) -> Tuple[Fraction, Fraction, Fraction]:
        """Returns exact ``lambda`` with ``x = sum_i lambda_i b_i``."""
        d = self.det()
        if d == 0:
            raise DegenerateInput("basis vectors are dependent.")
        return (
            Fraction(det3(x, self._b2, self._b3), d),
            Fraction(det3(self._b1, x, self._b3), d),
            Fraction(det3(self._b1, self._b2, x), d),
        )

    def __iter__(self) -> Iterator[Vec3]:
        return iter(self.vectors)

    def __eq__(self, obj: object) -> bool:
        if not isinstance(obj, Basis3):
            return NotImplemented
        return self.vectors == obj.vectors

    def __repr__(self) -> str:
        return "Basis3(%r, %r, %r)" % self.vectors


def _round_div(a: int, b: int) -> int:
    # nearest integer to a / b for b > 0, halves rounded up
    return (2 * a + b) // (2 * b)


def _gauss_reduce(u: Vec3, v: Vec3) -> Tuple[Vec3, Vec3]:
    if v.norm2 < u.norm2:
        u, v = v, u
    while True:
        v = v - _round_div(u.dot(v), u.norm2) * u
        if v.norm2 < u.norm2:
            u, v = v, u
        else:
            return u, v


def _reduce_against_plane(w: Vec3, u: Vec3, v: Vec3) -> Vec3:
    # closest vector to w in span(u, v), searched around the real solution
    uu, uv, vv = u.norm2, u.dot(v), v.norm2
    uw, vw = u.dot(w), v.dot(w)
    gram = uu * vv - uv * uv
    c1 = Fraction(uw * vv - vw * uv, gram)
    c2 = Fraction(vw * uu - uw * uv, gram)
    best = w
    for a in range(math.floor(c1) - 1, math.floor(c1) + 3):
        for b in range(math.floor(c2) - 1, math.floor(c2) + 3):
            candidate = w - a * u - b * v
            if candidate.norm2 < best.norm2:
                best = candidate
    return best


def reduce_basis(basis: Basis3) -> Basis3:
    """Returns a greedy Minkowski-reduced basis sorted by sup norm.

    Each round Lagrange-reduces the two shortest vectors and replaces
    the third by its distance to their plane. Rounds repeat while the
    third vector keeps getting shorter than the second.

    .. code-block:: python

        from burgesspy.lattice import Basis3, Vec3, reduce_basis

        basis = Basis3(Vec3(0, 0, 5), Vec3(1, 0, 2), Vec3(0, 1, -1))
        reduced = reduce_basis(basis)
        reduced.norm_product() <= 16 * 5  # True

    Args:
        basis: linearly independent vectors.

    Returns:
        reduced basis with ``|b1| <= |b2| <= |b3|`` in sup norm.

    """
    det = basis.det()
    if det == 0:
        raise DegenerateInput("basis vectors are dependent.")
    vectors: List[Vec3] = list(basis)
    while True:
        vectors.sort(key=lambda vec: vec.norm2)
        u, v = _gauss_reduce(vectors[0], vectors[1])
        w = _reduce_against_plane(vectors[2], u, v)
        vectors = [u, v, w]
        if w.norm2 >= v.norm2:
            break
    vectors.sort(key=lambda vec: vec.sup_norm)
    reduced = Basis3(*vectors)
    assert abs(reduced.det()) == abs(det), "reduction changed the determinant."
    return reduced


def signed_residue(x: int, ell: int) -> int:
    """Returns the residue of ``x`` mod ``ell`` in ``[-ell/2, ell/2)``."""
    return (x + ell // 2) % ell - ell // 2


class CongruenceLattice:
    """Lattice of ``(x, y, z)`` with ``x Mj - y Mk = z (mod ell)``.

    Args:
        ell: prime modulus.
        Mj: first scaled point.
        Mk: second scaled point.
        basis: reduced basis.

    """

    _ell: int
    _Mj: int
    _Mk: int
    _basis: Basis3

    def __init__(self, ell: int, Mj: int, Mk: int, basis: Basis3):
        self._ell = ell
        self._Mj = Mj
        self._Mk = Mk
        self._basis = basis

    @property
    def ell(self) -> int:
        return self._ell

    @property
    def Mj(self) -> int:
        return self._Mj

    @property
    def Mk(self) -> int:
        return self._Mk

    @property
    def basis(self) -> Basis3:
        return self._basis

    def contains(self, x: Vec3) -> bool:
        return (x.x * self._Mj - x.y * self._Mk - x.z) % self._ell == 0

    def det(self) -> int:
        return abs(self._basis.det())


def build_lattice(ell: int, Mj: int, Mk: int) -> CongruenceLattice:
    """Builds the congruence lattice with a reduced basis.

    .. code-block:: python

        lattice = build_lattice(11, 3, 7)
        lattice.det()  # 11

    """
    if not is_prime(ell):
        raise NotPrime("%d is not prime." % ell)
    if not (0 <= Mj < ell and 0 <= Mk < ell):
        raise ValueError("Mj and Mk must lie in [0, %d)." % ell)
    generators = Basis3(
        Vec3(1, 0, signed_residue(Mj, ell)),
        Vec3(0, 1, signed_residue(-Mk, ell)),
        Vec3(0, 0, ell),
    )
    lattice = CongruenceLattice(ell, Mj, Mk, reduce_basis(generators))
    assert lattice.det() == ell, "lattice determinant is not %d." % ell
    assert all(lattice.contains(b) for b in lattice.basis), "basis escaped."
    return lattice


def count_points_in_box(lattice: CongruenceLattice, B: int) -> int:
    """Counts lattice points with sup norm at most ``B``, origin included.

    Coefficients are enumerated within ``|lambda_i| <= sqrt(3) B
    |b_j x b_k| / ell``, which every point of the box satisfies.

    """
    if B < 0:
        raise ValueError("B must be non-negative.")
    b1, b2, b3 = lattice.basis
    ell = lattice.det()
    bounds = []
    for u, v in ((b2, b3), (b3, b1), (b1, b2)):
        bounds.append(math.isqrt(3 * B * B * u.cross(v).norm2) // ell + 1)
    check_budget(
        (2 * bounds[0] + 1) * (2 * bounds[1] + 1) * (2 * bounds[2] + 1),
        "box count",
    )
    grid2, grid3 = np.meshgrid(
        np.arange(-bounds[1], bounds[1] + 1, dtype=np.int64),
        np.arange(-bounds[2], bounds[2] + 1, dtype=np.int64),
        indexing="ij",
    )
    base = [grid2 * c2 + grid3 * c3 for c2, c3 in zip(b2, b3)]
    count = 0
    for l1 in range(-bounds[0], bounds[0] + 1):
        inside = np.ones(grid2.shape, dtype=bool)
        for coordinate, c1 in zip(base, b1):
            inside &= np.abs(coordinate + l1 * c1) <= B
        count += int(np.count_nonzero(inside))
    return count


class CaseKind(enum.Enum):
    B1_LARGE = "b1_large"
    RANK1 = "rank1"
    RANK2_DELTA_ZERO = "rank2_delta_zero"
    RANK2_DELTA_NONZERO = "rank2_delta_nonzero"
    FULL = "full"


class CaseTag:
    """Case of one lattice in the counting argument.

    Rank-2 cases carry ``Delta = x1 y2 - x2 y1``.

    """

    _kind: CaseKind
    _delta: Optional[int]

    def __init__(self, kind: CaseKind, delta: Optional[int] = None):
        self._kind = kind
        self._delta = delta

    @property
    def kind(self) -> CaseKind:
        return self._kind

    @property
    def delta(self) -> Optional[int]:
        return self._delta

    def __eq__(self, obj: object) -> bool:
        if isinstance(obj, CaseKind):
            return self._kind is obj
        if not isinstance(obj, CaseTag):
            return NotImplemented
        return self._kind is obj.kind and self._delta == obj.delta

    def __hash__(self) -> int:
        return hash((self._kind, self._delta))

    def __repr__(self) -> str:
        if self._delta is None:
            return "CaseTag(%s)" % self._kind.name
        return "CaseTag(%s, delta=%d)" % (self._kind.name, self._delta)


def classify_case(lattice: CongruenceLattice, P: int, c0: int = C0) -> CaseTag:
    """Classifies the lattice against the threshold ``T = 12 c0 P``."""
    T = BOX_FACTOR * c0 * P
    b1, b2, b3 = lattice.basis
    if b1.sup_norm > T:
        return CaseTag(CaseKind.B1_LARGE)
    if b2.sup_norm > T:
        return CaseTag(CaseKind.RANK1)
    if b3.sup_norm > T:
        delta = b1.x * b2.y - b2.x * b1.y
        if delta == 0:
            return CaseTag(CaseKind.RANK2_DELTA_ZERO, 0)
        return CaseTag(CaseKind.RANK2_DELTA_NONZERO, delta)
    return CaseTag(CaseKind.FULL)


def primitive_direction(b1: Vec3, b2: Vec3) -> Optional[Tuple[int, int]]:
    """Returns the primitive ``(x, y)`` dividing both ``(x_i, y_i)``.

    The first non-zero component is made positive. Returns None when both
    projections vanish.

    """
    for vec in (b1, b2):
        if vec.x or vec.y:
            g = math.gcd(vec.x, vec.y)
            x, y = vec.x // g, vec.y // g
            if x < 0 or (x == 0 and y < 0):
                x, y = -x, -y
            return x, y
    return None
