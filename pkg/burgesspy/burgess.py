import math
from typing import (
    Any,
    Dict,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from .arith import PrimeWindow, bertrand_prime, is_prime, primes_in_window
from .characters import DirichletCharacter
from .context import check_budget
from .errors import (
    HTooSmall,
    MonotonicityViolated,
    NotPrime,
    NotPrimitive,
    PDividesQ,
    PRangeEmpty,
)
from .lattice import (
    BOX_FACTOR,
    CaseKind,
    CaseTag,
    build_lattice,
    classify_case,
    primitive_direction,
)
from .meanvalue import check_spacing
from .sums import PrefixTable, build_prefix, interval_sum, max_partials


class SpacedFamily:
    """Sorted points ``0 <= N_1 < ... < N_J < q`` with gaps of at least ``H``.

    Args:
        q: modulus.
        H: gap parameter.
        points: the points ``N_j``.

    """

    _q: int
    _H: int
    _points: Tuple[int, ...]

    def __init__(self, q: int, H: int, points: Sequence[int]):
        if H < 1:
            raise ValueError("H must be positive.")
        self._q = q
        self._H = H
        self._points = tuple(int(N) for N in points)
        check_spacing(self._points, H, q)

    @property
    def q(self) -> int:
        return self._q

    @property
    def H(self) -> int:
        return self._H

    @property
    def points(self) -> Tuple[int, ...]:
        return self._points

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self) -> Iterator[int]:
        return iter(self._points)

    def __getitem__(self, index: int) -> int:
        return self._points[index]

    def __repr__(self) -> str:
        return "SpacedFamily(q=%d, H=%d, points=%s)" % (
            self._q,
            self._H,
            self._points,
        )


class ParameterChoice(NamedTuple):
    P: int
    oversized: bool


def _ceil_root_bound(q: int, H: int, r: int, factor: int) -> int:
    # smallest P with P^{2r} q >= (factor H)^{2r}
    target = (factor * H) ** (2 * r)
    P = max(1, int(factor * H * q ** (-1.0 / (2 * r))))
    while P > 1 and (P - 1) ** (2 * r) * q >= target:
        P -= 1
    while P ** (2 * r) * q < target:
        P += 1
    return P


def choose_P(q: int, H: int, r: int) -> ParameterChoice:
    """Returns ``P = ceil(2 H q^{-1/(2r)})`` clipped up to ``ceil((log q)^2)``.

    All comparisons are made in exact integer arithmetic.

    .. code-block:: python

        choose_P(10 ** 6, 10 ** 4, 2)  # (P=633, oversized=False)
        choose_P(10 ** 6, 10 ** 3, 2)  # (P=191, oversized=True)

    Args:
        q: modulus.
        H: interval length with ``H > q^{1/(2r)}``.
        r: moment parameter.

    Returns:
        the parameter and a flag set when ``P > 4 H q^{-1/(2r)}``.

    """
    if r < 1:
        raise ValueError("r must be positive.")
    if H ** (2 * r) <= q:
        raise HTooSmall("H=%d does not exceed q^(1/%d)." % (H, 2 * r))
    P = max(_ceil_root_bound(q, H, r, 2), math.ceil(math.log(q) ** 2))
    if 2 * P >= q:
        raise PRangeEmpty("P=%d is not below q/2." % P)
    oversized = P ** (2 * r) * q > (4 * H) ** (2 * r)
    return ParameterChoice(P, oversized)


class BurgessInstance:
    """Parameters of one run of the shift-and-count argument.

    Args:
        character: primitive character.
        r: moment parameter.
        H: length cap.
        P: prime window parameter; shifts run over primes in ``(P, 2P]``.
        family: spaced family of starting points.
        table: prefix table of ``character``. Built when omitted.
        check_range: enforce ``(log q)^2 <= P < q/2``.

    """

    _character: DirichletCharacter
    _r: int
    _H: int
    _P: int
    _family: SpacedFamily
    _window: PrimeWindow
    _table: Optional[PrefixTable]

    def __init__(
        self,
        character: DirichletCharacter,
        r: int,
        H: int,
        P: int,
        family: SpacedFamily,
        table: Optional[PrefixTable] = None,
        check_range: bool = True,
    ):
        q = character.q
        if not character.is_primitive():
            raise NotPrimitive("%r is not primitive." % character)
        if r < 1 or H < 1 or P < 1:
            raise ValueError("r, H and P must be positive.")
        if family.q != q or family.H != H:
            raise ValueError("family does not match q=%d, H=%d." % (q, H))
        if check_range and not (math.log(q) ** 2 <= P and 2 * P < q):
            raise PRangeEmpty("P=%d outside [(log q)^2, q/2)." % P)
        self._character = character
        self._r = r
        self._H = H
        self._P = P
        self._family = family
        self._window = primes_in_window(P, 2 * P, q)
        self._table = table

    @property
    def character(self) -> DirichletCharacter:
        return self._character

    @property
    def q(self) -> int:
        return self._character.q

    @property
    def r(self) -> int:
        return self._r

    @property
    def H(self) -> int:
        return self._H

    @property
    def P(self) -> int:
        return self._P

    @property
    def family(self) -> SpacedFamily:
        return self._family

    @property
    def points(self) -> Tuple[int, ...]:
        return self._family.points

    @property
    def J(self) -> int:
        return len(self._family)

    @property
    def window(self) -> PrimeWindow:
        return self._window

    @property
    def table(self) -> PrefixTable:
        if self._table is None:
            self._table = build_prefix(self._character)
        return self._table


def shift_decompose_check(
    chi: DirichletCharacter,
    N: int,
    h: int,
    p: int,
    table: Optional[PrefixTable] = None,
) -> Tuple[complex, complex]:
    """Returns both sides of ``S(N;h) = chi(p) sum_{0 <= a < p} S(N'; h')``.

    Here ``N' = floor((N - aq)/p)`` and ``h' = floor((N - aq + h)/p) - N'``.

    .. code-block:: python

        lhs, rhs = shift_decompose_check(quadratic_character(11), 0, 9, 3)
        abs(lhs - rhs) < 1e-9  # True

    """
    q = chi.q
    if not is_prime(p):
        raise NotPrime("%d is not prime." % p)
    if q % p == 0:
        raise PDividesQ("%d divides q=%d." % (p, q))
    if table is None:
        table = build_prefix(chi)
    lhs = interval_sum(table, N, h)
    inner = 0j
    for a in range(p):
        lo = (N - a * q) // p
        hi = (N - a * q + h) // p
        inner += interval_sum(table, lo, hi - lo)
    return lhs, complex(chi(p)) * inner


class IncidenceCounts:
    """Counts ``A(n)`` of triples ``(a, p, N_j)`` near ``n``.

    A triple is counted at ``n`` when ``n <= (N_j - aq)/p < n + H/P``.

    Args:
        offset: the smallest ``n`` represented.
        counts: ``counts[i]`` is ``A(offset + i)``.

    """

    _offset: int
    _counts: np.ndarray

    def __init__(self, offset: int, counts: np.ndarray):
        self._offset = offset
        self._counts = counts
        self._counts.setflags(write=False)

    @property
    def offset(self) -> int:
        return self._offset

    @property
    def counts(self) -> np.ndarray:
        return self._counts

    @property
    def A(self) -> Dict[int, int]:
        return {
            int(i) + self._offset: int(self._counts[i])
            for i in np.nonzero(self._counts)[0]
        }

    @property
    def second_moment(self) -> int:
        """``sum_n A(n)^2``."""
        return int(np.sum(self._counts.astype(np.int64) ** 2))

    def total(self) -> int:
        return int(np.sum(self._counts))

    def __getitem__(self, n: int) -> int:
        i = n - self._offset
        if 0 <= i < self._counts.shape[0]:
            return int(self._counts[i])
        return 0


def incidence_counts(inst: BurgessInstance) -> IncidenceCounts:
    """Computes ``A(n)`` and ``sum_n A(n)^2`` by direct enumeration.

    The window ``n <= x < n + H/P`` with ``x = (N - aq)/p`` is resolved in
    integers: ``n <= floor(x)`` and ``n > (P (N - aq) - H p) / (p P)``.

    """
    q, H, P = inst.q, inst.H, inst.P
    check_budget(inst.window.total() * inst.J, "incidence counts")
    lows: List[np.ndarray] = []
    highs: List[np.ndarray] = []
    for p in inst.window:
        a = np.arange(p, dtype=np.int64)
        for N in inst.points:
            numerator = N - a * q
            highs.append(numerator // p)
            lows.append((P * numerator - H * p) // (p * P) + 1)
    if not lows:
        return IncidenceCounts(0, np.zeros(0, dtype=np.int64))
    lo = np.concatenate(lows)
    hi = np.concatenate(highs)
    # windows shorter than one step may hold no integer n
    nonempty = lo <= hi
    lo, hi = lo[nonempty], hi[nonempty]
    if lo.shape[0] == 0:
        return IncidenceCounts(0, np.zeros(0, dtype=np.int64))
    offset = int(lo.min())
    diff = np.zeros(int(hi.max()) - offset + 2, dtype=np.int64)
    np.add.at(diff, lo - offset, 1)
    np.add.at(diff, hi - offset + 1, -1)
    return IncidenceCounts(offset, np.cumsum(diff)[:-1])


def scaled_points(q: int, H: int, family: SpacedFamily) -> List[int]:
    """Returns ``M_j = floor(N_j ell / q)``, ``ell = bertrand_prime(q, H)``.

    .. code-block:: python

        scaled_points(100, 10, SpacedFamily(100, 10, [0, 10, 20]))  # [0, 1, 2]

    """
    ell = bertrand_prime(q, H)
    points = [N * ell // q for N in family]
    for M1, M2 in zip(points, points[1:]):
        if M2 <= M1:
            raise MonotonicityViolated(
                "scaled points %d, %d are not increasing." % (M1, M2)
            )
    return points


class MDecomposition:
    """Sextuple count split as ``M = M1 + M2`` and ``M2 = M3 + M4``.

    ``M1`` counts solutions with ``p1 = p2``. ``M4`` collects ``M2`` over
    pairs whose lattice falls in the rank-2 case with non-zero ``Delta``,
    ``M3`` the rest of ``M2``.

    """

    _M1: int
    _M3: int
    _M4: int
    _tags: Dict[Tuple[int, int], CaseTag]
    _ell: int
    _ell_divides_delta: int
    _direction_mismatches: int

    def __init__(
        self,
        M1: int,
        M3: int,
        M4: int,
        tags: Dict[Tuple[int, int], CaseTag],
        ell: int,
        ell_divides_delta: int = 0,
        direction_mismatches: int = 0,
    ):
        self._M1 = M1
        self._M3 = M3
        self._M4 = M4
        self._tags = tags
        self._ell = ell
        self._ell_divides_delta = ell_divides_delta
        self._direction_mismatches = direction_mismatches

    @property
    def M(self) -> int:
        return self._M1 + self.M2

    @property
    def M1(self) -> int:
        return self._M1

    @property
    def M2(self) -> int:
        return self._M3 + self._M4

    @property
    def M3(self) -> int:
        return self._M3

    @property
    def M4(self) -> int:
        return self._M4

    @property
    def tags(self) -> Dict[Tuple[int, int], CaseTag]:
        return self._tags

    @property
    def ell(self) -> int:
        return self._ell

    @property
    def ell_divides_delta(self) -> int:
        return self._ell_divides_delta

    @property
    def direction_mismatches(self) -> int:
        return self._direction_mismatches

    def case_counts(self) -> Dict[str, int]:
        counts = {kind.value: 0 for kind in CaseKind}
        for tag in self._tags.values():
            counts[tag.kind.value] += 1
        return counts

    def __repr__(self) -> str:
        return "MDecomposition(M=%d, M1=%d, M3=%d, M4=%d)" % (
            self.M,
            self._M1,
            self._M3,
            self._M4,
        )


def _shifted(N: int, p: int, q: int, scale: int) -> np.ndarray:
    return scale * (N - np.arange(p, dtype=np.int64) * q)


def _count_close(u: np.ndarray, w_sorted: np.ndarray, T: int) -> int:
    upper = np.searchsorted(w_sorted, u + T, side="right")
    lower = np.searchsorted(w_sorted, u - T, side="left")
    return int(np.sum(upper - lower))


def count_M(inst: BurgessInstance) -> MDecomposition:
    """Counts sextuples ``(a1, a2, p1, p2, N_j, N_k)`` with
    ``|(N_j - a1 q)/p1 - (N_k - a2 q)/p2| <= H/P``.

    The condition is checked over the common denominator ``p1 p2 P``:
    ``|p2 (N_j - a1 q) - p1 (N_k - a2 q)| <= floor(H p1 p2 / P)``.
    Each pair ``(N_j, N_k)`` is tagged by the case of its congruence
    lattice, which attributes its ``p1 != p2`` solutions to ``M3`` or ``M4``.

    Args:
        inst: instance.

    Returns:
        decomposition of the count.

    """
    q, H, P = inst.q, inst.H, inst.P
    primes = inst.window.primes
    check_budget(
        inst.J ** 2 * len(primes) * inst.window.total(), "sextuple count"
    )
    ell = bertrand_prime(q, H)
    scaled = scaled_points(q, H, inst.family)
    M1 = M3 = M4 = 0
    ell_divides_delta = 0
    mismatches = 0
    tags: Dict[Tuple[int, int], CaseTag] = {}
    sorted_cache: Dict[Tuple[int, int, int], np.ndarray] = {}
    for j, Nj in enumerate(inst.points):
        for k, Nk in enumerate(inst.points):
            lattice = build_lattice(ell, scaled[j], scaled[k])
            tag = classify_case(lattice, P)
            tags[(j, k)] = tag
            different = 0
            seen: List[Tuple[int, int]] = []
            for p1 in primes:
                for p2 in primes:
                    u = _shifted(Nj, p1, q, p2)
                    key = (k, p2, p1)
                    if key not in sorted_cache:
                        sorted_cache[key] = np.sort(_shifted(Nk, p2, q, p1))
                    n = _count_close(u, sorted_cache[key], H * p1 * p2 // P)
                    if p1 == p2:
                        M1 += n
                    elif n > 0:
                        different += n
                        seen.append((p1, p2))
            if tag.kind is CaseKind.RANK2_DELTA_NONZERO:
                M4 += different
                assert tag.delta is not None
                if tag.delta % ell == 0:
                    ell_divides_delta += 1
            else:
                M3 += different
            if tag.kind is CaseKind.RANK2_DELTA_ZERO:
                b1, b2, _ = lattice.basis
                direction = primitive_direction(b1, b2)
                for p1, p2 in seen:
                    if direction != (p2, p1):
                        mismatches += 1
    return MDecomposition(M1, M3, M4, tags, ell, ell_divides_delta, mismatches)


def count_M_brute_force(inst: BurgessInstance) -> Tuple[int, int]:
    """Returns ``(M, M1)`` by looping over every sextuple."""
    q, H, P = inst.q, inst.H, inst.P
    primes = inst.window.primes
    check_budget((inst.window.total() * inst.J) ** 2, "brute force count")
    M = M1 = 0
    for Nj in inst.points:
        for Nk in inst.points:
            for p1 in primes:
                for p2 in primes:
                    bound = H * p1 * p2
                    for a1 in range(p1):
                        left = p2 * (Nj - a1 * q)
                        for a2 in range(p2):
                            if P * abs(left - p1 * (Nk - a2 * q)) <= bound:
                                M += 1
                                if p1 == p2:
                                    M1 += 1
    return M, M1


def _residues_in_range(c: int, ell: int, lo: int, hi: int) -> int:
    # number of m in [lo, hi] with m = c mod ell
    return (hi - c) // ell - (lo - 1 - c) // ell


def lattice_m2_bound(inst: BurgessInstance) -> int:
    """Returns an exact upper bound for ``M2`` from the congruence lattices.

    Every counted sextuple with ``p1 != p2`` yields a lattice point
    ``(p2, p1, m)`` with ``|m| <= 12P``, and distinct sextuples yield
    distinct points, so ``M2`` never exceeds the number of such points.

    """
    ell = bertrand_prime(inst.q, inst.H)
    scaled = scaled_points(inst.q, inst.H, inst.family)
    B = BOX_FACTOR * inst.P
    primes = inst.window.primes
    total = 0
    for Mj in scaled:
        for Mk in scaled:
            for p1 in primes:
                for p2 in primes:
                    if p1 != p2:
                        c = (p2 * Mj - p1 * Mk) % ell
                        total += _residues_in_range(c, ell, -B, B)
    return total


def main_lemma_shape(q: int, H: int, J: int, r: int) -> float:
    """Returns the bound shape of the maximal-sum moment of order ``r``.

    The shape is ``q^{1/4+1/(4r)} H^{r-1} (J^{2/3} + J E)`` with
    ``E = H^{-1} q^{1/(2r)} + H q^{-1/2-1/(4r)}``.

    """
    return (
        q ** (0.25 + 0.25 / r)
        * float(H) ** (r - 1)
        * (
            J ** (2.0 / 3.0)
            + J * (q ** (0.5 / r) / H + H * q ** (-0.5 - 0.25 / r))
        )
    )


def _ratio(numerator: float, denominator: float) -> float:
    if numerator == 0:
        return 0.0
    if denominator <= 0:
        return math.inf
    return numerator / denominator


class ChainReport:
    """Result of :func:`verify_chain`.

    Hard checks are exact integer inequalities; ratios compare counts with
    their bound shapes at implied constant 1.

    """

    N_CHECK = "n_inequality_failed"
    M2_CHECK = "m2_lattice_bound_failed"

    _second_moment: int
    _decomposition: MDecomposition
    _n_bound: int
    _m2_bound: int
    _m1_ratio: float
    _m3_ratio: float
    _m4_ratio: float
    _n_ratio: float
    _total_ratio: float
    _big_ratio: float

    def __init__(
        self,
        second_moment: int,
        decomposition: MDecomposition,
        n_bound: int,
        m2_bound: int,
        ratios: Sequence[float],
        big_ratio: float,
    ):
        self._second_moment = second_moment
        self._decomposition = decomposition
        self._n_bound = n_bound
        self._m2_bound = m2_bound
        (
            self._m1_ratio,
            self._m3_ratio,
            self._m4_ratio,
            self._n_ratio,
            self._total_ratio,
        ) = ratios
        self._big_ratio = big_ratio

    @property
    def second_moment(self) -> int:
        return self._second_moment

    @property
    def decomposition(self) -> MDecomposition:
        return self._decomposition

    @property
    def n_bound(self) -> int:
        """``(floor(H/P) + 1) M``."""
        return self._n_bound

    @property
    def m2_bound(self) -> int:
        return self._m2_bound

    @property
    def big_ratio(self) -> float:
        return self._big_ratio

    def ratios(self) -> Tuple[float, float, float, float, float]:
        """Returns the ``m1, m3, m4, n, total`` ratios in report order."""
        return (
            self._m1_ratio,
            self._m3_ratio,
            self._m4_ratio,
            self._n_ratio,
            self._total_ratio,
        )

    def failed_checks(self) -> List[str]:
        failed = []
        if self._second_moment > self._n_bound:
            failed.append(self.N_CHECK)
        if self._decomposition.M2 > self._m2_bound:
            failed.append(self.M2_CHECK)
        return failed

    @property
    def hard_checks_pass(self) -> bool:
        return not self.failed_checks()

    def exceeds_cap(self, cap: float) -> bool:
        return any(ratio > cap for ratio in self.ratios())

    def get_params(self) -> Dict[str, Any]:
        d = self._decomposition
        return {
            "second_moment": self._second_moment,
            "M": d.M,
            "M1": d.M1,
            "M2": d.M2,
            "M3": d.M3,
            "M4": d.M4,
            "n_bound": self._n_bound,
            "m2_bound": self._m2_bound,
            "m1_ratio": self._m1_ratio,
            "m3_ratio": self._m3_ratio,
            "m4_ratio": self._m4_ratio,
            "n_ratio": self._n_ratio,
            "total_ratio": self._total_ratio,
            "big_ratio": self._big_ratio,
            "ell_divides_delta": d.ell_divides_delta,
            "direction_mismatches": d.direction_mismatches,
        }


def verify_chain(inst: BurgessInstance) -> ChainReport:
    """Runs the counting chain on ``inst`` and measures every step.

    .. code-block:: python

        report = verify_chain(inst)
        assert report.hard_checks_pass
        m1, m3, m4, n, total = report.ratios()

    Args:
        inst: instance.

    Returns:
        chain report.

    """
    q, H, P, J, r = inst.q, inst.H, inst.P, inst.J, inst.r
    counts = incidence_counts(inst)
    decomposition = count_M(inst)
    M = decomposition.M
    log_q = math.log(q)
    shape3 = (H * P ** 3 / q + 1.0) * J ** 2
    ratios = (
        _ratio(decomposition.M1, P ** 2 * J),
        _ratio(decomposition.M3, shape3),
        _ratio(decomposition.M4, P ** 2 * J ** (2.0 / 3.0) * log_q),
        _ratio(counts.second_moment, H / P * M),
        _ratio(M, shape3 + P ** 2 * J ** (4.0 / 3.0) * log_q),
    )
    maxima = max_partials(inst.table, np.asarray(inst.points), H)
    big = float(np.sum(maxima ** r))
    big_shape = q ** (0.25 + 0.75 / r) * float(H) ** (r - 2) * math.sqrt(M)
    # an empty prime window leaves nothing to compare
    big_ratio = _ratio(big, big_shape) if M > 0 else 0.0
    return ChainReport(
        counts.second_moment,
        decomposition,
        (H // P + 1) * M,
        lattice_m2_bound(inst),
        ratios,
        big_ratio,
    )
