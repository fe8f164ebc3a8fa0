import math
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .context import check_budget
from .errors import NotPrimitive, OverlapDetected, SpacingViolated
from .sums import PrefixTable, interval_sums, max_partials

DEFAULT_EPS_SLACK = 0.25


class MomentReport:
    """Measured moment against its bound shape.

    ``rhs_shape`` is the bound with implied constant 1 and ``q^eps`` slack.

    Args:
        name: statistic name.
        q: modulus.
        r: moment parameter.
        h: length parameter ``h`` or ``H``.
        lhs: measured value.
        rhs_shape: bound shape.
        hypothesis: True if the parameters satisfy the hypotheses of the
            bound being compared against.

    """

    _name: str
    _q: int
    _r: int
    _h: int
    _lhs: float
    _rhs_shape: float
    _hypothesis: bool

    def __init__(
        self,
        name: str,
        q: int,
        r: int,
        h: int,
        lhs: float,
        rhs_shape: float,
        hypothesis: bool,
    ):
        assert rhs_shape > 0.0, "bound shape must be positive."
        self._name = name
        self._q = q
        self._r = r
        self._h = h
        self._lhs = max(lhs, 0.0)
        self._rhs_shape = rhs_shape
        self._hypothesis = hypothesis

    @property
    def name(self) -> str:
        return self._name

    @property
    def q(self) -> int:
        return self._q

    @property
    def r(self) -> int:
        return self._r

    @property
    def h(self) -> int:
        return self._h

    @property
    def lhs(self) -> float:
        return self._lhs

    @property
    def rhs_shape(self) -> float:
        return self._rhs_shape

    @property
    def ratio(self) -> float:
        return self._lhs / self._rhs_shape

    @property
    def hypothesis(self) -> bool:
        return self._hypothesis

    def get_params(self) -> Dict[str, Any]:
        return {
            "name": self._name,
            "q": self._q,
            "r": self._r,
            "h": self._h,
            "lhs": self._lhs,
            "rhs_shape": self._rhs_shape,
            "ratio": self.ratio,
            "hypothesis": self._hypothesis,
        }

    def __repr__(self) -> str:
        return "MomentReport(%s, q=%d, ratio=%.4g)" % (
            self._name,
            self._q,
            self.ratio,
        )


def _all_starts(q: int) -> np.ndarray:
    return np.arange(1, q + 1, dtype=np.int64)


def moment_full(table: PrefixTable, h: int, r: int) -> float:
    """Returns ``sum_{n=1}^{q} |S(n; h)|^{2r}``.

    .. code-block:: python

        moment_full(build_prefix(quadratic_character(7)), 2, 1)  # 10.0

    """
    if r < 1:
        raise ValueError("r must be positive.")
    check_budget(table.q * h, "full moment")
    sums = interval_sums(table, _all_starts(table.q), h)
    return float(np.sum(np.abs(sums) ** (2 * r)))


def moment_max(table: PrefixTable, H: int, r: int) -> float:
    """Returns ``sum_{n=1}^{q} max_{h <= H} |S(n; h)|^{2r}``."""
    if r < 1:
        raise ValueError("r must be positive.")
    check_budget(table.q * H, "maximal moment")
    maxima = max_partials(table, _all_starts(table.q), H)
    return float(np.sum(maxima ** (2 * r)))


def check_spacing(points: Sequence[int], H: int, q: int) -> None:
    """Raises unless ``points`` lie in ``[0, q)`` with gaps of at least H."""
    for i, N in enumerate(points):
        if not 0 <= N < q:
            raise ValueError("point %d outside [0, %d)." % (N, q))
        if i > 0 and N - points[i - 1] < H:
            raise SpacingViolated(
                "gap %d between %d and %d is below H=%d."
                % (N - points[i - 1], points[i - 1], N, H)
            )


def spaced_max_moment(
    table: PrefixTable, points: Sequence[int], H: int, r: int
) -> float:
    """Returns ``sum_j max_{h <= H} |S(N_j; h)|^{2r}`` over a spaced family."""
    check_spacing(points, H, table.q)
    check_budget(len(points) * H, "spaced moment")
    starts = np.asarray(points, dtype=np.int64)
    return float(np.sum(max_partials(table, starts, H) ** (2 * r)))


def disjoint_second_moment(
    table: PrefixTable, intervals: Sequence[Tuple[int, int]]
) -> float:
    """Returns ``sum_j |S(M_j; h_j)|^2`` over disjoint ``(M_j, M_j + h_j]``."""
    ordered = sorted((int(M), int(h)) for M, h in intervals)
    for M, h in ordered:
        if M < 0 or h < 0 or M + h > table.q:
            raise ValueError("interval (%d, %d] leaves (0, q]." % (M, M + h))
    for (M1, h1), (M2, _) in zip(ordered, ordered[1:]):
        if M2 < M1 + h1:
            raise OverlapDetected(
                "(%d, %d] overlaps (%d, ...]." % (M1, M1 + h1, M2)
            )
    total = 0.0
    for M, h in ordered:
        total += float(abs(interval_sums(table, np.array([M]), h)[0]) ** 2)
    return total


def polya_vinogradov_max(table: PrefixTable) -> float:
    """Returns ``max_{N <= q} |chi(1) + ... + chi(N)|`` for primitive chi."""
    if table.pair is not None or not table.character.is_primitive():
        raise NotPrimitive("%r is not primitive." % table.character)
    return float(np.max(np.abs(table.prefix[1:])))


def _lemma_shape(q: int, h: int, r: int) -> float:
    if r == 1:
        return float(q * h)
    return q * float(h) ** r + math.sqrt(q) * float(h) ** (2 * r)


def _primitive_plain(table: PrefixTable) -> bool:
    return table.pair is None and table.character.is_primitive()


def lemma1_report(
    table: PrefixTable, h: int, r: int, eps: float = 0.0
) -> MomentReport:
    q = table.q
    hypothesis = _primitive_plain(table) and (
        r == 1
        or table.character.factorization.is_cube_free()
        or r == 2
        or (r == 3 and h ** 6 <= q)
    )
    return MomentReport(
        "full_moment",
        q,
        r,
        h,
        moment_full(table, h, r),
        _lemma_shape(q, h, r) * q ** eps,
        hypothesis,
    )


def lemma2_report(
    table: PrefixTable, H: int, r: int, eps: float = 0.0
) -> MomentReport:
    q = table.q
    hypothesis = _primitive_plain(table) and (
        r == 1 or table.character.factorization.is_cube_free() or 2 <= r <= 3
    )
    return MomentReport(
        "maximal_moment",
        q,
        r,
        H,
        moment_max(table, H, r),
        _lemma_shape(q, H, r) * q ** eps,
        hypothesis,
    )


def lemma3_report(
    table: PrefixTable, points: Sequence[int], H: int
) -> MomentReport:
    q = table.q
    return MomentReport(
        "spaced_moment",
        q,
        1,
        H,
        spaced_max_moment(table, points, H, 1),
        q * max(math.log(q), 1.0) ** 2,
        _primitive_plain(table),
    )


def disjoint_report(
    table: PrefixTable,
    intervals: Sequence[Tuple[int, int]],
    eps: float = DEFAULT_EPS_SLACK,
) -> MomentReport:
    q = table.q
    return MomentReport(
        "disjoint_moment",
        q,
        1,
        max((h for _, h in intervals), default=0),
        disjoint_second_moment(table, intervals),
        float(q) ** (1.0 + eps),
        table.pair is not None or table.character.is_primitive(),
    )


def polya_vinogradov_report(table: PrefixTable) -> MomentReport:
    q = table.q
    return MomentReport(
        "polya_vinogradov",
        q,
        1,
        q,
        polya_vinogradov_max(table),
        math.sqrt(q) * max(math.log(q), 1.0),
        True,
    )


def moment_reports(
    table: PrefixTable, h: int, r: int, eps: float = 0.0
) -> List[MomentReport]:
    """Returns every moment report that applies to ``table`` at ``(h, r)``."""
    reports = [
        lemma1_report(table, h, r, eps),
        lemma2_report(table, h, r, eps),
    ]
    if _primitive_plain(table):
        reports.append(polya_vinogradov_report(table))
    return reports
