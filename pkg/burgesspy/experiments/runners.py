import math
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from sklearn.linear_model import LinearRegression
from tqdm import tqdm

from ..arith import factorize
from ..burgess import (
    BurgessInstance,
    ChainReport,
    SpacedFamily,
    choose_P,
    count_M_brute_force,
    main_lemma_shape,
    verify_chain,
)
from ..characters import DirichletCharacter
from ..context import budget
from ..errors import (
    BurgessError,
    HardCheckFailed,
    HTooSmall,
    InsufficientSpread,
    PRangeEmpty,
)
from ..logger import BurgessLogger
from ..sums import build_prefix, max_partials
from .config import ExperimentConfig
from .report import CHAIN_FIELDS, ReportRow, sort_rows
from .sampling import (
    character_rng,
    sample_spaced_family,
    select_characters,
    select_moduli,
)

ORACLE_MAX_Q = 500
ORACLE_MISMATCH = "oracle_mismatch"
NO_CHARACTER = "no_primitive_character"
HARD_FAILURE_FLAGS = (
    ChainReport.N_CHECK,
    ChainReport.M2_CHECK,
    ORACLE_MISMATCH,
)

Instance = Tuple[int, Optional[DirichletCharacter], np.random.RandomState]


def hypothesis_flags(q: int, r: int, H: int) -> List[str]:
    """Returns the flags of the conditions under which the theorem applies.

    ``hyp_i`` is ``r = 1``, ``hyp_ii`` is ``r <= 3`` with
    ``H > q^{1/(2r)}`` and ``hyp_iii`` is a cube-free ``q`` with
    ``H > q^{1/(2r)}``. Rows meeting none are flagged
    ``hypothesis_violated``.

    """
    long_enough = H ** (2 * r) > q
    flags = []
    if r == 1:
        flags.append("hyp_i")
    if r <= 3 and long_enough:
        flags.append("hyp_ii")
    if long_enough and factorize(q).is_cube_free():
        flags.append("hyp_iii")
    if not flags:
        flags.append("hypothesis_violated")
    return flags


def theorem_exponent(r: int, alpha: float) -> float:
    """Returns the q-exponent of ``H^{3r-3} q^{3/4+3/(4r)}`` at H = q^alpha."""
    return alpha * (3 * r - 3) + 0.75 + 0.75 / r


def burgess_exponent(r: int, alpha: float) -> float:
    """Returns the q-exponent of the classical bound at ``H = q^alpha``.

    The bound is ``H^{1-1/r} q^{(r+1)/(4r^2)}``.

    """
    return alpha * (1.0 - 1.0 / r) + (r + 1) / (4.0 * r * r)


def count_large_values(
    maxima: Sequence[float], H: int, q: int, r: int, eps: float
) -> int:
    """Counts maximal sums reaching ``H^{1-1/r} q^{(r+1)/(4r^2) - eps}``."""
    threshold = H ** (1.0 - 1.0 / r) * q ** ((r + 1) / (4.0 * r * r) - eps)
    return int(np.count_nonzero(np.asarray(maxima) >= threshold))


def dyadic_classify(values: Sequence[float], r: int) -> Dict[int, int]:
    """Groups ``value^r`` into dyadic classes ``(V/2, V]``.

    Values with ``value^r <= 1`` share the class ``V = 1``.

    .. code-block:: python

        dyadic_classify([3.0, 1.2, 0.0], 2)  # {16: 1, 2: 1, 1: 1}

    """
    classes: Dict[int, int] = {}
    for value in values:
        if value < 0:
            raise ValueError("values must be non-negative.")
        x = float(value) ** r
        if x <= 1.0:
            V = 1
        else:
            mantissa, exponent = math.frexp(x)
            # x = mantissa 2^exponent with mantissa in [1/2, 1)
            V = 2 ** exponent if mantissa > 0.5 else 2 ** (exponent - 1)
        classes[V] = classes.get(V, 0) + 1
    return classes


STATISTICS: Dict[str, Callable[[ReportRow], float]] = {
    "lhs": lambda row: row.lhs,
    "max": lambda row: (row.lhs / row.J) ** (1.0 / (3 * row.r)),
    "normalized_max": lambda row: (row.lhs / row.J) ** (1.0 / (3 * row.r))
    / row.H ** (1.0 - 1.0 / row.r),
}


def fit_exponent(
    rows: Sequence[ReportRow], statistic: str = "lhs"
) -> Tuple[float, float]:
    """Fits ``log(statistic) = slope log(q) + intercept`` by least squares.

    Rows with a non-finite or non-positive statistic are skipped.

    Args:
        rows: theorem rows at fixed H rule and r.
        statistic: ``lhs``, ``max`` (typical maximal sum) or
            ``normalized_max`` (maximal sum over ``H^{1-1/r}``).

    Returns:
        tuple of slope and intercept.

    """
    if statistic not in STATISTICS:
        raise ValueError("unknown statistic %s." % statistic)
    points = []
    for row in rows:
        if not (math.isfinite(row.lhs) and row.lhs > 0 and row.J > 0):
            continue
        value = STATISTICS[statistic](row)
        if math.isfinite(value) and value > 0:
            points.append((math.log(row.q), math.log(value)))
    if len(points) < 3:
        raise InsufficientSpread("%d usable rows, 3 needed." % len(points))
    x = np.array([p[0] for p in points]).reshape(-1, 1)
    y = np.array([p[1] for p in points])
    if x.max() - x.min() < math.log(10.0) - 1e-12:
        raise InsufficientSpread("rows span less than one decade in q.")
    model = LinearRegression()
    model.fit(x, y)
    return float(model.coef_[0]), float(model.intercept_)


def _instances(config: ExperimentConfig) -> Iterator[Instance]:
    for q in select_moduli(config):
        rng = character_rng(config.seed, q)
        characters = select_characters(q, config, rng)
        if not characters:
            yield q, None, rng
        for chi in characters:
            yield q, chi, character_rng(config.seed, q, chi.index)


def _family(
    config: ExperimentConfig, q: int, H: int, rng: np.random.RandomState
) -> SpacedFamily:
    if config.points is not None:
        return SpacedFamily(q, H, config.points)
    return sample_spaced_family(q, H, config.J, rng)


def _failed_row(
    config: ExperimentConfig,
    q: int,
    chi: Optional[DirichletCharacter],
    H: int,
    P: int,
    flags: List[str],
) -> ReportRow:
    return ReportRow(
        q,
        -1 if chi is None else chi.index,
        config.r,
        H,
        P,
        config.J,
        math.nan,
        math.nan,
        flags=flags,
    )


def _optional_P(q: int, H: int, r: int, flags: List[str]) -> int:
    try:
        choice = choose_P(q, H, r)
    except (HTooSmall, PRangeEmpty):
        return 0
    if choice.oversized:
        flags.append("p_oversized")
    return choice.P


def _log_row(
    logger: Optional[BurgessLogger], step: int, metrics: Dict[str, float]
) -> None:
    if logger is None:
        return
    for name, value in metrics.items():
        logger.add_metric(name, value)
    logger.commit(step)


def _theorem_row(
    config: ExperimentConfig,
    q: int,
    chi: Optional[DirichletCharacter],
    rng: np.random.RandomState,
) -> Tuple[ReportRow, Dict[str, float]]:
    r, H = config.r, config.H(q)
    flags = hypothesis_flags(q, r, H)
    if chi is None:
        return _failed_row(config, q, chi, H, 0, flags + [NO_CHARACTER]), {}
    try:
        family = _family(config, q, H, rng)
        maxima = max_partials(build_prefix(chi), np.asarray(family.points), H)
    except BurgessError as e:
        row = _failed_row(config, q, chi, H, 0, flags + [type(e).__name__])
        return row, {}
    P = _optional_P(q, H, r, flags)
    lhs = float(np.sum(maxima ** (3 * r)))
    unslacked = float(H) ** (3 * r - 3) * q ** (0.75 + 0.75 / r)
    rhs = unslacked * q ** config.eps_slack
    flags.append(
        "large_values=%d"
        % count_large_values(maxima, H, q, r, config.eps_slack)
    )
    if lhs / rhs > config.ratio_cap:
        flags.append("ratio_above_cap")
    row = ReportRow(q, chi.index, r, H, P, config.J, lhs, rhs, flags=flags)
    return row, {"ratio": row.ratio, "unslacked_ratio": lhs / unslacked}


def _chain_row(
    config: ExperimentConfig,
    q: int,
    chi: Optional[DirichletCharacter],
    rng: np.random.RandomState,
) -> Tuple[ReportRow, Dict[str, float]]:
    r, H = config.r, config.H(q)
    flags = hypothesis_flags(q, r, H)
    if chi is None:
        return _failed_row(config, q, chi, H, 0, flags + [NO_CHARACTER]), {}
    P = 0
    try:
        choice = choose_P(q, H, r)
        P = choice.P
        if choice.oversized:
            flags.append("p_oversized")
        family = _family(config, q, H, rng)
        inst = BurgessInstance(chi, r, H, P, family, build_prefix(chi))
        report = verify_chain(inst)
        if config.oracle and q <= ORACLE_MAX_Q:
            M, M1 = count_M_brute_force(inst)
            d = report.decomposition
            matches = (M, M1) == (d.M, d.M1)
            flags.append("oracle_ok" if matches else ORACLE_MISMATCH)
    except BurgessError as e:
        row = _failed_row(config, q, chi, H, P, flags + [type(e).__name__])
        return row, {}
    d = report.decomposition
    flags.extend(report.failed_checks())
    if report.exceeds_cap(config.ratio_cap):
        flags.append("chain_ratio_above_cap")
    if d.ell_divides_delta:
        flags.append("ell_divides_delta=%d" % d.ell_divides_delta)
    if d.direction_mismatches:
        flags.append("direction_mismatch=%d" % d.direction_mismatches)
    row = ReportRow(
        q,
        chi.index,
        r,
        H,
        P,
        config.J,
        report.second_moment,
        report.n_bound,
        chain_ratios=report.ratios(),
        flags=flags,
    )
    metrics = dict(zip(CHAIN_FIELDS, report.ratios()))
    metrics["big_ratio"] = report.big_ratio
    return row, metrics


def _lemma_row(
    config: ExperimentConfig,
    q: int,
    chi: Optional[DirichletCharacter],
    rng: np.random.RandomState,
) -> Tuple[ReportRow, Dict[str, float]]:
    r, H = config.r, config.H(q)
    flags = hypothesis_flags(q, r, H)
    if H ** (2 * r) <= q:
        flags.append(HTooSmall.__name__)
    if chi is None:
        return _failed_row(config, q, chi, H, 0, flags + [NO_CHARACTER]), {}
    try:
        family = _family(config, q, H, rng)
        maxima = max_partials(build_prefix(chi), np.asarray(family.points), H)
    except BurgessError as e:
        row = _failed_row(config, q, chi, H, 0, flags + [type(e).__name__])
        return row, {}
    P = _optional_P(q, H, r, flags)
    lhs = float(np.sum(maxima ** r))
    unslacked = main_lemma_shape(q, H, config.J, r)
    rhs = unslacked * q ** config.eps_slack
    if lhs / rhs > config.ratio_cap:
        flags.append("ratio_above_cap")
    row = ReportRow(q, chi.index, r, H, P, config.J, lhs, rhs, flags=flags)
    return row, {"ratio": row.ratio, "unslacked_ratio": lhs / unslacked}


RowBuilder = Callable[
    [
        ExperimentConfig,
        int,
        Optional[DirichletCharacter],
        np.random.RandomState,
    ],
    Tuple[ReportRow, Dict[str, float]],
]


def _run(
    name: str,
    build: RowBuilder,
    config: ExperimentConfig,
    logger: Optional[BurgessLogger],
    show_progress: bool,
) -> List[ReportRow]:
    rows = []
    instances = list(_instances(config))
    with budget(config.budget):
        iterator = tqdm(instances, desc=name, disable=not show_progress)
        for step, (q, chi, rng) in enumerate(iterator):
            if logger is None:
                row, metrics = build(config, q, chi, rng)
            else:
                with logger.measure_time("row"):
                    row, metrics = build(config, q, chi, rng)
            rows.append(row)
            _log_row(logger, step, metrics)
    return sort_rows(rows)


def run_theorem_check(
    config: ExperimentConfig,
    logger: Optional[BurgessLogger] = None,
    show_progress: bool = False,
) -> List[ReportRow]:
    """Measures the spaced maximal-sum moment against the theorem's bound.

    For every sampled ``(q, chi)`` a spaced family is drawn and
    ``sum_j max_{h <= H} |S(N_j; h)|^{3r}`` is compared with
    ``H^{3r-3} q^{3/4+3/(4r)+eps_slack}``. Failures become flagged rows.

    .. code-block:: python

        from burgesspy.experiments import ExperimentConfig, run_theorem_check

        config = ExperimentConfig(q_range=(1000, 100000), r=2, J=3)
        rows = run_theorem_check(config, show_progress=True)

    Args:
        config: sweep configuration.
        logger: optional logger receiving per-row ratios.
        show_progress: show a progress bar.

    Returns:
        rows sorted by modulus and character label.

    """
    return _run("theorem", _theorem_row, config, logger, show_progress)


def run_chain_check(
    config: ExperimentConfig,
    logger: Optional[BurgessLogger] = None,
    show_progress: bool = False,
) -> List[ReportRow]:
    """Runs the counting chain on every sampled instance.

    Rows carry ``N`` against ``(floor(H/P) + 1) M`` as ``lhs``/``rhs`` and
    the five chain ratios. Failed exact checks are recorded as flags.

    """
    return _run("chain", _chain_row, config, logger, show_progress)


def run_lemma_check(
    config: ExperimentConfig,
    logger: Optional[BurgessLogger] = None,
    show_progress: bool = False,
) -> List[ReportRow]:
    """Measures ``sum_j max_{h <= H} |S(N_j; h)|^r`` against its bound."""
    return _run("lemma", _lemma_row, config, logger, show_progress)


def has_hard_failure(rows: Sequence[ReportRow]) -> bool:
    return any(
        row.has_flag(flag) for row in rows for flag in HARD_FAILURE_FLAGS
    )


def raise_for_hard_failures(rows: Sequence[ReportRow]) -> None:
    failed = [row for row in rows if has_hard_failure([row])]
    if failed:
        labels = ", ".join("q=%d chi=%d" % (row.q, row.chi) for row in failed)
        raise HardCheckFailed("exact integer check failed for %s." % labels)
