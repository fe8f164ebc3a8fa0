import csv
import io
import json
import math
import os
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..argument_utility import check_report_format
from ..errors import ConfigError, IoFailure

FIELDS = (
    "q",
    "chi",
    "r",
    "H",
    "P",
    "J",
    "lhs",
    "rhs",
    "ratio",
    "m1_ratio",
    "m3_ratio",
    "m4_ratio",
    "n_ratio",
    "total_ratio",
    "flags",
)
CHAIN_FIELDS = FIELDS[9:14]
NO_CHAIN = (math.nan,) * 5


def _ratio(lhs: float, rhs: float) -> float:
    if math.isnan(lhs) or math.isnan(rhs):
        return math.nan
    if lhs == 0:
        return 0.0
    if rhs <= 0:
        return math.inf
    return lhs / rhs


class ReportRow:
    """One measured instance of a sweep.

    Args:
        q: modulus.
        chi: character label, -1 when no character was available.
        r: moment parameter.
        H: interval length.
        P: prime window parameter, 0 when unused.
        J: family size.
        lhs: measured statistic.
        rhs: bound shape.
        chain_ratios: ``m1, m3, m4, n, total`` ratios, NaN when unused.
        flags: flag tokens.

    """

    _q: int
    _chi: int
    _r: int
    _H: int
    _P: int
    _J: int
    _lhs: float
    _rhs: float
    _chain_ratios: Tuple[float, ...]
    _flags: Tuple[str, ...]

    def __init__(
        self,
        q: int,
        chi: int,
        r: int,
        H: int,
        P: int,
        J: int,
        lhs: float,
        rhs: float,
        chain_ratios: Sequence[float] = NO_CHAIN,
        flags: Iterable[str] = (),
    ):
        assert len(chain_ratios) == 5, "five chain ratios are expected."
        self._q = int(q)
        self._chi = int(chi)
        self._r = int(r)
        self._H = int(H)
        self._P = int(P)
        self._J = int(J)
        self._lhs = float(lhs)
        self._rhs = float(rhs)
        self._chain_ratios = tuple(float(v) for v in chain_ratios)
        self._flags = tuple(sorted(set(flags)))

    @property
    def q(self) -> int:
        return self._q

    @property
    def chi(self) -> int:
        return self._chi

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
    def J(self) -> int:
        return self._J

    @property
    def lhs(self) -> float:
        return self._lhs

    @property
    def rhs(self) -> float:
        return self._rhs

    @property
    def ratio(self) -> float:
        return _ratio(self._lhs, self._rhs)

    @property
    def chain_ratios(self) -> Tuple[float, ...]:
        return self._chain_ratios

    @property
    def flags(self) -> Tuple[str, ...]:
        return self._flags

    def has_flag(self, prefix: str) -> bool:
        return any(flag.split("=")[0] == prefix for flag in self._flags)

    def to_dict(self) -> Dict[str, Any]:
        values: List[Any] = [
            self._q,
            self._chi,
            self._r,
            self._H,
            self._P,
            self._J,
            self._lhs,
            self._rhs,
            self.ratio,
        ]
        values.extend(self._chain_ratios)
        values.append(";".join(self._flags))
        return dict(zip(FIELDS, values))

    def sort_key(self) -> Tuple[int, int, int, int, int]:
        return self._q, self._chi, self._r, self._H, self._J

    def __eq__(self, obj: object) -> bool:
        if not isinstance(obj, ReportRow):
            return NotImplemented
        return _canonical(self.to_dict()) == _canonical(obj.to_dict())

    def __repr__(self) -> str:
        return "ReportRow(q=%d, chi=%d, ratio=%r)" % (
            self._q,
            self._chi,
            self.ratio,
        )


def _canonical(row: Dict[str, Any]) -> Dict[str, Any]:
    # NaN compares unequal to itself
    return {
        k: "nan" if isinstance(v, float) and math.isnan(v) else v
        for k, v in row.items()
    }


def sort_rows(rows: Iterable[ReportRow]) -> List[ReportRow]:
    return sorted(rows, key=lambda row: row.sort_key())


def _csv_value(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_report(rows: Iterable[ReportRow], format: str = "csv") -> str:
    """Returns the report text of ``rows`` after sorting them.

    Args:
        rows: report rows.
        format: ``csv`` or ``json``.

    Returns:
        report text with LF line endings.

    """
    check_report_format(format)
    ordered = sort_rows(rows)
    if format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(FIELDS)
        for row in ordered:
            writer.writerow([_csv_value(v) for v in row.to_dict().values()])
        return buffer.getvalue()
    payload = [
        {k: _json_value(v) for k, v in row.to_dict().items()}
        for row in ordered
    ]
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def emit_report(rows: Iterable[ReportRow], format: str, path: str) -> None:
    """Writes the sorted report of ``rows`` to ``path``.

    .. code-block:: python

        emit_report(rows, "csv", "theorem.csv")
        emit_report(rows, "json", "theorem.json")

    """
    text = render_report(rows, format)
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise IoFailure("cannot write %s: %s" % (path, e))


def _row_from_dict(values: Dict[str, Any]) -> ReportRow:
    def number(key: str) -> float:
        value = values.get(key)
        if value is None or value == "":
            return math.nan
        return float(value)

    flags = values.get("flags") or ""
    try:
        return ReportRow(
            q=int(values["q"]),
            chi=int(values["chi"]),
            r=int(values["r"]),
            H=int(values["H"]),
            P=int(values["P"]),
            J=int(values["J"]),
            lhs=number("lhs"),
            rhs=number("rhs"),
            chain_ratios=[number(key) for key in CHAIN_FIELDS],
            flags=[flag for flag in flags.split(";") if flag],
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError("malformed report row %r: %s" % (values, e))


def load_report(path: str, format: Optional[str] = None) -> List[ReportRow]:
    """Reads a CSV or JSON report back into rows.

    The format is taken from the file extension when not given.

    """
    if format is None:
        extension = os.path.splitext(path)[1].lower()
        format = "json" if extension == ".json" else "csv"
    check_report_format(format)
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            if format == "json":
                records = json.load(f)
            else:
                records = list(csv.DictReader(f))
    except OSError as e:
        raise IoFailure("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise ConfigError("%s is not a JSON report: %s" % (path, e))
    return [_row_from_dict(record) for record in records]
