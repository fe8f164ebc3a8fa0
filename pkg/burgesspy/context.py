from contextlib import contextmanager
from typing import Iterator, List

from .errors import BudgetExceeded

DEFAULT_BUDGET = 10 ** 8

BUDGET_STACK: List[int] = [DEFAULT_BUDGET]


def get_budget() -> int:
    return BUDGET_STACK[-1]


@contextmanager
def budget(n_ops: int) -> Iterator[None]:
    """Temporarily sets the elementary operation budget.

    .. code-block:: python

        from burgesspy.context import budget
        from burgesspy.meanvalue import moment_max

        with budget(10 ** 9):
            value = moment_max(table, H=2000, r=2)

    Args:
        n_ops: maximum number of elementary operations per guarded call.

    """
    assert n_ops > 0, "budget must be positive."
    BUDGET_STACK.append(int(n_ops))
    try:
        yield
    finally:
        BUDGET_STACK.pop(-1)


def check_budget(n_ops: int, what: str) -> None:
    limit = get_budget()
    if n_ops > limit:
        raise BudgetExceeded(
            "%s needs %d operations (budget %d)." % (what, n_ops, limit)
        )
