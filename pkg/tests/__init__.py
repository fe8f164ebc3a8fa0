import os

import pytest

is_skipping_performance_test = os.environ.get("TEST_PERFORMANCE") != "TRUE"
performance_test = pytest.mark.skipif(
    is_skipping_performance_test, reason="skip full-scale sweeps"
)


def performance_params(values, n_fast):
    """Marks every value after the first ``n_fast`` as a performance test."""
    return [
        value if i < n_fast else pytest.param(value, marks=performance_test)
        for i, value in enumerate(values)
    ]
