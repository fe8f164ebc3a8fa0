from .config import ExperimentConfig
from .report import ReportRow, emit_report, load_report, render_report
from .runners import (
    burgess_exponent,
    count_large_values,
    dyadic_classify,
    fit_exponent,
    has_hard_failure,
    raise_for_hard_failures,
    run_chain_check,
    run_lemma_check,
    run_theorem_check,
    theorem_exponent,
)
from .sampling import sample_spaced_family, select_characters, select_moduli

__all__ = [
    "ExperimentConfig",
    "ReportRow",
    "emit_report",
    "load_report",
    "render_report",
    "burgess_exponent",
    "count_large_values",
    "dyadic_classify",
    "fit_exponent",
    "has_hard_failure",
    "raise_for_hard_failures",
    "run_chain_check",
    "run_lemma_check",
    "run_theorem_check",
    "theorem_exponent",
    "sample_spaced_family",
    "select_characters",
    "select_moduli",
]
