"""Independent verification paths for the spline pencil solver."""

from __future__ import annotations

from selfspec.oracle.green import green_coefficients, green_matrix, green_spectrum, green_value
from selfspec.oracle.lemmas import (
    DeterminantBoundRecord,
    LemmaInstance,
    PartialProductRecord,
    determinant_bound_check,
    make_lemma_instance,
    partial_products,
)
from selfspec.oracle.suites import (
    SUITES,
    SuiteReport,
    compare_spectra,
    random_atomic_measure,
    random_lemma_instance,
    random_pencil,
    run_suite,
)

__all__ = [
    "SUITES",
    "DeterminantBoundRecord",
    "LemmaInstance",
    "PartialProductRecord",
    "SuiteReport",
    "compare_spectra",
    "determinant_bound_check",
    "green_coefficients",
    "green_matrix",
    "green_spectrum",
    "green_value",
    "make_lemma_instance",
    "partial_products",
    "random_atomic_measure",
    "random_lemma_instance",
    "random_pencil",
    "run_suite",
]
