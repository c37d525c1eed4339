"""Spectra of high-order boundary problems whose weight is the derivative of a self-similar function."""

import logging

from selfspec.asympt import (
    AsymptoticsReport,
    GeometricDiagnostics,
    Regime,
    RegimeDescriptor,
    SideAsymptotics,
    SideLaw,
    classify,
    estimate_tau,
    geometric_check,
)
from selfspec.banded import BandedSymmetricMatrix, ldlt_pivots
from selfspec.errors import (
    DiscretizationError,
    InsufficientDataError,
    OracleError,
    ParameterError,
    SelfSpecError,
    SingularShiftError,
    SpectrumExhaustedError,
)
from selfspec.pencil import (
    EigenList,
    InertiaResult,
    SymmetricPencil,
    count_interval,
    dense_eigs,
    eig_by_index,
    inertia,
    spectrum,
)
from selfspec.selfsim import (
    AtomicMeasure,
    RefinedWeight,
    SimilarityParams,
    StructureReport,
    atoms,
    contraction_profile,
    evaluate,
    first_level_measure,
    l2_distance,
    refine,
    structure,
    validate,
)
from selfspec.settings import DEFAULT_SETTINGS, Settings
from selfspec.spline import (
    BasisValues,
    SplineSpace,
    assemble_stiffness,
    assemble_weight,
    build_space,
    eval_basis,
    quadrature_points,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "DEFAULT_SETTINGS",
    "AsymptoticsReport",
    "AtomicMeasure",
    "BandedSymmetricMatrix",
    "BasisValues",
    "DiscretizationError",
    "EigenList",
    "GeometricDiagnostics",
    "InertiaResult",
    "InsufficientDataError",
    "OracleError",
    "ParameterError",
    "RefinedWeight",
    "Regime",
    "RegimeDescriptor",
    "SelfSpecError",
    "Settings",
    "SideAsymptotics",
    "SideLaw",
    "SimilarityParams",
    "SingularShiftError",
    "SpectrumExhaustedError",
    "SplineSpace",
    "StructureReport",
    "SymmetricPencil",
    "assemble_stiffness",
    "assemble_weight",
    "atoms",
    "build_space",
    "classify",
    "contraction_profile",
    "count_interval",
    "dense_eigs",
    "eig_by_index",
    "estimate_tau",
    "eval_basis",
    "evaluate",
    "first_level_measure",
    "geometric_check",
    "inertia",
    "l2_distance",
    "ldlt_pivots",
    "quadrature_points",
    "refine",
    "spectrum",
    "structure",
    "validate",
]
