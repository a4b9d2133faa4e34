"""Exact quantum-measure toolkit for the n-site hopper."""

from .cyclotomic import CycNum, cyclotomic_poly, root_power
from .events import (
    TimeFiniteEvent,
    canonical,
    complement,
    cylinder,
    defining_time,
    empty_event,
    full_event,
    initial_sites,
    intersect,
    refine,
    restrict_final,
    union,
)
from .hopper import InitialState, Model, path_amplitude, path_phase, transfer_phase
from .measure import (
    MeasureResult,
    PhaseCountTable,
    decoherence,
    is_null,
    is_null_universal,
    measure,
    phase_counts,
    phase_counts_brute,
)
from .spectral import (
    UnitaryPower,
    eigensystem,
    gauss_sum,
    matrix_power_exact,
    periodicity_class,
)
from .stymie import (
    StymieCertificate,
    build_null_superset,
    build_null_superset_initial,
    count_lower_bound,
    verify_certificate,
    zigzag_tail,
)

__version__ = "0.1.0"

__all__ = [
    "CycNum",
    "InitialState",
    "MeasureResult",
    "Model",
    "PhaseCountTable",
    "StymieCertificate",
    "TimeFiniteEvent",
    "UnitaryPower",
    "build_null_superset",
    "build_null_superset_initial",
    "canonical",
    "complement",
    "count_lower_bound",
    "cyclotomic_poly",
    "cylinder",
    "decoherence",
    "defining_time",
    "eigensystem",
    "empty_event",
    "full_event",
    "gauss_sum",
    "initial_sites",
    "intersect",
    "is_null",
    "is_null_universal",
    "matrix_power_exact",
    "measure",
    "path_amplitude",
    "path_phase",
    "periodicity_class",
    "phase_counts",
    "phase_counts_brute",
    "refine",
    "restrict_final",
    "root_power",
    "transfer_phase",
    "union",
    "verify_certificate",
    "zigzag_tail",
]
