"""Eigenvalue-frequency analysis of sign pattern matrices.

A sign pattern stands for every real matrix with the same entrywise signs.
The package decides, where it can, whether all those matrices have the
same number of real eigenvalues, and builds explicit members of the class
to certify the answer.
"""

__version__ = "0.1.0"

from .errors import (
    CalibrationError,
    CapExceededError,
    InternalInconsistency,
    NumericalFailure,
    PatternParseError,
    PreconditionError,
    SignPatError,
)
from .pattern import QMatrix, Sign, SignPattern, parse_pattern, parse_patterns, render_pattern
from .spectral import EigenFrequency, eigen_frequency, forced_real_root_count, coeff_sign_vector
from .engine import ConsistentProven, InconsistentProven, Undetermined, verdict, sample_frequencies
from .delta import delta_verdict

__all__ = [
    "CalibrationError",
    "CapExceededError",
    "InternalInconsistency",
    "NumericalFailure",
    "PatternParseError",
    "PreconditionError",
    "SignPatError",
    "QMatrix",
    "Sign",
    "SignPattern",
    "parse_pattern",
    "parse_patterns",
    "render_pattern",
    "EigenFrequency",
    "eigen_frequency",
    "forced_real_root_count",
    "coeff_sign_vector",
    "ConsistentProven",
    "InconsistentProven",
    "Undetermined",
    "verdict",
    "sample_frequencies",
    "delta_verdict",
]
