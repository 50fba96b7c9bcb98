"""Bi-orthogonal continuous wavelet transform on the half-line, applied to
the relativistic hydrogen-like radial problem.

Submodules
----------
special
    ln Gamma, principal powers, terminating hypergeometric series.
transform
    Forward transform, half-plane norms and analytic diagnostics.
inverse
    Reconstruction from closed-form coefficient fields.
dirac
    Quantised energies, matrix relations and eigenfunctions.
verification
    Invariant checks behind ``halfwave verify``.
"""
from . import dirac, inverse, special, transform, verification
from .errors import (
    AccuracyError,
    BranchCutError,
    ConsistencyError,
    DomainError,
    HalfPlaneError,
    HalfwaveError,
    PathError,
    SupercriticalError,
    UnphysicalStateError,
)

__version__ = "0.1.0"

__all__ = [
    "special", "transform", "inverse", "dirac", "verification",
    "HalfwaveError", "DomainError", "HalfPlaneError", "BranchCutError", "PathError",
    "SupercriticalError", "UnphysicalStateError", "AccuracyError", "ConsistencyError",
    "__version__",
]
