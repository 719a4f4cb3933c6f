"""Exact and numeric tools for quasi-exactly solvable banded systems at N = 2, 3, 4."""

from .exactpoly import AlgebraicRoot, DivisibilityError, Poly, real_roots
from .msystem import BandedSystem, PVector, build_matrix, residual, tilde
from .oracle import OracleConfig, oracle_compare, oracle_solve
from .secular import (
    ConsistencyError,
    QESolution,
    StructuralError,
    compact_form_4k1,
    conjecture_check,
    couplings_from_root,
    qe_roots,
    secular_poly,
    solutions,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraicRoot",
    "BandedSystem",
    "ConsistencyError",
    "DivisibilityError",
    "OracleConfig",
    "PVector",
    "Poly",
    "QESolution",
    "StructuralError",
    "build_matrix",
    "compact_form_4k1",
    "conjecture_check",
    "couplings_from_root",
    "oracle_compare",
    "oracle_solve",
    "qe_roots",
    "real_roots",
    "residual",
    "secular_poly",
    "solutions",
    "tilde",
]
