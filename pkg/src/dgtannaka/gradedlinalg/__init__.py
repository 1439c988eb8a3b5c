"""Exact graded linear algebra: fields, sparse elimination, complexes."""

from .field import FieldSpec, FieldError, Mod, QQ, GF
from .sparse import Matrix, RREF, rref, rank, Echelon, axpy, add_term, apply_linear, kernel_of_map
from .complexes import (
    Complex, ComplexError, ChainMap, Cohomology, QuasiIsoCertificate, check_complex, cohomology,
    induced_map_on_cohomology, identity_map, zero_complex, direct_sum, tensor_complexes,
    complex_to_json, complex_from_json,
)
from .bicomplex import Bicomplex, LevelSupport, TrustedWindow, total_complex

__all__ = [
    "FieldSpec", "FieldError", "Mod", "QQ", "GF", "Matrix", "RREF", "rref", "rank", "Echelon",
    "axpy", "add_term", "apply_linear", "kernel_of_map", "Complex", "ComplexError", "ChainMap",
    "Cohomology", "QuasiIsoCertificate", "check_complex", "cohomology", "induced_map_on_cohomology",
    "identity_map", "zero_complex", "direct_sum", "tensor_complexes", "complex_to_json", "complex_from_json", "Bicomplex", "LevelSupport",
    "TrustedWindow", "total_complex",
]
