"""Structured eigensolver for the Kac-Murdock-Szego matrices K_n(rho) = [rho^|j-k|]."""

from .approx import ApproxReport, large_eigs, near_one_eigs, regula_falsi_lambda, regula_falsi_mu
from .chebpoly import ZeroType, char_poly_eval, classify_zero, poly_c, poly_p2n, poly_s
from .classify import MatrixClassReport, classify_params, greens_factors, verify_class_bruteforce
from .complexspectrum import (
    ComplexEigenPair,
    DoubleEigenLocus,
    complex_spectrum,
    distance_to_symbol_range,
    double_eigen_loci,
    p2n_zeros,
)
from .errors import KmsError
from .matrix import KmsParams, SymbolRange, build_kms, kms_determinant, kms_inverse, symbol_range, symbol_sigma
from .oracle import oracle_eig
from .realspectrum import EigenClass, EigenPair, MuRoot, RootKind, SpectrumResult, real_spectrum, solve_mu

__all__ = [
    "ApproxReport",
    "ComplexEigenPair",
    "DoubleEigenLocus",
    "EigenClass",
    "EigenPair",
    "KmsError",
    "KmsParams",
    "MatrixClassReport",
    "MuRoot",
    "RootKind",
    "SpectrumResult",
    "SymbolRange",
    "ZeroType",
    "build_kms",
    "char_poly_eval",
    "classify_params",
    "classify_zero",
    "complex_spectrum",
    "distance_to_symbol_range",
    "double_eigen_loci",
    "greens_factors",
    "kms_determinant",
    "kms_inverse",
    "large_eigs",
    "near_one_eigs",
    "oracle_eig",
    "p2n_zeros",
    "poly_c",
    "poly_p2n",
    "poly_s",
    "real_spectrum",
    "regula_falsi_lambda",
    "regula_falsi_mu",
    "solve_mu",
    "symbol_range",
    "symbol_sigma",
    "verify_class_bruteforce",
]
