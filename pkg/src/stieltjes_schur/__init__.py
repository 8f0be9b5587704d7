"""Exact diagonal Schur algorithm for one- and multidimensional Stieltjes moment problems."""

from .cf_resolvent import (ContinuedFraction, FactorizationCheck, ResolventMatrix, StieltjesPair,
                           Tail, cf_expand, decode_atoms, factor_list, factor_product, l_factor,
                           m_factor, moebius_apply, resolvent_factorization_check,
                           resolvent_matrix, stieltjes_polynomials)
from .convergence import (IndeterminacyReport, ab_polynomials, indeterminacy_report,
                          indeterminacy_sums_ab, indeterminacy_sums_ml)
from .errors import (FormulaInapplicable, NoNormalIndex, SchurError, SeriesDivisionError,
                     SingularMatrix, SingularStep, Truncated)
from .exact_algebra import (LowerToeplitz, Polynomial, Rational, TruncatedLaurentSeries,
                            format_rational, multinomial, series_div, series_from_moments,
                            series_mul, to_rational, toeplitz_multiply, toeplitz_solve)
from .hankel_indices import (MomentSequence, NormalIndexSet, Regularity, as_moment_sequence,
                             hankel_det, interlacing_holds, is_regular, normal_indices,
                             shifted_hankel_det)
from .measure_oracle import (DiscreteMeasure, VerificationReport, moments, random_measure,
                             roundtrip_verify, stieltjes_series)
from .multidiag import (DiagonalSequence, DiagonalSolution, FullSolution, MomentTensor,
                        assemble_full, decompose_best, diagonal_extract, diagonal_support_check,
                        multivariate_expansion, partition_support, solve_diagonal, unweight)
from .schur_engine import (AtomAB, AtomML, MLDecomposition, ShiftedSequence, TailSpec,
                           admissible_length, decompose_ml_by_determinants,
                           recursive_sequence_via_determinant, recursive_sequence_via_series,
                           schur_decompose_ab, schur_decompose_ml, schur_step_ab)

__version__ = "0.1.0"

__all__ = [
    "AtomAB", "AtomML", "ContinuedFraction", "DiagonalSequence", "DiagonalSolution",
    "DiscreteMeasure", "FactorizationCheck", "FormulaInapplicable", "FullSolution",
    "IndeterminacyReport", "LowerToeplitz", "MLDecomposition", "MomentSequence", "MomentTensor",
    "NoNormalIndex", "NormalIndexSet", "Polynomial", "Rational", "Regularity",
    "ResolventMatrix", "SchurError", "SeriesDivisionError", "ShiftedSequence", "SingularMatrix",
    "SingularStep", "StieltjesPair", "Tail", "TailSpec", "Truncated", "TruncatedLaurentSeries",
    "VerificationReport", "ab_polynomials", "admissible_length", "as_moment_sequence",
    "assemble_full", "cf_expand", "decode_atoms", "decompose_best",
    "decompose_ml_by_determinants", "diagonal_extract", "diagonal_support_check", "factor_list",
    "factor_product", "format_rational", "hankel_det", "indeterminacy_report",
    "indeterminacy_sums_ab", "indeterminacy_sums_ml", "interlacing_holds", "is_regular",
    "l_factor", "m_factor", "moebius_apply", "moments", "multinomial", "multivariate_expansion",
    "normal_indices", "partition_support", "random_measure",
    "recursive_sequence_via_determinant", "recursive_sequence_via_series",
    "resolvent_factorization_check", "resolvent_matrix", "roundtrip_verify",
    "schur_decompose_ab", "schur_decompose_ml", "schur_step_ab", "series_div",
    "series_from_moments", "series_mul", "shifted_hankel_det", "solve_diagonal",
    "stieltjes_polynomials", "stieltjes_series", "to_rational", "toeplitz_multiply",
    "toeplitz_solve", "unweight",
]
