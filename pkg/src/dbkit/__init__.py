"""Verification toolkit for de Branges spaces whose multiplication
operator is not densely defined: model spaces, associated functions,
reproducing kernels, spectra of the canonical selfadjoint extensions,
rank-one perturbation matrices, and the zero-free function criteria.
"""

from .entire import (RealEntireFunction, guarded_ratio, is_real_entire,
                     sharp_eval, validate_hb)
from .errors import DBKError
from .extensions import (MatrixModel, RelationRecordS0, apply_S, apply_S_beta,
                         check_lemma_inner, check_lemma_orthogonality,
                         function_of_S_apply, matrix_model, rank_one_extension,
                         relation_pair_S0, resolvent_s0, verify_generating,
                         verify_rank_one)
from .models import (JacobiData, describe_model, from_jacobi, from_zero_data,
                     oracle_eigensystem, resolve_model)
from .space import (DBSpaceModel, Numerics, SampledFunction, assoc_s, in_space,
                    inner_product, inner_product_quadrature, kernel,
                    kernel_diag, norm_sq, reconstruct)
from .spectra import (SpectrumData, check_interlacing, eigenfunction,
                      find_spectrum, spectral_jumps)
from .zerofree import (ZeroFreeCandidate, U_beta_apply, canonical_product,
                       cartwright_check, check_gauge_identities, gauge_check,
                       partial_fraction_check, residues, summability_stat,
                       theorem43_consistency, uniqueness_check,
                       zero_free_membership)

__all__ = [
    "DBKError", "DBSpaceModel", "JacobiData", "MatrixModel", "Numerics",
    "RealEntireFunction", "RelationRecordS0", "SampledFunction",
    "SpectrumData", "U_beta_apply", "ZeroFreeCandidate", "apply_S",
    "apply_S_beta", "assoc_s", "canonical_product", "cartwright_check",
    "check_gauge_identities", "check_interlacing", "check_lemma_inner",
    "check_lemma_orthogonality", "describe_model", "eigenfunction",
    "find_spectrum", "from_jacobi", "from_zero_data", "function_of_S_apply",
    "gauge_check", "guarded_ratio", "in_space", "inner_product",
    "inner_product_quadrature", "is_real_entire", "kernel", "kernel_diag",
    "matrix_model", "norm_sq", "oracle_eigensystem", "partial_fraction_check",
    "rank_one_extension", "reconstruct", "relation_pair_S0", "residues",
    "resolve_model", "resolvent_s0", "sharp_eval", "spectral_jumps",
    "summability_stat", "theorem43_consistency", "uniqueness_check",
    "validate_hb", "verify_generating", "verify_rank_one",
    "zero_free_membership",
]

__version__ = "0.1.0"
