"""Mellin hypergeometric systems of sparse algebraic equations.

Exact construction of the system of PDEs satisfied by the roots of
``y^m + x_1 y^{m_1} + ... + x_n y^{m_n} - 1 = 0``, its full m^n-dimensional
solution basis by exact recurrence, the algebraic/logarithmic split of the
solution space, and Weyl-algebra verification of the univariate operator
factorizations.
"""

from .profiles import (DimensionReport, ExponentProfile, ProfileError,
                       algebraic_index_set, beukers_heckman_reducible,
                       coset_representatives, dims, index_box, make_profile,
                       missing_index_set, modular_count, relation_basis)
from .rings import (COMPLEX, RATIONAL, CyclotomicField, CyclotomicRing,
                    cyclotomic_field, cyclotomic_polynomial,
                    get_cyclotomic_ring)
from .roots import (EquationInstance, LogSolution, PointJet, RootFindingError,
                    SubspaceWitness, aberth_roots, coset_equation_jets,
                    equation_report, invariant_subspace_witness, lift_jets,
                    log_solution, mellin_residual, origin_instance,
                    relation_check, roots_at_point,
                    scaled_root_identity_check)
from .series import (TruncatedSeries, convenient_basis_series,
                     independence_rank, is_generating, principal_coefficient,
                     principal_series, rotate, scaled_root_series, subseries)
from .weyl import (DiffOperator, LatticeData, ThetaFactorization, ThetaPoly,
                   derivative_factorization, discriminant_poly,
                   equals_up_to_rational_scale, factorization_check,
                   horn_mellin_multiplier, horn_system, lattice_matrices,
                   leading_coefficient, mellin_operator_1d, mellin_system,
                   mellin_system_theta_form, theta_factorization)

__version__ = "0.1.0"

__all__ = [
    "COMPLEX", "RATIONAL", "CyclotomicField", "CyclotomicRing",
    "DiffOperator", "DimensionReport", "EquationInstance", "ExponentProfile",
    "LatticeData", "LogSolution", "PointJet", "ProfileError",
    "RootFindingError", "SubspaceWitness", "ThetaFactorization", "ThetaPoly",
    "TruncatedSeries", "aberth_roots", "algebraic_index_set",
    "beukers_heckman_reducible", "convenient_basis_series",
    "coset_equation_jets", "coset_representatives", "cyclotomic_field",
    "cyclotomic_polynomial", "derivative_factorization", "dims",
    "discriminant_poly", "equals_up_to_rational_scale", "factorization_check",
    "equation_report", "get_cyclotomic_ring", "horn_mellin_multiplier",
    "horn_system", "independence_rank", "index_box",
    "invariant_subspace_witness",
    "is_generating", "lattice_matrices", "leading_coefficient", "lift_jets",
    "log_solution", "make_profile", "mellin_operator_1d", "mellin_residual",
    "mellin_system", "mellin_system_theta_form", "missing_index_set",
    "modular_count", "origin_instance", "principal_coefficient",
    "principal_series", "relation_basis", "relation_check", "roots_at_point",
    "rotate", "scaled_root_identity_check", "scaled_root_series", "subseries",
]
