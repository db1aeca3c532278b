"""Exact computer algebra for three matrix Heisenberg algebras.

Sparse rational polynomials on the Bargmann space of a general, symmetric,
or antisymmetric matrix of variables; determinantal and Pfaffian operator
identities verified by exhaustive monomial sweeps; extremal-state norms and
matrix elements in closed form, cross-checked against the brute-force
pairing; contracted boson representations as exact sparse matrices; and a
small floating-point RPA solver with a Fock-space oracle.
"""

from .algebra import (AlgebraKind, Monomial, Poly, apply_partial,
                      bargmann_inner, check_heisenberg, format_poly,
                      format_rational, monomials_upto, mul_z, parse_poly,
                      variable, weight)
from .contraction import (GeneratorSpec, SparseRepMatrix, apply_generator,
                          basis_monomials, build_rep_matrices,
                          default_generators, gram_diagonal, h_bracket,
                          h_generators, h_pair_bracket, pair_generators,
                          verify_contraction)
from .determinants import (DiffOp, all_pairings, apply_E, apply_L, apply_R,
                           capelli_rhs_apply, capelli_shift, det_partial,
                           det_z, determinant_value, pfaffian_partial,
                           pfaffian_value, pfaffian_z, verify_capelli)
from .extremal import (ExtremalLabel, RadicalValue, double_factorial,
                       extremal_poly, is_extremal, ladder_eigenvalue,
                       matel_bruteforce, matel_extremal,
                       matel_shifted_weight, matel_step_variable,
                       norm_closed_form, pfaffian_ladder_eigenvalue)
from .report import Report
from .rpa import (FockCutoffError, QuadraticBosonHamiltonian, RpaError,
                  RpaSolution, build_rpa_matrix, fock_oracle, solve_rpa)

__version__ = "0.1.0"

__all__ = [
    "AlgebraKind", "DiffOp", "ExtremalLabel", "FockCutoffError",
    "GeneratorSpec", "Monomial", "Poly", "QuadraticBosonHamiltonian",
    "RadicalValue", "Report", "RpaError", "RpaSolution", "SparseRepMatrix",
    "all_pairings", "apply_E", "apply_L", "apply_R", "apply_generator",
    "apply_partial", "bargmann_inner", "basis_monomials",
    "build_rep_matrices", "build_rpa_matrix", "capelli_rhs_apply",
    "capelli_shift", "check_heisenberg", "default_generators", "det_partial",
    "det_z", "determinant_value", "double_factorial", "extremal_poly",
    "fock_oracle", "format_poly", "format_rational", "gram_diagonal",
    "h_bracket", "h_generators", "h_pair_bracket", "is_extremal",
    "ladder_eigenvalue", "matel_bruteforce", "matel_extremal",
    "matel_shifted_weight", "matel_step_variable", "monomials_upto", "mul_z",
    "norm_closed_form", "pair_generators", "parse_poly", "pfaffian_partial",
    "pfaffian_ladder_eigenvalue", "pfaffian_value", "pfaffian_z", "solve_rpa",
    "variable", "verify_capelli", "verify_contraction", "weight",
]
