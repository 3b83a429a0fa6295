"""Satake p-parameters of Siegel modular Hecke eigenforms.

Library layout:

* polynomials -- exact sparse multivariate polynomials, symmetric and
  signed-permutation orbit sums, the S-polynomial combination;
* krieg       -- spherical-map images of the Hecke generators;
* hecke       -- eigenvalue records and the reduced polynomial system;
* eliminate   -- the elimination chain, back-substitution, canonical tuples;
* roots       -- palindromic root finding and unimodularity tests;
* datasets    -- eigenvalue table ingestion (factored-integer JSON);
* pipeline    -- batch driver producing certified result rows;
* cli         -- the `satake` command.
"""

from .datasets import (Dataset, bundled_path, load_dataset, parse_factored_integer,
                       resolve_dataset, serialize_dataset)
from .eliminate import (SatakeTuple, algorithm_A, canonicalize, enumerate_solutions,
                        hat_reduce, pn_coefficients, primary_solve, pairing_solve,
                        recover_alpha0, residual, solve_system, symbolic_elimination)
from .hecke import (EigenvalueRecord, ReducedSystem, build_system, constants_from_record,
                    genus2_constants, k_constants, reduced_constants, scalar_eigenvalue,
                    t0p2_from_identity)
from .krieg import (OmegaMatrix, c_coeff, d_coeff, omega_matrix, spherical_image,
                    spherical_image_t0p)
from .numerics import NumericContext, context_from_env
from .pipeline import (ResultRow, Tolerances, compute_record, exit_status,
                       match_parameters, run_compute)
from .polynomials import (MultiPoly, evaluate, lex_compare, s_polynomial, sym_sum,
                          wn_symmetrize)
from .roots import (PalindromicPoly, all_roots, inverse_pairing, km_unimodular_test,
                    lift_roots, palindromic_reduce, rp_verdict, solve_palindromic)

__version__ = "0.1.0"
