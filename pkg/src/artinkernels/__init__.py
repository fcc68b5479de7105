"""Homology of Artin kernels of even FC-type Artin groups, exactly.

Given a finite labeled even graph and an integer character on its
vertices, the package computes the homology of the kernel subgroup as a
module over K[t^{+-1}]: free rank, invariant factors, and the cyclotomic
primary decomposition, by three mutually cross-checking methods (Smith
normal form, the multiplicity spectral sequence, and rooted spanning
forests), plus the reduced-complex free ranks in the resonant case.
"""

from .flag import (FlagComplex, IncidenceMatrix, boundary_matrix,
                   build_flag_complex, image_dims, reduced_homology_ranks)
from .graphs import (Character, GraphError, LabeledGraph, ResonanceSets,
                     ResonantVertexError, TorsionSupport, ValidationReport,
                     ZeroCharacterError, connected_components, is_fc_type,
                     is_spherical, maximal_cliques, normalize_character,
                     resonance_sets, torsion_support, validate_graph)
from .laurent import (CyclotomicFactor, CyclotomicField, Factor, LaurentPoly,
                      ZeroPolynomialError, cyclotomic, cyclotomic_field,
                      factor_invariant, laurent_gcd, mult_d, normalize_unit,
                      q_poly, residue_eval)
from .resonant import (QuotientComplex, ReducedGraph, build_f2, build_gamma1,
                       h1_free_rank, h2_free_rank)
from .scalars import FieldSpec, PrimeField, Rationals
from .smith import (ModuleDecomposition, ShapeReport, SmithForm,
                    boundary_smith_form, cyclotomic_candidates,
                    cyclotomic_invariant_factors, homology_module,
                    poly_matrix_rank, smith_normal_form, specialized_rank,
                    verify_shape)
from .spectral import (DisconnectedGraphError, ForestBudgetError,
                       NegativeMultiplicityError, PageTable,
                       ResonantCharacterError, TorsionTable, WeightedComplex,
                       forest_fitting_h1, jordan_bound_check, page_dims,
                       simplex_weight, solve_torsion, truncated_homology_dims,
                       weighted_complex)
from .twisted import (PolyMatrix, SimplexWeights, list_weights, minor,
                      simplex_weights, twisted_boundary)

__version__ = "0.1.0"
