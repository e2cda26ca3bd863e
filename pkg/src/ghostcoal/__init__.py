"""Exact coalescing random walks on weighted spacetime graphs.

Ghost-matrix and ghost-free determinants, the casting / performance
machinery behind them, and brute-force oracles that check both.
"""
from .exact import det, fmt_fraction, perm_sign, to_fraction
from .labels import FinalState, Interval, Junction, actor, heir_of, label_less, rank, state_sign
from .spacetime import (LatticeKernels, ModelSpec, SpacetimeGraph, SRWKernels, build_model,
                        check_planarity, enumerate_paths, path_weight_sum, transition_kernel)
from .ghost_formula import (build_ghost_matrix, candidate_bijections, coalescence_Z,
                            extracted_det, source_sign, symbolic_Z)
from .involution import (Casting, Performance, attribute, involution, no_ghosts_allowed_check,
                         rehearse, segment_swap)
from .ghostfree import (BrownianKernels, HeirBox, ProductBox, brownian_kernel,
                        build_coalescence_matrix, heir_box_probability, heir_mass,
                        permuted_set_probability)
from .oracle import (enumerate_castings, enumerate_performances, interacting_dp,
                     lgv_enumerate)
from .audit import audit_instance

__version__ = "0.1.0"
