"""Exact finite combinatorics of predimension classes.

Tuple structures and clique structures, their predimension functions,
self-sufficiency, pregeometries, amalgamation, generic-stage growth, the
clique reduct, and the rank-preserving constructions between the two classes.
All arithmetic is exact integers.
"""

from .amalgam import AmalgamResult, free_amalgam, standard_amalgam
from .errors import DomainError, FormatError
from .generic import (Chain, GrowthSchedule, enumerate_extension_pairs,
                      enumerate_structures, genericity_check, grow,
                      load_chain, save_chain)
from .geometry import (BackAndForthResult, PartialPgIso, back_and_forth,
                       clique_to_nary, nary_to_clique, remove_pathologies,
                       verify_partial_pg_iso)
from .predimension import (StrongWitness, check_strong, clique_weight,
                           in_class, is_strong, min_predim_over, predim,
                           predim_rel, strong_hull)
from .pregeometry import (Pregeometry, closure, dims, pg_isomorphic,
                          pregeometry_of, rank, same_pregeometry)
from .reduct import (ReductCertificate, clique_certificate, lift, reduct_of,
                     reduct_within, undefinability_pair, witness_hull)
from .reports import GadgetEntry, GadgetReport
from .structures import (CliqueStructure, ClassParams, Embedding,
                         NaryStructure, canonical_key, embeddings,
                         extend_clique, induced, induced_clique, induced_nary,
                         isomorphic_over, iter_embeddings, relabel, validate,
                         validate_clique, validate_nary, verify_embedding)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
