"""Finite-model-theory workbench: structures, first-order logic, homomorphisms,
shallow minors and scattered sets, companion structures, minimal models,
and a non-preservation example over linear orders."""

from .counterexample import (
    ORDER_VOCAB,
    SClassMember,
    check_lemmas,
    refute_ep_candidates,
    contains_complete_order,
    formula_library,
    make_Ln,
    sample_S,
)
from .dichotomy import (
    CertificateError,
    Exhausted,
    MarginFunction,
    margin_bounded_expansion,
    margin_local_minor,
    margin_table,
    reported_margin,
    scattered_or_shallow_clique,
)
from .homomorphism import (
    SearchBudgetExceeded,
    check_preservation,
    find_embedding,
    find_homomorphism,
    homomorphically_equivalent,
    is_hom,
)
from .minimal import (
    BasicLocalProfile,
    ClassSpec,
    ag_construct,
    ag_theta,
    enumerate_minimal_models,
    ep_from_minimal_models,
    is_minimal_model,
)
from .minors import MinorEmbedding, grad, grad_estimate, is_minor, local_clique_scan, verify_minor
from .plebeian import companion_structure, companion_vocabulary, translate_formula, verify_companion
from .scattered import ScatteredWitness, classify_corpus, is_r_scattered, max_scattered_set
from .structures import (
    Graph,
    Structure,
    Vocabulary,
    disjoint_union,
    distance,
    enumerate_substructures,
    gaifman_graph,
    is_induced_substructure,
    is_substructure,
    neighborhood,
    validate_structure,
)

__version__ = "0.1.0"
