"""Ramsey-style combinatorics, lower-bound instances and substructure-lemma checkers."""

from .combinatorics import (
    HyperedgeColoring, color_by_type, coloring_from_index, exhaustive_sweep, find_monochromatic_clique,
    is_ordered_tau_clique, ordered_tau_clique, pentagon_coloring, search_antiramsey_coloring, tower,
    verify_clique,
)
from .lemmas import (
    Verdict, check_substructure_lemma, check_substructure_lemma_qf, corrupted_run, qf_scan, qf_suite,
    random_dynprop_program, random_dynqf_program, random_lemma_trial, substructure_suite,
)
from .lowerbound import (
    EAFO_SENTENCE, LowerBoundInstance, build_lowerbound_instance, completion_sequence, disparity,
    lowerbound_demo, strawman_program,
)
from .similarity import (
    find_similar_tuples, is_m_similarity, m_similar, neighborhood, neighborhood_by_terms,
    neighborhood_vector, similarity_structure, similarity_type,
)
from .thresholds import GUARANTEED_CLIQUE, RAMSEY_2

__all__ = [name for name in dir() if not name.startswith("_")]
