"""Inner random codes, typicality and the chunk decoder."""
from .codebook import InnerCodebook, inner_generate, generate_codebooks
from .decoder import DecodeOutcome, OutcomeKind, WorkCounter, inner_decode
from .typicality import (
    PairStats,
    CountWindow,
    TypicalityBoxes,
    TypicalSet,
    Role,
    pair_stats,
    typicality,
    typicality_boxes,
    cond_typicality,
    info_terms,
    empirical_info,
    empirical_entropy,
    empirical_conditional_entropy,
    type_class_prob,
    type_class_logprob,
)

__all__ = [
    "InnerCodebook",
    "inner_generate",
    "generate_codebooks",
    "DecodeOutcome",
    "OutcomeKind",
    "WorkCounter",
    "inner_decode",
    "PairStats",
    "CountWindow",
    "TypicalityBoxes",
    "TypicalSet",
    "Role",
    "pair_stats",
    "typicality",
    "typicality_boxes",
    "cond_typicality",
    "info_terms",
    "empirical_info",
    "empirical_entropy",
    "empirical_conditional_entropy",
    "type_class_prob",
    "type_class_logprob",
]
