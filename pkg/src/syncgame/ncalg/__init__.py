"""Finitely presented *-algebras over the rationals."""

from .analysis import (
    HomomorphismReport,
    InconclusiveUpTo,
    NontrivialCertified,
    TrivialCertified,
    evaluation_residuals,
    evaluation_satisfies,
    find_boolean_evaluation,
    hereditary_closure_step,
    triviality_status,
    verify_homomorphism,
)
from .poly import Alphabet, NCPoly, Presentation, Word, word_key
from .rewrite import IdealCertificate, RewriteSystem, complete, is_confluent, normal_form, unresolved_critical_pairs
from .textfmt import ParseError, format_map, format_presentation, parse_expression, parse_map, parse_presentation

__all__ = [
    "Alphabet",
    "HomomorphismReport",
    "IdealCertificate",
    "InconclusiveUpTo",
    "NCPoly",
    "NontrivialCertified",
    "ParseError",
    "Presentation",
    "RewriteSystem",
    "TrivialCertified",
    "Word",
    "complete",
    "evaluation_residuals",
    "evaluation_satisfies",
    "find_boolean_evaluation",
    "format_map",
    "format_presentation",
    "hereditary_closure_step",
    "is_confluent",
    "normal_form",
    "parse_expression",
    "parse_map",
    "parse_presentation",
    "triviality_status",
    "unresolved_critical_pairs",
    "verify_homomorphism",
    "word_key",
]
