"""Rule-based English to Korean transfer of isolated units.

An isolated unit is a comma-, dash- or bracket-delimited phrase that can be
lifted out of its sentence (an apposition, a non-restrictive attribute, an
adverbial aside).  Units are detected, matched against a catalog of
structural rules, rendered into Korean, and re-inserted next to the word
they attach to.
"""
from __future__ import annotations

from .generator import (
    AssemblyError, DefaultGlosser, GeneralTranslator, KoreanSegment, assemble_sentence,
    has_batchim, render_template, select_josa,
)
from .lexicon import (
    Category, LexEntry, Lexicon, LexiconError, TaggedToken, detokenize, load_lexicon,
    tag_sentence,
)
from .matcher import Binding, MatchResult, explain_match, match_rule, select_rule
from .pipeline import (
    Engine, SentenceResult, TraceRecord, bundled_lexicon, split_sentences, translate_document,
    translate_sentence,
)
from .ruledsl import (
    Rule, RuleSyntaxError, builtin_catalog, format_rule, format_rules, parse_rules,
)
from .units import IsolatedUnit, UnbalancedDelimiterError, UnitType, detect_units

__version__ = "0.1.0"

__all__ = [
    "AssemblyError", "Binding", "Category", "DefaultGlosser", "Engine", "GeneralTranslator",
    "IsolatedUnit", "KoreanSegment", "LexEntry", "Lexicon", "LexiconError", "MatchResult",
    "Rule", "RuleSyntaxError", "SentenceResult", "TaggedToken", "TraceRecord",
    "UnbalancedDelimiterError", "UnitType", "assemble_sentence", "builtin_catalog",
    "bundled_lexicon", "detect_units", "detokenize", "explain_match", "format_rule",
    "format_rules", "has_batchim", "load_lexicon", "match_rule", "parse_rules",
    "render_template", "select_josa", "select_rule", "split_sentences", "tag_sentence",
    "translate_document", "translate_sentence",
]
