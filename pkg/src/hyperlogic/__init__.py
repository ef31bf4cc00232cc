"""Hyperproperty logics over finite lasso models.

Exact HyperLTL evaluation on finite sets of ultimately periodic traces,
bounded HyperCTL* checking on Kripke structures (direct and game-based),
generators for the reduction formulas, and the bridge to first-order logic
over finite words.
"""

from hyperlogic.hyperctl import PathBounds, build_game, check_bounded, solve_game
from hyperlogic.hyperltl import SearchBudget, build_expansion, check, sat_enum
from hyperlogic.models import (
    KripkeStructure,
    LassoPath,
    LassoTrace,
    StretchSpec,
    TraceAssignment,
    TraceSet,
    align,
    is_bounded,
    lasso_paths,
    letter,
    letter_at,
    split_view,
)
from hyperlogic.parser import parse_fo, parse_formula, parse_hyperctl, parse_hyperltl
from hyperlogic.prenex import classify, to_prenex
from hyperlogic.printer import to_text
from hyperlogic.syntax import HyperLTLSentence, temporal_depth, to_core

__all__ = [
    "HyperLTLSentence", "KripkeStructure", "LassoPath", "LassoTrace", "PathBounds",
    "SearchBudget", "StretchSpec", "TraceAssignment", "TraceSet", "align", "build_expansion",
    "build_game", "check", "check_bounded", "classify", "is_bounded", "lasso_paths", "letter",
    "letter_at", "parse_fo", "parse_formula", "parse_hyperctl", "parse_hyperltl", "sat_enum",
    "solve_game", "split_view", "temporal_depth", "to_core", "to_prenex", "to_text",
]
