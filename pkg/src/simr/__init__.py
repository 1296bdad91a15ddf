"""Smooth injective map recognition for bitexts."""

from .axes import AxisMap, AxisToken, TokenRules, tokenize_cognate_mode, tokenize_lexicon_mode
from .evaluation import GoldTBM, load_gold, rms_perpendicular_error
from .geometry import BitextMap, BitextSpace, LineFit, Point, interpolate, least_squares_fit, perpendicular_distance
from .matching import PredicateConfig, TranslationLexicon, generate_points, lcsr, match
from .recognizer import Chain, SimrParams, ambiguity_level, best_chain, filter_noise, find_chains
from .search import SearchConfig, SignalTooSparse, assemble_map, map_texts, run_search

__all__ = [
    "AxisMap", "AxisToken", "TokenRules", "tokenize_cognate_mode", "tokenize_lexicon_mode",
    "GoldTBM", "load_gold", "rms_perpendicular_error",
    "BitextMap", "BitextSpace", "LineFit", "Point", "interpolate", "least_squares_fit",
    "perpendicular_distance",
    "PredicateConfig", "TranslationLexicon", "generate_points", "lcsr", "match",
    "Chain", "SimrParams", "ambiguity_level", "best_chain", "filter_noise", "find_chains",
    "SearchConfig", "SignalTooSparse", "assemble_map", "map_texts", "run_search",
]
