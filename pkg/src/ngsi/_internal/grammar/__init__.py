"""Grammar core: symbols, the shipped WHILE rule table, validation and analysis."""

from .analysis import GrammarAnalysis, analyze
from .symbols import Grammar, Nonterminal, ProductionRule, Symbol, Token
from .validate import GrammarDefect, validate_grammar
from .while_lang import WHILE_GRAMMAR

__all__ = [
    "Grammar",
    "GrammarAnalysis",
    "GrammarDefect",
    "Nonterminal",
    "ProductionRule",
    "Symbol",
    "Token",
    "WHILE_GRAMMAR",
    "analyze",
    "validate_grammar",
]
