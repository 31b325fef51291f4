"""Exhaustive baseline: iterative deepening search for a tree that reconstructs the input."""

from .iddfs import SearchConfig, SearchOutcome, iddfs_parse

__all__ = ["SearchConfig", "SearchOutcome", "iddfs_parse"]
