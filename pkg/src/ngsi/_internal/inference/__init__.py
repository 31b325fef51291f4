"""Guided structure inference: configuration, rule selectors, the engine and corpus runs."""

from .config import InferConfig
from .corpus import InferRow, infer_file, infer_lines
from .engine import InferOutcome, infer, infer_with_stats
from .selectors import GuiderSelector, OracleSelector, RuleSelector

__all__ = [
    "GuiderSelector",
    "InferConfig",
    "InferOutcome",
    "InferRow",
    "OracleSelector",
    "RuleSelector",
    "infer",
    "infer_file",
    "infer_lines",
    "infer_with_stats",
]
