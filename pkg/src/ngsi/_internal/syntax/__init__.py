"""Trees, token codecs, the reference parser and the decomposer."""

from .codec import deserialize, detokenize, serialize, tokenize
from .decomposer import Decomposer, DecompositionFailure, decompose, interleave
from .parse_context import ParseContext
from .reference_parser import reference_parse
from .tree import (
    Ast,
    TokenSeq,
    ast_equal,
    depth,
    from_preorder,
    iter_preorder,
    node_count,
    pretty_print,
    validate_tree,
)

__all__ = [
    "Ast",
    "Decomposer",
    "DecompositionFailure",
    "ParseContext",
    "TokenSeq",
    "ast_equal",
    "decompose",
    "depth",
    "deserialize",
    "detokenize",
    "from_preorder",
    "interleave",
    "iter_preorder",
    "node_count",
    "pretty_print",
    "reference_parse",
    "serialize",
    "tokenize",
    "validate_tree",
]
