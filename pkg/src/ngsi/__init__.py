"""Neurally-guided structure inference for a small WHILE language.

A learned rule selector picks the production rule at each layer of a parse,
a hand-coded decomposer splits the tokens for that rule, and the engine
recurses. The package also ships the reference parser, a program sampler,
the training loop, an exhaustive search baseline and an evaluation grid.
"""

from __future__ import annotations

from .enums import ErrorKind, InferMode, Method, SearchStatus
from .exceptions import (
    BucketUnsatisfiableError,
    ConfigError,
    DepthLimitError,
    GrammarError,
    InconsistentParseError,
    InferenceError,
    MalformedTreeError,
    ModelFormatError,
    ModelMismatchError,
    NgsiError,
    NonFiniteError,
    TokenizeError,
    TrainingDivergedError,
    TreeFormatError,
    UnparseableError,
)
from ._internal.data import (
    BalancedPairSampler,
    ProgramSampler,
    SampleBucket,
    TrainingPair,
    curriculum_schedule,
    extract_training_pairs,
    read_corpus,
    read_dataset,
    sample_program,
    write_corpus,
    write_dataset,
)
from ._internal.evaluation import EvalRecord, evaluate_grid, read_csv, write_csv
from ._internal.grammar import (
    WHILE_GRAMMAR,
    Grammar,
    GrammarDefect,
    Nonterminal,
    ProductionRule,
    Token,
    analyze,
    validate_grammar,
)
from ._internal.guider import (
    AdamState,
    GuiderModel,
    TrainConfig,
    TrainingResult,
    adam_step,
    encode,
    init_model,
    load_model,
    loss_and_gradients,
    predict_rule_distribution,
    recurrent_cell,
    save_model,
    train,
)
from ._internal.inference import (
    GuiderSelector,
    InferConfig,
    InferOutcome,
    InferRow,
    OracleSelector,
    infer,
    infer_file,
    infer_with_stats,
)
from ._internal.search import SearchConfig, SearchOutcome, iddfs_parse
from ._internal.syntax import (
    Ast,
    DecompositionFailure,
    TokenSeq,
    ast_equal,
    decompose,
    depth,
    deserialize,
    detokenize,
    pretty_print,
    reference_parse,
    serialize,
    tokenize,
)

__all__ = [
    "AdamState",
    "Ast",
    "BalancedPairSampler",
    "BucketUnsatisfiableError",
    "ConfigError",
    "DecompositionFailure",
    "DepthLimitError",
    "ErrorKind",
    "EvalRecord",
    "Grammar",
    "GrammarDefect",
    "GrammarError",
    "GuiderModel",
    "GuiderSelector",
    "InconsistentParseError",
    "InferConfig",
    "InferMode",
    "InferOutcome",
    "InferRow",
    "InferenceError",
    "MalformedTreeError",
    "Method",
    "ModelFormatError",
    "ModelMismatchError",
    "NgsiError",
    "NonFiniteError",
    "Nonterminal",
    "OracleSelector",
    "ProductionRule",
    "ProgramSampler",
    "SampleBucket",
    "SearchConfig",
    "SearchOutcome",
    "SearchStatus",
    "Token",
    "TokenSeq",
    "TokenizeError",
    "TrainConfig",
    "TrainingDivergedError",
    "TrainingPair",
    "TrainingResult",
    "TreeFormatError",
    "UnparseableError",
    "WHILE_GRAMMAR",
    "adam_step",
    "analyze",
    "ast_equal",
    "curriculum_schedule",
    "decompose",
    "depth",
    "deserialize",
    "detokenize",
    "encode",
    "evaluate_grid",
    "extract_training_pairs",
    "iddfs_parse",
    "infer",
    "infer_file",
    "infer_with_stats",
    "init_model",
    "load_model",
    "loss_and_gradients",
    "predict_rule_distribution",
    "pretty_print",
    "read_corpus",
    "read_csv",
    "read_dataset",
    "recurrent_cell",
    "reference_parse",
    "sample_program",
    "save_model",
    "serialize",
    "tokenize",
    "train",
    "validate_grammar",
    "write_corpus",
    "write_csv",
    "write_dataset",
]

__version__ = "0.1.0"
