"""Program sampling, training-pair extraction, curriculum and dataset files."""

from .buckets import MIN_PROGRAM_LENGTH, SampleBucket
from .curriculum import curriculum_schedule
from .files import (
    CorpusLine,
    format_corpus_line,
    iter_corpus_lines,
    parse_corpus_line,
    read_corpus,
    read_dataset,
    split_corpus_lines,
    write_corpus,
    write_dataset,
)
from .pairs import BalancedPairSampler, TrainingPair, extract_training_pairs
from .sampler import DEFAULT_MAX_ATTEMPTS, ProgramSampler, sample_program

__all__ = [
    "BalancedPairSampler",
    "CorpusLine",
    "DEFAULT_MAX_ATTEMPTS",
    "MIN_PROGRAM_LENGTH",
    "ProgramSampler",
    "SampleBucket",
    "TrainingPair",
    "curriculum_schedule",
    "extract_training_pairs",
    "format_corpus_line",
    "iter_corpus_lines",
    "parse_corpus_line",
    "read_corpus",
    "read_dataset",
    "sample_program",
    "split_corpus_lines",
    "write_corpus",
    "write_dataset",
]
