"""Generalization grid: exact-match rate and latency per method and (depth, length) cell."""

from .csv_io import CSV_HEADER, read_csv, write_csv
from .grid import DEFAULT_PER_CELL, EvalRecord, cell_seed, evaluate_grid, parse_methods, sample_cell

__all__ = [
    "CSV_HEADER",
    "DEFAULT_PER_CELL",
    "EvalRecord",
    "cell_seed",
    "evaluate_grid",
    "parse_methods",
    "read_csv",
    "sample_cell",
    "write_csv",
]
