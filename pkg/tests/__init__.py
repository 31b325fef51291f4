"""Unit tests for the ngsi package.

Run from the repository root with `python -m unittest discover -s tests -t .`;
the `src/` layout is put on the import path so no install is needed.
"""

from __future__ import annotations

from ._bootstrap import ensure_src_on_path

ensure_src_on_path()
