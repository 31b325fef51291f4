from __future__ import annotations

import enum


class InferMode(enum.Enum):
    """Rule-selection strategy of the guided inference engine."""

    Greedy = "greedy"
    Fallback = "fallback"
    Beam = "beam"


class ErrorKind(enum.Enum):
    """Failure categories reported per inference instance."""

    UNPARSEABLE = "unparseable"
    DEPTH_LIMIT = "depth_limit"
    INCONSISTENT_PARSE = "inconsistent_parse"
    TIMEOUT = "timeout"


class SearchStatus(enum.Enum):
    Found = "found"
    Timeout = "timeout"
    Exhausted = "exhausted"


class Method(enum.Enum):
    """Evaluation methods compared on the generalization grid."""

    Ngsi = "ngsi"
    NgsiGreedy = "ngsi-greedy"
    NgsiFallback = "ngsi-fallback"
    NgsiBeam = "ngsi-beam"
    Oracle = "oracle"
    Search = "search"
