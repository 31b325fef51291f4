from __future__ import annotations

import math

from ...exceptions import ConfigError
from ..seeds import derive_seed
from .buckets import SampleBucket

CURRICULUM_MIN_LENGTH = 5
CURRICULUM_MAX_LENGTH = 15
CURRICULUM_FIRST_MAX_LENGTH = 7
# No program of length >= 5 is shallower than 7 under the shipped grammar.
CURRICULUM_FIRST_MAX_DEPTH = 7
CURRICULUM_MAX_DEPTH = 9
CURRICULUM_REPEATS = 3


def _interp(lo: int, hi: int, i: int, stages: int) -> int:
    if stages == 1:
        return hi
    return int(math.floor(lo + (hi - lo) * i / (stages - 1) + 0.5))


def curriculum_schedule(stages: int, *, seed: int = 0, repeats: int = CURRICULUM_REPEATS) -> list[SampleBucket]:
    """Buckets of nondecreasing size, the stage sequence repeated `repeats` times.

    max_length grows from 7 to 15 and max_depth from 7 to 9 across stages; a
    single stage is the whole training range [5,15] x [1,9].
    """
    if stages < 1:
        raise ConfigError(f"stages must be >= 1, got {stages}")
    if repeats < 1:
        raise ConfigError(f"repeats must be >= 1, got {repeats}")

    out: list[SampleBucket] = []
    for rep in range(repeats):
        for i in range(stages):
            out.append(
                SampleBucket(
                    min_length=CURRICULUM_MIN_LENGTH,
                    max_length=_interp(CURRICULUM_FIRST_MAX_LENGTH, CURRICULUM_MAX_LENGTH, i, stages),
                    min_depth=1,
                    max_depth=_interp(CURRICULUM_FIRST_MAX_DEPTH, CURRICULUM_MAX_DEPTH, i, stages),
                    seed=derive_seed(seed, "curriculum", rep, i),
                )
            )
    return out
