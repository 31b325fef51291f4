"""Seed derivation.

Every random stream is derived from one user seed plus a path of labels, so
runs are reproducible and independent streams never share state. Training and
evaluation draw from disjoint halves of the 64-bit space: the top bit is clear
for training seeds and set for evaluation seeds.
"""

from __future__ import annotations

import enum
import hashlib

_TOP_BIT = 1 << 63
_MASK64 = (1 << 64) - 1


class SeedDomain(enum.Enum):
    Train = "train"
    Eval = "eval"


def derive_seed(seed: int, *labels: object, domain: SeedDomain = SeedDomain.Train) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(str(int(seed) & _MASK64).encode("ascii"))
    for label in labels:
        h.update(b"\x1f")
        h.update(str(label).encode("utf-8"))
    value = int.from_bytes(h.digest(), "little")
    if domain is SeedDomain.Eval:
        return value | _TOP_BIT
    return value & ~_TOP_BIT


def seed_domain(seed: int) -> SeedDomain:
    return SeedDomain.Eval if seed & _TOP_BIT else SeedDomain.Train


def require_domain(seed: int, domain: SeedDomain) -> None:
    if seed_domain(seed) is not domain:
        raise ValueError(f"seed {seed:#x} is not in the {domain.value} seed space")
