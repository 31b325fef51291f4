from __future__ import annotations

import hashlib
from typing import Iterable


def fingerprint64(parts: Iterable[str]) -> int:
    """Stable 64-bit fingerprint of an ordered sequence of strings.

    Parts are joined with a separator that cannot occur inside grammar symbols,
    so ("a b", "c") and ("a", "b c") hash differently.
    """
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")
