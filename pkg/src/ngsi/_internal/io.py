from __future__ import annotations

import struct

import numpy as np

from ..exceptions import ModelFormatError


class BinaryReader:
    """Cursor-based little-endian reader with strict bounds.

    Offsets reported in errors are absolute offsets into the original buffer.
    """

    def __init__(self, data: bytes | bytearray | memoryview, *, cursor: int = 0) -> None:
        mv = data if isinstance(data, memoryview) else memoryview(data)
        if mv.ndim != 1:
            raise ValueError("BinaryReader expects a 1-D buffer")
        if not (0 <= cursor <= len(mv)):
            raise ValueError("cursor beyond bounds")
        self._data = mv
        self._pos = cursor

    def tell(self) -> int:
        return self._pos

    def remaining(self) -> int:
        return len(self._data) - self._pos

    def at_end(self) -> bool:
        return self._pos == len(self._data)

    def _require(self, n: int) -> None:
        if n < 0:
            raise ValueError("n must be >= 0")
        if self._pos + n > len(self._data):
            raise ModelFormatError(
                f"read of {n} bytes past end of data ({self.remaining()} left)", offset=self._pos
            )

    def read_bytes(self, n: int) -> bytes:
        self._require(n)
        start = self._pos
        self._pos += n
        return self._data[start : start + n].tobytes()

    def read_u32(self) -> int:
        return self._read_struct("<I", 4)

    def read_u64(self) -> int:
        return self._read_struct("<Q", 8)

    def _read_struct(self, fmt: str, size: int) -> int:
        self._require(size)
        value = struct.unpack_from(fmt, self._data, self._pos)[0]
        self._pos += size
        return int(value)

    def read_utf8(self, n: int) -> str:
        offset = self._pos
        raw = self.read_bytes(n)
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError:
            raise ModelFormatError("invalid UTF-8 string", offset=offset) from None

    def read_f32_array(self, shape: tuple[int, ...]) -> np.ndarray:
        count = int(np.prod(shape, dtype=np.int64)) if shape else 1
        raw = self.read_bytes(4 * count)
        return np.frombuffer(raw, dtype="<f4").reshape(shape).copy()


class BinaryWriter:
    def __init__(self) -> None:
        self._parts: list[bytes] = []

    def write_bytes(self, b: bytes) -> None:
        self._parts.append(bytes(b))

    def write_u32(self, value: int) -> None:
        self._parts.append(struct.pack("<I", value))

    def write_u64(self, value: int) -> None:
        self._parts.append(struct.pack("<Q", value))

    def write_utf8(self, s: str) -> None:
        raw = s.encode("utf-8")
        self.write_u32(len(raw))
        self._parts.append(raw)

    def write_f32_array(self, a: np.ndarray) -> None:
        self._parts.append(np.ascontiguousarray(a, dtype="<f4").tobytes())

    def getvalue(self) -> bytes:
        return b"".join(self._parts)
