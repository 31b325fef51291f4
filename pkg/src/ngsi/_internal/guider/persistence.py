"""Model file codec.

Layout (little-endian):
    magic        5 bytes  b"NGSI1"
    grammar fp   u64
    vocab fp     u64
    tensors      until EOF: u32 name length, name (UTF-8), u32 rank, u32 dims[rank],
                 row-major float32 data
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import ClassVar

import numpy as np

from ...exceptions import ModelFormatError
from ..grammar.symbols import Grammar
from ..grammar.while_lang import WHILE_GRAMMAR
from ..io import BinaryReader, BinaryWriter
from .model import PARAM_NAMES, GuiderModel

logger = logging.getLogger(__name__)

MAX_RANK = 8


@dataclass(frozen=True, slots=True)
class ModelHeader:
    MAGIC: ClassVar[bytes] = b"NGSI1"
    SIZE: ClassVar[int] = 5 + 8 + 8

    grammar_fingerprint: int
    vocab_fingerprint: int

    @classmethod
    def parse(cls, reader: BinaryReader) -> "ModelHeader":
        if reader.remaining() < cls.SIZE:
            raise ModelFormatError("file too short for model header", offset=reader.tell())
        magic = reader.read_bytes(len(cls.MAGIC))
        if magic != cls.MAGIC:
            raise ModelFormatError(f"bad magic {magic!r}", offset=0)
        return cls(grammar_fingerprint=reader.read_u64(), vocab_fingerprint=reader.read_u64())

    def write(self, writer: BinaryWriter) -> None:
        writer.write_bytes(self.MAGIC)
        writer.write_u64(self.grammar_fingerprint)
        writer.write_u64(self.vocab_fingerprint)


def _parse_tensor(reader: BinaryReader) -> tuple[str, np.ndarray]:
    start = reader.tell()
    name = reader.read_utf8(reader.read_u32())
    rank = reader.read_u32()
    if rank > MAX_RANK:
        raise ModelFormatError(f"tensor {name!r} has implausible rank {rank}", offset=start)
    shape = tuple(reader.read_u32() for _ in range(rank))
    return name, reader.read_f32_array(shape)


def encode_model(m: GuiderModel) -> bytes:
    w = BinaryWriter()
    ModelHeader(m.grammar_fingerprint, m.vocab_fingerprint).write(w)
    for name in PARAM_NAMES:
        a = m.params[name]
        w.write_utf8(name)
        w.write_u32(a.ndim)
        for dim in a.shape:
            w.write_u32(dim)
        w.write_f32_array(a)
    return w.getvalue()


def decode_model(data: bytes | bytearray | memoryview, grammar: Grammar = WHILE_GRAMMAR) -> GuiderModel:
    """Decode and check the model against `grammar`; raises ModelMismatchError on fingerprint drift."""
    reader = BinaryReader(data)
    header = ModelHeader.parse(reader)
    params: dict[str, np.ndarray] = {}
    while not reader.at_end():
        offset = reader.tell()
        name, tensor = _parse_tensor(reader)
        if name in params:
            raise ModelFormatError(f"duplicate tensor {name!r}", offset=offset)
        params[name] = tensor

    m = GuiderModel(params, header.grammar_fingerprint, header.vocab_fingerprint, grammar)
    m.check_grammar(grammar)
    unknown = sorted(set(params) - set(PARAM_NAMES))
    if unknown:
        raise ModelFormatError(f"unknown tensors: {', '.join(unknown)}")
    try:
        m.validate()
    except ValueError as e:
        raise ModelFormatError(str(e)) from None
    return m


def save_model(m: GuiderModel, path: str | Path) -> None:
    m.validate()
    Path(path).write_bytes(encode_model(m))
    logger.info("saved model (%d parameters) to %s", m.parameter_count, path)


def load_model(path: str | Path, grammar: Grammar = WHILE_GRAMMAR) -> GuiderModel:
    return decode_model(Path(path).read_bytes(), grammar)


@dataclass(frozen=True, slots=True)
class ModelSummary:
    """A deterministic, JSON-serializable description of a model file."""

    data: dict

    def to_json(self, *, indent: int = 2) -> str:
        return json.dumps(self.data, ensure_ascii=False, indent=indent, sort_keys=True) + "\n"


def build_model_summary(m: GuiderModel) -> ModelSummary:
    return ModelSummary(
        data={
            "grammar_fingerprint": f"{m.grammar_fingerprint:016x}",
            "vocab_fingerprint": f"{m.vocab_fingerprint:016x}",
            "d_emb": m.d_emb,
            "d_h": m.d_h,
            "parameter_count": m.parameter_count,
            "tensors": {name: list(m.params[name].shape) for name in PARAM_NAMES if name in m.params},
        }
    )
