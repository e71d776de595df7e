"""Sketch snapshot files.

Layout, all integers little-endian unsigned 64-bit:

    b"CMS1" | depth | width | master_seed | items_ingested | depth*width counters (row-major)
"""

import struct
from pathlib import Path

import numpy as np

from ..engine.sketch import Sketch
from ..errors import ConfigurationError, FormatError
from ..models.sketch_config import SketchConfig
from .atomic import atomic_write_bytes

MAGIC = b"CMS1"
_HEADER = struct.Struct("<4s4Q")


def encode_sketch(sketch: Sketch) -> bytes:
    cfg = sketch.config
    header = _HEADER.pack(MAGIC, cfg.depth, cfg.width, cfg.master_seed, sketch.items_ingested)
    return header + sketch.counters.astype("<u8").tobytes(order="C")


def decode_sketch(data: bytes) -> Sketch:
    if len(data) < _HEADER.size:
        raise FormatError(f"snapshot is {len(data)} bytes, shorter than its {_HEADER.size}-byte header")
    magic, depth, width, seed, items = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad snapshot magic {magic!r}")
    expected = _HEADER.size + depth * width * 8
    if len(data) != expected:
        raise FormatError(f"snapshot for {depth}x{width} must be {expected} bytes, got {len(data)}")
    counters = np.frombuffer(data, dtype="<u8", offset=_HEADER.size).reshape(depth, width)
    try:
        return Sketch.from_state(SketchConfig(depth, width, seed), counters, items)
    except ConfigurationError as exc:
        raise FormatError(f"inconsistent snapshot: {exc}") from exc


def save_sketch(sketch: Sketch, path: Path) -> Path:
    atomic_write_bytes(path, encode_sketch(sketch))
    return path


def load_sketch(path: Path) -> Sketch:
    return decode_sketch(Path(path).read_bytes())
