"""Trace text files.

    #cms-trace v1 N=<N> alpha=<a> packets=<P> seed=<s>
    <flow id>
    ...

One decimal flow ID per line, '\\n' line endings, UTF-8.
"""

import re
from pathlib import Path

import numpy as np

from ..errors import FormatError
from ..models.trace import TRACE_FORMAT_VERSION, Trace, TraceHeader
from .atomic import atomic_write_text

_HEADER_RE = re.compile(
    r"^#cms-trace v(?P<version>\d+) N=(?P<n>\d+) alpha=(?P<alpha>\S+) "
    r"packets=(?P<packets>\d+) seed=(?P<seed>\d+)$"
)


def format_header(header: TraceHeader) -> str:
    return (
        f"#cms-trace v{header.version} N={header.n_flows} alpha={header.alpha!r} "
        f"packets={header.packets} seed={header.seed}"
    )


def encode_trace(trace: Trace) -> str:
    lines = [format_header(trace.header)]
    lines.extend(map(str, trace.packets.tolist()))
    return "\n".join(lines) + "\n"


def write_trace(trace: Trace, path: Path) -> Path:
    atomic_write_text(path, encode_trace(trace))
    return path


def parse_header(line: str) -> TraceHeader:
    match = _HEADER_RE.match(line.rstrip("\n"))
    if not match:
        raise FormatError(f"not a trace header: {line[:80]!r}")
    version = int(match["version"])
    if version != TRACE_FORMAT_VERSION:
        raise FormatError(f"unsupported trace format version {version}")
    try:
        alpha = float(match["alpha"])
    except ValueError as exc:
        raise FormatError(f"bad alpha in trace header: {match['alpha']!r}") from exc
    return TraceHeader(
        n_flows=int(match["n"]),
        alpha=alpha,
        packets=int(match["packets"]),
        seed=int(match["seed"]),
        version=version,
    )


def read_trace(path: Path) -> Trace:
    with open(path, encoding="utf-8") as fh:
        header = parse_header(fh.readline())
        body = [line.strip() for line in fh]
    body = [line for line in body if line]
    try:
        packets = np.array([int(line) for line in body], dtype=np.uint64)
    except (ValueError, OverflowError) as exc:
        raise FormatError(f"{path}: flow IDs must be unsigned decimal integers") from exc
    if packets.size != header.packets:
        raise FormatError(f"{path}: header says {header.packets} packets, found {packets.size}")
    if packets.size and (packets.min() < 1 or packets.max() > header.n_flows):
        raise FormatError(f"{path}: flow IDs must lie in 1..{header.n_flows}")
    return Trace(header=header, packets=packets)
