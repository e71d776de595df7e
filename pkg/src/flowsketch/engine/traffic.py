"""Zipf traffic synthesis and the exact-count oracle.

Flow k (1-based) carries a share k^-alpha / sum_n n^-alpha of the packets, so
flow IDs are ranks and the true top-k is the prefix {1..k} in expectation.
Packets are drawn i.i.d. by inverse-CDF search, packet j using the j-th
output of splitmix64(seed); a trace is a pure function of
(model, total_packets, seed).
"""

import itertools
import logging
import math
from collections.abc import Iterator

import numpy as np

from ..errors import DomainError
from ..models.trace import ExactCounts, Trace, TraceHeader
from ..models.zipf_model import ZipfModel
from .hashing import MASK64, uniform_doubles

log = logging.getLogger(__name__)

DEFAULT_FLOWS = 7_000
DEFAULT_ALPHA = 1.1
# ~7,000 flows x 78.5 packets per flow
DEFAULT_PACKETS = 550_000


def zipf_model(n_flows: int, alpha: float) -> ZipfModel:
    if n_flows < 1:
        raise DomainError(f"number of flows must be >= 1, got {n_flows}")
    if not alpha > 0:
        raise DomainError(f"zipf exponent must be > 0, got {alpha}")
    weights = [k ** -alpha for k in range(1, n_flows + 1)]
    norm = math.fsum(weights)
    freq = [w / norm for w in weights]
    cdf = list(itertools.accumulate(freq))
    return ZipfModel(
        n_flows=n_flows,
        alpha=float(alpha),
        freq=np.array(freq, dtype=np.float64),
        cdf=np.array(cdf, dtype=np.float64),
    )


def sample_flows(model: ZipfModel, count: int, seed: int, offset: int = 0) -> np.ndarray:
    """Flow IDs for draws `offset .. offset+count-1` of the seed's stream."""
    u = uniform_doubles(seed, count, offset)
    idx = np.searchsorted(model.cdf, u, side="right")
    # The last cdf entry may round below 1.0.
    np.minimum(idx, model.n_flows - 1, out=idx)
    return (idx + 1).astype(np.uint64)


def generate_trace(model: ZipfModel, total_packets: int = DEFAULT_PACKETS, seed: int = 42) -> Trace:
    if total_packets < 1:
        raise DomainError(f"total_packets must be >= 1, got {total_packets}")
    if not 0 <= seed <= MASK64:
        raise DomainError(f"seed must fit in 64 unsigned bits, got {seed}")
    packets = sample_flows(model, total_packets, seed)
    log.debug("generated %d packets over %d flows (alpha=%s, seed=%d)",
              total_packets, model.n_flows, model.alpha, seed)
    header = TraceHeader(n_flows=model.n_flows, alpha=model.alpha, packets=total_packets, seed=seed)
    return Trace(header=header, packets=packets)


def exact_counts(trace: Trace) -> ExactCounts:
    if len(trace) == 0:
        return ExactCounts()
    ids, counts = np.unique(trace.packets, return_counts=True)
    return ExactCounts(dict(zip(ids.tolist(), counts.tolist())))


def window_stream(trace: Trace, window_packets: int) -> Iterator[Trace]:
    """Consecutive segments of `window_packets` packets; the last may be short."""
    if window_packets < 1:
        raise DomainError(f"window_packets must be >= 1, got {window_packets}")
    for start in range(0, len(trace), window_packets):
        chunk = trace.packets[start:start + window_packets]
        header = TraceHeader(
            n_flows=trace.header.n_flows,
            alpha=trace.header.alpha,
            packets=int(chunk.size),
            seed=trace.header.seed,
        )
        yield Trace(header=header, packets=chunk)
