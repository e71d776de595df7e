from collections.abc import Iterator, Mapping
from dataclasses import dataclass

import numpy as np

TRACE_FORMAT_VERSION = 1


@dataclass(frozen=True)
class TraceHeader:
    n_flows: int
    alpha: float
    packets: int
    seed: int
    version: int = TRACE_FORMAT_VERSION


@dataclass(frozen=True, eq=False)
class Trace:
    header: TraceHeader
    packets: np.ndarray  # uint64 flow IDs in arrival order

    def __len__(self) -> int:
        return int(self.packets.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.header == other.header and np.array_equal(self.packets, other.packets)

    __hash__ = None


class ExactCounts(Mapping[int, int]):
    """True per-flow packet counts for one trace."""

    def __init__(self, counts: Mapping[int, int] | None = None) -> None:
        self.counts: dict[int, int] = dict(counts or {})

    def __getitem__(self, flow_id: int) -> int:
        return self.counts[flow_id]

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def top(self, k: int) -> list[tuple[int, int]]:
        """The k heaviest (flow_id, count) pairs, count descending then flow_id ascending."""
        ranked = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return ranked[:k]
