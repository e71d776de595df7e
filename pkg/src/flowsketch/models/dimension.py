from dataclasses import dataclass

from ..errors import DomainError

DEFAULT_PACKET_BYTES = 870.6
DEFAULT_FLOW_PACKETS = 78.5


@dataclass(frozen=True)
class AccuracyTarget:
    epsilon: float  # additive error as a fraction of items ingested
    delta: float    # probability the error bound fails

    def __post_init__(self) -> None:
        bad = [
            f"{name}={value}"
            for name, value in (("epsilon", self.epsilon), ("delta", self.delta))
            if not 0.0 < value < 1.0
        ]
        if bad:
            raise DomainError(f"accuracy target must lie in (0, 1): {', '.join(bad)}")


@dataclass(frozen=True)
class ErrorBound:
    epsilon: float
    delta: float
    additive: float  # epsilon * items_ingested, in packets


@dataclass(frozen=True)
class DimensionSpec:
    depth: int
    width: int
    counter_bits: int
    total_bits: int  # depth * width * counter_bits


@dataclass(frozen=True)
class TrafficProfile:
    line_rate: float  # bits/s
    load: float       # fraction of line rate in (0, 1]
    avg_packet_bytes: float = DEFAULT_PACKET_BYTES
    avg_flow_packets: float = DEFAULT_FLOW_PACKETS

    def __post_init__(self) -> None:
        bad = [
            f"{name}={value}"
            for name, value in (
                ("line_rate", self.line_rate),
                ("load", self.load),
                ("avg_packet_bytes", self.avg_packet_bytes),
                ("avg_flow_packets", self.avg_flow_packets),
            )
            if not value > 0
        ]
        if self.load > 1:
            bad.append(f"load={self.load} (> 1)")
        if bad:
            raise DomainError(f"invalid traffic profile: {', '.join(bad)}")


@dataclass(frozen=True)
class RateEstimate:
    packet_rate: float  # packets/s
    flow_rate: float    # flows/s

    def flows_per_window(self, seconds: float) -> float:
        """Flows expected in a window, assuming flows are shorter than it."""
        return self.flow_rate * seconds

    def packets_per_window(self, seconds: float) -> int:
        return round(self.packet_rate * seconds)


@dataclass(frozen=True)
class PublishedRate:
    line_rate: float
    load: float
    flow_rate: float
    packet_rate: float


@dataclass(frozen=True)
class RateComparison:
    published: PublishedRate
    estimate: RateEstimate
    flow_rate_rel_diff: float    # (estimate - published) / published
    packet_rate_rel_diff: float

    @property
    def flow_rate_discrepancy(self) -> bool:
        return abs(self.flow_rate_rel_diff) > 0.01

    @property
    def packet_rate_discrepancy(self) -> bool:
        return abs(self.packet_rate_rel_diff) > 0.01
