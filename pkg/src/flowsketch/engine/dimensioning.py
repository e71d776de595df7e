"""Sketch dimensioning and per-port rate arithmetic.

    d = ceil(ln(1/delta)),  w = ceil(e/epsilon)      (e is Euler's number)

and its inverse epsilon = e/w, delta = exp(-d). Rates follow from the line
rate, the load and the average packet and flow sizes:

    packet_rate = line_rate * load / (avg_packet_bytes * 8)
    flow_rate   = packet_rate / avg_flow_packets
"""

import math

from ..errors import DomainError
from ..models.dimension import (
    AccuracyTarget,
    DimensionSpec,
    ErrorBound,
    PublishedRate,
    RateComparison,
    RateEstimate,
    TrafficProfile,
)

_CEIL_TOLERANCE = 1e-12

GBPS = 1e9

# Published per-port rates at 870.6-byte packets and 78.5-packet flows.
PUBLISHED_RATES: tuple[PublishedRate, ...] = (
    PublishedRate(100 * GBPS, 0.1, 18_250, 1_540_000),
    PublishedRate(100 * GBPS, 0.4, 73_000, 6_170_000),
    PublishedRate(100 * GBPS, 0.7, 127_750, 10_800_000),
    PublishedRate(400 * GBPS, 0.1, 73_000, 6_160_000),
    PublishedRate(400 * GBPS, 0.4, 292_000, 24_640_000),
    PublishedRate(400 * GBPS, 0.7, 511_000, 43_120_000),
)


def _ceil(x: float) -> int:
    # ln(1/exp(-5)) evaluates a hair above 5; don't let rounding noise add a row.
    return max(1, math.ceil(x - abs(x) * _CEIL_TOLERANCE))


def dims_from_target(target: AccuracyTarget) -> tuple[int, int]:
    """(depth, width) meeting the (epsilon, delta) target."""
    depth = _ceil(math.log(1.0 / target.delta))
    width = _ceil(math.e / target.epsilon)
    # The tolerant ceiling may land one short of a target just below a grid point.
    if math.exp(-depth) > target.delta:
        depth += 1
    if math.e / width > target.epsilon:
        width += 1
    return depth, width


def error_bound(depth: int, width: int, items_ingested: int = 0) -> ErrorBound:
    if depth < 1 or width < 1:
        raise DomainError(f"depth and width must be >= 1, got {depth}, {width}")
    epsilon = math.e / width
    return ErrorBound(epsilon=epsilon, delta=math.exp(-depth), additive=epsilon * items_ingested)


def memory_bits(depth: int, width: int, counter_bits: int) -> int:
    if min(depth, width, counter_bits) < 1:
        raise DomainError(
            f"depth, width and counter_bits must be >= 1, got {depth}, {width}, {counter_bits}"
        )
    return depth * width * counter_bits


def dimension_spec(target: AccuracyTarget, counter_bits: int = 64) -> DimensionSpec:
    depth, width = dims_from_target(target)
    return DimensionSpec(depth, width, counter_bits, memory_bits(depth, width, counter_bits))


def rate_estimate(profile: TrafficProfile) -> RateEstimate:
    packet_rate = profile.line_rate * profile.load / (profile.avg_packet_bytes * 8)
    return RateEstimate(packet_rate=packet_rate, flow_rate=packet_rate / profile.avg_flow_packets)


def _compare(published: PublishedRate, estimate: RateEstimate) -> RateComparison:
    return RateComparison(
        published=published,
        estimate=estimate,
        flow_rate_rel_diff=(estimate.flow_rate - published.flow_rate) / published.flow_rate,
        packet_rate_rel_diff=(estimate.packet_rate - published.packet_rate) / published.packet_rate,
    )


def rate_table() -> list[RateComparison]:
    """Recomputes every published cell from the rate formula."""
    return [
        _compare(p, rate_estimate(TrafficProfile(p.line_rate, p.load)))
        for p in PUBLISHED_RATES
    ]


def compare_published(profile: TrafficProfile) -> RateComparison | None:
    """Comparison against the published cell for this (line rate, load), if any."""
    for p in PUBLISHED_RATES:
        if math.isclose(p.line_rate, profile.line_rate) and math.isclose(p.load, profile.load):
            return _compare(p, rate_estimate(profile))
    return None
