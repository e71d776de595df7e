import math
import random

import pytest

from flowsketch.engine.dimensioning import (
    GBPS,
    PUBLISHED_RATES,
    compare_published,
    dimension_spec,
    dims_from_target,
    error_bound,
    memory_bits,
    rate_estimate,
    rate_table,
)
from flowsketch.errors import DomainError
from flowsketch.models.dimension import AccuracyTarget, TrafficProfile


@pytest.mark.parametrize(
    "epsilon,delta,expected",
    [(0.01, 0.01, (5, 272)), (0.99, 0.99, (1, 3)), (0.5, 0.5, (1, 6))],
)
def test_dims_from_target(epsilon, delta, expected):
    assert dims_from_target(AccuracyTarget(epsilon, delta)) == expected


@pytest.mark.parametrize("epsilon,delta", [(0.0, 0.5), (0.5, 0.0), (1.0, 0.5), (0.5, 1.5), (-0.1, 0.1)])
def test_target_outside_unit_interval_is_a_domain_error(epsilon, delta):
    with pytest.raises(DomainError):
        AccuracyTarget(epsilon, delta)


def test_error_bound_inverts_dimensioning():
    bound = error_bound(5, 272, 550_000)
    assert bound.epsilon == pytest.approx(0.009994, abs=1e-6)
    assert bound.additive == pytest.approx(5_497, abs=1)
    assert bound.delta == pytest.approx(0.00674, abs=1e-5)


def test_error_bound_of_empty_stream_is_zero():
    assert error_bound(1, 1, 0).additive == 0


def test_error_bound_rejects_bad_dimensions():
    with pytest.raises(DomainError):
        error_bound(0, 10)


def test_dims_bound_dims_round_trip():
    rng = random.Random(1)
    for _ in range(1_000):
        target = AccuracyTarget(rng.uniform(1e-4, 0.999), rng.uniform(1e-6, 0.999))
        depth, width = dims_from_target(target)
        bound = error_bound(depth, width)
        assert bound.epsilon <= target.epsilon
        assert bound.delta <= target.delta
        again = dims_from_target(AccuracyTarget(min(bound.epsilon, 0.999999), bound.delta))
        assert again[0] <= depth and again[1] <= width


def test_round_trip_is_exact_on_integer_dimensions():
    for depth in range(1, 20):
        for width in (3, 20, 64, 256, 272, 4096, 65_536):
            bound = error_bound(depth, width)
            assert dims_from_target(AccuracyTarget(bound.epsilon, bound.delta)) == (depth, width)


@pytest.mark.parametrize(
    "gbps,load,flow_rate",
    [(100, 0.1, 18_250), (100, 0.4, 73_000), (100, 0.7, 127_750),
     (400, 0.1, 73_000), (400, 0.4, 292_000), (400, 0.7, 511_000)],
)
def test_flow_rates_match_published_cells(gbps, load, flow_rate):
    estimate = rate_estimate(TrafficProfile(gbps * GBPS, load))
    assert estimate.flow_rate == pytest.approx(flow_rate, rel=0.01)


def test_rate_formula_values():
    estimate = rate_estimate(TrafficProfile(100 * GBPS, 0.4))
    assert estimate.packet_rate == pytest.approx(5.743e6, rel=1e-3)
    assert estimate.flow_rate == pytest.approx(73_160, rel=1e-3)
    assert rate_estimate(TrafficProfile(100 * GBPS, 0.1)).flow_rate == pytest.approx(18_290, rel=1e-3)
    assert rate_estimate(TrafficProfile(400 * GBPS, 0.7)).flow_rate == pytest.approx(512_100, rel=1e-3)


def test_published_packet_rates_are_flagged_not_matched():
    table = rate_table()
    assert len(table) == len(PUBLISHED_RATES) == 6
    assert not any(c.flow_rate_discrepancy for c in table)
    assert all(c.packet_rate_discrepancy for c in table)
    at_40 = compare_published(TrafficProfile(100 * GBPS, 0.4))
    assert at_40.published.packet_rate == 6_170_000
    assert at_40.packet_rate_rel_diff == pytest.approx(-0.069, abs=0.005)


def test_profiles_off_the_table_have_no_comparison():
    assert compare_published(TrafficProfile(100 * GBPS, 0.55)) is None


def test_rates_scale_linearly():
    base = rate_estimate(TrafficProfile(100 * GBPS, 0.2))
    for doubled in (TrafficProfile(200 * GBPS, 0.2), TrafficProfile(100 * GBPS, 0.4)):
        est = rate_estimate(doubled)
        assert est.packet_rate == pytest.approx(2 * base.packet_rate, rel=1e-12)
        assert est.flow_rate == pytest.approx(2 * base.flow_rate, rel=1e-12)


def test_flows_per_window_matches_scenario():
    estimate = rate_estimate(TrafficProfile(100 * GBPS, 0.4))
    flows = estimate.flows_per_window(0.1)
    assert 7_000 <= flows <= 7_350
    assert flows == pytest.approx(estimate.flow_rate * 0.1)
    assert estimate.packets_per_window(0.1) == 574_317


@pytest.mark.parametrize(
    "line_rate,load,packet_bytes,flow_packets",
    [(0, 0.4, 870.6, 78.5), (100 * GBPS, 0, 870.6, 78.5), (100 * GBPS, 1.2, 870.6, 78.5),
     (100 * GBPS, 0.4, 0, 78.5), (100 * GBPS, 0.4, 870.6, -1)],
)
def test_invalid_profiles_are_rejected(line_rate, load, packet_bytes, flow_packets):
    with pytest.raises(DomainError):
        TrafficProfile(line_rate, load, packet_bytes, flow_packets)


def test_memory_bits():
    assert memory_bits(5, 4_096, 32) == 655_360
    assert memory_bits(1, 1, 1) == 1
    assert memory_bits(3, 64, 64) == 12_288
    with pytest.raises(DomainError):
        memory_bits(5, 4_096, 0)


def test_dimension_spec_total_bits():
    spec = dimension_spec(AccuracyTarget(0.01, 0.01), counter_bits=32)
    assert (spec.depth, spec.width, spec.total_bits) == (5, 272, 5 * 272 * 32)


def test_ceilings_only_tighten():
    for eps in (0.3, 0.05, 0.001):
        for delta in (0.2, 0.01, 1e-5):
            d, w = dims_from_target(AccuracyTarget(eps, delta))
            assert math.e / w <= eps
            assert math.exp(-d) <= delta


def test_targets_just_below_a_grid_point_round_up():
    depth, width = dims_from_target(AccuracyTarget(math.e / 272 * (1 - 1e-13), 0.01))
    assert width == 273
    assert depth == 5
    depth, _ = dims_from_target(AccuracyTarget(0.01, math.exp(-5) * (1 - 1e-13)))
    assert depth == 6
