"""Top-k heavy-hitter tracking and accuracy scoring.

A sketch answers point queries but cannot list its keys, so ingestion keeps a
k-capacity threshold set next to it: after each update the flow's fresh
estimate either refreshes its entry, fills a free slot, or evicts the current
minimum when strictly larger. Ties keep the incumbent.
"""

import heapq
import logging
from collections.abc import Iterable

import numpy as np

from ..errors import DomainError, InsufficientFlowsError
from ..models.report import HeavyHitterReport, HeavyHitterRow, WindowReport
from ..models.sketch_config import SketchConfig
from ..models.trace import ExactCounts, Trace
from .sketch import Sketch
from .traffic import exact_counts, window_stream

log = logging.getLogger(__name__)


class TopKTracker:
    """Up to k (flow, estimate) entries with the smallest estimate on top of a heap.

    Refreshes only touch the entry map, so the heap may hold pairs older than
    the map. Every tracked flow keeps at least one heap pair no larger than
    its current estimate; a stale pair reaching the top is re-pushed at the
    flow's current estimate, or dropped once the flow is no longer tracked.
    """

    def __init__(self, k: int) -> None:
        if k < 0:
            raise DomainError(f"k must be >= 0, got {k}")
        self.k = k
        self._entries: dict[int, int] = {}
        self._heap: list[tuple[int, int]] = []

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, item: int) -> bool:
        return item in self._entries

    @property
    def threshold(self) -> int | None:
        """Estimate a new flow must beat to get in, or None while there are free slots."""
        if len(self._entries) < self.k or not self._entries:
            return None
        return self._min()[0]

    def _push(self, item: int, estimate: int) -> None:
        self._entries[item] = estimate
        heapq.heappush(self._heap, (estimate, item))
        if len(self._heap) > 4 * self.k + 64:
            self._heap = [(e, i) for i, e in self._entries.items()]
            heapq.heapify(self._heap)

    def _min(self) -> tuple[int, int]:
        heap = self._heap
        while True:
            estimate, item = heap[0]
            current = self._entries.get(item)
            if current == estimate:
                return estimate, item
            if current is not None and current > estimate:
                heapq.heapreplace(heap, (current, item))
            else:
                heapq.heappop(heap)

    def observe(self, item: int, estimate: int) -> None:
        """Offers a flow with its estimate right after it was ingested."""
        if self.k == 0:
            return
        current = self._entries.get(item)
        if current is not None:
            if estimate < current:
                self._push(item, estimate)
            else:
                self._entries[item] = estimate
            return
        if len(self._entries) < self.k:
            self._push(item, estimate)
            return
        min_estimate, min_item = self._min()
        if estimate > min_estimate:
            heapq.heappop(self._heap)
            del self._entries[min_item]
            self._push(item, estimate)

    def ingest(self, sketch: Sketch, packets: Iterable[int] | np.ndarray) -> None:
        """Updates the sketch with every packet and offers each to the tracker."""
        packets = np.atleast_1d(np.asarray(packets, dtype=np.uint64))
        estimates = sketch.ingest_with_estimates(packets)
        if self.k == 0:
            return
        entries = self._entries
        # Lower bound on the current minimum; -1 while slots are free.
        floor = self.threshold if len(entries) >= self.k else -1
        for item, estimate in zip(packets.tolist(), estimates.tolist()):
            current = entries.get(item)
            if current is not None:
                if estimate < current:
                    self._push(item, estimate)
                    floor = min(floor, estimate)
                else:
                    entries[item] = estimate
            elif estimate > floor:
                self.observe(item, estimate)
                if len(entries) >= self.k:
                    floor = self._min()[0]

    def flows(self) -> list[int]:
        return list(self._entries)

    def items(self) -> list[tuple[int, int]]:
        """(flow_id, estimate) pairs, estimate descending then flow_id ascending."""
        return sorted(self._entries.items(), key=lambda kv: (-kv[1], kv[0]))


def track_update(tracker: TopKTracker, sketch: Sketch, item: int) -> TopKTracker:
    tracker.observe(item, sketch.query(item))
    return tracker


def _rank_by_estimate(sketch: Sketch, flows: list[int], k: int) -> tuple[int, ...]:
    if not flows or k == 0:
        return ()
    estimates = sketch.query_many(np.array(flows, dtype=np.uint64)).tolist()
    ranked = sorted(zip(flows, estimates), key=lambda fe: (-fe[1], fe[0]))
    return tuple(f for f, _ in ranked[:k])


def score(
    sketch: Sketch,
    oracle: ExactCounts,
    k: int,
    candidates: Iterable[int] | None = None,
) -> HeavyHitterReport:
    """Scores the sketch on the oracle's true top-k flows.

    Precision and recall compare the true top-k with the k flows the sketch
    ranks highest among `candidates` (default: every flow the oracle saw).
    """
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if len(oracle) < k:
        raise InsufficientFlowsError(f"top-{k} requested but the oracle holds {len(oracle)} flows")
    if k == 0:
        return HeavyHitterReport(
            k=0, rows=(), estimated_top=(), precision=1.0, recall=1.0,
            mean_abs_error=0.0, items_ingested=sketch.items_ingested,
        )

    true_top = oracle.top(k)
    ids = [flow for flow, _ in true_top]
    estimates = sketch.query_many(np.array(ids, dtype=np.uint64)).tolist()
    rows = tuple(
        HeavyHitterRow(rank=rank, flow_id=flow, true_count=true, estimated_count=est)
        for rank, ((flow, true), est) in enumerate(zip(true_top, estimates), start=1)
    )

    pool = list(candidates) if candidates is not None else list(oracle)
    estimated_top = _rank_by_estimate(sketch, pool, k)
    hits = len(set(estimated_top) & set(ids))
    return HeavyHitterReport(
        k=k,
        rows=rows,
        estimated_top=estimated_top,
        precision=hits / len(estimated_top) if estimated_top else 0.0,
        recall=hits / k,
        mean_abs_error=sum(row.abs_error for row in rows) / k,
        items_ingested=sketch.items_ingested,
    )


def monitor_windows(trace: Trace, config: SketchConfig, window_packets: int, k: int) -> list[WindowReport]:
    """Runs the trace through consecutive monitoring windows.

    The sketch is zeroed at the start of every window and repopulated with
    that window's packets only; each window is scored against its own oracle.
    A short final window with fewer than k flows is scored at its flow count.
    """
    sketch = Sketch(config)
    reports: list[WindowReport] = []
    start = 0
    for index, segment in enumerate(window_stream(trace, window_packets)):
        sketch.reset()
        tracker = TopKTracker(k)
        tracker.ingest(sketch, segment.packets)
        oracle = exact_counts(segment)
        report = score(sketch, oracle, min(k, len(oracle)), candidates=tracker.flows())
        log.debug("window %d: %d packets, %d flows, recall %.3f",
                  index, len(segment), len(oracle), report.recall)
        reports.append(WindowReport(
            index=index,
            start_packet=start,
            packets=len(segment),
            distinct_flows=len(oracle),
            tracked=tuple(tracker.items()),
            threshold=tracker.threshold,
            report=report,
        ))
        start += len(segment)
    return reports
