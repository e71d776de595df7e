from dataclasses import dataclass


@dataclass(frozen=True)
class HeavyHitterRow:
    rank: int             # 1-based position in the true top-k
    flow_id: int
    true_count: int
    estimated_count: int

    @property
    def abs_error(self) -> int:
        return self.estimated_count - self.true_count

    @property
    def rel_error(self) -> float:
        return self.abs_error / self.true_count


@dataclass(frozen=True)
class HeavyHitterReport:
    k: int
    rows: tuple[HeavyHitterRow, ...]    # true top-k, descending true count
    estimated_top: tuple[int, ...]      # flow IDs the sketch ranks as top-k
    precision: float
    recall: float
    mean_abs_error: float               # mean overestimation over the true top-k
    items_ingested: int


@dataclass(frozen=True)
class WindowReport:
    index: int            # 0-based window number
    start_packet: int     # offset of the window's first packet in the trace
    packets: int
    distinct_flows: int
    tracked: tuple[tuple[int, int], ...]  # (flow_id, estimate) held by the tracker, estimate descending
    threshold: int | None  # estimate a new flow had to beat at window end; None with free slots
    report: HeavyHitterReport
