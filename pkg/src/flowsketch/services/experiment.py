import asyncio
import logging
import statistics
import time
from pathlib import Path

from ..config.settings import Settings
from ..engine.dimensioning import (
    PUBLISHED_RATES,
    compare_published,
    dimension_spec,
    error_bound,
    memory_bits,
    rate_estimate,
    rate_table,
)
from ..engine.heavyhitter import TopKTracker, monitor_windows, score
from ..engine.sketch import Sketch
from ..engine.traffic import DEFAULT_ALPHA, DEFAULT_FLOWS, exact_counts, generate_trace, zipf_model
from ..errors import DomainError, InsufficientFlowsError
from ..models.dimension import AccuracyTarget, RateComparison, TrafficProfile
from ..models.experiment import BenchReport, CellResult, ExperimentConfig, Headroom, RunResult, SummaryRow
from ..models.report import HeavyHitterRow, WindowReport
from ..models.sketch_config import SketchConfig
from ..models.trace import ExactCounts, Trace
from ..storage.report_file import read_report, read_summary, write_report, write_summary
from ..storage.snapshot import save_sketch
from ..storage.trace_file import write_trace

log = logging.getLogger(__name__)

SUMMARY_FILE = "summary.csv"


def cell_stem(depth: int, width: int, seed: int) -> str:
    return f"d{depth}_w{width}_s{seed}"


class ExperimentService:
    """Orchestrates engine and storage calls behind each CLI subcommand."""

    def __init__(self, settings: Settings):
        self._settings = settings

    # dimension

    def dimension(
        self,
        epsilon: float,
        delta: float,
        line_rate: float,
        load: float,
        window_seconds: float,
        counter_bits: int,
    ) -> dict:
        """Sketch dimensions, memory and per-window traffic for one port."""
        target = AccuracyTarget(epsilon, delta)
        profile = TrafficProfile(line_rate, load)
        if not window_seconds > 0:
            raise DomainError(f"window must be > 0 seconds, got {window_seconds}")
        spec = dimension_spec(target, counter_bits)
        bound = error_bound(spec.depth, spec.width)
        rates = rate_estimate(profile)
        window_packets = rates.packets_per_window(window_seconds)

        report = {
            "epsilon": epsilon,
            "delta": delta,
            "d": spec.depth,
            "w": spec.width,
            "epsilon_bound": bound.epsilon,
            "delta_bound": bound.delta,
            "counter_bits": counter_bits,
            "memory_bits": spec.total_bits,
            "line_rate": line_rate,
            "load": load,
            "avg_packet_bytes": profile.avg_packet_bytes,
            "avg_flow_packets": profile.avg_flow_packets,
            "packet_rate": rates.packet_rate,
            "flow_rate": rates.flow_rate,
            "window_seconds": window_seconds,
            "flows_per_window": rates.flows_per_window(window_seconds),
            "packets_per_window": window_packets,
            "additive_error_per_window": bound.epsilon * window_packets,
            "published": None,
            "discrepancies": [],
        }
        comparison = compare_published(profile)
        if comparison is not None:
            report["published"] = {
                "flow_rate": comparison.published.flow_rate,
                "packet_rate": comparison.published.packet_rate,
                "flow_rate_rel_diff": comparison.flow_rate_rel_diff,
                "packet_rate_rel_diff": comparison.packet_rate_rel_diff,
            }
            if comparison.flow_rate_discrepancy:
                report["discrepancies"].append("flow_rate")
            if comparison.packet_rate_discrepancy:
                report["discrepancies"].append("packet_rate")
        return report

    def published_rates(self) -> list[RateComparison]:
        return rate_table()

    # traces

    def generate_trace(self, n_flows: int, alpha: float, packets: int, seed: int, out: Path) -> Trace:
        model = zipf_model(n_flows, alpha)
        trace = generate_trace(model, packets, seed)
        write_trace(trace, out)
        log.info("wrote %d packets to %s (top-1 share %.3f, top-20 share %.3f)",
                 packets, out, model.head_share(1), model.head_share(20))
        return trace

    # accuracy runs

    def run(self, config: ExperimentConfig) -> RunResult:
        """Scores every grid cell for every seed and writes reports plus a summary.

        Each seed's trace is shared by all of its cells so the cells are paired.
        On failure every file this run wrote is removed again.
        """
        written: list[Path] = []
        try:
            return asyncio.run(self._run(config, written))
        except BaseException:
            for path in written:
                path.unlink(missing_ok=True)
            log.error("run failed; removed %d partial output files", len(written))
            raise

    async def _run(self, config: ExperimentConfig, written: list[Path]) -> RunResult:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        model = zipf_model(config.n_flows, config.alpha)
        workers = asyncio.Semaphore(config.workers)
        cells: list[CellResult] = []

        for seed in config.seeds:
            trace = await asyncio.to_thread(generate_trace, model, config.total_packets, seed)
            oracle = exact_counts(trace)
            if len(oracle) < config.k:
                raise InsufficientFlowsError(
                    f"seed {seed}: trace holds {len(oracle)} flows, fewer than k={config.k}"
                )

            async def run_cell(depth: int, width: int) -> CellResult:
                async with workers:
                    return await asyncio.to_thread(
                        self._run_cell, config, trace, oracle, seed, depth, width, written
                    )

            results = await asyncio.gather(
                *(run_cell(d, w) for d, w in config.grid), return_exceptions=True
            )
            for result in results:
                if isinstance(result, BaseException):
                    raise result
            cells.extend(results)

        summary_path = config.out_dir / SUMMARY_FILE
        write_summary([c.summary for c in cells], summary_path)
        written.append(summary_path)
        log.info("wrote %d cells and %s", len(cells), summary_path)
        return RunResult(config=config, cells=tuple(cells), summary_path=summary_path)

    def _run_cell(
        self,
        config: ExperimentConfig,
        trace: Trace,
        oracle: ExactCounts,
        seed: int,
        depth: int,
        width: int,
        written: list[Path],
    ) -> CellResult:
        sketch = Sketch(SketchConfig(depth, width, seed))
        tracker = TopKTracker(config.k)
        started = time.perf_counter()
        tracker.ingest(sketch, trace.packets)
        elapsed = time.perf_counter() - started
        report = score(sketch, oracle, config.k, candidates=tracker.flows())

        stem = cell_stem(depth, width, seed)
        report_path, sidecar_path = write_report(
            report,
            config.out_dir / f"report_{stem}.csv",
            d=depth, w=width, seed=seed,
            n_flows=config.n_flows, alpha=config.alpha, total_packets=config.total_packets,
        )
        written.extend((report_path, sidecar_path))
        snapshot_path = None
        if config.snapshots:
            snapshot_path = save_sketch(sketch, config.out_dir / f"sketch_{stem}.cms")
            written.append(snapshot_path)

        log.debug("cell d=%d w=%d seed=%d: mean overestimate %.1f, recall %.2f",
                  depth, width, seed, report.mean_abs_error, report.recall)
        return CellResult(
            summary=SummaryRow(
                depth=depth,
                width=width,
                seed=seed,
                mean_abs_error=report.mean_abs_error,
                precision=report.precision,
                recall=report.recall,
                updates_per_sec=len(trace) / max(elapsed, 1e-9),
            ),
            report_path=report_path,
            sidecar_path=sidecar_path,
            memory_bits=memory_bits(depth, width, 64),
            snapshot_path=snapshot_path,
        )

    # throughput

    def bench(self, depth: int, width: int, packets: int, seed: int, repetitions: int | None = None) -> BenchReport:
        """Median update throughput over an in-memory trace, against published packet rates."""
        config = SketchConfig(depth, width, seed)
        if packets < 1:
            raise DomainError(f"packets must be >= 1, got {packets}")
        repetitions = max(repetitions or self._settings.bench_repetitions, 5)
        trace = generate_trace(zipf_model(DEFAULT_FLOWS, DEFAULT_ALPHA), packets, seed)
        items = trace.packets.tolist()

        sketch = Sketch(config)
        update_times: list[float] = []
        ingest_times: list[float] = []
        for _ in range(repetitions):
            sketch.reset()
            update = sketch.update
            started = time.perf_counter()
            for item in items:
                update(item)
            update_times.append(time.perf_counter() - started)

            sketch.reset()
            started = time.perf_counter()
            sketch.ingest(trace.packets)
            ingest_times.append(time.perf_counter() - started)

        update_rate = packets / max(statistics.median(update_times), 1e-9)
        ingest_rate = packets / max(statistics.median(ingest_times), 1e-9)
        log.info("d=%d w=%d: %.0f updates/s per call, %.0f updates/s batched",
                 depth, width, update_rate, ingest_rate)
        return BenchReport(
            depth=depth,
            width=width,
            packets=packets,
            seed=seed,
            repetitions=repetitions,
            update_rate=update_rate,
            ingest_rate=ingest_rate,
            headroom=tuple(Headroom(p, update_rate / p.packet_rate) for p in PUBLISHED_RATES),
        )

    # monitoring windows

    def monitor(
        self,
        n_flows: int,
        alpha: float,
        packets: int,
        seed: int,
        depth: int,
        width: int,
        k: int,
        window_packets: int,
    ) -> list[WindowReport]:
        config = SketchConfig(depth, width, seed)
        trace = generate_trace(zipf_model(n_flows, alpha), packets, seed)
        windows = monitor_windows(trace, config, window_packets, k)
        log.info("monitored %d windows of up to %d packets", len(windows), window_packets)
        return windows

    # result browsing

    def load_summary(self, run_dir: Path) -> list[SummaryRow]:
        return read_summary(Path(run_dir) / SUMMARY_FILE)

    def load_cell_report(self, run_dir: Path, row: SummaryRow) -> list[HeavyHitterRow]:
        stem = cell_stem(row.depth, row.width, row.seed)
        return read_report(Path(run_dir) / f"report_{stem}.csv")
