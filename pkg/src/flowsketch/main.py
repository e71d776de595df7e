import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from textual.app import App
from textual.logging import TextualHandler

from .config.experiment import build_experiment_config, load_config_file, parse_grid_cell, parse_seeds, preset
from .config.settings import Settings, load_settings
from .engine.dimensioning import GBPS, rate_estimate
from .engine.traffic import DEFAULT_ALPHA, DEFAULT_FLOWS, DEFAULT_PACKETS
from .errors import FlowsketchError
from .models.dimension import TrafficProfile
from .services.experiment import ExperimentService
from .ui.rates import RatesScreen
from .ui.results import ResultsScreen

log = logging.getLogger("flowsketch")

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


class FlowsketchApp(App):
    TITLE = "flowsketch - Count-Min Sketch Results"
    BINDINGS = [
        ("r", "results", "Results"),
        ("p", "rates", "Port Rates"),
        ("q", "quit", "Quit"),
    ]

    def __init__(self, service: ExperimentService, run_dir: Path) -> None:
        super().__init__()
        self._service = service
        self._run_dir = run_dir

    def on_mount(self) -> None:
        self.push_screen(ResultsScreen(self._service, self._run_dir))

    def action_results(self) -> None:
        if not isinstance(self.screen, ResultsScreen):
            self.switch_screen(ResultsScreen(self._service, self._run_dir))

    def action_rates(self) -> None:
        if not isinstance(self.screen, RatesScreen):
            self.switch_screen(RatesScreen(self._service))


def _emit(payload: object) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def cmd_dimension(service: ExperimentService, args: argparse.Namespace) -> int:
    report = service.dimension(
        epsilon=args.epsilon,
        delta=args.delta,
        line_rate=args.line_rate_gbps * GBPS,
        load=args.load,
        window_seconds=args.window,
        counter_bits=args.counter_bits,
    )
    _emit(report)
    return EXIT_OK


def cmd_gen_trace(service: ExperimentService, args: argparse.Namespace) -> int:
    service.generate_trace(args.flows, args.alpha, args.packets, args.seed, args.out)
    return EXIT_OK


def cmd_run(service: ExperimentService, args: argparse.Namespace, settings: Settings) -> int:
    layers = [{"out_dir": settings.out_dir, "workers": settings.workers}]
    if args.preset:
        layers.append(preset(args.preset))
    if args.config:
        layers.append(load_config_file(args.config))
    layers.append({
        "n_flows": args.flows,
        "alpha": args.alpha,
        "total_packets": args.packets,
        "k": args.k,
        "seeds": parse_seeds(args.seed) if args.seed else None,
        "grid": tuple(parse_grid_cell(cell) for cell in args.grid) if args.grid else None,
        "out_dir": args.out,
        "workers": args.workers,
        "snapshots": True if args.snapshots else None,
    })
    config = build_experiment_config(*layers)
    result = service.run(config)
    print(result.summary_path)
    return EXIT_OK


def cmd_bench(service: ExperimentService, args: argparse.Namespace) -> int:
    report = service.bench(args.depth, args.width, args.packets, args.seed, args.repetitions)
    payload = asdict(report)
    payload["headroom"] = [
        {
            "line_rate_gbps": h.published.line_rate / GBPS,
            "load": h.published.load,
            "packet_rate": h.published.packet_rate,
            "headroom": h.ratio,
        }
        for h in report.headroom
    ]
    _emit(payload)
    return EXIT_OK


def cmd_monitor(service: ExperimentService, args: argparse.Namespace) -> int:
    window_packets = args.window_packets
    if window_packets is None:
        profile = TrafficProfile(args.line_rate_gbps * GBPS, args.load)
        window_packets = rate_estimate(profile).packets_per_window(args.window)
    windows = service.monitor(
        args.flows, args.alpha, args.packets, args.seed, args.depth, args.width, args.k, window_packets
    )
    for w in windows:
        print(json.dumps({
            "window": w.index,
            "start_packet": w.start_packet,
            "packets": w.packets,
            "distinct_flows": w.distinct_flows,
            "k": w.report.k,
            "precision": w.report.precision,
            "recall": w.report.recall,
            "mean_abs_err": w.report.mean_abs_error,
            "tracked": [list(pair) for pair in w.tracked],
            "threshold": w.threshold,
        }, sort_keys=True))
    return EXIT_OK


def cmd_view(service: ExperimentService, args: argparse.Namespace) -> int:
    logging.getLogger().handlers[:] = [TextualHandler()]
    FlowsketchApp(service, args.run_dir).run()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowsketch", description="Count-Min Sketch flow telemetry toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    dim = sub.add_parser("dimension", help="sketch dimensions, memory and per-port rates")
    dim.add_argument("--epsilon", type=float, default=0.01)
    dim.add_argument("--delta", type=float, default=0.01)
    dim.add_argument("--line-rate-gbps", type=float, default=100.0)
    dim.add_argument("--load", type=float, default=0.4)
    dim.add_argument("--window", type=float, default=0.1, help="monitoring window in seconds")
    dim.add_argument("--counter-bits", type=int, default=32)

    gen = sub.add_parser("gen-trace", help="write a Zipf packet trace")
    gen.add_argument("--flows", type=int, default=DEFAULT_FLOWS)
    gen.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    gen.add_argument("--packets", type=int, default=DEFAULT_PACKETS)
    gen.add_argument("--seed", type=int, default=42)
    gen.add_argument("--out", type=Path, required=True)

    run = sub.add_parser("run", help="top-k accuracy over a grid of sketch dimensions")
    run.add_argument("--preset", help="start from a named preset, e.g. fig3")
    run.add_argument("--config", type=Path, help="key=value experiment file")
    run.add_argument("--flows", type=int)
    run.add_argument("--alpha", type=float)
    run.add_argument("--packets", type=int)
    run.add_argument("--k", type=int)
    run.add_argument("--seed", help="seed list such as 42 or 1-20 or 1,3,5")
    run.add_argument("--grid", action="append", metavar="D,W", help="grid cell; repeatable")
    run.add_argument("--workers", type=int)
    run.add_argument("--snapshots", action="store_true", help="also save each cell's sketch")
    run.add_argument("--out", type=Path)

    bench = sub.add_parser("bench", help="sketch update throughput")
    bench.add_argument("--depth", type=int, default=5)
    bench.add_argument("--width", type=int, default=272)
    bench.add_argument("--packets", type=int, default=DEFAULT_PACKETS)
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--repetitions", type=int)

    mon = sub.add_parser("monitor", help="per-window top-k tracking with a sketch zeroed every window")
    mon.add_argument("--flows", type=int, default=DEFAULT_FLOWS)
    mon.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    mon.add_argument("--packets", type=int, default=DEFAULT_PACKETS)
    mon.add_argument("--seed", type=int, default=42)
    mon.add_argument("--depth", type=int, default=5)
    mon.add_argument("--width", type=int, default=272)
    mon.add_argument("--k", type=int, default=20)
    mon.add_argument("--window-packets", type=int)
    mon.add_argument("--line-rate-gbps", type=float, default=100.0)
    mon.add_argument("--load", type=float, default=0.4)
    mon.add_argument("--window", type=float, default=0.1)

    view = sub.add_parser("view", help="browse a run directory in the terminal")
    view.add_argument("run_dir", type=Path)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings()
        logging.basicConfig(
            level=settings.log_level,
            stream=sys.stderr,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        )
        service = ExperimentService(settings)
        if args.command == "dimension":
            return cmd_dimension(service, args)
        if args.command == "gen-trace":
            return cmd_gen_trace(service, args)
        if args.command == "run":
            return cmd_run(service, args, settings)
        if args.command == "bench":
            return cmd_bench(service, args)
        if args.command == "monitor":
            return cmd_monitor(service, args)
        return cmd_view(service, args)
    except FlowsketchError as exc:
        print(f"flowsketch: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
