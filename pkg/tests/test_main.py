import json

import pytest

from flowsketch.main import EXIT_OK, EXIT_USAGE, main


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for name in ("FLOWSKETCH_OUT_DIR", "FLOWSKETCH_LOG_LEVEL", "FLOWSKETCH_WORKERS", "FLOWSKETCH_BENCH_REPETITIONS"):
        monkeypatch.delenv(name, raising=False)


def test_dimension_defaults(capsys):
    assert main(["dimension"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert (report["d"], report["w"]) == (5, 272)
    assert report["memory_bits"] == 5 * 272 * 32
    assert report["flows_per_window"] == pytest.approx(7_316, abs=1)
    assert report["packets_per_window"] == 574_317
    assert report["published"]["flow_rate"] == 73_000
    assert report["discrepancies"] == ["packet_rate"]


def test_dimension_coarse_target(capsys):
    assert main(["dimension", "--epsilon", "0.5", "--delta", "0.5"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert (report["d"], report["w"]) == (1, 6)


def test_dimension_off_table_profile_has_no_published_cell(capsys):
    assert main(["dimension", "--line-rate-gbps", "25", "--load", "0.5"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["published"] is None
    assert report["discrepancies"] == []


@pytest.mark.parametrize(
    "argv",
    [
        ["dimension", "--load", "0"],
        ["dimension", "--epsilon", "0"],
        ["dimension", "--delta", "1"],
        ["dimension", "--window", "0"],
        ["dimension", "--counter-bits", "0"],
    ],
)
def test_dimension_domain_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert capsys.readouterr().err.count("flowsketch: error:") == 1


def test_gen_trace_is_reproducible(tmp_path):
    first, second = tmp_path / "a.trace", tmp_path / "b.trace"
    assert main(["gen-trace", "--seed", "42", "--out", str(first)]) == EXIT_OK
    assert main(["gen-trace", "--seed", "42", "--out", str(second)]) == EXIT_OK
    data = first.read_bytes()
    assert data == second.read_bytes()
    assert data.count(b"\n") == 550_001
    assert data.startswith(b"#cms-trace v1 N=7000 alpha=1.1 packets=550000 seed=42\n")


def test_gen_trace_rejects_empty_population(tmp_path):
    out = tmp_path / "t.trace"
    assert main(["gen-trace", "--flows", "0", "--out", str(out)]) == EXIT_USAGE
    assert not out.exists()


def test_run_small_grid(tmp_path, capsys, goldens):
    out = tmp_path / "run"
    argv = ["run", "--flows", "50", "--alpha", "1.1", "--packets", "2000", "--k", "5",
            "--seed", "42", "--grid", "2,16", "--grid", "3x64", "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out.strip() == str(out / "summary.csv")
    assert (out / "report_d3_w64_s42.csv").read_bytes() == (goldens / "report_d3_w64_s42.csv").read_bytes()


def test_run_without_grid_is_a_usage_error(tmp_path):
    assert main(["run", "--seed", "1", "--out", str(tmp_path)]) == EXIT_USAGE
    assert list(tmp_path.iterdir()) == []


def test_run_with_unknown_preset_is_a_usage_error(tmp_path):
    assert main(["run", "--preset", "nope", "--seed", "1", "--out", str(tmp_path)]) == EXIT_USAGE


def test_run_takes_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FLOWSKETCH_OUT_DIR", str(tmp_path / "env-out"))
    argv = ["run", "--flows", "50", "--packets", "2000", "--k", "5", "--seed", "42", "--grid", "2,16"]
    assert main(argv) == EXIT_OK
    assert (tmp_path / "env-out" / "report_d2_w16_s42.csv").exists()


def test_bad_environment_is_a_usage_error(monkeypatch):
    monkeypatch.setenv("FLOWSKETCH_WORKERS", "zero")
    assert main(["dimension"]) == EXIT_USAGE


def test_bench_rejects_empty_trace():
    assert main(["bench", "--packets", "0"]) == EXIT_USAGE


def test_bench_report(capsys):
    assert main(["bench", "--depth", "3", "--width", "64", "--packets", "2000"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert (report["depth"], report["width"], report["packets"]) == (3, 64, 2_000)
    assert report["repetitions"] >= 5
    assert report["update_rate"] > 0 and report["ingest_rate"] > 0
    assert len(report["headroom"]) == 6
    row = next(h for h in report["headroom"] if h["line_rate_gbps"] == 100 and h["load"] == 0.7)
    assert row["packet_rate"] == 10_800_000
    assert row["headroom"] == pytest.approx(report["update_rate"] / 10.8e6)


def test_monitor_prints_one_line_per_window(capsys):
    argv = ["monitor", "--flows", "50", "--packets", "2000", "--window-packets", "500",
            "--k", "5", "--depth", "3", "--width", "64"]
    assert main(argv) == EXIT_OK
    lines = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [w["window"] for w in lines] == [0, 1, 2, 3]
    assert [w["start_packet"] for w in lines] == [0, 500, 1_000, 1_500]
    assert all(w["packets"] == 500 and w["k"] == 5 for w in lines)
    assert all(len(w["tracked"]) == 5 for w in lines)
    assert all(w["threshold"] == w["tracked"][-1][1] for w in lines)
    assert all(0.0 <= w["recall"] <= 1.0 for w in lines)


def test_monitor_window_from_rates(capsys):
    argv = ["monitor", "--flows", "50", "--packets", "2000", "--k", "5",
            "--line-rate-gbps", "0.0001", "--load", "1", "--window", "1"]
    assert main(argv) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    # 1e5 bits/s at 870.6-byte packets is about 14 packets per second.
    assert json.loads(lines[0])["packets"] == 14
    assert len(lines) == 143


def test_missing_subcommand_exits_with_usage():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
