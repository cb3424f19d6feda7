import json
import math

import numpy as np
import pytest

import volseg as vs
from volseg.cli import main


def run_cli(*args):
    return main(list(args))


@pytest.fixture(scope="module")
def sim_csv(tmp_path_factory):
    """A simulated two-regime return CSV plus its truth sidecar."""
    d = tmp_path_factory.mktemp("sim")
    out = str(d / "returns.csv")
    rc = run_cli(
        "simulate",
        "--segment", "garch:0.1,0.05,0.9:500",
        "--segment", "garch:0.15,0.2,0.7:500",
        "--seed", "5", "--output", out,
    )
    assert rc == 0
    return out


@pytest.fixture(scope="module")
def price_csv(tmp_path_factory):
    """A realistic price CSV built from a simulated return path."""
    d = tmp_path_factory.mktemp("prices")
    y, _, _ = vs.simulate(
        [vs.DgpSegmentSpec("garch11", vs.DGP1, 400, vs.student_t(6)),
         vs.DgpSegmentSpec("garch11", vs.DGP2, 400, vs.student_t(6))], seed=5
    )
    prices = 3000.0 * np.exp(np.cumsum(y) / 100.0)
    start = np.datetime64("2016-01-04")
    path = d / "index.csv"
    with open(path, "w") as fh:
        fh.write("Date,Open\n")
        for i, p in enumerate(prices):
            fh.write(f"{start + i},{float(p)!r}\n")
    return str(path)


class TestSimulateCommand:
    def test_deterministic_files(self, tmp_path):
        outs = []
        for tag in ("a", "b"):
            out = str(tmp_path / f"{tag}.csv")
            rc = run_cli("simulate", "--segment", "garch:0.1,0.05,0.9:100",
                         "--seed", "7", "--output", out)
            assert rc == 0
            outs.append(open(out, "rb").read())
            outs.append(open(out + ".truth.json", "rb").read())
        assert outs[0] == outs[2] and outs[1] == outs[3]

    def test_row_count_and_truth(self, sim_csv):
        rows = open(sim_csv).read().strip().splitlines()
        assert len(rows) - 1 == 1000  # header excluded
        truth = json.load(open(sim_csv + ".truth.json"))
        assert truth["change_points"] == [500]
        assert truth["n"] == 1000
        assert truth["segments"][0]["params"]["omega"] == 0.1

    def test_dist_flag(self, tmp_path):
        out = str(tmp_path / "t6.csv")
        rc = run_cli("simulate", "--segment", "garch:0.1,0.05,0.9:100",
                     "--dist", "t:6", "--seed", "1", "--output", out)
        assert rc == 0
        truth = json.load(open(out + ".truth.json"))
        assert truth["segments"][0]["dist"] == "t:6"

    def test_bad_segment_spec_exit_1(self, tmp_path, capsys):
        rc = run_cli("simulate", "--segment", "garch:0.1:100",
                     "--output", str(tmp_path / "x.csv"))
        assert rc == 1

    def test_missing_inputs_exit_1(self, tmp_path):
        rc = run_cli("simulate", "--output", str(tmp_path / "x.csv"))
        assert rc == 1


class TestDetectCommand:
    def test_return_csv_round_trip(self, sim_csv, tmp_path):
        report_path = str(tmp_path / "report.json")
        rc = run_cli("detect", "--input", sim_csv, "--value-kind", "return",
                     "--price-col", "return", "--estimator", "qmle",
                     "--stride", "50", "--output", report_path)
        assert rc == 0
        report = json.load(open(report_path))
        assert report["schema_version"] == 1
        assert report["returns"]["n"] == 1000
        # segments tile the series
        bounds = [s["start"] for s in report["segments"]] + [1000 + 1]
        assert bounds[0] == 1
        for s, nxt in zip(report["segments"], report["segments"][1:]):
            assert nxt["start"] == s["end"] + 1
        for cp in report["change_points"]:
            assert 0 < cp["index"] < 1000

    def test_detect_on_prices_end_to_end(self, price_csv, tmp_path):
        report_path = str(tmp_path / "report.json")
        rc = run_cli("detect", "--input", price_csv, "--date-col", "Date",
                     "--price-col", "Open", "--estimator", "smle",
                     "--stride", "100", "--output", report_path)
        assert rc == 0
        report = json.load(open(report_path))
        assert report["returns"]["n"] == 799
        assert report["date_range"]["start"] == "2016-01-05"
        assert report["config"]["estimator"]["method"] == "smle"
        # the echoed configuration resolves every default needed to rerun
        assert report["config"]["fit_config"]["fatol"] == 1e-6
        assert report["config"]["stride"] == 100
        assert report["config"]["penalty"] == {"kind": "sic", "p": 3, "scale": 1.0}
        assert math.isfinite(report["total_penalized_cost"])
        # change-point dates correspond to the reported indices
        for cp in report["change_points"]:
            assert report["segments"][0]["start_date"] <= cp["date"]

    def test_deterministic_report_bytes(self, sim_csv, tmp_path):
        blobs = []
        for tag in ("r1", "r2"):
            p = str(tmp_path / f"{tag}.json")
            rc = run_cli("detect", "--input", sim_csv, "--value-kind", "return",
                         "--price-col", "return", "--estimator", "qmle",
                         "--stride", "100", "--output", p)
            assert rc == 0
            blobs.append(open(p, "rb").read())
        assert blobs[0] == blobs[1]

    def test_missing_file_exit_2(self, tmp_path):
        rc = run_cli("detect", "--input", "/nope.csv",
                     "--output", str(tmp_path / "r.json"))
        assert rc == 2

    def test_bad_column_exit_2(self, sim_csv, tmp_path):
        rc = run_cli("detect", "--input", sim_csv, "--price-col", "close",
                     "--output", str(tmp_path / "r.json"))
        assert rc == 2

    def test_usage_error_exit_1(self):
        with pytest.raises(SystemExit) as exc:
            run_cli("detect", "--estimator", "mle", "--input", "x", "--output", "y")
        assert exc.value.code == 1

    def test_no_partial_report_on_failure(self, sim_csv, tmp_path):
        target = tmp_path / "never.json"
        rc = run_cli("detect", "--input", sim_csv, "--price-col", "close",
                     "--output", str(target))
        assert rc == 2 and not target.exists()


class TestBenchCommand:
    def test_single_cp_smoke(self, tmp_path):
        cfg = {
            "kind": "single_cp",
            "dgp": [
                {"model": "garch11", "length": 150,
                 "params": {"omega": 0.1, "alpha": 0.05, "beta": 0.9}},
                {"model": "garch11", "length": 150,
                 "params": {"omega": 0.15, "alpha": 0.2, "beta": 0.7}},
            ],
            "estimators": [{"method": "qmle"}, {"method": "smle"}],
            "replications": 2,
            "base_seed": 3,
            "min_seg": 50,
            "step_length": 60,
            "candidate_stride": 50,
            "workers": 1,
        }
        cfg_path = tmp_path / "study.json"
        cfg_path.write_text(json.dumps(cfg))
        outdir = tmp_path / "out"
        rc = run_cli("bench", "--config", str(cfg_path), "--output-dir", str(outdir))
        assert rc == 0
        agg = json.load(open(outdir / "aggregate.json"))
        assert agg["kind"] == "single_cp"
        assert "smle" in agg["aggregates"]
        records = [json.loads(line) for line in open(outdir / "records.jsonl")]
        assert len(records) == 2
        assert (outdir / "positions.csv").exists()
        assert (outdir / "summary.txt").exists()

        # determinism: rerun produces byte-identical files
        outdir2 = tmp_path / "out2"
        rc = run_cli("bench", "--config", str(cfg_path), "--output-dir", str(outdir2))
        assert rc == 0
        for name in ("records.jsonl", "aggregate.json", "positions.csv",
                     "bias_variance.csv", "summary.txt"):
            assert (outdir / name).read_bytes() == (outdir2 / name).read_bytes()

    def test_multi_cp_smoke(self, tmp_path):
        cfg = {
            "kind": "multi_cp",
            "dgp": [{"model": "garch11", "length": 300,
                     "params": {"omega": 0.1, "alpha": 0.05, "beta": 0.9}}],
            "estimators": [{"method": "qmle"}],
            "replications": 1,
            "min_seg": 100,
            "step_length": 100,
            "candidate_stride": 100,
            "workers": 1,
        }
        cfg_path = tmp_path / "study.json"
        cfg_path.write_text(json.dumps(cfg))
        outdir = tmp_path / "out"
        rc = run_cli("bench", "--config", str(cfg_path), "--output-dir", str(outdir))
        assert rc == 0
        assert (outdir / "khist.csv").exists()
        assert (outdir / "position_bins.csv").exists()

    def test_aggregate_matches_records(self, tmp_path):
        # round trip: recompute the aggregate table from persisted records
        from volseg.bench import aggregate_single_cp

        cfg = {
            "kind": "single_cp",
            "dgp": [
                {"model": "garch11", "length": 150,
                 "params": {"omega": 0.1, "alpha": 0.05, "beta": 0.9}},
                {"model": "garch11", "length": 150,
                 "params": {"omega": 0.15, "alpha": 0.2, "beta": 0.7}},
            ],
            "estimators": [{"method": "qmle"}],
            "replications": 3,
            "min_seg": 50,
            "step_length": 60,
            "candidate_stride": 50,
            "workers": 1,
        }
        cfg_path = tmp_path / "study.json"
        cfg_path.write_text(json.dumps(cfg))
        outdir = tmp_path / "out"
        assert run_cli("bench", "--config", str(cfg_path),
                       "--output-dir", str(outdir)) == 0
        records = [json.loads(line) for line in open(outdir / "records.jsonl")]
        agg = json.load(open(outdir / "aggregate.json"))
        truth = vs.ChangePointSet(agg["truth"]["n"],
                                  tuple(agg["truth"]["change_points"]))
        recomputed = aggregate_single_cp(records, truth)
        assert json.loads(json.dumps(recomputed)) == agg["aggregates"]

    def test_bad_config_exit_1(self, tmp_path):
        cfg_path = tmp_path / "study.json"
        cfg_path.write_text(json.dumps({"kind": "single_cp", "dgp": []}))
        assert run_cli("bench", "--config", str(cfg_path),
                       "--output-dir", str(tmp_path / "o")) == 1


class TestConfigShow:
    def test_prints_defaults(self, capsys):
        assert run_cli("config", "show") == 0
        out = json.loads(capsys.readouterr().out)
        assert out["fit_config"]["fatol"] == 1e-6
        assert out["segmentation"]["min_seg"] == 100
        assert out["detect"]["estimator"] == "smle"
