"""Command-line interface.

Subcommands: ``detect`` (change-points on a price or return CSV),
``simulate`` (export a simulated series plus its truth sidecar), ``bench``
(run a Monte-Carlo study from a config file), and ``config show``.

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical
failure.  All file outputs are written atomically (temp file + rename) and
are byte-identical across reruns with the same inputs and seed.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import io
import json
import os
import sys
import tempfile
from dataclasses import replace

import numpy as np

from . import __version__
from .bench import StudyResult, run_multi_cp_study, run_single_cp_study
from .configio import (
    estimator_from_dict,
    fit_config_to_dict,
    params_to_dict,
    segment_from_dict,
    study_config_from_dict,
)
from .distributions import parse_dist
from .errors import (
    ConfigError,
    DegenerateDataError,
    IngestionError,
    InvalidInputError,
    ParameterError,
    VolsegError,
)
from .estimators import EstimatorSpec, FitConfig
from .garch import GarchParams
from .prices import ingest_prices, to_returns
from .segmentation import PenaltySpec, SegmentationConfig, binary_segmentation, default_penalty
from .simulation import DgpSegmentSpec, simulate

SCHEMA_VERSION = 1

_MODEL_ALIASES = {"garch": "garch11", "egarch": "egarch11", "gjr": "gjr11",
                  "garch11": "garch11", "egarch11": "egarch11", "gjr11": "gjr11"}


class _Parser(argparse.ArgumentParser):
    """argparse that exits with code 1 on usage errors (2 is reserved for data)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".volseg-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# detect
# ---------------------------------------------------------------------------

def _seg_config_from_args(args) -> SegmentationConfig:
    model = _MODEL_ALIASES[args.model]
    if args.estimator == "smle":
        est = EstimatorSpec("smle", "garch11")
        if model != "garch11":
            raise ConfigError("--estimator smle supports --model garch only")
    else:
        est = EstimatorSpec("qmle", model, parse_dist(args.qmle_dist))
    penalty = default_penalty(model, kind=args.penalty)
    if args.penalty_scale != 1.0:
        penalty = PenaltySpec(kind=penalty.kind, p=penalty.p, scale=args.penalty_scale)
    return SegmentationConfig(
        estimator=est,
        penalty=penalty,
        min_seg=args.min_seg,
        step_length=args.step_length,
        candidate_stride=args.stride,
    )


def cmd_detect(args) -> int:
    config = _seg_config_from_args(args)
    if args.value_kind == "price":
        series = ingest_prices(args.input, args.date_col, args.price_col,
                               delimiter=args.delimiter, date_format=args.date_format)
        returns = to_returns(series, mode=args.returns, center=not args.no_center)
        return_dates = series.dates[1:]
        n_rows = len(series)
    else:
        series = None
        return_dates, returns = _read_return_csv(args)
        n_rows = returns.size

    cps, details = binary_segmentation(returns, config, return_details=True)

    def date_str(i) -> str | None:
        if return_dates is None:
            return None
        return str(return_dates[i])

    segments = []
    total_cost = 0.0
    for (s, t) in cps.segments():
        fres = details["segment_fits"][(s, t)]
        total_cost += fres.neg2ll
        segments.append({
            "start": s + 1,
            "end": t,
            "start_date": date_str(s),
            "end_date": date_str(t - 1),
            "params": params_to_dict(fres.params),
            "neg2ll": fres.neg2ll,
            "converged": fres.converged,
        })
    penalty_val = details["penalty_value"]
    report = {
        "schema_version": SCHEMA_VERSION,
        "kind": "detection_report",
        "tool_version": __version__,
        "input": {
            "path": os.path.abspath(args.input),
            "date_column": args.date_col,
            "price_column": args.price_col,
            "value_kind": args.value_kind,
            "rows": int(n_rows),
        },
        "returns": {"mode": args.returns, "center": not args.no_center,
                    "n": int(returns.size)},
        "date_range": None if return_dates is None else {
            "start": date_str(0), "end": date_str(returns.size - 1),
        },
        "config": {
            "estimator": {"method": config.estimator.method,
                          "model": config.estimator.model,
                          "dist": config.estimator.qmle_dist.spec_string},
            "penalty": {"kind": config.resolved_penalty().kind,
                        "p": config.resolved_penalty().p,
                        "scale": config.resolved_penalty().scale},
            "min_seg": config.min_seg,
            "step_length": config.step_length,
            "stride": details["stride"],
            "fit_config": fit_config_to_dict(config._fit_config()),
            "seed": args.seed,
        },
        # a change-point index tau is the (1-based) last observation of the
        # left segment; its date is that observation's date
        "change_points": [
            {"index": int(tau), "date": date_str(tau - 1)} for tau in cps.cps
        ],
        "k": cps.k,
        "segments": segments,
        "total_cost": total_cost,
        "penalty_value": penalty_val,
        "total_penalized_cost": total_cost + (penalty_val or 0.0) * cps.k,
    }
    _atomic_write(args.output, _dump_json(report))
    print(f"n={returns.size} estimator={config.estimator.label} "
          f"penalty={config.resolved_penalty().kind} k={cps.k}")
    for cp in report["change_points"]:
        when = f" ({cp['date']})" if cp["date"] else ""
        print(f"  change-point at index {cp['index']}{when}")
    print(f"report written to {args.output}")
    return 0


def _read_return_csv(args):
    """(dates-or-None, returns) from a CSV holding returns directly."""
    try:
        fh = open(args.input, newline="", encoding="utf-8-sig")
    except OSError as exc:
        raise IngestionError(f"cannot open {args.input}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh, delimiter=args.delimiter)
        if reader.fieldnames is None:
            raise IngestionError(f"{args.input}: empty file (no header row)")
        if args.price_col not in reader.fieldnames:
            raise IngestionError(
                f"{args.input}: missing column {args.price_col!r}; "
                f"found {reader.fieldnames}"
            )
        has_dates = args.date_col in reader.fieldnames
        dates = []
        values = []
        for i, row in enumerate(reader, start=2):
            try:
                values.append(float(row[args.price_col]))
            except (TypeError, ValueError) as exc:
                raise IngestionError(
                    f"{args.input}: row {i}: cannot parse value "
                    f"{row.get(args.price_col)!r}"
                ) from exc
            if has_dates:
                try:
                    dates.append(dt.date.fromisoformat(row[args.date_col].strip()))
                except (TypeError, ValueError) as exc:
                    raise IngestionError(
                        f"{args.input}: row {i}: cannot parse date"
                    ) from exc
    if not values:
        raise IngestionError(f"{args.input}: no data rows")
    returns = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(returns)):
        raise IngestionError(f"{args.input}: non-finite return values")
    date_arr = np.array(dates, dtype="datetime64[D]") if has_dates else None
    return date_arr, returns


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _parse_segment_flag(text: str) -> DgpSegmentSpec:
    """model:omega,alpha,beta[,gamma]:length  e.g. garch:0.1,0.05,0.9:1000"""
    try:
        model_txt, params_txt, length_txt = text.split(":")
        model = _MODEL_ALIASES[model_txt.strip().lower()]
        values = [float(v) for v in params_txt.split(",")]
        seg_dict = {
            "model": model,
            "length": int(length_txt),
            "params": {"omega": values[0], "alpha": values[1], "beta": values[2]},
        }
        if len(values) == 4:
            seg_dict["params"]["gamma"] = values[3]
        elif model != "garch11":
            raise ConfigError(f"{model} segments need omega,alpha,beta,gamma")
        return segment_from_dict(seg_dict)
    except (KeyError, ValueError, IndexError) as exc:
        raise ConfigError(f"cannot parse --segment {text!r} "
                          "(expected model:omega,alpha,beta[,gamma]:length)") from exc


def cmd_simulate(args) -> int:
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
        segments = [segment_from_dict(s) for s in cfg["segments"]]
        seed = cfg.get("seed", args.seed)
        burn_in = cfg.get("burn_in", args.burn_in)
    elif args.segment:
        segments = [_parse_segment_flag(s) for s in args.segment]
        seed = args.seed
        burn_in = args.burn_in
    else:
        raise ConfigError("simulate needs --config or at least one --segment")
    if args.dist:
        d = parse_dist(args.dist)
        segments = [replace(s, dist=d) for s in segments]

    y, _, truth = simulate(segments, seed, burn_in=burn_in)
    start = dt.date(2000, 1, 3)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["date", "return"])
    for i, v in enumerate(y):
        writer.writerow([(start + dt.timedelta(days=i)).isoformat(), repr(float(v))])
    _atomic_write(args.output, buf.getvalue())

    truth_path = args.truth or args.output + ".truth.json"
    sidecar = {
        "schema_version": SCHEMA_VERSION,
        "kind": "simulation_truth",
        "seed": seed,
        "burn_in": burn_in,
        "n": truth.n,
        "change_points": list(truth.cps),
        "segments": [
            {"model": s.model, "length": s.length, "dist": s.dist.spec_string,
             "params": params_to_dict(s.params)}
            for s in segments
        ],
    }
    _atomic_write(truth_path, _dump_json(sidecar))
    print(f"wrote {truth.n} returns to {args.output} (truth: {truth_path})")
    return 0


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

def _study_tables(result: StudyResult) -> dict[str, str]:
    """Plot-data CSVs (filename -> contents) for a study result."""
    tables: dict[str, str] = {}

    def render(header, rows):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()

    if result.kind == "single_cp":
        rows = []
        for rec in result.records:
            for label, e in sorted(rec["estimators"].items()):
                rows.append([rec["rep"], label, e["tau"], e["scaled"], e["lambda"]])
        tables["positions.csv"] = render(
            ["rep", "estimator", "tau", "scaled", "lambda"], rows)
        rows = [[label, a["q"], a["bias"], a["variance"], a["count"]]
                for label, a in sorted(result.aggregates.items())]
        tables["bias_variance.csv"] = render(
            ["estimator", "q", "bias", "variance", "count"], rows)
    else:
        rows = []
        for label, agg in sorted(result.aggregates.items()):
            for k, c in sorted(agg["k_hist"].items()):
                rows.append([label, k, c])
        tables["khist.csv"] = render(["estimator", "k", "count"], rows)
        rows = []
        for label, agg in sorted(result.aggregates.items()):
            for i, b in enumerate(agg["position_bins"], start=1):
                rows.append([label, f"cp{i}", b["lo"], b["hi"], b["count"],
                             b.get("min"), b.get("q1"), b.get("median"),
                             b.get("q3"), b.get("max")])
        tables["position_bins.csv"] = render(
            ["estimator", "bin", "lo", "hi", "count", "min", "q1", "median",
             "q3", "max"], rows)
        if any("accuracy" in a for a in result.aggregates.values()):
            rows = []
            for label, agg in sorted(result.aggregates.items()):
                for m, frac in sorted(agg.get("accuracy", {}).items()):
                    rows.append([label, m, frac])
            tables["accuracy.csv"] = render(["estimator", "m", "fraction"], rows)
    return tables


def _study_summary(result: StudyResult) -> str:
    lines = [f"study kind: {result.kind}",
             f"replications: {len(result.records)}",
             f"true change-points: {list(result.truth.cps)} (n={result.truth.n})"]
    for label, agg in sorted(result.aggregates.items()):
        if result.kind == "single_cp":
            lines.append(
                f"  {label}: bias={agg['bias']:+.5f} variance={agg['variance']:.5f}"
            )
        else:
            lines.append(f"  {label}: modal k={agg['k_mode']} mean k={agg['mean_k']:.2f}")
            for m, frac in sorted(agg.get("accuracy", {}).items()):
                lines.append(f"    accuracy(+/-{m}) = {100 * frac:.1f}%")
    return "\n".join(lines) + "\n"


def cmd_bench(args) -> int:
    with open(args.config, encoding="utf-8") as fh:
        raw = json.load(fh)
    kind = raw.pop("kind", "multi_cp")
    if args.replications is not None:
        raw["replications"] = args.replications
    if args.base_seed is not None:
        raw["base_seed"] = args.base_seed
    if args.workers is not None:
        raw["workers"] = args.workers
    config = study_config_from_dict(raw)
    if kind == "single_cp":
        result = run_single_cp_study(config)
    elif kind == "multi_cp":
        result = run_multi_cp_study(config)
    else:
        raise ConfigError("study 'kind' must be 'single_cp' or 'multi_cp'")

    os.makedirs(args.output_dir, exist_ok=True)
    out = lambda name: os.path.join(args.output_dir, name)
    records_text = "".join(_dump_json_line(r) for r in result.records)
    _atomic_write(out("records.jsonl"), records_text)
    _atomic_write(out("aggregate.json"), _dump_json({
        "schema_version": SCHEMA_VERSION,
        "kind": result.kind,
        "truth": {"n": result.truth.n, "change_points": list(result.truth.cps)},
        "config": result.config_echo,
        "aggregates": result.aggregates,
    }))
    for name, text in _study_tables(result).items():
        _atomic_write(out(name), text)
    summary = _study_summary(result)
    _atomic_write(out("summary.txt"), summary)
    print(summary, end="")
    return 0


def _dump_json_line(obj) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# config show
# ---------------------------------------------------------------------------

def cmd_config(args) -> int:
    if args.action != "show":
        raise ConfigError("supported: config show")
    defaults = {
        "fit_config": fit_config_to_dict(FitConfig()),
        "segmentation": {
            "min_seg": 100,
            "step_length": 200,
            "candidate_stride": "25 for n <= 2000, else max(10, n // 100)",
            "penalty": {"kind": "sic", "p": "3 for garch11, 4 for egarch/gjr",
                        "scale": 1.0},
        },
        "detect": {
            "returns": "log_pct", "center": True, "estimator": "smle",
            "model": "garch", "qmle_dist": "gaussian", "date_col": "date",
            "price_col": "price", "value_kind": "price", "delimiter": ",",
            "date_format": "ISO-8601",
        },
        "simulate": {"burn_in": 200, "seed": 0},
        "bench": {"replications": 20, "base_seed": 0,
                  "accuracy_bands": [10, 25, 50],
                  "position_bin_fractions": [0.375, 0.625, 0.875],
                  "workers": "cpu count"},
    }
    print(_dump_json(defaults), end="")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="volseg",
                description="Volatility change-point detection via semiparametric "
                            "GARCH likelihoods and binary segmentation")
    p.add_argument("--version", action="version", version=f"volseg {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("detect", help="detect change-points in a price/return CSV")
    d.add_argument("--input", required=True)
    d.add_argument("--output", required=True, help="report JSON path")
    d.add_argument("--date-col", default="date")
    d.add_argument("--price-col", default="price")
    d.add_argument("--value-kind", choices=("price", "return"), default="price")
    d.add_argument("--delimiter", default=",")
    d.add_argument("--date-format", default=None,
                   help="strptime format; default ISO-8601")
    d.add_argument("--returns", choices=("log_pct", "simple_pct"), default="log_pct")
    d.add_argument("--no-center", action="store_true")
    d.add_argument("--estimator", choices=("smle", "qmle"), default="smle")
    d.add_argument("--model", choices=sorted(_MODEL_ALIASES), default="garch")
    d.add_argument("--qmle-dist", default="gaussian")
    d.add_argument("--penalty", choices=("sic", "aic"), default="sic")
    d.add_argument("--penalty-scale", type=float, default=1.0)
    d.add_argument("--min-seg", type=int, default=100)
    d.add_argument("--step-length", type=int, default=200)
    d.add_argument("--stride", type=int, default=None)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_detect)

    s = sub.add_parser("simulate", help="simulate a piecewise series to CSV")
    s.add_argument("--config", default=None, help="JSON with {'segments': [...]} ")
    s.add_argument("--segment", action="append", default=None,
                   help="model:omega,alpha,beta[,gamma]:length (repeatable)")
    s.add_argument("--dist", default=None, help="innovation spec, e.g. t:6")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--burn-in", type=int, default=200)
    s.add_argument("--output", required=True)
    s.add_argument("--truth", default=None, help="truth sidecar path")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", help="run a Monte-Carlo study from a config file")
    b.add_argument("--config", required=True)
    b.add_argument("--output-dir", required=True)
    b.add_argument("--replications", type=int, default=None)
    b.add_argument("--base-seed", type=int, default=None)
    b.add_argument("--workers", type=int, default=None)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("config", help="inspect configuration defaults")
    c.add_argument("action", choices=("show",))
    c.set_defaults(func=cmd_config)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit:
        raise
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (IngestionError, InvalidInputError, DegenerateDataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except (VolsegError, ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
