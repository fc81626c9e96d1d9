"""Operator command line: train, benchmark, forecast, recommend, serve, synth-data.

Exit codes: 0 success, 1 usage error, 2 data/environment error. Every
subcommand is deterministic given its flags and input files.
"""

from __future__ import annotations

import argparse
import csv
import os
import signal
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .advisory import ScoreWeights, posterior_to_mapping, rank_crops
from .benchmark import default_roster, render_text_table, run_benchmark
from .bundle import BundleError, load_bundle, save_bundle
from .data import (
    DataError,
    load_crop_dataset,
    load_fertilizer_dataset,
    load_market_history,
    synth_crop_corpus,
    synth_fertilizer_rows,
    synth_market_table,
    write_crop_csv,
    write_fertilizer_csv,
    write_market_csv,
)
from .domain import SoilSample, ValidationError, validate_soil_sample
from .fixtures import train_bundle
from .forecast import ForecastConfig, forecast_horizon, next_months, price_scores
from .models import ForestConfig

USAGE_EXIT = 1
DATA_EXIT = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; the documented code is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cropadvisor", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="fit all models and write a bundle")
    train.add_argument("--crop-data", required=True, help="7-feature recommendation CSV")
    train.add_argument("--fertilizer-data", required=True)
    train.add_argument("--market-data", required=True)
    train.add_argument("--out", required=True, help="bundle output path (*.kisan.json)")
    train.add_argument("--trees", type=int, default=500)
    train.add_argument("--seed", type=int, default=42)
    train.add_argument("--max-depth", type=int, default=None)
    train.add_argument("--changepoints", type=int, default=4)
    train.add_argument("--fourier-order", type=int, default=3)
    train.add_argument("--ridge-lambda", type=float, default=1.0)

    bench = sub.add_parser("benchmark", help="run the model comparison on one split")
    bench.add_argument("--data", required=True, help="price-augmented benchmark CSV")
    bench.add_argument("--fraction", type=float, default=0.2)
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--trees", type=int, default=500)
    bench.add_argument("--out-json", default="benchmark_report.json")
    bench.add_argument("--out-text", default="benchmark_report.txt")
    bench.add_argument("--out-confusion", default=None,
                       help="optional CSV path for the champion confusion matrix")

    fc = sub.add_parser("forecast", help="print or export a price forecast")
    fc.add_argument("crop")
    fc.add_argument("--bundle", required=True)
    fc.add_argument("--months", type=int, default=6)
    fc.add_argument("--csv", default=None, help="optional CSV export path")

    rec = sub.add_parser("recommend", help="rank crops for a soil sample offline")
    rec.add_argument("--bundle", required=True)
    for field in ("n", "p", "k", "temperature", "humidity", "ph", "rainfall"):
        rec.add_argument(f"--{field}", type=float, required=True)
    rec.add_argument("--w1", type=float, default=None)
    rec.add_argument("--w2", type=float, default=None)
    rec.add_argument("--months", type=int, default=6)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--bundle", default=None,
                       help="bundle path (env CROPADVISOR_BUNDLE)")
    serve.add_argument("--bind", default=None, help="HOST:PORT (env CROPADVISOR_BIND)")
    serve.add_argument("--cors", action="append", default=None,
                       help="allowed origin, repeatable (env CROPADVISOR_CORS, comma-separated)")
    serve.add_argument("--benchmark", default=None,
                       help="benchmark report JSON to serve (env CROPADVISOR_BENCHMARK)")

    synth = sub.add_parser("synth-data", help="write synthetic corpora for offline use")
    synth.add_argument("--out-dir", required=True)
    synth.add_argument("--seed", type=int, default=2022)
    synth.add_argument("--rows-per-class", type=int, default=100)

    return parser


def _cmd_train(args) -> int:
    crop_ds = load_crop_dataset(args.crop_data, with_price=False)
    fert_ds = load_fertilizer_dataset(args.fertilizer_data)
    market = load_market_history(args.market_data)
    bundle = train_bundle(
        crop_ds,
        fert_ds,
        market,
        forest_config=ForestConfig(
            n_trees=args.trees, seed=args.seed, max_depth=args.max_depth
        ),
        forecast_config=ForecastConfig(
            n_changepoints=args.changepoints,
            fourier_order=args.fourier_order,
            ridge_lambda=args.ridge_lambda,
        ),
        created_at=datetime.now(timezone.utc).isoformat(),
    )
    save_bundle(bundle, args.out)
    print(f"bundle written: {args.out}")
    print(f"  crops: {len(bundle.crop_catalog)}  "
          f"fertilizers: {len(bundle.fertilizer_catalog)}  "
          f"price models: {len(bundle.price_models)}")
    return 0


def _cmd_benchmark(args) -> int:
    dataset = load_crop_dataset(args.data, with_price=True)
    report = run_benchmark(
        dataset,
        roster=default_roster(forest_seed=args.seed, n_trees=args.trees),
        split=(args.fraction, args.seed),
    )
    created = datetime.now(timezone.utc).isoformat()
    Path(args.out_json).write_text(report.to_json(created_at=created), encoding="utf-8")
    text = render_text_table(report)
    Path(args.out_text).write_text(text, encoding="utf-8")
    if args.out_confusion and report.champion_confusion is not None:
        Path(args.out_confusion).write_text(
            report.champion_confusion.to_csv(), encoding="utf-8"
        )
    print(text, end="")
    print(f"report written: {args.out_json}, {args.out_text}")
    return 0


def _cmd_forecast(args) -> int:
    if args.months < 1:
        raise UsageError("--months must be >= 1")
    bundle = load_bundle(args.bundle)
    model = bundle.price_models.get(args.crop)
    if model is None:
        known = ", ".join(sorted(bundle.price_models)) or "(none)"
        raise DataError(f"no market data for crop '{args.crop}'; known: {known}")
    result = forecast_horizon(model, args.months)
    rows = [
        (p.year, p.month, p.yhat, p.trend, p.seasonal, p.lower, p.upper)
        for p in result.points
    ]
    print(f"{'year':>5} {'month':>5} {'yhat':>10} {'trend':>10} "
          f"{'seasonal':>9} {'lower':>10} {'upper':>10}")
    for year, month, yhat, trend, seasonal, lower, upper in rows:
        print(f"{year:>5} {month:>5} {yhat:>10.2f} {trend:>10.2f} "
              f"{seasonal:>9.2f} {lower:>10.2f} {upper:>10.2f}")
    if args.csv:
        with Path(args.csv).open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["year", "month", "yhat", "trend", "seasonal", "lower", "upper"])
            for row in rows:
                writer.writerow([row[0], row[1]] + [repr(float(v)) for v in row[2:]])
        print(f"forecast written: {args.csv}")
    return 0


def _cmd_recommend(args) -> int:
    if (args.w1 is None) != (args.w2 is None):
        raise UsageError("--w1 and --w2 must be given together")
    if args.months < 1:
        raise UsageError("--months must be >= 1")
    weights = ScoreWeights() if args.w1 is None else ScoreWeights(args.w1, args.w2)
    bundle = load_bundle(args.bundle)
    sample = validate_soil_sample(
        SoilSample(
            n=args.n, p=args.p, k=args.k, temperature=args.temperature,
            humidity=args.humidity, ph=args.ph, rainfall=args.rainfall,
        )
    )
    posterior = bundle.forest.predict_vector(sample.to_vector())
    suitability = posterior_to_mapping(posterior, bundle.crop_catalog)
    g_scores = {}
    if bundle.price_models:
        forecasts = {
            crop: model.predict_at(*next_months(model.last_year, model.last_month,
                                                args.months)[-1])
            for crop, model in bundle.price_models.items()
        }
        positive = {c: p for c, p in forecasts.items() if p > 0}
        if positive:
            g_scores = price_scores(positive)
    advisory = rank_crops(suitability, g_scores, weights)
    for rec in advisory.recommendations:
        flag = "  [no market data]" if rec.no_market_data else ""
        print(f"{rec.crop_id} {rec.score:.3f} "
              f"(p_yield={rec.p_yield:.3f}, g_price={rec.g_price:.3f}){flag}")
    return 0


def _env_or(value, env_name, default):
    if value is not None:
        return value
    env = os.environ.get(env_name)
    return env if env is not None else default


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    bundle_path = _env_or(args.bundle, "CROPADVISOR_BUNDLE", None)
    if not bundle_path:
        raise DataError("no bundle: pass --bundle or set CROPADVISOR_BUNDLE")
    bind = _env_or(args.bind, "CROPADVISOR_BIND", "127.0.0.1:8000")
    if args.cors is not None:
        cors = args.cors
    else:
        env_cors = os.environ.get("CROPADVISOR_CORS", "")
        cors = [o for o in env_cors.split(",") if o]
    benchmark_path = _env_or(args.benchmark, "CROPADVISOR_BENCHMARK", None)

    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        raise UsageError(f"--bind must be HOST:PORT, got '{bind}'")

    app = create_app(
        bundle_path=bundle_path, cors_origins=cors, benchmark_path=benchmark_path
    )
    state = app.state.service
    if hasattr(signal, "SIGHUP"):  # hot-swap the snapshot on SIGHUP
        signal.signal(signal.SIGHUP, lambda *_: state.reload())
    print(f"serving bundle {bundle_path} on {host}:{port_text}")
    try:
        uvicorn.run(app, host=host, port=int(port_text), log_level="info")
    except OSError as exc:  # e.g. port already bound
        raise DataError(f"cannot bind {bind}: {exc}") from None
    return 0


def _cmd_synth_data(args) -> int:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    crop7 = synth_crop_corpus(seed=args.seed, n_per_class=args.rows_per_class,
                              with_price=False)
    crop8 = synth_crop_corpus(seed=args.seed, n_per_class=args.rows_per_class,
                              with_price=True)
    write_crop_csv(crop7, out / "crop_recommendation.csv")
    write_crop_csv(crop8, out / "crop_with_price.csv")
    write_fertilizer_csv(synth_fertilizer_rows(seed=args.seed + 1, n_rows=500),
                         out / "fertilizer.csv")
    write_market_csv(synth_market_table(seed=args.seed + 2), out / "market_history.csv")
    print(f"synthetic corpora written to {out}/")
    print("  crop_recommendation.csv, crop_with_price.csv, fertilizer.csv, market_history.csv")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "benchmark": _cmd_benchmark,
    "forecast": _cmd_forecast,
    "recommend": _cmd_recommend,
    "serve": _cmd_serve,
    "synth-data": _cmd_synth_data,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (DataError, BundleError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return DATA_EXIT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
