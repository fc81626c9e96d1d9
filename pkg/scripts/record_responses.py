#!/usr/bin/env python3
"""Record real service responses as fixtures for the web client's contract tests.

Each fixture stores the route template, method, status, and body; the
frontend validates every body against docs/openapi.json. Re-run after any
contract change (together with export_openapi.py).
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from cropadvisor.benchmark import ModelSpec, run_benchmark
from cropadvisor.data import synth_crop_corpus
from cropadvisor.fixtures import comparative_fixture_bundle
from cropadvisor.service import create_app

SOIL = dict(n=90, p=42, k=43, temperature=20.8, humidity=82.0, ph=6.5, rainfall=202.9)

OUT_DIR = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"


def main() -> None:
    report = run_benchmark(
        synth_crop_corpus(seed=9, n_per_class=8),
        [ModelSpec("forest", "random_forest", {"n_trees": 5, "seed": 0})],
        split=(0.25, 1),
    )
    bench_path = OUT_DIR / "_benchmark_source.json"
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    bench_path.write_text(report.to_json(created_at="fixture"), encoding="utf-8")

    app = create_app(
        bundle=comparative_fixture_bundle(), benchmark_path=str(bench_path)
    )
    client = TestClient(app)

    calls = [
        ("healthz", "get", "/healthz", "/healthz", None),
        ("model_info", "get", "/api/v1/model/info", "/api/v1/model/info", None),
        ("crops", "get", "/api/v1/crops", "/api/v1/crops", None),
        ("recommend", "post", "/api/v1/recommend", "/api/v1/recommend",
         {**SOIL, "weights": {"w1": 0.6, "w2": 0.4}}),
        ("recommend_agronomic", "post", "/api/v1/recommend/agronomic",
         "/api/v1/recommend/agronomic", SOIL),
        ("recommend_unit_weights", "post", "/api/v1/recommend", "/api/v1/recommend",
         {**SOIL, "weights": {"w1": 1.0, "w2": 0.0}}),
        ("score", "post", "/api/v1/score", "/api/v1/score",
         {"p_yield": 0.85, "g_price": 0.80}),
        ("fertilizer", "post", "/api/v1/fertilizer", "/api/v1/fertilizer",
         {"n": 20, "p": 30, "k": 10, "soil_type": "Black",
          "moisture": 40, "temperature": 30}),
        ("forecast", "get", "/api/v1/forecast/Crop B?months=6",
         "/api/v1/forecast/{crop}", None),
        ("history", "get", "/api/v1/prices/Crop B/history",
         "/api/v1/prices/{crop}/history", None),
        ("feature_importance", "get", "/api/v1/model/feature-importance",
         "/api/v1/model/feature-importance", None),
        ("benchmark_latest", "get", "/api/v1/benchmark/latest",
         "/api/v1/benchmark/latest", None),
        ("recommend_invalid_ph", "post", "/api/v1/recommend", "/api/v1/recommend",
         {**SOIL, "ph": 20}),
        ("forecast_unknown_crop", "get", "/api/v1/forecast/durian",
         "/api/v1/forecast/{crop}", None),
    ]
    for name, method, url, template, payload in calls:
        response = (
            getattr(client, method)(url, json=payload)
            if payload is not None
            else getattr(client, method)(url)
        )
        fixture = {
            "name": name,
            "method": method,
            "path": template,
            "status": response.status_code,
            "body": response.json(),
        }
        (OUT_DIR / f"{name}.json").write_text(
            json.dumps(fixture, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"recorded {name}: {method.upper()} {url} -> {response.status_code}")
    bench_path.unlink()  # only needed while recording


if __name__ == "__main__":
    main()
