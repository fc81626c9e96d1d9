"""JSON-over-HTTP advisory service.

Eleven versioned endpoints expose the advisory, forecasting, and benchmark
capabilities over an immutable model-bundle snapshot. Handlers are pure
functions of (snapshot, request); the only mutation is an atomic snapshot
swap on reload. Every 4xx body carries machine-readable ``errors``:
``[{"field": ..., "message": ...}]``.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .advisory import (
    ScoreWeights,
    composite_score,
    posterior_to_mapping,
    rank_crops,
    recommend_fertilizer,
)
from .bundle import BUNDLE_FORMAT_VERSION, ModelBundle, load_bundle
from .domain import SoilSample, ValidationError, validate_soil_sample
from .forecast import forecast_horizon, next_months, price_scores
from .models import feature_importances

API_PREFIX = "/api/v1"


class FieldError(BaseModel):
    field: str
    message: str


class ErrorEnvelope(BaseModel):
    errors: list[FieldError]


class SoilPayload(BaseModel):
    n: float
    p: float
    k: float
    temperature: float
    humidity: float
    ph: float
    rainfall: float

    def to_sample(self) -> SoilSample:
        return SoilSample(
            n=self.n, p=self.p, k=self.k, temperature=self.temperature,
            humidity=self.humidity, ph=self.ph, rainfall=self.rainfall,
        )


class WeightsPayload(BaseModel):
    w1: float
    w2: float


class RecommendRequest(SoilPayload):
    weights: WeightsPayload | None = None
    months: int = Field(default=6, ge=1, le=120)


class ScoreRequest(BaseModel):
    p_yield: float
    g_price: float
    weights: WeightsPayload | None = None


class FertilizerRequest(BaseModel):
    n: float
    p: float
    k: float
    soil_type: str
    moisture: float
    temperature: float


class RecommendationOut(BaseModel):
    crop: str
    p_yield: float
    g_price: float
    score: float
    no_market_data: bool


class AdvisoryOut(BaseModel):
    weights: WeightsPayload
    months: int
    recommendations: list[RecommendationOut]
    request: SoilPayload


class ScoreOut(BaseModel):
    score: float
    weights: WeightsPayload


class FertilizerOut(BaseModel):
    fertilizer_type: str
    posterior: dict[str, float]


class ForecastPointOut(BaseModel):
    year: int
    month: int
    yhat: float
    trend: float
    seasonal: float
    lower: float
    upper: float


class ForecastOut(BaseModel):
    crop: str
    months: int
    residual_sigma: float
    points: list[ForecastPointOut]


class HistoryPointOut(BaseModel):
    year: int
    month: int
    price: float


class HistoryOut(BaseModel):
    crop: str
    points: list[HistoryPointOut]


class HealthOut(BaseModel):
    status: str
    bundle_version: int
    service_version: str


class CropsOut(BaseModel):
    crops: list[str]


class ModelInfoOut(BaseModel):
    bundle_version: int
    created_at: str
    crop_catalog: list[str]
    fertilizer_catalog: list[str]
    soil_types: list[str]
    forest_config: dict
    price_crops: list[str]
    fingerprints: dict


class ImportanceOut(BaseModel):
    feature_names: list[str]
    importances: list[float]


class ServiceState:
    """Holds the active bundle snapshot; swaps are atomic reference updates."""

    def __init__(
        self,
        bundle: ModelBundle,
        bundle_path: str | None = None,
        benchmark_path: str | None = None,
    ):
        self.bundle = bundle
        self.bundle_path = bundle_path
        self.benchmark_path = benchmark_path
        self.request_counts: dict[str, int] = {}
        self._lock = threading.Lock()

    def count(self, route: str) -> None:
        with self._lock:
            self.request_counts[route] = self.request_counts.get(route, 0) + 1

    def reload(self) -> None:
        """Reload the bundle from disk and swap it in atomically."""
        if self.bundle_path:
            self.bundle = load_bundle(self.bundle_path)

    def benchmark_doc(self) -> dict | None:
        if not self.benchmark_path:
            return None
        path = Path(self.benchmark_path)
        if not path.exists():
            return None
        return json.loads(path.read_text(encoding="utf-8"))


def _error_response(status: int, errors: list[tuple[str, str]]) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"errors": [{"field": f, "message": m} for f, m in errors]},
    )


def _weights(payload: WeightsPayload | None) -> ScoreWeights:
    if payload is None:
        return ScoreWeights()
    return ScoreWeights(payload.w1, payload.w2)


_ERROR_RESPONSES = {422: {"model": ErrorEnvelope}}
_LOOKUP_RESPONSES = {404: {"model": ErrorEnvelope}, 422: {"model": ErrorEnvelope}}


def create_app(
    *,
    bundle: ModelBundle | None = None,
    bundle_path: str | None = None,
    cors_origins: Sequence[str] = (),
    benchmark_path: str | None = None,
) -> FastAPI:
    """Build the service around a loaded bundle or a path to one."""
    if bundle is None:
        if bundle_path is None:
            raise ValueError("either bundle or bundle_path is required")
        bundle = load_bundle(bundle_path)

    app = FastAPI(
        title="cropadvisor service",
        version=__version__,
        docs_url=None,
        redoc_url=None,
    )
    state = ServiceState(bundle, bundle_path, benchmark_path)
    app.state.service = state

    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(RequestValidationError)
    async def handle_request_validation(request: Request, exc: RequestValidationError):
        errors = []
        for err in exc.errors():
            loc = [str(part) for part in err.get("loc", ()) if part not in ("body", "query")]
            errors.append((".".join(loc) or "request", err.get("msg", "invalid value")))
        return _error_response(422, errors)

    @app.exception_handler(ValidationError)
    async def handle_domain_validation(request: Request, exc: ValidationError):
        return _error_response(422, list(exc.field_errors))

    @app.middleware("http")
    async def count_requests(request: Request, call_next):
        state.count(request.url.path)
        return await call_next(request)

    # 1. liveness/readiness
    @app.get("/healthz", response_model=HealthOut)
    def healthz():
        return HealthOut(
            status="ok",
            bundle_version=BUNDLE_FORMAT_VERSION,
            service_version=__version__,
        )

    # 2. bundle metadata
    @app.get(f"{API_PREFIX}/model/info", response_model=ModelInfoOut)
    def model_info():
        b = state.bundle
        cfg = b.forest.config
        soil_types = [
            name.split("=", 1)[1]
            for name in b.fertilizer_schema.feature_names
            if name.startswith("soil_type=")
        ]
        return ModelInfoOut(
            bundle_version=BUNDLE_FORMAT_VERSION,
            created_at=b.created_at,
            crop_catalog=list(b.crop_catalog),
            fertilizer_catalog=list(b.fertilizer_catalog),
            soil_types=soil_types,
            forest_config={
                "n_trees": cfg.n_trees,
                "features_per_split": str(cfg.features_per_split),
                "max_depth": cfg.max_depth,
                "min_samples_leaf": cfg.min_samples_leaf,
                "bootstrap": cfg.bootstrap,
                "seed": cfg.seed,
            },
            price_crops=sorted(b.price_models),
            fingerprints=b.fingerprints,
        )

    # 3. crop catalog
    @app.get(f"{API_PREFIX}/crops", response_model=CropsOut)
    def crops():
        return CropsOut(crops=list(state.bundle.crop_catalog))

    def _advise(payload: RecommendRequest, weights: ScoreWeights) -> AdvisoryOut:
        b = state.bundle
        sample = validate_soil_sample(payload.to_sample())
        posterior = b.forest.predict_vector(sample.to_vector())
        suitability = posterior_to_mapping(posterior, b.crop_catalog)
        g_scores: dict[str, float] = {}
        if b.price_models:
            forecasts = {
                crop: model.predict_at(*next_months(model.last_year, model.last_month,
                                                    payload.months)[-1])
                for crop, model in b.price_models.items()
            }
            positive = {c: p for c, p in forecasts.items() if p > 0}
            if positive:
                g_scores = price_scores(positive)
        advisory = rank_crops(suitability, g_scores, weights)
        return AdvisoryOut(
            weights=WeightsPayload(w1=advisory.weights.w1, w2=advisory.weights.w2),
            months=payload.months,
            recommendations=[
                RecommendationOut(
                    crop=r.crop_id,
                    p_yield=r.p_yield,
                    g_price=r.g_price,
                    score=r.score,
                    no_market_data=r.no_market_data,
                )
                for r in advisory.recommendations
            ],
            request=SoilPayload(**payload.model_dump(include=set(SoilPayload.model_fields))),
        )

    # 4. profit-aware ranking
    @app.post(f"{API_PREFIX}/recommend", response_model=AdvisoryOut,
              responses=_ERROR_RESPONSES)
    def recommend(payload: RecommendRequest):
        return _advise(payload, _weights(payload.weights))

    # 5. posterior-only ranking
    @app.post(f"{API_PREFIX}/recommend/agronomic", response_model=AdvisoryOut,
              responses=_ERROR_RESPONSES)
    def recommend_agronomic(payload: RecommendRequest):
        return _advise(payload, ScoreWeights(1.0, 0.0))

    # 6. the composite score itself
    @app.post(f"{API_PREFIX}/score", response_model=ScoreOut, responses=_ERROR_RESPONSES)
    def score(payload: ScoreRequest):
        w = _weights(payload.weights)
        value = composite_score(payload.p_yield, payload.g_price, w)
        return ScoreOut(score=value, weights=WeightsPayload(w1=w.w1, w2=w.w2))

    # 7. fertilizer advice
    @app.post(f"{API_PREFIX}/fertilizer", response_model=FertilizerOut,
              responses=_ERROR_RESPONSES)
    def fertilizer(payload: FertilizerRequest):
        b = state.bundle
        advice = recommend_fertilizer(
            b.fertilizer_model,
            b.fertilizer_schema,
            n=payload.n, p=payload.p, k=payload.k,
            soil_type=payload.soil_type,
            moisture=payload.moisture, temperature=payload.temperature,
        )
        return FertilizerOut(
            fertilizer_type=advice.fertilizer_type, posterior=advice.posterior
        )

    # 8. price forecast
    @app.get(f"{API_PREFIX}/forecast/{{crop}}", response_model=ForecastOut,
             responses=_LOOKUP_RESPONSES)
    def forecast(crop: str, months: int = Query(default=6, ge=1, le=120)):
        b = state.bundle
        model = b.price_models.get(crop)
        if model is None:
            return _error_response(404, [("crop", f"no market data for crop '{crop}'")])
        result = forecast_horizon(model, months)
        return ForecastOut(
            crop=crop,
            months=months,
            residual_sigma=result.residual_sigma,
            points=[
                ForecastPointOut(
                    year=p.year, month=p.month, yhat=p.yhat, trend=p.trend,
                    seasonal=p.seasonal, lower=p.lower, upper=p.upper,
                )
                for p in result.points
            ],
        )

    # 9. ingested price history
    @app.get(f"{API_PREFIX}/prices/{{crop}}/history", response_model=HistoryOut,
             responses=_LOOKUP_RESPONSES)
    def price_history(crop: str):
        b = state.bundle
        series = b.price_history.get(crop)
        if series is None:
            return _error_response(404, [("crop", f"no market data for crop '{crop}'")])
        return HistoryOut(
            crop=crop,
            points=[
                HistoryPointOut(year=p.year, month=p.month, price=p.price)
                for p in series.points
            ],
        )

    # 10. champion importances
    @app.get(f"{API_PREFIX}/model/feature-importance", response_model=ImportanceOut)
    def importance():
        b = state.bundle
        imp = feature_importances(b.forest)
        return ImportanceOut(
            feature_names=list(b.forest.feature_names),
            importances=[float(v) for v in imp],
        )

    # 11. latest benchmark report
    @app.get(f"{API_PREFIX}/benchmark/latest", responses={404: {"model": ErrorEnvelope}})
    def benchmark_latest() -> dict:
        doc = state.benchmark_doc()
        if doc is None:
            return _error_response(
                404, [("benchmark", "no benchmark report has been recorded")]
            )
        return doc

    return app


__all__ = [
    "API_PREFIX",
    "ErrorEnvelope",
    "ServiceState",
    "create_app",
]
