"""Additive monthly price model: piecewise-linear trend plus Fourier seasonality.

The observed series y(t) is decomposed as trend + seasonality + residual.
Observation times map affinely onto [0, 1]; the trend is a line with hinge
terms at changepoints placed at equally spaced time quantiles; seasonality is
a truncated Fourier series on the calendar month with a 12-month period, so
the seasonal value for a given month is identical across years by
construction. Coefficients come from one ridge-regularized least-squares
solve in which only the seasonal columns are penalized. Forecast intervals
are a flat +-1.96 residual-sigma band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg


class InsufficientHistoryError(ValueError):
    """Raised when a series is too short to fit (fewer than 8 points)."""


@dataclass(frozen=True)
class PricePoint:
    year: int
    month: int
    price: float


@dataclass(frozen=True)
class PriceSeries:
    """Chronological monthly prices for one crop (currency per quintal)."""

    crop_id: str
    points: tuple[PricePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        prev = None
        for pt in self.points:
            if not (1 <= pt.month <= 12):
                raise ValueError(f"month out of 1..12: {pt.month}")
            if not (pt.price > 0 and math.isfinite(pt.price)):
                raise ValueError(f"prices must be positive and finite, got {pt.price}")
            key = (pt.year, pt.month)
            if prev is not None and key <= prev:
                raise ValueError(f"points must be strictly increasing in (year, month) at {key}")
            prev = key

    def __len__(self) -> int:
        return len(self.points)

    def month_indices(self) -> np.ndarray:
        return np.asarray([p.year * 12 + p.month - 1 for p in self.points], dtype=np.float64)

    def prices(self) -> np.ndarray:
        return np.asarray([p.price for p in self.points], dtype=np.float64)


@dataclass(frozen=True)
class ForecastConfig:
    n_changepoints: int = 4
    fourier_order: int = 3
    ridge_lambda: float = 1.0

    def __post_init__(self):
        if self.n_changepoints < 0:
            raise ValueError("n_changepoints must be >= 0")
        if self.fourier_order < 0:
            raise ValueError("fourier_order must be >= 0")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be >= 0")


# Seasonality needs at least this many points; shorter (but >= MIN_FIT_POINTS)
# series fall back to a trend-only fit.
SEASONAL_MIN_POINTS = 24
MIN_FIT_POINTS = 8


@dataclass(frozen=True)
class PriceModel:
    """A fitted additive decomposition, anchored to its training time range."""

    crop_id: str
    t0_index: int  # month index of the first observation
    t1_index: int  # month index of the last observation
    intercept: float
    slope: float
    changepoints: tuple[float, ...]       # in scaled time, strictly inside (0, 1)
    changepoint_deltas: tuple[float, ...]
    fourier_order: int
    fourier_coeffs: tuple[tuple[float, float], ...]  # (a_k, b_k) per harmonic
    ridge_lambda: float
    residual_sigma: float
    last_year: int
    last_month: int

    def scaled_time(self, year: int, month: int) -> float:
        idx = year * 12 + month - 1
        return (idx - self.t0_index) / (self.t1_index - self.t0_index)

    def trend_at(self, year: int, month: int) -> float:
        t = self.scaled_time(year, month)
        g = self.intercept + self.slope * t
        for c, delta in zip(self.changepoints, self.changepoint_deltas):
            if t > c:
                g += delta * (t - c)
        return g

    def seasonal_at(self, month: int) -> float:
        s = 0.0
        for k, (a, b) in enumerate(self.fourier_coeffs, start=1):
            angle = 2.0 * math.pi * k * month / 12.0
            s += a * math.cos(angle) + b * math.sin(angle)
        return s

    def predict_at(self, year: int, month: int) -> float:
        g, s = decompose(self, year, month)
        return g + s


@dataclass(frozen=True)
class ForecastPoint:
    year: int
    month: int
    yhat: float
    trend: float
    seasonal: float
    lower: float
    upper: float


@dataclass(frozen=True)
class ForecastResult:
    crop_id: str
    points: tuple[ForecastPoint, ...]
    residual_sigma: float


def _design_matrix(
    t: np.ndarray, months: np.ndarray, changepoints: Sequence[float], order: int
) -> np.ndarray:
    cols = [np.ones_like(t), t]
    for c in changepoints:
        cols.append(np.maximum(t - c, 0.0))
    for k in range(1, order + 1):
        angle = 2.0 * np.pi * k * months / 12.0
        cols.append(np.cos(angle))
        cols.append(np.sin(angle))
    return np.column_stack(cols)


def fit_price_model(series: PriceSeries, config: ForecastConfig | None = None) -> PriceModel:
    cfg = config or ForecastConfig()
    n = len(series)
    if n < MIN_FIT_POINTS:
        raise InsufficientHistoryError(
            f"insufficient history for '{series.crop_id}': {n} points, "
            f"need >= {MIN_FIT_POINTS}"
        )
    order = cfg.fourier_order if n >= SEASONAL_MIN_POINTS else 0

    idx = series.month_indices()
    t0, t1 = idx[0], idx[-1]
    t = (idx - t0) / (t1 - t0)
    months = np.asarray([p.month for p in series.points], dtype=np.float64)
    y = series.prices()

    changepoints: tuple[float, ...] = ()
    if cfg.n_changepoints > 0:
        levels = [j / (cfg.n_changepoints + 1) for j in range(1, cfg.n_changepoints + 1)]
        qs = np.quantile(t, levels)
        inside = sorted({float(c) for c in qs if 0.0 < c < 1.0})
        changepoints = tuple(inside)

    x = _design_matrix(t, months, changepoints, order)
    n_trend = 2 + len(changepoints)
    penalty = np.zeros(x.shape[1])
    penalty[n_trend:] = cfg.ridge_lambda
    a = x.T @ x + np.diag(penalty)
    b = x.T @ y
    try:
        beta = scipy.linalg.solve(a, b, assume_a="pos")
    except np.linalg.LinAlgError:
        beta = np.linalg.lstsq(x, y, rcond=None)[0]

    residuals = y - x @ beta
    sigma = float(residuals.std())  # population

    coeffs = tuple(
        (float(beta[n_trend + 2 * k]), float(beta[n_trend + 2 * k + 1])) for k in range(order)
    )
    last = series.points[-1]
    return PriceModel(
        crop_id=series.crop_id,
        t0_index=int(t0),
        t1_index=int(t1),
        intercept=float(beta[0]),
        slope=float(beta[1]),
        changepoints=changepoints,
        changepoint_deltas=tuple(float(beta[2 + i]) for i in range(len(changepoints))),
        fourier_order=order,
        fourier_coeffs=coeffs,
        ridge_lambda=cfg.ridge_lambda,
        residual_sigma=sigma,
        last_year=last.year,
        last_month=last.month,
    )


def decompose(model: PriceModel, year: int, month: int) -> tuple[float, float]:
    """Trend and seasonal components at the given calendar point; their sum is yhat."""
    return model.trend_at(year, month), model.seasonal_at(month)


def next_months(year: int, month: int, steps: int) -> list[tuple[int, int]]:
    out = []
    for _ in range(steps):
        month += 1
        if month > 12:
            month = 1
            year += 1
        out.append((year, month))
    return out


def forecast_horizon(model: PriceModel, months: int = 6) -> ForecastResult:
    """Forecast the next `months` consecutive calendar months after training end."""
    if months < 1:
        raise ValueError("months must be >= 1")
    band = 1.96 * model.residual_sigma
    points = []
    for year, month in next_months(model.last_year, model.last_month, months):
        g, s = decompose(model, year, month)
        yhat = g + s
        points.append(
            ForecastPoint(
                year=year,
                month=month,
                yhat=yhat,
                trend=g,
                seasonal=s,
                lower=yhat - band,
                upper=yhat + band,
            )
        )
    return ForecastResult(model.crop_id, tuple(points), model.residual_sigma)


@dataclass(frozen=True)
class BacktestMetrics:
    mape: float
    mae: float


def backtest(
    series: PriceSeries, holdout_months: int, config: ForecastConfig | None = None
) -> BacktestMetrics:
    """Fit on the prefix, score pointwise on the held-out tail."""
    if holdout_months < 1:
        raise ValueError("holdout_months must be >= 1")
    n = len(series)
    if holdout_months >= n:
        raise ValueError(f"holdout of {holdout_months} leaves no training prefix (n={n})")
    prefix = PriceSeries(series.crop_id, series.points[: n - holdout_months])
    if len(prefix) < MIN_FIT_POINTS:
        raise InsufficientHistoryError(
            f"insufficient prefix: {len(prefix)} points, need >= {MIN_FIT_POINTS}"
        )
    model = fit_price_model(prefix, config)
    holdout = series.points[n - holdout_months:]
    errors = []
    rel = []
    for pt in holdout:
        yhat = model.predict_at(pt.year, pt.month)
        errors.append(abs(yhat - pt.price))
        rel.append(abs(yhat - pt.price) / pt.price)
    return BacktestMetrics(mape=float(np.mean(rel)), mae=float(np.mean(errors)))


def price_scores(forecasts: Mapping[str, float]) -> dict[str, float]:
    """Min-max normalize forecasted prices across the candidate crop set.

    All-equal prices (including a single crop) map to the neutral score 0.5.
    """
    if not forecasts:
        raise ValueError("at least one crop forecast is required")
    for crop, price in forecasts.items():
        if not (price > 0 and math.isfinite(price)):
            raise ValueError(f"forecast price for '{crop}' must be positive, got {price}")
    values = list(forecasts.values())
    lo, hi = min(values), max(values)
    if hi == lo:
        return {crop: 0.5 for crop in forecasts}
    return {crop: (price - lo) / (hi - lo) for crop, price in forecasts.items()}
