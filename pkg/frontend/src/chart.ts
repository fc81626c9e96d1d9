/**
 * Pure chart geometry for the price view: history line, forecast line,
 * confidence band, and optional trend/seasonal overlays. Everything here is
 * plain data-in / SVG-path-strings-out so it can be unit tested without a
 * DOM; rendering glue lives in prices.ts.
 */

import type { ForecastPoint, HistoryPoint } from "./types.js";

export interface ChartLayout {
  width: number;
  height: number;
  padLeft: number;
  padRight: number;
  padTop: number;
  padBottom: number;
}

export const DEFAULT_LAYOUT: ChartLayout = {
  width: 720,
  height: 320,
  padLeft: 56,
  padRight: 16,
  padTop: 12,
  padBottom: 28,
};

export interface Scale {
  (value: number): number;
}

export function linearScale(
  domainMin: number,
  domainMax: number,
  rangeMin: number,
  rangeMax: number,
): Scale {
  const span = domainMax - domainMin;
  if (span === 0) {
    const mid = (rangeMin + rangeMax) / 2;
    return () => mid;
  }
  return (value: number) =>
    rangeMin + ((value - domainMin) / span) * (rangeMax - rangeMin);
}

export function monthIndex(year: number, month: number): number {
  return year * 12 + (month - 1);
}

export function monthLabel(year: number, month: number): string {
  return `${year}-${String(month).padStart(2, "0")}`;
}

export function linePath(points: [number, number][]): string {
  if (points.length === 0) return "";
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`)
    .join(" ");
}

/** Closed polygon tracing the upper edge forward and the lower edge back. */
export function bandPath(
  upper: [number, number][],
  lower: [number, number][],
): string {
  if (upper.length === 0) return "";
  const forward = upper
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`)
    .join(" ");
  const back = [...lower]
    .reverse()
    .map(([x, y]) => `L${x.toFixed(2)},${y.toFixed(2)}`)
    .join(" ");
  return `${forward} ${back} Z`;
}

export interface ForecastChartModel {
  viewBox: string;
  historyPath: string;
  forecastPath: string;
  bandPath: string;
  trendPath: string;
  seasonalBaseline: number;
  seasonalPath: string;
  xTicks: { x: number; label: string }[];
  yTicks: { y: number; label: string }[];
  /** hover targets carrying the decomposition for tooltips */
  forecastMarkers: {
    x: number;
    y: number;
    label: string;
    trend: number;
    seasonal: number;
    yhat: number;
  }[];
  plot: { left: number; right: number; top: number; bottom: number };
}

export function buildForecastChart(
  history: HistoryPoint[],
  forecast: ForecastPoint[],
  layout: ChartLayout = DEFAULT_LAYOUT,
): ForecastChartModel {
  const allT = [
    ...history.map((p) => monthIndex(p.year, p.month)),
    ...forecast.map((p) => monthIndex(p.year, p.month)),
  ];
  const values = [
    ...history.map((p) => p.price),
    ...forecast.flatMap((p) => [p.lower, p.upper, p.yhat, p.trend]),
  ];
  const tMin = Math.min(...allT);
  const tMax = Math.max(...allT);
  const vMin = Math.min(...values);
  const vMax = Math.max(...values);
  const pad = (vMax - vMin || 1) * 0.05;

  const left = layout.padLeft;
  const right = layout.width - layout.padRight;
  const top = layout.padTop;
  const bottom = layout.height - layout.padBottom;
  const x = linearScale(tMin, tMax, left, right);
  const y = linearScale(vMin - pad, vMax + pad, bottom, top);

  const historyXY: [number, number][] = history.map((p) => [
    x(monthIndex(p.year, p.month)),
    y(p.price),
  ]);
  const forecastXY: [number, number][] = forecast.map((p) => [
    x(monthIndex(p.year, p.month)),
    y(p.yhat),
  ]);
  // connect the band and forecast line to the last observed point
  const lastHistory = historyXY.length
    ? [historyXY[historyXY.length - 1]]
    : [];
  const upper: [number, number][] = [
    ...lastHistory,
    ...forecast.map((p): [number, number] => [
      x(monthIndex(p.year, p.month)),
      y(p.upper),
    ]),
  ];
  const lower: [number, number][] = [
    ...lastHistory,
    ...forecast.map((p): [number, number] => [
      x(monthIndex(p.year, p.month)),
      y(p.lower),
    ]),
  ];

  const months = tMax - tMin;
  const tickStep = Math.max(1, Math.round(months / 8));
  const xTicks: { x: number; label: string }[] = [];
  for (let t = tMin; t <= tMax; t += tickStep) {
    const year = Math.floor(t / 12);
    const month = (t % 12) + 1;
    xTicks.push({ x: x(t), label: monthLabel(year, month) });
  }
  const yTicks: { y: number; label: string }[] = [];
  for (let i = 0; i <= 4; i++) {
    const value = vMin - pad + ((vMax + pad - (vMin - pad)) * i) / 4;
    yTicks.push({ y: y(value), label: value.toFixed(0) });
  }

  // seasonal overlay drawn around the chart's vertical midpoint
  const seasonalBaseline = (vMin + vMax) / 2;
  const seasonalXY: [number, number][] = forecast.map((p) => [
    x(monthIndex(p.year, p.month)),
    y(seasonalBaseline + p.seasonal),
  ]);

  return {
    viewBox: `0 0 ${layout.width} ${layout.height}`,
    historyPath: linePath(historyXY),
    forecastPath: linePath([...lastHistory, ...forecastXY]),
    bandPath: bandPath(upper, lower),
    trendPath: linePath(
      forecast.map((p) => [x(monthIndex(p.year, p.month)), y(p.trend)]),
    ),
    seasonalBaseline,
    seasonalPath: linePath(seasonalXY),
    xTicks,
    yTicks,
    forecastMarkers: forecast.map((p) => ({
      x: x(monthIndex(p.year, p.month)),
      y: y(p.yhat),
      label: monthLabel(p.year, p.month),
      trend: p.trend,
      seasonal: p.seasonal,
      yhat: p.yhat,
    })),
    plot: { left, right, top, bottom },
  };
}
