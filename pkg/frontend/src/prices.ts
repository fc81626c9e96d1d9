/**
 * Price view: history line plus the six-month forecast with its interval
 * band; a toggle overlays the trend/seasonal decomposition. Tooltips on the
 * forecast markers show trend, seasonal, and their sum.
 */

import { ApiClient, ApiError } from "./api.js";
import { buildForecastChart, ForecastChartModel } from "./chart.js";

export function chartSvg(model: ForecastChartModel, decomposition: boolean): string {
  const markers = model.forecastMarkers
    .map(
      (m) => `
      <circle cx="${m.x.toFixed(2)}" cy="${m.y.toFixed(2)}" r="4" class="marker">
        <title>${m.label}: yhat ${m.yhat.toFixed(2)} = trend ${m.trend.toFixed(2)} + seasonal ${m.seasonal.toFixed(2)}</title>
      </circle>`,
    )
    .join("");
  const decompositionPaths = decomposition
    ? `<path d="${model.trendPath}" class="trend-line" fill="none" />
       <path d="${model.seasonalPath}" class="seasonal-line" fill="none" />`
    : "";
  return `
  <svg viewBox="${model.viewBox}" role="img" aria-label="price history and forecast">
    <g class="axis">
      ${model.yTicks
        .map(
          (t) => `<line x1="${model.plot.left}" x2="${model.plot.right}"
                    y1="${t.y.toFixed(2)}" y2="${t.y.toFixed(2)}" class="grid" />
                  <text x="${model.plot.left - 6}" y="${t.y.toFixed(2)}"
                    text-anchor="end" dominant-baseline="middle">${t.label}</text>`,
        )
        .join("")}
      ${model.xTicks
        .map(
          (t) => `<text x="${t.x.toFixed(2)}" y="${model.plot.bottom + 18}"
                    text-anchor="middle">${t.label}</text>`,
        )
        .join("")}
    </g>
    <path d="${model.bandPath}" class="band" />
    <path d="${model.historyPath}" class="history-line" fill="none" />
    <path d="${model.forecastPath}" class="forecast-line" fill="none" />
    ${decompositionPaths}
    ${markers}
  </svg>`;
}

export function mountPrices(root: HTMLElement, api: ApiClient, crops: string[]): void {
  root.innerHTML = `
    <section class="panel">
      <h2>Price trends</h2>
      <div class="price-controls">
        <label>Crop
          <select id="price-crop">
            ${crops.map((c) => `<option value="${c}">${c}</option>`).join("")}
          </select>
        </label>
        <label class="toggle">
          <input type="checkbox" id="decomposition-toggle" />
          show trend / seasonal decomposition
        </label>
      </div>
      <p id="price-status" class="status" role="status"></p>
      <div id="price-chart"></div>
      <p class="legend">
        <span class="swatch history"></span> history
        <span class="swatch forecast"></span> forecast (6 months)
        <span class="swatch band-swatch"></span> 95% band
        <span class="swatch trend"></span> trend
        <span class="swatch seasonal"></span> seasonal
      </p>
    </section>
  `;

  const select = root.querySelector<HTMLSelectElement>("#price-crop")!;
  const toggle = root.querySelector<HTMLInputElement>("#decomposition-toggle")!;
  const status = root.querySelector<HTMLElement>("#price-status")!;
  const chartHost = root.querySelector<HTMLElement>("#price-chart")!;

  let model: ForecastChartModel | null = null;

  function render(): void {
    chartHost.innerHTML = model ? chartSvg(model, toggle.checked) : "";
  }

  async function loadCrop(crop: string): Promise<void> {
    status.textContent = "loading…";
    model = null;
    render();
    try {
      const [history, forecast] = await Promise.all([
        api.history(crop),
        api.forecast(crop, 6),
      ]);
      model = buildForecastChart(history.points, forecast.points);
      status.textContent = "";
      render();
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        status.textContent = `no market data for ${crop}`;
      } else {
        status.textContent = "service unreachable";
      }
      render();
    }
  }

  select.addEventListener("change", () => void loadCrop(select.value));
  toggle.addEventListener("change", render);
  if (crops.length > 0) void loadCrop(crops[0]);
  else status.textContent = "no crops with market data";
}
