/**
 * Fertilizer advisor view: nutrient/soil form, predicted type, and the
 * posterior bar list.
 */

import { ApiClient, ApiError } from "./api.js";
import type { FertilizerResponse } from "./types.js";
import { parseNumericInput } from "./validation.js";

export interface PosteriorBar {
  label: string;
  probability: number;
  percent: string;
}

export function posteriorBars(response: FertilizerResponse): PosteriorBar[] {
  return Object.entries(response.posterior)
    .sort((a, b) => b[1] - a[1] || a[0].localeCompare(b[0]))
    .map(([label, probability]) => ({
      label,
      probability,
      percent: `${(probability * 100).toFixed(1)}%`,
    }));
}

const FIELDS = [
  { name: "n", label: "Nitrogen (N)" },
  { name: "p", label: "Phosphorus (P)" },
  { name: "k", label: "Potassium (K)" },
  { name: "moisture", label: "Moisture" },
  { name: "temperature", label: "Temperature" },
] as const;

export function mountFertilizer(
  root: HTMLElement,
  api: ApiClient,
  soilTypes: string[],
): void {
  root.innerHTML = `
    <section class="panel">
      <h2>Fertilizer advisor</h2>
      <form id="fertilizer-form" novalidate>
        <div class="field-grid">
          ${FIELDS.map(
            (f) => `
            <label class="field">
              <span>${f.label}</span>
              <input name="${f.name}" inputmode="decimal" value="20" autocomplete="off" />
            </label>`,
          ).join("")}
          <label class="field">
            <span>Soil type</span>
            <select name="soil_type">
              ${soilTypes.map((s) => `<option value="${s}">${s}</option>`).join("")}
            </select>
          </label>
        </div>
        <button type="submit">Advise fertilizer</button>
      </form>
      <p id="fertilizer-status" class="status" role="status"></p>
      <div id="fertilizer-result"></div>
    </section>
  `;

  const form = root.querySelector<HTMLFormElement>("#fertilizer-form")!;
  const status = root.querySelector<HTMLElement>("#fertilizer-status")!;
  const result = root.querySelector<HTMLElement>("#fertilizer-result")!;

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const data = new FormData(form);
    status.textContent = "asking…";
    try {
      const response = await api.fertilizer({
        n: parseNumericInput(String(data.get("n"))),
        p: parseNumericInput(String(data.get("p"))),
        k: parseNumericInput(String(data.get("k"))),
        moisture: parseNumericInput(String(data.get("moisture"))),
        temperature: parseNumericInput(String(data.get("temperature"))),
        soil_type: String(data.get("soil_type")),
      });
      const bars = posteriorBars(response);
      result.innerHTML = `
        <p class="headline">Recommended: <strong>${response.fertilizer_type}</strong></p>
        <ul class="posterior">
          ${bars
            .map(
              (bar) => `
              <li>
                <span class="posterior-label">${bar.label}</span>
                <span class="posterior-track"><span class="posterior-fill"
                  style="width:${Math.round(bar.probability * 100)}%"></span></span>
                <span class="posterior-value">${bar.percent}</span>
              </li>`,
            )
            .join("")}
        </ul>`;
      status.textContent = "";
    } catch (err) {
      result.innerHTML = "";
      status.textContent =
        err instanceof ApiError ? err.message : "service unreachable";
    }
  });
}
