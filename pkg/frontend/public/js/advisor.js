/**
 * Crop advisor view: soil form, what-if weight slider, ranked crop cards.
 *
 * Card building is a pure function over the API response (top card gets the
 * "Optimal" badge, the rest "Rejected", matching the two-factor decision
 * framing); the DOM section below just renders those models.
 */
import { ApiError, isAbortError } from "./api.js";
import { parseNumericInput, validateSoil } from "./validation.js";
import { sliderToWeights, weightsLabel } from "./weights.js";
export function buildCards(recommendations) {
    return recommendations.map((rec, index) => ({
        crop: rec.crop,
        badge: index === 0 ? "Optimal" : "Rejected",
        score: rec.score.toFixed(3),
        pYield: rec.p_yield.toFixed(3),
        gPrice: rec.g_price.toFixed(3),
        noMarketData: rec.no_market_data,
    }));
}
export const SOIL_FIELDS = [
    { name: "n", label: "Nitrogen (N)", unit: "kg/ha" },
    { name: "p", label: "Phosphorus (P)", unit: "kg/ha" },
    { name: "k", label: "Potassium (K)", unit: "kg/ha" },
    { name: "temperature", label: "Temperature", unit: "°C" },
    { name: "humidity", label: "Humidity", unit: "%" },
    { name: "ph", label: "Soil pH", unit: "" },
    { name: "rainfall", label: "Rainfall", unit: "mm" },
];
const SAMPLE_VALUES = {
    n: 90, p: 42, k: 43, temperature: 20.8, humidity: 82, ph: 6.5, rainfall: 202.9,
};
export function mountAdvisor(root, api) {
    root.innerHTML = `
    <section class="panel">
      <h2>Crop advisor</h2>
      <form id="soil-form" novalidate>
        <div class="field-grid">
          ${SOIL_FIELDS.map((f) => `
            <label class="field">
              <span>${f.label}${f.unit ? ` <small>(${f.unit})</small>` : ""}</span>
              <input name="${f.name}" inputmode="decimal"
                     value="${SAMPLE_VALUES[f.name]}" autocomplete="off" />
              <em class="field-error" data-error-for="${f.name}"></em>
            </label>`).join("")}
        </div>
        <div class="slider-row">
          <label for="weight-slider">Priority balance</label>
          <input type="range" id="weight-slider" min="0" max="100" value="60" />
          <span id="weight-label"></span>
        </div>
        <button type="submit">Rank crops</button>
      </form>
      <p id="advisor-status" class="status" role="status"></p>
      <div id="advisor-results" class="cards"></div>
    </section>
  `;
    const form = root.querySelector("#soil-form");
    const slider = root.querySelector("#weight-slider");
    const weightLabel = root.querySelector("#weight-label");
    const results = root.querySelector("#advisor-results");
    const status = root.querySelector("#advisor-status");
    const refreshWeightLabel = () => {
        weightLabel.textContent = weightsLabel(sliderToWeights(Number(slider.value)));
    };
    refreshWeightLabel();
    function readForm() {
        const values = {};
        for (const field of SOIL_FIELDS) {
            const input = form.querySelector(`input[name="${field.name}"]`);
            values[field.name] = parseNumericInput(input.value);
        }
        return values;
    }
    function showFieldErrors(issues) {
        root.querySelectorAll(".field-error").forEach((el) => {
            el.textContent = "";
        });
        for (const issue of issues) {
            const slot = root.querySelector(`[data-error-for="${issue.field}"]`);
            if (slot)
                slot.textContent = issue.message;
        }
    }
    function renderCards(advisory) {
        const cards = buildCards(advisory.recommendations);
        results.innerHTML = cards
            .map((card) => `
        <article class="card ${card.badge === "Optimal" ? "card-optimal" : ""}">
          <header>
            <h3>${card.crop}</h3>
            <span class="badge badge-${card.badge.toLowerCase()}">${card.badge}</span>
          </header>
          <dl>
            <div><dt>composite score</dt><dd>${card.score}</dd></div>
            <div><dt>suitability</dt><dd>${card.pYield}</dd></div>
            <div><dt>price score</dt><dd>${card.gPrice}</dd></div>
          </dl>
          ${card.noMarketData ? '<p class="note">no market data (neutral price score)</p>' : ""}
        </article>`)
            .join("");
    }
    async function submit() {
        const values = readForm();
        const issues = validateSoil(values);
        showFieldErrors(issues);
        if (issues.length > 0)
            return; // invalid input: no request leaves the page
        results.classList.add("stale");
        status.textContent = "ranking…";
        const weights = sliderToWeights(Number(slider.value));
        try {
            const advisory = await api.recommend(values, weights);
            renderCards(advisory);
            status.textContent = `ranked ${advisory.recommendations.length} crops at ` +
                weightsLabel(advisory.weights);
        }
        catch (err) {
            if (isAbortError(err))
                return; // superseded by a newer request
            if (err instanceof ApiError) {
                showFieldErrors(err.errors);
                status.textContent = "the service rejected the request";
            }
            else {
                status.textContent = "service unreachable";
            }
        }
        finally {
            results.classList.remove("stale");
        }
    }
    form.addEventListener("submit", (event) => {
        event.preventDefault();
        void submit();
    });
    slider.addEventListener("input", () => {
        refreshWeightLabel();
        if (results.childElementCount > 0)
            void submit(); // live re-rank
    });
}
