/**
 * Shell: navigation between Advisor, Fertilizer, Prices, and About, the
 * offline banner, and service-worker registration for the installable
 * offline app shell. Live data always requires connectivity.
 */

import { mountAdvisor } from "./advisor.js";
import { ApiClient } from "./api.js";
import { apiBase } from "./config.js";
import { mountFertilizer } from "./fertilizer.js";
import { mountPrices } from "./prices.js";

type SectionName = "advisor" | "fertilizer" | "prices" | "about";

const SECTIONS: { name: SectionName; label: string }[] = [
  { name: "advisor", label: "Advisor" },
  { name: "fertilizer", label: "Fertilizer" },
  { name: "prices", label: "Prices" },
  { name: "about", label: "About" },
];

function aboutHtml(info: { crops: number; created: string } | null): string {
  return `
    <section class="panel">
      <h2>About</h2>
      <p>This dashboard ranks candidate crops by a weighted blend of agronomic
      suitability (a random-forest posterior over soil and climate readings)
      and forecasted market price for the next six months, so a crop that
      grows well but sells poorly no longer wins by default.</p>
      <p>Move the priority slider on the Advisor page to explore the
      trade-off live; every number shown comes from the advisory service.</p>
      ${info ? `<p class="note">model bundle: ${info.crops} crops, created ${info.created || "n/a"}</p>` : ""}
    </section>`;
}

export async function bootstrap(root: HTMLElement): Promise<void> {
  const api = new ApiClient(apiBase());
  root.innerHTML = `
    <header class="topbar">
      <h1>Crop Advisor</h1>
      <nav id="nav">
        ${SECTIONS.map(
          (s) => `<button data-section="${s.name}" class="nav-button">${s.label}</button>`,
        ).join("")}
      </nav>
    </header>
    <div id="offline-banner" class="banner" hidden>
      service unreachable: forms are disabled, cached shell only
    </div>
    <main id="view"></main>
  `;

  const view = root.querySelector<HTMLElement>("#view")!;
  const banner = root.querySelector<HTMLElement>("#offline-banner")!;
  const navButtons = [...root.querySelectorAll<HTMLButtonElement>(".nav-button")];

  let online = false;
  let soilTypes: string[] = [];
  let priceCrops: string[] = [];
  let about: { crops: number; created: string } | null = null;
  try {
    await api.health();
    const info = await api.modelInfo();
    soilTypes = info.soil_types;
    priceCrops = info.price_crops;
    about = { crops: info.crop_catalog.length, created: info.created_at };
    online = true;
  } catch {
    online = false;
  }

  banner.hidden = online;
  for (const button of navButtons) {
    button.disabled = false;
  }

  function show(section: SectionName): void {
    navButtons.forEach((b) =>
      b.classList.toggle("active", b.dataset.section === section),
    );
    if (!online && section !== "about") {
      view.innerHTML = `<section class="panel"><h2>${section}</h2>
        <p>The advisory service is not reachable, so this form is disabled.
        Start the service and reload.</p></section>`;
      return;
    }
    switch (section) {
      case "advisor":
        mountAdvisor(view, api);
        break;
      case "fertilizer":
        mountFertilizer(view, api, soilTypes);
        break;
      case "prices":
        mountPrices(view, api, priceCrops);
        break;
      case "about":
        view.innerHTML = aboutHtml(about);
        break;
    }
  }

  navButtons.forEach((button) =>
    button.addEventListener("click", () => show(button.dataset.section as SectionName)),
  );
  show("advisor");

  if ("serviceWorker" in navigator) {
    try {
      await navigator.serviceWorker.register("./sw.js");
    } catch {
      // shell still works without offline caching
    }
  }
}

const rootElement = document.getElementById("app");
if (rootElement) {
  void bootstrap(rootElement);
}
