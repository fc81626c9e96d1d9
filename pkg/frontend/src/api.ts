/**
 * Typed client for the /api/v1 contract.
 *
 * Advisory requests are latest-wins: a new recommend() call aborts the one
 * still in flight, so a fast slider never renders stale rankings over fresh
 * ones.
 */

import type {
  AdvisoryResponse,
  CropsResponse,
  ErrorEnvelope,
  FertilizerForm,
  FertilizerResponse,
  ForecastResponse,
  HealthResponse,
  HistoryResponse,
  ImportanceResponse,
  ModelInfoResponse,
  ScoreResponse,
  SoilForm,
  Weights,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public errors: { field: string; message: string }[],
  ) {
    super(errors.map((e) => `${e.field}: ${e.message}`).join("; ") || `HTTP ${status}`);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  private advisoryAbort: AbortController | null = null;

  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = fetch,
  ) {}

  url(path: string): string {
    return `${this.base}${path}`;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.url(path), {
      headers: { "content-type": "application/json" },
      ...init,
    });
    if (!response.ok) {
      let envelope: ErrorEnvelope = { errors: [] };
      try {
        envelope = (await response.json()) as ErrorEnvelope;
      } catch {
        // non-JSON error body; fall through with the bare status
      }
      throw new ApiError(response.status, envelope.errors ?? []);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.request("/healthz");
  }

  modelInfo(): Promise<ModelInfoResponse> {
    return this.request("/api/v1/model/info");
  }

  crops(): Promise<CropsResponse> {
    return this.request("/api/v1/crops");
  }

  /** Profit-aware ranking; aborts any advisory request still in flight. */
  recommend(
    soil: SoilForm,
    weights: Weights,
    months = 6,
    agronomic = false,
  ): Promise<AdvisoryResponse> {
    this.advisoryAbort?.abort();
    const controller = new AbortController();
    this.advisoryAbort = controller;
    const path = agronomic ? "/api/v1/recommend/agronomic" : "/api/v1/recommend";
    const body = agronomic ? { ...soil, months } : { ...soil, weights, months };
    return this.request<AdvisoryResponse>(path, {
      method: "POST",
      body: JSON.stringify(body),
      signal: controller.signal,
    });
  }

  score(p_yield: number, g_price: number, weights?: Weights): Promise<ScoreResponse> {
    return this.request("/api/v1/score", {
      method: "POST",
      body: JSON.stringify({ p_yield, g_price, weights }),
    });
  }

  fertilizer(form: FertilizerForm): Promise<FertilizerResponse> {
    return this.request("/api/v1/fertilizer", {
      method: "POST",
      body: JSON.stringify(form),
    });
  }

  forecast(crop: string, months = 6): Promise<ForecastResponse> {
    return this.request(
      `/api/v1/forecast/${encodeURIComponent(crop)}?months=${months}`,
    );
  }

  history(crop: string): Promise<HistoryResponse> {
    return this.request(`/api/v1/prices/${encodeURIComponent(crop)}/history`);
  }

  featureImportance(): Promise<ImportanceResponse> {
    return this.request("/api/v1/model/feature-importance");
  }

  benchmarkLatest(): Promise<Record<string, unknown>> {
    return this.request("/api/v1/benchmark/latest");
  }
}

export function isAbortError(err: unknown): boolean {
  return err instanceof DOMException && err.name === "AbortError";
}
