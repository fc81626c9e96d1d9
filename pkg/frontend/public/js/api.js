/**
 * Typed client for the /api/v1 contract.
 *
 * Advisory requests are latest-wins: a new recommend() call aborts the one
 * still in flight, so a fast slider never renders stale rankings over fresh
 * ones.
 */
export class ApiError extends Error {
    constructor(status, errors) {
        super(errors.map((e) => `${e.field}: ${e.message}`).join("; ") || `HTTP ${status}`);
        this.status = status;
        this.errors = errors;
    }
}
export class ApiClient {
    constructor(base = "", fetchImpl = fetch) {
        this.base = base;
        this.fetchImpl = fetchImpl;
        this.advisoryAbort = null;
    }
    url(path) {
        return `${this.base}${path}`;
    }
    async request(path, init) {
        const response = await this.fetchImpl(this.url(path), {
            headers: { "content-type": "application/json" },
            ...init,
        });
        if (!response.ok) {
            let envelope = { errors: [] };
            try {
                envelope = (await response.json());
            }
            catch {
                // non-JSON error body; fall through with the bare status
            }
            throw new ApiError(response.status, envelope.errors ?? []);
        }
        return (await response.json());
    }
    health() {
        return this.request("/healthz");
    }
    modelInfo() {
        return this.request("/api/v1/model/info");
    }
    crops() {
        return this.request("/api/v1/crops");
    }
    /** Profit-aware ranking; aborts any advisory request still in flight. */
    recommend(soil, weights, months = 6, agronomic = false) {
        this.advisoryAbort?.abort();
        const controller = new AbortController();
        this.advisoryAbort = controller;
        const path = agronomic ? "/api/v1/recommend/agronomic" : "/api/v1/recommend";
        const body = agronomic ? { ...soil, months } : { ...soil, weights, months };
        return this.request(path, {
            method: "POST",
            body: JSON.stringify(body),
            signal: controller.signal,
        });
    }
    score(p_yield, g_price, weights) {
        return this.request("/api/v1/score", {
            method: "POST",
            body: JSON.stringify({ p_yield, g_price, weights }),
        });
    }
    fertilizer(form) {
        return this.request("/api/v1/fertilizer", {
            method: "POST",
            body: JSON.stringify(form),
        });
    }
    forecast(crop, months = 6) {
        return this.request(`/api/v1/forecast/${encodeURIComponent(crop)}?months=${months}`);
    }
    history(crop) {
        return this.request(`/api/v1/prices/${encodeURIComponent(crop)}/history`);
    }
    featureImportance() {
        return this.request("/api/v1/model/feature-importance");
    }
    benchmarkLatest() {
        return this.request("/api/v1/benchmark/latest");
    }
}
export function isAbortError(err) {
    return err instanceof DOMException && err.name === "AbortError";
}
