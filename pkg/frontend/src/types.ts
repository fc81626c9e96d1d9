/**
 * Payload types mirroring the published /api/v1 contract (docs/openapi.json).
 * The UI never computes advisory numbers itself; everything rendered comes
 * from these response shapes.
 */

export interface SoilForm {
  n: number;
  p: number;
  k: number;
  temperature: number;
  humidity: number;
  ph: number;
  rainfall: number;
}

export interface Weights {
  w1: number;
  w2: number;
}

export interface Recommendation {
  crop: string;
  p_yield: number;
  g_price: number;
  score: number;
  no_market_data: boolean;
}

export interface AdvisoryResponse {
  weights: Weights;
  months: number;
  recommendations: Recommendation[];
  request: SoilForm;
}

export interface ScoreResponse {
  score: number;
  weights: Weights;
}

export interface FertilizerForm {
  n: number;
  p: number;
  k: number;
  soil_type: string;
  moisture: number;
  temperature: number;
}

export interface FertilizerResponse {
  fertilizer_type: string;
  posterior: Record<string, number>;
}

export interface ForecastPoint {
  year: number;
  month: number;
  yhat: number;
  trend: number;
  seasonal: number;
  lower: number;
  upper: number;
}

export interface ForecastResponse {
  crop: string;
  months: number;
  residual_sigma: number;
  points: ForecastPoint[];
}

export interface HistoryPoint {
  year: number;
  month: number;
  price: number;
}

export interface HistoryResponse {
  crop: string;
  points: HistoryPoint[];
}

export interface HealthResponse {
  status: string;
  bundle_version: number;
  service_version: string;
}

export interface CropsResponse {
  crops: string[];
}

export interface ModelInfoResponse {
  bundle_version: number;
  created_at: string;
  crop_catalog: string[];
  fertilizer_catalog: string[];
  soil_types: string[];
  forest_config: Record<string, unknown>;
  price_crops: string[];
  fingerprints: Record<string, unknown>;
}

export interface ImportanceResponse {
  feature_names: string[];
  importances: number[];
}

export interface ApiFieldError {
  field: string;
  message: string;
}

export interface ErrorEnvelope {
  errors: ApiFieldError[];
}
