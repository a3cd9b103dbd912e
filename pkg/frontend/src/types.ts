/** JSON payload shapes of the prediction service. */

export interface MetricsReport {
  mse: number;
  mae: number;
  r2: number;
}

/**
 * Held-out diagnostics for one trained slot, exactly as served by
 * GET /api/diagnostics/{slot}. Every chart draws from this document
 * alone; the client never recomputes statistics.
 */
export interface DiagnosticsBundle {
  slot: string;
  model_version: number;
  kind: string;
  metrics: MetricsReport;
  /** [actual, predicted] per held-out row. */
  pairs: [number, number][];
  /** actual - predicted, same order as pairs. */
  residuals: number[];
  /** [theoretical quantile, observed quantile] per held-out row. */
  qq: [number, number][];
  /** Pearson matrix over features plus target, order given by labels. */
  correlation: number[][];
  labels: string[];
  /** One weight per feature, normalized to sum to 1 (or all zero). */
  importances: number[];
}

export interface PredictRequest {
  slot: string;
  lattice_type: string;
  thickness: number;
  young_modulus: number;
  poisson_ratio: number;
  conductivity: number;
}

export interface PredictResponse {
  predicted_young_modulus: number;
  model: string;
  model_version: number;
}

export interface TrainRequest {
  model: string;
  seed: number;
  slot: string;
}

export interface TrainResponse extends MetricsReport {
  slot: string;
  model_version: number;
  kind: string;
  seed: number;
}

export interface EngineeringConstants {
  Ex: number;
  Ey: number;
  Ez: number;
  Gxy: number;
  Gxz: number;
  Gyz: number;
  nu_xy: number;
  nu_xz: number;
  nu_yz: number;
}

export interface HomogenizeResponse {
  topology: string;
  thickness_mm: number;
  cell_size_mm: number;
  relative_density: number;
  material: { E: number; nu: number; k: number };
  C: number[][];
  engineering: EngineeringConstants;
}
