// Schema of the sweep summary JSON emitted by the fairhide experiment CLI.

export interface CellSummary {
  n: number;
  m: number;
  algorithm: string;
  instances: number;
  covered: number;
  mean_normalized_regret: number | null;
  worst_normalized_regret: number | null;
  worst_regret: number | null;
  mean_hidden_non_ef: number | null;
  worst_k_hidden: number | null;
  ef_frequency: number | null;
}

export interface OptimalCellSummary {
  n: number;
  m: number;
  instances: number;
  covered: number;
  fully_covered: boolean;
  mean_k_opt: number | null;
  worst_k_opt: number | null;
  ef_exists_frequency: number | null;
}

export interface SweepSummary {
  cells: CellSummary[];
  optimal_cells: OptimalCellSummary[];
  cdf: {
    k_values: number[];
    fraction_hef_k: Record<string, number[]>;
  };
  coverage: {
    cells_total: number;
    cells_fully_covered: number;
    fraction: number;
  };
}

/** Heatmap metrics read from per-algorithm cell summaries. */
export const CELL_METRICS = [
  "mean_normalized_regret",
  "worst_normalized_regret",
  "worst_regret",
  "mean_hidden_non_ef",
  "worst_k_hidden",
  "ef_frequency",
] as const;

/** Heatmap metrics read from the per-instance optimum summaries (one panel). */
export const OPTIMAL_METRICS = ["mean_k_opt", "worst_k_opt", "ef_exists_frequency"] as const;

export type CellMetric = (typeof CELL_METRICS)[number];
export type OptimalMetric = (typeof OPTIMAL_METRICS)[number];
export type Metric = CellMetric | OptimalMetric | "cdf";

export function isCellMetric(name: string): name is CellMetric {
  return (CELL_METRICS as readonly string[]).includes(name);
}

export function isOptimalMetric(name: string): name is OptimalMetric {
  return (OPTIMAL_METRICS as readonly string[]).includes(name);
}

export function parseSummary(text: string): SweepSummary {
  const data = JSON.parse(text) as SweepSummary;
  if (!Array.isArray(data.cells) || !Array.isArray(data.optimal_cells)) {
    throw new Error("summary JSON is missing the cells/optimal_cells arrays");
  }
  if (!data.cdf || !Array.isArray(data.cdf.k_values) || !data.cdf.fraction_hef_k) {
    throw new Error("summary JSON is missing the cdf table");
  }
  return data;
}
