/**
 * JSON shapes exchanged with the task service.
 *
 * These mirror the server's wire format field for field. The UI never
 * derives graph or metric values itself; everything rendered comes out of
 * one of these payloads.
 */

export type TaskState = "queued" | "running" | "done" | "failed";

export interface GraphSpec {
  model: string;
  d: number;
  e: number;
  rank: number | null;
  weight_range: [number, number];
  seed: number;
}

export interface NoiseSpec {
  family: string;
  scale: number;
}

export interface SimulateSource {
  kind: "simulate";
  graph: GraphSpec;
  sem: string;
  noise: NoiseSpec;
  n: number;
}

export interface CsvSource {
  kind: "csv";
  path: string;
  truth_path: string | null;
}

export type DataSource = SimulateSource | CsvSource;

export interface PriorEdges {
  required: [number, number][];
  forbidden: [number, number][];
}

export interface NeighborhoodSelection {
  mode: "off" | "lasso";
  lambda_ns: number | null;
}

export interface TaskSubmission {
  schema_version: number;
  data_source: DataSource;
  algorithm: string;
  params: Record<string, unknown>;
  prior: PriorEdges | null;
  neighborhood_selection: NeighborhoodSelection;
  threshold: number | null;
  seed: number;
}

export interface MetricsReport {
  fdr: number;
  tpr: number;
  fpr: number;
  precision: number;
  recall: number;
  f1: number;
  shd: number;
  nnz: number;
  gscore: number;
}

/** One convergence-trace entry; keys vary by algorithm. */
export type TraceEntry = Record<string, unknown>;

export interface TaskResult {
  schema_version: number;
  graph: number[][];
  graph_pre: number[][];
  truth: number[][] | null;
  metrics: MetricsReport | null;
  trace: TraceEntry[];
  wall_clock: number;
  provenance: Record<string, unknown>;
}

export interface TaskError {
  code: string;
  message: string;
  stage?: string;
}

export interface TaskRecord {
  id: string;
  state: TaskState;
  config: Record<string, unknown>;
  result: TaskResult | null;
  error: TaskError | null;
  parent_id: string | null;
  created_at: number;
  finished_at: number | null;
  progress: TraceEntry | null;
}

export interface TaskSummary {
  id: string;
  state: TaskState;
  algorithm: string;
  parent_id: string | null;
  created_at: number;
}

export const ALGORITHMS = [
  "pc",
  "ges",
  "direct_lingam",
  "notears",
  "golem",
] as const;

export const GRAPH_MODELS = ["erdos_renyi", "scale_free", "low_rank"] as const;

export const NOISE_FAMILIES = ["gauss", "exp", "uniform", "gumbel"] as const;

export const SEM_KINDS = ["linear", "mlp", "quadratic"] as const;
