/** Wire types mirroring the service's JSON schemas. */

export interface RestItem {
  kind: "rest";
  duration_s: number;
}

export interface ClipItem {
  kind: "clip";
  clip_id: string;
  target_emotion: number;
  duration_s: number;
  title: string;
  source_url: string;
}

export type PlanItem = RestItem | ClipItem;

export interface SessionPlan {
  schema_version: number;
  session_id: string;
  personalized: boolean;
  planned_total_s: number;
  emotions_covered: number[];
  items: PlanItem[];
}

export interface RankingSubmission {
  clip_id: string;
  score: number;
  evoked_emotion?: number | null;
  effective_span?: [number, number] | null;
  notes?: string;
}

export interface ConvergenceReport {
  status: "converged" | "need_more" | "max_iterations";
  deficient: number[];
  deficient_names: string[];
  minutes: Record<string, number>;
  target_minutes: number;
  min_score: number;
  sessions_completed: number;
  session_cap: number;
}

export interface RankingsResponse {
  accepted: number;
  convergence: ConvergenceReport;
}

export interface ImportanceRow {
  rank: number;
  feature: string;
  score: number;
}

export interface ConfusionDict {
  labels: number[];
  label_names: string[];
  counts_pred_by_actual: number[][];
  per_class_error: Record<string, number>;
  mean_error: number;
}

export interface TrainReport {
  oob_error?: number;
  cv_error?: number;
  confusion?: ConfusionDict;
  train_error: number;
}

export interface TrainResponse {
  model_id: string;
  run: { run_id: string; status: string; timing_s: number };
  report: TrainReport;
}

export interface SubjectSummary {
  subject_id: string;
  planned_sessions: string[];
  completed_sessions: string[];
  shown_clips: string[];
  excluded_pairs: [string, string][];
  rankings: number;
}

export const EMOTION_NAMES: Record<number, string> = {
  0: "Rest",
  1: "Fear",
  2: "Sad/Anger",
  3: "Awe/Rev",
  4: "Disgust",
  5: "Joy/Amus",
  6: "Content",
};

export const EMOTIONS = [1, 2, 3, 4, 5, 6];
