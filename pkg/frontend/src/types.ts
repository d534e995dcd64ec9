/**
 * API payload shapes, mirrored one-to-one from the server's JSON.
 * The client holds no business rules: every displayed value originates
 * from one of these fields.
 */

export type Role = "manager" | "annotator";

export interface LoginResponse {
  token: string;
  role: Role;
  expires_at: string;
}

export interface User {
  id: string;
  login: string;
  role: Role;
}

export interface TierSpecDoc {
  name: string;
  checking: "unchecked" | "categorical" | "parsed";
  categories: string[];
  parser: string | null;
  allow_empty: boolean;
}

export interface SchemeDoc {
  name: string;
  duration_tolerance: number;
  tiers: TierSpecDoc[];
}

export interface CampaignSummary {
  id: string;
  name: string;
  corpus_id: string;
  created_at: string;
  scheme: SchemeDoc;
  n_tasks: number;
}

export interface AudioFileDoc {
  path: string;
  duration: number;
  format: string;
  approximate: boolean;
}

export interface CorpusSummary {
  id: string;
  source: "folder" | "csv";
  files: AudioFileDoc[];
  skipped: [string, string][];
}

export interface Progress {
  task_states: Record<string, string>;
  counts: Record<string, number>;
  completed: number;
  total: number;
  ratio: number;
  empty: boolean;
}

export interface ValidationErrorDoc {
  kind: string;
  tier: string | null;
  message: string;
  item_index: number | null;
  time_range: [number, number] | null;
}

export interface ReviewReportDoc {
  frontier_conflicts: { tier: string; ref_range: [number, number]; target_range: [number, number] }[];
  content_conflicts: { tier: string; ref_range: [number, number]; ref_text: string; target_text: string }[];
  lone_units: { tier: string; side: "ref" | "target"; time_range: [number, number]; text: string }[];
  validation_errors: ValidationErrorDoc[];
}

export interface GammaResultDoc {
  gamma: number;
  observed_disorder: number;
  expected_disorder: number;
  n_samples: number;
  seed: number;
  sample_disorders: number[];
}

export interface TierGammaDoc {
  tier: string;
  n_units_a: number;
  n_units_b: number;
  result: GammaResultDoc | null;
}

export interface TaskSummary {
  id: string;
  campaign_id: string;
  campaign_name: string;
  file: string;
  duration: number;
  kind: "single" | "double";
  state: "ASSIGNED" | "PARALLEL" | "REVIEW" | "COMPLETED";
  role?: "ref" | "target" | null;
  annotators?: string[];
  n_submissions?: number;
  gamma?: Record<string, TierGammaDoc>;
}

export interface SubmissionOutcome {
  kind: "validation" | "review";
  state: string;
  report: ValidationErrorDoc[] | ReviewReportDoc;
  advanced: boolean;
  gamma?: Record<string, TierGammaDoc>;
  code?: string;
  message?: string;
}

export interface HistoryEntry {
  who: string;
  when: string;
  blob_id: string;
  report:
    | { kind: "validation"; errors: ValidationErrorDoc[] }
    | ({ kind: "review" } & ReviewReportDoc);
}

export interface ApiErrorBody {
  code: string;
  message: string;
  [extra: string]: unknown;
}
