// JSON shapes exactly as the service emits them.

export interface SourceDescriptor {
  id: string;
  display_name: string;
  access_mode: string;
  access_level: string;
  native_format: string;
  base_url: string;
  robots_url: string | null;
}

export type JobState = "queued" | "running" | "done" | "failed" | "needs_human";

export const TERMINAL_STATES: ReadonlySet<JobState> = new Set([
  "done",
  "failed",
  "needs_human",
]);

export interface CountRecordJson {
  source: string;
  drug: string;
  soc: string | null;
  reaction: string;
  count: number;
  retrieved_at: string;
  adapter_version: string;
  raw_drug?: string | null;
}

export interface ManifestEntryJson {
  source: string;
  query_or_quarter: string;
  file_path: string;
  format: string;
  byte_size: number;
  checksum: string;
  retrieved_at: string;
  source_url: string;
}

export interface HandoffJson {
  url: string;
  expected_filename: string;
  dest_path: string;
  notes: string;
}

export interface QuarterJson {
  year: number;
  quarter: string;
  archive_url: string;
  label: string;
  code: string;
}

export interface VaersFileJson {
  year: number;
  filename: string;
  url: string;
  label: string;
}

export interface JobResult {
  record_count?: number;
  records?: CountRecordJson[];
  result_ref?: ManifestEntryJson;
  handoff?: HandoffJson;
  quarter?: QuarterJson;
  file?: VaersFileJson;
}

export interface Job {
  id: string;
  kind: "search" | "download";
  source: string;
  params: Record<string, string>;
  state: JobState;
  progress: number;
  result: JobResult | null;
  error: string | null;
  error_code: string | null;
  created_at: string;
}

export interface MatrixJson {
  ae_labels: string[];
  drug_labels: string[];
  cells: number[][];
  other_drugs?: number[];
}

export interface TabulateRequest {
  datasets?: string[];
  records?: CountRecordJson[];
  drugs?: string[];
  mode?: "ae_based" | "drug_based";
  class_members?: string[];
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: unknown;
}
