/** Shapes delivered by the docpipe HTTP API. */

export interface StageResult {
  stage: string;
  /** null for skipped stages (no classifier/sentiment model configured). */
  output: Record<string, unknown> | null;
  duration_ms: number;
  provider_id: string | null;
}

export interface RunError {
  stage: string;
  code: string;
  message: string;
}

export interface RunRecord {
  run_id: string;
  parent_run: string | null;
  created_at: string;
  input_image: { filename: string; sha256: string };
  config: Record<string, unknown>;
  status: "Succeeded" | "Failed" | "AwaitingReview";
  stages: StageResult[];
  error: RunError | null;
}

export interface RunSummary {
  run_id: string;
  parent_run: string | null;
  created_at: string;
  status: string;
  input_image: { filename: string; sha256: string };
  stage_count: number;
}

export interface LanguageInfo {
  code: string;
  display_name: string;
  script: string;
}

export interface DateMatchInfo {
  surface: string;
  start: number;
  end: number;
  pattern_id: string;
}

/** Per-run options sent as the multipart `options` part. */
export interface RunOptions {
  sourceLangs?: string[];
  targetLang?: string | null;
  ratio?: number;
  offline?: boolean;
}

/** Client-side view state around one run record. */
export interface UiRunView {
  record: RunRecord;
  /** Current content of the OCR review textarea. */
  editedText: string;
  /** True iff the textarea differs from the record's OCR text. */
  edited: boolean;
}
