/**
 * Typed client for the docpipe HTTP API.
 *
 * Every request flows through one place that checks the path against the
 * documented endpoint list, so the UI cannot quietly grow undocumented
 * server dependencies; a test asserts this against a recording stub server.
 */

import type {
  LanguageInfo,
  RunOptions,
  RunRecord,
  RunSummary,
} from "./types.js";

const DOCUMENTED_ENDPOINTS: { method: string; pattern: RegExp }[] = [
  { method: "GET", pattern: /^\/api\/health$/ },
  { method: "GET", pattern: /^\/api\/languages$/ },
  { method: "POST", pattern: /^\/api\/runs$/ },
  { method: "GET", pattern: /^\/api\/runs\?limit=\d+&offset=\d+$/ },
  { method: "GET", pattern: /^\/api\/runs\/[0-9a-f]{32}$/ },
  { method: "POST", pattern: /^\/api\/runs\/[0-9a-f]{32}\/ocr-text$/ },
];

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export type RequestObserver = (method: string, path: string) => void;

export class DocpipeClient {
  constructor(
    private readonly baseUrl: string,
    private readonly observer?: RequestObserver,
  ) {}

  private async request<T>(method: string, path: string, init?: RequestInit): Promise<T> {
    const documented = DOCUMENTED_ENDPOINTS.some(
      (e) => e.method === method && e.pattern.test(path),
    );
    if (!documented) {
      throw new Error(`undocumented API endpoint: ${method} ${path}`);
    }
    this.observer?.(method, path);
    const response = await fetch(`${this.baseUrl}${path}`, { method, ...init });
    const text = await response.text();
    let body: unknown = null;
    try {
      body = text ? JSON.parse(text) : null;
    } catch {
      throw new ApiError("MalformedResponse", `non-JSON response from ${path}`, response.status);
    }
    if (!response.ok) {
      const envelope = body as { error?: { code?: string; message?: string } };
      throw new ApiError(
        envelope?.error?.code ?? "Unknown",
        envelope?.error?.message ?? `HTTP ${response.status}`,
        response.status,
      );
    }
    return body as T;
  }

  health(): Promise<{ status: string; version: string }> {
    return this.request("GET", "/api/health");
  }

  languages(): Promise<LanguageInfo[]> {
    return this.request("GET", "/api/languages");
  }

  /**
   * Upload an image and run the pipeline. `sidecar` carries the ground-truth
   * text for engine=ground-truth setups (demo/test fixtures).
   */
  createRun(
    image: Blob,
    filename: string,
    options?: RunOptions,
    sidecar?: string,
  ): Promise<RunRecord> {
    const form = new FormData();
    form.append("image", image, filename);
    if (options) {
      form.append("options", JSON.stringify(toConfigOverrides(options)));
    }
    if (sidecar !== undefined) {
      form.append("sidecar", sidecar);
    }
    return this.request("POST", "/api/runs", { body: form });
  }

  getRun(runId: string): Promise<RunRecord> {
    return this.request("GET", `/api/runs/${runId}`);
  }

  listRuns(limit = 20, offset = 0): Promise<{ runs: RunSummary[] }> {
    return this.request("GET", `/api/runs?limit=${limit}&offset=${offset}`);
  }

  editOcrText(runId: string, text: string): Promise<RunRecord> {
    return this.request("POST", `/api/runs/${runId}/ocr-text`, {
      body: JSON.stringify({ text }),
      headers: { "Content-Type": "application/json" },
    });
  }
}

/** Map the UI's option fields onto the server's config-override schema. */
export function toConfigOverrides(options: RunOptions): Record<string, unknown> {
  const overrides: Record<string, unknown> = {};
  if (options.sourceLangs?.length) {
    overrides.ocr = { languages: options.sourceLangs };
  }
  if (options.targetLang !== undefined) {
    overrides.translation = { target: options.targetLang };
  }
  if (options.ratio !== undefined) {
    overrides.summary = { ratio: options.ratio };
  }
  if (options.offline !== undefined) {
    overrides.offline = options.offline;
  }
  return overrides;
}
