import { describe, expect, it } from "vitest";

import {
  escapeHtml,
  highlightDates,
  makeRunView,
  ocrTextOf,
  renderErrorBanner,
  renderRunList,
  renderStagePanels,
} from "../src/render.js";
import type { RunRecord, RunSummary } from "../src/types.js";

function record(overrides: Partial<RunRecord> = {}): RunRecord {
  return {
    run_id: "a".repeat(32),
    parent_run: null,
    created_at: "2026-08-10T10:00:00.000000Z",
    input_image: { filename: "doc.png", sha256: "0".repeat(64) },
    config: {},
    status: "Succeeded",
    stages: [
      {
        stage: "Ocr",
        output: {
          full_text: "Signed on 12/03/2024 here.",
          mean_confidence: 1.0,
          engine_id: "ground-truth/1",
          languages: ["eng"],
          tokens: [],
        },
        duration_ms: 1,
        provider_id: "ground-truth/1",
      },
      { stage: "Correction", output: null, duration_ms: 0, provider_id: null },
      {
        stage: "Preprocess",
        output: { normalized_full: "x", sentences: [{}], tokens_per_sentence: [[]] },
        duration_ms: 0,
        provider_id: null,
      },
      { stage: "Classify", output: null, duration_ms: 0, provider_id: null },
      {
        stage: "Summarize",
        output: {
          text: "Signed on 12/03/2024 here.",
          method: "LocalExtractive",
          provider_id: "local-extractive/1",
          compression_ratio: 1.0,
          selected_indices: [0],
        },
        duration_ms: 0,
        provider_id: "local-extractive/1",
      },
      {
        stage: "Translate",
        output: {
          text: "Signed on 12/03/2024 here.",
          source: "eng",
          target: "hin",
          provider_id: "identity",
        },
        duration_ms: 0,
        provider_id: "identity",
      },
      {
        stage: "Enrich",
        output: {
          dates: [{ surface: "12/03/2024", start: 10, end: 20, pattern_id: "P1" }],
          sentiment: null,
        },
        duration_ms: 0,
        provider_id: null,
      },
    ],
    error: null,
    ...overrides,
  };
}

describe("highlightDates", () => {
  it("wraps each match at its exact offsets", () => {
    const text = "Signed on 12/03/2024 here.";
    const html = highlightDates(text, [
      { surface: "12/03/2024", start: 10, end: 20, pattern_id: "P1" },
    ]);
    expect(html).toBe(
      'Signed on <mark class="date" data-pattern="P1">12/03/2024</mark> here.',
    );
  });

  it("handles multiple matches and escapes surrounding text", () => {
    const text = "<b> 1/2/2003 & May 4, 2025 </b>";
    const html = highlightDates(text, [
      { surface: "1/2/2003", start: 4, end: 12, pattern_id: "P1" },
      { surface: "May 4, 2025", start: 15, end: 26, pattern_id: "P3" },
    ]);
    expect(html).toContain("&lt;b&gt; ");
    expect(html).toContain('<mark class="date" data-pattern="P1">1/2/2003</mark>');
    expect(html).toContain('<mark class="date" data-pattern="P3">May 4, 2025</mark>');
    expect(html).toContain(" &amp; ");
  });

  it("returns escaped text unchanged when there are no matches", () => {
    expect(highlightDates("a < b", [])).toBe("a &lt; b");
  });

  it("round-trips surfaces exactly from the offsets", () => {
    const text = "x १२/०३/२०२४ y";
    const dates = [{ surface: "१२/०३/२०२४", start: 2, end: 12, pattern_id: "P4" }];
    const html = highlightDates(text, dates);
    expect(html).toContain(">१२/०३/२०२४</mark>");
  });
});

describe("renderStagePanels", () => {
  it("renders one panel per stage in record order", () => {
    const html = renderStagePanels(record());
    const order = [...html.matchAll(/data-stage="([^"]+)"/g)].map((m) => m[1]);
    expect(order).toEqual([
      "Ocr", "Correction", "Preprocess", "Classify", "Summarize",
      "Translate", "Enrich",
    ]);
  });

  it("marks skipped stages", () => {
    const html = renderStagePanels(record());
    expect(html).toContain('<p class="skipped">skipped</p>');
  });

  it("highlights dates inside the OCR panel from Enrich offsets", () => {
    const html = renderStagePanels(record());
    expect(html).toContain('<mark class="date" data-pattern="P1">12/03/2024</mark>');
  });

  it("escapes text content", () => {
    const rec = record();
    (rec.stages[4].output as any).text = "<script>alert(1)</script>";
    const html = renderStagePanels(rec);
    expect(html).not.toContain("<script>alert(1)</script>");
    expect(html).toContain("&lt;script&gt;");
  });
});

describe("makeRunView", () => {
  it("is unedited when the textarea matches the record", () => {
    const rec = record();
    expect(makeRunView(rec).edited).toBe(false);
    expect(makeRunView(rec, ocrTextOf(rec)).edited).toBe(false);
  });

  it("flags edits", () => {
    const view = makeRunView(record(), "different text");
    expect(view.edited).toBe(true);
  });
});

describe("renderErrorBanner", () => {
  it("names the failing stage and error code", () => {
    const html = renderErrorBanner({
      stage: "Summarize",
      code: "ProviderTimeout",
      message: "no successful response after 3 retries",
    });
    expect(html).toContain("Summarize");
    expect(html).toContain("ProviderTimeout");
    expect(html).toContain('data-code="ProviderTimeout"');
  });

  it("renders nothing for successful runs", () => {
    expect(renderErrorBanner(null)).toBe("");
  });
});

describe("renderRunList", () => {
  const summary: RunSummary = {
    run_id: "b".repeat(32),
    parent_run: null,
    created_at: "2026-08-10T10:00:00.000000Z",
    status: "Succeeded",
    input_image: { filename: "doc.png", sha256: "0".repeat(64) },
    stage_count: 7,
  };

  it("lists runs with status badges", () => {
    const html = renderRunList([summary]);
    expect(html).toContain(`data-run-id="${"b".repeat(32)}"`);
    expect(html).toContain("status-Succeeded");
  });

  it("shows an empty state", () => {
    expect(renderRunList([])).toContain("No runs yet");
  });

  it("marks child runs", () => {
    const child = { ...summary, parent_run: "c".repeat(32) };
    expect(renderRunList([child])).toContain("edited from");
  });
});

describe("escapeHtml", () => {
  it("escapes markup characters", () => {
    expect(escapeHtml('<a href="x">&</a>')).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;&lt;/a&gt;",
    );
  });
});

describe("script rendering fixtures", () => {
  // Fixed Indic strings render through the same escape path untouched;
  // combining marks must survive byte-for-byte for the browser to shape.
  const samples = ["राम घर गया।", "கடல் காற்று", "নমস্কার", "నమస్కారం"];
  for (const sample of samples) {
    it(`passes ${sample} through unaltered`, () => {
      expect(escapeHtml(sample)).toBe(sample);
      expect(highlightDates(sample, [])).toBe(sample);
    });
  }
});
