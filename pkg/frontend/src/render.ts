/**
 * Pure HTML builders for the run view: no DOM access, so every rendering
 * rule (stage order, date highlighting offsets, badges) is unit-testable
 * in Node.
 */

import type {
  DateMatchInfo,
  RunError,
  RunRecord,
  RunSummary,
  StageResult,
  UiRunView,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Wrap each date match in a <mark> using its recorded offsets. Matches are
 * non-overlapping and sorted by start, which the record guarantees.
 */
export function highlightDates(text: string, dates: DateMatchInfo[]): string {
  let html = "";
  let cursor = 0;
  for (const match of dates) {
    html += escapeHtml(text.slice(cursor, match.start));
    html += `<mark class="date" data-pattern="${escapeHtml(match.pattern_id)}">` +
      escapeHtml(text.slice(match.start, match.end)) + "</mark>";
    cursor = match.end;
  }
  html += escapeHtml(text.slice(cursor));
  return html;
}

export function ocrTextOf(record: RunRecord): string {
  const stage = record.stages.find((s) => s.stage === "Ocr");
  const output = stage?.output as { full_text?: string } | null | undefined;
  return output?.full_text ?? "";
}

export function datesOf(record: RunRecord): DateMatchInfo[] {
  const stage = record.stages.find((s) => s.stage === "Enrich");
  const output = stage?.output as { dates?: DateMatchInfo[] } | null | undefined;
  return output?.dates ?? [];
}

export function makeRunView(record: RunRecord, editedText?: string): UiRunView {
  const original = ocrTextOf(record);
  const text = editedText ?? original;
  return { record, editedText: text, edited: text !== original };
}

function stageBody(stage: StageResult, record: RunRecord): string {
  if (stage.output === null) {
    return '<p class="skipped">skipped</p>';
  }
  const output = stage.output as Record<string, any>;
  switch (stage.stage) {
    case "Ocr": {
      // Dates live in the Enrich stage but highlight inside the OCR text.
      const highlighted = highlightDates(output.full_text ?? "", datesOf(record));
      const confidence = Number(output.mean_confidence ?? 0).toFixed(2);
      return `<p class="ocr-text">${highlighted}</p>` +
        `<p class="meta">engine ${escapeHtml(String(output.engine_id))}, ` +
        `mean confidence ${confidence}</p>`;
    }
    case "Correction":
      return `<p>${escapeHtml(String(output.full_text ?? ""))}</p>` +
        `<p class="meta">${Number(output.changed_tokens ?? 0)} tokens changed</p>`;
    case "Preprocess": {
      const n = Array.isArray(output.sentences) ? output.sentences.length : 0;
      return `<p class="meta">${n} sentences</p>`;
    }
    case "Classify":
      return `<span class="chip topic">${escapeHtml(String(output.label))}</span>`;
    case "Summarize":
      return `<p>${escapeHtml(String(output.text ?? ""))}</p>` +
        `<p class="meta">${escapeHtml(String(output.method))}, ` +
        `compression ${Number(output.compression_ratio ?? 0).toFixed(2)}</p>`;
    case "Translate":
      return `<p>${escapeHtml(String(output.text ?? ""))}</p>` +
        `<p class="meta">${escapeHtml(String(output.source))} → ` +
        `${escapeHtml(String(output.target))} via ` +
        `${escapeHtml(String(output.provider_id))}</p>`;
    case "Enrich": {
      const dates = (output.dates ?? []) as DateMatchInfo[];
      const items = dates
        .map((d) => `<li><mark class="date">${escapeHtml(d.surface)}</mark> ` +
          `<span class="meta">${escapeHtml(d.pattern_id)}</span></li>`)
        .join("");
      const sentiment = output.sentiment as { label: string; confidence: number } | null;
      const badge = sentiment
        ? `<span class="badge sentiment-${escapeHtml(sentiment.label)}">` +
          `${escapeHtml(sentiment.label)} ${Number(sentiment.confidence).toFixed(2)}</span>`
        : '<span class="meta">no sentiment model</span>';
      return `<ul class="dates">${items}</ul>${badge}`;
    }
    default:
      return `<pre>${escapeHtml(JSON.stringify(stage.output))}</pre>`;
  }
}

/** One panel per stage, in the record's stage order. */
export function renderStagePanels(record: RunRecord): string {
  return record.stages
    .map((stage) =>
      `<section class="stage" data-stage="${escapeHtml(stage.stage)}">` +
      `<h3>${escapeHtml(stage.stage)}` +
      `<span class="meta"> ${stage.duration_ms} ms</span></h3>` +
      stageBody(stage, record) +
      "</section>")
    .join("");
}

export function renderErrorBanner(error: RunError | null): string {
  if (!error) {
    return "";
  }
  return `<div class="banner error" data-code="${escapeHtml(error.code)}">` +
    `Stage ${escapeHtml(error.stage)} failed: ${escapeHtml(error.code)} — ` +
    `${escapeHtml(error.message)}</div>`;
}

export function renderRunList(summaries: RunSummary[]): string {
  if (summaries.length === 0) {
    return '<p class="empty">No runs yet. Upload a document to get started.</p>';
  }
  return "<ul class=\"runs\">" + summaries
    .map((run) =>
      `<li data-run-id="${escapeHtml(run.run_id)}">` +
      `<a href="#run/${escapeHtml(run.run_id)}">` +
      `<code>${escapeHtml(run.run_id.slice(0, 8))}</code> ` +
      `${escapeHtml(run.input_image.filename)}</a> ` +
      `<span class="badge status-${escapeHtml(run.status)}">${escapeHtml(run.status)}</span> ` +
      `<span class="meta">${escapeHtml(run.created_at)}</span>` +
      (run.parent_run
        ? ` <span class="meta">edited from ${escapeHtml(run.parent_run.slice(0, 8))}</span>`
        : "") +
      "</li>")
    .join("") + "</ul>";
}
