/** Page wiring: binds the upload form, run view, OCR editor and history
 * list to the flows. All state lives in server records; the only
 * client-side state is the current run id and the textarea content. */

import { ApiError, DocpipeClient } from "./api.js";
import { browseRuns, editOcrAndRerun, uploadAndRun } from "./flows.js";
import {
  makeRunView,
  ocrTextOf,
  renderErrorBanner,
  renderRunList,
  renderStagePanels,
} from "./render.js";
import type { RunRecord } from "./types.js";

const PAGE_SIZE = 10;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

const client = new DocpipeClient("");

const state = {
  current: null as RunRecord | null,
  page: 0,
};

function showBanner(text: string, kind: "error" | "info" = "error"): void {
  const banner = el<HTMLDivElement>("banner");
  banner.innerHTML = text
    ? `<div class="banner ${kind}">${text}</div>`
    : "";
}

function showRun(record: RunRecord): void {
  state.current = record;
  el<HTMLDivElement>("stage-panels").innerHTML = renderStagePanels(record);
  el<HTMLDivElement>("run-error").innerHTML = renderErrorBanner(record.error);
  const textarea = el<HTMLTextAreaElement>("ocr-editor");
  textarea.value = ocrTextOf(record);
  el<HTMLDivElement>("run-meta").textContent =
    `run ${record.run_id} · ${record.status} · ${record.created_at}` +
    (record.parent_run ? ` · edited from ${record.parent_run}` : "");
  el<HTMLElement>("run-view").hidden = false;
  updateEditedFlag();
}

function updateEditedFlag(): void {
  if (!state.current) {
    return;
  }
  const textarea = el<HTMLTextAreaElement>("ocr-editor");
  const edited = makeRunView(state.current, textarea.value).edited;
  el<HTMLButtonElement>("rerun-button").dataset.edited = String(edited);
  el<HTMLSpanElement>("edited-flag").textContent = edited ? "edited" : "";
}

async function refreshHistory(): Promise<void> {
  try {
    const runs = await browseRuns(client, PAGE_SIZE, state.page * PAGE_SIZE);
    el<HTMLDivElement>("history").innerHTML = renderRunList(runs);
    el<HTMLSpanElement>("page-label").textContent = `page ${state.page + 1}`;
  } catch (error) {
    showBanner(`could not load runs: ${describe(error)}`);
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `${error.code}: ${error.message}`;
  }
  return error instanceof Error ? error.message : String(error);
}

async function populateLanguages(): Promise<void> {
  const languages = await client.languages();
  const source = el<HTMLSelectElement>("source-lang");
  const target = el<HTMLSelectElement>("target-lang");
  for (const lang of languages) {
    source.add(new Option(`${lang.display_name} (${lang.code})`, lang.code));
    target.add(new Option(`${lang.display_name} (${lang.code})`, lang.code));
  }
  source.value = "hin";
  target.value = "eng";
}

function wireUpload(): void {
  const form = el<HTMLFormElement>("upload-form");
  const fileInput = el<HTMLInputElement>("image-file");
  const submit = el<HTMLButtonElement>("upload-button");
  fileInput.addEventListener("change", () => {
    submit.disabled = !fileInput.files?.length;
  });
  submit.disabled = true;

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    const file = fileInput.files?.[0];
    if (!file) {
      return;
    }
    showBanner("running…", "info");
    submit.disabled = true;
    try {
      const sidecarText = el<HTMLTextAreaElement>("sidecar-text").value;
      const view = await uploadAndRun(client, file, file.name, {
        sourceLangs: [el<HTMLSelectElement>("source-lang").value],
        targetLang: el<HTMLSelectElement>("target-lang").value,
        ratio: Number(el<HTMLInputElement>("ratio").value) || 0.3,
        offline: el<HTMLInputElement>("offline").checked,
      }, sidecarText || undefined);
      showBanner("");
      showRun(view.record);
      state.page = 0;
      await refreshHistory();
    } catch (error) {
      showBanner(describe(error));
    } finally {
      submit.disabled = false;
    }
  });
}

function wireEditor(): void {
  el<HTMLTextAreaElement>("ocr-editor").addEventListener("input", updateEditedFlag);
  el<HTMLButtonElement>("rerun-button").addEventListener("click", async () => {
    const record = state.current;
    if (!record) {
      return;
    }
    const text = el<HTMLTextAreaElement>("ocr-editor").value;
    if (!text.trim()) {
      showBanner("EmptyEditedText: the OCR text cannot be empty");
      return;
    }
    if (text === ocrTextOf(record) &&
        !window.confirm("Text is unchanged. Re-run anyway?")) {
      return;
    }
    showBanner("re-running…", "info");
    try {
      const view = await editOcrAndRerun(client, record.run_id, text);
      showBanner("");
      showRun(view.record);
      await refreshHistory();
    } catch (error) {
      showBanner(describe(error));
    }
  });
}

function wireHistory(): void {
  el<HTMLDivElement>("history").addEventListener("click", async (event) => {
    const item = (event.target as HTMLElement).closest("li[data-run-id]");
    if (!item) {
      return;
    }
    event.preventDefault();
    try {
      showRun(await client.getRun((item as HTMLElement).dataset.runId!));
    } catch (error) {
      showBanner(describe(error));
    }
  });
  el<HTMLButtonElement>("prev-page").addEventListener("click", async () => {
    state.page = Math.max(0, state.page - 1);
    await refreshHistory();
  });
  el<HTMLButtonElement>("next-page").addEventListener("click", async () => {
    state.page += 1;
    await refreshHistory();
  });
}

async function main(): Promise<void> {
  wireUpload();
  wireEditor();
  wireHistory();
  try {
    await populateLanguages();
  } catch (error) {
    showBanner(`service unreachable: ${describe(error)}`);
  }
  await refreshHistory();
}

main();
