/**
 * The UI's three operations as DOM-free flows over the API client:
 * upload-and-run, edit-OCR-and-rerun, browse runs. app.ts binds them to
 * the page; tests drive them against stub and live services.
 */

import { DocpipeClient } from "./api.js";
import { makeRunView } from "./render.js";
import type { RunOptions, RunSummary, UiRunView } from "./types.js";

export async function uploadAndRun(
  client: DocpipeClient,
  image: Blob,
  filename: string,
  options: RunOptions,
  sidecar?: string,
): Promise<UiRunView> {
  const record = await client.createRun(image, filename, options, sidecar);
  return makeRunView(record);
}

export async function editOcrAndRerun(
  client: DocpipeClient,
  runId: string,
  editedText: string,
): Promise<UiRunView> {
  if (!editedText.trim()) {
    throw new Error("edited text must not be empty");
  }
  const record = await client.editOcrText(runId, editedText);
  return makeRunView(record);
}

export async function browseRuns(
  client: DocpipeClient,
  limit = 20,
  offset = 0,
): Promise<RunSummary[]> {
  const { runs } = await client.listRuns(limit, offset);
  return runs;
}
