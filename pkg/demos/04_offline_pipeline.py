"""The full pipeline, fully offline: ground-truth OCR adapter, extractive
summarizer, identity translator, date extraction — and the stage-by-stage
run record it persists.

Equivalent CLI: docpipe pipeline --image doc.png --offline --ratio 0.5
"""

import json
import tempfile
from pathlib import Path

from PIL import Image

from docpipe.pipeline import PipelineConfig, RunStore, resume_from_edited_ocr, run_pipeline

workdir = Path(tempfile.mkdtemp(prefix="docpipe-demo-"))

# The ground-truth engine reads the sidecar .txt next to the image, which
# makes pipeline behavior reproducible without an OCR engine installed.
image = workdir / "doc.png"
Image.new("RGB", (32, 32), "white").save(image)
image.with_suffix(".txt").write_text(
    "The council met on 12/03/2024. The budget vote passed narrowly. "
    "Roads got most of the budget money.", encoding="utf-8")

config = PipelineConfig.from_dict({
    "ocr": {"languages": ["eng"], "engine": "ground-truth"},
    "summary": {"mode": "extractive", "ratio": 0.34},
    "translation": {"target": "hin", "provider": "identity"},
    "offline": True,
})
store = RunStore(workdir / "runs")

record = run_pipeline(image, config, store)
print(f"run {record['run_id']}: {record['status']}")
for stage in record["stages"]:
    output = stage["output"]
    note = "(skipped)" if output is None else ""
    print(f"  {stage['stage']:<10} {stage['duration_ms']:>4} ms  {note}")

summary = next(s for s in record["stages"] if s["stage"] == "Summarize")
print("\nsummary:", summary["output"]["text"])
dates = next(s for s in record["stages"] if s["stage"] == "Enrich")["output"]["dates"]
print("dates found:", [d["surface"] for d in dates])

# Human-in-the-loop: fix the OCR text and re-run downstream stages. The
# parent record stays untouched; the child references it.
child = resume_from_edited_ocr(
    store, record["run_id"],
    "The council met on 12/03/2024. The budget vote passed easily. "
    "Schools got most of the budget money.")
print(f"\nchild run {child['run_id']} (parent {child['parent_run']}):")
child_summary = next(s for s in child["stages"] if s["stage"] == "Summarize")
print("new summary:", child_summary["output"]["text"])

print(f"\nrecords on disk: {sorted(p.name for p in (workdir / 'runs').glob('*.json'))}")
print(json.dumps(store.list_runs(limit=5), indent=2)[:400], "...")
