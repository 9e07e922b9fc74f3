"""Tour of the evaluation metrics: edit distance, CER/WER, ROUGE, BLEU.

Every metric is a pure function; the *_report variants also return the
intermediate quantities, which is what the `docpipe metrics` CLI prints.
"""

from docpipe import metrics

# Edit distance over characters and over whole tokens.
print("levenshtein('kitten', 'sitting') =", metrics.levenshtein("kitten", "sitting"))
print("levenshtein(['the','cat'], ['the','mat']) =",
      metrics.levenshtein(["the", "cat"], ["the", "mat"]))

# CER/WER compare an OCR hypothesis against ground truth. Both normalize
# first (Unicode composition + whitespace collapse) so layout differences
# do not count as errors.
truth = "राम घर गया। वह सो गया।"
ocr_output = "राम धर गया। वह सो गया"
print("\nCER =", round(metrics.cer(truth, ocr_output), 4))
print("WER =", round(metrics.wer(truth, ocr_output), 4))

# WER can exceed 1 when the hypothesis is longer than the reference.
print("WER('a b', 'c d e') =", metrics.wer("a b", "c d e"))

# ROUGE-1 (clipped unigram overlap) and ROUGE-L (longest common
# subsequence) for summary quality.
reference_summary = "the cat sat on the mat"
candidate = "the cat"
r1 = metrics.rouge1(reference_summary, candidate)
rl = metrics.rougeL(reference_summary, candidate)
print(f"\nROUGE-1 precision={r1.precision:.3f} recall={r1.recall:.3f} f1={r1.f1:.3f}")
print(f"ROUGE-L f1={rl.f1:.3f}")

# Corpus BLEU over token sequences, one reference per hypothesis.
refs = [["the", "cat", "sat", "on", "the", "mat"], ["hello", "world"]]
hyps = [["the", "cat", "sat", "on", "a", "mat"], ["hello", "world"]]
report = metrics.bleu_report(refs, hyps, max_n=4)
print(f"\nBLEU = {report.value:.4f}  ({report.value * 100:.1f} on the 0-100 scale)")
print("per-order precisions:", [round(p, 4) for p in report.components["precisions"]])
print("brevity penalty:", report.components["brevity_penalty"])
