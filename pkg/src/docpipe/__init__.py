"""docpipe: an offline-testable document-image pipeline for Indic-language
text — OCR adapters with post-OCR correction, script-aware preprocessing,
TF-IDF linear classification, extractive/remote summarization, translation
clients, date and sentiment enrichment, and CER/WER/ROUGE/BLEU metrics."""

__version__ = "0.1.0"
