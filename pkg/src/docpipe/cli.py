"""docpipe command-line interface.

Every command prints a single JSON document to stdout. Exit codes: 0 on
success, 1 on a domain error (the JSON is the error object), 2 on usage
errors (argparse).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import classifier, enrich, metrics, ocr, pipeline
from .errors import DocpipeError, LengthMismatch
from .languages import get_language


def _print_json(payload) -> None:
    json.dump(payload, sys.stdout, ensure_ascii=False, indent=2, default=str)
    sys.stdout.write("\n")


def _ocr_config_from_args(args: argparse.Namespace) -> ocr.OcrConfig:
    codes = [code for code in args.lang.split("+") if code]
    return ocr.OcrConfig(
        languages=tuple(get_language(code) for code in codes),
        engine=ocr.Engine(args.engine),
        engine_path=args.engine_path,
        page_segmentation_mode=args.psm,
        timeout=args.timeout,
    )


def _cmd_ocr(args: argparse.Namespace) -> None:
    config = _ocr_config_from_args(args)
    result = ocr.run_ocr(args.image, config)
    if args.correct:
        primary = config.languages[0].code
        policy = ocr.CorrectionPolicy(
            dictionary={primary: ocr.bundled_dictionary(primary)
                        if args.dictionary is None
                        else ocr.load_dictionary(args.dictionary)})
        result = ocr.correct_text(result, policy)
    _print_json({
        "full_text": result.full_text,
        "mean_confidence": result.mean_confidence,
        "engine_id": result.engine_id,
        "languages": [t.code for t in result.language_used],
        "tokens": [{"text": t.text, "confidence": t.confidence} for t in result.tokens],
    })


def _cmd_pipeline(args: argparse.Namespace) -> None:
    if args.config:
        raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    else:
        raw = {}
    if args.offline:
        raw["offline"] = True
    if args.target_lang:
        raw.setdefault("translation", {})["target"] = args.target_lang
    if args.ratio is not None:
        raw.setdefault("summary", {})["ratio"] = args.ratio
    config = pipeline.PipelineConfig.from_dict(raw)
    store = pipeline.RunStore(args.runs_dir)
    record = pipeline.run_pipeline(args.image, config, store)
    _print_json(record)
    if record["status"] == "Failed":
        sys.exit(1)


def _cmd_train_classifier(args: argparse.Namespace) -> None:
    pairs = classifier.load_corpus(args.corpus)
    tokenized = [(classifier.prepare_tokens(text), label) for text, label in pairs]
    vectorizer = classifier.fit_tfidf([t for t, _ in tokenized],
                                      min_df=args.min_df,
                                      max_features=args.max_features)
    X = [classifier.vectorize(vectorizer, tokens) for tokens, _ in tokenized]
    y = [label for _, label in tokenized]
    hyper = classifier.Hyperparams(learning_rate=args.learning_rate,
                                   epochs=args.epochs,
                                   l2_lambda=args.l2_lambda)
    train = classifier.train_linear_svm if args.svm \
        else classifier.train_logistic_regression
    model = train(X, y, hyper, args.seed, vectorizer)
    classifier.save_model(model, args.out)
    report = classifier.evaluate(model, tokenized)
    _print_json({
        "model": str(args.out),
        "kind": model.kind,
        "labels": list(model.labels),
        "vocabulary_size": vectorizer.size,
        "n_examples": report.n_examples,
        "train_accuracy": report.accuracy,
        "seed": args.seed,
    })


def _cmd_eval_classifier(args: argparse.Namespace) -> None:
    model = classifier.load_model(args.model)
    pairs = classifier.load_corpus(args.corpus)
    tokenized = [(classifier.prepare_tokens(text), label) for text, label in pairs]
    report = classifier.evaluate(model, tokenized)
    _print_json({
        "accuracy": report.accuracy,
        "n_examples": report.n_examples,
        "per_class": {label: {"precision": p, "recall": r}
                      for label, (p, r) in report.per_class_precision_recall.items()},
        "labels": list(model.labels),
        "confusion": report.confusion.tolist(),
    })


def _cmd_metrics(args: argparse.Namespace) -> None:
    ref_text = Path(args.ref).read_text(encoding="utf-8")
    hyp_text = Path(args.hyp).read_text(encoding="utf-8")
    if args.metric == "cer":
        report = metrics.cer_report(ref_text, hyp_text)
    elif args.metric == "wer":
        report = metrics.wer_report(ref_text, hyp_text)
    elif args.metric == "rouge1":
        report = metrics.rouge1_report(ref_text, hyp_text)
    elif args.metric == "rougel":
        report = metrics.rougeL_report(ref_text, hyp_text)
    else:  # bleu: one segment per line, whitespace tokens
        refs = [line.split() for line in ref_text.splitlines() if line.strip()]
        hyps = [line.split() for line in hyp_text.splitlines() if line.strip()]
        if len(refs) != len(hyps):
            raise LengthMismatch(f"{len(refs)} reference lines vs {len(hyps)} hypothesis lines")
        report = metrics.bleu_report(refs, hyps, max_n=args.max_n)
    payload = {"name": report.name, "value": report.value,
               "components": report.components}
    if args.metric == "bleu":
        payload["value_times_100"] = report.value * 100  # 0-100 scale for comparability
    _print_json(payload)


def _cmd_serve(args: argparse.Namespace) -> None:
    from . import service  # deferred: pulls in the web stack

    if args.config:
        config = pipeline.load_config_file(args.config)
    else:
        config = pipeline.PipelineConfig.from_dict({})
    store = pipeline.RunStore(args.runs_dir)
    service.serve(config, args.addr, store, static_dir=args.static)


def _cmd_extract_dates(args: argparse.Namespace) -> None:
    text = Path(args.file).read_text(encoding="utf-8") if args.file else args.text
    matches = enrich.extract_dates(text or "")
    _print_json({"dates": [{"surface": m.surface, "start": m.start,
                            "end": m.end, "pattern_id": m.pattern_id}
                           for m in matches]})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="docpipe",
                                     description="Document image pipeline tools")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ocr = sub.add_parser("ocr", help="run OCR on one image")
    p_ocr.add_argument("--image", required=True)
    p_ocr.add_argument("--lang", default="eng", help="codes joined by +, e.g. hin+eng")
    p_ocr.add_argument("--engine", choices=["external", "ground-truth"],
                       default="external")
    p_ocr.add_argument("--engine-path", default="")
    p_ocr.add_argument("--psm", type=int, default=3)
    p_ocr.add_argument("--timeout", type=float, default=30.0)
    p_ocr.add_argument("--correct", action="store_true",
                       help="apply dictionary-based post-OCR correction")
    p_ocr.add_argument("--dictionary", default=None,
                       help="dictionary file (defaults to the bundled one)")
    p_ocr.set_defaults(func=_cmd_ocr)

    p_pipe = sub.add_parser("pipeline", help="run the full pipeline on one image")
    p_pipe.add_argument("--image", required=True)
    p_pipe.add_argument("--config", default=None, help="pipeline config JSON file")
    p_pipe.add_argument("--offline", action="store_true")
    p_pipe.add_argument("--target-lang", default=None)
    p_pipe.add_argument("--ratio", type=float, default=None)
    p_pipe.add_argument("--runs-dir", default="runs")
    p_pipe.set_defaults(func=_cmd_pipeline)

    p_train = sub.add_parser("train-classifier", help="train a linear text classifier")
    p_train.add_argument("--corpus", required=True, help=".csv or .jsonl corpus")
    p_train.add_argument("--out", required=True, help="model JSON output path")
    p_train.add_argument("--seed", type=int, default=42)
    p_train.add_argument("--svm", action="store_true",
                         help="train a linear SVM instead of logistic regression")
    p_train.add_argument("--min-df", type=int, default=2)
    p_train.add_argument("--max-features", type=int, default=None)
    p_train.add_argument("--learning-rate", type=float, default=0.5)
    p_train.add_argument("--epochs", type=int, default=300)
    p_train.add_argument("--l2-lambda", type=float, default=1e-4)
    p_train.set_defaults(func=_cmd_train_classifier)

    p_eval = sub.add_parser("eval-classifier", help="evaluate a saved model")
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--model", required=True)
    p_eval.set_defaults(func=_cmd_eval_classifier)

    p_metrics = sub.add_parser("metrics", help="score hypothesis text against a reference")
    p_metrics.add_argument("metric", choices=["cer", "wer", "rouge1", "rougel", "bleu"])
    p_metrics.add_argument("--ref", required=True)
    p_metrics.add_argument("--hyp", required=True)
    p_metrics.add_argument("--max-n", type=int, default=4)
    p_metrics.set_defaults(func=_cmd_metrics)

    p_dates = sub.add_parser("extract-dates", help="regex date extraction")
    p_dates.add_argument("--text", default=None)
    p_dates.add_argument("--file", default=None)
    p_dates.set_defaults(func=_cmd_extract_dates)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--addr", default="127.0.0.1:8080")
    p_serve.add_argument("--config", default=None)
    p_serve.add_argument("--static", default=None, help="directory with the built web UI")
    p_serve.add_argument("--runs-dir", default="runs")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DocpipeError as exc:
        _print_json({"error": {"code": exc.code, "message": str(exc)}})
        sys.exit(1)


if __name__ == "__main__":
    main()
