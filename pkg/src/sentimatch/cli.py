"""Command-line interface.

Subcommands: ``profile`` (corpus statistics), ``sample`` (stratified
sampling), ``evaluate`` (gold vs. predictions), ``agreement`` (inter-rater
kappa), ``recommend`` (questionnaire scoring, interactive wizard on a TTY) and
``kb`` (knowledge-base inspection). Every reporting subcommand has a JSON mode
(default, exactly one document on stdout) and a text mode; diagnostics go to
stderr. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import IO, Sequence

from .corpus import (
    Corpus,
    IngestOptions,
    LabelMapping,
    PolarityLabel,
    class_distribution,
    load_corpus,
    merge_corpora,
    save_corpus,
)
from .errors import EvaluationError, SentimatchError
from .metrics import RatingMatrix, classification_report, evaluate_agreement
from .profiles import FEATURE_ORDER, AnswerOption, KnowledgeBase, load_knowledge_base
from .recommender import (
    QuestionnaireAnswers,
    UserStatistics,
    auto_answers_from_corpus,
    recommend,
)
from .sampling import SampleSpec, min_sample_size, sample_with_minority_retention, stratified_sample
from .textstats import Dictionary, EmoticonLexicon, TokenizerConfig, corpus_statistics

#: Environment variable overriding the bundled knowledge-base path.
KB_ENV_VAR = "SENTIMATCH_KB"

_OPTION_LABELS: tuple[tuple[AnswerOption, str], ...] = (
    (AnswerOption.TRUE, "Fully true"),
    (AnswerOption.LIKELY, "More likely to be true"),
    (AnswerOption.UNLIKELY, "More unlikely to be true"),
    (AnswerOption.UNTRUE, "Not true at all"),
    (AnswerOption.NOT_SPECIFIED, "Not specified"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentimatch",
        description=(
            "Profile software-communication corpora and recommend the sentiment "
            "analysis tool that fits them best."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    profile = sub.add_parser("profile", help="compute corpus statistics and class distribution")
    profile.add_argument("corpus", nargs="+", help="corpus file(s), pooled in argument order")
    _add_corpus_flags(profile)
    _add_textstats_flags(profile)
    _add_format_flag(profile)

    sample = sub.add_parser("sample", help="draw a stratified random sample")
    sample.add_argument("corpus", nargs="+", help="corpus file(s), pooled in argument order")
    sample.add_argument(
        "--n",
        required=True,
        help="sample size, or 'auto' for the minimum representative size (95%% confidence, 5%% error)",
    )
    sample.add_argument("--seed", type=int, required=True, help="random seed (required, for reproducibility)")
    sample.add_argument(
        "--retain-class",
        choices=[label.value for label in PolarityLabel],
        help="keep every document of this class in addition to the proportional sample",
    )
    sample.add_argument("--output", help="output file (defaults to stdout, input format)")
    _add_corpus_flags(sample)

    evaluate = sub.add_parser("evaluate", help="score predictions against gold labels")
    evaluate.add_argument("--gold", required=True, help="gold corpus (id + label)")
    evaluate.add_argument("--pred", required=True, help="predictions corpus (id + label)")
    evaluate.add_argument("--corpus-format", choices=["csv", "jsonl"], help="force input format")
    _add_format_flag(evaluate)

    agreement = sub.add_parser("agreement", help="Fleiss' kappa over a ratings grid")
    agreement.add_argument(
        "ratings",
        help="CSV with a header row; first column is the item id, remaining columns one per rater",
    )
    _add_format_flag(agreement)

    rec = sub.add_parser("recommend", help="recommend platform and tools from questionnaire answers")
    rec.add_argument("--answers", help="answers JSON (L1..L13; optional 'statistics' object)")
    rec.add_argument("--stats", help="statistics JSON (overrides statistics embedded in --answers)")
    rec.add_argument("--corpus", help="corpus file to auto-compute statistics from")
    rec.add_argument("--corpus-format", choices=["csv", "jsonl"], help="force corpus format")
    _add_textstats_flags(rec)
    rec.add_argument(
        "--max-not-specified",
        type=int,
        default=len(FEATURE_ORDER) // 2,
        help="answers beyond this many 'not specified' make the result ambiguous (default 6)",
    )
    rec.add_argument("--kb", help=f"knowledge-base file (default: ${KB_ENV_VAR} or bundled)")
    _add_format_flag(rec)

    kb = sub.add_parser("kb", help="inspect the knowledge base")
    kb.add_argument("action", choices=["dump", "check"], help="dump derivations or run integrity checks")
    kb.add_argument("--kb", help=f"knowledge-base file (default: ${KB_ENV_VAR} or bundled)")
    _add_format_flag(kb)

    return parser


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus-format", choices=["csv", "jsonl"], help="force input format")
    parser.add_argument("--label-map", help="JSON file mapping raw label strings to polarity or 'drop'")
    parser.add_argument("--allow-empty-text", action="store_true", help="permit documents with empty text")
    parser.add_argument("--strip-markup", action="store_true", help="strip HTML tags and unescape entities")


def _add_textstats_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--keep-urls", action="store_true", help="let URLs produce word tokens")
    parser.add_argument("--keep-code-spans", action="store_true", help="let backtick code spans produce word tokens")
    parser.add_argument("--dictionary", help="word list for the spellchecker (default: bundled)")
    parser.add_argument("--emoticons", help="emoticon lexicon (default: bundled)")


def _add_format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=["json", "text"], default="json", help="output mode")


def _ingest_options(args: argparse.Namespace) -> IngestOptions:
    mapping = None
    if getattr(args, "label_map", None):
        with open(args.label_map, encoding="utf-8") as handle:
            mapping = LabelMapping.from_dict(json.load(handle))
    return IngestOptions(
        allow_empty_text=getattr(args, "allow_empty_text", False),
        strip_markup=getattr(args, "strip_markup", False),
        label_mapping=mapping,
    )


def _load_pooled(paths: Sequence[str], args: argparse.Namespace) -> tuple[Corpus, str]:
    options = _ingest_options(args)
    fmt = args.corpus_format or _format_of(paths[0])
    corpora = [load_corpus(path, format=fmt, options=options) for path in paths]
    return merge_corpora(corpora), fmt


def _format_of(path: str) -> str:
    suffix = Path(path).suffix.lower()
    if suffix == ".csv":
        return "csv"
    if suffix in (".jsonl", ".ndjson"):
        return "jsonl"
    raise SentimatchError(
        f"{path}: cannot infer corpus format from suffix {suffix!r}; pass --corpus-format"
    )


def _tokenizer_config(args: argparse.Namespace) -> TokenizerConfig:
    return TokenizerConfig(
        strip_urls=not getattr(args, "keep_urls", False),
        strip_code_spans=not getattr(args, "keep_code_spans", False),
    )


def _resolve_kb(args: argparse.Namespace) -> KnowledgeBase:
    path = getattr(args, "kb", None) or os.environ.get(KB_ENV_VAR) or None
    return load_knowledge_base(path)


def _emit(document: dict, args: argparse.Namespace, render_text) -> None:
    if args.format == "json":
        print(json.dumps(document, indent=2, ensure_ascii=False))
    else:
        print(render_text(document))


def _cmd_profile(args: argparse.Namespace) -> int:
    corpus, _ = _load_pooled(args.corpus, args)
    dictionary = Dictionary.from_file(args.dictionary) if args.dictionary else None
    lexicon = EmoticonLexicon.from_file(args.emoticons) if args.emoticons else None
    stats = corpus_statistics(corpus, dictionary, lexicon, _tokenizer_config(args))
    distribution = class_distribution(corpus)
    document = {
        "documents": len(corpus),
        "class_distribution": distribution.to_dict(),
        "min_sample_size": min_sample_size(SampleSpec(population_size=len(corpus))),
        "statistics": stats.to_dict(),
    }
    _emit(document, args, _render_profile)
    return 0


def _render_profile(doc: dict) -> str:
    lines = [f"documents: {doc['documents']}"]
    dist = doc["class_distribution"]
    lines.append(
        "classes: "
        + ", ".join(f"{k} {dist[k]}" for k in ("negative", "neutral", "positive", "unlabeled"))
    )
    lines.append(f"min sample size (95%/5%): {doc['min_sample_size']}")
    for name, value in doc["statistics"].items():
        lines.append(f"{name}: {value:.4f}")
    return "\n".join(lines)


def _cmd_sample(args: argparse.Namespace) -> int:
    corpus, fmt = _load_pooled(args.corpus, args)
    if args.n == "auto":
        n = min_sample_size(SampleSpec(population_size=len(corpus)))
    else:
        try:
            n = int(args.n)
        except ValueError:
            raise SentimatchError(f"--n must be an integer or 'auto', got {args.n!r}") from None
    if args.retain_class:
        sampled = sample_with_minority_retention(
            corpus, n, PolarityLabel(args.retain_class), args.seed
        )
    else:
        sampled = stratified_sample(corpus, n, args.seed)
    if args.output:
        save_corpus(sampled, args.output, format=fmt)
        print(f"wrote {len(sampled)} documents to {args.output}", file=sys.stderr)
    else:
        _write_corpus_stdout(sampled, fmt)
    return 0


def _write_corpus_stdout(corpus: Corpus, fmt: str) -> None:
    import csv as _csv

    if fmt == "jsonl":
        for doc in corpus:
            obj = {"id": doc.id, "text": doc.text}
            label = doc.label.value if isinstance(doc.label, PolarityLabel) else doc.label
            if label is not None:
                obj["label"] = label
            print(json.dumps(obj, ensure_ascii=False))
    else:
        writer = _csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["id", "text", "label"])
        for doc in corpus:
            label = doc.label.value if isinstance(doc.label, PolarityLabel) else doc.label
            writer.writerow([doc.id, doc.text, label or ""])


def _read_label_file(path: str, fmt: str | None) -> dict[str, PolarityLabel]:
    """Read an id -> polarity mapping from a CSV/JSONL file.

    Unlike corpus loading this accepts files without a text column: only
    ``label`` is required, ``id`` defaults to the zero-padded record index.
    """
    import csv as _csv

    fmt = fmt or _format_of(path)
    records: list[tuple[int, str | None, str | None]] = []  # (row, id, label)
    if fmt == "csv":
        with open(path, encoding="utf-8-sig", newline="") as handle:
            reader = _csv.DictReader(handle)
            if reader.fieldnames is not None and "label" not in reader.fieldnames:
                raise EvaluationError(f"{path}: CSV header must contain a 'label' column")
            for row_number, row in enumerate(reader, start=2):
                records.append((row_number, row.get("id") or None, row.get("label") or None))
    else:
        with open(path, encoding="utf-8") as handle:
            for line_number, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise EvaluationError(f"{path}: line {line_number}: invalid JSON: {exc}") from exc
                raw_id = obj.get("id")
                records.append(
                    (
                        line_number,
                        str(raw_id) if raw_id not in (None, "") else None,
                        obj.get("label") or None,
                    )
                )

    width = max(1, len(str(max(len(records) - 1, 0))))
    labels: dict[str, PolarityLabel] = {}
    for index, (row, raw_id, raw_label) in enumerate(records):
        if raw_label is None:
            raise EvaluationError(f"{path}: row {row}: document has no polarity label")
        try:
            label = PolarityLabel(raw_label)
        except ValueError:
            raise EvaluationError(
                f"{path}: row {row}: {raw_label!r} is not a polarity label"
            ) from None
        doc_id = raw_id if raw_id is not None else f"{index:0{width}d}"
        if doc_id in labels:
            raise EvaluationError(f"{path}: row {row}: duplicate document id {doc_id!r}")
        labels[doc_id] = label
    if not labels:
        raise EvaluationError(f"{path}: no labeled records found")
    return labels


def _cmd_evaluate(args: argparse.Namespace) -> int:
    gold_by_id = _read_label_file(args.gold, args.corpus_format)
    pred_by_id = _read_label_file(args.pred, args.corpus_format)
    missing_pred = sorted(set(gold_by_id) - set(pred_by_id))
    missing_gold = sorted(set(pred_by_id) - set(gold_by_id))
    if missing_pred or missing_gold:
        raise EvaluationError(
            f"id mismatch between gold and predictions: "
            f"missing from predictions {missing_pred[:5]}, missing from gold {missing_gold[:5]}"
        )
    ids = list(gold_by_id)  # gold file order
    gold_labels = [gold_by_id[doc_id] for doc_id in ids]
    pred_labels = [pred_by_id[doc_id] for doc_id in ids]
    report = classification_report(gold_labels, pred_labels)
    document = {"documents": len(ids), **report.to_dict()}
    _emit(document, args, _render_report)
    return 0


def _render_report(doc: dict) -> str:
    lines = [f"documents: {doc['documents']}"]
    for label, metrics in doc["per_class"].items():
        lines.append(
            f"{label}: precision {metrics['precision']:.4f}, recall {metrics['recall']:.4f}, "
            f"f1 {metrics['f1']:.4f} (support {metrics['support']})"
        )
    lines.append(f"micro f1: {doc['micro_f1']:.4f}")
    lines.append(f"macro f1: {doc['macro_f1']:.4f}")
    lines.append(f"overall score: {doc['overall_score']:.4f}")
    return "\n".join(lines)


def _cmd_agreement(args: argparse.Namespace) -> int:
    import csv as _csv

    with open(args.ratings, encoding="utf-8-sig", newline="") as handle:
        reader = _csv.reader(handle)
        rows = [row for row in reader if row]
    if len(rows) < 2:
        raise EvaluationError(f"{args.ratings}: need a header row and at least one item row")
    header = rows[0]
    if len(header) < 3:
        raise EvaluationError(f"{args.ratings}: need at least 2 rater columns after the item column")
    label_rows = [row[1:] for row in rows[1:]]
    matrix = RatingMatrix.from_label_rows(label_rows)
    result = evaluate_agreement(matrix)
    document = {
        "items": matrix.items,
        "raters": matrix.raters,
        **result.to_dict(),
    }
    _emit(document, args, _render_agreement)
    return 0


def _render_agreement(doc: dict) -> str:
    kappa = "undefined" if doc["kappa"] is None else f"{doc['kappa']:.4f}"
    return (
        f"items: {doc['items']}\nraters: {doc['raters']}\nkappa: {kappa}\n"
        f"raw agreement: {doc['raw_agreement']:.4f}\ninterpretation: {doc['interpretation']}"
    )


def _load_answers_file(path: str) -> tuple[QuestionnaireAnswers, UserStatistics | None]:
    with open(path, encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, dict):
        raise SentimatchError(f"{path}: answers file must be a JSON object")
    stats_raw = raw.pop("statistics", None)
    answers = QuestionnaireAnswers.from_dict(raw)
    stats = None
    if stats_raw is not None:
        if not isinstance(stats_raw, dict):
            raise SentimatchError(f"{path}: 'statistics' must be an object")
        stats = UserStatistics(values={str(k): float(v) for k, v in stats_raw.items()})
    return answers, stats


def _cmd_recommend(args: argparse.Namespace) -> int:
    stats: UserStatistics | None = None
    if args.answers:
        answers, stats = _load_answers_file(args.answers)
    else:
        if not sys.stdin.isatty():
            build_parser().error(
                "recommend needs --answers when not run on an interactive terminal"
            )
        result = wizard()
        if result is None:
            print("aborted", file=sys.stderr)
            return 2
        answers = result
    if args.stats:
        with open(args.stats, encoding="utf-8") as handle:
            stats = UserStatistics(
                values={str(k): float(v) for k, v in json.load(handle).items()}
            )
    elif args.corpus:
        corpus = load_corpus(
            args.corpus, format=args.corpus_format, options=IngestOptions(keep_raw_labels=True)
        )
        dictionary = Dictionary.from_file(args.dictionary) if args.dictionary else None
        lexicon = EmoticonLexicon.from_file(args.emoticons) if args.emoticons else None
        stats = auto_answers_from_corpus(corpus, dictionary, lexicon, _tokenizer_config(args))
    kb = _resolve_kb(args)
    recommendation = recommend(answers, kb, stats, max_not_specified=args.max_not_specified)
    _emit(recommendation.to_dict(), args, _render_recommendation)
    return 0


def _render_recommendation(doc: dict) -> str:
    lines = []
    points = doc["scoreboard"]["points"]
    lines.append("scores: " + ", ".join(f"{name} {points[name]}" for name in points))
    lines.append(f"ambiguous points: {doc['scoreboard']['ambiguous_points']}")
    if doc["ambiguous"]:
        lines.append(f"result: ambiguous ({doc['reason']})")
        lines.append("recommended tools: " + ", ".join(doc["fallback_tools"]))
    else:
        lines.append(f"result: {', '.join(doc['platforms'])} ({doc['reason']})")
        for platform in doc["platforms"]:
            lines.append(f"tools for {platform}: " + ", ".join(doc["tools"][platform]))
    return "\n".join(lines)


def _cmd_kb(args: argparse.Namespace) -> int:
    kb = _resolve_kb(args)
    if args.action == "check":
        document = {
            "schema_version": kb.schema_version,
            "performance_records": len(kb.performance),
            "integrity": kb.integrity.to_dict(),
            "ok": True,
        }
        _emit(document, args, _render_kb_check)
        return 0
    document = {
        "schema_version": kb.schema_version,
        "features": {
            f.value: {"name": info.name, "description": info.description}
            for f, info in kb.features.items()
        },
        "interval_mapping": kb.mapping.to_dict(),
        "best_tools": {p.value: list(tools) for p, tools in kb.best_tools().items()},
        "fallback_tools": list(kb.fallback_tools),
        "known_anomalies": [
            {"tool": tool, "dataset": dataset} for tool, dataset in sorted(kb.known_anomalies)
        ],
    }
    _emit(document, args, _render_kb_dump)
    return 0


def _render_kb_check(doc: dict) -> str:
    lines = [
        f"schema version: {doc['schema_version']}",
        f"performance records: {doc['performance_records']}",
        "checks run: " + ", ".join(doc["integrity"]["checks_run"]),
    ]
    flagged = doc["integrity"]["flagged_cells"]
    if flagged:
        lines.append("documented inconsistent cells:")
        lines.extend(f"  {cell['tool']} / {cell['dataset']}" for cell in flagged)
    lines.append("ok")
    return "\n".join(lines)


def _render_kb_dump(doc: dict) -> str:
    lines = [f"schema version: {doc['schema_version']}", "", "interval mapping:"]
    for fid, row in doc["interval_mapping"].items():
        cells = "; ".join(f"{option}: {', '.join(platforms)}" for option, platforms in row.items())
        lines.append(f"  {fid}: {cells}")
    lines.append("")
    lines.append("best tools per platform:")
    lines.extend(f"  {platform}: {', '.join(tools)}" for platform, tools in doc["best_tools"].items())
    lines.append("fallback tools: " + ", ".join(doc["fallback_tools"]))
    return "\n".join(lines)


def _questions() -> dict[str, str]:
    text = (resources.files("sentimatch") / "data" / "questions.json").read_text(encoding="utf-8")
    return json.loads(text)


def wizard(
    input_stream: IO[str] | None = None, output: IO[str] | None = None
) -> QuestionnaireAnswers | None:
    """Interactive questionnaire: thirteen questions, five options each.

    Supports going back ('b') and reviewing before submitting; returns None on
    abort ('q'). Prompts are written to ``output`` (stderr by default) so
    stdout stays reserved for the final JSON document.
    """
    stream = input_stream if input_stream is not None else sys.stdin
    out = output if output is not None else sys.stderr

    def say(text: str = "") -> None:
        print(text, file=out)

    def ask(prompt: str) -> str | None:
        print(prompt, end="", file=out, flush=True)
        line = stream.readline()
        if not line:
            return None  # EOF behaves like abort
        return line.strip()

    questions = _questions()
    answers: dict[str, AnswerOption] = {}
    say("Answer 13 statements about your dataset.")
    say("Reply with a number, 'b' to go back, or 'q' to abort.")
    index = 0
    while index < len(FEATURE_ORDER):
        feature = FEATURE_ORDER[index]
        say()
        say(f"[{index + 1}/13] {questions[feature.value]}")
        for number, (_, label) in enumerate(_OPTION_LABELS, start=1):
            say(f"  {number}) {label}")
        reply = ask("> ")
        if reply is None or reply.lower() == "q":
            return None
        if reply.lower() == "b":
            index = max(0, index - 1)
            continue
        if reply in {"1", "2", "3", "4", "5"}:
            answers[feature.value] = _OPTION_LABELS[int(reply) - 1][0]
            index += 1
        else:
            say("Please answer 1-5, 'b' or 'q'.")
    while True:
        say()
        say("Your answers:")
        labels = dict(_OPTION_LABELS)
        for feature in FEATURE_ORDER:
            say(f"  {feature.value}: {labels[answers[feature.value]]}")
        reply = ask("Submit? (y = submit, b = back to the last question, q = abort) ")
        if reply is None or reply.lower() == "q":
            return None
        if reply.lower() == "y":
            return QuestionnaireAnswers.from_dict(answers)
        if reply.lower() == "b":
            # re-ask the last question, then return to review
            feature = FEATURE_ORDER[-1]
            say()
            say(f"[13/13] {questions[feature.value]}")
            for number, (_, label) in enumerate(_OPTION_LABELS, start=1):
                say(f"  {number}) {label}")
            reply = ask("> ")
            if reply is None or reply.lower() == "q":
                return None
            if reply in {"1", "2", "3", "4", "5"}:
                answers[feature.value] = _OPTION_LABELS[int(reply) - 1][0]


_COMMANDS = {
    "profile": _cmd_profile,
    "sample": _cmd_sample,
    "evaluate": _cmd_evaluate,
    "agreement": _cmd_agreement,
    "recommend": _cmd_recommend,
    "kb": _cmd_kb,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SentimatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
