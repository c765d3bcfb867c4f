"""Command-line pipeline over appraisal corpora.

Subcommands: stats, classify, attributes, cluster, summarize, evaluate.
Every subcommand validates the config first, writes deterministic JSON or
JSONL artifacts into the output directory, and exits 0 on success
(1 usage error, 2 data/config error, 3 internal error).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import attributes as attr_mod
from . import classify as clf_mod
from . import clustering, corpus, evaluation, summarizer
from .config import ConfigError, PipelineConfig, load_config
from .nlp import Tagger, default_tagger, tag_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="pamine", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def common(p):
        p.add_argument("--config", help="TOML config file path")
        p.add_argument("--out", help="output directory (default from config)")
        p.add_argument("--seed", type=int, help="override the config seed")

    def corpus_args(p):
        p.add_argument("--corpus", required=True, help="corpus file")
        p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")

    p = sub.add_parser("stats", help="corpus statistics")
    common(p)
    corpus_args(p)

    p = sub.add_parser("classify", help="classify supervisor sentences")
    common(p)
    corpus_args(p)
    p.add_argument("--mode", choices=("pattern", "nb", "lr"), default="pattern")
    p.add_argument("--train", help="labelled JSONL ({'text','class'} lines); "
                                   "without it, nb/lr self-train on pattern labels")
    p.add_argument("--folds", type=int,
                   help="run cross-validation on --train data instead of labelling")

    p = sub.add_parser("attributes", help="map supervisor sentences to attributes")
    common(p)
    corpus_args(p)
    p.add_argument("--mode", choices=("pattern", "lr"), default="pattern")
    p.add_argument("--train", help="labelled JSONL ({'text','attributes'} lines)")

    p = sub.add_parser("cluster", help="cluster strength/weakness nouns")
    common(p)
    corpus_args(p)
    p.add_argument("--sentence-class", dest="sentence_class",
                   choices=("strength", "weakness", "suggestion",
                            "weakness_suggestion"),
                   default="strength")

    p = sub.add_parser("summarize", help="ILP phrase summaries of peer feedback")
    common(p)
    corpus_args(p)

    p = sub.add_parser("evaluate", help="compare system summaries against gold")
    common(p)
    p.add_argument("--gold", required=True,
                   help="gold JSONL ({'employee_id','summary'} lines)")
    p.add_argument("--system", action="append", default=[],
                   metavar="NAME=PATH", help="system summaries (repeatable)")

    return parser


def _resolve_config(args) -> PipelineConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = dataclasses.replace(cfg, output_dir=Path(args.out))
    return cfg


def _tagger_for(cfg: PipelineConfig) -> Tagger:
    default_path = PipelineConfig.default().tag_lexicon
    if Path(cfg.tag_lexicon) == default_path:
        return default_tagger()
    return Tagger.from_file(cfg.tag_lexicon)


def _out_path(cfg: PipelineConfig, name: str) -> Path:
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / name


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def _write_jsonl(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def _abbreviations(cfg: PipelineConfig) -> frozenset[str]:
    return frozenset(corpus.load_abbreviations(cfg.abbreviations))


def _supervisor_sentences(cfg: PipelineConfig, args):
    records = corpus.load_records(args.corpus, args.format)
    abbrevs = _abbreviations(cfg)
    sentences = [s for s in corpus.sentence_records(records, abbrevs)
                 if s.source == corpus.SUPERVISOR]
    return records, sentences


def _load_class_train(path: str) -> list:
    tagger = default_tagger()
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            row = json.loads(line)
            try:
                cls = clf_mod.SentenceClass[row["class"]]
                text = row["text"]
            except KeyError as exc:
                raise corpus.CorpusError(f"{path}:{lineno}: missing/unknown {exc}")
            out.append((tag_text(text, tagger), cls))
    return out


def _load_attr_train(path: str) -> list:
    tagger = default_tagger()
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            row = json.loads(line)
            try:
                labels = {attr_mod.Attribute[name] for name in row["attributes"]}
                text = row["text"]
            except KeyError as exc:
                raise corpus.CorpusError(f"{path}:{lineno}: missing/unknown {exc}")
            out.append((tag_text(text, tagger), labels))
    return out


def _load_summaries(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            row = json.loads(line)
            if "employee_id" not in row or "summary" not in row:
                raise corpus.CorpusError(
                    f"{path}:{lineno}: expected employee_id and summary fields")
            if row["employee_id"] in out:
                raise corpus.CorpusError(
                    f"{path}:{lineno}: duplicate employee_id {row['employee_id']!r}")
            out[row["employee_id"]] = row["summary"]
    return out


def _cmd_stats(cfg: PipelineConfig, args) -> None:
    records = corpus.load_records(args.corpus, args.format)
    abbrevs = _abbreviations(cfg)
    sentences = corpus.sentence_records(records, abbrevs)
    by_source = {
        "supervisor": [s for s in sentences if s.source == corpus.SUPERVISOR],
        "peer": [s for s in sentences if s.source == corpus.PEER],
        "all": sentences,
    }
    payload = {"records": len(records)}
    for name, sents in by_source.items():
        payload[name] = corpus.corpus_stats(sents).as_dict() if sents else None
    _write_json(_out_path(cfg, "corpus_stats.json"), payload)


def _cmd_classify(cfg: PipelineConfig, args) -> None:
    tagger = _tagger_for(cfg)
    rules = clf_mod.load_rules(cfg.class_rules)
    train_kwargs = dict(l2=cfg.l2, learning_rate=cfg.learning_rate,
                        max_epochs=cfg.max_epochs, tol=cfg.tol)

    if args.folds is not None:
        if not args.train:
            raise ConfigError("--folds requires --train data")
        labelled = _load_class_train(args.train)
        report = clf_mod.crossvalidate(labelled, args.mode, args.folds,
                                       seed=cfg.seed, **train_kwargs)
        payload = {
            "mode": args.mode, "folds": report.folds, "n": report.n,
            "seed": cfg.seed, "accuracy": report.accuracy,
            "per_class": {
                cls.name: {"precision": m.precision, "recall": m.recall,
                           "f1": m.f1, "support": m.support}
                for cls, m in report.per_class.items()
            },
        }
        _write_json(_out_path(cfg, "cv_metrics.json"), payload)
        return

    _, sentences = _supervisor_sentences(cfg, args)
    tagged = [tag_text(s.text, tagger) for s in sentences]
    if args.mode == "pattern":
        labels = [clf_mod.classify_pattern(t, rules) for t in tagged]
    else:
        if args.train:
            labelled = _load_class_train(args.train)
        else:
            labelled = [(t, clf_mod.classify_pattern(t, rules)) for t in tagged]
        model = clf_mod.train_bow(labelled, args.mode, **train_kwargs)
        labels = [clf_mod.predict_bow(model, t) for t in tagged]
    rows = [
        {"employee_id": s.employee_id, "source": s.source, "peer_id": s.peer_id,
         "index": s.index, "sentence": s.text, "class": cls.name}
        for s, cls in zip(sentences, labels)
    ]
    _write_jsonl(_out_path(cfg, "classified.jsonl"), rows)


def _cmd_attributes(cfg: PipelineConfig, args) -> None:
    tagger = _tagger_for(cfg)
    rules = clf_mod.load_rules(cfg.class_rules)
    _, sentences = _supervisor_sentences(cfg, args)
    tagged = [tag_text(s.text, tagger) for s in sentences]
    classes = [clf_mod.classify_pattern(t, rules) for t in tagged]
    if args.mode == "pattern":
        matcher = attr_mod.load_attribute_cues(cfg.attribute_cues)
        predicted = [matcher.match(t) for t in tagged]
    else:
        if not args.train:
            raise ConfigError("attribute mode 'lr' requires --train data")
        labelled = _load_attr_train(args.train)
        model = attr_mod.train_ovr(
            labelled, threshold=cfg.threshold, l2=cfg.l2,
            learning_rate=cfg.learning_rate, max_epochs=cfg.max_epochs,
            tol=cfg.tol)
        predicted = [attr_mod.predict_attributes(model, t) for t in tagged]
    rows = [
        {"employee_id": s.employee_id, "sentence": s.text, "class": cls.name,
         "attributes": [a.name for a in sorted(attrs, key=lambda a: a.value)]}
        for s, cls, attrs in zip(sentences, classes, predicted)
    ]
    _write_jsonl(_out_path(cfg, "attributes.jsonl"), rows)


_CLASS_FILTERS = {
    "strength": {clf_mod.SentenceClass.STRENGTH},
    "weakness": {clf_mod.SentenceClass.WEAKNESS},
    "suggestion": {clf_mod.SentenceClass.SUGGESTION},
    "weakness_suggestion": {clf_mod.SentenceClass.WEAKNESS,
                            clf_mod.SentenceClass.SUGGESTION},
}


def _cmd_cluster(cfg: PipelineConfig, args) -> None:
    if cfg.embeddings is None:
        raise ConfigError("clustering needs an 'embeddings' path in the config")
    tagger = _tagger_for(cfg)
    rules = clf_mod.load_rules(cfg.class_rules)
    stopwords = frozenset(clustering.load_stopwords(cfg.stopwords))
    _, sentences = _supervisor_sentences(cfg, args)
    classified = [
        (tagged, clf_mod.classify_pattern(tagged, rules))
        for tagged in (tag_text(s.text, tagger) for s in sentences)
    ]
    nouns = clustering.extract_nouns(classified, _CLASS_FILTERS[args.sentence_class],
                                     stopwords)
    table = clustering.load_embeddings(cfg.embeddings)
    clusters = clustering.cluster_nouns(nouns, table, tau=cfg.tau)
    payload = [
        {"label": c.label, "count": c.count,
         "members": [[noun, freq] for noun, freq in c.members],
         "oov": c.oov}
        for c in clusters
    ]
    _write_json(_out_path(cfg, f"clusters_{args.sentence_class}.json"), payload)


def _cmd_summarize(cfg: PipelineConfig, args) -> None:
    tagger = _tagger_for(cfg)
    abbrevs = _abbreviations(cfg)
    resources = summarizer.SummarizerResources(
        noun_attribute=summarizer.load_noun_attribute(cfg.noun_attribute),
        type_lexicons=summarizer.load_type_lexicons(cfg.type_lexicon_dir),
    )
    records = corpus.load_records(args.corpus, args.format)
    rows = []
    for record in records:
        result = summarizer.summarize(record, resources, tagger, abbrevs)
        row = {
            "employee_id": result.employee_id,
            "k": result.k,
            "n_candidates": result.n_candidates,
            "phrases": list(result.phrases),
            "objective": result.objective_value,
            "slacks": result.selection.slacks() if result.selection else {},
        }
        if result.diagnostic:
            row["diagnostic"] = result.diagnostic
        rows.append(row)
    _write_jsonl(_out_path(cfg, "summaries.jsonl"), rows)


def _cmd_evaluate(cfg: PipelineConfig, args) -> None:
    if not args.system:
        raise ConfigError("evaluate needs at least one --system NAME=PATH")
    gold = _load_summaries(args.gold)
    systems = {}
    for item in args.system:
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            raise ConfigError(f"--system expects NAME=PATH, got {item!r}")
        systems[name] = _load_summaries(path)
    report = evaluation.compare_systems(
        gold, systems, alpha=cfg.alpha,
        notes={"baseline_sentence_count_rule": "ceil(K/3)"})
    _write_json(_out_path(cfg, "evaluation.json"), report.as_dict())


_COMMANDS = {
    "stats": _cmd_stats,
    "classify": _cmd_classify,
    "attributes": _cmd_attributes,
    "cluster": _cmd_cluster,
    "summarize": _cmd_summarize,
    "evaluate": _cmd_evaluate,
}

_DATA_ERRORS = (ConfigError, corpus.CorpusError, clustering.EmbeddingError,
                clf_mod.TrainingError, attr_mod.MetricError,
                json.JSONDecodeError, ValueError, OSError)


def _module_of(exc: Exception) -> str:
    return type(exc).__module__.rsplit(".", 1)[-1]


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"pamine: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _resolve_config(args)
        _COMMANDS[args.command](cfg, args)
        return EXIT_OK
    except _DATA_ERRORS as exc:
        print(f"pamine: error [{_module_of(exc)}]: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(f"pamine: internal error [{_module_of(exc)}]: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
