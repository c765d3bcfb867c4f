"""Sentence classification into STRENGTH / WEAKNESS / SUGGESTION / OTHER.

Two routes: an unsupervised pattern classifier driven by editable keyword
and POS-sequence rule files, and trainable bag-of-words models (multinomial
naive Bayes, one-vs-rest logistic regression) with stratified
cross-validation.
"""
from __future__ import annotations

import json
import random
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import _linear
from .data import data_path
from .nlp import TaggedSentence

MODEL_FORMAT_VERSION = 1


class SentenceClass(Enum):
    STRENGTH = 0
    WEAKNESS = 1
    SUGGESTION = 2
    OTHER = 3


class ModelKind(str, Enum):
    MULTINOMIAL_NB = "nb"
    LOGISTIC_REGRESSION = "lr"


DEFAULT_TIE_BREAK = (SentenceClass.SUGGESTION, SentenceClass.WEAKNESS,
                     SentenceClass.STRENGTH, SentenceClass.OTHER)


class TrainingError(ValueError):
    """Raised for degenerate training inputs."""


@dataclass(frozen=True)
class PosPattern:
    """Consecutive POS-tag pattern; '^' anchors at sentence start, a
    trailing '*' on a tag matches by prefix."""
    tags: tuple[str, ...]
    anchored: bool = False

    @classmethod
    def parse(cls, pattern: str) -> "PosPattern":
        text = pattern.strip()
        anchored = text.startswith("^")
        if anchored:
            text = text[1:].strip()
        tags = tuple(text.split())
        if not tags:
            raise ValueError(f"empty POS pattern: {pattern!r}")
        return cls(tags=tags, anchored=anchored)

    def _matches_at(self, tags: tuple[str, ...], start: int) -> bool:
        if start + len(self.tags) > len(tags):
            return False
        for offset, want in enumerate(self.tags):
            got = tags[start + offset]
            if want.endswith("*"):
                if not got.startswith(want[:-1]):
                    return False
            elif got != want:
                return False
        return True

    def matches(self, tags: tuple[str, ...]) -> bool:
        if self.anchored:
            return self._matches_at(tags, 0)
        return any(self._matches_at(tags, i) for i in range(len(tags)))


class PatternRuleSet:
    """Per-class keyword phrases and POS patterns with a tie-break order."""

    def __init__(self, keywords: dict[SentenceClass, list[str]],
                 pos_patterns: dict[SentenceClass, list[PosPattern]],
                 tie_break: tuple[SentenceClass, ...] = DEFAULT_TIE_BREAK):
        if set(tie_break) != set(SentenceClass):
            raise ValueError("tie_break must order all four classes")
        self.keywords = {c: tuple(keywords.get(c, ())) for c in SentenceClass}
        self.pos_patterns = {c: tuple(pos_patterns.get(c, ())) for c in SentenceClass}
        self.tie_break = tie_break
        self._keyword_regex = {
            cls: [re.compile(r"(?<!\w)" + re.escape(kw.lower()) + r"(?!\w)")
                  for kw in kws]
            for cls, kws in self.keywords.items()
        }

    def matching_classes(self, sentence: TaggedSentence) -> list[SentenceClass]:
        text = sentence.text.strip().lower()
        tags = sentence.tags
        matched = []
        for cls in SentenceClass:
            if cls is SentenceClass.OTHER:
                continue
            if any(rx.search(text) for rx in self._keyword_regex[cls]) or \
                    any(p.matches(tags) for p in self.pos_patterns[cls]):
                matched.append(cls)
        return matched


def load_rules(path: str | Path | None = None,
               tie_break: tuple[SentenceClass, ...] = DEFAULT_TIE_BREAK) -> PatternRuleSet:
    """Load a ``class<TAB>kind<TAB>pattern`` rule file."""
    path = Path(path) if path is not None else data_path("class_rules.tsv")
    keywords: dict[SentenceClass, list[str]] = {}
    pos_patterns: dict[SentenceClass, list[PosPattern]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected class<TAB>kind<TAB>pattern")
            cls_name, kind, pattern = parts
            try:
                cls = SentenceClass[cls_name.strip()]
            except KeyError as exc:
                raise ValueError(f"{path}:{lineno}: unknown class {cls_name!r}") from exc
            if kind == "keyword":
                keywords.setdefault(cls, []).append(pattern.strip())
            elif kind == "posseq":
                pos_patterns.setdefault(cls, []).append(PosPattern.parse(pattern))
            else:
                raise ValueError(f"{path}:{lineno}: unknown rule kind {kind!r}")
    return PatternRuleSet(keywords, pos_patterns, tie_break)


@lru_cache(maxsize=1)
def default_rules() -> PatternRuleSet:
    return load_rules()


def classify_pattern(sentence: TaggedSentence,
                     rules: PatternRuleSet | None = None) -> SentenceClass:
    """Unsupervised pattern classification with tie-breaking."""
    rules = rules or default_rules()
    matched = rules.matching_classes(sentence)
    if not matched:
        return SentenceClass.OTHER
    if len(matched) == 1:
        return matched[0]
    for cls in rules.tie_break:
        if cls in matched:
            return cls
    return SentenceClass.OTHER  # unreachable: tie_break covers all classes


@dataclass
class BowModel:
    kind: ModelKind
    classes: tuple[SentenceClass, ...]
    vocabulary: dict[str, int]
    class_log_prior: np.ndarray | None = None    # NB, shape (C,)
    feature_log_prob: np.ndarray | None = None   # NB, shape (C, V)
    weights: np.ndarray | None = None            # LR, shape (C, V)
    intercepts: np.ndarray | None = None         # LR, shape (C,)
    hyperparams: dict | None = None

    def to_json(self) -> str:
        payload = {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": self.kind.value,
            "classes": [c.name for c in self.classes],
            "vocabulary": self.vocabulary,
            "hyperparams": self.hyperparams or {},
        }
        if self.kind is ModelKind.MULTINOMIAL_NB:
            payload["class_log_prior"] = self.class_log_prior.tolist()
            payload["feature_log_prob"] = self.feature_log_prob.tolist()
        else:
            payload["weights"] = self.weights.tolist()
            payload["intercepts"] = self.intercepts.tolist()
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "BowModel":
        payload = json.loads(text)
        version = payload.get("format_version")
        if version != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format version {version!r}")
        kind = ModelKind(payload["kind"])
        model = cls(
            kind=kind,
            classes=tuple(SentenceClass[name] for name in payload["classes"]),
            vocabulary={k: int(v) for k, v in payload["vocabulary"].items()},
            hyperparams=payload.get("hyperparams") or {},
        )
        if kind is ModelKind.MULTINOMIAL_NB:
            model.class_log_prior = np.array(payload["class_log_prior"])
            model.feature_log_prob = np.array(payload["feature_log_prob"])
        else:
            model.weights = np.array(payload["weights"])
            model.intercepts = np.array(payload["intercepts"])
        return model


def _present_classes(labels) -> tuple[SentenceClass, ...]:
    present = set(labels)
    return tuple(c for c in SentenceClass if c in present)


def train_bow(labelled, kind: ModelKind | str = ModelKind.MULTINOMIAL_NB,
              l2: float = _linear.L2_STRENGTH,
              learning_rate: float = _linear.LEARNING_RATE,
              max_epochs: int = _linear.MAX_EPOCHS,
              tol: float = _linear.TOL) -> BowModel:
    """Train a bag-of-words sentence classifier.

    NB uses add-one smoothed multinomial estimates; LR trains one-vs-rest
    binary models by batch gradient descent. Both are deterministic for a
    fixed dataset order.
    """
    kind = ModelKind(kind)
    if not labelled:
        raise TrainingError("empty training set")
    sentences = [s for s, _ in labelled]
    labels = [c for _, c in labelled]
    classes = _present_classes(labels)
    if len(classes) < 2:
        raise TrainingError("training needs at least two classes")
    token_lists = [_linear.sentence_tokens(s) for s in sentences]
    vocabulary = _linear.build_vocabulary(token_lists)
    if not vocabulary:
        raise TrainingError("empty vocabulary: no tokens in training data")

    if kind is ModelKind.MULTINOMIAL_NB:
        n_classes, n_vocab = len(classes), len(vocabulary)
        counts = np.zeros((n_classes, n_vocab))
        class_counts = np.zeros(n_classes)
        class_index = {c: i for i, c in enumerate(classes)}
        for tokens, label in zip(token_lists, labels):
            ci = class_index[label]
            class_counts[ci] += 1
            for tok, cnt in Counter(tokens).items():
                counts[ci, vocabulary[tok]] += cnt
        prior = np.log(class_counts / class_counts.sum())
        totals = counts.sum(axis=1, keepdims=True)
        log_prob = np.log((counts + 1.0) / (totals + n_vocab))
        return BowModel(
            kind=kind, classes=classes, vocabulary=vocabulary,
            class_log_prior=prior, feature_log_prob=log_prob,
            hyperparams={"smoothing": 1.0},
        )

    X = _linear.count_matrix(token_lists, vocabulary)
    weights = np.zeros((len(classes), len(vocabulary)))
    intercepts = np.zeros(len(classes))
    for ci, cls in enumerate(classes):
        y = np.array([1.0 if label is cls else 0.0 for label in labels])
        weights[ci], intercepts[ci] = _linear.fit_binary_lr(
            X, y, l2=l2, learning_rate=learning_rate,
            max_epochs=max_epochs, tol=tol)
    return BowModel(
        kind=kind, classes=classes, vocabulary=vocabulary,
        weights=weights, intercepts=intercepts,
        hyperparams={"l2": l2, "learning_rate": learning_rate,
                     "max_epochs": max_epochs, "tol": tol},
    )


def predict_bow(model: BowModel, sentence: TaggedSentence) -> SentenceClass:
    """Argmax class; ties go to the earliest class in enum order."""
    vec = _linear.count_vector(_linear.sentence_tokens(sentence), model.vocabulary)
    if model.kind is ModelKind.MULTINOMIAL_NB:
        scores = model.class_log_prior + model.feature_log_prob @ vec
    else:
        scores = model.weights @ vec + model.intercepts
    return model.classes[int(np.argmax(scores))]


def prf_counts(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    """Precision/recall/F1 from pooled counts (0 where undefined)."""
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class CvReport:
    accuracy: float
    per_class: dict[SentenceClass, ClassMetrics]
    folds: int
    n: int


def stratified_folds(labels, folds: int, seed: int) -> list[int]:
    """Fold id per instance: per-class shuffle under seed, dealt round-robin."""
    rng = random.Random(seed)
    fold_of = [0] * len(labels)
    for cls in sorted({*labels}, key=lambda c: c.value):
        idxs = [i for i, label in enumerate(labels) if label is cls]
        rng.shuffle(idxs)
        for pos, i in enumerate(idxs):
            fold_of[i] = pos % folds
    return fold_of


def crossvalidate(labelled, kind: ModelKind | str, folds: int, seed: int = 42,
                  **train_kwargs) -> CvReport:
    """Stratified k-fold cross-validation with pooled-prediction metrics."""
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if folds > len(labelled):
        raise ValueError(f"folds={folds} exceeds dataset size {len(labelled)}")
    labels = [c for _, c in labelled]
    fold_of = stratified_folds(labels, folds, seed)
    predictions: list[SentenceClass | None] = [None] * len(labelled)
    for fold in range(folds):
        train = [labelled[i] for i in range(len(labelled)) if fold_of[i] != fold]
        test_idx = [i for i in range(len(labelled)) if fold_of[i] == fold]
        if not test_idx:
            continue
        model = train_bow(train, kind, **train_kwargs)
        for i in test_idx:
            predictions[i] = predict_bow(model, labelled[i][0])

    correct = sum(1 for pred, gold in zip(predictions, labels) if pred is gold)
    accuracy = correct / len(labelled)
    per_class: dict[SentenceClass, ClassMetrics] = {}
    seen = sorted({*labels}, key=lambda c: c.value)
    for cls in seen:
        tp = sum(1 for p, g in zip(predictions, labels) if p is cls and g is cls)
        fp = sum(1 for p, g in zip(predictions, labels) if p is cls and g is not cls)
        fn = sum(1 for p, g in zip(predictions, labels) if p is not cls and g is cls)
        precision, recall, f1 = prf_counts(tp, fp, fn)
        per_class[cls] = ClassMetrics(precision, recall, f1,
                                      support=sum(1 for g in labels if g is cls))
    return CvReport(accuracy=accuracy, per_class=per_class,
                    folds=folds, n=len(labelled))
