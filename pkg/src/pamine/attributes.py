"""Mapping sentences onto the 15 performance attributes (multi-label).

Provides a trainable one-vs-rest logistic-regression mapper, a cue-lexicon
fallback that needs no training data, and the instance-averaged multi-label
precision/recall/F metrics (instances with an empty predicted set
contribute to recall only, instances with an empty actual set to precision
only).
"""
from __future__ import annotations

import json
import re
import statistics
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import NamedTuple

import numpy as np
from scipy.special import expit

from . import _linear
from .classify import SentenceClass
from .data import data_path
from .nlp import TaggedSentence

MODEL_FORMAT_VERSION = 1
DEFAULT_THRESHOLD = 0.5


class Attribute(Enum):
    FUNCTIONAL_EXCELLENCE = 0
    BUILDING_EFFECTIVE_TEAMS = 1
    INTERPERSONAL_EFFECTIVENESS = 2
    CUSTOMER_FOCUS = 3
    INNOVATION_MANAGEMENT = 4
    EFFECTIVE_COMMUNICATION = 5
    BUSINESS_ACUMEN = 6
    TAKING_OWNERSHIP = 7
    PEOPLE_DEVELOPMENT = 8
    DRIVE_FOR_RESULTS = 9
    STRATEGIC_CAPABILITY = 10
    WITHSTANDING_PRESSURE = 11
    DEALING_WITH_AMBIGUITIES = 12
    MANAGING_VISION_AND_PURPOSE = 13
    TIMELY_DECISION_MAKING = 14


class MetricError(ValueError):
    """Raised when a multi-label metric is undefined for every instance."""


class PrfScores(NamedTuple):
    precision: float
    recall: float
    f1: float


@dataclass
class OvrModel:
    """One binary logistic model per attribute, with per-label thresholds."""
    vocabulary: dict[str, int]
    weights: np.ndarray        # (15, V)
    intercepts: np.ndarray     # (15,)
    thresholds: np.ndarray     # (15,)
    trainable: tuple[bool, ...]  # False -> no positives, predicts negative
    hyperparams: dict | None = None

    def to_json(self) -> str:
        return json.dumps({
            "format_version": MODEL_FORMAT_VERSION,
            "attributes": [a.name for a in Attribute],
            "vocabulary": self.vocabulary,
            "weights": self.weights.tolist(),
            "intercepts": self.intercepts.tolist(),
            "thresholds": self.thresholds.tolist(),
            "trainable": list(self.trainable),
            "hyperparams": self.hyperparams or {},
        })

    @classmethod
    def from_json(cls, text: str) -> "OvrModel":
        payload = json.loads(text)
        if payload.get("format_version") != MODEL_FORMAT_VERSION:
            raise ValueError("unsupported model format version")
        if payload["attributes"] != [a.name for a in Attribute]:
            raise ValueError("attribute set mismatch in serialized model")
        return cls(
            vocabulary={k: int(v) for k, v in payload["vocabulary"].items()},
            weights=np.array(payload["weights"]),
            intercepts=np.array(payload["intercepts"]),
            thresholds=np.array(payload["thresholds"]),
            trainable=tuple(bool(x) for x in payload["trainable"]),
            hyperparams=payload.get("hyperparams") or {},
        )


def train_ovr(labelled, threshold: float = DEFAULT_THRESHOLD,
              l2: float = _linear.L2_STRENGTH,
              learning_rate: float = _linear.LEARNING_RATE,
              max_epochs: int = _linear.MAX_EPOCHS,
              tol: float = _linear.TOL) -> OvrModel:
    """Train 15 one-vs-rest binary models from (sentence, attribute-set) pairs.

    Attributes without a single positive example are flagged untrainable and
    always predict negative.
    """
    if not labelled:
        raise ValueError("empty training set")
    token_lists = [_linear.sentence_tokens(s) for s, _ in labelled]
    vocabulary = _linear.build_vocabulary(token_lists)
    if not vocabulary:
        raise ValueError("empty vocabulary: no tokens in training data")
    X = _linear.count_matrix(token_lists, vocabulary)
    weights = np.zeros((len(Attribute), len(vocabulary)))
    intercepts = np.zeros(len(Attribute))
    trainable = []
    for attr in Attribute:
        y = np.array([1.0 if attr in labels else 0.0 for _, labels in labelled])
        if y.sum() == 0:
            trainable.append(False)
            continue
        trainable.append(True)
        weights[attr.value], intercepts[attr.value] = _linear.fit_binary_lr(
            X, y, l2=l2, learning_rate=learning_rate,
            max_epochs=max_epochs, tol=tol)
    return OvrModel(
        vocabulary=vocabulary,
        weights=weights,
        intercepts=intercepts,
        thresholds=np.full(len(Attribute), threshold),
        trainable=tuple(trainable),
        hyperparams={"l2": l2, "learning_rate": learning_rate,
                     "max_epochs": max_epochs, "tol": tol},
    )


def predict_attributes(model: OvrModel, sentence: TaggedSentence) -> set[Attribute]:
    """Every attribute whose binary probability reaches its threshold."""
    vec = _linear.count_vector(_linear.sentence_tokens(sentence), model.vocabulary)
    margins = model.weights @ vec + model.intercepts
    probs = expit(margins)
    return {
        attr for attr in Attribute
        if model.trainable[attr.value] and probs[attr.value] >= model.thresholds[attr.value]
    }


def multilabel_prf(pairs) -> PrfScores:
    """Instance-averaged multi-label precision/recall/F.

    Precision skips instances with an empty predicted set, recall skips
    instances with an empty actual set; F is the harmonic mean of the
    overall averages.
    """
    precisions = [len(p & a) / len(p) for p, a in pairs if p]
    recalls = [len(p & a) / len(a) for p, a in pairs if a]
    if not precisions:
        raise MetricError("precision undefined for every instance")
    if not recalls:
        raise MetricError("recall undefined for every instance")
    precision = statistics.fmean(precisions)
    recall = statistics.fmean(recalls)
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return PrfScores(precision, recall, f1)


@dataclass(frozen=True)
class ClassCounts:
    strengths: int = 0
    weaknesses: int = 0
    suggestions: int = 0


def attribute_histogram(pairs) -> dict[Attribute, ClassCounts]:
    """15x3 table of attribute assignments per sentence class."""
    strengths = {a: 0 for a in Attribute}
    weaknesses = {a: 0 for a in Attribute}
    suggestions = {a: 0 for a in Attribute}
    column = {
        SentenceClass.STRENGTH: strengths,
        SentenceClass.WEAKNESS: weaknesses,
        SentenceClass.SUGGESTION: suggestions,
    }
    for cls, attrs in pairs:
        bucket = column.get(cls)
        if bucket is None:
            continue
        for attr in attrs:
            bucket[attr] += 1
    return {
        a: ClassCounts(strengths[a], weaknesses[a], suggestions[a])
        for a in Attribute
    }


class AttributeMatcher:
    """Cue-lexicon attribute matcher (unsupervised fallback)."""

    def __init__(self, cues: dict[Attribute, list[str]]):
        self.cues = {a: tuple(cues.get(a, ())) for a in Attribute}
        self._regex = {
            attr: [re.compile(r"(?<!\w)" + re.escape(cue.lower()) + r"(?!\w)")
                   for cue in phrases]
            for attr, phrases in self.cues.items()
        }

    def match(self, sentence: TaggedSentence) -> set[Attribute]:
        text = sentence.text.strip().lower()
        return {
            attr for attr, patterns in self._regex.items()
            if any(rx.search(text) for rx in patterns)
        }


def load_attribute_cues(path: str | Path | None = None) -> AttributeMatcher:
    """Load an ``ATTRIBUTE<TAB>cue phrase`` lexicon."""
    path = Path(path) if path is not None else data_path("attribute_cues.tsv")
    cues: dict[Attribute, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected ATTRIBUTE<TAB>cue")
            name, cue = parts
            try:
                attr = Attribute[name.strip()]
            except KeyError as exc:
                raise ValueError(f"{path}:{lineno}: unknown attribute {name!r}") from exc
            cues.setdefault(attr, []).append(cue.strip())
    return AttributeMatcher(cues)


@lru_cache(maxsize=1)
def default_attribute_matcher() -> AttributeMatcher:
    return load_attribute_cues()
