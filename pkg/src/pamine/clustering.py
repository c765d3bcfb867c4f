"""Noun extraction and cosine-similarity leader clustering over embeddings."""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import _kernels
from .classify import SentenceClass
from .data import data_path

logger = logging.getLogger(__name__)

DEFAULT_TAU = 0.55


class EmbeddingError(ValueError):
    """Raised for malformed embedding files."""


@dataclass
class EmbeddingTable:
    vectors: dict[str, np.ndarray]
    dim: int

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __getitem__(self, word: str) -> np.ndarray:
        return self.vectors[word]

    def __len__(self) -> int:
        return len(self.vectors)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Load a text embedding file (``word v1 v2 ... vd`` per line).

    All lines must share one dimension; repeated words keep the first
    occurrence and log a warning.
    """
    vectors: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            parts = raw.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            word = parts[0]
            try:
                values = [float(x) for x in parts[1:]]
            except ValueError as exc:
                raise EmbeddingError(f"{path}:{lineno}: unparseable number ({exc})") from exc
            if not values:
                raise EmbeddingError(f"{path}:{lineno}: no vector components")
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise EmbeddingError(
                    f"{path}:{lineno}: dimension {len(values)} != {dim}")
            if word in vectors:
                logger.warning("%s:%d: duplicate embedding for %r ignored",
                               path, lineno, word)
                continue
            vectors[word] = np.array(values)
    return EmbeddingTable(vectors=vectors, dim=dim or 0)


def cosine(a, b) -> float:
    """Cosine similarity of two equal-dimension, non-zero vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = math.sqrt(float(a @ a))
    norm_b = math.sqrt(float(b @ b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValueError("cosine undefined for zero-norm vectors")
    return float(a @ b) / (norm_a * norm_b)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    return frozenset(load_stopwords(data_path("stopwords.txt")))


def load_stopwords(path: str | Path) -> set[str]:
    out = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip().lower()
            if line and not line.startswith("#"):
                out.add(line)
    return out


def extract_nouns(classified, classes,
                  stopwords: frozenset[str] | set[str] | None = None
                  ) -> list[tuple[str, int]]:
    """Corpus-frequency-ranked nouns from sentences of the given class(es).

    ``classified`` is an iterable of (TaggedSentence, SentenceClass) pairs;
    ``classes`` a single class or a collection (the weakness and suggestion
    classes are typically pooled). Nouns are lowercased NN* tokens minus the
    stopword list, sorted by descending frequency then alphabetically.
    """
    if isinstance(classes, SentenceClass):
        classes = {classes}
    else:
        classes = set(classes)
    stops = default_stopwords() if stopwords is None else stopwords
    counts: Counter[str] = Counter()
    for sentence, cls in classified:
        if cls not in classes:
            continue
        for token in sentence.tokens:
            if token.pos.startswith("NN") and token.lower not in stops:
                counts[token.lower] += 1
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


@dataclass(frozen=True)
class NounCluster:
    members: tuple[tuple[str, int], ...]  # (noun, corpus frequency)
    centroid: np.ndarray | None           # None for out-of-vocabulary nouns
    label: str
    count: int                            # sum of member frequencies
    oov: bool = False


def cluster_nouns(nouns, table: EmbeddingTable, tau: float = DEFAULT_TAU
                  ) -> list[NounCluster]:
    """Greedy leader clustering of (noun, frequency) pairs.

    Nouns are visited by descending frequency (alphabetical on ties); each
    joins the first cluster whose running centroid has cosine >= tau, else
    opens a new cluster. Nouns missing from the table (or with a zero-norm
    vector) become singleton clusters flagged OOV.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError("tau must lie in (0, 1)")
    ordered = sorted(nouns, key=lambda item: (-item[1], item[0]))
    in_vocab: list[bool] = []
    vec_rows: list[np.ndarray] = []
    for noun, _ in ordered:
        usable = False
        if noun in table:
            vec = np.asarray(table[noun], dtype=np.float64)
            if float(vec @ vec) > 0.0:
                usable = True
                vec_rows.append(vec)
        in_vocab.append(usable)
    assignments = (
        _kernels.leader_cluster(np.vstack(vec_rows), tau) if vec_rows else []
    )

    clusters: list[dict] = []
    id_to_cluster: dict[int, dict] = {}
    vec_idx = 0
    for (noun, freq), usable in zip(ordered, in_vocab):
        if not usable:
            clusters.append({"members": [(noun, freq)], "vectors": None, "oov": True})
            continue
        cid = assignments[vec_idx]
        cluster = id_to_cluster.get(cid)
        if cluster is None:
            cluster = {"members": [], "vectors": [], "oov": False}
            id_to_cluster[cid] = cluster
            clusters.append(cluster)
        cluster["members"].append((noun, freq))
        cluster["vectors"].append(vec_rows[vec_idx])
        vec_idx += 1

    out = []
    for cluster in clusters:
        members = tuple(cluster["members"])
        centroid = None
        if not cluster["oov"]:
            stacked = np.vstack(cluster["vectors"])
            centroid = stacked.sum(axis=0) / len(members)
        out.append(NounCluster(
            members=members,
            centroid=centroid,
            label=" ".join(noun for noun, _ in members),
            count=sum(freq for _, freq in members),
            oov=cluster["oov"],
        ))
    return out
