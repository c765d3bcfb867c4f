"""Corpus ingestion, sentence splitting and corpus statistics."""
from __future__ import annotations

import csv
import json
import math
import statistics
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .data import data_path

SUPERVISOR = "supervisor"
PEER = "peer"

_TERMINATORS = ".!?"


class CorpusError(ValueError):
    """Raised for malformed corpora or records."""


@dataclass(frozen=True)
class PeerComment:
    peer_id: str
    text: str


@dataclass(frozen=True)
class AppraisalRecord:
    employee_id: str
    supervisor_text: str
    peer_comments: tuple[PeerComment, ...] = ()
    manual_summary: str | None = None

    def __post_init__(self):
        if not self.employee_id:
            raise CorpusError("employee_id must be non-empty")
        for c in self.peer_comments:
            if not c.text.strip():
                raise CorpusError(
                    f"empty peer comment for employee {self.employee_id!r}")


@dataclass(frozen=True)
class SentenceRecord:
    employee_id: str
    source: str  # SUPERVISOR or PEER
    peer_id: str | None
    text: str
    index: int


@dataclass(frozen=True)
class CorpusStats:
    sentence_count: int
    min: int
    max: int
    mean: float
    stdev: float
    q1: int
    q2: int
    q3: int

    def as_dict(self) -> dict:
        return {
            "sentence_count": self.sentence_count,
            "words_per_sentence": {
                "min": self.min, "max": self.max,
                "mean": self.mean, "stdev": self.stdev,
                "q1": self.q1, "q2": self.q2, "q3": self.q3,
            },
        }


def _record_from_dict(row: dict, where: str) -> AppraisalRecord:
    try:
        employee_id = row["employee_id"]
        supervisor_text = row.get("supervisor_text", "")
        comments = tuple(
            PeerComment(str(c["peer_id"]), c["text"])
            for c in row.get("peer_comments") or ()
        )
    except (KeyError, TypeError) as exc:
        raise CorpusError(f"{where}: malformed record ({exc})") from exc
    return AppraisalRecord(
        employee_id=str(employee_id),
        supervisor_text=supervisor_text,
        peer_comments=comments,
        manual_summary=row.get("manual_summary"),
    )


def load_records(path: str | Path, format: str = "jsonl") -> list[AppraisalRecord]:
    """Load appraisal records from a JSONL or CSV file.

    Duplicate employee ids and malformed rows raise :class:`CorpusError`
    naming the offending line.
    """
    if format not in ("jsonl", "csv"):
        raise CorpusError(f"unknown corpus format {format!r}")
    path = Path(path)
    records: list[AppraisalRecord] = []
    seen: set[str] = set()

    def check_duplicate(rec: AppraisalRecord, where: str):
        if rec.employee_id in seen:
            raise CorpusError(f"{where}: duplicate employee_id {rec.employee_id!r}")
        seen.add(rec.employee_id)

    with open(path, encoding="utf-8", newline="") as fh:
        if format == "jsonl":
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line:
                    continue
                where = f"{path}:{lineno}"
                try:
                    row = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"{where}: invalid JSON ({exc})") from exc
                try:
                    rec = _record_from_dict(row, where)
                except CorpusError:
                    raise
                except ValueError as exc:
                    raise CorpusError(f"{where}: {exc}") from exc
                check_duplicate(rec, where)
                records.append(rec)
        else:
            reader = csv.DictReader(fh)
            for lineno, row in enumerate(reader, start=2):
                where = f"{path}:{lineno}"
                if row.get("employee_id") is None:
                    raise CorpusError(f"{where}: missing employee_id column")
                raw_comments = (row.get("peer_comments") or "").strip()
                comments = tuple(
                    PeerComment(f"p{i}", text.strip())
                    for i, text in enumerate(raw_comments.split("|"), start=1)
                    if text.strip()
                )
                try:
                    rec = AppraisalRecord(
                        employee_id=row["employee_id"],
                        supervisor_text=row.get("supervisor_text", ""),
                        peer_comments=comments,
                        manual_summary=row.get("manual_summary") or None,
                    )
                except CorpusError as exc:
                    raise CorpusError(f"{where}: {exc}") from exc
                check_duplicate(rec, where)
                records.append(rec)
    return records


def save_records(records: list[AppraisalRecord], path: str | Path) -> None:
    """Write records as JSONL, one record per line (round-trips load_records)."""
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps({
                "employee_id": rec.employee_id,
                "supervisor_text": rec.supervisor_text,
                "peer_comments": [
                    {"peer_id": c.peer_id, "text": c.text} for c in rec.peer_comments
                ],
                "manual_summary": rec.manual_summary,
            }, ensure_ascii=False) + "\n")


@lru_cache(maxsize=1)
def default_abbreviations() -> frozenset[str]:
    return frozenset(load_abbreviations(data_path("abbreviations.txt")))


def load_abbreviations(path: str | Path) -> set[str]:
    out = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip().lower()
            if line and not line.startswith("#"):
                out.add(line)
    return out


def split_sentences(text: str, abbreviations: frozenset[str] | set[str] | None = None) -> list[str]:
    """Rule-based sentence splitter.

    Splits after ``.``, ``!`` or ``?`` runs followed by whitespace or end of
    text, except when the period terminates a known abbreviation
    (``e.g.``, ``etc.``, ...). Never emits empty sentences.
    """
    abbrevs = default_abbreviations() if abbreviations is None else abbreviations
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _TERMINATORS:
            j = i + 1
            while j < n and text[j] in _TERMINATORS:
                j += 1
            if j >= n or text[j].isspace():
                is_abbrev = False
                if text[i] == "." and j - i == 1:
                    k = i
                    while k > 0 and not text[k - 1].isspace():
                        k -= 1
                    if text[k:i + 1].lower() in abbrevs:
                        is_abbrev = True
                if not is_abbrev:
                    piece = text[start:j].strip()
                    if piece:
                        sentences.append(piece)
                    start = j
            i = j
        else:
            i += 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def sentence_records(records: list[AppraisalRecord],
                     abbreviations: frozenset[str] | None = None) -> list[SentenceRecord]:
    """Split every record into per-source sentence records with dense indices."""
    out: list[SentenceRecord] = []
    for rec in records:
        for idx, sent in enumerate(split_sentences(rec.supervisor_text, abbreviations)):
            out.append(SentenceRecord(rec.employee_id, SUPERVISOR, None, sent, idx))
        for comment in rec.peer_comments:
            for idx, sent in enumerate(split_sentences(comment.text, abbreviations)):
                out.append(SentenceRecord(rec.employee_id, PEER, comment.peer_id, sent, idx))
    return out


def _nearest_rank(sorted_values: list[int], q: float) -> int:
    rank = math.ceil(q * len(sorted_values))
    return sorted_values[max(rank, 1) - 1]


def corpus_stats(sentences: list[SentenceRecord]) -> CorpusStats:
    """Word-count statistics with nearest-rank quartiles and population stdev."""
    if not sentences:
        raise CorpusError("cannot compute statistics of an empty corpus")
    lengths = sorted(len(s.text.split()) for s in sentences)
    return CorpusStats(
        sentence_count=len(lengths),
        min=lengths[0],
        max=lengths[-1],
        mean=statistics.fmean(lengths),
        stdev=statistics.pstdev(lengths),
        q1=_nearest_rank(lengths, 0.25),
        q2=_nearest_rank(lengths, 0.50),
        q3=_nearest_rank(lengths, 0.75),
    )
