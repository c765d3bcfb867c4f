"""Peer-feedback phrase summarization.

Pipeline: extract candidate phrases from POS-tagged peer comments, score
each phrase's importance, pick the summary size from the candidate count,
and select the phrase subset by exactly optimizing a penalized 0/1
objective (soft constraints enter as slack counts at a fixed penalty).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from . import _kernels
from .corpus import AppraisalRecord, split_sentences
from .data import data_path
from .nlp import PhraseSpan, TaggedSentence, Tagger, _np_end, headword, lemmatize, tag_text

PENALTY = 10000

# Attribute types behind the coverage constraints, in canonical order.
TYPE_NAMES = (
    "leadership", "team", "innovation", "communication", "knowledge",
    "delivery", "ownership", "customer", "strategy", "personal",
)

# Candidate phrase rules, in precedence order for equal-length matches.
ADJ_IN_NP = "ADJ_IN_NP"
VERB_NP = "VERB_NP"
VERB_PREP_NP = "VERB_PREP_NP"
NP_ONLY = "NP_ONLY"
ADJ_ONLY = "ADJ_ONLY"
_RULE_ORDER = {ADJ_IN_NP: 0, VERB_NP: 1, VERB_PREP_NP: 2, NP_ONLY: 3, ADJ_ONLY: 4}

_PREP_TAGS = ("IN", "TO")


@dataclass(frozen=True)
class SummarizerResources:
    """Lexicons consulted during candidate extraction."""
    noun_attribute: frozenset[str]
    type_lexicons: dict[str, frozenset[str]]


def load_noun_attribute(path: str | Path) -> frozenset[str]:
    """Load the quality-noun lexicon (one lowercased lemma per line)."""
    entries = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip().lower()
            if line and not line.startswith("#"):
                entries.add(lemmatize(line))
    return frozenset(entries)


def load_type_lexicons(directory: str | Path) -> dict[str, frozenset[str]]:
    """Load the ten attribute-type lexicons from a directory.

    Each file starts with a ``# type: Name`` header followed by one
    lowercased lemma per line. All ten types must be present.
    """
    lexicons: dict[str, frozenset[str]] = {}
    for path in sorted(Path(directory).glob("*.txt")):
        name = None
        entries = set()
        with open(path, encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    header = line.lstrip("#").strip()
                    if header.lower().startswith("type:"):
                        name = header.split(":", 1)[1].strip().lower()
                    continue
                entries.add(lemmatize(line.lower()))
        if name is None:
            raise ValueError(f"{path}: missing '# type: Name' header")
        lexicons[name] = frozenset(entries)
    missing = set(TYPE_NAMES) - set(lexicons)
    if missing:
        raise ValueError(f"missing type lexicons: {sorted(missing)}")
    return {name: lexicons[name] for name in TYPE_NAMES}


@lru_cache(maxsize=1)
def default_resources() -> SummarizerResources:
    return SummarizerResources(
        noun_attribute=load_noun_attribute(data_path("noun_attribute.txt")),
        type_lexicons=load_type_lexicons(data_path("ilp_types")),
    )


@dataclass(frozen=True)
class CandidatePhrase:
    text: str                       # lowercased surface
    tokens: tuple                   # Token sequence of the first occurrence
    rule: str
    headword: str                   # lemma of the governing token
    freq: int                       # distinct peers mentioning the phrase
    has_adj: int
    has_verb: int
    num_words: int
    noun_cat: int                   # headword is a quality noun
    types: frozenset[str]           # matched attribute types

    def __post_init__(self):
        if self.freq < 1:
            raise ValueError("phrase frequency must be >= 1")
        if self.num_words != len(self.tokens) or self.num_words < 1:
            raise ValueError("num_words must equal the token count (>= 1)")

    @property
    def invalid_single_noun(self) -> int:
        return int(self.num_words == 1 and not self.has_adj and not self.noun_cat)


def phrase_importance(phrase: CandidatePhrase) -> int:
    """Objective coefficient: (noun_cat + has_adj + has_verb + 1) * freq * num_words."""
    return ((phrase.noun_cat + phrase.has_adj + phrase.has_verb + 1)
            * phrase.freq * phrase.num_words)


def _match_at(sentence: TaggedSentence, i: int) -> tuple[int, str] | None:
    """Longest candidate-phrase match starting at token i, if any."""
    tags = sentence.tags
    n = len(tags)
    found: list[tuple[int, str]] = []
    if tags[i].startswith("JJ"):
        if i + 2 < n and sentence.tokens[i + 1].lower == "in":
            end = _np_end(tags, i + 2)
            if end is not None:
                found.append((end, ADJ_IN_NP))
        found.append((i + 1, ADJ_ONLY))
    if tags[i].startswith("VB"):
        end = _np_end(tags, i + 1) if i + 1 < n else None
        if end is not None:
            found.append((end, VERB_NP))
        if i + 2 < n and tags[i + 1] in _PREP_TAGS:
            end = _np_end(tags, i + 2)
            if end is not None:
                found.append((end, VERB_PREP_NP))
    end = _np_end(tags, i)
    if end is not None:
        found.append((end, NP_ONLY))
    # an adverb directly modifying an adjective joins the adjective phrase
    if tags[i].startswith("RB") and i + 1 < n and tags[i + 1].startswith("JJ"):
        found.append((i + 2, ADJ_ONLY))
    if not found:
        return None
    return max(found, key=lambda m: (m[0], -_RULE_ORDER[m[1]]))


def extract_candidates(peer_sentences,
                       resources: SummarizerResources | None = None
                       ) -> list[CandidatePhrase]:
    """Extract deduplicated candidate phrases from per-peer tagged sentences.

    Matches are non-overlapping, longest first, left to right. Phrases are
    deduplicated by their lemma sequence; frequency counts distinct peers.
    Candidates keep their first-occurrence order.
    """
    resources = resources or default_resources()

    class _Build:
        __slots__ = ("tokens", "rule", "peers")

        def __init__(self, tokens, rule):
            self.tokens = tokens
            self.rule = rule
            self.peers = set()

    builders: dict[tuple[str, ...], _Build] = {}
    for peer_idx, sentences in enumerate(peer_sentences):
        for sentence in sentences:
            i = 0
            while i < len(sentence.tokens):
                match = _match_at(sentence, i)
                if match is None:
                    i += 1
                    continue
                end, rule = match
                tokens = sentence.tokens[i:end]
                key = tuple(lemmatize(t.lower) for t in tokens)
                builder = builders.get(key)
                if builder is None:
                    builder = builders[key] = _Build(tokens, rule)
                builder.peers.add(peer_idx)
                i = end

    out = []
    for key, builder in builders.items():
        tokens = builder.tokens
        span = PhraseSpan(0, len(tokens), kind="NP")
        head = headword(span, TaggedSentence(tokens=tokens, text=""))
        head_lemma = lemmatize(head.lower)
        noun_cat = int(head_lemma in resources.noun_attribute)
        types = frozenset(
            name for name, lexicon in resources.type_lexicons.items()
            if any(lemma in lexicon for lemma in key)
        )
        out.append(CandidatePhrase(
            text=" ".join(t.lower for t in tokens),
            tokens=tokens,
            rule=builder.rule,
            headword=head_lemma,
            freq=len(builder.peers),
            has_adj=int(any(t.pos.startswith("JJ") for t in tokens)),
            has_verb=int(any(t.pos.startswith("VB") for t in tokens)),
            num_words=len(tokens),
            noun_cat=noun_cat,
            types=types,
        ))
    return out


def choose_k(n: int) -> int:
    """Summary size for ``n`` candidate phrases.

    Piecewise-recursive schedule over candidate-count bands (half of the
    first ten, then 0.4/0.3/0.2/0.1 of each following band, floored),
    clamped to [4, 20] when at least four candidates exist and to ``n``
    otherwise. Integer arithmetic keeps the floors exact.
    """
    if n < 0:
        raise ValueError("candidate count must be >= 0")
    if n <= 10:
        k = n // 2
    elif n <= 20:
        k = choose_k(10) + (n - 10) * 4 // 10
    elif n <= 30:
        k = choose_k(20) + (n - 20) * 3 // 10
    elif n <= 50:
        k = choose_k(30) + (n - 30) * 2 // 10
    else:
        k = choose_k(50) + (n - 50) // 10
    if k < 4 and n >= 4:
        k = 4
    elif k < 4:
        k = n
    elif k > 20:
        k = 20
    return k


@dataclass(frozen=True)
class IlpInstance:
    """Self-contained selection problem over ``n`` candidate phrases."""
    weights: tuple[int, ...]
    same_head: tuple[tuple[int, ...], ...]
    types: tuple[frozenset[str], ...]
    invalid: tuple[int, ...]
    k: int
    penalty: int = PENALTY
    phrases: tuple[CandidatePhrase, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.weights)
        if any(w < 1 for w in self.weights):
            raise ValueError("phrase weights must be >= 1")
        if len(self.same_head) != n or any(len(row) != n for row in self.same_head):
            raise ValueError("same_head must be an NxN matrix")
        for i in range(n):
            if self.same_head[i][i] != 0:
                raise ValueError("same_head diagonal must be zero")
            for j in range(i + 1, n):
                if self.same_head[i][j] != self.same_head[j][i]:
                    raise ValueError("same_head must be symmetric")
        if len(self.types) != n or len(self.invalid) != n:
            raise ValueError("types/invalid length must match weights")
        for ts in self.types:
            unknown = ts - set(TYPE_NAMES)
            if unknown:
                raise ValueError(f"unknown attribute types: {sorted(unknown)}")

    @property
    def n(self) -> int:
        return len(self.weights)


def build_ilp(phrases: list[CandidatePhrase], k: int | None = None) -> IlpInstance:
    """Assemble the selection problem; ``k`` defaults to ``choose_k(n)``."""
    if not phrases:
        raise ValueError("cannot build a selection problem without phrases")
    n = len(phrases)
    same = tuple(
        tuple(int(i != j and phrases[i].headword == phrases[j].headword)
              for j in range(n))
        for i in range(n)
    )
    return IlpInstance(
        weights=tuple(phrase_importance(p) for p in phrases),
        same_head=same,
        types=tuple(p.types for p in phrases),
        invalid=tuple(p.invalid_single_noun for p in phrases),
        k=choose_k(n) if k is None else k,
        phrases=tuple(phrases),
    )


@dataclass(frozen=True)
class SummarySelection:
    chosen_indices: tuple[int, ...]
    objective_value: int
    type_slacks: dict[str, int]     # 0/1 per attribute type (uncovered -> 1)
    duplicate_pairs: int            # chosen same-headword pairs
    invalid_singles: int            # chosen invalid single-word nouns
    phrases_out: tuple[str, ...]    # chosen texts, importance-descending

    @property
    def chosen_vector(self) -> tuple[int, ...]:
        n = (max(self.chosen_indices) + 1) if self.chosen_indices else 0
        return tuple(int(i in set(self.chosen_indices)) for i in range(n))

    def slacks(self) -> dict[str, int]:
        out = dict(self.type_slacks)
        out["duplicate_headword"] = self.duplicate_pairs
        out["invalid_single_noun"] = self.invalid_singles
        return out

    @property
    def slack_total(self) -> int:
        return sum(self.type_slacks.values()) + self.duplicate_pairs + self.invalid_singles


def _selection_report(inst: IlpInstance, chosen: tuple[int, ...],
                      objective: int) -> SummarySelection:
    covered = set()
    for i in chosen:
        covered |= inst.types[i]
    type_slacks = {name: int(name not in covered) for name in TYPE_NAMES}
    dup = sum(inst.same_head[i][j]
              for i, j in itertools.combinations(chosen, 2))
    inval = sum(inst.invalid[i] for i in chosen)
    weight_of = {i: inst.weights[i] for i in chosen}
    ordered = sorted(chosen, key=lambda i: (-weight_of[i], i))
    texts = tuple(inst.phrases[i].text for i in ordered) if inst.phrases else ()
    return SummarySelection(
        chosen_indices=tuple(sorted(chosen)),
        objective_value=objective,
        type_slacks=type_slacks,
        duplicate_pairs=dup,
        invalid_singles=inval,
        phrases_out=texts,
    )


def solve_ilp(inst: IlpInstance) -> SummarySelection:
    """Exact optimum via branch-and-bound (compiled kernel when available).

    Ties between equal-objective optima go to the lexicographically
    smallest chosen index set.
    """
    if not 1 <= inst.k <= inst.n:
        raise ValueError(f"infeasible selection size k={inst.k} for n={inst.n}")
    type_rows = tuple(
        tuple(TYPE_NAMES.index(t) for t in sorted(ts)) for ts in inst.types
    )
    objective, chosen = _kernels.solve_selection(
        inst.weights, type_rows, inst.same_head, inst.invalid,
        inst.k, inst.penalty, len(TYPE_NAMES),
    )
    report = _selection_report(inst, tuple(chosen), int(objective))
    expected = (sum(inst.weights[i] for i in report.chosen_indices)
                - inst.penalty * report.slack_total)
    assert expected == report.objective_value, "solver/objective mismatch"
    return report


def brute_force_oracle(inst: IlpInstance) -> SummarySelection:
    """Exhaustive reference optimizer (test oracle, n <= 20 only).

    Enumerates every k-subset in lexicographic order and keeps the first
    best, recomputing the objective independently of the search kernel.
    """
    if inst.n > 20:
        raise ValueError("oracle refuses instances with more than 20 phrases")
    if not 1 <= inst.k <= inst.n:
        raise ValueError(f"infeasible selection size k={inst.k} for n={inst.n}")
    best_obj = None
    best_combo = None
    for combo in itertools.combinations(range(inst.n), inst.k):
        wsum = sum(inst.weights[i] for i in combo)
        covered = set()
        for i in combo:
            covered |= inst.types[i]
        uncovered = sum(1 for name in TYPE_NAMES if name not in covered)
        dup = sum(inst.same_head[i][j] for i, j in itertools.combinations(combo, 2))
        inval = sum(inst.invalid[i] for i in combo)
        obj = wsum - inst.penalty * (uncovered + dup + inval)
        if best_obj is None or obj > best_obj:
            best_obj = obj
            best_combo = combo
    return _selection_report(inst, best_combo, best_obj)


@dataclass(frozen=True)
class SummaryResult:
    employee_id: str
    phrases: tuple[str, ...]
    k: int
    n_candidates: int
    objective_value: int | None
    selection: SummarySelection | None
    diagnostic: str | None = None

    @property
    def text(self) -> str:
        return ", ".join(self.phrases)


def summarize(record: AppraisalRecord,
              resources: SummarizerResources | None = None,
              tagger: Tagger | None = None,
              abbreviations: frozenset[str] | None = None) -> SummaryResult:
    """End-to-end phrase summary of a record's peer comments."""
    peer_sentences = [
        [tag_text(s, tagger) for s in split_sentences(c.text, abbreviations)]
        for c in record.peer_comments
    ]
    candidates = extract_candidates(peer_sentences, resources)
    if not candidates:
        return SummaryResult(
            employee_id=record.employee_id, phrases=(), k=0, n_candidates=0,
            objective_value=None, selection=None,
            diagnostic="no candidate phrases in peer comments",
        )
    inst = build_ilp(candidates)
    selection = solve_ilp(inst)
    return SummaryResult(
        employee_id=record.employee_id,
        phrases=selection.phrases_out,
        k=inst.k,
        n_candidates=inst.n,
        objective_value=selection.objective_value,
        selection=selection,
    )
