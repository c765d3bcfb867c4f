"""Tokenization, POS tagging, noun-phrase chunking and headword extraction.

The tagger is a deterministic lexicon + suffix-rule tagger over Penn
Treebank-style tags. It is deliberately small: every downstream consumer
only needs coarse distinctions (noun / adjective / verb / adverb /
preposition), and callers that have a stronger tagger can feed pre-tagged
text instead (see :func:`parse_pretagged`).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .data import data_path

TAGSET = frozenset({
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "MD",
    "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$",
    "RB", "RBR", "RBS", "RP", "SYM", "TO", "UH",
    "VB", "VBD", "VBG", "VBN", "VBP", "VBZ",
    "WDT", "WP", "WP$", "WRB",
    ".", ",", ":", "``", "''", "-LRB-", "-RRB-",
})

_TRAILING_PUNCT = ".,!?;:"

# Suffix rules applied to unknown lowercased words, longest suffix first.
_SUFFIX_TAGS = (
    ("ies", "NNS"),
    ("ness", "NN"),
    ("ment", "NN"),
    ("tion", "NN"),
    ("sion", "NN"),
    ("ship", "NN"),
    ("ance", "NN"),
    ("ence", "NN"),
    ("ity", "NN"),
    ("ism", "NN"),
    ("able", "JJ"),
    ("ible", "JJ"),
    ("ous", "JJ"),
    ("ful", "JJ"),
    ("less", "JJ"),
    ("ive", "JJ"),
    ("ish", "JJ"),
    ("ing", "VBG"),
    ("ed", "VBD"),
    ("ly", "RB"),
)


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    pos: str


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple[Token, ...]
    text: str

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(t.pos for t in self.tokens)

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)


@dataclass(frozen=True)
class PhraseSpan:
    start: int
    end: int  # half-open
    kind: str = "NP"

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"invalid span [{self.start}, {self.end})")


def tokenize(text: str) -> list[str]:
    """Split on whitespace, detaching trailing punctuation as own tokens."""
    out: list[str] = []
    for chunk in text.split():
        trail: list[str] = []
        while len(chunk) > 1 and chunk[-1] in _TRAILING_PUNCT:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        out.append(chunk)
        out.extend(reversed(trail))
    return out


class Tagger:
    """Lexicon + suffix-rule POS tagger.

    Lookup order: exact surface, lowercased surface, digit check, suffix
    rules, capitalized-unknown -> NNP, otherwise NN.
    """

    def __init__(self, lexicon: dict[str, str]):
        for word, tag in lexicon.items():
            if tag not in TAGSET:
                raise ValueError(f"unknown tag {tag!r} for word {word!r}")
        self._lexicon = dict(lexicon)

    @classmethod
    def from_file(cls, path: str | Path) -> "Tagger":
        """Load a ``word<TAB>TAG`` lexicon file (UTF-8, # comments)."""
        lexicon: dict[str, str] = {}
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ValueError(f"{path}:{lineno}: expected 'word<TAB>TAG'")
                lexicon[parts[0]] = parts[1]
        return cls(lexicon)

    def tag_word(self, surface: str) -> str:
        if surface in self._lexicon:
            return self._lexicon[surface]
        lower = surface.lower()
        if lower in self._lexicon:
            return self._lexicon[lower]
        if all(ch in ".,!?;:" for ch in surface):
            first = surface[0]
            return {".": ".", "!": ".", "?": ".", ",": ",", ";": ":", ":": ":"}[first]
        if surface.replace(",", "").replace(".", "").replace("-", "").isdigit():
            return "CD"
        for suffix, tag in _SUFFIX_TAGS:
            if len(lower) > len(suffix) + 1 and lower.endswith(suffix):
                return tag
        if lower.endswith("s") and not lower.endswith("ss") and len(lower) > 3:
            return "NNS"
        if surface[:1].isupper():
            return "NNP"
        return "NN"

    def tag(self, tokens: list[str]) -> TaggedSentence:
        if not tokens:
            raise ValueError("cannot tag an empty token list")
        toks = tuple(Token(t, t.lower(), self.tag_word(t)) for t in tokens)
        return TaggedSentence(tokens=toks, text=" ".join(tokens))


@lru_cache(maxsize=1)
def default_tagger() -> Tagger:
    return Tagger.from_file(data_path("tags.tsv"))


def pos_tag(tokens: list[str], tagger: Tagger | None = None) -> TaggedSentence:
    return (tagger or default_tagger()).tag(tokens)


def tag_text(text: str, tagger: Tagger | None = None) -> TaggedSentence:
    """Tokenize and tag one sentence."""
    return pos_tag(tokenize(text), tagger=tagger)


def parse_pretagged(text: str) -> TaggedSentence:
    """Parse a pre-tagged sentence in ``surface_TAG surface_TAG`` format."""
    toks = []
    for item in text.split():
        surface, sep, tag = item.rpartition("_")
        if not sep or not surface:
            raise ValueError(f"not in surface_TAG format: {item!r}")
        if tag not in TAGSET:
            raise ValueError(f"unknown tag {tag!r} in {item!r}")
        toks.append(Token(surface, surface.lower(), tag))
    return TaggedSentence(tokens=tuple(toks), text=" ".join(t.surface for t in toks))


def _np_end(tags: tuple[str, ...], start: int) -> int | None:
    """End of the longest NP match ``(DT)? (JJ.*|NN.*)* NN.*`` at start."""
    i = start
    n = len(tags)
    if i < n and tags[i] == "DT":
        i += 1
    last_noun = -1
    while i < n and (tags[i].startswith("JJ") or tags[i].startswith("NN")):
        if tags[i].startswith("NN"):
            last_noun = i
        i += 1
    if last_noun < 0:
        return None
    return last_noun + 1


def chunk_noun_phrases(sentence: TaggedSentence) -> list[PhraseSpan]:
    """Maximal, non-overlapping noun-phrase spans, left to right."""
    tags = sentence.tags
    spans = []
    i = 0
    while i < len(tags):
        end = _np_end(tags, i)
        if end is not None:
            spans.append(PhraseSpan(i, end, kind="NP"))
            i = end
        else:
            i += 1
    return spans


def headword(span: PhraseSpan, sentence: TaggedSentence) -> Token:
    """Rightmost noun token of the span; rightmost token if no noun."""
    if span.end > len(sentence.tokens):
        raise ValueError("span exceeds sentence length")
    for i in range(span.end - 1, span.start - 1, -1):
        if sentence.tokens[i].pos.startswith("NN"):
            return sentence.tokens[i]
    return sentence.tokens[span.end - 1]


def lemmatize(word: str) -> str:
    """Minimal suffix-stripping lemma used for headword/lexicon equality."""
    w = word.lower()
    if w.endswith("ies") and len(w) > 4:
        return w[:-3] + "y"
    if w.endswith("s") and not w.endswith("ss") and len(w) > 3:
        return w[:-1]
    return w
