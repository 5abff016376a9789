"""Deterministic tokenization and normalization for tweets and articles."""

from __future__ import annotations

import hashlib
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Sequence

TWEET = "tweet"
ARTICLE = "article"

STEMMERS = ("none", "porter-like")

_WORD_RE = re.compile(r"[^\W_]+")
_URL_RE = re.compile(r"https?://|(?:^|[^\w.])t\.co/")

DEFAULT_STOPWORDS = "stopwords_en.txt"


def normalize_and_tokenize(text: str, mode: str = TWEET) -> list[str]:
    """Split ``text`` into lowercase word tokens.

    In tweet mode, whitespace-delimited chunks that start with ``@`` or
    contain a URL are dropped before word splitting.  Hashtag markers fall
    away because ``#`` is not a word character.  Tokens made only of
    digits are removed in both modes.
    """
    if mode not in (TWEET, ARTICLE):
        raise ValueError(f"unknown tokenization mode {mode!r}")
    text = unicodedata.normalize("NFKC", text).lower()
    tokens: list[str] = []
    for chunk in text.split():
        if mode == TWEET and (chunk.startswith("@") or _URL_RE.search(chunk)):
            continue
        for tok in _WORD_RE.findall(chunk):
            if tok.isdigit() or any(c.isupper() for c in tok):
                continue
            tokens.append(tok)
    return tokens


def remove_stopwords(tokens: Iterable[str], stopwords: frozenset[str] | set[str]) -> list[str]:
    return [t for t in tokens if t not in stopwords]


def _has_vowel(s: str) -> bool:
    return any(c in "aeiou" for c in s)


def light_stem(token: str) -> str:
    """Suffix stripper in the spirit of Porter's step 1; conservative by design."""
    if len(token) <= 3 or not token.isascii():
        return token
    if token.endswith("sses"):
        return token[:-2]
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("s") and not token.endswith(("ss", "us", "is")):
        return token[:-1]
    for suffix in ("ing", "ed"):
        if token.endswith(suffix):
            stem = token[: -len(suffix)]
            if len(stem) >= 3 and _has_vowel(stem):
                if len(stem) >= 4 and stem[-1] == stem[-2] and stem[-1] not in "lsz":
                    stem = stem[:-1]
                return stem
            return token
    if token.endswith("ly") and len(token) > 5:
        return token[:-2]
    return token


def load_stopwords(path=None) -> frozenset[str]:
    """Read a stop list (one lowercase term per line); the bundled English list by default."""
    if path is None:
        text = resources.files("newsrank.data").joinpath(DEFAULT_STOPWORDS).read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def stopwords_digest(path=None) -> str:
    if path is None:
        data = resources.files("newsrank.data").joinpath(DEFAULT_STOPWORDS).read_bytes()
    else:
        with open(path, "rb") as fh:
            data = fh.read()
    return hashlib.sha256(data).hexdigest()


@dataclass(frozen=True)
class TokenizedDoc:
    source_id: str
    tokens: tuple[str, ...]
    term_counts: dict[str, int] = field(compare=False, hash=False, repr=False)

    @classmethod
    def from_tokens(cls, source_id: str, tokens: Sequence[str]) -> "TokenizedDoc":
        return cls(source_id, tuple(tokens), dict(Counter(tokens)))

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Vocabulary:
    terms: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", {t: i for i, t in enumerate(self.terms)})

    @property
    def size(self) -> int:
        return len(self.terms)

    def index(self, term: str) -> int:
        return self._index[term]

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def __len__(self) -> int:
        return len(self.terms)


def build_vocabulary(docs: Iterable[TokenizedDoc]) -> Vocabulary:
    terms: set[str] = set()
    for d in docs:
        terms.update(d.term_counts)
    return Vocabulary(tuple(sorted(terms)))


class Preprocessor:
    """Tokenize, drop stopwords and optionally stem, with fixed options."""

    def __init__(self, stopwords: frozenset[str] | None = None, stemmer: str = "none"):
        if stemmer not in STEMMERS:
            raise ValueError(f"stemmer must be one of {STEMMERS}, got {stemmer!r}")
        self.stopwords = load_stopwords() if stopwords is None else frozenset(stopwords)
        self.stemmer = stemmer

    def tokens(self, text: str, mode: str = TWEET) -> list[str]:
        toks = remove_stopwords(normalize_and_tokenize(text, mode), self.stopwords)
        if self.stemmer == "porter-like":
            toks = [light_stem(t) for t in toks]
        return toks

    def doc(self, source_id: str, text: str, mode: str = TWEET) -> TokenizedDoc:
        return TokenizedDoc.from_tokens(source_id, self.tokens(text, mode))
