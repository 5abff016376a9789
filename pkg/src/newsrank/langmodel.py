"""Maximum-likelihood unigram language models and Jensen-Shannon scores."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import EmptyCluster, EmptyDocument

JSD_MIXTURE = "jsd-mixture"
PAPER_LITERAL = "paper-literal"
DIVERGENCE_MODES = (JSD_MIXTURE, PAPER_LITERAL)

LIDSTONE_EPS = 1e-4


@dataclass(frozen=True)
class LanguageModel:
    probs: Mapping[str, float]

    @property
    def support(self) -> frozenset[str]:
        return frozenset(self.probs)

    def __getitem__(self, term: str) -> float:
        return self.probs.get(term, 0.0)


def from_counts(counts: Mapping[str, int]) -> LanguageModel:
    total = sum(counts.values())
    if total <= 0:
        raise EmptyDocument("cannot estimate a language model from zero tokens")
    return LanguageModel({w: c / total for w, c in sorted(counts.items()) if c > 0})


def mle(doc) -> LanguageModel:
    """MLE unigram model of a document (a TokenizedDoc or a token sequence)."""
    counts = getattr(doc, "term_counts", None)
    if counts is None:
        counts = {}
        for t in doc:
            counts[t] = counts.get(t, 0) + 1
    return from_counts(counts)


def mle_cluster(cluster) -> LanguageModel:
    """MLE model of an event cluster with all member tweets pooled as one document."""
    if not cluster.term_counts or sum(cluster.term_counts.values()) == 0:
        raise EmptyCluster(f"event {cluster.event_id} has no tokens")
    return from_counts(cluster.term_counts)


def _kl(p: Mapping[str, float], q: Mapping[str, float], support: Iterable[str]) -> float:
    total = 0.0
    for w in support:
        pw = p.get(w, 0.0)
        if pw > 0.0:
            total += pw * math.log(pw / q[w])
    return total


def _lidstone(p: LanguageModel, support: list[str], eps: float) -> dict[str, float]:
    z = 1.0 + eps * len(support)
    return {w: (p[w] + eps) / z for w in support}


def js_divergence(p: LanguageModel, q: LanguageModel, mode: str = JSD_MIXTURE) -> float:
    """Jensen-Shannon divergence in nats.

    ``jsd-mixture`` compares both models with their midpoint and is bounded
    by ln 2.  ``paper-literal`` averages the two direct KL divergences after
    Lidstone smoothing over the union support, which keeps it finite.
    """
    support = sorted(p.probs.keys() | q.probs.keys())
    if mode == JSD_MIXTURE:
        m = {w: 0.5 * (p[w] + q[w]) for w in support}
        return 0.5 * _kl(p.probs, m, support) + 0.5 * _kl(q.probs, m, support)
    if mode == PAPER_LITERAL:
        ps = _lidstone(p, support, LIDSTONE_EPS)
        qs = _lidstone(q, support, LIDSTONE_EPS)
        return 0.5 * (_kl(ps, qs, support) + _kl(qs, ps, support))
    raise ValueError(f"unknown divergence mode {mode!r}")


def js_similarity(p: LanguageModel, q: LanguageModel, mode: str = JSD_MIXTURE) -> float:
    return -js_divergence(p, q, mode)


def top_k_words(lm: LanguageModel, k: int) -> list[str]:
    """Most probable terms first; equal probabilities fall back to lexicographic order."""
    if k <= 0:
        raise ValueError("k must be positive")
    ranked = sorted(lm.probs.items(), key=lambda kv: (-kv[1], kv[0]))
    return [w for w, _ in ranked[:k]]
