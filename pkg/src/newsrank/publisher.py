"""News-publisher detection for Twitter accounts.

Hybrid naive Bayes: Gaussian likelihoods for the six numeric profile
counts, Bernoulli likelihoods for the two account flags and for the
presence of each username/description term seen during training.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corpus import UserProfile
from .errors import NoPositivePredictions, SingleClassTrainingSet
from .preprocess import TWEET, Preprocessor

PUBLISHER = "publisher"
OTHER = "other"
CLASSES = (PUBLISHER, OTHER)

NUMERIC_FEATURES = (
    "followers",
    "following",
    "follower_following_ratio",
    "tweets_count",
    "favourites_count",
    "listed_count",
)
BINARY_FEATURES = ("verified", "has_url")

VARIANCE_FLOOR = 1e-9


@dataclass(frozen=True)
class PublisherFeatures:
    numeric: tuple[float, ...]
    binary: tuple[bool, ...]
    text_presence: frozenset[str] = field(default_factory=frozenset)


def extract_features(u: UserProfile, preprocessor: Preprocessor | None = None) -> PublisherFeatures:
    pre = preprocessor or Preprocessor()
    ratio = u.followers / (u.following + 1)
    numeric = (
        float(u.followers),
        float(u.following),
        ratio,
        float(u.tweets_count),
        float(u.favourites_count),
        float(u.listed_count),
    )
    terms = pre.tokens(f"{u.username} {u.description}", TWEET)
    return PublisherFeatures(numeric, (u.verified, u.has_url), frozenset(terms))


@dataclass
class PublisherModel:
    priors: dict[str, float]
    means: dict[str, list[float]]
    variances: dict[str, list[float]]
    binary_probs: dict[str, list[float]]
    term_probs: dict[str, dict[str, float]]
    log_counts: bool = False
    threshold: float = 0.5
    smoothing: float = 1.0

    @property
    def terms(self) -> list[str]:
        return sorted(self.term_probs[PUBLISHER])

    def to_dict(self) -> dict:
        return {
            "priors": self.priors,
            "means": self.means,
            "variances": self.variances,
            "binary_probs": self.binary_probs,
            "term_probs": self.term_probs,
            "log_counts": self.log_counts,
            "threshold": self.threshold,
            "smoothing": self.smoothing,
            "numeric_features": list(NUMERIC_FEATURES),
            "binary_features": list(BINARY_FEATURES),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PublisherModel":
        return cls(
            priors=dict(d["priors"]),
            means={c: list(v) for c, v in d["means"].items()},
            variances={c: list(v) for c, v in d["variances"].items()},
            binary_probs={c: list(v) for c, v in d["binary_probs"].items()},
            term_probs={c: dict(v) for c, v in d["term_probs"].items()},
            log_counts=d.get("log_counts", False),
            threshold=d.get("threshold", 0.5),
            smoothing=d.get("smoothing", 1.0),
        )

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True, indent=1)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "PublisherModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _transform(x: Sequence[float], log_counts: bool) -> list[float]:
    return [math.log1p(v) for v in x] if log_counts else list(x)


def train(
    labeled: Iterable[tuple[PublisherFeatures, str]],
    *,
    log_counts: bool = False,
    threshold: float = 0.5,
) -> PublisherModel:
    """Fit class priors, Gaussian moments and add-one smoothed Bernoulli rates."""
    by_class: dict[str, list[PublisherFeatures]] = {c: [] for c in CLASSES}
    for f, label in labeled:
        if label not in by_class:
            raise ValueError(f"unknown label {label!r}")
        by_class[label].append(f)
    if any(not v for v in by_class.values()):
        raise SingleClassTrainingSet("training set needs at least one example of each class")

    total = sum(len(v) for v in by_class.values())
    vocab = sorted(set().union(*(f.text_presence for fs in by_class.values() for f in fs)))

    priors, means, variances, binary_probs, term_probs = {}, {}, {}, {}, {}
    for c, fs in by_class.items():
        n = len(fs)
        priors[c] = n / total
        cols = list(zip(*(_transform(f.numeric, log_counts) for f in fs)))
        mu = [math.fsum(col) / n for col in cols]
        var = [max(math.fsum((x - m) ** 2 for x in col) / n, VARIANCE_FLOOR) for col, m in zip(cols, mu)]
        means[c], variances[c] = mu, var
        binary_probs[c] = [
            (sum(1 for f in fs if f.binary[i]) + 1) / (n + 2) for i in range(len(BINARY_FEATURES))
        ]
        doc_freq = dict.fromkeys(vocab, 0)
        for f in fs:
            for t in f.text_presence:
                doc_freq[t] += 1
        term_probs[c] = {t: (df + 1) / (n + 2) for t, df in doc_freq.items()}

    return PublisherModel(priors, means, variances, binary_probs, term_probs, log_counts, threshold)


def _gauss_logpdf(x: float, mean: float, var: float) -> float:
    return -0.5 * math.log(2.0 * math.pi * var) - (x - mean) ** 2 / (2.0 * var)


def log_joint(m: PublisherModel, f: PublisherFeatures) -> dict[str, float]:
    """Unnormalized log posterior per class."""
    x = _transform(f.numeric, m.log_counts)
    out = {}
    for c in CLASSES:
        lp = math.log(m.priors[c])
        for xi, mu, var in zip(x, m.means[c], m.variances[c]):
            lp += _gauss_logpdf(xi, mu, var)
        for present, p in zip(f.binary, m.binary_probs[c]):
            lp += math.log(p if present else 1.0 - p)
        tp = m.term_probs[c]
        for t in sorted(tp):
            p = tp[t]
            lp += math.log(p if t in f.text_presence else 1.0 - p)
        out[c] = lp
    return out


def posterior_from_log_joint(scores: dict[str, float]) -> dict[str, float]:
    hi = max(scores.values())
    w = {c: math.exp(s - hi) for c, s in scores.items()}
    z = sum(w.values())
    return {c: v / z for c, v in w.items()}


def classify(m: PublisherModel, f: PublisherFeatures) -> tuple[str, float]:
    """Return ``(label, posterior of that label)``.

    The account is a publisher only when its publisher posterior strictly
    exceeds the model threshold, so an exact tie resolves to ``other``.
    """
    post = posterior_from_log_joint(log_joint(m, f))
    label = PUBLISHER if post[PUBLISHER] > m.threshold else OTHER
    return label, post[label]


def evaluate_precision(predictions: Sequence[str], truth: Sequence[str]) -> float:
    if len(predictions) != len(truth):
        raise ValueError("predictions and truth must be aligned")
    predicted = [i for i, p in enumerate(predictions) if p == PUBLISHER]
    if not predicted:
        raise NoPositivePredictions("no account was predicted as publisher")
    correct = sum(1 for i in predicted if truth[i] == PUBLISHER)
    return correct / len(predicted)
