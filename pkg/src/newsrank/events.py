"""Event detection: GSDMM clustering of publisher tweets.

The collapsed Gibbs sampler for the Dirichlet multinomial mixture assigns
every short document to exactly one cluster.  For document ``d`` and
cluster ``k`` (with ``d`` removed from the counts) the unnormalized log
weight is::

    log((m_k + alpha) / (D - 1 + K*alpha))
      + sum_{w in d} sum_{j=1..c(w,d)} log(n_k^w + beta + j - 1)
      - sum_{i=1..|d|} log(n_k + V*beta + i - 1)

The sweep itself runs in a compiled kernel when available and falls back
to an equivalent pure-Python loop otherwise.  ``NEWSRANK_BACKEND=python``
forces the fallback.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import _gsdmm_py
from .errors import EmptyCorpus
from .preprocess import TokenizedDoc, Vocabulary, build_vocabulary

try:
    from . import _gsdmm_ext
except ImportError:  # pragma: no cover - depends on the build
    _gsdmm_ext = None

log = logging.getLogger(__name__)

BACKENDS = ("cython", "python")


def available_backends() -> list[str]:
    return [b for b in BACKENDS if b == "python" or _gsdmm_ext is not None]


def default_backend() -> str:
    forced = os.environ.get("NEWSRANK_BACKEND", "").strip().lower()
    if forced:
        if forced not in available_backends():
            raise RuntimeError(f"NEWSRANK_BACKEND={forced!r} is not available")
        return forced
    return "cython" if _gsdmm_ext is not None else "python"


def _kernel(backend: str | None):
    backend = backend or default_backend()
    if backend == "cython":
        if _gsdmm_ext is None:
            raise RuntimeError("compiled GSDMM kernel is not built")
        return _gsdmm_ext.sweep
    if backend == "python":
        return _gsdmm_py.sweep
    raise ValueError(f"unknown backend {backend!r}")


@dataclass(frozen=True)
class GsdmmParams:
    alpha: float = 0.1
    beta: float = 0.1
    K: int = 50
    iterations: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if self.K < 1 or self.iterations < 1:
            raise ValueError("K and iterations must be positive")


@dataclass
class EncodedCorpus:
    """CSR layout of the documents over vocabulary indices, sorted per document."""

    doc_ptr: np.ndarray
    doc_words: np.ndarray
    doc_counts: np.ndarray
    doc_len: np.ndarray

    @property
    def n_docs(self) -> int:
        return len(self.doc_len)

    def doc(self, d: int) -> dict[int, int]:
        s, e = self.doc_ptr[d], self.doc_ptr[d + 1]
        return dict(zip(self.doc_words[s:e].tolist(), self.doc_counts[s:e].tolist()))


def encode(docs: Sequence[TokenizedDoc], vocab: Vocabulary) -> EncodedCorpus:
    ptr = [0]
    words: list[int] = []
    counts: list[int] = []
    for doc in docs:
        pairs = sorted((vocab.index(t), c) for t, c in doc.term_counts.items())
        words.extend(w for w, _ in pairs)
        counts.extend(c for _, c in pairs)
        ptr.append(len(words))
    return EncodedCorpus(
        np.asarray(ptr, dtype=np.int64),
        np.asarray(words, dtype=np.int64),
        np.asarray(counts, dtype=np.int64),
        np.asarray([len(d) for d in docs], dtype=np.int64),
    )


@dataclass
class GsdmmState:
    z: np.ndarray
    m: np.ndarray
    n: np.ndarray
    nw: np.ndarray
    D: int
    V: int

    @property
    def K(self) -> int:
        return len(self.m)

    def check(self, corpus: EncodedCorpus | None = None) -> None:
        """Assert count consistency; optionally recount from the assignments."""
        assert int(self.m.sum()) == self.D
        assert np.array_equal(self.nw.sum(axis=1), self.n)
        assert (self.m >= 0).all() and (self.n >= 0).all() and (self.nw >= 0).all()
        if corpus is not None:
            fresh = _counts_from(self.z, corpus, self.K, self.V)
            assert all(np.array_equal(a, b) for a, b in zip(fresh, (self.m, self.n, self.nw)))

    def n_clusters(self) -> int:
        return int(np.count_nonzero(self.m))


def _counts_from(z, corpus: EncodedCorpus, K: int, V: int):
    m = np.zeros(K, dtype=np.int64)
    n = np.zeros(K, dtype=np.int64)
    nw = np.zeros((K, V), dtype=np.int64)
    for d, k in enumerate(z.tolist()):
        m[k] += 1
        n[k] += corpus.doc_len[d]
        s, e = corpus.doc_ptr[d], corpus.doc_ptr[d + 1]
        np.add.at(nw[k], corpus.doc_words[s:e], corpus.doc_counts[s:e])
    return m, n, nw


def init_assignments(corpus: EncodedCorpus, V: int, params: GsdmmParams, rng: np.random.Generator) -> GsdmmState:
    if corpus.n_docs == 0:
        raise EmptyCorpus("GSDMM needs at least one document")
    z = rng.integers(0, params.K, size=corpus.n_docs).astype(np.int64)
    m, n, nw = _counts_from(z, corpus, params.K, V)
    return GsdmmState(z, m, n, nw, corpus.n_docs, V)


def conditional_log_prob(state: GsdmmState, doc: Mapping[int, int], k: int, params: GsdmmParams) -> float:
    """Unnormalized log weight of cluster ``k`` for a document already removed from ``state``."""
    words = sorted(doc)
    counts = [doc[w] for w in words]
    return _gsdmm_py.cluster_log_weight(
        k, state.m.tolist(), state.n.tolist(), state.nw[k].tolist(),
        words, counts, sum(counts), state.D, params.alpha, params.beta, state.K, state.V,
    )


def conditional_distribution(state: GsdmmState, doc: Mapping[int, int], params: GsdmmParams) -> np.ndarray:
    logp = np.array([conditional_log_prob(state, doc, k, params) for k in range(state.K)])
    w = np.exp(logp - logp.max())
    return w / w.sum()


def remove_doc(state: GsdmmState, d: int, doc: Mapping[int, int]) -> None:
    k = state.z[d]
    state.m[k] -= 1
    for w, c in doc.items():
        state.nw[k, w] -= c
        state.n[k] -= c


def gibbs_sample(
    docs: Sequence[TokenizedDoc],
    params: GsdmmParams,
    *,
    vocab: Vocabulary | None = None,
    backend: str | None = None,
    check: bool = False,
) -> tuple[GsdmmState, Vocabulary]:
    """Run ``params.iterations`` seeded sweeps; return the final state and vocabulary."""
    if not docs:
        raise EmptyCorpus("GSDMM needs at least one document")
    vocab = vocab or build_vocabulary(docs)
    corpus = encode(docs, vocab)
    rng = np.random.default_rng(params.seed)
    state = init_assignments(corpus, vocab.size, params, rng)
    sweep = _kernel(backend)
    log.debug("gsdmm: D=%d V=%d K=%d backend=%s", state.D, state.V, params.K, backend or default_backend())
    for it in range(params.iterations):
        uniforms = rng.random(corpus.n_docs)
        sweep(state.z, state.m, state.n, state.nw,
              corpus.doc_ptr, corpus.doc_words, corpus.doc_counts, corpus.doc_len,
              uniforms, float(params.alpha), float(params.beta), params.K, vocab.size)
        if check:
            state.check(corpus)
        log.debug("gsdmm: sweep %d non-empty clusters=%d", it + 1, state.n_clusters())
    return state, vocab


@dataclass(frozen=True)
class EventCluster:
    event_id: int
    members: tuple[str, ...]
    term_counts: dict[str, int] = field(compare=False, hash=False, repr=False)
    onset: int = 0


def event_onset(cluster: EventCluster, times: Mapping[str, int]) -> int:
    return min(times[t] for t in cluster.members)


def clusters_from_state(
    state: GsdmmState,
    docs: Sequence[TokenizedDoc],
    times: Mapping[str, int],
    *,
    min_cluster_size: int = 1,
) -> list[EventCluster]:
    """Turn non-empty clusters into events; ``event_id`` is the cluster index."""
    members: dict[int, list[TokenizedDoc]] = {}
    for doc, k in zip(docs, state.z.tolist()):
        members.setdefault(k, []).append(doc)
    events = []
    for k in sorted(members):
        group = members[k]
        if len(group) < max(min_cluster_size, 1):
            continue
        counts: dict[str, int] = {}
        for doc in group:
            for t, c in doc.term_counts.items():
                counts[t] = counts.get(t, 0) + c
        ids = tuple(doc.source_id for doc in group)
        ev = EventCluster(k, ids, dict(sorted(counts.items())), 0)
        events.append(EventCluster(k, ids, ev.term_counts, event_onset(ev, times)))
    return events


def run(
    docs: Sequence[TokenizedDoc],
    params: GsdmmParams,
    times: Mapping[str, int],
    *,
    min_cluster_size: int = 1,
    backend: str | None = None,
) -> list[EventCluster]:
    state, _ = gibbs_sample(docs, params, backend=backend)
    return clusters_from_state(state, docs, times, min_cluster_size=min_cluster_size)


def purity(assignments: Sequence[int], labels: Sequence) -> float:
    """Fraction of documents whose cluster's majority label matches their own."""
    groups: dict[int, dict] = {}
    for k, y in zip(assignments, labels):
        g = groups.setdefault(k, {})
        g[y] = g.get(y, 0) + 1
    return sum(max(g.values()) for g in groups.values()) / len(assignments)

