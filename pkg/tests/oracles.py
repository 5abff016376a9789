"""Direct-formula reference implementations used by the tests.

Deliberately written from the measure definitions, not from the package
code: plain loops over raw (site, event, time, divergence) tuples.
"""

from __future__ import annotations

import numpy as np

from newsrank.measures import ArticleAssignment


def diversity(site, arts, k):
    covered = set()
    for a in arts:
        if a.site == site and a.is_reporting:
            covered.add(a.event_id)
    return len(covered) / k


def completeness(site, arts):
    sims = [-a.divergence for a in arts if a.site == site and a.is_reporting]
    if not sims:
        return None
    return sum(sims) / len(sims)


def per_event_ratios(site, arts, delta0):
    """{event: ratio} for every event the site reports."""
    out = {}
    events = sorted({a.event_id for a in arts if a.is_reporting})
    for e in events:
        first = {}
        for a in arts:
            if a.event_id == e and a.is_reporting:
                first[a.site] = min(first.get(a.site, a.published_at), a.published_at)
        if site not in first:
            continue
        ts = sorted(first.values())
        fastest, slowest = ts[0], ts[-1]
        gap = ts[1] - ts[0] if len(ts) > 1 and ts[1] != ts[0] else delta0
        out[e] = (slowest - fastest + gap) / (first[site] - fastest + gap)
    return out


def speed(site, arts, delta0):
    r = per_event_ratios(site, arts, delta0)
    if not r:
        return None
    return sum(r.values()) / len(r)


def random_instance(rng: np.random.Generator, tau: float):
    """Random assignments: up to 5 sites, 10 events, 50 articles."""
    n_sites = int(rng.integers(1, 6))
    sites = [f"S{i}" for i in range(n_sites)]
    k = int(rng.integers(1, 11))
    n_arts = int(rng.integers(0, 51))
    arts = []
    for i in range(n_arts):
        div = float(rng.uniform(0, np.log(2)))
        arts.append(ArticleAssignment(
            article_id=f"a{i}",
            event_id=int(rng.integers(0, k)),
            divergence=div,
            is_reporting=div <= tau,
            site=sites[int(rng.integers(0, n_sites))],
            published_at=int(rng.integers(0, 5)) * 60 if rng.random() < 0.3 else int(rng.integers(0, 10**6)),
        ))
    return sites, k, arts
