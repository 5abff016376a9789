"""Site-ranking measures: news diversity, news completeness and speed."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import EmptyEventSet
from .langmodel import JSD_MIXTURE, LanguageModel, js_divergence

DEFAULT_TAU = 0.6
DEFAULT_DELTA0 = 60

MEASURES = ("diversity", "completeness", "speed")


@dataclass(frozen=True)
class ArticleAssignment:
    article_id: str
    event_id: int
    divergence: float
    is_reporting: bool
    site: str = ""
    published_at: int = 0


@dataclass
class MeasureReport:
    sites: dict[str, dict[str, float | None]]
    rankings: dict[str, list[str]] = field(default_factory=dict)
    k: int = 0


def assign_articles(
    articles: Sequence[tuple[object, LanguageModel]],
    event_lms: Mapping[int, LanguageModel],
    *,
    tau: float = DEFAULT_TAU,
    mode: str = JSD_MIXTURE,
) -> list[ArticleAssignment]:
    """Pair each article with its least-divergent event.

    ``articles`` holds ``(NewsArticle, language model)`` pairs.  Ties go to
    the lowest event id; an article reports its event only when the
    divergence does not exceed ``tau``.
    """
    if not event_lms:
        raise EmptyEventSet("cannot assign articles without events")
    event_ids = sorted(event_lms)
    out = []
    for art, lm in articles:
        best_id, best_div = event_ids[0], js_divergence(lm, event_lms[event_ids[0]], mode)
        for eid in event_ids[1:]:
            div = js_divergence(lm, event_lms[eid], mode)
            if div < best_div:
                best_id, best_div = eid, div
        out.append(ArticleAssignment(art.id, best_id, best_div, best_div <= tau, art.site, art.published_at))
    return out


def _reporting(site: str, assignments: Iterable[ArticleAssignment]) -> list[ArticleAssignment]:
    return [a for a in assignments if a.site == site and a.is_reporting]


def diversity(site: str, assignments: Sequence[ArticleAssignment], k: int) -> float:
    if k < 1:
        raise EmptyEventSet("diversity needs at least one event")
    return len({a.event_id for a in _reporting(site, assignments)}) / k


def completeness(site: str, assignments: Sequence[ArticleAssignment]) -> float | None:
    reps = _reporting(site, assignments)
    if not reps:
        return None
    return sum(-a.divergence for a in reps) / len(reps)


def earliest_reports(assignments: Iterable[ArticleAssignment]) -> dict[int, dict[str, int]]:
    """Per event, each site's earliest reporting-article publish time."""
    first: dict[int, dict[str, int]] = {}
    for a in assignments:
        if not a.is_reporting:
            continue
        per_site = first.setdefault(a.event_id, {})
        if a.site not in per_site or a.published_at < per_site[a.site]:
            per_site[a.site] = a.published_at
    return first


def event_gap(times: Iterable[int], delta0: float = DEFAULT_DELTA0) -> float:
    """Gap between the two earliest per-site times; ``delta0`` when fewer than two or tied."""
    ordered = sorted(times)
    if len(ordered) < 2 or ordered[1] == ordered[0]:
        return delta0
    return ordered[1] - ordered[0]


def speed_ratios(site: str, earliest: Mapping[int, Mapping[str, int]], delta0: float = DEFAULT_DELTA0) -> dict[int, float]:
    ratios = {}
    for eid in sorted(earliest):
        per_site = earliest[eid]
        if site not in per_site:
            continue
        t_min = min(per_site.values())
        t_max = max(per_site.values())
        gap = event_gap(per_site.values(), delta0)
        ratios[eid] = (t_max - t_min + gap) / (per_site[site] - t_min + gap)
    return ratios


def speed(site: str, earliest: Mapping[int, Mapping[str, int]], delta0: float = DEFAULT_DELTA0) -> float | None:
    ratios = speed_ratios(site, earliest, delta0)
    if not ratios:
        return None
    return sum(ratios.values()) / len(ratios)


def rank_sites(values: Mapping[str, float | None]) -> list[str]:
    """Best first; missing values last; equal values by site name."""
    present = sorted((s for s, v in values.items() if v is not None), key=lambda s: (-values[s], s))
    missing = sorted(s for s, v in values.items() if v is None)
    return present + missing


def compute_measures(
    sites: Sequence[str],
    assignments: Sequence[ArticleAssignment],
    k: int,
    *,
    delta0: float = DEFAULT_DELTA0,
) -> MeasureReport:
    earliest = earliest_reports(assignments)
    table = {
        s: {
            "diversity": diversity(s, assignments, k),
            "completeness": completeness(s, assignments),
            "speed": speed(s, earliest, delta0),
        }
        for s in sites
    }
    rankings = {m: rank_sites({s: table[s][m] for s in sites}) for m in MEASURES}
    return MeasureReport(table, rankings, k)
