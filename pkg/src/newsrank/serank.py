"""Search-engine based site ranking.

Each event becomes a query of its ten most probable terms.  Every search
result whose host belongs to a configured site earns that site
``10 - rank`` points.
"""

from __future__ import annotations

import json
import logging
import re
import time
import urllib.parse
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

from .corpus import SiteId
from .errors import ClientUnavailable, MalformedUrl, MissingFixture
from .langmodel import LanguageModel, top_k_words

log = logging.getLogger(__name__)

QUERY_TERMS = 10
MAX_RESULTS = 10


@dataclass(frozen=True)
class Query:
    event_id: int
    terms: tuple[str, ...]

    @property
    def text(self) -> str:
        """Canonical query string; fixtures are keyed on it byte for byte."""
        return " ".join(self.terms)


@dataclass(frozen=True)
class SearchResult:
    event_id: int
    rank: int
    url: str


class SearchClient(Protocol):
    def results(self, query: str) -> list[str]: ...


def build_queries(event_lms: Mapping[int, LanguageModel]) -> list[Query]:
    return [Query(eid, tuple(top_k_words(event_lms[eid], QUERY_TERMS))) for eid in sorted(event_lms)]


class FixtureSearchClient:
    """Replays recorded result lists from a JSON map ``{query: [url, ...]}``."""

    def __init__(self, recorded: Mapping[str, Sequence[str]], *, strict: bool = True, name: str = "fixture"):
        self.recorded = {q: list(urls) for q, urls in recorded.items()}
        self.strict = strict
        self.name = name

    @classmethod
    def from_file(cls, path, *, strict: bool = True, name: str | None = None) -> "FixtureSearchClient":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: fixture must be a JSON object")
        return cls(data, strict=strict, name=name or Path(path).stem)

    def results(self, query: str) -> list[str]:
        if query not in self.recorded:
            if self.strict:
                raise MissingFixture(query)
            return []
        return self.recorded[query]


class HttpSearchClient:
    """Live adapter: one request at a time, spaced out, every answer cached to a fixture file.

    ``endpoint`` is a URL template with a ``{query}`` placeholder.  Result
    links are pulled from the response with ``link_pattern``.  Not exercised
    by the test suite.
    """

    def __init__(self, endpoint: str, cache_path, *, spacing: float = 1.0, timeout: float = 10.0,
                 link_pattern: str = r'href="(https?://[^"]+)"', user_agent: str = "newsrank/0.1"):
        self.endpoint = endpoint
        self.cache_path = Path(cache_path)
        self.spacing = max(spacing, 1.0)
        self.timeout = timeout
        self.link_re = re.compile(link_pattern)
        self.user_agent = user_agent
        self._last = 0.0
        self.cache: dict[str, list[str]] = {}
        if self.cache_path.exists():
            self.cache = json.loads(self.cache_path.read_text(encoding="utf-8"))

    def results(self, query: str) -> list[str]:
        if query in self.cache:
            return self.cache[query]
        wait = self._last + self.spacing - time.monotonic()
        if wait > 0:
            time.sleep(wait)
        url = self.endpoint.format(query=urllib.parse.quote_plus(query))
        req = urllib.request.Request(url, headers={"User-Agent": self.user_agent})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = resp.read().decode("utf-8", errors="replace")
        except OSError as exc:
            raise ClientUnavailable(f"search request failed: {exc}") from exc
        finally:
            self._last = time.monotonic()
        engine_host = urllib.parse.urlsplit(self.endpoint).hostname or ""
        urls: list[str] = []
        for link in self.link_re.findall(body):
            host = urllib.parse.urlsplit(link).hostname or ""
            if host and not host.endswith(engine_host) and link not in urls:
                urls.append(link)
            if len(urls) == MAX_RESULTS:
                break
        self.cache[query] = urls
        self.cache_path.write_text(json.dumps(self.cache, indent=1, sort_keys=True), encoding="utf-8")
        return urls


def search(client: SearchClient, q: Query) -> list[SearchResult]:
    urls = client.results(q.text)[:MAX_RESULTS]
    return [SearchResult(q.event_id, i, u) for i, u in enumerate(urls, start=1)]


def host_match(url: str, sites: Sequence[SiteId]) -> SiteId | None:
    try:
        host = urllib.parse.urlsplit(url).hostname
    except ValueError as exc:
        raise MalformedUrl(f"cannot parse {url!r}: {exc}") from None
    if not host:
        raise MalformedUrl(f"no host in {url!r}")
    host = host.lower().rstrip(".")
    for site in sites:
        for dom in site.domains:
            if host == dom or host.endswith("." + dom):
                return site
    return None


def score(
    results: Iterable[Sequence[SearchResult]],
    sites: Sequence[SiteId],
    *,
    rank_base: int = 1,
) -> dict[str, int]:
    """Accumulate ``10 - rank`` per matched result.

    ``results`` is one result list per query.  With ``rank_base=0`` the top
    result counts as rank 0 and scores 10.
    """
    if rank_base not in (0, 1):
        raise ValueError("rank_base must be 0 or 1")
    table = {s.name: 0 for s in sites}
    for per_query in results:
        for r in per_query:
            site = host_match(r.url, sites)
            if site is not None:
                table[site.name] += MAX_RESULTS - (r.rank - 1 + rank_base)
    return table


def run_engine(client: SearchClient, queries: Sequence[Query], sites: Sequence[SiteId], *, rank_base: int = 1) -> dict[str, int]:
    return score((search(client, q) for q in queries), sites, rank_base=rank_base)
