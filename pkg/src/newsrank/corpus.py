"""Loading, validation and time-windowing of the input corpora.

All three corpora are line-delimited JSON, one record per line.  Records
are parsed into frozen dataclasses; any schema violation aborts the load
with the offending line number.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Iterator, Sequence, TypeVar

from .errors import DuplicateId, MalformedRecord, UnknownSite

OTHER_SITE = "OTHER"

T = TypeVar("T")


@dataclass(frozen=True)
class Tweet:
    id: str
    user_id: str
    text: str
    created_at: int

    @property
    def timestamp(self) -> int:
        return self.created_at


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    username: str
    description: str
    followers: int
    following: int
    tweets_count: int
    favourites_count: int
    listed_count: int
    verified: bool
    has_url: bool
    label: str | None = None


@dataclass(frozen=True)
class NewsArticle:
    id: str
    site: str
    url: str
    title: str
    body: str
    published_at: int

    @property
    def timestamp(self) -> int:
        return self.published_at

    @property
    def text(self) -> str:
        return f"{self.title}\n{self.body}"


@dataclass(frozen=True)
class SiteId:
    name: str
    domains: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.name:
            raise ValueError("site name must be non-empty")
        for d in self.domains:
            if d != d.lower() or "/" in d or ":" in d or not d:
                raise ValueError(f"invalid domain {d!r} for site {self.name}")


@dataclass(frozen=True)
class TimeWindow:
    start: int
    end: int

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"empty time window [{self.start}, {self.end})")

    def __contains__(self, t: int) -> bool:
        return self.start <= t < self.end


LABELS = ("publisher", "other")


def _check_str(rec, key, path, lineno, *, nonempty=False):
    if key not in rec:
        raise MalformedRecord(path, lineno, f"missing field {key!r}")
    v = rec[key]
    if not isinstance(v, str):
        raise MalformedRecord(path, lineno, f"field {key!r} must be a string")
    if nonempty and not v:
        raise MalformedRecord(path, lineno, f"field {key!r} must be non-empty")
    return v


def _check_count(rec, key, path, lineno):
    if key not in rec:
        raise MalformedRecord(path, lineno, f"missing field {key!r}")
    v = rec[key]
    # bool is an int subclass; reject it explicitly
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise MalformedRecord(path, lineno, f"field {key!r} must be a non-negative integer")
    return v


def _check_bool(rec, key, path, lineno):
    if key not in rec:
        raise MalformedRecord(path, lineno, f"missing field {key!r}")
    v = rec[key]
    if not isinstance(v, bool):
        raise MalformedRecord(path, lineno, f"field {key!r} must be a boolean")
    return v


def _iter_jsonl(path) -> Iterator[tuple[int, dict]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(path, lineno, f"invalid JSON: {exc.msg}") from None
            if not isinstance(rec, dict):
                raise MalformedRecord(path, lineno, "record must be a JSON object")
            yield lineno, rec


def _load(path, parse: Callable[[dict, Any, int], T], key: Callable[[T], str]) -> list[T]:
    out: list[T] = []
    seen: set[str] = set()
    for lineno, rec in _iter_jsonl(path):
        item = parse(rec, path, lineno)
        k = key(item)
        if k in seen:
            raise DuplicateId(path, lineno, k)
        seen.add(k)
        out.append(item)
    return out


def _parse_tweet(rec, path, lineno) -> Tweet:
    return Tweet(
        id=_check_str(rec, "id", path, lineno, nonempty=True),
        user_id=_check_str(rec, "user_id", path, lineno, nonempty=True),
        text=_check_str(rec, "text", path, lineno),
        created_at=_check_count(rec, "created_at", path, lineno),
    )


def _parse_user(rec, path, lineno) -> UserProfile:
    label = rec.get("label")
    if label is not None and label not in LABELS:
        raise MalformedRecord(path, lineno, f"label must be one of {LABELS}, got {label!r}")
    return UserProfile(
        user_id=_check_str(rec, "user_id", path, lineno, nonempty=True),
        username=_check_str(rec, "username", path, lineno),
        description=_check_str(rec, "description", path, lineno),
        followers=_check_count(rec, "followers", path, lineno),
        following=_check_count(rec, "following", path, lineno),
        tweets_count=_check_count(rec, "tweets_count", path, lineno),
        favourites_count=_check_count(rec, "favourites_count", path, lineno),
        listed_count=_check_count(rec, "listed_count", path, lineno),
        verified=_check_bool(rec, "verified", path, lineno),
        has_url=_check_bool(rec, "has_url", path, lineno),
        label=label,
    )


def load_tweets(path) -> list[Tweet]:
    return _load(path, _parse_tweet, lambda t: t.id)


def load_user_profiles(path) -> list[UserProfile]:
    return _load(path, _parse_user, lambda u: u.user_id)


def load_articles(path, sites: Sequence[SiteId] | None = None, *, strict: bool = True) -> list[NewsArticle]:
    """Load news articles and attribute each one to a configured site.

    With ``sites`` given, an article whose ``site`` is not a configured name
    raises :class:`UnknownSite` in strict mode; otherwise it is relabelled
    ``"OTHER"`` and later excluded from ranking.
    """
    names = None if sites is None else {s.name for s in sites}

    def parse(rec, path, lineno):
        art = NewsArticle(
            id=_check_str(rec, "id", path, lineno, nonempty=True),
            site=_check_str(rec, "site", path, lineno, nonempty=True),
            url=_check_str(rec, "url", path, lineno),
            title=_check_str(rec, "title", path, lineno),
            body=_check_str(rec, "body", path, lineno),
            published_at=_check_count(rec, "published_at", path, lineno),
        )
        if names is not None and art.site not in names:
            if strict:
                raise UnknownSite(f"{path}:{lineno}: article {art.id!r} has unknown site {art.site!r}")
            art = NewsArticle(art.id, OTHER_SITE, art.url, art.title, art.body, art.published_at)
        return art

    return _load(path, parse, lambda a: a.id)


def parse_sites(raw: Iterable[dict]) -> list[SiteId]:
    sites = [SiteId(name=r["name"], domains=tuple(r.get("domains", ()))) for r in raw]
    names = [s.name for s in sites]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate site names in registry: {names}")
    return sites


def partition_by_site(articles: Iterable[NewsArticle]) -> dict[str, list[NewsArticle]]:
    parts: dict[str, list[NewsArticle]] = {}
    for a in articles:
        parts.setdefault(a.site, []).append(a)
    return parts


def filter_window(items: Iterable[T], window: TimeWindow, key: Callable[[T], int] | None = None) -> list[T]:
    """Keep items with ``window.start <= timestamp < window.end``, in order."""
    if key is None:
        key = lambda item: item.timestamp  # noqa: E731
    return [it for it in items if window.start <= key(it) < window.end]


def corpus_span(*collections: Iterable[Any]) -> TimeWindow | None:
    """Smallest window covering every timestamped item, or None when empty."""
    ts = [it.timestamp for coll in collections for it in coll]
    if not ts:
        return None
    return TimeWindow(min(ts), max(ts) + 1)


def dump_jsonl(records: Iterable[Any], path) -> None:
    """Write dataclass records as JSONL; the inverse of the loaders."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            d = asdict(r) if hasattr(r, "__dataclass_fields__") else dict(r)
            if isinstance(r, UserProfile) and d.get("label") is None:
                d.pop("label")
            fh.write(json.dumps(d, ensure_ascii=False, sort_keys=True) + "\n")
