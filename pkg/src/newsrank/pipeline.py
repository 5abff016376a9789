"""Stage-by-stage orchestration.

Every stage reads its inputs from the configured corpora and from earlier
stage files in the output directory, and persists its own result there, so
stages can be rerun one at a time.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from . import corpus, events, langmodel, measures, publisher, serank
from .config import PipelineConfig
from .errors import NewsRankError, NoPositivePredictions, StageError
from .preprocess import ARTICLE, TWEET, Preprocessor, load_stopwords, stopwords_digest
from .report import render_tables

log = logging.getLogger(__name__)

PUBLISHER_MODEL = "publisher_model.json"
PUBLISHERS = "publishers.jsonl"
PUBLISHER_SUMMARY = "publisher_summary.json"
EVENTS = "events.jsonl"
ASSIGNMENTS = "assignments.jsonl"
MEASURES = "measures.json"
QUERIES = "queries.jsonl"
SERANK = "serank.json"
REPORT = "report.json"
TABLES = "tables.txt"


def write_json(path: Path, obj) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")


def read_json(path: Path):
    if not path.is_file():
        raise NewsRankError(f"missing stage file {path}; run the earlier stage first")
    return json.loads(path.read_text(encoding="utf-8"))


def write_jsonl(path: Path, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


def read_jsonl(path: Path) -> list[dict]:
    if not path.is_file():
        raise NewsRankError(f"missing stage file {path}; run the earlier stage first")
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


@dataclass
class Context:
    cfg: PipelineConfig
    backend: str | None = None

    def __post_init__(self):
        opts = self.cfg.section("preprocess")
        self.pre = Preprocessor(load_stopwords(self.cfg.stopwords_path), opts["stemmer"])
        self.out = self.cfg.out_dir
        self.out.mkdir(parents=True, exist_ok=True)
        self._tweets = None
        self._articles = None

    def tweets(self) -> list[corpus.Tweet]:
        if self._tweets is None:
            self._tweets = corpus.load_tweets(self.cfg.input_path("tweets"))
        return self._tweets

    def articles(self) -> list[corpus.NewsArticle]:
        if self._articles is None:
            self._articles = corpus.load_articles(
                self.cfg.input_path("articles"), self.cfg.sites, strict=self.cfg.raw["strict_sites"]
            )
        return self._articles

    def window(self) -> corpus.TimeWindow | None:
        w = self.cfg.window
        if w is not None:
            return w
        items = [self.tweets()]
        if self.cfg.input_path("articles") is not None and self.cfg.input_path("articles").is_file():
            items.append(self.articles())
        return corpus.corpus_span(*items)


def classify_publishers(ctx: Context) -> dict:
    opts = ctx.cfg.section("publisher")
    if opts["model"]:
        model = publisher.PublisherModel.load(ctx.cfg.resolve(opts["model"]))
    else:
        training = corpus.load_user_profiles(ctx.cfg.input_path("training_users"))
        labeled = [(publisher.extract_features(u, ctx.pre), u.label) for u in training if u.label is not None]
        model = publisher.train(labeled, log_counts=opts["log_counts"], threshold=opts["threshold"])
        log.info("publisher model: %d labelled profiles, %d text features", len(labeled), len(model.terms))
    model.threshold = opts["threshold"]
    model.save(ctx.out / PUBLISHER_MODEL)

    users = corpus.load_user_profiles(ctx.cfg.input_path("users"))
    rows, preds, truth = [], [], []
    for u in users:
        label, post = publisher.classify(model, publisher.extract_features(u, ctx.pre))
        rows.append({"user_id": u.user_id, "username": u.username, "label": label, "posterior": post})
        if u.label is not None:
            preds.append(label)
            truth.append(u.label)
    write_jsonl(ctx.out / PUBLISHERS, rows)

    precision = None
    if truth:
        try:
            precision = publisher.evaluate_precision(preds, truth)
        except NoPositivePredictions:
            log.warning("no user predicted as publisher; precision undefined")
    summary = {
        "n_users": len(users),
        "n_publishers": sum(1 for r in rows if r["label"] == publisher.PUBLISHER),
        "precision": precision,
    }
    write_json(ctx.out / PUBLISHER_SUMMARY, summary)
    return summary


def _publisher_docs(ctx: Context) -> tuple[list, dict[str, int]]:
    """Window-filtered publisher tweets as non-empty tokenized docs, plus tweet times."""
    pubs = {r["user_id"] for r in read_jsonl(ctx.out / PUBLISHERS) if r["label"] == publisher.PUBLISHER}
    tweets = ctx.tweets()
    window = ctx.window()
    if window is not None:
        tweets = corpus.filter_window(tweets, window)
    kept = [t for t in tweets if t.user_id in pubs]
    log.info("publisher filter: %d -> %d tweets", len(tweets), len(kept))
    docs = [ctx.pre.doc(t.id, t.text, TWEET) for t in kept]
    docs = [d for d in docs if len(d)]
    return docs, {t.id: t.created_at for t in kept}


def detect_events(ctx: Context) -> list[events.EventCluster]:
    docs, times = _publisher_docs(ctx)
    params = ctx.cfg.gsdmm
    opts = ctx.cfg.section("events")
    found = events.run(docs, params, times, min_cluster_size=opts["min_cluster_size"], backend=ctx.backend)
    log.info("gsdmm: %d events from %d tweets", len(found), len(docs))
    rows = []
    for ev in found:
        top = langmodel.top_k_words(langmodel.mle_cluster(ev), opts["top_words"])
        rows.append({"event_id": ev.event_id, "member_tweet_ids": list(ev.members), "onset": ev.onset, "top_words": top})
    write_jsonl(ctx.out / EVENTS, rows)
    return found


def load_events(ctx: Context) -> list[events.EventCluster]:
    """Rebuild event clusters, including pooled term counts, from the events stage file."""
    rows = read_jsonl(ctx.out / EVENTS)
    by_id = {t.id: t for t in ctx.tweets()}
    out = []
    for r in rows:
        counts: dict[str, int] = {}
        for tid in r["member_tweet_ids"]:
            for tok in ctx.pre.tokens(by_id[tid].text, TWEET):
                counts[tok] = counts.get(tok, 0) + 1
        out.append(events.EventCluster(r["event_id"], tuple(r["member_tweet_ids"]), dict(sorted(counts.items())), r["onset"]))
    return out


def rank(ctx: Context) -> measures.MeasureReport:
    evs = load_events(ctx)
    event_lms = {ev.event_id: langmodel.mle_cluster(ev) for ev in evs}
    opts = ctx.cfg.section("measures")
    window = ctx.window()
    arts = [a for a in ctx.articles() if a.site != corpus.OTHER_SITE]
    if window is not None:
        arts = corpus.filter_window(arts, window)
    pairs = []
    for a in arts:
        doc = ctx.pre.doc(a.id, a.text, ARTICLE)
        if len(doc):
            pairs.append((a, langmodel.mle(doc)))
        else:
            log.warning("article %s has no tokens after preprocessing; skipped", a.id)
    assignments = measures.assign_articles(pairs, event_lms, tau=opts["tau"], mode=opts["divergence_mode"])
    write_jsonl(ctx.out / ASSIGNMENTS, [
        {"article_id": x.article_id, "site": x.site, "event_id": x.event_id, "divergence": x.divergence,
         "is_reporting": x.is_reporting, "published_at": x.published_at}
        for x in assignments
    ])
    report = measures.compute_measures(ctx.cfg.site_names, assignments, len(evs), delta0=opts["delta0"])
    write_json(ctx.out / MEASURES, {
        "window": None if window is None else {"start": window.start, "end": window.end},
        "k": report.k,
        "sites": report.sites,
        "rankings": report.rankings,
        "n_articles": len(assignments),
        "n_reporting": sum(1 for x in assignments if x.is_reporting),
    })
    return report


def run_serank(ctx: Context) -> dict:
    evs = load_events(ctx)
    queries = serank.build_queries({ev.event_id: langmodel.mle_cluster(ev) for ev in evs})
    write_jsonl(ctx.out / QUERIES, [{"event_id": q.event_id, "query": q.text} for q in queries])
    opts = ctx.cfg.section("serank")
    sites = ctx.cfg.sites
    out = {}
    for engine in sorted(opts["engines"]):
        client = serank.FixtureSearchClient.from_file(ctx.cfg.resolve(opts["engines"][engine]), strict=opts["strict"], name=engine)
        scores = serank.run_engine(client, queries, sites, rank_base=opts["rank_base"])
        out[engine] = {"scores": scores, "ranking": measures.rank_sites(scores)}
    write_json(ctx.out / SERANK, out)
    return out


def build_report(ctx: Context) -> dict:
    meas = read_json(ctx.out / MEASURES)
    se = read_json(ctx.out / SERANK) if (ctx.out / SERANK).is_file() else {}
    pub = read_json(ctx.out / PUBLISHER_SUMMARY) if (ctx.out / PUBLISHER_SUMMARY).is_file() else None
    report = {
        "window": meas["window"],
        "k": meas["k"],
        "sites": meas["sites"],
        "rankings": meas["rankings"],
        "config_hash": ctx.cfg.digest(),
        "divergence_mode": ctx.cfg.section("measures")["divergence_mode"],
        "search_engines": se,
        "rank_base": ctx.cfg.section("serank")["rank_base"],
        "stopwords_sha256": stopwords_digest(ctx.cfg.stopwords_path),
        "publishers": pub,
        "n_articles": meas["n_articles"],
        "n_reporting": meas["n_reporting"],
    }
    write_json(ctx.out / REPORT, report)
    (ctx.out / TABLES).write_text(render_tables(report), encoding="utf-8")
    return report


STAGES = {
    "classify-publishers": classify_publishers,
    "detect-events": detect_events,
    "rank": rank,
    "serank": run_serank,
    "report": build_report,
}


def run_stage(ctx: Context, name: str):
    try:
        return STAGES[name](ctx)
    except StageError:
        raise
    except (NewsRankError, ValueError, KeyError, OSError) as exc:
        raise StageError(name, exc) from exc


def run_pipeline(cfg: PipelineConfig, *, backend: str | None = None) -> dict:
    """Run every stage in order and return the final report."""
    cfg.check_inputs("run")
    ctx = Context(cfg, backend)
    report = None
    for name in STAGES:
        log.info("stage %s", name)
        report = run_stage(ctx, name)
    return report
