"""Generate the bundled synthetic mini-corpus under minicorpus/.

Three sites, 60 tweets about four events plus chatter, 13 articles and
three recorded search-engine fixtures.  Fixtures are keyed on the queries
the pipeline derives from the detected events, so this script runs the
publisher and event stages once to learn them.  Rerun only when the
corpus design or the preprocessing/GSDMM behaviour changes, then refresh
tests/golden/mini_report.json.
"""

from __future__ import annotations

import json
import shutil
import tempfile
from pathlib import Path

import numpy as np

from newsrank import langmodel, serank
from newsrank.config import PipelineConfig
from newsrank.pipeline import Context, classify_publishers, detect_events, load_events

ROOT = Path(__file__).resolve().parents[1] / "minicorpus"
T0 = 1303948800  # 2011-04-28 00:00 UTC
HOUR = 3600

EVENTS = {
    "wedding": ["prince", "william", "kate", "middleton", "wedding", "westminster", "abbey", "royal",
                "ceremony", "dress", "crowds", "balcony"],
    "sudan": ["sudan", "darfur", "clooney", "obama", "george", "war", "crimes", "meeting", "referendum",
              "khartoum", "satellite", "genocide"],
    "atlanta": ["atlanta", "police", "shooting", "arrest", "ajc", "suspect", "georgia", "officers",
                "downtown", "wounded", "gunman", "investigators"],
    "wikileaks": ["wikileaks", "cables", "assange", "diplomatic", "leak", "embassy", "documents",
                  "julian", "bail", "extradition", "sweden", "secret"],
}
ONSETS = {"wedding": T0, "sudan": T0 + 5 * HOUR, "atlanta": T0 + 10 * HOUR, "wikileaks": T0 + 20 * HOUR}
CHATTER = ["coffee", "cats", "music", "weekend", "pizza", "movie", "gym", "sunny", "playlist", "brunch",
           "puppy", "netflix"]
FILLER = ["officials", "report", "according", "people", "government", "statement", "spokesman", "today",
          "latest", "reporters", "sources", "announced"]
SPORT = ["arsenal", "goal", "league", "match", "striker", "season", "penalty", "stadium"]

PUB_DESC = ["news", "breaking", "headlines", "reporter", "journalist", "world", "politics", "weather",
            "sports", "updates", "latest", "station", "coverage", "editor"]
OTHER_DESC = ["love", "coffee", "cats", "music", "life", "mom", "dad", "fan", "travel", "food", "gamer",
              "student", "dreamer", "yoga"]

SITES = [
    {"name": "BBC", "domains": ["bbc.co.uk", "bbc.com"]},
    {"name": "CNN", "domains": ["cnn.com"]},
    {"name": "NYTimes", "domains": ["nytimes.com"]},
]
SITE_URL = {"BBC": "https://www.bbc.co.uk/news/{}", "CNN": "https://edition.cnn.com/2011/{}",
            "NYTimes": "https://www.nytimes.com/2011/{}"}

# (site, event, minutes after the event onset, share of event words)
ARTICLES = [
    ("BBC", "wedding", 20, 0.8), ("BBC", "sudan", 35, 0.75), ("BBC", "wikileaks", 25, 0.8),
    ("BBC", None, 300, 0.0),
    ("CNN", "wedding", 90, 0.7), ("CNN", "wedding", 150, 0.75), ("CNN", "atlanta", 70, 0.8),
    ("CNN", "atlanta", 200, 0.7),
    ("NYTimes", "wedding", 45, 0.7), ("NYTimes", "sudan", 120, 0.8), ("NYTimes", "atlanta", 40, 0.75),
    ("NYTimes", "wikileaks", 60, 0.7), ("NYTimes", "wikileaks", 240, 0.65),
]


def profile(rng, uid, name, publisher):
    desc_words = PUB_DESC if publisher else OTHER_DESC
    followers = int(rng.lognormal(11 if publisher else 5.5, 1.0))
    following = int(rng.lognormal(6 if publisher else 5.5, 0.8))
    return {
        "user_id": uid,
        "username": name,
        "description": " ".join(rng.choice(desc_words, size=int(rng.integers(3, 7)), replace=False)),
        "followers": followers,
        "following": following,
        "tweets_count": int(rng.lognormal(10 if publisher else 7, 0.8)),
        "favourites_count": int(rng.lognormal(4 if publisher else 6, 1.0)),
        "listed_count": int(rng.lognormal(7 if publisher else 2, 1.0)),
        "verified": bool(rng.random() < (0.7 if publisher else 0.03)),
        "has_url": bool(rng.random() < (0.9 if publisher else 0.3)),
        "label": "publisher" if publisher else "other",
    }


def write_jsonl(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


def main() -> None:
    rng = np.random.default_rng(2011)
    ROOT.mkdir(exist_ok=True)

    training = [profile(rng, f"tr{i:03d}", f"trainer{i}", i < 15) for i in range(40)]
    write_jsonl(ROOT / "training_users.jsonl", training)

    names = ["CityNewsDesk", "WorldWireNow", "MetroHeadlines", "DailyBriefing", "CapitalReporter",
             "coffee_and_cats", "weekendvibes", "gymrat88"]
    users = [profile(rng, f"u{i}", n, i < 5) for i, n in enumerate(names)]
    write_jsonl(ROOT / "users.jsonl", users)

    tweets = []
    decorations = ["#{}", "@{} ", "{} http://t.co/x{}", "{}"]
    for ev_i, (ev, vocab) in enumerate(EVENTS.items()):
        for j in range(12):
            uid = f"u{(ev_i + j) % 5}"
            words = list(rng.choice(vocab, size=int(rng.integers(5, 8)), replace=False))
            deco = decorations[j % len(decorations)]
            if deco == "#{}":
                words[0] = "#" + words[0]
            elif deco == "@{} ":
                words.insert(0, "@" + names[(j + 1) % 5])
            elif deco.startswith("{} http"):
                words.append(f"http://t.co/x{ev_i}{j}")
            t = ONSETS[ev] + int(rng.integers(0, 90)) * 60
            tweets.append({"id": f"t{ev}{j:02d}", "user_id": uid, "text": " ".join(words).capitalize(), "created_at": t})
    for j in range(12):
        uid = f"u{5 + j % 3}"
        words = rng.choice(CHATTER, size=int(rng.integers(4, 7)), replace=False)
        tweets.append({"id": f"tchat{j:02d}", "user_id": uid, "text": "so much " + " ".join(words),
                       "created_at": T0 + int(rng.integers(0, 24 * 60)) * 60})
    tweets.sort(key=lambda r: (r["created_at"], r["id"]))
    write_jsonl(ROOT / "tweets.jsonl", tweets)

    articles = []
    for i, (site, ev, minutes, share) in enumerate(ARTICLES):
        vocab = EVENTS[ev] if ev else SPORT
        n = 40
        n_ev = int(round(n * share)) if ev else n
        words = list(rng.choice(vocab, size=n_ev)) + list(rng.choice(FILLER, size=n - n_ev))
        rng.shuffle(words)
        title = " ".join(rng.choice(vocab, size=5, replace=False)).title()
        onset = ONSETS[ev] if ev else T0
        articles.append({
            "id": f"a{i:02d}",
            "site": site,
            "url": SITE_URL[site].format(f"{ev or 'sport'}-{i}"),
            "title": title,
            "body": " ".join(words) + ".",
            "published_at": onset + minutes * 60,
        })
    write_jsonl(ROOT / "articles.jsonl", articles)

    config = {
        "inputs": {"tweets": "tweets.jsonl", "users": "users.jsonl",
                   "training_users": "training_users.jsonl", "articles": "articles.jsonl"},
        "sites": SITES,
        "gsdmm": {"alpha": 0.1, "beta": 0.1, "K": 10, "iterations": 10, "seed": 20110429},
        "events": {"min_cluster_size": 1, "top_words": 20},
        "measures": {"tau": 0.6, "delta0": 60, "divergence_mode": "jsd-mixture"},
        "serank": {"engines": {"Bing": "fixtures/bing.json", "Google": "fixtures/google.json",
                               "Yahoo": "fixtures/yahoo.json"}, "rank_base": 1, "strict": True},
        "out_dir": "out",
    }
    (ROOT / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")

    with tempfile.TemporaryDirectory() as tmp:
        cfg = PipelineConfig.from_file(ROOT / "config.json").with_overrides(out=tmp)
        ctx = Context(cfg)
        classify_publishers(ctx)
        detect_events(ctx)
        evs = load_events(ctx)
    queries = serank.build_queries({e.event_id: langmodel.mle_cluster(e) for e in evs})

    fixtures = ROOT / "fixtures"
    shutil.rmtree(fixtures, ignore_errors=True)
    fixtures.mkdir()
    other = ["https://en.wikipedia.org/wiki/{}", "https://www.theguardian.com/world/{}",
             "https://www.reuters.com/article/{}", "https://www.youtube.com/watch?v={}"]
    google, bing, yahoo = {}, {}, {}
    for i, q in enumerate(queries):
        slug = "-".join(q.terms[:3])
        filler = [u.format(f"{slug}-{j}") for j, u in enumerate(other)]
        g = filler[:3] + [SITE_URL["CNN"].format(slug)] + filler[3:] if i % 2 == 0 else filler[:]
        if i % 3 == 0:
            g.insert(5, SITE_URL["NYTimes"].format(slug))
        b = [SITE_URL["CNN"].format(slug)] + filler[:2] + [SITE_URL["NYTimes"].format(slug)] + filler[2:]
        google[q.text] = g[:10]
        bing[q.text] = b[:10]
        yahoo[q.text] = []
    for name, data in (("google", google), ("bing", bing), ("yahoo", yahoo)):
        (fixtures / f"{name}.json").write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {len(tweets)} tweets, {len(articles)} articles, {len(queries)} queries to {ROOT}")


if __name__ == "__main__":
    main()
