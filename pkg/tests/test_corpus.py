import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newsrank.corpus import (
    OTHER_SITE,
    NewsArticle,
    SiteId,
    TimeWindow,
    Tweet,
    UserProfile,
    corpus_span,
    dump_jsonl,
    filter_window,
    load_articles,
    load_tweets,
    load_user_profiles,
    parse_sites,
    partition_by_site,
)
from newsrank.errors import DuplicateId, MalformedRecord, UnknownSite

SITES = parse_sites([
    {"name": "BBC", "domains": ["bbc.co.uk", "bbc.com"]},
    {"name": "CNN", "domains": ["cnn.com"]},
    {"name": "NYT", "domains": ["nytimes.com"]},
])


def write_lines(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


def user(uid, **kw):
    rec = {"user_id": uid, "username": f"n{uid}", "description": "", "followers": 1, "following": 2,
           "tweets_count": 3, "favourites_count": 4, "listed_count": 5, "verified": False, "has_url": False}
    rec.update(kw)
    return rec


def article(aid, site, t=0):
    return {"id": aid, "site": site, "url": f"https://x/{aid}", "title": "t", "body": "b", "published_at": t}


class TestLoadTweets:
    def test_single_record(self, tmp_path):
        p = write_lines(tmp_path / "t.jsonl", [{"id": "1", "user_id": "u", "text": "hi", "created_at": 5}])
        assert load_tweets(p) == [Tweet("1", "u", "hi", 5)]

    def test_empty_file(self, tmp_path):
        p = tmp_path / "t.jsonl"
        p.write_text("")
        assert load_tweets(p) == []

    def test_missing_created_at(self, tmp_path):
        p = write_lines(tmp_path / "t.jsonl", [
            {"id": "1", "user_id": "u", "text": "a", "created_at": 1},
            {"id": "2", "user_id": "u", "text": "b"},
        ])
        with pytest.raises(MalformedRecord) as exc:
            load_tweets(p)
        assert exc.value.line == 2

    @pytest.mark.parametrize("bad", [-1, 1.5, "10", True])
    def test_rejects_bad_timestamps(self, tmp_path, bad):
        p = write_lines(tmp_path / "t.jsonl", [{"id": "1", "user_id": "u", "text": "a", "created_at": bad}])
        with pytest.raises(MalformedRecord):
            load_tweets(p)

    def test_invalid_json_reports_line(self, tmp_path):
        p = tmp_path / "t.jsonl"
        p.write_text('{"id": "1", "user_id": "u", "text": "a", "created_at": 1}\n{oops\n')
        with pytest.raises(MalformedRecord) as exc:
            load_tweets(p)
        assert exc.value.line == 2

    def test_duplicate_id(self, tmp_path):
        rec = {"id": "1", "user_id": "u", "text": "a", "created_at": 1}
        with pytest.raises(DuplicateId):
            load_tweets(write_lines(tmp_path / "t.jsonl", [rec, rec]))

    def test_preserves_file_order(self, tmp_path):
        rows = [{"id": str(i), "user_id": "u", "text": "", "created_at": 100 - i} for i in range(5)]
        assert [t.id for t in load_tweets(write_lines(tmp_path / "t.jsonl", rows))] == ["0", "1", "2", "3", "4"]


class TestLoadUsers:
    def test_labelled_training_counts(self, tmp_path):
        rows = [user(f"u{i}", label="publisher" if i < 157 else "other") for i in range(10_000)]
        users = load_user_profiles(write_lines(tmp_path / "u.jsonl", rows))
        assert len(users) == 10_000
        assert sum(u.label == "publisher" for u in users) == 157

    def test_booleans_round_trip(self, tmp_path):
        p = write_lines(tmp_path / "u.jsonl", [user("a", verified=True, has_url=False)])
        (u,) = load_user_profiles(p)
        assert u.verified is True and u.has_url is False and u.label is None

    def test_duplicate_user(self, tmp_path):
        with pytest.raises(DuplicateId):
            load_user_profiles(write_lines(tmp_path / "u.jsonl", [user("a"), user("a")]))

    def test_negative_count(self, tmp_path):
        with pytest.raises(MalformedRecord):
            load_user_profiles(write_lines(tmp_path / "u.jsonl", [user("a", followers=-3)]))

    def test_unknown_label(self, tmp_path):
        with pytest.raises(MalformedRecord):
            load_user_profiles(write_lines(tmp_path / "u.jsonl", [user("a", label="bot")]))


class TestLoadArticles:
    def test_site_attribution(self, tmp_path):
        (a,) = load_articles(write_lines(tmp_path / "a.jsonl", [article("1", "BBC")]), SITES)
        assert a.site == "BBC"

    def test_unknown_site_strict(self, tmp_path):
        with pytest.raises(UnknownSite):
            load_articles(write_lines(tmp_path / "a.jsonl", [article("1", "Reuters")]), SITES)

    def test_unknown_site_permissive(self, tmp_path):
        (a,) = load_articles(write_lines(tmp_path / "a.jsonl", [article("1", "Reuters")]), SITES, strict=False)
        assert a.site == OTHER_SITE

    def test_partition_by_site(self, tmp_path):
        rows = [article(str(i), s) for i, s in enumerate(["BBC", "CNN", "NYT", "BBC", "NYT"])]
        arts = load_articles(write_lines(tmp_path / "a.jsonl", rows), SITES)
        parts = partition_by_site(arts)
        assert sorted(parts) == ["BBC", "CNN", "NYT"]
        assert sum(len(v) for v in parts.values()) == len(arts)
        assert [a.id for a in parts["BBC"]] == ["0", "3"]

    def test_text_concatenates_title_and_body(self):
        a = NewsArticle("1", "BBC", "u", "Royal wedding", "Crowds gathered", 0)
        assert a.text == "Royal wedding\nCrowds gathered"


class TestSites:
    def test_rejects_scheme_in_domain(self):
        with pytest.raises(ValueError):
            SiteId("BBC", ("https://bbc.com",))

    def test_duplicate_names(self):
        with pytest.raises(ValueError):
            parse_sites([{"name": "A", "domains": []}, {"name": "A", "domains": []}])


class TestFilterWindow:
    def tweets(self, times):
        return [Tweet(str(i), "u", "", t) for i, t in enumerate(times)]

    def test_covering_window_is_identity(self):
        ts = self.tweets([3, 1, 2])
        assert filter_window(ts, TimeWindow(0, 100)) == ts

    def test_half_open_boundaries(self):
        kept = filter_window(self.tweets([5, 10, 19, 20]), TimeWindow(10, 20))
        assert [t.created_at for t in kept] == [10, 19]

    def test_no_overlap(self):
        assert filter_window(self.tweets([1, 2]), TimeWindow(50, 60)) == []

    def test_custom_key(self):
        assert filter_window([5, 10, 19, 20], TimeWindow(10, 20), key=lambda t: t) == [10, 19]

    def test_window_must_be_nonempty(self):
        with pytest.raises(ValueError):
            TimeWindow(5, 5)

    @given(st.lists(st.integers(0, 1000)), st.integers(0, 999), st.integers(1, 500))
    def test_idempotent(self, times, start, width):
        w = TimeWindow(start, start + width)
        ts = self.tweets(times)
        once = filter_window(ts, w)
        assert filter_window(once, w) == once

    def test_corpus_span(self):
        w = corpus_span(self.tweets([7, 3]), [NewsArticle("a", "BBC", "", "", "", 11)])
        assert (w.start, w.end) == (3, 12)
        assert corpus_span([]) is None


text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=30)
ident = st.text(alphabet="abcdefghij0123456789", min_size=1, max_size=8)


@settings(max_examples=50)
@given(st.lists(st.tuples(ident, text, st.integers(0, 2**40)), unique_by=lambda r: r[0], max_size=10))
def test_tweets_round_trip(tmp_path_factory, rows):
    tweets = [Tweet(i, "user", txt, t) for i, txt, t in rows]
    path = tmp_path_factory.mktemp("rt") / "tweets.jsonl"
    dump_jsonl(tweets, path)
    assert load_tweets(path) == tweets


@settings(max_examples=50)
@given(st.lists(
    st.builds(
        UserProfile,
        user_id=ident, username=text, description=text,
        followers=st.integers(0, 10**9), following=st.integers(0, 10**9),
        tweets_count=st.integers(0, 10**9), favourites_count=st.integers(0, 10**9),
        listed_count=st.integers(0, 10**9), verified=st.booleans(), has_url=st.booleans(),
        label=st.sampled_from([None, "publisher", "other"]),
    ),
    unique_by=lambda u: u.user_id, max_size=8,
))
def test_users_round_trip(tmp_path_factory, users):
    path = tmp_path_factory.mktemp("rt") / "users.jsonl"
    dump_jsonl(users, path)
    assert load_user_profiles(path) == users


@settings(max_examples=50)
@given(st.lists(st.tuples(ident, st.sampled_from(["BBC", "CNN", "NYT"]), text, st.integers(0, 2**40)),
                unique_by=lambda r: r[0], max_size=8))
def test_articles_round_trip(tmp_path_factory, rows):
    arts = [NewsArticle(i, s, f"https://{s.lower()}.com/{i}", txt, txt[::-1], t) for i, s, txt, t in rows]
    path = tmp_path_factory.mktemp("rt") / "articles.jsonl"
    dump_jsonl(arts, path)
    assert load_articles(path, SITES) == arts
