import io
import json
import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contentlabels.errors import StorageUnavailable
from contentlabels.score import ContentLabels, ScoreStatus
from contentlabels.store import (
    DEFAULT_TTL_SECONDS,
    MemoryLabelStore,
    SqliteLabelStore,
    canonicalize_url,
    export_jsonl,
    needs_refresh,
    open_store,
    refresh_stale,
)

NOW = 2_000_000.0
HOUR = 3600.0


def scored(url, scored_at=NOW, content_hash="abcd1234abcd1234", value=3.0):
    return ContentLabels(
        url=url, status=ScoreStatus.SCORED, model_version="v1-test",
        scored_at=scored_at,
        actionability_raw=value, knowledge_raw=value, emotion_raw=0.0,
        actionability_display=40.0, knowledge_display=40.0, emotion_display=50.0,
        content_hash=content_hash,
    )


# --- URL canonicalization ---

@pytest.mark.parametrize("raw,expected", [
    ("HTTP://Example.COM/Path", "http://example.com/Path"),
    ("https://example.com:443/x", "https://example.com/x"),
    ("http://example.com:80/", "http://example.com/"),
    ("http://example.com:8080/", "http://example.com:8080/"),
    ("https://example.com:80/", "https://example.com:80/"),  # not the default
    ("https://example.com/a#frag", "https://example.com/a"),
    ("https://example.com/a?b=C&d=e", "https://example.com/a?b=C&d=e"),
    ("https://example.com/A/B", "https://example.com/A/B"),  # path case kept
    ("https://user:pw@example.com/", "https://user:pw@example.com/"),
])
def test_canonicalize_cases(raw, expected):
    assert canonicalize_url(raw) == expected


@given(st.sampled_from(["http", "https", "HTTP"]),
       st.sampled_from(["example.com", "WWW.Site.ORG", "a.b.c"]),
       st.sampled_from(["", ":80", ":443", ":8080"]),
       st.sampled_from(["/", "/Path/To?q=1", "/x#frag", ""]))
def test_canonicalize_idempotent(scheme, host, port, tail):
    url = f"{scheme}://{host}{port}{tail}"
    once = canonicalize_url(url)
    assert canonicalize_url(once) == once


# --- store backends ---

@pytest.fixture(params=["memory", "sqlite"])
def store(request, tmp_path):
    if request.param == "memory":
        s = MemoryLabelStore()
    else:
        s = SqliteLabelStore(tmp_path / "labels.db")
    yield s
    s.close()


def test_put_get_round_trip(store):
    labels = scored("https://example.com/page")
    store.put(labels)
    entry = store.get("https://example.com/page")
    assert entry is not None
    assert entry.labels == labels
    assert entry.ttl == DEFAULT_TTL_SECONDS
    assert entry.url == "https://example.com/page"


def test_get_by_any_alias_of_same_url(store):
    store.put(scored("HTTPS://Example.COM:443/page#top"))
    entry = store.get("https://example.com/page")
    assert entry is not None
    assert entry.url == "https://example.com/page"
    assert store.count() == 1


def test_upsert_replaces(store):
    store.put(scored("https://example.com/p", value=2.0))
    store.put(scored("https://example.com/p", value=5.0), ttl=60.0)
    assert store.count() == 1
    entry = store.get("https://example.com/p")
    assert entry.labels.actionability_raw == 5.0
    assert entry.ttl == 60.0


def test_get_missing_returns_none(store):
    assert store.get("https://example.com/absent") is None


def test_many_urls(store):
    for i in range(1000):
        store.put(scored(f"https://example.com/page/{i}"))
    assert store.count() == 1000
    assert store.get("https://example.com/page/537") is not None
    urls = {e.url for e in store.entries()}
    assert len(urls) == 1000


def test_error_labels_round_trip(store):
    labels = ContentLabels(url="https://example.com/err",
                           status=ScoreStatus.ERROR, model_version="v1-test",
                           scored_at=NOW, reason="network")
    store.put(labels)
    assert store.get("https://example.com/err").labels == labels


def test_concurrent_puts(store):
    def writer(base):
        for i in range(50):
            store.put(scored(f"https://example.com/{base}/{i}"))
    threads = [threading.Thread(target=writer, args=(t,)) for t in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert store.count() == 400


def test_sqlite_persists_across_reopen(tmp_path):
    path = tmp_path / "persist.db"
    s1 = SqliteLabelStore(path)
    s1.put(scored("https://example.com/keep"), ttl=120.0)
    s1.close()
    s2 = SqliteLabelStore(path)
    entry = s2.get("https://example.com/keep")
    assert entry is not None
    assert entry.ttl == 120.0
    assert entry.labels.actionability_raw == 3.0
    s2.close()


def test_sqlite_bad_path_raises(tmp_path):
    with pytest.raises(StorageUnavailable):
        SqliteLabelStore(tmp_path / "no" / "such" / "dir" / "x.db")


def test_open_store_dispatch(tmp_path):
    assert isinstance(open_store(None), MemoryLabelStore)
    assert isinstance(open_store(":memory:"), MemoryLabelStore)
    s = open_store(str(tmp_path / "f.db"))
    assert isinstance(s, SqliteLabelStore)
    s.close()


# --- staleness ---

def test_needs_refresh_ttl_boundary():
    store = MemoryLabelStore()
    store.put(scored("https://example.com/p", scored_at=NOW))
    entry = store.get("https://example.com/p")
    assert not needs_refresh(entry, NOW + 23 * HOUR)
    assert needs_refresh(entry, NOW + 25 * HOUR)
    assert not needs_refresh(entry, NOW + 24 * HOUR)  # exactly at TTL: fresh


def test_needs_refresh_content_hash():
    store = MemoryLabelStore()
    store.put(scored("https://example.com/p", content_hash="aa" * 8))
    entry = store.get("https://example.com/p")
    assert not needs_refresh(entry, NOW + HOUR, current_hash="aa" * 8)
    assert needs_refresh(entry, NOW + HOUR, current_hash="bb" * 8)
    assert not needs_refresh(entry, NOW + HOUR)  # hash unknown, age fresh


def test_refresh_stale_only_touches_stale(store):
    fresh_at = NOW + 20 * HOUR
    for i in range(7):
        store.put(scored(f"https://example.com/fresh/{i}", scored_at=fresh_at))
    for i in range(3):
        store.put(scored(f"https://example.com/old/{i}", scored_at=NOW))

    called = []
    def rescorer(url):
        called.append(url)
        return scored(url, scored_at=NOW + 30 * HOUR, value=4.0)

    n = refresh_stale(store, NOW + 30 * HOUR, rescorer)
    assert n == 3
    assert sorted(called) == [f"https://example.com/old/{i}" for i in range(3)]
    refreshed = store.get("https://example.com/old/0")
    assert refreshed.labels.actionability_raw == 4.0
    assert store.get("https://example.com/fresh/0").labels.scored_at == fresh_at


def test_refresh_failure_isolated_and_stamped(store):
    store.put(scored("https://example.com/good", scored_at=NOW))
    store.put(scored("https://example.com/bad", scored_at=NOW))

    def rescorer(url):
        if "bad" in url:
            raise RuntimeError("origin down")
        return scored(url, scored_at=NOW + 30 * HOUR)

    n = refresh_stale(store, NOW + 30 * HOUR, rescorer)
    assert n == 1
    bad = store.get("https://example.com/bad")
    assert bad.labels.status is ScoreStatus.ERROR
    assert bad.labels.reason == "refresh_failed:RuntimeError"
    assert bad.labels.scored_at == NOW + 30 * HOUR


def test_refresh_idempotent_under_frozen_clock(store):
    for i in range(5):
        store.put(scored(f"https://example.com/{i}", scored_at=NOW))
    later = NOW + 30 * HOUR
    rescorer = lambda url: scored(url, scored_at=later)
    assert refresh_stale(store, later, rescorer) == 5
    assert refresh_stale(store, later, rescorer) == 0
    # even when every rescore fails, the error stamp stops retry churn
    for i in range(5):
        store.put(scored(f"https://example.com/{i}", scored_at=NOW))
    failing = lambda url: (_ for _ in ()).throw(RuntimeError("down"))
    assert refresh_stale(store, later, failing) == 0
    assert refresh_stale(store, later, failing) == 0


# --- export ---

def test_export_jsonl(store):
    store.put(scored("https://example.com/a"))
    store.put(scored("https://example.com/b"), ttl=99.0)
    buf = io.StringIO()
    assert export_jsonl(store, buf) == 2
    rows = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert {r["url"] for r in rows} == {"https://example.com/a",
                                        "https://example.com/b"}
    by_url = {r["url"]: r for r in rows}
    assert by_url["https://example.com/b"]["ttl"] == 99.0
    assert by_url["https://example.com/a"]["labels"]["status"] == "scored"
    assert by_url["https://example.com/a"]["labels"]["actionability_raw"] == 3.0
