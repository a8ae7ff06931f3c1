import random

import pytest
from hypothesis import given, settings, strategies as st

from mlrtree import DynamicMlr, GridParams, LayerConfig, LayeredMlr, StaticMlr, ThreeSidedQuery
from mlrtree.iomodel import (COMPONENTS, IoConfig, LruCache, _regions, blockify, replay,
                             sequence_blocks, traced_query)

from conftest import random_points, random_query

G = GridParams(4096)


@pytest.fixture(scope="module")
def structures():
    rng = random.Random(10)
    xs = rng.sample(range(1, 4097), 1000)
    ys = rng.sample(range(1, 4097), 1000)
    from mlrtree import Point
    pts = [Point(x, y) for x, y in zip(xs, ys)]
    return pts, {"static": StaticMlr(pts, G), "layered": LayeredMlr(pts, G),
                 "dynamic": DynamicMlr(G, pts)}


def test_config_validation():
    assert IoConfig(64, 2048).frames == 32
    with pytest.raises(ValueError):
        IoConfig(1, 64)
    with pytest.raises(ValueError):
        IoConfig(64, 100)


def test_contiguous_sequence_blocks():
    assert sequence_blocks(100, IoConfig(64, 128)) == 2
    assert sequence_blocks(64, IoConfig(64, 128)) == 1
    assert sequence_blocks(0, IoConfig(64, 128)) == 0


def test_microtrees_fit_in_blocks(structures):
    _, s = structures
    lay = s["layered"]
    for cfg in (IoConfig(64, 2048), IoConfig(8, 64)):
        bm = blockify(lay, cfg)
        for m in lay.micros:
            assert bm.span(m, len(m)) <= -(-lay.k // cfg.block_size) + 1
    bm = blockify(lay, IoConfig(64, 2048))
    assert lay.k == 7 and all(bm.span(m, len(m)) <= 2 for m in lay.micros)


@pytest.mark.parametrize("name", ["static", "layered", "dynamic"])
def test_component_blocks_by_enumeration(structures, name):
    _, s = structures
    cfg = IoConfig(8, 64)
    bm = blockify(s[name], cfg)
    blocks = {c: set() for c in COMPONENTS}
    entries = {c: 0 for c in COMPONENTS}
    for obj, size, comp, alias in _regions(s[name]):
        if alias is not None:
            continue
        entries[comp] += size
        for i in range(size):
            blocks[comp].add(bm.block_of(obj, i))
    for c in COMPONENTS:
        assert bm.component_entries[c] == entries[c]
        assert bm.component_blocks[c] == -(-entries[c] // 8) == len(blocks[c])
    assert bm.total_blocks == sum(-(-entries[c] // 8) for c in COMPONENTS)


def test_empty_answer_cost_is_pinned(structures):
    # measured on this fixture: a cold empty query reads only the root path
    _, s = structures
    q = ThreeSidedQuery(1, 4096, 1)
    pinned = {"static": 6, "layered": 7, "dynamic": 7}
    for name, want in pinned.items():
        ans, stats = traced_query(blockify(s[name], IoConfig(64, 2048)), q)
        assert ans.points == [] and stats.transfers == want


@pytest.mark.parametrize("name", ["static", "layered", "dynamic"])
def test_traced_answers_and_accounting(structures, name):
    pts, s = structures
    rng = random.Random(3)
    cfg = IoConfig(64, 2048)
    bm = blockify(s[name], cfg)
    for _ in range(100):
        q = random_query(rng, 4096)
        ans, stats = traced_query(bm, q, cfg)
        assert ans.points == s[name].query(q).points
        assert stats.transfers + stats.hits == stats.accesses == len(bm.last_trace)
        assert stats.transfers >= 1
        parts = stats.breakdown.values()
        assert sum(p["transfers"] for p in parts) == stats.transfers
        assert sum(p["hits"] for p in parts) == stats.hits
        again = replay(bm.last_trace, cfg)
        assert (again.transfers, again.hits) == (stats.transfers, stats.hits)
        _, warm = traced_query(bm, q, warm=True)
        assert warm.transfers <= stats.transfers


def test_stats_json_shape(structures):
    _, s = structures
    _, stats = traced_query(blockify(s["static"], IoConfig(64, 2048)),
                            ThreeSidedQuery(1, 4096, 4096))
    out = stats.as_dict()
    assert set(out) == {"B", "R", "transfers", "hits", "breakdown"}
    assert set(out["breakdown"]) == set(COMPONENTS)
    assert '"transfers"' in stats.to_json()


def test_mismatched_config_rejected(structures):
    _, s = structures
    bm = blockify(s["static"], IoConfig(64, 2048))
    with pytest.raises(ValueError):
        traced_query(bm, ThreeSidedQuery(1, 2, 3), IoConfig(32, 2048))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 40), max_size=300), st.integers(1, 12))
def test_lru_is_deterministic_and_bounded(trace, frames):
    cfg = IoConfig(2, 2 * frames if frames > 1 else 4)
    a, b = replay(trace, cfg), replay(trace, cfg)
    assert (a.transfers, a.hits) == (b.transfers, b.hits)
    assert a.transfers >= len(set(trace))
    assert a.transfers + a.hits == len(trace)


def test_lru_eviction_order():
    c = LruCache(2)
    assert [c.access(b) for b in (1, 2, 1, 3, 2, 1)] == [False, False, True, False, False, False]


def test_sparse_locator_and_trie_pams_are_mapped():
    rng = random.Random(12)
    pts = random_points(rng, 500, 1 << 16)
    g = GridParams(1 << 16)
    for s in (StaticMlr(pts, g, "trie", True),
              LayeredMlr(pts, g, LayerConfig(pam="trie", sparse_locator=True))):
        bm = blockify(s, IoConfig(64, 2048))
        for _ in range(30):
            q = random_query(rng, g.m)
            assert traced_query(bm, q)[0].points == s.query(q).points
