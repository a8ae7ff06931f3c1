import pytest
from hypothesis import given, strategies as st

from mlrtree import GridTriePam, PrefixExtremum, SmallSetPam, SortedSeqPam, pam_build
from mlrtree.access import PAM_CHOICES, PamBuildError, hrmq, predecessor


def scan_pred(keys, k):
    best = None
    for i, v in enumerate(keys):
        if v <= k:
            best = i
    return best


@pytest.mark.parametrize("impl", PAM_CHOICES)
def test_predecessor_examples(impl):
    pam = pam_build([2, 5, 9], impl, universe=16)
    assert len(pam) == 3
    assert predecessor(pam, 5) == 1
    assert predecessor(pam, 4) == 0
    assert predecessor(pam, 1) is None
    assert predecessor(pam, 16) == 2


@pytest.mark.parametrize("impl", PAM_CHOICES)
def test_empty_pam(impl):
    pam = pam_build([], impl, universe=8)
    assert all(pam.predecessor(k) is None for k in range(1, 9))


@pytest.mark.parametrize("impl", PAM_CHOICES)
def test_non_ascending_keys_rejected(impl):
    with pytest.raises(PamBuildError):
        pam_build([3, 2], impl, universe=8)
    with pytest.raises(PamBuildError):
        pam_build([2, 2], impl, universe=8)


def test_trie_matches_binary_search_on_full_range():
    keys = list(range(1, 1025))
    trie, ref = GridTriePam(keys, 1024), SortedSeqPam(keys)
    for k in range(0, 1027):
        assert trie.predecessor(k) == ref.predecessor(k)


def test_small_set_size_limit():
    SmallSetPam(list(range(1, 65)))
    with pytest.raises(PamBuildError):
        SmallSetPam(list(range(1, 66)))


def test_unknown_pam_token():
    with pytest.raises(ValueError):
        pam_build([1], "veb")


@given(st.integers(1, 4096).flatmap(
    lambda m: st.tuples(st.just(m), st.sets(st.integers(1, m), max_size=256),
                        st.lists(st.integers(0, m + 1), max_size=60))))
def test_all_pams_agree(case):
    m, keys, probes = case
    keys = sorted(keys)
    pams = [SortedSeqPam(keys), GridTriePam(keys, m)]
    if len(keys) <= 64:
        pams.append(SmallSetPam(keys))
    for k in probes:
        want = scan_pred(keys, k)
        assert all(p.predecessor(k) == want for p in pams)


def test_all_pams_agree_exhaustive_small():
    import itertools
    m = 9
    for r in range(0, 5):
        for keys in itertools.combinations(range(1, m + 1), r):
            keys = list(keys)
            for impl in PAM_CHOICES:
                pam = pam_build(keys, impl, universe=m)
                for k in range(0, m + 2):
                    assert pam.predecessor(k) == scan_pred(keys, k)


@pytest.mark.parametrize("impl", PAM_CHOICES)
def test_touch_called_for_reads(impl):
    seen = []
    pam = pam_build([2, 5, 9, 11], impl, universe=16)
    pam.predecessor(7, touch=lambda obj, slot: seen.append((obj, slot)))
    assert seen and all(obj is pam for obj, _ in seen)


def test_hrmq_examples():
    pe = PrefixExtremum([3, 1, 4, 1, 5])
    # positions are 0-based
    assert hrmq(pe, 3) == 2
    assert hrmq(pe, 1) == 0
    assert hrmq(pe, 5) == 4


def test_hrmq_rejects_empty_prefix():
    pe = PrefixExtremum([3, 1, 4])
    with pytest.raises(IndexError):
        pe.hrmq(0)
    with pytest.raises(IndexError):
        pe.hrmq(4)


@given(st.lists(st.integers(1, 10 ** 6), min_size=1, max_size=64, unique=True))
def test_hrmq_matches_linear_scan(values):
    pe = PrefixExtremum(values)
    for r in range(1, len(values) + 1):
        prefix = values[:r]
        assert pe.hrmq(r) == prefix.index(max(prefix))
