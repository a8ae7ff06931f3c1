import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mlrtree import GridParams, Point, ThreeSidedQuery
from mlrtree.testkit import (BASES, Piecewise, SmoothSpec, Uniform, Zipf, ZipfSpec,
                             distinct_draws, gen_points, harmonic, oracle_pairwise,
                             oracle_scan, oracle_skyline, reduction_check, smoothness_check,
                             spec_from_name)

from conftest import FIVE, brute, point_sets, queries


def test_oracle_examples():
    diag = [Point(1, 1), Point(2, 2), Point(3, 3)]
    full = ThreeSidedQuery(1, 3, 3)
    assert oracle_skyline(diag, full, cross_check=True).points == diag[::-1]
    assert oracle_skyline(FIVE, ThreeSidedQuery(1, 5, 4), True).points == [Point(5, 1)]
    assert oracle_skyline([], full, True).points == []


@given(point_sets(max_n=30, max_m=40), st.data())
def test_oracles_agree(gp, data):
    g, pts = gp
    q = data.draw(queries(g.m))
    assert oracle_pairwise(pts, q) == oracle_scan(pts, q) == brute(pts, q)


def test_cross_check_raises_on_disagreement(monkeypatch):
    import mlrtree.testkit as tk
    monkeypatch.setattr(tk, "oracle_pairwise", lambda pts, q: [])
    with pytest.raises(AssertionError):
        tk.oracle_skyline(FIVE, ThreeSidedQuery(1, 8, 8), cross_check=True)


def test_gen_points_edge_cases():
    g = GridParams(64)
    assert gen_points(0, g, Uniform(), Uniform(), 1) == []
    perm = gen_points(64, g, Uniform(), Uniform(), 2)
    assert sorted(p.x for p in perm) == list(range(1, 65))
    assert sorted(p.y for p in perm) == list(range(1, 65))
    with pytest.raises(ValueError):
        gen_points(65, g, Uniform(), Uniform(), 3)


@pytest.mark.parametrize("x,y", [("uniform", "zipf"), ("smooth-piecewise", "uniform"),
                                 ("piecewise", "smooth-zipf")])
def test_gen_points_deterministic_and_distinct(x, y):
    g = GridParams(1 << 16)
    a = gen_points(3000, g, spec_from_name(x), spec_from_name(y), 42)
    b = gen_points(3000, g, spec_from_name(x), spec_from_name(y), 42)
    assert a == b
    assert len({p.x for p in a}) == len({p.y for p in a}) == 3000
    assert a != gen_points(3000, g, spec_from_name(x), spec_from_name(y), 43)


def test_rejection_cap():
    with pytest.raises(ValueError, match="gave up"):
        distinct_draws(Zipf(8.0), 40, 64, np.random.default_rng(0))


def test_zipf_mass_at_one_matches_normalizer():
    m, n, s = 1 << 20, 10_000, 1.2
    spec = ZipfSpec(s, m)
    p1 = 1 / spec.normalizer
    ys = Zipf(s).sample(np.random.default_rng(2024), n, m)
    sigma = math.sqrt(p1 * (1 - p1) / n)
    assert abs(np.mean(ys == 1) - p1) <= 3 * sigma


def test_zipf_spec():
    spec = ZipfSpec(1.2, 1000)
    assert spec.normalizer == pytest.approx(sum(v ** -1.2 for v in range(1, 1001)))
    assert spec.alpha == pytest.approx(1 - 1 / harmonic(1000, 1.2))
    assert 0 < spec.alpha < 1
    with pytest.raises(ValueError):
        ZipfSpec(0, 10)


def test_pmfs_are_distributions():
    for d in (Uniform(), Piecewise(), Zipf(1.5), SmoothSpec("piecewise")):
        p = d.pmf(1000)
        assert p.shape == (1000,) and p.min() > 0 and p.sum() == pytest.approx(1)
    with pytest.raises(ValueError):
        Piecewise((1.0, 0.0)).pmf(10)


@pytest.mark.parametrize("base", BASES)
def test_smooth_generators_pass_the_check(base):
    m, n = 1 << 16, 4096
    spec = SmoothSpec(base)
    samples = spec.sample(np.random.default_rng(0), 50_000, m)
    rep = smoothness_check(spec, m, n, samples, np.random.default_rng(1), triples=300)
    assert rep.ok and rep.checked > 500


def test_comb_distribution_fails_the_check():
    m, n = 1 << 16, 4096
    rng = np.random.default_rng(0)
    samples = rng.choice(np.arange(4096, m + 1, 4096), 50_000)
    rep = smoothness_check(SmoothSpec("uniform"), m, n, samples, np.random.default_rng(1), 300)
    assert not rep.ok and rep.failures


def test_spec_names():
    assert isinstance(spec_from_name("Zipf", 2.0), Zipf)
    assert spec_from_name("smooth").base == "uniform"
    with pytest.raises(ValueError):
        spec_from_name("gaussian")
    with pytest.raises(ValueError):
        SmoothSpec("normal")


@pytest.mark.parametrize("structure", ["static", "layered", "dynamic"])
def test_reduction_examples(structure):
    vals = [2, 5, 9]
    assert reduction_check(vals, [6], 16, structure)
    assert reduction_check(vals, [1], 16, structure)
    assert reduction_check(vals, [9], 16, structure)
    assert reduction_check(vals, range(1, 17), 16, structure)
    assert reduction_check([], [1, 2], 4, structure)


def test_reduction_rejects_unsorted_values():
    with pytest.raises(ValueError):
        reduction_check([5, 2], [3])


def test_reduction_detects_a_wrong_answer(monkeypatch):
    import mlrtree
    real = mlrtree.build_index

    class OffByOne:
        def __init__(self, idx):
            self.idx = idx

        def query(self, q):
            return self.idx.query(ThreeSidedQuery(q.a, max(q.a, q.b - 1), q.d))

    monkeypatch.setattr(mlrtree, "build_index", lambda *a, **k: OffByOne(real(*a, **k)))
    assert not reduction_check([2, 5, 9], [9], 16)


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(1, 500), max_size=60), st.lists(st.integers(1, 500), max_size=40))
def test_reduction_property(values, probes):
    assert reduction_check(sorted(values), probes, 500)
