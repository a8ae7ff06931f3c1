import json
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from mlrtree import GridParams, Point, Semantics, ThreeSidedQuery, normalize
from mlrtree.cli import break_side_arrays, main, shrink, verify_points
from mlrtree.fileio import (INDEX_VERSION, FileFormatError, decode_points_bin,
                            decode_points_csv, encode_points_bin, encode_points_csv, load_index,
                            read_points, save_index)
from mlrtree.testkit import oracle_scan

from conftest import FIVE


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def lines(out):
    return [json.loads(line) for line in out.splitlines()]


@pytest.fixture
def fixture_csv(tmp_path):
    p = tmp_path / "five.csv"
    p.write_text("x,y\n1,5\n2,3\n3,4\n4,2\n5,1\n")
    return p


@pytest.fixture
def query_csv(tmp_path):
    p = tmp_path / "q.csv"
    p.write_text("a,b,d\n1,5,4\n5,1,4\n1,9,1\n1,4,5\n")
    return p


# -- file formats -----------------------------------------------------------

@given(st.integers(1, 2 ** 32 - 1).flatmap(lambda m: st.tuples(
    st.just(m), st.lists(st.tuples(st.integers(1, m), st.integers(1, m)), max_size=50))))
def test_binary_round_trip_is_byte_identical(case):
    m, pts = case
    blob = encode_points_bin(pts, m)
    back, m2 = decode_points_bin(blob)
    assert (back, m2) == (pts, m)
    assert encode_points_bin(back, m2) == blob


@given(st.lists(st.tuples(st.integers(1, 10 ** 6), st.integers(1, 10 ** 6)), max_size=50))
def test_csv_round_trip_is_value_identical(pts):
    assert decode_points_csv(encode_points_csv(pts)) == pts


def test_point_file_errors(tmp_path):
    with pytest.raises(FileFormatError, match=":1:"):
        decode_points_csv("a,b\n1,2\n")
    with pytest.raises(FileFormatError, match=":3:"):
        decode_points_csv("x,y\n1,2\n3\n")
    blob = encode_points_bin([(1, 2)], 4)
    with pytest.raises(FileFormatError):
        decode_points_bin(blob[:-1])
    with pytest.raises(FileFormatError, match="outside"):
        decode_points_bin(encode_points_bin([(5, 1)], 4))
    p = tmp_path / "pts.bin"
    p.write_bytes(encode_points_bin([(1, 2), (3, 4)], 8))
    pf = read_points(p)
    assert pf.fmt == "bin" and pf.m == 8 and pf.points == [(1, 2), (3, 4)]


# -- build ------------------------------------------------------------------

def test_build_fixture_reports_fallback(capsys, fixture_csv, tmp_path):
    code, out, _ = run(capsys, "build", fixture_csv, "--structure", "layered",
                       "-o", tmp_path / "i.idx")
    rep = json.loads(out)
    assert code == 0 and rep["N"] == 5 and rep["single_layer_fallback"]
    assert {"M", "H", "layers", "entries", "build_seconds"} <= set(rep)


def test_build_empty_input(capsys, tmp_path):
    p = tmp_path / "e.csv"
    p.write_text("x,y\n")
    code, _, err = run(capsys, "build", p)
    assert code == 2 and "empty input" in err


def test_build_reports_bad_lines_and_duplicates(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("x,y\n1,2\n3,zz\n")
    code, _, err = run(capsys, "build", p)
    assert code == 2 and "bad.csv:3" in err
    p.write_text("x,y\n1,2\n1,3\n")
    code, _, err = run(capsys, "build", p)
    assert code == 2 and "duplicate x=1" in err


def test_generated_file_header_echoed(capsys, tmp_path):
    pts = tmp_path / "g.bin"
    code, _, _ = run(capsys, "gen", "--n", 10000, "--grid", 1 << 20, "--format", "bin",
                     "-o", pts, "--y-dist", "zipf")
    assert code == 0
    code, out, _ = run(capsys, "build", pts, "--structure", "layered", "--sparse-locator")
    rep = json.loads(out)
    assert rep["N"] == 10000 and rep["M"] == 1 << 20


# -- query ------------------------------------------------------------------

@pytest.mark.parametrize("structure", ["static", "layered", "dynamic"])
def test_query_stream(capsys, fixture_csv, query_csv, tmp_path, structure):
    idx = tmp_path / "i.idx"
    run(capsys, "build", fixture_csv, "--structure", structure, "-o", idx)
    code, out, _ = run(capsys, "query", idx, query_csv)
    recs = lines(out)
    assert code == 0 and len(recs) == 4
    assert recs[0]["points"] == [[5, 1]] and "counters" in recs[0]
    assert recs[1]["line"] == 3 and "a=5 > b=1" in recs[1]["error"]
    assert "outside grid" in recs[2]["error"]
    assert recs[3]["points"] == [[4, 2]]


def test_query_trace_io(capsys, fixture_csv, query_csv, tmp_path):
    idx = tmp_path / "i.idx"
    run(capsys, "build", fixture_csv, "-o", idx)
    code, out, _ = run(capsys, "query", idx, query_csv, "--trace-io", "--block-size", 64)
    rec = lines(out)[0]
    assert rec["io"]["B"] == 64 and rec["io"]["transfers"] >= 1


def test_query_without_counters(capsys, fixture_csv, query_csv, tmp_path):
    idx = tmp_path / "i.idx"
    run(capsys, "build", fixture_csv, "-o", idx)
    _, out, _ = run(capsys, "query", idx, query_csv, "--no-emit-counters")
    assert "counters" not in lines(out)[0]


@pytest.mark.parametrize("sem", ["min-min", "max-max", "min-max"])
def test_semantics_are_reported_in_original_coordinates(capsys, fixture_csv, query_csv,
                                                        tmp_path, sem):
    idx = tmp_path / "i.idx"
    run(capsys, "build", fixture_csv, "-o", idx)
    _, out, _ = run(capsys, "query", idx, query_csv, "--semantics", sem)
    s, g = Semantics.parse(sem), GridParams(5)
    raw = [Point(1, 5), Point(2, 3), Point(3, 4), Point(4, 2), Point(5, 1)]
    canon = [normalize(p, s, g) for p in raw]
    from mlrtree import normalize_query
    q = normalize_query(ThreeSidedQuery(1, 5, 4), s, g)
    want = sorted((normalize(p, s, g) for p in oracle_scan(canon, q)), key=lambda p: -p.x)
    assert lines(out)[0]["points"] == [list(p) for p in want]


def test_version_mismatch_rebuilds(capsys, fixture_csv, query_csv, tmp_path):
    idx = tmp_path / "i.idx"
    run(capsys, "build", fixture_csv, "-o", idx)
    blob = bytearray(idx.read_bytes())
    blob[6] = INDEX_VERSION + 1
    idx.write_bytes(bytes(blob))
    header, s = load_index(idx)
    assert s is None and header["m"] == 5
    _, out, _ = run(capsys, "query", idx, query_csv)
    assert lines(out)[0]["points"] == [[5, 1]]


def test_index_round_trip_keeps_dynamic_updatable(tmp_path):
    from mlrtree import DynamicMlr
    d = DynamicMlr(GridParams(64), FIVE)
    save_index(tmp_path / "d.idx", {"v": 1}, d)
    header, back = load_index(tmp_path / "d.idx")
    assert header == {"v": 1}
    back.insert(Point(60, 60))
    back.audit()
    assert back.query(ThreeSidedQuery(1, 64, 64)).points[0] == Point(60, 60)


def test_not_an_index(tmp_path):
    p = tmp_path / "x.idx"
    p.write_bytes(b"hello")
    with pytest.raises(FileFormatError):
        load_index(p)


# -- verify -----------------------------------------------------------------

def test_verify_passes(capsys, fixture_csv):
    code, out, _ = run(capsys, "verify", fixture_csv, "--trials", 100)
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and set(rep["structures"]) == {"static", "layered",
                                                                     "dynamic"}


def test_verify_zero_trials_is_vacuous(capsys, fixture_csv):
    code, out, err = run(capsys, "verify", fixture_csv, "--trials", 0)
    assert code == 0 and json.loads(out)["vacuous"] and "warning" in err


def test_verify_catches_corruption(capsys, tmp_path):
    pts = tmp_path / "g.csv"
    run(capsys, "gen", "--n", 2000, "--grid", 65536, "-o", pts, "--seed", 3)
    code, out, _ = run(capsys, "verify", pts, "--trials", 50, "--inject-fault")
    rep = json.loads(out)
    assert code == 1 and not rep["pass"]
    for name, r in rep["structures"].items():
        cx = r["counterexample"]
        small = [Point(*p) for p in cx["points"]]
        q = ThreeSidedQuery(*cx["query"])
        assert len(small) <= 16
        assert cx["expected"] == [list(p) for p in oracle_scan(small, q)] != cx["got"]


def test_shrink_finds_minimal_subset():
    pts = list(range(100))
    assert shrink(pts, lambda s: 17 in s and 42 in s) == [17, 42]
    assert len(shrink(pts, lambda s: len(s) >= 3)) == 3


def test_break_side_arrays_breaks_queries():
    from mlrtree import build_index
    from conftest import random_points
    import random
    rng = random.Random(1)
    pts = random_points(rng, 300, 1000)
    g = GridParams(1000)
    assert verify_points(pts, g, 40, 1)["pass"]
    s = build_index(pts, g, "static")
    break_side_arrays(s)
    full = ThreeSidedQuery(1, 1000, 1000)
    assert s.query(full).points != oracle_scan(pts, full)


# -- bench and gen ------------------------------------------------------------

def test_bench_rows(capsys, tmp_path):
    cfg = tmp_path / "b.json"
    cfg.write_text(json.dumps({"ns": [256, 512], "y": "zipf", "queries": 40, "m": 1 << 16}))
    out = tmp_path / "b.csv"
    code, _, _ = run(capsys, "bench", cfg, "-o", out)
    import csv
    rows = list(csv.DictReader(out.open()))
    assert code == 0 and len(rows) == 6
    assert {"structure", "N", "distribution", "t_mean", "pred_calls_per_point",
            "transfers_per_query", "violations_per_epoch", "wall_time"} <= set(rows[0])
    for r in rows:
        if r["structure"] == "static":
            assert float(r["pred_calls_per_point"]) <= 3.0 + 1e-9
        else:
            assert float(r["pred_calls_per_point"]) <= 9.0 + 1e-9
    dyn = [r for r in rows if r["structure"] == "dynamic"]
    assert all(r["violations_per_epoch"] != "" for r in dyn)


def test_bench_is_deterministic_apart_from_wall_time(capsys, tmp_path):
    cfg = tmp_path / "b.json"
    cfg.write_text(json.dumps({"ns": [300], "queries": 20, "m": 4096}))
    run(capsys, "bench", cfg, "-o", tmp_path / "1.csv")
    run(capsys, "bench", cfg, "-o", tmp_path / "2.csv")

    def strip(p):
        import csv
        return [{k: v for k, v in r.items() if k != "wall_time"}
                for r in csv.DictReader(p.open())]
    assert strip(tmp_path / "1.csv") == strip(tmp_path / "2.csv")


@pytest.mark.parametrize("cfg,msg", [({"nz": [1]}, "unknown bench config keys"),
                                     ({"ns": []}, "'ns'"),
                                     ({"structures": ["btree"]}, "unknown structure"),
                                     ({"queries": 0}, "'queries'"),
                                     ([1, 2], "JSON object")])
def test_bench_schema_errors(capsys, tmp_path, cfg, msg):
    p = tmp_path / "b.json"
    p.write_text(json.dumps(cfg))
    code, _, err = run(capsys, "bench", p)
    assert code == 2 and msg in err


def test_gen_is_deterministic(capsys, tmp_path):
    for name in ("a.csv", "b.csv"):
        run(capsys, "gen", "--n", 500, "--grid", 4096, "--seed", 9, "-o", tmp_path / name)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


@pytest.mark.parametrize("level,shown", [("INFO", True), ("ERROR", False)])
def test_module_entry_point_and_log_env(fixture_csv, level, shown):
    import os
    env = dict(os.environ, MLR_LOG=level)
    res = subprocess.run([sys.executable, "-m", "mlrtree", "verify", str(fixture_csv),
                          "--trials", "0"], capture_output=True, text=True, env=env)
    assert res.returncode == 0
    assert ("WARNING mlrtree" in res.stderr) == shown
