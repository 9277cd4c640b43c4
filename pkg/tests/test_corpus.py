from __future__ import annotations

import copy

import pytest

from nilcohom.corpus import CORPUS, check_entry, corpus_names, get_entry, grid_points, load_entry_object, run_all, sweep
from nilcohom.structure import FamilySpec

TAGS = {"PAPER", "DERIVED", "TRIVIAL"}


def test_corpus_shape():
    names = corpus_names()
    assert len(names) >= 8 and len(set(names)) == len(names)
    for e in CORPUS:
        assert e["provenance"] and "notes" in e
        for exp in e["expected"]:
            assert exp["tag"] in TAGS


@pytest.mark.parametrize("name", corpus_names())
def test_entry_reproduces(name):
    results = check_entry(get_entry(name))
    assert results
    bad = [r.as_dict() for r in results if not r.passed]
    assert not bad, bad


def test_run_all_fails_only_on_published_tag():
    entry = copy.deepcopy(get_entry("iwasawa"))
    for exp in entry["expected"]:
        if exp["tag"] == "DERIVED":
            exp["value"] = 999
    ok, results = run_all([entry])
    assert ok and not all(r.passed for r in results)
    for exp in entry["expected"]:
        if exp["key"] == "betti.1":
            exp["value"] = 5
    ok, _ = run_all([entry])
    assert not ok


def test_unknown_entry():
    with pytest.raises(KeyError):
        get_entry("no-such-entry")


def test_grid_points_order():
    pts = grid_points({"a": ["0", "1"], "b": ["x", "y"]})
    assert pts == [{"a": "0", "b": "x"}, {"a": "0", "b": "y"}, {"a": "1", "b": "x"}, {"a": "1", "b": "y"}]


def test_sweep_prop61():
    f = load_entry_object(get_entry("prop61"))
    assert isinstance(f, FamilySpec)
    ts = ["0", "1/4", "i/4", "-1/4", "(1+i)/2"]
    res = sweep(f, [{"t": t} for t in ts])
    # [PAPER] 5 at t=0 and on the circle, 4 off it
    assert [r.h11_bc for r in res.rows] == [5, 4, 4, 4, 5]
    assert [r.on_jump_locus for r in res.rows] == [True, False, False, False, True]
    assert res.summary["generic_h11_bc"] == 4 and res.summary["jump_set_matches_locus"]


def test_sweep_parallel_matches_serial():
    f = load_entry_object(get_entry("prop61"))
    pts = [{"t": t} for t in ["0", "1/4", "(1+i)/2", "2"]]
    assert sweep(f, pts, jobs=1).as_dict() == sweep(f, pts, jobs=2).as_dict()


def test_sweep_records_bad_points():
    f = load_entry_object(get_entry("prop61"))
    res = sweep(f, [{"t": "1/4"}, {"t": "1/0"}])
    assert res.rows[0].error == "" and res.rows[1].error
    assert res.summary["failed"] == 1
