from __future__ import annotations

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citeimpact.graph import (
    MetadataConflict,
    ParseError,
    PublicationMeta,
    build_graph,
    graph_to_text,
    load_graph,
    read_edges,
    read_meta,
)
from oracles import dedup, random_edges, scan_citers, scan_refs


def tokens(g, idx):
    return [g.token(int(i)) for i in idx]


def check_invariants(g):
    total_c = total_r = 0
    for f in range(g.n):
        refs = g.references(f)
        cits = g.citers(f)
        assert f not in refs
        assert np.all(np.diff(refs) > 0)
        assert np.all(np.diff(cits) > 0)
        for c in cits:
            assert f in g.references(int(c))
        for r in refs:
            assert f in g.citers(int(r))
        total_c += len(cits)
        total_r += len(refs)
    assert total_c == total_r == g.edge_count


def test_fig1_shape(fig1):
    assert fig1.n == 12
    assert fig1.edge_count == 20
    a = fig1.index("A")
    assert sorted(tokens(fig1, fig1.citers(a))) == ["A1", "A2", "A3", "A4", "A5"]
    check_invariants(fig1)


def test_fig2_references(fig2):
    a = fig2.index("A")
    assert sorted(tokens(fig2, fig2.references(a))) == ["X1", "X2", "X3"]
    check_invariants(fig2)


def test_empty_stream():
    g, report = build_graph([])
    assert g.n == 0 and g.edge_count == 0
    assert report.as_dict() == dict.fromkeys(report.as_dict(), 0)


def test_duplicates_and_self_loops():
    g, report = build_graph([("X", "Y"), ("X", "Y"), ("Z", "Z")])
    assert g.edge_count == 1
    assert report.duplicate_edges_dropped == 1
    assert report.self_loops_dropped == 1
    # Z still gets an index even though its only edge was dropped
    assert g.n == 3 and "Z" in g


def test_isolated_and_sink():
    g, _ = build_graph([("a", "b")], [PublicationMeta("lonely")])
    iso = g.index("lonely")
    assert len(g.citers(iso)) == 0
    assert len(g.references(g.index("b"))) == 0


def test_first_appearance_interning():
    g, _ = build_graph([("c", "a"), ("b", "c"), ("a", "d")])
    assert g.tokens == ("c", "a", "b", "d")


def test_index_errors(fig1):
    with pytest.raises(IndexError):
        fig1.citers(fig1.n)
    with pytest.raises(IndexError):
        fig1.references(-1)
    with pytest.raises(KeyError):
        fig1.index("nope")


def test_immutable(fig1):
    with pytest.raises(AttributeError):
        fig1.ref_idx = None
    with pytest.raises(ValueError):
        fig1.citers(0)[0] = 3


@pytest.mark.parametrize("seed", range(10))
def test_adjacency_matches_edge_scan(seed):
    raw = random_edges(seed, n_max=50)
    edges = dedup(raw)
    g, report = build_graph(raw)
    assert report.duplicate_edges_dropped + report.self_loops_dropped == len(raw) - len(edges)
    check_invariants(g)
    for t in g.tokens:
        f = g.index(t)
        assert tokens(g, g.citers(f)) == sorted(scan_citers(edges, t), key=g.index)
        assert tokens(g, g.references(f)) == sorted(scan_refs(edges, t), key=g.index)


def token_adjacency(g):
    return {t: (tokens(g, g.references(g.index(t))), tokens(g, g.citers(g.index(t))))
            for t in g.tokens}


@pytest.mark.parametrize("seed", range(5))
def test_round_trip(seed):
    g1, _ = build_graph(random_edges(seed))
    g2, _ = load_graph(io.StringIO(graph_to_text(g1)))
    connected = [t for t in g1.tokens
                 if len(g1.citers(g1.index(t))) or len(g1.references(g1.index(t)))]
    assert g2.n == len(connected)
    assert g2.edge_count == g1.edge_count
    adj1 = token_adjacency(g1)
    adj2 = token_adjacency(g2)
    order = {t: i for i, t in enumerate(g1.tokens)}
    for t in connected:
        refs2, cits2 = adj2[t]
        assert sorted(refs2, key=order.get) == adj1[t][0]
        assert sorted(cits2, key=order.get) == adj1[t][1]
    # export is deterministic
    assert graph_to_text(g2) == graph_to_text(load_graph(io.StringIO(graph_to_text(g1)))[0])


def test_round_trip_with_meta_keeps_isolated():
    g1, _ = build_graph([("a", "b"), ("b", "c")],
                        [PublicationMeta("a", 2001), PublicationMeta("z", 1999, "G1")])
    edges, meta = io.StringIO(), io.StringIO()
    g1.write_edges(edges)
    g1.write_meta(meta)
    edges.seek(0)
    meta.seek(0)
    g2, _ = load_graph(edges, meta)
    assert g2.n == g1.n and g2.tokens == g1.tokens
    assert g2.meta(g2.index("z")) == PublicationMeta("z", 1999, "G1")


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=40),
       st.integers(1, 4))
def test_dedup_idempotence(pairs, k):
    edges = [(f"p{a}", f"p{b}") for a, b in pairs]
    g1, _ = build_graph(edges)
    gk, rk = build_graph([e for e in edges for _ in range(k)])
    assert gk.tokens == g1.tokens
    assert np.array_equal(gk.ref_idx, g1.ref_idx)
    assert np.array_equal(gk.ref_ptr, g1.ref_ptr)
    assert np.array_equal(gk.cit_idx, g1.cit_idx)
    loops = sum(1 for a, b in pairs if a == b)
    assert rk.self_loops_dropped == k * loops


def test_report_temporal_and_unknown_meta():
    meta = [PublicationMeta("new", 2010), PublicationMeta("old", 2000),
            PublicationMeta("ghost", 1990), PublicationMeta("noyear")]
    g, report = build_graph([("new", "old"), ("old", "new"), ("noyear", "old")], meta)
    assert report.temporal_violations == 1  # old (2000) citing new (2010)
    assert report.unknown_meta_ids == 1
    assert g.edge_count == 3  # violations are kept
    assert g.n == 4 and g.tokens[-1] == "ghost"


def test_meta_conflict():
    with pytest.raises(MetadataConflict):
        build_graph([("a", "b")], [PublicationMeta("a", 2000), PublicationMeta("a", 2001)])
    # identical repeats are fine
    g, _ = build_graph([("a", "b")], [PublicationMeta("a", 2000), PublicationMeta("a", 2000)])
    assert g.meta(g.index("a")).year == 2000


def test_year_bounds():
    with pytest.raises(ValueError):
        PublicationMeta("x", 999)
    PublicationMeta("x", 1000)
    PublicationMeta("x", 3000)


def test_read_edges_comments_and_errors():
    text = "# header\nA\tB\n\n#x\tY\nB\tC\n"
    assert list(read_edges(io.StringIO(text))) == [("A", "B"), ("B", "C")]
    with pytest.raises(ParseError, match="line 3"):
        list(read_edges(io.StringIO("A\tB\nB\tC\nC\tD\tE\n")))
    with pytest.raises(ParseError, match="line 2"):
        list(read_edges(io.StringIO("A\tB\n\tC\n")))
    with pytest.raises(ParseError, match="line 1"):
        list(read_edges(io.StringIO("A B\n")))


def test_build_graph_rejects_empty_token():
    with pytest.raises(ParseError, match="line 2"):
        build_graph([("a", "b"), ("", "c")])


def test_read_meta():
    text = "# prov\nid\tyear\tgroup\tdoctype\nA\t2001\tBHS\tarticle\nB\t\t\t\n"
    rows = list(read_meta(io.StringIO(text)))
    assert rows == [PublicationMeta("A", 2001, "BHS", "article"), PublicationMeta("B")]
    with pytest.raises(ParseError, match="line 1"):
        list(read_meta(io.StringIO("id\tyear\n")))
    with pytest.raises(ParseError, match="line 2"):
        list(read_meta(io.StringIO("id\tyear\tgroup\tdoctype\nA\tabc\t\t\n")))
    with pytest.raises(ParseError, match="line 2"):
        list(read_meta(io.StringIO("id\tyear\tgroup\tdoctype\nA\t5000\t\t\n")))
    with pytest.raises(ParseError, match="line 2"):
        list(read_meta(io.StringIO("id\tyear\tgroup\tdoctype\nA\t2000\n")))
