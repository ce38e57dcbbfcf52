from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citeimpact import fixtures
from citeimpact.graph import build_graph
from citeimpact.indicators import (
    INDICATOR_NAMES,
    batch_compute,
    citer_profile,
    compute_indicators,
    profile_distribution,
)
from oracles import (
    count_common,
    cross_edge_count,
    dedup,
    induced_edge_count,
    oracle_record,
    random_edges,
    scan_citers,
    scan_refs,
)


def test_fig1_citer_a1_has_no_citing_refs(fig1):
    a = fig1.index("A")
    p = citer_profile(fig1, a, fig1.index("A1"))
    assert p.r_citing == 0


def test_fig2_every_citer_cites_all_references(fig2):
    a = fig2.index("A")
    for c in fig2.citers(a):
        assert citer_profile(fig2, a, int(c)).r_cited == 3


def test_citer_profile_precondition(fig1):
    with pytest.raises(ValueError):
        citer_profile(fig1, fig1.index("A"), fig1.index("B1"))


@pytest.mark.parametrize("seed", range(8))
def test_citer_profile_matches_brute_force(seed):
    raw = random_edges(seed, n_max=100)
    edges = dedup(raw)
    g, _ = build_graph(raw)
    for f_tok in g.tokens:
        citers = scan_citers(edges, f_tok)
        refs_f = scan_refs(edges, f_tok)
        for c_tok in citers:
            refs_c = scan_refs(edges, c_tok)
            p = citer_profile(g, g.index(f_tok), g.index(c_tok))
            assert p.r_citing == count_common(refs_c, citers)
            assert p.r_cited == count_common(refs_c, refs_f)


def test_profile_distribution_fig1(fig1):
    profs = profile_distribution(fig1, fig1.index("A"))
    assert sorted(p.r_citing for p in profs) == [0, 1, 2, 3, 4]
    assert [p.citer for p in profs] == sorted(p.citer for p in profs)
    profs_b = profile_distribution(fig1, fig1.index("B"))
    assert len(profs_b) == 5
    assert all(p.r_citing == 0 and p.r_cited == 0 for p in profs_b)


def test_profile_distribution_uncited(fig1):
    assert profile_distribution(fig1, fig1.index("A5")) == []


def test_compute_fig1(fig1):
    r = compute_indicators(fig1, fig1.index("A"))
    assert (r.cp, r.cp_rciting_eq0, r.cp_rciting_gt0, r.tr_citing) == (5, 1, 4, 10)
    assert (r.pcp_rciting_eq0, r.pcp_rciting_gt0, r.mr_citing) == (0.2, 0.8, 2.0)
    b = compute_indicators(fig1, fig1.index("B"))
    assert (b.cp_rciting_eq0, b.cp_rciting_gt0, b.tr_citing) == (5, 0, 0)
    assert (b.pcp_rciting_eq0, b.pcp_rciting_gt0, b.mr_citing) == (1.0, 0.0, 0.0)


def test_compute_fig2(fig2):
    a = compute_indicators(fig2, fig2.index("A"))
    assert (a.cp_rcited_eq0, a.cp_rcited_gt0, a.tr_cited) == (0, 5, 15)
    assert (a.pcp_rcited_eq0, a.pcp_rcited_gt0, a.mr_cited) == (0.0, 1.0, 3.0)
    b = compute_indicators(fig2, fig2.index("B"))
    assert (b.cp_rcited_eq0, b.tr_cited, b.mr_cited, b.pcp_rcited_eq0) == (5, 0, 0.0, 1.0)


def test_uncited_is_undefined(fig1):
    r = compute_indicators(fig1, fig1.index("A5"))
    assert r.cp == 0
    assert all(getattr(r, k) == 0 for k in ("cp_rciting_eq0", "cp_rciting_gt0", "tr_citing",
                                            "cp_rcited_eq0", "cp_rcited_gt0", "tr_cited"))
    assert all(getattr(r, k) is None for k in ("pcp_rciting_eq0", "pcp_rciting_gt0",
                                               "mr_citing", "pcp_rcited_eq0",
                                               "pcp_rcited_gt0", "mr_cited"))


def test_batch_combined_fixture(fig12):
    recs = batch_compute(fig12, min_cp=5)
    # X1..X3 of fig2 are cited by A and by its five citers (cp = 6)
    assert {r.pub_id for r in recs} == {"A_fig1", "B_fig1", "A_fig2", "B_fig2",
                                        "X1_fig2", "X2_fig2", "X3_fig2"}
    assert {r.pub_id for r in recs if r.cp == 5} == {"A_fig1", "B_fig1", "A_fig2", "B_fig2"}
    assert [r.pub for r in recs] == sorted(r.pub for r in recs)


def test_batch_min_cp_zero(fig12):
    assert len(batch_compute(fig12, min_cp=0)) == fig12.n


def test_batch_rejects_negative(fig1):
    with pytest.raises(ValueError):
        batch_compute(fig1, min_cp=-1)


@pytest.mark.parametrize("seed", range(5))
def test_batch_matches_sequential(seed):
    g, _ = build_graph(random_edges(1000 + seed, n_max=200))
    recs = batch_compute(g, min_cp=3)
    assert recs == [compute_indicators(g, r.pub) for r in recs]
    assert batch_compute(g, min_cp=3, threads=4) == recs
    with ThreadPoolExecutor(3) as pool:
        assert batch_compute(g, min_cp=3, executor=pool) == recs


@pytest.mark.parametrize("seed", range(10))
def test_against_oracle(seed):
    raw = random_edges(seed)
    edges = dedup(raw)
    g, _ = build_graph(raw)
    for rec in batch_compute(g, min_cp=0):
        exp = oracle_record(edges, rec.pub_id)
        for name in INDICATOR_NAMES:
            got, want = getattr(rec, name), exp[name]
            if want is None:
                assert got is None
            else:
                assert got == pytest.approx(want, rel=1e-12, abs=0)


small_graphs = st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)),
                        min_size=0, max_size=60)


@settings(max_examples=200, deadline=None)
@given(small_graphs)
def test_structural_identities(pairs):
    raw = [(f"v{a}", f"v{b}") for a, b in pairs]
    edges = dedup(raw)
    g, _ = build_graph(raw)
    for r in batch_compute(g, min_cp=0):
        f = r.pub
        citers = [g.token(int(c)) for c in g.citers(f)]
        refs_f = [g.token(int(c)) for c in g.references(f)]
        assert r.cp_rciting_eq0 + r.cp_rciting_gt0 == r.cp
        assert r.cp_rcited_eq0 + r.cp_rcited_gt0 == r.cp
        assert r.tr_citing >= r.cp_rciting_gt0
        assert r.tr_cited >= r.cp_rcited_gt0
        assert r.tr_citing == induced_edge_count(edges, citers)
        assert r.tr_cited == cross_edge_count(edges, citers, refs_f)
        assert r.tr_citing <= r.cp * (r.cp - 1)
        assert r.tr_cited <= r.cp * len(refs_f)
        if r.cp:
            assert r.pcp_rciting_eq0 + r.pcp_rciting_gt0 == pytest.approx(1.0)
            assert r.pcp_rcited_eq0 + r.pcp_rcited_gt0 == pytest.approx(1.0)
            assert r.mr_citing == r.tr_citing / r.cp


@settings(max_examples=100, deadline=None)
@given(small_graphs, st.integers(0, 11))
def test_adding_isolated_citer(pairs, focal):
    raw = [(f"v{a}", f"v{b}") for a, b in pairs] + [(f"v{focal}", f"v{focal}")]
    g0, _ = build_graph(raw)
    g1, _ = build_graph(raw + [("fresh", f"v{focal}")])
    before = compute_indicators(g0, g0.index(f"v{focal}"))
    after = compute_indicators(g1, g1.index(f"v{focal}"))
    assert after.cp == before.cp + 1
    assert after.cp_rciting_eq0 == before.cp_rciting_eq0 + 1
    assert after.cp_rcited_eq0 == before.cp_rcited_eq0 + 1
    assert (after.tr_citing, after.tr_cited) == (before.tr_citing, before.tr_cited)


def tournament_edges(bits):
    """Fig. 1 pattern for A with the citer pairs oriented by ``bits``."""
    edges = [(f"A{i}", "A") for i in range(1, 6)]
    for bit, (i, j) in zip(bits, itertools.combinations(range(1, 6), 2)):
        edges.append((f"A{j}", f"A{i}") if bit else (f"A{i}", f"A{j}"))
    return edges


def has_sink(edges):
    citers = [f"A{i}" for i in range(1, 6)]
    return any(not any(c == x and d in citers for c, d in edges) for x in citers)


def is_acyclic(edges):
    # A tournament is acyclic iff its out-degrees are a permutation of 0..n-1.
    citers = [f"A{i}" for i in range(1, 6)]
    outdeg = sorted(sum(1 for c, d in edges if c == x and d != "A") for x in citers)
    return outdeg == [0, 1, 2, 3, 4]


def test_tournament_orientations():
    n_acyclic = 0
    for bits in itertools.product((0, 1), repeat=10):
        edges = tournament_edges(bits)
        g, _ = build_graph(edges)
        r = compute_indicators(g, g.index("A"))
        assert r.tr_citing == 10
        assert r.cp_rciting_eq0 == (1 if has_sink(edges) else 0)
        if is_acyclic(edges):
            n_acyclic += 1
            assert r.cp_rciting_eq0 == 1
    assert n_acyclic == 120


def test_fixture_helpers():
    with pytest.raises(KeyError):
        fixtures.path("fig3")
