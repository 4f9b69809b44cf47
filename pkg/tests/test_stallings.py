import random

import pytest
from hypothesis import given, settings, strategies as st

from branchtor import stallings as S
from branchtor.errors import InfiniteIndexError, NotASubgroupError
from branchtor.words import CyclicWord, format_word, multiply, parse

import oracles


def sub(rank, *gens):
    return S.from_generators(rank, [parse(g) for g in gens])


def test_rose_and_small_graphs():
    assert S.from_generators(2, [parse("a"), parse("b")]) == S.SubgroupGraph.rose(2)
    # two vertices, but rank 2 means it cannot have index 2 (that needs rank 3)
    h = sub(2, "aa", "ab")
    assert h.num_vertices == 2 and S.rank(h) == 2 and S.index(h) == S.INFINITE
    h = sub(2, "aa", "ab", "ba")
    assert h.num_vertices == 2 and S.index(h) == 2 and S.rank(h) == 3


def test_elevation_figure_subgroup():
    h = sub(2, "aaa", "abAB", "baaB")
    assert (h.num_vertices, len(h.edges)) == (5, 7)
    assert S.index(h) == S.INFINITE and S.rank(h) == 3
    assert sorted(r.degree for r in S.elevations(h, CyclicWord(parse("a")))) == [2, 3]
    assert [r.degree for r in S.elevations(h, CyclicWord(parse("abAB")))] == [1]


def test_membership():
    h = sub(2, "aaa", "abAB", "baaB")
    assert S.contains(h, parse("baaaaB"))  # (baaB)^2
    assert not S.contains(h, parse("a"))


def test_intersection_counterexample():
    k = sub(2, "aa", "b", "aba")
    f1 = sub(2, "aaaa", "baaa", "abaa", "aaba", "aaab")
    k1 = S.intersect(k, f1)
    assert S.rank(k1) == 9 and S.index(k1) == 8
    pulled = S.pullback_structure(k1, S.Pair(k, [parse("aa")]))
    assert set(pulled.keys()) == {
        S.conjugacy_key(k1, parse("aaaa")),
        S.conjugacy_key(k1, parse("baaaaB")),
    }
    assert S.is_embedded_subpair(S.Pair(k, [parse("aa")]), S.Pair.free(2, [parse("aa")]))
    f_pulled = S.pullback_structure(f1, [parse("aa")])
    assert not S.is_embedded_subpair(pulled, f_pulled)


def test_positive_genus_pullback_has_three_classes():
    h = sub(2, "aaa", "baa", "aba", "aab")
    assert S.index(h) == 3 and S.rank(h) == 4
    assert len(S.pullback_structure(h, [parse("a"), parse("b"), parse("ab")])) == 3


def test_pullback_needs_finite_index():
    with pytest.raises(InfiniteIndexError):
        S.pullback_structure(sub(2, "a"), [parse("a")])


def test_embedded_subpair_rejects_non_subgroups():
    with pytest.raises(NotASubgroupError):
        S.is_embedded_subpair(S.Pair(sub(2, "a"), [parse("a")]), S.Pair(sub(2, "b"), [parse("b")]))


def test_complete_to_cover_keeps_vertices():
    h = sub(2, "aaa", "abAB", "baaB")
    c = S.complete_to_cover(h)
    assert c.num_vertices == h.num_vertices and S.index(c) == h.num_vertices
    assert S.is_subgroup(h, c)


def test_malnormal_structure():
    assert S.is_malnormal_structure([CyclicWord(parse("a")), CyclicWord(parse("b"))])
    assert not S.is_malnormal_structure([CyclicWord(parse("aa"))])
    assert not S.is_malnormal_structure([CyclicWord(parse("ab")), CyclicWord(parse("BA"))])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_intersect_matches_coset_oracle(seed):
    rng = random.Random(seed)
    rank = rng.randint(1, 2)
    g1 = oracles.random_transitive_perms(rng, rank, rng.randint(1, 6))
    g2 = oracles.random_transitive_perms(rng, rank, rng.randint(1, 6))
    h = S.intersect(S.SubgroupGraph.from_permutations(g1), S.SubgroupGraph.from_permutations(g2))
    assert S.index(h) == len(oracles.product_orbit(g1, g2))
    for _ in range(30):
        w = oracles.random_word(rng, rank, rng.randint(0, 10))
        inside = oracles.act(g1, w) == 0 and oracles.act(g2, w) == 0
        assert S.contains(h, w) == inside


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_degree_sum_law(seed):
    rng = random.Random(seed)
    gens = oracles.random_transitive_perms(rng, 2, rng.randint(1, 7))
    h = S.SubgroupGraph.from_permutations(gens)
    w = oracles.random_word(rng, 2, rng.randint(1, 6))
    c = CyclicWord.of(w)
    if not len(c):
        return
    assert sum(r.degree for r in S.elevations(h, c)) == S.index(h)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_elevation_degrees_multiply_along_a_tower(seed):
    rng = random.Random(seed)
    gens = oracles.random_transitive_perms(rng, 2, rng.randint(1, 4))
    h = S.SubgroupGraph.from_permutations(gens)
    k = S.intersect(h, S.SubgroupGraph.from_permutations(oracles.random_transitive_perms(rng, 2, rng.randint(1, 3))))
    w = CyclicWord.of(oracles.random_word(rng, 2, rng.randint(1, 5)))
    if not len(w):
        return
    direct = sorted(r.degree for r in S.elevations(k, w))
    composed = []
    for r in S.elevations(h, w):
        for q in S.relative_elevations(k, h, r.element):
            composed.append(r.degree * q.degree)
    assert sorted(composed) == direct


def _random_embedded_instance(rng):
    """(K, [u]) embedded in (F, [w]) with no proper powers in [w]."""
    while True:
        ws = []
        for _ in range(rng.randint(1, 2)):
            c = CyclicWord.of(oracles.random_word(rng, 2, rng.randint(1, 3)))
            if len(c) and c not in ws and c.inverse() not in ws and S.is_malnormal_structure(ws + [c]):
                ws.append(c)
        if not ws:
            continue
        conj = [oracles.random_word(rng, 2, rng.randint(0, 2)) for _ in ws]
        us = [multiply(c, w.word, tuple(-x for x in reversed(c))) for c, w in zip(conj, ws)]
        extra = [oracles.random_word(rng, 2, rng.randint(2, 4)) for _ in range(rng.randint(0, 1))]
        k = S.from_generators(2, us + extra)
        try:
            sub = S.Pair(k, us)
        except Exception:
            continue
        sup = S.Pair.free(2, [w.word for w in ws])
        if S.is_embedded_subpair(sub, sup):
            return sub, sup


def embedding_instance(seed):
    rng = random.Random(seed)
    sub, sup = _random_embedded_instance(rng)
    f1 = S.SubgroupGraph.from_permutations(oracles.random_transitive_perms(rng, 2, rng.randint(1, 4)))
    k1 = S.intersect(sub.group, f1)
    return S.pullback_structure(k1, sub), S.pullback_structure(f1, sup)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_pulled_back_embedding_stays_embedded(seed):
    sub1, sup1 = embedding_instance(seed)
    assert S.is_embedded_subpair(sub1, sup1)


def test_graph_json_is_canonical():
    a = sub(2, "aaa", "abAB", "baaB")
    b = sub(2, "baaB", "aaa", "abAB", "aaaaaa")
    assert a.to_json() == b.to_json()
    assert [format_word(w) for w in a.basis()] == [format_word(w) for w in b.basis()]
