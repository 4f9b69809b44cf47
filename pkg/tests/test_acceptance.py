"""Acceptance criteria, one test per criterion.

Run under pytest (a PASS/FAIL summary line per criterion is printed at the
end) or directly with ``python3 tests/test_acceptance.py``.
"""

import io
import itertools
import json
import random
import sys
import time

from branchtor import stallings as S
from branchtor.abelian import AbelianGroup, diagonal, smith_normal_form
from branchtor.cli import run
from branchtor.complexes import (
    build_from_system,
    h1,
    is_connected,
    match_elevations,
    matching_feasible,
    standard_branched_surface,
    torsion_cover,
    verify_cover,
)
from branchtor.deqs import quotient
from branchtor.errors import InfeasibleError
from branchtor.surfaces import SurfaceSpec, cover_feasible, positive_genus_cover
from branchtor.words import CyclicWord, parse

import oracles
from test_complexes import graph_betti, random_pure_system
from test_stallings import embedding_instance

HEADLINE_SECONDS = 1.0
SWEEP_SECONDS = 30.0
PARITY_SECONDS = 60.0


def test_criterion_1_headline_torsion_cover():
    t0 = time.perf_counter()
    buf = io.StringIO()
    code = run(["torsion-cover", "--factors", "2,3", "--certify"], out=buf)
    elapsed = time.perf_counter() - t0
    out = json.loads(buf.getvalue())
    assert code == 0
    assert out["degree"] == "11"
    assert out["torsion"] == ["6"]
    assert "connected: ok" in out["certificate"]["transcript"]
    assert elapsed < HEADLINE_SECONDS, elapsed


def test_criterion_2_prescribed_torsion_sweep():
    rng = random.Random(20)
    std = standard_branched_surface()
    t0 = time.perf_counter()
    for _ in range(20):
        factors = [rng.randint(2, 20) for _ in range(rng.randint(1, 4))]
        cover, data = torsion_cover(std, factors)
        rep = verify_cover(cover, std, data)
        assert rep.ok, (factors, rep.problems)
        assert rep.degree == sum(3 * r - 2 for r in factors)
        assert is_connected(cover)
        assert h1(cover).torsion == AbelianGroup.from_orders(0, factors), factors
    assert time.perf_counter() - t0 < SWEEP_SECONDS


def test_criterion_3_elevation_golden():
    h = S.from_generators(2, [parse("aaa"), parse("abAB"), parse("baaB")])
    assert sorted(r.degree for r in S.elevations(h, CyclicWord(parse("a")))) == [2, 3]
    assert [r.degree for r in S.elevations(h, CyclicWord(parse("abAB")))] == [1]


def test_criterion_4_intersection_golden():
    k = S.from_generators(2, [parse(w) for w in ("aa", "b", "aba")])
    f1 = S.from_generators(2, [parse(w) for w in ("aaaa", "baaa", "abaa", "aaba", "aaab")])
    k1 = S.intersect(k, f1)
    assert S.rank(k1) == 9
    pulled = S.pullback_structure(k1, S.Pair(k, [parse("aa")]))
    expected = {S.conjugacy_key(k1, parse("aaaa")), S.conjugacy_key(k1, parse("baaaaB"))}
    assert len(pulled) == 2 and set(pulled.keys()) == expected


def test_criterion_5_positive_genus_covers():
    s, _ = positive_genus_cover(SurfaceSpec.orientable_with(0, ["x1", "x2", "x3"]))
    assert (s.genus, len(s.boundary)) == (1, 3)
    for r in range(4, 11):
        cover, _ = positive_genus_cover(SurfaceSpec.orientable_with(0, [f"x{k}" for k in range(r)]))
        assert 2 * cover.genus == r - 2 - ((r - 1) % 2), (r, cover.genus)


def test_criterion_6_surface_cover_parity():
    t0 = time.perf_counter()
    checked = 0
    for g, b, d in itertools.product((1, 2), (1, 2, 3), range(1, 6)):
        s = SurfaceSpec.orientable_with(g, [f"x{k}" for k in range(b)])
        for pr in itertools.product(list(oracles.partitions(d)), repeat=b):
            assert cover_feasible(s, d, pr) == oracles.representation_exists(g, d, pr), (g, b, d, pr)
            checked += 1
    assert checked == 1220
    assert time.perf_counter() - t0 < PARITY_SECONDS


def test_criterion_7_snf_oracle():
    rng = random.Random(7)
    for _ in range(200):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        m = [[rng.randint(-10, 10) for _ in range(c)] for _ in range(r)]
        got = diagonal(smith_normal_form(m)[1])
        assert got == oracles.snf_diagonal_from_divisors(oracles.determinantal_divisors(m)), m


def test_criterion_8_closed_form_h1():
    rng = random.Random(8)
    for _ in range(100):
        s = random_pure_system(rng)
        c = build_from_system(s, 1)
        q = quotient(s)
        expected = AbelianGroup(q.free_rank + 2 * len(s.equations) + graph_betti(s), q.invariant_factors)
        assert h1(c) == expected, s


def test_criterion_9_embedded_subpair_stability():
    for seed in range(50):
        sub1, sup1 = embedding_instance(seed)
        assert S.is_embedded_subpair(sub1, sup1), seed
    k = S.from_generators(2, [parse(w) for w in ("aa", "b", "aba")])
    f1 = S.from_generators(2, [parse(w) for w in ("aaaa", "baaa", "abaa", "aaba", "aaab")])
    k1 = S.intersect(k, f1)
    assert S.is_embedded_subpair(S.Pair(k, [parse("aa")]), S.Pair.free(2, [parse("aa")]))
    sub = S.pullback_structure(k1, S.Pair(k, [parse("aa")]))
    sup = S.pullback_structure(f1, [parse("aa")])
    assert not S.is_embedded_subpair(sub, sup)


def test_criterion_10_matching_criterion():
    checked = 0
    for total in range(0, 13):
        for counts in oracles.compositions(total):
            brute = oracles.perfect_matching_exists(counts)
            assert matching_feasible(counts) == brute, counts
            try:
                pairs = match_elevations(counts)
            except InfeasibleError:
                assert not brute, counts
            else:
                assert brute and all(a[0] != b[0] for a, b in pairs), counts
            checked += 1
    assert checked == 2**12


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(
        ((n, f) for n, f in globals().items() if n.startswith("test_criterion_")),
        key=lambda item: int(item[0].split("_")[2]),
    ):
        n, label = name.split("_")[2], " ".join(name.split("_")[3:])
        try:
            fn()
        except AssertionError as e:
            failed += 1
            print(f"FAIL criterion {n}: {label} ({e})")
        else:
            print(f"PASS criterion {n}: {label}")
    sys.exit(1 if failed else 0)
