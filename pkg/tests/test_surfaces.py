import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from branchtor import perms
from branchtor.errors import InfeasibleError, NonOrientableError
from branchtor.surfaces import (
    BoundaryComponent,
    SurfaceSpec,
    boundary_class,
    build_cover,
    cover_feasible,
    euler_char,
    orientation_double_cover,
    positive_genus_cover,
    solve_commutator,
    witness_problems,
)

import oracles


def surface(g, b, signs=None):
    return SurfaceSpec.orientable_with(g, [f"x{k}" for k in range(1, b + 1)], signs)


def test_euler_characteristic():
    assert euler_char(surface(1, 1)) == -1
    assert euler_char(SurfaceSpec(False, 1, (BoundaryComponent("x"),))) == 0


def test_cover_examples():
    c, w = build_cover(surface(1, 1), 2, [[1, 1]])
    assert (c.genus, len(c.boundary)) == (1, 2)
    c, w = build_cover(surface(1, 2), 3, [[3], [1, 1, 1]])
    assert (c.genus, euler_char(c)) == (2, -6)
    assert w.elevations() == {"x1.0": (0, 3), "x2.0": (1, 1), "x2.1": (1, 1), "x2.2": (1, 1)}


def test_parity_obstruction():
    assert not cover_feasible(surface(1, 1), 2, [[2]])
    with pytest.raises(InfeasibleError):
        build_cover(surface(1, 1), 2, [[2]])


def test_boundary_class():
    assert boundary_class(surface(1, 2, [1, -1])) == {"x1": 1, "x2": -1}
    assert boundary_class(SurfaceSpec(True, 2)) == {}
    with pytest.raises(NonOrientableError):
        boundary_class(SurfaceSpec(False, 1, (BoundaryComponent("x"),)))


def test_orientation_double_cover():
    mobius = SurfaceSpec(False, 1, (BoundaryComponent("x"),))
    d = orientation_double_cover(mobius)
    assert d.orientable and euler_char(d) == 0 and [c.sign for c in d.boundary] == [1, -1]
    d = orientation_double_cover(SurfaceSpec(False, 1, (BoundaryComponent("x"), BoundaryComponent("y"))))
    assert euler_char(d) == -2 and len(d.boundary) == 4
    collapsed = {}
    for c in d.boundary:
        base = c.label.rstrip("'")
        collapsed[base] = collapsed.get(base, 0) + c.sign
    assert set(collapsed.values()) == {0}
    d = orientation_double_cover(SurfaceSpec(False, 2, (BoundaryComponent("x"),)))
    assert (d.genus, len(d.boundary)) == (1, 2)
    with pytest.raises(ValueError):
        orientation_double_cover(surface(1, 1))


def test_positive_genus_covers_relation():
    s3, _ = positive_genus_cover(SurfaceSpec.orientable_with(0, ["p", "q", "r"]))
    assert (s3.genus, len(s3.boundary)) == (1, 3)
    for r in range(4, 11):
        s, h = positive_genus_cover(SurfaceSpec.orientable_with(0, [f"x{k}" for k in range(r)]))
        assert len(s.boundary) == r + r % 2
        assert 2 * s.genus == r - 2 - r % 2
        assert s.genus >= 1


def test_solve_commutator_rejects_odd():
    with pytest.raises(InfeasibleError):
        solve_commutator((1, 0, 2))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10**6))
def test_every_even_permutation_is_a_commutator_of_a_full_cycle(d, seed):
    rng = random.Random(seed)
    c = list(range(d))
    rng.shuffle(c)
    c = tuple(c)
    if perms.sign(c) != 1:
        return
    s, t = solve_commutator(c, seed)
    assert perms.commutator(s, t) == c
    assert len(perms.cycles(s)) == 1


def _random_prescription(rng, d, b, parity_ok):
    while True:
        p = [list(rng.choice(list(oracles.partitions(d)))) for _ in range(b)]
        parts = sum(len(x) for x in p)
        if ((parts - d * b) % 2 == 0) == parity_ok:
            return p


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 14), st.integers(0, 10**6))
def test_built_covers_are_valid(g, b, d, seed):
    rng = random.Random(seed)
    base = surface(g, b, [rng.choice([1, -1]) for _ in range(b)])
    p = _random_prescription(rng, d, b, True)
    cover, w = build_cover(base, d, p, seed)
    assert witness_problems(base, cover, w) == []
    assert euler_char(cover) == d * euler_char(base)
    assert (len(cover.boundary) - d * b) % 2 == 0
    for x, parts in zip(w.boundary, p):
        assert sorted(map(len, perms.cycles(x))) == sorted(parts)
    assert perms.is_transitive(w.generators(), d)


def test_witness_problems_catch_tampering():
    base = surface(1, 2)
    cover, w = build_cover(base, 4, [[1, 3], [2, 2]])
    assert witness_problems(base, cover, w) == []
    bad = type(w)(w.degree, w.handles, (w.boundary[1], w.boundary[0]), w.labels)
    assert witness_problems(base, cover, bad)
    split = type(w)(w.degree, ((perms.identity(4), perms.identity(4)),), w.boundary, w.labels)
    assert witness_problems(base, cover, split)


def test_cover_feasible_small_exhaustive():
    for g, b, d in itertools.product((1, 2), (1, 2), range(1, 5)):
        s = surface(g, b)
        for pr in itertools.product(list(oracles.partitions(d)), repeat=b):
            assert cover_feasible(s, d, pr) == oracles.representation_exists(g, d, pr)
