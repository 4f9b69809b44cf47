"""Compact surfaces with signed boundary, and their finite covers.

A d-sheeted cover of an orientable surface of genus g with b boundary
components is a transitive action of its fundamental group

    < s1, t1, ..., sg, tg, x1, ..., xb | [s1,t1]...[sg,tg] x1...xb >

on d points.  The cycles of the boundary permutation x_k are the boundary
components of the cover lying over the k-th boundary, and a cycle's length is
the degree with which it wraps around.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from . import perms
from .errors import InfeasibleError, NonOrientableError
from .perms import Perm
from .stallings import (
    PeripheralStructure,
    SubgroupGraph,
    from_generators,
    index,
    pullback_records,
)

EXHAUSTIVE_MAX_DEGREE = 12


@dataclass(frozen=True)
class BoundaryComponent:
    label: str
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("boundary sign must be +1 or -1")


@dataclass(frozen=True)
class SurfaceSpec:
    """Orientable: genus g.  Nonorientable: genus = number of cross-caps (>= 1)."""

    orientable: bool
    genus: int
    boundary: tuple[BoundaryComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(self.boundary))
        if self.genus < 0 or (not self.orientable and self.genus < 1):
            raise ValueError("invalid genus")
        labels = [c.label for c in self.boundary]
        if len(set(labels)) != len(labels):
            raise ValueError("boundary labels must be unique")

    @classmethod
    def orientable_with(cls, genus: int, labels: Sequence[str], signs: Sequence[int] | None = None):
        signs = signs or [1] * len(labels)
        return cls(True, genus, tuple(BoundaryComponent(l, s) for l, s in zip(labels, signs)))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.boundary)

    def sign_of(self, label: str) -> int:
        for c in self.boundary:
            if c.label == label:
                return c.sign
        raise KeyError(label)

    def to_json(self) -> dict:
        return {
            "orientable": self.orientable,
            "genus": self.genus,
            "boundary": [{"label": c.label, "sign": c.sign} for c in self.boundary],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SurfaceSpec":
        return cls(
            bool(data["orientable"]),
            int(data["genus"]),
            tuple(BoundaryComponent(str(c["label"]), int(c.get("sign", 1))) for c in data["boundary"]),
        )


def euler_char(s: SurfaceSpec) -> int:
    b = len(s.boundary)
    return 2 - 2 * s.genus - b if s.orientable else 2 - s.genus - b


def genus_from(chi: int, b: int) -> int:
    twice = 2 - chi - b
    if twice < 0 or twice % 2:
        raise ValueError(f"no orientable surface has chi={chi} and {b} boundary components")
    return twice // 2


def boundary_class(s: SurfaceSpec) -> dict[str, int]:
    """Boundary of the fundamental class as {label: coefficient}."""
    if not s.orientable:
        raise NonOrientableError("a nonorientable surface has no fundamental class")
    return {c.label: c.sign for c in s.boundary}


# -- covers -------------------------------------------------------------------


@dataclass(frozen=True)
class CoverWitness:
    """Permutation representation of the base surface group on ``degree`` points.

    ``labels[k][j]`` names the cover boundary component given by the j-th
    cycle of ``boundary[k]`` (cycles ordered by least point).
    """

    degree: int
    handles: tuple[tuple[Perm, Perm], ...]
    boundary: tuple[Perm, ...]
    labels: tuple[tuple[str, ...], ...] = field(default=())

    def relator(self) -> Perm:
        p = perms.identity(self.degree)
        for s, t in self.handles:
            p = perms.compose(p, perms.commutator(s, t))
        for x in self.boundary:
            p = perms.compose(p, x)
        return p

    def generators(self) -> list[Perm]:
        return [p for h in self.handles for p in h] + list(self.boundary)

    def elevations(self) -> dict[str, tuple[int, int]]:
        """Cover boundary label -> (index of base boundary, degree)."""
        out = {}
        for k, (x, names) in enumerate(zip(self.boundary, self.labels)):
            for name, c in zip(names, perms.cycles(x)):
                out[name] = (k, len(c))
        return out

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "handles": [[list(s), list(t)] for s, t in self.handles],
            "boundary": [list(x) for x in self.boundary],
            "labels": [list(n) for n in self.labels],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoverWitness":
        return cls(
            int(data["degree"]),
            tuple((tuple(map(int, s)), tuple(map(int, t))) for s, t in data["handles"]),
            tuple(tuple(map(int, x)) for x in data["boundary"]),
            tuple(tuple(map(str, n)) for n in data["labels"]),
        )


def _check_prescription(s: SurfaceSpec, d: int, p: Sequence[Sequence[int]]) -> None:
    if not s.orientable or s.genus < 1 or not s.boundary:
        raise ValueError("covers are built for orientable surfaces of genus >= 1 with boundary")
    if d < 1:
        raise ValueError("degree must be positive")
    if len(p) != len(s.boundary):
        raise ValueError("need one multiset of degrees per boundary component")
    for parts in p:
        if not parts or any(int(k) < 1 for k in parts) or sum(parts) != d:
            raise ValueError(f"degrees {list(parts)} do not partition {d}")


def cover_feasible(s: SurfaceSpec, d: int, p: Sequence[Sequence[int]]) -> bool:
    _check_prescription(s, d, p)
    parts = sum(len(x) for x in p)
    return (parts - d * len(s.boundary)) % 2 == 0


def _candidate_cycles(d: int, seed: int):
    yield perms.from_cycle(range(d), d) if d > 1 else perms.identity(d)
    rng = random.Random(seed)
    for _ in range(64 * d):
        rest = list(range(1, d))
        rng.shuffle(rest)
        yield perms.from_cycle([0] + rest, d)
    if d <= EXHAUSTIVE_MAX_DEGREE:
        yield from perms.full_cycles(d)


def solve_commutator(c: Sequence[int], seed: int = 0) -> tuple[Perm, Perm]:
    """Find (s, t) with s a full cycle and commutator(s, t) == c.

    Writes c = s * y with s and y both full cycles; y is then conjugate to
    s^-1 and the conjugating element is t.  Every even permutation admits
    such a factorisation, so the search only fails on odd input.
    """
    d = len(c)
    if perms.sign(c) != 1:
        raise InfeasibleError("only even permutations are commutators")
    for s in _candidate_cycles(d, seed):
        si = perms.invert(s)
        y = perms.compose(si, c)
        if len(perms.cycles(y)) == 1 or d <= 1:
            t = perms.conjugator(si, y)
            assert perms.commutator(s, t) == tuple(c)
            return s, t
    raise InfeasibleError(f"commutator search budget exhausted at degree {d}")


def build_cover(
    s: SurfaceSpec, d: int, p: Sequence[Sequence[int]], seed: int = 0
) -> tuple[SurfaceSpec, CoverWitness]:
    if not cover_feasible(s, d, p):
        raise InfeasibleError("parity condition fails: number of parts must match d*b mod 2")
    xs = tuple(perms.from_cycle_type(parts) for parts in p)
    residual = perms.invert(perms.compose(perms.identity(d), *xs))
    s1, t1 = solve_commutator(residual, seed)
    ident = perms.identity(d)
    handles = ((s1, t1),) + tuple((ident, ident) for _ in range(s.genus - 1))
    labels = []
    comps = []
    for c, x in zip(s.boundary, xs):
        names = tuple(f"{c.label}.{j}" for j in range(len(perms.cycles(x))))
        labels.append(names)
        comps.extend(BoundaryComponent(n, c.sign) for n in names)
    witness = CoverWitness(d, handles, xs, tuple(labels))
    chi = d * euler_char(s)
    cover = SurfaceSpec(True, genus_from(chi, len(comps)), tuple(comps))
    return cover, witness


def witness_problems(base: SurfaceSpec, cover: SurfaceSpec, w: CoverWitness) -> list[str]:
    """Everything wrong with a claimed cover; empty when it is valid."""
    out = []
    if not base.orientable or not cover.orientable:
        return ["witnesses describe covers of orientable surfaces only"]
    d = w.degree
    if d < 1:
        return ["degree must be positive"]
    if len(w.handles) != base.genus or len(w.boundary) != len(base.boundary):
        return ["generator count does not match the base surface"]
    gens = w.generators()
    if any(sorted(g) != list(range(d)) for g in gens):
        return ["an assigned map is not a permutation of the sheets"]
    if w.relator() != perms.identity(d):
        out.append("surface relator does not act trivially")
    if not perms.is_transitive(gens, d):
        out.append("action is not transitive (cover disconnected)")
    if len(w.labels) != len(w.boundary):
        out.append("boundary labels missing")
    else:
        want = {}
        for c, x, names in zip(base.boundary, w.boundary, w.labels):
            if len(names) != len(perms.cycles(x)):
                out.append(f"cycle count over {c.label} does not match its labels")
            for n in names:
                want[n] = c.sign
        have = {c.label: c.sign for c in cover.boundary}
        if have != want:
            out.append("cover boundary labels or signs do not match the witness")
    if euler_char(cover) != d * euler_char(base):
        out.append("Euler characteristic is not multiplicative")
    return out


def orientation_double_cover(s: SurfaceSpec) -> SurfaceSpec:
    if s.orientable:
        raise ValueError("surface is already orientable")
    comps = []
    for c in s.boundary:
        comps.append(BoundaryComponent(c.label + "'", 1))
        comps.append(BoundaryComponent(c.label + "''", -1))
    chi = 2 * euler_char(s)
    return SurfaceSpec(True, genus_from(chi, len(comps)), tuple(comps))


def _positive_genus_subgroup(b: int) -> tuple[SubgroupGraph, list[tuple[int, ...]]]:
    if b == 3:
        a, B = 1, 2
        gens = [(a, a, a), (B, a, a), (a, B, a), (a, a, B)]
        return from_generators(2, gens), [(a,), (B,), (a, B)]
    # free group of rank b-1 on the first b-1 boundary loops; the last
    # boundary loop is the product of all of them
    n = b - 1
    gens = [(1, 1)] + [w for j in range(2, n + 1) for w in ((1, j), (j, 1))]
    classes = [(i,) for i in range(1, n + 1)] + [tuple(range(1, n + 1))]
    return from_generators(n, gens), classes


def positive_genus_cover(s: SurfaceSpec) -> tuple[SurfaceSpec, SubgroupGraph]:
    """A finite cover of positive genus of a planar surface with >= 3 boundaries."""
    if not s.orientable or s.genus != 0 or len(s.boundary) < 3:
        raise ValueError("expects an orientable genus-0 surface with at least 3 boundary components")
    h, classes = _positive_genus_subgroup(len(s.boundary))
    records = pullback_records(h, PeripheralStructure(classes))
    comps = []
    count: dict[int, int] = {}
    for r in records:
        base = s.boundary[r.base_class_index]
        j = count.get(r.base_class_index, 0)
        count[r.base_class_index] = j + 1
        comps.append(BoundaryComponent(f"{base.label}.{j}", base.sign))
    chi = int(index(h)) * euler_char(s)
    return SurfaceSpec(True, genus_from(chi, len(comps)), tuple(comps)), h
