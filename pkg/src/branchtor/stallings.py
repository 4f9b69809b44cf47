"""Subgroup graphs of free groups.

A finitely generated subgroup H of the free group of rank n is stored as its
folded core graph: a finite labelled graph with a basepoint whose reduced
closed paths at the basepoint spell exactly the elements of H.  Vertices are
renumbered in breadth-first order from the basepoint (basepoint = 0), visiting
labels in the order a, A, b, B, ...  Two graphs of the same subgroup are
therefore equal as data.

Elevations are computed geometrically.  For a cyclic word w the walk
``v -> v.w`` is a partial injection on vertices; each cycle of it is one
elevation, and the cycle length is its degree.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InfiniteIndexError, NotASubgroupError, NotASubpairError
from .words import (
    CyclicWord,
    Word,
    conjugate_equal,
    cyclic_reduce,
    inverse,
    multiply,
    power,
    primitive_root,
    reduce,
    word_key,
)

INFINITE = math.inf

Edge = tuple[int, int, int]


def signed_labels(rank: int) -> list[int]:
    return [x for i in range(1, rank + 1) for x in (i, -i)]


def _fold(n: int, edges: Iterable[Edge]) -> tuple[list[int], set[Edge]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    current = set(edges)
    while True:
        current = {(find(u), find(v), l) for u, v, l in current}
        seen: dict[tuple[int, int], int] = {}
        merged = False
        for u, v, l in sorted(current):
            for key, target in (((u, l), v), ((v, -l), u)):
                other = seen.setdefault(key, target)
                a, b = find(other), find(target)
                if a != b:
                    parent[max(a, b)] = min(a, b)
                    merged = True
        if not merged:
            return [find(x) for x in range(n)], current


def _core(base: int, edges: set[Edge]) -> set[Edge]:
    degree: dict[int, int] = {}
    incident: dict[int, list[Edge]] = {}
    for e in edges:
        u, v, _ = e
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
        incident.setdefault(u, []).append(e)
        if v != u:
            incident.setdefault(v, []).append(e)
    alive = set(edges)
    stack = [v for v, d in degree.items() if d <= 1 and v != base]
    while stack:
        v = stack.pop()
        for e in incident.get(v, []):
            if e in alive:
                alive.discard(e)
                for w in (e[0], e[1]):
                    degree[w] -= 1
                    if w != base and w != v and degree[w] == 1:
                        stack.append(w)
    return alive


class SubgroupGraph:
    """Folded core graph of a subgroup, with canonical vertex numbering."""

    __slots__ = ("rank", "num_vertices", "edges", "_step", "_paths", "_tree")

    def __init__(self, rank: int, num_vertices: int, edges: Iterable[Edge], basepoint: int = 0):
        if rank < 1:
            raise ValueError("rank must be at least 1")
        edges = set(edges)
        for u, v, l in edges:
            if not 1 <= l <= rank:
                raise ValueError(f"label {l} outside 1..{rank}")
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge {(u, v, l)} has an unknown vertex")
        folded_to, edges = _fold(num_vertices, edges)
        base = folded_to[basepoint]
        edges = _core(base, edges)
        step = {}
        for u, v, l in edges:
            step[(u, l)] = v
            step[(v, -l)] = u
        # breadth-first renumbering
        order = {base: 0}
        paths: list[Word] = [()]
        tree: set[Edge] = set()
        queue = deque([base])
        labels = signed_labels(rank)
        while queue:
            u = queue.popleft()
            for l in labels:
                v = step.get((u, l))
                if v is not None and v not in order:
                    order[v] = len(order)
                    paths.append(paths[order[u]] + (l,))
                    tree.add((u, v, l) if l > 0 else (v, u, -l))
                    queue.append(v)
        self.rank = rank
        self.num_vertices = len(order)
        self.edges: tuple[Edge, ...] = tuple(
            sorted((order[u], order[v], l) for u, v, l in edges if u in order)
        )
        self._tree = frozenset((order[u], order[v], l) for u, v, l in tree)
        self._step = {(order[u], l): order[v] for (u, l), v in step.items() if u in order}
        self._paths = paths

    # -- constructors ---------------------------------------------------

    @classmethod
    def rose(cls, rank: int) -> "SubgroupGraph":
        return cls(rank, 1, [(0, 0, l) for l in range(1, rank + 1)])

    @classmethod
    def from_permutations(cls, perms: Sequence[Sequence[int]]) -> "SubgroupGraph":
        """Schreier graph of a permutation action, based at point 0."""
        n = len(perms[0])
        edges = [(i, p[i], l + 1) for l, p in enumerate(perms) for i in range(n)]
        return cls(len(perms), n, edges)

    # -- queries --------------------------------------------------------

    @property
    def basepoint(self) -> int:
        return 0

    def vertices(self) -> range:
        return range(self.num_vertices)

    def step(self, v: int, letter: int) -> int | None:
        return self._step.get((v, letter))

    def follow(self, v: int | None, word: Iterable[int]) -> int | None:
        for x in word:
            if v is None:
                return None
            v = self._step.get((v, x))
        return v

    def degree(self, v: int) -> int:
        return sum(1 for l in signed_labels(self.rank) if (v, l) in self._step)

    def path_to(self, v: int) -> Word:
        """Shortest path label from the basepoint, ties broken by label order."""
        return self._paths[v]

    def basis(self) -> list[Word]:
        """Free basis read off the breadth-first spanning tree."""
        out = []
        for u, v, l in self.edges:
            if (u, v, l) not in self._tree:
                out.append(multiply(self._paths[u], (l,), inverse(self._paths[v])))
        return out

    def key(self) -> tuple:
        return (self.rank, self.num_vertices, self.edges)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubgroupGraph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"SubgroupGraph(rank={self.rank}, vertices={self.num_vertices}, edges={len(self.edges)})"

    def to_json(self) -> dict:
        return {
            "vertices": self.num_vertices,
            "basepoint": 0,
            "edges": [list(e) for e in self.edges],
        }


def from_generators(rank: int, gens: Iterable[Sequence[int]]) -> SubgroupGraph:
    edges: list[Edge] = []
    n = 1
    for g in gens:
        g = reduce(g)
        if not g:
            continue
        for x in g:
            if abs(x) > rank:
                raise ValueError(f"generator index {abs(x)} exceeds rank {rank}")
        path = [0] + list(range(n, n + len(g) - 1)) + [0]
        n += len(g) - 1
        for i, x in enumerate(g):
            u, v = path[i], path[i + 1]
            edges.append((u, v, x) if x > 0 else (v, u, -x))
    return SubgroupGraph(rank, n, edges)


def contains(h: SubgroupGraph, w: Sequence[int]) -> bool:
    return h.follow(0, reduce(w)) == 0


def index(h: SubgroupGraph) -> int | float:
    full = 2 * h.rank
    if all(h.degree(v) == full for v in h.vertices()):
        return h.num_vertices
    return INFINITE


def rank(h: SubgroupGraph) -> int:
    return len(h.edges) - h.num_vertices + 1


def is_subgroup(h: SubgroupGraph, g: SubgroupGraph) -> bool:
    """True when h <= g."""
    return h.rank == g.rank and all(contains(g, b) for b in h.basis())


def intersect(h: SubgroupGraph, k: SubgroupGraph) -> SubgroupGraph:
    if h.rank != k.rank:
        raise ValueError("subgroups live in free groups of different rank")
    ids = {(0, 0): 0}
    queue = deque([(0, 0)])
    edges = []
    while queue:
        u = queue.popleft()
        for l in range(1, h.rank + 1):
            v = (h.step(u[0], l), k.step(u[1], l))
            if v[0] is None or v[1] is None:
                continue
            if v not in ids:
                ids[v] = len(ids)
                queue.append(v)
            edges.append((ids[u], ids[v], l))
        for l in range(1, h.rank + 1):
            v = (h.step(u[0], -l), k.step(u[1], -l))
            if v[0] is not None and v[1] is not None and v not in ids:
                ids[v] = len(ids)
                queue.append(v)
    return SubgroupGraph(h.rank, len(ids), edges)


def complete_to_cover(h: SubgroupGraph) -> SubgroupGraph:
    """Add edges, no vertices, until every vertex has full valence."""
    edges = list(h.edges)
    for l in range(1, h.rank + 1):
        no_out = [v for v in h.vertices() if h.step(v, l) is None]
        no_in = [v for v in h.vertices() if h.step(v, -l) is None]
        # each l-edge uses one out-slot and one in-slot, so the counts agree
        assert len(no_out) == len(no_in)
        edges.extend((u, v, l) for u, v in zip(no_out, no_in))
    return SubgroupGraph(h.rank, h.num_vertices, edges)


def conjugate_subgroup(h: SubgroupGraph, c: Sequence[int]) -> SubgroupGraph:
    """The subgroup c^-1 H c."""
    ci = inverse(c)
    return from_generators(h.rank, [multiply(ci, b, c) for b in h.basis()])


def _hair(h: SubgroupGraph) -> Word:
    """Path from the basepoint to the nearest vertex that lies on a cycle."""
    core = _core(-1, set(h.edges))
    on_core = {u for u, _, _ in core} | {v for _, v, _ in core}
    if not on_core:
        return ()
    return h.path_to(min(on_core, key=lambda v: (len(h.path_to(v)), v)))


def relative_index(h: SubgroupGraph, g: SubgroupGraph) -> int | float:
    """[g : h] for h <= g."""
    if not is_subgroup(h, g):
        raise NotASubgroupError("the first subgroup is not contained in the second")
    c = _hair(g)
    if not c and g.num_vertices == 1 and not g.edges:
        return 1 if not h.edges else INFINITE
    gc, hc = conjugate_subgroup(g, c), conjugate_subgroup(h, c)
    labels = signed_labels(g.rank)
    for v in hc.vertices():
        image = gc.follow(0, hc.path_to(v))
        for l in labels:
            if gc.step(image, l) is not None and hc.step(v, l) is None:
                return INFINITE
    return hc.num_vertices // gc.num_vertices


# -- conjugacy inside a subgroup ------------------------------------------


def conjugacy_key(h: SubgroupGraph, u: Sequence[int]) -> tuple:
    """Canonical key of the H-conjugacy class of an element u of H.

    The cyclic core of u is a closed reduced loop in the graph; the key is the
    least (rotation, start vertex) pair along that loop.
    """
    core, c = cyclic_reduce(reduce(u))
    v = h.follow(0, c)
    w = core.word
    if v is None or h.follow(v, w) != v:
        raise NotASubgroupError("element is not in the subgroup")
    if not w:
        return ((), 0)
    best = None
    at = v
    for i in range(len(w)):
        cand = (word_key(w[i:] + w[:i]), at)
        if best is None or cand < best[0]:
            best = (cand, w[i:] + w[:i], at)
        at = h.step(at, w[i])
    return (best[1], best[2])


# -- pairs and elevations ---------------------------------------------------


class PeripheralStructure:
    """Ordered list of distinct conjugacy classes of the ambient free group."""

    __slots__ = ("classes",)

    def __init__(self, classes: Iterable[CyclicWord | Sequence[int]]):
        out: list[CyclicWord] = []
        for c in classes:
            c = c if isinstance(c, CyclicWord) else CyclicWord.of(c)
            if not len(c):
                raise ValueError("peripheral classes must be nontrivial")
            if any(conjugate_equal(c, d) for d in out):
                raise ValueError(f"class {c} listed twice")
            out.append(c)
        self.classes: tuple[CyclicWord, ...] = tuple(out)

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __repr__(self) -> str:
        return f"PeripheralStructure([{', '.join(map(str, self.classes))}])"


class Pair:
    """A subgroup with finitely many distinct conjugacy classes of its elements.

    Classes are ambient words that lie in the subgroup; distinctness is
    conjugacy inside the subgroup, not in the free group.
    """

    __slots__ = ("group", "classes", "_keys")

    def __init__(self, group: SubgroupGraph, classes: Iterable[Sequence[int]]):
        self.group = group
        self.classes: tuple[Word, ...] = tuple(reduce(c) for c in classes)
        keys = []
        for c in self.classes:
            if not c:
                raise ValueError("peripheral classes must be nontrivial")
            k = conjugacy_key(group, c)
            if k in keys:
                raise ValueError("two classes are conjugate in the subgroup")
            keys.append(k)
        self._keys = tuple(keys)

    @classmethod
    def free(cls, rank: int, classes: Iterable[CyclicWord | Sequence[int]]) -> "Pair":
        s = PeripheralStructure(classes)
        return cls(SubgroupGraph.rose(rank), [c.word for c in s])

    def keys(self) -> tuple:
        return self._keys

    def __len__(self) -> int:
        return len(self.classes)

    def __repr__(self) -> str:
        return f"Pair({self.group!r}, {len(self.classes)} classes)"


@dataclass(frozen=True)
class ElevationRecord:
    base_class_index: int
    degree: int
    anchor: int
    conjugator: Word
    elevated_class: CyclicWord

    @property
    def element(self) -> Word:
        """The elevation as an element of the subgroup."""
        return multiply(self.conjugator, self.elevated_class.word, inverse(self.conjugator))


def _cycles(h: SubgroupGraph, starts: Sequence[int], walk: Word) -> list[list[int]]:
    image = {v: h.follow(v, walk) for v in starts}
    seen: set[int] = set()
    out = []
    for v in starts:
        if v in seen:
            continue
        orbit = [v]
        x = image[v]
        while x is not None and x != v and x in image and len(orbit) <= len(starts):
            orbit.append(x)
            x = image[x]
        if x == v:
            seen.update(orbit)
            out.append(orbit)
    return out


def relative_elevations(
    h: SubgroupGraph, g: SubgroupGraph, u: Sequence[int], base_class_index: int = 0
) -> list[ElevationRecord]:
    """Finite-degree elevations of the g-class of u (an element of g) to h <= g."""
    core, c = cyclic_reduce(reduce(u))
    if not len(core):
        raise ValueError("cannot elevate the trivial class")
    y = g.follow(0, c)
    if y is None or g.follow(y, core.word) != y:
        raise NotASubgroupError("class representative is not in the ambient subgroup")
    fiber = [v for v in h.vertices() if g.follow(0, h.path_to(v)) == y]
    records = []
    for orbit in _cycles(h, fiber, core.word):
        d = len(orbit)
        records.append(
            ElevationRecord(base_class_index, d, orbit[0], h.path_to(orbit[0]), core.power(d))
        )
    return records


def elevations(h: SubgroupGraph, w: CyclicWord, base_class_index: int = 0) -> list[ElevationRecord]:
    if not len(w):
        raise ValueError("cannot elevate the trivial class")
    walk = w.canonical
    records = []
    for orbit in _cycles(h, list(h.vertices()), walk):
        d = len(orbit)
        records.append(
            ElevationRecord(base_class_index, d, orbit[0], h.path_to(orbit[0]), CyclicWord(walk * d))
        )
    return records


def _as_pair(s: "Pair | PeripheralStructure | Iterable", rank: int) -> Pair:
    if isinstance(s, Pair):
        return s
    return Pair.free(rank, s)


def pullback_records(h: SubgroupGraph, s: "Pair | PeripheralStructure") -> list[ElevationRecord]:
    """All elevations of the classes of s to h, one per h-conjugacy class."""
    base = _as_pair(s, h.rank)
    if relative_index(h, base.group) == INFINITE:
        raise InfiniteIndexError("pull-back structures need a finite-index subgroup")
    out = []
    seen = set()
    for i, u in enumerate(base.classes):
        for rec in relative_elevations(h, base.group, u, i):
            # a proper power can close up along the same loop from several anchors
            k = conjugacy_key(h, rec.element)
            if k not in seen:
                seen.add(k)
                out.append(rec)
    return out


def pullback_structure(h: SubgroupGraph, s: "Pair | PeripheralStructure") -> Pair:
    return Pair(h, [r.element for r in pullback_records(h, s)])


def elevation_degree(
    h: SubgroupGraph, u: Sequence[int], g: SubgroupGraph, w: Sequence[int]
) -> int | None:
    """Degree d if the h-class of u is an elevation of the g-class of w, else None."""
    cu, c = cyclic_reduce(reduce(u))
    cw, _ = cyclic_reduce(reduce(w))
    if not len(cw) or not len(cu) or len(cu) % len(cw):
        return None
    d = len(cu) // len(cw)
    if conjugacy_key(g, u) != conjugacy_key(g, power(w, d)):
        return None
    t = cu.word[: len(cw)]
    y = h.follow(0, c)
    at, e = h.follow(y, t), 1
    while at != y:
        at, e = h.follow(at, t), e + 1
    return d if e == d else None


def _check_subgroup(sub: Pair, sup: Pair) -> None:
    if not is_subgroup(sub.group, sup.group):
        raise NotASubgroupError("the subpair's group is not contained in the ambient group")


def is_embedded_subpair(sub: Pair, sup: Pair) -> bool:
    _check_subgroup(sub, sup)
    keys = sup.keys()
    hit = []
    for u in sub.classes:
        k = conjugacy_key(sup.group, u)
        if k not in keys:
            return False
        hit.append(keys.index(k))
    return len(set(hit)) == len(hit)


def peripheral_closure(sub: Pair, sup: Pair) -> set[int]:
    _check_subgroup(sub, sup)
    out: set[int] = set()
    for u in sub.classes:
        found = {
            i
            for i, w in enumerate(sup.classes)
            if elevation_degree(sub.group, u, sup.group, w) is not None
        }
        if not found:
            raise NotASubpairError("a class of the subpair is not an elevation of any ambient class")
        out |= found
    return out


def is_malnormal_structure(s: "PeripheralStructure | Iterable[CyclicWord]") -> bool:
    classes = list(s.classes if isinstance(s, PeripheralStructure) else s)
    if any(primitive_root(c)[1] != 1 for c in classes):
        return False
    for i, c in enumerate(classes):
        for d in classes[i + 1 :]:
            if conjugate_equal(c, d) or conjugate_equal(c, d.inverse()):
                return False
    return True
