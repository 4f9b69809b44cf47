"""Circle/surface complexes built from boundary-equation systems.

A complex has circles, compact surfaces, and attachments gluing each surface
boundary component onto a circle.  An attachment carries a sign (does the
gluing respect orientations) and the degrees m (boundary side) and n (circle
side).  Complexes built from a system have one circle per variable and one
surface per equation, with m = n = 1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import count
from typing import Iterable, Mapping, Sequence

from . import perms
from .abelian import AbelianGroup, sparse_cokernel
from .deqs import DeltaSystem, table1_system
from .errors import DomainError, InfeasibleError, NonOrientableError
from .surfaces import (
    CoverWitness,
    SurfaceSpec,
    build_cover,
    euler_char,
    genus_from,
    witness_problems,
)


@dataclass(frozen=True)
class Attachment:
    surface: str
    boundary: str
    circle: str
    sign: int = 1
    m: int = 1
    n: int = 1

    def to_json(self) -> dict:
        return {
            "surface": self.surface,
            "boundary": self.boundary,
            "circle": self.circle,
            "sign": self.sign,
            "m": self.m,
            "n": self.n,
        }


class PsiComplex:
    __slots__ = ("circles", "surfaces", "attachments", "_by_boundary")

    def __init__(
        self,
        circles: Iterable[str],
        surfaces: Mapping[str, SurfaceSpec] | Iterable[tuple[str, SurfaceSpec]],
        attachments: Iterable[Attachment],
    ):
        self.circles: tuple[str, ...] = tuple(circles)
        items = surfaces.items() if isinstance(surfaces, Mapping) else surfaces
        self.surfaces: dict[str, SurfaceSpec] = dict(items)
        self.attachments: tuple[Attachment, ...] = tuple(attachments)
        if len(set(self.circles)) != len(self.circles):
            raise ValueError("circle ids must be distinct")
        circles_set = set(self.circles)
        by_boundary: dict[tuple[str, str], int] = {}
        used = set()
        for k, a in enumerate(self.attachments):
            if a.surface not in self.surfaces:
                raise ValueError(f"unknown surface {a.surface!r}")
            if a.boundary not in self.surfaces[a.surface].labels:
                raise ValueError(f"surface {a.surface!r} has no boundary {a.boundary!r}")
            if a.circle not in circles_set:
                raise ValueError(f"unknown circle {a.circle!r}")
            if a.sign not in (1, -1) or a.m < 1 or a.n < 1:
                raise ValueError("attachment needs sign +-1 and positive degrees")
            key = (a.surface, a.boundary)
            if key in by_boundary:
                raise ValueError(f"boundary {key} attached twice")
            by_boundary[key] = k
            used.add(a.circle)
        for sid, spec in self.surfaces.items():
            for label in spec.labels:
                if (sid, label) not in by_boundary:
                    raise ValueError(f"boundary {(sid, label)} is not attached")
        missing = circles_set - used
        if missing:
            raise ValueError(f"circles without attachments: {sorted(missing)}")
        self._by_boundary = by_boundary

    def attachment_of(self, surface: str, boundary: str) -> Attachment:
        return self.attachments[self._by_boundary[(surface, boundary)]]

    def attachments_at(self, circle: str) -> list[Attachment]:
        return [a for a in self.attachments if a.circle == circle]

    def is_pure(self) -> bool:
        return all(a.m == 1 and a.n == 1 for a in self.attachments) and all(
            s.orientable and s.genus >= 1 for s in self.surfaces.values()
        )

    def __repr__(self) -> str:
        return (
            f"PsiComplex({len(self.circles)} circles, {len(self.surfaces)} surfaces, "
            f"{len(self.attachments)} attachments)"
        )

    def to_json(self) -> dict:
        return {
            "circles": [{"id": c} for c in self.circles],
            "surfaces": [dict(id=sid, **spec.to_json()) for sid, spec in self.surfaces.items()],
            "attachments": [a.to_json() for a in self.attachments],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PsiComplex":
        return cls(
            [str(c["id"]) for c in data["circles"]],
            [(str(s["id"]), SurfaceSpec.from_json(s)) for s in data["surfaces"]],
            [
                Attachment(
                    str(a["surface"]),
                    str(a["boundary"]),
                    str(a["circle"]),
                    int(a.get("sign", 1)),
                    int(a.get("m", 1)),
                    int(a.get("n", 1)),
                )
                for a in data["attachments"]
            ],
        )


def build_from_system(s: DeltaSystem, genus: int = 1) -> PsiComplex:
    if genus < 1:
        raise ValueError("equation surfaces need genus >= 1")
    unused = [v for v, k in s.occurrences().items() if k == 0]
    if unused:
        raise ValueError(f"variables in no equation: {unused}")
    surfaces = []
    attachments = []
    for e, eq in enumerate(s.equations, start=1):
        sid = f"E{e}"
        labels = [f"b{k}" for k in range(1, len(eq) + 1)]
        surfaces.append((sid, SurfaceSpec.orientable_with(genus, labels)))
        for label, (v, sign) in zip(labels, eq):
            attachments.append(Attachment(sid, label, v, sign))
    return PsiComplex(s.variables, surfaces, attachments)


def standard_branched_surface(genus: int = 1) -> PsiComplex:
    x = (("C1", 1), ("C2", -1))
    c = build_from_system(DeltaSystem(("C1", "C2"), (x, x, x)), genus)
    names = dict(zip(("E1", "E2", "E3"), ("Sigma", "Theta", "Pi")))
    return PsiComplex(
        c.circles,
        [(names[k], v) for k, v in c.surfaces.items()],
        [Attachment(names[a.surface], a.boundary, a.circle, a.sign) for a in c.attachments],
    )


# -- shape --------------------------------------------------------------------


def branching_valences(c: PsiComplex) -> dict[str, int]:
    out = {x: 0 for x in c.circles}
    for a in c.attachments:
        out[a.circle] += 1
    return out


def is_branched_surface(c: PsiComplex) -> bool:
    v = branching_valences(c).values()
    return all(k >= 2 for k in v) and any(k >= 3 for k in v)


def piece_boundary(c: PsiComplex, surface: str) -> dict[str, int]:
    """Image of the piece's boundary class on the circles."""
    spec = c.surfaces[surface]
    if not spec.orientable:
        raise NonOrientableError(f"{surface} has no fundamental class")
    out: dict[str, int] = {}
    for comp in spec.boundary:
        a = c.attachment_of(surface, comp.label)
        out[a.circle] = out.get(a.circle, 0) + comp.sign * a.sign * a.n
    return {k: v for k, v in out.items() if v}


def standard_circles(c: PsiComplex) -> tuple[str, str] | None:
    """(C1, C2) if c is a standard branched surface, else None."""
    if len(c.circles) != 2 or len(c.surfaces) != 3 or len(c.attachments) != 6:
        return None
    if any(a.m != 1 or a.n != 1 for a in c.attachments):
        return None
    classes = []
    for sid, spec in c.surfaces.items():
        if not spec.orientable or spec.genus < 1 or len(spec.boundary) != 2:
            return None
        classes.append(piece_boundary(c, sid))
    first = classes[0]
    if sorted(first.values()) != [-1, 1] or any(k != first for k in classes):
        return None
    plus = next(k for k, v in first.items() if v == 1)
    minus = next(k for k, v in first.items() if v == -1)
    return plus, minus


def is_standard(c: PsiComplex) -> bool:
    return standard_circles(c) is not None


@dataclass
class GraphShape:
    """Bare graph of a graph of groups: vertex kinds and edges."""

    kinds: dict[str, str]  # "cyclic" or "surface"
    edges: list[tuple[str, str]]

    @classmethod
    def of(cls, c: PsiComplex) -> "GraphShape":
        kinds = {x: "cyclic" for x in c.circles}
        kinds.update({f"surface:{s}": "surface" for s in c.surfaces})
        return cls(kinds, [(a.circle, f"surface:{a.surface}") for a in c.attachments])


@dataclass
class ShapeReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_normal_form_shape(g: PsiComplex | GraphShape, flagged: Iterable[str] = ()) -> ShapeReport:
    """Combinatorial shape checks: vertex kinds, bipartiteness, cyclic valences.

    A valence-2 cyclic vertex between two surface vertices is reported unless
    its id is in ``flagged``.
    """
    if isinstance(g, PsiComplex):
        g = GraphShape.of(g)
    flagged = set(flagged)
    rep = ShapeReport()
    for v, kind in g.kinds.items():
        if kind not in ("cyclic", "surface"):
            rep.violations.append(("kinds", f"vertex {v} has unknown kind {kind!r}"))
    valence = {v: 0 for v in g.kinds}
    neighbours: dict[str, list[str]] = {v: [] for v in g.kinds}
    for u, v in g.edges:
        if u not in g.kinds or v not in g.kinds:
            rep.violations.append(("kinds", f"edge {(u, v)} has an unknown end"))
            continue
        if g.kinds[u] == g.kinds[v]:
            rep.violations.append(("bipartite", f"edge {(u, v)} joins two {g.kinds[u]} vertices"))
        valence[u] += 1
        valence[v] += 1
        neighbours[u].append(v)
        neighbours[v].append(u)
    for v, kind in g.kinds.items():
        if kind != "cyclic":
            continue
        if valence[v] == 1:
            rep.violations.append(("valence", f"cyclic vertex {v} has valence 1"))
        if (
            valence[v] == 2
            and v not in flagged
            and all(g.kinds[w] == "surface" for w in neighbours[v])
        ):
            rep.violations.append(("valence", f"cyclic vertex {v} has valence 2 between surfaces"))
    return rep


# -- homology ---------------------------------------------------------------


def _spanning_forest(c: PsiComplex) -> tuple[set[int], int]:
    """Tree attachments of a breadth-first spanning forest, and component count."""
    adj: dict[tuple[str, str], list[tuple[int, tuple[str, str]]]] = {}
    nodes = [("c", x) for x in c.circles] + [("s", s) for s in c.surfaces]
    for node in nodes:
        adj[node] = []
    for k, a in enumerate(c.attachments):
        adj[("c", a.circle)].append((k, ("s", a.surface)))
        adj[("s", a.surface)].append((k, ("c", a.circle)))
    seen = set()
    tree: set[int] = set()
    components = 0
    for root in nodes:
        if root in seen:
            continue
        components += 1
        seen.add(root)
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for k, v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    tree.add(k)
                    queue.append(v)
    return tree, components


def graph_betti(c: PsiComplex) -> int:
    tree, _ = _spanning_forest(c)
    return len(c.attachments) - len(tree)


def is_connected(c: PsiComplex) -> bool:
    parent = {x: x for x in [("c", y) for y in c.circles] + [("s", s) for s in c.surfaces]}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in c.attachments:
        parent[find(("c", a.circle))] = find(("s", a.surface))
    return len({find(x) for x in parent}) <= 1


def h1(c: PsiComplex) -> AbelianGroup:
    """First homology from the abelianised graph-of-groups presentation."""
    for sid, spec in c.surfaces.items():
        if not spec.orientable:
            raise NonOrientableError(f"surface {sid} is nonorientable")
    gen = count()
    circle_gen = {x: next(gen) for x in c.circles}
    boundary_gen = {}
    for sid, spec in c.surfaces.items():
        for _ in range(2 * spec.genus):
            next(gen)  # handle generators appear in no relation
        for label in spec.labels:
            boundary_gen[(sid, label)] = next(gen)
    tree, _ = _spanning_forest(c)
    for k in range(len(c.attachments)):
        if k not in tree:
            next(gen)  # stable letter of a non-tree attachment
    ngens = next(gen)
    rows: list[dict[int, int]] = []
    for sid, spec in c.surfaces.items():
        rows.append({boundary_gen[(sid, comp.label)]: comp.sign for comp in spec.boundary})
    for a in c.attachments:
        b, x = boundary_gen[(a.surface, a.boundary)], circle_gen[a.circle]
        rows.append({b: a.m, x: -a.sign * a.n})
    return sparse_cokernel(rows, ngens)


# -- covers -------------------------------------------------------------------


@dataclass
class CoverData:
    """How a cover (or precover) complex maps onto a base complex."""

    circles: dict[str, tuple[str, int]]
    surfaces: dict[str, tuple[str, CoverWitness]]
    attachments: dict[tuple[str, str], tuple[str, str]]

    def to_json(self) -> dict:
        return {
            "circles": [{"id": k, "base": b, "degree": d} for k, (b, d) in self.circles.items()],
            "surfaces": [
                {"id": k, "base": b, "witness": w.to_json()} for k, (b, w) in self.surfaces.items()
            ],
            "attachments": [
                {"surface": s, "boundary": l, "base_surface": bs, "base_boundary": bl}
                for (s, l), (bs, bl) in self.attachments.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoverData":
        return cls(
            {str(c["id"]): (str(c["base"]), int(c["degree"])) for c in data["circles"]},
            {
                str(s["id"]): (str(s["base"]), CoverWitness.from_json(s["witness"]))
                for s in data["surfaces"]
            },
            {
                (str(a["surface"]), str(a["boundary"])): (
                    str(a["base_surface"]),
                    str(a["base_boundary"]),
                )
                for a in data["attachments"]
            },
        )


def identity_cover_data(c: PsiComplex) -> CoverData:
    surfaces = {}
    for sid, spec in c.surfaces.items():
        one = perms.identity(1)
        w = CoverWitness(
            1,
            tuple((one, one) for _ in range(spec.genus)),
            tuple(one for _ in spec.boundary),
            tuple((l,) for l in spec.labels),
        )
        surfaces[sid] = (sid, w)
    return CoverData(
        {x: (x, 1) for x in c.circles},
        surfaces,
        {(a.surface, a.boundary): (a.surface, a.boundary) for a in c.attachments},
    )


@dataclass
class VerifyReport:
    problems: list[tuple[str, str]] = field(default_factory=list)
    degree: int | None = None
    hanging: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok

    def failed_checks(self) -> set[str]:
        return {c for c, _ in self.problems}

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "degree": self.degree,
            "problems": [{"check": c, "message": m} for c, m in self.problems],
            "hanging": [list(h) for h in self.hanging],
        }


def verify_cover(
    cover: PsiComplex, base: PsiComplex, data: CoverData, precover: bool = False
) -> VerifyReport:
    """Check the cover conditions (a)-(d); a precover may leave elevations hanging."""
    rep = VerifyReport()
    bad = rep.problems.append

    # (a) circles
    totals = {x: 0 for x in base.circles}
    for x in cover.circles:
        if x not in data.circles:
            bad(("a", f"cover circle {x} has no image"))
            continue
        b, d = data.circles[x]
        if b not in totals or d < 1:
            bad(("a", f"cover circle {x} maps to {b} with degree {d}"))
            continue
        totals[b] += d
    if set(data.circles) - set(cover.circles):
        bad(("a", "data mentions circles that are not in the cover"))
    if not precover:
        values = set(totals.values())
        if len(values) != 1:
            bad(("a", f"circle degrees are not constant: {totals}"))
        else:
            rep.degree = values.pop()

    # (b) surfaces
    sheets = {s: 0 for s in base.surfaces}
    elevation: dict[tuple[str, str], tuple[str, int]] = {}
    for sid, spec in cover.surfaces.items():
        if sid not in data.surfaces:
            bad(("b", f"cover surface {sid} has no image"))
            continue
        b, w = data.surfaces[sid]
        if b not in base.surfaces:
            bad(("b", f"cover surface {sid} maps to unknown {b}"))
            continue
        problems = witness_problems(base.surfaces[b], spec, w)
        for p in problems:
            bad(("b", f"{sid}: {p}"))
        if problems:
            continue
        sheets[b] += w.degree
        labels = base.surfaces[b].labels
        for name, (k, e) in w.elevations().items():
            elevation[(sid, name)] = (labels[k], e)
    if set(data.surfaces) - set(cover.surfaces):
        bad(("b", "data mentions surfaces that are not in the cover"))
    if not precover and rep.degree is not None and any(v != rep.degree for v in sheets.values()):
        bad(("b", f"surface sheet counts {sheets} differ from the circle degree {rep.degree}"))

    # (c) gluing degrees at every cover circle
    incident: dict[tuple[str, str], list[int]] = {}
    for a in cover.attachments:
        key = (a.surface, a.boundary)
        if key not in data.attachments:
            bad(("c", f"attachment {key} has no image"))
            continue
        bs, bl = data.attachments[key]
        if key not in elevation or data.surfaces.get(a.surface, (None,))[0] != bs:
            bad(("c", f"attachment {key} maps to a boundary of the wrong surface"))
            continue
        want_label, e = elevation[key]
        if bl != want_label:
            bad(("c", f"attachment {key} maps to {bl} but its witness says {want_label}"))
            continue
        base_att = base.attachment_of(bs, bl)
        circle = data.circles.get(a.circle)
        if circle is None:
            continue
        if circle[0] != base_att.circle:
            bad(("c", f"attachment {key} lands on a circle over {circle[0]}, not {base_att.circle}"))
            continue
        if a.sign != base_att.sign or a.m != base_att.m or a.n != base_att.n:
            bad(("c", f"attachment {key} changes the sign or degrees of its base gluing"))
            continue
        if e != circle[1]:
            bad(("c", f"attachment {key} has degree {e} on a circle of degree {circle[1]}"))
            continue
        incident.setdefault((a.circle, f"{bs}/{bl}"), []).append(e)
    for x in cover.circles:
        if x not in data.circles or data.circles[x][0] not in totals:
            continue
        b, k = data.circles[x]
        for base_att in base.attachments_at(b):
            tag = f"{base_att.surface}/{base_att.boundary}"
            got = incident.get((x, tag), [])
            if len(got) > 1:
                bad(("c", f"circle {x} carries {len(got)} elevations of {tag}"))
            elif not got:
                rep.hanging.append((x, base_att.surface, base_att.boundary))
                if not precover:
                    bad(("c", f"circle {x}: degrees over {tag} sum to 0, not {k}"))

    # (d) hanging elevations
    if not precover and rep.hanging:
        bad(("d", f"{len(rep.hanging)} hanging elevations"))
    return rep


# -- matching hanging elevations ---------------------------------------------------


def matching_feasible(counts: Sequence[int]) -> bool:
    total = sum(counts)
    return total % 2 == 0 and all(2 * a <= total for a in counts)


def match_elevations(counts: Sequence[int]) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Pair elevations (edge, k) so that no pair comes from a single edge.

    Greedy: always pair from the two edges with the most elevations left.
    """
    counts = [int(a) for a in counts]
    if any(a < 0 for a in counts):
        raise ValueError("counts must be nonnegative")
    total = sum(counts)
    for i, a in enumerate(counts):
        if 2 * a > total:
            raise InfeasibleError(f"edge {i} has {a} elevations but the others only {total - a}")
    if total % 2:
        raise InfeasibleError(f"odd number of elevations ({total})")
    left = list(counts)
    used = [0] * len(counts)
    pairs = []
    while any(left):
        i = max(range(len(left)), key=lambda k: (left[k], -k))
        j = max((k for k in range(len(left)) if k != i), key=lambda k: (left[k], -k))
        pairs.append(((i, used[i]), (j, used[j])))
        for k in (i, j):
            left[k] -= 1
            used[k] += 1
    return pairs


# -- torsion cover ------------------------------------------------------------------


def torsion_cover(
    std: PsiComplex, factors: Sequence[int], seed: int = 0
) -> tuple[PsiComplex, CoverData]:
    """Cover of a standard branched surface with torsion  Z/r1 + ... + Z/rn  in H1."""
    ends = standard_circles(std)
    if ends is None:
        raise DomainError("torsion covers are built over a standard branched surface")
    c1, c2 = ends
    plan = table1_system(factors)
    base_of = dict(zip(("Sigma", "Theta", "Pi"), std.surfaces))
    circles = [p + v[1:] for v in plan.variables for p in ("y", "z")]
    surfaces = []
    attachments = []
    data = CoverData({}, {}, {})
    for x in circles:
        data.circles[x] = (c1 if x[0] == "y" else c2, 1)
    for row in plan.rows:
        bid = base_of[row.family]
        spec = std.surfaces[bid]
        k = len(row.equation)
        cover, w = build_cover(spec, k, [[1] * k for _ in spec.boundary], seed)
        surfaces.append((row.name, cover))
        data.surfaces[row.name] = (bid, w)
        for comp, names in zip(spec.boundary, w.labels):
            base_att = std.attachment_of(bid, comp.label)
            prefix = "y" if base_att.circle == c1 else "z"
            for name, (var, _) in zip(names, row.equation):
                attachments.append(
                    Attachment(row.name, name, prefix + var[1:], base_att.sign, base_att.m, base_att.n)
                )
                data.attachments[(row.name, name)] = (bid, comp.label)
    result = PsiComplex(circles, surfaces, attachments)
    if not is_connected(result):
        raise AssertionError("torsion cover came out disconnected")
    return result, data


# -- standard precovers ----------------------------------------------------------
#
# A composite is a connected surface assembled from covers of base pieces glued
# in pairs along copies of base circles.  Each piece is described by its base
# surface and, for every base boundary, the degrees of the boundary components
# above it.  A slot (piece, base label, k) is the k-th of those components.
# Composites are only turned into witnessed covers at the very end.

Slot = tuple[int, str, int]


@dataclass
class _Piece:
    base: str
    parts: dict[str, list[int]]

    @property
    def degree(self) -> int:
        return sum(next(iter(self.parts.values())))


@dataclass
class _Composite:
    pieces: list[_Piece]
    joins: list[tuple[Slot, Slot]]
    ports: list[Slot]

    def shifted(self, offset: int) -> "_Composite":
        s = lambda t: (t[0] + offset, t[1], t[2])  # noqa: E731
        return _Composite(
            [_Piece(p.base, {k: list(v) for k, v in p.parts.items()}) for p in self.pieces],
            [(s(a), s(b)) for a, b in self.joins],
            [s(p) for p in self.ports],
        )

    def degree(self, slot: Slot) -> int:
        return self.pieces[slot[0]].parts[slot[1]][slot[2]]


def _union(*comps: _Composite) -> tuple[_Composite, list[int]]:
    out = _Composite([], [], [])
    offsets = []
    for c in comps:
        offsets.append(len(out.pieces))
        c = c.shifted(len(out.pieces))
        out.pieces += c.pieces
        out.joins += c.joins
        out.ports += c.ports
    return out, offsets


class _Builder:
    """Composite surgery over a fixed base complex."""

    def __init__(self, base: PsiComplex, seed: int):
        self.base = base
        self.seed = seed

    def att(self, comp: _Composite, slot: Slot) -> Attachment:
        return self.base.attachment_of(comp.pieces[slot[0]].base, slot[1])

    def c0(self, comp: _Composite, slot: Slot) -> int:
        a = self.att(comp, slot)
        return self.base.surfaces[a.surface].sign_of(a.boundary) * a.sign

    def glue(self, comp: _Composite, a: Slot, b: Slot) -> None:
        x, y = self.att(comp, a), self.att(comp, b)
        assert x.circle == y.circle and (x.surface, x.boundary) != (y.surface, y.boundary)
        assert comp.degree(a) == comp.degree(b)
        comp.ports.remove(a)
        comp.ports.remove(b)
        comp.joins.append((a, b))

    def coloring(self, comp: _Composite) -> list[int] | None:
        adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(comp.pieces))}
        for a, b in comp.joins:
            rel = -self.c0(comp, a) * self.c0(comp, b)
            adj[a[0]].append((b[0], rel))
            adj[b[0]].append((a[0], rel))
        o: dict[int, int] = {}
        for root in range(len(comp.pieces)):
            if root in o:
                continue
            o[root] = 1
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for v, rel in adj[u]:
                    if v not in o:
                        o[v] = o[u] * rel
                        queue.append(v)
                    elif o[v] != o[u] * rel:
                        return None
        return [o[i] for i in range(len(comp.pieces))]

    def coef(self, comp: _Composite, o: list[int], slot: Slot) -> int:
        return o[slot[0]] * self.c0(comp, slot)

    def component(self, comp: _Composite, piece: int) -> _Composite:
        adj: dict[int, set[int]] = {i: set() for i in range(len(comp.pieces))}
        for a, b in comp.joins:
            adj[a[0]].add(b[0])
            adj[b[0]].add(a[0])
        keep = {piece}
        stack = [piece]
        while stack:
            for v in adj[stack.pop()]:
                if v not in keep:
                    keep.add(v)
                    stack.append(v)
        new = {old: k for k, old in enumerate(sorted(keep))}
        m = lambda s: (new[s[0]], s[1], s[2])  # noqa: E731
        return _Composite(
            [comp.pieces[i] for i in sorted(keep)],
            [(m(a), m(b)) for a, b in comp.joins if a[0] in keep],
            [m(p) for p in comp.ports if p[0] in keep],
        )

    def connected(self, comp: _Composite) -> bool:
        return len(self.component(comp, 0).pieces) == len(comp.pieces)

    def double(self, comp: _Composite, lifted_ports: Sequence[Slot] = ()) -> _Composite:
        """Connected double cover; the given two ports lift to single curves of
        twice the degree, everything else lifts to two copies."""
        if lifted_ports:
            p1, p2 = lifted_ports
            path_pieces, path_joins = self._path(comp, p1[0], p2[0])
        else:
            path_pieces, path_joins = [comp.ports[0][0]], []
        lifted = set(lifted_ports)
        for k in path_joins:
            lifted.update(comp.joins[k])
        on_path = set(path_pieces)
        pieces: list[_Piece] = []
        copy_of: dict[tuple[int, int], int] = {}
        index_of: dict[tuple[Slot, int], Slot] = {}
        for i, p in enumerate(comp.pieces):
            if i in on_path:
                parts: dict[str, list[int]] = {}
                k_new = len(pieces)
                for label, degs in p.parts.items():
                    parts[label] = []
                    for j, e in enumerate(degs):
                        if (i, label, j) in lifted:
                            index_of[((i, label, j), 0)] = (k_new, label, len(parts[label]))
                            parts[label].append(2 * e)
                        else:
                            for a in (0, 1):
                                index_of[((i, label, j), a)] = (k_new, label, len(parts[label]))
                                parts[label].append(e)
                pieces.append(_Piece(p.base, parts))
            else:
                for a in (0, 1):
                    copy_of[(i, a)] = len(pieces)
                    pieces.append(_Piece(p.base, {k: list(v) for k, v in p.parts.items()}))

        def lift(slot: Slot, a: int) -> Slot:
            if slot[0] in on_path:
                return index_of[(slot, 0 if slot in lifted else a)]
            return (copy_of[(slot[0], a)], slot[1], slot[2])

        joins = []
        for k, (x, y) in enumerate(comp.joins):
            if k in path_joins:
                joins.append((lift(x, 0), lift(y, 0)))
            else:
                joins.extend((lift(x, a), lift(y, a)) for a in (0, 1))
        ports = []
        for p in comp.ports:
            ports.extend([lift(p, 0)] if p in lifted else [lift(p, 0), lift(p, 1)])
        out = _Composite(pieces, joins, ports)
        assert self.connected(out)
        return out

    def _path(self, comp: _Composite, start: int, goal: int) -> tuple[list[int], list[int]]:
        prev: dict[int, tuple[int, int] | None] = {start: None}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            if u == goal:
                break
            for k, (a, b) in enumerate(comp.joins):
                for x, y in ((a, b), (b, a)):
                    if x[0] == u and y[0] not in prev:
                        prev[y[0]] = (u, k)
                        queue.append(y[0])
        pieces, joins = [goal], []
        while prev[pieces[-1]] is not None:
            u, k = prev[pieces[-1]]
            pieces.append(u)
            joins.append(k)
        return pieces[::-1], joins[::-1]

    def orientation_double(self, comp: _Composite) -> _Composite:
        assert self.coloring(comp) is None
        n = len(comp.pieces)
        pieces = [_Piece(p.base, {k: list(v) for k, v in p.parts.items()}) for p in comp.pieces]
        pieces += [_Piece(p.base, {k: list(v) for k, v in p.parts.items()}) for p in comp.pieces]
        lift = lambda s, a: (s[0] + a * n, s[1], s[2])  # noqa: E731
        joins = []
        for x, y in comp.joins:
            flip = 0 if self.c0(comp, x) * self.c0(comp, y) == -1 else 1
            joins.extend((lift(x, a), lift(y, a ^ flip)) for a in (0, 1))
        ports = [lift(p, a) for p in comp.ports for a in (0, 1)]
        out = _Composite(pieces, joins, ports)
        assert self.connected(out) and self.coloring(out) is not None
        return out

    # -- the three steps --------------------------------------------------------

    def step_one(self, tau: Attachment) -> _Composite:
        """Two copies of every piece, hanging elevations paired off at every
        circle, leaving the two copies of tau free."""
        base = self.base
        ids = list(base.surfaces)
        pieces = []
        copy = {}
        for sid in ids:
            for a in (0, 1):
                copy[(sid, a)] = len(pieces)
                pieces.append(_Piece(sid, {l: [1] for l in base.surfaces[sid].labels}))
        comp = _Composite(pieces, [], [(copy[(s, a)], l, 0) for s in ids for a in (0, 1) for l in base.surfaces[s].labels])
        for x in base.circles:
            incident = base.attachments_at(x)
            counts = [0 if att == tau else 2 for att in incident]
            for (i, a), (j, b) in match_elevations(counts):
                si = (copy[(incident[i].surface, a)], incident[i].boundary, 0)
                sj = (copy[(incident[j].surface, b)], incident[j].boundary, 0)
                self.glue(comp, si, sj)
        t0 = (copy[(tau.surface, 0)], tau.boundary, 0)
        keep = self.component(comp, t0[0])
        if len(keep.ports) == 2:
            return keep
        return self.double(keep)

    def splice(self, first: _Composite, second: _Composite, pairs) -> _Composite:
        """Disjoint union of two composites with some ports glued across."""
        out, (o1, o2) = _union(first, second)
        for a, b in pairs:
            self.glue(out, (a[0] + o1, a[1], a[2]), (b[0] + o2, b[1], b[2]))
        return out

    def signed_ports(self, comp: _Composite) -> dict[int, list[Slot]]:
        o = self.coloring(comp)
        assert o is not None
        out: dict[int, list[Slot]] = {1: [], -1: []}
        for p in comp.ports:
            out[self.coef(comp, o, p)].append(p)
        return out

    def mixed(self, comp: _Composite) -> bool:
        if self.coloring(comp) is None:
            return False
        s = self.signed_ports(comp)
        return len(s[1]) == 1 and len(s[-1]) == 1

    def make_nonorientable(self, comps: list[_Composite]) -> list[_Composite]:
        orient = [self.coloring(c) is not None for c in comps]
        if all(orient):
            mixed = [self.mixed(c) for c in comps]
            if not any(mixed):
                # chain S, T, P and a second S; the free ends carry opposite signs
                s, t, p = comps
                chain = self.splice(s, t, [(s.ports[1], t.ports[0])])
                chain = self.splice(chain, p, [(chain.ports[1], p.ports[0])])
                chain = self.splice(chain, s, [(chain.ports[1], s.ports[0])])
                comps = [chain, t, p]
                mixed = [self.mixed(c) for c in comps]
                assert mixed[0]
            i = mixed.index(True)
            j = mixed.index(False)
            cover = self.double(comps[i])
            keep = [cover.ports[0], cover.ports[2]]
            glue_to = [cover.ports[1], cover.ports[3]]
            assert len(cover.ports) == 4
            other = comps[j]
            bent = self.splice(cover, other, list(zip(glue_to, other.ports)))
            bent.ports.sort(key=lambda p: keep.index(p) if p in keep else 9)
            assert self.coloring(bent) is None and len(bent.ports) == 2
            comps = list(comps)
            comps[i] = bent
        nonor = next(c for c in comps if self.coloring(c) is None)
        shift = lambda s, o: (s[0] + o, s[1], s[2])  # noqa: E731
        out = []
        for c in comps:
            if self.coloring(c) is not None:
                # two copies of c joined through the nonorientable one
                two, (o0, o1) = _union(c, c)
                joined = self.splice(two, nonor, [(shift(c.ports[1], o0), nonor.ports[0])])
                self.glue(joined, shift(c.ports[1], o1), shift(nonor.ports[1], len(two.pieces)))
                c = joined
            assert self.coloring(c) is None and len(c.ports) == 2
            out.append(c)
        return out

    def step_two(self, s: _Composite, t: _Composite) -> _Composite:
        """From two nonorientable composites over different attachments, an
        orientable one over the first with ports of degree 2 and signs (+1, -1)."""
        s2 = self.orientation_double(s)
        t2 = self.orientation_double(t)
        sign = self.signed_ports(s2)
        # s2.ports = [p1', p1'', p2', p2''] in pairs over the two original ports
        first, second = s2.ports[0:2], s2.ports[2:4]
        lift_a = next(p for p in first if p in sign[-1])
        lift_b = next(p for p in second if p in sign[1])
        bar = self.double(s2, [lift_a, lift_b])
        bsign = self.signed_ports(bar)
        thin_plus = [p for p in bsign[1] if bar.degree(p) == s2.degree(lift_a)]
        thin_minus = [p for p in bsign[-1] if bar.degree(p) == s2.degree(lift_a)]
        tsign = self.signed_ports(t2)
        pairs = list(zip(thin_plus, tsign[-1])) + list(zip(thin_minus, tsign[1]))
        out = self.splice(bar, t2, pairs)
        assert self.coloring(out) is not None and len(out.ports) == 2
        return out


@dataclass
class Precover:
    """A standard branched surface seen as a precover of the input complex.

    ``expanded`` has one surface per cover of a base piece and one circle per
    copy of a base circle; ``pieces`` and ``circles`` say which standard piece
    or circle each belongs to (circles interior to a standard piece are
    omitted).
    """

    expanded: PsiComplex
    data: CoverData
    pieces: dict[str, str]
    circles: dict[str, str]


def standardize(b: PsiComplex, seed: int = 0) -> tuple[PsiComplex, Precover]:
    if not b.is_pure():
        raise DomainError("expects orientable pieces of genus >= 1 glued with degree 1")
    if not is_branched_surface(b):
        raise DomainError("not a branched surface: no circle of valence >= 3")
    shape = check_normal_form_shape(b)
    if not shape.ok:
        raise DomainError("; ".join(m for _, m in shape.violations))
    if is_standard(b):
        return b, Precover(b, identity_cover_data(b), {s: s for s in b.surfaces}, {x: x for x in b.circles})

    valence = branching_valences(b)
    center = next(x for x in b.circles if valence[x] >= 3)
    taus = b.attachments_at(center)[:3]
    builder = _Builder(b, seed)
    comps = [builder.step_one(t) for t in taus]
    if not all(builder.mixed(c) for c in comps):
        comps = builder.make_nonorientable(comps)
        comps = [builder.step_two(comps[i], comps[(i + 1) % 3]) for i in range(3)]
    degrees = {c.degree(p) for c in comps for p in c.ports}
    assert len(degrees) == 1 and all(builder.mixed(c) for c in comps)
    k = degrees.pop()
    return _assemble(builder, comps, center, k)


def _assemble(builder: _Builder, comps: list[_Composite], center: str, k: int):
    base = builder.base
    names = ("Sigma", "Theta", "Pi")
    circles: list[str] = []
    circle_map: dict[str, tuple[str, int]] = {}
    fresh = count()

    def new_circle(base_circle: str, degree: int) -> str:
        cid = f"{base_circle}#{next(fresh)}"
        circles.append(cid)
        circle_map[cid] = (base_circle, degree)
        return cid

    top, bottom = new_circle(center, k), new_circle(center, k)
    surfaces = []
    attachments = []
    data = CoverData(circle_map, {}, {})
    piece_group: dict[str, str] = {}
    std_surfaces = []
    for name, comp in zip(names, comps):
        pid = []
        for n, piece in enumerate(comp.pieces):
            spec = base.surfaces[piece.base]
            cover, w = build_cover(
                spec, piece.degree, [piece.parts[l] for l in spec.labels], builder.seed
            )
            sid = f"{name}/{piece.base}#{n}"
            surfaces.append((sid, cover))
            data.surfaces[sid] = (piece.base, w)
            piece_group[sid] = name
            pid.append(sid)

        def attach(slot: Slot, circle: str) -> None:
            sid = pid[slot[0]]
            label = f"{slot[1]}.{slot[2]}"
            base_att = base.attachment_of(comp.pieces[slot[0]].base, slot[1])
            attachments.append(Attachment(sid, label, circle, base_att.sign))
            data.attachments[(sid, label)] = (base_att.surface, base_att.boundary)

        for x, y in comp.joins:
            cid = new_circle(builder.att(comp, x).circle, comp.degree(x))
            attach(x, cid)
            attach(y, cid)
        sign = builder.signed_ports(comp)
        attach(sign[1][0], top)
        attach(sign[-1][0], bottom)
        chi = sum(euler_char(base.surfaces[p.base]) * p.degree for p in comp.pieces)
        std_surfaces.append((name, SurfaceSpec.orientable_with(genus_from(chi, 2), ["b1", "b2"])))
    expanded = PsiComplex(circles, surfaces, attachments)
    standard = PsiComplex(
        ["C1", "C2"],
        std_surfaces,
        [Attachment(n, l, c, s) for n in names for l, c, s in (("b1", "C1", 1), ("b2", "C2", -1))],
    )
    return standard, Precover(expanded, data, piece_group, {top: "C1", bottom: "C2"})
