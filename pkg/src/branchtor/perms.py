"""Permutations of range(d) as tuples.

Products are read left to right: ``compose(p, q)`` applies p first, then q.
This matches lifting paths letter by letter in a cover.
"""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Iterator, Sequence

Perm = tuple[int, ...]


def identity(d: int) -> Perm:
    return tuple(range(d))


def compose(*ps: Sequence[int]) -> Perm:
    out = list(ps[0])
    for q in ps[1:]:
        out = [q[i] for i in out]
    return tuple(out)


def invert(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def commutator(s: Sequence[int], t: Sequence[int]) -> Perm:
    return compose(s, t, invert(s), invert(t))


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            c = []
            j = i
            while not seen[j]:
                seen[j] = True
                c.append(j)
                j = p[j]
            out.append(tuple(c))
    return out


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    return tuple(sorted((len(c) for c in cycles(p)), reverse=True))


def sign(p: Sequence[int]) -> int:
    return -1 if (len(p) - len(cycles(p))) % 2 else 1


def from_cycle_type(parts: Iterable[int]) -> Perm:
    """Cycles on consecutive points, in the given order."""
    out: list[int] = []
    start = 0
    for k in parts:
        out.extend(range(start + 1, start + k))
        out.append(start)
        start += k
    return tuple(out)


def from_cycle(cycle: Sequence[int], d: int) -> Perm:
    out = list(range(d))
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        out[a] = b
    return tuple(out)


def conjugator(u: Sequence[int], y: Sequence[int]) -> Perm:
    """Some t with compose(t, u, invert(t)) == y; u and y must share a cycle type."""
    cu = sorted(cycles(u), key=len)
    cy = sorted(cycles(y), key=len)
    if [len(c) for c in cu] != [len(c) for c in cy]:
        raise ValueError("permutations are not conjugate")
    t = [0] * len(u)
    for a, b in zip(cy, cu):
        for i, j in zip(a, b):
            t[i] = j
    return tuple(t)


def orbits(gens: Sequence[Sequence[int]], d: int) -> list[set[int]]:
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i in range(d):
            a, b = find(i), find(g[i])
            if a != b:
                parent[a] = b
    out: dict[int, set[int]] = {}
    for i in range(d):
        out.setdefault(find(i), set()).add(i)
    return list(out.values())


def is_transitive(gens: Sequence[Sequence[int]], d: int) -> bool:
    return d <= 1 or len(orbits(gens, d)) == 1


def full_cycles(d: int) -> Iterator[Perm]:
    """Every d-cycle, in a fixed order."""
    if d <= 1:
        yield identity(d)
        return
    for rest in permutations(range(1, d)):
        yield from_cycle((0,) + rest, d)
