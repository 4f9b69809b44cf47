"""Exact integer linear algebra: Smith normal form and cokernels.

Matrices are lists of rows of Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

IntMatrix = list[list[int]]


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    if not a:
        return []
    cols = len(b[0]) if b else 0
    return [[sum(row[k] * b[k][j] for k in range(len(b))) for j in range(cols)] for row in a]


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with S = U m V diagonal, d_i | d_(i+1), d_i >= 0.

    The pivot is always the entry of least nonzero absolute value in the
    remaining block, ties broken by (row, column) position.
    """
    rows = len(m)
    cols = len(m[0]) if rows else 0
    s = [list(map(int, r)) for r in m]
    if any(len(r) != cols for r in s):
        raise ValueError("ragged matrix")
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            s[i], s[j] = s[j], s[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for r in s:
                r[i], r[j] = r[j], r[i]
            for r in v:
                r[i], r[j] = r[j], r[i]

    def add_row(src: int, dst: int, q: int) -> None:
        # row dst += q * row src
        if q:
            s[dst] = [a + q * b for a, b in zip(s[dst], s[src])]
            u[dst] = [a + q * b for a, b in zip(u[dst], u[src])]

    def add_col(src: int, dst: int, q: int) -> None:
        if q:
            for r in s:
                r[dst] += q * r[src]
            for r in v:
                r[dst] += q * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = abs(s[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                return u, s, v
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = s[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if s[i][t]:
                    add_row(t, i, -(s[i][t] // p))
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, cols):
                if s[t][j]:
                    add_col(t, j, -(s[t][j] // p))
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if s[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return u, s, v


def diagonal(s: Sequence[Sequence[int]]) -> list[int]:
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def _prime_powers(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append(q)
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariant_factors(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant-factor chain of the direct sum of cyclic groups of these orders."""
    by_prime: dict[int, list[int]] = {}
    for n in orders:
        n = abs(int(n))
        if n == 0:
            raise ValueError("a zero order is a free summand, not torsion")
        for q in _prime_powers(n):
            p = next(d for d in range(2, q + 1) if q % d == 0)
            by_prime.setdefault(p, []).append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    length = max((len(qs) for qs in by_prime.values()), default=0)
    chain = []
    for k in range(length):
        d = 1
        for qs in by_prime.values():
            if k < len(qs):
                d *= qs[k]
        chain.append(d)
    return tuple(reversed(chain))


@dataclass(frozen=True)
class AbelianGroup:
    """Z^free_rank plus cyclic factors d_1 | d_2 | ... with every d_i >= 2."""

    free_rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        chain = tuple(self.invariant_factors)
        if any(d < 2 for d in chain) or any(b % a for a, b in zip(chain, chain[1:])):
            chain = invariant_factors(d for d in chain if d != 1)
        object.__setattr__(self, "invariant_factors", chain)

    @classmethod
    def from_orders(cls, free_rank: int, orders: Iterable[int]) -> "AbelianGroup":
        return cls(free_rank, invariant_factors(o for o in orders if abs(o) != 1))

    @property
    def torsion(self) -> "AbelianGroup":
        return AbelianGroup(0, self.invariant_factors)

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_orders(
            self.free_rank + other.free_rank, self.invariant_factors + other.invariant_factors
        )

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) or "0"


def group_equal(a: AbelianGroup, b: AbelianGroup) -> bool:
    return a.free_rank == b.free_rank and a.invariant_factors == b.invariant_factors


def _cokernel_dense(m: Sequence[Sequence[int]], ncols: int) -> AbelianGroup:
    if not m or ncols == 0:
        return AbelianGroup(ncols)
    _, s, _ = smith_normal_form(m)
    d = diagonal(s)
    rank = sum(1 for x in d if x)
    return AbelianGroup(ncols - rank, tuple(x for x in d if x > 1))


def cokernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> AbelianGroup:
    """Z^ncols modulo the row span of m."""
    if ncols is None:
        if not m:
            raise ValueError("ncols is required for an empty relation list")
        ncols = len(m[0])
    rows = [{j: x for j, x in enumerate(r) if x} for r in m]
    return sparse_cokernel(rows, ncols)


def sparse_cokernel(rows: Iterable[Mapping[int, int]], ncols: int) -> AbelianGroup:
    """Cokernel of relations given as {column: coefficient} maps.

    Relations with a unit coefficient are used first to eliminate a generator;
    this never changes the group and keeps the dense Smith step small.
    """
    live: dict[int, dict[int, int]] = {}
    by_col: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        r = {j: int(x) for j, x in r.items() if x}
        if any(not 0 <= j < ncols for j in r):
            raise ValueError("relation mentions an unknown generator")
        if r:
            live[i] = r
            for j in r:
                by_col.setdefault(j, set()).add(i)
    eliminated = 0
    while True:
        unit = [(len(r), i) for i, r in live.items() if any(abs(x) == 1 for x in r.values())]
        if not unit:
            break
        _, i = min(unit)
        r = live.pop(i)
        j = min(c for c, x in r.items() if abs(x) == 1)
        sign = r[j]
        for c in r:
            by_col[c].discard(i)
        for k in sorted(by_col.pop(j, ())):
            other = live[k]
            q = other[j] * sign
            for c, x in r.items():
                y = other.get(c, 0) - q * x
                if y:
                    if c not in other:
                        by_col.setdefault(c, set()).add(k)
                    other[c] = y
                else:
                    if c in other:
                        del other[c]
                        if c != j:
                            by_col[c].discard(k)
            if not other:
                del live[k]
        eliminated += 1
    cols = sorted({c for r in live.values() for c in r})
    pos = {c: n for n, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in live]
    for row, r in zip(dense, live.values()):
        for c, x in r.items():
            row[pos[c]] = x
    rest = _cokernel_dense(dense, len(cols)) if cols else AbelianGroup(0)
    untouched = ncols - eliminated - len(cols)
    return AbelianGroup(rest.free_rank + untouched, rest.invariant_factors)
