"""Systems of boundary equations  e1*x1 + ... + ek*xk = 0  (each ei = +-1).

A system presents the abelian group generated by its variables modulo its
equations.  Equations form a multiset: repeats are kept, and a variable may
occur several times in one equation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .abelian import AbelianGroup, sparse_cokernel

Term = tuple[str, int]
DeltaEquation = tuple[Term, ...]


def equation(*terms: Term) -> DeltaEquation:
    out = tuple((str(v), int(s)) for v, s in terms)
    if not out:
        raise ValueError("an equation needs at least one term")
    if any(s not in (1, -1) for _, s in out):
        raise ValueError("coefficients must be +1 or -1")
    return out


@dataclass(frozen=True)
class DeltaSystem:
    variables: tuple[str, ...]
    equations: tuple[DeltaEquation, ...] = ()

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise ValueError("variables must be distinct")
        eqs = tuple(equation(*e) for e in self.equations)
        known = set(variables)
        for e in eqs:
            for v, _ in e:
                if v not in known:
                    raise ValueError(f"undeclared variable {v!r}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "equations", eqs)

    def coefficient_rows(self) -> list[dict[int, int]]:
        pos = {v: i for i, v in enumerate(self.variables)}
        rows = []
        for e in self.equations:
            r: dict[int, int] = {}
            for v, s in e:
                r[pos[v]] = r.get(pos[v], 0) + s
            rows.append(r)
        return rows

    def matrix(self) -> list[list[int]]:
        n = len(self.variables)
        return [[r.get(j, 0) for j in range(n)] for r in self.coefficient_rows()]

    def occurrences(self) -> dict[str, int]:
        out = {v: 0 for v in self.variables}
        for e in self.equations:
            for v, _ in e:
                out[v] += 1
        return out

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "equations": [[[v, s] for v, s in e] for e in self.equations],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DeltaSystem":
        return cls(
            tuple(map(str, data["variables"])),
            tuple(tuple((str(v), int(s)) for v, s in e) for e in data["equations"]),
        )


def quotient(s: DeltaSystem) -> AbelianGroup:
    return sparse_cokernel(s.coefficient_rows(), len(s.variables))


def void_extension(s: DeltaSystem, extra: Iterable[str]) -> DeltaSystem:
    """Add variables that occur in no equation."""
    return DeltaSystem(s.variables + tuple(extra), s.equations)


def equivalent_up_to_void_extension(s1: DeltaSystem, s2: DeltaSystem) -> bool:
    # Adding unused variables only adds free summands, so the free ranks can
    # always be balanced; what must agree is the torsion.
    return quotient(s1).invariant_factors == quotient(s2).invariant_factors


@dataclass(frozen=True)
class GluingRow:
    name: str
    family: str  # "Sigma", "Theta" or "Pi"
    equation: DeltaEquation


@dataclass(frozen=True)
class GluingPlan:
    """Gluing rows for a cover whose homology has torsion  Z/r1 + ... + Z/rn."""

    factors: tuple[int, ...]
    variables: tuple[str, ...]
    rows: tuple[GluingRow, ...]

    @property
    def system(self) -> DeltaSystem:
        return DeltaSystem(self.variables, tuple(r.equation for r in self.rows))

    def without_caps(self) -> DeltaSystem:
        return DeltaSystem(
            self.variables, tuple(r.equation for r in self.rows if not r.name.endswith("_0"))
        )

    def family(self, name: str) -> list[GluingRow]:
        return [r for r in self.rows if r.family == name]


def variable(i: int, j: int) -> str:
    return f"x{i}_{j}"


def table1_system(factors: Sequence[int]) -> GluingPlan:
    factors = tuple(int(r) for r in factors)
    if not factors:
        raise ValueError("need at least one factor")
    if any(r < 2 for r in factors):
        raise ValueError("every factor must be at least 2")
    variables = []
    rows: list[GluingRow] = []
    theta_cap: list[Term] = []
    pi_cap: list[Term] = []
    for i, r in enumerate(factors, start=1):
        x = lambda j: (variable(i, j), 1)  # noqa: E731
        variables.extend(variable(i, j) for j in range(1, 3 * r - 1))
        rows.append(GluingRow(f"Sigma_{i},0", "Sigma", tuple(x(j) for j in range(1, r + 1))))
        for j in range(1, r):
            rows.append(GluingRow(f"Sigma_{i},{j}", "Sigma", (x(r + 2 * j - 1), x(r + 2 * j))))
        for j in range(1, r):
            rows.append(GluingRow(f"Theta_{i},{j}", "Theta", (x(r + 2 * j - 2), x(r + 2 * j - 1))))
        for j in range(1, r):
            rows.append(GluingRow(f"Pi_{i},{j}", "Pi", (x(j), x(r + 2 * j - 1))))
        theta_cap.extend(x(j) for j in list(range(1, r)) + [3 * r - 2])
        pi_cap.extend(x(j) for j in range(r, 3 * r - 1, 2))
    rows.append(GluingRow("Theta_0", "Theta", tuple(theta_cap)))
    rows.append(GluingRow("Pi_0", "Pi", tuple(pi_cap)))
    return GluingPlan(factors, tuple(variables), tuple(rows))
