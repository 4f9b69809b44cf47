"""
From a branched surface to a standard one
=========================================

A complex with branching valences 4 and 3 is unfolded into a precover whose
pieces group into three surfaces, each with boundary C1 - C2.
"""

from collections import Counter

from branchtor.complexes import (
    branching_valences,
    build_from_system,
    h1,
    piece_boundary,
    standardize,
    verify_cover,
)
from branchtor.deqs import DeltaSystem

system = DeltaSystem(
    ("x", "y"),
    (
        (("x", 1), ("y", -1)),
        (("x", 1), ("y", -1)),
        (("x", 1), ("y", 1)),
        (("x", 1),),
    ),
)
b = build_from_system(system)
print("valences:", branching_valences(b), " H1:", h1(b))

std, pre = standardize(b)
for sid, spec in std.surfaces.items():
    print(f"{sid:<6} genus {spec.genus:<4} boundary {piece_boundary(std, sid)}")

report = verify_cover(pre.expanded, b, pre.data, precover=True)
print("precover ok:", report.ok, " hanging elevations:", len(report.hanging))
print("cover pieces per standard piece:", dict(Counter(pre.pieces.values())))
print("circle copies over each base circle:",
      dict(Counter(base for base, _ in pre.data.circles.values())))
