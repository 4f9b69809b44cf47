"""
Elevations of conjugacy classes to subgroups of F(a, b)
=======================================================

Walks through subgroup graphs, elevation degrees and pull-back structures,
ending with an intersection whose pull-back is not embedded.
"""

from branchtor import stallings as S
from branchtor.words import CyclicWord, format_word, parse

H = S.from_generators(2, [parse("aaa"), parse("abAB"), parse("baaB")])
print(H, "index:", S.index(H), "rank:", S.rank(H))
print("edges:", H.edges)

# each cycle of the walk v -> v.a is one elevation of [a]
for w in ("a", "abAB", "b"):
    recs = S.elevations(H, CyclicWord(parse(w)))
    print(f"[{w}] elevates with degrees", [r.degree for r in recs],
          "conjugators", [format_word(r.conjugator) for r in recs])

# degrees over a finite-index subgroup add up to the index
C = S.complete_to_cover(H)
print("completed to index", S.index(C), "; degrees over [a]:",
      [r.degree for r in S.elevations(C, CyclicWord(parse("a")))])

# three boundary loops of a pair of pants pulled back to an index-3 subgroup
P = S.from_generators(2, [parse(w) for w in ("aaa", "baa", "aba", "aab")])
pulled = S.pullback_structure(P, [parse("a"), parse("b"), parse("ab")])
print("pull-back of {[a],[b],[ab]} to an index-3 subgroup:", [format_word(u) for u in pulled.classes])

# K = <a^2, b, aba> with [a^2] sits embedded in (F, [a^2]) ...
K = S.from_generators(2, [parse(w) for w in ("aa", "b", "aba")])
F1 = S.from_generators(2, [parse(w) for w in ("aaaa", "baaa", "abaa", "aaba", "aaab")])
print("(K,[aa]) embedded in (F,[aa]):",
      S.is_embedded_subpair(S.Pair(K, [parse("aa")]), S.Pair.free(2, [parse("aa")])))

# ... but after intersecting with F1 two K1-classes land on one F1-class
K1 = S.intersect(K, F1)
sub = S.pullback_structure(K1, S.Pair(K, [parse("aa")]))
sup = S.pullback_structure(F1, [parse("aa")])
print("K1 rank", S.rank(K1), "pull-back", [format_word(u) for u in sub.classes],
      "vs", [format_word(u) for u in sup.classes])
print("still embedded:", S.is_embedded_subpair(sub, sup))
