"""
Reedy structures on small categories
====================================

Build truncated Delta and its non-commutative cousins, check the standard
Reedy structure on each, and look at why Delta-Sigma refuses one.
"""

from reedykit.fincat import gen_0deltaC, gen_01delta, gen_delta, gen_delta_sigma, interval_duality
from reedykit.fincat import check_isomorphism
from reedykit.reedy import standard_reedy, validate_reedy

# hom-set sizes of Delta<=3: monotone maps [m] -> [n]
D = gen_delta(3)
print(D.name, D.n_objects, "objects,", D.n_morphisms, "morphisms")
for a in D.objects:
    print("  ", a.label, [len(D.hom(a.id, b.id)) for b in D.objects])

# the two subcategories of Delta-Sigma that carry operadic enrichments
for C in (gen_01delta(3), gen_0deltaC(3)):
    rep = validate_reedy(standard_reedy(C))
    print(C.name, "reedy:", rep.ok)

# Delta-Sigma itself: every [n] has the symmetric group worth of automorphisms,
# and a non-identity automorphism can be neither raising nor lowering
S = gen_delta_sigma(2)
autos = [m for m in S.morphisms if m.dom == m.cod and not S.is_identity(m.id)]
rep = validate_reedy(standard_reedy(S))
print(S.name, "non-identity automorphisms:", len(autos), " reedy:", rep.ok)
print("first complaint:", rep.violations[0])

# 01Delta and 0DeltaC are self-dual up to isomorphism
print("interval duality is an isomorphism:", check_isomorphism(interval_duality(2)))
