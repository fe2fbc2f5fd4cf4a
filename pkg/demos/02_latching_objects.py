"""
Latching and matching objects
=============================

The linearized 1-simplex as a simplicial chain complex, then the same
construction over the enriched shape A_P built from the A-infinity operad.
"""

import random

from reedykit.chainbase import homology_ranks
from reedykit.diagram import (canonical_LM_factorization, is_reedy_cofibrant, latching,
                              linearized_simplex, matching, random_cofibrant_diagram)
from reedykit.enriched import build_AP, operad_ainfty, trivially_enrich, validate_creedy
from reedykit.fincat import gen_01delta, gen_delta
from reedykit.reedy import opposite_reedy, standard_reedy

R = opposite_reedy(standard_reedy(gen_delta(2)))
S = trivially_enrich(R.category, R)[1]
X = linearized_simplex(S)

# X_n has one basis vector per monotone map [n] -> [1]; the latching
# object at [n] collects the degenerate ones
for a in S.objects_by_degree():
    L, M = latching(X, a), matching(X, a)
    print(f"{S.enriched.base.objects[a].label:>4}  X={X.at[a].dim_vector()}  "
          f"L={L.obj.dim_vector()}  M={M.obj.dim_vector()}")
print("cofibrant:", is_reedy_cofibrant(X))

# ---- the enriched version
A = gen_01delta(2)
E, SP = build_AP(A, operad_ainfty(4), standard_reedy(A))
print("\nA_P over", A.name, "c-Reedy:", validate_creedy(SP).ok)

Y = random_cofibrant_diagram(SP, random.Random(0))
for a in SP.objects_by_degree():
    cert = canonical_LM_factorization(Y, a)
    print(f"{A.objects[a].label:>4}  H(Y)={homology_ranks(Y.at[a])}  "
          f"L={latching(Y, a).obj.dim_vector()}  L->X->M ok: {cert.ok}")
