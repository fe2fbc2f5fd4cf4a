"""
Solving lifting problems in diagram categories
==============================================

A trivial Reedy cofibration against a Reedy fibration always lifts, and the
solver constructs the lift one degree at a time.  Outside the hypotheses it
refuses rather than guessing.
"""

import random

from reedykit.diagram import (classify, random_cofibrant_diagram, random_fibrant_diagram,
                              random_natural_map, random_reedy_cofibration, random_reedy_fibration,
                              reedy_solve_lift, verify_lift)
from reedykit.enriched import build_AP, operad_ainfty
from reedykit.fincat import gen_0deltaC
from reedykit.reedy import standard_reedy
from reedykit.report import HypothesisError

rng = random.Random(3)
A = gen_0deltaC(1)
S = build_AP(A, operad_ainfty(3), standard_reedy(A))[1]

X0 = random_cofibrant_diagram(S, rng)
B, i = random_reedy_cofibration(X0, rng, trivial=True)
Y = random_fibrant_diagram(S, rng)
X, p = random_reedy_fibration(Y, rng, trivial=False)
print("i:", sorted(k for k, v in classify(i).items() if v is True))
print("p:", sorted(k for k, v in classify(p).items() if v is True))

# any commuting square: take h0: B -> X and read off its edges
h0 = random_natural_map(B, X, rng)
top, bottom = h0 @ i, p @ h0
h = reedy_solve_lift(i, p, top, bottom)
print("lift verified:", verify_lift(h, i, p, top, bottom).ok)

# a plain cofibration against a plain fibration
while True:
    B2, j = random_reedy_cofibration(X0, rng, trivial=False)
    if not classify(j)["reedy_weq"]:
        break
while True:
    X2, q = random_reedy_fibration(Y, rng, trivial=False)
    if not classify(q)["reedy_weq"]:
        break
g0 = random_natural_map(B2, X2, rng)
try:
    reedy_solve_lift(j, q, g0 @ j, q @ g0)
except HypothesisError as e:
    print("refused:", e)
