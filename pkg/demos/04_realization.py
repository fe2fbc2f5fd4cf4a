"""
Realization and its spectral sequence
=====================================

|X| is the coend of X against associahedra (for 01Delta) or cyclohedra
(for 0DeltaC).  Filtering by skeleta gives a spectral sequence whose E2 page
is the homology of the normalized complexes.
"""

import random

from reedykit.chainbase import homology_ranks, sphere
from reedykit.diagram import constant_diagram, linearized_simplex, random_cofibrant_diagram
from reedykit.enriched import build_AP, operad_ainfty
from reedykit.fincat import gen_0deltaC, gen_01delta
from reedykit.reedy import standard_reedy
from reedykit.specseq import e2_identification
from reedykit.weighted import latching_vs_boundary, op_shape, realization

for gen in (gen_01delta, gen_0deltaC):
    A = gen(2)
    S = build_AP(A, operad_ainfty(4), standard_reedy(A))[1]
    print(A.name)
    # the weight's latching objects are the boundary chains of its cells
    Sop = op_shape(S)
    for a in Sop.objects_by_degree():
        r = latching_vs_boundary(Sop, a)
        print("   latching", r["latching_ranks"], "boundary", r["boundary_ranks"], "iso", r["iso_onto_boundary"])
    print("   |S^0|  ", homology_ranks(realization(constant_diagram(sphere(0), S)).obj))
    print("   |D^1|  ", homology_ranks(realization(linearized_simplex(S)).obj))
    X = random_cofibrant_diagram(S, random.Random(7))
    rep = e2_identification(X)
    print("   random X: E2 =", rep.data["E2"], " H =", rep.data["H"], " ok:", rep.ok)
