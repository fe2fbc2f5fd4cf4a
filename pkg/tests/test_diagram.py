import random

import pytest

from reedykit.chainbase import homology_ranks, is_iso, sphere, unit
from reedykit.diagram import (canonical_LM, canonical_LM_factorization, classify,
                              constant_diagram, diagram_cotensor, diagram_sum, diagram_tensor,
                              extend_diagram, identity_map, is_reedy_cofibrant,
                              latching, linearized_simplex, matching, nat_transformations,
                              natural_maps_space, random_cofibrant_diagram, random_fibrant_diagram,
                              random_natural_map, random_reedy_cofibration, random_reedy_fibration,
                              reedy_solve_lift, rel_latching_map, restrict, validate_diagram,
                              validate_map, verify_lift, zero_diagram, zero_map_of)
from reedykit.chainbase import identity
from reedykit.enriched import build_AP, operad_ainfty, trivially_enrich
from reedykit.fincat import gen_01delta, gen_delta
from reedykit.reedy import opposite_reedy, standard_reedy
from reedykit.report import HypothesisError


def delta_op_shape(N):
    R = opposite_reedy(standard_reedy(gen_delta(N)))
    return trivially_enrich(R.category, R)[1]


def delta_shape(N):
    C = gen_delta(N)
    return trivially_enrich(C, standard_reedy(C))[1]


@pytest.fixture(scope="module")
def ap1():
    A = gen_01delta(1)
    return build_AP(A, operad_ainfty(3), standard_reedy(A))[1]


def test_delta1_latching_and_matching():
    S = delta_op_shape(2)
    X = linearized_simplex(S)
    assert validate_diagram(X).ok
    dims = [latching(X, a).obj.dim_vector() for a in S.objects_by_degree()]
    assert dims == [{}, {0: 2}, {0: 4}]
    a0 = S.objects_by_degree()[0]
    assert matching(X, a0).obj.dim_vector() == {}
    for a in S.objects_by_degree():
        assert canonical_LM_factorization(X, a).ok
    assert is_reedy_cofibrant(X)


def test_matching_of_constant_over_delta():
    S = delta_shape(1)
    X = constant_diagram(sphere(0), S)
    a1 = S.objects_by_degree()[1]
    M = matching(X, a1)
    assert M.obj.dim_vector() == {0: 1}
    assert is_iso(M.from_X)


def test_random_diagrams_factor_canonical_map(ap1):
    rng = random.Random(4)
    for _ in range(3):
        X = random_cofibrant_diagram(ap1, rng)
        assert validate_diagram(X).ok and is_reedy_cofibrant(X)
        for a in ap1.objects_by_degree():
            assert canonical_LM_factorization(X, a).ok


def test_relative_latching(ap1):
    rng = random.Random(5)
    X = random_cofibrant_diagram(ap1, rng)
    for a in ap1.objects_by_degree():
        assert is_iso(rel_latching_map(identity_map(X), a))
    F = zero_map_of(zero_diagram(ap1), X)
    a0 = ap1.objects_by_degree()[0]
    assert rel_latching_map(F, a0).equals(F.comps[a0])
    flags = classify(F)
    assert flags["reedy_cof"]
    ids = classify(identity_map(X))
    assert all(ids[k] for k in ("reedy_cof", "reedy_fib", "reedy_weq"))


def test_weq_that_is_not_a_reedy_cofibration(ap1):
    rng = random.Random(6)
    X = random_cofibrant_diagram(ap1, rng)
    while True:
        Z, _ = random_reedy_cofibration(zero_diagram(ap1), rng, trivial=True)
        if any(Z.at[a].dim_vector() for a in Z.at):
            break
    p = diagram_sum([X, Z]).proj[0]
    flags = classify(p)
    assert flags["reedy_weq"] and not flags["reedy_cof"]


def test_extension_round_trip():
    S = delta_op_shape(2)
    X = linearized_simplex(S)
    Y = restrict(X, 0)
    a = S.objects_by_degree()[1]
    ell, m = latching(X, a).to_X, matching(X, a).from_X
    Z = extend_diagram(Y, {a: (X.at[a], ell, m)})
    ref = restrict(X, 1)
    assert set(Z.act) == set(ref.act)
    assert all(Z.act[f].equals(ref.act[f]) for f in ref.act)
    # the two canonical choices
    M = matching(Y, a)
    W = extend_diagram(Y, {a: (M.obj, canonical_LM(Y, a), identity(M.obj))})
    assert validate_diagram(W).ok
    L = latching(Y, a)
    W = extend_diagram(Y, {a: (L.obj, identity(L.obj), canonical_LM(Y, a))})
    assert validate_diagram(W).ok


def test_lifts(ap1):
    rng = random.Random(7)
    Y = random_fibrant_diagram(ap1, rng)
    p = identity_map(Y)
    A = random_cofibrant_diagram(ap1, rng)
    B, i = random_reedy_cofibration(A, rng, trivial=True)
    bottom = random_natural_map(B, Y, rng)
    h = reedy_solve_lift(i, p, bottom @ i, bottom)
    assert h.equals(bottom)
    # 0 -> A against a trivial Reedy fibration
    X, q = random_reedy_fibration(Y, rng, trivial=True)
    Z = zero_diagram(ap1)
    j = zero_map_of(Z, A)
    bottom = random_natural_map(A, Y, rng)
    h = reedy_solve_lift(j, q, zero_map_of(Z, X), bottom)
    assert verify_lift(h, j, q, zero_map_of(Z, X), bottom).ok


def test_lift_refusal(ap1):
    rng = random.Random(8)
    A = random_cofibrant_diagram(ap1, rng)
    while True:
        B, i = random_reedy_cofibration(A, rng, trivial=False)
        if not classify(i)["reedy_weq"]:
            break
    Y = random_fibrant_diagram(ap1, rng)
    while True:
        X, p = random_reedy_fibration(Y, rng, trivial=False)
        if not classify(p)["reedy_weq"]:
            break
    h0 = random_natural_map(B, X, rng)
    with pytest.raises(HypothesisError):
        reedy_solve_lift(i, p, h0 @ i, p @ h0)


def test_natural_transformations_match_linear_system():
    S = delta_op_shape(1)
    X = linearized_simplex(S)
    basis = nat_transformations(X, X)
    dim, _ = natural_maps_space(X, X)
    assert len(basis) == dim
    assert all(validate_map(F).ok for F in basis)
    assert validate_map(identity_map(X)).ok


def test_tensor_and_cotensor_shift(ap1):
    X = random_cofibrant_diagram(ap1, random.Random(9))
    T = diagram_tensor(sphere(1), X)
    C = diagram_cotensor(sphere(1), X)
    assert validate_diagram(T).ok and validate_diagram(C).ok
    for a in X.objects():
        shifted = {n + 1: v for n, v in homology_ranks(X.at[a]).items()}
        assert homology_ranks(T.at[a]) == shifted
        assert homology_ranks(C.at[a]) == {n - 1: v for n, v in homology_ranks(X.at[a]).items()}
    U = diagram_tensor(unit(), X)
    assert all(U.at[a].dim_vector() == X.at[a].dim_vector() for a in X.objects())
