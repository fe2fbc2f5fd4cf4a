import random
from functools import lru_cache

import pytest

from reedykit.cellgeom import boundary_subcomplex
from reedykit.chainbase import (ChainMap, homology_ranks, identity, internal_hom,
                                make_complex, random_complex, sphere, tensor, unit,
                                zero_complex)
from reedykit.diagram import (DiagramMap, constant_diagram, is_reedy_fibrant, latching,
                              linearized_simplex, random_cofibrant_diagram, random_fibrant_diagram,
                              random_reedy_cofibration)
from reedykit.enriched import build_AP, operad_ainfty, trivially_enrich
from reedykit.fincat import gen_0deltaC, gen_01delta, gen_delta, terminal_category
from reedykit.linalg import Matrix, rank
from reedykit.reedy import standard_reedy
from reedykit.specseq import (FilteredComplex, check_pages, e2_identification, normalized_complex,
                              spectral_sequence, tot_spectral_sequence)
from reedykit.diagram import validate_diagram
from reedykit.weighted import (cell_poset, check_constants, coend, end_hom, op_shape, realization,
                               realization_weight, skeletal_filtration, tot, weight_kind,
                               weight_skeleton, weighted_pp_check)


@lru_cache(maxsize=None)
def ap(base, N):
    A = {"01delta": gen_01delta, "0deltaC": gen_0deltaC}[base](N)
    return build_AP(A, operad_ainfty(N + 2), standard_reedy(A))[1]


def point_shape():
    T = terminal_category()
    return trivially_enrich(T, standard_reedy(T))[1]


# -- coends and ends ----------------------------------------------------------------

def test_one_object_coend_and_end():
    S = point_shape()
    rng = random.Random(1)
    Bk, Bx = random_complex(rng), random_complex(rng)
    K = constant_diagram(Bk, op_shape(S))
    X = constant_diagram(Bx, S)
    assert coend(K, X).obj.dim_vector() == tensor(Bk, Bx).dim_vector()
    K2 = constant_diagram(Bk, S)
    assert end_hom(K2, X).obj.dim_vector() == internal_hom(Bk, Bx).dim_vector()


def test_weights_are_valid():
    for base in ("01delta", "0deltaC"):
        K = realization_weight(ap(base, 2))
        assert validate_diagram(K).ok


def test_realization_examples():
    S = ap("01delta", 2)
    assert homology_ranks(realization(constant_diagram(sphere(0), S)).obj) == {0: 1}
    assert homology_ranks(realization(constant_diagram(unit(), S)).obj) == {0: 1}
    assert homology_ranks(realization(linearized_simplex(S)).obj) == {0: 1}
    D2 = make_complex({0: 2})
    assert homology_ranks(realization(constant_diagram(D2, S)).obj) == {0: 2}


def _relative_dims(P):
    full, bd = P.chains().dim_vector(), boundary_subcomplex(P).chains().dim_vector()
    return {n: full.get(n, 0) - bd.get(n, 0) for n in full if full.get(n, 0) - bd.get(n, 0)}


def _convolve(a, b):
    out = {}
    for i, u in a.items():
        for j, v in b.items():
            out[i + j] = out.get(i + j, 0) + u * v
    return {n: v for n, v in out.items() if v}


@pytest.mark.parametrize("seed", [0, 1])
def test_skeletal_filtration_quotients(seed):
    for base in ("01delta", "0deltaC"):
        S = ap(base, 2)
        X = linearized_simplex(S) if seed == 0 else random_cofibrant_diagram(S, random.Random(seed))
        F, C = skeletal_filtration(X)
        assert F.validate().ok
        assert F.stages[-1].source.dim_vector() == C.obj.dim_vector()
        prev = {}
        for a in S.objects_by_degree():
            n = S.deg(a)
            stage = F.stages[n].source.dim_vector()
            quotient = {d: stage.get(d, 0) - prev.get(d, 0) for d in set(stage) | set(prev)}
            quotient = {d: v for d, v in quotient.items() if v}
            Xa, La = X.at[a].dim_vector(), latching(X, a).obj.dim_vector()
            free = {d: Xa.get(d, 0) - La.get(d, 0) for d in Xa if Xa.get(d, 0) - La.get(d, 0)}
            cell = _relative_dims(cell_poset(weight_kind(S.enriched.base), n))
            assert quotient == _convolve(cell, free)
            prev = stage


def test_pushout_product_with_skeleta():
    S = ap("01delta", 1)
    K = realization_weight(S)
    sk = weight_skeleton(K, 0)
    inc = DiagramMap(sk.obj, K, sk.incl.comps)
    rng = random.Random(3)
    for trivial in (False, True, False):
        A = random_cofibrant_diagram(S, rng)
        _, j = random_reedy_cofibration(A, rng, trivial=trivial)
        rep = weighted_pp_check(inc, j)
        assert rep.ok and rep.data["mono"]
        if trivial:
            assert rep.data["weq"]


def test_constants():
    P = point_shape()
    assert check_constants(P, unit(), "cofibrant").ok
    S = ap("01delta", 2)
    assert check_constants(S, zero_complex(), "cofibrant").ok
    assert check_constants(S, zero_complex(), "fibrant").ok
    # over the trivially enriched Delta<=2, matching maps of the constant unit
    # diagram are diagonal maps Q -> Q, hence isomorphisms
    C = gen_delta(2)
    D = trivially_enrich(C, standard_reedy(C))[1]
    X = constant_diagram(unit(), D)
    from reedykit.diagram import matching
    for a in D.objects_by_degree()[1:]:
        M = matching(X, a)
        assert M.obj.dim_vector() == {0: 1} and rank(M.from_X.at(0)) == 1
    assert is_reedy_fibrant(X)
    assert check_constants(D, unit(), "fibrant").ok


# -- spectral sequences ----------------------------------------------------------------

def _pentagon():
    d = Matrix.from_entries(5, 5, [(k, k, -1) for k in range(5)] + [((k + 1) % 5, k, 1) for k in range(5)])
    return make_complex({0: 5, 1: 5}, {1: d})


def test_one_stage_filtration():
    X = _pentagon()
    F = FilteredComplex(X, [identity(X)])
    pages = spectral_sequence(F)
    assert check_pages(pages, F).ok
    assert pages[1].entries == {(0, n): v for n, v in homology_ranks(X).items()}
    assert all(P.entries == pages[1].entries for P in pages[1:])


def test_pentagon_vertex_filtration():
    X = _pentagon()
    V = make_complex({0: 5})
    F = FilteredComplex(X, [ChainMap(V, X, {0: Matrix.identity(5)}), identity(X)])
    pages = spectral_sequence(F)
    assert check_pages(pages, F).ok
    E2 = pages[2]
    assert (E2.total(0), E2.total(1)) == (1, 1)


def test_normalized_complexes():
    S = ap("01delta", 2)
    N = normalized_complex(constant_diagram(unit(), S), 0)
    assert N.dim_vector() == {0: 1}
    N = normalized_complex(linearized_simplex(S), 0)
    assert N.dim_vector() == {0: 2, 1: 1}


def test_e2_examples():
    S = ap("01delta", 2)
    Bc = random_complex(random.Random(2))
    rep = e2_identification(constant_diagram(Bc, S))
    assert rep.ok
    expect = {f"0,{q}": v for q, v in homology_ranks(Bc).items()}
    assert rep.data["E2"] == expect and rep.data["Einf"] == expect
    X = linearized_simplex(S)
    rep = e2_identification(X)
    assert rep.ok and rep.data["E2"] == rep.data["normalized"]
    # d1 is the alternating face sum on normalized homology
    F, _ = skeletal_filtration(X)
    pages = spectral_sequence(F)
    N = normalized_complex(X, 0)
    assert rank(pages[1].d[(1, 0)]) == rank(N.diff(1)) == 1


def test_tot_examples():
    S = op_shape(ap("01delta", 2))
    Y = random_fibrant_diagram(S, random.Random(5))
    pages, rep = tot_spectral_sequence(Y)
    assert rep.ok
    assert pages[0].entries and sum(pages[-1].entries.values()) <= sum(tot(Y).obj.dim_vector().values())
    total = {}
    for key, v in rep.data["Einf"].items():
        p, q = map(int, key.split(","))
        total[q - p] = total.get(q - p, 0) + v
    assert {n: v for n, v in total.items() if v} == {int(n): v for n, v in rep.data["H"].items() if v}


def test_tot_of_constant_collapses():
    S = op_shape(ap("01delta", 1))
    Y = constant_diagram(sphere(0), S)
    if not is_reedy_fibrant(Y):
        pytest.skip("constant diagram is not Reedy fibrant on this shape")
    pages, rep = tot_spectral_sequence(Y)
    assert rep.ok
    assert pages[2].entries == pages[-1].entries
