import pytest

from reedykit.cellgeom import (boundary_subcomplex, gen_associahedron, gen_cyclohedron,
                               point_poset)
from reedykit.chainbase import homology_ranks, unit
from reedykit.enriched import (build_AP, corrupt_block, operad_ainfty, operad_trivial,
                               trivially_enrich, validate_creedy, validate_enriched,
                               validate_operad)
from reedykit.fincat import gen_01delta, gen_delta, terminal_category
from reedykit.linalg import rank
from reedykit.reedy import standard_reedy


@pytest.mark.parametrize("n,f", [(2, [1]), (3, [2, 1]), (4, [5, 5, 1])])
def test_associahedra(n, f):
    assert gen_associahedron(n).f_vector() == f


@pytest.mark.parametrize("n,f", [(1, [1]), (2, [2, 1]), (3, [6, 6, 1])])
def test_cyclohedra(n, f):
    assert gen_cyclohedron(n).f_vector() == f


def test_boundaries():
    assert len(boundary_subcomplex(gen_associahedron(3))) == 2
    assert len(boundary_subcomplex(gen_associahedron(4))) == 10
    assert len(boundary_subcomplex(gen_cyclohedron(3))) == 12


def test_chains():
    assert point_poset().chains().dim_vector() == unit().dim_vector()
    assert homology_ranks(boundary_subcomplex(gen_associahedron(4)).chains()) == {0: 1, 1: 1}
    assert homology_ranks(gen_associahedron(4).chains()) == {0: 1}
    assert homology_ranks(boundary_subcomplex(gen_cyclohedron(3)).chains()) == {0: 1, 1: 1}


def test_operads():
    assert validate_operad(operad_trivial(4)).ok
    P = operad_ainfty(4)
    assert validate_operad(P).ok
    assert homology_ranks(P.P(3)) == {0: 1}
    c = P.circ(2, 2, 0)
    assert c.target.dim_vector() == P.P(3).dim_vector()
    assert rank(c.at(0)) == 1 and c.source.dim_vector() == {0: 1}


def test_trivial_enrichment():
    C = gen_delta(2)
    E, S = trivially_enrich(C, standard_reedy(C))
    assert validate_creedy(S).ok
    a = C.object_by_label(C.objects[1].label)
    H, mors, _ = E.hom(a, a)
    assert H.dim_vector() == {0: 3}
    T = terminal_category()
    Et, _ = trivially_enrich(T, standard_reedy(T))
    assert Et.hom(0, 0)[0].dim_vector() == {0: 1}


def test_ap_components_and_mutation():
    A = gen_01delta(2)
    P = operad_ainfty(4)
    E, S = build_AP(A, P, standard_reedy(A))
    big = [m for m in A.morphisms if max(len(f) for f in m.label.fibers) == 3]
    assert big
    for m in big:
        assert E.C(m.id).dim_vector() == P.P(3).dim_vector()
    assert validate_creedy(S).ok
    g, f = next((g, f) for g, f in A.composable_pairs()
                if E.C(g).dim(0) > 1 or E.C(f).dim(0) > 1)
    rep = validate_enriched(corrupt_block(E, g, f))
    assert not rep.ok
    assert any(g in v.witness or f in v.witness for v in rep.violations)
