from math import factorial
from itertools import product

import pytest

from reedykit.fincat import (check_isomorphism, corrupt_composition, cyclic_duality, gen_0deltaC,
                             gen_01delta, gen_delta, gen_delta_sigma, interval_duality, label_from_str,
                             label_to_str, opposite, terminal_category, validate_category)
from reedykit.reedy import (all_maps_reedy, reedy_filtration, standard_reedy, validate_reedy)

from oracles import brute_factorizations, monotone_count


def _homs(C, m, n):
    return len(C.hom(C.object_by_label(C.objects[m].label), C.object_by_label(C.objects[n].label)))


def test_terminal_category():
    T = terminal_category()
    assert (T.n_objects, T.n_morphisms) == (1, 1)
    assert validate_category(T).ok
    assert validate_reedy(standard_reedy(T)).ok


def test_delta_hom_counts():
    assert gen_delta(0).n_morphisms == 1
    D1 = gen_delta(1)
    assert (_homs(D1, 1, 1), _homs(D1, 0, 1), _homs(D1, 1, 0)) == (3, 2, 1)
    D3 = gen_delta(3)
    for m, n in product(range(4), repeat=2):
        assert _homs(D3, m, n) == monotone_count(m, n)
    assert _homs(gen_delta(2), 2, 1) == 4


def _ncset_count(m, n):
    """Sum over functions of the product of fiber-size factorials."""
    total = 0
    for f in product(range(n + 1), repeat=m + 1):
        w = 1
        for k in range(n + 1):
            w *= factorial(f.count(k))
        total += w
    return total


def test_delta_sigma_hom_counts():
    C = gen_delta_sigma(3)
    assert (_homs(C, 0, 0), _homs(C, 1, 0), _homs(C, 2, 0)) == (1, 2, 6)
    for m, n in product(range(4), repeat=2):
        assert _homs(C, m, n) == _ncset_count(m, n)


def test_sub_delta_sigma_categories():
    A = gen_01delta(2)
    assert _homs(A, 0, 0) == 1
    B = gen_0deltaC(2)
    assert _homs(B, 1, 0) == 2
    assert validate_category(A).ok and validate_category(B).ok


def test_corrupted_composition_is_reported():
    C = gen_delta(2)
    g, f = next(iter(p for p in C.composable_pairs() if len(C.hom(C.dom(p[1]), C.cod(p[0]))) > 1))
    rep = validate_category(corrupt_composition(C, g, f))
    assert not rep.ok
    assert any(g in v.witness and f in v.witness for v in rep.violations)


def test_opposite_is_an_involution():
    C = gen_delta(2)
    assert opposite(opposite(C)).same_tables(C)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_dualities(N):
    assert check_isomorphism(interval_duality(N))
    assert check_isomorphism(cyclic_duality(N))


def test_labels_round_trip():
    for C in (gen_delta(2), gen_0deltaC(2)):
        for m in C.morphisms:
            assert label_from_str(label_to_str(m.label)) == m.label


# -- Reedy ------------------------------------------------------------------------

def test_standard_structures_factor_uniquely():
    for C in (gen_delta(3), gen_01delta(3), gen_0deltaC(3)):
        R = standard_reedy(C)
        assert validate_reedy(R).ok
        assert set(brute_factorizations(R).values()) == {1}


def test_all_maps_structure_is_rejected():
    rep = validate_reedy(all_maps_reedy(gen_delta(2)))
    assert not rep.ok


def test_delta_sigma_has_automorphisms():
    # non-identity automorphisms cannot lower degree, so no strict Reedy structure exists
    C = gen_delta_sigma(2)
    autos = [m for m in C.morphisms if m.dom == m.cod and not C.is_identity(m.id)]
    assert autos
    assert not validate_reedy(standard_reedy(C)).ok


def test_factorize_examples():
    C = gen_delta(2)
    R = standard_reedy(C)
    o = {d: C.object_by_label(C.objects[d].label) for d in range(3)}
    g = C.find(o[1], o[2], (0, 0))
    inv, dire = R.factorize(g)
    assert C.cod(inv) == o[0] and C.mor(dire).label == (0,)
    s = C.find(o[2], o[1], (0, 0, 1))
    inv, dire = R.factorize(s)
    assert inv == s and C.is_identity(dire)
    i = C.identities[o[1]]
    assert R.factorize(i) == (i, i)


def test_filtrations():
    R = standard_reedy(gen_delta(3))
    assert reedy_filtration(R, 3).n_morphisms == R.category.n_morphisms
    assert reedy_filtration(R, 0).n_morphisms == 1
    assert reedy_filtration(R, 1).n_objects == 2
