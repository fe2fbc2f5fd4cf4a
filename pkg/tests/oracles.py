"""Independent brute-force oracles shared by the test modules."""
from __future__ import annotations

import itertools
import random

from reedykit.chainbase import (ChainMap, cokernel_of, descend, direct_sum, disk,
                                identity, is_iso, kernel_of, lift_into, map_from_sum, map_to_sum,
                                scramble_basis, sphere, zero_complex, zero_map)
from reedykit.fincat import delta_op_iso
from reedykit.linalg import Matrix, q, rank


# -- categories ---------------------------------------------------------------

def brute_factorizations(R) -> dict:
    """All (inverse, direct) pairs composing to each morphism, by full scan
    of the composition table rather than the structure's own bookkeeping."""
    C = R.category
    out = {m.id: 0 for m in C.morphisms}
    for u in C.morphisms:
        if u.id not in R.inverse:
            continue
        for v in C.morphisms:
            if v.id in R.direct and v.dom == u.cod:
                out[C.compose(v.id, u.id)] += 1
    return out


def monotone_count(m: int, n: int) -> int:
    return sum(1 for s in itertools.product(range(n + 1), repeat=m + 1) if list(s) == sorted(s))


# -- simplicial bookkeeping for shapes over Delta^op ---------------------------

def degeneracy_ids(B) -> dict:
    """{(n, i): morphism id} for the degeneracies s_i: X_{n-1} -> X_n of a
    generated 01Delta / 0DeltaC, read off the duality with Delta^op."""
    F = delta_op_iso(B)
    out = {}
    for m in B.morphisms:
        g = F.target.mor(F.morphism_map[m.id]).label
        n = B.degree(m.cod)
        if B.degree(m.dom) != n - 1:
            continue
        for i in range(n):
            if g == tuple(range(i + 1)) + tuple(range(i, n)):
                out[(n, i)] = m.id
    return out


def vertex_map(X, f: int) -> ChainMap:
    """act_f on the single basis vector of a one-dimensional C[f]."""
    B = X.base
    Cf = X.E.C(f)
    assert Cf.dim_vector() == {0: 1}, "oracle expects a point component"
    src = X.at[B.dom(f)]
    return X.act[f] @ ChainMap(src, X.act[f].source, {n: Matrix.identity(src.dim(n)) for n in src.degrees() if src.dim(n)})


def _objects_by_degree(B) -> dict:
    return {o.degree: o.id for o in B.objects}


def classical_latching(X, n: int, S_ids: dict):
    """Coequalizer of (+)_{i<j} X_{n-2} => (+)_i X_{n-1} built from the
    simplicial identity s_j s_i = s_i s_{j-1}.  Returns (Q, V1, to_X)."""
    B = X.base
    obj = _objects_by_degree(B)
    Xn1 = X.at[obj[n - 1]]
    V1 = direct_sum([Xn1] * n)
    to_X = map_from_sum(V1, [vertex_map(X, S_ids[(n, i)]) for i in range(n)], X.at[obj[n]])
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if not pairs:
        Q = cokernel_of(zero_map(zero_complex(), V1.obj))
        return Q, V1, descend(Q, to_X)
    Xn2 = X.at[obj[n - 2]]
    V2 = direct_sum([Xn2] * len(pairs))
    for i, j in pairs:   # the identity itself, checked on the category
        assert B.compose(S_ids[(n, j)], S_ids[(n - 1, i)]) == B.compose(S_ids[(n, i)], S_ids[(n - 1, j - 1)])
    f1 = map_from_sum(V2, [V1.inj[j] @ vertex_map(X, S_ids[(n - 1, i)]) for i, j in pairs], V1.obj)
    f2 = map_from_sum(V2, [V1.inj[i] @ vertex_map(X, S_ids[(n - 1, j - 1)]) for i, j in pairs], V1.obj)
    Q = cokernel_of(f1 - f2)
    return Q, V1, descend(Q, to_X)


def compare_latching(X, a: int, L) -> tuple[bool, str]:
    """Build the classical coequalizer and a map into the enriched latching
    object; require an isomorphism commuting with the maps to X_a."""
    B = X.base
    n = B.degree(a)
    if n == 0:
        return L.obj.dim_vector() == {}, "degree 0"
    S_ids = degeneracy_ids(B)
    Q, V1, cl_to_X = classical_latching(X, n, S_ids)
    comps = []
    for i in range(n):
        f = S_ids[(n, i)]
        k = L.mors.index(f)
        src = V1.inj[i].source
        T = L.summ.inj[k].source
        comps.append(L.proj @ L.summ.inj[k] @ ChainMap(src, T, {d: Matrix.identity(src.dim(d)) for d in src.degrees() if src.dim(d)}))
    phi = descend(Q, map_from_sum(V1, comps, L.obj))
    if Q.obj.dim_vector() != L.obj.dim_vector():
        return False, f"ranks {Q.obj.dim_vector()} vs {L.obj.dim_vector()}"
    if not is_iso(phi):
        return False, "comparison is not an isomorphism"
    if not (L.to_X @ phi).equals(cl_to_X):
        return False, "comparison does not commute with the maps to X"
    return True, "ok"


def compare_matching(Y, a: int, M) -> tuple[bool, str]:
    """Dual check for a diagram over the opposite shape: the classical
    equalizer of (+)_i Y_{n-1} => (+)_{i<j} Y_{n-2}."""
    B = Y.base
    n = B.degree(a)
    if n == 0:
        return M.obj.dim_vector() == {}, "degree 0"
    S_ids = degeneracy_ids(B._op_of)
    obj = _objects_by_degree(B)
    Yn1 = Y.at[obj[n - 1]]
    V1 = direct_sum([Yn1] * n)
    from_Y = map_to_sum(V1, [vertex_map(Y, S_ids[(n, i)]) for i in range(n)], Y.at[obj[n]])
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if pairs:
        Yn2 = Y.at[obj[n - 2]]
        V2 = direct_sum([Yn2] * len(pairs))
        f1 = map_to_sum(V2, [vertex_map(Y, S_ids[(n - 1, i)]) @ V1.proj[j] for i, j in pairs], V1.obj)
        f2 = map_to_sum(V2, [vertex_map(Y, S_ids[(n - 1, j - 1)]) @ V1.proj[i] for i, j in pairs], V1.obj)
        K = kernel_of(f1 - f2)
    else:
        K = kernel_of(zero_map(V1.obj, zero_complex()))
    cl_from_Y = lift_into(K, from_Y)
    comps = []
    for i in range(n):
        k = M.mors.index(S_ids[(n, i)])
        c = M.component(k)
        comps.append(ChainMap(c.target, Yn1, {d: Matrix.identity(Yn1.dim(d)) for d in Yn1.degrees() if Yn1.dim(d)}) @ c)
    psi = lift_into(K, map_to_sum(V1, comps, M.obj))
    if K.obj.dim_vector() != M.obj.dim_vector():
        return False, f"ranks {K.obj.dim_vector()} vs {M.obj.dim_vector()}"
    if not is_iso(psi):
        return False, "comparison is not an isomorphism"
    if not (psi @ M.from_X).equals(cl_from_Y):
        return False, "comparison does not commute with the maps from Y"
    return True, "ok"


# -- base model structure ---------------------------------------------------------

def random_split_cofibration(rng: random.Random, trivial: bool):
    """i: A -> A (+) Z, scrambled; Z acyclic when trivial."""
    from reedykit.chainbase import random_acyclic, random_complex
    A = random_complex(rng, max_pieces=2)
    Z = random_acyclic(rng) if trivial else random_complex(rng, max_pieces=2)
    S = direct_sum([A, Z])
    return A, Z, S


def lift_oracle(i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap) -> bool:
    """Existence of h: B -> X with h i = top, p h = bottom, d h = h d, decided
    by the rank test on one vectorized linear system (Rouche-Capelli)."""
    B, X = i.target, p.source
    degs = [n for n in B.degrees() if B.dim(n) and X.dim(n)]
    off, tot = {}, 0
    for n in degs:
        off[n] = tot
        tot += X.dim(n) * B.dim(n)

    def var(n, r, c):
        return off[n] + r * B.dim(n) + c

    rows, rhs = [], []

    def add(coeffs: dict, value):
        rows.append(coeffs)
        rhs.append(q(value))

    for n in B.degrees():
        # h_n i_n = top_n
        A = i.source
        for r in range(X.dim(n)):
            for c in range(A.dim(n)):
                co: dict = {}
                for k in range(B.dim(n)):
                    v = i.at(n)[k, c]
                    if v and n in off:
                        co[var(n, r, k)] = co.get(var(n, r, k), 0) + v
                add(co, top.at(n)[r, c])
        # p_n h_n = bottom_n
        Y = p.target
        for r in range(Y.dim(n)):
            for c in range(B.dim(n)):
                co = {}
                for k in range(X.dim(n)):
                    v = p.at(n)[r, k]
                    if v and n in off:
                        co[var(n, k, c)] = co.get(var(n, k, c), 0) + v
                add(co, bottom.at(n)[r, c])
        # d^X_n h_n = h_{n-1} d^B_n
        dX, dB = X.diff(n), B.diff(n)
        for r in range(X.dim(n - 1)):
            for c in range(B.dim(n)):
                co = {}
                for k in range(X.dim(n)):
                    v = dX[r, k]
                    if v and n in off:
                        co[var(n, k, c)] = co.get(var(n, k, c), 0) + v
                for k in range(B.dim(n - 1)):
                    v = dB[k, c]
                    if v and (n - 1) in off:
                        co[var(n - 1, r, k)] = co.get(var(n - 1, r, k), 0) - v
                add(co, 0)
    if not rows:
        return True
    M = Matrix.from_entries(len(rows), tot, [(r, c, v) for r, co in enumerate(rows) for c, v in co.items() if v])
    aug = Matrix.from_entries(len(rows), tot + 1,
                              [(r, c, v) for r, co in enumerate(rows) for c, v in co.items() if v] +
                              [(r, tot, v) for r, v in enumerate(rhs) if v])
    return rank(M) == rank(aug)


def obstruction_square(n: int, rng: random.Random):
    """i: S^{n-1} -> D^n, p: S^{n-1} -> 0, top = id, bottom = 0.  Neither
    map is a weak equivalence and no lift exists."""
    Sn = scramble_basis(sphere(n - 1), rng)
    Dn = disk(n)
    i = ChainMap(Sn, Dn, {n - 1: Matrix.identity(1)})
    Z = zero_complex()
    p = zero_map(Sn, Z)
    return i, p, identity(Sn), zero_map(Dn, Z)
