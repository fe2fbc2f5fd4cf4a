"""Categories enriched in chain complexes, graded over a plain Reedy category.

An :class:`EnrichedCategory` stores one component complex ``C[f]`` per
morphism ``f`` of a base category; the hom object is the direct sum
``Hom(a, b) = (+)_{f: a -> b} C[f]``.  Composition is given blockwise,
``C[g] (x) C[f] -> C[t]``, each block carrying its target label ``t``.
Grading is respected when ``t`` is the base composite.

Non-symmetric operads and the A_P construction live here as well.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import cellgeom
from .chainbase import (ChainComplex, ChainMap, direct_sum, identity, is_iso, permute_factors,
                        regroup, tensor_many, tensor_maps, unit)
from .fincat import FiniteCategory, NCMap, opposite
from .linalg import ONE, Matrix
from .reedy import ReedyStructure, opposite_reedy, validate_reedy
from .report import ValidationReport


def unitor(X: ChainComplex, S: ChainComplex) -> ChainMap:
    """The identity-matrix iso S -> X where S is X tensored with units."""
    return ChainMap(S, X, {n: Matrix.identity(X.dim(n)) for n in X.degrees() if X.dim(n)})


def ungroup(groups: list[list[ChainComplex]]) -> ChainMap:
    """Tensor of grouped tensors -> flat tensor (inverse of regroup)."""
    flat = [X for g in groups for X in g]
    r = regroup(flat, [len(g) for g in groups])
    return ChainMap(r.target, r.source, {n: m.T for n, m in r.comps.items()})


class EnrichedCategory:
    def __init__(self, name: str, base: FiniteCategory, components: dict,
                 composer: Callable, units: dict, augmentation: dict | None = None):
        self.name = name
        self.base = base
        self.components = components
        self._composer = composer
        self._comp: dict = {}
        self.units = units
        self.augmentation = augmentation

    def C(self, f: int) -> ChainComplex:
        return self.components[f]

    def comp(self, g: int, f: int) -> tuple[int, ChainMap]:
        """(target morphism, C[g] (x) C[f] -> C[target])."""
        r = self._comp.get((g, f))
        if r is None:
            r = self._composer(g, f)
            self._comp[(g, f)] = r
        return r

    def comp_map(self, g: int, f: int) -> ChainMap:
        return self.comp(g, f)[1]

    def unit(self, a: int) -> ChainMap:
        return self.units[a]

    def eps(self, f: int) -> ChainMap:
        if self.augmentation is None:
            raise ValueError(f"{self.name} carries no augmentation")
        return self.augmentation[f]

    def hom(self, a: int, b: int):
        """(Hom(a,b), morphisms in block order, Sum structure)."""
        mors = self.base.hom(a, b)
        S = direct_sum([self.C(f) for f in mors])
        return S.obj, mors, S

    def grading(self, a: int, b: int) -> dict:
        """Block index ranges of each component inside Hom(a, b), per degree."""
        out = {}
        for f in self.base.hom(a, b):
            out[f] = None
        offsets: dict = {}
        ranges = {}
        for f in self.base.hom(a, b):
            X = self.C(f)
            r = {}
            for n in X.degrees():
                k = X.dim(n)
                if k:
                    o = offsets.get(n, 0)
                    r[n] = (o, o + k)
                    offsets[n] = o + k
            ranges[f] = r
        return ranges

    def materialize(self) -> None:
        for g, f in self.base.composable_pairs():
            self.comp(g, f)

    def with_block(self, g: int, f: int, target: int, m: ChainMap, name: str | None = None):
        """Copy with one composition block replaced (used to build corrupted inputs)."""
        self.materialize()
        blocks = dict(self._comp)
        blocks[(g, f)] = (target, m)
        return EnrichedCategory(name or self.name + "*", self.base, self.components,
                                lambda a, b: blocks[(a, b)], self.units, self.augmentation)

    def __repr__(self):
        return f"EnrichedCategory({self.name!r}, {self.base.n_objects} objects)"


@dataclass
class CReedyStructure:
    enriched: EnrichedCategory
    reedy: ReedyStructure

    @property
    def base(self) -> FiniteCategory:
        return self.reedy.category

    def deg(self, a: int) -> int:
        return self.reedy.deg(a)

    def objects_by_degree(self) -> list[int]:
        return self.reedy.objects_by_degree()

    def direct_into(self, a: int) -> list[int]:
        """Non-identity direct morphisms into a (all from lower degree)."""
        C = self.base
        return [f for f in C.hom_into(a) if f in self.reedy.direct and not C.is_identity(f)]

    def inverse_out(self, a: int) -> list[int]:
        C = self.base
        return [f for f in C.hom_out(a) if f in self.reedy.inverse and not C.is_identity(f)]


def corrupt_block(E: EnrichedCategory, g: int, f: int, delta=ONE) -> EnrichedCategory:
    """Add ``delta`` to the first stored entry of the composition block (g, f)."""
    t, m = E.comp(g, f)
    comps = {n: M for n, M in m.comps.items()}
    for n in sorted(comps):
        ents = list(comps[n].entries())
        if ents:
            i, j, x = ents[0]
            M = comps[n]
            rows = {c: dict(col) for c, col in M.cols.items()}
            rows.setdefault(j, {})[i] = x + delta
            if rows[j][i] == 0:
                del rows[j][i]
            comps[n] = Matrix(M.nrows, M.ncols, rows)
            break
    else:
        n = next((k for k in m.source.degrees() if m.source.dim(k) and m.target.dim(k)), None)
        if n is None:
            raise ValueError("block has no entries to corrupt")
        comps[n] = Matrix.from_entries(m.target.dim(n), m.source.dim(n), [(0, 0, delta)])
    return E.with_block(g, f, t, ChainMap(m.source, m.target, comps), E.name + " (corrupted)")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _assoc_sides(E: EnrichedCategory, h: int, g: int, f: int):
    Ch, Cg, Cf = E.C(h), E.C(g), E.C(f)
    t_hg, m_hg = E.comp(h, g)
    t_gf, m_gf = E.comp(g, f)
    t1, m1 = E.comp(t_hg, f)
    t2, m2 = E.comp(h, t_gf)
    if t1 != t2:
        return t1, t2, None, None
    lhs = m1 @ tensor_maps([m_hg, identity(Cf)]) @ regroup([Ch, Cg, Cf], [2, 1])
    rhs = m2 @ tensor_maps([identity(Ch), m_gf]) @ regroup([Ch, Cg, Cf], [1, 2])
    return t1, t2, lhs, rhs


class _DenseBlocks:
    """Composition blocks as dense int64 arrays in Kronecker order.

    Ordering every complex by (degree, index) and tensors lexicographically
    makes regrouping the identity and f (x) id a Kronecker product, so an
    associativity check is two matrix products.  Used only when every entry
    is an integer; products run in float64 (BLAS) and are exact because each
    is bounded by max|a| * max|b| * inner dimension < 2**52, which is
    checked per product.  Otherwise ``ok`` is False and the caller falls
    back to rational matrices.
    """

    LIMIT = 1 << 20
    EXACT = float(1 << 52)

    def __init__(self, E: EnrichedCategory):
        self.E = E
        self.ok = True
        self._arr: dict = {}
        self._max: dict = {}
        self._kidx: dict = {}
        for g, f in E.base.composable_pairs():
            if self.block(g, f) is None:
                self.ok = False
                return

    @staticmethod
    def _offsets(X: ChainComplex) -> dict:
        off, k = {}, 0
        for n in X.degrees():
            off[n] = k
            k += X.dim(n)
        return off

    def _kron_index(self, X: ChainComplex, Y: ChainComplex) -> dict:
        key = (id(X), id(Y))
        r = self._kidx.get(key)
        if r is None:
            ox, oy = self._offsets(X), self._offsets(Y)
            DY = Y.total_dim
            tb = tensor_many([X, Y])[1]
            r = {n: [(ox[dg[0]] + ix[0]) * DY + oy[dg[1]] + ix[1] for _, dg, ix in tb.elements(n)]
                 for n in tb.dims}
            self._kidx[key] = (X, Y, r)
        else:
            r = r[2]
        return r

    def block(self, g: int, f: int):
        import numpy as np
        a = self._arr.get((g, f))
        if a is not None:
            return a
        E = self.E
        t, m = E.comp(g, f)
        Cg, Cf, Ct = E.C(g), E.C(f), E.C(t)
        kidx = self._kron_index(Cg, Cf)
        ot = self._offsets(Ct)
        a = np.zeros((Ct.total_dim, Cg.total_dim * Cf.total_dim), dtype=np.float64)
        for n, M in m.comps.items():
            cols = kidx[n]
            for j, col in M.cols.items():
                for i, x in col.items():
                    if x.denominator != 1 or abs(x) > self.LIMIT:
                        return None
                    a[ot[n] + i, cols[j]] = int(x)
        self._arr[(g, f)] = a
        self._max[(g, f)] = float(np.abs(a).max()) if a.size else 0.0
        return a

    def associative(self, h: int, g: int, f: int) -> bool:
        import numpy as np
        E = self.E
        Dh, Dg, Df = E.C(h).total_dim, E.C(g).total_dim, E.C(f).total_dim
        t_hg = E.comp(h, g)[0]
        t_gf = E.comp(g, f)[0]
        M1, M2 = self.block(t_hg, f), self.block(h, t_gf)
        if E.comp(t_hg, f)[0] != E.comp(h, t_gf)[0]:
            return False
        Mhg, Mgf = self.block(h, g), self.block(g, f)
        mx = self._max
        if (mx[(t_hg, f)] * mx[(h, g)] * Mhg.shape[0] >= self.EXACT
                or mx[(h, t_gf)] * mx[(g, f)] * Mgf.shape[0] >= self.EXACT):
            raise OverflowError("dense check would lose exactness")
        Dt = M1.shape[0]
        # (comp(hg, f) o (comp(h, g) (x) id))[t, (h g) f]
        lhs = M1.reshape(Dt, -1, Df).transpose(0, 2, 1) @ Mhg
        lhs = lhs.transpose(0, 2, 1).reshape(Dt, Dh * Dg * Df)
        rhs = (M2.reshape(Dt, Dh, -1) @ Mgf).reshape(Dt, Dh * Dg * Df)
        return np.array_equal(lhs, rhs)


def validate_enriched(E: EnrichedCategory, check_associativity: bool = True) -> ValidationReport:
    B = E.base
    rep = ValidationReport(f"enriched {E.name}")
    for g, f in B.composable_pairs():
        try:
            t, m = E.comp(g, f)
        except KeyError:
            rep.add("composition_missing", "no composition block", g, f)
            continue
        if t != B.compose(g, f):
            rep.add("grading", "block lands outside the component of the composite", g, f, t)
        S = tensor_many([E.C(g), E.C(f)])[0]
        T = E.C(t)
        if m.source.dim_vector() != S.dim_vector() or m.target.dim_vector() != T.dim_vector():
            rep.add("shape", "composition block has the wrong shape", g, f)
            continue
        if m.check():
            rep.add("chain_map", "composition block does not commute with differentials", g, f)
        rep.count("composition_blocks")
    for a in range(B.n_objects):
        i = B.identities[a]
        eta = E.unit(a)
        if eta.target.dim_vector() != E.C(i).dim_vector() or eta.check():
            rep.add("unit", "unit map malformed", a)
            continue
        for f in B.hom_into(a):
            t, m = E.comp(i, f)
            lhs = m @ tensor_maps([eta, identity(E.C(f))])
            if not lhs.equals(unitor(E.C(f), lhs.source)):
                rep.add("left_unit", "left unit law fails", i, f)
            rep.count("unit_laws")
        for g in B.hom_out(a):
            t, m = E.comp(g, i)
            rhs = m @ tensor_maps([identity(E.C(g)), eta])
            if not rhs.equals(unitor(E.C(g), rhs.source)):
                rep.add("right_unit", "right unit law fails", g, i)
            rep.count("unit_laws")
    if check_associativity and not rep.kinds() & {"shape", "composition_missing", "unit"}:
        dense = _DenseBlocks(E)
        if dense.ok:
            for f in B.morphisms:
                for g in B.hom_out(f.cod):
                    for h in B.hom_out(B.cod(g)):
                        if not dense.associative(h, g, f.id):
                            rep.add("associativity", "associativity fails", h, g, f.id)
                        rep.count("triples")
            return rep
        for f in B.morphisms:
            for g in B.hom_out(f.cod):
                for h in B.hom_out(B.cod(g)):
                    t1, t2, lhs, rhs = _assoc_sides(E, h, g, f.id)
                    if lhs is None:
                        rep.add("associativity", "composites land in different components", h, g, f.id)
                    elif not lhs.equals(rhs):
                        rep.add("associativity", "associativity fails", h, g, f.id)
                    rep.count("triples")
    return rep


def validate_creedy(S: CReedyStructure, check_associativity: bool = True) -> ValidationReport:
    E, R = S.enriched, S.reedy
    rep = ValidationReport(f"C-Reedy {E.name}")
    if R.category is not E.base and not R.category.same_tables(E.base):
        rep.add("base", "Reedy structure is on a different category")
        return rep
    rep.extend(validate_reedy(R))
    if rep.violations:
        return rep
    rep.extend(validate_enriched(E, check_associativity))
    B = E.base
    for a in range(B.n_objects):
        for b in range(B.n_objects):
            total: dict = {}
            for f, r in E.grading(a, b).items():
                for n, (lo, hi) in r.items():
                    total[n] = total.get(n, 0) + hi - lo
            H = E.hom(a, b)[0]
            if {n: k for n, k in total.items() if k} != H.dim_vector():
                rep.add("grading_sum", "components do not decompose Hom", a, b)
    for m in B.morphisms:
        inv, dr = R.factorize(m.id)
        t, c = E.comp(dr, inv)
        if t != m.id:
            rep.add("factorization_block", "factorization block lands elsewhere", m.id)
            continue
        if not is_iso(c):
            rep.add("factorization_iso", "composition along the factorization is not an iso",
                    m.id, dr, inv)
        rep.count("factorization_isos")
    return rep


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def trivially_enrich(C: FiniteCategory, R: ReedyStructure | None = None):
    I = unit()
    one = {0: Matrix.identity(1)}
    comps = {m.id: I for m in C.morphisms}
    II = tensor_many([I, I])[0]
    blk = ChainMap(II, I, one)

    def composer(g, f):
        return C.compose(g, f), blk

    units = {o.id: ChainMap(I, I, one) for o in C.objects}
    aug = {m.id: ChainMap(I, I, one) for m in C.morphisms}
    E = EnrichedCategory(f"triv({C.name})", C, comps, composer, units, aug)
    return E, (CReedyStructure(E, R) if R is not None else None)


def opposite_enriched(E: EnrichedCategory, R: ReedyStructure | None = None):
    """Same components; composition g^op . f^op = comp(f, g) after the braiding."""
    from .chainbase import braiding
    Bop = opposite(E.base)

    def composer(g, f):
        t, m = E.comp(f, g)
        return t, m @ braiding(E.C(g), E.C(f))

    Eop = EnrichedCategory(E.name + "^op", Bop, E.components, composer, E.units, E.augmentation)
    return Eop, (CReedyStructure(Eop, opposite_reedy(R)) if R is not None else None)


def check_enriched_iso(E1: EnrichedCategory, E2: EnrichedCategory, maps: dict) -> ValidationReport:
    """maps: morphism id -> ChainMap E1.C(f) -> E2.C(f), over identical bases."""
    rep = ValidationReport(f"iso {E1.name} -> {E2.name}")
    if not E1.base.same_tables(E2.base):
        rep.add("base", "bases differ")
        return rep
    for f, m in maps.items():
        if not is_iso(m):
            rep.add("component_iso", "component map is not an iso", f)
    for g, f in E1.base.composable_pairs():
        t1, c1 = E1.comp(g, f)
        t2, c2 = E2.comp(g, f)
        if t1 != t2 or not (maps[t1] @ c1).equals(c2 @ tensor_maps([maps[g], maps[f]])):
            rep.add("composition", "iso does not commute with composition", g, f)
        rep.count("pairs")
    for a, eta in E1.units.items():
        i = E1.base.identities[a]
        if not (maps[i] @ eta).equals(E2.unit(a)):
            rep.add("unit", "iso does not preserve units", a)
    return rep


# ---------------------------------------------------------------------------
# Operads
# ---------------------------------------------------------------------------

class Operad:
    """Non-symmetric operad in chain complexes with levels 0..N.

    ``gamma(n, arities)`` is the full composition
    P(n) (x) P(a_0) (x) ... (x) P(a_{n-1}) -> P(sum a).
    """

    def __init__(self, name: str, N: int, levels: dict, gamma: Callable,
                 augmentation: dict | None = None):
        self.name = name
        self.N = N
        self.levels = levels
        self._gamma = gamma
        self._cache: dict = {}
        self.augmentation = augmentation

    def P(self, n: int) -> ChainComplex:
        if not 0 <= n <= self.N:
            raise ValueError(f"arity {n} outside 0..{self.N} for operad {self.name}")
        return self.levels[n]

    def gamma(self, n: int, arities: tuple) -> ChainMap:
        arities = tuple(arities)
        key = (n, arities)
        r = self._cache.get(key)
        if r is None:
            self.P(n)
            self.P(sum(arities))
            for a in arities:
                self.P(a)
            r = self._gamma(n, arities)
            self._cache[key] = r
        return r

    def circ(self, n: int, m: int, i: int) -> ChainMap:
        """x o_i y : P(n) (x) P(m) -> P(n+m-1), grafting onto input i (0-based)."""
        ar = [1] * n
        ar[i] = m
        g = self.gamma(n, tuple(ar))
        S = tensor_many([self.P(n), self.P(m)])[0]
        return ChainMap(S, g.target, g.comps)

    def __repr__(self):
        return f"Operad({self.name!r}, N={self.N})"


def operad_trivial(N: int) -> Operad:
    I = unit()
    levels = {n: I for n in range(N + 1)}

    def gamma(n, arities):
        S = tensor_many([I] * (n + 1))[0]
        return ChainMap(S, I, {0: Matrix.identity(1)})

    aug = {n: ChainMap(I, I, {0: Matrix.identity(1)}) for n in range(N + 1)}
    return Operad("trivial", N, levels, gamma, aug)


def operad_ainfty(N: int) -> Operad:
    if not 0 <= N <= cellgeom.MAX_ASSOC:
        raise ValueError(f"A-infinity operad needs N <= {cellgeom.MAX_ASSOC}")
    levels = {n: cellgeom.associahedron(n).chains() for n in range(N + 1)}
    aug = {n: cellgeom.augmentation(cellgeom.associahedron(n)) for n in range(N + 1)}
    return Operad("ainfty", N, levels, cellgeom.gamma_map, aug)


def validate_operad(P: Operad) -> ValidationReport:
    rep = ValidationReport(f"operad {P.name}")
    N = P.N
    for n in (0, 1):
        if P.P(n).dim_vector() != {0: 1}:
            rep.add("unit_levels", "P(0) and P(1) must be the unit", n)
    for n in range(1, N + 1):
        for i in range(n):
            c = P.circ(n, 1, i)
            if not c.equals(unitor(P.P(n), c.source)):
                rep.add("right_unit", "x o_i 1 != x", n, i)
        c = P.circ(1, n, 0)
        if not c.equals(unitor(P.P(n), c.source)):
            rep.add("left_unit", "1 o y != y", n)
    for n in range(1, N + 1):
        for m in range(0, N + 2 - n):
            for l in range(0, N + 3 - n - m):
                if max(n + m + l - 2, n + m - 1, n + l - 1) > N or n + m - 1 < 1:
                    continue
                X, Y, Z = P.P(n), P.P(m), P.P(l)
                for i in range(n):
                    xy = P.circ(n, m, i)
                    for j in range(i, i + m):
                        lhs = P.circ(n + m - 1, l, j) @ tensor_maps([xy, identity(Z)]) @ regroup([X, Y, Z], [2, 1])
                        rhs = P.circ(n, m + l - 1, i) @ tensor_maps([identity(X), P.circ(m, l, j - i)]) @ regroup([X, Y, Z], [1, 2])
                        if not lhs.equals(rhs):
                            rep.add("sequential", "sequential associativity fails", n, m, l, i, j)
                        rep.count("sequential")
                    for j in range(i + 1, n):
                        lhs = P.circ(n + m - 1, l, j + m - 1) @ tensor_maps([xy, identity(Z)]) @ regroup([X, Y, Z], [2, 1])
                        xz = P.circ(n, l, j)
                        rhs = (P.circ(n + l - 1, m, i) @ tensor_maps([xz, identity(Y)])
                               @ regroup([X, Z, Y], [2, 1]) @ permute_factors([X, Y, Z], [0, 2, 1]))
                        if not lhs.equals(rhs):
                            rep.add("parallel", "parallel associativity fails", n, m, l, i, j)
                        rep.count("parallel")
    return rep


# ---------------------------------------------------------------------------
# A_P
# ---------------------------------------------------------------------------

def _fibers(label: NCMap) -> tuple:
    return tuple(tuple(f) for f in label.fibers)


def build_AP(A: FiniteCategory, P: Operad, R: ReedyStructure | None = None):
    """Hom components P[f] = (x)_i P(|f^-1(i)|), factors ordered by i."""
    comps, levels = {}, {}
    for m in A.morphisms:
        if not isinstance(m.label, NCMap):
            raise ValueError("A_P needs morphisms labelled by noncommutative-set maps")
        sizes = [len(f) for f in m.label.fibers]
        if max(sizes, default=0) > P.N:
            raise ValueError(f"fiber of size {max(sizes)} exceeds the operad arity bound {P.N}")
        levels[m.id] = [P.P(k) for k in sizes]
        comps[m.id] = tensor_many(levels[m.id])[0]

    def composer(g, f):
        gf = A.compose(g, f)
        lg, lf = A.mor(g).label, A.mor(f).label
        Lg, Lf = levels[g], levels[f]
        k = len(Lg)
        perm, split, gammas = [], [], []
        for j, fib in enumerate(lg.fibers):
            perm.append(j)
            perm.extend(k + i for i in fib)
            split.append(1 + len(fib))
            gammas.append(P.gamma(len(fib), tuple(len(lf.fibers[i]) for i in fib)))
        flat = Lg + Lf
        permuted = [flat[p] for p in perm]
        m = (tensor_maps(gammas) @ regroup(permuted, split) @ permute_factors(flat, perm)
             @ ungroup([Lg, Lf]))
        return gf, ChainMap(m.source, comps[gf], m.comps)

    units = {}
    for o in A.objects:
        i = A.identities[o.id]
        units[o.id] = ChainMap(unit(), comps[i], {0: Matrix.identity(1)})
    aug = None
    if P.augmentation is not None:
        aug = {}
        for m in A.morphisms:
            e = tensor_maps([P.augmentation[len(f)] for f in m.label.fibers])
            aug[m.id] = ChainMap(comps[m.id], unit(), e.comps)
    E = EnrichedCategory(f"{A.name}_{P.name}", A, comps, composer, units, aug)
    return E, (CReedyStructure(E, R) if R is not None else None)


def trivial_AP_iso(E_AP: EnrichedCategory, E_triv: EnrichedCategory) -> dict:
    """Explicit component isos A_P (trivial operad) -> trivial enrichment."""
    out = {}
    for m in E_AP.base.morphisms:
        X, Y = E_AP.C(m.id), E_triv.C(m.id)
        if X.dim_vector() != Y.dim_vector():
            raise ValueError(f"component {m.id} is not one-dimensional")
        out[m.id] = ChainMap(X, Y, {n: Matrix.identity(X.dim(n)) for n in X.degrees() if X.dim(n)})
    return out
