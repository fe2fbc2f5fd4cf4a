"""Enriched diagrams X: A -> chain complexes, over a C-Reedy shape.

A diagram stores ``X_a`` per object and an action ``C[f] (x) X_a -> X_b``
per morphism f: a -> b of the base.  Diagrams may be partial (defined on the
objects of degree <= n only); latching and matching objects at a only look
at lower degrees, which is what the inductive constructions need.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product

from .chainbase import (ChainComplex, ChainMap, Kernel, NotCommutingError, Quotient, Sum,
                        coequalizer, cokernel_of_spaces, curry, descend, direct_sum,
                        hom_postcompose, hom_precompose, identity, internal_hom,
                        internal_hom_basis, invert_iso, is_cofibration, is_fibration, is_weq,
                        kernel_of, lift_into, map_from_sum, map_to_sum, permute_factors,
                        pullback, pushout, random_acyclic, random_chain_map, random_complex,
                        regroup, solve_lift, tensor_many, tensor_maps, uncurry, zero_complex,
                        zero_map)
from .enriched import CReedyStructure, EnrichedCategory, ungroup, unitor
from .linalg import ONE, Matrix, kernel
from .report import HypothesisError, ValidationReport


class Diagram:
    def __init__(self, shape: CReedyStructure, at: dict, act: dict, name: str = "X"):
        self.shape = shape
        self.at = dict(at)
        self.act = dict(act)
        self.name = name
        self._L: dict = {}
        self._M: dict = {}

    @property
    def E(self) -> EnrichedCategory:
        return self.shape.enriched

    @property
    def base(self):
        return self.shape.enriched.base

    def objects(self) -> list[int]:
        return [a for a in self.shape.objects_by_degree() if a in self.at]

    def morphisms(self) -> list[int]:
        B = self.base
        return [m.id for m in B.morphisms if m.dom in self.at and m.cod in self.at]

    def __repr__(self):
        dims = {self.base.obj(a).label: self.at[a].dim_vector() for a in self.objects()}
        return f"Diagram({self.name}, {dims})"


@dataclass
class DiagramMap:
    source: Diagram
    target: Diagram
    comps: dict

    def at(self, a: int) -> ChainMap:
        return self.comps[a]

    def __matmul__(self, other: "DiagramMap") -> "DiagramMap":
        return DiagramMap(other.source, self.target,
                          {a: self.comps[a] @ other.comps[a] for a in other.comps if a in self.comps})

    def equals(self, other: "DiagramMap") -> bool:
        return set(self.comps) == set(other.comps) and all(
            self.comps[a].equals(other.comps[a]) for a in self.comps)


# ---------------------------------------------------------------------------
# Laws
# ---------------------------------------------------------------------------

def identity_action(E: EnrichedCategory, a: int, X: ChainComplex) -> ChainMap:
    """C[id_a] (x) X -> X, the inverse unit followed by the unitor."""
    eta = E.unit(a)
    m = tensor_maps([invert_iso(eta), identity(X)])
    return unitor(X, m.target) @ m


def validate_diagram(X: Diagram) -> ValidationReport:
    E, B = X.E, X.base
    rep = ValidationReport(f"diagram {X.name}")
    for f in X.morphisms():
        a, b = B.dom(f), B.cod(f)
        m = X.act.get(f)
        if m is None:
            rep.add("action_missing", "no action map", f)
            continue
        S = tensor_many([E.C(f), X.at[a]])[0]
        if m.source.dim_vector() != S.dim_vector() or m.target.dim_vector() != X.at[b].dim_vector():
            rep.add("shape", "action has the wrong shape", f)
            continue
        if m.check():
            rep.add("chain_map", "action does not commute with differentials", f)
    if rep.violations:
        return rep
    for a in X.objects():
        i = B.identities[a]
        lhs = X.act[i] @ tensor_maps([E.unit(a), identity(X.at[a])])
        if not lhs.equals(unitor(X.at[a], lhs.source)):
            rep.add("unit", "identity does not act trivially", a)
    for g in X.morphisms():
        for f in B.hom_into(B.dom(g)):
            if B.dom(f) not in X.at:
                continue
            Cg, Cf, Xa = E.C(g), E.C(f), X.at[B.dom(f)]
            t, c = E.comp(g, f)
            lhs = X.act[t] @ tensor_maps([c, identity(Xa)]) @ regroup([Cg, Cf, Xa], [2, 1])
            rhs = X.act[g] @ tensor_maps([identity(Cg), X.act[f]]) @ regroup([Cg, Cf, Xa], [1, 2])
            if not lhs.equals(rhs):
                rep.add("associativity", "action is not associative", g, f)
            rep.count("pairs")
    return rep


def validate_map(F: DiagramMap) -> ValidationReport:
    X, Y = F.source, F.target
    E, B = X.E, X.base
    rep = ValidationReport(f"map {X.name} -> {Y.name}")
    for a in X.objects():
        if a not in F.comps:
            rep.add("component_missing", "no component", a)
        elif F.comps[a].check():
            rep.add("chain_map", "component is not a chain map", a)
    if rep.violations:
        return rep
    for f in X.morphisms():
        a, b = B.dom(f), B.cod(f)
        lhs = F.comps[b] @ X.act[f]
        rhs = Y.act[f] @ tensor_maps([identity(E.C(f)), F.comps[a]])
        if not lhs.equals(rhs):
            rep.add("naturality", "component square does not commute", f)
        rep.count("squares")
    return rep


def identity_map(X: Diagram) -> DiagramMap:
    return DiagramMap(X, X, {a: identity(X.at[a]) for a in X.at})


def zero_diagram(shape: CReedyStructure, objects=None) -> Diagram:
    B = shape.enriched.base
    objs = set(range(B.n_objects) if objects is None else objects)
    Z = zero_complex()
    at = {a: Z for a in objs}
    act = {m.id: zero_map(tensor_many([shape.enriched.C(m.id), Z])[0], Z)
           for m in B.morphisms if m.dom in objs and m.cod in objs}
    return Diagram(shape, at, act, "0")


def zero_map_of(X: Diagram, Y: Diagram) -> DiagramMap:
    return DiagramMap(X, Y, {a: zero_map(X.at[a], Y.at[a]) for a in X.at})


def restrict(X: Diagram, n: int) -> Diagram:
    """The truncation to objects of degree <= n."""
    keep = {a for a in X.at if X.shape.deg(a) <= n}
    B = X.base
    return Diagram(X.shape, {a: X.at[a] for a in keep},
                   {f: m for f, m in X.act.items() if B.dom(f) in keep and B.cod(f) in keep}, X.name)


# ---------------------------------------------------------------------------
# Latching and matching
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Latching:
    obj: ChainComplex
    mors: list           # non-identity direct morphisms into a, block order
    summ: Sum            # (+)_w C[w] (x) X_dom(w)
    quot: Quotient       # summ.obj -> obj
    to_X: ChainMap | None    # obj -> X_a, None while X_a is undefined

    @property
    def proj(self) -> ChainMap:
        return self.quot.proj


@dataclass(eq=False)
class Matching:
    obj: ChainComplex
    mors: list           # non-identity inverse morphisms out of a, block order
    summ: Sum            # (+)_v F(C[v], X_cod(v))
    sub: Kernel          # obj -> summ.obj
    from_X: ChainMap | None  # X_a -> obj

    @property
    def incl(self) -> ChainMap:
        return self.sub.incl

    def component(self, k: int) -> ChainMap:
        return self.summ.proj[k] @ self.incl


def _block_order(X: Diagram, mors: list, end) -> list:
    B = X.base
    return sorted(mors, key=lambda f: (X.shape.deg(end(f)), B.obj(end(f)).label, f))


def latching(X: Diagram, a: int) -> Latching:
    r = X._L.get(a)
    if r is not None:
        return r
    E, B = X.E, X.base
    W = _block_order(X, X.shape.direct_into(a), B.dom)
    T = direct_sum([tensor_many([E.C(w), X.at[B.dom(w)]])[0] for w in W])
    widx = {w: k for k, w in enumerate(W)}
    rel1, rel2 = [], []
    for u in W:
        for v in X.shape.direct_into(B.dom(u)):
            Cu, Cv, Xb = E.C(u), E.C(v), X.at[B.dom(v)]
            t, c = E.comp(u, v)
            rel1.append(T.inj[widx[t]] @ tensor_maps([c, identity(Xb)]) @ regroup([Cu, Cv, Xb], [2, 1]))
            rel2.append(T.inj[widx[u]] @ tensor_maps([identity(Cu), X.act[v]])
                        @ regroup([Cu, Cv, Xb], [1, 2]))
    if rel1:
        S = direct_sum([m.source for m in rel1])
        Q = coequalizer(map_from_sum(S, rel1, T.obj), map_from_sum(S, rel2, T.obj))
    else:
        Q = cokernel_of_spaces(T.obj, {})
    to_X = descend(Q, map_from_sum(T, [X.act[w] for w in W], X.at[a])) if a in X.at else None
    r = Latching(Q.obj, W, T, Q, to_X)
    X._L[a] = r
    return r


def cotensor_leg(act: ChainMap, L: ChainComplex, K: ChainComplex, Z: ChainComplex,
                 W: ChainComplex) -> ChainMap:
    """F(K, Z) -> F(L (x) K, W),  f |-> [b (x) k |-> (-1)^{|b||f|} act(b (x) f(k))]
    for act: L (x) Z -> W."""
    S, sb = internal_hom_basis(K, Z)
    _, lkb = tensor_many([L, K])
    T, tb = internal_hom_basis(tensor_many([L, K])[0], W)
    lzb = tensor_many([L, Z])[1]
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, m, r, c in sb.elements(n):
            for p in L.degrees():
                if not L.dim(p) or (n, p + m) not in tb.offset:
                    continue
                A = act.at(p + m + n)
                neg = (p * n) % 2
                for bi in range(L.dim(p)):
                    col = A.col(lzb.index((p, m + n), (bi, r)))
                    kc = lkb.index((p, m), (bi, c))
                    for w, x in col.items():
                        entries.append((tb.index(n, p + m, w, kc), pos, -x if neg else x))
        if entries:
            comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


def matching(X: Diagram, a: int) -> Matching:
    r = X._M.get(a)
    if r is not None:
        return r
    E, B = X.E, X.base
    V = _block_order(X, X.shape.inverse_out(a), B.cod)
    P = direct_sum([internal_hom(E.C(v), X.at[B.cod(v)]) for v in V])
    vidx = {v: k for k, v in enumerate(V)}
    leg1, leg2 = [], []
    for v in V:
        g = B.cod(v)
        for u in X.shape.inverse_out(g):
            Cu, Cv, Xb = E.C(u), E.C(v), X.at[B.cod(u)]
            t, c = E.comp(u, v)
            leg1.append(hom_precompose(c, Xb) @ P.proj[vidx[t]])
            leg2.append(cotensor_leg(X.act[u], Cu, Cv, X.at[g], Xb) @ P.proj[vidx[v]])
    if leg1:
        Qs = direct_sum([m.target for m in leg1])
        K = kernel_of(map_to_sum(Qs, leg1, P.obj) - map_to_sum(Qs, leg2, P.obj))
    else:
        K = kernel_of(zero_map(P.obj, zero_complex()))
    from_X = None
    if a in X.at:
        from_X = lift_into(K, map_to_sum(P, [curry(X.act[v], E.C(v), X.at[a]) for v in V], X.at[a]))
    r = Matching(K.obj, V, P, K, from_X)
    X._M[a] = r
    return r


def canonical_LM(X: Diagram, a: int) -> ChainMap:
    """L_a X -> M_a X built directly from composition and action."""
    E, B = X.E, X.base
    L, M = latching(X, a), matching(X, a)
    if not L.mors or not M.mors:
        return zero_map(L.obj, M.obj)
    rows = []
    for v in M.mors:
        Cv = E.C(v)
        blocks = []
        for w in L.mors:
            Cw, Xb = E.C(w), X.at[B.dom(w)]
            t, c = E.comp(v, w)
            phi = (X.act[t] @ tensor_maps([c, identity(Xb)]) @ regroup([Cv, Cw, Xb], [2, 1])
                   @ ungroup([[Cv], [Cw, Xb]]))
            blocks.append(curry(phi, Cv, tensor_many([Cw, Xb])[0]))
        rows.append(map_from_sum(L.summ, blocks, internal_hom(Cv, X.at[B.cod(v)])))
    full = map_to_sum(M.summ, rows, L.summ.obj)
    return lift_into(M.sub, descend(L.quot, full))


@dataclass
class LMCertificate:
    object: int
    ok: bool
    composite: ChainMap
    canonical: ChainMap


def canonical_LM_factorization(X: Diagram, a: int) -> LMCertificate:
    L, M = latching(X, a), matching(X, a)
    comp = M.from_X @ L.to_X
    can = canonical_LM(X, a)
    return LMCertificate(a, comp.equals(can), comp, can)


def induced_latching(LX: Latching, LY: Latching, X: Diagram, Y: Diagram, comps: dict) -> ChainMap:
    """L_a X -> L_a Y induced by components on lower degrees."""
    E, B = X.E, X.base
    if not LX.mors:
        return zero_map(LX.obj, LY.obj)
    blocks = [LY.summ.inj[k] @ tensor_maps([identity(E.C(w)), comps[B.dom(w)]])
              for k, w in enumerate(LX.mors)]
    return descend(LX.quot, LY.proj @ map_from_sum(LX.summ, blocks, LY.summ.obj))


def induced_matching(MX: Matching, MY: Matching, X: Diagram, Y: Diagram, comps: dict) -> ChainMap:
    E, B = X.E, X.base
    if not MX.mors:
        return zero_map(MX.obj, MY.obj)
    rows = [hom_postcompose(E.C(v), comps[B.cod(v)]) @ MX.summ.proj[k]
            for k, v in enumerate(MX.mors)]
    return lift_into(MY.sub, map_to_sum(MY.summ, rows, MX.summ.obj) @ MX.incl)


# ---------------------------------------------------------------------------
# Relative latching / matching and classification
# ---------------------------------------------------------------------------

def rel_latching(F: DiagramMap, a: int):
    X, Y = F.source, F.target
    LX, LY = latching(X, a), latching(Y, a)
    Lf = induced_latching(LX, LY, X, Y, F.comps)
    po = pushout(LX.to_X, Lf)
    return po.induced(F.comps[a], LY.to_X), po, Lf


def rel_latching_map(F: DiagramMap, a: int) -> ChainMap:
    return rel_latching(F, a)[0]


def rel_matching(F: DiagramMap, a: int):
    X, Y = F.source, F.target
    MX, MY = matching(X, a), matching(Y, a)
    Mf = induced_matching(MX, MY, X, Y, F.comps)
    pb = pullback(MY.from_X, Mf)
    return pb.induced(F.comps[a], MX.from_X), pb, Mf


def rel_matching_map(F: DiagramMap, a: int) -> ChainMap:
    return rel_matching(F, a)[0]


def classify(F: DiagramMap) -> dict:
    """Flags of Reedy model classes, plus per-object detail."""
    objs = F.source.objects()
    per = {}
    for a in objs:
        rl, rm = rel_latching_map(F, a), rel_matching_map(F, a)
        per[a] = {"weq": is_weq(F.comps[a]),
                  "rel_latching_cof": is_cofibration(rl), "rel_latching_weq": is_weq(rl),
                  "rel_matching_fib": is_fibration(rm), "rel_matching_weq": is_weq(rm)}
    flags = {
        "reedy_weq": all(p["weq"] for p in per.values()),
        "reedy_cof": all(p["rel_latching_cof"] for p in per.values()),
        "reedy_fib": all(p["rel_matching_fib"] for p in per.values()),
        "trivial_cof": all(p["rel_latching_cof"] and p["rel_latching_weq"] for p in per.values()),
        "trivial_fib": all(p["rel_matching_fib"] and p["rel_matching_weq"] for p in per.values()),
    }
    flags["objects"] = per
    return flags


def is_reedy_cofibrant(X: Diagram) -> bool:
    return classify(zero_map_of(zero_diagram(X.shape, X.at), X))["reedy_cof"]


def is_reedy_fibrant(X: Diagram) -> bool:
    return classify(zero_map_of(X, zero_diagram(X.shape, X.at)))["reedy_fib"]


# ---------------------------------------------------------------------------
# Extension
# ---------------------------------------------------------------------------

def extend_diagram(X: Diagram, choices: dict, check: bool = True) -> Diagram:
    """Extend X (defined below degree n) by choices a -> (X_a, ell, m), with
    ell: L_a X -> X_a and m: X_a -> M_a X factoring the canonical map."""
    E, B, S = X.E, X.base, X.shape
    L = {a: latching(X, a) for a in choices}
    M = {a: matching(X, a) for a in choices}
    for a, (Xa, ell, m) in choices.items():
        if a in X.at:
            raise ValueError(f"object {a} is already defined")
        if check and not (m @ ell).equals(canonical_LM(X, a)):
            raise ValueError(f"choices at object {a} do not factor the canonical map L -> M")
    at = dict(X.at)
    at.update({a: c[0] for a, c in choices.items()})
    act = dict(X.act)
    new = set(choices)

    def act_inverse(i):
        a = B.dom(i)
        if B.is_identity(i):
            return act[i] if a not in new else identity_action(E, a, at[a])
        if a not in new:
            return act[i]
        k = M[a].mors.index(i)
        psi = M[a].component(k) @ choices[a][2]
        return uncurry(psi, E.C(i), at[B.cod(i)])

    def act_direct(d):
        b = B.cod(d)
        if B.is_identity(d):
            return act[d] if b not in new else identity_action(E, b, at[b])
        if b not in new:
            return act[d]
        k = L[b].mors.index(d)
        return choices[b][1] @ L[b].proj @ L[b].summ.inj[k]

    for m in B.morphisms:
        g = m.id
        if m.dom not in at or m.cod not in at or g in act:
            continue
        if not (m.dom in new or m.cod in new):
            continue
        i, d = S.reedy.factorize(g)
        if B.is_identity(i):
            act[g] = act_direct(d)
            continue
        if B.is_identity(d):
            act[g] = act_inverse(i)
            continue
        Cd, Ci, Xa = E.C(d), E.C(i), at[m.dom]
        t, c = E.comp(d, i)
        inv = invert_iso(c)
        act[g] = (act_direct(d) @ tensor_maps([identity(Cd), act_inverse(i)])
                  @ regroup([Cd, Ci, Xa], [1, 2]) @ ungroup([[Cd, Ci], [Xa]])
                  @ tensor_maps([inv, identity(Xa)]))
    return Diagram(S, at, act, X.name)


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------

def check_square(i: DiagramMap, p: DiagramMap, top: DiagramMap, bottom: DiagramMap) -> bool:
    return all((p.comps[a] @ top.comps[a]).equals(bottom.comps[a] @ i.comps[a]) for a in i.comps)


def reedy_solve_lift(i: DiagramMap, p: DiagramMap, top: DiagramMap, bottom: DiagramMap,
                     check_hypotheses: bool = True) -> DiagramMap | None:
    """Lift h: B -> X in the square top: A -> X, bottom: B -> Y with
    i: A -> B, p: X -> Y, built degree by degree on the corner squares."""
    if check_hypotheses:
        ci, cp = classify(i), classify(p)
        if not ci["reedy_cof"]:
            raise HypothesisError("left map is not a Reedy cofibration")
        if not cp["reedy_fib"]:
            raise HypothesisError("right map is not a Reedy fibration")
        if not (ci["reedy_weq"] or cp["reedy_weq"]):
            raise HypothesisError("neither map is a Reedy weak equivalence")
    if not check_square(i, p, top, bottom):
        raise NotCommutingError("lifting square does not commute")
    Bd, X = i.target, p.source
    h: dict = {}
    for a in Bd.objects():
        corner_i, po, _ = rel_latching(i, a)
        LB, LX = latching(Bd, a), latching(X, a)
        Lh = induced_latching(LB, LX, Bd, X, h)
        top_c = po.induced(top.comps[a], LX.to_X @ Lh)
        corner_p, pb, _ = rel_matching(p, a)
        MB, MX = matching(Bd, a), matching(X, a)
        Mh = induced_matching(MB, MX, Bd, X, h)
        bot_c = pb.induced(bottom.comps[a], Mh @ MB.from_X)
        ha = solve_lift(corner_i, corner_p, top_c, bot_c)
        if ha is None:
            return None
        h[a] = ha
    return DiagramMap(Bd, X, h)


def verify_lift(h: DiagramMap, i: DiagramMap, p: DiagramMap, top: DiagramMap,
                bottom: DiagramMap) -> ValidationReport:
    rep = validate_map(h)
    for a in i.comps:
        if not (h.comps[a] @ i.comps[a]).equals(top.comps[a]):
            rep.add("upper_triangle", "h i != top", a)
        if not (p.comps[a] @ h.comps[a]).equals(bottom.comps[a]):
            rep.add("lower_triangle", "p h != bottom", a)
    return rep


# ---------------------------------------------------------------------------
# Hom objects
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class HomObject:
    obj: ChainComplex
    incl: ChainMap       # obj -> prod_a F(X_a, Y_a)
    summ: Sum
    objects: list


def functor_hom_object(X: Diagram, Y: Diagram) -> HomObject:
    """Equalizer of prod_a F(X_a, Y_a) => prod_f F(C[f] (x) X_a, Y_b)."""
    E, B = X.E, X.base
    objs = X.objects()
    P = direct_sum([internal_hom(X.at[a], Y.at[a]) for a in objs])
    idx = {a: k for k, a in enumerate(objs)}
    leg1, leg2, tgts = [], [], []
    for f in X.morphisms():
        a, b = B.dom(f), B.cod(f)
        l1 = hom_precompose(X.act[f], Y.at[b]) @ P.proj[idx[b]]
        l2 = cotensor_leg(Y.act[f], E.C(f), X.at[a], Y.at[a], Y.at[b]) @ P.proj[idx[a]]
        tgts.append(l1.target)
        leg1.append(l1)
        leg2.append(l2)
    Q = direct_sum(tgts)
    K = kernel_of(map_to_sum(Q, leg1, P.obj) - map_to_sum(Q, leg2, P.obj))
    return HomObject(K.obj, K.incl, P, objs)


def _decode_degree0(H: HomObject, X: Diagram, Y: Diagram, vec: dict) -> dict:
    comps = {}
    for k, a in enumerate(H.objects):
        Xa, Ya = X.at[a], Y.at[a]
        _, hb = internal_hom_basis(Xa, Ya)
        v = H.summ.proj[k].at(0).apply(vec)
        ents: dict = {}
        for pos, m, r, c in hb.elements(0):
            x = v.get(pos)
            if x:
                ents.setdefault(m, []).append((r, c, x))
        comps[a] = ChainMap(Xa, Ya, {m: Matrix.from_entries(Ya.dim(m), Xa.dim(m), e)
                                     for m, e in ents.items()})
    return comps


def nat_transformations(X: Diagram, Y: Diagram) -> list[DiagramMap]:
    """Basis of the degree-0 cycles of Hom(X, Y), as diagram maps."""
    H = functor_hom_object(X, Y)
    Z = kernel(H.obj.diff(0))
    out = []
    inc0 = H.incl.at(0)
    for t in range(Z.dim):
        out.append(DiagramMap(X, Y, _decode_degree0(H, X, Y, inc0.apply(Z.basis.col(t)))))
    return out


def natural_maps_space(X: Diagram, Y: Diagram):
    """Independent oracle: solve chain-map and naturality equations on the
    matrix entries of the components.  Returns (dimension, basis maps)."""
    E, B = X.E, X.base
    objs = X.objects()
    var = {}
    for a in objs:
        for m in X.at[a].degrees():
            for r in range(Y.at[a].dim(m)):
                for c in range(X.at[a].dim(m)):
                    var[(a, m, r, c)] = len(var)
    nvar = len(var)

    def elementary(a, m, r, c):
        Xa, Ya = X.at[a], Y.at[a]
        return ChainMap(Xa, Ya, {m: Matrix.from_entries(Ya.dim(m), Xa.dim(m), [(r, c, ONE)])})

    eqs: dict = {}   # equation key -> {variable: coefficient}

    def add(tag, k, vec):
        for i, x in vec.items():
            eqs.setdefault((tag, i), {})
            d = eqs[(tag, i)]
            d[k] = d.get(k, 0) + x

    for key, k in var.items():
        a, m, r, c = key
        e = elementary(*key)
        Xa, Ya = X.at[a], Y.at[a]
        # d e - e d
        for n in (m, m + 1):
            D = (Ya.diff(n) @ e.at(n)) - (e.at(n - 1) @ Xa.diff(n))
            for j, col in D.cols.items():
                add(("d", a, n), k, {(i, j): x for i, x in col.items()})
        for f in X.morphisms():
            fa, fb = B.dom(f), B.cod(f)
            if fa == a:
                rhs = Y.act[f] @ tensor_maps([identity(E.C(f)), e])
                for n, M in rhs.comps.items():
                    for j, col in M.cols.items():
                        add(("nat", f, n), k, {(i, j): -x for i, x in col.items()})
            if fb == a:
                lhs = e @ X.act[f]
                for n, M in lhs.comps.items():
                    for j, col in M.cols.items():
                        add(("nat", f, n), k, {(i, j): x for i, x in col.items()})
    keys = sorted(eqs, key=repr)
    A = Matrix.from_entries(len(keys), nvar,
                            [(ri, k, x) for ri, key in enumerate(keys) for k, x in eqs[key].items() if x])
    Kspace = kernel(A)
    maps = []
    for t in range(Kspace.dim):
        col = Kspace.basis.col(t)
        comps = {}
        for a in objs:
            ents: dict = {}
            for (b, m, r, c), k in var.items():
                if b == a and col.get(k):
                    ents.setdefault(m, []).append((r, c, col[k]))
            comps[a] = ChainMap(X.at[a], Y.at[a], {m: Matrix.from_entries(Y.at[a].dim(m), X.at[a].dim(m), e)
                                                   for m, e in ents.items()})
        maps.append(DiagramMap(X, Y, comps))
    return Kspace.dim, maps


def random_natural_map(X: Diagram, Y: Diagram, rng: random.Random, values=(-1, 0, 1, 2)) -> DiagramMap:
    basis = nat_transformations(X, Y)
    comps = {a: zero_map(X.at[a], Y.at[a]) for a in X.objects()}
    for F in basis:
        c = rng.choice(values)
        if c:
            for a in comps:
                comps[a] = comps[a] + F.comps[a].scale(c)
    return DiagramMap(X, Y, comps)


# ---------------------------------------------------------------------------
# Tensor, cotensor, constants, sums
# ---------------------------------------------------------------------------

def diagram_tensor(K: ChainComplex, X: Diagram) -> Diagram:
    """(K (x) X)_a = K (x) X_a;  c (x) k (x) x |-> (-1)^{|c||k|} k (x) c.x."""
    E, B = X.E, X.base
    at = {a: tensor_many([K, X.at[a]])[0] for a in X.at}
    act = {}
    for f in X.morphisms():
        a = B.dom(f)
        Cf, Xa = E.C(f), X.at[a]
        act[f] = (tensor_maps([identity(K), X.act[f]]) @ regroup([K, Cf, Xa], [1, 2])
                  @ permute_factors([Cf, K, Xa], [1, 0, 2]) @ ungroup([[Cf], [K, Xa]]))
    return Diagram(X.shape, at, act, f"{X.name}(x)K")


def diagram_cotensor(K: ChainComplex, X: Diagram) -> Diagram:
    """(X^K)_a = F(K, X_a), with c . phi = curry(k (x) c (x) phi |-> (-1)^{|k||c|} c . ev(k, phi))."""
    E, B = X.E, X.base
    at = {a: internal_hom(K, X.at[a]) for a in X.at}
    act = {}
    for f in X.morphisms():
        a = B.dom(f)
        Cf, H = E.C(f), at[a]
        ev = uncurry(identity(H), K, X.at[a])
        phi = (X.act[f] @ tensor_maps([identity(Cf), ev]) @ regroup([Cf, K, H], [1, 2])
               @ permute_factors([K, Cf, H], [1, 0, 2]) @ ungroup([[K], [Cf, H]]))
        act[f] = curry(phi, K, tensor_many([Cf, H])[0])
    return Diagram(X.shape, at, act, f"{X.name}^K")


def constant_diagram(Bc: ChainComplex, shape: CReedyStructure, objects=None) -> Diagram:
    """X_a = B, action = augmentation (x) id."""
    E = shape.enriched
    base = E.base
    objs = set(range(base.n_objects) if objects is None else objects)
    act = {}
    for m in base.morphisms:
        if m.dom in objs and m.cod in objs:
            t = tensor_maps([E.eps(m.id), identity(Bc)])
            act[m.id] = unitor(Bc, t.target) @ t
    return Diagram(shape, {a: Bc for a in objs}, act, "const")


def augment_diagram(X: Diagram, shape: CReedyStructure) -> Diagram:
    """Pull a diagram over the trivial enrichment of the same base back along
    the augmentation: act_f = act^X_f o (eps_f (x) id)."""
    E = shape.enriched
    act = {f: m @ tensor_maps([E.eps(f), identity(X.at[E.base.dom(f)])]) for f, m in X.act.items()}
    return Diagram(shape, X.at, act, X.name)


def linearized_simplex(shape: CReedyStructure, k: int = 1, name: str | None = None) -> Diagram:
    """Q[Delta^k] as a diagram: X_n has basis the monotone maps [n] -> [k] in
    chain degree 0.  The base must be Delta^op (opposite of a generated Delta)
    or a generated 01Delta / 0DeltaC.  Augmented shapes act through eps."""
    from .enriched import trivially_enrich
    from .fincat import delta_op_iso
    B = shape.enriched.base
    F = delta_op_iso(B)
    if F is not None:
        label = lambda m: F.target.mor(F.morphism_map[m]).label
    elif B.name.startswith("Delta") and B.name.endswith("^op"):
        label = lambda m: B.mor(m).label
    else:
        raise ValueError(f"{B.name} is not a presentation of Delta^op")
    simp = {o.id: [s for s in product(range(k + 1), repeat=o.degree + 1) if list(s) == sorted(s)]
            for o in B.objects}
    flat = shape if shape.enriched.augmentation is None else trivially_enrich(B, shape.reedy)[1]
    at = {o: ChainComplex(0, 0, {0: len(v)}) for o, v in simp.items()}
    act = {}
    for m in B.morphisms:
        g = label(m.id)
        src = tensor_many([flat.enriched.C(m.id), at[m.dom]])[0]
        ents = [(simp[m.cod].index(tuple(s[v] for v in g)), j, ONE) for j, s in enumerate(simp[m.dom])]
        act[m.id] = ChainMap(src, at[m.cod], {0: Matrix.from_entries(len(simp[m.cod]), len(simp[m.dom]), ents)})
    X = Diagram(flat, at, act, name or f"Q[Delta^{k}]")
    return X if flat is shape else augment_diagram(X, shape)


@dataclass(eq=False)
class DiagramSum:
    obj: Diagram
    inj: list
    proj: list


def diagram_sum(Xs: list[Diagram]) -> DiagramSum:
    X0 = Xs[0]
    E, B = X0.E, X0.base
    sums = {a: direct_sum([X.at[a] for X in Xs]) for a in X0.at}
    act = {}
    for f in X0.morphisms():
        a, b = B.dom(f), B.cod(f)
        Cf = E.C(f)
        Sa, Sb = sums[a], sums[b]
        # C (x) (+) X_i  ->  (+) X_i
        blocks = []
        for k, X in enumerate(Xs):
            blocks.append(Sb.inj[k] @ X.act[f] @ tensor_maps([identity(Cf), Sa.proj[k]]))
        tot = blocks[0]
        for m in blocks[1:]:
            tot = tot + m
        act[f] = tot
    D = Diagram(X0.shape, {a: s.obj for a, s in sums.items()}, act, "+".join(X.name for X in Xs))
    inj = [DiagramMap(X, D, {a: sums[a].inj[k] for a in X0.at}) for k, X in enumerate(Xs)]
    proj = [DiagramMap(D, X, {a: sums[a].proj[k] for a in X0.at}) for k, X in enumerate(Xs)]
    return DiagramSum(D, inj, proj)


# ---------------------------------------------------------------------------
# Random Reedy (co)fibrant diagrams and (co)fibrations
# ---------------------------------------------------------------------------

def _fresh(rng, lo, hi, acyclic, max_pieces):
    if acyclic:
        return random_acyclic(rng, lo, hi, max_pieces)
    return random_complex(rng, lo, hi, max_pieces)


def random_cofibrant_diagram(shape: CReedyStructure, rng: random.Random, lo: int = 0,
                             hi: int = 1, max_pieces: int = 2, acyclic: bool = False,
                             max_degree: int | None = None) -> Diagram:
    """Degree by degree X_a = L_a X (+) C with C random; the matching map is
    the canonical map on L plus a random chain map on C."""
    X = Diagram(shape, {}, {}, "X")
    top = shape.reedy.max_degree() if max_degree is None else max_degree
    for n in range(top + 1):
        choices = {}
        for a in [o for o in shape.objects_by_degree() if shape.deg(o) == n]:
            L, M = latching(X, a), matching(X, a)
            C = _fresh(rng, lo, hi, acyclic, max_pieces)
            S = direct_sum([L.obj, C])
            g = random_chain_map(C, M.obj, rng)
            m = map_from_sum(S, [canonical_LM(X, a), g], M.obj)
            choices[a] = (S.obj, S.inj[0], m)
        X = extend_diagram(X, choices)
    return X


def random_fibrant_diagram(shape: CReedyStructure, rng: random.Random, lo: int = 0,
                           hi: int = 1, max_pieces: int = 2, acyclic: bool = False,
                           max_degree: int | None = None) -> Diagram:
    """Dual: X_a = M_a X (+) C, latching map = canonical map plus random part."""
    X = Diagram(shape, {}, {}, "Y")
    top = shape.reedy.max_degree() if max_degree is None else max_degree
    for n in range(top + 1):
        choices = {}
        for a in [o for o in shape.objects_by_degree() if shape.deg(o) == n]:
            L, M = latching(X, a), matching(X, a)
            C = _fresh(rng, lo, hi, acyclic, max_pieces)
            S = direct_sum([M.obj, C])
            g = random_chain_map(L.obj, C, rng)
            ell = map_to_sum(S, [canonical_LM(X, a), g], L.obj)
            choices[a] = (S.obj, ell, S.proj[0])
        X = extend_diagram(X, choices)
    return X


def random_reedy_cofibration(A: Diagram, rng: random.Random, trivial: bool = False,
                             lo: int = 0, hi: int = 1, max_pieces: int = 2):
    """B and a Reedy cofibration i: A -> B with B_a = (A_a u_{L_a A} L_a B) (+) C;
    C acyclic when ``trivial``."""
    shape = A.shape
    B = Diagram(shape, {}, {}, "B")
    icomps: dict = {}
    for n in range(shape.reedy.max_degree() + 1):
        objs = [o for o in shape.objects_by_degree() if shape.deg(o) == n and o in A.at]
        if not objs:
            continue
        choices, pos = {}, {}
        for a in objs:
            LA, LB = latching(A, a), latching(B, a)
            MA, MB = matching(A, a), matching(B, a)
            Li = induced_latching(LA, LB, A, B, icomps)
            Mi = induced_matching(MA, MB, A, B, icomps)
            po = pushout(LA.to_X, Li)
            C = _fresh(rng, lo, hi, trivial, max_pieces)
            S = direct_sum([po.obj, C])
            m_po = po.induced(Mi @ MA.from_X, canonical_LM(B, a))
            m = map_from_sum(S, [m_po, random_chain_map(C, MB.obj, rng)], MB.obj)
            ell = S.inj[0] @ po.right
            choices[a] = (S.obj, ell, m)
            pos[a] = S.inj[0] @ po.left
        B = extend_diagram(B, choices)
        icomps.update(pos)
    return B, DiagramMap(A, B, icomps)


def random_reedy_fibration(Y: Diagram, rng: random.Random, trivial: bool = False,
                           lo: int = 0, hi: int = 1, max_pieces: int = 2):
    """X and a Reedy fibration p: X -> Y with X_a = (Y_a x_{M_a Y} M_a X) (+) C."""
    shape = Y.shape
    X = Diagram(shape, {}, {}, "X")
    pcomps: dict = {}
    for n in range(shape.reedy.max_degree() + 1):
        objs = [o for o in shape.objects_by_degree() if shape.deg(o) == n and o in Y.at]
        if not objs:
            continue
        choices, pos = {}, {}
        for a in objs:
            LX, LY = latching(X, a), latching(Y, a)
            MX, MY = matching(X, a), matching(Y, a)
            Lp = induced_latching(LX, LY, X, Y, pcomps)
            Mp = induced_matching(MX, MY, X, Y, pcomps)
            pb = pullback(MY.from_X, Mp)
            C = _fresh(rng, lo, hi, trivial, max_pieces)
            S = direct_sum([pb.obj, C])
            ell_pb = pb.induced(LY.to_X @ Lp, canonical_LM(X, a))
            ell = map_to_sum(S, [ell_pb, random_chain_map(LX.obj, C, rng)], LX.obj)
            m = pb.right @ S.proj[0]
            choices[a] = (S.obj, ell, m)
            pos[a] = pb.left @ S.proj[0]
        X = extend_diagram(X, choices)
        pcomps.update(pos)
    return X, DiagramMap(X, Y, pcomps)
