"""Weighted coends and ends, geometric realization and Tot.

A weight for the coend is a diagram over the opposite shape.  The
realization weights send the degree-n object of 01Delta to chains on the
associahedron K_{n+2}, and the degree-n object of 0DeltaC to chains on the
cyclohedron W_{n+1}; the operad acts by grafting of bracketings.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import cellgeom
from .chainbase import (ChainComplex, ChainMap, Quotient, Sum, braiding, coequalizer,
                        cokernel_of_spaces, descend, direct_sum, identity, image_of, is_cofibration,
                        is_weq, map_from_sum, permute_factors, pushout, regroup,
                        tensor_many, tensor_maps)
from .diagram import (Diagram, DiagramMap, HomObject, classify, constant_diagram, functor_hom_object,
                      is_reedy_cofibrant, is_reedy_fibrant, latching, validate_diagram)
from .enriched import CReedyStructure, opposite_enriched, ungroup
from .linalg import Subspace, column_space, rank
from .report import HypothesisError, ValidationReport


# ---------------------------------------------------------------------------
# Coends
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class Coend:
    obj: ChainComplex
    quot: Quotient
    summ: Sum            # (+)_a K_a (x) X_a
    objects: list


def _check_pair(K: Diagram, X: Diagram) -> None:
    if K.base.n_morphisms != X.base.n_morphisms or K.base.n_objects != X.base.n_objects:
        raise ValueError("weight and diagram live over different shapes")
    for m in X.base.morphisms:
        k = K.base.mor(m.id)
        if (k.dom, k.cod) != (m.cod, m.dom):
            raise ValueError("weight shape is not the opposite of the diagram shape")


def coend(K: Diagram, X: Diagram) -> Coend:
    """K (x)_A X: coequalizer of (+)_f K_b (x) C[f] (x) X_a => (+)_a K_a (x) X_a."""
    _check_pair(K, X)
    B, E = X.base, X.E
    objs = X.objects()
    T = direct_sum([tensor_many([K.at[a], X.at[a]])[0] for a in objs])
    idx = {a: k for k, a in enumerate(objs)}
    rel1, rel2 = [], []
    for f in X.morphisms():
        if B.is_identity(f):
            continue
        a, b = B.dom(f), B.cod(f)
        Kb, Cf, Xa = K.at[b], E.C(f), X.at[a]
        rel1.append(T.inj[idx[b]] @ tensor_maps([identity(Kb), X.act[f]]) @ regroup([Kb, Cf, Xa], [1, 2]))
        rel2.append(T.inj[idx[a]] @ tensor_maps([K.act[f] @ braiding(Kb, Cf), identity(Xa)])
                    @ regroup([Kb, Cf, Xa], [2, 1]))
    if rel1:
        S = direct_sum([m.source for m in rel1])
        Q = coequalizer(map_from_sum(S, rel1, T.obj), map_from_sum(S, rel2, T.obj))
    else:
        Q = cokernel_of_spaces(T.obj, {})
    return Coend(Q.obj, Q, T, objs)


def coend_map(K: Diagram, F: DiagramMap, CX: Coend | None = None, CY: Coend | None = None,
              phi: DiagramMap | None = None, K2: Diagram | None = None) -> ChainMap:
    """The map K (x)_A X -> K' (x)_A Y induced by F: X -> Y and, optionally,
    a weight map phi: K -> K'."""
    K2 = K if K2 is None else K2
    CX = CX or coend(K, F.source)
    CY = CY or coend(K2, F.target)
    blocks = []
    for k, a in enumerate(CX.objects):
        wk = phi.comps[a] if phi is not None else identity(K.at[a])
        blocks.append(CY.summ.inj[k] @ tensor_maps([wk, F.comps[a]]))
    return descend(CX.quot, CY.quot.proj @ map_from_sum(CX.summ, blocks, CY.summ.obj))


def coend_weight_map(phi: DiagramMap, X: Diagram, CX: Coend | None = None,
                     CY: Coend | None = None) -> ChainMap:
    ident = DiagramMap(X, X, {a: identity(X.at[a]) for a in X.at})
    return coend_map(phi.source, ident, CX, CY, phi=phi, K2=phi.target)


def end_hom(K: Diagram, Y: Diagram) -> HomObject:
    """hom_A(K, Y), the equalizer over the shape shared by K and Y."""
    if K.shape is not Y.shape:
        raise ValueError("weight and diagram must share their shape")
    return functor_hom_object(K, Y)


# ---------------------------------------------------------------------------
# The associahedra / cyclohedra weights
# ---------------------------------------------------------------------------

_OPS: dict = {}
_WEIGHTS: dict = {}


def weight_kind(A) -> str:
    name = A.name.removesuffix("^op")
    if name.startswith("01Delta"):
        return "associahedra"
    if name.startswith("0DeltaC"):
        return "cyclohedra"
    raise ValueError(f"no realization weight for shape {A.name}")


def op_shape(S: CReedyStructure) -> CReedyStructure:
    """The opposite C-Reedy structure, cached so repeated calls share it."""
    hit = _OPS.get(id(S))
    if hit is None:
        hit = (S, opposite_enriched(S.enriched, S.reedy)[1])
        _OPS[id(S)] = hit
    return hit[1]


def cell_poset(kind: str, degree: int) -> cellgeom.FacePoset:
    return cellgeom.associahedron(degree + 2) if kind == "associahedra" else cellgeom.cyclohedron(degree + 1)


def operadic_weight(Sop: CReedyStructure) -> Diagram:
    """The weight over an opposite A_K shape (A = 01Delta or 0DeltaC)."""
    hit = _WEIGHTS.get(id(Sop))
    if hit is not None:
        return hit[1]
    E, B = Sop.enriched, Sop.enriched.base
    kind = weight_kind(B)
    at = {o.id: cell_poset(kind, o.degree).chains() for o in B.objects}
    act = {}
    for h in B.morphisms:
        fibers = tuple(tuple(f) for f in h.label.fibers)
        Lf = [cellgeom.associahedron(len(f)).chains() for f in fibers]
        Kb = at[h.dom]
        k = len(Lf)
        if kind == "associahedra":
            g = cellgeom.gamma_map(len(fibers), tuple(len(f) for f in fibers))
        else:
            g = cellgeom.circle_gamma_map(len(fibers), fibers)
        m = g @ permute_factors(Lf + [Kb], [k] + list(range(k))) @ ungroup([Lf, [Kb]])
        act[h.id] = ChainMap(tensor_many([E.C(h.id), Kb])[0], at[h.cod], m.comps)
    W = Diagram(Sop, at, act, "K" if kind == "associahedra" else "W")
    _WEIGHTS[id(Sop)] = (Sop, W)
    return W


def realization_weight(S: CReedyStructure) -> Diagram:
    return operadic_weight(op_shape(S))


def realization(X: Diagram) -> Coend:
    """|X| = K (x)_{A_K} X (associahedra) or W (x)_{A_K} X (cyclohedra)."""
    return coend(realization_weight(X.shape), X)


def realization_map(F: DiagramMap) -> ChainMap:
    K = realization_weight(F.source.shape)
    return coend_map(K, F)


def tot(Y: Diagram) -> HomObject:
    """Tot(Y) = hom(K, Y) for Y over the opposite A_K shape."""
    return end_hom(operadic_weight(Y.shape), Y)


# ---------------------------------------------------------------------------
# Skeleta
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SubWeight:
    obj: Diagram
    incl: DiagramMap


def sub_diagram(K: Diagram, spaces: dict, name: str) -> SubWeight:
    """The sub-diagram on degreewise subspaces closed under the action."""
    from .chainbase import corestrict, subcomplex_from_spaces
    subs = {a: subcomplex_from_spaces(K.at[a], spaces[a]) for a in K.at}
    at = {a: s.obj for a, s in subs.items()}
    act = {}
    B, E = K.base, K.E
    for f in K.morphisms():
        a, b = B.dom(f), B.cod(f)
        m = K.act[f] @ tensor_maps([identity(E.C(f)), subs[a].incl])
        act[f] = corestrict(m, subs[b])
    S = Diagram(K.shape, at, act, name)
    return SubWeight(S, DiagramMap(S, K, {a: s.incl for a, s in subs.items()}))


def weight_skeleton(K: Diagram, n: int) -> SubWeight:
    """sk_n K: at each object the image of the action from objects of degree <= n."""
    B, sh = K.base, K.shape
    spaces = {}
    for a in K.at:
        if sh.deg(a) <= n:
            spaces[a] = {d: Subspace.whole(K.at[a].dim(d)) for d in K.at[a].degrees()}
            continue
        maps = [K.act[f] for f in B.hom_into(a) if sh.deg(B.dom(f)) <= n]
        if maps:
            img = image_of(map_from_sum(direct_sum([m.source for m in maps]), maps, K.at[a]))
            spaces[a] = img.spaces
        else:
            spaces[a] = {}
    return sub_diagram(K, spaces, f"sk{n}{K.name}")


def skeletal_filtration(X: Diagram, K: Diagram | None = None):
    """Stages sk_n K (x)_A X -> K (x)_A X, as a FilteredComplex of images.
    Raises if a stage map fails to be injective."""
    from .specseq import FilteredComplex
    K = realization_weight(X.shape) if K is None else K
    C = coend(K, X)
    top = X.shape.reedy.max_degree()
    stages = []
    for n in range(top + 1):
        sk = weight_skeleton(K, n)
        m = coend_weight_map(sk.incl, X, CY=C)
        if not is_cofibration(m):
            raise ValueError(f"skeletal stage {n} does not inject")
        stages.append(image_of(m))
    return FilteredComplex(C.obj, [s.incl for s in stages]), C


# ---------------------------------------------------------------------------
# Theorem-level checks
# ---------------------------------------------------------------------------

def weighted_pp_check(i: DiagramMap, j: DiagramMap, check_hypotheses: bool = True) -> ValidationReport:
    """Corner map L (x) A  u_{K (x) A}  K (x) B -> L (x) B for i: K -> L
    (weights) and j: A -> B (diagrams)."""
    rep = ValidationReport("weighted pushout-product")
    ci, cj = classify(i), classify(j)
    if check_hypotheses and not (ci["reedy_cof"] and cj["reedy_cof"]):
        raise HypothesisError("both maps must be Reedy cofibrations")
    K, L = i.source, i.target
    A, Bd = j.source, j.target
    KA, KB, LA, LB = coend(K, A), coend(K, Bd), coend(L, A), coend(L, Bd)
    iA = coend_weight_map(i, A, KA, LA)
    Kj = coend_map(K, j, KA, KB)
    po = pushout(iA, Kj)
    corner = po.induced(coend_map(L, j, LA, LB), coend_weight_map(i, Bd, KB, LB))
    mono, weq = is_cofibration(corner), is_weq(corner)
    trivial = ci["reedy_weq"] or cj["reedy_weq"]
    rep.data = {"mono": mono, "weq": weq, "trivial_input": trivial}
    if not mono:
        rep.add("cofibration", "corner map is not injective")
    if trivial and not weq:
        rep.add("weak_equivalence", "corner map is not a quasi-isomorphism")
    rep.count("corners")
    return rep


def check_constants(shape: CReedyStructure, Bc: ChainComplex, which: str = "cofibrant") -> ValidationReport:
    """Whether the constant diagram at Bc is Reedy cofibrant (fibrant) here."""
    rep = ValidationReport(f"constants {which}")
    X = constant_diagram(Bc, shape)
    v = validate_diagram(X)
    rep.extend(v)
    if not v.ok:
        return rep
    if which == "cofibrant":
        if not is_reedy_cofibrant(X):
            rep.add("not_cofibrant", "constant diagram is not Reedy cofibrant")
    elif which == "fibrant":
        if not is_reedy_fibrant(X):
            rep.add("not_fibrant", "constant diagram is not Reedy fibrant")
    else:
        raise ValueError("which must be 'cofibrant' or 'fibrant'")
    rep.count("objects", len(X.at))
    return rep


def latching_vs_boundary(Sop: CReedyStructure, a: int) -> dict:
    """Compare L_a of the realization weight with chains on the boundary of
    its cell: the latching map must inject with image the boundary chains."""
    K = operadic_weight(Sop)
    L = latching(K, a)
    P = cell_poset(weight_kind(Sop.enriched.base), Sop.deg(a))
    dP = cellgeom.boundary_subcomplex(P)
    inc = cellgeom.face_inclusion_chains(dP, P)
    from .chainbase import homology_ranks
    same_image = all(
        rank(L.to_X.at(d)) == rank(inc.at(d)) and
        column_space(L.to_X.at(d)).dim == column_space(_hstack_maps(L.to_X, inc, d)).dim
        for d in P.chains().degrees())
    return {"latching_ranks": homology_ranks(L.obj), "boundary_ranks": homology_ranks(dP.chains()),
            "mono": is_cofibration(L.to_X), "same_image": same_image,
            "iso_onto_boundary": is_cofibration(L.to_X) and same_image and is_iso_dims(L.obj, dP.chains())}


def _hstack_maps(f: ChainMap, g: ChainMap, d: int):
    from .linalg import hstack
    return hstack([f.at(d), g.at(d)], f.target.dim(d))


def is_iso_dims(X: ChainComplex, Y: ChainComplex) -> bool:
    return X.dim_vector() == Y.dim_vector()
