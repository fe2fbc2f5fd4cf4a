"""Spectral sequences of finite filtered complexes.

Pages are computed from an adapted basis: every stage F_p is spanned by
the first k_p(n) basis vectors in each degree n, and

    Z^r_p = {x in F_p : dx in F_{p-r}},
    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1}).

Entries are keyed (p, q) with total degree n = p + q.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .chainbase import (ChainComplex, ChainMap, homology_ranks, is_cofibration, kernel_of, make_complex,
                        zero_complex)
from .fincat import delta_op_iso
from .linalg import ONE, Echelon, Matrix, Subspace, inverse, kernel, rank
from .report import HypothesisError, ValidationReport


@dataclass(eq=False)
class FilteredComplex:
    ambient: ChainComplex
    stages: list         # inclusions F_p -> ambient, increasing

    @property
    def top(self) -> int:
        return len(self.stages) - 1

    def validate(self) -> ValidationReport:
        rep = ValidationReport("filtered complex")
        for p, s in enumerate(self.stages):
            if s.check():
                rep.add("chain_map", "stage inclusion is not a chain map", p)
            if not is_cofibration(s):
                rep.add("mono", "stage map is not injective", p)
            if p and not _contains(self.stages[p], self.stages[p - 1]):
                rep.add("increasing", "stages are not nested", p)
        if self.stages and any(rank(self.stages[-1].at(n)) != self.ambient.dim(n)
                               for n in self.ambient.degrees()):
            rep.add("exhaustive", "last stage is not everything")
        return rep


def _contains(big: ChainMap, small: ChainMap) -> bool:
    for n in small.source.degrees():
        if not small.source.dim(n):
            continue
        sp = Subspace.span(big.target.dim(n), [big.at(n).col(j) for j in range(big.source.dim(n))])
        if any(not sp.contains(small.at(n).col(j)) for j in range(small.source.dim(n))):
            return False
    return True


@dataclass
class SSPage:
    r: int
    entries: dict                        # (p, q) -> dim
    d: dict = field(default_factory=dict)  # (p, q) -> Matrix E_{p,q} -> E_{p-r, q+r-1}
    stable: bool = False

    def total(self, n: int) -> int:
        return sum(v for (p, q), v in self.entries.items() if p + q == n)

    def to_json(self) -> dict:
        from .linalg import q_str
        return {"r": self.r, "stable": self.stable,
                "entries": {f"{p},{q}": v for (p, q), v in sorted(self.entries.items())},
                "d": {f"{p},{q}": [[q_str(x) for x in row] for row in m.to_rows()]
                      for (p, q), m in sorted(self.d.items())}}


class _Adapted:
    """Ambient complex rewritten in a basis adapted to the filtration."""

    def __init__(self, F: FilteredComplex):
        X = F.ambient
        self.F = F
        self.k: dict = {}          # (p, n) -> dim F_p in degree n
        self.P: dict = {}          # n -> change of basis (new -> old coordinates)
        self.D: dict = {}          # n -> differential in adapted coordinates
        for n in X.degrees():
            e = Echelon()
            cols = []
            for p, s in enumerate(F.stages):
                for j in range(s.source.dim(n)):
                    v = s.at(n).col(j)
                    if e.insert(dict(v)) is None:
                        cols.append(v)
                self.k[(p, n)] = len(cols)
            self.P[n] = Matrix.from_columns(X.dim(n), cols)
        for n in X.degrees():
            if X.dim(n) and X.dim(n - 1):
                self.D[n] = inverse(self.P[n - 1]) @ X.diff(n) @ self.P[n]
            else:
                self.D[n] = Matrix.zeros(X.dim(n - 1), X.dim(n))

    def kp(self, p: int, n: int) -> int:
        if p < 0:
            return 0
        return self.k.get((min(p, self.F.top), n), 0)

    def Z(self, r: int, p: int, n: int) -> Subspace:
        """Z^r_p in degree n, as a subspace of the adapted degree-n coordinates."""
        k = self.kp(p, n)
        dim = self.F.ambient.dim(n)
        lo = self.kp(p - r, n - 1)
        D = self.D.get(n)
        if D is None or not k:
            return Subspace.span(dim, [{j: ONE} for j in range(k)])
        sub = D.select_cols(range(k)).select_rows(range(lo, D.nrows))
        ker = kernel(sub)
        return Subspace.span(dim, [ker.basis.col(j) for j in range(ker.dim)])

    def boundary_part(self, r: int, p: int, n: int) -> list:
        """d Z^{r-1}_{p+r-1} in degree n (vectors)."""
        if r - 1 < 0:
            return []
        src = self.Z(r - 1, p + r - 1, n + 1)
        D = self.D.get(n + 1)
        if D is None:
            return []
        return [D.apply(src.basis.col(j)) for j in range(src.dim)]


def _entry(ad: _Adapted, r: int, p: int, n: int):
    """(Z basis, quotient projection Q, section S) for E^r_{p, n-p}."""
    Z = ad.Z(r, p, n)
    den = []
    if r >= 1:
        Zm = ad.Z(r - 1, p - 1, n)
        den += [Zm.basis.col(j) for j in range(Zm.dim)]
        den += ad.boundary_part(r, p, n)
    else:
        # E^0_p = F_p / F_{p-1}
        k = ad.kp(p - 1, n)
        den += [{j: ONE} for j in range(k)]
    coords = [Z.coords(v) for v in den if v]
    W = Subspace.span(Z.dim, coords)
    Q, S = W.quotient_projection()
    return Z, Q, S


def spectral_sequence(F: FilteredComplex, r_max: int | None = None) -> list[SSPage]:
    """Pages E^0 .. E^{r_max}; by default until two pages past the filtration length."""
    ad = _Adapted(F)
    X = F.ambient
    top = F.top
    r_max = top + 2 if r_max is None else r_max
    pages = []
    for r in range(r_max + 1):
        data = {}
        for p in range(top + 1):
            for n in X.degrees():
                Z, Q, S = _entry(ad, r, p, n)
                if Q.nrows:
                    data[(p, n)] = (Z, Q, S)
        entries = {(p, n - p): v[1].nrows for (p, n), v in data.items()}
        d = {}
        for (p, n), (Z, Q, S) in data.items():
            tgt = data.get((p - r, n - 1))
            if tgt is None or n not in ad.D:
                continue
            Zt, Qt, _ = tgt
            cols = []
            for j in range(Q.nrows):
                x = Z.basis.apply(S.col(j))
                y = ad.D[n].apply(x)
                cols.append(Qt.apply(Zt.coords(y)))
            m = Matrix.from_columns(Qt.nrows, cols)
            if not m.is_zero():
                d[(p, n - p)] = m
        pages.append(SSPage(r, entries, d))
    for a, b in zip(pages, pages[1:]):
        a.stable = a.entries == b.entries and not a.d
    if pages:
        pages[-1].stable = not pages[-1].d
    return pages


def check_pages(pages: list[SSPage], F: FilteredComplex) -> ValidationReport:
    """E^{r+1} = H(E^r, d_r) by ranks, d_r d_r = 0, and convergence to H_*."""
    rep = ValidationReport("spectral sequence")
    for P in pages:
        for (p, q), m in P.d.items():
            nxt = P.d.get((p - P.r, q + P.r - 1))
            if nxt is not None and not (nxt @ m).is_zero():
                rep.add("d_squared", "d_r o d_r != 0", P.r, p, q)
    for P, Pn in zip(pages, pages[1:]):
        keys = set(P.entries) | set(Pn.entries)
        for (p, q) in keys:
            out = P.d.get((p, q))
            inc = P.d.get((p + P.r, q - P.r + 1))
            h = P.entries.get((p, q), 0) - (rank(out) if out else 0) - (rank(inc) if inc else 0)
            if h != Pn.entries.get((p, q), 0):
                rep.add("page_homology", "next page is not the homology", P.r, p, q)
            rep.count("entries")
    H = homology_ranks(F.ambient)
    last = pages[-1]
    for n in set(H) | {p + q for p, q in last.entries}:
        if last.total(n) != H.get(n, 0):
            rep.add("convergence", "E-infinity does not add up to homology", n)
    euler = [sum((-1) ** (p + q) * v for (p, q), v in P.entries.items()) for P in pages[1:]]
    if len(set(euler)) > 1:
        rep.add("euler", "Euler characteristic changes across pages")
    return rep


def einf(pages: list[SSPage]) -> dict:
    return dict(pages[-1].entries)


# ---------------------------------------------------------------------------
# Normalized complexes and the E^2 identification
# ---------------------------------------------------------------------------

def _homology_basis(X: ChainComplex, n: int):
    """(Z basis matrix, quotient projection onto H_n in Z-coordinates)."""
    Z = kernel(X.diff(n))
    B = X.diff(n + 1)
    bvecs = [Z.coords(B.col(j)) for j in range(B.ncols) if B.col(j)]
    W = Subspace.span(Z.dim, bvecs)
    Q, S = W.quotient_projection()
    return Z, Q, S


def homology_map(f: ChainMap, n: int, src=None, tgt=None) -> Matrix:
    Zs, _, Ss = src or _homology_basis(f.source, n)
    Zt, Qt, _ = tgt or _homology_basis(f.target, n)
    cols = []
    for j in range(Ss.ncols):
        x = Zs.basis.apply(Ss.col(j))
        cols.append(Qt.apply(Zt.coords(f.at(n).apply(x))))
    return Matrix.from_columns(Qt.nrows, cols)


def _vertex_action(X, f: int) -> ChainMap:
    """act_f restricted to (a vertex of C[f]) (x) X_a, as a map X_a -> X_b."""
    from .chainbase import tensor_many
    E, B = X.E, X.base
    a = B.dom(f)
    Cf = E.C(f)
    S, sb = tensor_many([Cf, X.at[a]])
    A = X.act[f]
    comps = {}
    for n in X.at[a].degrees():
        if not X.at[a].dim(n) or not X.at[B.cod(f)].dim(n):
            continue
        cols = [A.at(n).col(sb.index((0, n), (0, i))) for i in range(X.at[a].dim(n))]
        comps[n] = Matrix.from_columns(X.at[B.cod(f)].dim(n), cols)
    return ChainMap(X.at[a], X.at[B.cod(f)], comps)


def simplicial_structure(X) -> dict:
    """Faces and degeneracies of a diagram over an A_P shape with base
    isomorphic to Delta^op: {(kind, n, i): morphism id}."""
    A = X.base
    F = delta_op_iso(A)
    if F is None:
        raise HypothesisError(f"shape {A.name} is not isomorphic to Delta^op")
    inv = {v: k for k, v in F.morphism_map.items()}
    Dop = F.target
    out = {}
    degs = {o.id: o.degree for o in A.objects}
    byd = {d: o for o, d in degs.items()}
    top = max(degs.values())
    for n in range(1, top + 1):
        for i in range(n + 1):
            face = tuple(j for j in range(n + 1) if j != i)          # [n-1] -> [n]
            out[("d", n, i)] = inv[Dop.find(byd[n], byd[n - 1], face)]
        for i in range(n):
            deg = tuple(j if j <= i else j - 1 for j in range(n + 1))  # [n] -> [n-1]
            out[("s", n, i)] = inv[Dop.find(byd[n - 1], byd[n], deg)]
    out["objects"] = byd
    return out


def normalized_complex(X, q: int) -> ChainComplex:
    """N(H_q X): H_q(X_n) modulo degenerate images, d = sum (-1)^i d_i."""
    st = simplicial_structure(X)
    byd = st["objects"]
    top = max(byd)
    H = {n: _homology_basis(X.at[byd[n]], q) for n in range(top + 1)}
    quot = {}
    for n in range(top + 1):
        Hn = H[n][1].nrows
        vecs = []
        for i in range(n):
            m = homology_map(_vertex_action(X, st[("s", n, i)]), q, H[n - 1], H[n])
            vecs += [m.col(j) for j in range(m.ncols) if m.col(j)]
        W = Subspace.span(Hn, vecs)
        quot[n] = W.quotient_projection()
    dims = {n: quot[n][0].nrows for n in quot}
    d = {}
    for n in range(1, top + 1):
        tot = Matrix.zeros(H[n - 1][1].nrows, H[n][1].nrows)
        for i in range(n + 1):
            m = homology_map(_vertex_action(X, st[("d", n, i)]), q, H[n], H[n - 1])
            tot = tot + (m if i % 2 == 0 else m.scale(-1))
        Qn1, _ = quot[n - 1]
        _, Sn = quot[n]
        if dims[n] and dims[n - 1]:
            d[n] = Qn1 @ tot @ Sn
    return make_complex(dims, d)


def e2_identification(X, check_hypotheses: bool = True) -> ValidationReport:
    """E^2_{p,q} of the skeletal filtration of |X| against H_p(N H_q X)."""
    from .diagram import is_reedy_cofibrant
    from .weighted import skeletal_filtration
    if check_hypotheses and not is_reedy_cofibrant(X):
        raise HypothesisError("diagram is not Reedy cofibrant")
    F, C = skeletal_filtration(X)
    pages = spectral_sequence(F)
    rep = check_pages(pages, F)
    E2 = pages[2].entries if len(pages) > 2 else {}
    qs = sorted({n for a in X.at.values() for n in a.degrees()})
    expected = {}
    for q in qs:
        N = normalized_complex(X, q)
        for p, v in homology_ranks(N).items():
            if v:
                expected[(p, q)] = v
    for key in set(E2) | set(expected):
        if E2.get(key, 0) != expected.get(key, 0):
            rep.add("e2", "E^2 differs from homology of the normalized complex", *key)
        rep.count("e2_entries")
    rep.data = {"E2": {f"{p},{q}": v for (p, q), v in sorted(E2.items())},
                "normalized": {f"{p},{q}": v for (p, q), v in sorted(expected.items())},
                "Einf": {f"{p},{q}": v for (p, q), v in sorted(einf(pages).items())},
                "H": {str(n): v for n, v in sorted(homology_ranks(C.obj).items())}}
    return rep


def tot_filtration(Y) -> FilteredComplex:
    """Increasing reindexing G_k = F^{top-k} of the decreasing filtration
    F^p Tot = ker(Tot(Y) -> hom(sk_{p-1} K, Y))."""
    from .chainbase import hom_precompose, map_to_sum, direct_sum
    from .weighted import operadic_weight, tot, weight_skeleton
    K = operadic_weight(Y.shape)
    T = tot(Y)
    top = Y.shape.reedy.max_degree()
    stages = []
    for p in range(top, -1, -1):
        if p == 0:
            stages.append(kernel_of(ChainMap(T.obj, zero_complex(), {})).incl)
            continue
        sk = weight_skeleton(K, p - 1)
        objs = T.objects
        rows = [hom_precompose(sk.incl.comps[a], Y.at[a]) @ T.summ.proj[k] for k, a in enumerate(objs)]
        R = direct_sum([r.target for r in rows])
        stages.append(kernel_of(map_to_sum(R, rows, T.summ.obj) @ T.incl).incl)
    return FilteredComplex(T.obj, stages)


def tot_spectral_sequence(Y, check_hypotheses: bool = True):
    from .diagram import is_reedy_fibrant
    if check_hypotheses and not is_reedy_fibrant(Y):
        raise HypothesisError("diagram is not Reedy fibrant")
    F = tot_filtration(Y)
    pages = spectral_sequence(F)
    rep = check_pages(pages, F)
    top = F.top
    # stage k is F^{top-k}; report (p, q) with total degree q - p
    rep.data = {"Einf": {f"{top - k},{q + top}": v for (k, q), v in sorted(einf(pages).items())},
                "H": {str(n): v for n, v in sorted(homology_ranks(F.ambient).items())}}
    return pages, rep
