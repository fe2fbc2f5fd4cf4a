"""Bounded chain complexes of finite-dimensional rational vector spaces.

This is the closed symmetric monoidal model category used both as the
enriching base and as the target of diagrams.  Cofibrations are degreewise
injections, fibrations degreewise surjections, weak equivalences
quasi-isomorphisms.  Signs follow the Koszul rule
``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import (ONE, ZERO, Matrix, Subspace, block_diag, column_space, hstack,
                     inverse, is_injective, is_surjective, kernel, q, rank,
                     solve, vstack)


class ShapeError(ValueError):
    pass


class NotCommutingError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Complex concentrated in degrees ``lo..hi``.

    ``d[n]`` is the differential ``X_n -> X_{n-1}`` (shape dims[n-1] x dims[n]);
    missing entries are zero.
    """

    lo: int
    hi: int
    dims: dict
    d: dict = field(default_factory=dict)

    def __post_init__(self):
        for n, m in self.d.items():
            if m.shape != (self.dim(n - 1), self.dim(n)):
                raise ShapeError(f"differential d_{n} has shape {m.shape}, "
                                 f"expected {(self.dim(n - 1), self.dim(n))}")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def diff(self, n: int) -> Matrix:
        m = self.d.get(n)
        if m is None:
            return Matrix.zeros(self.dim(n - 1), self.dim(n))
        return m

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def dim_vector(self) -> dict:
        return {n: self.dim(n) for n in self.degrees() if self.dim(n)}

    def check(self) -> list[str]:
        """Violations of d o d = 0."""
        bad = []
        for n in range(self.lo + 1, self.hi + 1):
            if not (self.diff(n - 1) @ self.diff(n)).is_zero():
                bad.append(f"d_{n - 1} d_{n} != 0")
        return bad

    def same_as(self, other: "ChainComplex") -> bool:
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return all(self.dim(n) == other.dim(n) and self.diff(n) == other.diff(n)
                   for n in range(lo, hi + 1))

    def __repr__(self):
        return f"ChainComplex(dims={self.dim_vector()})"


def make_complex(dims: dict, d: dict | None = None) -> ChainComplex:
    """Build a complex from a dims dict, trimming support to nonzero degrees."""
    nz = [n for n, k in dims.items() if k]
    if not nz:
        return zero_complex()
    lo, hi = min(nz), max(nz)
    dd = {}
    for n, m in (d or {}).items():
        if lo < n <= hi and not m.is_zero():
            dd[n] = m
    return ChainComplex(lo, hi, {n: dims.get(n, 0) for n in range(lo, hi + 1)}, dd)


def zero_complex() -> ChainComplex:
    return ChainComplex(0, 0, {0: 0}, {})


def unit() -> ChainComplex:
    return ChainComplex(0, 0, {0: 1}, {})


def sphere(n: int, k: int = 1) -> ChainComplex:
    """S^n: Q^k in degree n."""
    return ChainComplex(n, n, {n: k}, {})


def disk(n: int) -> ChainComplex:
    """D^n: Q in degrees n and n-1 with identity differential."""
    return ChainComplex(n - 1, n, {n - 1: 1, n: 1}, {n: Matrix.identity(1)})


def shift(X: ChainComplex, k: int) -> ChainComplex:
    """X[k]_n = X_{n-k}; differential sign (-1)^k."""
    s = -1 if k % 2 else 1
    return ChainComplex(X.lo + k, X.hi + k, {n + k: m for n, m in X.dims.items()},
                        {n + k: m.scale(s) for n, m in X.d.items()})


@dataclass(frozen=True, eq=False)
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        for n, m in self.comps.items():
            if m.shape != (self.target.dim(n), self.source.dim(n)):
                raise ShapeError(f"component {n} has shape {m.shape}, expected "
                                 f"{(self.target.dim(n), self.source.dim(n))}")

    def at(self, n: int) -> Matrix:
        m = self.comps.get(n)
        if m is None:
            return Matrix.zeros(self.target.dim(n), self.source.dim(n))
        return m

    def degrees(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def check(self) -> list[str]:
        bad = []
        X, Y = self.source, self.target
        for n in range(min(X.lo, Y.lo), max(X.hi, Y.hi) + 2):
            if not (Y.diff(n) @ self.at(n) == self.at(n - 1) @ X.diff(n)):
                bad.append(f"d f != f d in degree {n}")
        return bad

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composite self o other."""
        if other.target.dims != self.source.dims and not _dims_match(other.target, self.source):
            raise ShapeError("composing maps with mismatched middle complex")
        comps = {}
        for n in other.source.degrees():
            m = self.at(n) @ other.at(n)
            if not m.is_zero():
                comps[n] = m
        return ChainMap(other.source, self.target, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        comps = {}
        for n in set(self.comps) | set(other.comps):
            m = self.at(n) + other.at(n)
            if not m.is_zero():
                comps[n] = m
        return ChainMap(self.source, self.target, comps)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -m for n, m in self.comps.items()})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {n: m.scale(c) for n, m in self.comps.items() if q(c)})

    def equals(self, other: "ChainMap") -> bool:
        degs = set(self.comps) | set(other.comps)
        return all(self.at(n) == other.at(n) for n in degs)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps.values())


def _dims_match(X: ChainComplex, Y: ChainComplex) -> bool:
    return X.dim_vector() == Y.dim_vector()


def identity(X: ChainComplex) -> ChainMap:
    return ChainMap(X, X, {n: Matrix.identity(X.dim(n)) for n in X.degrees() if X.dim(n)})


def zero_map(X: ChainComplex, Y: ChainComplex) -> ChainMap:
    return ChainMap(X, Y, {})


# ---------------------------------------------------------------------------
# Monoidal structure
# ---------------------------------------------------------------------------

class TensorBasis:
    """Basis bookkeeping for an n-fold tensor product.

    In total degree ``n`` the basis is ordered by the degree tuple
    (lexicographically), then by the index tuple (lexicographically).
    """

    def __init__(self, factors: Sequence[ChainComplex]):
        self.factors = list(factors)
        self.blocks: dict[int, list[tuple[tuple, int]]] = {}
        self.offset: dict[tuple, int] = {}
        self.dims: dict[int, int] = {}
        ranges = [[n for n in X.degrees() if X.dim(n)] for X in self.factors]
        for degs in itertools.product(*ranges):
            n = sum(degs)
            size = 1
            for X, k in zip(self.factors, degs):
                size *= X.dim(k)
            self.blocks.setdefault(n, []).append((degs, size))
        for n in sorted(self.blocks):
            self.blocks[n].sort()
            off = 0
            for degs, size in self.blocks[n]:
                self.offset[degs] = off
                off += size
            self.dims[n] = off

    def index(self, degs: tuple, idxs: tuple) -> int:
        off = self.offset[degs]
        k = 0
        for X, dg, i in zip(self.factors, degs, idxs):
            k = k * X.dim(dg) + i
        return off + k

    def elements(self, n: int):
        """Yield ``(position, degs, idxs)`` for the basis in degree n."""
        pos = 0
        for degs, _ in self.blocks.get(n, []):
            for idxs in itertools.product(*[range(X.dim(dg)) for X, dg in zip(self.factors, degs)]):
                yield pos, degs, idxs
                pos += 1


_TENSOR_CACHE: dict = {}


def tensor_many(factors: Sequence[ChainComplex]) -> tuple[ChainComplex, TensorBasis]:
    # complexes are immutable; the cache holds the factors so ids stay unique
    key = tuple(id(X) for X in factors)
    hit = _TENSOR_CACHE.get(key)
    if hit is not None:
        return hit[1]
    out = _tensor_many(factors)
    _TENSOR_CACHE[key] = (tuple(factors), out)
    return out


def _tensor_many(factors: Sequence[ChainComplex]) -> tuple[ChainComplex, TensorBasis]:
    tb = TensorBasis(factors)
    d = {}
    for n in tb.dims:
        if n - 1 not in tb.dims:
            continue
        entries = []
        for pos, degs, idxs in tb.elements(n):
            sign = 1
            for t, X in enumerate(factors):
                dn = X.d.get(degs[t])
                if dn is not None:
                    col = dn.col(idxs[t])
                    if col:
                        ndegs = degs[:t] + (degs[t] - 1,) + degs[t + 1:]
                        for i, x in col.items():
                            nidx = idxs[:t] + (i,) + idxs[t + 1:]
                            entries.append((tb.index(ndegs, nidx), pos, x if sign > 0 else -x))
                if degs[t] % 2:
                    sign = -sign
        if entries:
            d[n] = Matrix.from_entries(tb.dims[n - 1], tb.dims[n], entries)
    C = make_complex(tb.dims, d) if tb.dims else zero_complex()
    return C, tb


def tensor(X: ChainComplex, Y: ChainComplex) -> ChainComplex:
    return tensor_many([X, Y])[0]


def tensor_maps(maps: Sequence[ChainMap]) -> ChainMap:
    """f_1 (x) ... (x) f_k for degree-zero chain maps (no signs needed)."""
    S, sb = tensor_many([f.source for f in maps])
    T, tb = tensor_many([f.target for f in maps])
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, degs, idxs in sb.elements(n):
            terms = [(idxs_i_map) for idxs_i_map in
                     (maps[t].at(degs[t]).col(idxs[t]) for t in range(len(maps)))]
            if any(not c for c in terms):
                continue
            for combo in itertools.product(*[list(c.items()) for c in terms]):
                x = ONE
                for _, v in combo:
                    x *= v
                entries.append((tb.index(degs, tuple(i for i, _ in combo)), pos, x))
        if entries:
            comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


def braiding(X: ChainComplex, Y: ChainComplex) -> ChainMap:
    """X (x) Y -> Y (x) X, x (x) y |-> (-1)^{|x||y|} y (x) x."""
    S, sb = tensor_many([X, Y])
    T, tb = tensor_many([Y, X])
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, (p, r), (i, j) in sb.elements(n):
            entries.append((tb.index((r, p), (j, i)), pos, -ONE if (p * r) % 2 else ONE))
        comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


def permute_factors(factors: Sequence[ChainComplex], perm: Sequence[int]) -> ChainMap:
    """Flat tensor of ``factors`` -> flat tensor with factor t equal to
    factors[perm[t]], with the Koszul sign of the reordering."""
    S, sb = tensor_many(factors)
    T, tb = tensor_many([factors[p] for p in perm])
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, degs, idxs in sb.elements(n):
            odd = 0
            for a in range(len(perm)):
                if degs[perm[a]] % 2:
                    for b in range(a + 1, len(perm)):
                        if perm[b] < perm[a] and degs[perm[b]] % 2:
                            odd += 1
            entries.append((tb.index(tuple(degs[p] for p in perm), tuple(idxs[p] for p in perm)),
                            pos, -ONE if odd % 2 else ONE))
        comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


def regroup(factors: Sequence[ChainComplex], split: Sequence[int]) -> ChainMap:
    """Canonical iso from the flat tensor of ``factors`` to the tensor of
    grouped tensors, groups having the sizes in ``split``.  No signs."""
    S, sb = tensor_many(factors)
    groups = []
    k = 0
    for s in split:
        groups.append(list(factors[k:k + s]))
        k += s
    inner = [tensor_many(g) for g in groups]
    T, tb = tensor_many([c for c, _ in inner])
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, degs, idxs in sb.elements(n):
            k = 0
            gdeg, gidx = [], []
            for (c, b), s in zip(inner, split):
                dd, ii = degs[k:k + s], idxs[k:k + s]
                gdeg.append(sum(dd))
                gidx.append(b.index(dd, ii) if s else 0)
                k += s
            entries.append((tb.index(tuple(gdeg), tuple(gidx)), pos, ONE))
        comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


def invert_iso(f: ChainMap) -> ChainMap:
    comps = {n: inverse(m) for n, m in f.comps.items()}
    return ChainMap(f.target, f.source, comps)


def left_unitor(X: ChainComplex) -> ChainMap:
    """I (x) X -> X."""
    S = tensor(unit(), X)
    return ChainMap(S, X, {n: Matrix.identity(X.dim(n)) for n in X.degrees() if X.dim(n)})


class HomBasis:
    """Basis of F(K, X)_n = prod_m Hom(K_m, X_{m+n}): blocks by m ascending,
    each block row-major over (row of X_{m+n}, column of K_m)."""

    def __init__(self, K: ChainComplex, X: ChainComplex):
        self.K, self.X = K, X
        self.offset: dict[tuple[int, int], int] = {}
        self.dims: dict[int, int] = {}
        for n in range(X.lo - K.hi, X.hi - K.lo + 1):
            off = 0
            for m in K.degrees():
                a, b = K.dim(m), X.dim(m + n)
                if a and b:
                    self.offset[(n, m)] = off
                    off += a * b
            if off:
                self.dims[n] = off

    def index(self, n: int, m: int, row: int, col: int) -> int:
        return self.offset[(n, m)] + row * self.K.dim(m) + col

    def elements(self, n: int):
        for m in self.K.degrees():
            if (n, m) not in self.offset:
                continue
            off = self.offset[(n, m)]
            a = self.K.dim(m)
            for r in range(self.X.dim(m + n)):
                for c in range(a):
                    yield off + r * a + c, m, r, c


def internal_hom_basis(K: ChainComplex, X: ChainComplex) -> tuple[ChainComplex, HomBasis]:
    hb = HomBasis(K, X)
    d = {}
    for n in hb.dims:
        if n - 1 not in hb.dims:
            continue
        sgn = -ONE if n % 2 else ONE
        entries = []
        for pos, m, r, c in hb.elements(n):
            # D f = d_X f - (-1)^n f d_K on the elementary matrix E_{r,c} : K_m -> X_{m+n}
            dx = X.diff(m + n).col(r)
            for i, x in dx.items():
                entries.append((hb.index(n - 1, m, i, c), pos, x))
            # f d_K : K_{m+1} -> X_{m+n}; entry (r, j) gets d_K[c, j]
            if (n - 1, m + 1) in hb.offset:
                dk = K.diff(m + 1)
                for j, col in dk.cols.items():
                    x = col.get(c)
                    if x:
                        entries.append((hb.index(n - 1, m + 1, r, j), pos, -sgn * x))
        if entries:
            d[n] = Matrix.from_entries(hb.dims[n - 1], hb.dims[n], entries)
    C = make_complex(hb.dims, d) if hb.dims else zero_complex()
    return C, hb


def internal_hom(K: ChainComplex, X: ChainComplex) -> ChainComplex:
    return internal_hom_basis(K, X)[0]


def curry(phi: ChainMap, K: ChainComplex, A: ChainComplex) -> ChainMap:
    """Hom(K (x) A, X) -> Hom(A, F(K, X)):  a |-> (k |-> (-1)^{|k||a|} phi(k (x) a))."""
    X = phi.target
    S, sb = tensor_many([K, A])
    H, hb = internal_hom_basis(K, X)
    comps = {}
    for p in A.degrees():
        entries = []
        for a in range(A.dim(p)):
            for m in K.degrees():
                for k in range(K.dim(m)):
                    col = phi.at(m + p).col(sb.index((m, p), (k, a)))
                    sgn = -1 if (m * p) % 2 else 1
                    for r, x in col.items():
                        entries.append((hb.index(p, m, r, k), a, x if sgn > 0 else -x))
        if entries:
            comps[p] = Matrix.from_entries(H.dim(p), A.dim(p), entries)
    return ChainMap(A, H, comps)


def uncurry(psi: ChainMap, K: ChainComplex, X: ChainComplex) -> ChainMap:
    """Inverse of :func:`curry`."""
    A = psi.source
    S, sb = tensor_many([K, A])
    H, hb = internal_hom_basis(K, X)
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, (m, p), (k, a) in sb.elements(n):
            col = psi.at(p).col(a)
            sgn = -1 if (m * p) % 2 else 1
            for r in range(X.dim(m + p)):
                if (p, m) in hb.offset:
                    x = col.get(hb.index(p, m, r, k))
                    if x:
                        entries.append((r, pos, x if sgn > 0 else -x))
        if entries:
            comps[n] = Matrix.from_entries(X.dim(n), S.dim(n), entries)
    return ChainMap(S, X, comps)


def hom_precompose(u: ChainMap, X: ChainComplex) -> ChainMap:
    """F(u, X): F(K, X) -> F(K', X), f |-> f o u, for u: K' -> K."""
    K2, K = u.source, u.target
    S, sb = internal_hom_basis(K, X)
    T, tb = internal_hom_basis(K2, X)
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, m, r, c in sb.elements(n):
            # E_{r,c} o u_m : row c of u_m
            um = u.at(m)
            for j, col in um.cols.items():
                x = col.get(c)
                if x and (n, m) in tb.offset:
                    entries.append((tb.index(n, m, r, j), pos, x))
        if entries:
            comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


def hom_postcompose(K: ChainComplex, v: ChainMap) -> ChainMap:
    """F(K, v): F(K, X) -> F(K, Y), f |-> v o f."""
    X, Y = v.source, v.target
    S, sb = internal_hom_basis(K, X)
    T, tb = internal_hom_basis(K, Y)
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, m, r, c in sb.elements(n):
            for i, x in v.at(m + n).col(r).items():
                entries.append((tb.index(n, m, i, c), pos, x))
        if entries:
            comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


# ---------------------------------------------------------------------------
# Limits and colimits
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Sum:
    """A biproduct with its injections and projections."""
    obj: ChainComplex
    inj: list
    proj: list


def direct_sum(Xs: Sequence[ChainComplex]) -> Sum:
    Xs = list(Xs)
    degs = sorted({n for X in Xs for n in X.degrees()})
    dims, d = {}, {}
    for n in degs:
        dims[n] = sum(X.dim(n) for X in Xs)
    for n in degs:
        if n - 1 in dims:
            d[n] = block_diag([X.diff(n) for X in Xs])
    S = make_complex(dims, d) if Xs else zero_complex()
    inj, proj = [], []
    offs = {n: 0 for n in degs}
    for X in Xs:
        ic, pc = {}, {}
        for n in degs:
            k, o = X.dim(n), offs[n]
            if k:
                ic[n] = Matrix(S.dim(n), k, {j: {o + j: ONE} for j in range(k)})
                pc[n] = Matrix(k, S.dim(n), {o + j: {j: ONE} for j in range(k)})
            offs[n] = o + k
        inj.append(ChainMap(X, S, ic))
        proj.append(ChainMap(S, X, pc))
    return Sum(S, inj, proj)


def product(Xs: Sequence[ChainComplex]) -> Sum:
    return direct_sum(Xs)


def map_from_sum(S: Sum, maps: Sequence[ChainMap], target: ChainComplex) -> ChainMap:
    """Copairing [f_1, ..., f_k]: (+) X_i -> target."""
    comps = {}
    for n in S.obj.degrees():
        blocks = [f.at(n) if f.source.dim(n) else Matrix.zeros(target.dim(n), 0) for f in maps]
        m = hstack([_resize_rows(b, target.dim(n)) for b in blocks], target.dim(n))
        if not m.is_zero():
            comps[n] = m
    return ChainMap(S.obj, target, comps)


def map_to_sum(S: Sum, maps: Sequence[ChainMap], source: ChainComplex) -> ChainMap:
    """Pairing (f_1, ..., f_k): source -> (+) X_i."""
    comps = {}
    for n in source.degrees():
        m = vstack([f.at(n) for f in maps], source.dim(n)) if maps else Matrix.zeros(0, source.dim(n))
        m = Matrix(S.obj.dim(n), source.dim(n), m.cols)
        if not m.is_zero():
            comps[n] = m
    return ChainMap(source, S.obj, comps)


def _resize_rows(m: Matrix, r: int) -> Matrix:
    return Matrix(r, m.ncols, m.cols)


@dataclass(frozen=True, eq=False)
class Kernel:
    obj: ChainComplex
    incl: ChainMap
    spaces: dict


def kernel_of(f: ChainMap) -> Kernel:
    """Kernel subcomplex; coordinates in the kernel are read at pivot rows."""
    X = f.source
    spaces = {n: kernel(f.at(n)) for n in X.degrees()}
    return _subcomplex(X, spaces)


def _subcomplex(X: ChainComplex, spaces: dict) -> Kernel:
    dims = {n: s.dim for n, s in spaces.items()}
    d = {}
    for n in spaces:
        if n - 1 in spaces and dims[n] and dims[n - 1]:
            image = X.diff(n) @ spaces[n].basis
            d[n] = spaces[n - 1].coords_matrix(image)
    K = make_complex(dims, d)
    incl = ChainMap(K, X, {n: s.basis for n, s in spaces.items() if s.dim and K.dim(n)})
    return Kernel(K, incl, spaces)


def image_of(f: ChainMap) -> Kernel:
    """Image subcomplex of the target, with its inclusion."""
    Y = f.target
    spaces = {n: column_space(f.at(n)) for n in Y.degrees()}
    return _subcomplex(Y, spaces)


def subcomplex_from_spaces(X: ChainComplex, spaces: dict) -> Kernel:
    full = {n: spaces.get(n, Subspace(X.dim(n), [], Matrix.zeros(X.dim(n), 0)))
            for n in X.degrees()}
    return _subcomplex(X, full)


def corestrict(f: ChainMap, sub: Kernel) -> ChainMap:
    """Factor f through a subcomplex containing its image."""
    comps = {}
    for n in f.source.degrees():
        if sub.obj.dim(n) and f.source.dim(n):
            comps[n] = sub.spaces[n].coords_matrix(f.at(n))
    return ChainMap(f.source, sub.obj, comps)


@dataclass(frozen=True, eq=False)
class Quotient:
    obj: ChainComplex
    proj: ChainMap
    section: dict   # degreewise linear (not chain) sections


def cokernel_of_spaces(Y: ChainComplex, spaces: dict) -> Quotient:
    """Quotient of Y by a subcomplex given as degreewise subspaces."""
    Qs, Ss, dims = {}, {}, {}
    for n in Y.degrees():
        sp = spaces.get(n) or Subspace(Y.dim(n), [], Matrix.zeros(Y.dim(n), 0))
        Qn, Sn = sp.quotient_projection()
        Qs[n], Ss[n], dims[n] = Qn, Sn, Qn.nrows
    d = {}
    for n in Y.degrees():
        if n - 1 in Qs and dims[n] and dims[n - 1]:
            d[n] = Qs[n - 1] @ Y.diff(n) @ Ss[n]
    C = make_complex(dims, d)
    proj = ChainMap(Y, C, {n: Qs[n] for n in Y.degrees() if C.dim(n) and Y.dim(n)})
    return Quotient(C, proj, Ss)


def cokernel_of(f: ChainMap) -> Quotient:
    Y = f.target
    return cokernel_of_spaces(Y, {n: column_space(f.at(n)) for n in Y.degrees()})


def descend(q: Quotient, g: ChainMap) -> ChainMap:
    """The map out of a quotient induced by g (which must vanish on the
    subcomplex): g o section."""
    C = q.obj
    comps = {}
    for n in C.degrees():
        if C.dim(n) and g.target.dim(n):
            m = g.at(n) @ q.section[n]
            if not m.is_zero():
                comps[n] = m
    return ChainMap(C, g.target, comps)


def lift_into(k: Kernel, g: ChainMap) -> ChainMap:
    """The map into a subcomplex induced by g (whose image must lie in it)."""
    return corestrict(g, k)


def equalizer(f: ChainMap, g: ChainMap) -> Kernel:
    return kernel_of(f - g)


def coequalizer(f: ChainMap, g: ChainMap) -> Quotient:
    return cokernel_of(f - g)


@dataclass(frozen=True, eq=False)
class Pushout:
    obj: ChainComplex
    left: ChainMap     # X -> P
    right: ChainMap    # Y -> P
    quotient: Quotient
    summ: Sum

    def induced(self, u: ChainMap, v: ChainMap) -> ChainMap:
        return descend(self.quotient, map_from_sum(self.summ, [u, v], u.target))


def pushout(f: ChainMap, g: ChainMap) -> Pushout:
    """Pushout of X <-f- Z -g-> Y."""
    if not _dims_match(f.source, g.source):
        raise ShapeError("pushout legs have different sources")
    S = direct_sum([f.target, g.target])
    rel = map_to_sum(S, [f, -g], f.source)
    Q = cokernel_of(rel)
    return Pushout(Q.obj, Q.proj @ S.inj[0], Q.proj @ S.inj[1], Q, S)


@dataclass(frozen=True, eq=False)
class Pullback:
    obj: ChainComplex
    left: ChainMap     # P -> X
    right: ChainMap    # P -> Y
    kernel: Kernel
    summ: Sum

    def induced(self, u: ChainMap, v: ChainMap) -> ChainMap:
        return lift_into(self.kernel, map_to_sum(self.summ, [u, v], u.source))


def pullback(f: ChainMap, g: ChainMap) -> Pullback:
    """Pullback of X -f-> Z <-g- Y."""
    if not _dims_match(f.target, g.target):
        raise ShapeError("pullback legs have different targets")
    S = direct_sum([f.source, g.source])
    rel = map_from_sum(S, [f, -g], f.target)
    K = kernel_of(rel)
    return Pullback(K.obj, S.proj[0] @ K.incl, S.proj[1] @ K.incl, K, S)


# ---------------------------------------------------------------------------
# Homology and the model structure
# ---------------------------------------------------------------------------

def homology_ranks(X: ChainComplex) -> dict:
    ranks = {n: rank(X.diff(n)) for n in range(X.lo, X.hi + 2)}
    out = {}
    for n in X.degrees():
        h = X.dim(n) - ranks[n] - ranks[n + 1]
        if h:
            out[n] = h
    return out


def euler_characteristic(X: ChainComplex) -> int:
    return sum((-1) ** n * X.dim(n) for n in X.degrees())


def mapping_cone(f: ChainMap) -> ChainComplex:
    """cone_n = X_{n-1} (+) Y_n, d(x, y) = (-dx, dy - f x)."""
    X, Y = f.source, f.target
    lo, hi = min(X.lo + 1, Y.lo), max(X.hi + 1, Y.hi)
    dims, d = {}, {}
    for n in range(lo, hi + 1):
        dims[n] = X.dim(n - 1) + Y.dim(n)
    for n in range(lo + 1, hi + 1):
        top = hstack([-X.diff(n - 1), Matrix.zeros(X.dim(n - 2), Y.dim(n))], X.dim(n - 2))
        bot = hstack([-f.at(n - 1), Y.diff(n)], Y.dim(n - 1))
        d[n] = vstack([top, bot], dims[n])
    return make_complex(dims, d)


def is_cofibration(f: ChainMap) -> bool:
    return all(is_injective(f.at(n)) for n in f.source.degrees())


def is_fibration(f: ChainMap) -> bool:
    return all(is_surjective(f.at(n)) for n in f.target.degrees())


def is_weq(f: ChainMap) -> bool:
    return not homology_ranks(mapping_cone(f))


def is_iso(f: ChainMap) -> bool:
    return is_cofibration(f) and is_fibration(f)


@dataclass(frozen=True)
class ModelClass:
    is_cofibration: bool
    is_fibration: bool
    is_weak_equivalence: bool


def model_class(f: ChainMap) -> ModelClass:
    return ModelClass(is_cofibration(f), is_fibration(f), is_weq(f))


def cone_of_identity(X: ChainComplex) -> tuple[ChainComplex, ChainMap]:
    """Contractible C = cone(id_X) with the injection X -> C."""
    C = mapping_cone(identity(X))
    comps = {}
    for n in X.degrees():
        if X.dim(n):
            off = X.dim(n - 1)
            comps[n] = Matrix(C.dim(n), X.dim(n), {j: {off + j: ONE} for j in range(X.dim(n))})
    return C, ChainMap(X, C, comps)


def path_of(Y: ChainComplex) -> tuple[ChainComplex, ChainMap]:
    """Contractible E with E_n = Y_n (+) Y_{n+1}, d(y, z) = (dy, y - dz), and the
    surjection E -> Y."""
    lo, hi = Y.lo - 1, Y.hi
    dims, d = {}, {}
    for n in range(lo, hi + 1):
        dims[n] = Y.dim(n) + Y.dim(n + 1)
    for n in range(lo + 1, hi + 1):
        top = hstack([Y.diff(n), Matrix.zeros(Y.dim(n - 1), Y.dim(n + 1))], Y.dim(n - 1))
        bot = hstack([Matrix.identity(Y.dim(n)), -Y.diff(n + 1)], Y.dim(n))
        d[n] = vstack([top, bot], dims[n])
    E = make_complex(dims, d)
    comps = {}
    for n in Y.degrees():
        if Y.dim(n):
            comps[n] = Matrix(Y.dim(n), E.dim(n), {j: {j: ONE} for j in range(Y.dim(n))})
    return E, ChainMap(E, Y, comps)


def factor_cof_trivfib(f: ChainMap) -> tuple[ChainMap, ChainMap]:
    """f = p o i with i: X -> Y (+) cone(id_X) injective and p the projection."""
    X, Y = f.source, f.target
    C, j = cone_of_identity(X)
    S = direct_sum([Y, C])
    i = map_to_sum(S, [f, j], X)
    p = map_from_sum(S, [identity(Y), zero_map(C, Y)], Y)
    return i, p


def factor_trivcof_fib(f: ChainMap) -> tuple[ChainMap, ChainMap]:
    """f = q o j with j: X -> X (+) E(Y) the inclusion and q = (f, ev)."""
    X, Y = f.source, f.target
    E, ev = path_of(Y)
    S = direct_sum([X, E])
    j = map_to_sum(S, [identity(X), zero_map(X, E)], X)
    qm = map_from_sum(S, [f, ev], Y)
    return j, qm


def pushout_product(i: ChainMap, j: ChainMap) -> ChainMap:
    """For i: A -> B and j: K -> L, the corner map
    L (x) A  u_{K (x) A}  K (x) B  ->  L (x) B."""
    A, B = i.source, i.target
    K, L = j.source, j.target
    jA = tensor_maps([j, identity(A)])      # K(x)A -> L(x)A
    Ki = tensor_maps([identity(K), i])      # K(x)A -> K(x)B
    P = pushout(jA, Ki)
    Li = tensor_maps([identity(L), i])      # L(x)A -> L(x)B
    jB = tensor_maps([j, identity(B)])      # K(x)B -> L(x)B
    return P.induced(Li, jB)


def compose_all(*maps: ChainMap) -> ChainMap:
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = m @ out
    return out


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------

class ChainMapSystem:
    """Linear system for an unknown degree-zero chain map h: B -> X."""

    def __init__(self, B: ChainComplex, X: ChainComplex):
        self.B, self.X = B, X
        self.offset: dict[int, int] = {}
        off = 0
        for n in B.degrees():
            if B.dim(n) and X.dim(n):
                self.offset[n] = off
                off += X.dim(n) * B.dim(n)
        self.nvars = off
        self.rows: list[dict] = []
        self.rhs: list = []

    def var(self, n: int, r: int, c: int) -> int:
        return self.offset[n] + r * self.B.dim(n) + c

    def add(self, row: dict, rhs) -> None:
        row = {k: v for k, v in row.items() if v}
        if row or rhs:
            self.rows.append(row)
            self.rhs.append(q(rhs))

    def add_chain_map_conditions(self) -> None:
        B, X = self.B, self.X
        for n in range(B.lo, B.hi + 2):
            # d_X h_n - h_{n-1} d_B = 0 entrywise, shape X_{n-1} x B_n
            for r in range(X.dim(n - 1)):
                for c in range(B.dim(n)):
                    row: dict = {}
                    if n in self.offset:
                        for k, col in X.diff(n).cols.items():
                            x = col.get(r)
                            if x:
                                row[self.var(n, k, c)] = row.get(self.var(n, k, c), ZERO) + x
                    if n - 1 in self.offset:
                        for k, x in B.diff(n).col(c).items():
                            v = self.var(n - 1, r, k)
                            row[v] = row.get(v, ZERO) - x
                    self.add(row, 0)

    def add_precompose(self, i: ChainMap, top: ChainMap) -> None:
        """h o i = top, for i: A -> B and top: A -> X."""
        A = i.source
        for n in A.degrees():
            for r in range(self.X.dim(n)):
                for c in range(A.dim(n)):
                    row = {}
                    if n in self.offset:
                        for k, x in i.at(n).col(c).items():
                            row[self.var(n, r, k)] = x
                    self.add(row, top.at(n)[r, c])

    def add_postcompose(self, p: ChainMap, bottom: ChainMap) -> None:
        """p o h = bottom, for p: X -> Y and bottom: B -> Y."""
        Y = p.target
        for n in self.B.degrees():
            pn = p.at(n).rows_dict()
            for r in range(Y.dim(n)):
                for c in range(self.B.dim(n)):
                    row = {}
                    if n in self.offset:
                        for k, x in pn.get(r, {}).items():
                            row[self.var(n, k, c)] = x
                    self.add(row, bottom.at(n)[r, c])

    def solve(self) -> ChainMap | None:
        A = Matrix.from_columns(self.nvars, self.rows).T if self.rows else Matrix.zeros(0, self.nvars)
        b = {i: x for i, x in enumerate(self.rhs) if x}
        sol = solve(A, b) if self.rows else {}
        if sol is None:
            return None
        comps = {}
        for n, off in self.offset.items():
            k = self.B.dim(n)
            entries = [((v - off) // k, (v - off) % k, x) for v, x in sol.items()
                       if off <= v < off + self.X.dim(n) * k]
            if entries:
                comps[n] = Matrix.from_entries(self.X.dim(n), k, entries)
        return ChainMap(self.B, self.X, comps)


def solve_lift(i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap) -> ChainMap | None:
    """A diagonal h: B -> X with h i = top and p h = bottom, or None."""
    if not (p @ top).equals(bottom @ i):
        raise NotCommutingError("lifting square does not commute")
    sys_ = ChainMapSystem(i.target, p.source)
    sys_.add_chain_map_conditions()
    sys_.add_precompose(i, top)
    sys_.add_postcompose(p, bottom)
    return sys_.solve()


# ---------------------------------------------------------------------------
# Random instances (tests, demos, randomized checks)
# ---------------------------------------------------------------------------

def chain_maps_space(B: ChainComplex, X: ChainComplex) -> tuple[Subspace, ChainMapSystem]:
    sys_ = ChainMapSystem(B, X)
    sys_.add_chain_map_conditions()
    A = Matrix.from_columns(sys_.nvars, sys_.rows).T if sys_.rows else Matrix.zeros(0, sys_.nvars)
    return kernel(A), sys_


def random_chain_map(B: ChainComplex, X: ChainComplex, rng: random.Random,
                     values=(-1, 0, 1, 2)) -> ChainMap:
    space, sys_ = chain_maps_space(B, X)
    vec: dict = {}
    for t in range(space.dim):
        c = rng.choice(values)
        if c:
            for k, x in space.basis.col(t).items():
                vec[k] = vec.get(k, ZERO) + c * x
    comps = {}
    for n, off in sys_.offset.items():
        k = B.dim(n)
        entries = [((v - off) // k, (v - off) % k, x) for v, x in vec.items()
                   if x and off <= v < off + X.dim(n) * k]
        if entries:
            comps[n] = Matrix.from_entries(X.dim(n), k, entries)
    return ChainMap(B, X, comps)


def random_complex(rng: random.Random, lo: int = 0, hi: int = 2, max_pieces: int = 3,
                   scramble: bool = True) -> ChainComplex:
    """A random direct sum of spheres and disks in degrees lo..hi, with a
    random change of basis in each degree."""
    pieces = []
    for _ in range(rng.randint(1, max_pieces)):
        n = rng.randint(lo, hi)
        if n > lo and rng.random() < 0.4:
            pieces.append(disk(n))
        else:
            pieces.append(sphere(n))
    X = direct_sum(pieces).obj
    if not scramble:
        return X
    return scramble_basis(X, rng)


def scramble_basis(X: ChainComplex, rng: random.Random) -> ChainComplex:
    mats = {}
    for n in X.degrees():
        k = X.dim(n)
        while True:
            m = Matrix.from_rows([[rng.choice((-1, 0, 0, 1, 2)) for _ in range(k)] for _ in range(k)], k)
            if rank(m) == k:
                break
        mats[n] = m
    d = {n: mats[n - 1] @ X.diff(n) @ inverse(mats[n])
         for n in X.degrees() if n - 1 in mats and X.dim(n) and X.dim(n - 1)}
    return ChainComplex(X.lo, X.hi, dict(X.dims), {n: m for n, m in d.items() if not m.is_zero()})


def random_acyclic(rng: random.Random, lo: int = 0, hi: int = 2, max_pieces: int = 2,
                   scramble: bool = True) -> ChainComplex:
    """A random direct sum of disks inside degrees lo..hi (hi > lo)."""
    pieces = [disk(rng.randint(lo + 1, hi)) for _ in range(rng.randint(1, max_pieces))]
    X = direct_sum(pieces).obj
    return scramble_basis(X, rng) if scramble else X
