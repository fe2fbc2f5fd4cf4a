"""Face posets of associahedra and cyclohedra, and their chains.

A cell of the associahedron K_n is a set of compatible brackets on a word of
n letters: a bracket is a letter interval (l, r) with r > l that is not the
whole word, and two brackets are compatible when nested or disjoint.  Fewer
brackets means a bigger cell; the top cell has none and dimension n - 2.

A cell of the cyclohedron W_n is a set of brackets on n letters arranged in a
circle.  A bracket is (s, L): L consecutive letters starting at s, with
2 <= L <= n.  Two brackets are compatible when their gap sets (gap j sits
between letters j and j+1) are nested, or disjoint and not adjacent.

Chains are simplicial chains of the order complex: a k-simplex is a strictly
increasing chain of k+1 cells.  Monotone maps of posets induce chain maps
(degenerate images vanish), and the shuffle map gives the Eilenberg-Zilber
equivalence for products.
"""
from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .chainbase import ChainComplex, ChainMap, make_complex, tensor_many
from .linalg import ONE, Matrix

MAX_ASSOC = 7
MAX_CYCLO = 5


@dataclass(frozen=True)
class Cell:
    id: int
    dim: int
    label: str
    key: frozenset


class FacePoset:
    """Graded poset of cells with the face order ``a <= b``."""

    def __init__(self, name: str, cells: Sequence[Cell], less: dict, top: int | None = None):
        self.name = name
        self.cells = list(cells)
        self.above = {c.id: frozenset(less.get(c.id, ())) for c in self.cells}
        self.top = top
        self.by_key = {c.key: c.id for c in self.cells}
        self._chains: dict | None = None
        self._complex: ChainComplex | None = None

    def __len__(self):
        return len(self.cells)

    def lt(self, a: int, b: int) -> bool:
        return b in self.above[a]

    def le(self, a: int, b: int) -> bool:
        return a == b or b in self.above[a]

    def dims(self) -> dict:
        out: dict = {}
        for c in self.cells:
            out[c.dim] = out.get(c.dim, 0) + 1
        return out

    def f_vector(self) -> list:
        d = self.dims()
        return [d.get(k, 0) for k in range(max(d) + 1)] if d else []

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for c in self.cells:
            for b in self.above[c.id]:
                if self.cells[b].dim == c.dim + 1:
                    out.append((c.id, b))
        return sorted(out)

    def vertices(self) -> list[int]:
        return [c.id for c in self.cells if c.dim == 0]

    # -- order complex ----------------------------------------------------
    def simplices(self) -> dict:
        """Degree k -> sorted list of strictly increasing (k+1)-chains."""
        if self._chains is None:
            out: dict = {}
            order = sorted(self.cells, key=lambda c: (c.dim, c.id))

            def extend(chain):
                out.setdefault(len(chain) - 1, []).append(tuple(chain))
                for b in sorted(self.above[chain[-1]]):
                    chain.append(b)
                    extend(chain)
                    chain.pop()

            for c in order:
                extend([c.id])
            self._chains = {k: sorted(v) for k, v in out.items()}
            self._index = {k: {s: i for i, s in enumerate(v)} for k, v in self._chains.items()}
        return self._chains

    def simplex_index(self, s: tuple) -> int:
        self.simplices()
        return self._index[len(s) - 1][s]

    def chains(self) -> ChainComplex:
        if self._complex is None:
            S = self.simplices()
            dims = {k: len(v) for k, v in S.items()}
            d = {}
            for k in S:
                if k == 0:
                    continue
                entries = []
                idx = self._index[k - 1]
                for j, s in enumerate(S[k]):
                    for i in range(k + 1):
                        face = s[:i] + s[i + 1:]
                        entries.append((idx[face], j, ONE if i % 2 == 0 else -ONE))
                d[k] = Matrix.from_entries(dims[k - 1], dims[k], entries)
            self._complex = make_complex(dims, d)
        return self._complex

    def subposet(self, keep, name: str | None = None) -> "FacePoset":
        keep = sorted(set(keep))
        new = {o: i for i, o in enumerate(keep)}
        cells = [Cell(new[o], self.cells[o].dim, self.cells[o].label, self.cells[o].key) for o in keep]
        less = {new[o]: [new[b] for b in self.above[o] if b in new] for o in keep}
        top = new.get(self.top) if self.top is not None else None
        return FacePoset(name or self.name + "|sub", cells, less, top)

    def is_down_closed(self, keep) -> bool:
        keep = set(keep)
        for c in self.cells:
            if c.id not in keep and any(b in keep for b in self.above[c.id]):
                return False
        return True

    def __repr__(self):
        return f"FacePoset({self.name!r}, f={self.f_vector()})"


def _poset_from_keys(name: str, keys: list[frozenset], dim_of: Callable, label_of: Callable) -> FacePoset:
    """Cells ordered by (dim, label); a <= b iff key(a) contains key(b)."""
    recs = sorted(((dim_of(k), label_of(k), k) for k in keys), key=lambda t: (t[0], t[1]))
    cells = [Cell(i, d, lab, k) for i, (d, lab, k) in enumerate(recs)]
    less = {}
    for a in cells:
        less[a.id] = [b.id for b in cells if b.id != a.id and b.key < a.key]
    tops = [c.id for c in cells if not c.key]
    return FacePoset(name, cells, less, tops[0] if tops else None)


def _compatible_sets(brackets: list, compatible: Callable) -> list[frozenset]:
    out = []

    def rec(start, chosen):
        out.append(frozenset(chosen))
        for i in range(start, len(brackets)):
            b = brackets[i]
            if all(compatible(b, c) for c in chosen):
                chosen.append(b)
                rec(i + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out


# ---------------------------------------------------------------------------
# Associahedra
# ---------------------------------------------------------------------------

def _assoc_brackets(n: int) -> list:
    return [(l, r) for l in range(n) for r in range(l + 1, n) if (l, r) != (0, n - 1)]


def _lin_compatible(a, b) -> bool:
    (l1, r1), (l2, r2) = a, b
    return (l1 <= l2 and r2 <= r1) or (l2 <= l1 and r1 <= r2) or r1 < l2 or r2 < l1


def bracket_string(n: int, brackets) -> str:
    letters = string.ascii_lowercase
    opens: dict = {}
    closes: dict = {}
    for l, r in brackets:
        opens.setdefault(l, []).append(r - l)
        closes.setdefault(r, []).append(r - l)
    out = []
    for i in range(n):
        out.append("(" * len(opens.get(i, [])))
        out.append(letters[i] if n <= 26 else f"x{i}")
        out.append(")" * len(closes.get(i, [])))
    return "".join(out) if n else "-"


@lru_cache(maxsize=None)
def associahedron(n: int) -> FacePoset:
    """K_n for any n >= 0 (K_0, K_1, K_2 are points)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    keys = _compatible_sets(_assoc_brackets(n), _lin_compatible)
    top_dim = max(n - 2, 0)
    return _poset_from_keys(f"K{n}", keys, lambda k: top_dim - len(k),
                            lambda k: bracket_string(n, sorted(k)))


def gen_associahedron(n: int) -> FacePoset:
    if not 2 <= n <= MAX_ASSOC:
        raise ValueError(f"associahedron K_n needs 2 <= n <= {MAX_ASSOC}, got {n}")
    return associahedron(n)


# ---------------------------------------------------------------------------
# Cyclohedra
# ---------------------------------------------------------------------------

def _arc_gaps(n: int, b) -> frozenset:
    s, L = b
    return frozenset((s + t) % n for t in range(L - 1))


def _cyc_compatible(n: int):
    def comp(a, b):
        ga, gb = _arc_gaps(n, a), _arc_gaps(n, b)
        if ga <= gb or gb <= ga:
            return True
        if ga & gb:
            return False
        for g in ga:
            if (g + 1) % n in gb or (g - 1) % n in gb:
                return False
        return True
    return comp


def _cyc_brackets(n: int) -> list:
    return [(s, L) for L in range(2, n + 1) for s in range(n)] if n >= 2 else []


def cyclic_string(n: int, brackets) -> str:
    if not brackets:
        return f"W{n}"
    return f"W{n}" + "".join(f"[{s}+{L}]" for s, L in sorted(brackets, key=lambda b: (-b[1], b[0])))


@lru_cache(maxsize=None)
def cyclohedron(n: int) -> FacePoset:
    if n < 1:
        raise ValueError("cyclohedron needs n >= 1")
    keys = _compatible_sets(_cyc_brackets(n), _cyc_compatible(n))
    return _poset_from_keys(f"W{n}", keys, lambda k: n - 1 - len(k),
                            lambda k: cyclic_string(n, k))


def gen_cyclohedron(n: int) -> FacePoset:
    if not 1 <= n <= MAX_CYCLO:
        raise ValueError(f"cyclohedron W_n needs 1 <= n <= {MAX_CYCLO}, got {n}")
    return cyclohedron(n)


def boundary_subcomplex(P: FacePoset) -> FacePoset:
    if P.top is None:
        raise ValueError("face poset has no top cell")
    return P.subposet([c.id for c in P.cells if c.id != P.top], P.name + "_bd")


def point_poset() -> FacePoset:
    return FacePoset("pt", [Cell(0, 0, "pt", frozenset())], {}, 0)


# ---------------------------------------------------------------------------
# Chain maps from poset maps
# ---------------------------------------------------------------------------

def poset_map_chains(P: FacePoset, Q: FacePoset, f: Callable[[int], int]) -> ChainMap:
    """Chain map induced by a monotone map of posets (given on cell ids)."""
    SP = P.simplices()
    CP, CQ = P.chains(), Q.chains()
    comps = {}
    for k, simp in SP.items():
        entries = []
        for j, s in enumerate(simp):
            t = tuple(f(c) for c in s)
            if len(set(t)) == len(t):
                entries.append((Q.simplex_index(t), j, ONE))
        if entries:
            comps[k] = Matrix.from_entries(CQ.dim(k), CP.dim(k), entries)
    return ChainMap(CP, CQ, comps)


def face_inclusion_chains(sub: FacePoset, P: FacePoset) -> ChainMap:
    """Chains of a downward-closed subposet (matched by cell key) into P."""
    ids = []
    for c in sub.cells:
        if c.key not in P.by_key:
            raise ValueError(f"cell {c.label} of the subposet is not a cell of {P.name}")
        ids.append(P.by_key[c.key])
    if not P.is_down_closed(ids):
        raise ValueError("subposet is not downward closed")
    for a in sub.cells:
        for b in sub.cells:
            if sub.lt(a.id, b.id) != P.lt(ids[a.id], ids[b.id]):
                raise ValueError("subposet order differs from the ambient order")
    return poset_map_chains(sub, P, lambda c: ids[c])


@lru_cache(maxsize=None)
def _shuffles(lengths: tuple) -> list:
    """Multi-shuffles of steps: sequences with lengths[j] copies of j, with the
    Koszul sign of moving the steps into that order."""
    out = []
    total = sum(lengths)
    for seq in set(itertools.permutations([j for j, k in enumerate(lengths) for _ in range(k)])):
        inv = 0
        for a in range(total):
            for b in range(a + 1, total):
                if seq[a] > seq[b]:
                    inv += 1
        out.append((seq, -1 if inv % 2 else 1))
    return sorted(out)


def multi_ez(posets: Sequence[FacePoset], target: FacePoset,
             phi: Callable[[tuple], int]) -> ChainMap:
    """C(P_0) (x) ... (x) C(P_r) -> C(P_0 x ... x P_r) -> C(target), where the
    last map is induced by the monotone map phi on tuples of cell ids."""
    complexes = [P.chains() for P in posets]
    S, sb = tensor_many(complexes)
    T = target.chains()
    sims = [P.simplices() for P in posets]
    cache_phi: dict = {}
    comps = {}
    for n in sb.dims:
        entries = []
        for pos, degs, idxs in sb.elements(n):
            chains_ = [sims[t][degs[t]][idxs[t]] for t in range(len(posets))]
            for seq, sgn in _shuffles(tuple(degs)):
                cur = [0] * len(posets)
                pts = [tuple(c[0] for c in chains_)]
                for step in seq:
                    cur[step] += 1
                    pts.append(tuple(chains_[t][cur[t]] for t in range(len(posets))))
                img = []
                for p in pts:
                    v = cache_phi.get(p)
                    if v is None:
                        v = phi(p)
                        cache_phi[p] = v
                    img.append(v)
                if len(set(img)) != len(img):
                    continue
                entries.append((target.simplex_index(tuple(img)), pos, ONE if sgn > 0 else -ONE))
        if entries:
            comps[n] = Matrix.from_entries(T.dim(n), S.dim(n), entries)
    return ChainMap(S, T, comps)


def product_poset(P: FacePoset, Q: FacePoset) -> FacePoset:
    cells, less = [], {}
    idx = {}
    for a in P.cells:
        for b in Q.cells:
            idx[(a.id, b.id)] = len(cells)
            cells.append(Cell(len(cells), a.dim + b.dim, f"{a.label}x{b.label}",
                              frozenset([("L", a.key), ("R", b.key)])))
    for (a, b), i in idx.items():
        less[i] = [j for (c, e), j in idx.items() if j != i and P.le(a, c) and Q.le(b, e)]
    top = idx.get((P.top, Q.top)) if P.top is not None and Q.top is not None else None
    return FacePoset(f"{P.name}x{Q.name}", cells, less, top)


def chains_of_product(P: FacePoset, Q: FacePoset) -> tuple[FacePoset, ChainComplex]:
    PQ = product_poset(P, Q)
    return PQ, PQ.chains()


def ez_map(P: FacePoset, Q: FacePoset) -> ChainMap:
    PQ = product_poset(P, Q)
    nq = len(Q.cells)
    return multi_ez([P, Q], PQ, lambda t: t[0] * nq + t[1])


# ---------------------------------------------------------------------------
# Substitution of brackets (operad composition and module actions)
# ---------------------------------------------------------------------------

def _substitute_linear(n: int, outer: frozenset, blocks: Sequence[frozenset],
                       sizes: Sequence[int]) -> frozenset:
    """Replace letter i of a word of n letters carrying brackets ``outer`` by
    a word of sizes[i] letters carrying brackets blocks[i]."""
    start, pos = [], 0
    for k in sizes:
        start.append(pos)
        pos += k
    total = pos
    out = set()
    for l, r in outer:
        a, b = start[l], start[r] + sizes[r] - 1
        # letters l..r may have empty blocks at the ends
        if b - a >= 1 and (a, b) != (0, total - 1):
            out.add((a, b))
    for i, (br, k) in enumerate(zip(blocks, sizes)):
        if 2 <= k < total:
            out.add((start[i], start[i] + k - 1))
        for l, r in br:
            out.add((start[i] + l, start[i] + r))
    return frozenset(out)


def _substitute_cyclic(n: int, outer: frozenset, blocks: Sequence[frozenset],
                       fibers: Sequence[tuple]) -> frozenset:
    """Cyclic word of n letters; letter i becomes the ordered fiber fibers[i]
    (a block of new letters, named by their labels).  The concatenation of the
    fibers must be a rotation of 0..m."""
    seq = [x for fib in fibers for x in fib]
    start, pos = [], 0
    for fib in fibers:
        start.append(pos)
        pos += len(fib)
    out = set()
    for s, L in outer:
        positions = []
        for t in range(L):
            i = (s + t) % n
            positions.extend(range(start[i], start[i] + len(fibers[i])))
        if len(positions) >= 2:
            out.add((seq[positions[0]], len(positions)))
    for i, (br, fib) in enumerate(zip(blocks, fibers)):
        k = len(fib)
        if k >= 2:
            out.add((fib[0], k))
        for l, r in br:
            out.add((fib[l], r - l + 1))
    return frozenset(out)


def graft_cells(n: int, x: frozenset, i: int, m: int, y: frozenset) -> frozenset:
    """Cell of K_{n+m-1} obtained by grafting y in K_m onto letter i of x in K_n."""
    sizes = [1] * n
    sizes[i] = m
    blocks = [frozenset()] * n
    blocks[i] = y
    return _substitute_linear(n, x, blocks, sizes)


def gamma_map(n: int, arities: tuple) -> ChainMap:
    """Full composition C(K_n) (x) C(K_{a_0}) (x) ... -> C(K_{sum a})."""
    return _gamma_map(n, tuple(arities))


@lru_cache(maxsize=None)
def _gamma_map(n: int, arities: tuple) -> ChainMap:
    if len(arities) != n:
        raise ValueError("need one arity per input")
    P = associahedron(n)
    ins = [associahedron(a) for a in arities]
    T = associahedron(sum(arities))

    def phi(t):
        key = _substitute_linear(n, P.cells[t[0]].key,
                                 [Q.cells[c].key for Q, c in zip(ins, t[1:])], arities)
        return T.by_key[key]

    return multi_ez([P] + ins, T, phi)


def circle_gamma_map(n_letters: int, fibers: tuple) -> ChainMap:
    """C(W_n) (x) C(K_{|F_0|}) (x) ... -> C(W_{m+1}) for ordered fibers F_i
    whose concatenation is a rotation of 0..m."""
    return _circle_gamma_map(n_letters, tuple(tuple(f) for f in fibers))


@lru_cache(maxsize=None)
def _circle_gamma_map(n: int, fibers: tuple) -> ChainMap:
    W = cyclohedron(n)
    ins = [associahedron(len(f)) for f in fibers]
    T = cyclohedron(sum(len(f) for f in fibers))

    def phi(t):
        key = _substitute_cyclic(n, W.cells[t[0]].key,
                                 [Q.cells[c].key for Q, c in zip(ins, t[1:])], fibers)
        return T.by_key[key]

    return multi_ez([W] + ins, T, phi)


def augmentation(P: FacePoset):
    """C(P) -> unit, vertices of the order complex to 1."""
    from .chainbase import unit
    C = P.chains()
    return ChainMap(C, unit(), {0: Matrix(1, C.dim(0), {j: {0: ONE} for j in range(C.dim(0))})})


def vertex_basis_index(P: FacePoset, cell: int | None = None) -> int:
    """Index (in degree 0 of chains) of the 0-simplex at a cell; defaults to
    the first vertex of the poset."""
    if cell is None:
        cell = P.vertices()[0] if P.vertices() else 0
    return P.simplex_index((cell,))
