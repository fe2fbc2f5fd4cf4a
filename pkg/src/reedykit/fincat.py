"""Finite (truncated) categories, functors, and the simplicial-type generators.

Morphisms are identified by a canonical hashable label: a tuple of values for
the simplicial category, an :class:`NCMap` for noncommutative sets and their
subcategories.  Composition of generated categories is computed from labels
on demand and cached, so large truncations (Delta up to 5) stay cheap until a
checker actually walks the whole table.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable

from .report import ValidationReport


@dataclass(frozen=True)
class Obj:
    id: int
    label: str
    degree: int | None = None
    key: Hashable = None


@dataclass(frozen=True)
class Mor:
    id: int
    dom: int
    cod: int
    label: Hashable

    @property
    def label_str(self) -> str:
        return label_to_str(self.label)


@dataclass(frozen=True, order=True)
class NCMap:
    """A map of noncommutative sets {0..m} -> {0..n} with ordered fibers."""
    values: tuple
    fibers: tuple

    @classmethod
    def from_values(cls, values, n: int, fibers=None) -> "NCMap":
        values = tuple(values)
        if fibers is None:
            fibers = tuple(tuple(i for i, v in enumerate(values) if v == k) for k in range(n + 1))
        return cls(values, tuple(tuple(f) for f in fibers))

    @property
    def m(self) -> int:
        return len(self.values) - 1

    @property
    def n(self) -> int:
        return len(self.fibers) - 1

    def after(self, f: "NCMap") -> "NCMap":
        """self o f.  The fiber of k concatenates the f-fibers of the elements
        of self's fiber over k, in that fiber's order."""
        vals = tuple(self.values[v] for v in f.values)
        fibs = tuple(tuple(x for j in fib for x in f.fibers[j]) for fib in self.fibers)
        return NCMap(vals, fibs)

    def is_injective(self) -> bool:
        return all(len(f) <= 1 for f in self.fibers)

    def is_surjective(self) -> bool:
        return all(len(f) >= 1 for f in self.fibers)

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    def fiber_sizes(self) -> tuple:
        return tuple(len(f) for f in self.fibers)


def label_to_str(label) -> str:
    if isinstance(label, NCMap):
        vals = ",".join(map(str, label.values))
        fibs = ";".join(",".join(map(str, f)) for f in label.fibers)
        return f"{vals}/{fibs}"
    if isinstance(label, tuple):
        return ",".join(map(str, label))
    return str(label)


def label_from_str(s: str):
    if "/" in s:
        vals, fibs = s.split("/")
        values = tuple(int(x) for x in vals.split(",") if x != "")
        fibers = tuple(tuple(int(x) for x in part.split(",") if x != "") for part in fibs.split(";"))
        return NCMap(values, fibers)
    if s == "":
        return ()
    if all(p.lstrip("-").isdigit() for p in s.split(",")):
        return tuple(int(x) for x in s.split(","))
    return s


class FiniteCategory:
    """A finite category given by object and morphism records.

    ``compose(g, f)`` is g after f.  Either a full table is supplied or a label
    composer is used lazily (generated categories).
    """

    def __init__(self, name: str, objects: list[Obj], morphisms: list[Mor],
                 identities: dict, table: dict | None = None,
                 composer: Callable | None = None):
        self.name = name
        self.objects = list(objects)
        self.morphisms = list(morphisms)
        self.identities = dict(identities)
        self._table = dict(table) if table is not None else None
        self._composer = composer
        self._cache: dict = {}
        self._hom: dict = {}
        for m in self.morphisms:
            self._hom.setdefault((m.dom, m.cod), []).append(m.id)
        self._by_label = {(m.dom, m.cod, m.label): m.id for m in self.morphisms}
        self._obj_by_label = {o.label: o.id for o in self.objects}
        self._identity_set = set(self.identities.values())
        self._op_of: FiniteCategory | None = None

    # -- lookup -----------------------------------------------------------
    def obj(self, i: int) -> Obj:
        return self.objects[i]

    def mor(self, i: int) -> Mor:
        return self.morphisms[i]

    def dom(self, m: int) -> int:
        return self.morphisms[m].dom

    def cod(self, m: int) -> int:
        return self.morphisms[m].cod

    def hom(self, a: int, b: int) -> list[int]:
        return self._hom.get((a, b), [])

    def find(self, dom: int, cod: int, label) -> int | None:
        return self._by_label.get((dom, cod, label))

    def object_by_label(self, label: str) -> int:
        return self._obj_by_label[label]

    def is_identity(self, m: int) -> bool:
        return m in self._identity_set

    def degree(self, o: int) -> int | None:
        return self.objects[o].degree

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        return len(self.morphisms)

    # -- composition ------------------------------------------------------
    def compose(self, g: int, f: int) -> int:
        """g o f; raises KeyError on a non-composable pair."""
        if self._table is not None:
            return self._table[(g, f)]
        if self._op_of is not None:
            return self._op_of.compose(f, g)
        key = (g, f)
        r = self._cache.get(key)
        if r is not None:
            return r
        mg, mf = self.morphisms[g], self.morphisms[f]
        if mf.cod != mg.dom:
            raise KeyError(f"morphisms {g} and {f} are not composable")
        lab = self._composer(mg.label, mf.label)
        r = self._by_label.get((mf.dom, mg.cod, lab))
        if r is None:
            raise KeyError(f"composite of {g} and {f} (label {label_to_str(lab)}) is not in {self.name}")
        self._cache[key] = r
        return r

    def composable_pairs(self):
        for g in self.morphisms:
            for f in self.hom_into(g.dom):
                yield g.id, f

    def hom_into(self, b: int) -> list[int]:
        out = []
        for a in range(self.n_objects):
            out.extend(self.hom(a, b))
        return out

    def hom_out(self, a: int) -> list[int]:
        out = []
        for b in range(self.n_objects):
            out.extend(self.hom(a, b))
        return out

    def table(self) -> dict:
        if self._table is not None:
            return dict(self._table)
        return {(g, f): self.compose(g, f) for g, f in self.composable_pairs()}

    def with_table(self, table: dict, name: str | None = None) -> "FiniteCategory":
        return FiniteCategory(name or self.name, self.objects, self.morphisms,
                              self.identities, table=table)

    def same_tables(self, other: "FiniteCategory") -> bool:
        return (self.objects == other.objects and self.morphisms == other.morphisms
                and self.identities == other.identities and self.table() == other.table())

    def __repr__(self):
        return f"FiniteCategory({self.name!r}, objects={self.n_objects}, morphisms={self.n_morphisms})"


def build_category(name: str, objs: list[tuple], hom_labels: Callable, composer: Callable,
                   identity_label: Callable) -> FiniteCategory:
    """objs: (key, label, degree) records.  Objects are sorted by (degree, label)
    and morphisms by (dom, cod, label)."""
    objs = sorted(objs, key=lambda t: (t[2] if t[2] is not None else 0, t[1]))
    objects = [Obj(i, lab, deg, key) for i, (key, lab, deg) in enumerate(objs)]
    morphisms, identities = [], {}
    for a in objects:
        for b in objects:
            for lab in sorted(hom_labels(a.key, b.key)):
                morphisms.append(Mor(len(morphisms), a.id, b.id, lab))
    cat = FiniteCategory(name, objects, morphisms, {}, composer=composer)
    for o in objects:
        identities[o.id] = cat.find(o.id, o.id, identity_label(o.key))
    cat.identities = identities
    cat._identity_set = set(identities.values())
    return cat


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def monotone_maps(m: int, n: int):
    """Order-preserving maps {0..m} -> {0..n} as value tuples."""
    for c in itertools.combinations_with_replacement(range(n + 1), m + 1):
        yield c


def gen_delta(N: int) -> FiniteCategory:
    if N < 0:
        raise ValueError("N must be nonnegative")
    return build_category(
        f"Delta<={N}", [(n, f"[{n}]", n) for n in range(N + 1)],
        lambda m, n: list(monotone_maps(m, n)),
        lambda g, f: tuple(g[v] for v in f),
        lambda n: tuple(range(n + 1)))


def _all_ncmaps(m: int, n: int):
    for vals in itertools.product(range(n + 1), repeat=m + 1):
        base = [[i for i, v in enumerate(vals) if v == k] for k in range(n + 1)]
        for orders in itertools.product(*[itertools.permutations(b) for b in base]):
            yield NCMap(tuple(vals), tuple(tuple(o) for o in orders))


def gen_delta_sigma(N: int) -> FiniteCategory:
    if N < 0:
        raise ValueError("N must be nonnegative")
    return build_category(
        f"DeltaSigma<={N}", [(n, f"{n}", n) for n in range(N + 1)],
        lambda m, n: list(_all_ncmaps(m, n)),
        lambda g, f: g.after(f),
        lambda n: NCMap.from_values(range(n + 1), n))


def gen_01delta(N: int) -> FiniteCategory:
    """Totally ordered sets with at least two elements and maps preserving the
    minimum and maximum; the degree-n object has n+2 elements."""
    if N < 0:
        raise ValueError("N must be nonnegative")

    def hom(m, n):
        out = []
        for vals in monotone_maps(m + 1, n + 1):
            if vals[0] == 0 and vals[-1] == n + 1:
                out.append(NCMap.from_values(vals, n + 1))
        return out

    return build_category(
        f"01Delta<={N}", [(n, f"<{n}>", n) for n in range(N + 1)], hom,
        lambda g, f: g.after(f),
        lambda n: NCMap.from_values(range(n + 2), n + 1))


def _cyclic_maps(m: int, n: int):
    """Based cyclic maps {0..m} -> {0..n}: f(0) = 0 and the fibers, read in
    order, concatenate to a rotation of (0, ..., m)."""
    size = m + 1
    for r in range(size):
        s = tuple((r + t) % size for t in range(size))
        zero_pos = s.index(0)
        # n cut points in 0..size, weakly increasing; block 0 must contain 0
        for cuts in itertools.combinations_with_replacement(range(size + 1), n):
            bounds = (0,) + cuts + (size,)
            if bounds[1] <= zero_pos:
                continue
            fibers = tuple(s[bounds[k]:bounds[k + 1]] for k in range(n + 1))
            vals = [0] * size
            for k, fib in enumerate(fibers):
                for x in fib:
                    vals[x] = k
            yield NCMap(tuple(vals), fibers)


def gen_0deltaC(N: int) -> FiniteCategory:
    """Based cyclically ordered sets; the degree-n object has n+1 elements."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    return build_category(
        f"0DeltaC<={N}", [(n, f"({n})", n) for n in range(N + 1)],
        lambda m, n: list(_cyclic_maps(m, n)),
        lambda g, f: g.after(f),
        lambda n: NCMap.from_values(range(n + 1), n))


def terminal_category() -> FiniteCategory:
    return build_category("1", [(0, "*", 0)], lambda a, b: ["id"], lambda g, f: "id",
                          lambda a: "id")


# ---------------------------------------------------------------------------
# Opposites, functors, validation
# ---------------------------------------------------------------------------

def opposite(C: FiniteCategory) -> FiniteCategory:
    name = C.name[:-3] if C.name.endswith("^op") else C.name + "^op"
    morphisms = [Mor(m.id, m.cod, m.dom, m.label) for m in C.morphisms]
    if C._table is not None:
        table = {(f, g): gf for (g, f), gf in C._table.items()}
        return FiniteCategory(name, C.objects, morphisms, C.identities, table=table)
    op = FiniteCategory(name, C.objects, morphisms, C.identities)
    op._op_of = C
    return op


@dataclass
class Functor:
    source: FiniteCategory
    target: FiniteCategory
    object_map: dict
    morphism_map: dict


def check_functor(F: Functor) -> ValidationReport:
    rep = ValidationReport(f"functor {F.source.name} -> {F.target.name}")
    S, T = F.source, F.target
    for m in S.morphisms:
        fm = F.morphism_map.get(m.id)
        if fm is None:
            rep.add("undefined", "morphism not mapped", m.id)
            continue
        if T.dom(fm) != F.object_map[m.dom] or T.cod(fm) != F.object_map[m.cod]:
            rep.add("dom_cod", "dom/cod not preserved", m.id)
    for o, i in S.identities.items():
        if F.morphism_map.get(i) != T.identities[F.object_map[o]]:
            rep.add("identity", "identity not preserved", o)
    if not rep.ok:
        return rep
    n = 0
    for g, f in S.composable_pairs():
        n += 1
        if F.morphism_map[S.compose(g, f)] != T.compose(F.morphism_map[g], F.morphism_map[f]):
            rep.add("composition", "composition not preserved", g, f)
    rep.count("pairs", n)
    return rep


def check_isomorphism(F: Functor) -> bool:
    return isomorphism_report(F).ok


def isomorphism_report(F: Functor) -> ValidationReport:
    rep = check_functor(F)
    if len(set(F.object_map.values())) != F.target.n_objects or \
            len(F.object_map) != F.source.n_objects:
        rep.add("objects", "not bijective on objects")
    if len(set(F.morphism_map.values())) != F.target.n_morphisms or \
            len(F.morphism_map) != F.source.n_morphisms:
        rep.add("morphisms", "not bijective on morphisms")
    return rep


def validate_category(C: FiniteCategory, check_associativity: bool = True) -> ValidationReport:
    rep = ValidationReport(f"category {C.name}")
    for o in C.objects:
        i = C.identities.get(o.id)
        if i is None or C.dom(i) != o.id or C.cod(i) != o.id:
            rep.add("identity", "missing or misplaced identity", o.id)
    if not rep.ok:
        return rep
    if C._table is not None:
        for (g, f), gf in C._table.items():
            if C.dom(g) != C.cod(f):
                rep.add("table", "composite defined on a non-composable pair", g, f)
            elif not (0 <= gf < C.n_morphisms):
                rep.add("table", "composite is not a morphism", g, f)
    pairs = 0
    for g, f in C.composable_pairs():
        pairs += 1
        try:
            gf = C.compose(g, f)
        except KeyError:
            rep.add("table", "composite missing", g, f)
            continue
        if C.dom(gf) != C.dom(f) or C.cod(gf) != C.cod(g):
            rep.add("dom_cod", "composite has wrong dom/cod", g, f, gf)
    rep.count("pairs", pairs)
    if not rep.ok:
        return rep
    for m in C.morphisms:
        if C.compose(m.id, C.identities[m.dom]) != m.id or C.compose(C.identities[m.cod], m.id) != m.id:
            rep.add("unit", "identity law fails", m.id)
    if check_associativity:
        triples = 0
        for h in C.morphisms:
            for g in C.hom_into(h.dom):
                hg = C.compose(h.id, g)
                for f in C.hom_into(C.dom(g)):
                    triples += 1
                    if C.compose(hg, f) != C.compose(h.id, C.compose(g, f)):
                        rep.add("associativity", "associativity fails", h.id, g, f)
        rep.count("triples", triples)
    return rep


def corrupt_composition(C: FiniteCategory, g: int, f: int) -> FiniteCategory:
    """Copy of C with the composite of (g, f) replaced by another morphism of
    the same hom-set (test helper for mutate-and-scan checks)."""
    table = C.table()
    gf = table[(g, f)]
    choices = [m for m in C.hom(C.dom(f), C.cod(g)) if m != gf]
    if not choices:
        raise ValueError("hom-set has a single element; nothing to corrupt to")
    table[(g, f)] = choices[0]
    return C.with_table(table, C.name + "*")


# ---------------------------------------------------------------------------
# The two isomorphisms with Delta^op
# ---------------------------------------------------------------------------

def interval_duality(N: int, A: FiniteCategory | None = None,
                     Dop: FiniteCategory | None = None) -> Functor:
    """01Delta<=N -> Delta<=N ^op: f |-> (j |-> max{i : f(i) <= j})."""
    A = A or gen_01delta(N)
    Dop = Dop or opposite(gen_delta(N))
    omap = {o.id: o.id for o in A.objects}
    mmap = {}
    for mor in A.morphisms:
        f = mor.label.values
        n = A.degree(mor.cod)
        g = tuple(max(i for i, v in enumerate(f) if v <= j) for j in range(n + 1))
        mmap[mor.id] = Dop.find(mor.dom, mor.cod, g)
    return Functor(A, Dop, omap, mmap)


def cyclic_duality(N: int, A: FiniteCategory | None = None,
                   Dop: FiniteCategory | None = None) -> Functor:
    """0DeltaC<=N -> Delta<=N ^op: the target gap j is sent to the source gap
    where the fibers up to j end in the concatenated (rotated) order."""
    A = A or gen_0deltaC(N)
    Dop = Dop or opposite(gen_delta(N))
    omap = {o.id: o.id for o in A.objects}
    mmap = {}
    for mor in A.morphisms:
        s = tuple(x for fib in mor.label.fibers for x in fib)
        g, pos = [], 0
        for fib in mor.label.fibers:
            pos += len(fib)
            g.append(s[pos - 1])
        mmap[mor.id] = Dop.find(mor.dom, mor.cod, tuple(g))
    return Functor(A, Dop, omap, mmap)


def delta_op_iso(A: FiniteCategory) -> Functor | None:
    """The isomorphism to Delta^op for a generated 01Delta or 0DeltaC."""
    N = max(o.degree for o in A.objects)
    if A.name.startswith("01Delta"):
        return interval_duality(N, A)
    if A.name.startswith("0DeltaC"):
        return cyclic_duality(N, A)
    return None


GENERATORS = {
    "delta": gen_delta,
    "delta-sigma": gen_delta_sigma,
    "01delta": gen_01delta,
    "0deltaC": gen_0deltaC,
}
