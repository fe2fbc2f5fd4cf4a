"""Reedy structures on finite categories."""
from __future__ import annotations

from dataclasses import dataclass, field

from .fincat import FiniteCategory, Mor, NCMap, Obj, opposite
from .report import ValidationReport


@dataclass
class ReedyStructure:
    category: FiniteCategory
    degree: dict
    direct: frozenset
    inverse: frozenset
    _factor: dict = field(default_factory=dict, repr=False)

    def deg(self, o: int) -> int:
        return self.degree[o]

    def max_degree(self) -> int:
        return max(self.degree.values()) if self.degree else 0

    def objects_by_degree(self) -> list[int]:
        C = self.category
        return sorted(self.degree, key=lambda o: (self.degree[o], C.obj(o).label))

    def factorization_counts(self) -> dict:
        """For every morphism, the list of (inverse, direct) pairs composing to it."""
        C = self.category
        found: dict = {m.id: [] for m in C.morphisms}
        inv_into: dict = {}
        for i in self.inverse:
            inv_into.setdefault(C.cod(i), []).append(i)
        for d in sorted(self.direct):
            for i in sorted(inv_into.get(C.dom(d), [])):
                found[C.compose(d, i)].append((i, d))
        return found

    def factorize(self, g: int) -> tuple[int, int]:
        """(inverse part, direct part) of g."""
        r = self._factor.get(g)
        if r is not None:
            return r
        if not self._factor:
            counts = self.factorization_counts()
            bad = [m for m, fs in counts.items() if len(fs) != 1]
            if bad:
                raise ValueError(f"Reedy structure invalid: morphisms {bad[:5]} do not factor uniquely")
            self._factor.update({m: fs[0] for m, fs in counts.items()})
        return self._factor[g]

    def is_direct(self, m: int) -> bool:
        return m in self.direct

    def is_inverse(self, m: int) -> bool:
        return m in self.inverse


def validate_reedy(R: ReedyStructure) -> ValidationReport:
    C = R.category
    rep = ValidationReport(f"reedy {C.name}")
    for o in C.objects:
        if o.id not in R.degree or R.degree[o.id] < 0:
            rep.add("degree", "object lacks a nonnegative degree", o.id)
    for name, sub in (("direct", R.direct), ("inverse", R.inverse)):
        for o, i in C.identities.items():
            if i not in sub:
                rep.add(f"{name}_identity", f"{name} subcategory misses an identity", o)
        for g in sorted(sub):
            for f in C.hom_into(C.dom(g)):
                if f in sub and C.compose(g, f) not in sub:
                    rep.add(f"{name}_closure", f"{name} subcategory not closed under composition", g, f)
    for m in C.morphisms:
        if C.is_identity(m.id):
            continue
        dd, dc = R.degree.get(m.dom, 0), R.degree.get(m.cod, 0)
        if m.id in R.direct and not dc > dd:
            rep.add("direct_degree", "non-identity direct morphism does not raise degree", m.id)
        if m.id in R.inverse and not dc < dd:
            rep.add("inverse_degree", "non-identity inverse morphism does not lower degree", m.id)
    counts = R.factorization_counts()
    for m, fs in counts.items():
        if len(fs) != 1:
            rep.add("factorization", f"{len(fs)} factorizations", m)
    rep.count("morphisms", C.n_morphisms)
    return rep


def reedy_filtration(R: ReedyStructure, n: int) -> FiniteCategory:
    """Full subcategory on the objects of degree <= n (ids renumbered)."""
    C = R.category
    keep = [o for o in C.objects if R.degree[o.id] <= n]
    oid = {o.id: k for k, o in enumerate(keep)}
    objects = [Obj(oid[o.id], o.label, o.degree, o.key) for o in keep]
    mors, mid = [], {}
    for m in C.morphisms:
        if m.dom in oid and m.cod in oid:
            mid[m.id] = len(mors)
            mors.append(Mor(len(mors), oid[m.dom], oid[m.cod], m.label))
    table = {}
    for m in C.morphisms:
        if m.id not in mid:
            continue
        for f in C.hom_into(m.dom):
            if f in mid:
                table[(mid[m.id], mid[f])] = mid[C.compose(m.id, f)]
    ids = {oid[o]: mid[i] for o, i in C.identities.items() if o in oid}
    return FiniteCategory(f"F^{n} {C.name}", objects, mors, ids, table=table)


def filtration_structure(R: ReedyStructure, n: int) -> ReedyStructure:
    """The Reedy structure restricted to the degree <= n subcategory, with
    ids renumbered as in :func:`reedy_filtration`."""
    C = R.category
    F = reedy_filtration(R, n)
    keep = [o.id for o in C.objects if R.degree[o.id] <= n]
    oid = {o: k for k, o in enumerate(keep)}
    mid = {}
    k = 0
    for m in C.morphisms:
        if m.dom in oid and m.cod in oid:
            mid[m.id] = k
            k += 1
    return ReedyStructure(F, {oid[o]: R.degree[o] for o in keep},
                          frozenset(mid[m] for m in R.direct if m in mid),
                          frozenset(mid[m] for m in R.inverse if m in mid))


def standard_reedy(C: FiniteCategory) -> ReedyStructure:
    """Degree from the generator; direct = monotone injections, inverse =
    surjections.  For Delta and its 01/based-cyclic relatives this is the
    usual structure; for noncommutative sets the fiber-permuting
    automorphisms are surjections that do not lower degree, so the result
    is rejected by validate_reedy."""
    degree = {o.id: o.degree for o in C.objects}
    direct, inverse = set(), set()
    for m in C.morphisms:
        lab = m.label
        if isinstance(lab, NCMap):
            inj, surj, mono = lab.is_injective(), lab.is_surjective(), lab.is_monotone()
            vals = lab.values
        elif isinstance(lab, tuple):
            vals = lab
            inj = len(set(vals)) == len(vals)
            surj = set(vals) == set(range(C.degree(m.cod) + 1))
            mono = True
        else:
            inj = surj = mono = C.is_identity(m.id)
        if inj and mono:
            direct.add(m.id)
        if surj:
            inverse.add(m.id)
    return ReedyStructure(C, degree, frozenset(direct), frozenset(inverse))


def opposite_reedy(R: ReedyStructure) -> ReedyStructure:
    return ReedyStructure(opposite(R.category), dict(R.degree),
                          frozenset(R.inverse), frozenset(R.direct))


def all_maps_reedy(C: FiniteCategory) -> ReedyStructure:
    """Every morphism both direct and inverse (a deliberately invalid structure)."""
    ids = frozenset(m.id for m in C.morphisms)
    return ReedyStructure(C, {o.id: o.degree or 0 for o in C.objects}, ids, ids)


def delta_epi_mono(C: FiniteCategory, g: int) -> tuple[int, int]:
    """Independent oracle for Delta: image factorization of a monotone map."""
    vals = C.mor(g).label
    image = sorted(set(vals))
    k = len(image) - 1
    surj = tuple(image.index(v) for v in vals)
    inj = tuple(image)
    mid = C.object_by_label(f"[{k}]")
    return C.find(C.dom(g), mid, surj), C.find(mid, C.cod(g), inj)
