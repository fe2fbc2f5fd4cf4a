"""JSON documents with a schema tag, deterministic ordering and exact rationals."""
from __future__ import annotations

import json
from typing import Any

from .chainbase import ChainComplex, ChainMap
from .fincat import FiniteCategory, Mor, Obj, label_from_str, label_to_str
from .linalg import Matrix, q, q_str
from .reedy import ReedyStructure

SCHEMA_VERSION = 1


class DocumentError(ValueError):
    """A document does not parse or has the wrong schema."""


def envelope(schema: str, body: dict) -> dict:
    return {"schema": schema, "version": SCHEMA_VERSION, **body}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def loads(text: str, schema: str | None = None) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict) or "schema" not in doc:
        raise DocumentError("document has no schema tag")
    if schema is not None and doc["schema"] != schema:
        raise DocumentError(f"expected a {schema} document, got {doc['schema']}")
    if doc.get("version") != SCHEMA_VERSION:
        raise DocumentError(f"unsupported document version {doc.get('version')}")
    return doc


# -- matrices and complexes --------------------------------------------------

def matrix_to_json(m: Matrix) -> list:
    return [[q_str(x) for x in row] for row in m.to_rows()]


def matrix_from_json(rows: list, nrows: int, ncols: int) -> Matrix:
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise DocumentError(f"matrix is not {nrows} x {ncols}")
    return Matrix.from_rows([[q(x) for x in r] for r in rows], ncols)


def complex_to_json(X: ChainComplex) -> dict:
    return {"lo": X.lo, "hi": X.hi,
            "dims": {str(n): X.dim(n) for n in X.degrees() if X.dim(n)},
            "d": {str(n): matrix_to_json(X.diff(n)) for n in X.degrees()
                  if X.dim(n) and X.dim(n - 1) and not X.diff(n).is_zero()}}


def complex_from_json(doc: dict) -> ChainComplex:
    try:
        lo, hi = int(doc["lo"]), int(doc["hi"])
        dims = {int(n): int(k) for n, k in doc["dims"].items()}
        full = {n: dims.get(n, 0) for n in range(lo, hi + 1)}
        d = {int(n): matrix_from_json(m, full.get(int(n) - 1, 0), full.get(int(n), 0))
             for n, m in doc.get("d", {}).items()}
        X = ChainComplex(lo, hi, full, d)
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"bad chain complex: {e}") from e
    if X.check():
        raise DocumentError("differential does not square to zero")
    return X


def map_to_json(f: ChainMap) -> dict:
    return {str(n): matrix_to_json(f.at(n)) for n in sorted(f.comps) if not f.at(n).is_zero()}


def map_from_json(doc: dict, X: ChainComplex, Y: ChainComplex) -> ChainMap:
    return ChainMap(X, Y, {int(n): matrix_from_json(m, Y.dim(int(n)), X.dim(int(n)))
                           for n, m in doc.items()})


# -- categories ---------------------------------------------------------------

def category_to_json(C: FiniteCategory, R: ReedyStructure | None = None) -> dict:
    objs = sorted(C.objects, key=lambda o: ((o.degree if o.degree is not None else 0), o.label))
    mors = sorted(C.morphisms, key=lambda m: (m.dom, m.cod, label_to_str(m.label)))
    body: dict[str, Any] = {
        "name": C.name,
        "objects": [{"id": o.id, "label": o.label, **({"degree": o.degree} if o.degree is not None else {})}
                    for o in objs],
        "morphisms": [{"id": m.id, "dom": m.dom, "cod": m.cod, "label": label_to_str(m.label)} for m in mors],
        "compose": sorted([g, f, C.compose(g, f)] for g, f in C.composable_pairs()),
        "identities": {str(o): i for o, i in sorted(C.identities.items())},
    }
    if R is not None:
        body["reedy"] = reedy_to_json(R)
    return envelope("category", body)


def reedy_to_json(R: ReedyStructure) -> dict:
    return {"degree": {str(o): d for o, d in sorted(R.degree.items())},
            "direct": sorted(R.direct), "inverse": sorted(R.inverse)}


def category_from_json(doc: dict) -> tuple[FiniteCategory, ReedyStructure | None]:
    try:
        objs = sorted((Obj(o["id"], o["label"], o.get("degree")) for o in doc["objects"]), key=lambda o: o.id)
        mors = sorted((Mor(m["id"], m["dom"], m["cod"], label_from_str(m["label"])) for m in doc["morphisms"]),
                      key=lambda m: m.id)
        if [o.id for o in objs] != list(range(len(objs))) or [m.id for m in mors] != list(range(len(mors))):
            raise DocumentError("object and morphism ids must be 0..n-1")
        table = {(g, f): gf for g, f, gf in doc["compose"]}
        ids = {int(o): i for o, i in doc["identities"].items()}
        C = FiniteCategory(doc.get("name", "category"), objs, mors, ids, table=table)
        R = None
        if "reedy" in doc:
            r = doc["reedy"]
            R = ReedyStructure(C, {int(o): d for o, d in r["degree"].items()},
                               frozenset(r["direct"]), frozenset(r["inverse"]))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DocumentError):
            raise
        raise DocumentError(f"bad category document: {e}") from e
    return C, R


# -- face posets ----------------------------------------------------------------

def poset_to_json(P) -> dict:
    return envelope("face-poset", {
        "name": P.name,
        "cells": [{"id": c.id, "dim": c.dim, "label": c.label} for c in P.cells],
        "cover": [list(c) for c in P.covers()],
        **({"top": P.top} if P.top is not None else {}),
    })


# -- enriched categories -----------------------------------------------------

def enriched_to_json(E, R: ReedyStructure | None = None) -> dict:
    """Components per morphism, composition blocks per composable pair."""
    B = E.base
    comps = {str(m.id): complex_to_json(E.C(m.id)) for m in B.morphisms}
    compose = []
    for g, f in sorted(B.composable_pairs()):
        t, c = E.comp(g, f)
        compose.append({"g": g, "f": f, "target": t, "map": map_to_json(c)})
    units = {str(o): map_to_json(E.unit(o)) for o in sorted(E.units)}
    body = {"name": E.name, "base": category_to_json(B, R), "components": comps,
            "compose": compose, "units": units}
    if E.augmentation is not None:
        body["augmentation"] = {str(m): map_to_json(E.eps(m)) for m in sorted(E.augmentation)}
    return envelope("enriched-category", body)


def enriched_from_json(doc: dict):
    from .chainbase import tensor_many, unit
    from .enriched import CReedyStructure, EnrichedCategory
    try:
        B, R = category_from_json(doc["base"])
        comps = {int(m): complex_from_json(c) for m, c in doc["components"].items()}
        blocks = {}
        for e in doc["compose"]:
            g, f, t = e["g"], e["f"], e["target"]
            S = tensor_many([comps[g], comps[f]])[0]
            blocks[(g, f)] = (t, map_from_json(e["map"], S, comps[t]))
        I = unit()
        units = {int(o): map_from_json(m, I, comps[B.identities[int(o)]]) for o, m in doc["units"].items()}
        aug = None
        if "augmentation" in doc:
            aug = {int(m): map_from_json(a, comps[int(m)], I) for m, a in doc["augmentation"].items()}
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DocumentError):
            raise
        raise DocumentError(f"bad enriched category document: {e}") from e

    def composer(g, f):
        if (g, f) not in blocks:
            raise KeyError((g, f))
        return blocks[(g, f)]

    E = EnrichedCategory(doc.get("name", "enriched"), B, comps, composer, units, aug)
    return E, (CReedyStructure(E, R) if R is not None else None)


# -- diagrams -----------------------------------------------------------------

def diagram_to_json(X, shape_ref: dict) -> dict:
    B = X.base
    return envelope("diagram", {
        "name": X.name,
        "shape": shape_ref,
        "at": {B.obj(a).label: complex_to_json(X.at[a]) for a in X.objects()},
        "act": {str(f): map_to_json(X.act[f]) for f in sorted(X.act)},
    })


def diagram_from_json(doc: dict, shape):
    from .chainbase import tensor_many
    from .diagram import Diagram
    B = shape.enriched.base
    try:
        at = {B.object_by_label(lab): complex_from_json(c) for lab, c in doc["at"].items()}
        act = {}
        for f, m in doc["act"].items():
            f = int(f)
            S = tensor_many([shape.enriched.C(f), at[B.dom(f)]])[0]
            act[f] = map_from_json(m, S, at[B.cod(f)])
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, DocumentError):
            raise
        raise DocumentError(f"bad diagram document: {e}") from e
    return Diagram(shape, at, act, doc.get("name", "X"))


def diagram_map_to_json(F) -> dict:
    B = F.source.base
    return {B.obj(a).label: map_to_json(F.comps[a]) for a in F.source.objects()}


def diagram_map_from_json(doc: dict, X, Y):
    from .diagram import DiagramMap
    B = X.base
    try:
        comps = {}
        for a in X.objects():
            comps[a] = map_from_json(doc.get(B.obj(a).label, {}), X.at[a], Y.at[a])
    except (KeyError, TypeError, ValueError) as e:
        raise DocumentError(f"bad diagram map: {e}") from e
    return DiagramMap(X, Y, comps)


def filtered_to_json(F) -> dict:
    return envelope("filtered-complex", {
        "ambient": complex_to_json(F.ambient),
        "stages": [{"complex": complex_to_json(s.source), "inclusion": map_to_json(s)} for s in F.stages],
    })


def filtered_from_json(doc: dict):
    from .specseq import FilteredComplex
    X = complex_from_json(doc["ambient"])
    stages = []
    for s in doc["stages"]:
        S = complex_from_json(s["complex"])
        stages.append(map_from_json(s["inclusion"], S, X))
    return FilteredComplex(X, stages)
