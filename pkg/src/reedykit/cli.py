"""reedykit <gen|check|compute|lift> <kind> [--param value]... --out PATH

Exit codes: 0 success, 1 validation failure, 2 hypothesis refusal,
3 I/O or parse error.  REEDYKIT_SEED seeds randomized instances.
"""
from __future__ import annotations

import argparse
import os
import random
import sys

from . import serialize as ser
from .report import HypothesisError, ValidationReport

EXIT_OK, EXIT_INVALID, EXIT_REFUSED, EXIT_IO = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_IO)


def table(headers: list, rows: list) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def seed() -> int:
    try:
        return int(os.environ.get("REEDYKIT_SEED", "0"))
    except ValueError:
        raise UsageError("REEDYKIT_SEED must be an integer")


# -- shapes -------------------------------------------------------------------

_SHAPES: dict = {}


def shape_ref(args) -> dict:
    return {"base": args.base, "N": args.n, "operad": args.operad, "opposite": bool(args.opposite)}


def shape_from_ref(ref: dict):
    key = (ref["base"], ref["N"], ref.get("operad", "ainfty"), bool(ref.get("opposite")))
    if key in _SHAPES:
        return _SHAPES[key]
    from .enriched import build_AP, operad_ainfty, operad_trivial, trivially_enrich
    from .fincat import GENERATORS, gen_delta
    from .reedy import opposite_reedy, standard_reedy
    from .weighted import op_shape
    base, N, op, flip = key
    if base == "delta-op":
        R = opposite_reedy(standard_reedy(gen_delta(N)))
        S = trivially_enrich(R.category, R)[1]
    elif base in ("01delta", "0deltaC"):
        if not 0 <= N <= 5:
            raise UsageError("N must lie in 0..5 for A_P shapes")
        A = GENERATORS[base](N)
        P = operad_ainfty(N + 2) if op == "ainfty" else operad_trivial(N + 2)
        S = build_AP(A, P, standard_reedy(A))[1]
    else:
        raise UsageError(f"unknown base {base!r}")
    if flip:
        S = op_shape(S)
    _SHAPES[key] = S
    return S


# -- documents ----------------------------------------------------------------

def read_doc(path: str | None, schema: str | None = None) -> dict:
    if not path:
        raise UsageError("an input document is required (--in PATH)")
    with open(path, encoding="utf-8") as fh:
        return ser.loads(fh.read(), schema)


def write_doc(doc: dict, out: str | None) -> None:
    text = ser.dumps(doc)
    if out is None:
        return
    if out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)


def report_doc(rep: ValidationReport, extra: dict | None = None) -> dict:
    return ser.envelope("report", {**rep.to_json(), **(extra or {})})


def print_report(rep: ValidationReport) -> None:
    print(f"{rep.subject}: {'ok' if rep.ok else 'FAILED'}")
    if rep.checked:
        print(table(["checked", "count"], sorted(rep.checked.items())))
    if rep.violations:
        print(table(["kind", "witness", "message"],
                    [(v.kind, ",".join(map(str, v.witness)), v.message) for v in rep.violations[:20]]))


def load_diagram(doc: dict):
    S = shape_from_ref(doc["shape"])
    return ser.diagram_from_json(doc, S)


def find_object(B, name: str) -> int:
    """Accept a label such as <1> or a bare degree such as 1."""
    for cand in (name, f"<{name}>", f"({name})", f"[{name}]"):
        if cand in B._obj_by_label:
            return B.object_by_label(cand)
    raise UsageError(f"no object {name!r} in {B.name}")


# -- gen ----------------------------------------------------------------------

def cmd_gen(args) -> int:
    from . import cellgeom
    from .fincat import GENERATORS
    from .reedy import standard_reedy
    k, n = args.kind, args.n
    if k in GENERATORS:
        C = GENERATORS[k](n)
        doc = ser.category_to_json(C, standard_reedy(C))
        print(table(["category", "objects", "morphisms"], [[C.name, C.n_objects, C.n_morphisms]]))
    elif k in ("associahedron", "cyclohedron"):
        P = cellgeom.gen_associahedron(n) if k == "associahedron" else cellgeom.gen_cyclohedron(n)
        doc = ser.poset_to_json(P)
        print(table(["poset", "cells", "f-vector"], [[P.name, len(P.cells), P.f_vector()]]))
    elif k == "ap-category":
        S = shape_from_ref(shape_ref(args))
        doc = ser.enriched_to_json(S.enriched, S.reedy)
        print(table(["enriched", "morphisms"], [[S.enriched.name, S.enriched.base.n_morphisms]]))
    elif k in ("ainfty-operad", "trivial-operad"):
        from .enriched import operad_ainfty, operad_trivial
        P = operad_ainfty(n) if k == "ainfty-operad" else operad_trivial(n)
        doc = ser.envelope("operad", {"name": P.name, "N": n,
                                      "levels": {str(i): ser.complex_to_json(P.P(i)) for i in range(n + 1)}})
        print(table(["arity", "dims"], [[i, P.P(i).dim_vector()] for i in range(n + 1)]))
    elif k == "diagram":
        doc = gen_diagram(args)
    elif k == "lift-square":
        doc = gen_square(args)
    else:
        raise UsageError(f"unknown kind for gen: {k}")
    write_doc(doc, args.out)
    return EXIT_OK


def gen_diagram(args) -> dict:
    from .diagram import linearized_simplex, random_cofibrant_diagram, random_fibrant_diagram
    ref = shape_ref(args)
    S = shape_from_ref(ref)
    rng = random.Random(seed())
    if args.variant == "delta1":
        X = linearized_simplex(S)
    elif args.variant == "cofibrant":
        X = random_cofibrant_diagram(S, rng)
    elif args.variant == "fibrant":
        X = random_fibrant_diagram(S, rng)
    else:
        raise UsageError("--variant must be cofibrant, fibrant or delta1")
    print(table(["object", "dims"], [[X.base.obj(a).label, X.at[a].dim_vector()] for a in X.objects()]))
    return ser.diagram_to_json(X, ref)


def gen_square(args) -> dict:
    """A commuting square i: A -> B, p: X -> Y with top = h0 i, bottom = p h0."""
    from .diagram import (random_cofibrant_diagram, random_fibrant_diagram, random_natural_map,
                          random_reedy_cofibration, random_reedy_fibration)
    ref = shape_ref(args)
    S = shape_from_ref(ref)
    rng = random.Random(seed())
    v = args.variant or "trivial-cof"
    if v not in ("trivial-cof", "trivial-fib", "plain"):
        raise UsageError("--variant must be trivial-cof, trivial-fib or plain")
    A = random_cofibrant_diagram(S, rng)
    B, i = random_reedy_cofibration(A, rng, trivial=(v == "trivial-cof"))
    Y = random_fibrant_diagram(S, rng)
    X, p = random_reedy_fibration(Y, rng, trivial=(v == "trivial-fib"))
    h0 = random_natural_map(B, X, rng)
    top, bottom = h0 @ i, p @ h0
    return ser.envelope("lift-square", {
        "shape": ref,
        "A": ser.diagram_to_json(A, ref), "B": ser.diagram_to_json(B, ref),
        "X": ser.diagram_to_json(X, ref), "Y": ser.diagram_to_json(Y, ref),
        "i": ser.diagram_map_to_json(i), "p": ser.diagram_map_to_json(p),
        "top": ser.diagram_map_to_json(top), "bottom": ser.diagram_map_to_json(bottom)})


def load_square(doc: dict):
    A, B, X, Y = (load_diagram(doc[k]) for k in "ABXY")
    i = ser.diagram_map_from_json(doc["i"], A, B)
    p = ser.diagram_map_from_json(doc["p"], X, Y)
    top = ser.diagram_map_from_json(doc["top"], A, X)
    bottom = ser.diagram_map_from_json(doc["bottom"], B, Y)
    return i, p, top, bottom


# -- check --------------------------------------------------------------------

def cmd_check(args) -> int:
    from .diagram import classify, validate_diagram, validate_map
    k = args.kind
    extra = None
    if k == "category":
        from .fincat import validate_category
        C, _ = ser.category_from_json(read_doc(args.inp, "category"))
        rep = validate_category(C)
    elif k == "reedy":
        from .reedy import validate_reedy
        C, R = ser.category_from_json(read_doc(args.inp, "category"))
        if R is None:
            raise ser.DocumentError("category document carries no Reedy structure")
        rep = validate_reedy(R)
    elif k == "creedy":
        from .enriched import validate_creedy, validate_enriched
        E, S = ser.enriched_from_json(read_doc(args.inp, "enriched-category"))
        rep = validate_creedy(S) if S is not None else validate_enriched(E)
    elif k == "operad":
        from .enriched import operad_ainfty, operad_trivial, validate_operad
        rep = validate_operad(operad_ainfty(args.n) if args.operad == "ainfty" else operad_trivial(args.n))
    elif k == "diagram":
        rep = validate_diagram(load_diagram(read_doc(args.inp, "diagram")))
    elif k == "classify":
        i, p, _, _ = load_square(read_doc(args.inp, "lift-square"))
        f = i if (args.map or "i") == "i" else p
        rep = validate_map(f)
        flags = classify(f)
        flags.pop("objects")
        extra = {"flags": flags}
        print(table(["flag", "value"], sorted(flags.items())))
    elif k == "constants":
        from .chainbase import unit
        from .weighted import check_constants
        rep = check_constants(shape_from_ref(shape_ref(args)), unit(), args.which or "cofibrant")
    elif k == "pp":
        rep = check_pp(args)
    else:
        raise UsageError(f"unknown kind for check: {k}")
    print_report(rep)
    write_doc(report_doc(rep, extra), args.out)
    return EXIT_OK if rep.ok else EXIT_INVALID


def check_pp(args) -> ValidationReport:
    """Skeleton inclusion of the realization weight against a random Reedy cofibration."""
    from .diagram import DiagramMap, random_cofibrant_diagram, random_reedy_cofibration
    from .weighted import realization_weight, weight_skeleton, weighted_pp_check
    S = shape_from_ref(shape_ref(args))
    rng = random.Random(seed())
    K = realization_weight(S)
    top = S.reedy.max_degree()
    sk = weight_skeleton(K, max(top - 1, 0))
    A = random_cofibrant_diagram(S, rng)
    _, j = random_reedy_cofibration(A, rng, trivial=args.variant == "trivial")
    return weighted_pp_check(DiagramMap(sk.obj, K, sk.incl.comps), j)


# -- compute ------------------------------------------------------------------

def cmd_compute(args) -> int:
    from .chainbase import homology_ranks
    k = args.kind
    status = EXIT_OK
    if k in ("latching", "matching"):
        from .diagram import latching, matching
        X = load_diagram(read_doc(args.inp, "diagram"))
        if args.object is None:
            raise UsageError("--object LABEL is required")
        a = find_object(X.base, args.object)
        C = latching(X, a).obj if k == "latching" else matching(X, a).obj
        doc = ser.envelope("complex", ser.complex_to_json(C))
        print(table(["object", k, "homology"], [[args.object, C.dim_vector(), homology_ranks(C)]]))
    elif k == "homology":
        doc_in = read_doc(args.inp)
        if doc_in["schema"] == "face-poset":
            from . import cellgeom
            name = doc_in["name"]
            P = _poset_from_name(name)
            if args.boundary:
                P = cellgeom.boundary_subcomplex(P)
            X = P.chains()
        elif doc_in["schema"] == "complex":
            X = ser.complex_from_json(doc_in)
        else:
            raise ser.DocumentError(f"cannot take homology of a {doc_in['schema']} document")
        H = homology_ranks(X)
        doc = ser.envelope("homology", {"ranks": {str(n): r for n, r in sorted(H.items())}})
        print(table(["degree", "rank"], sorted(H.items())))
    elif k in ("realization", "tot"):
        from .weighted import realization, tot
        X = load_diagram(read_doc(args.inp, "diagram"))
        C = realization(X).obj if k == "realization" else tot(X).obj
        H = homology_ranks(C)
        doc = ser.envelope("complex", {**ser.complex_to_json(C), "homology": {str(n): r for n, r in sorted(H.items())}})
        print(table(["degree", "dim", "rank H"], [[n, C.dim(n), H.get(n, 0)] for n in C.degrees()]))
    elif k == "skeletal-filtration":
        from .weighted import skeletal_filtration
        X = load_diagram(read_doc(args.inp, "diagram"))
        F, _ = skeletal_filtration(X)
        doc = ser.filtered_to_json(F)
        print(table(["stage", "dims"], [[p, s.source.dim_vector()] for p, s in enumerate(F.stages)]))
    elif k == "spectral-sequence":
        from .specseq import check_pages, spectral_sequence
        F = ser.filtered_from_json(read_doc(args.inp, "filtered-complex"))
        pages = spectral_sequence(F, args.r_max)
        rep = check_pages(pages, F)
        doc = ser.envelope("spectral-sequence", {"pages": [P.to_json() for P in pages], "report": rep.to_json()})
        print(table(["r", "entries"], [[P.r, P.to_json()["entries"]] for P in pages]))
        status = EXIT_OK if rep.ok else EXIT_INVALID
    elif k in ("e2", "tot-spectral-sequence"):
        from .specseq import e2_identification, tot_spectral_sequence
        X = load_diagram(read_doc(args.inp, "diagram"))
        rep = e2_identification(X) if k == "e2" else tot_spectral_sequence(X)[1]
        print_report(rep)
        rows = sorted(set(rep.data.get("E2", {})) | set(rep.data.get("Einf", {})))
        print(table(["p,q", "E2", "N-homology", "Einf"],
                    [[r, rep.data.get("E2", {}).get(r, "-"), rep.data.get("normalized", {}).get(r, "-"),
                      rep.data.get("Einf", {}).get(r, 0)] for r in rows]))
        doc = report_doc(rep)
        status = EXIT_OK if rep.ok else EXIT_INVALID
    else:
        raise UsageError(f"unknown kind for compute: {k}")
    write_doc(doc, args.out)
    return status


def _poset_from_name(name: str):
    from . import cellgeom
    kind, n = name[0], int(name[1:])
    if kind == "K":
        return cellgeom.gen_associahedron(n)
    if kind == "W":
        return cellgeom.gen_cyclohedron(n)
    raise ser.DocumentError(f"unknown face poset {name!r}")


# -- lift ---------------------------------------------------------------------

def cmd_lift(args) -> int:
    from .diagram import classify, reedy_solve_lift, verify_lift
    if args.kind != "square":
        raise UsageError("lift takes the kind 'square'")
    doc = read_doc(args.inp, "lift-square")
    i, p, top, bottom = load_square(doc)
    ci, cp = classify(i), classify(p)
    flags = [["i", ci["reedy_cof"], ci["reedy_weq"]], ["p", cp["reedy_fib"], cp["reedy_weq"]]]
    print(table(["map", "cof/fib", "weq"], flags))
    h = reedy_solve_lift(i, p, top, bottom)
    if h is None:
        print("no lift exists for this square", file=sys.stderr)
        return EXIT_INVALID
    rep = verify_lift(h, i, p, top, bottom)
    print_report(rep)
    write_doc(ser.envelope("lift", {"shape": doc["shape"], "h": ser.diagram_map_to_json(h),
                                    "verification": rep.to_json()}), args.out)
    return EXIT_OK if rep.ok else EXIT_INVALID


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="reedykit", description="Exact enriched Reedy category computations.")
    ap.add_argument("command", choices=["gen", "check", "compute", "lift"])
    ap.add_argument("kind")
    ap.add_argument("--n", type=int, default=2, help="size parameter (truncation degree, arity, letters)")
    ap.add_argument("--base", default="01delta", help="01delta, 0deltaC or delta-op")
    ap.add_argument("--operad", default="ainfty", choices=["ainfty", "trivial"])
    ap.add_argument("--opposite", action="store_true", help="use the opposite shape")
    ap.add_argument("--variant", default=None)
    ap.add_argument("--which", default=None, choices=["cofibrant", "fibrant"])
    ap.add_argument("--map", default=None, choices=["i", "p"])
    ap.add_argument("--object", default=None, help="object label")
    ap.add_argument("--boundary", action="store_true")
    ap.add_argument("--r-max", dest="r_max", type=int, default=None)
    ap.add_argument("--in", dest="inp", default=None, help="input document")
    ap.add_argument("--out", default=None, help="output path ('-' for stdout)")
    return ap


COMMANDS = {"gen": cmd_gen, "check": cmd_check, "compute": cmd_compute, "lift": cmd_lift}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except HypothesisError as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except (OSError, ser.DocumentError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
