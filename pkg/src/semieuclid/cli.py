"""Command line interface: ``semieuclid <command> ...``.

Exit status 0 on success, 1 on a mathematical anomaly or table mismatch
(with a JSON error object on stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import census as C
from .euclid import (
    Classification,
    MembershipError,
    NotSemiEuclidean,
    certificate_from_json,
    certificate_to_json,
    classify_with_report,
    decompose,
    mat2_from_json,
    random_elementary_product,
    to_sl_factors,
    verify_certificate,
)
from .geometry import RenderSpec, k_is_lattice, render_figures, uncovered_area
from .lattices import successive_minima
from .orderfile import OrderFileError, order_to_dict, parse_order_file
from .orders import OrderValidationError, euclid_lattice, is_involution_maximal, is_maximal, reduced_discriminant

ENV_OUT = "SEMIEUCLID_OUT"


class Anomaly(Exception):
    """Raised by a command to exit with status 1."""

    def __init__(self, kind: str, message: str, payload: dict | None = None):
        super().__init__(message)
        self.kind = kind
        self.payload = payload or {}


def _outdir(args) -> Path:
    return Path(args.out or os.environ.get(ENV_OUT) or ".")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=1, sort_keys=True) + "\n")


def _q(v) -> str:
    return str(v)


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> int:
    O = parse_order_file(args.order)
    cls, rep = classify_with_report(O)
    L = euclid_lattice(O)
    verdict = k_is_lattice(O)
    report = {
        "order": order_to_dict(O),
        "classification": cls.value,
        "mu_sq": _q(rep.mu_sq),
        "hole_classes": len(rep.holes),
        "successive_minima": [_q(m) for m, _ in successive_minima(L)],
        "reduced_discriminant": reduced_discriminant(O),
        "algebra_discriminant": O.algebra.discriminant,
        "maximal": is_involution_maximal(O) if O.dim == 4 else is_maximal(O),
        "k_is_lattice": verdict.is_lattice,
    }
    if O.dim == 4:
        report["involution_discriminant"] = O.involution.disc
    if verdict.witness is not None:
        report["uncovered_witness"] = [_q(c) for c in verdict.witness.vector()]
    _emit(report)
    if cls == Classification.ANOMALY:
        raise Anomaly("anomaly", "covering radius 1 without a valid deep-hole certificate", report)
    return 0


def _bounds(args) -> C.SearchBounds:
    b = C.default_bounds(args.dim)
    kw = {}
    if args.max_disc is not None:
        kw["max_disc"] = args.max_disc
    if args.max_norm_xi is not None:
        kw["max_norm_xi"] = args.max_norm_xi
    if args.index_rule is not None:
        kw["index_rule"] = args.index_rule
    if args.method is not None:
        kw["method"] = args.method
    if kw:
        b = C.SearchBounds(**{**b.__dict__, **kw})
    return b


def cmd_census(args) -> int:
    store = C.RecordStore(args.store) if args.store else None
    records = C.run_census(args.dim, _bounds(args), store=store, workers=args.workers)
    text = C.records_to_csv(records) if args.format == "csv" else C.records_to_json(records) + "\n"
    if args.stdout:
        sys.stdout.write(text)
    else:
        out = _outdir(args)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"census_dim{args.dim}.{args.format}"
        path.write_text(text)
        _emit({"dim": args.dim, "orders": len(records), "semi_only": sum(r.semi for r in records),
               "file": str(path)})
    if any(r.classification == Classification.ANOMALY for r in records):
        raise Anomaly("anomaly", "census produced an order classified as anomaly")
    return 0


def cmd_holes(args) -> int:
    O = parse_order_file(args.order)
    entries = C.deep_hole_table(O)
    rows = []
    for e in entries:
        rows.append({
            "alpha": [_q(c) for c in e.alpha.vector()],
            "alpha_text": str(e.alpha),
            "norm": _q(e.alpha.norm()),
            "superorder": None if e.superorder is None else order_to_dict(e.superorder)["basis"],
        })
    _, rep = classify_with_report(O)
    _emit({"mu_sq": _q(rep.mu_sq), "deep_holes": rows if rep.mu_sq == 1 else []})
    if rep.mu_sq == 1 and any(r["superorder"] is None or r["norm"] != "1" for r in rows):
        raise Anomaly("anomaly", "deep hole without a containing maximal order")
    return 0


def _load_matrix(O, text: str):
    data = json.loads(text)
    return mat2_from_json(O.algebra, data["matrix"] if isinstance(data, dict) else data)


def cmd_decompose(args) -> int:
    O = parse_order_file(args.order)
    if args.matrix:
        M = _load_matrix(O, Path(args.matrix).read_text())
    else:
        rng = random.Random(args.seed)
        M = random_elementary_product(O, args.random, rng)
    try:
        cert = decompose(M, O)
    except NotSemiEuclidean as exc:
        raise Anomaly("not-semi-euclidean", str(exc), {"dist_sq": _q(exc.dist_sq)}) from None
    except MembershipError as exc:
        raise Anomaly("membership", str(exc)) from None
    if args.sl:
        cert = to_sl_factors(cert)
    if not verify_certificate(M, cert, O):
        raise Anomaly("certificate", "certificate failed verification")
    data = certificate_to_json(M, cert)
    # the emitted certificate must survive a round trip
    M2, cert2 = certificate_from_json(O.algebra, json.loads(json.dumps(data)), O)
    if M2 != M or not verify_certificate(M2, cert2, O):
        raise Anomaly("certificate", "certificate does not round-trip")
    _emit(data)
    return 0


def cmd_render(args) -> int:
    O = parse_order_file(args.order)
    which = tuple(args.which.split(","))
    out = _outdir(args)
    docs = render_figures(O, RenderSpec(which=which, outdir=str(out), stem=args.stem))
    area = uncovered_area(O)
    _emit({"files": [str(out / f"{args.stem}_{n}.svg") for n in docs],
           "uncovered_area": [area.lo, area.hi], "certified_zero": area.exact_zero})
    return 0


def cmd_verify_tables(args) -> int:
    dims = [3, 4, 5] if args.dim == "all" else [int(args.dim)]
    reports = []
    for dim in dims:
        records = C.run_census(dim, workers=args.workers)
        rep = C.verify_tables(records, C.golden_orders(dim))
        holes_ok = True
        if dim in (4, 5):
            for h in C.golden_holes(dim):
                if h.order is None:
                    continue
                ok, _ = C.hole_classes_match(h.order, [g.alpha for g in C.golden_holes(dim) if g.text == h.text])
                holes_ok &= ok
        d = rep.to_dict()
        d["holes_ok"] = holes_ok
        reports.append(d)
    _emit(reports)
    if not all(r["ok"] and r["holes_ok"] for r in reports):
        raise Anomaly("mismatch", "census differs from the shipped tables", {"reports": reports})
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semieuclid", description="Semi-Euclidean orders and SL2 decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify an order from a JSON description")
    a.add_argument("order")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("census", help="enumerate orders with covering radius <= 1")
    c.add_argument("--dim", type=int, choices=(3, 4, 5), required=True)
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--out", help=f"output directory (default ${ENV_OUT} or .)")
    c.add_argument("--stdout", action="store_true", help="write the table to stdout")
    c.add_argument("--workers", type=int, default=1)
    c.add_argument("--store", help="directory for per-order JSON records")
    c.add_argument("--max-disc", type=int)
    c.add_argument("--max-norm-xi", type=int)
    c.add_argument("--index-rule", choices=("covolume", "hadamard"))
    c.add_argument("--method", choices=("maximal", "minima", "lattice"))
    c.set_defaults(func=cmd_census)

    h = sub.add_parser("holes", help="deep holes and containing maximal orders")
    h.add_argument("order")
    h.set_defaults(func=cmd_holes)

    d = sub.add_parser("decompose", help="write a matrix as a product of triangular matrices")
    d.add_argument("order")
    g = d.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix", help='JSON file: [[a, b], [c, d]] with entries as coordinate lists')
    g.add_argument("--random", type=int, metavar="LEN", help="use a random product of LEN elementary matrices")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--sl", action="store_true", help="move the diagonal part to the front")
    d.set_defaults(func=cmd_decompose)

    r = sub.add_parser("render", help="SVG pictures for a quadratic order")
    r.add_argument("order")
    r.add_argument("--out")
    r.add_argument("--which", default="cover,floor")
    r.add_argument("--stem", default="order")
    r.set_defaults(func=cmd_render)

    v = sub.add_parser("verify-tables", help="compare the census with the shipped tables")
    v.add_argument("--dim", choices=("3", "4", "5", "all"), default="all")
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify_tables)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Anomaly as exc:
        sys.stderr.write(json.dumps({"error": exc.kind, "message": str(exc), **exc.payload}, sort_keys=True) + "\n")
        return 1
    except (OrderFileError, OrderValidationError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(json.dumps({"error": "input", "message": str(exc)}) + "\n")
        return 2
    except ValueError as exc:
        sys.stderr.write(json.dumps({"error": "input", "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
