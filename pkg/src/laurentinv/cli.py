"""Command line interface.

Exit codes: 0 success, 1 oracle disagreement (``check`` only), 2 invalid
input, 3 precondition unmet, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import __version__
from .combinatorics import DEFAULT_MAX_SUBSETS, defect_report
from .documents import (
    CollectionDocument,
    header,
    analysis_document,
    dumps,
    parse_collection,
    report_document,
    structure_document,
)
from .errors import CapExceededError, InvalidInputError, PreconditionError
from .geometry import DEFAULT_MAX_LATTICE_POINTS, convex_hull
from .invariants import bkk_number, full_report, zero_set_structure
from .lattice import difference_lattice, lattice_index, saturation
from .oracles import OracleConfig, run_checks

log = logging.getLogger("laurentinv")

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CAP = 0, 1, 2, 3, 4

REQUIRABLE = {"root-count": "root_count", "euler": "euler_characteristic", "genus": "geometric_genus"}


def _fmt_set(J) -> str:
    return "{" + ",".join(str(i) for i in J) + "}"


def _read(path: str) -> CollectionDocument:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise InvalidInputError(f"{path} is not UTF-8 text") from None
    doc = parse_collection(text)
    for w in doc.warnings:
        log.warning(w)
    return doc


def _text_defects(d: dict) -> list[str]:
    lines = [
        f"ambient dimension n: {d['ambient_dim']}",
        f"number of supports k: {d['num_supports']}",
        f"minimal defect d(A): {d['minimal_defect']}",
        f"generically consistent: {'yes' if d['generically_consistent'] else 'no'}",
        f"essential subcollection: {_fmt_set(d['essential'])}",
        f"consistency codimension: {d['consistency_codim']}",
        f"coefficient space dimension: {d['omega_dim']}",
        f"incidence variety dimension: {d['incidence_dim']}",
        f"generic zero set dimension: {d['generic_zero_set_dim']}",
    ]
    if d["defect_table_complete"]:
        lines.append("defects by subcollection:")
        lines.extend(f"  {_fmt_set(e['subset'])}: {e['defect']}" for e in d["defect_by_subset"])
    return lines


def _text_structure(s: dict) -> list[str]:
    lines = [
        f"essential subcollection: {_fmt_set(s['essential'])}",
        f"components: {s['num_components']}",
        f"component torus dimension: {s['component_ambient_dim']}",
        f"zero set dimension: {s['zero_set_dim']}",
    ]
    if s["quotient_map"] is not None:
        lines.append(f"quotient map: {s['quotient_map']['matrix']}")
    for e in s["residual"]:
        lines.append(f"  support {e['support']}: projected polytope of dim {e['dim']} with vertices {e['vertices']}")
    return lines


def render_text(document: dict) -> str:
    lines = []
    inp = document.get("input")
    if inp and inp.get("name"):
        lines.append(f"collection: {inp['name']}")
    if "defects" in document:
        lines.extend(_text_defects(document["defects"]))
    if "essential_index" in document:
        lines.append(f"index ind(J): {document['essential_index']}")
    if "structure" in document:
        lines.extend(_text_structure(document["structure"]))
    if "invariants" in document:
        for key, value in document["invariants"].items():
            note = document["notes"].get(key, "")
            shown = value if value is not None else f"n/a ({note.removeprefix('not applicable: ')})"
            lines.append(f"{key.replace('_', ' ')}: {shown}")
    if "mixed_volume" in document:
        lines.append(f"mixed volume (BKK number): {document['mixed_volume']}")
    if "checks" in document:
        for c in document["checks"]:
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']} ({c['instances']} instances)")
            for f in c["failures"][:3]:
                lines.append(f"  {f}")
    return "\n".join(lines) + "\n"


def _emit(document: dict, args):
    if getattr(args, "timing", False):
        document["timing"] = {"seconds": round(time.perf_counter() - args._start, 6)}
    sys.stdout.write(dumps(document) if args.format == "json" else render_text(document))


def cmd_analyze(args) -> int:
    doc = _read(args.input)
    A = doc.to_collection()
    rep = defect_report(A, args.max_subsets)
    G = difference_lattice(A, rep.essential)
    _emit(analysis_document(rep, lattice_index(G, saturation(G)), doc), args)
    return EXIT_OK


def cmd_invariants(args) -> int:
    doc = _read(args.input)
    report = full_report(doc.to_collection(), args.max_subsets, args.max_lattice_points)
    _emit(report_document(report, doc), args)
    for name in args.require or []:
        attr = REQUIRABLE[name]
        if getattr(report, attr) is None:
            log.error("%s: %s", attr, report.notes[attr])
            return EXIT_PRECONDITION
    return EXIT_OK


def cmd_structure(args) -> int:
    doc = _read(args.input)
    _emit(structure_document(zero_set_structure(doc.to_collection(), args.max_subsets), doc), args)
    return EXIT_OK


def cmd_mixed_volume(args) -> int:
    doc = _read(args.input)
    n, k = doc.ambient_dim, len(doc.supports)
    if n != k:
        raise PreconditionError(f"mixed volume needs exactly n = {n} supports, got {k}")
    out = header("mixed-volume", doc)
    out["mixed_volume"] = bkk_number([convex_hull(s, ambient_dim=n) for s in doc.supports])
    _emit(out, args)
    return EXIT_OK


def cmd_check(args) -> int:
    config = OracleConfig(random_seed=args.seed, instance_count=args.instances)
    results = run_checks(config)
    _emit(
        {
            "command": "check",
            "version": {"schema": 1, "tool": __version__},
            "config": {"seed": config.random_seed, "instances": config.instance_count},
            "checks": [r.to_dict() for r in results],
        },
        args,
    )
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--max-subsets", type=int, default=DEFAULT_MAX_SUBSETS,
                        help="cap on the 2**k subcollections scanned (default 2**24)")
    common.add_argument("--max-lattice-points", type=int, default=DEFAULT_MAX_LATTICE_POINTS,
                        help="cap on lattice point search boxes (default 10**7)")
    common.add_argument("--timing", action="store_true", help="add wall-clock timing to the output")

    parser = argparse.ArgumentParser(prog="laurentinv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("input", help="collection file (JSON or text), '-' for stdin")
        p.set_defaults(func=func)
        return p

    with_input("analyze", cmd_analyze, "defects, essential subcollection and codimension")
    p = with_input("invariants", cmd_invariants, "full invariant report")
    p.add_argument("--require", action="append", choices=sorted(REQUIRABLE),
                   help="exit with status 3 if this invariant is not defined for the input")
    with_input("structure", cmd_structure, "component structure of the generic zero set")
    with_input("mixed-volume", cmd_mixed_volume, "BKK number of the Newton polytopes of n supports in Z^n")

    p = sub.add_parser("check", parents=[common], help="cross-check against brute-force oracles")
    p.add_argument("--seed", type=int, default=OracleConfig.random_seed)
    p.add_argument("--instances", type=int, default=OracleConfig.instance_count)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    args._start = time.perf_counter()
    try:
        return args.func(args)
    except InvalidInputError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INPUT
    except PreconditionError as exc:
        log.error("precondition unmet: %s", exc)
        return EXIT_PRECONDITION
    except CapExceededError as exc:
        log.error("resource cap exceeded: %s", exc)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
