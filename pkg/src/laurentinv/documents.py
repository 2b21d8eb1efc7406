"""Reading support collections and writing reports.

Input is either JSON::

    {"ambient_dim": 2, "supports": [[[0, 0], [1, 0]], [[0, 0], [0, 1]]],
     "name": "optional", "labels": ["optional", "per support"]}

or a plain-text format with one support per line, points written as
``(a,b,...)`` groups. ``#`` starts a comment; ``ambient_dim: n`` and
``name: text`` header lines are optional; ``label: (..) (..)`` names a
support.

Every index that appears in a document (support numbers in messages,
essential subcollections, subsets of the defect table) is 1-based.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field

from . import __version__
from .collection import SupportCollection
from .combinatorics import DefectReport
from .errors import InvalidInputError
from .geometry import convex_hull
from .invariants import InvariantReport, ZeroSetStructure
from .lattice import IntegerMatrix, QuotientMap

SCHEMA_VERSION = 1

_POINT = re.compile(r"\(([^()]*)\)")
_INT = re.compile(r"[+-]?\d+")


@dataclass
class CollectionDocument:
    ambient_dim: int
    supports: list[list[tuple[int, ...]]]
    name: str | None = None
    labels: list[str] | None = None
    warnings: list[str] = field(default_factory=list)

    def to_collection(self) -> SupportCollection:
        return SupportCollection(self.ambient_dim, tuple(tuple(sorted(s)) for s in self.supports))

    def digest(self) -> str:
        canon = json.dumps(
            {"ambient_dim": self.ambient_dim, "supports": [sorted(list(p) for p in s) for s in self.supports]},
            sort_keys=True,
            separators=(",", ":"),
        )
        return "sha256:" + hashlib.sha256(canon.encode()).hexdigest()


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _validate(ambient_dim, supports, name=None, labels=None) -> CollectionDocument:
    if not _is_int(ambient_dim) or ambient_dim < 0:
        raise InvalidInputError(f"ambient_dim must be a nonnegative integer, got {ambient_dim!r}")
    if not isinstance(supports, list):
        raise InvalidInputError("'supports' must be a list of supports")
    if not supports:
        raise InvalidInputError("the collection has no supports")
    if labels is not None and (
        not isinstance(labels, list) or len(labels) != len(supports) or not all(isinstance(s, str) for s in labels)
    ):
        raise InvalidInputError("'labels' must be a list of strings, one per support")
    if name is not None and not isinstance(name, str):
        raise InvalidInputError("'name' must be a string")
    out, warns = [], []
    for i, support in enumerate(supports, 1):
        if not isinstance(support, list):
            raise InvalidInputError(f"support {i} is not a list of points")
        if not support:
            raise InvalidInputError(f"support {i} is empty: supports must be nonempty")
        seen, pts = set(), []
        for j, p in enumerate(support, 1):
            if not isinstance(p, (list, tuple)):
                raise InvalidInputError(f"support {i}, point {j}: not a coordinate list")
            if len(p) != ambient_dim:
                raise InvalidInputError(
                    f"support {i}, point {j}: has {len(p)} coordinates, expected ambient_dim = {ambient_dim}"
                )
            if not all(_is_int(x) for x in p):
                raise InvalidInputError(f"support {i}, point {j}: coordinates must be integers")
            q = tuple(p)
            if q in seen:
                warns.append(f"support {i}, point {j}: duplicate point {list(q)} removed")
                continue
            seen.add(q)
            pts.append(q)
        out.append(pts)
    return CollectionDocument(ambient_dim, out, name, labels, warns)


def _parse_json(text: str) -> CollectionDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InvalidInputError("the JSON document must be an object")
    unknown = set(data) - {"ambient_dim", "supports", "name", "labels"}
    if unknown:
        raise InvalidInputError(f"unknown keys {sorted(unknown)}")
    if "supports" not in data:
        raise InvalidInputError("missing key 'supports'")
    supports = data["supports"]
    ambient = data.get("ambient_dim")
    if ambient is None:
        try:
            ambient = len(supports[0][0])
        except (TypeError, IndexError, KeyError):
            raise InvalidInputError("missing key 'ambient_dim'") from None
    return _validate(ambient, supports, data.get("name"), data.get("labels"))


def _parse_text(text: str) -> CollectionDocument:
    ambient, name = None, None
    supports, labels = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label = None
        head, sep, rest = line.partition(":")
        if sep and "(" not in head:
            key = head.strip()
            if key == "ambient_dim":
                if not re.fullmatch(r"\s*\d+\s*", rest):
                    raise InvalidInputError(f"line {lineno}: ambient_dim must be a nonnegative integer")
                ambient = int(rest)
                continue
            if key == "name":
                name = rest.strip()
                continue
            label, line = key, rest
        if _POINT.sub("", line).replace(",", " ").replace(";", " ").strip():
            raise InvalidInputError(f"line {lineno}: expected points written as (a,b,...)")
        pts = []
        for group in _POINT.findall(line):
            parts = [s.strip() for s in group.split(",")] if group.strip() else []
            if not all(_INT.fullmatch(s) for s in parts):
                raise InvalidInputError(f"line {lineno}: non-integer coordinate in ({group})")
            pts.append([int(s) for s in parts])
        supports.append(pts)
        labels.append(label or "")
    if not supports:
        raise InvalidInputError("no supports found")
    if ambient is None:
        ambient = len(supports[0][0]) if supports[0] else 0
    return _validate(ambient, supports, name, labels if any(labels) else None)


def parse_collection(text: str) -> CollectionDocument:
    """Parse JSON (detected by a leading ``{``) or the plain-text format."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    return _parse_text(text)


# -- reports -------------------------------------------------------------------------


def _one_based(J) -> list[int]:
    return [i + 1 for i in J]


def _zero_based(J) -> tuple[int, ...]:
    return tuple(i - 1 for i in J)


def defects_to_dict(r: DefectReport) -> dict:
    table = sorted(r.defect_by_subset.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return {
        "ambient_dim": r.ambient_dim,
        "num_supports": r.num_supports,
        "minimal_defect": r.minimal_defect,
        "essential": _one_based(r.essential),
        "generically_consistent": r.generically_consistent,
        "consistency_codim": r.consistency_codim,
        "omega_dim": r.omega_dim,
        "incidence_dim": r.incidence_dim,
        "generic_zero_set_dim": r.generic_zero_set_dim,
        "defect_table_complete": r.full_table,
        "defect_by_subset": [{"subset": _one_based(J), "defect": v} for J, v in table],
    }


def defects_from_dict(d: dict) -> DefectReport:
    return DefectReport(
        ambient_dim=d["ambient_dim"],
        num_supports=d["num_supports"],
        defect_by_subset={_zero_based(e["subset"]): e["defect"] for e in d["defect_by_subset"]},
        minimal_defect=d["minimal_defect"],
        essential=_zero_based(d["essential"]),
        generically_consistent=d["generically_consistent"],
        consistency_codim=d["consistency_codim"],
        omega_dim=d["omega_dim"],
        incidence_dim=d["incidence_dim"],
        generic_zero_set_dim=d["generic_zero_set_dim"],
        full_table=d["defect_table_complete"],
    )


def structure_to_dict(s: ZeroSetStructure) -> dict:
    q = s.quotient
    return {
        "essential": _one_based(s.essential),
        "num_components": s.num_components,
        "component_ambient_dim": s.component_ambient_dim,
        "zero_set_dim": s.zero_set_dim,
        "complete_intersection": s.complete_intersection,
        "quotient_map": None if q is None else {"source_dim": q.source_dim, "matrix": q.matrix.tolist()},
        "residual": [
            {"support": i + 1, "dim": P.dim, "vertices": [list(v) for v in P.vertices]}
            for i, P in zip(s.residual_indices, s.residual_polytopes)
        ],
    }


def structure_from_dict(d: dict) -> ZeroSetStructure:
    q = d["quotient_map"]
    m = d["component_ambient_dim"]
    qmap = None
    if q is not None:
        qmap = QuotientMap(q["source_dim"], m, IntegerMatrix.from_rows(q["matrix"], q["source_dim"]))
    return ZeroSetStructure(
        essential=_zero_based(d["essential"]),
        num_components=d["num_components"],
        component_ambient_dim=m,
        zero_set_dim=d["zero_set_dim"],
        residual_indices=tuple(e["support"] - 1 for e in d["residual"]),
        residual_polytopes=tuple(convex_hull([tuple(v) for v in e["vertices"]], ambient_dim=m) for e in d["residual"]),
        quotient=qmap,
        complete_intersection=d["complete_intersection"],
    )


def header(command: str, doc: CollectionDocument | None) -> dict:
    out = {
        "command": command,
        "index_base": 1,
        "version": {"schema": SCHEMA_VERSION, "tool": __version__},
    }
    if doc is not None:
        out["input"] = {
            "name": doc.name,
            "labels": doc.labels,
            "digest": doc.digest(),
            "ambient_dim": doc.ambient_dim,
            "num_supports": len(doc.supports),
        }
    return out


def report_document(report: InvariantReport, doc: CollectionDocument | None = None) -> dict:
    out = header("invariants", doc)
    out["defects"] = defects_to_dict(report.defect_report)
    out["structure"] = structure_to_dict(report.structure)
    out["invariants"] = {
        "root_count": report.root_count,
        "euler_characteristic": report.euler_characteristic,
        "geometric_genus": report.geometric_genus,
    }
    out["notes"] = dict(report.notes)
    return out


def report_from_document(d: dict) -> InvariantReport:
    inv = d["invariants"]
    return InvariantReport(
        defect_report=defects_from_dict(d["defects"]),
        structure=structure_from_dict(d["structure"]),
        root_count=inv["root_count"],
        euler_characteristic=inv["euler_characteristic"],
        geometric_genus=inv["geometric_genus"],
        notes=dict(d["notes"]),
    )


def analysis_document(defects: DefectReport, index: int, doc: CollectionDocument | None = None) -> dict:
    out = header("analyze", doc)
    out["defects"] = defects_to_dict(defects)
    out["essential_index"] = index
    return out


def structure_document(s: ZeroSetStructure, doc: CollectionDocument | None = None) -> dict:
    out = header("structure", doc)
    out["structure"] = structure_to_dict(s)
    return out


def dumps(document: dict) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
