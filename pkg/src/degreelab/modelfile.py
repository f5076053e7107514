"""Structured-text model and sequence files, and deterministic reports.

Rationals travel as strings "p/q" (plain integers allowed on input); floats
are rejected in exact-mode files.  Deserialization validates every model
invariant and reports field-level diagnostics.  Serialization is canonical:
identical inputs produce byte-identical files and reports.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import linalg as la
from .errors import InputError, LabError
from .model import (
    GradedMap,
    GradedSpace,
    NumericalStructure,
    identity_numerical,
    make_space,
)

SCHEMA_MODEL = "model"
SCHEMA_SEQUENCE = "sequence"


def parse_scalar(value, where, exact=True):
    if isinstance(value, bool):
        raise InputError("expected a rational, got a boolean", field=where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if exact:
            raise InputError("floats forbidden in exact-mode files", field=where)
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational {value!r}: {exc}", field=where) from None
    raise InputError(f"expected a rational, got {type(value).__name__}", field=where)


def encode_scalar(x):
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _parse_matrix(rows, where, exact=True):
    if rows in (None, [], ()):
        return ()
    if not isinstance(rows, list):
        raise InputError("expected a matrix (list of rows)", field=where)
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise InputError("expected a row (list)", field=f"{where}[{i}]")
        out.append(tuple(parse_scalar(x, f"{where}[{i}][{j}]", exact)
                         for j, x in enumerate(row)))
    return la.mat(out)


def _encode_matrix(m):
    return [[encode_scalar(x) for x in row] for row in m] if m else []


def _parse_vector(vec, where, exact=True):
    if vec in (None, [], ()):
        return ()
    return tuple(parse_scalar(x, f"{where}[{i}]", exact) for i, x in enumerate(vec))


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None


class ModelFile:
    """A deserialized model: space, named maps with attributes, numerical
    structure, flags, provenance."""

    def __init__(self, space, maps, map_attrs, numerical, flags, provenance):
        self.space = space
        self.maps = maps
        self.map_attrs = map_attrs
        self.numerical = numerical
        self.flags = flags
        self.provenance = provenance

    def map_names(self):
        return sorted(self.maps)

    def pick_map(self, name=None):
        if name is None:
            if "frobenius" in self.maps:
                name = "frobenius"
            elif len(self.maps) == 1:
                name = next(iter(self.maps))
            else:
                raise InputError(f"ambiguous map choice; have {self.map_names()}",
                                 field="maps")
        if name not in self.maps:
            raise InputError(f"no map named {name!r}; have {self.map_names()}",
                             field="maps")
        return name, self.maps[name]


def model_from_dict(doc):
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    if doc.get("schema", SCHEMA_MODEL) != SCHEMA_MODEL:
        raise InputError(f"expected schema {SCHEMA_MODEL!r}", field="schema")
    try:
        n = int(doc["n"])
    except (KeyError, TypeError, ValueError):
        raise InputError("missing or bad half-dimension", field="n") from None
    dims = doc.get("dims")
    if not isinstance(dims, list):
        raise InputError("missing dims", field="dims")
    exact = doc.get("scalar", "exact") == "exact"

    pairings = None
    if doc.get("pairings") is not None:
        raw = doc["pairings"]
        if not isinstance(raw, list) or len(raw) != 2 * n + 1:
            raise InputError(f"need {2 * n + 1} pairing matrices", field="pairings")
        pairings = [_parse_matrix(p, f"pairings[{k}]", exact) for k, p in enumerate(raw)]
    ample = _parse_vector(doc.get("ample"), "ample", exact) or None
    powers = None
    if doc.get("ample_powers") is not None:
        powers = [_parse_vector(v, f"ample_powers[{j}]", exact)
                  for j, v in enumerate(doc["ample_powers"])]
    try:
        space = make_space(n, dims, pairings=pairings, ample=ample,
                           ample_powers=powers)
    except LabError as exc:
        raise InputError(str(exc), field="dims/pairings") from None

    maps = {}
    attrs = {}
    for name, entry in (doc.get("maps") or {}).items():
        where = f"maps.{name}"
        if not isinstance(entry, dict) or "blocks" not in entry:
            raise InputError("map entry needs a blocks list", field=where)
        blocks = entry["blocks"]
        if not isinstance(blocks, list) or len(blocks) != 2 * n + 1:
            raise InputError(f"need {2 * n + 1} blocks", field=f"{where}.blocks")
        parsed = [_parse_matrix(b, f"{where}.blocks[{k}]", exact)
                  for k, b in enumerate(blocks)]
        try:
            maps[name] = GradedMap(space, tuple(parsed))
        except LabError as exc:
            raise InputError(str(exc), field=f"{where}.blocks") from None
        gram = None
        if entry.get("gram") is not None:
            gram = tuple(_parse_matrix(g, f"{where}.gram[{k}]", exact) or None
                         for k, g in enumerate(entry["gram"]))
        attrs[name] = {
            "base": entry.get("base"),
            "over_fq": bool(entry.get("over_fq", False)),
            "semisimple": bool(entry.get("semisimple", False)),
            "weil_rh": bool(entry.get("weil_rh", entry.get("base") is not None)),
            "gram": gram,
        }

    numerical = None
    if doc.get("numerical") is not None:
        raw = doc["numerical"]
        ndims = raw.get("ndims")
        if not isinstance(ndims, list) or len(ndims) != n + 1:
            raise InputError(f"need {n + 1} numerical dims", field="numerical.ndims")
        quotients = [_parse_matrix(qm, f"numerical.quotients[{j}]", exact)
                     for j, qm in enumerate(raw.get("quotients", []))]
        if len(quotients) != n + 1:
            raise InputError(f"need {n + 1} quotient matrices",
                             field="numerical.quotients")
        try:
            numerical = NumericalStructure(
                space, tuple(int(e) for e in ndims), tuple(quotients),
                conjecture_d=bool(doc.get("flags", {}).get("conjectureD", True)))
        except LabError as exc:
            raise InputError(str(exc), field="numerical") from None
    else:
        numerical = identity_numerical(space)

    flags = {
        "weil_base": doc.get("flags", {}).get("weil_base"),
        "semisimple": bool(doc.get("flags", {}).get("semisimple", False)),
        "conjectureD": bool(doc.get("flags", {}).get("conjectureD", True)),
    }
    return ModelFile(space, maps, attrs, numerical, flags,
                     doc.get("provenance") or {})


def load_model(path):
    return model_from_dict(load_json(path))


def model_to_dict(space, maps, map_attrs=None, numerical=None, flags=None,
                  provenance=None):
    map_attrs = map_attrs or {}
    doc = {
        "schema": SCHEMA_MODEL,
        "scalar": "exact",
        "n": space.n,
        "dims": list(space.dims),
        "pairings": [_encode_matrix(p) for p in space.pairings],
        "ample": [encode_scalar(x) for x in space.ample] if space.ample else None,
        "ample_powers": [[encode_scalar(x) for x in v] for v in space.ample_powers]
                        if space.ample_powers else None,
        "maps": {},
        "numerical": None,
        "flags": flags or {},
        "provenance": provenance or {},
    }
    for name in sorted(maps):
        entry = {"blocks": [_encode_matrix(b) for b in maps[name].blocks]}
        entry.update({k: v for k, v in (map_attrs.get(name) or {}).items()
                      if v is not None and k != "gram"})
        gram = (map_attrs.get(name) or {}).get("gram")
        if gram is not None:
            entry["gram"] = [_encode_matrix(g) if g else None for g in gram]
        doc["maps"][name] = entry
    if numerical is not None:
        doc["numerical"] = {
            "ndims": list(numerical.ndims),
            "quotients": [_encode_matrix(q) for q in numerical.quotients],
        }
    return doc


def bundle_to_dict(bundle):
    maps = dict(bundle.endos)
    attrs = {name: {"over_fq": name in bundle.over_fq} for name in bundle.endos}
    if bundle.frobenius is not None:
        maps["frobenius"] = bundle.frobenius.map
        attrs["frobenius"] = {"base": bundle.frobenius.q, "over_fq": True,
                              "semisimple": bundle.semisimple,
                              "gram": bundle.frobenius.gram}
    flags = {
        "weil_base": bundle.frobenius.q if bundle.frobenius else None,
        "semisimple": bundle.semisimple,
        "conjectureD": bundle.conjecture_d,
    }
    return model_to_dict(bundle.space, maps, attrs, bundle.numerical, flags,
                         bundle.provenance)


def load_sequence(path):
    doc = load_json(path)
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    if doc.get("schema", SCHEMA_SEQUENCE) != SCHEMA_SEQUENCE:
        raise InputError(f"expected schema {SCHEMA_SEQUENCE!r}", field="schema")
    out = {}
    for key in ("a", "b"):
        if doc.get(key) is not None:
            out[key] = [parse_scalar(x, f"{key}[{i}]")
                        for i, x in enumerate(doc[key])]
    if doc.get("points") is not None:
        out["points"] = [(parse_scalar(p[0], f"points[{i}][0]"),
                          parse_scalar(p[1], f"points[{i}][1]"))
                         for i, p in enumerate(doc["points"])]
    if not out:
        raise InputError("sequence file needs 'a'/'b' or 'points'", field="a")
    return out


def sequence_to_dict(a=None, b=None, points=None):
    doc = {"schema": SCHEMA_SEQUENCE}
    if a is not None:
        doc["a"] = [encode_scalar(x) for x in a]
    if b is not None:
        doc["b"] = [encode_scalar(x) for x in b]
    if points is not None:
        doc["points"] = [[encode_scalar(x), encode_scalar(v)] for x, v in points]
    return doc


def dump(doc, path=None):
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
