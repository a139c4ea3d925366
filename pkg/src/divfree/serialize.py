"""JSON encodings of lattices, group elements, elements, characters,
derivation handles and isomorphism verdicts.

Rationals are written as strings ("3", "-1/2") so they survive any JSON
reader exactly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from . import qq
from .algebra import AlgebraElement, AlgebraParams
from .errors import DivFreeError
from .lattice import GroupElement, Lattice, canonicalize
from .witt import WittElement

_Q = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_QVEC = {"type": "array", "items": _Q}
_QMAT = {"type": "array", "items": _QVEC}
_INTVEC = {"type": "array", "items": {"type": "integer", "minimum": 0}}

SCHEMAS = {
    "lattice": {
        "type": "object",
        "required": ["dim", "basis"],
        "properties": {"dim": {"type": "integer", "minimum": 0}, "basis": _QMAT},
        "additionalProperties": False,
    },
    "lattice_generators": {
        "oneOf": [
            _QMAT,
            {"type": "array", "items": {"type": "array", "items": {"type": ["integer", "string"]}}},
            {
                "type": "object",
                "required": ["generators"],
                "properties": {"dim": {"type": "integer"}, "generators": {"type": "array"}},
            },
        ]
    },
    "group_element": {
        "type": "object",
        "required": ["l2", "l3", "A", "B", "C"],
        "properties": {
            "l2": {"type": "integer", "minimum": 0},
            "l3": {"type": "integer", "minimum": 0},
            "A": _QMAT,
            "B": _QMAT,
            "C": _QMAT,
        },
        "additionalProperties": False,
    },
    "element": {
        "type": "object",
        "required": ["kind", "terms"],
        "properties": {
            "kind": {"enum": ["algebra", "witt"]},
            "text": {"type": "string"},
            "terms": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["alpha", "ivec", "coeff"],
                    "properties": {
                        "alpha": _QVEC,
                        "ivec": _INTVEC,
                        "p": {"type": "integer", "minimum": 1},
                        "coeff": _Q,
                    },
                    "additionalProperties": False,
                },
            },
        },
    },
    "character": {
        "type": "object",
        "required": ["values"],
        "properties": {"values": _QVEC, "functional": _QVEC},
    },
    "derivation_handle": {
        "type": "object",
        "required": ["kind"],
        "properties": {
            "kind": {"enum": ["inner", "outer_w_rho0", "character", "combined"]},
            "u": {"$ref": "#/definitions/element"},
            "mu": {"$ref": "#/definitions/character"},
        },
    },
    "iso_verdict": {
        "type": "object",
        "required": ["status"],
        "properties": {
            "status": {"enum": ["isomorphic_with_witness", "not_isomorphic", "unknown"]},
            "witness": {"oneOf": [{"type": "null"}, {"$ref": "#/definitions/group_element"}]},
            "reason": {"type": "string"},
            "details": {"type": "array", "items": {"type": "string"}},
        },
    },
    "descriptor": {
        "type": "object",
        "required": ["shape", "gamma_basis"],
        "properties": {
            "shape": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
            "gamma_basis": _QMAT,
            "rho": _QVEC,
        },
    },
}


def schema(name: str) -> dict:
    """Self-contained JSON schema for one serialized type."""
    out = dict(SCHEMAS[name])
    out["$schema"] = "http://json-schema.org/draft-07/schema#"
    out["definitions"] = {k: v for k, v in SCHEMAS.items() if k != name}
    out["definitions"][name] = SCHEMAS[name]
    return out


def write_schemas(directory) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in SCHEMAS:
        path = directory / f"{name}.schema.json"
        path.write_text(json.dumps(schema(name), indent=2, sort_keys=True) + "\n")
        paths.append(path)
    return paths


def _qs(v):
    return [qq.fmt_q(x) for x in v]


def lattice_to_json(gamma: Lattice) -> dict:
    return {"dim": gamma.dim, "basis": [_qs(r) for r in gamma.basis]}


def lattice_from_json(data, dim=None) -> Lattice:
    """Accepts a bare generator list, {"generators": [...]} or an encoded
    lattice {"dim", "basis"}."""
    if isinstance(data, dict):
        if "basis" in data:
            return canonicalize(data["basis"], dim=data.get("dim", dim))
        if "generators" in data:
            return canonicalize(data["generators"], dim=data.get("dim", dim))
        raise DivFreeError("lattice JSON needs 'generators' or 'basis'")
    if isinstance(data, list):
        return canonicalize(data, dim=dim)
    raise DivFreeError("lattice JSON must be a list or an object")


def group_to_json(g: GroupElement) -> dict:
    return {
        "l2": g.l2,
        "l3": g.l3,
        "A": [_qs(r) for r in g.A],
        "B": [_qs(r) for r in g.B],
        "C": [_qs(r) for r in g.C],
    }


def group_from_json(data: dict) -> GroupElement:
    try:
        return GroupElement(data["l2"], data["l3"], data["A"], data["B"], data["C"])
    except (KeyError, TypeError) as exc:
        raise DivFreeError(f"malformed group element: {exc}") from None


def element_to_json(u: Union[AlgebraElement, WittElement]) -> dict:
    from .expr import format_element

    terms = []
    witt = isinstance(u, WittElement)
    for key, c in u.sorted_terms():
        rec = {"alpha": _qs(key[0]), "ivec": list(key[1]), "coeff": qq.fmt_q(c)}
        if witt:
            rec["p"] = key[2]
        terms.append(rec)
    return {"kind": "witt" if witt else "algebra", "text": format_element(u), "terms": terms}


def element_from_json(data: dict, params: AlgebraParams):
    terms = {}
    witt = data.get("kind") == "witt"
    for rec in data["terms"]:
        key = (qq.qvec(rec["alpha"]), tuple(rec["ivec"]))
        if witt:
            key = key + (rec["p"],)
        terms[key] = terms.get(key, 0) + qq.q(rec["coeff"])
    return WittElement(params, terms) if witt else AlgebraElement(params, terms)


def character_to_json(mu) -> dict:
    return {"values": _qs(mu.values), "functional": _qs(mu.functional())}


def handle_to_json(d) -> dict:
    out = {"kind": d.kind}
    if d.u is not None:
        out["u"] = element_to_json(d.u)
    if d.mu is not None:
        out["mu"] = character_to_json(d.mu)
    return out


def verdict_to_json(v) -> dict:
    return {
        "status": v.status,
        "witness": group_to_json(v.witness) if v.witness is not None else None,
        "reason": v.reason,
        "details": list(v.details),
    }


def params_to_json(params: AlgebraParams) -> dict:
    return {
        "shape": list(params.shape),
        "gamma": lattice_to_json(params.gamma),
        "rho": _qs(params.rho),
    }
