"""Polynomial / family spec ingestion (JSON).

Two accepted shapes:
  {"n": 2, "monomials": [{"c": [re, im], "nu": [3, 0], "mu": [1, 0]}, ...]}
  {"family": "brieskorn" | "type_i" | "type_ii", "a": [...], "b": [...]}
"""

from __future__ import annotations

import json
from typing import Optional

from .core import MixedMonomial, MixedPolynomial
from .errors import InputError
from .families import DeformationFamily, FamilySpec, build_family


def parse_spec(data: dict) -> tuple[MixedPolynomial, Optional[DeformationFamily]]:
    if not isinstance(data, dict):
        raise InputError("spec must be a JSON object")
    if "family" in data:
        try:
            spec = FamilySpec(data["family"], tuple(data["a"]), tuple(data.get("b", [0] * len(data["a"]))))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed family spec: {exc}") from exc
        fam = build_family(spec)
        return fam.endpoint_mixed, fam
    try:
        n = int(data["n"])
        monomials = []
        for entry in data["monomials"]:
            c = entry["c"]
            coeff = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            monomials.append(MixedMonomial(coeff, tuple(entry["nu"]), tuple(entry["mu"])))
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed polynomial spec: {exc}") from exc
    return MixedPolynomial(n, tuple(monomials)), None


def load_spec(path: str) -> tuple[MixedPolynomial, Optional[DeformationFamily], bytes]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read spec file {path!r}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"spec file {path!r} is not valid JSON: {exc}") from exc
    poly, fam = parse_spec(data)
    return poly, fam, raw


def require_family(fam: Optional[DeformationFamily]) -> DeformationFamily:
    if fam is None:
        raise InputError("this subcommand needs a family shorthand spec")
    return fam
