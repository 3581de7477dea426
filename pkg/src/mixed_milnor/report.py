"""Deterministic JSON report assembly: manifests, complex serialization and
byte-stable dumping (sorted keys, shortest round-trip floats)."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import time
from typing import Any, Optional


def complex_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def jsonable(obj: Any) -> Any:
    """Recursively convert report values to JSON-serializable data."""
    if isinstance(obj, complex):
        return complex_pair(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def dumps(report: Any) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


def content_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def build_manifest(
    subcommand: str,
    spec_digest: Optional[str],
    parameters: dict,
    seed: Optional[int],
    version: str,
    outcome: str,
    canonical: bool,
    started: float,
    finished: float,
) -> dict:
    manifest = {
        "subcommand": subcommand,
        "spec_digest": spec_digest,
        "parameters": jsonable(parameters),
        "seed": seed,
        "tool_version": version,
        "outcome": outcome,
    }
    if not canonical:
        manifest["started_at"] = time.strftime(
            "%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)
        )
        manifest["finished_at"] = time.strftime(
            "%Y-%m-%dT%H:%M:%SZ", time.gmtime(finished)
        )
    return manifest
