"""JSON serialization for certificates, gallery results, and CLI order reports.

All reports are deterministic given the same inputs and flags: dictionaries
serialize with sorted keys and floats with repr round-trip formatting.
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from . import __version__
from .certify import CERTIFIED_EXACT, FALSIFIED, SAMPLED_PASS, Certificate
from .gallery import GalleryResult

VERDICT_STRINGS = {
    CERTIFIED_EXACT: "certified_exact",
    SAMPLED_PASS: "sampled_pass",
    FALSIFIED: "falsified",
}


def _vec(v: Optional[np.ndarray]):
    return None if v is None else [float(t) for t in np.asarray(v).ravel()]


def verdict_string(verdict_or_cert) -> str:
    v = (verdict_or_cert.verdict
         if isinstance(verdict_or_cert, Certificate) else verdict_or_cert)
    return VERDICT_STRINGS.get(v, "not_applicable")


def certificate_to_json(cert: Certificate) -> dict:
    out = {
        "verdict": verdict_string(cert),
        "property": cert.prop,
        "tolerance": cert.tolerance,
        "decided_by": cert.decided_by,
        "seed": cert.seed,
        "n_pairs": cert.n_pairs,
        "worst_margin": cert.worst_margin,
        "violation": cert.violation,
        "witness": None,
        "detail": {k: (float(v) if isinstance(v, (int, float, np.floating)) else v)
                   for k, v in sorted(cert.detail.items())},
    }
    if cert.witness is not None:
        out["witness"] = {"x": _vec(cert.witness[0]), "y": _vec(cert.witness[1])}
    return out


def order_report(
    relation: str, lhs: str, rhs: str, cert: Certificate, seed: int
) -> dict:
    return {
        "query": {"relation": relation, "lhs": lhs, "rhs": rhs},
        "verdict": verdict_string(cert),
        "margin": cert.worst_margin,
        "witness": (
            None if cert.witness is None
            else {"x": _vec(cert.witness[0]), "y": _vec(cert.witness[1])}
        ),
        "seed": seed,
        "certificate": certificate_to_json(cert),
        "tool_version": __version__,
    }


def gallery_result_to_json(result: GalleryResult) -> dict:
    return {
        "name": result.name,
        "passed": result.passed,
        "params": result.params,
        "claims": [
            {
                "description": c.description,
                "expected": c.expected,
                "observed": c.observed_holds,
                "ok": c.ok,
                "certificate": (
                    certificate_to_json(c.observed)
                    if isinstance(c.observed, Certificate) else None
                ),
            }
            for c in result.claims
        ],
    }


def dumps(payload) -> str:
    """Canonical, byte-stable JSON text."""
    return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False)
