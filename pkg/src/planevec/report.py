"""JSON report assembly.

Every scalar in a document is an exact string of the form
INT(/INT)?((+|-)INT(/INT)?*sqrt2)?; lattice points are [a, b] integer
pairs; derivations appear both as expression text and as graded maps.
Documents are serialized with sorted keys so identical inputs produce
byte-identical output (timing is the only nondeterministic field and is
dropped under --no-timing).
"""

from __future__ import annotations

import json
from typing import Optional

from . import __version__
from .closure import ClosureReport, ExclusionResult, LieSpan, RankResult
from .finiteness import Certificate, OrbitClosure
from .scalars import Scalar
from .spectral import OpportunePair, SpectralDecomposition
from .vecfield import (
    Derivation,
    GradedForm,
    NewtonPolygon,
    ShapeClassification,
    derivation_text,
    graded_text,
)

SCHEMA_VERSION = 1


def scalar_json(c: Scalar) -> str:
    return c.exact_str()


def point_json(point) -> list[int]:
    return [int(point[0]), int(point[1])]


def graded_json(g: GradedForm) -> dict:
    return {
        "euler": scalar_json(g.euler),
        "terms": [[a, b, scalar_json(c)] for (a, b), c in g.sorted_items()],
        "text": graded_text(g),
    }


def derivation_json(d: Derivation) -> dict:
    return {"text": derivation_text(d)}


def poly_json(p) -> str:
    from .poly import poly_text

    return poly_text(p)


def orbit_json(orbit: OrbitClosure) -> dict:
    return {
        "seed": poly_json(orbit.seed),
        "basis": [poly_json(b) for b in orbit.basis],
        "matrix": [[scalar_json(c) for c in row] for row in orbit.matrix],
    }


def certificate_json(cert: Certificate) -> dict:
    out: dict = {"kind": cert.kind}
    if cert.kind == "LocallyNilpotent":
        out["order"] = cert.order
    if cert.kind == "LocallyFinite":
        out["orbit_x"] = orbit_json(cert.orbit_x)
        out["orbit_y"] = orbit_json(cert.orbit_y)
    if cert.kind == "Inconclusive":
        out["growth"] = {name: list(dims) for name, dims in cert.growth}
    if cert.kind == "Refuted":
        witness = cert.witness
        out["witness"] = point_json(witness) if isinstance(witness, tuple) else str(witness)
    return out


def newton_json(polygon: NewtonPolygon) -> dict:
    return {
        "support": [point_json(p) for p in sorted(polygon.support)],
        "vertices": [point_json(p) for p in polygon.vertices],
    }


def shape_json(cls: ShapeClassification) -> dict:
    out: dict = {"label": cls.kind}
    out["witness"] = point_json(cls.witness) if cls.witness is not None else None
    return out


def spectral_json(decomp: SpectralDecomposition) -> dict:
    return {
        "delta": [scalar_json(decomp.alpha), scalar_json(decomp.beta)],
        "components": [
            {"eigenvalue": scalar_json(lam), "part": graded_json(comp)}
            for lam, comp in decomp.components
        ],
    }


def span_json(span: LieSpan) -> dict:
    return {"dim": span.dim, "basis": [graded_json(g) for g in span.basis]}


def pair_json(pair: OpportunePair) -> dict:
    out = {
        "semisimple": derivation_text(pair.semisimple_part),
        "nilpotent": derivation_text(pair.nilpotent_part),
    }
    if pair.eigenvalue is not None:
        out["eigenvalue"] = scalar_json(pair.eigenvalue)
    return out


def rank_json(result: RankResult) -> dict:
    out: dict = {"status": result.kind, "heuristic": result.heuristic}
    if result.pair is not None:
        out["pair"] = pair_json(result.pair)
    if result.central is not None:
        out["central"] = derivation_text(result.central)
    return out


def exclusion_json(result: ExclusionResult) -> dict:
    out: dict = {"status": result.status}
    if result.status == "Violation":
        out["k"] = result.k
        out["l"] = result.l
    return out


def closure_json(report: ClosureReport) -> dict:
    out = {
        "stabilized": report.stabilized,
        "growth_trace": [[r, d] for r, d in report.growth_trace],
        "truncations": report.truncations,
        "span": span_json(report.span),
    }
    if report.derived_dims is not None:
        out["derived_dims"] = list(report.derived_dims)
    if report.lcs_dims is not None:
        out["lcs_dims"] = list(report.lcs_dims)
    if report.verdicts is not None:
        out["verdicts"] = report.verdicts
    if report.exclusion is not None:
        out["exclusion"] = exclusion_json(report.exclusion)
    return out


def document(command: str, body: dict, timing_millis: Optional[int] = None) -> dict:
    doc = {
        "schema": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
    }
    doc.update(body)
    if timing_millis is not None:
        doc["timing"] = {"millis": int(timing_millis)}
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
