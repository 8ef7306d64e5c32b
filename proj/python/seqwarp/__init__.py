"""Numerical verifier for sequential warped product submanifolds of Kaehler space forms."""

import json

from ._core import (
    DomainError,
    Manifest,
    ManifestError,
    ParseError,
    PreconditionError,
    RankDeficiency,
    SeqwarpError,
    UnknownIdentifier,
    canonical,
    check_names,
    evaluate,
    evaluate_point,
    frame_report_json,
    geometry,
    load_manifest,
    parse_manifest,
    partial,
    run_check_json,
    run_sweep,
)

__version__ = "0.1.0"


def run_check(manifest, **options):
    """Verification report as a dict."""
    return json.loads(run_check_json(manifest, **options))


def frame_report(manifest, point):
    return json.loads(frame_report_json(manifest, point))


__all__ = [
    "DomainError",
    "Manifest",
    "ManifestError",
    "ParseError",
    "PreconditionError",
    "RankDeficiency",
    "SeqwarpError",
    "UnknownIdentifier",
    "canonical",
    "check_names",
    "evaluate",
    "evaluate_point",
    "frame_report",
    "geometry",
    "load_manifest",
    "parse_manifest",
    "partial",
    "run_check",
    "run_sweep",
]
