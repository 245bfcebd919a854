"""Replayable JSON report assembly.

Reports are the single source of truth; CSV/plot series are derived views.
Every numeric payload value is an exact "p/q" string or an integer, never a
float, except probe statistics explicitly tagged as approximate.  Serialized
output is canonical (sorted keys, fixed separators), so a replay under the
same parameters is byte-identical; timing is opt-in and excluded from
comparisons.
"""

from __future__ import annotations

import json
from typing import Iterable, Optional

SCHEMA_VERSION = "1"

MACHINE_CHECKED = "MACHINE_CHECKED"
PAPER_BACKED = "PAPER_BACKED"
CANDIDATE = "CANDIDATE"
STATISTICAL = "STATISTICAL"

_KINDS = {MACHINE_CHECKED, PAPER_BACKED, CANDIDATE, STATISTICAL}


def certificate(kind: str, claim: str, **fields) -> dict:
    if kind not in _KINDS:
        raise ValueError(f"unknown certificate kind {kind!r}")
    cert = {"kind": kind, "claim": claim}
    cert.update(fields)
    return cert


def make_report(
    command: str,
    parameters: dict,
    results: dict,
    certificates: Iterable[dict] = (),
    seed: Optional[int] = None,
    timing_ms: Optional[int] = None,
) -> dict:
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "results": results,
        "certificates": list(certificates),
    }
    if seed is not None:
        report["seed"] = seed
    if timing_ms is not None:
        report["timing_ms"] = timing_ms
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing_ms"}
