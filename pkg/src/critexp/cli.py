"""Command-line surface.

Subcommands: exponent, thue-morse, build {cr,prefix,extend,near-zero},
explore {bounds,counterexample,achievable}, kappa {bound,horseshoe,liyorke,
fixed-candidates,probe,sup}, report, plot.  Every command emits one JSON
report on stdout.  Exit codes: 0 success, 1 usage/validation error, 2
search completed with an empty result, 3 node budget exhausted (INCOMPLETE,
certificates suppressed).

The CRITEXP_NODE_BUDGET environment variable sets the default node budget
for explorer commands (0 disables it); --budget overrides.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import reports
from .construct import build_cr, build_near_zero, build_with_tm_prefix, extend_word, make_schedule
from .dynamics import (
    X_TAU_KAPPA,
    a2n_member,
    fixed_point_candidates,
    horseshoe_certificate,
    kappa_n_upper_bound,
    kappa_sup_truncated,
    liyorke_witnesses,
    measure_probe,
)
from .explore import STATUS_UNKNOWN, achievable_exponents, counterexample_search, ew_bounds
from .exponent import critical_exponent, prefix_exponents
from .values import ValidationError, format_rational, parse_rational
from .words import FiniteWord, thue_morse_prefix

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_EMPTY = 2
EXIT_BUDGET = 3

DEFAULT_NODE_BUDGET = 5_000_000


@dataclass
class Outcome:
    results: dict
    certificates: List[dict]
    exit_code: int = EXIT_OK
    seed: Optional[int] = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2; usage errors are exit 1 here
        raise ValidationError("usage", message)


def _word(text: str, base: int = 2) -> FiniteWord:
    return FiniteWord.from_string(text, base=base)


def _bracket_payload(lo: Fraction, hi: Fraction) -> list:
    return [format_rational(lo), format_rational(hi)]


def _default_budget() -> int:
    raw = os.environ.get("CRITEXP_NODE_BUDGET", "")
    if raw.strip():
        try:
            return max(0, int(raw))
        except ValueError:
            raise ValidationError("budget-env", f"CRITEXP_NODE_BUDGET must be an integer, got {raw!r}")
    return DEFAULT_NODE_BUDGET


# ---------------------------------------------------------------------------
# command handlers: pure functions of canonical parameter dicts


def _cmd_exponent(params: dict) -> Outcome:
    base = int(params.get("base", 2))
    w = _word(params["word"], base=base)
    value, witness = critical_exponent(w)
    results = {
        "word": params["word"],
        "base": base,
        "length": len(w),
        "value": format_rational(value),
    }
    certificates = []
    if witness is None:
        results["witness"] = None
    else:
        results["witness"] = {"start": witness.start, "length": witness.length, "period": witness.period}
        certificates.append(
            reports.certificate(
                reports.MACHINE_CHECKED,
                "witness subword has the stated period and attains the exponent",
                word=params["word"],
                witness=results["witness"],
                value=results["value"],
            )
        )
    return Outcome(results, certificates)


def _cmd_thue_morse(params: dict) -> Outcome:
    length = int(params["length"])
    if length < 0:
        raise ValidationError("prefix-length", "length must be nonnegative")
    word = thue_morse_prefix(length)
    idx = np.arange(length, dtype=np.uint64)
    recurrence = np.bitwise_count(idx).astype(np.uint8) & 1
    if not np.array_equal(recurrence, word.digits):
        raise AssertionError("doubling construction disagrees with the parity recurrence")
    results = {"length": length, "word": str(word)}
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "digits match the independent parity-of-ones recurrence",
            length=length,
        )
    ]
    return Outcome(results, certs)


def _measured_prefix_payload(point, depth: int, alpha: Optional[Fraction]) -> tuple:
    """Per-length exponent checks for a constructed point; returns
    (results-fragment, machine certificates)."""
    prefix = point.prefix(depth)
    profile = prefix_exponents(prefix)
    measured = profile[-1]
    lo, hi = point.bracket(depth)
    fragment = {
        "certification_depth": depth,
        "measured_prefix_exponent": format_rational(measured),
        "value_bracket": _bracket_payload(lo, hi),
        "prefix_head": str(prefix[: min(64, depth)]),
    }
    certs = []
    floor_ok = all(e >= 2 for e in profile[1:])
    certs.append(
        reports.certificate(
            reports.MACHINE_CHECKED,
            "every prefix of length >= 2 has exponent >= 2",
            depth=depth,
            holds=bool(floor_ok),
        )
    )
    if alpha is not None:
        below = all(e < alpha for e in profile) if alpha > 2 else all(e <= alpha for e in profile)
        certs.append(
            reports.certificate(
                reports.MACHINE_CHECKED,
                "every measured prefix exponent stays within the target",
                depth=depth,
                target=format_rational(alpha),
                strict=bool(alpha > 2),
                holds=bool(below),
            )
        )
    return fragment, certs


def _paper_claim(point) -> dict:
    return reports.certificate(
        reports.PAPER_BACKED,
        "the full infinite word attains the stated exponent exactly",
        exponent=format_rational(point.exponent),
        provenance=point.provenance,
    )


def _cmd_build_cr(params: dict) -> Outcome:
    alpha = parse_rational(params["alpha"])
    stages = int(params.get("stages", 4))
    depth = int(params.get("depth", 4096))
    schedule = make_schedule(alpha, stages)
    point = build_cr(schedule)
    fragment, certs = _measured_prefix_payload(point, depth, alpha)
    prefix = point.prefix(depth)
    text = str(prefix)
    results = {
        "construction": point.provenance,
        "starts_001": text.startswith("001"),
        "contains_000": "000" in text,
        **fragment,
    }
    certs.append(
        reports.certificate(
            reports.MACHINE_CHECKED,
            "the emitted prefix begins 001 and avoids 000",
            depth=depth,
            holds=bool(results["starts_001"] and not results["contains_000"]),
        )
    )
    certs.append(_paper_claim(point))
    return Outcome(results, certs)


def _cmd_build_prefix(params: dict) -> Outcome:
    alpha = parse_rational(params["alpha"])
    word = _word(params["word"])
    depth = int(params.get("depth", 4096))
    point = build_with_tm_prefix(word, alpha)
    fragment, certs = _measured_prefix_payload(point, depth, alpha)
    starts = point.prefix(len(word)) == word if len(word) else True
    results = {"construction": point.provenance, "starts_with_word": bool(starts), **fragment}
    certs.append(
        reports.certificate(
            reports.MACHINE_CHECKED,
            "the stream begins with the requested factor",
            word=params["word"],
            holds=bool(starts),
        )
    )
    certs.append(_paper_claim(point))
    return Outcome(results, certs)


def _count_zero_blocks(text: str, length: int) -> int:
    """Maximal runs of zeros of exactly the given length."""
    count = 0
    run = 0
    for ch in text + "1":
        if ch == "0":
            run += 1
        else:
            if run == length:
                count += 1
            run = 0
    return count


def _cmd_build_extend(params: dict) -> Outcome:
    alpha = parse_rational(params["alpha"])
    word = _word(params["word"])
    depth = int(params.get("depth", 4096))
    point = extend_word(word, alpha)
    fragment, certs = _measured_prefix_payload(point, depth, alpha)
    text = str(point.prefix(depth))
    starts = text.startswith(str(word))
    blocks = _count_zero_blocks(text, len(word))
    results = {
        "construction": point.provenance,
        "starts_with_word": bool(starts),
        "zero_block_occurrences": blocks,
        **fragment,
    }
    certs.append(
        reports.certificate(
            reports.MACHINE_CHECKED,
            "the stream begins with w and the zero block of length len(w) occurs exactly once",
            word=params["word"],
            depth=depth,
            holds=bool(starts and blocks == 1),
        )
    )
    certs.append(_paper_claim(point))
    return Outcome(results, certs)


def _cmd_build_near_zero(params: dict) -> Outcome:
    n = int(params["n"])
    y = parse_rational(params["y"])
    depth = int(params.get("depth", 4096))
    point = build_near_zero(n, y)
    lo, hi = point.bracket(depth)
    ceiling = Fraction(1, 2 ** (2 ** n))
    inside = 0 <= lo and hi <= ceiling
    results = {
        "construction": point.provenance,
        "kappa_value": format_rational(point.kappa()),
        "bracket_within_bound": bool(inside),
        "bound": format_rational(ceiling),
    }
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "the value bracket lies within [0, 2^-2^n]",
            depth=depth,
            bound=format_rational(ceiling),
            holds=bool(inside),
        ),
        _paper_claim(point),
    ]
    if not point.exponent.is_infinite:
        fragment, more = _measured_prefix_payload(point, depth, point.exponent.as_fraction())
        results.update(fragment)
        certs.extend(more)
    return Outcome(results, certs)


def _search_kwargs(params: dict) -> dict:
    return {
        "split": int(params.get("split", 0)),
        "workers": int(params.get("workers", 1)),
        "node_budget": int(params.get("budget", 0)),
    }


def _cmd_explore_bounds(params: dict) -> Outcome:
    w = _word(params["word"])
    depth = int(params["depth"])
    report = ew_bounds(w, depth, **_search_kwargs(params))
    results = {
        "word": params["word"],
        "depth": depth,
        "lower": format_rational(report.lower),
        "minimizing_extension": str(report.minimizer),
        "upper": format_rational(report.upper),
        "upper_provenance": report.upper_provenance,
        "nodes": report.nodes,
        "complete": report.complete,
    }
    if not report.complete:
        return Outcome(results, [], exit_code=EXIT_BUDGET)
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "exact minimum exponent over all depth-d extensions; a lower bound for every infinite extension",
            word=params["word"],
            depth=depth,
            lower=results["lower"],
            minimizer=results["minimizing_extension"],
        )
    ]
    if report.upper_provenance is not None:
        certs.append(
            reports.certificate(
                reports.PAPER_BACKED,
                "a construction extends w to an infinite word attaining the upper bound exactly",
                upper=results["upper"],
                provenance=report.upper_provenance,
            )
        )
    return Outcome(results, certs)


def _cmd_explore_counterexample(params: dict) -> Outcome:
    max_len = int(params["max_len"])
    depth = int(params["depth"])
    budget = int(params.get("budget", 0))
    outcome = counterexample_search(max_len, depth, node_budget=budget)
    records = [
        {
            "word": str(rec.word),
            "exponent": format_rational(rec.exponent),
            "threshold": format_rational(rec.threshold),
            "certificate_depth": rec.certificate_depth,
            "lower_bound": format_rational(rec.lower_bound),
            "negation_partner": rec.negation_partner,
        }
        for rec in outcome.records
    ]
    results = {
        "max_len": max_len,
        "depth": depth,
        "records": records,
        "words_scanned": outcome.words_scanned,
        "nodes": outcome.nodes,
        "complete": outcome.complete,
    }
    if not outcome.complete:
        return Outcome(results, [], exit_code=EXIT_BUDGET)
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "for each record, every extension of the word to the certificate depth exceeds max(2, E(word))",
            count=len(records),
        )
    ]
    return Outcome(results, certs, exit_code=EXIT_OK if records else EXIT_EMPTY)


def _cmd_explore_achievable(params: dict) -> Outcome:
    w = _word(params["word"])
    depth = int(params["depth"])
    targets = [parse_rational(t) for t in params["targets"]]
    budget = int(params.get("budget", 0))
    report = achievable_exponents(w, targets, depth, node_budget=budget)
    results = {
        "word": params["word"],
        "depth": depth,
        "lower_bound": format_rational(report.lower_bound),
        "targets": [
            {"alpha": format_rational(t.alpha), "status": t.status, "detail": t.detail}
            for t in report.targets
        ],
        "nodes": report.nodes,
        "complete": report.complete,
        "note": "evidence, not proof",
    }
    if not report.complete:
        return Outcome(results, [], exit_code=EXIT_BUDGET)
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "statuses derived from an exact depth-d minimum and explicit construction certificates",
            depth=depth,
        )
    ]
    code = EXIT_OK if any(t.status != STATUS_UNKNOWN for t in report.targets) else EXIT_EMPTY
    return Outcome(results, certs, exit_code=code)


def _cmd_kappa_bound(params: dict) -> Outcome:
    base = int(params.get("base", 2))
    depth = int(params["depth"])
    if params.get("x") is not None:
        x = parse_rational(params["x"])
        source = {"x": params["x"]}
        subject = x
    else:
        subject = _word(params["word"], base=base)
        source = {"word": params["word"]}
    bound = kappa_n_upper_bound(subject, base, depth)
    membership = a2n_member(subject, base, depth)
    results = {
        **source,
        "base": base,
        "depth": depth,
        "bound": format_rational(bound),
        "digit_membership": {
            "status": membership.status,
            "witness_position": membership.witness_position,
            "witness_digit": membership.witness_digit,
        },
    }
    if params.get("series"):
        from .dynamics import _expansion_prefix

        prefix = _expansion_prefix(subject, base, depth)
        profile = prefix_exponents(prefix)
        results["series"] = [
            {"depth": k + 1, "bound": format_rational(e.reciprocal())} for k, e in enumerate(profile)
        ]
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "reciprocal of the exact prefix exponent; an upper bound on the kappa value, nonincreasing in depth",
            depth=depth,
            bound=results["bound"],
        )
    ]
    return Outcome(results, certs)


def _cmd_kappa_horseshoe(params: dict) -> Outcome:
    m = int(params["m"])
    cert = horseshoe_certificate(m)
    results = {
        "order": cert.order,
        "intervals": [
            {
                "word": str(c.word),
                "closed": c.closed,
                "lower": format_rational(c.lower),
                "upper": format_rational(c.upper),
            }
            for c in cert.intervals
        ],
        "factor_positions": list(cert.factor_positions),
        "x_tau_bracket": [str(cert.x_tau_lower), str(cert.x_tau_upper)],
        "x_tau_kappa": format_rational(X_TAU_KAPPA),
        "x_tau_precision": cert.x_tau_precision,
        "adjacent_gaps": [list(gap) for gap in cert.adjacent_gaps],
        "entropy_lower_bound": {"form": "log", "argument": cert.entropy_log_argument},
    }
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "intervals are pairwise disjoint, strictly left of x_tau, and their words occur in the Thue-Morse sequence",
            order=m,
        ),
        reports.certificate(
            reports.PAPER_BACKED,
            "each interval maps onto [0, 1/2), which covers J = [0, x_tau]; hence an m-horseshoe and entropy >= log m",
            order=m,
        ),
    ]
    return Outcome(results, certs)


def _cmd_kappa_liyorke(params: dict) -> Outcome:
    w1 = _word(params["w1"])
    w2 = _word(params["w2"])
    depth = int(params["depth"])
    wit = liyorke_witnesses(w1, w2, depth)
    results = {
        "w1": params["w1"],
        "w2": params["w2"],
        "depth": depth,
        "kappa_target": format_rational(wit.kappa_target),
        "z1": {"provenance": wit.z1.provenance, "bracket": _bracket_payload(*wit.z1.bracket(depth))},
        "z2": {"provenance": wit.z2.provenance, "bracket": _bracket_payload(*wit.z2.bracket(depth))},
        "z1_snapshot": format_rational(wit.z1_snapshot),
        "z2_snapshot": format_rational(wit.z2_snapshot),
        "y1": {"provenance": wit.y1.provenance, "bracket": _bracket_payload(*wit.y1_bracket)},
        "y2": {"provenance": wit.y2.provenance, "bracket": _bracket_payload(*wit.y2_bracket)},
        "separation_lower": format_rational(wit.separation_lower),
    }
    snapshot_err = format_rational(Fraction(1, 2 ** depth))
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "kappa target lies strictly inside the w2 cylinder",
            target=results["kappa_target"],
        ),
        reports.certificate(
            reports.MACHINE_CHECKED,
            "bracket placements: z1 in (0,1/4], z2 in [1/4,1/2], y1 in [0,1/16], y2 in [1/4,3/8]",
            depth=depth,
        ),
        reports.certificate(
            reports.MACHINE_CHECKED,
            "y2 - y1 exceeds 1/8 by exact bracket arithmetic",
            separation=results["separation_lower"],
        ),
        reports.certificate(
            reports.MACHINE_CHECKED,
            "kappa targets of y1/y2 are dyadic snapshots of z1/z2 within one bracket width",
            max_error=snapshot_err,
        ),
        reports.certificate(
            reports.PAPER_BACKED,
            "constructed exponents are exact for the infinite words; points inside the w1 cylinder reach y1/y2 under iteration",
            depth=depth,
        ),
    ]
    return Outcome(results, certs)


def _cmd_kappa_fixed(params: dict) -> Outcome:
    eps = parse_rational(params["eps"])
    iterations = int(params["iterations"])
    search = fixed_point_candidates(eps, iterations)
    results = {
        "eps": params["eps"],
        "iterations": iterations,
        "cylinder_word": str(search.cylinder_word),
        "alpha_range": [format_rational(search.alpha_range[0]), format_rational(search.alpha_range[1])],
        "bisection_steps": search.bisection_steps,
        "candidates": [
            {
                "alpha": format_rational(c.alpha),
                "x_bracket": _bracket_payload(*c.x_bracket),
                "residual": _bracket_payload(*c.residual),
                "depth": c.depth,
                "status": c.status,
            }
            for c in search.candidates
        ],
        "note": search.note,
    }
    certs = [
        reports.certificate(
            reports.CANDIDATE,
            "residual bracket of x(alpha) - alpha within 2^-iterations; not a machine-certified fixed point",
            alpha=cand["alpha"],
            residual=cand["residual"],
        )
        for cand in results["candidates"]
    ]
    certs.append(
        reports.certificate(
            reports.PAPER_BACKED,
            "a true fixed point exists in every left neighborhood of x_tau",
        )
    )
    return Outcome(results, certs, exit_code=EXIT_OK if search.candidates else EXIT_EMPTY)


def _cmd_kappa_probe(params: dict) -> Outcome:
    samples = int(params["samples"])
    prefix_len = int(params["prefix_len"])
    seed = int(params["seed"])
    workers = int(params.get("workers", 1))
    stats = measure_probe(samples, prefix_len, seed, workers=workers)
    results = {
        "samples": samples,
        "prefix_len": prefix_len,
        "workers": workers,
        "histogram": [[value, count] for value, count in stats.histogram],
        "count_at_least_3": stats.count_at_least_3,
        "fraction_at_least_3": format_rational(stats.fraction_at_least_3),
        "exact_prob_contains_triple_run": format_rational(stats.exact_prob_triple_run),
        "approx": {
            "tagged": "floating-point display values only",
            "fraction_at_least_3": float(stats.fraction_at_least_3),
            "exact_prob_contains_triple_run": float(stats.exact_prob_triple_run),
        },
    }
    certs = [
        reports.certificate(
            reports.STATISTICAL,
            "empirical exponent distribution under a fixed seed; exact triple-run probability from a transfer-matrix count",
            samples=samples,
            prefix_len=prefix_len,
        )
    ]
    return Outcome(results, certs, seed=seed)


def _cmd_kappa_sup(params: dict) -> Outcome:
    x = parse_rational(params["x"])
    max_base = int(params["max_base"])
    depth = int(params["depth"])
    best, per_base = kappa_sup_truncated(x, max_base, depth)
    results = {
        "x": params["x"],
        "max_base": max_base,
        "depth": depth,
        "bound": format_rational(best),
        "per_base": [{"base": n, "bound": format_rational(b)} for n, b in per_base],
        "note": "upper-bound estimate of the base-truncated supremum only",
    }
    certs = [
        reports.certificate(
            reports.MACHINE_CHECKED,
            "per-base prefix-exponent reciprocals; maximum over bases 2..max_base",
            depth=depth,
        )
    ]
    return Outcome(results, certs)


_COMMANDS: Dict[str, Callable[[dict], Outcome]] = {
    "exponent": _cmd_exponent,
    "thue-morse": _cmd_thue_morse,
    "build cr": _cmd_build_cr,
    "build prefix": _cmd_build_prefix,
    "build extend": _cmd_build_extend,
    "build near-zero": _cmd_build_near_zero,
    "explore bounds": _cmd_explore_bounds,
    "explore counterexample": _cmd_explore_counterexample,
    "explore achievable": _cmd_explore_achievable,
    "kappa bound": _cmd_kappa_bound,
    "kappa horseshoe": _cmd_kappa_horseshoe,
    "kappa liyorke": _cmd_kappa_liyorke,
    "kappa fixed-candidates": _cmd_kappa_fixed,
    "kappa probe": _cmd_kappa_probe,
    "kappa sup": _cmd_kappa_sup,
}


def run_command(command: str, parameters: dict) -> tuple:
    """Execute a replayable command; returns (report_dict_without_timing, exit_code)."""
    if command not in _COMMANDS:
        raise ValidationError("command", f"unknown command {command!r}")
    outcome = _COMMANDS[command](parameters)
    report = reports.make_report(command, parameters, outcome.results, outcome.certificates, seed=outcome.seed)
    return report, outcome.exit_code


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> _Parser:
    parser = _Parser(prog="critexp", description="critical exponent workbench")
    parser.add_argument("--with-timing", action="store_true", help="include timing_ms in the report")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("exponent", help="exact critical exponent with witness")
    p.add_argument("word", nargs="?", default="")
    p.add_argument("--base", type=int, default=2)

    p = sub.add_parser("thue-morse", help="emit a Thue-Morse prefix")
    p.add_argument("--len", dest="length", type=int, required=True)

    p = sub.add_parser("build", help="prescribed-exponent constructions")
    bsub = p.add_subparsers(dest="builder", required=True)
    b = bsub.add_parser("cr")
    b.add_argument("--alpha", required=True)
    b.add_argument("--stages", type=int, default=4)
    b.add_argument("--depth", type=int, default=4096)
    b = bsub.add_parser("prefix")
    b.add_argument("--word", required=True)
    b.add_argument("--alpha", required=True)
    b.add_argument("--depth", type=int, default=4096)
    b = bsub.add_parser("extend")
    b.add_argument("--word", required=True)
    b.add_argument("--alpha", required=True)
    b.add_argument("--depth", type=int, default=4096)
    b = bsub.add_parser("near-zero")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--y", required=True)
    b.add_argument("--depth", type=int, default=4096)

    p = sub.add_parser("explore", help="certified extension searches")
    esub = p.add_subparsers(dest="search", required=True)
    e = esub.add_parser("bounds")
    e.add_argument("--word", required=True)
    e.add_argument("--depth", type=int, required=True)
    e.add_argument("--split", type=int, default=0)
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--budget", type=int, default=None)
    e = esub.add_parser("counterexample")
    e.add_argument("--max-len", dest="max_len", type=int, required=True)
    e.add_argument("--depth", type=int, required=True)
    e.add_argument("--budget", type=int, default=None)
    e = esub.add_parser("achievable")
    e.add_argument("--word", required=True)
    e.add_argument("--targets", required=True, help="comma-separated rationals, ascending")
    e.add_argument("--depth", type=int, required=True)
    e.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("kappa", help="exponent-map certificates")
    ksub = p.add_subparsers(dest="op", required=True)
    k = ksub.add_parser("bound")
    k.add_argument("--x", default=None)
    k.add_argument("--word", default=None)
    k.add_argument("--base", type=int, default=2)
    k.add_argument("--depth", type=int, required=True)
    k.add_argument("--series", action="store_true")
    k = ksub.add_parser("horseshoe")
    k.add_argument("--m", type=int, required=True)
    k = ksub.add_parser("liyorke")
    k.add_argument("--w1", required=True)
    k.add_argument("--w2", required=True)
    k.add_argument("--depth", type=int, default=64)
    k = ksub.add_parser("fixed-candidates")
    k.add_argument("--eps", required=True)
    k.add_argument("--iterations", type=int, required=True)
    k = ksub.add_parser("probe")
    k.add_argument("--samples", type=int, required=True)
    k.add_argument("--prefix-len", dest="prefix_len", type=int, required=True)
    k.add_argument("--seed", type=int, required=True)
    k.add_argument("--workers", type=int, default=1)
    k = ksub.add_parser("sup")
    k.add_argument("--x", required=True)
    k.add_argument("--max-base", dest="max_base", type=int, required=True)
    k.add_argument("--depth", type=int, required=True)

    p = sub.add_parser("report", help="convert or replay a stored report")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--replay", action="store_true")
    p.add_argument("file", nargs="?", default="-")

    p = sub.add_parser("plot", help="CSV series derived from reports")
    psub = p.add_subparsers(dest="series", required=True)
    q = psub.add_parser("bound")
    q.add_argument("--x", default=None)
    q.add_argument("--word", default=None)
    q.add_argument("--base", type=int, default=2)
    q.add_argument("--depth", type=int, required=True)
    q = psub.add_parser("histogram")
    q.add_argument("--samples", type=int, required=True)
    q.add_argument("--prefix-len", dest="prefix_len", type=int, required=True)
    q.add_argument("--seed", type=int, required=True)

    return parser


def _params_from_args(args) -> tuple:
    """Map parsed argv onto (command, canonical parameter dict)."""
    cmd = args.cmd
    if cmd == "exponent":
        return "exponent", {"word": args.word, "base": args.base}
    if cmd == "thue-morse":
        return "thue-morse", {"length": args.length}
    if cmd == "build":
        if args.builder == "cr":
            return "build cr", {"alpha": args.alpha, "stages": args.stages, "depth": args.depth}
        if args.builder == "prefix":
            return "build prefix", {"word": args.word, "alpha": args.alpha, "depth": args.depth}
        if args.builder == "extend":
            return "build extend", {"word": args.word, "alpha": args.alpha, "depth": args.depth}
        return "build near-zero", {"n": args.n, "y": args.y, "depth": args.depth}
    if cmd == "explore":
        budget = args.budget if args.budget is not None else _default_budget()
        if args.search == "bounds":
            return "explore bounds", {
                "word": args.word,
                "depth": args.depth,
                "split": args.split,
                "workers": args.workers,
                "budget": budget,
            }
        if args.search == "counterexample":
            return "explore counterexample", {"max_len": args.max_len, "depth": args.depth, "budget": budget}
        targets = [t.strip() for t in args.targets.split(",") if t.strip()]
        if not targets:
            raise ValidationError("targets", "need at least one target")
        return "explore achievable", {
            "word": args.word,
            "targets": targets,
            "depth": args.depth,
            "budget": budget,
        }
    if cmd == "kappa":
        if args.op == "bound":
            if (args.x is None) == (args.word is None):
                raise ValidationError("bound-input", "give exactly one of --x or --word")
            return "kappa bound", {
                "x": args.x,
                "word": args.word,
                "base": args.base,
                "depth": args.depth,
                "series": bool(args.series),
            }
        if args.op == "horseshoe":
            return "kappa horseshoe", {"m": args.m}
        if args.op == "liyorke":
            return "kappa liyorke", {"w1": args.w1, "w2": args.w2, "depth": args.depth}
        if args.op == "fixed-candidates":
            return "kappa fixed-candidates", {"eps": args.eps, "iterations": args.iterations}
        if args.op == "probe":
            return "kappa probe", {
                "samples": args.samples,
                "prefix_len": args.prefix_len,
                "seed": args.seed,
                "workers": args.workers,
            }
        return "kappa sup", {"x": args.x, "max_base": args.max_base, "depth": args.depth}
    raise ValidationError("command", f"unknown command {cmd!r}")


def _report_to_csv(report: dict) -> str:
    results = report.get("results", {})
    lines = []
    if "series" in results:
        lines.append("depth,bound")
        for row in results["series"]:
            lines.append(f"{row['depth']},{row['bound']}")
    elif "histogram" in results:
        lines.append("exponent,count")
        for value, count in results["histogram"]:
            lines.append(f"{value},{count}")
    else:
        raise ValidationError("csv-series", "report carries no series or histogram to derive CSV from")
    return "\n".join(lines) + "\n"


def _run_report_command(args) -> int:
    if args.file == "-":
        loaded = json.load(sys.stdin)
    else:
        with open(args.file) as handle:
            loaded = json.load(handle)
    if args.replay:
        replayed, code = run_command(loaded["command"], loaded["parameters"])
        sys.stdout.write(reports.dumps(replayed))
        if reports.strip_timing(replayed) != reports.strip_timing(loaded):
            sys.stderr.write("replay mismatch: stored report differs from the replayed one\n")
            return EXIT_USAGE
        return code
    if args.format == "csv":
        sys.stdout.write(_report_to_csv(loaded))
    else:
        sys.stdout.write(reports.dumps(loaded))
    return EXIT_OK


def _run_plot_command(args) -> int:
    if args.series == "bound":
        if (args.x is None) == (args.word is None):
            raise ValidationError("bound-input", "give exactly one of --x or --word")
        report, _ = run_command(
            "kappa bound",
            {"x": args.x, "word": args.word, "base": args.base, "depth": args.depth, "series": True},
        )
    else:
        report, _ = run_command(
            "kappa probe",
            {"samples": args.samples, "prefix_len": args.prefix_len, "seed": args.seed, "workers": 1},
        )
    sys.stdout.write(_report_to_csv(report))
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.cmd == "report":
            return _run_report_command(args)
        if args.cmd == "plot":
            return _run_plot_command(args)
        command, params = _params_from_args(args)
        started = time.perf_counter()
        report, code = run_command(command, params)
        if args.with_timing:
            report["timing_ms"] = int((time.perf_counter() - started) * 1000)
        sys.stdout.write(reports.dumps(report))
        return code
    except ValidationError as exc:
        error = {
            "schema_version": reports.SCHEMA_VERSION,
            "error": {"precondition": exc.precondition, "message": str(exc)},
        }
        sys.stdout.write(json.dumps(error, sort_keys=True, indent=2) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
