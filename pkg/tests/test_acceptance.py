"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines live.
Timed criteria measure compute only; kernel JIT warmup happens in the
session fixture.
"""

import time
from fractions import Fraction

import numpy as np

from critexp import _kernels
from critexp.cli import run_command
from critexp.construct import build_cr, build_near_zero, build_with_tm_prefix, extend_word, make_schedule
from critexp.dynamics import (
    _x_tau_fraction_bracket,
    fixed_point_candidates,
    horseshoe_certificate,
    liyorke_witnesses,
    measure_probe,
)
from critexp.exponent import critical_exponent_oracle, prefix_exponents
from critexp.explore import counterexample_search, min_exponent_at_depth, run_search
from critexp.reports import dumps
from critexp.words import FiniteWord, thue_morse_prefix


def check(criterion, ok, detail=""):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"{criterion} failed: {detail}"


def all_length_words_matrix(length):
    count = 1 << length
    ids = np.arange(count, dtype=np.uint32)
    shifts = np.arange(length - 1, -1, -1, dtype=np.uint32)
    return ((ids[:, None] >> shifts) & 1).astype(np.uint8)


def test_c01_oracle_equivalence():
    started = time.perf_counter()
    words = 0
    for length in range(1, 15):
        mat = all_length_words_matrix(length)
        nums, dens = _kernels.exponent_batch(mat)
        for i in range(mat.shape[0]):
            oracle = critical_exponent_oracle(FiniteWord(mat[i]))
            if oracle.num * int(dens[i]) != int(nums[i]) * oracle.den:
                check("C01", False, f"mismatch at {''.join(map(str, mat[i]))}")
            words += 1
    elapsed = time.perf_counter() - started
    check("C01", words == 32766 and elapsed < 60, f"{words} words, exact agreement, {elapsed:.1f}s < 60s")


def test_c02_paper_counterexample():
    report, _ = run_command("exponent", {"word": "00100100", "base": 2})
    cli_ok = report["results"]["value"] == "8/3" and report["results"]["witness"] == {
        "start": 0,
        "length": 8,
        "period": 3,
    }
    search = min_exponent_at_depth(FiniteWord.from_string("00100100"), 1)
    depth_ok = search.value == 3
    records = {str(rec.word) for rec in counterexample_search(8, 2).records}
    pair_ok = "00100100" in records and "11011011" in records
    check("C02", cli_ok and depth_ok and pair_ok, "E=8/3, L(1)=3, both counterexample words found")


def test_c03_thue_morse_exponent():
    started = time.perf_counter()
    profile = prefix_exponents(thue_morse_prefix(16384))
    ok = all(value == 2 for value in profile[3:])
    elapsed = time.perf_counter() - started
    check("C03", ok and elapsed < 30, f"E(prefix) = 2 for lengths 4..16384, {elapsed:.1f}s < 30s")


def test_c04_repetition_floor():
    d3 = min_exponent_at_depth(FiniteWord(), 3)
    ok = d3.value == Fraction(3, 2)
    details = ["L(3)=3/2"]
    for depth in range(4, 19):
        sequential = run_search(FiniteWord(), depth, split=min(5, depth), workers=1)
        parallel = run_search(FiniteWord(), depth, split=min(5, depth), workers=8)
        flat = run_search(FiniteWord(), depth)
        ok = ok and sequential.value == 2 and sequential == parallel and flat.value == 2
        ok = ok and flat.minimizer == sequential.minimizer
    details.append("L(d)=2 for d in [4,18], sequential == parallel")
    check("C04", ok, "; ".join(details))


def test_c05_builders_stay_below_alpha():
    ok = True
    details = []
    for alpha in (Fraction(9, 4), Fraction(5, 2), Fraction(3), Fraction(7, 2)):
        started = time.perf_counter()
        point = build_cr(make_schedule(alpha, 4))
        prefix = point.prefix(4096)
        text = str(prefix)
        profile = prefix_exponents(prefix)
        in_range = all(value >= 2 for value in profile[1:]) and all(value < alpha for value in profile)
        clean = "000" not in text and text.startswith("001")
        elapsed = time.perf_counter() - started
        ok = ok and in_range and clean and elapsed < 30
        details.append(f"alpha={alpha}: {elapsed:.1f}s")
    check("C05", ok, "2 <= E(prefix) < alpha at every length >= 2, no 000, starts 001; " + ", ".join(details))


def test_c06_tm_prefix_path():
    point = build_with_tm_prefix(thue_morse_prefix(8), Fraction(5, 2))
    starts = str(point.prefix(8)) == "01101001"
    profile = prefix_exponents(point.prefix(4096))
    check("C06", starts and profile[-1] < Fraction(5, 2), f"starts 01101001, E(prefix(4096)) = {profile[-1]}")


def test_c07_extension_path():
    point = extend_word(FiniteWord.from_string("01101"), 6)
    text = str(point.prefix(4096))
    starts = text.startswith("01101")
    zero_runs = [len(run) for run in text.replace("1", " ").split()]
    block_once = zero_runs.count(5) == 1 and max(zero_runs) == 5
    top = prefix_exponents(point.prefix(4096))[-1]
    in_range = Fraction(5) <= top.as_fraction() <= Fraction(6)
    check("C07", starts and block_once and in_range, f"00000 once, max prefix exponent = {top}")


def test_c08_near_zero_path():
    point = build_near_zero(1, Fraction(1, 2))
    lo, hi = point.bracket(64)
    inside = 0 <= lo and hi <= Fraction(1, 4)
    profile = prefix_exponents(point.prefix(4096))
    flat_two = all(value == 2 for value in profile[3:])
    check("C08", inside and flat_two, "bracket within [0, 1/4], E(prefix(k)) = 2 for k in [4, 4096]")


def test_c09_horseshoes():
    ok = True
    for m in range(2, 11):
        cert = horseshoe_certificate(m)
        pairwise = all(
            cert.intervals[a].disjoint_from(cert.intervals[b])
            for a in range(m)
            for b in range(a + 1, m)
        )
        left = all(c.upper < cert.x_tau_lower.as_fraction() for c in cert.intervals)
        occurs = all(
            thue_morse_prefix(1 << (k + 3))[pos : pos + len(c.word)] == c.word
            for k, (c, pos) in enumerate(zip(cert.intervals, cert.factor_positions), start=1)
        )
        ok = ok and pairwise and left and occurs and cert.entropy_log_argument == m
    check("C09", ok, "disjointness, placement, factor occurrence for m in [2,10]; entropy bound log m")


def test_c10_liyorke_separation():
    wit = liyorke_witnesses(FiniteWord.from_string("0"), FiniteWord.from_string("01"), 64)
    check("C10", wit.separation_lower > Fraction(1, 8), f"y2 - y1 >= {wit.separation_lower} > 1/8")


def test_c11_fixed_point_candidates():
    search = fixed_point_candidates(Fraction(1, 16), 20)
    tol = Fraction(1, 2 ** 20)
    xlo, xhi = _x_tau_fraction_bracket(256)
    ok = len(search.candidates) >= 1
    for cand in search.candidates:
        ok = ok and (cand.x_bracket[1] - cand.x_bracket[0]) < tol
        ok = ok and cand.residual[0] > -tol and cand.residual[1] < tol
        ok = ok and cand.x_bracket[1] < xlo and cand.x_bracket[0] > xhi - Fraction(1, 16)
        ok = ok and cand.status == "CANDIDATE"
    check("C11", ok, f"{len(search.candidates)} candidate(s), residual width < 2^-20, inside (x_tau - 1/16, x_tau)")


def test_c12_measure_probe():
    stats = measure_probe(10000, 64, seed=2026)
    p = stats.exact_prob_triple_run
    empirical = stats.fraction_at_least_3

    # independent transfer-matrix oracle: states (last digit, run length)
    state = {(0, 1): 1, (1, 1): 1}
    for _ in range(64 - 1):
        nxt = {(0, 1): 0, (0, 2): 0, (1, 1): 0, (1, 2): 0}
        for (digit, run), ways in state.items():
            nxt[(1 - digit, 1)] += ways
            if run == 1:
                nxt[(digit, 2)] += ways
        state = nxt
    avoiding = sum(state.values())
    oracle_p = 1 - Fraction(avoiding, 2 ** 64)
    agree = oracle_p == p

    # |empirical - p| <= 3 * sqrt(p (1-p) / n), compared exactly via squares
    diff = empirical - p
    within = diff * diff <= 9 * p * (1 - p) / stats.samples
    check("C12", agree and within, f"empirical {float(empirical):.6f} vs exact {float(p):.6f}, within 3 SE")


def test_c13_determinism():
    probe_params = {"samples": 2000, "prefix_len": 48, "seed": 99, "workers": 4}
    first, _ = run_command("kappa probe", probe_params)
    second, _ = run_command("kappa probe", probe_params)
    probe_ok = dumps(first) == dumps(second)

    bounds_params = {"word": "", "depth": 16, "split": 6, "workers": 1, "budget": 0}
    solo, _ = run_command("explore bounds", bounds_params)
    solo2, _ = run_command("explore bounds", bounds_params)
    packed, _ = run_command("explore bounds", dict(bounds_params, workers=8))
    bounds_ok = dumps(solo) == dumps(solo2) and solo["results"] == packed["results"]

    cex_params = {"max_len": 7, "depth": 2, "budget": 0}
    ca, _ = run_command("explore counterexample", cex_params)
    cb, _ = run_command("explore counterexample", cex_params)
    cex_ok = dumps(ca) == dumps(cb)

    check("C13", probe_ok and bounds_ok and cex_ok, "byte-identical replays, worker-count invariant results")
