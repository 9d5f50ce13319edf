"""Acceptance criteria, one test and one printed PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed at the end of the session (or directly when run as a script).
"""

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest

from rfiqkd import PAIRS, AnalysisSettings, CoefficientPoint, Mode, analyze, binary_entropy
from rfiqkd.attack import random_attack, soundness_check
from rfiqkd.cli import sweep_rows
from rfiqkd.keyrate import delta_bound, phase_error_rate
from rfiqkd.phase_bounds import PairBoundInput, conservative_interval, lower_bound_at, upper_bound_at

from conftest import ACCEPTANCE_LINES, table

H = 1 / math.sqrt(2)
JOBS = os.cpu_count() or 1


def report(criterion, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def fig_sweep():
    start = time.perf_counter()
    rows = sweep_rows([0.0, 0.005, 0.01, 0.02], 33, Mode.RFI, AnalysisSettings(), full_circle=True, jobs=JOBS)
    return rows, time.perf_counter() - start


def _rates(rows, e_b, upto_pi=True):
    return {r[0]: r[5] for r in rows if r[1] == e_b and (r[0] <= math.pi + 1e-12 or not upto_pi)}


def test_criterion_1_noiseless_closed_forms():
    worst, slowest = 0.0, 0.0
    for theta in (0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2, 3 * math.pi / 4, math.pi):
        start = time.perf_counter()
        t = table(0.0, theta)
        expected = {"22": math.cos(theta), "23": math.cos(math.pi / 2 + theta),
                    "32": math.cos(math.pi / 2 - theta), "33": math.cos(theta)}
        for pair in PAIRS:
            iv = conservative_interval(t, pair)
            worst = max(worst, abs(iv.lower - expected[pair.label]), abs(iv.upper - expected[pair.label]))
        slowest = max(slowest, time.perf_counter() - start)
    ok = worst <= 1e-6 and slowest <= 60
    assert report(1, ok, f"max deviation {worst:.2e} (tol 1e-6), slowest angle {slowest:.2f}s (limit 60s)")


def test_criterion_2_ideal_worked_example():
    rep = analyze(table(0.0, math.pi / 4), Mode.RFI)
    _, a, b, c = rep.diagnostics["witness"]
    tol = math.radians(2)
    angles_ok = (
        abs(abs(a) - math.pi / 4) < tol
        and abs(abs(b) - math.pi / 2) < tol
        and abs(abs(c) - math.pi / 2) < tol
        and b * c < 0
    )
    ok = rep.omega >= 0.997 and rep.rate >= 0.99 and angles_ok
    detail = (f"omega={rep.omega:.4f} (>=0.997), R={rep.rate:.4f} (>=0.99), "
              f"witness A={math.degrees(a):.2f} B={math.degrees(b):.2f} C={math.degrees(c):.2f} deg")
    assert report(2, ok, detail)


def test_criterion_3a_noiseless_sweep(fig_sweep):
    rows, _ = fig_sweep
    low = min(_rates(rows, 0.0).values())
    assert report("3(a)", low >= 0.99, f"min rate at e_b=0 over 33 angles = {low:.4f} (>=0.99)")


def test_criterion_3b_half_percent_sweep(fig_sweep):
    rows, _ = fig_sweep
    rates = _rates(rows, 0.005)
    zeros = [round(th, 4) for th, r in rates.items() if not r > 0]
    ok = not zeros
    assert report("3(b)", ok, f"e_b=0.005: min rate {min(rates.values()):.4f}, non-positive at theta={zeros}")


def test_criterion_3c_two_percent_has_zero(fig_sweep):
    rows, _ = fig_sweep
    rates = _rates(rows, 0.02)
    zeros = [round(th, 4) for th, r in rates.items() if r == 0.0]
    assert report("3(c)", bool(zeros), f"e_b=0.02: {len(zeros)} zero-rate angles, first {zeros[:3]}")


def test_criterion_3d_angle_ordering(fig_sweep):
    rows, _ = fig_sweep
    rates = _rates(rows, 0.005)

    def at(theta):
        return min(rates.items(), key=lambda kv: abs(kv[0] - theta))[1]

    r0, rq, r2, rpi = at(0.0), at(math.pi / 4), at(math.pi / 2), at(math.pi)
    ok = r0 >= rq and r2 >= rq and rpi >= rq
    assert report("3(d)", ok, f"e_b=0.005: R(0)={r0:.4f} R(pi/2)={r2:.4f} R(pi)={rpi:.4f} vs R(pi/4)={rq:.4f}")


def test_criterion_3e_mirror_symmetry(fig_sweep):
    rows, elapsed = fig_sweep
    n_eb = 4
    base = rows[: 33 * n_eb]
    mirrored = {(round(r[0], 9), r[1]): r for r in rows[33 * n_eb:]}
    # mirrored rows must carry the [0, pi] values with the cross pairs swapped
    copied = all(
        mirrored[(round(2 * math.pi - r[0], 9), r[1])][2:6] == r[2:6]
        for r in base if 0 < r[0] < math.pi
    )
    # and agree with a direct computation on the reflected tables
    worst = 0.0
    sample = [r for r in base if 0 < r[0] < math.pi][::10]
    for r in sample:
        direct = analyze(table(r[1], 2 * math.pi - r[0]))
        m = mirrored[(round(2 * math.pi - r[0], 9), r[1])]
        worst = max(worst, abs(direct.rate - m[5]), abs(direct.omega - m[2]))
    ok = copied and len(mirrored) == 31 * n_eb and worst <= 1e-9 and elapsed <= 1800
    detail = (f"{len(mirrored)} mirrored rows, mirror vs direct max |diff| {worst:.1e} on {len(sample)} points; "
              f"sweep {elapsed:.1f}s (limit 1800s)")
    assert report("3(e)", ok, detail)


def _check(seed):
    return soundness_check(random_attack(seed)).status


def test_criterion_4_soundness_fuzz():
    start = time.perf_counter()
    with ProcessPoolExecutor(max_workers=JOBS) as pool:
        statuses = list(pool.map(_check, range(500), chunksize=10))
    elapsed = time.perf_counter() - start
    violations = statuses.count("violation")
    ok = violations == 0 and elapsed <= 1200
    detail = (f"500 seeds: pass={statuses.count('pass')} degenerate={statuses.count('degenerate')} "
              f"violation={violations}, {elapsed:.1f}s (limit 1200s)")
    assert report(4, ok, detail)


def test_criterion_5_nonrfi_baseline():
    half = analyze(table(0.0, math.pi), Mode.NONRFI)
    quarter = analyze(table(0.0, math.pi / 4), Mode.NONRFI)
    rfi = analyze(table(0.0, math.pi / 4), Mode.RFI)
    ok = (
        abs(half.omega - 1.0) <= 1e-6
        and half.rate >= 0.99
        and abs(quarter.omega - 0.7071) <= 0.002
        and quarter.rate < rfi.rate
    )
    detail = (f"theta=pi: omega={half.omega:.7f} R={half.rate:.4f}; theta=pi/4: omega={quarter.omega:.4f} "
              f"R={quarter.rate:.4f} < RFI R={rfi.rate:.4f}")
    assert report(5, ok, detail)


def test_criterion_6_invariant_suites():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    failures = []

    xs = rng.uniform(0, 1, 1000)
    if not (binary_entropy(0.0) == binary_entropy(1.0) == 0.0 and binary_entropy(0.5) == 1.0):
        failures.append("entropy endpoints")
    if any(abs(binary_entropy(x) - binary_entropy(1 - x)) > 1e-13 for x in xs):
        failures.append("entropy symmetry")

    bad_phase = 0
    for _ in range(1000):
        p00, p11, p01, p10 = rng.uniform(0, 1, 4)
        s = p00 + p11 + p01 + p10
        e_bit = (p01 + p10) / s
        if phase_error_rate(e_bit, delta_bound(p00, p11, rng.uniform(0, 1)), s) < e_bit:
            bad_phase += 1
    if bad_phase:
        failures.append(f"e_phase < e_bit in {bad_phase} cases")

    widen_gap = 0.0
    for e_b, theta in ((0.01, 0.3), (0.005, 1.2), (0.02, 2.5)):
        t = table(e_b, theta)
        for pair in PAIRS:
            tight = conservative_interval(t, pair, AnalysisSettings(eps=1e-9))
            loose = conservative_interval(t, pair, AnalysisSettings(eps=1e-6))
            widen_gap = max(widen_gap, tight.upper - loose.upper, loose.lower - tight.lower)
    if widen_gap > 1e-7:
        failures.append(f"eps widening shrank an interval by {widen_gap:.1e}")

    ordered = 0
    probs = rng.uniform(0, 1, (100_000, 5))
    coeffs = rng.uniform(0, 3, (100_000, 4))
    for p, c in zip(probs, coeffs):
        inp = PairBoundInput(*p, CoefficientPoint(c[0], c[1]), CoefficientPoint(c[2], c[3]))
        if lower_bound_at(inp) > upper_bound_at(inp):
            ordered += 1
    if ordered:
        failures.append(f"lower > upper in {ordered} of 1e5 inputs")

    elapsed = time.perf_counter() - start
    ok = not failures and elapsed <= 300
    detail = ("entropy identities, e_phase>=e_bit x1000, eps monotonicity (gap "
              f"{widen_gap:.1e}), lower<=upper x1e5; {elapsed:.1f}s (limit 300s)")
    if failures:
        detail += "; failures: " + ", ".join(failures)
    assert report(6, ok, detail)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
