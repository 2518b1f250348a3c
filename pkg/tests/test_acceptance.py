"""Acceptance criteria 1 to 13, one test each.

Every test prints a single ``PASS``/``FAIL`` line (visible under ``pytest -v``
or ``pytest -s``) before asserting.  Run just this module with

    pytest tests/test_acceptance.py -v
"""

import math
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from mpmath import mp, mpf

from onebit import (CoefficientStream, InadmissiblePair, PrecisionConfig, build_filter,
                    l1_norm, min_admissible_sigma, quantize)
from onebit import analysis, baselines, checks, cli
from onebit.duel import simulate_duel

from oracles import thue_morse_series_bias

GOLDEN_Q6 = "10010101101010100101101001010101101001011010100101"
GOLDEN_Q8 = "1001011001101001"
SWEEP_EPS = ("0.1", "0.05", "0.02", "0.01")

# |B| / envelope for q^(6), frozen from the sweep pipeline at 256 bits
FROZEN_RATIOS = {
    "0.1": "0.02668494170",
    "0.05": "0.01398617324",
    "0.02": "0.003365875817",
    "0.01": "0.001008273047",
}
R = mpf("0.02668494170")   # largest ratio on the grid


def report(capsys, number, ok, detail, elapsed, limit):
    ok = bool(ok) and elapsed < limit
    line = (f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail} "
            f"[{elapsed:.2f}s, limit {limit:g}s]")
    with capsys.disabled():
        sys.stdout.write("\n" + line + "\n")
    assert ok, line


def significant(x, digits=10):
    return mpmath.nstr(mpf(x), digits, strip_zeros=False)


def test_c01_golden_sequence(capsys):
    t = time.perf_counter()
    code = cli.main(["generate", "--sigma", "6", "--mu", "0", "--n", "50"])
    first = capsys.readouterr().out.splitlines()[0]
    report(capsys, 1, code == 0 and first == GOLDEN_Q6, f"q6[:50]={first}",
           time.perf_counter() - t, 1)


def test_c02_thue_morse_resemblance(capsys):
    t = time.perf_counter()
    q8 = quantize(build_filter(8, 0), None, 16).to01()
    tm = "".join("1" if baselines.thue_morse_bit(n) > 0 else "0" for n in range(16))
    report(capsys, 2, q8 == GOLDEN_Q8 == tm, f"q8[:16]={q8} tm[:16]={tm}",
           time.perf_counter() - t, 1)


def test_c03_l1_identity(capsys):
    t = time.perf_counter()
    widths = {}
    ok = True
    with mp.workprec(256):
        for sigma in (6, 8, 24, 100):
            spec = build_filter(sigma, 0, PrecisionConfig(mantissa_bits=256))
            res = l1_norm(spec, m0=200, cfg=PrecisionConfig(mantissa_bits=256), tail="zeta")
            target = mpmath.cosh(mp.pi / mpmath.sqrt(sigma))
            widths[sigma] = 2 * res.tail_bound
            ok &= res.brackets(target) and 2 * res.tail_bound < mpf("1e-20")
    detail = " ".join(f"w[{s}]={mpmath.nstr(w, 3)}" for s, w in widths.items())
    report(capsys, 3, ok, detail, time.perf_counter() - t, 5)


def test_c04_admissibility(capsys):
    t = time.perf_counter()
    ok = min_admissible_sigma(0) == 6
    with pytest.raises(InadmissiblePair):
        build_filter(5, 0)
    build_filter(6, 0.0584)
    with pytest.raises(InadmissiblePair):
        build_filter(6, 0.0585)
    with mp.workprec(128):
        bound = 2 - mpmath.cosh(mp.pi / mpmath.sqrt(6))
        ok &= mpf("0.0584") <= bound < mpf("0.0585")
    report(capsys, 4, ok, f"min_sigma(0)=6, mu bound={mpmath.nstr(bound, 8)}",
           time.perf_counter() - t, 1)


def test_c05_residual_invariant(capsys):
    t = time.perf_counter()
    rng = np.random.default_rng(20240605)
    spec = build_filter(6, 0.05)
    one = None
    violations = 0
    worst_v = worst_w = 0.0
    for _ in range(100):
        a = [Fraction(int(k), 2 ** 40) for k in rng.integers(-(2 ** 40) // 20, 2 ** 40 // 20 + 1,
                                                              size=10_000)]
        seq = quantize(spec, CoefficientStream(a, mu=Fraction(1, 20)), 10_000)
        st = seq.state
        one = 1 << st.precision
        violations += st.max_abs_v > one or st.max_abs_w > 2 * one
        worst_v = max(worst_v, st.max_abs_v / one)
        worst_w = max(worst_w, st.max_abs_w / one)
    report(capsys, 5, violations == 0,
           f"100 streams x 10^4 steps, violations={violations} "
           f"max|v|={worst_v:.6f} max|w|={worst_w:.6f}", time.perf_counter() - t, 120)


def test_c06_closed_form_oracles(capsys):
    t = time.perf_counter()
    cfg = PrecisionConfig()
    ok = True
    worst = mpf(0)
    for eps in (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100)):
        n = math.ceil(100 / -math.log2(1 - float(eps)))
        for kind in ("alternating", "four_periodic"):
            series = analysis.bias(baselines.Ordering.named(kind).prefix(n), eps, n, cfg)
            closed = baselines.closed_form_bias(kind, eps, cfg)
            with mp.workprec(256):
                gap = abs(series.value - closed.value)
                ok &= gap <= series.tail_bound + closed.tail_bound
                worst = max(worst, gap)
    for eps in (Fraction(1, 2), Fraction(1, 10)):
        closed = baselines.closed_form_bias("thue_morse", eps, cfg)
        n = math.ceil(100 / -math.log2(1 - float(eps)))
        series = analysis.bias(baselines.Ordering.thue_morse().prefix(n), eps, n, cfg)
        oracle = thue_morse_series_bias(eps, n_terms=n)
        with mp.workprec(256):
            gap = abs(series.value - closed.value)
            ok &= gap <= series.tail_bound + closed.tail_bound
            ok &= abs(oracle - series.value) < mpf(2) ** -120
            worst = max(worst, gap)
    report(capsys, 6, ok, f"max |series - closed form| = {mpmath.nstr(worst, 3)}",
           time.perf_counter() - t, 10)


def test_c07_theta_modular(capsys):
    t = time.perf_counter()
    cfg = PrecisionConfig(mantissa_bits=128)
    gaps = {lam: checks.theta_gap(lam, cfg)[2] for lam in (0.2, 0.5, 1.0, 2.0, 5.0)}
    ok = all(g < mpf("1e-25") for g in gaps.values())
    detail = "max gap " + mpmath.nstr(max(gaps.values()), 3)
    report(capsys, 7, ok, detail, time.perf_counter() - t, 1)


def test_c08_integral_representation(capsys):
    t = time.perf_counter()
    cfg = PrecisionConfig()
    gaps = []
    for x in ("0.9", "0.95", "0.99"):
        series = analysis.H_sigma(mpf(x), 6, cfg)
        quad, _ = analysis.H_sigma_integral(mpf(x), 6, cfg)
        with mp.workprec(256):
            gaps.append(abs(series.value - quad))
    h1 = analysis.H_sigma(1, 6, cfg, n0=10_000)
    ok = all(g < mpf("1e-10") for g in gaps)
    ok &= abs(h1.value) <= h1.tail_bound < mpf("5e-4")
    detail = (f"max gap {mpmath.nstr(max(gaps), 3)}, |H_6(1)|={mpmath.nstr(abs(h1.value), 3)} "
              f"<= tail {mpmath.nstr(h1.tail_bound, 3)}")
    report(capsys, 8, ok, detail, time.perf_counter() - t, 30)


def _sweep(bits):
    args = cli.build_parser().parse_args(
        ["sweep", "--sigma", "6", "--eps", ",".join(SWEEP_EPS), "--bits", str(bits)])
    return cli.sweep_rows(args)


def test_c09_decay_envelope(capsys):
    t = time.perf_counter()
    rows = _sweep(128)
    ok = True
    with mp.workprec(256):
        for r in rows:
            ok &= significant(r["ratio"]) == FROZEN_RATIOS[r["epsilon"]]
            ok &= mpf(r["ratio"]) <= R
            # N(eps) honours the tail rule
            e = mpf(Fraction(r["epsilon"]).numerator) / Fraction(r["epsilon"]).denominator
            ok &= (1 - e) ** int(r["n_terms"]) < mpf("1e-3") * mpf(r["envelope"])
        b = {r["epsilon"]: abs(mpf(r["bias"])) for r in rows}
        ok &= b["0.01"] <= mpf("1e-15")
        drop = mpmath.log(b["0.01"]) - mpmath.log(b["0.02"])
        allowed = -mp.pi ** 2 / 24 * 50 + mpmath.log(mpmath.sqrt(2)) + mpmath.log(10 * R)
        ok &= drop <= allowed
    ratios = " ".join(f"{r['epsilon']}:{significant(r['ratio'])}" for r in rows)
    detail = (f"ratios {ratios}; |B(0.01)|={mpmath.nstr(b['0.01'], 4)}; "
              f"log-drop {mpmath.nstr(drop, 5)} <= {mpmath.nstr(allowed, 5)}")
    report(capsys, 9, ok, detail, time.perf_counter() - t, 300)


def test_c10_thue_morse_sandwich(capsys):
    t = time.perf_counter()
    reports = [baselines.tm_sandwich_check(Fraction(1, 2 ** k)) for k in range(2, 9)]
    bad = [r.epsilon for r in reports if not r.holds]
    report(capsys, 10, not bad, f"eps=2^-2..2^-8, violations={len(bad)}",
           time.perf_counter() - t, 10)


def test_c11_product_identity(capsys):
    t = time.perf_counter()
    results = [checks.check_product(z) for z in (0.5, 0.7, 0.9)]
    report(capsys, 11, all(r.passed for r in results),
           "; ".join(r.detail for r in results), time.perf_counter() - t, 30)


def test_c12_precision_stability(capsys):
    t = time.perf_counter()
    n9 = analysis.terms_for_envelope(Fraction(1, 100))
    cases = {"c1": (6, 50), "c2": (8, 16), "c9": (6, n9)}
    diffs = {}
    for name, (sigma, n) in cases.items():
        lo = quantize(build_filter(sigma, 0), None, n, PrecisionConfig(mantissa_bits=128))
        hi = quantize(build_filter(sigma, 0), None, n, PrecisionConfig(mantissa_bits=256))
        diffs[name] = sum(x != y for x, y in zip(lo.bits, hi.bits)) + abs(len(lo) - len(hi))
    rows128, rows256 = _sweep(128), _sweep(256)
    same_bias = all(significant(a["bias"], 30) == significant(b["bias"], 30)
                    for a, b in zip(rows128, rows256))
    detail = f"differing symbols {diffs} (N9={n9}), sweep bias equal to 30 digits: {same_bias}"
    report(capsys, 12, not any(diffs.values()) and same_bias, detail,
           time.perf_counter() - t, 600)


def test_c13_monte_carlo(capsys):
    t = time.perf_counter()
    cfg = PrecisionConfig()
    n_alt = math.ceil(math.log(1e-12) / math.log(0.5))
    alt = baselines.Ordering.alternating().prefix(n_alt)
    rep_alt = simulate_duel(alt, 0.5, 10 ** 6, seed=2024, analytic=1 / 3)
    n_beta = math.ceil(math.log(1e-12) / math.log(0.75))
    beta = baselines.beta_expansion_ordering(Fraction(1, 4), n_beta)
    rep_beta = simulate_duel(beta.bits, 0.25, 10 ** 6, seed=2024, analytic=0.0)
    ok = abs(rep_alt.z_score) <= 4 and abs(rep_beta.z_score) <= 4
    detail = (f"alternating z={rep_alt.z_score:+.3f} (bias {rep_alt.empirical:.5f}), "
              f"beta z={rep_beta.z_score:+.3f} (bias {rep_beta.empirical:.5f})")
    report(capsys, 13, ok, detail, time.perf_counter() - t, 60)


def test_complex_region_envelope_ratio(capsys, q6_long):
    """Envelope ratio stays bounded on a grid inside the approach region R_2."""
    t = time.perf_counter()
    worst = mpf(0)
    points = 0
    zeros = CoefficientStream.zeros()
    with mp.workprec(256):
        for d in np.linspace(0.05, 0.5, 10):
            for phi in np.linspace(-1.0, 1.0, 9):
                z = 1 - mpf(d) * mpmath.expj(phi)
                if not analysis.in_region(z, 2):
                    continue
                fq = analysis.series_error(zeros, q6_long, z, len(q6_long))
                assert fq.tail_bound < mpf("1e-30")
                ratio = abs(1 - z) * abs(fq.value) / analysis.envelope(z, 6, M=2)
                worst = max(worst, ratio)
                points += 1
    line = (f"{'PASS' if worst < 1 else 'FAIL'} region check: {points} points in R_2, "
            f"max ratio {mpmath.nstr(worst, 4)} [{time.perf_counter() - t:.2f}s]")
    with capsys.disabled():
        sys.stdout.write("\n" + line + "\n")
    assert points >= 40 and worst < 1
