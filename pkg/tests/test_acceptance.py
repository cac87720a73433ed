"""Acceptance criteria, one check each.

Run under pytest (lines appear in the "acceptance criteria" summary section)
or directly with ``python tests/test_acceptance.py``.
"""

import math
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from qthreat import attack
from qthreat.attack import MiningAttackParams, SignatureAttackParams
from qthreat.forecast import DataTables, Forecaster
from qthreat.hashcash import BlockHeader, Target, hashcash_mine
from qthreat.momentum import (
    MomentumParams,
    classical_cost_model,
    iter_solutions,
    momentum_bruteforce_oracle,
    momentum_search,
)
from qthreat.qec import DistanceMode, QubitFormula

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

TESTS = Path(__file__).parent


def rel(value, target):
    return (value - target) / target


def within(value, target, tol):
    return abs(rel(value, target)) <= tol


def c1():
    oh = attack.mining_overheads(1e12, 5e-4, DistanceMode.REAL)
    ok = oh.schedule.layers == 3 and within(oh.c_tau, 538.6, 0.01)
    return ok, f"layers={oh.schedule.layers}, c_tau={oh.c_tau:.2f} ({rel(oh.c_tau, 538.6):+.2%} vs 538.6, tol 1%)"


def c2():
    est = attack.signature_crack_estimate(SignatureAttackParams(256, 66.6e6, 5e-4))
    days = est.tau / 86400
    ok = within(est.overheads.c_tau, 291.7, 0.15) and within(days, 6.49, 0.15)
    return ok, (f"c_tau={est.overheads.c_tau:.1f} ({rel(est.overheads.c_tau, 291.7):+.1%} vs 291.7), "
                f"crack={days:.2f} d ({rel(days, 6.49):+.1%} vs 6.49 d), tol 15%")


def c3():
    results = []
    for mode in DistanceMode:
        for formula in QubitFormula:
            est = attack.signature_crack_estimate(SignatureAttackParams(256, 10e9, 1e-5), mode, formula)
            e_t, e_q = rel(est.tau, 1800.0), rel(est.n_Q, 485550)
            results.append((max(abs(e_t), abs(e_q)), mode.value, formula.value, est.tau, est.n_Q, e_t, e_q))
    best = min(results)
    ok = best[0] <= 0.25
    default = next(r for r in results if r[1] == "real" and r[2] == "quadratic")
    return ok, (f"closest {best[1]}/{best[2]}: crack={best[3] / 60:.1f} min ({best[5]:+.1%}), "
                f"n_Q={best[4]:.0f} ({best[6]:+.1%}); default real/quadratic: {default[5]:+.1%}, "
                f"{default[6]:+.1%}; tol 25%")


def c4():
    h = attack.optimistic_hash_rate(50e9, 1e12)
    return within(h, 2.0e15, 0.02), f"h_qc={h / 1e12:.4g} TH/s (target 2.0e3 TH/s, tol 2%)"


def c5():
    f = attack.pool_attack_fraction(20, 50e9, 1e13)
    return within(f, 1e-3, 0.10), f"fraction={f:.4%} ({rel(f, 1e-3):+.1%} vs 0.1%, tol 10%)"


def c6():
    report = Forecaster(tables=DataTables.load()).crossovers("optimistic", 2017, 2042, 1)
    sig, qub = report.signature_break_year, report.qubit_sufficiency_year
    ok = sig is not None and qub is not None and abs(sig - 2027) <= 1 and abs(qub - 2028) <= 1
    return ok, f"signature_break_year={sig} (2027 +/- 1), qubit_sufficiency_year={qub} (2028 +/- 1)"


def c7():
    p = attack.ecdlp_profile(256)
    exact = (448 * 8 + 4090) * 256**3
    ok = p.toffoli_count == exact and float(f"{p.toffoli_count:.5g}") == 1.2875e11 and p.logical_qubits == 2334
    return ok, f"toffoli_count={p.toffoli_count:.0f} (= 1.2875e11 to 5 s.f.), logical_qubits={p.logical_qubits}"


def c8():
    rng = random.Random(20180101)
    start = time.perf_counter()
    mismatches = headers = solutions = 0
    for ell in (8, 10, 12):
        for _ in range(20):
            n = rng.randint(4, ell)
            t = rng.randint(1, 2**n - 1)
            params = MomentumParams(n, ell, t, ell)
            H = rng.randrange(2**n)
            mined = set(iter_solutions(H, params))
            oracle = momentum_bruteforce_oracle(H, params)
            mismatches += mined != oracle
            headers += 1
            solutions += len(oracle)
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and headers >= 50 and elapsed < 60
    return ok, f"{headers} headers, {solutions} solutions, {mismatches} mismatches, {elapsed:.1f} s"


def c9():
    n, ell, t = 16, 16, 2**7
    xs, ys = [], []
    for sb in range(8, 13):
        params = MomentumParams(n, ell, t, sb)
        assert classical_cost_model(params).memory_limited_time is not None
        evals = [momentum_search(f"cost-law-{sb}-{i}".encode(), params).h2_evals for i in range(50)]
        xs.append(sb)
        ys.append(math.log2(np.mean(evals)))
    slope = float(np.polyfit(xs, ys, 1)[0])
    opt = classical_cost_model(MomentumParams(16, 16, 2**8, 12))
    ratio = opt.classical_time / opt.quantum_lower_bound
    cube_root = 2.0 ** (math.log2(opt.optimal_time) / 3)
    ok = abs(slope + 1) <= 0.15 and ratio == cube_root
    return ok, f"slope={slope:.3f} (-1 +/- 0.15), classical/quantum at optimum={ratio:g} (T^(1/3)={cube_root:g})"


def c10():
    target = Target(2**244 - 1)
    attempts = []
    for i in range(1000):
        root = i.to_bytes(32, "big")
        attempts.append(hashcash_mine(BlockHeader(0x20000000, bytes(32), root, 1_500_000_000, 0, 0), target).attempts)
    attempts = np.array(attempts)
    p = 2.0**-12
    edges = np.unique(np.round(stats.geom.ppf(np.linspace(0, 1, 11)[1:-1], p)))
    counts = np.histogram(attempts, bins=np.concatenate(([0.5], edges + 0.5, [np.inf])))[0]
    probs = np.diff(np.concatenate(([0.0], stats.geom.cdf(np.concatenate((edges, [np.inf])), p))))
    pvalue = stats.chisquare(counts, probs * attempts.size).pvalue
    mean = attempts.mean()
    ok = within(mean, 4096, 0.10) and pvalue > 0.01
    return ok, f"mean attempts={mean:.0f} ({rel(mean, 4096):+.1%} vs 4096, tol 10%), chi-square p={pvalue:.3f}"


def c11():
    cmd = [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", "-m", "property or invariant",
           str(TESTS), "--ignore", str(TESTS / "test_acceptance.py")]
    proc = subprocess.run(cmd, capture_output=True, text=True, cwd=TESTS.parent)
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()[-200:]
    return proc.returncode == 0, f"property and invariant suites: {summary}"


CRITERIA = [
    (1, "overhead reproduction, mining", c1),
    (2, "overhead reproduction, signature", c2),
    (3, "future-hardware point", c3),
    (4, "optimistic mining model", c4),
    (5, "pool fraction", c5),
    (6, "crossover years", c6),
    (7, "ECDLP formula identity", c7),
    (8, "Momentum oracle equivalence", c8),
    (9, "Momentum cost law", c9),
    (10, "hashcash statistics", c10),
    (11, "property suites", c11),
]


def evaluate(number, name, check):
    ok, detail = check()
    line = f"{'PASS' if ok else 'FAIL'}  [{number:2d}] {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok, line


@pytest.mark.parametrize("number, name, check", CRITERIA, ids=[f"criterion_{n:02d}" for n, _, _ in CRITERIA])
def test_criterion(number, name, check):
    ok, line = evaluate(number, name, check)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
