"""Acceptance gate: one test per criterion, each recording a PASS/FAIL line."""

import math
import time
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize_scalar

from divbound.bounds import brute_force_min, counterexample_search, extremal_pair, jeffrey_min, jst_min
from divbound.classical import (
    jeffrey_spec,
    jeffrey_tsallis,
    jensen_shannon_tsallis,
    kl_divergence,
    q_exp,
    q_log,
    tsallis_divergence,
)
from divbound.coding import (
    BoundVariant,
    Source,
    avg_codelength_q,
    delta_dq,
    huffman_lengths,
    induced_distribution,
    kraft_sum_exact,
    kraft_sum_q,
    redundancy_bound,
    shannon_fano_lengths,
    tsallis_entropy_base_d,
)
from divbound.quantum import (
    DensityMatrix,
    chernoff_information,
    dominance_measurement,
    fidelity,
    quantum_f_divergence,
    quantum_jeffrey,
    quantum_relative_entropy,
    random_density_matrix,
    trace_distance,
    verify_quantum_bounds,
)

from conftest import ACCEPTANCE_LINES, random_pair

EPS_GRID = [round(0.1 * k, 1) for k in range(1, 10)]


def record(number, title, ok, detail, elapsed, budget):
    ok = ok and elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail}; {elapsed:.2f}s, budget {budget:g}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_source(rng, low=2, high=10):
    k = int(rng.integers(low, high + 1))
    p = np.clip(rng.dirichlet(np.ones(k)), 1e-12, None)
    return Source(p / p.sum())


def half_l1(p, Q):
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(Q))))


def test_criterion_1_three_symbol_example():
    t0 = time.perf_counter()
    source = Source([0.5, 0.3, 0.2])
    code = shannon_fano_lengths(source, 2)
    b1 = redundancy_bound(source, code, 1.0)
    b15 = redundancy_bound(source, code, 1.5)
    elapsed = time.perf_counter() - t0
    ok = (
        code.lengths == (1, 2, 3)
        and kraft_sum_exact(code) == Fraction(7, 8)
        and abs(b1 - 0.272669) <= 1e-5
        and abs(b15 - 0.225793) <= 1e-5
    )
    detail = f"lengths={code.lengths}, kraft={kraft_sum_exact(code)}, q=1: {b1:.6f}, q=1.5: {b15:.6f}"
    record(1, "three-symbol coding example", ok, detail, elapsed, 1.0)


def test_criterion_2_tightness():
    t0 = time.perf_counter()
    worst_exact = worst_s2 = worst_s3 = 0.0
    for q in (1.0, 1.5, 2.0):
        for eps in EPS_GRID:
            P, Q = extremal_pair(eps)
            exact = {"jst": jst_min(eps, q), "jeffrey": jeffrey_min(eps, q)}
            worst_exact = max(
                worst_exact,
                abs(jensen_shannon_tsallis(P, Q, q) - exact["jst"]),
                abs(jeffrey_tsallis(P, Q, q) - exact["jeffrey"]),
            )
            for name, value in exact.items():
                worst_s2 = max(worst_s2, abs(brute_force_min(name, q, eps, support=2, grid=2000) - value))
                worst_s3 = max(worst_s3, abs(brute_force_min(name, q, eps, support=3, grid=200) - value))
    elapsed = time.perf_counter() - t0
    ok = worst_exact <= 1e-10 and worst_s2 <= 1e-4 and worst_s3 <= 1e-3
    detail = f"extremal err {worst_exact:.1e}, support-2 err {worst_s2:.1e}, support-3 err {worst_s3:.1e}"
    record(2, "closed-form minima are tight", ok, detail, elapsed, 120.0)


def test_criterion_3_q_pinsker():
    t0 = time.perf_counter()
    rng = np.random.default_rng(3)
    worst = math.inf
    for _ in range(10_000):
        k = int(rng.integers(2, 7))
        P, Q = random_pair(rng, k, alpha=float(rng.choice([0.3, 1.0, 3.0])))
        l1 = float(np.sum(np.abs(P - Q)))
        for q in (1.0, 1.2, 2.0, 5.0):
            worst = min(worst, tsallis_divergence(P, Q, q) - 0.5 * l1 * l1)
    found = counterexample_search(0.3, 100_000, seed=0)
    violation = math.nan
    if found is not None:
        Pc, Qc, _ = found
        l1 = float(np.sum(np.abs(Pc.probs - Qc.probs)))
        violation = tsallis_divergence(Pc, Qc, 0.3) - 0.5 * l1 * l1
    elapsed = time.perf_counter() - t0
    ok = worst >= -1e-12 and found is not None and violation < 0
    detail = f"min gap {worst:.3e} over 4e4 checks, q=0.3 violation {violation:.3e}"
    record(3, "q-Pinsker for q >= 1 and failure below 1", ok, detail, elapsed, 120.0)


def _prop_a_weights(lengths, d, q):
    x = np.asarray(lengths, dtype=float) * math.log(d)
    if q == 1.0:
        return np.exp(-x)
    return (1.0 + (q - 1.0) * x) ** (-1.0 / (q - 1.0))


def test_criterion_4_redundancy_bound():
    t0 = time.perf_counter()
    rng = np.random.default_rng(4)
    worst = math.inf
    prop_a_cases = 0
    for _ in range(1000):
        source = random_source(rng)
        d = int(rng.choice([2, 3]))
        code = shannon_fano_lengths(source, d)
        p = source.probs
        w = float(d) ** -np.asarray(code.lengths, dtype=float)
        for q in (1.0, 1.5, 2.0):
            bound = min(1.0, math.sqrt(max(delta_dq(source, code, q), 0.0) * math.log(d) / 2.0))
            worst = min(worst, bound + 1e-12 - half_l1(p, w / w.sum()))
            wa = _prop_a_weights(code.lengths, d, q)
            if wa.sum() <= 1.0:
                prop_a_cases += 1
                delta = delta_dq(source, code, q, BoundVariant.PROP_A)
                bound = min(1.0, math.sqrt(max(delta, 0.0) * math.log(d) / 2.0))
                worst = min(worst, bound + 1e-12 - half_l1(p, wa / wa.sum()))
    elapsed = time.perf_counter() - t0
    ok = worst >= 0.0 and prop_a_cases > 0
    detail = f"min slack {worst:.3e}, variant cases checked {prop_a_cases}"
    record(4, "total variation below the redundancy bound", ok, detail, elapsed, 120.0)


def test_criterion_5_huffman_redundancy_monotone():
    t0 = time.perf_counter()
    rng = np.random.default_rng(5)
    worst = math.inf
    complete = True
    for _ in range(1000):
        source = random_source(rng)
        code = huffman_lengths(source)
        complete &= kraft_sum_exact(code) == 1
        base = delta_dq(source, code, 1.0)
        for q in (1.1, 1.5, 2.0, 3.0, 4.0):
            worst = min(worst, delta_dq(source, code, q) + 1e-12 - base)
    elapsed = time.perf_counter() - t0
    ok = complete and worst >= 0.0
    detail = f"kraft exact 1: {complete}, min slack {worst:.3e}"
    record(5, "q-redundancy dominates the Shannon redundancy", ok, detail, elapsed, 120.0)


def test_criterion_6_quantum_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    worst = {k: 0.0 for k in ("fvdg", "chernoff", "chains", "jeffrey_bound", "l1", "monotone", "fdiv")}
    seed = 0
    for n in range(2, 7):
        for _ in range(1000):
            # mixed ranks for the fidelity and Chernoff bounds
            ra, rb = (int(x) for x in rng.integers(1, n + 1, size=2))
            rho = random_density_matrix(n, ra, seed=seed)
            sigma = random_density_matrix(n, rb, seed=seed + 1)
            d, F = trace_distance(rho, sigma), fidelity(rho, sigma)
            worst["fvdg"] = max(worst["fvdg"], (1 - d) - F, F - math.sqrt(max(0.0, 1 - d * d)))
            cq = chernoff_information(rho, sigma)
            floor = math.inf if d >= 1 else -0.5 * math.log(1 - d * d)
            if not (math.isinf(cq) and math.isinf(floor)):
                worst["chernoff"] = max(worst["chernoff"], floor - cq)

            rho = random_density_matrix(n, n, seed=seed + 2)
            sigma = random_density_matrix(n, n, seed=seed + 3)
            seed += 4
            reports = {r.name: r for r in verify_quantum_bounds(rho, sigma, tol=1e-9)}
            for name in ("pinsker", "pinsker_renyi_half", "renyi_half_sqrt_gap"):
                worst["chains"] = max(worst["chains"], -reports[name].slack)
            worst["jeffrey_bound"] = max(worst["jeffrey_bound"], -reports["jeffrey_trace_distance"].slack)
            P, Q = dominance_measurement(rho, sigma)
            l1_classical = float(np.sum(np.abs(P.probs - Q.probs)))
            worst["l1"] = max(worst["l1"], abs(l1_classical - 2 * trace_distance(rho, sigma)))
            J = quantum_jeffrey(rho, sigma)
            worst["monotone"] = max(worst["monotone"], jeffrey_tsallis(P, Q, 1.0) - J)
            worst["fdiv"] = max(worst["fdiv"], abs(quantum_f_divergence(rho, sigma, jeffrey_spec()) - J))
    equality = 0.0
    for eps in [0.0] + EPS_GRID + [0.99]:
        lo, hi = (1 - eps) / 2, (1 + eps) / 2
        cq = chernoff_information(DensityMatrix.diagonal([lo, hi]), DensityMatrix.diagonal([hi, lo]))
        equality = max(equality, abs(cq + 0.5 * math.log(1 - eps * eps)))
    elapsed = time.perf_counter() - t0
    ok = (
        worst["fvdg"] <= 1e-10
        and worst["chernoff"] <= 1e-8
        and equality <= 1e-6
        and worst["chains"] <= 1e-9
        and worst["jeffrey_bound"] <= 1e-9
        and worst["l1"] <= 1e-10
        and worst["monotone"] <= 1e-9
        and worst["fdiv"] <= 1e-9
    )
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", extremal equality {equality:.1e}"
    record(6, "quantum trace-distance bounds", ok, detail, elapsed, 120.0)


def _classical_chernoff(p, q):
    def objective(s):
        return float(np.sum(p**s * q ** (1 - s)))

    res = minimize_scalar(objective, bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-12})
    return -math.log(min(res.fun, objective(0.0), objective(1.0)))


def test_criterion_7_classical_limit():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    worst_q = 0.0
    for _ in range(200):
        P, Q = random_pair(rng, int(rng.integers(2, 7)))
        x = float(rng.uniform(0.01, 5.0))
        source = random_source(rng)
        code = shannon_fano_lengths(source, int(rng.choice([2, 3])))
        eps = float(rng.uniform(0.0, 0.99))
        for q in (1 - 1e-6, 1 + 1e-6):
            pairs = [
                (q_log(x, q), q_log(x, 1.0)),
                (q_exp(math.log(x), q), q_exp(math.log(x), 1.0)),
                (tsallis_divergence(P, Q, q), tsallis_divergence(P, Q, 1.0)),
                (jensen_shannon_tsallis(P, Q, q), jensen_shannon_tsallis(P, Q, 1.0)),
                (jeffrey_tsallis(P, Q, q), jeffrey_tsallis(P, Q, 1.0)),
                (jst_min(eps, q), jst_min(eps, 1.0)),
                (jeffrey_min(eps, q), jeffrey_min(eps, 1.0)),
                (tsallis_entropy_base_d(source, code.d, q), tsallis_entropy_base_d(source, code.d, 1.0)),
                (kraft_sum_q(code, q), kraft_sum_q(code, 1.0)),
            ]
            for variant in BoundVariant:
                pairs.append((avg_codelength_q(source, code, q, variant), avg_codelength_q(source, code, 1.0, variant)))
                pairs.append((delta_dq(source, code, q, variant), delta_dq(source, code, 1.0, variant)))
                Qi = induced_distribution(code, q, variant).probs
                pairs.append((float(np.max(np.abs(Qi - induced_distribution(code, 1.0, variant).probs))), 0.0))
            if q >= 1.0:
                pairs.append((redundancy_bound(source, code, q), redundancy_bound(source, code, 1.0)))
            worst_q = max(worst_q, max(abs(a - b) for a, b in pairs))

    worst_c = 0.0
    for _ in range(500):
        p, s = random_pair(rng, int(rng.integers(2, 7)))
        rho, sigma = DensityMatrix.diagonal(p), DensityMatrix.diagonal(s)
        diffs = [
            trace_distance(rho, sigma) - 0.5 * np.sum(np.abs(p - s)),
            fidelity(rho, sigma) - np.sum(np.sqrt(p * s)),
            quantum_relative_entropy(rho, sigma) - kl_divergence(p, s),
            quantum_jeffrey(rho, sigma) - jeffrey_tsallis(p, s, 1.0),
            quantum_f_divergence(rho, sigma, jeffrey_spec()) - jeffrey_tsallis(p, s, 1.0),
            chernoff_information(rho, sigma) - _classical_chernoff(p, s),
        ]
        P, Q = dominance_measurement(rho, sigma)
        diffs.append(np.sum(np.abs(P.probs - Q.probs)) - np.sum(np.abs(p - s)))
        worst_c = max(worst_c, max(abs(float(v)) for v in diffs))
    elapsed = time.perf_counter() - t0
    ok = worst_q <= 1e-4 and worst_c <= 1e-10
    detail = f"q-branch err {worst_q:.1e}, commuting quantum err {worst_c:.1e}"
    record(7, "classical limits", ok, detail, elapsed, 120.0)

