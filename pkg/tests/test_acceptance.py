"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records a one-line verdict that is printed in the terminal
summary (and immediately with ``pytest -s``).
"""

import math
import time

import numpy as np

from conftest import ACCEPTANCE_RESULTS
from poissonbounds.bounds import (
    compound_example_report,
    debruijn_identity_report,
    markov_example_report,
    poincare_check,
    prop1_report,
    prop2_report,
    theorem1_report,
)
from poissonbounds.campaigns import random_joint_binary, random_pmf, random_polynomial
from poissonbounds.dist import PoissonLaw, mean, pmf_bernoulli, pmf_geometric, variance
from poissonbounds.fisher import (
    convolution_lemma_residual,
    cramer_rao_lower,
    scaled_fisher_info,
    subadditive_combination,
)
from poissonbounds.info import pinsker_tv_from_divergence, total_variation
from poissonbounds.quadrature import QuadratureSpec
from poissonbounds.sums import (
    binomial_pmf,
    joint_from_markov,
    joint_oracle_summary,
    markov_spec_triangular,
    markov_sum_distribution,
    sum_independent,
)

SEED = 20240601


def record(k: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[k] = (ok, detail)
    print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_theorem1_proof_chain():
    rng = np.random.default_rng(SEED + 1)
    start = time.perf_counter()
    bad_first = bad_second = 0
    worst = -math.inf
    for _ in range(1000):
        n = int(rng.integers(1, 51))
        ps = [float(p) for p in rng.uniform(0.0, 0.5, size=n)]
        if math.fsum(ps) == 0:
            ps[0] = 0.25
        r = theorem1_report(ps)
        K = r.params["fisher_sum"]
        bad_first += not (r.lhs <= K + 1e-9)
        bad_second += not (K <= r.rhs + 1e-9)
        worst = max(worst, r.lhs - K, K - r.rhs)
    elapsed = time.perf_counter() - start
    ok = bad_first == 0 and bad_second == 0 and elapsed < 30
    record(1, ok, f"D<=K fails {bad_first}, K<=bound fails {bad_second}, "
                  f"worst excess {worst:.2e}, {elapsed:.1f}s")


def test_criterion_02_prop1_dependent():
    rng = np.random.default_rng(SEED + 2)
    start = time.perf_counter()
    failures = 0
    worst = -math.inf
    for _ in range(500):
        J = random_joint_binary(rng, 12)
        if not math.fsum(J.coordinate_means()) > 0:
            continue
        r = prop1_report(J)
        failures += not r.holds
        worst = max(worst, r.lhs - r.rhs)
    elapsed = time.perf_counter() - start
    record(2, failures == 0 and elapsed < 60,
           f"{failures} failures, worst lhs-rhs {worst:.2e}, {elapsed:.1f}s")


def test_criterion_03_binomial_equality():
    errs = []
    for n, p in [(4, 0.25), (10, 0.1), (100, 0.01)]:
        P = binomial_pmf(n, p)
        target = p * p / (1 - p)
        K = scaled_fisher_info(P)
        combo = subadditive_combination([(p, target)] * n)
        cr = cramer_rao_lower(mean(P), variance(P))
        errs.append(max(abs(K - target), abs(combo - target), abs(cr - target), abs(K - combo), abs(K - cr)))
    record(3, max(errs) <= 1e-9, f"max deviation {max(errs):.2e}")


def test_criterion_04_geometric_equality():
    single = max(abs(scaled_fisher_info(pmf_geometric(q)) - (1 - q) ** 2 / q) for q in (0.3, 0.5, 0.9))
    sums = []
    for n, lam in [(1, 1.0), (10, 1.0), (100, 1.0), (5, 3.0)]:
        q = n / (n + lam)
        S = sum_independent([pmf_geometric(q)] * n)
        combo = subadditive_combination([((1 - q) / q, (1 - q) ** 2 / q)] * n)
        sums.append(abs(scaled_fisher_info(S) - combo))
    ok = single <= 1e-9 and max(sums) <= 1e-8
    record(4, ok, f"single-geometric error {single:.2e}, negative-binomial gap {max(sums):.2e}")


def test_criterion_05_markov():
    start = time.perf_counter()
    chain_ok = True
    parts = []
    for n in (3, 10, 100, 1000):
        r = markov_example_report(n)
        chain_ok &= r.lhs <= r.params["intermediate"] + 1e-9 and r.params["intermediate"] <= r.rhs + 1e-9
        parts.append(f"n={n}: {r.lhs:.3g}<={r.params['intermediate']:.3g}<={r.rhs:.3g}")
    worst = 0.0
    for n in range(2, 17):
        spec = markov_spec_triangular(n)
        dp = markov_sum_distribution(spec).probs
        oracle = joint_oracle_summary(joint_from_markov(spec)).sum_law.probs
        worst = max(worst, float(np.max(np.abs(dp - oracle))))
    elapsed = time.perf_counter() - start
    ok = chain_ok and worst <= 1e-12 and elapsed < 60
    record(5, ok, f"{'; '.join(parts)}; DP vs oracle {worst:.1e}; {elapsed:.1f}s")


def test_criterion_06_compound():
    ok = True
    parts = []
    for ps in ([0.1] * 10, [0.05] * 40):
        total, terms = compound_example_report(ps)
        ok &= total.lhs <= total.rhs + 1e-9
        ok &= all(t.lhs <= t.rhs + 1e-9 for t in terms)
        parts.append(f"{len(ps)} terms: D={total.lhs:.4g} <= {total.rhs:.4g}")
    record(6, ok, "; ".join(parts))


def test_criterion_07_debruijn_identity():
    start = time.perf_counter()
    cases = {
        "Bern(0.5)": pmf_bernoulli(0.5),
        "Binomial(5,0.2)": binomial_pmf(5, 0.2),
        "Geom(0.5)": pmf_geometric(0.5),
    }
    ok = True
    parts = []
    for name, P in cases.items():
        r = debruijn_identity_report(P, QuadratureSpec(abs_tol=1e-5))
        gap = abs(r.lhs - r.rhs)
        ok &= gap <= 1e-4 and math.isfinite(r.params["tail_estimate"])
        parts.append(f"{name} gap {gap:.1e} tail {r.params['tail_estimate']:.1e}")
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    record(7, ok, f"{'; '.join(parts)}; {elapsed:.1f}s")


def test_criterion_08_example1_rate():
    lam, n = 1.0, 100
    tv = total_variation(binomial_pmf(n, lam / n), PoissonLaw(lam))
    p = lam / n
    t1 = pinsker_tv_from_divergence(n * p**3 / (1 - p) / lam)
    closed = (1 / 100) * math.sqrt(2 / 0.99)
    two_eps = (2 + lam / n) * lam / n
    eq4 = 2 * lam / math.sqrt(n)
    ok = abs(t1 - closed) <= 1e-15 and tv <= t1 <= two_eps and two_eps <= 2.01 / 100 + 1e-15 and eq4 > 10 * t1
    record(8, ok, f"TV {tv:.5g} <= {t1:.6g} <= {two_eps:.4g}; 2 lam/sqrt(n) column {eq4:.3g} is {eq4 / t1:.1f}x")


def test_criterion_09_convolution_lemma():
    rng = np.random.default_rng(SEED + 9)
    worst = max(convolution_lemma_residual(random_pmf(rng), random_pmf(rng)) for _ in range(500))
    record(9, worst <= 1e-8, f"worst residual over 500 pairs {worst:.2e}")


def test_criterion_10_poincare_and_prop2():
    rng = np.random.default_rng(SEED + 10)
    poincare_bad = 0
    for _ in range(200):
        lam = float(rng.uniform(0.05, 5.0))
        _, g = random_polynomial(rng, 4)
        r = poincare_check(lam, g, tol=1e-8)
        poincare_bad += not r.holds
    prop2_bad = 0
    for _ in range(1000):
        prop2_bad += not prop2_report(random_pmf(rng), tol=1e-9).holds
    record(10, poincare_bad == 0 and prop2_bad == 0,
           f"Poincare failures {poincare_bad}/200, D<=K failures {prop2_bad}/1000")
