"""Seeded randomized verification campaigns.

Every trial draws its own generator from ``SeedSequence(seed).spawn``, so a
trial's outcome depends only on (seed, trial index) and results can be
computed in any order, or in parallel, and still be reported identically.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import (
    INEQ_TOL,
    BoundReport,
    compound_example_report,
    cramer_rao_report,
    hellinger_report,
    lecam_report,
    markov_example_report,
    poincare_check,
    prop1_independent_report,
    prop1_report,
    prop2_report,
    smoothing_decay_check,
    subadditivity_report,
    theorem1_report,
    tvbound_report,
)
from .dist import DEFAULT_TAIL_EPS, Pmf, pmf_bernoulli, pmf_geometric
from .fisher import convolution_lemma_residual, scaled_score, subadditive_combination, scaled_fisher_info
from .info import mutual_information, relative_entropy, total_variation
from .sums import (
    MAX_JOINT_N,
    JointBinary,
    MarkovChainSpec,
    joint_from_markov,
    joint_oracle_summary,
    markov_sum_distribution,
    sum_independent,
)

FAMILIES = ("bernoulli-lists", "random-pmf", "joint-binary", "geometric-lists")
DEFAULT_MAX_N = {"bernoulli-lists": 50, "random-pmf": 30, "joint-binary": 12, "geometric-lists": 10}
MAX_N_CAP = {"bernoulli-lists": 2000, "random-pmf": 1000, "joint-binary": MAX_JOINT_N, "geometric-lists": 200}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CampaignConfig:
    seed: int = 42
    trials: int = 100
    family: str = "bernoulli-lists"
    max_n: int | None = None
    tail_eps: float = DEFAULT_TAIL_EPS
    tol: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.max_n is None:
            object.__setattr__(self, "max_n", DEFAULT_MAX_N[self.family])
        lo = 2 if self.family == "random-pmf" else 1
        if not (lo <= self.max_n <= MAX_N_CAP[self.family]):
            raise ConfigError(
                f"max_n for {self.family} must lie in [{lo}, {MAX_N_CAP[self.family]}]"
            )
        if not (0 < self.tail_eps <= 1e-6):
            raise ConfigError("tail_eps must lie in (0, 1e-6]")


def random_pmf(rng: np.random.Generator, max_len: int = 30) -> Pmf:
    """Normalised exponentials on a random support length in [2, max_len]."""
    size = int(rng.integers(2, max_len + 1))
    w = rng.exponential(size=size)
    return Pmf(w / math.fsum(w))


def random_bernoulli_list(rng: np.random.Generator, max_n: int, p_max: float = 0.5) -> list[float]:
    n = int(rng.integers(1, max_n + 1))
    ps = rng.uniform(0.0, p_max, size=n)
    ps[0] = max(ps[0], 1e-3)
    return [float(p) for p in ps]


def random_joint_binary(rng: np.random.Generator, max_n: int) -> JointBinary:
    """Either a small mixture of product laws with small means (weakly
    dependent, the interesting regime) or an arbitrary Dirichlet joint."""
    n = int(rng.integers(1, max_n + 1))
    if rng.random() < 0.2:
        w = rng.exponential(size=2**n)
        return JointBinary(n, w / math.fsum(w))
    k = int(rng.integers(1, 4))
    weights = rng.dirichlet(np.ones(k))
    atoms = np.zeros(2**n)
    for wgt in weights:
        ps = rng.uniform(0.0, 0.3, size=n) ** rng.uniform(1.0, 2.0)
        atoms += wgt * JointBinary.independent(ps).atoms
    return JointBinary(n, atoms / math.fsum(atoms))


def random_markov_spec(rng: np.random.Generator, n: int) -> MarkovChainSpec:
    a, b = rng.uniform(0.0, 1.0, size=2)
    return MarkovChainSpec(n, ((1 - a, a), (1 - b, b)), float(rng.uniform()))


def random_polynomial(rng: np.random.Generator, max_degree: int = 4):
    coeffs = rng.uniform(-1.0, 1.0, size=int(rng.integers(0, max_degree + 1)) + 1)
    return coeffs, (lambda x: np.polynomial.polynomial.polyval(np.asarray(x, dtype=np.float64), coeffs))


def _check(name: str, value: float, tol: float, params: dict | None = None) -> BoundReport:
    """An identity checked as ``value <= 0`` within ``tol``."""
    return BoundReport(name, value, 0.0, tol, params or {})


def _bernoulli_trial(rng, cfg) -> list[BoundReport]:
    ps = random_bernoulli_list(rng, cfg.max_n)
    tol = cfg.tol
    t1 = theorem1_report(ps, tol)
    S = sum_independent([pmf_bernoulli(p) for p in ps])
    link_tol = INEQ_TOL if tol is None else tol
    reports = [
        t1,
        BoundReport("theorem1_link_prop2", t1.lhs, t1.params["fisher_sum"], link_tol),
        BoundReport("theorem1_link_prop3", t1.params["fisher_sum"], t1.params["combination"], link_tol),
        lecam_report(ps, tol),
        prop1_independent_report(ps, tol),
        cramer_rao_report(S, tol),
        tvbound_report(S, tol),
        hellinger_report(S, tol),
        compound_example_report(ps, tol)[0],
    ]
    return reports


def _random_pmf_trial(rng, cfg) -> list[BoundReport]:
    tol = cfg.tol
    P = random_pmf(rng, cfg.max_n)
    Q = random_pmf(rng, cfg.max_n)
    parts = []
    for _ in range(int(rng.integers(2, 7))):
        kind = rng.integers(3)
        if kind == 0:
            parts.append(pmf_bernoulli(float(rng.uniform(0.01, 0.99))))
        elif kind == 1:
            parts.append(pmf_geometric(float(rng.uniform(0.3, 0.99)), cfg.tail_eps))
        else:
            parts.append(random_pmf(rng, 8))
    lam = float(rng.uniform(0.1, 5.0))
    coeffs, g = random_polynomial(rng)
    d = relative_entropy(P, Q)
    tv = total_variation(P, Q)
    return [
        prop2_report(P, tol),
        tvbound_report(P, tol),
        hellinger_report(P, tol),
        cramer_rao_report(P, tol),
        BoundReport("pinsker", 0.5 * tv * tv, d, 1e-10 if tol is None else tol),
        _check("score_mean_zero", abs(scaled_score(P).expectation(P)), 1e-10 if tol is None else tol),
        _check("convolution_lemma", convolution_lemma_residual(P, Q), 1e-8 if tol is None else tol),
        subadditivity_report(parts, tol),
        poincare_check(lam, g, tol=tol),
    ]


def _joint_binary_trial(rng, cfg) -> list[BoundReport]:
    tol = cfg.tol
    J = random_joint_binary(rng, cfg.max_n)
    reports = []
    if joint_oracle_summary(J).means.sum() > 0:
        reports.append(prop1_report(J, tol))
    if J.n >= 2:
        perm = rng.permutation(J.n)
        cut = int(rng.integers(1, J.n))
        left, right = [int(i) for i in perm[:cut]], [int(i) for i in perm[cut:]]
        mi = mutual_information(J, left, right)
        joint = J.marginal(left + right).ravel()
        prod = np.multiply.outer(J.marginal(left), J.marginal(right)).ravel()
        d = relative_entropy(Pmf(joint), Pmf(prod))
        reports.append(_check("mi_identity", abs(mi - d), 1e-10 if tol is None else tol))
    spec = random_markov_spec(rng, int(rng.integers(1, min(cfg.max_n, 16) + 1)))
    dp = markov_sum_distribution(spec).probs
    oracle = joint_oracle_summary(joint_from_markov(spec)).sum_law.probs
    reports.append(_check("markov_dp_oracle", float(np.max(np.abs(dp - oracle))), 1e-12 if tol is None else tol))
    reports.append(markov_example_report(int(rng.integers(3, 2001)), tol))
    return reports


def _geometric_trial(rng, cfg) -> list[BoundReport]:
    tol = cfg.tol
    n = int(rng.integers(1, cfg.max_n + 1))
    qs = rng.uniform(0.2, 0.99, size=n)
    parts = [pmf_geometric(float(q), cfg.tail_eps) for q in qs]
    S = sum_independent(parts)
    lam = float(rng.uniform(0.2, 3.0))
    q_eq = n / (n + lam)
    S_eq = sum_independent([pmf_geometric(q_eq, cfg.tail_eps)] * n)
    combo_eq = subadditive_combination([((1 - q_eq) / q_eq, (1 - q_eq) ** 2 / q_eq)] * n)
    ts = sorted(float(t) for t in rng.uniform(0.0, 20.0, size=3))
    return [
        subadditivity_report(parts, tol),
        prop2_report(S, tol),
        tvbound_report(S, tol),
        cramer_rao_report(S, tol),
        _check("geometric_equality", abs(scaled_fisher_info(S_eq) - combo_eq), 1e-8 if tol is None else tol,
               {"n": n, "q": q_eq}),
        smoothing_decay_check(parts[0], ts, tol, cfg.tail_eps),
    ]


TRIALS = {
    "bernoulli-lists": _bernoulli_trial,
    "random-pmf": _random_pmf_trial,
    "joint-binary": _joint_binary_trial,
    "geometric-lists": _geometric_trial,
}


def run_trial(cfg: CampaignConfig, index: int, seq: np.random.SeedSequence) -> list[BoundReport]:
    rng = np.random.default_rng(seq)
    reports = TRIALS[cfg.family](rng, cfg)
    for r in reports:
        r.params = {**r.params, "trial": index}
    return reports


def _run_trial_args(args):
    return run_trial(*args)


def run_campaign(cfg: CampaignConfig, jobs: int = 1) -> dict:
    """Run every trial and collect counts plus full dumps of failed reports."""
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    args = [(cfg, i, s) for i, s in enumerate(seqs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_trial_args, args, chunksize=max(1, cfg.trials // (4 * jobs))))
    else:
        results = [_run_trial_args(a) for a in args]

    counts: dict[str, dict[str, int]] = {}
    failures = []
    for reports in results:
        for r in reports:
            c = counts.setdefault(r.name, {"checks": 0, "failures": 0})
            c["checks"] += 1
            if not r.holds:
                c["failures"] += 1
                failures.append({"seed": cfg.seed, **r.to_dict()})
    return {
        "family": cfg.family,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "max_n": cfg.max_n,
        "checks": sum(c["checks"] for c in counts.values()),
        "failures": len(failures),
        "by_name": dict(sorted(counts.items())),
        "failed_reports": failures,
    }
