"""Regression tables for the worked examples: binomial rates, the square-root
regime, geometric sums and the Markov chain."""

from __future__ import annotations

import math
from typing import Iterable

from .bounds import markov_example_report
from .dist import DEFAULT_TAIL_EPS, PoissonLaw, pmf_geometric
from .fisher import scaled_fisher_info, subadditive_combination
from .info import pinsker_tv_from_divergence, total_variation
from .sums import binomial_pmf, sum_independent

REFERENCE_RATE = math.sqrt(1.0 / (2.0 * math.pi * math.e))


def example1_rows(lam: float, n_values: Iterable[int]) -> list[dict]:
    """i.i.d. Bern(lam/n): exact TV against the Pinsker form of the
    relative-entropy bound, (2 + eps) lam / n and the older rates."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    rows = []
    for n in n_values:
        if n < 10 * lam:
            raise ValueError(f"n={n} is below 10 * lambda")
        p = lam / n
        eps = lam / n
        tv = total_variation(binomial_pmf(n, p), PoissonLaw(lam))
        t1 = n * p**3 / (1.0 - p) / lam
        t1_tv = pinsker_tv_from_divergence(t1)
        two_eps = (2.0 + eps) * lam / n
        quoted = 2.0 * lam / math.sqrt(n)
        rough = math.sqrt(2.0 * n * p * p)
        rows.append({
            "n": n,
            "exact_tv": tv,
            "theorem1_tv": t1_tv,
            "two_plus_eps": two_eps,
            "rough_2lam_sqrt_n": quoted,
            "rough_pinsker": rough,
            "ordered": bool(tv <= t1_tv <= two_eps <= quoted),
        })
    return rows


def example2_rows(mu: float, n_values: Iterable[int]) -> list[dict]:
    """i.i.d. Bern(mu / sqrt(n)) against Po(mu sqrt(n))."""
    rows = []
    for n in n_values:
        p = mu / math.sqrt(n)
        if not (0 < p < 1):
            raise ValueError(f"mu / sqrt(n) = {p} is not a probability below 1")
        lam = mu * math.sqrt(n)
        tv = total_variation(binomial_pmf(n, p), PoissonLaw(lam))
        bound = p * math.sqrt(2.0 / (1.0 - p))
        asym = p * math.sqrt(2.0)
        rows.append({
            "n": n,
            "exact_tv": tv,
            "bound": bound,
            "asymptote": asym,
            "bound_over_asymptote": bound / asym,
            "reference_rate": p * REFERENCE_RATE,
            "holds": bool(tv <= bound),
        })
    return rows


def example3_row(qs: list[float], tail_eps: float = DEFAULT_TAIL_EPS) -> dict:
    """Sum of independent geometrics with parameters ``qs``."""
    if any(not (0 < q <= 1) for q in qs):
        raise ValueError("geometric parameters must lie in (0, 1]")
    lam = math.fsum((1 - q) / q for q in qs)
    if lam == 0:
        return {"qs": qs, "lam": 0.0, "suppressed": True}
    parts = [pmf_geometric(q, tail_eps) for q in qs]
    S = sum_independent(parts)
    tv = total_variation(S, PoissonLaw(lam))
    bound = math.sqrt(2.0 / lam * math.fsum((1 - q) ** 3 / q**2 for q in qs))
    fisher = scaled_fisher_info(S)
    combo = subadditive_combination([((1 - q) / q, (1 - q) ** 2 / q) for q in qs if q < 1])
    return {
        "qs": qs,
        "lam": lam,
        "exact_tv": tv,
        "bound": bound,
        "fisher_sum": fisher,
        "combination": combo,
        "equality_gap": abs(fisher - combo),
        "holds": bool(tv <= bound),
    }


def example3_rows(
    pairs: Iterable[tuple[int, float]], tail_eps: float = DEFAULT_TAIL_EPS
) -> list[dict]:
    """Equal parameters q = n / (n + lam), where the sharp estimate
    sqrt(2) lam / sqrt(n (n + lam)) applies."""
    rows = []
    for n, lam in pairs:
        q = n / (n + lam)
        row = example3_row([q] * n, tail_eps)
        row.pop("qs")
        row = {"n": n, "q": q, **row}
        row["elegant"] = math.sqrt(2.0) * lam / math.sqrt(n * (n + lam))
        row["sqrt2_lam_over_n"] = math.sqrt(2.0) * lam / n
        rows.append(row)
    return rows


def markov_rows(n_values: Iterable[int]) -> list[dict]:
    rows = []
    for n in n_values:
        r = markov_example_report(n)
        rows.append({
            "n": n,
            "exact_d": r.lhs,
            "intermediate": r.params["intermediate"],
            "bound": r.rhs,
            "holds_lower": r.params["holds_lower"],
            "holds_upper": r.params["holds_upper"],
        })
    return rows
