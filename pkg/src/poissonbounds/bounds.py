"""Each Poisson-approximation inequality as a checkable :class:`BoundReport`."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .dist import (
    DEFAULT_TAIL_EPS,
    CompoundPoissonLaw,
    Pmf,
    PoissonLaw,
    mean,
    pmf_bernoulli,
    variance,
)
from .fisher import cramer_rao_lower, scaled_fisher_info, subadditive_combination
from .info import (
    binary_entropy,
    hellinger_affinity,
    hellinger_sq,
    relative_entropy,
    total_variation,
)
from .quadrature import QuadratureSpec, adaptive_simpson
from .sums import (
    JointBinary,
    compound_sum_distribution,
    compound_term,
    joint_oracle_summary,
    markov_pair_law,
    markov_spec_triangular,
    markov_sum_distribution,
    poisson_smooth,
    sum_independent,
)

INEQ_TOL = 1e-9
IDENTITY_TOL = 1e-8
QUAD_TOL = 1e-4


@dataclass
class BoundReport:
    """One checked inequality ``lhs <= rhs`` (up to ``tolerance``).

    Chain and identity checks pass ``holds`` explicitly; their ``params``
    say how it was decided.
    """

    name: str
    lhs: float
    rhs: float
    tolerance: float
    params: dict = field(default_factory=dict)
    holds: Optional[bool] = None

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        if self.holds is None:
            self.holds = bool(self.lhs <= self.rhs + self.tolerance)

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "tolerance": self.tolerance,
            "params": self.params,
        }


def _tol(tol, default):
    return default if tol is None else tol


def _check_ps(ps: Sequence[float], allow_zero_sum: bool = False) -> float:
    for p in ps:
        if not (0.0 <= p < 1.0):
            raise ValueError(f"probabilities must lie in [0, 1), got {p}")
    lam = math.fsum(ps)
    if not allow_zero_sum and not lam > 0:
        raise ValueError("the mean of the sum must be positive")
    return lam


def bernoulli_poisson_gap(p: float) -> float:
    """Closed form of D(Bern(p) || Po(p)) = p + (1 - p) log(1 - p)."""
    if not (0.0 <= p < 1.0):
        raise ValueError(f"p must lie in [0, 1), got {p}")
    return p + (1.0 - p) * math.log1p(-p)


def prop1_report(J: JointBinary, tol: float | None = None) -> BoundReport:
    """Sum of dependent binaries vs Po(lam): D <= sum p_i^2 + entropy gap."""
    summary = joint_oracle_summary(J)
    lam = math.fsum(summary.means)
    if not lam > 0:
        raise ValueError("all coordinates are identically zero")
    lhs = relative_entropy(summary.sum_law, PoissonLaw(lam))
    smallness = math.fsum(summary.means**2)
    gap = summary.entropy_gap
    return BoundReport(
        "prop1",
        lhs,
        smallness + gap,
        _tol(tol, INEQ_TOL),
        {"n": J.n, "lam": lam, "sum_p_sq": smallness, "entropy_gap": gap},
    )


def prop1_independent_report(ps: Sequence[float], tol: float | None = None) -> BoundReport:
    """Independent special case: D <= sum p_i^2 (entropy gap is zero)."""
    lam = _check_ps(ps)
    S = sum_independent([pmf_bernoulli(p) for p in ps])
    lhs = relative_entropy(S, PoissonLaw(lam))
    return BoundReport(
        "prop1_independent", lhs, math.fsum(p * p for p in ps), _tol(tol, INEQ_TOL),
        {"n": len(ps), "lam": lam},
    )


def theorem1_report(ps: Sequence[float], tol: float | None = None) -> BoundReport:
    """Independent Bernoulli sum: D(S_n || Po(lam)) <= (1/lam) sum p^3/(1-p).

    ``params`` also carries K(S_n) and the subadditive combination so the
    intermediate links can be checked.
    """
    lam = _check_ps(ps)
    S = sum_independent([pmf_bernoulli(p) for p in ps])
    lhs = relative_entropy(S, PoissonLaw(lam))
    rhs = math.fsum(p**3 / (1.0 - p) for p in ps) / lam
    nonzero = [(p, p * p / (1.0 - p)) for p in ps if p > 0]
    return BoundReport(
        "theorem1",
        lhs,
        rhs,
        _tol(tol, INEQ_TOL),
        {
            "n": len(ps),
            "lam": lam,
            "fisher_sum": scaled_fisher_info(S),
            "combination": subadditive_combination(nonzero),
            "prop1_rhs": math.fsum(p * p for p in ps),
        },
    )


def lecam_report(ps: Sequence[float], tol: float | None = None) -> BoundReport:
    """Le Cam's bound sum p_i^2 on total variation.

    Under the un-halved L1 convention the single Bern(0.5) instance already
    breaks it, so the report's own lhs and ``holds`` use the halved
    distance; the L1 value and its flag ride along in ``params``.
    """
    lam = _check_ps(ps, allow_zero_sum=True)
    tol = _tol(tol, INEQ_TOL)
    rhs = math.fsum(p * p for p in ps)
    if lam == 0:
        return BoundReport("lecam", 0.0, rhs, tol,
                           {"convention": "halved", "tv_l1": 0.0, "holds_l1": True, "holds_halved": True})
    S = sum_independent([pmf_bernoulli(p) for p in ps])
    tv = total_variation(S, PoissonLaw(lam))
    return BoundReport(
        "lecam",
        tv / 2.0,
        rhs,
        tol,
        {
            "convention": "halved",
            "tv_l1": tv,
            "holds_l1": bool(tv <= rhs + tol),
            "holds_halved": bool(tv / 2.0 <= rhs + tol),
            "n": len(ps),
            "lam": lam,
        },
    )


def prop2_report(P: Pmf, tol: float | None = None) -> BoundReport:
    """D(P || Po(mean)) <= K(P) for a finite-support P."""
    lam = mean(P)
    lhs = relative_entropy(P, PoissonLaw(lam))
    return BoundReport("prop2", lhs, scaled_fisher_info(P), _tol(tol, INEQ_TOL),
                       {"lam": lam, "support": len(P)})


def tvbound_report(P: Pmf, tol: float | None = None) -> BoundReport:
    """||P - Po(mean)||_TV <= sqrt(2 K(P))."""
    lam = mean(P)
    K = scaled_fisher_info(P)
    lhs = total_variation(P, PoissonLaw(lam))
    return BoundReport("tvbound", lhs, math.sqrt(2.0 * K), _tol(tol, INEQ_TOL),
                       {"lam": lam, "fisher": K})


def hellinger_report(P: Pmf, tol: float | None = None) -> BoundReport:
    """Hellinger chain 2 - 2mu <= 2(1 - mu^2) <= 2K, checked link by link.

    Also records whether TV <= sqrt(Hellinger^2) happens to hold; that
    comparison is diagnostic only.
    """
    tol = _tol(tol, INEQ_TOL)
    lam = mean(P)
    Q = PoissonLaw(lam)
    K = scaled_fisher_info(P)
    h2 = hellinger_sq(P, Q)
    mu = hellinger_affinity(P, Q)
    middle = 2.0 * (1.0 - mu * mu)
    tv = total_variation(P, Q)
    return BoundReport(
        "hellinger",
        h2,
        2.0 * K,
        tol,
        {
            "affinity": mu,
            "middle": middle,
            "holds_first": bool(h2 <= middle + tol),
            "holds_second": bool(middle <= 2.0 * K + tol),
            "tv": tv,
            "tv_le_sqrt_hellinger": bool(tv <= math.sqrt(h2) + tol),
        },
        holds=bool(h2 <= middle + tol and middle <= 2.0 * K + tol),
    )


def cramer_rao_report(P: Pmf, tol: float | None = None) -> BoundReport:
    """(sigma^2 - lam)^2 / (sigma^2 lam) <= K(P)."""
    lam, var = mean(P), variance(P)
    return BoundReport("cramer_rao", cramer_rao_lower(lam, var), scaled_fisher_info(P),
                       _tol(tol, INEQ_TOL), {"lam": lam, "variance": var})


def subadditivity_report(parts: Sequence[Pmf], tol: float | None = None) -> BoundReport:
    """K(X_1 + ... + X_n) <= sum (p_i / lam) K(X_i) for independent parts."""
    S = sum_independent(parts)
    combo = subadditive_combination([(mean(P), scaled_fisher_info(P)) for P in parts])
    return BoundReport("subadditivity", scaled_fisher_info(S), combo, _tol(tol, INEQ_TOL),
                       {"parts": len(parts), "lam": mean(S)})


def _default_horizon(lam: float) -> int:
    Q = PoissonLaw(lam)
    k = int(math.ceil(lam))
    while Q.sf(k) >= 1e-13:
        k += 1
    # polynomial test functions grow fast, so go well past the mass
    return max(k, int(math.ceil(lam + 30.0 * math.sqrt(lam) + 60)))


def poincare_check(
    lam: float,
    g: Callable[[np.ndarray], np.ndarray],
    horizon: int | None = None,
    tol: float | None = None,
) -> BoundReport:
    """Var_{Po(lam)}(g) <= lam * E_{Po(lam)}[(g(x+1) - g(x))^2]."""
    H = _default_horizon(lam) if horizon is None else horizon
    xs = np.arange(H + 1)
    w = PoissonLaw(lam).pmf(xs)
    gx = np.asarray(g(xs), dtype=np.float64)
    dg = np.asarray(g(xs + 1), dtype=np.float64) - gx
    mu = math.fsum(w * gx)
    lhs = math.fsum(w * (gx - mu) ** 2)
    rhs = lam * math.fsum(w * dg**2)
    return BoundReport("poincare", lhs, rhs, _tol(tol, IDENTITY_TOL),
                       {"lam": lam, "horizon": H})


def markov_pair_information(n: int) -> float:
    """I(X_1; X_2) for the triangular-array chain, from its 2x2 pair law."""
    pair = markov_pair_law(markov_spec_triangular(n))
    row = pair.sum(axis=1)
    col = pair.sum(axis=0)
    prod = row[:, None] * col[None, :]
    m = pair > 0
    return math.fsum(pair[m] * np.log(pair[m] / prod[m]))


def markov_example_report(n: int, tol: float | None = None) -> BoundReport:
    """D(S_n || Po(1)) <= 1/n + (n-1) I(X_1; X_2) <= 3 log(n)/n + 1/n."""
    if n < 3:
        raise ValueError("the Markov example needs n >= 3")
    tol = _tol(tol, INEQ_TOL)
    S = markov_sum_distribution(markov_spec_triangular(n))
    lhs = relative_entropy(S, PoissonLaw(1.0))
    mi = markov_pair_information(n)
    middle = 1.0 / n + (n - 1) * mi
    rhs = 3.0 * math.log(n) / n + 1.0 / n
    h = binary_entropy
    closed = ((n - 1) * (h(1 / n) - h(1 / (n + 1)))
              + (n - 1) / n * h(1 / (n + 1)) - (n - 1) / n * h(2 / (n + 1)))
    return BoundReport(
        "markov",
        lhs,
        rhs,
        tol,
        {
            "n": n,
            "intermediate": middle,
            "mi_times_n_minus_1": (n - 1) * mi,
            "mi_closed_form": closed,
            "coarse": h(1 / (n + 1)) + math.log(n) / n,
            "holds_lower": bool(lhs <= middle + tol),
            "holds_upper": bool(middle <= rhs + tol),
        },
        holds=bool(lhs <= middle + tol and middle <= rhs + tol),
    )


def compound_term_bound(p: float) -> float:
    """Closed form p^2 + (1-p)(p + log(1-p)) - (p/2) log(1 + p/4) of the
    per-term divergence against Po(p/2, p/2)."""
    return p * p + (1.0 - p) * (p + math.log1p(-p)) - 0.5 * p * math.log1p(p / 4.0)


def compound_example_report(
    ps: Sequence[float], tol: float | None = None
) -> tuple[BoundReport, list[BoundReport]]:
    """D(sum alpha_i X_i || Po(lam/2, lam/2)) <= sum p_i^2, plus one report
    per summand against Po(p_i/2, p_i/2)."""
    lam = _check_ps(ps, allow_zero_sum=True)
    tol = _tol(tol, INEQ_TOL)
    rhs = math.fsum(p * p for p in ps)
    if lam == 0:
        return BoundReport("compound", 0.0, rhs, tol, {"lam": 0.0, "degenerate": True}), []
    S = compound_sum_distribution(ps)
    lhs = relative_entropy(S, CompoundPoissonLaw(lam / 2, lam / 2))
    per_term = []
    for i, p in enumerate(ps):
        if p == 0:
            per_term.append(BoundReport("compound_term", 0.0, 0.0, tol, {"i": i, "p": p}))
            continue
        d = relative_entropy(compound_term(p), CompoundPoissonLaw(p / 2, p / 2))
        per_term.append(BoundReport("compound_term", d, p * p, tol,
                                    {"i": i, "p": p, "closed_form": compound_term_bound(p)}))
    return BoundReport("compound", lhs, rhs, tol, {"lam": lam, "n": len(ps)}), per_term


def _smoothed_divergence(P: Pmf, lam: float, t: float, tail_eps: float) -> tuple[float, float]:
    """D(P_t || P~_t) with P~_t(r) = (r+1) P_t(r+1) / (lam + t), and the
    normalisation error of P~_t.

    The last stored point of P_t has no stored successor; that edge term is
    a truncation artefact and is dropped.
    """
    Pt = poisson_smooth(P, t, tail_eps)
    probs = Pt.probs
    r = np.arange(probs.size - 1)
    here, nxt = probs[:-1], probs[1:]
    norm_err = abs(math.fsum((r + 1) * nxt) / (lam + t) - 1.0)
    m = (here > 0) & (nxt > 0)
    ratio = here[m] * (lam + t) / ((r[m] + 1) * nxt[m])
    return math.fsum(here[m] * np.log(ratio)), norm_err


def _tail_estimate(f_vals: Sequence[tuple[float, float]], lam: float, t_max: float) -> float:
    """Fit c / (lam + t)^2 to the given nodes and integrate it past t_max."""
    w = np.array([1.0 / (lam + t) ** 2 for t, _ in f_vals])
    y = np.array([v for _, v in f_vals])
    c = float(w @ y / (w @ w))
    return c / (lam + t_max)


def debruijn_identity_report(
    P: Pmf,
    quad: QuadratureSpec = QuadratureSpec(),
    tail_eps: float = DEFAULT_TAIL_EPS,
) -> BoundReport:
    """D(P || Po(lam)) against the integral over t of D(P_t || P~_t).

    The integrand has an integrable log singularity at t = 0 for
    finite-support P, so the integral runs in u = sqrt(t).
    """
    lam = mean(P)
    if not lam > 0:
        raise ValueError("need a positive mean")
    t_max = 50.0 * (1.0 + lam) if quad.t_max is None else quad.t_max
    lhs = relative_entropy(P, PoissonLaw(lam))
    worst_norm = 0.0

    def integrand(t):
        nonlocal worst_norm
        d, err = _smoothed_divergence(P, lam, t, tail_eps)
        worst_norm = max(worst_norm, err)
        return d

    def in_u(u):
        return 0.0 if u == 0 else 2.0 * u * integrand(u * u)

    body, evals = adaptive_simpson(in_u, 0.0, math.sqrt(t_max), quad.abs_tol, quad.max_depth)
    nodes = [(0.9 * t_max, integrand(0.9 * t_max)), (t_max, integrand(t_max))]
    tail = _tail_estimate(nodes, lam, t_max)
    rhs = body + tail
    tolerance = max(quad.abs_tol, QUAD_TOL)
    return BoundReport(
        "debruijn",
        lhs,
        rhs,
        tolerance,
        {
            "kind": "identity",
            "lam": lam,
            "t_max": t_max,
            "integral_to_t_max": body,
            "tail_estimate": tail,
            "evaluations": evals,
            "max_normalisation_error": worst_norm,
        },
        holds=bool(abs(lhs - rhs) <= tolerance),
    )


def debruijn_diagnostic(
    P: Pmf,
    quad: QuadratureSpec = QuadratureSpec(),
    tail_eps: float = DEFAULT_TAIL_EPS,
) -> float:
    """Integral over t of K(X + Po(t)) / (2 (lam + t)), a second-order
    approximation to D(P || Po(lam)). Nothing is asserted about it."""
    lam = mean(P)
    if not lam > 0:
        raise ValueError("need a positive mean")
    t_max = 50.0 * (1.0 + lam) if quad.t_max is None else quad.t_max

    def integrand(t):
        return scaled_fisher_info(poisson_smooth(P, t, tail_eps)) / (2.0 * (lam + t))

    body, _ = adaptive_simpson(integrand, 0.0, t_max, quad.abs_tol, quad.max_depth)
    nodes = [(0.9 * t_max, integrand(0.9 * t_max)), (t_max, integrand(t_max))]
    return body + _tail_estimate(nodes, lam, t_max)


def smoothing_decay_check(
    P: Pmf, ts: Sequence[float], tol: float | None = None, tail_eps: float = DEFAULT_TAIL_EPS
) -> BoundReport:
    """K(X + Po(t)) <= lam / (lam + t) * K(X) for every t in ``ts``.

    Reported as lhs = worst excess over the bound, rhs = 0.
    """
    lam = mean(P)
    K0 = scaled_fisher_info(P)
    ks, bounds = [], []
    for t in ts:
        ks.append(scaled_fisher_info(poisson_smooth(P, t, tail_eps)))
        bounds.append(lam / (lam + t) * K0)
    excess = max(k - b for k, b in zip(ks, bounds)) if ts else 0.0
    return BoundReport("smoothing_decay", excess, 0.0, _tol(tol, IDENTITY_TOL),
                       {"lam": lam, "ts": list(ts), "fisher": ks, "bounds": bounds})
