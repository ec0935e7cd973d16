"""Scaled score, scaled Fisher information K, and the identities around them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dist import Pmf, mean
from .sums import convolve


@dataclass(frozen=True)
class ScoreProfile:
    """``scores[x] = (x+1) P(x+1) / (lam P(x)) - 1`` wherever ``P(x) > 0``.

    Positions with ``P(x) == 0`` are undefined and hold NaN; ``defined``
    masks them out. Past the stored support P reads as 0, so the last
    support point always scores -1.
    """

    lam: float
    scores: np.ndarray
    defined: np.ndarray

    def expectation(self, P: Pmf) -> float:
        """E_P[rho], which is 0 for any law (up to truncation)."""
        m = self.defined
        return math.fsum(P.probs[m] * self.scores[m])


def scaled_score(P: Pmf) -> ScoreProfile:
    lam = mean(P)
    if not lam > 0:
        raise ValueError("scaled score needs a positive mean")
    probs = P.probs
    nxt = np.append(probs[1:], 0.0)
    x = np.arange(probs.size)
    defined = probs > 0
    scores = np.full(probs.size, np.nan)
    scores[defined] = (x[defined] + 1) * nxt[defined] / (lam * probs[defined]) - 1.0
    return ScoreProfile(lam, scores, defined)


def scaled_fisher_info(P: Pmf) -> float:
    """K = lam * E[rho^2]; zero exactly for Poisson laws."""
    prof = scaled_score(P)
    m = prof.defined
    return prof.lam * math.fsum(P.probs[m] * prof.scores[m] ** 2)


def cramer_rao_lower(lam: float, sigma_sq: float) -> float:
    """Lower bound (sigma^2 - lam)^2 / (sigma^2 lam) on K for any law with
    this mean and variance."""
    if not (lam > 0 and sigma_sq > 0):
        raise ValueError("mean and variance must be positive")
    return (sigma_sq - lam) ** 2 / (sigma_sq * lam)


def subadditive_combination(ks: Sequence[tuple[float, float]]) -> float:
    """Mean-weighted average sum (p_i / lam) K_i for independent parts given
    as (mean, K) pairs."""
    if not ks:
        raise ValueError("need at least one part")
    if any(p <= 0 for p, _ in ks):
        raise ValueError("part means must be positive")
    lam = math.fsum(p for p, _ in ks)
    return math.fsum(p * k for p, k in ks) / lam


def convolution_lemma_residual(P: Pmf, Q: Pmf) -> float:
    """Largest gap between rho_{X+Y}(z) and E[a_X rho_X(X) + a_Y rho_Y(Y) | X+Y=z].

    The conditional expectation is formed by enumerating every split
    z = x + (z - x) with both pieces charged.
    """
    p, q = mean(P), mean(Q)
    if not (p > 0 and q > 0):
        raise ValueError("both means must be positive")
    a_x, a_y = p / (p + q), q / (p + q)
    rho_x = scaled_score(P).scores
    rho_y = scaled_score(Q).scores
    F = convolve(P, Q)
    rho_s = scaled_score(F)

    worst = 0.0
    for z in np.flatnonzero(F.probs > 0):
        lo, hi = max(0, z - Q.max_index), min(z, P.max_index)
        xs = np.arange(lo, hi + 1)
        w = P.probs[xs] * Q.probs[z - xs]
        keep = w > 0
        xs, w = xs[keep], w[keep]
        if not xs.size:
            continue
        total = math.fsum(w)
        cond = math.fsum(w * (a_x * rho_x[xs] + a_y * rho_y[z - xs])) / total
        worst = max(worst, abs(rho_s.scores[z] - cond))
    return worst
