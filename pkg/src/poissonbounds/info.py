"""Entropies, divergences and distances between laws on the nonnegative integers.

All logarithms are natural. Total variation is the un-halved L1 distance
``sum |P(x) - Q(x)|``, which is the normalisation under which
``0.5 * tv**2 <= D(P || Q)`` is Pinsker's inequality.

The reference law ``Q`` in the two-argument functions can be a :class:`Pmf`
or anything exposing ``pmf``, ``logpmf`` and ``sf`` (e.g. :class:`PoissonLaw`).
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .dist import Pmf
from .sums import JointBinary

HORIZON_TAIL = 1e-13


def _xlogx(p: np.ndarray) -> float:
    p = p[p > 0]
    return math.fsum(p * np.log(p))


def relative_entropy(P: Pmf, Q) -> float:
    """D(P || Q) in nats; ``math.inf`` when P charges a point Q does not."""
    xs = np.flatnonzero(P.probs > 0)
    p = P.probs[xs]
    logq = np.asarray(Q.logpmf(xs), dtype=np.float64)
    if np.any(np.isneginf(logq)):
        return math.inf
    return math.fsum(p * (np.log(p) - logq))


def entropy(P: Pmf) -> float:
    return -_xlogx(P.probs)


def joint_entropy(J: JointBinary) -> float:
    return -_xlogx(J.atoms)


def binary_entropy(p: float) -> float:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return -_xlogx(np.array([p, 1.0 - p]))


def _marginal_entropy(J: JointBinary, coords: Sequence[int]) -> float:
    return -_xlogx(J.marginal(coords).ravel())


def mutual_information(J: JointBinary, left: Sequence[int], right: Sequence[int]) -> float:
    """I(X_left ; X_right) from marginal entropies."""
    left, right = list(left), list(right)
    if set(left) & set(right):
        raise ValueError("index sets must be disjoint")
    if not left or not right:
        return 0.0
    return (
        _marginal_entropy(J, left)
        + _marginal_entropy(J, right)
        - _marginal_entropy(J, left + right)
    )


def product_of_marginals(J: JointBinary) -> JointBinary:
    return JointBinary.independent(J.coordinate_means())


def _horizon(Q, start: int) -> int:
    if isinstance(Q, Pmf):
        return max(start, Q.max_index)
    k = max(start, int(math.ceil(Q.mean)))
    while Q.sf(k) >= HORIZON_TAIL:
        k = int(k * 1.25) + 5
    return k


def _aligned(P: Pmf, Q):
    """P and Q on a common grid 0..H, plus the Q-mass left beyond H."""
    H = _horizon(Q, P.max_index)
    xs = np.arange(H + 1)
    return P.pmf(xs), np.asarray(Q.pmf(xs), dtype=np.float64), Q.sf(H)


def total_variation(P: Pmf, Q) -> float:
    """Un-halved L1 distance. Mass cut off on either side counts as discrepancy."""
    p, q, q_tail = _aligned(P, Q)
    return math.fsum(np.abs(p - q)) + q_tail + P.tail


def hellinger_affinity(P: Pmf, Q) -> float:
    p, q, _ = _aligned(P, Q)
    return math.fsum(np.sqrt(p * q))


def hellinger_sq(P: Pmf, Q) -> float:
    """Sum of (sqrt P - sqrt Q)^2, which equals 2 - 2 * affinity."""
    p, q, q_tail = _aligned(P, Q)
    return math.fsum((np.sqrt(p) - np.sqrt(q)) ** 2) + q_tail + P.tail


def pinsker_tv_from_divergence(d: float) -> float:
    if d < 0:
        raise ValueError("divergence must be nonnegative")
    return min(math.sqrt(2.0 * d), 2.0)
