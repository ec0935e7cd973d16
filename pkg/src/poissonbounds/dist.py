"""Finite-support distributions on the nonnegative integers.

A :class:`Pmf` is a plain probability vector indexed from 0, plus the mass
that was deliberately cut off past its last index. Full-support laws
(:class:`PoissonLaw`, :class:`CompoundPoissonLaw`) are never stored as
arrays when they appear as the reference side of a divergence; they are
evaluated pointwise in log space instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special

DEFAULT_TAIL_EPS = 1e-12
MAX_SUPPORT = 10**6
NORM_TOL = 1e-12


_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_error(n: np.ndarray) -> np.ndarray:
    """log(n!) minus its Stirling approximation, for n >= 1."""
    direct = special.gammaln(n + 1.0) - (n + 0.5) * np.log(n) + n - _HALF_LOG_2PI
    n2 = n * n
    series = (1.0 / 12 - (1.0 / 360 - (1.0 / 1260 - (1.0 / 1680 - 1.0 / (1188 * n2)) / n2) / n2) / n2) / n
    return np.where(n > 15, series, direct)


def _deviance(x: np.ndarray, m: float) -> np.ndarray:
    """x log(x/m) + m - x without cancellation when x is close to m."""
    direct = x * np.log(x / m) + m - x
    v = (x - m) / (x + m)
    near = np.abs(x - m) < 0.1 * (x + m)
    s = (x - m) * v
    term = 2.0 * x * v
    v2 = v * v
    for j in range(1, 60):
        term = term * v2
        s = s + term / (2 * j + 1)
    return np.where(near, s, direct)


@dataclass(frozen=True)
class Pmf:
    """Probability mass function on {0, 1, ..., len(probs) - 1}.

    ``tail`` is the probability mass acknowledged as lying beyond the last
    index. It is exactly 0 for sums of finitely many finite-support parts.
    """

    probs: np.ndarray
    tail: float = 0.0
    mean_cache: Optional[float] = field(default=None, compare=False)
    var_cache: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a non-empty 1-D array")
        if np.any(probs < 0) or np.any(probs > 1):
            raise ValueError("probabilities must lie in [0, 1]")
        if not (0.0 <= self.tail <= 1.0):
            raise ValueError(f"tail mass must lie in [0, 1], got {self.tail}")
        total = math.fsum(probs) + self.tail
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"mass plus tail is {total!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        support = np.arange(probs.size, dtype=np.float64)
        m = math.fsum(support * probs)
        if self.mean_cache is None:
            object.__setattr__(self, "mean_cache", m)
        if self.var_cache is None:
            v = math.fsum((support - m) ** 2 * probs)
            object.__setattr__(self, "var_cache", v)

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, k):
        return self.probs[k]

    @property
    def max_index(self) -> int:
        return self.probs.size - 1

    def pmf(self, k) -> np.ndarray:
        """Point probabilities at integer(s) ``k``; 0 outside the stored range."""
        k = np.asarray(k)
        out = np.zeros(k.shape, dtype=np.float64)
        inside = (k >= 0) & (k < self.probs.size)
        out[inside] = self.probs[k[inside]]
        return out

    def logpmf(self, k) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.pmf(k))

    def sf(self, k: int) -> float:
        """Mass strictly above ``k`` (stored mass plus the truncated tail)."""
        if k < 0:
            return 1.0
        return math.fsum(self.probs[k + 1:]) + self.tail

    def to_dict(self) -> dict:
        return {"probs": [float(p) for p in self.probs], "tail": float(self.tail)}

    @classmethod
    def point_mass(cls, k: int = 0) -> "Pmf":
        probs = np.zeros(k + 1)
        probs[k] = 1.0
        return cls(probs)


def mean(P: Pmf) -> float:
    """Mean of the stored mass. The truncated tail contributes nothing."""
    return P.mean_cache


def variance(P: Pmf) -> float:
    return P.var_cache


@dataclass(frozen=True)
class PoissonLaw:
    """Poisson(lam), evaluated pointwise without truncation."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"Poisson rate must be positive, got {self.lam}")

    def logpmf(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            kk = np.maximum(k, 1.0)
            saddle = -_stirling_error(kk) - _deviance(kk, self.lam) - 0.5 * np.log(2.0 * math.pi * kk)
        out = np.where(k == 0, -self.lam, saddle)
        return np.where(k < 0, -np.inf, out)

    def pmf(self, k) -> np.ndarray:
        return np.exp(self.logpmf(k))

    def sf(self, k: int) -> float:
        """P(X > k), accurate deep into the upper tail."""
        if k < 0:
            return 1.0
        return float(special.pdtrc(k, self.lam))

    @property
    def mean(self) -> float:
        return self.lam


@dataclass(frozen=True)
class CompoundPoissonLaw:
    """Law of Z1 + 2*Z2 with independent Z1 ~ Po(lam1), Z2 ~ Po(lam2).

    Pointwise values come from the Panjer recursion
    ``k g(k) = lam1 g(k-1) + 2 lam2 g(k-2)`` seeded at ``g(0) = exp(-lam1 - lam2)``,
    carried in rescaled form so large rates do not underflow.
    """

    lam1: float
    lam2: float

    def __post_init__(self):
        if self.lam1 < 0 or self.lam2 < 0:
            raise ValueError("compound Poisson rates must be nonnegative")
        if self.lam1 == 0 and self.lam2 == 0:
            raise ValueError("compound Poisson rates cannot both be zero")

    @property
    def mean(self) -> float:
        return self.lam1 + 2.0 * self.lam2

    def _log_table(self, kmax: int) -> np.ndarray:
        logs = np.full(kmax + 1, -np.inf)
        logs[0] = -(self.lam1 + self.lam2)
        # g(k) = exp(offset) * scaled[k]; rescale whenever values drift
        offset = logs[0]
        prev2, prev1 = 0.0, 1.0
        for k in range(1, kmax + 1):
            cur = (self.lam1 * prev1 + 2.0 * self.lam2 * prev2) / k
            if cur > 0:
                logs[k] = offset + math.log(cur)
            prev2, prev1 = prev1, cur
            if cur > 1e100 or (0 < cur < 1e-100):
                offset += math.log(cur)
                prev2, prev1 = prev2 / cur, 1.0
        return logs

    def logpmf(self, k) -> np.ndarray:
        k = np.asarray(k)
        if k.size == 0:
            return np.zeros(k.shape)
        kmax = int(max(np.max(k), 0))
        table = self._log_table(kmax)
        out = np.full(k.shape, -np.inf)
        ok = k >= 0
        out[ok] = table[k[ok]]
        return out

    def pmf(self, k) -> np.ndarray:
        return np.exp(self.logpmf(k))

    def sf(self, k: int) -> float:
        if k < 0:
            return 1.0
        head = math.fsum(np.exp(self._log_table(k)))
        return max(0.0, 1.0 - head)


def pmf_bernoulli(p: float) -> Pmf:
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"Bernoulli parameter must lie in [0, 1], got {p}")
    if p == 0.0:
        return Pmf(np.array([1.0]))
    return Pmf(np.array([1.0 - p, p]))


def _poisson_cutoff(lam: float, tail_eps: float) -> int:
    """Smallest N with P(X > N) <= tail_eps."""
    start = int(math.ceil(lam))
    hi = int(math.ceil(lam + 10.0 * math.sqrt(lam) + 20))
    while True:
        if start > MAX_SUPPORT:
            raise ValueError(f"Poisson({lam}) truncation index exceeds {MAX_SUPPORT}")
        ks = np.arange(start, min(hi, MAX_SUPPORT) + 1)
        tails = special.pdtrc(ks, lam)
        hit = np.flatnonzero(tails <= tail_eps)
        if hit.size:
            return int(ks[hit[0]])
        start, hi = hi + 1, 2 * hi


def pmf_poisson_truncated(lam: float, tail_eps: float = DEFAULT_TAIL_EPS) -> Pmf:
    if not lam > 0:
        raise ValueError(f"Poisson rate must be positive, got {lam}")
    if not (0 < tail_eps <= 1e-6):
        raise ValueError("tail_eps must lie in (0, 1e-6]")
    n = _poisson_cutoff(lam, tail_eps)
    probs = PoissonLaw(lam).pmf(np.arange(n + 1))
    tail = float(special.pdtrc(n, lam))
    return Pmf(probs, tail)


def pmf_geometric(q: float, tail_eps: float = DEFAULT_TAIL_EPS) -> Pmf:
    """Geometric law P(x) = (1 - q)^x q on x >= 0."""
    if not (0.0 < q <= 1.0):
        raise ValueError(f"geometric parameter must lie in (0, 1], got {q}")
    if q == 1.0:
        return Pmf(np.array([1.0]), mean_cache=0.0, var_cache=0.0)
    r = 1.0 - q
    m1, m2 = r / q, r * (1.0 + r) / q**2

    def dropped_second_moment(n):
        # E[X^2; X > n] = r^(n+1) E[(n + 1 + X)^2] by memorylessness
        c = n + 1
        return r**c * (c * c + 2.0 * c * m1 + m2)

    # both the dropped mass r^(N+1) and the dropped second moment stay below
    # tail_eps, so variance and K are not biased by the cut either
    n = max(0, int(math.ceil(math.log(tail_eps) / math.log(r))) - 1)
    while dropped_second_moment(n) > tail_eps and n <= MAX_SUPPORT:
        n += 1
    if n > MAX_SUPPORT:
        raise ValueError(f"Geometric({q}) truncation index exceeds {MAX_SUPPORT}")
    x = np.arange(n + 1)
    probs = np.exp(x * math.log(r)) * q
    tail = r ** (n + 1)
    return Pmf(probs, tail, mean_cache=r / q, var_cache=r / q**2)


def pmf_compound_poisson(law: CompoundPoissonLaw, tail_eps: float = DEFAULT_TAIL_EPS) -> Pmf:
    from .sums import convolve

    parts = []
    if law.lam1 > 0:
        parts.append(pmf_poisson_truncated(law.lam1, tail_eps / 2))
    if law.lam2 > 0:
        z2 = pmf_poisson_truncated(law.lam2, tail_eps / 2)
        doubled = np.zeros(2 * z2.max_index + 1)
        doubled[::2] = z2.probs
        parts.append(Pmf(doubled, z2.tail))
    if len(parts) == 1:
        return parts[0]
    return convolve(*parts)
