"""Exact laws of sums: independent convolution, a two-state Markov chain DP,
compound sums of alpha_i * X_i, and a brute-force oracle over {0,1}^n."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .dist import DEFAULT_TAIL_EPS, MAX_SUPPORT, Pmf, pmf_bernoulli, pmf_poisson_truncated

MAX_JOINT_N = 20
MAX_MARKOV_N = 10**5


def convolve(P: Pmf, Q: Pmf) -> Pmf:
    """Exact law of X + Y for independent X ~ P, Y ~ Q.

    Truncated tails combine by the union bound.
    """
    size = len(P) + len(Q) - 1
    if size > MAX_SUPPORT:
        raise ValueError(f"convolution support {size} exceeds {MAX_SUPPORT}")
    # np.convolve is the direct O(mn) sum; all terms are nonnegative so there
    # is no cancellation, only accumulation error of order size * eps.
    probs = np.convolve(P.probs, Q.probs)
    clamped = -math.fsum(probs[probs < 0])
    probs[probs < 0] = 0.0
    tail = min(P.tail + Q.tail + clamped, 1.0)
    return Pmf(probs, tail)


def sum_independent(parts: Sequence[Pmf]) -> Pmf:
    if not parts:
        raise ValueError("need at least one part")
    return reduce(convolve, parts)


def convolve_power(P: Pmf, n: int) -> Pmf:
    """n-fold self-convolution by repeated squaring."""
    if n < 1:
        raise ValueError("n must be at least 1")
    result = None
    base = P
    while n:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if n:
            base = convolve(base, base)
    return result


def binomial_pmf(n: int, p: float) -> Pmf:
    return convolve_power(pmf_bernoulli(p), n)


@dataclass(frozen=True)
class MarkovChainSpec:
    """Two-state chain on {0, 1}: ``transition[i][j] = P(X_{t+1}=j | X_t=i)``,
    ``initial`` = P(X_1 = 1)."""

    n: int
    transition: tuple
    initial: float

    def __post_init__(self):
        T = np.asarray(self.transition, dtype=np.float64)
        if T.shape != (2, 2):
            raise ValueError("transition must be 2x2")
        if np.any(T < 0) or np.any(T > 1):
            raise ValueError("transition entries must lie in [0, 1]")
        if np.any(np.abs(T.sum(axis=1) - 1.0) > 1e-14):
            raise ValueError("transition rows must sum to 1")
        if self.n < 1:
            raise ValueError("chain length must be at least 1")
        if not (0.0 <= self.initial <= 1.0):
            raise ValueError("initial probability must lie in [0, 1]")
        object.__setattr__(self, "transition", tuple(tuple(float(v) for v in row) for row in T))

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.transition)


def markov_spec_triangular(n: int) -> MarkovChainSpec:
    """Row n of the triangular array whose stationary marginals are Bern(1/n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    T = ((n / (n + 1), 1 / (n + 1)), ((n - 1) / (n + 1), 2 / (n + 1)))
    return MarkovChainSpec(n=n, transition=T, initial=1.0 / n)


def markov_pair_law(spec: MarkovChainSpec, initial: float | None = None) -> np.ndarray:
    """2x2 joint law of (X_t, X_{t+1}) when X_t ~ Bern(initial)."""
    p = spec.initial if initial is None else initial
    return np.array([1.0 - p, p])[:, None] * spec.matrix


def markov_sum_distribution(spec: MarkovChainSpec) -> Pmf:
    """Exact law of X_1 + ... + X_n by DP over (state, partial sum)."""
    n = spec.n
    if n > MAX_MARKOV_N:
        raise ValueError(f"chain length {n} exceeds {MAX_MARKOV_N}")
    (t00, t01), (t10, t11) = spec.transition
    # a0[s]: P(partial sum s, current state 0); a1 likewise for state 1
    a0 = np.zeros(n + 1)
    a1 = np.zeros(n + 1)
    a0[0] = 1.0 - spec.initial
    a1[1] = spec.initial
    for _ in range(1, n):
        b0 = a0 * t00 + a1 * t10
        b1 = np.zeros(n + 1)
        b1[1:] = a0[:-1] * t01 + a1[:-1] * t11
        a0, a1 = b0, b1
    probs = a0 + a1
    return Pmf(np.clip(probs, 0.0, 1.0))


@dataclass(frozen=True)
class JointBinary:
    """Joint law on {0,1}^n; ``atoms[m]`` is the probability of the bit
    pattern m, where bit i of m is the value of coordinate i."""

    n: int
    atoms: np.ndarray

    def __post_init__(self):
        if not (1 <= self.n <= MAX_JOINT_N):
            raise ValueError(f"n must lie in [1, {MAX_JOINT_N}]")
        atoms = np.ascontiguousarray(self.atoms, dtype=np.float64)
        if atoms.shape != (2**self.n,):
            raise ValueError(f"expected {2**self.n} atoms, got {atoms.shape}")
        if np.any(atoms < 0):
            raise ValueError("atoms must be nonnegative")
        if abs(math.fsum(atoms) - 1.0) > 1e-12:
            raise ValueError("atoms must sum to 1")
        atoms.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)

    def tensor(self) -> np.ndarray:
        """Atoms as an n-dimensional array indexed ``[x_0, x_1, ..., x_{n-1}]``."""
        return self.atoms.reshape((2,) * self.n).transpose(tuple(reversed(range(self.n))))

    def marginal(self, coords: Sequence[int]) -> np.ndarray:
        """Joint law of the given coordinates, axes in the order given."""
        coords = list(coords)
        if len(set(coords)) != len(coords):
            raise ValueError("coordinates must be distinct")
        others = tuple(i for i in range(self.n) if i not in coords)
        m = self.tensor().sum(axis=others) if others else self.tensor()
        kept = sorted(coords)
        return np.transpose(m, [kept.index(c) for c in coords])

    def coordinate_means(self) -> np.ndarray:
        return np.array([self.marginal([i])[1] for i in range(self.n)])

    @classmethod
    def independent(cls, ps: Sequence[float]) -> "JointBinary":
        atoms = np.array([1.0])
        # coordinate i lives on bit i, so it is the slowest axis after i steps
        for p in ps:
            atoms = np.concatenate([atoms * (1.0 - p), atoms * p])
        return cls(len(ps), atoms)


def joint_from_markov(spec: MarkovChainSpec) -> JointBinary:
    if spec.n > MAX_JOINT_N:
        raise ValueError(f"chain length {spec.n} exceeds the joint oracle cap {MAX_JOINT_N}")
    T = spec.matrix
    # probs indexed by the bit pattern over the first k coordinates, split by last state
    atoms = np.array([1.0 - spec.initial, spec.initial])
    last = np.array([0, 1])
    for k in range(1, spec.n):
        stay = atoms * T[last, 0]
        move = atoms * T[last, 1]
        atoms = np.concatenate([stay, move])
        last = np.concatenate([np.zeros_like(last), np.ones_like(last)])
    return JointBinary(spec.n, atoms)


def popcount_law(J: JointBinary) -> Pmf:
    counts = np.bitwise_count(np.arange(J.atoms.size, dtype=np.uint64)).astype(np.intp)
    return Pmf(np.bincount(counts, weights=J.atoms, minlength=J.n + 1))


@dataclass(frozen=True)
class JointSummary:
    means: np.ndarray
    entropies: np.ndarray
    joint_entropy: float
    sum_law: Pmf

    @property
    def entropy_gap(self) -> float:
        """Sum of coordinate entropies minus the joint entropy."""
        return math.fsum(self.entropies) - self.joint_entropy


def joint_oracle_summary(J: JointBinary) -> JointSummary:
    from .info import binary_entropy, joint_entropy

    means = J.coordinate_means()
    entropies = np.array([binary_entropy(min(max(p, 0.0), 1.0)) for p in means])
    return JointSummary(means, entropies, joint_entropy(J), popcount_law(J))


def compound_term(p: float) -> Pmf:
    """Law of alpha * X with X ~ Bern(p), alpha uniform on {1, 2}."""
    if not (0.0 <= p < 1.0):
        raise ValueError(f"p must lie in [0, 1), got {p}")
    if p == 0.0:
        return Pmf(np.array([1.0]))
    return Pmf(np.array([1.0 - p, p / 2, p / 2]))


def compound_sum_distribution(ps: Sequence[float]) -> Pmf:
    return sum_independent([compound_term(p) for p in ps])


def poisson_smooth(P: Pmf, t: float, tail_eps: float = DEFAULT_TAIL_EPS) -> Pmf:
    """Law of X + Po(t) with the Poisson part truncated at ``tail_eps``."""
    if t < 0:
        raise ValueError("smoothing time must be nonnegative")
    if t == 0:
        return P
    return convolve(P, pmf_poisson_truncated(t, tail_eps))
