"""Adaptive Simpson quadrature."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    """``t_max=None`` lets the caller pick a mean-dependent default."""

    t_max: Optional[float] = None
    abs_tol: float = 1e-5
    max_depth: int = 50

    def __post_init__(self):
        if self.t_max is not None and not self.t_max > 0:
            raise ValueError("t_max must be positive")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    abs_tol: float,
    max_depth: int = 50,
) -> tuple[float, int]:
    """Integrate ``f`` over [a, b]; returns (value, number of evaluations).

    Raises QuadratureError if some panel is still unresolved at ``max_depth``.
    """
    evals = 0

    def F(x):
        nonlocal evals
        evals += 1
        return f(x)

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    fa, fb = F(a), F(b)
    m = 0.5 * (a + b)
    fm = F(m)
    whole = simpson(fa, fm, fb, b - a)

    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, abs_tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, S, tol, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = F(lm), F(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        err = left + right - S
        if abs(err) <= 15.0 * tol:
            total += left + right + err / 15.0
        elif depth + 1 >= max_depth:
            raise QuadratureError(
                f"no convergence on [{lo:.6g}, {hi:.6g}] within depth {max_depth}"
            )
        else:
            stack.append((mid, hi, fmid, frm, fhi, right, tol / 2.0, depth + 1))
            stack.append((lo, mid, flo, flm, fmid, left, tol / 2.0, depth + 1))
    return total, evals
