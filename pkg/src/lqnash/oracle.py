"""Brute-force verification paths that never touch the elimination quintic:
best-response iteration, residual grid scanning with Newton polish, direct
resultant elimination, and trajectory cost simulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactalg import UniPoly
from .game import NormalizedGame, best_response, closed_loop, exact_game, residuals

GRID_DEFAULT = 512
NEWTON_MAX_ITER = 50
DEDUP_TOL = 1e-6


class SharedComponentError(Exception):
    """The two residual cubics share a component (resultant identically zero)."""


def h_eval(norm: NormalizedGame, x: float) -> float:
    """Composed best-response displacement br1(br2(x)) - x.

    Positive at 0 and negative at a for every valid game, so a zero (an
    equilibrium gain of player 1) exists between them.
    """
    return best_response(norm, 1, best_response(norm, 2, x).k_best).k_best - x


@dataclass(frozen=True)
class BrIterationResult:
    converged: bool
    k1: float
    k2: float
    iterations: int


def br_iteration(
    norm: NormalizedGame, k_start: float, max_iter: int = 200, tol: float = 1e-12
) -> BrIterationResult:
    """Fixed-point iteration x <- br1(br2(x)) from a starting gain.

    Non-convergence is a legitimate outcome, reported rather than raised: the
    composed map need not contract near every equilibrium.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if not tol > 0:
        raise ValueError("tol must be > 0")
    x = float(k_start)
    for it in range(1, max_iter + 1):
        nxt = best_response(norm, 1, best_response(norm, 2, x).k_best).k_best
        if abs(nxt - x) < tol:
            return BrIterationResult(True, nxt, best_response(norm, 2, nxt).k_best, it)
        x = nxt
    return BrIterationResult(False, x, best_response(norm, 2, x).k_best, max_iter)


def _residual_arrays(norm: NormalizedGame, K1, K2):
    a = float(norm.a)
    q1, q2 = float(norm.q1), float(norm.q2)
    r1, r2 = float(norm.r1), float(norm.r2)
    B1 = a - K2
    B2 = a - K1
    R1 = B1 * r1 * K1**2 + (r1 + q1 - B1**2 * r1) * K1 - B1 * q1
    R2 = B2 * r2 * K2**2 + (r2 + q2 - B2**2 * r2) * K2 - B2 * q2
    return R1, R2


def _jacobian(norm: NormalizedGame, k1: float, k2: float):
    a = float(norm.a)
    q1, q2 = float(norm.q1), float(norm.q2)
    r1, r2 = float(norm.r1), float(norm.r2)
    b1 = a - k2
    b2 = a - k1
    j11 = 2 * b1 * r1 * k1 + r1 + q1 - b1 * b1 * r1
    j12 = -r1 * k1 * k1 + 2 * b1 * r1 * k1 + q1
    j21 = -r2 * k2 * k2 + 2 * b2 * r2 * k2 + q2
    j22 = 2 * b2 * r2 * k2 + r2 + q2 - b2 * b2 * r2
    return j11, j12, j21, j22


def _newton_polish(norm: NormalizedGame, k1: float, k2: float) -> tuple[float, float] | None:
    """Damped two-dimensional Newton on the residual pair."""
    scale = max(1.0, float(norm.q1), float(norm.q2)) * max(1.0, float(norm.a)) ** 3 * max(
        1.0, float(norm.r1), float(norm.r2)
    )
    rho1, rho2 = residuals(norm, k1, k2)
    norm_prev = math.hypot(float(rho1), float(rho2))
    for _ in range(NEWTON_MAX_ITER):
        if norm_prev <= 1e-14 * scale:
            return k1, k2
        j11, j12, j21, j22 = _jacobian(norm, k1, k2)
        det = j11 * j22 - j12 * j21
        if det == 0 or not math.isfinite(det):
            return None
        dk1 = (-float(rho1) * j22 + float(rho2) * j12) / det
        dk2 = (-float(rho2) * j11 + float(rho1) * j21) / det
        step = 1.0
        while True:
            t1, t2 = k1 + step * dk1, k2 + step * dk2
            rho1, rho2 = residuals(norm, t1, t2)
            norm_new = math.hypot(float(rho1), float(rho2))
            if norm_new < norm_prev or step < 1e-8:
                break
            step *= 0.5  # damping on residual increase
        k1, k2, norm_prev = t1, t2, norm_new
    return (k1, k2) if norm_prev <= 1e-10 * scale else None


def grid_scan(norm: NormalizedGame, n: int = GRID_DEFAULT) -> list[tuple[float, float]]:
    """Equilibrium approximations from sign changes of both residual surfaces.

    Scans the n x n cell grid covering (0, a)^2 (nodes include the boundary,
    where no equilibrium can sit, so edge-hugging roots are still bracketed),
    polishes every flagged cell with damped Newton, deduplicates, and keeps
    stabilizing pairs.  Output is deterministic, ordered by ascending k2
    then k1.
    """
    if n < 16:
        raise ValueError("grid resolution must be at least 16")
    a = float(norm.a)
    xs = a * np.arange(0, n + 1) / n
    K1, K2 = np.meshgrid(xs, xs, indexing="ij")
    R1, R2 = _residual_arrays(norm, K1, K2)

    def cell_flags(R):
        corners = (R[:-1, :-1], R[1:, :-1], R[:-1, 1:], R[1:, 1:])
        mx = np.maximum.reduce(corners)
        mn = np.minimum.reduce(corners)
        return (mx >= 0) & (mn <= 0)

    flagged = np.argwhere(cell_flags(R1) & cell_flags(R2))
    candidates: list[tuple[float, float]] = []
    for i, j in flagged:
        c1 = 0.5 * (xs[i] + xs[i + 1])
        c2 = 0.5 * (xs[j] + xs[j + 1])
        polished = _newton_polish(norm, float(c1), float(c2))
        if polished is None:
            continue
        k1, k2 = polished
        if not (0.0 < k1 < a and 0.0 < k2 < a):
            continue
        if abs(closed_loop(a, k1, k2)) >= 1.0:
            continue
        candidates.append((k1, k2))
    return _dedup(norm, candidates)


def _residual_norm(norm: NormalizedGame, k1: float, k2: float) -> float:
    rho1, rho2 = residuals(norm, k1, k2)
    return math.hypot(float(rho1), float(rho2))


def _dedup(norm: NormalizedGame, candidates: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Collapse duplicates, including clusters spread along flat valleys.

    At a multiple root the residual surface is flat to second or third order,
    so independent Newton runs land on nearby but unequal points; two points
    are merged when they are close and the residual at their midpoint is as
    small as at a converged point, keeping the better of the two.
    """
    flat_tol = 1e-10 * max(1.0, float(norm.q1), float(norm.q2)) * max(
        1.0, float(norm.a)
    ) ** 3 * max(1.0, float(norm.r1), float(norm.r2))
    wide = max(1e-4, 1e-4 * float(norm.a))
    kept: list[tuple[float, float]] = []
    for p in sorted(candidates, key=lambda c: (c[1], c[0])):
        merged = False
        for i, q in enumerate(kept):
            near = abs(p[0] - q[0]) < DEDUP_TOL and abs(p[1] - q[1]) < DEDUP_TOL
            if not near and abs(p[0] - q[0]) < wide and abs(p[1] - q[1]) < wide:
                mid = (0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]))
                near = _residual_norm(norm, *mid) <= flat_tol
            if near:
                if _residual_norm(norm, *p) < _residual_norm(norm, *q):
                    kept[i] = p
                merged = True
                break
        if not merged:
            kept.append(p)
    kept.sort(key=lambda c: (c[1], c[0]))
    return kept


def resultant_elimination(norm: NormalizedGame) -> UniPoly:
    """Eliminate k1 from the two residual cubics by a direct resultant.

    The result is a univariate polynomial in k2 of degree at most nine whose
    roots include every equilibrium k2; computed exactly over rationals.
    """
    ex = exact_game(norm)
    a = Fraction(ex.a)
    q1, q2 = Fraction(ex.q1), Fraction(ex.q2)
    r1, r2 = Fraction(ex.r1), Fraction(ex.r2)
    # rho1 and rho2 as quadratics in k1 with UniPoly-in-k2 coefficients
    a2 = UniPoly([a * r1, -r1])
    a1 = UniPoly([r1 + q1 - r1 * a * a, 2 * a * r1, -r1])
    a0 = UniPoly([-q1 * a, q1])
    b2 = UniPoly([0, -r2])
    b1 = UniPoly([q2, 2 * a * r2, -r2])
    b0 = UniPoly([-a * q2, r2 + q2 - a * a * r2, a * r2])
    zero = UniPoly()
    m = [
        [a2, a1, a0, zero],
        [zero, a2, a1, a0],
        [b2, b1, b0, zero],
        [zero, b2, b1, b0],
    ]
    res = _poly_det(m)
    if res.is_zero:
        raise SharedComponentError("residual cubics share a component")
    return res


def _poly_det(m: list[list[UniPoly]]) -> UniPoly:
    n = len(m)
    if n == 1:
        return m[0][0]
    out = UniPoly()
    for col in range(n):
        entry = m[0][col]
        if entry.is_zero:
            continue
        minor = [[row[c] for c in range(n) if c != col] for row in m[1:]]
        term = entry * _poly_det(minor)
        out = out + term if col % 2 == 0 else out - term
    return out


@dataclass(frozen=True)
class TrajectorySample:
    t: int
    x: float
    u1: float
    u2: float
    partial_cost_1: float
    partial_cost_2: float


def simulate_cost(
    norm: NormalizedGame, k1: float, k2: float, horizon: int, x0: float | None = None
) -> list[TrajectorySample]:
    """Roll the closed loop forward, accumulating both players' stage costs.

    For a stabilizing pair the partial sums approach the closed-form costs
    with a geometric tail; otherwise they diverge, which is also informative.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    a_cl = float(closed_loop(float(norm.a), k1, k2))
    x = float(norm.x0 if x0 is None else x0)
    w1 = float(norm.q1) + float(norm.r1) * k1 * k1
    w2 = float(norm.q2) + float(norm.r2) * k2 * k2
    total1 = total2 = 0.0
    out = []
    for t in range(horizon + 1):
        total1 += w1 * x * x
        total2 += w2 * x * x
        out.append(
            TrajectorySample(
                t=t, x=x, u1=-k1 * x, u2=-k2 * x, partial_cost_1=total1, partial_cost_2=total2
            )
        )
        x = a_cl * x
    return out
