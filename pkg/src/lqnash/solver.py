"""Main pipeline: exact elimination quintic, discriminant classification,
certified root isolation in (0, a), equilibrium recovery and verification.

All classification decisions (discriminant sign, root counts, interval
membership) are made in exact rational arithmetic; floating point enters only
when refined roots are converted for reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import (
    NEG_INF,
    POS_INF,
    UniPoly,
    isolate_roots_in_interval,
    poly_derivative,
    poly_eval,
    refine_root,
    resultant_subresultant,
    sturm_count,
)
from .game import (
    GameParams,
    NormalizedGame,
    best_response,
    cost,
    denormalize_equilibrium,
    exact_game,
    normalize,
    residuals,
)

# Width of the certified isolating interval before float conversion: below
# one double-precision ulp at the root magnitudes that occur (roots < a <= 4).
DEFAULT_REFINE_WIDTH = Fraction(1, 2**60)

# Reporting tolerance on residuals at the floating pair.  Existence of the
# root is certified exactly; this only governs presentation precision.
DEFAULT_TOL_VERIFY = 1e-8

# The stored quintic is twice the elimination polynomial, which clears the
# half-integer terms; the reported discriminant is rescaled accordingly.
G_SCALE = 2


class DegenerateGameError(Exception):
    """The elimination polynomial does not have the expected degree five."""


class ConsistencyError(Exception):
    """A certified-by-construction property failed: an implementation bug."""


def build_g(norm: NormalizedGame) -> UniPoly:
    """Twice the elimination quintic in k2, assembled exactly.

    Coefficients are closed-form polynomials in (a, q1, q2, r1, r2); inputs
    are coerced to exact rationals.
    """
    a = Fraction(norm.a)
    q1, q2 = Fraction(norm.q1), Fraction(norm.q2)
    r1, r2 = Fraction(norm.r1), Fraction(norm.r2)
    r1r1, r2r2 = r1 * r1, r2 * r2
    rr = r1r1 * r2r2
    c0 = a * a * q2 * q2 * r1r1
    c1 = -2 * a * q2 * q2 * r1r1
    c2 = (
        -(a**4) * rr
        + 2 * a * a * q2 * r1r1 * r2
        - 2 * a * a * q1 * r1 * r2r2
        + 2 * a * a * rr
        + q2 * q2 * r1r1
        - q1 * q1 * r2r2
        - 2 * q1 * r1 * r2r2
        - rr
    )
    c3 = 4 * a**3 * rr - 4 * a * q2 * r1r1 * r2 + 4 * a * q1 * r1 * r2r2 - 4 * a * rr
    c4 = -5 * a * a * rr + 2 * q2 * r1r1 * r2 - 2 * q1 * r1 * r2r2 + 2 * rr
    c5 = 2 * a * rr
    return UniPoly([c0, c1, c2, c3, c4, c5])


def stationarity_system(norm: NormalizedGame):
    """Both players' stationarity cubics as exact bivariate polynomials.

    These are the inputs the Buchberger engine triangularizes; their common
    stabilizing roots are exactly the Nash equilibria.
    """
    from .groebner import MultiPoly

    a = Fraction(norm.a)
    q1, q2 = Fraction(norm.q1), Fraction(norm.q2)
    r1, r2 = Fraction(norm.r1), Fraction(norm.r2)
    p1 = MultiPoly({
        (2, 1): -r1, (2, 0): a * r1, (1, 2): -r1, (1, 1): 2 * a * r1,
        (1, 0): r1 + q1 - a * a * r1, (0, 1): q1, (0, 0): -a * q1,
    })
    p2 = MultiPoly({
        (1, 2): -r2, (0, 2): a * r2, (2, 1): -r2, (1, 1): 2 * a * r2,
        (0, 1): r2 + q2 - a * a * r2, (1, 0): q2, (0, 0): -a * q2,
    })
    return [p1, p2]


def classify_discriminant(g2: UniPoly) -> tuple[Fraction, int]:
    """Exact discriminant of the unscaled quintic and its sign.

    Rejects degree != 5 loudly: the positivity invariants make a degenerate
    leading coefficient impossible, so reaching it means corrupted input.
    """
    if g2.degree != 5:
        raise DegenerateGameError(f"expected a degree-5 polynomial, got degree {g2.degree}")
    res = resultant_subresultant(g2, poly_derivative(g2))
    delta_scaled = res / g2.leading_coefficient  # (-1)^(5*4/2) = +1
    delta = delta_scaled / Fraction(G_SCALE) ** 8
    sign = 0 if delta == 0 else (1 if delta > 0 else -1)
    return delta, sign


def find_candidate_roots(
    g2: UniPoly, a: Fraction, refine_width: Fraction = DEFAULT_REFINE_WIDTH
) -> list[tuple[Fraction, int]]:
    """Distinct real roots of the quintic strictly inside (0, a), refined.

    The endpoints are excluded for free: the quintic is exactly positive at 0
    and exactly negative at a for every valid game.
    """
    a = Fraction(a)
    roots = []
    for iv in isolate_roots_in_interval(g2, Fraction(0), a):
        roots.append((refine_root(g2, iv, refine_width), iv.multiplicity))
    return roots


def recover_k1(norm: NormalizedGame, k2: float) -> float:
    """The admissible stationary gain of player 1 against k2.

    Delegates to the best-response map, whose branch choice is the one
    satisfying the stability constraint.
    """
    return best_response(norm, 1, float(k2)).k_best


@dataclass(frozen=True)
class NashEquilibrium:
    """Verified equilibrium in raw-game coordinates."""

    k1: float
    k2: float
    a_cl: float
    j1: float
    j2: float
    residual_norm: float
    root_multiplicity: int


@dataclass(frozen=True)
class TheoremFlags:
    existence: bool
    at_most_three: bool
    delta_consistency: bool

    @property
    def all_ok(self) -> bool:
        return self.existence and self.at_most_three and self.delta_consistency


@dataclass(frozen=True)
class SolveReport:
    """Full account of one solved game."""

    g2: UniPoly
    delta: Fraction
    delta_sign: int
    real_roots_total: int
    roots_below_zero: int
    roots_above_a: int
    equilibria: tuple[NashEquilibrium, ...]
    theorem_flags: TheoremFlags

    @property
    def n_nash(self) -> int:
        return len(self.equilibria)


def solve(
    params: GameParams,
    refine_width: Fraction = DEFAULT_REFINE_WIDTH,
    tol_verify: float = DEFAULT_TOL_VERIFY,
) -> SolveReport:
    """Compute, verify and report every Nash equilibrium of the game.

    Raises TrivialGame for a = 0, InvalidGameError on domain violations, and
    ConsistencyError if any certified property fails downstream (which would
    be an implementation bug, not a property of the game).
    """
    norm = normalize(params)
    ex = exact_game(norm)
    a = Fraction(ex.a)
    g2 = build_g(ex)
    delta, delta_sign = classify_discriminant(g2)

    g_at_zero = poly_eval(g2, 0)
    g_at_a = poly_eval(g2, a)
    if not (g_at_zero > 0 and g_at_a < 0):
        raise ConsistencyError("endpoint signs of the quintic violated")

    roots_below = sturm_count(g2, NEG_INF, Fraction(0))
    roots_above = sturm_count(g2, a, POS_INF)
    candidates = find_candidate_roots(g2, a, refine_width)
    real_roots_total = roots_below + len(candidates) + roots_above

    equilibria = []
    for approx, multiplicity in candidates:
        k2f = float(approx)
        k1f = recover_k1(norm, k2f)
        rho1, rho2 = residuals(norm, k1f, k2f)
        residual_norm = max(abs(float(rho1)), abs(float(rho2)))
        a_cl = float(norm.a) - k1f - k2f
        if residual_norm > tol_verify:
            raise ConsistencyError(
                f"candidate root {k2f} failed residual verification ({residual_norm:.3e})"
            )
        if not (0.0 < a_cl < 1.0):
            raise ConsistencyError(f"candidate root {k2f} gives closed loop {a_cl} outside (0, 1)")
        if not (0.0 < k1f and 0.0 < k2f):
            raise ConsistencyError(f"candidate pair ({k1f}, {k2f}) violates positivity bounds")
        c = cost(norm, k1f, k2f)
        raw_k1, raw_k2 = denormalize_equilibrium(norm, (k1f, k2f))
        equilibria.append(
            NashEquilibrium(
                k1=raw_k1,
                k2=raw_k2,
                a_cl=a_cl,
                j1=c.j1,
                j2=c.j2,
                residual_norm=residual_norm,
                root_multiplicity=multiplicity,
            )
        )

    n = len(equilibria)
    flags = TheoremFlags(
        existence=n >= 1,
        at_most_three=n <= 3,
        delta_consistency=(delta_sign >= 0 or n == 1) and (delta_sign != 0 or n <= 2),
    )
    if not flags.all_ok:
        raise ConsistencyError(f"equilibrium count {n} inconsistent with discriminant sign {delta_sign}")
    if roots_below < 1 or roots_above < 1:
        raise ConsistencyError("expected roots outside [0, a] on both sides")

    return SolveReport(
        g2=g2,
        delta=delta,
        delta_sign=delta_sign,
        real_roots_total=real_roots_total,
        roots_below_zero=roots_below,
        roots_above_a=roots_above,
        equilibria=tuple(equilibria),
        theorem_flags=flags,
    )


# ---------------------------------------------------------------------------
# Exact constructions on the multiple-root locus
# ---------------------------------------------------------------------------
#
# Games whose quintic has a multiple root form a hypersurface in parameter
# space; rational points on it cannot be reached by varying one parameter of
# a generic family (the critical value is algebraic of high degree).  The two
# constructors below parametrize rational points directly.
#
# At a point (k1, k2) where both stationarity residuals vanish, the weights
# are forced: q_i = r_i k_i (1 - c^2 - c k_i) / c with c = a - k1 - k2.  The
# residual surfaces are tangent there exactly when
#
#     (1 - c^2)^2 (k1 + k2 + c) = 4 c k1 k2,
#
# which is linear in k2, so rational (c, k1) give rational tangency games.


def fold_game(c: Fraction, k1: Fraction, r1: Fraction = Fraction(1)) -> tuple[GameParams, tuple[Fraction, Fraction]]:
    """Rational game whose quintic has a double root at a known equilibrium.

    `c` is the closed-loop value at the double point and `k1` the first
    player's gain there; the second player's weights are scaled so q2 = 1.
    Returns the game and the exact double point (k1, k2).
    """
    c, k1, r1 = Fraction(c), Fraction(k1), Fraction(r1)
    if not 0 < c < 1:
        raise ValueError("closed loop c must lie in (0, 1)")
    w = (1 - c * c) ** 2
    den = 4 * c * k1 - w
    if den <= 0:
        raise ValueError("k1 too small: tangency partner is not positive")
    k2 = w * (k1 + c) / den
    cap = (1 - c * c) / c
    if not (0 < k1 < cap and 0 < k2 < cap):
        raise ValueError("tangency point leaves the positive-weight region")
    a = c + k1 + k2
    q1 = r1 * k1 * (1 - c * c - c * k1) / c
    r2 = c / (k2 * (1 - c * c - c * k2))
    params = GameParams(a=a, q1=q1, q2=Fraction(1), r1=r1, r2=r2)
    params.validate()
    return params, (k1, k2)


def pitchfork_game(s: Fraction, r: Fraction = Fraction(1)) -> tuple[GameParams, Fraction]:
    """Symmetric rational game whose quintic has a triple root at s.

    Requires 1 + s^2 to be the square of a rational (Pythagorean choices such
    as s = 3/4 or s = 5/12).  Returns the game and the triple root.
    """
    s, r = Fraction(s), Fraction(r)
    if s <= 0:
        raise ValueError("s must be positive")
    h2 = 1 + s * s
    num = math.isqrt(h2.numerator)
    den = math.isqrt(h2.denominator)
    if num * num != h2.numerator or den * den != h2.denominator:
        raise ValueError("1 + s^2 must be a rational square")
    h = Fraction(num, den)
    a = s + h
    q = r * s * s
    params = GameParams(a=a, q1=q, q2=q, r1=r, r2=r)
    params.validate()
    return params, s
