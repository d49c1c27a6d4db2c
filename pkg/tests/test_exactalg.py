"""Exact polynomial algebra: operation examples and algebraic invariants."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqnash.exactalg import (
    NEG_INF,
    POS_INF,
    RootInterval,
    UniPoly,
    discriminant,
    isolate_real_roots,
    isolate_roots_in_interval,
    poly_derivative,
    poly_eval,
    refine_root,
    resultant,
    resultant_subresultant,
    square_free_part,
    sturm_chain,
    sturm_count,
    sylvester_matrix,
    poly_divmod,
)
from lqnash.game import GameParams, normalize
from lqnash.solver import build_g

X2_MINUS_1 = UniPoly([-1, 0, 1])
ALL_ONES_2G = UniPoly([1, -2, -2, 0, -3, 2])  # twice the all-ones quintic
SYMMETRIC_CUBIC = UniPoly([1, -2, -3, 2])  # 2k^3 - 3k^2 - 2k + 1


def rational(rng, num=9, den=5):
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_poly(rng, degree, num=9, den=5):
    coeffs = [rational(rng, num, den) for _ in range(degree)]
    coeffs.append(Fraction(rng.randint(1, num)))
    return UniPoly(coeffs)


class TestPolyEval:
    def test_root_of_factored(self):
        assert poly_eval(X2_MINUS_1, 1) == 0

    def test_zero_polynomial(self):
        assert poly_eval(UniPoly(), 7) == 0

    def test_all_ones_quintic_at_zero(self):
        g = build_g(normalize(GameParams(a=1, q1=1, q2=1, r1=1, r2=1))).scale(Fraction(1, 2))
        assert poly_eval(g, 0) == Fraction(1, 2)


class TestPolyDerivative:
    def test_quadratic(self):
        assert poly_derivative(X2_MINUS_1) == UniPoly([0, 2])

    def test_constant(self):
        assert poly_derivative(UniPoly([5])) == UniPoly()

    def test_all_ones_quintic(self):
        assert poly_derivative(ALL_ONES_2G) == UniPoly([-2, -4, 0, -12, 10])


class TestSylvester:
    def test_quadratic_against_derivative(self):
        a, b, c = Fraction(3), Fraction(5), Fraction(7)
        m = sylvester_matrix(UniPoly([c, b, a]), UniPoly([b, 2 * a]))
        assert m == [[a, b, c], [2 * a, b, 0], [0, 2 * a, b]]

    def test_degree_five_shape(self):
        m = sylvester_matrix(ALL_ONES_2G, poly_derivative(ALL_ONES_2G))
        assert len(m) == 9
        assert all(len(row) == 9 for row in m)

    def test_two_linear(self):
        assert sylvester_matrix(UniPoly([-1, 1]), UniPoly([1, 1])) == [[1, -1], [1, 1]]

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            sylvester_matrix(UniPoly(), UniPoly([1, 1]))


class TestResultant:
    def test_linear_pair(self):
        assert resultant(UniPoly([-1, 1]), UniPoly([1, 1])) == 2

    def test_quadratic_and_derivative(self):
        assert resultant(X2_MINUS_1, UniPoly([0, 2])) == -4

    def test_shared_root_vanishes(self):
        assert resultant(X2_MINUS_1, UniPoly([-1, 1])) == 0

    def test_routes_agree_on_1000_random_pairs(self):
        rng = random.Random(20240)
        for _ in range(1000):
            a = random_poly(rng, rng.randint(1, 6))
            b = random_poly(rng, rng.randint(1, 6))
            assert resultant(a, b) == resultant_subresultant(a, b)

    def test_zero_iff_nonconstant_gcd(self):
        rng = random.Random(7)
        for _ in range(200):
            shared = rational(rng)
            a = UniPoly.from_roots([shared, rational(rng)])
            b = UniPoly.from_roots([shared, rational(rng), rational(rng)])
            assert resultant(a, b) == 0
            disjoint = UniPoly.from_roots([shared + 1, shared + 2])
            if poly_eval(a, shared + 1) != 0 and poly_eval(a, shared + 2) != 0:
                assert resultant(a, disjoint) != 0

    def test_product_formula_on_factored_inputs(self):
        rng = random.Random(4242)
        for _ in range(200):
            ra = [rational(rng, 6, 3) for _ in range(rng.randint(1, 4))]
            rb = [rational(rng, 6, 3) for _ in range(rng.randint(1, 4))]
            ca, cb = Fraction(rng.randint(1, 4)), Fraction(rng.randint(1, 4))
            a = UniPoly.from_roots(ra).scale(ca)
            b = UniPoly.from_roots(rb).scale(cb)
            expected = ca ** len(rb) * cb ** len(ra)
            for x in ra:
                for y in rb:
                    expected *= x - y
            assert resultant(a, b) == expected
            assert resultant_subresultant(a, b) == expected

    def test_routes_agree_on_sparse_degree_defect_inputs(self):
        # sparse polynomials force pseudo-division degree drops larger than one
        rng = random.Random(777)
        for _ in range(300):
            da, db = rng.randint(1, 8), rng.randint(1, 8)
            ac = [Fraction(0)] * da + [Fraction(rng.choice([1, 2, 3, -1, -2]))]
            bc = [Fraction(0)] * db + [Fraction(rng.choice([1, 2, 3, -1, -2]))]
            for _ in range(rng.randint(0, 2)):
                ac[rng.randrange(da)] = rational(rng, 6, 3)
            for _ in range(rng.randint(0, 2)):
                bc[rng.randrange(db)] = rational(rng, 6, 3)
            a, b = UniPoly(ac), UniPoly(bc)
            assert resultant(a, b) == resultant_subresultant(a, b)


class TestDiscriminant:
    def test_simple_roots_positive(self):
        assert discriminant(X2_MINUS_1) == 4

    def test_double_root_zero(self):
        assert discriminant(UniPoly([1, -2, 1])) == 0

    def test_all_ones_quintic_sign_matches_root_structure(self):
        d = discriminant(ALL_ONES_2G)
        assert d == -1294336  # 2^8 times the unscaled value -5056
        # degree five with three distinct real roots: one conjugate pair, negative
        assert sturm_count(ALL_ONES_2G, NEG_INF, POS_INF) == 3
        assert d < 0

    def test_rejects_low_degree(self):
        with pytest.raises(ValueError):
            discriminant(UniPoly([1, 1]))


class TestSturm:
    def test_two_real_roots(self):
        assert sturm_count(X2_MINUS_1, NEG_INF, POS_INF) == 2

    def test_no_real_roots(self):
        assert sturm_count(UniPoly([1, 0, 1]), NEG_INF, POS_INF) == 0

    def test_all_ones_quintic_unit_interval(self):
        assert sturm_count(ALL_ONES_2G, 0, 1) == 1

    def test_chain_definition(self):
        chain = sturm_chain(ALL_ONES_2G).sequence
        assert chain[0] == ALL_ONES_2G
        assert chain[1] == poly_derivative(ALL_ONES_2G)
        for i in range(2, len(chain)):
            assert chain[i] == -(poly_divmod(chain[i - 2], chain[i - 1])[1])
        assert [p.degree for p in chain] == [5, 4, 3, 2, 1, 0]
        assert chain[-1].degree == 0 and not chain[-1].is_zero

    def test_counts_match_construction(self):
        rng = random.Random(99)
        for _ in range(300):
            roots = sorted({rational(rng, 20, 6) for _ in range(rng.randint(1, 5))})
            p = UniPoly([1])
            for r in roots:
                for _ in range(rng.randint(1, 3)):
                    p = p * UniPoly([-r, 1])
            assert sturm_count(p, NEG_INF, POS_INF) == len(roots)


class TestIsolation:
    def test_double_plus_simple(self):
        p = UniPoly.from_roots([1, 1, -2])
        ivs = isolate_real_roots(p)
        assert len(ivs) == 2
        assert ivs[0].lo < -2 <= ivs[0].hi and ivs[0].multiplicity == 1
        assert ivs[1].lo < 1 <= ivs[1].hi and ivs[1].multiplicity == 2

    def test_no_real_roots(self):
        assert isolate_real_roots(UniPoly([1, 0, 1])) == []

    def test_all_ones_quintic_three_regions(self):
        ivs = isolate_real_roots(ALL_ONES_2G)
        assert len(ivs) == 3
        width = Fraction(1, 2**30)
        roots = [refine_root(ALL_ONES_2G, iv, width) for iv in ivs]
        assert roots[0] < 0
        assert 0 < roots[1] < 1
        assert roots[2] > 1

    def test_intervals_disjoint_and_isolating(self):
        rng = random.Random(4)
        for _ in range(100):
            roots = sorted({rational(rng, 12, 4) for _ in range(rng.randint(2, 5))})
            p = UniPoly.from_roots(roots)
            ivs = isolate_real_roots(p)
            assert len(ivs) == len(roots)
            for iv, r in zip(ivs, roots):
                assert iv.lo < r <= iv.hi
            for prev, nxt in zip(ivs, ivs[1:]):
                assert prev.hi <= nxt.lo


class TestRefine:
    def test_unit_root(self):
        iv = RootInterval(Fraction(0), Fraction(2), 1)
        width = Fraction(1, 2**30)
        assert abs(refine_root(X2_MINUS_1, iv, width) - 1) <= width

    def test_symmetric_cubic_root(self):
        # independent bisection oracle, plain interval halving on Fractions
        lo, hi = Fraction(0), Fraction(1)
        for _ in range(80):
            mid = (lo + hi) / 2
            if poly_eval(SYMMETRIC_CUBIC, mid) > 0:
                lo = mid
            else:
                hi = mid
        oracle = (lo + hi) / 2
        iv = isolate_roots_in_interval(SYMMETRIC_CUBIC, Fraction(0), Fraction(1))[0]
        got = refine_root(SYMMETRIC_CUBIC, iv, Fraction(1, 10**12))
        assert abs(got - oracle) < Fraction(2, 10**9)
        assert abs(float(got) - 0.3554157267758450) < 1e-9

    def test_double_root_exact_hit(self):
        p = UniPoly([1, -2, 1])
        assert refine_root(p, RootInterval(Fraction(0), Fraction(2), 2), Fraction(1, 2**30)) == 1

    def test_sign_change_across_result(self):
        rng = random.Random(31)
        width = Fraction(1, 2**40)
        for _ in range(50):
            roots = sorted({rational(rng, 8, 3) for _ in range(rng.randint(1, 4))})
            p = UniPoly.from_roots(roots)
            for iv in isolate_real_roots(p):
                r = refine_root(p, iv, width)
                sf = square_free_part(p)
                lo_val, hi_val = poly_eval(sf, r - width), poly_eval(sf, r + width)
                assert lo_val == 0 or hi_val == 0 or (lo_val < 0) != (hi_val < 0)


coeff = st.fractions(min_value=-10, max_value=10, max_denominator=8)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(coeff, min_size=1, max_size=5),
    st.lists(coeff, min_size=1, max_size=5),
    st.fractions(min_value=-5, max_value=5, max_denominator=16),
)
def test_eval_is_ring_homomorphism(pc, qc, x):
    p, q = UniPoly(pc), UniPoly(qc)
    assert poly_eval(p * q, x) == poly_eval(p, x) * poly_eval(q, x)
    assert poly_eval(p + q, x) == poly_eval(p, x) + poly_eval(q, x)
