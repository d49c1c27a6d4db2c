"""Exact univariate polynomial algebra over arbitrary-precision rationals.

Everything in this module is exact: coefficients are `fractions.Fraction`,
determinants use fraction-free elimination, and real roots are isolated by
Sturm bisection with integer sign evaluations.  Floating point appears only
when a caller converts a refined rational approximation at the very end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

# Carrier for all exact coefficients.  Fraction is always reduced and keeps
# a positive denominator, which is exactly the invariant we need.
BigRational = Fraction

RationalLike = Union[int, Fraction]


class _Inf:
    """Extended endpoint for interval queries (sign taken from leading terms)."""

    __slots__ = ("positive",)

    def __init__(self, positive: bool):
        self.positive = positive

    def __repr__(self):
        return "+inf" if self.positive else "-inf"


POS_INF = _Inf(True)
NEG_INF = _Inf(False)

Endpoint = Union[int, Fraction, _Inf]


class UniPoly:
    """Dense univariate polynomial, coefficients lowest-degree first.

    Immutable; the zero polynomial stores an empty coefficient tuple and the
    leading coefficient of any nonzero polynomial is nonzero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def constant(cls, c: RationalLike) -> "UniPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Sequence[RationalLike]) -> "UniPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coefficient(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        lc = self.coeffs[-1]
        return UniPoly(c / lc for c in self.coeffs)

    def __add__(self, other: "UniPoly") -> "UniPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero or other.is_zero:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def scale(self, c: RationalLike) -> "UniPoly":
        return UniPoly(Fraction(c) * x for x in self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, x)

    def __repr__(self) -> str:
        if self.is_zero:
            return "UniPoly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            term = f"{c}" if i == 0 else (f"{c}*x" if i == 1 else f"{c}*x^{i}")
            parts.append(term)
        return "UniPoly(" + " + ".join(parts) + ")"


def poly_eval(p: UniPoly, x: RationalLike) -> Fraction:
    """Exact Horner evaluation of p at a rational point."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(p: UniPoly) -> UniPoly:
    """Formal derivative; drops the degree by one for nonconstant input."""
    return UniPoly(i * c for i, c in enumerate(p.coeffs) if i > 0)


def poly_divmod(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Quotient and remainder of exact division in Q[x]."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    db, lb = b.degree, b.coeffs[-1]
    if a.degree < db:
        return UniPoly(), a
    quot = [Fraction(0)] * (a.degree - db + 1)
    for i in range(a.degree - db, -1, -1):
        c = rem[i + db] / lb
        if c != 0:
            quot[i] = c
            for j, bc in enumerate(b.coeffs):
                rem[i + j] -= c * bc
        rem[i + db] = Fraction(0)
    return UniPoly(quot), UniPoly(rem)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic greatest common divisor in Q[x] (constant 1 when coprime)."""
    while not b.is_zero:
        a, b = b, poly_divmod(a, b)[1]
    if a.is_zero:
        return a
    return a.monic()


def square_free_part(p: UniPoly) -> UniPoly:
    """p divided by gcd(p, p'): same roots, all multiplicities one."""
    if p.degree <= 0:
        return p
    g = poly_gcd(p, poly_derivative(p))
    if g.degree == 0:
        return p
    return poly_divmod(p, g)[0]


def square_free_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun decomposition: pairs (factor, multiplicity) with p ~ prod f_i^i.

    Returned factors are monic, pairwise coprime, and square-free; factors of
    multiplicity i collect exactly the roots of p with multiplicity i.
    """
    if p.degree <= 0:
        return []
    dp = poly_derivative(p)
    g = poly_gcd(p, dp)
    if g.degree == 0:
        return [(p.monic(), 1)]
    out = []
    w = poly_divmod(p, g)[0]
    y = poly_divmod(dp, g)[0]
    z = y - poly_derivative(w)
    i = 1
    while w.degree > 0:
        f = poly_gcd(w, z)
        if f.degree > 0:
            out.append((f.monic(), i))
        w = poly_divmod(w, f)[0]
        y = poly_divmod(z, f)[0]
        z = y - poly_derivative(w)
        i += 1
    return out


# ---------------------------------------------------------------------------
# Sylvester matrices, resultants, discriminants
# ---------------------------------------------------------------------------


def sylvester_matrix(A: UniPoly, B: UniPoly) -> list[list[Fraction]]:
    """(m+n) x (m+n) Sylvester matrix: n shifted rows of A, then m rows of B."""
    if A.is_zero or B.is_zero:
        raise ValueError("sylvester_matrix requires nonzero polynomials")
    m, n = A.degree, B.degree
    if m < 1 or n < 1:
        raise ValueError("sylvester_matrix requires degree >= 1 on both sides")
    size = m + n
    rows = []
    ac = list(reversed(A.coeffs))
    bc = list(reversed(B.coeffs))
    for i in range(n):
        rows.append([Fraction(0)] * i + ac + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + bc + [Fraction(0)] * (size - n - 1 - i))
    return rows


def _bareiss_det_int(m: list[list[int]]) -> int:
    """Fraction-free (Bareiss) determinant of an integer matrix."""
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def matrix_determinant(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant of a rational matrix via row-scaled Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    int_rows = []
    for row in rows:
        den = math.lcm(*(Fraction(c).denominator for c in row)) if row else 1
        scale /= den
        int_rows.append([int(Fraction(c) * den) for c in row])
    return Fraction(_bareiss_det_int(int_rows)) * scale


def resultant(A: UniPoly, B: UniPoly) -> Fraction:
    """Resultant as the exact Sylvester determinant."""
    return matrix_determinant(sylvester_matrix(A, B))


def _int_primitive(p: UniPoly) -> tuple[list[int], Fraction]:
    """Integer primitive coefficients and the positive factor taken out.

    Returns (coeffs, c) with p = c * coeffs and c > 0; the sign of the
    leading coefficient stays with the integer part.
    """
    if p.is_zero:
        return [], Fraction(1)
    den = math.lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = math.gcd(*(abs(c) for c in ints))
    ints = [c // g for c in ints]
    return ints, Fraction(g, den)


def _prem_int(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials: lc(b)^(da-db+1) * a mod b."""
    da, db = len(a) - 1, len(b) - 1
    lb = b[-1]
    r = list(a)
    for i in range(da - db, -1, -1):
        lead = r[i + db]
        if lead:
            for j in range(len(r)):
                r[j] *= lb
            for j, bc in enumerate(b):
                r[i + j] -= lead * bc
        else:
            # keep the multiplier count uniform across all steps
            for j in range(len(r)):
                r[j] *= lb
        r[i + db] = 0
    while r and r[-1] == 0:
        r.pop()
    return r


def resultant_subresultant(A: UniPoly, B: UniPoly) -> Fraction:
    """Resultant via the subresultant remainder sequence.

    Independent of the Sylvester-determinant route; the two must agree.
    """
    if A.is_zero or B.is_zero:
        raise ValueError("resultant requires nonzero polynomials")
    if A.degree < 1 or B.degree < 1:
        raise ValueError("resultant requires degree >= 1 on both sides")
    a, ca = _int_primitive(A)
    b, cb = _int_primitive(B)
    factor = ca ** B.degree * cb ** A.degree
    sign = 1
    if len(a) < len(b):
        if ((len(a) - 1) * (len(b) - 1)) % 2 == 1:
            sign = -sign
        a, b = b, a
    g, h = 1, 1
    while True:
        da, db = len(a) - 1, len(b) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            sign = -sign
        r = _prem_int(a, b)
        if not r:
            return Fraction(0)
        a, b = b, [c // (g * h**delta) for c in r]
        g = a[-1]
        h = h * g**delta // h**delta if delta else h
        if len(b) - 1 <= 0:
            da = len(a) - 1
            res_prim = b[0] ** da // h ** (da - 1) if da >= 1 else 1
            return sign * factor * Fraction(res_prim)


def discriminant(p: UniPoly) -> Fraction:
    """(-1)^(n(n-1)/2) * Res(p, p') / lc(p), exact; requires degree >= 2."""
    n = p.degree
    if n < 2:
        raise ValueError("discriminant requires degree >= 2")
    res = resultant(p, poly_derivative(p))
    sgn = -1 if (n * (n - 1) // 2) % 2 else 1
    return sgn * res / p.leading_coefficient


# ---------------------------------------------------------------------------
# Sturm sequences, root counting, isolation, refinement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SturmChain:
    """Signed remainder chain p0 = p, p1 = p', p_{i+1} = -rem(p_{i-1}, p_i)."""

    sequence: tuple[UniPoly, ...]


def sturm_chain(p: UniPoly) -> SturmChain:
    if p.is_zero:
        raise ValueError("sturm_chain requires a nonzero polynomial")
    seq = [p]
    if p.degree >= 1:
        seq.append(poly_derivative(p))
        while not seq[-1].is_zero and seq[-1].degree > 0:
            rem = poly_divmod(seq[-2], seq[-1])[1]
            if rem.is_zero:
                break
            seq.append(-rem)
    return SturmChain(tuple(seq))


def _signed_prs(ints: list[int]) -> list[list[int]]:
    """Primitive integer chain, sign-proportional to the Sturm chain.

    Every element equals a positive rational multiple of the corresponding
    classical chain element, so sign variation counts are unchanged.  For
    square-free input the last element is a nonzero constant; otherwise it is
    proportional to gcd(p, p').
    """
    chain = [ints]
    if len(ints) - 1 >= 1:
        d = [i * c for i, c in enumerate(ints)][1:]
        g = math.gcd(*(abs(c) for c in d))
        chain.append([c // g for c in d])
        while len(chain[-1]) - 1 > 0:
            a, b = chain[-2], chain[-1]
            delta = (len(a) - 1) - (len(b) - 1)
            r = _prem_int(a, b)
            if not r:
                break
            # prem multiplies by lc(b)^(delta+1); compensate a negative multiplier
            if b[-1] < 0 and (delta + 1) % 2 == 1:
                r = [-c for c in r]
            r = [-c for c in r]
            g = math.gcd(*(abs(c) for c in r))
            chain.append([c // g for c in r])
    return chain


def _divexact_int(a: list[int], b: list[int]) -> list[int]:
    """Exact quotient of integer polynomials (b must divide a)."""
    out = [0] * (len(a) - len(b) + 1)
    rem = list(a)
    db, lb = len(b) - 1, b[-1]
    for i in range(len(out) - 1, -1, -1):
        q, check = divmod(rem[i + db], lb)
        if check:
            raise ArithmeticError("inexact integer polynomial division")
        out[i] = q
        if q:
            for j, bc in enumerate(b):
                rem[i + j] -= q * bc
    if any(rem):
        raise ArithmeticError("inexact integer polynomial division")
    return out


class _SturmData:
    """Square-free integer polynomial plus its signed chain, built once."""

    __slots__ = ("sf_ints", "chain", "square_free")

    def __init__(self, p: UniPoly):
        ints, _ = _int_primitive(p)
        chain = _signed_prs(ints)
        if len(chain[-1]) <= 1:
            self.sf_ints = ints
            self.chain = chain
            self.square_free = True
        else:
            g = chain[-1]
            c = math.gcd(*(abs(x) for x in g))
            sf = _divexact_int(ints, [x // c for x in g])
            c = math.gcd(*(abs(x) for x in sf))
            self.sf_ints = [x // c for x in sf]
            self.chain = _signed_prs(self.sf_ints)
            self.square_free = False


# Memo for repeated queries against the same polynomial (counting, isolating
# and refining all hit this).  Entries are immutable once stored and dict
# operations are atomic under the GIL, so concurrent readers stay safe; a
# clear() only ever drops cached work.
_STURM_CACHE: dict[tuple, _SturmData] = {}


def _sturm_data(p: UniPoly) -> _SturmData:
    key = p.coeffs
    data = _STURM_CACHE.get(key)
    if data is None:
        if len(_STURM_CACHE) > 512:
            _STURM_CACHE.clear()
        data = _STURM_CACHE[key] = _SturmData(p)
    return data


def _sign_at(ints: list[int], x: Fraction) -> int:
    """Sign of an integer polynomial at a rational point, exactly.

    Evaluates sum c_i num^i den^(d-i), which is the value scaled by den^d > 0.
    """
    num, den = x.numerator, x.denominator
    acc = 0
    powden = 1
    for c in reversed(ints):
        acc = acc * num + c * powden
        powden *= den
    if acc > 0:
        return 1
    if acc < 0:
        return -1
    return 0


def _variations(signs: Iterable[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def _chain_signs(chain: list[list[int]], x: Endpoint) -> list[int]:
    out = []
    for ints in chain:
        if isinstance(x, _Inf):
            lead = ints[-1]
            if not x.positive and (len(ints) - 1) % 2 == 1:
                lead = -lead
            out.append(1 if lead > 0 else (-1 if lead < 0 else 0))
        else:
            out.append(_sign_at(ints, Fraction(x)))
    return out


def sturm_count(p: UniPoly, lo: Endpoint, hi: Endpoint) -> int:
    """Distinct real roots of p in (lo, hi]; endpoints may be POS_INF/NEG_INF."""
    if p.is_zero:
        raise ValueError("sturm_count requires a nonzero polynomial")
    if p.degree < 1:
        return 0
    chain = _sturm_data(p).chain
    return _variations(_chain_signs(chain, lo)) - _variations(_chain_signs(chain, hi))


@dataclass(frozen=True)
class RootInterval:
    """Half-open isolating interval (lo, hi] for one distinct real root."""

    lo: Fraction
    hi: Fraction
    multiplicity: int


def _cauchy_bound(ints: list[int]) -> int:
    """Integer bound B with all real roots in (-B, B)."""
    lead = abs(ints[-1])
    m = max(abs(c) for c in ints[:-1]) if len(ints) > 1 else 0
    return 1 + (m + lead - 1) // lead if m else 1


def _isolate_square_free(
    chain: list[list[int]], lo: Fraction, hi: Fraction
) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals (lo, hi] inside a starting interval."""
    out = []
    vlo = _variations(_chain_signs(chain, lo))
    vhi = _variations(_chain_signs(chain, hi))
    stack = [(lo, hi, vlo, vhi)]
    while stack:
        a, b, va, vb = stack.pop()
        n = va - vb
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        vm = _variations(_chain_signs(chain, mid))
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    out.sort()
    return out


def _with_multiplicities(p: UniPoly, data: _SturmData, raw) -> list[RootInterval]:
    if data.square_free:
        return [RootInterval(lo, hi, 1) for lo, hi in raw]
    factors = square_free_decomposition(p)
    out = []
    for lo, hi in raw:
        mult = 0
        for f, m in factors:
            if f.degree > 0 and sturm_count(f, lo, hi) == 1:
                mult = m
                break
        out.append(RootInterval(lo, hi, mult))
    return out


def isolate_real_roots(p: UniPoly) -> list[RootInterval]:
    """Isolating intervals for every distinct real root, with multiplicities."""
    if p.is_zero or p.degree < 1:
        raise ValueError("isolate_real_roots requires degree >= 1")
    data = _sturm_data(p)
    bound = Fraction(_cauchy_bound(data.sf_ints))
    raw = _isolate_square_free(data.chain, -bound, bound)
    return _with_multiplicities(p, data, raw)


def isolate_roots_in_interval(p: UniPoly, lo: Fraction, hi: Fraction) -> list[RootInterval]:
    """Isolating intervals restricted to (lo, hi], with multiplicities."""
    if p.is_zero or p.degree < 1:
        raise ValueError("isolate_roots_in_interval requires degree >= 1")
    data = _sturm_data(p)
    raw = _isolate_square_free(data.chain, Fraction(lo), Fraction(hi))
    return _with_multiplicities(p, data, raw)


def refine_root(p: UniPoly, iv: RootInterval, width: Fraction) -> Fraction:
    """Bisect the isolating interval until its width is at most `width`.

    Works on the square-free part so multiple roots refine like simple ones;
    an exact rational root is returned exactly when bisection lands on it.
    """
    ints = _sturm_data(p).sf_ints
    lo, hi = Fraction(iv.lo), Fraction(iv.hi)
    width = Fraction(width)
    s_hi = _sign_at(ints, hi)
    if s_hi == 0:
        return hi
    while hi - lo > width:
        mid = (lo + hi) / 2
        s_mid = _sign_at(ints, mid)
        if s_mid == 0:
            return mid
        if s_mid == s_hi:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2
