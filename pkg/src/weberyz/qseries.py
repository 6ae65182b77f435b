"""Truncated two-variable Puiseux series and the Borcherds product identities.

A series is sum c_ij q1^(i/D) q2^(j/D) with i, j >= 0, truncated at total
order N: terms with i + j > N D are dropped.  Coefficients are exact Python
integers or Fractions held in a dense object array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .arith import a_coeff, divisors, moebius
from .weilrep import CycNum, Check, split_23

DIVISORS_24 = (1, 2, 3, 4, 6, 8, 12, 24)


class SymbolicExponentLeak(AssertionError):
    pass


class NotInvertible(ArithmeticError):
    pass


def binomial(e: int, k: int) -> int:
    """Generalized binomial coefficient e choose k for any integer e."""
    num = 1
    for i in range(k):
        num *= e - i
    return num // math.factorial(k)


# ---------------------------------------------------------------------------
# one variable


def product_series(exponent: int, order: int) -> List[int]:
    """Coefficients of prod_{n>=1} (1 + q^n)^exponent through q^order.

    Uses q F'/F = exponent * sum_N h(N) q^N with h(N) = sum_{n|N} (-1)^(N/n+1) n.
    """
    exponent = int(exponent)
    h = [0] * (order + 1)
    for n in range(1, order + 1):
        for k, N in enumerate(range(n, order + 1, n), start=1):
            h[N] += n if k % 2 else -n
    out = [0] * (order + 1)
    out[0] = 1
    for N in range(1, order + 1):
        acc = 0
        for k in range(1, N + 1):
            acc += h[k] * out[N - k]
        q, r = divmod(exponent * acc, N)
        assert r == 0
        out[N] = q
    return out


_ETA_CACHE: Dict[int, Dict[int, int]] = {}
_F2_CACHE: Dict[int, int] = {}


def eta_quotient_coeffs(d: int, L: int) -> Dict[int, int]:
    """c_d(l) for l <= L: (eta(tau)/eta(2 tau))^(24/d) = sum c_d(l) q^(l/d)."""
    if 24 % d:
        raise ValueError("d must divide 24")
    have = _ETA_CACHE.get(d)
    if have is None or max(have) + d <= L:
        order = max(0, (2 * L + 2) // d + 1)
        ser = product_series(-24 // d, order)
        have = {}
        for k, c in enumerate(ser):
            have[d * k - 1] = c
        _ETA_CACHE[d] = have
    return {l: c for l, c in have.items() if l <= L}


def c_d(d: int, l: int) -> int:
    if (l + 1) % d:
        return 0
    have = _ETA_CACHE.get(d)
    if have is None or l > max(have):
        eta_quotient_coeffs(d, max(l, 0))
        have = _ETA_CACHE[d]
    return have.get(l, 0)


def weber_f2_24_coeffs(L: int) -> Dict[int, int]:
    """c_{-1}(l): 2^12 q prod (1 + q^n)^24 = sum c_{-1}(l) q^l."""
    if not _F2_CACHE or max(_F2_CACHE) < L:
        ser = product_series(24, max(2 * L, 1))
        _F2_CACHE.clear()
        _F2_CACHE.update({k + 1: 2**12 * int(c) for k, c in enumerate(ser)})
    return {l: c for l, c in _F2_CACHE.items() if l <= L}


def c_minus1(l: int) -> int:
    if l < 1:
        return 0
    if not _F2_CACHE or l > max(_F2_CACHE):
        weber_f2_24_coeffs(l)
    return _F2_CACHE[l]


# ---------------------------------------------------------------------------
# two variables


class PuiseuxSeries2:
    """Exact series in q1^(1/D), q2^(1/D), truncated at total order N."""

    def __init__(self, D: int, N: int, coeffs: Optional[np.ndarray] = None):
        if D < 1 or N < 0:
            raise ValueError("need D >= 1 and N >= 0")
        self.D = D
        self.N = N
        size = N * D + 1
        if coeffs is None:
            coeffs = np.zeros((size, size), dtype=object)
            coeffs[...] = 0
        self.c = coeffs
        self._clip()

    # -- construction
    @classmethod
    def from_terms(cls, D: int, N: int, terms: Dict[Tuple[int, int], object]) -> "PuiseuxSeries2":
        out = cls(D, N)
        for (i, j), v in terms.items():
            if i < 0 or j < 0:
                raise ValueError("exponents must be nonnegative")
            if i + j <= N * D:
                out.c[i, j] += v
        return out

    @classmethod
    def one(cls, D: int, N: int) -> "PuiseuxSeries2":
        return cls.from_terms(D, N, {(0, 0): 1})

    @classmethod
    def monomial(cls, D: int, N: int, i: int, j: int, coef=1) -> "PuiseuxSeries2":
        return cls.from_terms(D, N, {(i, j): coef})

    @classmethod
    def outer(cls, D: int, N: int, f1: Sequence, f2: Sequence) -> "PuiseuxSeries2":
        """sum_i f1[i] q1^(i/D) times sum_j f2[j] q2^(j/D)."""
        out = cls(D, N)
        size = N * D + 1
        a = np.zeros(size, dtype=object)
        b = np.zeros(size, dtype=object)
        a[...] = 0
        b[...] = 0
        for i, v in enumerate(f1[:size]):
            a[i] = v
        for j, v in enumerate(f2[:size]):
            b[j] = v
        out.c = np.multiply.outer(a, b)
        out._clip()
        return out

    def _mask(self) -> np.ndarray:
        size = self.N * self.D + 1
        idx = np.arange(size)
        return idx[:, None] + idx[None, :] > self.N * self.D

    def _clip(self) -> None:
        self.c[self._mask()] = 0

    def copy(self) -> "PuiseuxSeries2":
        return PuiseuxSeries2(self.D, self.N, self.c.copy())

    def _like(self, other: "PuiseuxSeries2") -> None:
        if (self.D, self.N) != (other.D, other.N):
            raise ValueError("series must share denominator and truncation")

    # -- ring operations
    def __add__(self, other: "PuiseuxSeries2") -> "PuiseuxSeries2":
        self._like(other)
        return PuiseuxSeries2(self.D, self.N, self.c + other.c)

    def __sub__(self, other: "PuiseuxSeries2") -> "PuiseuxSeries2":
        self._like(other)
        return PuiseuxSeries2(self.D, self.N, self.c - other.c)

    def __neg__(self) -> "PuiseuxSeries2":
        return PuiseuxSeries2(self.D, self.N, -self.c)

    def scale(self, k) -> "PuiseuxSeries2":
        return PuiseuxSeries2(self.D, self.N, self.c * k)

    def nonzero(self) -> List[Tuple[int, int, object]]:
        idx = np.argwhere(self.c != 0)
        return [(int(i), int(j), self.c[i, j]) for i, j in idx]

    def __mul__(self, other) -> "PuiseuxSeries2":
        if not isinstance(other, PuiseuxSeries2):
            return self.scale(other)
        self._like(other)
        a, b = (self, other) if len(self.nonzero()) <= len(other.nonzero()) else (other, self)
        return b.mul_sparse(a.nonzero())

    __rmul__ = __mul__

    def mul_sparse(self, terms: Iterable[Tuple[int, int, object]]) -> "PuiseuxSeries2":
        """Multiply by sum c q1^(i/D) q2^(j/D) over the given terms."""
        size = self.N * self.D + 1
        out = np.zeros_like(self.c)
        out[...] = 0
        for i, j, v in terms:
            if i + j > self.N * self.D:
                continue
            out[i:, j:] += v * self.c[: size - i, : size - j]
        return PuiseuxSeries2(self.D, self.N, out)

    def mul_binomial_power(self, i: int, j: int, e: int, sign: int = -1) -> "PuiseuxSeries2":
        """Multiply by (1 + sign q1^(i/D) q2^(j/D))^e, for i + j > 0."""
        if i + j <= 0:
            raise ValueError("monomial must have positive order")
        if e == 0:
            return self.copy()
        terms = []
        k = 0
        while k * (i + j) <= self.N * self.D:
            terms.append((k * i, k * j, binomial(e, k) * sign**k))
            k += 1
        return self.mul_sparse(terms)

    def inverse(self) -> "PuiseuxSeries2":
        """Inverse of a series with nonzero constant term, by Newton iteration."""
        c0 = self.c[0, 0]
        if c0 == 0:
            raise NotInvertible("constant term vanishes; inverse leaves the power series ring")
        inv0 = Fraction(1, 1) / c0
        if inv0.denominator == 1:
            inv0 = int(inv0)
        h = PuiseuxSeries2.one(self.D, self.N).scale(inv0)
        two = PuiseuxSeries2.one(self.D, self.N).scale(2)
        prec = 1
        while prec <= self.N * self.D:
            h = h * (two - self * h)
            prec *= 2
        return h

    def __pow__(self, e: int) -> "PuiseuxSeries2":
        base = self if e >= 0 else self.inverse()
        out = PuiseuxSeries2.one(self.D, self.N)
        for _ in range(abs(e)):
            out = out * base
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PuiseuxSeries2):
            return NotImplemented
        if self.N != other.N:
            return False
        D = self.D * other.D // math.gcd(self.D, other.D)
        return bool(np.all(self.refine(D).c == other.refine(D).c))

    def refine(self, D: int) -> "PuiseuxSeries2":
        """The same series over the finer denominator D (a multiple of self.D)."""
        if D % self.D:
            raise ValueError("new denominator must be a multiple")
        if D == self.D:
            return self
        k = D // self.D
        out = PuiseuxSeries2(D, self.N)
        out.c[::k, ::k] = self.c
        return out

    def swap(self) -> "PuiseuxSeries2":
        return PuiseuxSeries2(self.D, self.N, self.c.T.copy())

    def min_order(self) -> Optional[int]:
        nz = self.nonzero()
        return min(i + j for i, j, _ in nz) if nz else None

    def dump(self) -> List[str]:
        """Lines 'i/D j/D num/den', sorted by exponents."""
        out = []
        for i, j, v in sorted(self.nonzero()):
            f = Fraction(v)
            out.append(f"{i}/{self.D} {j}/{self.D} {f.numerator}/{f.denominator}")
        return out

    def __repr__(self) -> str:
        head = self.dump()[:6]
        return f"PuiseuxSeries2(D={self.D}, N={self.N}, {len(self.nonzero())} terms: {'; '.join(head)} ...)"


# ---------------------------------------------------------------------------
# Borcherds products


TWIST_READINGS = ("parity", "trivial", "literal")


def twist(d: int, n: int, m: int, reading: str = "parity") -> int:
    """Sign attached to the factor (n, m) of Psi_d.

    For d2 > 1 this is (-1)^((n^2 - 1)/d2).  For d2 = 1 the 'parity' reading
    gives -1 exactly when n and m are both even; 'trivial' gives 1 and
    'literal' gives (-1)^(n^2 - 1).
    """
    if reading not in TWIST_READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    d2, _ = split_23(d)
    if d2 == 1:
        if reading == "literal":
            return -1 if (n * n - 1) % 2 else 1
        if reading == "parity":
            return -1 if n % 2 == 0 and m % 2 == 0 else 1
        return 1
    q, r = divmod(n * n - 1, d2)
    if r:
        raise ValueError(f"(n^2 - 1)/{d2} is not integral for n = {n}")
    return -1 if q % 2 else 1


@dataclass
class PsiFactors:
    """Psi_d as a formal product.

    ``leading`` maps b to the exponent of (q1^(1/b) - q2^(1/b)); ``binomials``
    lists (i, j, e) for factors (1 - q1^(i/D) q2^(j/D))^e; ``constant`` is
    the scalar in front.
    """

    D: int
    leading: Dict[int, int]
    binomials: List[Tuple[int, int, int]]
    constant: int = 1

    def power(self, sign: int) -> "PsiFactors":
        if sign == 1:
            return self
        if abs(self.constant) != 1:
            # only Psi_1 carries 2^12, and it always enters with exponent +1
            raise ValueError("cannot invert a non-unit constant exactly in the integer setting")
        return PsiFactors(self.D, {b: -e for b, e in self.leading.items()},
                          [(i, j, -e) for i, j, e in self.binomials], self.constant)


def psi_factors(d: int, D: int, N: int, reading: str = "parity") -> PsiFactors:
    """Factors of Psi_d needed through total order N, over denominator D (d | D)."""
    if D % d:
        raise ValueError("D must be a multiple of d")
    limit = N * D
    if d == 1:
        # m = 0 or n = 0 also occurs; there c_{-1}(0) is taken to be 24
        bins = []
        for n in range(0, N + 1):
            for m in range(0, N + 1 - n):
                if m == n == 0:
                    continue
                e = c_d(1, m * n)
                if e:
                    bins.append((n * D, m * D, e))
                e2 = c_minus1(2 * m * n) if m * n else 24
                if 2 * (n + m) <= N:
                    bins.append((2 * n * D, 2 * m * D, e2))
        return PsiFactors(D, {1: 1}, bins, 2**12)
    leading = {b: b * moebius(d // b) for b in divisors(d) if moebius(d // b)}
    bins = []
    for n in range(1, limit + 1):
        for m in range(1, limit + 1 - n):
            if (m * n + 1) % d:
                continue
            c = c_d(d, m * n)
            if not c:
                continue
            tw = twist(d, n, m, reading)
            for b in divisors(d):
                mu = moebius(d // b)
                if not mu:
                    continue
                i, j = n * D // b, m * D // b
                if (n * D) % b or (m * D) % b or i + j > limit:
                    continue
                bins.append((i, j, c * tw * b * mu))
    return PsiFactors(D, leading, bins, 1)


def _leading_series(D: int, N: int, b: int, e: int) -> PuiseuxSeries2:
    """(q1^(1/b) - q2^(1/b))^e for e >= 0."""
    k = D // b
    terms = {}
    for t in range(e + 1):
        terms[(k * (e - t), k * t)] = binomial(e, t) * (-1) ** t
    return PuiseuxSeries2.from_terms(D, N, terms)


def binomial_product(D: int, N: int, exponents: Dict[Tuple[int, int], int]) -> PuiseuxSeries2:
    """prod (1 - q1^(i/D) q2^(j/D))^e over the given exponents, by an exact exponential.

    With H = theta log F for the total-degree operator theta, every
    coefficient of H is an integer and t F_t = sum_k H_k F_(t-k) on the
    homogeneous parts, so F is built degree by degree with exact division.
    """
    limit = N * D
    H = [np.zeros(t + 1, dtype=object) for t in range(limit + 1)]
    for t in range(limit + 1):
        H[t][...] = 0
    for (i, j), e in exponents.items():
        t0 = i + j
        if not e or t0 > limit:
            continue
        if t0 <= 0:
            raise ValueError("monomial must have positive order")
        k = 1
        while k * t0 <= limit:
            H[k * t0][k * i] -= e * t0
            k += 1
    live = [k for k in range(1, limit + 1) if any(H[k])]
    F = [np.array([1], dtype=object)]
    for t in range(1, limit + 1):
        acc = np.zeros(t + 1, dtype=object)
        acc[...] = 0
        for k in live:
            if k > t:
                break
            acc = acc + np.convolve(H[k], F[t - k])
        out = np.zeros(t + 1, dtype=object)
        for idx, v in enumerate(acc):
            q, r = divmod(v, t)
            if r:
                raise ArithmeticError("non-integral coefficient in a binomial product")
            out[idx] = q
        F.append(out)
    series = PuiseuxSeries2(D, N)
    for t, comp in enumerate(F):
        for i, v in enumerate(comp):
            if v:
                series.c[i, t - i] = v
    return series


def leading_order(leading: Dict[int, int]) -> int:
    """Upper bound for the total order of the leading polynomials, rounded up."""
    return math.ceil(sum(Fraction(abs(e), b) for e, b in ((e, b) for b, e in leading.items())))


def expand_cross(factor_lists: Sequence[PsiFactors], D: int, N: int) -> Tuple[PuiseuxSeries2, PuiseuxSeries2]:
    """(positive part, cross factor): product = positive / cross.

    The leading factors with negative exponents are returned separately so
    that no non-unit series is ever inverted.
    """
    leading: Dict[int, int] = {}
    exponents: Dict[Tuple[int, int], int] = {}
    const = 1
    for f in factor_lists:
        const *= f.constant
        for b, e in f.leading.items():
            leading[b] = leading.get(b, 0) + e
        for i, j, e in f.binomials:
            exponents[(i, j)] = exponents.get((i, j), 0) + e
    pos = binomial_product(D, N, exponents)
    cross = PuiseuxSeries2.one(D, N)
    for b, e in sorted(leading.items()):
        if e > 0:
            pos = pos * _leading_series(D, N, b, e)
        elif e < 0:
            cross = cross * _leading_series(D, N, b, -e)
    return pos.scale(const), cross


def combined_leading(factor_lists: Sequence[PsiFactors]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for f in factor_lists:
        for b, e in f.leading.items():
            out[b] = out.get(b, 0) + e
    return out


def psi_product(d: int, N: int, D: Optional[int] = None, reading: str = "parity") -> PuiseuxSeries2:
    """Psi_d through total order N when its leading part is a polynomial.

    For d with a negative leading exponent the Laurent quotient is not a
    power series; use ``expand_cross`` instead.
    """
    D = D or d
    pos, cross = expand_cross([psi_factors(d, D, N, reading)], D, N)
    if cross.nonzero() != [(0, 0, 1)]:
        raise NotInvertible(f"Psi_{d} has a Laurent leading part; use expand_cross")
    return pos


# ---------------------------------------------------------------------------
# Weber side


@dataclass
class TwoPower:
    """A series times 2^(k/s), with k tracked exactly."""

    series: PuiseuxSeries2
    exponent: Fraction

    def __mul__(self, other: "TwoPower") -> "TwoPower":
        return TwoPower(self.series * other.series, self.exponent + other.exponent)

    def __add__(self, other: "TwoPower") -> "TwoPower":
        if self.exponent != other.exponent:
            raise SymbolicExponentLeak("cannot add terms with different powers of 2")
        return TwoPower(self.series + other.series, self.exponent)

    def collapse(self) -> PuiseuxSeries2:
        if self.exponent.denominator != 1 or self.exponent < 0:
            raise SymbolicExponentLeak(f"2^{self.exponent} survives")
        return self.series.scale(2 ** int(self.exponent))


def weber_power_series(k: int, s: int, N: int, variable: int) -> TwoPower:
    """f2(z)^(24k/s) = 2^(12k/s) q^(k/s) prod (1 + q^n)^(24k/s), in q1 or q2, denominator s."""
    order = N * s
    ser = product_series(24 * k // s, N)
    coeffs = [0] * (order + 1)
    for n, c in enumerate(ser):
        idx = k + n * s
        if idx <= order:
            coeffs[idx] = c
    one = [1] + [0] * order
    f1, f2 = (coeffs, one) if variable == 1 else (one, coeffs)
    return TwoPower(PuiseuxSeries2.outer(s, N, f1, f2), Fraction(12 * k, s))


def weber24s_series(s: int, eps: int, N: int) -> PuiseuxSeries2:
    """(f2(z1)^(24/s) - (eps f2(z2))^(24/s))^s through total order N, denominator s."""
    if 24 % s:
        raise ValueError("s must divide 24")
    sign = eps ** (24 // s)
    total: Optional[TwoPower] = None
    for k in range(s + 1):
        coef = binomial(s, k) * (-sign) ** k
        term = weber_power_series(s - k, s, N, 1) * weber_power_series(k, s, N, 2)
        term = TwoPower(term.series.scale(coef), term.exponent)
        total = term if total is None else total + term
    assert total is not None
    return total.collapse()


def weber_difference(b: int, eps: int, N: int) -> TwoPower:
    """f2(z1)^(24/b) - (eps f2(z2))^(24/b) as 2^(12/b) times a series over denominator b."""
    a = weber_power_series(1, b, N, 1)
    c = weber_power_series(1, b, N, 2)
    return a + TwoPower(c.series.scale(-(eps ** (24 // b))), c.exponent)


def moebius_weber_product(d: int, eps: int, N: int, D: int) -> Tuple[PuiseuxSeries2, PuiseuxSeries2]:
    """prod_{b|d} (f2(z1)^(24/b) - (eps f2(z2))^(24/b))^(b mu(d/b)) as (positive, cross).

    The powers of 2 cancel for d > 1 and must leave exactly 2^12 for d = 1.
    """
    pos = PuiseuxSeries2.one(D, N)
    cross = PuiseuxSeries2.one(D, N)
    two = Fraction(0)
    for b in divisors(d):
        e = b * moebius(d // b)
        if not e:
            continue
        diff = weber_difference(b, eps, N)
        base = diff.series.refine(D)
        two += diff.exponent * e
        if e > 0:
            pos = pos * base ** e
        else:
            cross = cross * base ** (-e)
    return TwoPower(pos, two).collapse(), cross


# ---------------------------------------------------------------------------
# identities


def p_d_check(d: int) -> Check:
    """prod_j (1 - zeta_d^j X)^(a_d(j)) = prod_{b|d} (1 - X^(d/b))^(b mu(d/b)) through X^(4d)."""
    order = 4 * d
    # truncated power series in X with CycNum coefficients
    lhs = [CycNum.from_int(1)] + [CycNum.zero()] * order
    for j in range(d):
        e = a_coeff(d, j)
        if not e:
            continue
        z = CycNum.zeta(j, d) if d > 1 else CycNum.from_int(1)
        factor = [CycNum.zero()] * (order + 1)
        zk = CycNum.from_int(1)
        for k in range(order + 1):
            factor[k] = zk * (binomial(e, k) * (-1) ** k)
            zk = zk * z
        lhs = _mul_cyc(lhs, factor, order)
    rhs = [0] * (order + 1)
    rhs[0] = 1
    for b in divisors(d):
        e = b * moebius(d // b)
        if e:
            step = d // b
            factor = [0] * (order + 1)
            for k in range(order // step + 1):
                factor[k * step] = binomial(e, k) * (-1) ** k
            rhs = _mul_int(rhs, factor, order)
    ok = all(a == CycNum.from_int(r) for a, r in zip(lhs, rhs))
    return Check(f"p_{d}: root-of-unity product = Moebius product through X^{order}", ok,
                 {"head": rhs[: min(len(rhs), 9)]})


def _mul_cyc(a: List[CycNum], b: List[CycNum], order: int) -> List[CycNum]:
    out = [CycNum.zero()] * (order + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(order + 1 - i):
                if b[j]:
                    out[i + j] = out[i + j] + x * b[j]
    return out


def _mul_int(a: List[int], b: List[int], order: int) -> List[int]:
    out = [0] * (order + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(order + 1 - i):
                out[i + j] += x * b[j]
    return out


def pol2_check(s: int) -> Check:
    """prod_{d|s} p_d(X^(s/d)) = (1 - X)^s as polynomials (both sides are polynomials)."""
    # p_d(Y) = prod_b (1 - Y^(d/b))^(b mu(d/b)); with Y = X^(s/d) this is prod_b (1 - X^(s/b))^(...)
    exps: Dict[int, int] = {}
    for d in divisors(s):
        for b in divisors(d):
            exps[s // b] = exps.get(s // b, 0) + b * moebius(d // b)
    order = s * s + s
    num = [1] + [0] * order
    den = [1] + [0] * order
    for k, e in exps.items():
        target = num if e > 0 else den
        poly = [0] * (order + 1)
        for t in range(abs(e) + 1):
            if t * k <= order:
                poly[t * k] = binomial(abs(e), t) * (-1) ** t
        res = _mul_int(target, poly, order)
        if e > 0:
            num = res
        else:
            den = res
    expected = [0] * (order + 1)
    for t in range(s + 1):
        expected[t] = binomial(s, t) * (-1) ** t
    ok = _mul_int(expected, den, order) == num
    return Check(f"s={s}: prod_(d|s) p_d(X^(s/d)) = (1 - X)^s", ok,
                 {"exponents": {f"1-X^{k}": e for k, e in sorted(exps.items()) if e}})


def blift_check(s: int, eps: int, N: int, reading: str = "parity") -> Check:
    """(f2(z1)^(24/s) - (eps f2(z2))^(24/s))^s = prod_{d|s} Psi_d^(eps^(24/d)).

    Compared exactly through total order N beyond the leading polynomials.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    probe = [psi_factors(d, s, 0, reading).power(eps ** (24 // d)) for d in divisors(s)]
    M = N + leading_order(combined_leading(probe))
    lhs = weber24s_series(s, eps, M)
    factors = [psi_factors(d, s, M, reading).power(eps ** (24 // d)) for d in divisors(s)]
    pos, cross = expand_cross(factors, s, M)
    ok = lhs * cross == pos
    return Check(f"s={s}, eps={eps:+d}, N={N}: Weber difference = product of Psi_d", ok,
                 {"terms": len(lhs.nonzero()), "truncation": M})


def psi_single_check(d: int, eps: int, N: int, reading: str = "parity") -> Check:
    """Psi_d^(eps^(24/d)) = prod_{b|d} (f2(z1)^(24/b) - (eps f2(z2))^(24/b))^(b mu(d/b))."""
    sign = eps ** (24 // d)
    probe = psi_factors(d, d, 0, reading).power(sign)
    M = N + 2 * leading_order(probe.leading)
    pos_psi, cross_psi = expand_cross([psi_factors(d, d, M, reading).power(sign)], d, M)
    pos_w, cross_w = moebius_weber_product(d, eps, M, d)
    ok = pos_psi * cross_w == pos_w * cross_psi
    return Check(f"d={d}, eps={eps:+d}, N={N}: Psi_d as a Moebius product of Weber differences", ok,
                 {"truncation": M})
