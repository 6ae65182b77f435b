"""Arbitrary-precision evaluation of eta, the Weber functions, j, the class
invariants, and the order-24 character chi on Gamma_0(2).

Values are carried as ``BigComplex`` (an mpmath complex number with an
absolute error bound).  Each public evaluator works in its own mpmath
context, so no global precision state is touched.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import mpmath

GUARD = 64
ARG_BITS = 64


def new_context(prec: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec + GUARD
    return ctx


class NotInUpperHalfPlane(ValueError):
    pass


class NotInGamma02(ValueError):
    pass


class InadmissibleDiscriminant(ValueError):
    pass


@dataclass(frozen=True)
class BigComplex:
    """Complex number with a certified absolute error bound ``err``."""

    value: mpmath.mpc
    err: mpmath.mpf

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    def _ulp(self, x) -> mpmath.mpf:
        return abs(x) * mpmath.mpf(2) ** (-_prec_of(x) + 2)

    def __add__(self, other: "BigComplex") -> "BigComplex":
        v = self.value + other.value
        return BigComplex(v, self.err + other.err + self._ulp(v))

    def __sub__(self, other: "BigComplex") -> "BigComplex":
        v = self.value - other.value
        return BigComplex(v, self.err + other.err + self._ulp(v))

    def __neg__(self) -> "BigComplex":
        return BigComplex(-self.value, self.err)

    def __mul__(self, other: "BigComplex") -> "BigComplex":
        v = self.value * other.value
        e = abs(self.value) * other.err + abs(other.value) * self.err + self.err * other.err
        return BigComplex(v, e + self._ulp(v))

    def __truediv__(self, other: "BigComplex") -> "BigComplex":
        den = abs(other.value) - other.err
        if den <= 0:
            raise ZeroDivisionError("divisor not bounded away from zero")
        v = self.value / other.value
        e = (self.err + abs(v) * other.err) / den
        return BigComplex(v, e + self._ulp(v))

    def __pow__(self, k: int) -> "BigComplex":
        ctx = getattr(self.value, "context", mpmath.mp)
        if k < 0:
            return exact(1, ctx) / (self ** (-k))
        out = exact(1, ctx)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale_unit(self, u) -> "BigComplex":
        """Multiply by a unit-modulus number known to full working precision."""
        v = self.value * u
        return BigComplex(v, self.err + self._ulp(v) * 2)

    def rel_err(self):
        a = abs(self.value)
        return self.err / a if a else mpmath.inf


def _prec_of(x) -> int:
    ctx = getattr(x, "context", None)
    return getattr(ctx, "prec", mpmath.mp.prec)


def exact(x, ctx=None) -> BigComplex:
    """An exactly known value, stored in ``ctx`` (default: global mpmath)."""
    ctx = ctx or mpmath.mp
    return BigComplex(ctx.mpc(x), ctx.mpf(0))


def as_big(x, ctx: mpmath.MPContext) -> BigComplex:
    v = ctx.mpc(x)
    return BigComplex(v, abs(v) * ctx.mpf(2) ** (-ctx.prec + 1))


def root_of_unity(ctx: mpmath.MPContext, k: int, n: int):
    """e(k/n) in the given context, exponent reduced exactly first."""
    k %= n
    return ctx.expjpi(ctx.mpf(2 * k) / n)


# ---------------------------------------------------------------------------
# eta


def _pentagonal_sum(ctx: mpmath.MPContext, q) -> Tuple[mpmath.mpc, mpmath.mpf, int]:
    """sum_k (-1)^k q^(k(3k-1)/2) with truncation bound and term count."""
    aq = abs(q)
    if aq >= 1:
        raise NotInUpperHalfPlane("|q| >= 1")
    eps = ctx.mpf(2) ** (-ctx.prec)
    total = ctx.mpc(1)
    k = 1
    # q^(k(3k-1)/2) and q^(k(3k+1)/2), updated multiplicatively
    qa = q  # exponent 1 for k = 1
    qb = q * q  # exponent 2 for k = 1
    step_a = q**4  # next increment 3k+1 for the a-branch
    step_b = q**5
    q3 = q**3
    n = 1
    while True:
        sign = -1 if k % 2 else 1
        total += sign * (qa + qb)
        n += 2
        if abs(qa) < eps:
            break
        qa *= step_a
        qb *= step_b
        step_a *= q3
        step_b *= q3
        k += 1
    # remaining terms have exponents beyond the current ones and are each
    # bounded by |q|^e, with distinct exponents, hence a geometric tail
    tail = 2 * abs(qa) * abs(step_a) / (1 - aq)
    return total, tail, n


def eta(tau, prec: int) -> BigComplex:
    """Dedekind eta with relative error below 2^-prec.

    tau is first shifted by an integer k into |Re tau| <= 1/2, and the
    factor e(k/24) is applied exactly.  Working precision grows until the
    cancellation in the pentagonal series is under control.
    """
    tau = _value(tau)
    if tau.imag <= 0:
        raise NotInUpperHalfPlane(f"Im tau = {tau.imag}")
    extra = 0
    while True:
        ctx = new_context(prec + extra)
        t = ctx.mpc(tau)
        k = int(ctx.nint(t.real))
        t0 = t - k
        q = ctx.expjpi(2 * t0)
        s, tail, nterms = _pentagonal_sum(ctx, q)
        rounding = nterms * 4 * ctx.mpf(2) ** (-ctx.prec)
        pref = ctx.expjpi(t0 / 12) * root_of_unity(ctx, k, 24)
        val = pref * s
        # last term: rounding tau into ctx, fine while |tau eta'/eta| < 2^20
        err = abs(pref) * (tail + rounding) + abs(val) * ctx.mpf(2) ** (-ctx.prec + 24)
        if abs(val) > 0 and err <= abs(val) * ctx.mpf(2) ** (-prec):
            return BigComplex(val, err)
        lost = int(-ctx.log(abs(val) + ctx.mpf(2) ** (-ctx.prec), 2)) if abs(val) else ctx.prec
        extra = max(2 * extra + 32, lost + 32)


def _value(x):
    return x.value if isinstance(x, BigComplex) else x


def weber(tau, prec: int) -> Tuple[BigComplex, BigComplex, BigComplex]:
    """The Weber functions (f, f1, f2) at tau."""
    ctx = new_context(prec)
    # shifted arguments carry ARG_BITS extra bits so their rounding stays far below err
    wide = new_context(prec + ARG_BITS)
    t = wide.mpc(_value(tau))
    e = eta(t, prec + 8)
    e_half = eta((t + 1) / 2, prec + 8)
    e_half1 = eta(t / 2, prec + 8)
    e_two = eta(2 * t, prec + 8)
    f = (e_half / e).scale_unit(root_of_unity(ctx, -1, 48))
    f1 = e_half1 / e
    f2 = (e_two / e) * as_big(ctx.sqrt(2), ctx)
    return tuple(_with_arg_rounding(x, prec) for x in (f, f1, f2))


def _with_arg_rounding(x: BigComplex, prec: int) -> BigComplex:
    """Add the effect of rounding tau, bounded by |x| 2^-(prec + ARG_BITS/2)."""
    return BigComplex(x.value, x.err + abs(x.value) * mpmath.mpf(2) ** (-prec - ARG_BITS // 2))


def weber_f2(tau, prec: int) -> BigComplex:
    ctx = new_context(prec)
    t = new_context(prec + ARG_BITS).mpc(_value(tau))
    return _with_arg_rounding((eta(2 * t, prec + 8) / eta(t, prec + 8)) * as_big(ctx.sqrt(2), ctx), prec)


def j_from_weber(tau, prec: int) -> BigComplex:
    """j = (f2^24 + 16)^3 / f2^24."""
    f2_24 = weber_f2(tau, prec + 16) ** 24
    return (f2_24 + exact(16, f2_24.value.context)) ** 3 / f2_24


def reduce_sl2z(tau, ctx: mpmath.MPContext):
    """Move tau into the standard fundamental domain (used only by oracles)."""
    t = ctx.mpc(tau)
    for _ in range(10000):
        t -= ctx.nint(t.real)
        if abs(t) < 1 - ctx.mpf(2) ** (-ctx.prec // 2):
            t = -1 / t
        else:
            return t
    raise RuntimeError("reduction did not terminate")


def j_from_eisenstein(tau, prec: int) -> BigComplex:
    """j = 1728 E4^3 / (E4^3 - E6^2) from Lambert series, after SL2(Z) reduction."""
    ctx = new_context(prec + 32)
    t = reduce_sl2z(_value(tau), ctx)
    q = ctx.expjpi(2 * t)
    eps = ctx.mpf(2) ** (-ctx.prec)
    s4 = ctx.mpc(0)
    s6 = ctx.mpc(0)
    qn = q
    n = 1
    while abs(qn) > eps * 1e-6:
        s4 += n**3 * qn / (1 - qn)
        s6 += n**5 * qn / (1 - qn)
        qn *= q
        n += 1
    e4 = 1 + 240 * s4
    e6 = 1 - 504 * s6
    j = 1728 * e4**3 / (e4**3 - e6**2)
    # error: truncation tail is below eps * n^5 relative to E6 size; be generous
    err = abs(j) * ctx.mpf(2) ** (-(prec + 8))
    return BigComplex(j, err)


class EvaluationMismatch(AssertionError):
    pass


def j_invariant(tau, prec: int) -> BigComplex:
    """j via the Weber relation, cross-checked against the Eisenstein route."""
    a = j_from_weber(tau, prec)
    b = j_from_eisenstein(tau, prec)
    if abs(a.value - b.value) > 4 * (a.err + b.err) + abs(a.value) * mpmath.mpf(2) ** (-prec + 4):
        raise EvaluationMismatch(f"j routes disagree at tau={tau}")
    return a


def class_invariant(form, prec: int) -> BigComplex:
    """The Weber class invariant f(a) of an ideal class representative."""
    from .arith import is_admissible
    from .quadratic import epsilon_d

    a, b, c = form.a, form.b, form.c
    d = form.disc
    if not is_admissible(d):
        raise InadmissibleDiscriminant(f"{d} must be 1 mod 8 and prime to 3")
    ctx = new_context(prec)
    wide = new_context(prec + ARG_BITS)
    tau = wide.mpc(-b, wide.sqrt(-d)) / (2 * a)
    f, f1, f2 = weber(tau, prec + 8)
    eps = epsilon_d(d)
    if a % 2 == 0 and c % 2 == 0:
        k, val, sign = b * (a - c - a * c * c), f, 1
    elif a % 2 == 0:
        k, val, sign = b * (a - c - a * c * c), f1, eps
    else:
        # a^2 c here; a c^2 gives non-integral class polynomials
        k, val, sign = b * (a - c + a * a * c), f2, eps
    return val.scale_unit(sign * root_of_unity(ctx, k % 48, 48))


# ---------------------------------------------------------------------------
# Gamma_0(2) and chi


@dataclass(frozen=True)
class Gamma02Element:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise NotInGamma02("determinant is not 1")
        if self.c % 2:
            raise NotInGamma02("lower-left entry must be even")

    def __matmul__(self, o: "Gamma02Element") -> "Gamma02Element":
        return Gamma02Element(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "Gamma02Element":
        return Gamma02Element(self.d, -self.b, -self.c, self.a)

    def act(self, tau):
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def tuple(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


IDENT = Gamma02Element(1, 0, 0, 1)
T = Gamma02Element(1, 1, 0, 1)
B = Gamma02Element(1, 0, -2, 1)
MINUS_I = Gamma02Element(-1, 0, 0, -1)

Word = List[Tuple[str, int]]


def letter(name: str, k: int = 1) -> Gamma02Element:
    if name == "T":
        return Gamma02Element(1, k, 0, 1)
    if name == "B":
        return Gamma02Element(1, 0, -2 * k, 1)
    if name == "-I":
        return MINUS_I if k % 2 else IDENT
    raise ValueError(name)


def word_product(word: Sequence[Tuple[str, int]]) -> Gamma02Element:
    out = IDENT
    for name, k in word:
        out = out @ letter(name, k)
    return out


def gamma02_decompose(g: Gamma02Element) -> Word:
    """Write g as a word in T^k, B^k and -I by Euclidean reduction of the bottom row."""
    if not isinstance(g, Gamma02Element):
        raise NotInGamma02("expected Gamma02Element")
    cur = g
    applied: Word = []
    while cur.c != 0:
        # T-step: shrink d modulo c
        k = -_round_div(cur.d, cur.c)
        if k:
            cur = cur @ letter("T", k)
            applied.append(("T", k))
        if cur.c == 0:
            break
        # B-step: shrink c modulo 2d
        k = _round_div(cur.c, 2 * cur.d)
        if k:
            cur = cur @ letter("B", k)
            applied.append(("B", k))
    # cur = +-T^n
    word: Word = []
    if cur.a == -1:
        word.append(("-I", 1))
        n = -cur.b
    else:
        n = cur.b
    if n:
        word.append(("T", n))
    word.extend((name, -k) for name, k in reversed(applied))
    assert word_product(word) == g
    return word


def _round_div(x: int, y: int) -> int:
    """Nearest integer to x / y."""
    q, r = divmod(x, y)
    if 2 * r > y if y > 0 else 2 * r < y:
        q += 1
    return q


def chi_exponent(g: Gamma02Element) -> int:
    """e with chi(g) = zeta_24^e, from the T and B exponent sums of a word."""
    e = 0
    for name, k in gamma02_decompose(g):
        if name == "T":
            e += k
        elif name == "B":
            e -= k
    return e % 24


def in_gamma_chi(g: Gamma02Element, d: int) -> bool:
    """Membership in the kernel of chi^(24/d)."""
    return (24 // d) * chi_exponent(g) % 24 == 0


def random_gamma02(rng: random.Random, bound: int = 50) -> Gamma02Element:
    """Pseudo-random element of Gamma_0(2) with entries bounded by ``bound``."""
    import math

    while True:
        c = 2 * rng.randint(-bound // 2, bound // 2)
        d = rng.randint(-bound, bound)
        if math.gcd(c, d) != 1:
            continue
        # solve a d - b c = 1
        if c == 0:
            a = d
            b = rng.randint(-bound, bound)
            if abs(d) != 1:
                continue
            return Gamma02Element(d, b, 0, d)
        g, x, y = _ext_gcd(d, -c)
        a, b = x, y
        shift = rng.randint(-3, 3)
        a, b = a + shift * c, b + shift * d
        if max(abs(a), abs(b)) <= bound:
            return Gamma02Element(a, b, c, d)


def _ext_gcd(x: int, y: int) -> Tuple[int, int, int]:
    if y == 0:
        return (x, 1, 0) if x >= 0 else (-x, -1, 0)
    g, s, t = _ext_gcd(y, x % y)
    return g, t, s - (x // y) * t


# ---------------------------------------------------------------------------
# the vector-valued function F_d


def F_vector(tau, d: int, prec: int) -> List[BigComplex]:
    """sqrt(2)^(24/d) (f2^(-24/d), f1^(-24/d), f^(-24/d))."""
    ctx = new_context(prec)
    f, f1, f2 = weber(tau, prec + 16)
    k = 24 // d
    c = as_big(ctx.sqrt(2) ** k, ctx)
    return [c * (x ** (-k)) for x in (f2, f1, f)]


def rho_d_matrix(d: int, which: str, ctx: mpmath.MPContext):
    """The 3x3 matrices rho_d(T), rho_d(S)."""
    z = ctx.mpc(0)
    one = ctx.mpc(1)
    if which == "S":
        return [[z, one, z], [one, z, z], [z, z, one]]
    zd = root_of_unity(ctx, -1, d)
    z2d = root_of_unity(ctx, 1, 2 * d)
    return [[zd, z, z], [z, z, z2d], [z, z2d, z]]
