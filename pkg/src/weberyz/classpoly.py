"""Exact integer polynomials: class polynomials by certified rounding,
characteristic polynomials of k-th powers, resultants, and the exact left
hand sides f_s(d1, d2) and J(d1, d2)."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import mpmath

from .arith import DiscriminantPair, is_admissible
from .modeval import BigComplex, InadmissibleDiscriminant, class_invariant, exact, j_invariant, new_context
from .quadratic import check_discriminant, reduced_forms


class RoundingUncertified(ArithmeticError):
    pass


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients in ascending order of degree."""

    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c or (0,))

    @classmethod
    def from_desc(cls, desc: Sequence[int]) -> "IntPoly":
        return cls(tuple(reversed(list(desc))))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    @property
    def lc(self) -> int:
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return self.lc == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            body = body + ("*" if body and mono else "") + mono
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([first] + [f"{s} {b}" for s, b in terms[1:]])


# ---------------------------------------------------------------------------
# exact polynomial helpers on coefficient lists (ascending)


def _trim(p: List[int]) -> List[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _deg(p: Sequence[int]) -> int:
    return -1 if len(p) == 1 and p[0] == 0 else len(p) - 1


def _pseudo_rem(f: List[int], g: List[int]) -> List[int]:
    """lc(g)^(deg f - deg g + 1) f mod g, exact over Z."""
    r = list(f)
    dg = _deg(g)
    lg = g[-1]
    e = _deg(f) - dg + 1
    while _deg(r) >= dg and r != [0]:
        shift = _deg(r) - dg
        lr = r[-1]
        r = [lg * x for x in r]
        for i, gi in enumerate(g):
            r[i + shift] -= lr * gi
        r.pop()
        r = _trim(r) if r else [0]
        e -= 1
    if e > 0:
        r = [x * lg**e for x in r]
    return _trim(r) if r else [0]


def _content(p: Sequence[int]) -> int:
    c = 0
    for x in p:
        c = math.gcd(c, x)
    return c


def resultant(g, h) -> int:
    """Res(g, h) = lc(g)^deg h prod h(alpha), by the subresultant PRS."""
    a = _trim(list(g.coeffs if isinstance(g, IntPoly) else g))
    b = _trim(list(h.coeffs if isinstance(h, IntPoly) else h))
    if a == [0] or b == [0]:
        return 0
    sign = 1
    if _deg(a) < _deg(b):
        a, b = b, a
        if _deg(a) % 2 and _deg(b) % 2:
            sign = -1
    ca, cb = _content(a), _content(b)
    t = ca ** _deg(b) * cb ** _deg(a)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    gg, hh = 1, 1
    while _deg(b) > 0:
        delta = _deg(a) - _deg(b)
        if _deg(a) % 2 and _deg(b) % 2:
            sign = -sign
        r = _pseudo_rem(a, b)
        if r == [0]:
            return 0
        a = b
        div = gg * hh**delta
        b = [x // div for x in r]
        gg = a[-1]
        if delta:
            hh = gg**delta // hh ** (delta - 1)
    da = _deg(a)
    hh = b[-1] ** da // hh ** (da - 1) if da else hh
    return sign * t * hh


def _polymod_monic(f: List[int], g: List[int]) -> List[int]:
    r = list(f)
    n = _deg(g)
    while len(r) - 1 >= n and any(r):
        c = r[-1]
        shift = len(r) - 1 - n
        for i, gi in enumerate(g):
            r[i + shift] -= c * gi
        r.pop()
    return _trim(r) if r else [0]


def power_charpoly(g: IntPoly, k: int) -> IntPoly:
    """Monic polynomial whose roots are the k-th powers of the roots of g.

    Evaluates the resultant Res_y(g(y), x0 - y^k) at deg g + 1 integer
    points x0 and interpolates.
    """
    if not g.is_monic():
        raise ValueError("power_charpoly needs a monic polynomial")
    if k == 1:
        return g
    n = g.degree
    gl = list(g.coeffs)
    yk = _polymod_monic([0] * k + [1], gl)
    xs = list(range(n + 1))
    vals = []
    for x0 in xs:
        h = [-c for c in yk]
        h[0] += x0
        vals.append(resultant(gl, _trim(h)))
    coeffs = _interpolate(xs, vals)
    if any(c.denominator != 1 for c in coeffs):
        raise AssertionError("interpolated characteristic polynomial is not integral")
    out = IntPoly(tuple(int(c) for c in coeffs))
    if not out.is_monic() or out.degree != n:
        raise AssertionError("characteristic polynomial is not monic of the right degree")
    return out


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> List[Fraction]:
    """Newton interpolation over Q, result ascending coefficients."""
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    poly[0] = coef[-1]
    deg = 0
    for i in range(n - 2, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        new = [Fraction(0)] * n
        for t in range(deg + 1):
            new[t + 1] += poly[t]
            new[t] -= xs[i] * poly[t]
        deg += 1
        new[0] += coef[i]
        poly = new
    return poly


# ---------------------------------------------------------------------------
# class polynomials


def _product_from_roots(roots: Sequence[BigComplex]) -> List[BigComplex]:
    ctx = roots[0].value.context
    poly = [exact(1, ctx)]
    for r in roots:
        nxt = [exact(0, ctx)] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * r
        poly = nxt
    return poly


def _round_certified(poly: Sequence[BigComplex]) -> Optional[List[int]]:
    out = []
    for c in poly:
        n = int(c.value.context.nint(c.value.real))
        dev = abs(c.value - n) + c.err
        if dev >= mpmath.mpf(1) / 4:
            return None
        out.append(n)
    return out


def _cache_path(cache_dir: Optional[os.PathLike], d: int, kind: str) -> Optional[Path]:
    if cache_dir is None:
        return None
    return Path(cache_dir) / f"classpoly_{kind}_{-d}.txt"


def _roots(d: int, kind: str, prec: int) -> List[BigComplex]:
    forms = reduced_forms(d)
    if kind == "weber":
        return [class_invariant(f, prec) for f in forms]
    out = []
    for f in forms:
        ctx = new_context(prec)
        tau = ctx.mpc(-f.b, ctx.sqrt(-d)) / (2 * f.a)
        out.append(j_invariant(tau, prec))
    return out


def class_polynomial(
    d: int,
    kind: str = "weber",
    prec: int = 512,
    cache_dir: Optional[os.PathLike] = None,
    max_prec: int = 1 << 15,
) -> IntPoly:
    """prod over Cl(d) of (x - f(a)) for kind 'weber', or (x - j(tau_a)) for 'hilbert'.

    Each coefficient is rounded only if its estimate plus error bound lies
    within 1/4 of an integer, and the result must repeat at a higher
    precision before it is accepted.
    """
    check_discriminant(d)
    if kind == "weber" and not is_admissible(d):
        raise InadmissibleDiscriminant(f"{d} must be 1 mod 8 and prime to 3")
    if kind not in ("weber", "hilbert"):
        raise ValueError(f"unknown kind {kind!r}")
    path = _cache_path(cache_dir, d, kind)
    if path is not None and path.exists():
        return IntPoly(tuple(int(x) for x in path.read_text().split()))
    if kind == "hilbert":
        # the largest root is about exp(pi sqrt|d|); budget bits for the product
        prec = max(prec, int(len(reduced_forms(d)) * math.pi * math.sqrt(-d) / math.log(2)) + 64)
    previous = None
    p = prec
    while p <= max_prec:
        coeffs = _round_certified(_product_from_roots(_roots(d, kind, p)))
        if coeffs is not None:
            if coeffs == previous:
                result = IntPoly(tuple(coeffs))
                if path is not None:
                    path.parent.mkdir(parents=True, exist_ok=True)
                    path.write_text(" ".join(str(c) for c in result.coeffs) + "\n")
                return result
            previous = coeffs
            p += 64
        else:
            previous = None
            p *= 2
    raise RoundingUncertified(f"class polynomial of {d} not certified below {max_prec} bits")


def hilbert_class_polynomial(d: int, prec: int = 512, cache_dir: Optional[os.PathLike] = None) -> IntPoly:
    return class_polynomial(d, "hilbert", prec, cache_dir)


# ---------------------------------------------------------------------------
# left hand sides


def numeric_norm_difference(d1: int, d2: int, k: int, prec: int = 512) -> mpmath.mpf:
    """prod |f(a1)^k - f(a2)^k| over both class groups, in floating point."""
    r1 = [class_invariant(f, prec).value for f in reduced_forms(d1)]
    r2 = [class_invariant(f, prec).value for f in reduced_forms(d2)]
    ctx = new_context(prec)
    out = ctx.mpf(1)
    for x in r1:
        for y in r2:
            out *= abs(ctx.mpc(x) ** k - ctx.mpc(y) ** k)
    return out


def yz_lhs(pair: DiscriminantPair, s: int, prec: int = 512, cache_dir=None, numeric_check: bool = True) -> int:
    """f_s(d1, d2) = |Res(h1, h2)| with h_j the charpoly of f(a_j)^(24/s)."""
    if 24 % s:
        raise ValueError("s must divide 24")
    if not pair.admissible:
        raise InadmissibleDiscriminant(f"pair {pair} is not admissible")
    k = 24 // s
    h1 = power_charpoly(class_polynomial(pair.d1, "weber", prec, cache_dir), k)
    h2 = power_charpoly(class_polynomial(pair.d2, "weber", prec, cache_dir), k)
    value = abs(resultant(h1, h2))
    if numeric_check:
        approx = numeric_norm_difference(pair.d1, pair.d2, k, prec)
        if abs(approx - value) > abs(value) * mpmath.mpf(10) ** -20:
            raise AssertionError(f"resultant {value} disagrees with numeric product {approx}")
    return value


def gz_lhs(pair: DiscriminantPair, prec: int = 512, cache_dir=None) -> int:
    """J(d1, d2) = |Res(H_d1, H_d2)| for discriminants below -4."""
    if pair.d1 >= -4 or pair.d2 >= -4:
        raise ValueError("J needs both discriminants below -4")
    H1 = class_polynomial(pair.d1, "hilbert", prec, cache_dir)
    H2 = class_polynomial(pair.d2, "hilbert", prec, cache_dir)
    return abs(resultant(H1, H2))
