"""Right-hand sides of the resultant factorizations.

This covers:
- the enumerations over a^2 + 16 m r^2 = D and a^2 + 4m = D, and the worked-example table;
- the local coefficients a(t, phi_d), with their delta tables and ideal counting;
- the regrouping identities, and the exact logarithmic big-CM identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .arith import (
    DiscriminantPair,
    divisors,
    epsilon_p,
    factor,
    frak_F,
    gamma_p,
    kappa3,
    kronecker,
    ord_p,
    prime_power_str,
)

DIVISORS_24 = (1, 2, 3, 4, 6, 8, 12, 24)
# column order of the worked-example table: F(m / (2r)^2) for these r
TABLE_R = (1, 2, 4, 8, 3, 6, 12, 24)


class NonSquare(AssertionError):
    pass


class NonSquareUnderHalfExponent(AssertionError):
    pass


# ---------------------------------------------------------------------------
# enumerations


def yz_terms(pair: DiscriminantPair, s: int) -> List[Tuple[int, int, int]]:
    """All (a, r, m) with a, m >= 1, r | s, a^2 + 16 m r^2 = D, m = 19(d1+d2-1) mod s/r."""
    D = pair.D
    target = 19 * (pair.d1 + pair.d2 - 1)
    out = []
    for a in range(1, math.isqrt(D) + 1):
        rest = D - a * a
        if rest <= 0 or rest % 16:
            continue
        for r in divisors(s):
            q, rem = divmod(rest, 16 * r * r)
            if rem or q < 1:
                continue
            if (q - target) % (s // r) == 0:
                out.append((a, r, q))
    return out


def yz_rhs(pair: DiscriminantPair, s: int) -> int:
    """prod F(m)^kappa3(s) over the solutions of the congruence-restricted enumeration."""
    if not pair.admissible:
        raise ValueError(f"pair {pair} is not admissible")
    prod = 1
    for _, _, m in yz_terms(pair, s):
        prod *= frak_F(pair, m)
    k = kappa3(pair, s)
    if k == 1:
        return prod
    root = math.isqrt(prod)
    if root * root != prod:
        raise NonSquareUnderHalfExponent(f"{prod} is not a perfect square")
    return root


def gz_rows(pair: DiscriminantPair) -> List[Tuple[int, int]]:
    """(a, m) with a >= 1 and a^2 + 4m = D, m >= 1."""
    D = pair.D
    out = []
    for a in range(1, math.isqrt(D) + 1):
        rest = D - a * a
        if rest > 0 and rest % 4 == 0:
            out.append((a, rest // 4))
    return out


def gz_rhs(pair: DiscriminantPair) -> int:
    """J(d1, d2), the square root of prod_{a in Z, a^2 + 4m = D} F(m)."""
    sq = 1
    for a, m in gz_rows(pair):
        sq *= frak_F(pair, m) ** 2  # a and -a both occur; a = 0 would need D square
    if pair.D % 4 == 0 and math.isqrt(pair.D) ** 2 == pair.D:
        raise NonSquare("D is a square")
    root = math.isqrt(sq)
    if root * root != sq:
        raise NonSquare("product is not a square")
    return root


@dataclass(frozen=True)
class TableRow:
    a: int
    m: int
    values: Tuple[int, ...]  # F(m), then F(m/(2r)^2) for r in TABLE_R


def worked_table(pair: DiscriminantPair) -> List[TableRow]:
    """Rows a, m = (D - a^2)/4, F(m) and F(m/(2r)^2); 1 when not integral."""
    rows = []
    for a, m in gz_rows(pair):
        vals = [frak_F(pair, m)]
        for r in TABLE_R:
            q, rem = divmod(m, 4 * r * r)
            vals.append(frak_F(pair, q) if rem == 0 else 1)
        rows.append(TableRow(a, m, tuple(vals)))
    return rows


def table_headers() -> List[str]:
    return ["a", "m", "m mod 96", "F(m)"] + [f"F(m/{2 * r}^2)" for r in TABLE_R]


def format_row_latex(row: TableRow) -> str:
    """One table row in LaTeX layout."""
    cells = [f"{row.a} ", f"$ {prime_power_str(row.m, braces=True)} $", f" {row.m % 96} "]
    cells += [f"$ {prime_power_str(v)} $" for v in row.values]
    return "&".join(cells) + " \\\\ \\hline"


def table_check_products(pair: DiscriminantPair, s: int) -> int:
    """f_s read off the table: F(m/4r^2) over r | s with m/r^2 = 4*19(d1+d2-1) mod 4s/r."""
    prod = 1
    target = 4 * 19 * (pair.d1 + pair.d2 - 1)
    for a, m in gz_rows(pair):
        for r in divisors(s):
            if m % (4 * r * r) == 0 and (m // (r * r) - target) % (4 * s // r) == 0:
                prod *= frak_F(pair, m // (4 * r * r))
    if kappa3(pair, s) != 1:
        root = math.isqrt(prod)
        if root * root != prod:
            raise NonSquareUnderHalfExponent(str(prod))
        return root
    return prod


# ---------------------------------------------------------------------------
# exact logarithms


@dataclass
class LogLinear:
    """Formal sum  sum_p c_p log p  with rational coefficients."""

    coeffs: Dict[int, Fraction] = field(default_factory=dict)

    @classmethod
    def log_of(cls, n: int, scale=1) -> "LogLinear":
        out = cls()
        if n != 1:
            for p, e in factor(n).factors:
                out.coeffs[p] = Fraction(e) * scale
        return out

    @classmethod
    def log_prime(cls, p: int, c=1) -> "LogLinear":
        return cls({p: Fraction(c)}) if c else cls()

    def _clean(self) -> "LogLinear":
        self.coeffs = {p: c for p, c in self.coeffs.items() if c}
        return self

    def __add__(self, other: "LogLinear") -> "LogLinear":
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, Fraction(0)) + c
        return LogLinear(out)._clean()

    def __neg__(self) -> "LogLinear":
        return LogLinear({p: -c for p, c in self.coeffs.items()})

    def __sub__(self, other: "LogLinear") -> "LogLinear":
        return self + (-other)

    def scale(self, k) -> "LogLinear":
        return LogLinear({p: c * k for p, c in self.coeffs.items()})._clean()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LogLinear):
            return NotImplemented
        return (self - other).coeffs == {}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for p in sorted(self.coeffs):
            c = self.coeffs[p]
            parts.append(f"{c} * log({p})")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# trace elements and ideals of F = Q(sqrt D)


@dataclass(frozen=True)
class TraceElement:
    """t = (a + sqrt D) / (2 d sqrt D), so tr(t) = 1/d."""

    pair: DiscriminantPair
    d: int
    a: int

    def __post_init__(self) -> None:
        if 24 % self.d:
            raise ValueError("d must divide 24")

    @property
    def D(self) -> int:
        return self.pair.D

    @property
    def totally_positive(self) -> bool:
        return self.a * self.a < self.D

    @property
    def norm(self) -> Fraction:
        return Fraction(self.D - self.a * self.a, 4 * self.d * self.d * self.D)

    @property
    def trace(self) -> Fraction:
        return Fraction(1, self.d)

    def scaled_norm(self, k: int) -> Fraction:
        """Nm(k t)."""
        return self.norm * k * k


def v_p(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    return ord_p(abs(x.numerator), p) - ord_p(x.denominator, p)


def unit_residue(x: Fraction, p: int, k: int) -> int:
    """x mod p^k for a p-adic unit x."""
    x = Fraction(x)
    mod = p**k
    return x.numerator * pow(x.denominator, -1, mod) % mod


def padic_sqrt(D: int, p: int, k: int) -> int:
    """x with x^2 = D mod p^k, for D a nonzero square unit mod p (mod 8 for p = 2)."""
    mod = p**k
    if p == 2:
        if D % 8 != 1:
            raise ValueError("D is not a 2-adic square")
        x = 1
        for j in range(3, k):
            # lift from mod 2^j to mod 2^(j+1), keeping x^2 = D mod 2^(j+1)
            if (x * x - D) % 2 ** (j + 1):
                x += 2 ** (j - 1)
        return x % mod
    x = next(r for r in range(1, p) if (r * r - D) % p == 0)
    for j in range(1, k):
        m = p ** (j + 1)
        x = (x - (x * x - D) * pow(2 * x, -1, m)) % m
    return x % mod


@dataclass(frozen=True, order=True)
class PrimeF:
    """A prime of F above q: kind is 'split', 'inert' or 'ramified'; sign picks sqrt D -> +-x."""

    q: int
    kind: str
    sign: int = 0

    @property
    def norm(self) -> int:
        return self.q * self.q if self.kind == "inert" else self.q


def primes_above(D: int, q: int) -> List[PrimeF]:
    k = kronecker(D, q)
    if k == 1:
        return [PrimeF(q, "split", 1), PrimeF(q, "split", -1)]
    if k == -1:
        return [PrimeF(q, "inert")]
    return [PrimeF(q, "ramified")]


def ideal_valuations(t: TraceElement, scale: int = 1) -> Dict[PrimeF, int]:
    """Valuations of the fractional ideal scale * t sqrt(D) O_F = scale (a + sqrt D) / (2d).

    Only primes dividing 6, the norm or scale are listed; all others have
    valuation zero.
    """
    D, a = t.D, t.a
    if a * a == D:
        raise ValueError("t sqrt D vanishes")
    N = Fraction(a * a - D, 4)  # norm of (a + sqrt D)/2
    primes = {2, 3} | set(factor(abs(N.numerator)).primes()) | set(factor(scale).primes())
    out: Dict[PrimeF, int] = {}
    for q in sorted(primes):
        shift = ord_p(scale, q) - ord_p(t.d, q)
        for P in primes_above(D, q):
            if P.kind == "split":
                k = v_p(Fraction(a * a - D), q) + 2
                x = padic_sqrt(D % q**k, q, k) if q != 2 else padic_sqrt(D % 2**k if D % 2**k else D, 2, k)
                val = ord_p((a + P.sign * x) % q**k, q) if (a + P.sign * x) % q**k else k
                out[P] = val - ord_p(2, q) + shift
            elif P.kind == "inert":
                vN = v_p(N, q)
                if vN % 2:
                    raise AssertionError(f"odd valuation {vN} at an inert prime {q}")
                out[P] = vN // 2 + shift
            else:
                out[P] = v_p(N, q) + 2 * shift
    bookkeeping = Fraction(a * a - D, 4 * t.d * t.d) * scale * scale
    for q in sorted(primes):
        total = sum(v * (2 if P.kind == "inert" else 1) for P, v in out.items() if P.q == q)
        if total != v_p(bookkeeping, q):
            raise AssertionError(f"valuation bookkeeping fails at {q}")
    return out


def splits_in_E(pair: DiscriminantPair, P: PrimeF) -> Optional[bool]:
    """Whether the prime P of F splits in E = Q(sqrt d1, sqrt d2); None if it ramifies."""
    q = P.q
    if P.kind == "inert":
        return True
    if P.kind == "split":
        return kronecker(pair.d1, q) == 1
    if pair.d1 % q == 0:
        return kronecker(pair.d2, q) == 1
    return kronecker(pair.d1, q) == 1


def rho(pair: DiscriminantPair, vals: Dict[PrimeF, int], drop: Iterable[int] = (), keep_only: Optional[Iterable[int]] = None) -> int:
    """Number of integral ideals of E with relative norm the given ideal of F.

    Primes above the rational primes in ``drop`` are ignored; with
    ``keep_only`` only primes above those rational primes are used.
    """
    drop = set(drop)
    keep = set(keep_only) if keep_only is not None else None
    out = 1
    for P, k in vals.items():
        if P.q in drop or (keep is not None and P.q not in keep):
            continue
        if k < 0:
            return 0
        sp = splits_in_E(pair, P)
        if sp is None:
            continue
        if sp:
            out *= k + 1
        elif k % 2:
            return 0
    return out


def shift_ideal(vals: Dict[PrimeF, int], P: PrimeF, k: int = -1) -> Dict[PrimeF, int]:
    out = dict(vals)
    out[P] = out.get(P, 0) + k
    return out


# ---------------------------------------------------------------------------
# the local factors at 2 and 3


def delta2(d2: int, t: TraceElement) -> int:
    """delta_2(d2, t) by case analysis on the 2-adic data; 0 when no case applies."""
    v = v_p(t.norm, 2)
    if d2 == 1:
        return 2 * (v - 1) if v >= 2 else 0
    if d2 == 8 and v == -4:
        r = unit_residue(t.scaled_norm(4), 2, 3)
        if r in (3, 7):
            return 1 if r == 3 else -1
    if d2 in (4, 8) and v == -2:
        r = unit_residue(t.scaled_norm(2), 2, 2)
        return -1 if r == 1 else 1
    if d2 in (2, 4, 8):
        if v == 0:
            return 1
        if v >= 1:
            return v - 3
        return 0
    raise ValueError("d2 must be 1, 2, 4 or 8")


def delta3(d3: int, t: TraceElement) -> int:
    """delta_3(3, t) by case analysis; delta_3(1, t) is rho of the 3-part of t sqrt(D)."""
    pair = t.pair
    if d3 == 1:
        return rho(pair, ideal_valuations(t), keep_only=(3,))
    if d3 != 3:
        raise ValueError("d3 must be 1 or 3")
    n3 = t.scaled_norm(3)
    v = v_p(n3, 3)
    k1, k2 = kronecker(pair.d1, 3), kronecker(pair.d2, 3)
    if v == 0:
        if unit_residue(n3, 3, 1) == 1:
            return 2 - Fraction(3, 4) * (1 - k1) * (1 - k2)
        return -1
    if v >= 1:
        vn = v_p(t.norm, 3)
        return (1 + k1) * vn + 1 - Fraction(k1) ** (vn - 1)
    return 0


def delta3prime(d3: int, t: TraceElement) -> int:
    v = v_p(t.norm, 3)
    if d3 == 1:
        return v + 1
    if d3 == 3:
        return 2 * v + 3
    raise ValueError("d3 must be 1 or 3")


# ---------------------------------------------------------------------------
# Fourier coefficients and the big CM identity


def diff_set(t: TraceElement) -> List[PrimeF]:
    """Primes of F, inert in E, where the ideal t sqrt(D) d has odd valuation."""
    vals = ideal_valuations(t, scale=t.d)
    return sorted(P for P, k in vals.items() if splits_in_E(t.pair, P) is False and k % 2)


def a_coefficient(t: TraceElement) -> LogLinear:
    """a(t, phi_d) as an exact combination of logarithms."""
    pair, d = t.pair, t.d
    if not t.totally_positive:
        raise ValueError("t must be totally positive")
    d2 = d & -d
    d3 = d // d2
    sign = pair.eps ** (24 // d)
    dl2 = delta2(d2, t)
    if dl2 == 0:
        return LogLinear()
    vals = ideal_valuations(t)
    scaled = ideal_valuations(t, scale=d)
    total = LogLinear()
    dl3 = None
    for P, k in sorted(vals.items()):
        if splits_in_E(pair, P) is not False:
            continue
        if P.q == 3:
            # the ideal is taken with the factor d, i.e. d sqrt(D) t p^-1
            r = rho(pair, shift_ideal(scaled, P), drop=(2,))
            if r:
                total = total + LogLinear.log_prime(3, r * delta3prime(d3, t))
            continue
        if k < 1:
            continue
        r = rho(pair, shift_ideal(vals, P), drop=(2, 3))
        if not r:
            continue
        if dl3 is None:
            dl3 = delta3(d3, t)
        coef = (1 + k) * r * dl3
        for p, e in factor(P.norm).factors:
            total = total + LogLinear.log_prime(p, coef * e)
    return total.scale(-d2 * sign * dl2)


def trace_elements(pair: DiscriminantPair, d: int) -> Iterator[TraceElement]:
    """All t = (a + sqrt D)/(2 d sqrt D) with a an integer and t totally positive."""
    r = math.isqrt(pair.D)
    if r * r == pair.D:
        r -= 1
    for a in range(-r, r + 1):
        yield TraceElement(pair, d, a)


def bigcm_sides(pair: DiscriminantPair, s: int, f_s: Optional[int] = None) -> Tuple[LogLinear, LogLinear]:
    """(8 s log f_s, -sum_{d|s} eps^(24/d) sum_t a(t, phi_d))."""
    if f_s is None:
        from .classpoly import yz_lhs

        f_s = yz_lhs(pair, s)
    left = LogLinear.log_of(f_s, 8 * s)
    right = LogLinear()
    for d in divisors(s):
        sign = pair.eps ** (24 // d)
        for t in trace_elements(pair, d):
            right = right - a_coefficient(t).scale(sign)
    return left, right


# ---------------------------------------------------------------------------
# regrouping identities


def count2_sides(pair: DiscriminantPair, s2: int, a: int) -> Tuple[int, int]:
    """Both sides of the 2-adic regrouping identity for t~ = (a + sqrt D)/(4 sqrt D)."""
    left = sum(d2 * delta2(d2, TraceElement(pair, d2, a)) for d2 in divisors(s2))
    right = 0
    for r in divisors(s2):
        m = Fraction(pair.D - a * a, 16 * r * r)
        if m.denominator == 1 and m > 0 and (m - 3) % (s2 // r) == 0:
            right += gamma_p(pair, int(m), 2)
    return left, 2 * s2 * right


def _gamma3(pair: DiscriminantPair, m: int) -> int:
    """gamma_3(m), extended by v_3(m)/2 + 1 when 3 is inert in F (then 3 O_F splits in E)."""
    if kronecker(pair.D, 3) == -1:
        v = ord_p(m, 3)
        if v % 2:
            raise AssertionError("odd 3-adic valuation of a norm with 3 inert in F")
        return v // 2 + 1
    return gamma_p(pair, m, 3)


def count3_sides(pair: DiscriminantPair, s3: int, a: int, s: Optional[int] = None) -> Tuple[Fraction, Fraction]:
    """Both sides of the 3-adic regrouping identity for t~ = (a + sqrt D)/(4 sqrt D).

    rho_3 is taken at p^-1 t~ (no extra factor 1/3), and each delta is
    evaluated at the trace element with d = d3.
    """
    s = s if s is not None else s3
    k1, k2 = kronecker(pair.d1, 3), kronecker(pair.d2, 3)
    left = Fraction(0)
    # only 3-integrality of m matters here; its 2-part is handled by the 2-adic identity
    for r in divisors(s3):
        m = Fraction(pair.D - a * a, 16 * r * r)
        if m.denominator % 3 == 0 or m <= 0:
            continue
        mod = s3 // r
        if (m.numerator * pow(m.denominator, -1, mod) - (pair.d1 + pair.d2 - 1)) % mod == 0:
            left += _gamma3(pair, m.numerator)
    left *= kappa3(pair, s) * s3
    tt = TraceElement(pair, 2, a)
    if k1 == k2 == -1 and v_p(tt.norm, 3) % 2:
        vals = ideal_valuations(tt)
        right = Fraction(0)
        for P in primes_above(pair.D, 3):
            r3 = rho(pair, shift_ideal(vals, P), keep_only=(3,))
            right += sum(r3 * delta3prime(d3, TraceElement(pair, d3, a)) for d3 in divisors(s3))
        return left, right / 2
    right = sum(Fraction(delta3(d3, TraceElement(pair, d3, a))) for d3 in divisors(s3))
    return left, right


def valid_a(pair: DiscriminantPair) -> List[int]:
    """Odd integers a with a^2 < D, both signs."""
    return [t.a for t in trace_elements(pair, 1) if t.a % 2]


@dataclass
class CountReport:
    pair: DiscriminantPair
    s: int
    checked: int
    failures: List[Tuple[str, int, object, object]]

    @property
    def ok(self) -> bool:
        return not self.failures


def count_identities(pair: DiscriminantPair, s: int, a_values: Optional[Sequence[int]] = None) -> CountReport:
    """Check both regrouping identities for every a in a_values (default: valid_a)."""
    s2 = s & -s
    s3 = s // s2
    a_values = valid_a(pair) if a_values is None else a_values
    failures = []
    for a in a_values:
        l2, r2 = count2_sides(pair, s2, a)
        if l2 != r2:
            failures.append(("count2", a, l2, r2))
        l3, r3 = count3_sides(pair, s3, a, s)
        if l3 != r3:
            failures.append(("count3", a, l3, r3))
    return CountReport(pair, s, len(a_values), failures)


def bigcm_check(pair: DiscriminantPair, s: int, f_s: Optional[int] = None):
    """8 s log f_s = -sum_{d|s} eps^(24/d) sum_t a(t, phi_d), exactly."""
    from .weilrep import Check

    left, right = bigcm_sides(pair, s, f_s)
    return Check(f"bigcm {pair.d1},{pair.d2} s={s}", left == right,
                 {"lhs": str(left), "rhs": str(right)})
