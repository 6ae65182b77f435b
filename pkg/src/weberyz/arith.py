"""Exact multiplicative number theory.

Factorization, Moebius/Euler/Kronecker, and the arithmetic functions that
appear in the resultant factorization formulas: the sign character
``epsilon``, the prime power ``frak_F`` (two independent routes), the
exponent ``gamma``, the constant ``kappa3`` and the Ramanujan sums
``a_coeff``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Tuple

# Deterministic Miller-Rabin bases, valid for n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


class ArithError(ValueError):
    """Invalid input to an arithmetic function."""


class EpsilonUndefined(ArithError):
    """Raised when (d1 d2 / p) = -1, so epsilon(p) has no value."""


class NotApplicable(ArithError):
    """Raised when gamma(m) is requested but epsilon(m) != -1."""


def is_prime(n: int) -> bool:
    """Miller-Rabin primality test, deterministic below 3.3e24.

    Above that bound the same witness set plus the next primes up to 97 is
    used, which has no known counterexample but is not a proof.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if n < _MR_LIMIT else _MR_BASES + (43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    for c in range(1, 200):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithError(f"failed to split {n}")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of a positive integer."""

    value: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e <= 0:
                raise ArithError("factors must be strictly increasing with positive exponents")
            prod *= p**e
            last = p
        if prod != self.value:
            raise ArithError("factor product does not match value")

    def ord(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]


@lru_cache(maxsize=65536)
def factor(n: int) -> Factorization:
    """Factor a positive integer; primes are certified by ``is_prime``."""
    if n < 1:
        raise ArithError(f"cannot factor {n}")
    out: Dict[int, int] = {}
    m = n
    for p in range(2, 1000):
        if p * p > m:
            break
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        x = stack.pop()
        if is_prime(x):
            out[x] = out.get(x, 0) + 1
            continue
        r = math.isqrt(x)
        if r * r == x:
            stack += [r, r]
            continue
        f = _pollard_brent(x)
        stack += [f, x // f]
    return Factorization(n, tuple(sorted(out.items())))


def ord_p(n: int, p: int) -> int:
    """Exponent of the prime p in the nonzero integer n."""
    if n == 0:
        raise ArithError("ord_p(0) is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def divisors(n: int) -> List[int]:
    """Sorted list of positive divisors of n."""
    divs = [1]
    for p, e in factor(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def moebius(n: int) -> int:
    f = factor(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factor(n).factors:
        out = out // p * (p - 1)
    return out


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ArithError("jacobi needs odd positive modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n), with (d/-1) = sign(d) and (d/2) from d mod 8."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if d < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(d, n)


def is_fundamental(d: int) -> bool:
    """True iff d is a fundamental discriminant (d != 1)."""
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return all(e == 1 for _, e in factor(abs(d)).factors)
    if d % 4 == 0:
        m = d // 4
        if m % 4 in (2, 3):
            return all(e == 1 for _, e in factor(abs(m)).factors)
    return False


def is_admissible(d: int) -> bool:
    """The Weber class invariant condition d = 1 mod 8 and 3 does not divide d."""
    return d < 0 and d % 8 == 1 and d % 3 != 0


@dataclass(frozen=True)
class DiscriminantPair:
    """A pair of coprime negative fundamental discriminants."""

    d1: int
    d2: int

    def __post_init__(self) -> None:
        for d in (self.d1, self.d2):
            if d >= 0 or not is_fundamental(d):
                raise ArithError(f"{d} is not a negative fundamental discriminant")
        if math.gcd(self.d1, self.d2) != 1:
            raise ArithError(f"{self.d1} and {self.d2} are not coprime")

    @property
    def D(self) -> int:
        return self.d1 * self.d2

    @property
    def admissible(self) -> bool:
        return is_admissible(self.d1) and is_admissible(self.d2)

    @property
    def eps(self) -> int:
        """Product of the signs (-1)^((d_j - 1)/8); needs an admissible pair."""
        return (-1) ** (((self.d1 - 1) // 8 + (self.d2 - 1) // 8) % 2)


def epsilon_p(pair: DiscriminantPair, p: int) -> int:
    """The genus character at the prime p: (d1/p) if p does not divide d1, else (d2/p)."""
    if kronecker(pair.D, p) == -1:
        raise EpsilonUndefined(f"({pair.D}/{p}) = -1")
    if pair.d1 % p:
        return kronecker(pair.d1, p)
    return kronecker(pair.d2, p)


def epsilon(pair: DiscriminantPair, m: int) -> Optional[int]:
    """Multiplicative extension of epsilon_p to m >= 1; None when undefined."""
    out = 1
    for p, e in factor(m).factors:
        try:
            out *= epsilon_p(pair, p) ** e
        except EpsilonUndefined:
            return None
    return out


def _prime_power(exps: Dict[int, int]) -> Tuple[int, int]:
    nonzero = [(p, e) for p, e in exps.items() if e]
    if not nonzero:
        return (1, 0)
    if len(nonzero) != 1 or nonzero[0][1] < 0:
        raise AssertionError(f"not a prime power: {nonzero}")
    return nonzero[0]


def frak_F_divisor(pair: DiscriminantPair, m: int) -> int:
    """F(m) from the divisor product prod_{n n' = m} n^eps(n')."""
    if epsilon(pair, m) != -1:
        return 1
    exps: Dict[int, int] = {}
    for n in divisors(m):
        sign = epsilon(pair, m // n)
        for p, e in factor(n).factors:
            exps[p] = exps.get(p, 0) + sign * e
    ell, g = _prime_power(exps)
    return ell**g


def gamma_exponent(pair: DiscriminantPair, m: int) -> Optional[Tuple[int, int]]:
    """Return (ell, gamma(m)) with F(m) = ell^gamma(m), or None.

    None is returned when epsilon(m) is 1 or undefined, and also when more
    than one prime with epsilon(p) = -1 divides m to odd order (then F(m) = 1).
    """
    if epsilon(pair, m) != -1:
        return None
    f = factor(m)
    odd_inert = [p for p, e in f.factors if e % 2 and epsilon_p(pair, p) == -1]
    if len(odd_inert) != 1:
        return None
    ell = odd_inert[0]
    g = 1
    for p, e in f.factors:
        g *= gamma_p(pair, m, p)
    return ell, g


def gamma_p(pair: DiscriminantPair, m: int, p: int) -> int:
    """Local factor gamma_p(m) of the exponent gamma(m)."""
    e = ord_p(m, p)
    if epsilon_p(pair, p) == 1:
        return e + 1
    if e % 2 == 0:
        return 1
    return (e + 1) // 2


def frak_F_gamma(pair: DiscriminantPair, m: int) -> int:
    """F(m) from the closed form ell^gamma(m)."""
    ge = gamma_exponent(pair, m)
    if ge is None:
        return 1
    return ge[0] ** ge[1]


def frak_F(pair: DiscriminantPair, m: int) -> int:
    """F(m), computed by both routes; a disagreement is a hard failure."""
    a = frak_F_divisor(pair, m)
    b = frak_F_gamma(pair, m)
    if a != b:
        raise AssertionError(f"F({m}) mismatch: divisor route {a}, gamma route {b}")
    return a


def kappa3(pair: DiscriminantPair, s: int) -> Fraction:
    if s % 3 == 0 and kronecker(pair.d1, 3) == -1 and kronecker(pair.d2, 3) == -1:
        return Fraction(1, 2)
    return Fraction(1)


def a_coeff(d: int, j: int) -> int:
    """Ramanujan sum c_d(j) = mu(d/(d,j)) phi(d) / phi(d/(d,j))."""
    g = math.gcd(d, j % d) if d > 1 else 1
    q = d // g
    return moebius(q) * euler_phi(d) // euler_phi(q)


def a_coeff_sum(d: int, j: int) -> int:
    """Ramanujan sum by direct summation of d-th roots of unity (rounded)."""
    total = sum(cmath.exp(2j * math.pi * s * j / d) for s in range(d) if math.gcd(s, d) == 1)
    val = round(total.real)
    if abs(total - val) > 1e-9:
        raise AssertionError("Ramanujan sum is not an integer")
    return val


def prime_power_str(n: int, braces: bool = False) -> str:
    """Render a positive integer in factored form, e.g. '2^{3} \\cdot 3'."""
    if n == 1:
        return "1"
    parts = []
    for p, e in factor(n).factors:
        if e == 1:
            parts.append(str(p))
        elif braces or e >= 10:
            parts.append(f"{p}^{{{e}}}")
        else:
            parts.append(f"{p}^{e}")
    return " \\cdot ".join(parts)


def iter_coprime_units(n: int) -> Iterator[int]:
    return (r for r in range(n) if math.gcd(r, n) == 1)
