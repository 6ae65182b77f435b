"""Reduced binary quadratic forms of negative discriminant and their CM points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import mpmath

from .modeval import BigComplex, new_context


class InvalidDiscriminant(ValueError):
    pass


class NotOneMod8(ValueError):
    pass


@dataclass(frozen=True)
class FormClass:
    """The form a x^2 + b x y + c y^2, i.e. the ideal [a, (-b + sqrt d)/2]."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise InvalidDiscriminant("leading coefficient must be positive")
        if self.disc >= 0:
            raise InvalidDiscriminant("form must be positive definite")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def d(self) -> int:
        return self.disc

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def translate(self, k: int) -> "FormClass":
        """Equivalent form with tau replaced by tau - k (same ideal class)."""
        a, b, c = self.a, self.b, self.c
        return FormClass(a, b + 2 * a * k, a * k * k + b * k + c)

    def flip(self) -> "FormClass":
        """Equivalent form (c, -b, a), tau replaced by -1/tau."""
        return FormClass(self.c, -self.b, self.a)

    def reduce(self) -> "FormClass":
        a, b, c = self.a, self.b, self.c
        while True:
            if c < a:
                a, b, c = c, -b, a
            k = (a - b) // (2 * a)
            if k:
                a, b, c = a, b + 2 * a * k, a * k * k + b * k + c
                continue
            if c < a:
                continue
            if (b == -a) or (a == c and b < 0):
                b = -b
            return FormClass(a, b, c)


@dataclass(frozen=True)
class CmPoint:
    tau: BigComplex
    source: FormClass


def check_discriminant(d: int) -> None:
    if d >= 0 or d % 4 not in (0, 1):
        raise InvalidDiscriminant(f"{d} is not a negative discriminant")


def reduced_forms(d: int) -> List[FormClass]:
    """One primitive reduced form per class of Cl(d), ordered by (a, b)."""
    check_discriminant(d)
    out = []
    amax = math.isqrt(-d // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            f = FormClass(a, b, c)
            if d % 8 == 1:
                # a and c cannot both be odd, so one case of the invariant applies
                assert a % 2 == 0 or c % 2 == 0
            out.append(f)
    return out


def class_number(d: int) -> int:
    return len(reduced_forms(d))


def epsilon_d(d: int) -> int:
    """(-1)^((d - 1)/8) for d = 1 mod 8."""
    if d % 8 != 1:
        raise NotOneMod8(f"{d} is not 1 mod 8")
    return -1 if ((d - 1) // 8) % 2 else 1


def cm_point(f: FormClass, prec: int) -> CmPoint:
    """tau = (-b + i sqrt|d|)/(2a) with error below 2^-prec."""
    ctx = new_context(prec)
    tau = ctx.mpc(-f.b, ctx.sqrt(-f.disc)) / (2 * f.a)
    return CmPoint(BigComplex(tau, mpmath.mpf(2) ** (-prec - 8)), f)
