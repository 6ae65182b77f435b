import math

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weberyz.arith import DiscriminantPair
from weberyz.classpoly import (IntPoly, class_polynomial, gz_lhs, hilbert_class_polynomial, numeric_norm_difference,
                               power_charpoly, resultant, yz_lhs)
from weberyz.modeval import InadmissibleDiscriminant
from weberyz.quadratic import InvalidDiscriminant, reduced_forms

X, Y = sympy.symbols("x y")


def _sympy_poly(p: IntPoly):
    return sympy.Poly(list(reversed(p.coeffs)), X)


def _sylvester_resultant(g: IntPoly, h: IntPoly) -> int:
    # signed oracle: determinant of the Sylvester matrix
    a, b = list(reversed(g.coeffs)), list(reversed(h.coeffs))
    m, n = len(a) - 1, len(b) - 1
    rows = [[0] * i + a + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + b + [0] * (m - 1 - i) for i in range(m)]
    return int(sympy.Matrix(rows).det())


def _hilbert_oracle(d: int):
    # product of (x - 1728 kleinj(tau)) over reduced forms, rounded; mpmath only
    h = len(reduced_forms(d))
    dps = int(h * math.pi * math.sqrt(-d) / math.log(10)) + 40
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpc(1)]
        for f in reduced_forms(d):
            tau = (-f.b + mpmath.sqrt(d)) / (2 * f.a)
            j = 1728 * mpmath.kleinj(tau)
            coeffs = [a - j * b for a, b in zip(coeffs + [0], [0] + coeffs)]
        return [int(mpmath.nint(c.real)) for c in reversed(coeffs)]


# -- IntPoly -----------------------------------------------------------------


def test_intpoly_basics():
    p = IntPoly.from_desc([1, 0, 1, -1])
    assert p.coeffs == (-1, 1, 0, 1)
    assert p.degree == 3 and p.is_monic() and p(2) == 9
    assert str(p) == "x^3 + x - 1"
    assert IntPoly((0, 0)).degree == -1
    assert str(IntPoly((3, 0, -2))) == "-2*x^2 + 3"


# -- resultants --------------------------------------------------------------

int_polys = st.lists(st.integers(min_value=-20, max_value=20), min_size=2, max_size=6).filter(lambda c: c[-1] != 0)


@given(int_polys, int_polys)
@settings(max_examples=120, deadline=None)
def test_resultant_matches_sylvester(a, b):
    g, h = IntPoly(tuple(a)), IntPoly(tuple(b))
    assert resultant(g, h) == _sylvester_resultant(g, h)


def test_resultant_constant_and_common_root():
    assert resultant(IntPoly((-1, 1)), IntPoly((-1, 0, 1))) == 0
    assert resultant(IntPoly((3,)), IntPoly((1, 1, 1))) == 9


@given(st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=4), st.integers(min_value=1, max_value=6))
@settings(max_examples=60, deadline=None)
def test_power_charpoly_matches_sympy(low, k):
    g = IntPoly(tuple(low) + (1,))
    got = power_charpoly(g, k)
    res = sympy.Poly(sympy.resultant(_sympy_poly(g).as_expr().subs(X, Y), X - Y**k, Y), X)
    want = [int(c) for c in reversed(res.all_coeffs())]
    lc = want[-1]
    assert got.coeffs == tuple(c // lc for c in want)


# -- class polynomials -------------------------------------------------------


@pytest.mark.parametrize("d,desc", [
    (-31, [1, 0, 1, -1]),
    (-127, [1, -1, -2, 1, 3, -1]),
    (-55, [1, 1, 0, -2, -1]),
])
def test_weber_class_polynomials_reference(d, desc, cache_dir):
    assert class_polynomial(d, "weber", 512, cache_dir) == IntPoly.from_desc(desc)


@pytest.mark.parametrize("d", [-23, -31, -55, -127, -199])
def test_weber_roots_map_to_hilbert_roots(d):
    # each root x gives j = (x^24 - 16)^3 / x^24, a root of H_d
    w = class_polynomial(d)
    H = hilbert_class_polynomial(d)
    with mpmath.workdps(80):
        xs = mpmath.polyroots(list(reversed(w.coeffs)), maxsteps=400, extraprec=400)
        for x in xs:
            j = (x ** 24 - 16) ** 3 / x ** 24
            assert abs(H(j)) < abs(j) ** H.degree * mpmath.mpf(10) ** -30


@pytest.mark.parametrize("d", [-3, -4, -7, -23, -31, -55, -84])
def test_hilbert_against_kleinj_oracle(d):
    assert list(hilbert_class_polynomial(d).coeffs) == _hilbert_oracle(d)


def test_hilbert_small_values():
    assert hilbert_class_polynomial(-3).coeffs == (0, 1)
    assert hilbert_class_polynomial(-4).coeffs == (-1728, 1)
    assert hilbert_class_polynomial(-7).coeffs == (3375, 1)


@pytest.mark.parametrize("d,exc", [(-10, InvalidDiscriminant), (-15, InadmissibleDiscriminant),
                                   (-39, InadmissibleDiscriminant), (-20, InadmissibleDiscriminant)])
def test_weber_kind_rejects(d, exc):
    with pytest.raises(exc):
        class_polynomial(d, "weber")


def test_unknown_kind():
    with pytest.raises(ValueError):
        class_polynomial(-31, "dedekind")


def test_cache_roundtrip(tmp_path):
    p = class_polynomial(-31, "weber", 512, tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    files[0].write_text("5 0 1\n")  # a cached entry is trusted as written
    assert class_polynomial(-31, "weber", 512, tmp_path) == IntPoly((5, 0, 1))
    assert class_polynomial(-31, "weber", 512, None) == p


# -- left hand sides ---------------------------------------------------------


def test_yz_lhs_f24(main_pair, cache_dir):
    assert yz_lhs(main_pair, 24, 512, cache_dir) == 81


def test_yz_lhs_numeric_route_agrees(main_pair):
    value = yz_lhs(main_pair, 1, 512, numeric_check=False)
    approx = numeric_norm_difference(-31, -127, 24, 512)
    assert abs(approx - value) < value * mpmath.mpf(10) ** -30


def test_yz_lhs_rejects():
    with pytest.raises(ValueError):
        yz_lhs(DiscriminantPair(-31, -127), 5)
    with pytest.raises(InadmissibleDiscriminant):
        yz_lhs(DiscriminantPair(-31, -15), 1)


def test_gz_lhs_small_pair():
    # J needs both discriminants below -4; (-7, -8) gives |j(-7) - j(-8)| = |-3375 - 8000|
    with pytest.raises(ValueError):
        gz_lhs(DiscriminantPair(-3, -7))
    assert gz_lhs(DiscriminantPair(-7, -8)) == 3375 + 8000
