from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weberyz import qseries as qs
from weberyz.modeval import new_context, weber_f2

Q = sympy.symbols("q")
DIVISORS_24 = (1, 2, 3, 4, 6, 8, 12, 24)


def _sympy_product(e, order):
    # naive truncated product; each factor expanded with sympy's binomial coefficients
    acc = [1] + [0] * order
    for n in range(1, order + 1):
        factor = [0] * (order + 1)
        for k in range(order // n + 1):
            factor[n * k] = int(sympy.binomial(e, k))
        acc = [sum(acc[i] * factor[t - i] for i in range(t + 1)) for t in range(order + 1)]
    return acc


@pytest.mark.parametrize("e", [-24, -12, -3, -1, 1, 2, 8, 24])
def test_product_series_matches_sympy(e):
    assert qs.product_series(e, 12) == _sympy_product(e, 12)


@pytest.mark.parametrize("e,k", [(5, 2), (-3, 4), (0, 0), (2, 3)])
def test_generalized_binomial(e, k):
    assert qs.binomial(e, k) == sympy.binomial(e, k)


@pytest.mark.parametrize("d", DIVISORS_24)
def test_eta_quotient_coefficients(d):
    # (eta(tau)/eta(2 tau))^(24/d) = q^(-1/d) prod (1 + q^n)^(-24/d)
    ser = _sympy_product(-24 // d, 8)
    got = qs.eta_quotient_coeffs(d, 8 * d - 1)
    for k, c in enumerate(ser):
        assert got[d * k - 1] == c
        assert qs.c_d(d, d * k - 1) == c
    assert qs.c_d(d, d * 2) == 0 if (2 * d + 1) % d else True


def test_eta_quotient_rejects():
    with pytest.raises(ValueError):
        qs.eta_quotient_coeffs(5, 3)


def test_c_minus1_against_numeric_f2():
    # f2(tau)^24 from eta products, compared with its q-expansion at tau = i
    ctx = new_context(200)
    tau = ctx.mpc(0, 1)
    q = ctx.exp(-2 * ctx.pi)
    series = sum(qs.c_minus1(l) * q**l for l in range(1, 60))
    direct = weber_f2(tau, 200) ** 24
    assert abs(series - direct.value) < abs(direct.value) * mpmath.mpf(10) ** -50
    assert qs.c_minus1(0) == 0 and qs.c_minus1(1) == 4096 and qs.c_minus1(2) == 24 * 4096


# -- the two-variable series type ---------------------------------------------

small = st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 6)), st.integers(-4, 4), max_size=6)


def _series(terms, const=None, D=2, N=3):
    s = qs.PuiseuxSeries2.from_terms(D, N, {k: v for k, v in terms.items() if k[0] + k[1] <= D * N})
    if const is not None:
        s = s + qs.PuiseuxSeries2.one(D, N).scale(const - s.c[0, 0])
    return s


@given(small, small, small)
@settings(max_examples=50, deadline=None)
def test_series_ring_laws(a, b, c):
    x, y, z = _series(a), _series(b), _series(c)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(small, st.sampled_from([1, -1, 2, Fraction(1, 3)]))
@settings(max_examples=50, deadline=None)
def test_inverse(a, const):
    x = _series(a, const)
    assert x * x.inverse() == qs.PuiseuxSeries2.one(2, 3)


def test_inverse_needs_constant_term():
    x = qs.PuiseuxSeries2.monomial(1, 4, 1, 0)
    with pytest.raises(qs.NotInvertible):
        x.inverse()


@given(small, st.integers(0, 4))
@settings(max_examples=40, deadline=None)
def test_pow_and_swap(a, e):
    x = _series(a)
    acc = qs.PuiseuxSeries2.one(2, 3)
    for _ in range(e):
        acc = acc * x
    assert x ** e == acc
    assert x.swap().swap() == x


@given(st.integers(0, 3), st.integers(0, 3), st.integers(-5, 5), st.sampled_from([1, -1]))
@settings(max_examples=60, deadline=None)
def test_binomial_power_matches_repeated_product(i, j, e, sign):
    if i == j == 0:
        return
    D, N = 2, 4
    base = qs.PuiseuxSeries2.one(D, N) + qs.PuiseuxSeries2.monomial(D, N, i, j, sign)
    want = base ** e if e >= 0 else base.inverse() ** (-e)
    assert qs.PuiseuxSeries2.one(D, N).mul_binomial_power(i, j, e, sign) == want


def test_binomial_product_is_exact_exponential():
    D, N = 2, 5
    exps = {(1, 0): 3, (0, 2): -2, (1, 1): 24, (3, 1): -7}
    naive = qs.PuiseuxSeries2.one(D, N)
    for (i, j), e in exps.items():
        naive = naive.mul_binomial_power(i, j, e)
    assert qs.binomial_product(D, N, exps) == naive


def test_refine_keeps_products():
    x = _series({(1, 0): 1, (0, 1): -2, (1, 1): 5})
    y = _series({(2, 0): 3, (0, 0): 1})
    assert (x * y).refine(4) == x.refine(4) * y.refine(4)


def test_dump_format():
    x = qs.PuiseuxSeries2.from_terms(2, 2, {(1, 0): Fraction(3, 2), (0, 3): -1})
    assert x.dump() == ["0/2 3/2 -1/1", "1/2 0/2 3/2"]


# -- twists and the Borcherds identities --------------------------------------


def test_twist_values():
    assert qs.twist(8, 3, 1) == -1
    assert qs.twist(8, 1, 1) == 1
    assert qs.twist(4, 3, 2) == 1
    assert qs.twist(3, 2, 4) == -1 and qs.twist(3, 2, 3) == 1
    with pytest.raises(ValueError):
        qs.twist(3, 1, 1, "other")
    with pytest.raises(ValueError):
        qs.twist(8, 2, 1)


@pytest.mark.parametrize("d", DIVISORS_24)
def test_p_d_identity(d):
    assert qs.p_d_check(d).ok


@pytest.mark.parametrize("s", DIVISORS_24)
def test_pol2_identity(s):
    assert qs.pol2_check(s).ok


@pytest.mark.parametrize("s", [1, 2, 3, 4, 6])
@pytest.mark.parametrize("eps", [1, -1])
def test_blift_small(s, eps):
    c = qs.blift_check(s, eps, 4)
    assert c.ok, c.detail


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("eps", [1, -1])
def test_psi_single(d, eps):
    assert qs.psi_single_check(d, eps, 4).ok


@pytest.mark.parametrize("reading", ["trivial", "literal"])
@pytest.mark.parametrize("eps", [1, -1])
def test_rejected_twist_readings_fail(reading, eps):
    # negative controls: only the parity reading matches the Weber side when d = 3
    assert not qs.blift_check(3, eps, 4, reading).ok
    assert not qs.blift_check(6, eps, 4, reading).ok
    assert not qs.psi_single_check(3, eps, 4, reading).ok


def test_blift_rejects_bad_eps():
    with pytest.raises(ValueError):
        qs.blift_check(2, 0, 4)


def test_psi1_constant_cannot_be_inverted():
    f = qs.psi_factors(1, 1, 2)
    assert f.constant == 2**12
    with pytest.raises(ValueError):
        f.power(-1)


def test_psi_single_higher_order():
    for d in (1, 2, 4):
        assert qs.psi_single_check(d, -1, 5).ok
