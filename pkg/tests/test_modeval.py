import random

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from weberyz import modeval as me
from weberyz.quadratic import FormClass, reduced_forms


def _oracle_eta(tau, dps=80):
    # independent route: q^(1/24) (q; q)_infinity from mpmath
    with mpmath.workdps(dps):
        tau = mpmath.mpc(tau)
        q = mpmath.exp(2j * mpmath.pi * tau)
        return mpmath.exp(2j * mpmath.pi * tau / 24) * mpmath.qp(q)


TAUS = [0.5j + 0.1, 1j, 0.3 + 0.7j, -2.4 + 1.3j, 0.49 + 0.2j, 7.1 + 0.35j]


@pytest.mark.parametrize("tau", TAUS)
def test_eta_matches_qpochhammer(tau):
    got = me.eta(tau, 200)
    ref = _oracle_eta(tau)
    assert abs(got.value - ref) <= got.err + abs(ref) * mpmath.mpf(10) ** -75
    assert got.rel_err() < mpmath.mpf(2) ** -200


def test_eta_at_i_closed_form():
    ctx = me.new_context(256)
    ref = ctx.gamma(ctx.mpf(1) / 4) / (2 * ctx.pi ** (ctx.mpf(3) / 4))
    got = me.eta(ctx.mpc(0, 1), 256)
    assert abs(got.value - ref) < 2 * got.err + ref * ctx.mpf(2) ** -250


def test_eta_rejects_lower_half_plane():
    with pytest.raises(me.NotInUpperHalfPlane):
        me.eta(0.3 - 0.1j, 64)


@pytest.mark.parametrize("tau", TAUS[:4])
def test_weber_identities(tau):
    f, f1, f2 = me.weber(tau, 160)
    ctx = me.new_context(160)
    assert abs(f.value * f1.value * f2.value - ctx.sqrt(2)) < mpmath.mpf(2) ** -150
    assert abs(f.value ** 8 - f1.value ** 8 - f2.value ** 8) < abs(f.value ** 8) * mpmath.mpf(2) ** -150


@pytest.mark.parametrize("tau,value", [(1j, 1728), (complex(-0.5, 3 ** 0.5 / 2), 0)])
def test_j_special_values(tau, value):
    ctx = me.new_context(200)
    t = ctx.mpc(0, 1) if value == 1728 else ctx.mpc(-0.5, ctx.sqrt(3) / 2)
    j = me.j_invariant(t, 200)
    assert abs(j.value - value) < mpmath.mpf(10) ** -40


def test_j_heegner_163():
    ctx = me.new_context(256)
    tau = ctx.mpc(-1, ctx.sqrt(163)) / 2
    j = me.j_invariant(tau, 256)
    assert abs(j.value - (-640320 ** 3)) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("tau", [0.1 + 1.1j, -0.35 + 0.8j, 0.45 + 0.6j])
def test_j_against_kleinj(tau):
    with mpmath.workdps(60):
        ref = 1728 * mpmath.kleinj(tau)
    assert abs(me.j_from_weber(tau, 180).value - ref) < abs(ref) * mpmath.mpf(10) ** -45


def test_class_invariant_rejects_inadmissible():
    with pytest.raises(me.InadmissibleDiscriminant):
        me.class_invariant(FormClass(1, 1, 4), 128)  # d = -15


def test_class_invariant_principal_real_root():
    # the principal class of -31 gives the real root of x^3 + x - 1
    val = me.class_invariant(reduced_forms(-31)[0], 200)
    assert abs(val.value.imag) < val.err
    x = val.value.real
    assert abs(x ** 3 + x - 1) < mpmath.mpf(2) ** -180


def test_class_invariant_error_is_honest():
    for f in reduced_forms(-55):
        lo = me.class_invariant(f, 160)
        hi = me.class_invariant(f, 480)
        assert abs(lo.value - hi.value) <= lo.err + hi.err


# -- BigComplex bookkeeping --------------------------------------------------


@given(st.complex_numbers(min_magnitude=0.5, max_magnitude=4), st.complex_numbers(min_magnitude=0.5, max_magnitude=4),
       st.integers(min_value=1, max_value=6))
@settings(max_examples=50, deadline=None)
def test_bigcomplex_bounds_hold(x, y, k):
    ctx = me.new_context(80)
    ref = me.new_context(400)
    dx, dy = ctx.mpf(2) ** -70, ctx.mpf(2) ** -70
    X = me.BigComplex(ctx.mpc(x), dx)
    Y = me.BigComplex(ctx.mpc(y), dy)
    xr, yr = ref.mpc(x) + ref.mpf(dx), ref.mpc(y) - ref.mpf(dy)  # worst-case perturbation
    for got, exact in [(X + Y, xr + yr), (X - Y, xr - yr), (X * Y, xr * yr), (X / Y, xr / yr), (X ** k, xr ** k)]:
        assert abs(got.value - exact) <= got.err


# -- Gamma_0(2) and the character chi ---------------------------------------


def test_gamma02_validation():
    with pytest.raises(me.NotInGamma02):
        me.Gamma02Element(1, 1, 1, 2)
    with pytest.raises(me.NotInGamma02):
        me.Gamma02Element(2, 0, 0, 1)


def test_chi_on_generators():
    assert me.chi_exponent(me.T) == 1
    assert me.chi_exponent(me.B) == 23
    assert me.chi_exponent(me.MINUS_I) == 0


@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=0, max_value=10**6))
@settings(max_examples=100, deadline=None)
def test_chi_is_a_homomorphism(s1, s2):
    g = me.random_gamma02(random.Random(s1))
    h = me.random_gamma02(random.Random(s2))
    assert me.word_product(me.gamma02_decompose(g)) == g
    assert me.chi_exponent(g @ h) == (me.chi_exponent(g) + me.chi_exponent(h)) % 24
    assert me.chi_exponent(g.inverse()) == (-me.chi_exponent(g)) % 24


def test_in_gamma_chi():
    assert me.in_gamma_chi(me.T, 1)
    assert not me.in_gamma_chi(me.T, 24)
    assert me.in_gamma_chi(me.letter("T", 24), 24)
    assert me.in_gamma_chi(me.letter("T", 3) @ me.letter("B", 3), 24)


def test_chi_law_numeric_small_sample():
    rng = random.Random(7)
    ctx = me.new_context(140)
    tau = ctx.mpc("0.2", "0.9")
    base = me.weber_f2(tau, 140)
    for _ in range(10):
        g = me.random_gamma02(rng)
        lhs = me.weber_f2(g.act(tau), 140)
        rhs = base.value * me.root_of_unity(ctx, me.chi_exponent(g), 24)
        assert abs(lhs.value - rhs) < mpmath.mpf(10) ** -35


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6, 8, 12, 24])
def test_F_vector_transformation(d):
    ctx = me.new_context(160)
    tau = ctx.mpc("0.2", "0.9")
    F = [x.value for x in me.F_vector(tau, d, 160)]
    for which, moved in (("T", tau + 1), ("S", -1 / tau)):
        G = me.F_vector(moved, d, 160)
        M = me.rho_d_matrix(d, which, ctx)
        for i in range(3):
            assert abs(G[i].value - sum(M[i][k] * F[k] for k in range(3))) < mpmath.mpf(10) ** -40
