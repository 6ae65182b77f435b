import math

import pytest
from hypothesis import given, settings, strategies as st

from weberyz.quadratic import (FormClass, InvalidDiscriminant, NotOneMod8, check_discriminant, class_number,
                               cm_point, epsilon_d, reduced_forms)

# class numbers of imaginary quadratic fields (standard tables)
CLASS_NUMBERS = {-3: 1, -4: 1, -7: 1, -23: 3, -31: 3, -55: 4, -71: 7, -103: 5, -127: 5,
                 -151: 7, -199: 9, -223: 7, -271: 11, -47: 5, -79: 5, -84: 4, -420: 8}


@pytest.mark.parametrize("d,h", sorted(CLASS_NUMBERS.items()))
def test_class_number_table(d, h):
    assert class_number(d) == h


def _brute_reduced(d):
    # independent enumeration straight from the definition of reduced
    out = set()
    for a in range(1, int(math.sqrt(-d)) + 1):
        for b in range(-a, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or math.gcd(math.gcd(a, b), c) != 1:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            out.add((a, b, c))
    return out


@pytest.mark.parametrize("d", [-3, -4, -23, -31, -55, -84, -127, -271, -420, -1003])
def test_reduced_forms_brute_force(d):
    forms = reduced_forms(d)
    assert {(f.a, f.b, f.c) for f in forms} == _brute_reduced(d)
    assert all(f.is_reduced() and f.disc == d for f in forms)


def test_reduced_forms_order():
    assert [(f.a, f.b, f.c) for f in reduced_forms(-31)] == [(1, 1, 8), (2, -1, 4), (2, 1, 4)]


@pytest.mark.parametrize("d", [0, 5, -2, -5])
def test_bad_discriminant(d):
    with pytest.raises(InvalidDiscriminant):
        check_discriminant(d)


def test_form_validation():
    with pytest.raises(InvalidDiscriminant):
        FormClass(0, 1, 1)
    with pytest.raises(InvalidDiscriminant):
        FormClass(1, 3, 1)


@pytest.mark.parametrize("d,eps", [(-7, -1), (-15, 1), (-31, 1), (-127, 1), (-55, -1), (-23, -1)])
def test_epsilon_d(d, eps):
    assert epsilon_d(d) == eps


def test_epsilon_d_rejects():
    with pytest.raises(NotOneMod8):
        epsilon_d(-3)


@given(st.sampled_from([-23, -31, -55, -127, -199, -420]), st.data())
@settings(max_examples=60, deadline=None)
def test_reduction_is_class_invariant(d, data):
    f = data.draw(st.sampled_from(reduced_forms(d)))
    g = f
    for _ in range(data.draw(st.integers(min_value=1, max_value=6))):
        g = g.translate(data.draw(st.integers(min_value=-5, max_value=5)))
        if data.draw(st.booleans()):
            g = g.flip()
    assert g.disc == d
    assert g.reduce() == f


def test_cm_point():
    f = FormClass(2, -1, 4)
    p = cm_point(f, 128)
    assert abs(p.tau.value - complex(0.25, math.sqrt(31) / 4)) < 1e-15
    assert p.source == f
