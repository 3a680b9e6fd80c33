import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import HealthCheck, assume, given, settings, strategies as st

from riverlink.errors import InvalidMatrixError, RiverlinkError
from riverlink.forms import IDENTITY, Pibqf, act, automorph, b_delta, pell_minimal
from riverlink.geometry import (QuadraticNumber, commutator_det_positive, crossing_angle,
                                crossing_point, crossing_sign, evaluate_sign, geodesics_cross,
                                hyperbolic_distance, point_form, roots, trace_zero)

from test_forms import _matrices, forms

P = Pibqf.parse
A, B = P("[1,1,-1]"), P("[1,-1,-1]")


def test_roots_examples():
    qf, qs = roots(A)
    assert (qf.p, qf.q, qf.r, qf.d) == (-1, 1, 2, 5)
    assert (qs.p, qs.q, qs.r, qs.d) == (-1, -1, 2, 5)
    f, _ = roots(P("[10,14,-5]"))
    assert (f.p, f.q, f.r, f.d) == (-7, 1, 10, 99)
    assert str(f) == "(-7+√99)/10"


@settings(max_examples=200, deadline=None)
@given(forms())
def test_roots_of_negation_swap(q):
    f, s = roots(q)
    nf, ns = roots(-q)
    assert nf == s and ns == f
    assert evaluate_sign(q, f) == 0 and evaluate_sign(q, s) == 0


def test_quadratic_number_comparisons():
    x = QuadraticNumber(-1, 1, 2, 5)
    assert 0 < x < 1
    assert x == QuadraticNumber(-2, 2, 4, 5)
    assert x == QuadraticNumber(-2, 1, 4, 20)
    assert x > Fraction(61, 99) and x < Fraction(62, 100)
    assert -x < 0
    with pytest.raises(TypeError):
        _ = x < QuadraticNumber(0, 1, 1, 3)


@settings(max_examples=300, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 50),
       st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 50), st.integers(2, 200))
def test_quadratic_number_order_matches_high_precision(p1, q1, r1, p2, q2, r2, d):
    x, y = QuadraticNumber(p1, q1, r1, d), QuadraticNumber(p2, q2, r2, d)
    with mpmath.workdps(60):
        fx = (p1 + q1 * mpmath.sqrt(d)) / r1
        fy = (p2 + q2 * mpmath.sqrt(d)) / r2
        if abs(fx - fy) < mpmath.mpf(10) ** -40:
            assert x == y
        else:
            assert (x < y) == (fx < fy)


def test_cross_examples():
    assert geodesics_cross(A, B)
    assert not geodesics_cross(A, P("[1,10,-9]"))
    assert not geodesics_cross(A, -A)
    assert b_delta(A, -A) ** 2 == A.disc ** 2


def test_sign_examples():
    assert crossing_sign(A, B) == 1
    assert crossing_sign(B, A) == -1
    with pytest.raises(RiverlinkError):
        crossing_sign(A, P("[1,10,-9]"))


def test_point_examples():
    rec = crossing_point(A, B)
    assert rec.point_form == (2, 0, 2)
    assert rec.point == pytest.approx(1j)
    assert rec.bdelta == 3 and rec.sign == 1
    f = rec.point_form
    assert f[1] ** 2 - 4 * f[0] * f[2] == -16 == 3 ** 2 - 25


def test_angle_examples():
    assert crossing_angle(A, B) == pytest.approx(math.atan(4 / 3))
    # x = 0 and x < 0 branches
    pairs = [(A, g) for g in (P("[3,1,-1]"), P("[-1,1,3]"), P("[2,-1,-2]"))]
    for q1, q2 in pairs:
        if geodesics_cross(q1, q2):
            x = b_delta(q1, q2)
            th = crossing_angle(q1, q2)
            assert 0 < th < math.pi
            if x == 0:
                assert th == math.pi / 2
            elif x < 0:
                assert th > math.pi / 2


def test_angle_zero_bdelta():
    q1, q2 = P("[1,0,-2]"), P("[1,4,2]")
    assert b_delta(q1, q2) == 0 and geodesics_cross(q1, q2)
    assert crossing_angle(q1, q2) == math.pi / 2


def _crossing_pairs():
    return st.tuples(forms(400), forms(400), _matrices()).map(
        lambda t: (t[0], act(t[2], t[1]))).filter(lambda p: geodesics_cross(*p))


@settings(max_examples=500, deadline=None)
@given(forms(400), forms(400), _matrices())
def test_cross_matches_commutator(q1, g, m):
    q2 = act(m, g)
    assume(q1 != q2 and q1 != -q2)
    assert geodesics_cross(q1, q2) == commutator_det_positive(automorph(q1), automorph(q2))


@settings(max_examples=500, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(_crossing_pairs(), _matrices())
def test_crossing_properties(pair, m):
    q1, q2 = pair
    rec = crossing_point(q1, q2)
    D1, D2 = q1.disc, q2.disc
    x = rec.bdelta
    f = rec.point_form
    assert f[1] ** 2 - 4 * f[0] * f[2] == x * x - D1 * D2
    z = rec.point
    for q in (q1, q2):
        scale = abs(q.a) + abs(q.b) + abs(q.c)
        assert abs(q.a * abs(z) ** 2 + q.b * z.real + q.c) < 1e-9 * scale * max(1, abs(z) ** 2)
    # the exact sign agrees with the sign of q1 at the first root of q2, and is antisymmetric
    assert rec.sign == crossing_sign(q1, q2) == evaluate_sign(q1, roots(q2)[0])
    assert crossing_sign(q2, q1) == -rec.sign
    assert crossing_sign(q1, -q2) == -rec.sign
    assert rec.sign == (1 if q2.b * q1.c - q1.b * q2.c > 0 else -1)
    assert crossing_sign(act(m, q1), act(m, q2)) == rec.sign
    th = crossing_angle(q1, q2)
    if x != 0:
        assert math.tan(th) * x == pytest.approx(math.sqrt(D1 * D2 - x * x), rel=1e-9)


@settings(max_examples=300, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
@given(_crossing_pairs())
def test_point_fixed_by_trace_zero_product(pair):
    q1, q2 = pair
    z = mpmath.mpc(crossing_point(q1, q2).point)
    z1, z2 = trace_zero(automorph(q1)), trace_zero(automorph(q2))
    prod = [[sum(z1[i][k] * z2[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    a, b, c, d = (mpmath.mpf(v.numerator) / v.denominator for v in (prod[0][0], prod[0][1], prod[1][0], prod[1][1]))
    w = (a * z + b) / (c * z + d)
    assert abs(w - z) < 1e-7 * max(1, abs(z))


def test_cross_ratio_negative_for_crossing():
    q1, q2 = A, B
    f1, s1 = (float(r) for r in roots(q1))
    f2, s2 = (float(r) for r in roots(q2))
    cr = (f1 - f2) * (s1 - s2) / ((f1 - s2) * (s1 - f2))
    assert cr < 0


def test_trace_zero_examples():
    zero = trace_zero(IDENTITY)
    assert all(v == 0 for row in zero for v in row)
    assert trace_zero(automorph(A)) == ((Fraction(-1, 2), 1), (1, Fraction(1, 2)))


@settings(max_examples=200, deadline=None)
@given(forms())
def test_trace_zero_of_automorph(q):
    g = automorph(q)
    u = pell_minimal(q.disc).u
    z = trace_zero(g)
    sign = 1 if g.trace > 0 else -1
    expect = ((Fraction(-q.b * u, 2), Fraction(-q.c * u)), (Fraction(q.a * u), Fraction(q.b * u, 2)))
    assert z == tuple(tuple(sign * v for v in row) for row in expect)


def test_commutator_examples():
    assert commutator_det_positive(automorph(A), automorph(B))
    assert not commutator_det_positive(automorph(A), automorph(A))
    with pytest.raises(InvalidMatrixError):
        commutator_det_positive(IDENTITY, automorph(A))


def test_hyperbolic_distance():
    assert hyperbolic_distance(1j, 1j) == 0
    assert hyperbolic_distance(1j, 2j) == pytest.approx(math.log(2))
    assert hyperbolic_distance(1 + 1j, 2j) == pytest.approx(hyperbolic_distance(2j, 1 + 1j))
    with pytest.raises(ValueError):
        hyperbolic_distance(1j, 1)
