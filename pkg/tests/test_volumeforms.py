import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from dpcert.certify.oracle import _Surface, from_poly
from dpcert.derivations import apply, bracket, build_vx, build_vy, build_vz, scale
from dpcert.exactpoly import LaurentPoly, parse_laurent
from dpcert.hypersurface import SurfabShorthand, normal_form
from dpcert.suites import (_random_field, _volume_preserving, koras_russell, random_poly,
                           symbolic_surface)
from dpcert.volumeforms import (ChartForm, d_function, divergence, ext_d, interior, omega,
                                psi, theta, wedge, zero_form)

X10 = SurfabShorthand(1, 0).expand()
X11 = SurfabShorthand(1, 1).expand()
X23 = SurfabShorthand(2, -3).expand()
KR = koras_russell()


def test_omega():
    w = omega(X10)
    assert w.degree == 2
    assert w.terms == {(0, 1): parse_laurent("x^-2", X10.vs)}
    assert omega(KR).degree == 3 and len(omega(KR).terms) == 1


def test_form_sign_normalization():
    f = LaurentPoly.const(KR.vs, 1)
    assert ChartForm(KR, 2, {(2, 0): f}) == -ChartForm(KR, 2, {(0, 2): f})
    assert ChartForm(KR, 2, {(1, 1): f}).is_zero()


def test_interior_of_catalogue_fields_on_omega():
    s = KR
    for i in range(s.n + 1):
        got = interior(build_vx(s, i), omega(s))
        rest = tuple(c for c in range(s.n + 2) if c != i + 1)
        sign = -1 if i % 2 == 0 else 1  # (-1)^(i+1)
        assert got == ChartForm(s, s.n + 1, {rest: LaurentPoly.const(s.vs, sign)})


def test_interior_vy_is_dy_wedge():
    s = X11
    # n = 0: i_{v_y} omega = dy with y = (a + x b) x^-2 on the chart
    assert interior(build_vy(s), omega(s)) == d_function(s.y, s)


def test_interior_rejects_zero_forms():
    with pytest.raises(ValueError):
        interior(build_vx(X10), zero_form(X10, X10.x))


def test_ext_d_examples():
    f = ChartForm(X10, 1, {(1,): parse_laurent("x^-1", X10.vs)})
    assert ext_d(f) == ChartForm(X10, 2, {(0, 1): parse_laurent("-x^-2", X10.vs)})
    top = ext_d(omega(X10))
    assert top.is_zero() and top.above_top
    for k in range(4):
        assert ext_d(interior(scale(build_vx(KR), KR.x ** k), omega(KR))).is_zero()


def _random_form(rng, s, degree):
    dim = s.n + 2
    vars_ = list(range(s.vs.geo))
    terms = {}
    for _ in range(2):
        idx = tuple(sorted(rng.sample(range(dim), degree)))
        p = random_poly(rng, s.vs, vars_, 3)
        terms[idx] = p.to_laurent() * LaurentPoly.x_power(s.vs, -rng.randint(0, 2))
    return ChartForm(s, degree, terms)


@given(st.integers(0, 10_000), st.integers(0, 2))
@settings(max_examples=30, deadline=None)
def test_d_squared_is_zero(seed, degree):
    rng = random.Random(seed)
    phi = _random_form(rng, KR, degree)
    assert ext_d(ext_d(phi)).is_zero()


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(0, 2))
@settings(max_examples=30, deadline=None)
def test_interior_is_antiderivation(seed, p, q):
    rng = random.Random(seed)
    s = KR
    if p + q > s.n + 2:
        p = s.n + 2 - q
    nu = _random_field(rng, s)
    phi, chi = _random_form(rng, s, p), _random_form(rng, s, q)
    lhs = interior(nu, wedge(phi, chi))
    rhs = wedge(interior(nu, phi), chi)
    if q:
        rhs = rhs + wedge(phi, interior(nu, chi)).scale(-1 if p % 2 else 1)
    assert lhs == rhs
    if p >= 2:
        assert interior(nu, interior(nu, phi)).is_zero()


def test_psi_antisymmetric():
    rng = random.Random(4)
    for _ in range(5):
        nu, mu = _random_field(rng, KR), _random_field(rng, KR)
        assert psi(nu, nu).is_zero()
        assert psi(nu, mu) == -psi(mu, nu)
    assert psi(build_vx(X10), build_vy(X10)).degree == 0


def test_psi_by_hand_on_x10():
    vx, vy = build_vx(X10), build_vy(X10)
    # v_x has chart components (0, x^2), so i_{v_x}(x^-2 dx^dz) = -dx
    assert interior(vx, omega(X10)) == ChartForm(X10, 1, {(0,): LaurentPoly.const(X10.vs, -1)})
    # i_{v_y}(-dx) = -2z
    assert psi(vy, vx) == zero_form(X10, X10.ring("-2*z0"))


@pytest.mark.parametrize("k", range(5))
def test_divergence_identities(k):
    for s in (X10, X11, X23, symbolic_surface()):
        vx, vy, vz = build_vx(s), build_vy(s), build_vz(s)
        x, y, z = s.x, s.y, s.z()
        assert divergence(scale(vx, x ** k)).is_zero()
        assert divergence(scale(vy, y ** k)).is_zero()
        assert divergence(scale(vx, z * x ** k)) == x ** (k + 2)
        beta = z * z - s.ring(s.a)  # a = z^2 - beta
        assert divergence(scale(vz, z ** k)) == -(z ** (k + 2)) + beta * z ** k


def test_divergence_on_koras_russell():
    for i in range(KR.n + 1):
        for k in range(3):
            assert divergence(scale(build_vx(KR, i), KR.x ** k)).is_zero()
    assert divergence(scale(build_vy(KR), KR.y ** 2)).is_zero()


def _to_sympy(nu):
    return tuple(sp.expand(from_poly(c)) for c in nu.coeffs)


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_divergence_matches_ambient_oracle(seed):
    # the oracle uses div = (ambient divergence) - lambda with nu(P) = lambda P
    rng = random.Random(seed)
    alpha, beta = rng.randint(-2, 2), rng.randint(-2, 2)
    s = SurfabShorthand(alpha, beta).expand()
    nu = _random_field(rng, s)
    got = from_poly(divergence(nu).nf)
    assert sp.expand(got - _Surface(alpha, beta).divergence(_to_sympy(nu))) == 0


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_divergence_leibniz(seed):
    rng = random.Random(seed)
    s = KR if seed % 2 else X23
    nu = _random_field(rng, s)
    f = normal_form(random_poly(rng, s.vs, list(range(s.vs.geo)), 2), s)
    assert divergence(scale(nu, f)) == f * divergence(nu) + apply(nu, f)


@given(st.integers(0, 10_000))
@settings(max_examples=15, deadline=None)
def test_divergence_of_bracket(seed):
    rng = random.Random(seed)
    s = KR if seed % 2 else X11
    a, b = _random_field(rng, s), _random_field(rng, s)
    assert divergence(bracket(a, b)) == apply(a, divergence(b)) - apply(b, divergence(a))


def test_theta_closed_exactly_for_volume_preserving():
    s = X11
    for k in range(4):
        t = theta(scale(build_vx(s), s.x ** k))
        assert t.closed
        assert t.form.scale(k + 1) == -d_function(s.x ** (k + 1), s)
        t = theta(scale(build_vy(s), s.y ** k))
        assert t.closed
        assert t.form.scale(k + 1) == d_function(s.y ** (k + 1), s)
    t = theta(scale(build_vx(s), s.z()))
    assert not t.closed
    assert ext_d(t.form) == omega(s).scale(s.x ** 2)


@given(st.integers(0, 10_000))
@settings(max_examples=15, deadline=None)
def test_d_psi_is_theta_of_bracket(seed):
    rng = random.Random(seed)
    s = KR if seed % 2 else X23
    a, b = _volume_preserving(rng, s), _volume_preserving(rng, s)
    assert ext_d(psi(a, b)) == theta(bracket(a, b)).form
