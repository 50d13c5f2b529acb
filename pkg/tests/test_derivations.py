import random

import pytest
from hypothesis import given, settings, strategies as st

from dpcert.derivations import (NoCertificate, NotTangent, SurfaceMismatch, VectorField,
                                WindowError, apply, bracket, build_vx, build_vy, build_vz,
                                certify_complete, is_tangent, kernel_member, printed_vz, scale,
                                tangency_residual)
from dpcert.exactpoly import X, Y, Poly
from dpcert.hypersurface import SurfabShorthand, SurfaceSpec
from dpcert.suites import _random_field, koras_russell, random_admissible, symbolic_surface

X10 = SurfabShorthand(1, 0).expand()
X11 = SurfabShorthand(1, 1).expand()
SYM = symbolic_surface()
KR = koras_russell()


def test_shorthand_catalogue_coefficients():
    s = SYM
    vx, vy, vz = build_vx(s), build_vy(s), build_vz(s)
    assert vx.c_x.is_zero() and vx.c_y == s.ring("2*z0") and vx.c_z[0] == s.ring("x^2")
    assert vy.c_x == s.ring("2*z0") and vy.c_y.is_zero()
    assert vy.c_z[0] == s.ring("2*x*y - alpha")
    assert vz.c_x == s.ring("(z0^2 - beta)*x")
    assert vz.c_y == s.ring("-(2*(z0^2 - beta)*y - alpha*x*y + alpha^2)")


def test_koras_russell_vx0():
    v = build_vx(KR, 0)
    assert v.c_y == KR.ring("-2*z0") and v.c_z[0] == KR.ring("x^2")


def test_catalogue_tangent_and_kills():
    for s in (SYM, KR, X10):
        for f in [build_vx(s, i) for i in range(s.n + 1)] + [build_vy(s, 0), build_vz(s)]:
            assert is_tangent(f)
        assert apply(build_vy(s, 0), s.y).is_zero()
        for i in range(s.n + 1):
            assert apply(build_vz(s), s.z(i)).is_zero()


def test_apply_examples():
    assert apply(build_vx(SYM), SYM.y ** 2) == SYM.ring("4*y*z0")
    assert apply(build_vy(SYM), SYM.x ** 2) == SYM.ring("4*x*z0")
    assert apply(build_vx(SYM), SYM.const(1)).is_zero()


def test_kernel_membership_examples():
    s = SurfaceSpec.from_strings("z0^2 + z1^2", "1", 1)
    assert kernel_member(build_vx(s, 0), s.x)
    assert kernel_member(build_vy(s, 0), s.z(1))
    assert not kernel_member(build_vy(s, 1), s.z(1))
    assert apply(build_vy(s, 1), s.z(1)) == s.ring("2*x*y - 1")


def test_window_error_names_bound():
    with pytest.raises(WindowError, match="z1"):
        build_vy(KR, 1)


def test_vz_maps_relation_to_bx_times_relation():
    s = random_admissible(random.Random(2), 1)
    vz = build_vz(s)
    # nu(P) computed on ambient polynomials
    P = s.relation()
    image = sum((vz.coeffs[k] * P.partial(k) for k in range(s.n + 3)), Poly.zero(s.vs))
    assert image == s.b * s.x * P


def test_printed_vz_is_not_tangent():
    r = tangency_residual(printed_vz(X11))
    assert r == X11.ring("2*z0^2 - 2 + x")  # beta*(2z^2 - 2beta + alpha*x) at alpha = beta = 1
    assert tangency_residual(printed_vz(X10)).is_zero()
    with pytest.raises(NotTangent):
        VectorField(X11, printed_vz(X11).coeffs)


def test_bracket_example_by_hand():
    got = bracket(build_vx(X10), build_vy(X10))
    # componentwise v_x(c^{v_y}) - v_y(c^{v_x})
    assert got.c_x == X10.ring("2*x^2")
    assert got.c_y == X10.ring("2 - 4*x*y")
    assert got.c_z[0].is_zero()


def test_bracket_antisymmetry_and_self():
    vx, vy = build_vx(KR, 1), build_vy(KR, 0)
    assert bracket(vx, vx).is_zero()
    assert bracket(vx, vy) == -bracket(vy, vx)


def test_surface_mismatch():
    with pytest.raises(SurfaceMismatch):
        bracket(build_vx(X10), build_vx(X11))


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_jacobi_and_tangency_preserved(seed):
    rng = random.Random(seed)
    s = KR if seed % 2 else SurfabShorthand(rng.randint(1, 3), rng.randint(-2, 2)).expand()
    a, b, c = (_random_field(rng, s) for _ in range(3))
    total = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
    assert total.is_zero()
    assert is_tangent(bracket(a, b))


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_leibniz_for_fields(seed):
    rng = random.Random(seed)
    from dpcert.suites import random_poly
    s = KR
    nu = _random_field(rng, s)
    vars_ = list(range(s.vs.geo))
    f, g = random_poly(rng, s.vs, vars_, 3), random_poly(rng, s.vs, vars_, 3)
    assert apply(nu, f * g) == apply(nu, f) * s.ring(g) + s.ring(f) * apply(nu, g)


# -- completeness ----------------------------------------------------------------------


def test_vx_is_lnd_with_small_bound():
    for s in (X10, KR):
        for i in range(s.n + 1):
            cert = certify_complete(build_vx(s, i))
            assert cert.kind == "LND" and cert.replay()
            assert cert.bounds[Y] <= s.a.degree_in(s.vs.z(i)) + 2


def test_vy_block_affine():
    cert = certify_complete(build_vy(X10))
    assert cert.kind == "block-affine" and cert.replay()
    assert cert.blocks == [[Y], [X, 2]]


def test_vz_block_affine():
    cert = certify_complete(build_vz(X11))
    assert cert.blocks == [[2], [X], [Y]] and cert.replay()


def test_kernel_multiplied_fields():
    s = SYM
    for k in range(4):
        # z is not in ker v_x, so z*x^k*v_x is certified as a field of its own
        cert = certify_complete(scale(build_vx(s), s.z() * s.x ** k))
        assert cert.replay()
        if k:
            assert cert.blocks == [[X], [2], [Y]]
        cert = certify_complete(build_vx(s), multiplier=s.x ** k)
        assert cert.replay()
        cert = certify_complete(build_vz(s), multiplier=s.z() ** k)
        assert cert.replay()


def test_multiplier_must_be_in_kernel():
    with pytest.raises(ValueError):
        certify_complete(build_vx(X10), multiplier=X10.y)


def test_no_certificate_is_not_refutation():
    with pytest.raises(NoCertificate):
        certify_complete(scale(build_vx(X10), X10.y))


def test_tampered_certificate_fails_replay():
    cert = certify_complete(build_vy(X10))
    u = cert.blocks[1][0]
    coeffs, const = cert.decompositions[u]
    cert.decompositions[u] = (coeffs, const + X10.const(1))
    assert not cert.replay()
