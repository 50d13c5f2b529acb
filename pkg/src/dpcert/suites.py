"""Registered identity suites.

Every suite checks exact equalities of ring elements, fields or chart forms and
returns a :class:`SuiteResult`.  Randomized suites draw from
``random.Random(seed)`` so a run is reproducible from its seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .derivations import (NotTangent, apply, bracket, build_vx, build_vy, build_vz, printed_vz,
                          scale, tangency_residual)
from .exactpoly import X, Y, Poly, VarSet
from .hypersurface import SurfabShorthand, SurfaceSpec, admissible_window, hypothesis_report
from .volumeforms import (ChartForm, d_function, divergence, ext_d, interior, omega, psi, theta,
                          wedge)

MAX_INDEX = 6
RANDOM_INSTANCES = 20


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.failures

    def expect(self, ok: bool, what: str):
        self.checked += 1
        if not ok and len(self.failures) < 10:
            self.failures.append(what)

    def to_dict(self, timings: bool = False) -> dict:
        out = {"name": self.name, "status": "PASS" if self.passed else "FAIL",
               "checked": self.checked, "failures": list(self.failures)}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class SuiteOptions:
    seed: int = 0
    printed_vz: bool = False  # use the z0^2*x d/dx variant of v_z in the tangency suite


SUITES: dict = {}


def suite(name: str, description: str):
    def register(fn: Callable):
        SUITES[name] = (description, fn)
        return fn
    return register


def symbolic_surface() -> SurfaceSpec:
    """``x^2*y = z^2 - beta + alpha*x`` with alpha, beta kept as variables."""
    return SurfabShorthand().expand()


def koras_russell() -> SurfaceSpec:
    return SurfaceSpec.from_strings("-z0^2 - z1^3", "-1", 1, label="Koras-Russell")


def _params(s: SurfaceSpec):
    return s.var("alpha"), s.var("beta")


# -- random inputs ------------------------------------------------------------------


def random_poly(rng: random.Random, vs: VarSet, variables: list, degree: int,
                terms: int = 3, caps: Optional[dict] = None, coeffs=range(-3, 4)) -> Poly:
    """A sum of up to ``terms`` random monomials in ``variables``; ``caps``
    bounds the exponent per variable."""
    caps = caps or {}
    out = {}
    for _ in range(terms):
        e = [0] * vs.size
        budget = rng.randint(0, degree)
        for v in rng.sample(variables, len(variables)):
            p = rng.randint(0, min(budget, caps.get(v, degree)))
            e[v] = p
            budget -= p
        c = rng.choice([c for c in coeffs if c != 0])
        out[tuple(e)] = out.get(tuple(e), 0) + c
    return Poly(vs, out)


def random_admissible(rng: random.Random, n: int, degree: int = 3) -> SurfaceSpec:
    """Random (a, b) of total degree <= ``degree`` meeting every hypothesis
    checked by :func:`hypothesis_report` (smoothness only for n = 0)."""
    vs = VarSet(n)
    zs = list(vs.z_indices)
    z0 = vs.z(0)
    while True:
        a = random_poly(rng, vs, zs, degree, rng.randint(1, 4), {z0: 2})
        b = random_poly(rng, vs, zs, degree, rng.randint(1, 3), {z0: 1})
        s = SurfaceSpec(n, a, b)
        if admissible_window(s) is None:
            continue
        if hypothesis_report(s).all_ok:
            return s


def _kernel_element(rng, f, degree: int = 2) -> Poly:
    """A random polynomial in the variables killed by a catalogue field."""
    s = f.surface
    kind, idx = f.label
    if kind == "vx":
        variables = [X] + [s.vs.z(l) for l in range(s.n + 1) if l != idx]
    elif kind == "vy":
        variables = [Y] + [s.vs.z(l) for l in range(s.n + 1) if l != idx]
    else:
        variables = list(s.vs.z_indices)
    return random_poly(rng, s.vs, variables, degree, rng.randint(1, 3))


def _catalogue(s: SurfaceSpec) -> list:
    out = [build_vx(s, i) for i in range(s.n + 1)]
    if s.k_window is not None:
        out += [build_vy(s, j) for j in range(s.k_window + 1)]
    out.append(build_vz(s))
    return out


def _random_field(rng, s: SurfaceSpec):
    f = rng.choice(_catalogue(s))
    return scale(f, _kernel_element(rng, f))


def _random_small_surface(rng) -> SurfaceSpec:
    while True:
        alpha, beta = rng.randint(-2, 2), rng.randint(-2, 2)
        if (alpha, beta) != (0, 0):
            return SurfabShorthand(alpha, beta).expand()


# -- identities of the catalogue on x^2*y = z^2 - beta + alpha*x ----------------------


def _ring_eq(res: SuiteResult, s: SurfaceSpec, lhs, rhs: Poly, what: str):
    res.expect(lhs == s.ring(rhs), what)


@suite("vx-on-y-powers", "v_x(y^(j+1)) = 2(j+1) y^j z")
def _vx_y(res: SuiteResult, opts: SuiteOptions):
    s = symbolic_surface()
    vx, y, z = build_vx(s), s.y, s.z()
    for j in range(MAX_INDEX + 1):
        _ring_eq(res, s, apply(vx, y ** (j + 1)), (y ** j * z).scale(2 * (j + 1)), f"j={j}")


@suite("vx-on-y-z-powers", "v_x(y^(j+1) z^(k+1)) = y^j z^k (2(j+1) z^2 + (k+1)(z^2 - beta + alpha x))")
def _vx_yz(res: SuiteResult, opts: SuiteOptions):
    s = symbolic_surface()
    alpha, beta = _params(s)
    vx, x, y, z = build_vx(s), s.x, s.y, s.z()
    for j in range(MAX_INDEX + 1):
        for k in range(MAX_INDEX + 1):
            rhs = y ** j * z ** k * ((z * z).scale(2 * (j + 1))
                                     + (z * z - beta + alpha * x).scale(k + 1))
            _ring_eq(res, s, apply(vx, y ** (j + 1) * z ** (k + 1)), rhs, f"j={j} k={k}")


@suite("vy-on-z-powers", "y^j v_y(z^(k+1)) = (k+1) y^j z^k (2xy - alpha)")
def _vy_z(res: SuiteResult, opts: SuiteOptions):
    s = symbolic_surface()
    alpha, _ = _params(s)
    vy, x, y, z = build_vy(s), s.x, s.y, s.z()
    for j in range(MAX_INDEX + 1):
        for k in range(MAX_INDEX + 1):
            lhs = s.ring(y ** j) * apply(vy, z ** (k + 1))
            rhs = (y ** j * z ** k * ((x * y).scale(2) - alpha)).scale(k + 1)
            _ring_eq(res, s, lhs, rhs, f"j={j} k={k}")


@suite("vy-on-x-powers", "v_y(x^(i+1)) = 2(i+1) x^i z")
def _vy_x(res: SuiteResult, opts: SuiteOptions):
    s = symbolic_surface()
    vy, x, z = build_vy(s), s.x, s.z()
    for i in range(MAX_INDEX + 1):
        _ring_eq(res, s, apply(vy, x ** (i + 1)), (x ** i * z).scale(2 * (i + 1)), f"i={i}")


@suite("vy-on-x-z-powers",
       "v_y(x^(i+1) z^(k+1)) = x^i z^k (2(i+1) z^2 + (k+1)(2z^2 - 2beta + alpha x))")
def _vy_xz(res: SuiteResult, opts: SuiteOptions):
    s = symbolic_surface()
    alpha, beta = _params(s)
    vy, x, z = build_vy(s), s.x, s.z()
    for i in range(MAX_INDEX + 1):
        for k in range(MAX_INDEX + 1):
            rhs = x ** i * z ** k * ((z * z).scale(2 * (i + 1))
                                     + ((z * z).scale(2) - beta.scale(2) + alpha * x).scale(k + 1))
            _ring_eq(res, s, apply(vy, x ** (i + 1) * z ** (k + 1)), rhs, f"i={i} k={k}")


# -- tangency ---------------------------------------------------------------------------


def tangency_surfaces(seed: int, count: int = 10) -> list:
    rng = random.Random(seed)
    return [koras_russell()] + [random_admissible(rng, rng.randint(0, 2)) for _ in range(count)]


@suite("tangency", "v_x^i, v_y^j and v_z annihilate the defining polynomial")
def _tangency(res: SuiteResult, opts: SuiteOptions):
    surfaces = tangency_surfaces(opts.seed)
    if opts.printed_vz:
        surfaces.append(symbolic_surface())
    for s in surfaces:
        fields = [f for f in _catalogue(s) if f.label[0] != "vz"]
        fields.append(printed_vz(s) if opts.printed_vz else build_vz(s))
        for f in fields:
            r = tangency_residual(f)
            res.expect(r.is_zero(), f"{f.label} on {s.describe()}: residual {r}")


# -- forms ------------------------------------------------------------------------------


def _dz(s: SurfaceSpec, l: int) -> ChartForm:
    return d_function(s.z(l), s)


def _wedge_all(s: SurfaceSpec, forms: list) -> ChartForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def _dy(s: SurfaceSpec) -> ChartForm:
    return ext_d(ChartForm(s, 0, {(): s.chart_y()}))


def interior_surfaces(seed: int) -> list:
    rng = random.Random(seed + 1)
    return [koras_russell(), random_admissible(rng, 2)]


@suite("interior-products",
       "i_{v_x^i} omega = (-1)^(i+1) dx ^ dz_0 ..^dz_i^.. dz_n and "
       "i_{v_y^j} omega = (-1)^j dy ^ dz_0 ..^dz_j^.. dz_n, both closed")
def _interiors(res: SuiteResult, opts: SuiteOptions):
    for s in interior_surfaces(opts.seed):
        om = omega(s)
        dx = d_function(s.x, s)
        for i in range(s.n + 1):
            phi = interior(build_vx(s, i), om)
            rest = [_dz(s, l) for l in range(s.n + 1) if l != i]
            want = _wedge_all(s, [dx] + rest).scale(-1 if i % 2 == 0 else 1)
            res.expect(phi == want, f"v_x^{i} on {s.describe()}")
            res.expect(ext_d(phi).is_zero(), f"d i_(v_x^{i}) omega on {s.describe()}")
        for j in range((s.k_window or 0) + 1 if s.k_window is not None else 0):
            phi = interior(build_vy(s, j), om)
            rest = [_dz(s, l) for l in range(s.n + 1) if l != j]
            want = _wedge_all(s, [_dy(s)] + rest).scale(-1 if j % 2 else 1)
            res.expect(phi == want, f"v_y^{j} on {s.describe()}")
            res.expect(ext_d(phi).is_zero(), f"d i_(v_y^{j}) omega on {s.describe()}")


@suite("theta-identities", "(k+1) i_{x^k v_x} omega = -d x^(k+1), (k+1) i_{y^k v_y} omega = d y^(k+1)")
def _theta(res: SuiteResult, opts: SuiteOptions):
    s = symbolic_surface()
    vx, vy, x, y = build_vx(s), build_vy(s), s.x, s.y
    for k in range(MAX_INDEX + 1):
        t = theta(scale(vx, x ** k))
        res.expect(t.form.scale(k + 1) == -d_function(x ** (k + 1), s), f"x^{k} v_x")
        res.expect(t.closed, f"x^{k} v_x closed")
        t = theta(scale(vy, y ** k))
        res.expect(t.form.scale(k + 1) == d_function(y ** (k + 1), s), f"y^{k} v_y")
        res.expect(t.closed, f"y^{k} v_y closed")


@suite("divergences", "div(x^k v_x) = div(y^k v_y) = 0, div(z x^k v_x) = x^(k+2), "
                      "div(z^k v_z) = -z^(k+2) + beta z^k")
def _divergences(res: SuiteResult, opts: SuiteOptions):
    s = symbolic_surface()
    _, beta = _params(s)
    vx, vy, vz, x, y, z = build_vx(s), build_vy(s), build_vz(s), s.x, s.y, s.z()
    for k in range(MAX_INDEX + 1):
        res.expect(divergence(scale(vx, x ** k)).is_zero(), f"div(x^{k} v_x)")
        res.expect(divergence(scale(vy, y ** k)).is_zero(), f"div(y^{k} v_y)")
        _ring_eq(res, s, divergence(scale(vx, z * x ** k)), x ** (k + 2), f"div(z x^{k} v_x)")
        _ring_eq(res, s, divergence(scale(vz, z ** k)), -z ** (k + 2) + beta * z ** k,
                 f"div(z^{k} v_z)")


# -- bracket laws -----------------------------------------------------------------------


def _law_surfaces(rng) -> list:
    return [_random_small_surface(rng), koras_russell()]


@suite("bracket-antisymmetry", "[nu, mu] = -[mu, nu] and [nu, nu] = 0")
def _antisym(res: SuiteResult, opts: SuiteOptions):
    rng = random.Random(opts.seed + 11)
    for t in range(RANDOM_INSTANCES):
        s = rng.choice(_law_surfaces(rng))
        nu, mu = _random_field(rng, s), _random_field(rng, s)
        res.expect(bracket(nu, mu) == -bracket(mu, nu), f"instance {t}")
        res.expect(bracket(nu, nu).is_zero(), f"instance {t} self")


@suite("bracket-jacobi", "[a, [b, c]] + [b, [c, a]] + [c, [a, b]] = 0")
def _jacobi(res: SuiteResult, opts: SuiteOptions):
    rng = random.Random(opts.seed + 12)
    for t in range(RANDOM_INSTANCES):
        s = _random_small_surface(rng) if t % 2 == 0 else koras_russell()
        a, b, c = (_random_field(rng, s) for _ in range(3))
        total = bracket(a, bracket(b, c)) + bracket(b, bracket(c, a)) + bracket(c, bracket(a, b))
        res.expect(total.is_zero(), f"instance {t}")


@suite("bracket-divergence", "div [v1, v2] = v1(div v2) - v2(div v1)")
def _bracket_div(res: SuiteResult, opts: SuiteOptions):
    rng = random.Random(opts.seed + 13)
    for t in range(RANDOM_INSTANCES):
        s = _random_small_surface(rng)
        v1, v2 = _random_field(rng, s), _random_field(rng, s)
        lhs = divergence(bracket(v1, v2))
        rhs = apply(v1, divergence(v2)) - apply(v2, divergence(v1))
        res.expect(lhs == rhs, f"instance {t} on {s.describe()}")


def _volume_preserving(rng, s: SurfaceSpec):
    k = rng.randint(0, 3)
    if rng.random() < 0.5:
        return scale(build_vx(s), s.x ** k)
    return scale(build_vy(s), s.y ** k)


@suite("bracket-interior", "i_[a, b] omega = d i_a i_b omega for volume-preserving a, b")
def _bracket_interior(res: SuiteResult, opts: SuiteOptions):
    rng = random.Random(opts.seed + 14)
    for t in range(RANDOM_INSTANCES):
        s = _random_small_surface(rng)
        a, b = _volume_preserving(rng, s), _volume_preserving(rng, s)
        res.expect(theta(bracket(a, b)).form == ext_d(psi(a, b)), f"instance {t} on {s.describe()}")


def _pair_instances(rng, s: SurfaceSpec) -> list:
    """(nu, mu, h) with mu(h) = 0."""
    if s.n == 0:
        return [(build_vx(s), build_vy(s), s.y)]
    out = []
    for i in range(s.n + 1):
        for j in range((s.k_window or 0) + 1):
            if i != j:
                out.append((build_vx(s, i), build_vy(s, j), s.z(i)))
    return out


@suite("pair-bracket", "[f nu, g h mu] - [f h nu, g mu] = f g nu(h) mu + f g mu(h) nu, "
                       "and = f g nu(h) mu when mu(h) = 0")
def _pair_bracket(res: SuiteResult, opts: SuiteOptions):
    rng = random.Random(opts.seed + 15)
    for t in range(RANDOM_INSTANCES):
        s = _random_small_surface(rng) if t % 2 == 0 else koras_russell()
        nu, mu, h = rng.choice(_pair_instances(rng, s))
        f, g = _kernel_element(rng, nu), _kernel_element(rng, mu)
        lhs = bracket(scale(nu, f), scale(mu, g * h)) - bracket(scale(nu, f * h), scale(mu, g))
        fg = s.ring(f * g)
        res.expect(lhs == scale(mu, (fg * apply(nu, h)).nf), f"instance {t} kernel form")
        # any h: the extra term f g mu(h) nu appears
        h2 = random_poly(rng, s.vs, [X, Y] + list(s.vs.z_indices), 2, 2)
        lhs = bracket(scale(nu, f), scale(mu, g * h2)) - bracket(scale(nu, f * h2), scale(mu, g))
        rhs = scale(mu, (fg * apply(nu, h2)).nf) + scale(nu, (fg * apply(mu, h2)).nf)
        res.expect(lhs == rhs, f"instance {t} general form")


# -- running ----------------------------------------------------------------------------


class UnknownSuite(KeyError):
    pass


def run_suite(name: str, opts: Optional[SuiteOptions] = None) -> SuiteResult:
    if name not in SUITES:
        raise UnknownSuite(name)
    opts = opts or SuiteOptions()
    res = SuiteResult(name)
    t0 = time.perf_counter()
    try:
        SUITES[name][1](res, opts)
    except NotTangent as exc:
        res.expect(False, f"field not tangent: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_suites(names=None, opts: Optional[SuiteOptions] = None) -> list:
    names = list(SUITES) if not names else list(names)
    for n in names:
        if n not in SUITES:
            raise UnknownSuite(n)
    return [run_suite(n, opts) for n in names]


__all__ = ["SUITES", "SuiteResult", "SuiteOptions", "run_suite", "run_suites", "UnknownSuite",
           "symbolic_surface", "koras_russell", "random_admissible", "random_poly",
           "tangency_surfaces", "MAX_INDEX"]
