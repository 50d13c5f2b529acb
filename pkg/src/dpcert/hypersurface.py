"""Surfaces ``x^2*y = a(z) + x*b(z)``, their coordinate ring and the chart x != 0.

Ring elements are kept in the normal form obtained by rewriting every
occurrence of ``x^2*y`` as ``a + x*b``; the monomials free of ``x^2*y`` form
a basis of the coordinate ring.  On the dense chart ``x != 0`` the variable
``y`` is eliminated as ``(a + x*b)/x^2``, which embeds the ring into
Laurent polynomials in x.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .exactpoly import PARAMS, X, Y, LaurentPoly, Poly, VarSet, as_scalar, parse
from .exactpoly import univariate as up
from .exactpoly.scalar import Scalar, div, format_scalar


class NotInRing(ArithmeticError):
    """A Laurent polynomial is not (within the degree bound) the chart
    image of a ring element."""


@dataclass(frozen=True)
class SurfaceSpec:
    n: int
    a: Poly
    b: Poly
    k_window: Optional[int] = None
    label: str = field(default="", compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        vs = self.a.vs
        if self.b.vs != vs or vs.n != self.n:
            raise ValueError("a and b must share a VarSet with n matching")
        for name, p in (("a", self.a), ("b", self.b)):
            if p.involves(X) or p.involves(Y):
                raise ValueError(f"{name} must not contain x or y")
        if self.k_window is None:
            object.__setattr__(self, "k_window", admissible_window(self))
        elif self.k_window < 0 or self.k_window > self.n:
            raise ValueError("k_window must lie in 0..n")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_strings(cls, a: str, b: str, n: int, k_window=None, label="",
                     extra=()) -> "SurfaceSpec":
        vs = VarSet(n, tuple(extra))
        return cls(n, parse(a, vs), parse(b, vs), k_window, label)

    @property
    def vs(self) -> VarSet:
        return self.a.vs

    @property
    def symbolic(self) -> bool:
        return bool(self.vs.extra)

    def var(self, name) -> Poly:
        return Poly.var(self.vs, name)

    @property
    def x(self) -> Poly:
        return Poly.var(self.vs, X)

    @property
    def y(self) -> Poly:
        return Poly.var(self.vs, Y)

    def z(self, i: int = 0) -> Poly:
        return Poly.var(self.vs, self.vs.z(i))

    def const(self, c) -> Poly:
        return Poly.const(self.vs, c)

    def parse(self, text: str) -> Poly:
        return parse(text, self.vs)

    def relation(self) -> Poly:
        """The defining polynomial ``x^2*y - a - x*b``."""
        x, y = self.x, self.y
        return x * x * y - self.a - x * self.b

    def ring(self, p) -> "RingElement":
        if isinstance(p, str):
            p = self.parse(p)
        elif not isinstance(p, Poly):
            p = self.const(p)
        return normal_form(p, self)

    def describe(self) -> str:
        if self.label:
            return self.label
        return f"x^2*y = {self.a} + x*({self.b})"

    def to_dict(self) -> dict:
        return {"n": self.n, "a": str(self.a), "b": str(self.b),
                "k_window": self.k_window, "label": self.label}

    # -- memo tables ----------------------------------------------------------

    def _xy_nf(self, p: int, q: int) -> Poly:
        key = ("nf", p, q)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if p >= 2 and q >= 1:
            value = self.a * self._xy_nf(p - 2, q - 1) + self.b * self._xy_nf(p - 1, q - 1)
        else:
            e = [0] * self.vs.size
            e[X], e[Y] = p, q
            value = Poly._make(self.vs, {tuple(e): 1})
        self._cache[key] = value
        return value

    def _chart_y_power(self, q: int) -> LaurentPoly:
        key = ("chart", q)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if q == 0:
            value = LaurentPoly.const(self.vs, 1)
        else:
            value = self._chart_y_power(q - 1) * self.chart_y()
        self._cache[key] = value
        return value

    def chart_y(self) -> LaurentPoly:
        """``y`` on the chart: ``(a + x*b) * x^-2``."""
        num = (self.a + self.x * self.b).to_laurent()
        return num.shift_x(-2)


@dataclass(frozen=True)
class SurfabShorthand:
    """The family ``x^2*y = z^2 - beta + alpha*x``; ``None`` keeps a
    parameter symbolic."""

    alpha: Optional[Scalar] = None
    beta: Optional[Scalar] = None

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, as_scalar(v))

    @property
    def symbolic(self) -> bool:
        return self.alpha is None or self.beta is None

    def smooth(self) -> Optional[bool]:
        if self.alpha is not None and self.alpha != 0:
            return True
        if self.beta is not None and self.beta != 0:
            return True
        if self.symbolic:
            return None
        return False

    def expand(self) -> SurfaceSpec:
        vs = VarSet(0, PARAMS) if self.symbolic else VarSet(0)
        z = Poly.var(vs, vs.z(0))
        alpha = Poly.var(vs, "alpha") if self.alpha is None else Poly.const(vs, self.alpha)
        beta = Poly.var(vs, "beta") if self.beta is None else Poly.const(vs, self.beta)
        return SurfaceSpec(0, z * z - beta, alpha, label=self.label())

    def label(self) -> str:
        a = "alpha" if self.alpha is None else format_scalar(self.alpha)
        b = "beta" if self.beta is None else format_scalar(self.beta)
        return f"X_{{{a},{b}}}"


class RingElement:
    """An element of the coordinate ring, stored in normal form."""

    __slots__ = ("surface", "nf")

    def __init__(self, surface: SurfaceSpec, nf: Poly):
        self.surface = surface
        self.nf = nf

    def _other(self, other) -> Poly:
        if isinstance(other, RingElement):
            if other.surface != self.surface:
                raise ValueError("ring elements live on different surfaces")
            return other.nf
        if isinstance(other, Poly):
            return normal_form(other, self.surface).nf
        return Poly.const(self.surface.vs, as_scalar(other))

    def __add__(self, other):
        return RingElement(self.surface, self.nf + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return RingElement(self.surface, self.nf - self._other(other))

    def __rsub__(self, other):
        return RingElement(self.surface, self._other(other) - self.nf)

    def __neg__(self):
        return RingElement(self.surface, -self.nf)

    def __mul__(self, other):
        if isinstance(other, (RingElement, Poly)):
            return normal_form(self.nf * self._other(other), self.surface)
        return RingElement(self.surface, self.nf.scale(as_scalar(other)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = normal_form(Poly.const(self.surface.vs, 1), self.surface)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.surface == other.surface and self.nf == other.nf
        if isinstance(other, Poly):
            return self.nf == normal_form(other, self.surface).nf
        try:
            return self.nf == as_scalar(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.nf)

    def is_zero(self) -> bool:
        return self.nf.is_zero()

    def __bool__(self):
        return not self.nf.is_zero()

    def degree(self) -> int:
        return self.nf.degree()

    def __str__(self):
        return str(self.nf)

    def __repr__(self):
        return f"RingElement({self.nf})"


def normal_form(p: Poly, s: SurfaceSpec) -> RingElement:
    """Rewrite ``x^2*y -> a + x*b`` until no monomial is divisible by ``x^2*y``."""
    if isinstance(p, RingElement):
        return p
    if p.laurent:
        raise TypeError("normal_form expects a polynomial, not a Laurent polynomial")
    if p.vs != s.vs:
        raise ValueError("polynomial and surface use different variables")
    groups: dict = {}
    out: dict = {}
    for e, c in p.items():
        if e[X] >= 2 and e[Y] >= 1:
            rest = (0, 0) + e[2:]
            groups.setdefault((e[X], e[Y]), {})[rest] = c
        else:
            out[e] = c
    result = Poly._make(s.vs, out)
    for (px, qy), coeff in sorted(groups.items()):
        result = result + Poly._make(s.vs, coeff) * s._xy_nf(px, qy)
    return RingElement(s, result)


def is_normal(p: Poly) -> bool:
    return not any(e[X] >= 2 and e[Y] >= 1 for e, _ in p.items())


def basis_exponents(vs: VarSet, d: int) -> list:
    """Exponents of the reduced monomials of degree <= d, ascending."""
    m = vs.n + 1
    out = []
    for total in range(d + 1):
        for ex in range(total + 1):
            for ey in range(total - ex + 1):
                if ex >= 2 and ey >= 1:
                    continue
                rest = total - ex - ey
                for zs in _compositions(rest, m):
                    out.append((ex, ey) + zs + (0,) * len(vs.extra))
    out.sort(key=vs.order_key)
    return out


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def basis_monomials(s: SurfaceSpec, d: int) -> list:
    if d < 0:
        raise ValueError("degree bound must be nonnegative")
    return [RingElement(s, Poly._make(s.vs, {e: 1})) for e in basis_exponents(s.vs, d)]


def chart_project(e, s: SurfaceSpec) -> LaurentPoly:
    """Image on the chart x != 0 (y replaced by ``(a + x*b)/x^2``)."""
    p = e.nf if isinstance(e, RingElement) else e
    if p.laurent:
        return p
    groups: dict = {}
    for ex, c in p.items():
        q = ex[Y]
        rest = ex[:Y] + (0,) + ex[Y + 1:]
        groups.setdefault(q, {})[rest] = c
    out = LaurentPoly.zero(s.vs)
    for q in sorted(groups):
        part = LaurentPoly._make(s.vs, groups[q])
        out = out + (part if q == 0 else part * s._chart_y_power(q))
    return out


def _z_key(vs: VarSet, e: tuple):
    # order on the z/extra part of a monomial, compatible with multiplication
    return (sum(e[2:vs.geo]),) + e[2:]


def chart_lift(L: LaurentPoly, s: SurfaceSpec, bound: Optional[int] = None) -> RingElement:
    """Inverse of :func:`chart_project`.

    Triangular solve: the chart image of ``x^i*y^j*Z`` has lowest x-power
    ``i - 2j`` and, within it, top z-monomial ``Z*LT(a)^j``.  These leading
    terms are distinct across reduced monomials, so peeling them off one at a
    time decides membership.  ``bound`` caps the degree of the monomials used.
    """
    vs = s.vs
    if L.vs != vs:
        raise ValueError("Laurent polynomial and surface use different variables")
    if s.a.is_zero():
        raise NotInRing("chart lift needs a != 0")
    lead_a = max((e for e, _ in s.a.items()), key=lambda e: _z_key(vs, e))
    lead_c = s.a.coefficient(lead_a)
    rem = L.to_laurent()
    out: dict = {}
    while not rem.is_zero():
        low = min(e[X] for e, _ in rem.items())
        tops = [e for e, _ in rem.items() if e[X] == low]
        m = max(tops, key=lambda e: _z_key(vs, e))
        c = rem.coefficient(m)
        if low >= 0:
            j, i = 0, low
        else:
            j = (-low + 1) // 2
            i = low + 2 * j
        zpart = list(m)
        zpart[X] = 0
        for k in range(2, vs.size):
            zpart[k] -= j * lead_a[k]
        if any(v < 0 for v in zpart):
            raise NotInRing(f"term {LaurentPoly._make(vs, {m: c})} is not reachable from a ring element")
        coef = div(c, lead_c ** j)
        e = list(zpart)
        e[X], e[Y] = i, j
        e = tuple(e)
        if bound is not None and sum(e[:vs.geo]) > bound:
            raise NotInRing(f"degree bound {bound} exceeded while lifting")
        out[e] = out.get(e, 0) + coef
        rem = rem - chart_project(Poly._make(vs, {e: coef}), s)
    return RingElement(s, Poly(vs, out))


def admissible_window(s: SurfaceSpec) -> Optional[int]:
    """Largest k with deg_{z_i} a <= 2 and deg_{z_i} b <= 1 for all i <= k."""
    k = None
    for i in range(s.n + 1):
        zi = s.vs.z(i)
        if s.a.degree_in(zi) <= 2 and s.b.degree_in(zi) <= 1:
            k = i
        else:
            break
    return k


def _univariate(p: Poly, var: int) -> list:
    return up.from_coeffs({e[var]: c for e, c in p.items()})


def smooth_n0(s: SurfaceSpec) -> Optional[bool]:
    """Smoothness for n = 0: singular points have x = 0 and a = a' = b = 0,
    so X is smooth iff gcd(a, a', b) is constant.  ``None`` if undecided."""
    if s.n != 0 or s.symbolic:
        return None
    z = s.vs.z(0)
    a, b = _univariate(s.a, z), _univariate(s.b, z)
    g = up.ugcd(up.ugcd(a, up.derivative(a)), b)
    return len(g) == 1


@dataclass(frozen=True)
class HypothesisReport:
    deg_z0_a: int
    deg_z0_b: int
    deg_z0_a_ok: bool
    deg_z0_b_ok: bool
    not_both_zero: bool
    k_window: Optional[int]
    smooth: Optional[bool]

    @property
    def all_ok(self) -> bool:
        return (self.deg_z0_a_ok and self.deg_z0_b_ok and self.not_both_zero
                and self.k_window is not None and self.smooth is not False)

    def to_dict(self) -> dict:
        return {
            "deg_z0_a": self.deg_z0_a, "deg_z0_b": self.deg_z0_b,
            "deg_z0_a_le_2": self.deg_z0_a_ok, "deg_z0_b_le_1": self.deg_z0_b_ok,
            "not_both_deg_zero": self.not_both_zero, "k_window": self.k_window,
            "smooth": self.smooth,
        }


def hypothesis_report(s: SurfaceSpec) -> HypothesisReport:
    z0 = s.vs.z(0)
    da = max(s.a.degree_in(z0), 0)
    db = max(s.b.degree_in(z0), 0)
    smooth = smooth_n0(s)
    return HypothesisReport(da, db, da <= 2, db <= 1, not (da == 0 and db == 0),
                            admissible_window(s), smooth)


def surface_points(s: SurfaceSpec, x_values=(1, 2), box=range(-2, 3)):
    """Rational points with the given x-coordinates and small integer z's."""
    for x0 in x_values:
        for q in product(box, repeat=s.n + 1):
            vals = {s.vs.z(i): q[i] for i in range(s.n + 1)}
            av = s.a.evaluate(vals)
            bv = s.b.evaluate(vals)
            y0 = div(av + x0 * bv, x0 * x0)
            yield (x0, y0) + tuple(q)
