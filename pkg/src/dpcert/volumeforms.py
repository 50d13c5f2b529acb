"""Differential forms on the chart x != 0 with coordinates x, z0, ..., zn.

A :class:`ChartForm` of degree d maps increasing index tuples to Laurent
coefficients; chart index 0 is ``dx`` and index ``1 + i`` is ``dz_i``.  The
volume form is ``omega = x^-2 dx^dz0^...^dzn``; the divergence of a field is
``d(i_nu omega) / omega``, lifted back to the coordinate ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .derivations import VectorField
from .exactpoly import X, LaurentPoly, Poly
from .exactpoly.scalar import as_scalar
from .hypersurface import RingElement, SurfaceSpec, chart_lift, chart_project


def _var(c: int) -> int:
    """VarSet index of chart coordinate ``c``."""
    return X if c == 0 else c + 1


class ChartForm:
    __slots__ = ("surface", "degree", "terms")

    def __init__(self, surface: SurfaceSpec, degree: int, terms: Optional[dict] = None):
        dim = surface.n + 2
        if not 0 <= degree <= dim + 1:
            raise ValueError(f"degree {degree} outside 0..{dim}")
        clean = {}
        for idx, c in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError("index tuple length differs from the degree")
            sign, idx = _sort_sign(idx)
            if sign == 0 or c.is_zero():
                continue
            c = c.to_laurent()
            prev = clean.get(idx)
            c = c.scale(sign) if prev is None else prev + c.scale(sign)
            if c.is_zero():
                clean.pop(idx, None)
            else:
                clean[idx] = c
        if degree > dim and clean:
            raise ValueError("no nonzero forms above the top degree")
        self.surface = surface
        self.degree = degree
        self.terms = clean

    @property
    def above_top(self) -> bool:
        return self.degree > self.surface.n + 2

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, idx) -> LaurentPoly:
        return self.terms.get(tuple(idx), LaurentPoly.zero(self.surface.vs))

    def _check(self, other: "ChartForm"):
        if other.surface != self.surface or other.degree != self.degree:
            raise ValueError("forms differ in surface or degree")

    def __add__(self, other: "ChartForm"):
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return ChartForm(self.surface, self.degree, terms)

    def __neg__(self):
        return ChartForm(self.surface, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "ChartForm"):
        return self + (-other)

    def scale(self, f) -> "ChartForm":
        if isinstance(f, (RingElement, Poly)):
            f = chart_project(f, self.surface)
        if not isinstance(f, LaurentPoly):
            f = LaurentPoly.const(self.surface.vs, as_scalar(f))
        return ChartForm(self.surface, self.degree, {k: c * f for k, c in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, ChartForm):
            return NotImplemented
        return (self.surface == other.surface and self.degree == other.degree
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __str__(self):
        if not self.terms:
            return "0"
        names = ["dx"] + [f"dz{i}" for i in range(self.surface.n + 1)]
        parts = []
        for idx in sorted(self.terms):
            basis = "∧".join(names[c] for c in idx) or "1"
            parts.append(f"({self.terms[idx]}) · {basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ChartForm[{self.degree}]({self})"


def _sort_sign(idx: tuple):
    """Sign of the sorting permutation, 0 on a repeated index."""
    if len(set(idx)) != len(idx):
        return 0, idx
    sign = 1
    arr = list(idx)
    for i in range(len(arr)):
        for j in range(len(arr) - 1 - i):
            if arr[j] > arr[j + 1]:
                arr[j], arr[j + 1] = arr[j + 1], arr[j]
                sign = -sign
    return sign, tuple(arr)


@dataclass(frozen=True)
class ChartField:
    surface: SurfaceSpec
    coeffs: tuple  # LaurentPoly per chart coordinate (x, z0, ..., zn)

    @classmethod
    def of(cls, nu: VectorField) -> "ChartField":
        s = nu.surface
        idx = [X] + list(s.vs.z_indices)
        return cls(s, tuple(chart_project(nu.coeffs[k], s) for k in idx))


def _chart(nu) -> ChartField:
    return nu if isinstance(nu, ChartField) else ChartField.of(nu)


def zero_form(s: SurfaceSpec, f) -> ChartForm:
    if isinstance(f, RingElement) or not getattr(f, "laurent", False):
        f = chart_project(f, s)
    return ChartForm(s, 0, {(): f})


def omega(s: SurfaceSpec) -> ChartForm:
    return ChartForm(s, s.n + 2, {tuple(range(s.n + 2)): LaurentPoly.x_power(s.vs, -2)})


def interior(nu, phi: ChartForm) -> ChartForm:
    """Contraction in the first slot: ``i_nu(f dI) = sum_p (-1)^p nu_{I_p} f dI\\I_p``."""
    if phi.degree < 1:
        raise ValueError("cannot contract a 0-form")
    cf = _chart(nu)
    terms: dict = {}
    for idx, f in phi.terms.items():
        for p, c in enumerate(idx):
            g = cf.coeffs[c]
            if g.is_zero():
                continue
            rest = idx[:p] + idx[p + 1:]
            piece = (g * f).scale(-1 if p % 2 else 1)
            terms[rest] = terms[rest] + piece if rest in terms else piece
    return ChartForm(phi.surface, phi.degree - 1, terms)


def ext_d(phi: ChartForm) -> ChartForm:
    """Exterior derivative; a top-degree input yields the empty form of one
    degree higher (``above_top`` is set)."""
    s = phi.surface
    dim = s.n + 2
    if phi.degree >= dim:
        return ChartForm(s, phi.degree + 1, {})
    terms: dict = {}
    for idx, f in phi.terms.items():
        for c in range(dim):
            if c in idx:
                continue
            g = f.partial(_var(c))
            if g.is_zero():
                continue
            key = (c,) + idx
            sign, key = _sort_sign(key)
            g = g.scale(sign)
            terms[key] = terms[key] + g if key in terms else g
    return ChartForm(s, phi.degree + 1, terms)


def wedge(phi: ChartForm, psi: ChartForm) -> ChartForm:
    if phi.surface != psi.surface:
        raise ValueError("forms live on different surfaces")
    terms: dict = {}
    for i1, f1 in phi.terms.items():
        for i2, f2 in psi.terms.items():
            sign, key = _sort_sign(i1 + i2)
            if sign == 0:
                continue
            g = (f1 * f2).scale(sign)
            terms[key] = terms[key] + g if key in terms else g
    return ChartForm(phi.surface, phi.degree + psi.degree, terms)


def d_function(f, s: SurfaceSpec) -> ChartForm:
    """``df`` for a ring element (computed on the chart)."""
    return ext_d(zero_form(s, f))


def default_divergence_bound(nu: VectorField) -> int:
    s = nu.surface
    return max(nu.degree(), 0) + max(s.a.degree(), 0) + max(s.b.degree(), 0) + 4


def divergence_on_chart(nu) -> LaurentPoly:
    cf = _chart(nu)
    s = cf.surface
    top = ext_d(interior(cf, omega(s)))
    top_idx = tuple(range(s.n + 2))
    return top.coefficient(top_idx).shift_x(2)


def divergence(nu: VectorField, bound: Optional[int] = None) -> RingElement:
    """The function ``div`` with ``d i_nu omega = div * omega``."""
    if bound is None:
        bound = default_divergence_bound(nu)
    return chart_lift(divergence_on_chart(nu), nu.surface, bound)


@dataclass(frozen=True)
class ThetaResult:
    form: ChartForm
    closed: bool


def theta(nu: VectorField) -> ThetaResult:
    """``i_nu omega`` together with whether it is closed (nu preserves omega)."""
    form = interior(nu, omega(nu.surface))
    return ThetaResult(form, ext_d(form).is_zero())


def psi(nu: VectorField, mu: VectorField) -> ChartForm:
    """``i_nu i_mu omega``."""
    return interior(nu, interior(mu, omega(nu.surface)))
