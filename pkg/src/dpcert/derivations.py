"""Vector fields on X as derivations of the coordinate ring.

A :class:`VectorField` stores one normal-form coefficient per ambient
variable ``x, y, z0, ..., zn``.  Tangency to X (the field maps the defining
polynomial into the ideal) is checked on construction, so applying a field
to any representative of a ring element gives a well defined result.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .exactpoly import X, Y, Poly
from .exactpoly.scalar import as_scalar
from .hypersurface import RingElement, SurfaceSpec, normal_form


class SurfaceMismatch(ValueError):
    pass


class NotTangent(ValueError):
    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"field is not tangent to X: residual {residual}")


class WindowError(ValueError):
    pass


class NoCertificate(Exception):
    """Neither completeness pattern applies; the field may still be complete."""


def _nf(p: Poly, s: SurfaceSpec) -> Poly:
    return normal_form(p, s).nf


class VectorField:
    __slots__ = ("surface", "coeffs", "label")

    def __init__(self, surface: SurfaceSpec, coeffs, label=None, check: bool = True):
        coeffs = tuple(c.nf if isinstance(c, RingElement) else c for c in coeffs)
        if len(coeffs) != surface.n + 3:
            raise ValueError(f"expected {surface.n + 3} coefficients")
        self.surface = surface
        self.coeffs = tuple(_nf(c, surface) for c in coeffs)
        self.label = label
        if check:
            r = tangency_residual(self)
            if not r.is_zero():
                raise NotTangent(r)

    @classmethod
    def _trusted(cls, surface, coeffs, label=None):
        obj = object.__new__(cls)
        obj.surface = surface
        obj.coeffs = tuple(coeffs)
        obj.label = label
        return obj

    # coefficient views
    @property
    def c_x(self) -> RingElement:
        return RingElement(self.surface, self.coeffs[X])

    @property
    def c_y(self) -> RingElement:
        return RingElement(self.surface, self.coeffs[Y])

    @property
    def c_z(self) -> list:
        return [RingElement(self.surface, c) for c in self.coeffs[2:]]

    def __call__(self, f):
        return apply(self, f)

    def _same(self, other: "VectorField"):
        if other.surface != self.surface:
            raise SurfaceMismatch("vector fields live on different surfaces")

    def __add__(self, other: "VectorField"):
        self._same(other)
        return VectorField._trusted(self.surface, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "VectorField"):
        self._same(other)
        return VectorField._trusted(self.surface, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return VectorField._trusted(self.surface, [-c for c in self.coeffs], self.label)

    def __mul__(self, f):
        return scale(self, f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.surface == other.surface and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def degree(self) -> int:
        return max(c.degree() for c in self.coeffs)

    def at(self, point) -> tuple:
        """Ambient tangent vector at ``point`` (a tuple ``(x, y, z0, ...)``,
        or a mapping from variable names/indices to values)."""
        values = _point_map(self.surface, point)
        return tuple(c.evaluate(values) for c in self.coeffs)

    def __str__(self):
        names = self.surface.vs.names
        parts = [f"({c})∂{names[k]}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"VectorField({self})"


def _point_map(s: SurfaceSpec, point) -> dict:
    if isinstance(point, dict):
        return point
    return {k: as_scalar(v) for k, v in enumerate(point)}


def _apply_poly(nu: VectorField, p: Poly) -> Poly:
    out = Poly.zero(nu.surface.vs)
    for k, c in enumerate(nu.coeffs):
        if c.is_zero():
            continue
        d = p.partial(k)
        if not d.is_zero():
            out = out + c * d
    return out


def tangency_residual(nu: VectorField) -> RingElement:
    return normal_form(_apply_poly(nu, nu.surface.relation()), nu.surface)


def is_tangent(nu: VectorField) -> bool:
    return tangency_residual(nu).is_zero()


def apply(nu: VectorField, f) -> RingElement:
    """``nu(f)`` in normal form; ``f`` may be a RingElement or any ambient
    representative."""
    s = nu.surface
    if isinstance(f, RingElement):
        if f.surface != s:
            raise SurfaceMismatch("function and field live on different surfaces")
        p = f.nf
    elif isinstance(f, Poly):
        if f.vs != s.vs:
            raise SurfaceMismatch("function and field use different variables")
        p = f
    else:
        return RingElement(s, Poly.zero(s.vs))
    return normal_form(_apply_poly(nu, p), s)


def bracket(nu: VectorField, mu: VectorField) -> VectorField:
    """Lie bracket, componentwise ``nu(c_u^mu) - mu(c_u^nu)``."""
    nu._same(mu)
    s = nu.surface
    coeffs = [(apply(nu, cm) - apply(mu, cn)).nf for cn, cm in zip(nu.coeffs, mu.coeffs)]
    return VectorField._trusted(s, coeffs)


def scale(nu: VectorField, f) -> VectorField:
    """The field ``f * nu`` for a ring element, polynomial or scalar ``f``."""
    s = nu.surface
    if isinstance(f, RingElement):
        f = f.nf
    if isinstance(f, Poly):
        coeffs = [_nf(f * c, s) for c in nu.coeffs]
    else:
        c0 = as_scalar(f)
        coeffs = [c.scale(c0) for c in nu.coeffs]
    return VectorField._trusted(s, coeffs)


def kernel_member(nu: VectorField, f) -> bool:
    return apply(nu, f).is_zero()


# -- the catalogue ------------------------------------------------------------


def _zeros(s: SurfaceSpec) -> list:
    return [Poly.zero(s.vs)] * (s.n + 3)


def build_vx(s: SurfaceSpec, i: int = 0) -> VectorField:
    """``(da/dz_i + x*db/dz_i) d/dy + x^2 d/dz_i``."""
    if not 0 <= i <= s.n:
        raise IndexError(f"index {i} outside 0..{s.n}")
    zi = s.vs.z(i)
    x = s.x
    c = _zeros(s)
    c[Y] = s.a.partial(zi) + x * s.b.partial(zi)
    c[zi] = x * x
    return VectorField(s, c, ("vx", i))


def build_vy(s: SurfaceSpec, j: int = 0) -> VectorField:
    """``(da/dz_j + x*db/dz_j) d/dx + (2*x*y - b) d/dz_j``; needs j in the
    degree window."""
    if not 0 <= j <= s.n:
        raise IndexError(f"index {j} outside 0..{s.n}")
    if s.k_window is None or j > s.k_window:
        zj = s.vs.names[s.vs.z(j)]
        raise WindowError(
            f"v_y^{j} needs deg_{zj}(a) <= 2 and deg_{zj}(b) <= 1 for all indices up to {j}; "
            f"degree window is {s.k_window}")
    zj = s.vs.z(j)
    x, y = s.x, s.y
    c = _zeros(s)
    c[X] = s.a.partial(zj) + x * s.b.partial(zj)
    c[zj] = 2 * x * y - s.b
    return VectorField(s, c, ("vy", j))


def build_vz(s: SurfaceSpec) -> VectorField:
    """``a*x d/dx - (2*a*y - x*y*b + b^2) d/dy``; it maps the defining
    polynomial P to ``b*x*P``."""
    x, y = s.x, s.y
    c = _zeros(s)
    c[X] = s.a * x
    c[Y] = -(2 * s.a * y - x * y * s.b + s.b * s.b)
    return VectorField(s, c, ("vz", None))


def printed_vz(s: SurfaceSpec) -> VectorField:
    """The variant with ``z0^2*x d/dx`` in place of ``a*x d/dx``.

    It agrees with :func:`build_vz` only when a = z0^2 and is not tangent
    otherwise (on ``x^2*y = z^2 - beta + alpha*x`` the residual is
    ``beta*(2*z^2 - 2*beta + alpha*x)`` times a unit); tangency is not
    checked so that the tangency suite can reject it.
    """
    x, y = s.x, s.y
    z0 = s.z(0)
    c = _zeros(s)
    c[X] = z0 * z0 * x
    c[Y] = -(2 * s.a * y - x * y * s.b + s.b * s.b)
    return VectorField(s, c, ("vz-printed", None), check=False)


# -- completeness certificates ------------------------------------------------


@dataclass
class CompletenessCertificate:
    kind: str
    field: VectorField
    bounds: dict = field(default_factory=dict)
    blocks: list = field(default_factory=list)
    decompositions: dict = field(default_factory=dict)

    def replay(self) -> bool:
        nu = self.field
        s = nu.surface
        if self.kind == "LND":
            for u, r in self.bounds.items():
                f = RingElement(s, Poly.var(s.vs, u))
                for _ in range(r):
                    f = apply(nu, f)
                if not f.is_zero():
                    return False
            return len(self.bounds) == s.n + 3
        placed: set = set()
        for block in self.blocks:
            for u in block:
                coeffs, const = self.decompositions[u]
                total = const
                for w, c in coeffs.items():
                    if c.variables() - placed - _extras(s):
                        return False
                    total = total + c * Poly.var(s.vs, w)
                if const.variables() - placed - _extras(s):
                    return False
                if set(coeffs) - set(block):
                    return False
                if _nf(total, s) != nu.coeffs[u]:
                    return False
            placed |= set(block)
        return placed == set(range(s.n + 3))

    def to_dict(self) -> dict:
        names = self.field.surface.vs.names
        out = {"kind": self.kind, "field": str(self.field)}
        if self.kind == "LND":
            out["nilpotency"] = {names[u]: r for u, r in sorted(self.bounds.items())}
        else:
            out["blocks"] = [[names[u] for u in b] for b in self.blocks]
            out["decompositions"] = {
                names[u]: {"linear": {names[w]: str(c) for w, c in sorted(co.items())},
                           "constant": str(d)}
                for u, (co, d) in sorted(self.decompositions.items())}
        return out


def _extras(s: SurfaceSpec) -> set:
    return set(range(s.vs.geo, s.vs.size))


def _affine(p: Poly, block: set, placed: set, extras: set):
    """Split ``p`` as sum c_w*w + d with w in ``block`` and c_w, d involving
    only ``placed`` variables; ``None`` if impossible."""
    allowed = placed | extras
    lin: dict = {}
    const: dict = {}
    for e, c in p.items():
        hits = [k for k in block if e[k]]
        if len(hits) > 1 or (hits and e[hits[0]] > 1):
            return None
        others = {k for k, v in enumerate(e) if v and k not in block}
        if others - allowed:
            return None
        if hits:
            w = hits[0]
            e2 = e[:w] + (0,) + e[w + 1:]
            lin.setdefault(w, {})[e2] = c
        else:
            const[e] = c
    vs = p.vs
    return ({w: Poly._make(vs, t) for w, t in lin.items()}, Poly._make(vs, const))


def lnd_default_bound(s: SurfaceSpec) -> int:
    return 2 * (max(s.a.degree(), 0) + max(s.b.degree(), 0) + 3)


def certify_complete(nu: VectorField, multiplier=None,
                     lnd_bound: Optional[int] = None) -> CompletenessCertificate:
    """Certify completeness of ``nu`` (or of ``multiplier * nu``) by local
    nilpotency or by a triangular block-affine structure of the flow equations.

    Raises :class:`NoCertificate` when neither pattern applies.
    """
    s = nu.surface
    if multiplier is not None:
        if not kernel_member(nu, multiplier):
            raise ValueError("multiplier is not in the kernel of the field")
        nu = scale(nu, multiplier)
    if lnd_bound is None:
        lnd_bound = lnd_default_bound(s)
    gens = list(range(s.n + 3))

    bounds = {}
    for u in gens:
        f = RingElement(s, Poly.var(s.vs, u))
        for r in range(lnd_bound + 1):
            if f.is_zero():
                bounds[u] = r
                break
            f = apply(nu, f)
        else:
            break
    if len(bounds) == len(gens):
        return CompletenessCertificate("LND", nu, bounds=bounds)

    extras = _extras(s)
    placed: set = set()
    remaining = set(gens)
    blocks = []
    decomps = {}
    first = {u for u in gens if nu.coeffs[u].is_zero()}
    if first:
        blocks.append(sorted(first))
        for u in first:
            decomps[u] = ({}, Poly.zero(s.vs))
        placed |= first
        remaining -= first
    while remaining:
        cand = set(remaining)
        while cand:
            failing = {u for u in cand if _affine(nu.coeffs[u], cand, placed, extras) is None}
            if not failing:
                break
            cand -= failing
        if not cand:
            names = s.vs.names
            raise NoCertificate(
                "no affine block among " + ", ".join(names[u] for u in sorted(remaining)))
        for u in cand:
            decomps[u] = _affine(nu.coeffs[u], cand, placed, extras)
        blocks.append(sorted(cand))
        placed |= cand
        remaining -= cand
    return CompletenessCertificate("block-affine", nu, blocks=blocks, decompositions=decomps)
