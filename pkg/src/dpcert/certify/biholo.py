"""The holomorphic map from ``x^2*y = z^2 - 1`` to ``x^2*y = z^2 - 1 + alpha*x``.

    (x, y, z) -> (x, E*y + (E + alpha*x - 1)/x^2, F*z)

with ``E = exp(-alpha*x)`` and ``F = exp(-alpha*x/2)``.  The exponentials are
treated as formal units subject only to ``F^2 = E``; the check is that the
target relation pulls back to ``E`` times the source relation.  Coordinates
are handled as pairs (numerator, power of x in the denominator).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..exactpoly import X, Poly, VarSet
from ..exactpoly.scalar import as_scalar, format_scalar


@dataclass
class BiholoResult:
    alpha: object
    holds: bool
    pulled_back: str
    residual: str

    def to_dict(self) -> dict:
        return {"alpha": format_scalar(self.alpha), "holds": self.holds,
                "pulled_back": self.pulled_back, "residual": self.residual}


VS = VarSet(0, ("E", "F"))


class _Frac:
    """``num * x^-k``."""

    def __init__(self, num: Poly, k: int = 0):
        self.num, self.k = num, k

    def _lift(self, k: int) -> Poly:
        return self.num * Poly.var(VS, X) ** (k - self.k)

    def __add__(self, other: "_Frac"):
        k = max(self.k, other.k)
        return _Frac(self._lift(k) + other._lift(k), k)

    def __sub__(self, other: "_Frac"):
        k = max(self.k, other.k)
        return _Frac(self._lift(k) - other._lift(k), k)

    def __mul__(self, other: "_Frac"):
        return _Frac(self.num * other.num, self.k + other.k)

    def simplify(self) -> "_Frac":
        num, k = self.num, self.k
        while k and not num.is_zero() and num.min_degree_in(X) > 0:
            num = Poly._make(VS, {(e[0] - 1,) + e[1:]: c for e, c in num.items()})
            k -= 1
        if num.is_zero():
            k = 0
        return _Frac(num, k)


def _reduce_units(p: Poly) -> Poly:
    """Rewrite ``F^2 -> E``."""
    fi, ei = VS.index("F"), VS.index("E")
    out = Poly.zero(VS)
    for e, c in p.items():
        q, r = divmod(e[fi], 2)
        e2 = list(e)
        e2[fi] = r
        e2[ei] += q
        out = out + Poly(VS, {tuple(e2): c})
    return out


def _reduce_source(p: Poly) -> Poly:
    """Rewrite ``x^2*y -> z^2 - 1`` (the source surface)."""
    from ..hypersurface import SurfaceSpec, normal_form

    z = Poly.var(VS, "z0")
    src = SurfaceSpec(0, z * z - 1, Poly.zero(VS))
    return normal_form(p, src).nf


def biholomorphism_check(alpha, perturbed: bool = False) -> BiholoResult:
    alpha = as_scalar(alpha)
    x, y, z = Poly.var(VS, "x"), Poly.var(VS, "y"), Poly.var(VS, "z0")
    E, F = Poly.var(VS, "E"), Poly.var(VS, "F")
    one = Poly.const(VS, 1)
    if alpha == 0:
        E = F = one  # exp(0) = 1
    X_ = _Frac(x)
    Y_ = _Frac(E * y)
    if not perturbed:
        Y_ = Y_ + _Frac(E + x.scale(alpha) - one, 2)
    Z_ = _Frac(F * z)
    target = X_ * X_ * Y_ - Z_ * Z_ + _Frac(one) - _Frac(x.scale(alpha))
    pulled = target.simplify()
    if pulled.k:
        return BiholoResult(alpha, False, str(pulled.num), "denominator x^%d remains" % pulled.k)
    num = _reduce_units(pulled.num)
    expected = E * (x * x * y - z * z + one)
    residual = _reduce_source(num)
    holds = num == expected and residual.is_zero()
    return BiholoResult(alpha, holds, str(num), str(residual))
