"""Dense cross-check of the closure engines, written independently with sympy.

Everything here is recomputed from scratch: the fields come from their
coordinate formulas, normal forms from sympy's polynomial division, and
divergences from the identity ``div nu = (ambient divergence) - lambda``
where ``nu(P) = lambda*P`` for the defining polynomial P.  The span is kept
as a dense matrix over an explicit monomial basis and closed under the same
degree-truncated operators until its rank stops growing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import sympy as sp

x, y, z = sp.symbols("x y z")
GENS = (y, x, z)  # grlex with y > x > z


@dataclass
class OracleSpan:
    monomials: list  # exponent tuples (ex, ey, ez), constants excluded
    matrix: sp.Matrix  # rows span the closure, in rref
    rounds: int

    @property
    def rank(self) -> int:
        return self.matrix.rows

    def contains(self, vec) -> bool:
        if self.rank == 0:
            return all(v == 0 for v in vec)
        m = self.matrix.col_join(sp.Matrix([list(vec)]))
        return m.rank() == self.rank


def _monomials(cap: int) -> list:
    out = []
    for ex, ey, ez in product(range(cap + 1), repeat=3):
        d = ex + ey + ez
        if 0 < d <= cap and not (ex >= 2 and ey >= 1):
            out.append((ex, ey, ez))
    # descending grlex with y > x > z, so rref pivots are leading monomials
    out.sort(key=lambda e: (sum(e), e[1], e[0], e[2]), reverse=True)
    return out


class _Surface:
    def __init__(self, alpha, beta):
        self.alpha = sp.sympify(alpha)
        self.beta = sp.sympify(beta)
        self.P = sp.expand(x**2 * y - z**2 + self.beta - self.alpha * x)
        # coordinate formulas of the two fields, as (d/dx, d/dy, d/dz)
        self.vx = (sp.Integer(0), 2 * z, x**2)
        self.vy = (2 * z, sp.Integer(0), 2 * x * y - self.alpha)
        self.vz = (sp.expand((z**2 - self.beta) * x),
                   -sp.expand(2 * (z**2 - self.beta) * y - self.alpha * x * y + self.alpha**2),
                   sp.Integer(0))

    def nf(self, f):
        _, r = sp.reduced(sp.expand(f), [self.P], *GENS, order="grlex")
        return sp.expand(r)

    @staticmethod
    def apply(field, f):
        return sp.expand(field[0] * sp.diff(f, x) + field[1] * sp.diff(f, y)
                         + field[2] * sp.diff(f, z))

    def divergence(self, field):
        amb = sp.diff(field[0], x) + sp.diff(field[1], y) + sp.diff(field[2], z)
        lam, rem = sp.div(sp.Poly(self.apply(field, self.P), *GENS),
                          sp.Poly(self.P, *GENS))
        if not rem.is_zero:
            raise ValueError("field is not tangent")
        return self.nf(amb - lam.as_expr())


def _vector(f, mons) -> list:
    poly = sp.Poly(f, x, y, z)
    index = {m: i for i, m in enumerate(mons)}
    v = [sp.Integer(0)] * len(mons)
    for (ex, ey, ez), c in poly.terms():
        if ex + ey + ez == 0:
            continue
        if (ex, ey, ez) not in index:
            raise ValueError(f"monomial x^{ex} y^{ey} z^{ez} outside the basis")
        v[index[(ex, ey, ez)]] = c
    return v


def _expr(vec, mons):
    return sum((c * x**e[0] * y**e[1] * z**e[2] for c, e in zip(vec, mons) if c != 0),
               sp.Integer(0))


def vdp_seed_exprs(cap: int, k_max: int, surf=None) -> list:
    return [x**m for m in range(1, cap + 1)] + [y**m for m in range(1, cap + 1)]


def dp_seed_exprs(cap: int, k_max: int, surf: "_Surface") -> list:
    out = []
    for k in range(k_max + 1):
        out.append(surf.divergence(tuple(sp.expand(z * x**k * c) for c in surf.vx)))
        out.append(surf.divergence(tuple(sp.expand(z**k * c) for c in surf.vz)))
    return out


def oracle_bfs(alpha, beta, cap: int, k_max: int, max_rounds: int = 64,
               engine: str = "vdp", seeds=None) -> OracleSpan:
    """Close the seed span under ``x^k v_x`` and ``y^k v_y`` (k <= k_max),
    applying an operator raising degree by k+1 only to elements of degree
    <= cap - k - 1.  ``seeds`` overrides the engine's default seed list."""
    surf = _Surface(alpha, beta)
    mons = _monomials(cap)
    if seeds is None:
        make = vdp_seed_exprs if engine == "vdp" else dp_seed_exprs
        seeds = make(cap, k_max, surf)
    rows = []
    for f in seeds:
        f = sp.expand(f)
        if f != 0 and sp.Poly(f, x, y, z).total_degree() <= cap:
            rows.append(_vector(surf.nf(f), mons))
    if not rows:
        return OracleSpan(mons, sp.zeros(0, len(mons)), 0)
    span = _rref(rows, len(mons))
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        images = []
        for r in range(span.rows):
            vec = list(span.row(r))
            lead = next(i for i, c in enumerate(vec) if c != 0)
            deg = sum(mons[lead])
            f = _expr(vec, mons)
            for k in range(k_max + 1):
                if deg > cap - (k + 1):
                    continue
                images.append(surf.nf(x**k * surf.apply(surf.vx, f)))
                images.append(surf.nf(y**k * surf.apply(surf.vy, f)))
        new = [list(span.row(r)) for r in range(span.rows)]
        new += [_vector(g, mons) for g in images if g != 0]
        grown = _rref(new, len(mons))
        if grown.rows == span.rows:
            break
        span = grown
    return OracleSpan(mons, span, rounds)


def _rref(rows, ncols) -> sp.Matrix:
    m, pivots = sp.Matrix(rows).rref()
    return m[:len(pivots), :] if pivots else sp.zeros(0, ncols)


def dp_target_exprs(alpha, beta, d: int) -> list:
    """``div(f*v_y)`` for all monomials f of degree <= d free of x^2*y."""
    surf = _Surface(alpha, beta)
    out = []
    for ex, ey, ez in product(range(d + 1), repeat=3):
        if ex + ey + ez <= d and not (ex >= 2 and ey >= 1):
            f = x**ex * y**ey * z**ez
            out.append(surf.divergence(tuple(sp.expand(f * c) for c in surf.vy)))
    return out


def vector_of(f, span: OracleSpan) -> list:
    return _vector(sp.expand(f), span.monomials)


def from_poly(p) -> sp.Expr:
    """Convert an exact package polynomial (n = 0) into a sympy expression."""
    from ..exactpoly.scalar import Gaussian

    total = sp.Integer(0)
    for e, c in p.items():
        if isinstance(c, Gaussian):
            c = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(
                c.im.numerator, c.im.denominator)
        else:
            c = sp.Rational(c)
        total += c * x**e[0] * y**e[1] * z**e[2]
    return total


def same_span(engine_rows: list, span: OracleSpan) -> bool:
    """Whether the engine rows (package polynomials) span the oracle span."""
    vecs = [_vector(from_poly(p), span.monomials) for p in engine_rows]
    if not vecs:
        return span.rank == 0
    mine = sp.Matrix(vecs).rank()
    if span.rank == 0:
        return mine == 0
    both = sp.Matrix(vecs).col_join(span.matrix).rank()
    return mine == span.rank == both
