"""Generating sets in T_pX and in T_pX ^ T_pX at rational points.

For a complete field nu and ``f`` in ker nu with ``f(p) = 0``, the time-one
flow of ``f*nu`` fixes p and acts on T_pX by ``v -> v + v(f)*nu[p]``.  The
checks close the candidate vectors (or wedges) under a finite list of such
moves and compare the span with the full space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Optional

from ..derivations import VectorField, apply, build_vx
from ..exactpoly import Poly
from ..exactpoly.scalar import as_scalar, format_scalar
from ..hypersurface import SurfaceSpec
from .linalg import kernel, rank
from .report import FAILS, SUCCESS, UNDECIDED, Verdict


class MoveError(ValueError):
    pass


@dataclass
class GeneratingReport:
    point: tuple
    target_dim: int
    reached_dim: int
    moves_used: int
    orbit_size: int
    verdict: Verdict
    vectors: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "point": [format_scalar(c) for c in self.point],
            "target_dim": self.target_dim, "reached_dim": self.reached_dim,
            "moves_used": self.moves_used, "orbit_size": self.orbit_size,
            "verdict": self.verdict.to_dict(),
        }


def _values(s: SurfaceSpec, p) -> dict:
    return {k: as_scalar(v) for k, v in enumerate(p)}


def on_surface(s: SurfaceSpec, p) -> bool:
    return s.relation().evaluate(_values(s, p)) == 0


def tangent_space(s: SurfaceSpec, p) -> list:
    """Basis of ker dP(p) in the ambient coordinates."""
    vals = _values(s, p)
    P = s.relation()
    grad = [P.partial(k).evaluate(vals) for k in range(s.n + 3)]
    if all(g == 0 for g in grad):
        raise ValueError("X is singular at p")
    return kernel([grad], s.n + 3)


def _dot(u, v):
    total = 0
    for a, b in zip(u, v):
        total = total + a * b
    return total


class _Move:
    def __init__(self, nu: VectorField, f: Poly, p):
        s = nu.surface
        vals = _values(s, p)
        if not apply(nu, f).is_zero():
            raise MoveError(f"{f} is not in the kernel of the move field")
        if f.evaluate(vals) != 0:
            raise MoveError(f"{f} does not vanish at p")
        self.grad = [f.partial(k).evaluate(vals) for k in range(s.n + 3)]
        self.vec = nu.at(p)
        self.label = (nu.label, str(f))

    def __call__(self, v):
        t = _dot(self.grad, v)
        if t == 0:
            return None
        return tuple(a + t * b for a, b in zip(v, self.vec))


def default_moves(s: SurfaceSpec, p) -> list:
    """``(v_x^i, x - x0)`` for all i and ``(v_x^i, z_n - q_n)`` for i < n."""
    x0 = as_scalar(p[0])
    if x0 == 0:
        raise MoveError("the default moves need x0 != 0")
    out = []
    for i in range(s.n + 1):
        out.append((build_vx(s, i), s.x - x0))
    qn = as_scalar(p[2 + s.n])
    for i in range(s.n):
        out.append((build_vx(s, i), s.z(s.n) - qn))
    return out


def _closure(start: list, moves: list, measure, target_dim: int, max_orbit: int):
    orbit = list(dict.fromkeys(start))
    seen = set(orbit)
    used = 0
    queue = list(orbit)
    dim = measure(orbit)
    while queue and dim < target_dim and len(orbit) < max_orbit:
        v = queue.pop(0)
        for mv in moves:
            w = mv(v)
            if w is None or w in seen:
                continue
            seen.add(w)
            orbit.append(w)
            queue.append(w)
            used += 1
            dim = measure(orbit)
            if dim >= target_dim:
                break
    return orbit, dim, used


def _prepare(s: SurfaceSpec, p, moves):
    p = tuple(as_scalar(c) for c in p)
    if len(p) != s.n + 3:
        raise ValueError(f"point needs {s.n + 3} coordinates")
    if not on_surface(s, p):
        raise ValueError("p is not on X")
    if moves is None:
        try:
            moves = default_moves(s, p)
        except MoveError:
            return p, None
    built = [_Move(nu, f, p) for nu, f in moves]
    return p, built


def generating_set_check(s: SurfaceSpec, p, candidates: list, moves=None,
                         max_orbit: int = 64) -> GeneratingReport:
    """Whether the orbit of the candidate vectors spans T_pX."""
    p, built = _prepare(s, p, moves)
    basis = tangent_space(s, p)
    dim = len(basis)
    start = [c.at(p) for c in candidates]
    for v in start:
        if any(_dot(v, g) != 0 for g in _normals(s, p)):
            raise ValueError("candidate is not tangent at p")
    measure = lambda vs: rank(vs) if vs else 0
    if built is None:
        reached = measure(start)
        if reached == dim:
            return GeneratingReport(p, dim, reached, 0, len(start),
                                    Verdict(SUCCESS, "candidates span T_pX"), start)
        return GeneratingReport(p, dim, reached, 0, len(start),
                                Verdict(UNDECIDED, "x0 = 0: the default moves degenerate"), start)
    orbit, reached, used = _closure(start, built, measure, dim, max_orbit)
    if reached == dim:
        verdict = Verdict(SUCCESS, f"orbit spans T_pX (dimension {dim})")
    else:
        verdict = Verdict(UNDECIDED, f"orbit spans only dimension {reached} of {dim}")
    return GeneratingReport(p, dim, reached, used, len(orbit), verdict, orbit)


def _normals(s: SurfaceSpec, p) -> list:
    vals = _values(s, p)
    P = s.relation()
    return [[P.partial(k).evaluate(vals) for k in range(s.n + 3)]]


def plucker(v, w) -> tuple:
    m = len(v)
    return tuple(v[i] * w[j] - v[j] * w[i] for i, j in combinations(range(m), 2))


def wedge_generating_check(s: SurfaceSpec, p, pairs: list, moves=None,
                           max_orbit: int = 256) -> GeneratingReport:
    """Whether the orbit of ``nu[p] ^ mu[p]`` spans T_pX ^ T_pX, moves acting
    on both factors."""
    p, built = _prepare(s, p, moves)
    dim = comb(s.n + 2, 2)
    start = [(nu.at(p), mu.at(p)) for nu, mu in pairs]
    if all(all(c == 0 for c in plucker(v, w)) for v, w in start):
        return GeneratingReport(p, dim, 0, 0, len(start), Verdict(FAILS, "zero wedge"))

    def measure(items):
        return rank([plucker(v, w) for v, w in items]) if items else 0

    if built is None:
        reached = measure(start)
        verdict = (Verdict(SUCCESS, "candidates span the wedge space") if reached == dim
                   else Verdict(UNDECIDED, "x0 = 0: the default moves degenerate"))
        return GeneratingReport(p, dim, reached, 0, len(start), verdict)

    moves_pair = [_pair_move(mv) for mv in built]
    orbit, reached, used = _closure(start, moves_pair, measure, dim, max_orbit)
    if reached == dim:
        verdict = Verdict(SUCCESS, f"orbit spans the wedge space (dimension {dim})")
    else:
        verdict = Verdict(UNDECIDED, f"orbit spans only dimension {reached} of {dim}")
    return GeneratingReport(p, dim, reached, used, len(orbit), verdict)


def _pair_move(mv: _Move):
    def act(pair):
        v, w = pair
        v2 = mv(v) or v
        w2 = mv(w) or w
        if v2 == v and w2 == w:
            return None
        return (v2, w2)
    return act


def witness_points(s: SurfaceSpec):
    """Rational points ``(x0, y0, q)`` with x0 in {1, 2}, q in {-2..2}^(n+1)
    and ``da/dz0(q) + x0*db/dz0(q) != 0``."""
    from ..hypersurface import surface_points

    z0 = s.vs.z(0)
    da, db = s.a.partial(z0), s.b.partial(z0)
    for pt in surface_points(s):
        vals = _values(s, pt)
        if da.evaluate(vals) + pt[0] * db.evaluate(vals) != 0:
            yield pt


def find_witness(s: SurfaceSpec, check) -> Optional[tuple]:
    """First witness point where ``check(point)`` reports SUCCESS."""
    for pt in witness_points(s):
        rep = check(pt)
        if rep.verdict.status == SUCCESS:
            return pt, rep
    return None


__all__ = ["generating_set_check", "wedge_generating_check", "tangent_space", "plucker",
           "default_moves", "witness_points", "find_witness", "GeneratingReport", "MoveError",
           "on_surface"]
