"""Sufficient conditions for transitivity of the automorphism groups.

(A) for every common zero q of ``a, da/dz_0, ..., da/dz_k`` we need
    ``b(q) != 0`` and some ``j <= k`` for which ``da/dz_j`` restricted to the
    line through q in the z_j-direction is not identically zero.
(B) no ``c != 0`` makes all of ``da/dz_i + c*db/dz_i`` (i <= k) vanish
    identically.

(B) is decided exactly.  (A) needs the common zero set; it is enumerated by
elimination when every coordinate is a rational root of a univariate
polynomial (resultants handle pairs of variables) and reported UNDECIDED
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..exactpoly import Poly
from ..exactpoly import univariate as up
from ..exactpoly.scalar import div, format_scalar
from ..hypersurface import SurfaceSpec
from .linalg import rref
from .report import FAILS, HOLDS, NOT_ESTABLISHED, UNDECIDED, Verdict


@dataclass
class ConditionResult:
    name: str
    status: str
    reason: str = ""
    witness: Optional[object] = None

    def to_dict(self) -> dict:
        out = {"status": self.status, "reason": self.reason}
        if self.witness is not None:
            w = self.witness
            out["witness"] = ([format_scalar(c) for c in w] if isinstance(w, tuple)
                              else format_scalar(w))
        return out


@dataclass
class TransitivityReport:
    k: Optional[int]
    condition_A: ConditionResult
    condition_B: ConditionResult
    aut: str = UNDECIDED
    aut_omega: str = UNDECIDED
    summary: str = ""
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"k": self.k, "condition_A": self.condition_A.to_dict(),
                "condition_B": self.condition_B.to_dict(), "aut_transitive": self.aut,
                "aut_omega_transitive": self.aut_omega, "summary": self.summary,
                "notes": self.notes}


# -- condition (B) ----------------------------------------------------------------


def condition_B(s: SurfaceSpec) -> ConditionResult:
    k = s.k_window
    if s.symbolic:
        return ConditionResult("B", UNDECIDED, "symbolic parameters")
    if k is None:
        return ConditionResult("B", UNDECIDED, "no admissible degree window")
    c: Optional[object] = None
    for i in range(k + 1):
        zi = s.vs.z(i)
        da, db = s.a.partial(zi), s.b.partial(zi)
        for e in set(e for e, _ in da.items()) | set(e for e, _ in db.items()):
            ca, cb = da.coefficient(e), db.coefficient(e)
            if cb == 0:
                if ca != 0:
                    return ConditionResult("B", HOLDS, "some da/dz_i has a term without a partner in db/dz_i")
                continue
            ci = div(-ca, cb)
            if c is None:
                c = ci
            elif c != ci:
                return ConditionResult("B", HOLDS, "no single c cancels every coefficient")
    if c is None:
        c = 1  # every partial vanishes, any c works
    if c == 0:
        return ConditionResult("B", HOLDS, "only c = 0 cancels the partials")
    if not check_B_witness(s, c):
        raise AssertionError("condition B witness does not re-check")
    return ConditionResult("B", FAILS, f"c = {format_scalar(c)} annihilates all windowed partials", c)


def check_B_witness(s: SurfaceSpec, c) -> bool:
    return all((s.a.partial(s.vs.z(i)) + s.b.partial(s.vs.z(i)).scale(c)).is_zero()
               for i in range(s.k_window + 1))


# -- common zeros -------------------------------------------------------------------


class _Blocked(Exception):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


def _vars_of(p: Poly) -> set:
    return p.variables()


def _as_univariate(p: Poly, var: int) -> list:
    return up.from_coeffs({e[var]: c for e, c in p.items()})


def _component_free(polys: list, assigned: dict, zvars: list):
    """Yield components ``(assigned values, free variables)`` of the common
    zero set; raises _Blocked when the set cannot be enumerated rationally."""
    current = []
    for p in polys:
        q = p.subs(assigned) if assigned else p
        if q.is_zero():
            continue
        if q.is_constant():
            return
        current.append(q)
    free = [v for v in zvars if v not in assigned]
    if not current:
        yield dict(assigned), free
        return
    # a polynomial in one variable fixes that coordinate
    by_var: dict = {}
    for q in current:
        vs = _vars_of(q)
        if len(vs) == 1:
            (v,) = vs
            by_var.setdefault(v, []).append(q)
    if by_var:
        v = min(by_var)
        g = []
        for q in by_var[v]:
            g = up.ugcd(g, _as_univariate(q, v)) if g else up.monic(_as_univariate(q, v))
        sq = up.squarefree_part(g)
        roots = up.rational_roots(sq)
        if len(roots) < up.degree(sq):
            raise _Blocked(f"irrational roots of {_show(sq, v, current[0])}")
        for r in roots:
            yield from _component_free(current, {**assigned, v: r}, zvars)
        return
    # two variables: eliminate one with a resultant
    involved = set().union(*(_vars_of(q) for q in current))
    if len(involved) == 2 and len(current) >= 2:
        u, w = sorted(involved)
        p1, p2 = current[0], current[1]
        res = resultant(p1, p2, u, w)
        if not res:
            raise _Blocked(f"{p1} and {p2} share a common factor")
        sq = up.squarefree_part(res)
        roots = up.rational_roots(sq)
        if len(roots) < up.degree(sq):
            raise _Blocked(f"irrational roots of the resultant of {p1} and {p2}")
        for r in roots:
            yield from _component_free(current, {**assigned, w: r}, zvars)
        return
    raise _Blocked(f"cannot eliminate in {current[0]}")


def _show(coeffs: list, var: int, like: Poly) -> str:
    p = Poly(like.vs, {like.vs.unit_exp(var, k): c for k, c in enumerate(coeffs) if c != 0})
    return str(p)


def resultant(p: Poly, q: Poly, u: int, w: int) -> list:
    """Resultant of p and q with respect to u, as a dense polynomial in w.

    The Sylvester determinant is evaluated at enough integer values of w and
    interpolated."""
    du, eu = p.degree_in(u), q.degree_in(u)
    bound = p.degree_in(w) * eu + q.degree_in(w) * du
    pts = list(range(bound + 1))
    vals = []
    for t in pts:
        pu = _as_univariate(p.subs({w: t}), u)
        qu = _as_univariate(q.subs({w: t}), u)
        vals.append(_sylvester_det(pu, qu, du, eu))
    return _interpolate(pts, vals)


def _sylvester_det(p: list, q: list, m: int, n: int):
    p = list(p) + [0] * (m + 1 - len(p))
    q = list(q) + [0] * (n + 1 - len(q))
    size = m + n
    if size == 0:
        return 1
    rows = []
    for i in range(n):
        rows.append([0] * i + list(reversed(p)) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(reversed(q)) + [0] * (size - n - 1 - i))
    return _det(rows)


def _det(m: list):
    m = [list(r) for r in m]
    n = len(m)
    det = 1
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = div(m[r][c], m[c][c])
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _interpolate(xs: list, ys: list) -> list:
    """Coefficients of the interpolating polynomial (solve the Vandermonde system)."""
    n = len(xs)
    rows = [[xv ** k for k in range(n)] + [yv] for xv, yv in zip(xs, ys)]
    red, _ = rref(rows)
    return up.trim([r[-1] for r in red])


# -- condition (A) ------------------------------------------------------------------


def condition_A(s: SurfaceSpec) -> ConditionResult:
    k = s.k_window
    if s.symbolic:
        return ConditionResult("A", UNDECIDED, "symbolic parameters")
    if k is None:
        return ConditionResult("A", UNDECIDED, "no admissible degree window")
    zvars = list(s.vs.z_indices)
    polys = [s.a] + [s.a.partial(s.vs.z(i)) for i in range(k + 1)]
    partials = [s.a.partial(s.vs.z(j)) for j in range(k + 1)]
    count = 0
    try:
        for fixed, free in _component_free(polys, {}, zvars):
            count += 1
            bad = _check_component(s, fixed, free, partials, k)
            if bad is not None:
                return bad
    except _Blocked as exc:
        return ConditionResult("A", UNDECIDED, exc.reason)
    if count == 0:
        return ConditionResult("A", HOLDS, "no common zeros")
    return ConditionResult("A", HOLDS, f"checked {count} zero component(s)")


def _point(s: SurfaceSpec, fixed: dict, free_values: Optional[dict] = None) -> tuple:
    vals = {**fixed, **(free_values or {})}
    return tuple(vals.get(v, 0) for v in s.vs.z_indices)


def _check_component(s: SurfaceSpec, fixed: dict, free: list, partials: list, k: int):
    b_rest = s.b.subs(fixed) if fixed else s.b
    if free:
        if b_rest.is_zero():
            q = _point(s, fixed)
            return ConditionResult("A", FAILS, "b vanishes on a component of common zeros", q)
        if not b_rest.is_constant():
            vs = b_rest.variables()
            if len(vs) == 1:
                (v,) = vs
                roots = up.rational_roots(_as_univariate(b_rest, v))
                if roots:
                    q = _point(s, fixed, {v: roots[0]})
                    return ConditionResult("A", FAILS, "b vanishes at a common zero", q)
            return ConditionResult("A", UNDECIDED,
                                   f"b restricted to a zero component is {b_rest}; zeros not enumerated")
        # along the component the line condition depends on the free point
        if not any(_line_nonzero_generic(s, fixed, free, partials[j], j) for j in range(k + 1)):
            q = _point(s, fixed)
            return ConditionResult("A", FAILS, "every windowed partial vanishes along its line", q)
        return None
    q = _point(s, fixed)
    vals = dict(fixed)
    if s.b.evaluate(vals) == 0:
        return ConditionResult("A", FAILS, "b vanishes at a common zero", q)
    for j in range(k + 1):
        if _line_nonzero(s, vals, partials[j], j):
            return None
    return ConditionResult("A", FAILS, "every windowed partial vanishes along its line", q)


def _line_nonzero(s: SurfaceSpec, vals: dict, dpart: Poly, j: int) -> bool:
    zj = s.vs.z(j)
    others = {v: c for v, c in vals.items() if v != zj}
    return not dpart.subs(others).is_zero()


def _line_nonzero_generic(s, fixed, free, dpart, j) -> bool:
    # nonzero for generic points of the component; a zero at special points
    # would need a finer decomposition, so require it identically in the free
    # coordinates except z_j
    zj = s.vs.z(j)
    others = {v: c for v, c in fixed.items() if v != zj}
    return not dpart.subs(others).is_zero() if others else not dpart.is_zero()


def check_A_witness(s: SurfaceSpec, q: tuple) -> bool:
    """Re-check a FAILS witness: q is a common zero and violates (A)."""
    vals = {v: c for v, c in zip(s.vs.z_indices, q)}
    k = s.k_window
    polys = [s.a] + [s.a.partial(s.vs.z(i)) for i in range(k + 1)]
    if any(p.evaluate(vals) != 0 for p in polys):
        return False
    if s.b.evaluate(vals) == 0:
        return True
    return not any(_line_nonzero(s, vals, s.a.partial(s.vs.z(j)), j) for j in range(k + 1))


def transitivity_verdict(s: SurfaceSpec) -> TransitivityReport:
    A = condition_A(s)
    B = condition_B(s)
    rep = TransitivityReport(s.k_window, A, B)
    if A.status == HOLDS:
        rep.aut = HOLDS
        rep.aut_omega = HOLDS if B.status == HOLDS else (UNDECIDED if B.status == UNDECIDED
                                                          else NOT_ESTABLISHED)
    elif A.status == FAILS:
        rep.aut = rep.aut_omega = NOT_ESTABLISHED
    if rep.aut == HOLDS and rep.aut_omega == HOLDS:
        rep.summary = "Aut and Aut^omega transitive"
    elif rep.aut == HOLDS:
        rep.summary = "Aut transitive"
    elif A.status == FAILS:
        rep.summary = "transitivity not established: condition A fails"
    else:
        rep.summary = "transitivity undecided"
    if NOT_ESTABLISHED in (rep.aut, rep.aut_omega):
        rep.notes.append("a failing condition does not refute transitivity; "
                         "other automorphisms may still act transitively")
    return rep


def verdict_of(rep: TransitivityReport) -> Verdict:
    status = {HOLDS: "CERTIFIED"}.get(rep.aut, rep.aut)
    return Verdict(status, rep.summary)
