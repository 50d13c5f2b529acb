"""Semi-compatible and compatible pairs of catalogue fields.

A pair (nu, mu) is semi-compatible when products ``f*g`` with
``nu(f) = 0`` and ``mu(g) = 0`` span a nonzero ideal; here the check is that
they span every basis monomial up to a degree bound.  Compatibility adds a
function h with ``mu(h) = 0`` and ``nu(h)`` a nonzero element of ker nu.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..derivations import VectorField, apply
from ..exactpoly import X, Y, Poly
from ..hypersurface import RingElement, basis_exponents, normal_form
from .linalg import Echelon
from .report import CERTIFIED, FAILS, UNDECIDED, Verdict


@dataclass
class PairReport:
    nu: str
    mu: str
    degree: int = 0
    nu_kernel: list = field(default_factory=list)
    mu_kernel: list = field(default_factory=list)
    rejected: list = field(default_factory=list)  # (hint, image)
    covered: Optional[bool] = None
    first_missing: Optional[str] = None
    ideal_element: Optional[str] = None
    compatible: Optional[dict] = None
    failures: list = field(default_factory=list)
    verdict: Verdict = field(default_factory=lambda: Verdict(UNDECIDED, "not checked"))

    def to_dict(self) -> dict:
        return {
            "nu": self.nu, "mu": self.mu, "degree": self.degree,
            "nu_kernel_hints": len(self.nu_kernel), "mu_kernel_hints": len(self.mu_kernel),
            "rejected_hints": [[h, img] for h, img in self.rejected],
            "span_covers_basis": self.covered, "first_missing": self.first_missing,
            "ideal_element": self.ideal_element, "compatible": self.compatible,
            "failures": self.failures, "verdict": self.verdict.to_dict(),
        }


def _field_name(f: VectorField) -> str:
    if f.label is None:
        return str(f)
    kind, idx = f.label
    return {"vx": f"v_x^{idx}", "vy": f"v_y^{idx}", "vz": "v_z"}.get(kind, kind)


def monomials_in(s, variables: list, d: int) -> list:
    """All monomials of degree <= d in the given variable indices."""
    out = [s.vs.zero_exp()]
    for var in variables:
        grown = []
        for e in out:
            used = sum(e[:s.vs.geo])
            for p in range(0, d - used + 1):
                e2 = list(e)
                e2[var] = p
                grown.append(tuple(e2))
        out = grown
    out.sort(key=s.vs.order_key)
    return [Poly._make(s.vs, {e: 1}) for e in out]


def default_kernel_hints(f: VectorField, d: int) -> list:
    """Monomials in {x, z_l : l != i} for v_x^i and in {y, z_l : l != j} for v_y^j."""
    s = f.surface
    if f.label is None or f.label[0] not in ("vx", "vy"):
        raise ValueError("default hints exist only for v_x^i and v_y^j")
    kind, idx = f.label
    base = X if kind == "vx" else Y
    zs = [s.vs.z(l) for l in range(s.n + 1) if l != idx]
    return monomials_in(s, [base] + zs, d)


def check_semicompatible(nu: VectorField, mu: VectorField, d: int,
                         nu_hints: Optional[list] = None,
                         mu_hints: Optional[list] = None) -> PairReport:
    s = nu.surface
    rep = PairReport(_field_name(nu), _field_name(mu), d)
    nu_hints = default_kernel_hints(nu, d) if nu_hints is None else nu_hints
    mu_hints = default_kernel_hints(mu, d) if mu_hints is None else mu_hints
    for field_, hints, keep in ((nu, nu_hints, rep.nu_kernel), (mu, mu_hints, rep.mu_kernel)):
        for h in hints:
            img = apply(field_, h)
            if img.is_zero():
                keep.append(h.nf if isinstance(h, RingElement) else h)
            else:
                rep.rejected.append((str(h), str(img)))
    ech = Echelon(s.vs.order_key)
    rid = 0
    for f in rep.nu_kernel:
        for g in rep.mu_kernel:
            prod = normal_form(f * g, s).nf
            if prod.degree() > 2 * d:
                continue
            rem, _ = ech.reduce(dict(prod.items()))
            if rem:
                ech.insert(rid, rem)
                rid += 1
                if rep.ideal_element is None:
                    rep.ideal_element = str(prod)
    rep.covered = True
    for e in basis_exponents(s.vs, d):
        if not ech.contains({e: 1}):
            rep.covered = False
            rep.first_missing = str(Poly._make(s.vs, {e: 1}))
            break
    if rep.rejected:
        rep.verdict = Verdict(UNDECIDED, f"kernel hint {rep.rejected[0][0]} rejected "
                                         f"(image {rep.rejected[0][1]})")
    elif rep.covered:
        rep.verdict = Verdict(CERTIFIED, f"products of kernel elements span all basis "
                                         f"monomials up to degree {d}")
    else:
        rep.verdict = Verdict(UNDECIDED, f"{rep.first_missing} is not in the product span")
    return rep


def check_compatible(nu: VectorField, mu: VectorField, h,
                     report: Optional[PairReport] = None) -> PairReport:
    s = nu.surface
    if not isinstance(h, RingElement):
        h = normal_form(h if isinstance(h, Poly) else Poly.const(s.vs, h), s)
    rep = report or PairReport(_field_name(nu), _field_name(mu))
    mu_h = apply(mu, h)
    nu_h = apply(nu, h)
    nu_nu_h = apply(nu, nu_h)
    failures = []
    if not mu_h.is_zero():
        failures.append(f"mu(h) = {mu_h} is not zero")
    if nu_h.is_zero():
        failures.append("nu(h) is zero")
    if not nu_nu_h.is_zero():
        failures.append(f"nu(nu(h)) = {nu_nu_h} is not zero")
    rep.compatible = {"h": str(h), "nu_h": str(nu_h), "holds": not failures}
    rep.failures = failures
    if failures:
        rep.verdict = Verdict(FAILS, "; ".join(failures))
    elif rep.covered is False or rep.rejected:
        rep.verdict = Verdict(UNDECIDED, "h works but semi-compatibility is not verified")
    else:
        rep.verdict = Verdict(CERTIFIED, f"h = {h}, nu(h) = {nu_h}")
    return rep
