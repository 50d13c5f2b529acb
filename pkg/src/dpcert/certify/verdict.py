"""Assemble density / volume density verdicts from the individual checks.

For n = 0 the input is first brought to the shape ``x^2*y = z^2 - beta + alpha*x``
and the saturation engines decide.  For n > 0 the hypotheses of the general
criterion are checked one by one: transitivity, a compatible pair of complete
fields and generating sets at a rational point.  Cohomology vanishing is never
computed; it is taken from the user and echoed as an assumption.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from ..derivations import NoCertificate, build_vx, build_vy, certify_complete
from ..exactpoly import VarSet
from ..exactpoly.scalar import div, format_scalar
from ..hypersurface import SurfabShorthand, SurfaceSpec, hypothesis_report
from .biholo import biholomorphism_check
from .pairs import check_compatible, check_semicompatible
from .report import CERTIFIED, FAILS, HOLDS, NOT_ESTABLISHED, SUCCESS, UNDECIDED, Verdict
from .saturation import SaturationConfig, replay_all, saturate_dp, saturate_vdp
from .tangent import generating_set_check, wedge_generating_check, witness_points
from .transitivity import transitivity_verdict


class InputError(ValueError):
    """The input does not describe a surface the pipeline accepts."""


COHOMOLOGY = "H^{n+1}(X, C) = 0 (asserted by the user, not computed)"


@dataclass
class Check:
    name: str
    verdict: Verdict
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        out = {"name": self.name, **self.verdict.to_dict()}
        if self.details:
            out["details"] = self.details
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


@dataclass
class TheoremVerdict:
    surface: SurfaceSpec
    h_flag: bool
    config: SaturationConfig
    hypotheses: dict = field(default_factory=dict)
    transitivity: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    dp: Verdict = field(default_factory=lambda: Verdict(UNDECIDED, "not run"))
    vdp: Verdict = field(default_factory=lambda: Verdict(UNDECIDED, "not run"))
    assumptions: list = field(default_factory=list)
    saturations: dict = field(default_factory=dict)  # name -> SaturationResult

    @property
    def overall(self) -> str:
        statuses = (self.dp.status, self.vdp.status)
        for bad in (FAILS, NOT_ESTABLISHED):
            if bad in statuses:
                return bad
        if UNDECIDED in statuses:
            return UNDECIDED
        return CERTIFIED

    def certificates(self) -> dict:
        return {name: r.certificates for name, r in self.saturations.items()}

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "surface": self.surface.to_dict(),
            "h_flag": self.h_flag,
            "config": self.config.to_dict(),
            "hypotheses": self.hypotheses,
            "transitivity": self.transitivity,
            "checks": [c.to_dict(timings) for c in self.checks],
            "density_property": self.dp.to_dict(),
            "volume_density_property": self.vdp.to_dict(),
            "assumptions": list(self.assumptions),
            "overall": self.overall,
        }


class _Recorder:
    def __init__(self, out: TheoremVerdict):
        self.out = out

    def run(self, name: str, fn):
        t0 = time.perf_counter()
        verdict, details, value = fn()
        self.out.checks.append(Check(name, verdict, details or {}, time.perf_counter() - t0))
        return verdict, value


# -- n = 0 ------------------------------------------------------------------------


def shorthand_of(s: SurfaceSpec) -> Optional[SurfabShorthand]:
    """Bring ``x^2*y = c*z^2 + d*z + e + f*x`` (c != 0) to ``X_{f/c, -e'/c}`` by
    completing the square in z and rescaling y; ``None`` for other shapes."""
    if s.n != 0 or s.symbolic:
        return None
    z = s.vs.z(0)
    if s.a.degree_in(z) != 2 or s.b.degree_in(z) > 0:
        return None
    c = s.a.coefficient(_zpow(s.vs, 2))
    d = s.a.coefficient(_zpow(s.vs, 1))
    e = s.a.coefficient(_zpow(s.vs, 0))
    f = s.b.constant_term()
    e_shift = e - div(d * d, 4 * c)
    return SurfabShorthand(div(f, c), div(-e_shift, c))


def _zpow(vs: VarSet, k: int) -> tuple:
    e = [0] * vs.size
    e[vs.z(0)] = k
    return tuple(e)


def _saturation_check(rec, out, name, fn, surface_label):
    def go():
        r = fn()
        replays = replay_all(r.certificates)
        out.saturations[name] = r
        v = r.verdict
        if v.status == CERTIFIED and not replays:
            v = Verdict(UNDECIDED, "a certificate failed to replay")
        details = {"surface": surface_label, "rows": len(r.state.rows),
                   "rounds": r.state.rounds, "certified": len(r.certificates),
                   "missing": [str(m) for m in r.missing[:5]], "replayed": replays}
        details.update({k: v_ for k, v_ in r.extra.items()})
        return v, details, r
    return rec.run(name, go)[0]


def _generating_n0(rec, s: SurfaceSpec):
    def go():
        vy = build_vy(s, 0)
        last = None
        for p in witness_points(s):
            rep = generating_set_check(s, p, [vy])
            last = rep
            if rep.verdict.status == SUCCESS:
                return Verdict(SUCCESS, rep.verdict.reason), rep.to_dict(), rep
        if last is None:
            return Verdict(UNDECIDED, "no rational witness point found"), {}, None
        return Verdict(UNDECIDED, "no witness point with a generating orbit"), last.to_dict(), None
    return rec.run("generating-set", go)[0]


def _verdict_n0(out: TheoremVerdict, rec: _Recorder, s: SurfaceSpec, cfg, jobs):
    sh = shorthand_of(s)

    def normalize():
        if sh is None:
            return (Verdict(UNDECIDED, "n = 0 is handled only for a of degree 2 in z0 and "
                                       "constant b"), {}, None)
        return (Verdict(SUCCESS, f"isomorphic to {sh.label()}"),
                {"alpha": format_scalar(sh.alpha), "beta": format_scalar(sh.beta)}, sh)

    nv, _ = rec.run("normal-form", normalize)
    if sh is None:
        out.dp = out.vdp = Verdict(UNDECIDED, f"normal-form: {nv.reason}")
        return
    base = sh.expand()
    vdp = _saturation_check(rec, out, "vdp-saturation", lambda: saturate_vdp(base, cfg, jobs),
                            sh.label())
    out.vdp = (Verdict(CERTIFIED, f"algebraic volume density property up to degree "
                                  f"{cfg.degree_target}")
               if vdp.status == CERTIFIED else Verdict(UNDECIDED, f"vdp-saturation: {vdp.reason}"))

    # DP is argued on X_{1,b}; x -> alpha*x, z -> alpha*z identifies X_{alpha,beta}
    # with X_{1,beta/alpha^2}, and X_{0,beta} is isomorphic to X_{0,1}, which is
    # biholomorphic to X_{1,1}.
    blockers = []
    if sh.alpha != 0:
        target = SurfabShorthand(1, div(sh.beta, sh.alpha * sh.alpha))

        def route():
            if sh.alpha == 1:
                return Verdict(SUCCESS, f"{sh.label()} is already of the form X_{{1,b}}"), {}, None
            return (Verdict(SUCCESS, f"x -> alpha*x, z -> alpha*z maps {sh.label()} onto "
                                     f"{target.label()}"), {}, None)
        rec.run("dp-reduction", route)
    else:
        target = SurfabShorthand(1, 1)

        def route():
            r = biholomorphism_check(1)
            v = (Verdict(SUCCESS, f"{sh.label()} ~ X_{{0,1}} by scaling; X_{{0,1}} is "
                                  "biholomorphic to X_{1,1}")
                 if r.holds else Verdict(UNDECIDED, f"biholomorphism residual {r.residual}"))
            return v, r.to_dict(), r
        bv, _ = rec.run("dp-reduction", route)
        if bv.status != SUCCESS:
            blockers.append(f"dp-reduction: {bv.reason}")
    dp_surface = target.expand()
    if target == sh:
        dp_vdp = vdp
    else:
        dp_vdp = _saturation_check(rec, out, "vdp-saturation-dp-surface",
                                   lambda: saturate_vdp(dp_surface, cfg, jobs), target.label())
    if dp_vdp.status != CERTIFIED:
        blockers.append(f"vdp-saturation on {target.label()}: {dp_vdp.reason}")
    dps = _saturation_check(rec, out, "dp-saturation", lambda: saturate_dp(dp_surface, cfg, jobs),
                            target.label())
    if dps.status != CERTIFIED:
        blockers.append(f"dp-saturation: {dps.reason}")
    gen = _generating_n0(rec, dp_surface)
    if gen.status != SUCCESS:
        blockers.append(f"generating-set: {gen.reason}")
    if blockers:
        out.dp = Verdict(UNDECIDED, blockers[0])
    else:
        out.dp = Verdict(CERTIFIED, f"algebraic density property of {target.label()} up to "
                                    f"degree {cfg.degree_target}")


# -- n > 0 ------------------------------------------------------------------------


def _completeness(rec, fields):
    def go():
        details = {}
        for name, f in fields:
            try:
                cert = certify_complete(f)
            except NoCertificate as exc:
                return Verdict(UNDECIDED, f"{name}: {exc}"), details, None
            if not cert.replay():
                return Verdict(UNDECIDED, f"{name}: certificate does not replay"), details, None
            details[name] = cert.kind
        return Verdict(SUCCESS, "both fields complete"), details, None
    return rec.run("completeness", go)[0]


def _witness_n(rec, s: SurfaceSpec, nu, mu):
    def go():
        tried = 0
        for p in witness_points(s):
            tried += 1
            g = generating_set_check(s, p, [mu])
            if g.verdict.status != SUCCESS:
                continue
            w = wedge_generating_check(s, p, [(nu, mu)])
            if w.verdict.status == SUCCESS:
                return (Verdict(SUCCESS, "generating and wedge-generating at "
                                         + str(tuple(format_scalar(c) for c in p))),
                        {"generating": g.to_dict(), "wedge": w.to_dict()}, (g, w))
        return (Verdict(UNDECIDED, f"no witness point among {tried} candidates"),
                {"candidates": tried}, None)
    return rec.run("generating-sets", go)[0]


def _as_verdict(status: str, reason: str) -> Verdict:
    if status == HOLDS:
        return Verdict(SUCCESS)
    return Verdict(NOT_ESTABLISHED if status == NOT_ESTABLISHED else UNDECIDED, reason)


def _verdict_n(out: TheoremVerdict, rec: _Recorder, s: SurfaceSpec, cfg, tr, hyp):
    if not hyp.all_ok:
        bad = [k for k, v in hyp.to_dict().items() if v is False or v is None]
        reason = "hypotheses not met: " + ", ".join(bad)
        out.dp = out.vdp = Verdict(NOT_ESTABLISHED, reason)
        return
    nu, mu = build_vx(s, s.n), build_vy(s, 0)
    comp = _completeness(rec, [("v_x^%d" % s.n, nu), ("v_y^0", mu)])

    def pair():
        rep = check_semicompatible(nu, mu, min(cfg.degree_target, 4))
        rep = check_compatible(nu, mu, s.z(s.n), rep)
        return rep.verdict, rep.to_dict(), rep
    pv, rep = rec.run("compatible-pair", pair)
    semi_ok = rep.covered and not rep.rejected
    gen = _witness_n(rec, s, nu, mu)

    def gather(parts):
        for name, v, want in parts:
            if v.status not in want:
                return f"{name}: {v.reason}" if v.reason else f"{name}: {v.status}"
        return None

    conds = f"condition A {tr.condition_A.status}, condition B {tr.condition_B.status}"
    aut_v = _as_verdict(tr.aut, f"Aut transitivity {tr.aut}: {conds}")
    omega_v = _as_verdict(tr.aut_omega, f"Aut^omega transitivity {tr.aut_omega}: {conds}")
    ok = (SUCCESS, CERTIFIED)

    blocker = gather([("transitivity", aut_v, ok), ("completeness", comp, ok),
                      ("compatible-pair", pv, ok), ("generating-sets", gen, ok)])
    if blocker is None:
        out.dp = Verdict(CERTIFIED, "transitive, compatible pair (v_x^%d, v_y^0) with h = z%d, "
                                    "generating set at a rational point" % (s.n, s.n))
    else:
        status = NOT_ESTABLISHED if aut_v.status == NOT_ESTABLISHED else UNDECIDED
        out.dp = Verdict(status, blocker)

    semi_v = Verdict(SUCCESS) if semi_ok else Verdict(UNDECIDED, pv.reason)
    blocker = gather([("transitivity", omega_v, ok),
                      ("completeness", comp, ok), ("semi-compatible-pair", semi_v, ok),
                      ("generating-sets", gen, ok)])
    if blocker is None and not out.h_flag:
        blocker = "cohomology: H^{n+1}(X, C) = 0 is required; pass --h-flag to assert it"
    if blocker is None:
        out.vdp = Verdict(CERTIFIED, "volume-preserving transitivity, semi-compatible pair, "
                                     "wedge-generating set; assuming " + COHOMOLOGY)
        out.assumptions.append(COHOMOLOGY)
    else:
        status = NOT_ESTABLISHED if omega_v.status == NOT_ESTABLISHED else UNDECIDED
        out.vdp = Verdict(status, blocker)


# -- entry point ------------------------------------------------------------------


def main_theorem_verdict(s, h_flag: bool = False, cfg: Optional[SaturationConfig] = None,
                         jobs: Optional[int] = None) -> TheoremVerdict:
    """Run every check for the surface and combine them into DP and VDP verdicts.

    Raises :class:`InputError` for singular or symbolic inputs.
    """
    if isinstance(s, SurfabShorthand):
        if s.symbolic:
            raise InputError("alpha and beta must both be given")
        if not s.smooth():
            raise InputError(f"{s.label()} is singular")
        s = s.expand()
    if s.symbolic:
        raise InputError("certification needs numeric coefficients")
    cfg = cfg or SaturationConfig()
    hyp = hypothesis_report(s)
    if hyp.smooth is False:
        raise InputError("the surface is singular")
    out = TheoremVerdict(s, h_flag, cfg)
    rec = _Recorder(out)
    out.hypotheses = hyp.to_dict()
    if s.k_window is None:
        out.transitivity = {"summary": "no admissible window"}
        tr = None
    else:
        tr = transitivity_verdict(s)
        out.transitivity = tr.to_dict()
    if s.n > 0:
        if tr is not None and tr.condition_A.status == HOLDS:
            # a singular point is a common zero of a, every da/dz_i and b
            out.hypotheses["smooth"] = True
            out.hypotheses["smooth_reason"] = "implied by condition A"
        else:
            out.assumptions.append("X is smooth (not checked for n > 0)")
    if s.n == 0:
        _verdict_n0(out, rec, s, cfg, jobs)
    elif tr is None:
        out.dp = out.vdp = Verdict(NOT_ESTABLISHED, "hypotheses not met: k_window")
    else:
        _verdict_n(out, rec, s, cfg, tr, hyp)
    if out.h_flag and COHOMOLOGY not in out.assumptions:
        out.assumptions.append(COHOMOLOGY + "; not needed for this verdict")
    return out


__all__ = ["main_theorem_verdict", "TheoremVerdict", "Check", "InputError", "shorthand_of",
           "COHOMOLOGY"]
