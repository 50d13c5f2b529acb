"""Degree-truncated Lie closure of functions under ``f -> x^k*v_x(f)`` and
``f -> y^k*v_y(f)``.

Two engines share the closure loop:

* ``vdp``: seeds ``x^m`` and ``y^m``, the functions attached to the complete
  volume-preserving fields ``x^k*v_x`` and ``y^k*v_y``.  A target reduces to
  zero exactly when the matching volume-preserving field lies in the
  truncated Lie algebra (everything is taken modulo constants).
* ``dp``: seeds are divergences of the complete fields ``z*x^k*v_x`` and
  ``z^k*v_z``; the closure collects divergences of Lie algebra elements and
  the targets are ``div(f*v_y)`` for basis monomials f.

Truncation is canonical: an operator that raises degree by r (``k + 1`` for
both families) is applied only to elements of degree <= cap - r.  Since rows
have distinct leading monomials in a graded order, the rows of degree <= d
span every element of degree <= d, so the closure does not depend on the
processing order.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from ..derivations import apply, build_vx, build_vy, build_vz, scale
from ..exactpoly import Poly, parse_scalar
from ..exactpoly.scalar import format_scalar
from ..hypersurface import SurfaceSpec, basis_exponents, normal_form
from ..volumeforms import divergence
from .linalg import Echelon
from .report import CERTIFIED, UNDECIDED, Verdict

SCHEMA = "dp-certify/1"


@dataclass(frozen=True)
class SaturationConfig:
    degree_target: int = 5
    degree_cap: int = 12
    k_max: int = 6
    max_rounds: int = 64
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        for name in ("degree_target", "degree_cap", "k_max", "max_rounds", "jobs"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.degree_cap < self.degree_target:
            raise ValueError("degree_cap must be at least degree_target")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    def to_dict(self) -> dict:
        # jobs is deliberately absent: results do not depend on it
        return {"degree_target": self.degree_target, "degree_cap": self.degree_cap,
                "k_max": self.k_max, "max_rounds": self.max_rounds, "seed": self.seed}


@dataclass(frozen=True)
class Seed:
    kind: str  # x-power, y-power, div-zxv, div-zv
    k: int

    def name(self) -> str:
        return {
            "x-power": f"x^{self.k}",
            "y-power": f"y^{self.k}",
            "div-zxv": f"div(z0*x^{self.k}*v_x)",
            "div-zv": f"div(z0^{self.k}*v_z)",
        }[self.kind]

    def to_dict(self) -> dict:
        return {"seed": self.kind, "k": self.k}


@dataclass(frozen=True)
class Derived:
    op: int  # index into the operator list
    parent: int

    def to_dict(self) -> dict:
        return {"op": self.op, "parent": self.parent}


def provenance_from_dict(d: dict):
    if "seed" in d:
        return Seed(d["seed"], int(d["k"]))
    return Derived(int(d["op"]), int(d["parent"]))


@dataclass(frozen=True)
class Operator:
    family: str  # "vx" or "vy"
    k: int

    @property
    def raise_by(self) -> int:
        return self.k + 1

    def name(self) -> str:
        base = "v_x" if self.family == "vx" else "v_y"
        mult = "x" if self.family == "vx" else "y"
        if self.k == 0:
            return base
        return f"{mult}^{self.k}*{base}" if self.k > 1 else f"{mult}*{base}"


def operators(k_max: int) -> list:
    return [Operator(f, k) for k in range(k_max + 1) for f in ("vx", "vy")]


class _Fields:
    """The two catalogue fields and the multiplier powers, per surface."""

    def __init__(self, s: SurfaceSpec):
        self.s = s
        self.vx = build_vx(s, 0)
        self.vy = build_vy(s, 0)

    def image(self, op: Operator, f: Poly) -> Poly:
        field_ = self.vx if op.family == "vx" else self.vy
        g = apply(field_, f).nf
        if op.k == 0 or g.is_zero():
            return g
        var = self.s.x if op.family == "vx" else self.s.y
        return normal_form(g * var ** op.k, self.s).nf


def seed_value(s: SurfaceSpec, seed: Seed) -> Poly:
    if seed.kind == "x-power":
        return s.x ** seed.k
    if seed.kind == "y-power":
        return s.y ** seed.k
    if seed.kind == "div-zxv":
        return divergence(scale(build_vx(s, 0), s.z(0) * s.x ** seed.k)).nf
    if seed.kind == "div-zv":
        return divergence(scale(build_vz(s), s.z(0) ** seed.k)).nf
    raise ValueError(f"unknown seed kind {seed.kind!r}")


def vdp_seeds(cfg: SaturationConfig) -> list:
    out = []
    for m in range(1, cfg.degree_cap + 1):
        out.append(Seed("x-power", m))
        out.append(Seed("y-power", m))
    return out


def dp_seeds(cfg: SaturationConfig) -> list:
    out = []
    for k in range(cfg.k_max + 1):
        out.append(Seed("div-zxv", k))
        out.append(Seed("div-zv", k))
    return out


def _strip_constant(p: Poly) -> dict:
    z = p.vs.zero_exp()
    return {e: c for e, c in p.items() if e != z}


@dataclass
class Row:
    id: int
    poly: Poly
    prov: object
    degree: int


class ClosureState:
    """Echelonized rows (modulo constants) with provenance."""

    def __init__(self, surface: SurfaceSpec, engine: str, cfg: SaturationConfig):
        self.surface = surface
        self.engine = engine
        self.cfg = cfg
        self.ops = operators(cfg.k_max)
        self.rows: list = []
        self.echelon = Echelon(surface.vs.order_key)
        self.rounds = 0
        self.saturated = False
        self.frontier: list = []

    def reduce(self, p: Poly, track: bool = False):
        return self.echelon.reduce(_strip_constant(p), track=track)

    def add(self, p: Poly, prov) -> Optional[Row]:
        rem, _ = self.reduce(p)
        if not rem:
            return None
        poly = Poly._make(self.surface.vs, rem)
        row = Row(len(self.rows), poly, prov, poly.degree())
        self.echelon.insert(row.id, rem)
        self.rows.append(row)
        return row

    def contains(self, p: Poly) -> bool:
        return not self.reduce(p)[0]

    def span_vectors(self, exps: list) -> list:
        index = {e: i for i, e in enumerate(exps)}
        out = []
        for row in self.rows:
            v = [0] * len(exps)
            for e, c in row.poly.items():
                if e not in index:
                    raise ValueError("row outside the given monomial list")
                v[index[e]] = c
            out.append(v)
        return out


def _map(fn, items, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def run_closure(surface: SurfaceSpec, engine: str, cfg: SaturationConfig,
                seeds: list, jobs: Optional[int] = None) -> ClosureState:
    """Seed, then close under the operators round by round.

    Each round applies every admissible operator to the rows added in the
    previous round.  Images are computed independently (optionally on
    several worker threads) and then inserted serially in a fixed order:
    by leading monomial, then parent row, then operator.
    """
    jobs = cfg.jobs if jobs is None else jobs
    st = ClosureState(surface, engine, cfg)
    fields = _Fields(surface)
    for sd in seeds:
        value = seed_value(surface, sd)
        if value.degree() > cfg.degree_cap:
            continue
        row = st.add(value, sd)
        if row is not None:
            st.frontier.append(row)
    cap = cfg.degree_cap
    key = surface.vs.order_key
    while st.frontier and st.rounds < cfg.max_rounds:
        items = [(row, i) for row in st.frontier for i, op in enumerate(st.ops)
                 if row.degree <= cap - op.raise_by]

        def work(item):
            row, i = item
            return fields.image(st.ops[i], row.poly)

        images = _map(work, items, jobs)
        pending = []
        for (row, i), img in zip(items, images):
            body = _strip_constant(img)
            if not body:
                continue
            lead = max(body, key=key)
            pending.append((key(lead), row.id, i, img))
        pending.sort(key=lambda t: (t[0], t[1], t[2]))
        new = []
        for _, parent, i, img in pending:
            row = st.add(img, Derived(i, parent))
            if row is not None:
                new.append(row)
        st.frontier = new
        st.rounds += 1
    st.saturated = not st.frontier
    return st


# -- certificates ---------------------------------------------------------------


def surface_to_dict(s: SurfaceSpec) -> dict:
    return {"n": s.n, "a": str(s.a), "b": str(s.b), "label": s.label}


def surface_from_dict(d: dict) -> SurfaceSpec:
    return SurfaceSpec.from_strings(d["a"], d["b"], int(d["n"]), label=d.get("label", ""))


@dataclass
class Certificate:
    engine: str
    surface: SurfaceSpec
    config: SaturationConfig
    target: Poly
    source: Optional[str]
    combination: list  # (scalar, row id)
    constant: object
    rows: list  # provenance of rows 0..max id used
    values: dict = field(default_factory=dict)  # row id -> Poly, for referenced rows

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "engine": self.engine,
            "surface": surface_to_dict(self.surface),
            "config": self.config.to_dict(),
            "target": str(self.target),
            "source": self.source,
            "combination": [[format_scalar(c), rid] for c, rid in self.combination],
            "constant": format_scalar(self.constant),
            "rows": {str(i): p.to_dict() for i, p in enumerate(self.rows)},
            "values": {str(i): str(v) for i, v in sorted(self.values.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        try:
            if d.get("schema") != SCHEMA:
                raise ValueError(f"unknown schema {d.get('schema')!r}")
            s = surface_from_dict(d["surface"])
            cfg = SaturationConfig(**d["config"])
            rows = [provenance_from_dict(d["rows"][str(i)]) for i in range(len(d["rows"]))]
            combo = [(parse_scalar(c), int(rid)) for c, rid in d["combination"]]
            values = {int(i): s.parse(v) for i, v in d.get("values", {}).items()}
            return cls(d["engine"], s, cfg, s.parse(d["target"]), d.get("source"),
                       combo, parse_scalar(d["constant"]), rows, values)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate: {exc}") from exc

    def replay(self, replayer: Optional["Replayer"] = None) -> bool:
        """Rebuild every row from its provenance and check the combination."""
        if replayer is None or not replayer.compatible(self):
            replayer = Replayer(self.surface, self.engine, self.config)
        return replayer.check(self)


class ReplayError(ValueError):
    pass


class Replayer:
    """Re-derives rows from provenance alone; shared across certificates of
    one run so the common row prefix is rebuilt once."""

    def __init__(self, surface: SurfaceSpec, engine: str, cfg: SaturationConfig):
        self.state = ClosureState(surface, engine, cfg)
        self.fields = _Fields(surface)
        self.provs: list = []

    def compatible(self, cert: Certificate) -> bool:
        st = self.state
        return (cert.surface == st.surface and cert.engine == st.engine
                and cert.config == st.cfg)

    def extend(self, provs: list):
        st = self.state
        for i, p in enumerate(provs):
            if i < len(self.provs):
                if self.provs[i] != p:
                    raise ReplayError(f"row {i} provenance differs from the replayed prefix")
                continue
            if isinstance(p, Seed):
                value = seed_value(st.surface, p)
            else:
                if not 0 <= p.parent < i or not 0 <= p.op < len(st.ops):
                    raise ReplayError(f"row {i} has an invalid parent or operator")
                op = st.ops[p.op]
                parent = st.rows[p.parent]
                if parent.degree > st.cfg.degree_cap - op.raise_by:
                    raise ReplayError(f"row {i} applies {op.name()} above the degree cap")
                value = self.fields.image(op, parent.poly)
            row = st.add(value, p)
            if row is None or row.id != i:
                raise ReplayError(f"row {i} reduces to zero on replay")
            self.provs.append(p)

    def check(self, cert: Certificate) -> bool:
        try:
            self.extend(cert.rows)
        except ReplayError:
            return False
        st = self.state
        total = Poly.const(st.surface.vs, cert.constant)
        for c, rid in cert.combination:
            if not 0 <= rid < len(cert.rows):
                return False
            total = total + st.rows[rid].poly.scale(c)
        for rid, v in cert.values.items():
            if rid >= len(st.rows) or st.rows[rid].poly != v:
                return False
        return total == cert.target


def certify_target(st: ClosureState, target: Poly, source: Optional[str] = None) -> Optional[Certificate]:
    rem, combo = st.reduce(target, track=True)
    if rem:
        return None
    combination = sorted(((c, rid) for rid, c in combo.items() if c != 0), key=lambda t: t[1])
    used = max((rid for _, rid in combination), default=-1)
    total = Poly.zero(st.surface.vs)
    for c, rid in combination:
        total = total + st.rows[rid].poly.scale(c)
    constant = (target - total).constant_term()
    return Certificate(st.engine, st.surface, st.cfg, target, source, combination, constant,
                       [r.prov for r in st.rows[:used + 1]],
                       {rid: st.rows[rid].poly for _, rid in combination})


@dataclass
class SaturationResult:
    state: ClosureState
    certificates: list
    verdict: Verdict
    missing: list
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        st = self.state
        return {
            "engine": st.engine,
            "surface": st.surface.describe(),
            "config": st.cfg.to_dict(),
            "rows": len(st.rows),
            "rounds": st.rounds,
            "saturated": st.saturated,
            "targets": len(self.certificates) + len(self.missing),
            "certified": len(self.certificates),
            "missing": [str(m) for m in self.missing],
            "verdict": self.verdict.to_dict(),
            **self.extra,
        }


def _finish(st: ClosureState, targets: list) -> SaturationResult:
    certs, missing = [], []
    for target, source in targets:
        c = certify_target(st, target, source)
        if c is None:
            missing.append(target)
        else:
            certs.append(c)
    if not missing:
        verdict = Verdict(CERTIFIED, f"{len(certs)} targets up to degree {st.cfg.degree_target}")
    elif st.saturated:
        verdict = Verdict(UNDECIDED, f"closure saturated at cap {st.cfg.degree_cap} without "
                                     f"reaching {missing[0]}")
    else:
        verdict = Verdict(UNDECIDED, f"budget exceeded after {st.rounds} rounds; "
                                     f"{missing[0]} not reached")
    return SaturationResult(st, certs, verdict, missing)


def _shorthand_surface(s) -> SurfaceSpec:
    from ..hypersurface import SurfabShorthand

    if isinstance(s, SurfabShorthand):
        if s.symbolic:
            raise ValueError("saturation needs numeric alpha and beta")
        if not s.smooth():
            raise ValueError("X_{0,0} is singular")
        return s.expand()
    return s


def vdp_targets(s: SurfaceSpec, d: int) -> list:
    z = s.vs.zero_exp()
    return [(Poly._make(s.vs, {e: 1}), None) for e in basis_exponents(s.vs, d) if e != z]


def saturate_vdp(s, cfg: SaturationConfig, jobs: Optional[int] = None) -> SaturationResult:
    """Closure for volume-preserving fields; targets are all non-constant basis
    monomials of degree <= ``degree_target``."""
    surface = _shorthand_surface(s)
    st = run_closure(surface, "vdp", cfg, vdp_seeds(cfg), jobs)
    return _finish(st, vdp_targets(surface, cfg.degree_target))


def dp_targets(s: SurfaceSpec, d: int) -> list:
    vy = build_vy(s, 0)
    out = []
    for e in basis_exponents(s.vs, d):
        f = Poly._make(s.vs, {e: 1})
        out.append((divergence(scale(vy, f)).nf, str(f)))
    return out


def saturate_dp(s, cfg: SaturationConfig, jobs: Optional[int] = None) -> SaturationResult:
    """Closure of divergences; targets are ``div(f*v_y)`` for basis monomials
    f of degree <= ``degree_target``.  Requires ``b = 1`` (alpha = 1)."""
    surface = _shorthand_surface(s)
    if surface.b != 1 or surface.n != 0:
        raise ValueError("the divergence closure is set up for x^2*y = z^2 - beta + x")
    st = run_closure(surface, "dp", cfg, dp_seeds(cfg), jobs)
    result = _finish(st, dp_targets(surface, cfg.degree_target))
    z = surface.z(0)
    powers = [k + 2 for k in range(cfg.k_max + 1) if k + 2 <= cfg.degree_cap]
    result.extra["pure_z_powers_rederived"] = [m for m in powers if st.contains(z ** m)]
    result.extra["pure_z_powers_missing"] = [m for m in powers if not st.contains(z ** m)]
    return result


def replay_all(certs: list) -> bool:
    replayer = None
    for c in certs:
        if replayer is None or not replayer.compatible(c):
            replayer = Replayer(c.surface, c.engine, c.config)
        if not c.replay(replayer):
            return False
    return True


__all__ = [
    "SaturationConfig", "Seed", "Derived", "Operator", "ClosureState", "Certificate",
    "Replayer", "SaturationResult", "run_closure", "saturate_vdp", "saturate_dp",
    "certify_target", "replay_all", "operators", "vdp_seeds", "dp_seeds", "seed_value",
    "surface_to_dict", "surface_from_dict",
]
