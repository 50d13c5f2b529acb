import json
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from dpcert.certify.biholo import biholomorphism_check
from dpcert.certify.linalg import kernel, rank, rref
from dpcert.certify.oracle import dp_target_exprs, from_poly, oracle_bfs, same_span
from dpcert.certify.pairs import check_compatible, check_semicompatible, default_kernel_hints
from dpcert.certify.report import (CERTIFIED, FAILS, HOLDS, NOT_ESTABLISHED, SUCCESS,
                                   UNDECIDED)
from dpcert.certify.saturation import (Certificate, Derived, SaturationConfig, Seed,
                                       certify_target, dp_seeds, replay_all, run_closure,
                                       saturate_dp, saturate_vdp, vdp_seeds)
from dpcert.certify.tangent import (MoveError, generating_set_check, tangent_space,
                                    wedge_generating_check, witness_points)
from dpcert.certify.transitivity import (check_A_witness, check_B_witness, condition_A,
                                         condition_B, resultant, transitivity_verdict)
from dpcert.certify.verdict import COHOMOLOGY, InputError, main_theorem_verdict, shorthand_of
from dpcert.derivations import apply, build_vx, build_vy
from dpcert.exactpoly import I, gaussian
from dpcert.hypersurface import SurfabShorthand, SurfaceSpec, normal_form
from dpcert.suites import koras_russell, random_admissible

X10 = SurfabShorthand(1, 0).expand()
X01 = SurfabShorthand(0, 1).expand()
X11 = SurfabShorthand(1, 1).expand()
KR = koras_russell()
SMALL = SaturationConfig(degree_target=3, degree_cap=6, k_max=3)


# -- exact linear algebra ---------------------------------------------------------------


def test_rref_rank_kernel():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert rank(rows) == 2
    ker = kernel(rows, 3)
    assert len(ker) == 1
    for r in rows:
        assert sum(Fraction(a) * b for a, b in zip(r, ker[0])) == 0
    m, piv = rref(rows)
    assert list(piv) == [0, 1]


# -- saturation engines vs the dense oracle -------------------------------------------


@pytest.mark.parametrize("ab", [(1, 0), (0, 1), (1, 1)])
@pytest.mark.parametrize("engine", ["vdp", "dp"])
@pytest.mark.parametrize("cap", [2, 3])
def test_engine_span_equals_oracle_span(ab, engine, cap):
    s = SurfabShorthand(*ab).expand()
    cfg = SaturationConfig(degree_target=cap, degree_cap=cap, k_max=6)
    seeds = vdp_seeds(cfg) if engine == "vdp" else dp_seeds(cfg)
    st_ = run_closure(s, engine, cfg, seeds)
    span = oracle_bfs(*ab, cap, 6, engine=engine)
    assert len(st_.rows) == span.rank
    assert same_span([r.poly for r in st_.rows], span)


def test_oracle_empty_seeds_and_no_closure():
    assert oracle_bfs(1, 0, 3, 2, seeds=[]).rank == 0
    x, y, z = sp.symbols("x y z")
    only = oracle_bfs(1, 0, 3, 0, max_rounds=0, seeds=[x, y])
    assert only.rank == 2 and only.rounds == 0


def test_xz_certified_on_x10():
    cfg = SaturationConfig(degree_target=3, degree_cap=12, k_max=6)
    res = saturate_vdp(SurfabShorthand(1, 0), cfg)
    assert res.verdict.status == CERTIFIED
    xz = X10.parse("x*z0")
    cert = next(c for c in res.certificates if c.target == xz)
    assert cert.replay()
    # v_y(x^2) = 4xz is one route into the span
    assert apply(build_vy(X10), X10.x ** 2) == X10.ring("4*x*z0")
    assert res.state.contains(X10.parse("4*x*z0"))


def test_yz_certified_on_x01():
    cfg = SaturationConfig(degree_target=2, degree_cap=4, k_max=6)
    res = saturate_vdp(SurfabShorthand(0, 1), cfg)
    assert res.verdict.status == CERTIFIED
    assert apply(build_vx(X01), X01.y ** 2) == X01.ring("4*y*z0")
    assert any(c.target == X01.parse("y*z0") and c.replay() for c in res.certificates)


def test_dp_closure_on_x10_reaches_z():
    cfg = SaturationConfig(degree_target=2, degree_cap=4, k_max=2)
    res = saturate_dp(SurfabShorthand(1, 0), cfg)
    st_ = res.state
    assert st_.contains(X10.parse("x^2")) and st_.contains(X10.parse("z0^2"))
    assert st_.contains(X10.parse("x*z0"))
    assert st_.contains(X10.parse("2*z0"))
    assert res.verdict.status == CERTIFIED


def test_dp_targets_agree_with_oracle():
    cfg = SaturationConfig(degree_target=3, degree_cap=12, k_max=6)
    res = saturate_dp(SurfabShorthand(1, 1), cfg)
    assert res.verdict.status == CERTIFIED
    # the targets div(f*v_y), recomputed with sympy, match the engine's targets
    mine = {sp.expand(from_poly(c.target)) for c in res.certificates} - {0}
    theirs = {sp.expand(e) for e in dp_target_exprs(1, 1, 3)} - {0}
    assert mine == theirs


def test_dp_needs_alpha_one():
    with pytest.raises(ValueError):
        saturate_dp(SurfabShorthand(0, 1), SMALL)


def test_singular_and_symbolic_rejected():
    with pytest.raises(ValueError):
        saturate_vdp(SurfabShorthand(0, 0), SMALL)
    with pytest.raises(ValueError):
        saturate_vdp(SurfabShorthand(), SMALL)


def test_tiny_budget_is_undecided_not_refuted():
    res = saturate_vdp(SurfabShorthand(1, 0), SaturationConfig(degree_target=5, degree_cap=12,
                                                                k_max=6, max_rounds=1))
    assert res.verdict.status == UNDECIDED
    assert res.missing


def test_saturation_config_validation():
    with pytest.raises(ValueError):
        SaturationConfig(degree_target=6, degree_cap=5)
    with pytest.raises(ValueError):
        SaturationConfig(jobs=0)


# -- certificates ---------------------------------------------------------------------


@pytest.fixture(scope="module")
def x11_small():
    return saturate_vdp(SurfabShorthand(1, 1), SMALL)


def test_certificates_replay_and_round_trip(x11_small):
    certs = x11_small.certificates
    assert certs and replay_all(certs)
    for c in certs[:5]:
        again = Certificate.from_dict(json.loads(c.to_json()))
        assert again.replay()
        assert again.to_json() == c.to_json()


def test_tampered_certificates_fail(x11_small):
    c = x11_small.certificates[-1]
    d = json.loads(c.to_json())
    scal, rid = d["combination"][0]
    d["combination"][0] = [scal + "+1", rid]
    assert not Certificate.from_dict(d).replay()
    d = json.loads(c.to_json())
    d["target"] = d["target"] + " + x"
    assert not Certificate.from_dict(d).replay()
    d = json.loads(c.to_json())
    last = str(len(d["rows"]) - 1)
    if "op" in d["rows"][last]:
        d["rows"][last]["op"] = (d["rows"][last]["op"] + 1) % 14
        assert not Certificate.from_dict(d).replay()


def test_malformed_certificates_raise():
    with pytest.raises(ValueError):
        Certificate.from_dict({"schema": "other"})
    with pytest.raises(ValueError):
        Certificate.from_dict({"schema": "dp-certify/1", "engine": "vdp"})


def test_certify_target_outside_span_is_none():
    cfg = SaturationConfig(degree_target=1, degree_cap=1, k_max=0)
    st_ = run_closure(X10, "vdp", cfg, [Seed("x-power", 1)])
    assert certify_target(st_, X10.parse("z0")) is None
    cert = certify_target(st_, X10.parse("3*x + 5"))
    assert cert is not None and cert.replay() and cert.constant == 5


def test_provenance_names():
    assert Seed("div-zxv", 2).name() == "div(z0*x^2*v_x)"
    assert Derived(3, 1).to_dict() == {"op": 3, "parent": 1}


# -- pairs ----------------------------------------------------------------------------


N2 = random_admissible(random.Random(12), 2)  # uses z0, z1, z2; window 2


@pytest.mark.parametrize("s", [KR, N2], ids=["koras-russell", "random-n2"])
def test_pairs_compatible_for_distinct_indices(s):
    # v_y^j exists only inside the degree window
    for i in range(s.n + 1):
        for j in range(s.k_window + 1):
            if i == j:
                continue
            nu, mu = build_vx(s, i), build_vy(s, j)
            rep = check_semicompatible(nu, mu, 4 if s.n == 1 else 3)
            assert rep.covered and rep.verdict.status == CERTIFIED
            rep = check_compatible(nu, mu, s.z(i), rep)
            assert rep.verdict.status == CERTIFIED
            assert rep.compatible["nu_h"] == "x^2"


def test_pair_same_index_fails_mu_h():
    nu, mu = build_vx(KR, 0), build_vy(KR, 0)
    rep = check_compatible(nu, mu, KR.z(0))
    assert rep.verdict.status == FAILS
    assert any("mu(h)" in f for f in rep.failures)
    assert apply(mu, KR.z(0)) == KR.ring("2*x*y + 1")  # 2xy - b with b = -1


def test_pair_constant_h_fails():
    rep = check_compatible(build_vx(KR, 1), build_vy(KR, 0), 1)
    assert rep.verdict.status == FAILS and "nu(h) is zero" in rep.failures


def test_rejected_kernel_hint():
    nu, mu = build_vx(KR, 1), build_vy(KR, 0)
    rep = check_semicompatible(nu, mu, 2, nu_hints=[KR.z(1)], mu_hints=[KR.y])
    assert rep.rejected[0] == ("z1", "x^2")
    assert rep.verdict.status == UNDECIDED


def test_product_reaches_mixed_monomial():
    s = KR
    prod = normal_form(s.parse("x^3*z1") * s.parse("y^2*z0"), s)
    assert prod == normal_form(s.parse("x^3*y^2*z0*z1"), s)
    hints = default_kernel_hints(build_vx(s, 0), 4)
    assert s.parse("x^3*z1") in hints


# -- generating sets ------------------------------------------------------------------


def test_generating_set_at_121():
    rep = generating_set_check(X10, (1, 2, 1), [build_vy(X10)])
    assert rep.verdict.status == SUCCESS and rep.target_dim == 2 == rep.reached_dim


def test_generating_set_x0_zero_undecided():
    p = (0, 5, 0)  # on x^2 y = z^2 + x
    rep = generating_set_check(X10, p, [build_vy(X10)])
    assert rep.verdict.status == UNDECIDED


def test_generating_set_spanning_candidates_need_no_moves():
    rep = generating_set_check(X10, (1, 2, 1), [build_vx(X10), build_vy(X10)], moves=[])
    assert rep.verdict.status == SUCCESS and rep.moves_used == 0


def test_bad_moves_and_points():
    with pytest.raises(MoveError):
        generating_set_check(X10, (1, 2, 1), [build_vy(X10)], moves=[(build_vx(X10), X10.y)])
    with pytest.raises(ValueError):
        generating_set_check(X10, (1, 1, 1), [build_vy(X10)])


def test_tangent_space_dimension():
    assert len(tangent_space(KR, next(witness_points(KR)))) == 3


def test_wedge_generating_on_koras_russell():
    found = None
    for p in witness_points(KR):
        rep = wedge_generating_check(KR, p, [(build_vx(KR, 1), build_vy(KR, 0))])
        if rep.verdict.status == SUCCESS:
            found = rep
            break
    assert found is not None and found.reached_dim == 3


def test_wedge_of_field_with_itself_fails():
    p = next(witness_points(KR))
    rep = wedge_generating_check(KR, p, [(build_vx(KR, 1), build_vx(KR, 1))])
    assert rep.verdict.status == FAILS


def test_wedge_top_degree_for_n0():
    rep = wedge_generating_check(X10, (1, 2, 1), [(build_vx(X10), build_vy(X10))])
    assert rep.verdict.status == SUCCESS and rep.target_dim == 1


# -- transitivity -----------------------------------------------------------------------


def test_transitivity_koras_russell():
    rep = transitivity_verdict(KR)
    assert rep.condition_A.status == HOLDS and rep.condition_B.status == HOLDS
    assert rep.summary == "Aut and Aut^omega transitive"


def test_condition_A_fails_with_witness_zero():
    s = SurfaceSpec.from_strings("z0^2", "z0", 0)
    A = condition_A(s)
    assert A.status == FAILS and A.witness == (0,)
    assert check_A_witness(s, A.witness)
    assert transitivity_verdict(s).aut == NOT_ESTABLISHED
    assert condition_B(s).status == HOLDS


def test_condition_B_fails_with_witness_minus_one():
    s = SurfaceSpec.from_strings("z0", "z0", 0)
    B = condition_B(s)
    assert B.status == FAILS and B.witness == -1
    assert check_B_witness(s, B.witness)


def test_condition_A_vacuous():
    s = SurfaceSpec.from_strings("z0^2 - 1", "1", 0)
    assert condition_A(s).status == HOLDS


def test_smooth_shorthand_surfaces_transitive():
    for ab in [(1, 0), (0, 1), (1, 1), (2, -3)]:
        rep = transitivity_verdict(SurfabShorthand(*ab).expand())
        assert rep.aut == HOLDS and rep.aut_omega == HOLDS


@given(st.integers(-5, 5).filter(bool), st.integers(1, 5), st.integers(0, 50))
@settings(max_examples=25, deadline=None)
def test_condition_B_invariant_under_rescaling_b(num, den, seed):
    rng = random.Random(seed)
    s = random_admissible(rng, rng.randint(0, 1), 2)
    if rng.random() < 0.5:  # plant a failing instance: da = -2*db
        s = SurfaceSpec.from_strings(f"-2*({s.b}) + 1", str(s.b), s.n)
    lam = Fraction(num, den)
    t = SurfaceSpec.from_strings(str(s.a), f"({lam})*({s.b})", s.n)
    B1, B2 = condition_B(s), condition_B(t)
    assert B1.status == B2.status
    if B1.status == FAILS:
        assert check_B_witness(t, B1.witness / lam)


def test_resultant_eliminates():
    s = KR
    z0, z1 = s.vs.z(0), s.vs.z(1)
    p, q = s.parse("z0^2 + z1^2 - 2"), s.parse("z0 - z1")
    res = resultant(p, q, z0, z1)  # in z1: (z1^2 + z1^2 - 2)
    roots = [r for r in (-1, 1) if sum(c * r ** i for i, c in enumerate(res)) == 0]
    assert roots == [-1, 1]


# -- biholomorphism ---------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [1, 2, I, 0, Fraction(1, 3), gaussian(1, 1)])
def test_biholomorphism_holds(alpha):
    r = biholomorphism_check(alpha)
    assert r.holds and r.residual == "0"


def test_perturbed_map_fails():
    r = biholomorphism_check(1, perturbed=True)
    assert not r.holds
    assert str(r.residual) == "-x - E + 1"


# -- main theorem verdicts -------------------------------------------------------------


def test_verdict_koras_russell():
    v = main_theorem_verdict(KR, h_flag=True)
    assert v.dp.status == CERTIFIED and v.vdp.status == CERTIFIED
    assert v.overall == CERTIFIED
    assert any(COHOMOLOGY in a for a in v.assumptions)
    no_flag = main_theorem_verdict(KR)
    assert no_flag.dp.status == CERTIFIED and no_flag.vdp.status == UNDECIDED
    assert no_flag.overall == UNDECIDED


def test_verdict_x11_and_alpha_zero():
    v = main_theorem_verdict(SurfabShorthand(1, 1).expand(), cfg=SMALL)
    assert v.overall == CERTIFIED
    v = main_theorem_verdict(SurfabShorthand(0, 2).expand(), cfg=SMALL)
    assert v.overall == CERTIFIED
    assert any(c.name == "dp-reduction" for c in v.checks)


def test_verdict_rejects_singular_and_symbolic():
    with pytest.raises(InputError):
        main_theorem_verdict(SurfabShorthand(0, 0).expand())
    with pytest.raises(InputError):
        main_theorem_verdict(SurfabShorthand().expand())


def test_verdict_failing_hypotheses():
    v = main_theorem_verdict(SurfaceSpec.from_strings("z0^2", "z0", 1), cfg=SMALL)
    assert v.overall == NOT_ESTABLISHED
    v = main_theorem_verdict(SurfaceSpec.from_strings("z0", "z0", 1), h_flag=True, cfg=SMALL)
    assert v.dp.status == CERTIFIED and v.vdp.status == NOT_ESTABLISHED


def test_verdict_n0_unhandled_shape_is_undecided():
    v = main_theorem_verdict(SurfaceSpec.from_strings("z0^2 - 1", "z0", 0), cfg=SMALL)
    assert v.overall == UNDECIDED


def test_shorthand_normalization():
    s = SurfaceSpec.from_strings("2*z0^2 + 4*z0 + 1", "3", 0)
    sh = shorthand_of(s)
    assert (sh.alpha, sh.beta) == (Fraction(3, 2), Fraction(1, 2))
    v = main_theorem_verdict(s, cfg=SMALL)
    assert v.overall == CERTIFIED
