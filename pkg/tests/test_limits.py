from fractions import Fraction as F

import pytest

from ktriangular.corpus import gen_additive_family, gen_hump_family, gen_measuroid, gen_random_ksubadditive, gen_scaled_family, gen_zero
from ktriangular.lattice import OSequence, Regulator, Verdict, regulator_from_o_sequence
from ktriangular.limits import (
    CONSISTENT,
    HarnessFixtures,
    NotTauNull,
    Property,
    SetFunctionFamily,
    Submeasure,
    Theorem,
    continuity_profile,
    s_bounded_from_continuity,
    s_bounded_profile,
    schur_gap,
    semivariation_inheritance_check,
    singletons,
    tail_chain,
    tail_union_chain,
    tau_continuity_check,
    theorem_harness,
    uniformity_transfer_check,
)
from ktriangular.setfun import SetFunction, mask_of, semivariation

M8 = gen_measuroid(8)
MISSCALED = regulator_from_o_sequence(OSequence((1, F(1, 2), F(1, 4), F(1, 8), F(1, 16), F(1, 60))))


def test_chain_helpers():
    assert singletons(3) == [1, 2, 4]
    assert tail_chain(3) == [7, 6, 4, 0]
    assert tail_union_chain([1, 6, 8]) == [15, 14, 8, 0]


def test_family_construction():
    fam = gen_scaled_family(gen_measuroid(3), J=4)
    assert fam.J == 4 and fam.n == 3
    assert fam[1].of([1, 3]) == F(20, 9)
    assert fam.u == F(20, 9)
    with pytest.raises(IndexError):
        fam[0]
    with pytest.raises(ValueError):
        SetFunctionFamily([gen_measuroid(3), gen_measuroid(4)])
    assert fam.pointwise_convergence().holds


def test_pointwise_convergence_fails_without_matching_limit():
    fam = gen_scaled_family(gen_measuroid(3), "constant", J=4)
    wrong = SetFunctionFamily(fam.members, gen_zero(3), fam.convergence_regulator)
    cert = wrong.pointwise_convergence()
    assert cert.verdict is Verdict.VIOLATED and cert.witness["set"] == "{1}"


def test_profiles_on_measuroid():
    prof, cert = s_bounded_profile(M8, singletons(8))
    assert prof.values[:3] == [1, F(1, 4), F(1, 9)]
    assert cert.holds
    prof, cert = continuity_profile(M8, tail_chain(8))
    assert prof.values[-1] == 0
    assert cert.holds and cert.horizon["chain_terms"] == 8


def test_uniform_profiles_fail_on_humps():
    fam = gen_hump_family(10)
    _, cert = s_bounded_profile(fam, singletons(10), True)
    assert cert.verdict is Verdict.VIOLATED
    assert cert.witness["set"] == "{10}"
    _, cert = continuity_profile(fam, tail_chain(10), True)
    assert cert.verdict is Verdict.VIOLATED
    # each member on its own is fine
    assert s_bounded_profile(fam, singletons(10), member=4)[1].holds


def test_profiles_reject_bad_inputs():
    with pytest.raises(ValueError):
        s_bounded_profile(M8, [1, 3])
    with pytest.raises(ValueError):
        continuity_profile(M8, [1, 3, 0])
    with pytest.raises(ValueError):
        s_bounded_profile(gen_hump_family(4), singletons(4))


def test_s_bounded_from_continuity_on_misscaled_regulator():
    assert s_bounded_from_continuity(M8, 1, MISSCALED).holds
    cert = s_bounded_from_continuity(M8, 1, MISSCALED, factor=1)
    assert cert.verdict is Verdict.VIOLATED
    assert cert.witness["check"] == "step[seq 1]"
    assert cert.witness["set"] == "{7}"
    assert cert.witness["value"] == F(1, 49) and cert.witness["bound"] == F(1, 60)


def test_s_bounded_from_continuity_needs_hypotheses():
    cert = s_bounded_from_continuity(M8, 0, MISSCALED)
    assert cert.verdict is Verdict.HYPOTHESIS_NOT_MET


@pytest.mark.parametrize("prop", list(Property))
def test_semivariation_inheritance_measuroid(prop):
    assert semivariation_inheritance_check(M8, prop).holds


@pytest.mark.parametrize("prop", list(Property))
def test_semivariation_inheritance_uniform(prop):
    fam = gen_scaled_family(gen_measuroid(5), J=6)
    assert semivariation_inheritance_check(fam, prop, uniform=True).holds


def test_semivariation_inheritance_hypothesis_reported():
    fam = gen_hump_family(6)
    cert = semivariation_inheritance_check(fam, Property.S_BOUNDED, uniform=True)
    assert cert.verdict is Verdict.HYPOTHESIS_NOT_MET


def test_semivariation_inheritance_random_implication():
    for seed in range(10):
        m = gen_random_ksubadditive(5, 2, seed=seed, triangular=True)
        reg = Regulator.harmonic(m.bound * 50, 6, 6)
        for prop in Property:
            cert = semivariation_inheritance_check(m, prop, k=2, reg=reg)
            assert cert.verdict is not Verdict.VIOLATED, (seed, prop, cert.witness)


def test_uniformity_transfer():
    fam = gen_scaled_family(gen_measuroid(5), J=6)
    assert uniformity_transfer_check(fam, tail_chain(5)[:-1], 0).holds
    W = mask_of([5])
    assert uniformity_transfer_check(fam, tail_chain(5)[:-1], W).holds
    humps = gen_hump_family(5)
    assert uniformity_transfer_check(humps, tail_chain(5)[:-1], 0).verdict is Verdict.HYPOTHESIS_NOT_MET
    with pytest.raises(ValueError):
        uniformity_transfer_check(fam, tail_chain(5), 1)


def test_tau_continuity():
    eta = Submeasure(semivariation(M8))
    assert tau_continuity_check(M8, eta, tail_chain(8)).holds
    z = gen_zero(4)
    assert tau_continuity_check(z, Submeasure.zero(4), [15, 3]).holds
    with pytest.raises(NotTauNull):
        tau_continuity_check(M8, Submeasure(n=8), [255, 1])


def test_submeasure_validation():
    with pytest.raises(ValueError):
        Submeasure(M8)
    assert Submeasure(n=3)(7) == F(7, 8)


def test_schur_gap_values():
    gaps = schur_gap(gen_scaled_family(gen_measuroid(3), J=50))
    for j, gap, witness in gaps:
        assert gap == F(10, 9) / j and witness == mask_of([1, 3])
    const = schur_gap(gen_scaled_family(gen_measuroid(3), "constant", J=3))
    assert [g for _, g, _ in const] == [0, 0, 0]


@pytest.mark.parametrize("theorem", list(Theorem))
def test_harness_conforming(theorem):
    fam = gen_scaled_family(gen_measuroid(3), J=20)
    report = theorem_harness(fam, theorem)
    assert report.verdict == CONSISTENT, report.failed_conclusions
    if theorem is Theorem.S:
        assert len(report.gaps) == 20
    rec = report.to_record()
    assert rec["verdict"] == CONSISTENT and rec["config"]["k"] == "1/1"


@pytest.mark.parametrize("theorem", list(Theorem))
def test_harness_additive(theorem):
    assert theorem_harness(gen_additive_family(6, 12, seed=7), theorem).verdict == CONSISTENT


@pytest.mark.parametrize("theorem", list(Theorem))
def test_harness_hump_hypothesis(theorem):
    report = theorem_harness(gen_hump_family(8), theorem)
    assert report.verdict == Verdict.HYPOTHESIS_NOT_MET.value
    assert "pointwise-convergence" in report.failed_hypotheses
    assert report.conclusions == []


def test_harness_rejects_foreign_fixtures():
    fam = gen_scaled_family(gen_measuroid(3), J=3)
    with pytest.raises(ValueError):
        theorem_harness(fam, "BJ", HarnessFixtures(disjoint_seqs=[[1, 16]]))


def test_harness_without_limit():
    fam = SetFunctionFamily([gen_measuroid(3)] * 3)
    report = theorem_harness(fam, "N")
    assert report.failed_hypotheses == ["pointwise-convergence"]


def test_scaled_function_inside_family_is_exact():
    fam = gen_scaled_family(SetFunction(2, [F(0), F(1), F(1), F(1)]), [F(1, 2), F(1, 3)], limit=F(1, 4))
    assert fam.declared_limit(3) == F(1, 4)
