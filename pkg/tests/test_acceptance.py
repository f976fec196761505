"""One test per acceptance criterion; each prints a single PASS/FAIL line.

The lines are also repeated in the pytest terminal summary, so they show up
without ``-s``.  Run on its own with ``pytest tests/test_acceptance.py``.
"""

import random
import time
from fractions import Fraction as F

import pytest

from conftest import ACCEPTANCE_LINES
from ktriangular.corpus import (
    FIXTURES,
    build_fixture,
    family_from_record,
    gen_additive_family,
    gen_hump_family,
    gen_measuroid,
    gen_random_ksubadditive,
    gen_scaled_family,
    load_fixture,
)
from ktriangular.drewnowski import (
    Block,
    CountableSetFunction,
    DisjointSequence,
    extract_continuous_subsequence,
    verify_restricted_continuity,
)
from ktriangular.lattice import Regulator, Verdict, fremlin_combine, fremlin_failures, sample_index_maps
from ktriangular.limits import CONSISTENT, Theorem, s_bounded_from_continuity, schur_gap, theorem_harness
from ktriangular.records import regulator_from_record, setfunction_from_record
from ktriangular.setfun import (
    check_k_triangular,
    finite_chain_check,
    is_monotone,
    mask_of,
    minimal_k,
    semivariation,
)
from ktriangular.drewnowski import pushforward


def report(number, ok, detail, elapsed=None):
    timing = "" if elapsed is None else f" ({elapsed:.2f} s)"
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}{timing}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def fixture_functions():
    """Every set function the shipped fixtures carry: plain ones, members and limits."""
    out = []
    for desc in FIXTURES:
        rec = load_fixture(f"builtin:{desc.name}")
        if "setfunction" in rec:
            out.append((desc.name, setfunction_from_record(rec["setfunction"])))
        else:
            fam = family_from_record(rec["family"])
            out += [(f"{desc.name}[{j}]", fam[j]) for j in range(1, fam.J + 1)]
            out.append((f"{desc.name}[limit]", fam.declared_limit))
    return out


def test_criterion_1_measuroid_values():
    start = time.perf_counter()
    m3, m8 = gen_measuroid(3), gen_measuroid(8)
    values_ok = m3.of([1, 3]) == F(10, 9) and m3.of([1, 2, 3]) == F(31, 36)
    mono = is_monotone(m3)
    witness_ok = mono.verdict is Verdict.VIOLATED and (mono.witness["A"], mono.witness["B"]) == ("{1,3}", "{1,2,3}")
    rep = check_k_triangular(m8, 1)
    tri_ok = rep.ok and rep.pairs_checked == 3**8
    elapsed = time.perf_counter() - start
    ok = values_ok and witness_ok and tri_ok and elapsed < 1
    report(1, ok, f"m({{1,3}})={m3.of([1, 3])}, m({{1,2,3}})={m3.of([1, 2, 3])}, monotone witness "
                  f"{mono.witness['A']} < {mono.witness['B']}, {rep.pairs_checked} pairs with "
                  f"{len(rep.subadditivity_violations) + len(rep.lower_violations)} violations", elapsed)
    assert ok


def test_criterion_2_semivariation_keeps_k():
    start = time.perf_counter()
    bad = []
    for i in range(200):
        rng = random.Random(f"acceptance-2:{i}")
        n, k = rng.randint(1, 8), rng.choice([1, 2, 3])
        m = gen_random_ksubadditive(n, k, seed=i)
        if not check_k_triangular(semivariation(m), k, want_minimal=False).ok:
            bad.append((i, n, k))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    report(2, ok, f"200 random k-subadditive functions, {len(bad)} semivariations not k-triangular", elapsed)
    assert ok, bad


def test_criterion_3_chain_inequalities():
    start = time.perf_counter()
    funcs = fixture_functions()
    bad, chains = [], 0
    for name, m in funcs:
        k = minimal_k(m)
        assert k is not None, name
        rng = random.Random(f"acceptance-3:{name}")
        for _ in range(100):
            parts = rng.randint(2, 8)
            labels = [rng.randint(0, parts) for _ in range(m.n)]
            sets = [mask_of(a + 1 for a in range(m.n) if labels[a] == q) for q in range(1, parts + 1)]
            chains += 1
            cert = finite_chain_check(m, sets, k)
            if not cert.holds:
                bad.append((name, sets, cert.witness))
    elapsed = time.perf_counter() - start
    ok = not bad
    report(3, ok, f"{len(funcs)} fixture functions x 100 chains ({chains} chains), {len(bad)} failures", elapsed)
    assert ok, bad[:3]


def test_criterion_4_continuity_gives_s_boundedness():
    start = time.perf_counter()
    holds = skipped = 0
    bad = []
    for name, m in fixture_functions():
        k = minimal_k(m)
        reg = Regulator.harmonic(m.bound or 1, 6, 6)
        cert = s_bounded_from_continuity(m, k, reg)
        if cert.verdict is Verdict.HYPOTHESIS_NOT_MET:
            skipped += 1
        elif cert.holds:
            holds += 1
        else:
            bad.append((name, cert.witness))
    rec = load_fixture("builtin:measuroid-8-misscaled")
    m = setfunction_from_record(rec["setfunction"])
    reg = regulator_from_record(rec["regulator"])
    scaled = s_bounded_from_continuity(m, 1, reg)
    misscaled = s_bounded_from_continuity(m, 1, reg, factor=1)
    sensitive = scaled.holds and misscaled.verdict is Verdict.VIOLATED
    elapsed = time.perf_counter() - start
    ok = not bad and holds > 0 and sensitive
    report(4, ok, f"(k+1)-scaled check holds on {holds} continuous fixture functions ({skipped} not continuous "
                  f"at the horizon); factor-k regulator fails at {misscaled.witness and misscaled.witness['set']}",
           elapsed)
    assert ok, bad


def test_criterion_5_regulator_combination():
    start = time.perf_counter()
    failures = checked = 0
    for i in range(50):
        rng = random.Random(f"acceptance-5:{i}")
        regs = []
        for _ in range(rng.randint(1, 8)):
            rows = []
            for _ in range(6):
                rows.append(tuple(sorted((F(rng.randint(0, 12), rng.randint(1, 6)) for _ in range(6)), reverse=True)))
            regs.append(Regulator(tuple(rows)))
        u = F(rng.randint(1, 20), rng.randint(1, 3))
        comb = fremlin_combine(regs, u)
        phis = sample_index_maps(comb.T, comb.L, 1000, seed=i)
        failures += len(fremlin_failures(regs, u, comb, phis))
        checked += len(phis)
    elapsed = time.perf_counter() - start
    ok = failures == 0
    report(5, ok, f"50 inputs, {checked} index maps (constant, staircase and random), {failures} failures", elapsed)
    assert ok


def test_criterion_6_schur_gap():
    start = time.perf_counter()
    gaps = schur_gap(gen_scaled_family(gen_measuroid(3), "1+1/j", J=50))
    wrong = [(j, g, w) for j, g, w in gaps if g != F(10, 9) / j or w != mask_of([1, 3])]
    elapsed = time.perf_counter() - start
    ok = len(gaps) == 50 and not wrong
    report(6, ok, f"gap_j = (10/9)/j with witness {{1,3}} for j=1..50, {len(wrong)} mismatches", elapsed)
    assert ok, wrong


def test_criterion_7_theorem_harness():
    start = time.perf_counter()
    conforming = {
        "scaled": gen_scaled_family(gen_measuroid(3), "1+1/j", J=20),
        "scaled-6": gen_scaled_family(gen_measuroid(6), "1+1/j", J=12),
        "constant": gen_scaled_family(gen_measuroid(3), "constant", J=5),
        "doubling": gen_scaled_family(gen_measuroid(3), "2-1/j", J=20),
        "additive": gen_additive_family(6, 12, seed=7),
    }
    bad = []
    for name, fam in conforming.items():
        for th in Theorem:
            r = theorem_harness(fam, th)
            if r.verdict != CONSISTENT:
                bad.append((name, th.value, r.verdict, r.failed_hypotheses or r.failed_conclusions))
    hump = gen_hump_family(10)
    for th in Theorem:
        r = theorem_harness(hump, th)
        if r.verdict != Verdict.HYPOTHESIS_NOT_MET.value or not r.failed_hypotheses:
            bad.append(("hump", th.value, r.verdict, r.failed_hypotheses))
    elapsed = time.perf_counter() - start
    ok = not bad
    report(7, ok, f"{len(conforming)} conforming families x 4 theorems CONSISTENT, hump family "
                  f"HYPOTHESIS-NOT-MET for all 4; {len(bad)} mismatches", elapsed)
    assert ok, bad


def test_criterion_8_extraction():
    start = time.perf_counter()
    m = CountableSetFunction.from_descriptor("alternating-power 2")
    C = DisjointSequence.singletons()
    trace = extract_continuous_subsequence(m, C, 6, targets=[F(1, l) for l in range(1, 7)])
    tail_ok = all(m.tail_bound(N) == F(1, N - 1) for N in range(2, 50))
    bounds_ok = all(lv.attained <= F(1, lv.l) and lv.target <= F(1, lv.l) for lv in trace.levels)
    cert = verify_restricted_continuity(trace, m, C, chain_depth=6)
    trace.levels[3].n += 1
    corrupted = verify_restricted_continuity(trace, m, C, chain_depth=6)
    trace.levels[3].n -= 1
    trace.levels[2].block = Block(trace.levels[2].block.start + 1, trace.levels[2].block.step)
    corrupted_block = verify_restricted_continuity(trace, m, C, chain_depth=6)
    elapsed = time.perf_counter() - start
    ok = (tail_ok and bounds_ok and cert.holds and corrupted.verdict is Verdict.VIOLATED
          and corrupted_block.verdict is Verdict.VIOLATED and elapsed < 10)
    report(8, ok, f"indices {trace.indices}, verification {cert.verdict.value}, corrupted traces "
                  f"{corrupted.verdict.value}/{corrupted_block.verdict.value}", elapsed)
    assert ok


def test_criterion_9_pushforward():
    start = time.perf_counter()
    bad = []
    for i in range(50):
        rng = random.Random(f"acceptance-9:{i}")
        n, k = rng.randint(1, 8), rng.choice([1, 2, 3])
        m = gen_random_ksubadditive(n, k, seed=i, triangular=True)
        assert check_k_triangular(m, k, want_minimal=False).ok
        R = rng.randint(1, 8)
        labels = [rng.randint(0, R) for _ in range(n)]
        blocks = [{a + 1 for a in range(n) if labels[a] == r} for r in range(1, R + 1)]
        mu = pushforward(m, blocks)
        if not check_k_triangular(mu, k, want_minimal=False).ok:
            bad.append((i, n, k, R))
    elapsed = time.perf_counter() - start
    ok = not bad
    report(9, ok, f"50 seeded (m, blocks) pairs with R <= 8, {len(bad)} pushforwards not k-triangular", elapsed)
    assert ok, bad


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
