import copy
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktriangular.corpus import gen_random_ksubadditive
from ktriangular.drewnowski import (
    Block,
    CountableSetFunction,
    DisjointSequence,
    NoBlockFound,
    NoTailBound,
    brute_semivariation,
    certify_block,
    derive_b,
    exact_semivariation,
    extract_continuous_subsequence,
    extract_for_family,
    pushforward,
    verify_restricted_continuity,
)
from ktriangular.lattice import Verdict
from ktriangular.setfun import check_k_triangular

ALT2 = CountableSetFunction.from_descriptor("alternating-power 2")
SINGLE = DisjointSequence.singletons()


def test_descriptors():
    assert ALT2([1, 3]) == F(10, 9)
    assert ALT2.restrict(3).of([1, 2, 3]) == F(31, 36)
    g = CountableSetFunction.from_descriptor("geometric 1/2")
    assert g([1, 2]) == F(3, 4)
    assert CountableSetFunction.from_descriptor("zero")(range(1, 9)) == 0
    with pytest.raises(NoTailBound):
        CountableSetFunction.from_descriptor("harmonic")
    with pytest.raises(ValueError):
        CountableSetFunction.from_descriptor("cubic 3")


def test_tail_bound_is_validated():
    with pytest.raises(ValueError):
        CountableSetFunction(lambda n: F(1, n * n), lambda N: F(0))
    # right up to the exact horizon, too small further out
    with pytest.raises(NoTailBound):
        CountableSetFunction(lambda n: F(1, n * n), lambda N: F(1, N) if N <= 600 else F(1, N * N))
    assert CountableSetFunction.from_descriptor("geometric 1/2") is CountableSetFunction.from_descriptor(" geometric  1/2")


def test_sequences():
    assert DisjointSequence.pairs()(3) == {5, 6}
    assert DisjointSequence.intervals(3)(2) == {4, 5, 6}
    assert DisjointSequence.from_descriptor("evens")(4) == {8}
    with pytest.raises(ValueError):
        DisjointSequence.from_descriptor("odds")


def test_block_arithmetic():
    b = Block(2, 4)
    assert b.prefix(3) == [2, 6, 10]
    assert b.sub(1) == Block(2, 8) and b.sub(2) == Block(6, 16)
    assert b.sub(2).within(b) and not Block(3, 8).within(b)
    assert b.first_after(6) == 10 and b.first_after(0) == 2
    assert b.describe() == "2+4i"


@settings(max_examples=30)
@given(st.integers(1, 30), st.integers(1, 8), st.integers(1, 6))
def test_sub_blocks_partition(start, step, depth):
    # sub-blocks 1..depth plus the remainder cover the parent exactly once
    b = Block(start, step)
    window = b.prefix(2**depth)
    owners = {h: [r for r in range(1, depth + 1) if h in b.sub(r)] for h in window}
    assert all(len(v) <= 1 for v in owners.values())
    assert sum(1 for v in owners.values() if not v) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 40), min_size=0, max_size=12, unique=True))
def test_exact_semivariation_matches_brute(atoms):
    for m in (ALT2, CountableSetFunction.from_descriptor("geometric 2/3")):
        assert exact_semivariation(m, atoms) == brute_semivariation(m, atoms)


def test_certify_block_bounds_truth():
    cert = certify_block(ALT2, SINGLE, Block(2, 4), prefix_len=8)
    longer = exact_semivariation(ALT2, Block(2, 4).prefix(400))
    assert longer <= cert["attained"]
    assert cert["cutoff"] == 34


def test_extraction_trace():
    trace = extract_continuous_subsequence(ALT2, SINGLE, 6)
    assert trace.indices == [2, 10, 18, 82, 146, 274]
    assert [lv.block.describe() for lv in trace.levels] == ["2+4i", "2+8i", "2+16i", "18+64i", "18+128i", "18+256i"]
    assert list(trace.b) == [F(1, l) for l in range(1, 7)]
    cert = verify_restricted_continuity(trace, ALT2, SINGLE, chain_depth=6)
    assert cert.holds
    rec = trace.to_record()
    assert rec["indices"] == trace.indices and rec["levels"][0]["block"] == "2+4i"


@pytest.mark.parametrize("mutate,check", [
    (lambda t: setattr(t.levels[2], "n", t.levels[2].n + 1), "index in block"),
    (lambda t: setattr(t.levels[3], "n", 1), "increasing indices"),
    (lambda t: setattr(t.levels[1], "block", Block(3, 8)), "nested blocks"),
    (lambda t: setattr(t, "b", (t.b[0], t.b[0] * 2) + t.b[2:]), "b non-increasing"),
])
def test_corrupted_traces_are_caught(mutate, check):
    trace = copy.deepcopy(extract_continuous_subsequence(ALT2, SINGLE, 6))
    mutate(trace)
    cert = verify_restricted_continuity(trace, ALT2, SINGLE)
    assert cert.verdict is Verdict.VIOLATED and cert.witness["check"] == check


def test_corrupted_index_breaks_exact_check():
    trace = copy.deepcopy(extract_continuous_subsequence(ALT2, SINGLE, 4))
    # swap in a tight b and a consistent but heavy index at level 2
    trace.levels[1].n = 6
    trace.levels[1].block = Block(2, 4)
    trace.levels[1].certified = [{"attained": F(0)}]
    trace.b = (trace.b[0], F(1, 100)) + tuple(min(x, F(1, 100)) for x in trace.b[2:])
    for lv in trace.levels[2:]:
        lv.certified = [{"attained": F(0)}]
    cert = verify_restricted_continuity(trace, ALT2, SINGLE)
    assert cert.verdict is Verdict.VIOLATED
    assert cert.witness["check"] == "restricted continuity"


def test_extraction_with_explicit_b_and_failure():
    trace = extract_continuous_subsequence(ALT2, DisjointSequence.pairs(), 3, b=[F(1, 2), F(1, 4), F(1, 8)])
    assert verify_restricted_continuity(trace, ALT2, DisjointSequence.pairs()).holds
    with pytest.raises(NoBlockFound):
        extract_continuous_subsequence(ALT2, SINGLE, 2, b=[F(1, 10**9), 0], width=4)
    with pytest.raises(ValueError):
        extract_continuous_subsequence(ALT2, SINGLE, 3, b=[F(1, 2)])


def test_zero_function_extracts_with_zero_b():
    z = CountableSetFunction.from_descriptor("zero")
    assert list(derive_b([z], [F(1, 2), F(1, 3)]).values) == [0, 0]
    trace = extract_continuous_subsequence(z, SINGLE, 4)
    assert trace.indices == [1, 5, 9, 17]
    assert verify_restricted_continuity(trace, z, SINGLE).holds


def test_family_extraction():
    ms = [ALT2, ALT2.scaled(F(1, 2)), CountableSetFunction.from_descriptor("geometric 1/2")]
    trace = extract_for_family(ms, SINGLE, 5, u=2)
    assert verify_restricted_continuity(trace, ms, SINGLE).holds
    with pytest.raises(ValueError):
        extract_for_family([ALT2.scaled(10)], SINGLE, 2, u=1)


def test_pushforward_countable():
    mu = pushforward(ALT2, DisjointSequence.pairs(), R=4)
    assert mu.of([1]) == F(3, 4)
    assert check_k_triangular(mu, 1).ok


def test_pushforward_rejects_overlap():
    with pytest.raises(ValueError):
        pushforward(ALT2, [{1, 2}, {2, 3}])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2]))
def test_pushforward_preserves_k(seed, k):
    rng = random.Random(seed)
    m = gen_random_ksubadditive(8, k, seed=seed, triangular=True)
    R = rng.randint(1, 5)
    labels = [rng.randint(0, R) for _ in range(8)]
    blocks = [{a + 1 for a in range(8) if labels[a] == r} for r in range(1, R + 1)]
    mu = pushforward(m, blocks, k=k)
    assert check_k_triangular(mu, k, want_minimal=False).ok
