import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktriangular.corpus import gen_measuroid, gen_random_ksubadditive
from ktriangular.lattice import Vec, Verdict
from ktriangular.setfun import (
    SetFunction,
    argmax_subsets,
    atoms_of,
    check_k_triangular,
    disjoint_pairs,
    finite_chain_check,
    format_set,
    is_monotone,
    mask_of,
    minimal_k,
    parse_set,
    semivariation,
    semivariation_at,
    submasks,
)


def subsets(atoms):
    atoms = list(atoms)
    for r in range(len(atoms) + 1):
        yield from itertools.combinations(atoms, r)


def alt_sum(atoms):
    return abs(sum(F((-1) ** (a + 1), a * a) for a in atoms))


def table_of(n, rule):
    return [rule(tuple(atoms_of(mask))) for mask in range(1 << n)]


# Frozen from an independent hand evaluation of |Σ (-1)^{a+1}/a²|.
MEASUROID_3 = {
    (): F(0),
    (1,): F(1),
    (2,): F(1, 4),
    (3,): F(1, 9),
    (1, 2): F(3, 4),
    (1, 3): F(10, 9),
    (2, 3): F(5, 36),
    (1, 2, 3): F(31, 36),
}


def test_sets_round_trip():
    assert mask_of([1, 3]) == 0b101
    assert atoms_of(0b101) == [1, 3]
    assert format_set(0) == "{}" and format_set(0b101) == "{1,3}"
    assert parse_set("{1, 3}") == 0b101 and parse_set("{}") == 0
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]
    with pytest.raises(ValueError):
        mask_of([0])


def test_disjoint_pair_count():
    for n in range(6):
        pairs = list(disjoint_pairs(n))
        assert len(pairs) == 3**n
        assert all(a & b == 0 for a, b in pairs)


def test_measuroid_values():
    m = gen_measuroid(3)
    for atoms, want in MEASUROID_3.items():
        assert m.of(atoms) == want == alt_sum(atoms)


def test_measuroid_is_one_triangular_not_monotone():
    m = gen_measuroid(6)
    rep = check_k_triangular(m, 1)
    assert rep.ok and rep.pairs_checked == 3**6
    assert rep.minimal_k == 1
    cert = is_monotone(gen_measuroid(3))
    assert cert.verdict is Verdict.VIOLATED
    assert cert.witness["A"] == "{1,3}" and cert.witness["B"] == "{1,2,3}"


def test_measuroid_semivariation():
    v = semivariation(gen_measuroid(3))
    assert v.of([1, 2, 3]) == F(10, 9)
    assert v.of([2, 3]) == F(1, 4)
    assert argmax_subsets(gen_measuroid(3), 0b111) == [0b101]
    assert is_monotone(v).holds


def test_table_validation():
    with pytest.raises(ValueError):
        SetFunction(1, [1, 1])
    with pytest.raises(ValueError):
        SetFunction(1, [0, -1])
    with pytest.raises(ValueError):
        SetFunction(1, [0, 2], bound=1)
    with pytest.raises(ValueError):
        SetFunction(1, [0, 1], weights=[1])


def test_minimal_k_examples():
    # m = cardinality is additive: k = 1; square of cardinality needs k = 3 on 2 atoms
    card = SetFunction(2, table_of(2, lambda a: F(len(a))))
    assert minimal_k(card) == 1
    sq = SetFunction(2, table_of(2, lambda a: F(len(a) ** 2)))
    assert minimal_k(sq) == 3
    # a null set that still moves the union admits no finite k
    odd = SetFunction(2, [F(0), F(0), F(1), F(2)])
    assert minimal_k(odd) is None
    assert minimal_k(SetFunction(2, [F(0)] * 4)) == 0
    with pytest.raises(TypeError):
        minimal_k(SetFunction(1, [Vec([0, 0]), Vec([1, 0])]))


def brute_minimal_k(table, n):
    best = F(0)
    for a, b in itertools.product(range(1 << n), repeat=2):
        if a & b:
            continue
        need = abs(table[a | b] - table[a])
        if need == 0:
            continue
        if table[b] == 0:
            return None
        best = max(best, need / table[b])
    return best


@settings(max_examples=60)
@given(st.integers(1, 4), st.data())
def test_minimal_k_matches_brute_force(n, data):
    vals = data.draw(st.lists(st.fractions(0, 5, max_denominator=6), min_size=(1 << n) - 1,
                              max_size=(1 << n) - 1))
    table = [F(0)] + vals
    m = SetFunction(n, table)
    k = minimal_k(m)
    assert k == brute_minimal_k(table, n)
    if k is not None:
        assert check_k_triangular(m, k, want_minimal=False).ok
        if k > 0:
            assert not check_k_triangular(m, k * F(99, 100), want_minimal=False).ok


def test_check_reports_violating_pairs():
    sq = SetFunction(2, table_of(2, lambda a: F(len(a) ** 2)))
    rep = check_k_triangular(sq, 1)
    assert not rep.ok
    assert set(rep.subadditivity_violations) == {(1, 2), (2, 1)}
    assert rep.lower_violations == []


@settings(max_examples=40)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_semivariation_matches_brute_force(n, seed):
    rng = random.Random(seed)
    table = [F(0)] + [F(rng.randint(0, 9), rng.randint(1, 4)) for _ in range((1 << n) - 1)]
    m = SetFunction(n, table)
    v = semivariation(m)
    for mask in range(1 << n):
        assert v(mask) == max(table[b] for b in range(1 << n) if b & ~mask == 0)
        assert v(mask) == semivariation_at(m, mask)
    assert is_monotone(v).holds
    assert semivariation(v) == v


def test_vector_semivariation_is_componentwise():
    table = [Vec([0, 0]), Vec([2, 0]), Vec([0, 3]), Vec([1, 1])]
    m = SetFunction(2, table)
    assert semivariation(m)(3) == Vec([2, 3])
    assert sorted(argmax_subsets(m, 3)) == [1, 2]


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 6), st.sampled_from([1, 2, 3]), st.integers(0, 10**6))
def test_semivariation_inherits_k(n, k, seed):
    m = gen_random_ksubadditive(n, k, seed=seed)
    assert check_k_triangular(m, k, want_minimal=False).subadditive
    assert check_k_triangular(semivariation(m), k, want_minimal=False).ok


def test_large_semivariation_is_derived():
    m = SetFunction(18, weights=[F((-1) ** (a + 1), a * a) for a in range(1, 19)])
    v = semivariation(m)
    assert v.backing == "derived"
    assert v(0b101) == F(10, 9)


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from([1, 2]))
def test_chain_inequalities(seed, k):
    rng = random.Random(seed)
    n = 6
    m = gen_random_ksubadditive(n, k, seed=seed, triangular=True)
    labels = [rng.randint(0, 4) for _ in range(n)]
    sets = [mask_of(a + 1 for a in range(n) if labels[a] == q) for q in range(1, 5)]
    assert finite_chain_check(m, sets, k).holds


def test_chain_failure_names_the_step():
    sq = SetFunction(3, table_of(3, lambda a: F(len(a) ** 2)))
    cert = finite_chain_check(sq, [1, 2, 4], 1)
    assert cert.verdict is Verdict.VIOLATED
    assert "upper" in cert.witness["failed"]
    assert cert.witness["triangularity_break"] == {"step": 2, "A": "{1}", "B": "{2}"}
    with pytest.raises(ValueError):
        finite_chain_check(sq, [1, 3], 1)


def test_scaled_function():
    m = gen_measuroid(3).scaled(2)
    assert m.of([1, 3]) == F(20, 9)
    assert check_k_triangular(m, 1).ok
