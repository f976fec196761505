"""Families of set functions and their decay profiles.

All profile checks go through :func:`d_converges`, so they share its
finite-horizon semantics: a profile HOLDS when, for every sampled index map,
its tail sits below the regulator supremum.

Chains are decreasing lists of bitmasks.  Terms after the first empty member
carry no information (every profile is 0 there), so certificates are taken
on the non-empty prefix; a chain that is empty from the start holds trivially.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from .lattice import (
    DEFAULT_PHI_COUNT,
    Certificate,
    Regulator,
    Value,
    Vec,
    Verdict,
    as_value,
    d_converges,
    join,
    sample_index_maps,
    zero_like,
)
from .setfun import (
    SetFunction,
    argmax_subsets,
    atoms_of,
    check_k_triangular,
    format_set,
    is_monotone,
    mask_of,
    semivariation,
    submasks,
)

__all__ = [
    "DEFAULT_HORIZON",
    "SetFunctionFamily",
    "DecayProfile",
    "Submeasure",
    "NotTauNull",
    "Property",
    "s_bounded_profile",
    "continuity_profile",
    "tail_union_chain",
    "tail_chain",
    "singletons",
    "s_bounded_from_continuity",
    "semivariation_inheritance_check",
    "uniformity_transfer_check",
    "tau_continuity_check",
    "schur_gap",
    "Theorem",
    "HarnessFixtures",
    "HarnessReport",
    "theorem_harness",
]

DEFAULT_HORIZON = 6
RESTRICTED_EXHAUSTIVE = 10
RESTRICTED_SAMPLES = 256


@dataclass
class SetFunctionFamily:
    """Members ``m_1..m_J`` over one algebra, optionally with a declared limit.

    ``regulator`` drives the profile checks; ``convergence_regulator`` the
    pointwise convergence to ``declared_limit``.  Both default to harmonic
    regulators scaled by the equibound ``u``.
    """

    members: list
    declared_limit: SetFunction | None = None
    convergence_regulator: Regulator | None = None
    regulator: Regulator | None = None
    name: str = ""
    u: Any = field(init=False)

    def __post_init__(self):
        self.members = list(self.members)
        if not self.members:
            raise ValueError("a family needs at least one member")
        n = self.members[0].n
        for j, m in enumerate(self.members, 1):
            if m.n != n:
                raise ValueError(f"member {j} lives on {m.n} atoms, expected {n}")
        if self.declared_limit is not None and self.declared_limit.n != n:
            raise ValueError("declared limit lives on a different algebra")
        self.u = join([m.bound for m in self.members])
        if self.regulator is None:
            self.regulator = Regulator.harmonic(self.u, DEFAULT_HORIZON, DEFAULT_HORIZON)
        if self.convergence_regulator is None:
            self.convergence_regulator = Regulator.harmonic(self.u, DEFAULT_HORIZON, DEFAULT_HORIZON)

    @property
    def n(self) -> int:
        return self.members[0].n

    @property
    def J(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, j: int) -> SetFunction:
        """1-based member access."""
        if not 1 <= j <= self.J:
            raise IndexError(f"member {j} outside 1..{self.J}")
        return self.members[j - 1]

    def pointwise_convergence(self, phi_samples=None, seed: int = 0) -> Certificate:
        """``m_j(A) -> m_0(A)`` for every member set A, one shared regulator."""
        if self.declared_limit is None:
            raise ValueError("the family has no declared limit")
        reg = self.convergence_regulator
        phis = _phis(reg, phi_samples, seed)
        worst = 1
        for mask in range(1 << self.n):
            cert = d_converges([m(mask) for m in self.members], self.declared_limit(mask), reg, phis, seed)
            if not cert.holds:
                witness = dict(cert.witness, set=format_set(mask))
                return Certificate(Verdict.VIOLATED, witness, reg, cert.horizon)
            worst = max(worst, cert.details["n0"])
        horizon = {"T": reg.T, "L": reg.L, "J": self.J, "sets": 1 << self.n, "phi_samples": len(phis), "seed": seed}
        return Certificate(Verdict.HOLDS, None, reg, horizon, {"n0": worst})


@dataclass
class DecayProfile:
    """Tracked quantity along a disjoint sequence or decreasing chain."""

    labels: list
    values: list
    uniform: bool
    kind: str

    def rows(self) -> list[tuple[str, Value]]:
        return [(format_set(a), v) for a, v in zip(self.labels, self.values)]


class NotTauNull(ValueError):
    """The chain does not shrink to an eta-null set."""


class Submeasure:
    """Monotone, 1-subadditive scalar set function vanishing at the empty set.

    Each property is checked exhaustively on construction.  The default
    ``η(A) = Σ_{a∈A} 2^-a`` is order continuous and null only at ∅.
    """

    def __init__(self, m: SetFunction | None = None, n: int | None = None, name: str = "eta"):
        if m is None:
            if n is None:
                raise ValueError("give a set function or an atom count")
            m = SetFunction(n, weights=[Fraction(1, 2**a) for a in range(1, n + 1)], name="dyadic")
        if not m.is_scalar:
            raise ValueError("a submeasure must be scalar valued")
        if m(0) != 0:
            raise ValueError("a submeasure vanishes at the empty set")
        mono = is_monotone(m)
        if not mono.holds:
            raise ValueError(f"submeasure not monotone: {mono.witness}")
        report = check_k_triangular(m, 1, want_minimal=False, limit=1)
        if report.subadditivity_violations:
            a, b = report.subadditivity_violations[0]
            raise ValueError(f"submeasure not subadditive at ({format_set(a)}, {format_set(b)})")
        self.m = m
        self.name = name

    @classmethod
    def zero(cls, n: int) -> Submeasure:
        return cls(SetFunction(n, [Fraction(0)] * (1 << n), name="zero"), name="zero")

    @property
    def n(self) -> int:
        return self.m.n

    def __call__(self, mask: int) -> Fraction:
        return self.m(mask)


class Property(str, enum.Enum):
    S_BOUNDED = "S-BOUNDED"
    CONTINUOUS = "CONTINUOUS"


def _phis(reg: Regulator, phi_samples, seed: int, count: int = DEFAULT_PHI_COUNT):
    if phi_samples is not None:
        return list(phi_samples)
    return sample_index_maps(reg.T, reg.L, count, seed)


def _check_disjoint(seq: Sequence[int]) -> None:
    seen = 0
    for h, c in enumerate(seq, 1):
        if seen & c:
            raise ValueError(f"set C{h} = {format_set(c)} meets an earlier set")
        seen |= c


def _check_chain(chain: Sequence[int], closing: bool = True) -> None:
    if not chain:
        raise ValueError("empty chain")
    for n in range(len(chain) - 1):
        if chain[n + 1] & ~chain[n]:
            raise ValueError(f"chain not decreasing at H{n + 1} = {format_set(chain[n])}")
    if closing and chain[-1] != 0:
        raise ValueError("chain must close with the empty set (empty intersection)")


def _nonempty_prefix(chain: Sequence[int]) -> int:
    for i, c in enumerate(chain):
        if c == 0:
            return i
    return len(chain)


def singletons(n: int) -> list[int]:
    return [1 << i for i in range(n)]


def tail_chain(n: int) -> list[int]:
    """``{h..n}`` for h = 1..n, closed by the empty set."""
    return [mask_of(range(h, n + 1)) for h in range(1, n + 1)] + [0]


def tail_union_chain(seq: Sequence[int]) -> list[int]:
    """``H_h = ∪_{i>=h} C_i``, closed by the empty set."""
    out = []
    acc = 0
    for c in reversed(seq):
        acc |= c
        out.append(acc)
    return list(reversed(out)) + [0]


def _as_members(source, member: int | None, uniform: bool) -> tuple[list[SetFunction], Regulator | None, Any]:
    if isinstance(source, SetFunction):
        return [source], None, source.bound
    if isinstance(source, SetFunctionFamily):
        if uniform:
            return source.members, source.regulator, source.u
        if member is None:
            if source.J == 1:
                member = 1
            else:
                raise ValueError("pick a member (1-based) or ask for the uniform profile")
        return [source[member]], source.regulator, source.u
    raise TypeError(f"expected a SetFunction or SetFunctionFamily, got {type(source).__name__}")


def _default_reg(reg, family_reg, bound) -> Regulator:
    if reg is not None:
        return reg
    if family_reg is not None:
        return family_reg
    return Regulator.harmonic(bound, DEFAULT_HORIZON, DEFAULT_HORIZON)


def _decay(values: Sequence[Value], reg: Regulator, phis, seed: int, labels: Sequence[int] | None = None) -> Certificate:
    if not values:
        return Certificate(Verdict.HOLDS, None, reg, {"T": reg.T, "L": reg.L, "length": 0, "seed": seed},
                           {"n0": 1, "trivial": True})
    cert = d_converges(values, zero_like(values[0]), reg, phis, seed)
    if not cert.holds and labels is not None:
        cert.witness["set"] = format_set(labels[cert.witness["n"] - 1])
    return cert


def s_bounded_profile(
    source,
    disjoint_seq: Sequence[int],
    uniform: bool = False,
    *,
    member: int | None = None,
    reg: Regulator | None = None,
    phi_samples=None,
    seed: int = 0,
) -> tuple[DecayProfile, Certificate]:
    """``m(C_h)`` (or ``⋁_j m_j(C_h)``) and its decay to 0."""
    seq = list(disjoint_seq)
    _check_disjoint(seq)
    members, fam_reg, bound = _as_members(source, member, uniform)
    reg = _default_reg(reg, fam_reg, bound)
    values = [join([m(c) for m in members]) for c in seq]
    profile = DecayProfile(seq, values, uniform, "s-bounded")
    return profile, _decay(values, reg, _phis(reg, phi_samples, seed), seed, seq)


def continuity_profile(
    source,
    chain: Sequence[int],
    uniform: bool = False,
    *,
    member: int | None = None,
    reg: Regulator | None = None,
    phi_samples=None,
    seed: int = 0,
) -> tuple[DecayProfile, Certificate]:
    """``m(H_n)``, or ``⋁_j v(m_j)(H_n)`` when uniform, along a chain to ∅."""
    chain = list(chain)
    _check_chain(chain)
    members, fam_reg, bound = _as_members(source, member, uniform)
    reg = _default_reg(reg, fam_reg, bound)
    if uniform:
        tracked = [semivariation(m) for m in members]
    else:
        tracked = members
    values = [join([m(h) for m in tracked]) for h in chain]
    profile = DecayProfile(chain, values, uniform, "continuity")
    cut = _nonempty_prefix(chain)
    cert = _decay(values[:cut], reg, _phis(reg, phi_samples, seed), seed, chain)
    cert.horizon["chain_terms"] = cut
    return profile, cert


def _restricted_chains(chain: Sequence[int], seed: int, extra: Sequence[int] = ()) -> list[int]:
    """Subsets B of H_1 whose chains ``B ∩ H_n`` are checked alongside the chain."""
    top = chain[0]
    atoms = atoms_of(top)
    if len(atoms) <= RESTRICTED_EXHAUSTIVE:
        return list(submasks(top))
    rng = random.Random(seed)
    picks = dict.fromkeys(extra)
    for _ in range(RESTRICTED_SAMPLES):
        picks[mask_of(a for a in atoms if rng.random() < 0.5)] = None
    return list(picks)


def _continuity_with_restrictions(m: SetFunction, chain, reg, phis, seed) -> Certificate:
    """Continuity of m on the chain and on every restricted chain ``B ∩ H_n``.

    Restricted chains are read at the parent chain's horizon, so their last
    term is a subset of the parent's last non-empty member.
    """
    cut = _nonempty_prefix(chain)
    live = chain[:cut]
    if not live:
        return _decay([], reg, phis, seed)
    last = live[-1]
    extra = argmax_subsets(m, last)
    seen = set()
    worst = 1
    checked = 0
    for b in [live[0]] + _restricted_chains(live, seed, extra):
        values = tuple(m(b & h) for h in live)
        if values in seen:
            continue
        seen.add(values)
        checked += 1
        cert = _decay(list(values), reg, phis, seed)
        if not cert.holds:
            cert.witness["restricted_by"] = format_set(b)
            cert.witness["set"] = format_set(b & live[cert.witness["n"] - 1])
            cert.horizon["chain_terms"] = cut
            return cert
        worst = max(worst, cert.details["n0"])
    return Certificate(Verdict.HOLDS, None, reg, {"T": reg.T, "L": reg.L, "chain_terms": cut, "seed": seed},
                       {"n0": worst, "restricted_profiles": checked})


def _first_failure(certs: Sequence[tuple[str, Certificate]]) -> tuple[str, Certificate] | None:
    for label, cert in certs:
        if not cert.holds:
            return label, cert
    return None


def _combine(parts: Sequence[tuple[str, Certificate]], reg: Regulator | None, horizon: dict,
             failed_verdict: Verdict = Verdict.VIOLATED) -> Certificate:
    details = {label: cert.verdict.value for label, cert in parts}
    bad = _first_failure(parts)
    if bad is None:
        return Certificate(Verdict.HOLDS, None, reg, horizon, details)
    label, cert = bad
    witness = {"check": label, **(cert.witness or {})}
    return Certificate(failed_verdict, witness, reg, horizon, details)


def _hypothesis_not_met(parts, reg, horizon) -> Certificate:
    label, cert = _first_failure(parts)
    details = {lab: c.verdict.value for lab, c in parts}
    details["failed_hypothesis"] = label
    details["hypothesis_witness"] = cert.witness
    return Certificate(Verdict.HYPOTHESIS_NOT_MET, None, reg, horizon, details)


def s_bounded_from_continuity(
    m: SetFunction,
    k: Any,
    reg: Regulator,
    disjoint_seqs: Sequence[Sequence[int]] | None = None,
    factor: Any = None,
    phi_samples=None,
    seed: int = 0,
) -> Certificate:
    """Continuity plus k-triangularity yield (s)-boundedness w.r.t. ``(k+1)·reg``.

    Hypotheses: m is k-triangular and continuous along each tail-union chain
    ``H_h = ∪_{i>=h} C_i``.  Conclusion: the (s)-bounded certificate w.r.t.
    ``factor·reg``, together with the pointwise step of the argument: for
    every sampled phi, ``m(C_h) <= factor·sup`` for all h past the index
    where the chain profile settles below ``sup``.  ``factor`` defaults to
    k+1; smaller factors may legitimately fail.
    """
    k = Fraction(k)
    factor = k + 1 if factor is None else Fraction(factor)
    seqs = [list(s) for s in (disjoint_seqs or [singletons(m.n)])]
    phis = _phis(reg, phi_samples, seed)
    horizon = {"T": reg.T, "L": reg.L, "sequences": len(seqs), "phi_samples": len(phis), "seed": seed,
               "k": k, "factor": factor}
    hyps = [("k-triangular", _triangular_cert(m, k))]
    chains = []
    for i, seq in enumerate(seqs, 1):
        _check_disjoint(seq)
        chain = tail_union_chain(seq)
        chains.append(chain)
        hyps.append((f"continuous[seq {i}]", continuity_profile(m, chain, reg=reg, phi_samples=phis, seed=seed)[1]))
    if _first_failure(hyps):
        return _hypothesis_not_met(hyps, reg, horizon)
    scaled = reg.scaled(factor)
    parts = []
    for i, (seq, chain) in enumerate(zip(seqs, chains), 1):
        parts.append((f"s-bounded[seq {i}]", s_bounded_profile(m, seq, reg=scaled, phi_samples=phis, seed=seed)[1]))
        parts.append((f"step[seq {i}]", _step_check(m, seq, chain, reg, factor, phis)))
    return _combine(parts, scaled, horizon)


def _step_check(m: SetFunction, seq, chain, reg: Regulator, factor: Fraction, phis) -> Certificate:
    cut = _nonempty_prefix(chain)
    chain_vals = [m(h) for h in chain[:cut]]
    seq_vals = [m(c) for c in seq]
    for phi in phis:
        s = reg.sup(phi)
        n0 = None
        for i in range(len(chain_vals) - 1, -1, -1):
            if chain_vals[i] <= s:
                n0 = i + 1
            else:
                break
        if n0 is None:
            continue
        for h in range(n0, len(seq_vals) + 1):
            if not seq_vals[h - 1] <= factor * s:
                witness = {"phi": list(phi), "h": h, "set": format_set(seq[h - 1]), "value": seq_vals[h - 1],
                           "bound": factor * s, "chain_n0": n0}
                return Certificate(Verdict.VIOLATED, witness, reg.scaled(factor), {"T": reg.T, "L": reg.L})
    return Certificate(Verdict.HOLDS, None, reg.scaled(factor), {"T": reg.T, "L": reg.L})


def _triangular_cert(m: SetFunction, k: Fraction) -> Certificate:
    report = check_k_triangular(m, k, want_minimal=False, limit=1)
    horizon = {"pairs": report.pairs_checked, "k": k}
    if report.ok:
        return Certificate(Verdict.HOLDS, None, None, horizon)
    pair = (report.subadditivity_violations or report.lower_violations)[0]
    kind = "subadditivity" if report.subadditivity_violations else "lower"
    witness = {"A": format_set(pair[0]), "B": format_set(pair[1]), "inequality": kind,
               "m(A)": m(pair[0]), "m(B)": m(pair[1]), "m(A∪B)": m(pair[0] | pair[1])}
    return Certificate(Verdict.VIOLATED, witness, None, horizon)


def _argmax_sequences(m: SetFunction, seq: Sequence[int]) -> list[list[int]]:
    """Disjoint sequences of maximizers ``B_h ⊂ C_h`` of ``v(m)(C_h)``."""
    picks = [argmax_subsets(m, c) for c in seq]
    width = max(len(p) for p in picks)
    return [[p[min(i, len(p) - 1)] for p in picks] for i in range(width)]


def semivariation_inheritance_check(
    source,
    prop: Property | str,
    uniform: bool = False,
    *,
    k: Any = 1,
    reg: Regulator | None = None,
    disjoint_seqs: Sequence[Sequence[int]] | None = None,
    chains: Sequence[Sequence[int]] | None = None,
    member: int | None = None,
    phi_samples=None,
    seed: int = 0,
) -> Certificate:
    """Pass (s)-boundedness or continuity from m (or m_j) to v(m) (or v(m_j)).

    (s)-boundedness keeps the regulator; continuity uses ``(k+1)·reg``.  The
    hypothesis is checked first, on the supplied sequences plus those the
    argument itself feeds it (maximizer sequences, restricted chains); when
    it fails the verdict is HYPOTHESIS-NOT-MET rather than an error, so
    callers can report which hypothesis broke.
    """
    prop = Property(prop)
    k = Fraction(k)
    members, fam_reg, bound = _as_members(source, member, uniform)
    reg = _default_reg(reg, fam_reg, bound)
    n = members[0].n
    phis = _phis(reg, phi_samples, seed)
    horizon = {"T": reg.T, "L": reg.L, "members": len(members), "phi_samples": len(phis), "seed": seed,
               "property": prop.value}
    hyps: list[tuple[str, Certificate]] = []
    parts: list[tuple[str, Certificate]] = []
    semis = [semivariation(m) for m in members]
    if prop is Property.S_BOUNDED:
        seqs = [list(s) for s in (disjoint_seqs or [singletons(n)])]
        for i, seq in enumerate(seqs, 1):
            _check_disjoint(seq)
            derived = [seq] + [b for m in members for b in _argmax_sequences(m, seq)]
            for d, dseq in enumerate(derived):
                label = f"s-bounded[seq {i}]" if d == 0 else f"s-bounded[seq {i} maximizers {d}]"
                hyps.append((label, s_bounded_profile(_pack(members, uniform), dseq, uniform, reg=reg,
                                                      phi_samples=phis, seed=seed)[1]))
        target = reg
        if not _first_failure(hyps):
            for i, seq in enumerate(seqs, 1):
                parts.append((f"v s-bounded[seq {i}]", s_bounded_profile(_pack(semis, uniform), seq, uniform,
                                                                         reg=target, phi_samples=phis, seed=seed)[1]))
    else:
        chains = [list(c) for c in (chains or [tail_chain(n)])]
        for m in members:
            hyps.append((f"k-triangular[{m.name or 'm'}]", _triangular_cert(m, k)))
        for i, chain in enumerate(chains, 1):
            _check_chain(chain)
            for m in members:
                hyps.append((f"continuous[chain {i}, {m.name or 'm'}]",
                             _continuity_with_restrictions(m, chain, reg, phis, seed)))
        target = reg.scaled(k + 1)
        if not _first_failure(hyps):
            for i, chain in enumerate(chains, 1):
                parts.append((f"v continuous[chain {i}]", continuity_profile(_pack(semis, uniform), chain, uniform,
                                                                            reg=target, phi_samples=phis,
                                                                            seed=seed)[1]))
    if _first_failure(hyps):
        return _hypothesis_not_met(hyps, reg, horizon)
    return _combine(parts, target, horizon)


def _pack(members: list[SetFunction], uniform: bool):
    if uniform:
        return SetFunctionFamily(members)
    return members[0]


def uniformity_transfer_check(
    family: SetFunctionFamily,
    chain: Sequence[int],
    W: int,
    reg: Regulator | None = None,
    disjoint_seqs: Sequence[Sequence[int]] | None = None,
    phi_samples=None,
    seed: int = 0,
) -> Certificate:
    """Per-j decay of ``⋁_{A⊂H_n∖W} m_j(A)`` transfers to the uniform sup.

    Preconditions (uniform (s)-boundedness, per-j decay) that fail give
    HYPOTHESIS-NOT-MET; a failing uniform profile on top of them is VIOLATED.
    """
    chain = list(chain)
    _check_chain(chain, closing=False)
    for n, h in enumerate(chain, 1):
        if W & ~h:
            raise ValueError(f"W = {format_set(W)} is not inside H{n} = {format_set(h)}")
    reg = reg or family.regulator
    phis = _phis(reg, phi_samples, seed)
    seqs = [list(s) for s in (disjoint_seqs or [singletons(family.n)])]
    diffs = [h & ~W for h in chain]
    cut = _nonempty_prefix(diffs)
    live = diffs[:cut]
    horizon = {"T": reg.T, "L": reg.L, "J": family.J, "chain_terms": cut, "phi_samples": len(phis), "seed": seed,
               "W": format_set(W)}
    hyps = []
    for i, seq in enumerate(seqs, 1):
        hyps.append((f"uniformly s-bounded[seq {i}]",
                     s_bounded_profile(family, seq, True, reg=reg, phi_samples=phis, seed=seed)[1]))
    semis = [semivariation(m) for m in family.members]
    per_j = [[v(d) for d in live] for v in semis]
    for j, values in enumerate(per_j, 1):
        hyps.append((f"decay[{j}]", _decay(values, reg, phis, seed, live)))
    if _first_failure(hyps):
        return _hypothesis_not_met(hyps, reg, horizon)
    uniform_vals = [join([values[i] for values in per_j]) for i in range(cut)]
    cert = _decay(uniform_vals, reg, phis, seed, live)
    return _combine([("uniform decay", cert)], reg, horizon)


def tau_continuity_check(
    source,
    eta: Submeasure,
    chain: Sequence[int],
    uniform: bool = False,
    *,
    member: int | None = None,
    reg: Regulator | None = None,
    disjoint_seqs: Sequence[Sequence[int]] | None = None,
    phi_samples=None,
    seed: int = 0,
) -> Certificate:
    """(s)-boundedness plus decay of ``m_j(H_n)`` along an eta-null chain.

    The two parts are labelled separately in the certificate details.
    """
    chain = list(chain)
    _check_chain(chain, closing=False)
    members, fam_reg, bound = _as_members(source, member, uniform)
    if eta.n != members[0].n:
        raise ValueError("submeasure and set function live on different algebras")
    if eta(chain[-1]) != 0:
        raise NotTauNull(f"eta({format_set(chain[-1])}) = {eta(chain[-1])}: the chain is not eta-null")
    reg = _default_reg(reg, fam_reg, bound)
    phis = _phis(reg, phi_samples, seed)
    packed = _pack(members, uniform)
    parts = []
    for i, seq in enumerate(disjoint_seqs or [singletons(eta.n)], 1):
        parts.append((f"s-bounded[seq {i}]", s_bounded_profile(packed, list(seq), uniform, reg=reg,
                                                                phi_samples=phis, seed=seed)[1]))
    cut = _nonempty_prefix(chain)
    values = [join([m(h) for m in members]) for h in chain[:cut]]
    parts.append(("decay", _decay(values, reg, phis, seed, chain)))
    horizon = {"T": reg.T, "L": reg.L, "chain_terms": cut, "phi_samples": len(phis), "seed": seed,
               "eta": eta.name}
    return _combine(parts, reg, horizon)


def schur_gap(family: SetFunctionFamily, N: int | None = None) -> list[tuple[int, Value, int | None]]:
    """``(j, ⋁_E |m_j(E) - m_0(E)|, witness E)`` for every member, exhaustively.

    The witness is the first set (in bitmask order) attaining the gap; for
    vector values it may be None when no single set attains the join.
    """
    if family.declared_limit is None:
        raise ValueError("schur_gap needs a declared limit")
    if N is not None and N != family.n:
        raise ValueError(f"family lives on {family.n} atoms, not {N}")
    m0 = family.declared_limit.table
    out = []
    for j, m in enumerate(family.members, 1):
        diffs = [abs(x - y) for x, y in zip(m.table, m0)]
        gap = join(diffs)
        witness = next((mask for mask, d in enumerate(diffs) if d == gap), None)
        out.append((j, gap, witness))
    return out


class Theorem(str, enum.Enum):
    BJ = "BJ"
    N = "N"
    VHS = "VHS"
    S = "S"


@dataclass
class HarnessFixtures:
    """Inputs a theorem harness run needs beyond the family itself."""

    k: Any = 1
    disjoint_seqs: list | None = None
    chains: list | None = None
    eta: Submeasure | None = None
    tau_chains: list | None = None
    reg: Regulator | None = None
    phi_count: int = DEFAULT_PHI_COUNT
    seed: int = 0


@dataclass
class HarnessReport:
    theorem: Theorem
    verdict: str
    hypotheses: list
    conclusions: list
    config: dict
    gaps: list | None = None

    @property
    def failed_hypotheses(self) -> list[str]:
        return [label for label, cert in self.hypotheses if not cert.holds]

    @property
    def failed_conclusions(self) -> list[str]:
        return [label for label, cert in self.conclusions if not cert.holds]

    def to_record(self) -> dict:
        from .records import certificate_record, to_jsonable

        rec = {
            "kind": "harness-report",
            "theorem": self.theorem.value,
            "verdict": self.verdict,
            "config": to_jsonable(self.config),
            "hypotheses": [{"label": lab, **certificate_record(c)} for lab, c in self.hypotheses],
            "conclusions": [{"label": lab, **certificate_record(c)} for lab, c in self.conclusions],
            "failed": self.failed_hypotheses or self.failed_conclusions,
        }
        if self.gaps is not None:
            rec["gaps"] = [{"j": j, "gap": to_jsonable(g), "witness": None if w is None else format_set(w)}
                           for j, g, w in self.gaps]
        return rec


CONSISTENT = "CONSISTENT"
VIOLATION = "VIOLATION"


def theorem_harness(family: SetFunctionFamily, theorem: Theorem | str,
                    fixtures: HarnessFixtures | None = None) -> HarnessReport:
    """Check one convergence theorem on a concrete family.

    Hypotheses are all evaluated (so a report names every one that fails);
    conclusions run only when every hypothesis holds.  Writing a for the
    family regulator and b for the convergence regulator, conclusions use:

    * BJ: ``c = 2(k+2)^2 (a+b)`` for uniform and limit (s)-boundedness;
    * N: ``c_N = (k+1)a + c`` for uniform and limit continuity;
    * VHS: c for (s)-boundedness, c_N for the decay along eta-null chains;
    * S: the N conclusions plus decay of the Schur gaps w.r.t.
      ``(2k+2)(c_N + b)``.
    """
    theorem = Theorem(theorem)
    fx = fixtures or HarnessFixtures()
    k = Fraction(fx.k)
    n = family.n
    a = fx.reg or family.regulator
    b = family.convergence_regulator
    seed = fx.seed
    seqs = [list(s) for s in (fx.disjoint_seqs or [singletons(n)])]
    chains = [list(c) for c in (fx.chains or [tail_chain(n)])]
    for seq in seqs:
        _check_disjoint(seq)
        for c in seq:
            if c >> n:
                raise ValueError(f"fixture set {format_set(c)} lies outside the family's algebra")
    for chain in chains:
        _check_chain(chain)
        if chain[0] >> n:
            raise ValueError(f"fixture chain starts outside the family's algebra")
    eta = fx.eta
    if theorem is Theorem.VHS and eta is None:
        eta = Submeasure(n=n)
    if eta is not None and eta.n != n:
        raise ValueError("fixture submeasure lives on a different algebra")
    tau_chains = [list(c) for c in (fx.tau_chains or chains)]

    c_bj = (a + b).scaled(2 * (k + 2) ** 2)
    c_n = a.scaled(k + 1) + c_bj
    c_s = (c_n + b).scaled(2 * k + 2)
    phis_a = sample_index_maps(a.T, a.L, fx.phi_count, seed)
    config = {
        "theorem": theorem.value, "k": k, "J": family.J, "atoms": n, "seed": seed, "phi_count": fx.phi_count,
        "horizon": {"T": a.T, "L": a.L}, "sequences": [[format_set(c) for c in s] for s in seqs],
        "chains": [[format_set(c) for c in ch] for ch in chains], "family": family.name,
    }

    hyps: list[tuple[str, Certificate]] = []
    hyps.append(("equibounded", Certificate(Verdict.HOLDS, None, None, {"J": family.J}, {"u": family.u})))
    for j, m in enumerate(family.members, 1):
        hyps.append((f"k-triangular[{j}]", _triangular_cert(m, k)))
    if family.declared_limit is None:
        hyps.append(("pointwise-convergence",
                     Certificate(Verdict.VIOLATED, {"reason": "no declared limit"}, b, {"J": family.J})))
    else:
        phis_b = sample_index_maps(b.T, b.L, fx.phi_count, seed)
        hyps.append(("pointwise-convergence", family.pointwise_convergence(phis_b, seed)))
    for j, m in enumerate(family.members, 1):
        if theorem is Theorem.BJ:
            for i, seq in enumerate(seqs, 1):
                hyps.append((f"s-bounded[{j}, seq {i}]",
                             s_bounded_profile(m, seq, reg=a, phi_samples=phis_a, seed=seed)[1]))
        elif theorem in (Theorem.N, Theorem.S):
            for i, chain in enumerate(chains, 1):
                hyps.append((f"continuous[{j}, chain {i}]",
                             _continuity_with_restrictions(m, chain, a, phis_a, seed)))
        else:
            for i, chain in enumerate(tau_chains, 1):
                hyps.append((f"tau-continuous[{j}, chain {i}]",
                             tau_continuity_check(m, eta, chain, reg=a, disjoint_seqs=seqs,
                                                  phi_samples=phis_a, seed=seed)))

    report = HarnessReport(theorem, CONSISTENT, hyps, [], config)
    if any(not cert.holds for _, cert in hyps):
        report.verdict = Verdict.HYPOTHESIS_NOT_MET.value
        return report

    m0 = family.declared_limit
    concl: list[tuple[str, Certificate]] = []

    def phis_for(reg):
        return sample_index_maps(reg.T, reg.L, fx.phi_count, seed)

    concl.append(("limit k-triangular", _triangular_cert(m0, k)))
    if theorem in (Theorem.BJ, Theorem.VHS):
        for i, seq in enumerate(seqs, 1):
            concl.append((f"uniformly s-bounded[seq {i}]",
                          s_bounded_profile(family, seq, True, reg=c_bj, phi_samples=phis_for(c_bj), seed=seed)[1]))
            concl.append((f"limit s-bounded[seq {i}]",
                          s_bounded_profile(m0, seq, reg=c_bj, phi_samples=phis_for(c_bj), seed=seed)[1]))
    if theorem in (Theorem.N, Theorem.S):
        for i, chain in enumerate(chains, 1):
            concl.append((f"uniformly continuous[chain {i}]",
                          continuity_profile(family, chain, True, reg=c_n, phi_samples=phis_for(c_n), seed=seed)[1]))
            concl.append((f"limit continuous[chain {i}]",
                          continuity_profile(m0, chain, reg=c_n, phi_samples=phis_for(c_n), seed=seed)[1]))
    if theorem is Theorem.VHS:
        for i, chain in enumerate(tau_chains, 1):
            concl.append((f"uniformly tau-continuous[chain {i}]",
                          tau_continuity_check(family, eta, chain, True, reg=c_n, disjoint_seqs=seqs,
                                               phi_samples=phis_for(c_n), seed=seed)))
            concl.append((f"limit tau-continuous[chain {i}]",
                          tau_continuity_check(m0, eta, chain, reg=c_n, disjoint_seqs=seqs,
                                               phi_samples=phis_for(c_n), seed=seed)))
    if theorem is Theorem.S:
        gaps = schur_gap(family)
        report.gaps = gaps
        concl.append(("schur-gap decay", _decay([g for _, g, _ in gaps], c_s, phis_for(c_s), seed)))
    report.conclusions = concl
    if any(not cert.holds for _, cert in concl):
        report.verdict = VIOLATION
    return report
