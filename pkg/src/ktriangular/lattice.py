"""Exact lattice-group values, (O)-sequences, regulators and (D)-convergence.

Two carriers are supported: rational scalars (``fractions.Fraction``) and
fixed-dimension rational vectors (:class:`Vec`) ordered componentwise.  Both
are Dedekind complete and weakly sigma-distributive, so every check below is
exact.  All infinitary quantifiers are evaluated at an explicit horizon which
is recorded in the returned :class:`Certificate`.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Sequence, Union

__all__ = [
    "Vec",
    "Value",
    "as_value",
    "join",
    "meet",
    "zero_like",
    "is_nonneg",
    "OSequence",
    "Regulator",
    "IndexMap",
    "Verdict",
    "Certificate",
    "NoSuchColumn",
    "regulator_sup",
    "regulator_from_o_sequence",
    "o_sequence_from_regulator",
    "fremlin_combine",
    "fremlin_sides",
    "fremlin_failures",
    "sample_index_maps",
    "d_converges",
    "stable_indices",
    "subsequence_principle_check",
    "all_subsequences",
    "weak_sigma_estimate",
]

DEFAULT_PHI_COUNT = 1000


class Vec:
    """Rational vector with the componentwise lattice order.

    ``<=`` is the partial order, so ``not (x <= y)`` and ``y < x`` differ.
    Never feed vectors to the builtin ``max``; use :func:`join`.
    """

    __slots__ = ("_c",)

    def __init__(self, components: Iterable[Any]):
        c = tuple(Fraction(x) for x in components)
        if not c:
            raise ValueError("a vector value needs at least one component")
        object.__setattr__(self, "_c", c)

    def __setattr__(self, name, value):
        raise AttributeError("Vec is immutable")

    @property
    def components(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def dim(self) -> int:
        return len(self._c)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, i: int) -> Fraction:
        return self._c[i]

    def _same(self, other: Vec) -> None:
        if not isinstance(other, Vec):
            raise TypeError(f"cannot combine Vec with {type(other).__name__}")
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: Vec) -> Vec:
        self._same(other)
        return Vec(a + b for a, b in zip(self._c, other._c))

    def __sub__(self, other: Vec) -> Vec:
        self._same(other)
        return Vec(a - b for a, b in zip(self._c, other._c))

    def __neg__(self) -> Vec:
        return Vec(-a for a in self._c)

    def __abs__(self) -> Vec:
        return Vec(abs(a) for a in self._c)

    def __mul__(self, c) -> Vec:
        if isinstance(c, Vec):
            return NotImplemented
        c = Fraction(c)
        return Vec(c * a for a in self._c)

    __rmul__ = __mul__

    def __le__(self, other: Vec) -> bool:
        self._same(other)
        return all(a <= b for a, b in zip(self._c, other._c))

    def __ge__(self, other: Vec) -> bool:
        self._same(other)
        return all(a >= b for a, b in zip(self._c, other._c))

    def __lt__(self, other: Vec) -> bool:
        return self <= other and self != other

    def __gt__(self, other: Vec) -> bool:
        return self >= other and self != other

    def __eq__(self, other) -> bool:
        return isinstance(other, Vec) and self._c == other._c

    def __hash__(self) -> int:
        return hash(("Vec", self._c))

    def __repr__(self) -> str:
        return "Vec(" + ", ".join(str(a) for a in self._c) + ")"


Value = Union[Fraction, Vec]
IndexMap = tuple  # phi: t -> l, stored 1-based as phi[t-1]


def as_value(x: Any) -> Value:
    """Coerce ints, strings like ``"3/4"``, Fractions and sequences."""
    if isinstance(x, (Vec, Fraction)):
        return x
    if isinstance(x, (list, tuple)):
        return Vec(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or 'p/q' string")
    return Fraction(x)


def zero_like(x: Value) -> Value:
    if isinstance(x, Vec):
        return Vec([0] * x.dim)
    return Fraction(0)


def is_nonneg(x: Value) -> bool:
    if isinstance(x, Vec):
        return all(a >= 0 for a in x)
    return x >= 0


def _join2(a: Value, b: Value) -> Value:
    if isinstance(a, Vec):
        a._same(b)
        return Vec(max(p, q) for p, q in zip(a, b))
    if isinstance(b, Vec):
        raise TypeError("cannot join a scalar with a vector")
    return a if a >= b else b


def _meet2(a: Value, b: Value) -> Value:
    if isinstance(a, Vec):
        a._same(b)
        return Vec(min(p, q) for p, q in zip(a, b))
    if isinstance(b, Vec):
        raise TypeError("cannot meet a scalar with a vector")
    return a if a <= b else b


def join(*xs: Value) -> Value:
    """Finite supremum.  ``join()`` of nothing is undefined and raises."""
    if len(xs) == 1 and not isinstance(xs[0], (Fraction, Vec)):
        xs = tuple(xs[0])
    if not xs:
        raise ValueError("join of an empty family")
    out = xs[0]
    for x in xs[1:]:
        out = _join2(out, x)
    return out


def meet(*xs: Value) -> Value:
    if len(xs) == 1 and not isinstance(xs[0], (Fraction, Vec)):
        xs = tuple(xs[0])
    if not xs:
        raise ValueError("meet of an empty family")
    out = xs[0]
    for x in xs[1:]:
        out = _meet2(out, x)
    return out


def _tolerance_like(tol: Fraction, x: Value) -> Value:
    return Vec([tol] * x.dim) if isinstance(x, Vec) else tol


@dataclass(frozen=True)
class OSequence:
    """A truncated (O)-sequence: non-negative and non-increasing.

    Whether the infimum is zero can only be checked at the horizon; see
    :attr:`vanishes`.  Construction does not require it so that degenerate
    inputs can still be built and then flagged.
    """

    values: tuple
    tolerance: Fraction = Fraction(0)

    def __post_init__(self):
        vals = tuple(as_value(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "tolerance", Fraction(self.tolerance))
        if not vals:
            raise ValueError("an (O)-sequence needs at least one term")
        for p, v in enumerate(vals):
            if not is_nonneg(v):
                raise ValueError(f"term {p + 1} is negative: {v}")
        for p in range(len(vals) - 1):
            if not vals[p + 1] <= vals[p]:
                raise ValueError(f"not non-increasing at p={p + 1}: {vals[p]} then {vals[p + 1]}")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, p: int) -> Value:
        return self.values[p]

    @property
    def vanishes(self) -> bool:
        last = self.values[-1]
        return last <= _tolerance_like(self.tolerance, last)


@dataclass(frozen=True)
class Regulator:
    """A T x L truncation of a (D)-sequence.

    Indices are 1-based as in ``reg[t, l]``.  Rows must be non-increasing and
    every entry is bounded by ``bound`` (defaults to the join of all entries).
    """

    entries: tuple
    bound: Any = None
    tolerance: Fraction = Fraction(0)

    def __post_init__(self):
        rows = tuple(tuple(as_value(v) for v in row) for row in self.entries)
        if not rows or not rows[0]:
            raise ValueError("a regulator needs at least one row and one column")
        width = len(rows[0])
        for t, row in enumerate(rows, 1):
            if len(row) != width:
                raise ValueError(f"row {t} has {len(row)} entries, expected {width}")
            for l, v in enumerate(row, 1):
                if not is_nonneg(v):
                    raise ValueError(f"negative entry at ({t},{l})")
            for l in range(width - 1):
                if not row[l + 1] <= row[l]:
                    raise ValueError(f"row {t} increases between l={l + 1} and l={l + 2}")
        object.__setattr__(self, "entries", rows)
        bound = join(v for row in rows for v in row) if self.bound is None else as_value(self.bound)
        object.__setattr__(self, "bound", bound)
        object.__setattr__(self, "tolerance", Fraction(self.tolerance))
        for t, row in enumerate(rows, 1):
            if not row[0] <= bound:
                raise ValueError(f"row {t} exceeds the declared bound {bound}")

    @classmethod
    def from_rule(cls, T: int, L: int, rule: Callable[[int, int], Any], bound=None) -> Regulator:
        return cls(tuple(tuple(rule(t, l) for l in range(1, L + 1)) for t in range(1, T + 1)), bound)

    @classmethod
    def zero(cls, T: int, L: int, like: Value = Fraction(0)) -> Regulator:
        z = zero_like(like)
        return cls.from_rule(T, L, lambda t, l: z)

    @classmethod
    def harmonic(cls, scale: Any, T: int, L: int) -> Regulator:
        """``a[t, l] = scale / l``, the workhorse regulator of the tests."""
        s = as_value(scale)
        return cls.from_rule(T, L, lambda t, l: s * Fraction(1, l))

    @property
    def T(self) -> int:
        return len(self.entries)

    @property
    def L(self) -> int:
        return len(self.entries[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.T, self.L

    def __getitem__(self, tl: tuple[int, int]) -> Value:
        t, l = tl
        if not (1 <= t <= self.T and 1 <= l <= self.L):
            raise IndexError(f"({t},{l}) outside the {self.T}x{self.L} horizon")
        return self.entries[t - 1][l - 1]

    def row(self, t: int) -> OSequence:
        return OSequence(self.entries[t - 1], self.tolerance)

    @property
    def vanishes(self) -> bool:
        """Every row reaches the tolerance by column L."""
        return all(self.row(t).vanishes for t in range(1, self.T + 1))

    def sup(self, phi: Sequence[int]) -> Value:
        return regulator_sup(self, phi)

    def scaled(self, c: Any) -> Regulator:
        c = Fraction(c)
        if c < 0:
            raise ValueError("regulators can only be scaled by non-negative factors")
        return Regulator(tuple(tuple(c * v for v in row) for row in self.entries), c * self.bound, self.tolerance)

    def padded(self, T: int, L: int) -> Regulator:
        """Extend to T x L by repeating the last column and the last row.

        This matches the clipping convention ``min(l, L)`` used elsewhere and
        keeps rows non-increasing.
        """
        if T < self.T or L < self.L:
            raise ValueError("padding cannot shrink a regulator")
        rows = [list(row) + [row[-1]] * (L - self.L) for row in self.entries]
        rows += [list(rows[-1]) for _ in range(T - self.T)]
        return Regulator(tuple(map(tuple, rows)), self.bound, self.tolerance)

    def __add__(self, other: Regulator) -> Regulator:
        T, L = max(self.T, other.T), max(self.L, other.L)
        a, b = self.padded(T, L), other.padded(T, L)
        rows = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.entries, b.entries))
        return Regulator(rows, self.bound + other.bound, max(self.tolerance, other.tolerance))


class Verdict(str, enum.Enum):
    HOLDS = "HOLDS-AT-HORIZON"
    VIOLATED = "VIOLATED"
    HYPOTHESIS_NOT_MET = "HYPOTHESIS-NOT-MET"

    def __str__(self) -> str:
        return self.value


@dataclass
class Certificate:
    """Outcome of a check at a recorded horizon.

    A VIOLATED certificate always carries a witness that reproducibly fails
    the checked inequality.
    """

    verdict: Verdict
    witness: dict | None = None
    regulator: Regulator | None = None
    horizon: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.verdict = Verdict(self.verdict)
        if self.verdict is Verdict.VIOLATED and not self.witness:
            raise ValueError("a VIOLATED certificate needs a witness")

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    def to_record(self) -> dict:
        from .records import certificate_record

        return certificate_record(self)


class NoSuchColumn(ValueError):
    """A regulator row never descends below a target within its horizon."""

    def __init__(self, t: int, target: Value, L: int):
        super().__init__(f"NO-SUCH-COLUMN: row {t} stays above {target} for all l <= {L}")
        self.t = t
        self.target = target
        self.L = L


def _check_phi(reg: Regulator, phi: Sequence[int]) -> None:
    if len(phi) != reg.T:
        raise ValueError(f"index map has {len(phi)} entries but the regulator has {reg.T} rows")
    for t, l in enumerate(phi, 1):
        if not 1 <= l <= reg.L:
            raise ValueError(f"phi({t})={l} outside 1..{reg.L}")


def regulator_sup(reg: Regulator, phi: Sequence[int]) -> Value:
    """Finite truncation of the supremum over t of ``reg[t, phi(t)]``."""
    _check_phi(reg, phi)
    return join(reg.entries[t][l - 1] for t, l in enumerate(phi))


def regulator_from_o_sequence(sigma: OSequence, T: int | None = None) -> Regulator:
    """The regulator whose every row is ``sigma``.

    For every phi the first-row entry ``sigma[phi(1)]`` is dominated by the
    supremum along phi, so (D)-convergence w.r.t. the result follows from
    (O)-convergence w.r.t. ``sigma``.
    """
    if not isinstance(sigma, OSequence):
        sigma = OSequence(tuple(sigma))
    T = len(sigma) if T is None else T
    return Regulator(tuple(sigma.values for _ in range(T)), tolerance=sigma.tolerance)


def o_sequence_from_regulator(reg: Regulator, targets: Sequence[Any]) -> list[tuple[Value, IndexMap]]:
    """For each target pick the earliest column in every row that is below it.

    Returns ``(sigma_p, phi_p)`` pairs with ``sigma_p = reg.sup(phi_p) <= targets[p]``.
    Raises :class:`NoSuchColumn` when the horizon L is too short.
    """
    targets = [as_value(x) for x in targets]
    for a, b in zip(targets, targets[1:]):
        if not (b <= a and b != a):
            raise ValueError("targets must be strictly decreasing")
    out = []
    for target in targets:
        phi = []
        for t, row in enumerate(reg.entries, 1):
            l = next((l for l, v in enumerate(row, 1) if v <= target), None)
            if l is None:
                raise NoSuchColumn(t, target, reg.L)
            phi.append(l)
        phi = tuple(phi)
        out.append((regulator_sup(reg, phi), phi))
    return out


def fremlin_combine(regs: Sequence[Regulator], u: Any) -> Regulator:
    """Combine regulators into one (D)-sequence dominating their shifted sums.

    With ``N = len(regs)`` the result has ``max_n(T_n + n)`` rows and entries

        a[s, l] = u ∧ ( ⋁_n 2^n regs[n][s-n, l]  ∨  ⋁_n 2^n regs[n][s, min(l+n, L)] )

    The first part handles the row shift ``phi(t+n)``, the second the column
    shift ``phi(t)+n``.  Both rest on ``Σ_n x_n <= ⋁_n 2^n x_n`` for
    non-negative ``x_n`` and on distributivity of ∧ over finite joins.
    """
    if not regs:
        raise ValueError("fremlin_combine needs at least one regulator")
    u = as_value(u)
    if not is_nonneg(u):
        raise ValueError("u must be non-negative")
    L = max(r.L for r in regs)
    regs = [r.padded(r.T, L) for r in regs]
    T = max(r.T + n for n, r in enumerate(regs, 1))
    zero = zero_like(u)
    rows = []
    for s in range(1, T + 1):
        row = []
        for l in range(1, L + 1):
            acc = zero
            for n, r in enumerate(regs, 1):
                w = 2**n
                if 1 <= s - n <= r.T:
                    acc = _join2(acc, w * r.entries[s - n - 1][l - 1])
                if s <= r.T:
                    acc = _join2(acc, w * r.entries[s - 1][min(l + n, L) - 1])
            row.append(_meet2(u, acc))
        rows.append(tuple(row))
    return Regulator(tuple(rows), u)


def fremlin_sides(
    regs: Sequence[Regulator], u: Any, combined: Regulator, phi: Sequence[int], q: int, shift: str = "row"
) -> tuple[Value, Value]:
    """Both sides of the combination inequality at one (phi, q).

    ``shift="row"`` evaluates ``u ∧ Σ_{n<=q} ⋁_t regs[n][t, phi(t+n)]``;
    ``shift="column"`` evaluates ``u ∧ Σ_{n<=q} ⋁_t regs[n][t, min(phi(t)+n, L)]``.
    ``phi`` must cover every row of ``combined``.  Returns ``(lhs, rhs)``.
    """
    u = as_value(u)
    L = combined.L
    total = zero_like(u)
    for n, r in enumerate(regs[:q], 1):
        if shift == "row":
            terms = [r.entries[t - 1][min(phi[t + n - 1], r.L) - 1] for t in range(1, r.T + 1)]
        elif shift == "column":
            terms = [r.entries[t - 1][min(phi[t - 1] + n, L, r.L) - 1] for t in range(1, r.T + 1)]
        else:
            raise ValueError(f"unknown shift {shift!r}")
        total = total + join(terms)
    return _meet2(u, total), regulator_sup(combined, phi)


def fremlin_failures(
    regs: Sequence[Regulator],
    u: Any,
    combined: Regulator,
    phis: Iterable[Sequence[int]],
    shifts: Sequence[str] = ("row", "column"),
) -> list[dict]:
    """Every ``(phi, q, shift)`` where the combination inequality fails.

    Same quantities as :func:`fremlin_sides`, with the partial sums over n
    shared across q.
    """
    u = as_value(u)
    L = combined.L
    failures = []
    for phi in phis:
        rhs = regulator_sup(combined, phi)
        for shift in shifts:
            total = zero_like(u)
            for q, r in enumerate(regs, 1):
                if shift == "row":
                    terms = (r.entries[t - 1][min(phi[t + q - 1], r.L) - 1] for t in range(1, r.T + 1))
                elif shift == "column":
                    terms = (r.entries[t - 1][min(phi[t - 1] + q, L, r.L) - 1] for t in range(1, r.T + 1))
                else:
                    raise ValueError(f"unknown shift {shift!r}")
                total = total + join(terms)
                lhs = _meet2(u, total)
                if not lhs <= rhs:
                    failures.append({"phi": tuple(phi), "q": q, "shift": shift, "lhs": lhs, "rhs": rhs})
    return failures


def sample_index_maps(T: int, L: int, count: int = DEFAULT_PHI_COUNT, seed: int = 0) -> list[IndexMap]:
    """Constant maps, staircases ``min(t+c, L)``, then ``count`` random maps."""
    return list(_sample_index_maps(T, L, count, seed))


@functools.lru_cache(maxsize=64)
def _sample_index_maps(T: int, L: int, count: int, seed: int) -> tuple[IndexMap, ...]:
    maps: dict[IndexMap, None] = {}
    for c in range(1, L + 1):
        maps[(c,) * T] = None
    for c in range(L):
        maps[tuple(min(t + c, L) for t in range(1, T + 1))] = None
    rng = random.Random(seed)
    for _ in range(count):
        maps[tuple(rng.randint(1, L) for _ in range(T))] = None
    return tuple(maps)


@functools.lru_cache(maxsize=256)
def _distinct_sups(reg: Regulator, phis: tuple) -> tuple[tuple[Value, IndexMap], ...]:
    """Each distinct ``reg.sup(phi)`` with the first phi attaining it."""
    out: dict[Value, IndexMap] = {}
    for phi in phis:
        out.setdefault(regulator_sup(reg, phi), phi)
    return tuple((s, phi) for s, phi in out.items())


def _first_stable(values: Sequence[Value], bound: Value) -> int | None:
    """1-based n0 such that values[n-1] <= bound for all n >= n0, or None."""
    n0 = None
    for i in range(len(values) - 1, -1, -1):
        if values[i] <= bound:
            n0 = i + 1
        else:
            break
    return n0


def stable_indices(
    values: Sequence[Value], reg: Regulator, phis: Sequence[Sequence[int]]
) -> list[tuple[IndexMap, Value, int | None]]:
    """For each phi: ``(phi, reg.sup(phi), n0)`` where n0 starts the satisfied tail."""
    cache: dict[Any, int | None] = {}
    out = []
    for phi in phis:
        s = regulator_sup(reg, phi)
        if s not in cache:
            cache[s] = _first_stable(values, s)
        out.append((tuple(phi), s, cache[s]))
    return out


def _horizon(reg: Regulator, length: int, phis: Sequence) -> dict:
    return {"T": reg.T, "L": reg.L, "length": length, "phi_samples": len(phis)}


def d_converges(
    seq: Sequence[Any],
    limit: Any,
    reg: Regulator,
    phi_samples: Sequence[Sequence[int]] | None = None,
    seed: int = 0,
) -> Certificate:
    """(D)-convergence of ``seq`` to ``limit`` at the horizon.

    HOLDS iff for every sampled phi some n0 <= len(seq) has
    ``|seq[n] - limit| <= reg.sup(phi)`` for all n >= n0.
    """
    if not seq:
        raise ValueError("d_converges needs a non-empty sequence")
    limit = as_value(limit)
    values = [abs(as_value(x) - limit) for x in seq]
    phis = sample_index_maps(reg.T, reg.L, seed=seed) if phi_samples is None else list(phi_samples)
    horizon = _horizon(reg, len(values), phis)
    horizon["seed"] = seed
    worst = 1
    for s, phi in _distinct_sups(reg, tuple(map(tuple, phis))):
        n0 = _first_stable(values, s)
        if n0 is None:
            failing = [n for n, v in enumerate(values, 1) if not v <= s]
            witness = {"phi": list(phi), "n": failing[-1], "value": values[failing[-1] - 1], "bound": s,
                       "failing": failing}
            return Certificate(Verdict.VIOLATED, witness, reg, horizon)
        worst = max(worst, n0)
    return Certificate(Verdict.HOLDS, None, reg, horizon, {"n0": worst})


def all_subsequences(min_len: int = 3) -> Callable[[int], Iterator[tuple[int, ...]]]:
    """Selector yielding every index subsequence (1-based) of length >= min_len."""

    def select(length: int) -> Iterator[tuple[int, ...]]:
        idx = range(1, length + 1)
        for r in range(min(min_len, length), length + 1):
            yield from itertools.combinations(idx, r)

    return select


def subsequence_principle_check(
    seq: Sequence[Any],
    limit: Any,
    reg: Regulator,
    selector: Callable[[int], Iterable[Sequence[int]]] | None = None,
    phi_samples: Sequence[Sequence[int]] | None = None,
    min_len: int = 3,
    seed: int = 0,
) -> Certificate:
    """Instance of the subsequence principle at the horizon.

    Each selected subsequence is searched for a sub-subsequence of length
    ``min(min_len, len(sub))`` that (D)-converges w.r.t. ``reg``.  The verdict
    mirrors (D)-convergence of the whole sequence; when it fails the witness
    is a subsequence with no convergent sub-subsequence.  Only finitely many
    subsequences are examined; their count is recorded in the horizon.
    """
    if not seq:
        raise ValueError("empty sequence")
    limit = as_value(limit)
    values = [abs(as_value(x) - limit) for x in seq]
    phis = sample_index_maps(reg.T, reg.L, seed=seed) if phi_samples is None else list(phi_samples)
    sups = list(dict.fromkeys(regulator_sup(reg, phi) for phi in phis))
    good = [all(v <= s for s in sups) for v in values]
    if selector is None:
        selector = all_subsequences(min_len) if len(seq) <= 12 else _default_selector(min_len, seed)

    def convergent_subsub(sub: Sequence[int]) -> tuple[int, ...] | None:
        need = min(min_len, len(sub))
        for pos in range(need, len(sub) + 1):
            if good[sub[pos - 1] - 1]:
                return tuple(sub[: need - 1]) + (sub[pos - 1],)
        return None

    examined = 0
    bad_sub = None
    for sub in selector(len(seq)):
        sub = tuple(sub)
        examined += 1
        if bad_sub is None and convergent_subsub(sub) is None:
            bad_sub = sub
    conclusion = d_converges(seq, limit, reg, phis, seed)
    horizon = dict(conclusion.horizon, subsequences_examined=examined, min_len=min_len)
    details = {"hypothesis_met": bad_sub is None}
    if conclusion.holds:
        return Certificate(Verdict.HOLDS, None, reg, horizon, details)
    constructed = bad_sub is None
    if constructed:
        # every failing index for the violating phi; no element of it can be good
        bad_sub = tuple(conclusion.witness["failing"])
        details["implication_broken"] = convergent_subsub(bad_sub) is not None
    witness = {"subsequence": list(bad_sub), "constructed": constructed, "phi": conclusion.witness["phi"],
               "n": conclusion.witness["n"], "value": conclusion.witness["value"],
               "bound": conclusion.witness["bound"]}
    return Certificate(Verdict.VIOLATED, witness, reg, horizon, details)


def _default_selector(min_len: int, seed: int) -> Callable[[int], Iterator[tuple[int, ...]]]:
    def select(length: int) -> Iterator[tuple[int, ...]]:
        idx = list(range(1, length + 1))
        yield tuple(idx)
        yield tuple(idx[0::2])
        yield tuple(idx[1::2])
        for start in range(1, length):
            yield tuple(idx[start:])
        rng = random.Random(seed)
        for _ in range(256):
            r = rng.randint(min(min_len, length), length)
            yield tuple(sorted(rng.sample(idx, r)))

    return select


def weak_sigma_estimate(reg: Regulator, phi_samples: Sequence[Sequence[int]] | None = None, seed: int = 0) -> Value:
    """Meet over sampled phi of ``reg.sup(phi)``; demonstration only.

    For the rational carriers the true infimum over all phi is zero whenever
    every row vanishes, so this merely illustrates weak sigma-distributivity.
    """
    phis = sample_index_maps(reg.T, reg.L, seed=seed) if phi_samples is None else phi_samples
    return meet(regulator_sup(reg, phi) for phi in phis)


def lcm_denominator(values: Iterable[Fraction]) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return d
