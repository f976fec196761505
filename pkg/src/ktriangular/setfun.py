"""Set functions on finite power-set algebras.

Member sets are atom bitmasks: atom ``a`` (1-based) is bit ``a - 1``.  A power
set trivially has property (E), so no lattice machinery is needed here.

Exhaustive checks enumerate ordered disjoint pairs, 3^n of them; for scalar
tables they run on integers scaled by a common denominator, which keeps
n = 8 sweeps in the low milliseconds.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .lattice import Certificate, Value, Vec, Verdict, as_value, is_nonneg, join, zero_like

__all__ = [
    "MAX_ATOMS",
    "FiniteAlgebra",
    "SetFunction",
    "TriangularityReport",
    "mask_of",
    "atoms_of",
    "format_set",
    "parse_set",
    "submasks",
    "disjoint_pairs",
    "check_k_triangular",
    "minimal_k",
    "semivariation",
    "semivariation_at",
    "argmax_subsets",
    "finite_chain_check",
    "make_series_setfunction",
    "is_monotone",
]

MAX_ATOMS = 24
FULL_TABLE_ATOMS = 16


def mask_of(atoms: Iterable[int]) -> int:
    mask = 0
    for a in atoms:
        if a < 1:
            raise ValueError(f"atoms are numbered from 1, got {a}")
        mask |= 1 << (a - 1)
    return mask


def atoms_of(mask: int) -> list[int]:
    out = []
    a = 1
    while mask:
        if mask & 1:
            out.append(a)
        mask >>= 1
        a += 1
    return out


def format_set(mask: int) -> str:
    """``0b101`` renders as ``{1,3}``; the empty set as ``{}``."""
    return "{" + ",".join(str(a) for a in atoms_of(mask)) + "}"


def parse_set(text: str) -> int:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ValueError(f"expected a set like {{1,3}}, got {text!r}")
    body = text[1:-1].strip()
    return mask_of(int(x) for x in body.split(",")) if body else 0


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask``, from ``mask`` itself down to 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@functools.lru_cache(maxsize=16)
def _pairs_cached(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(_iter_pairs(n))


def _iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    for union in range(1 << n):
        for a in submasks(union):
            yield a, union ^ a


def disjoint_pairs(n: int) -> Iterable[tuple[int, int]]:
    """Every ordered pair (A, B) of disjoint subsets of n atoms."""
    return _pairs_cached(n) if n <= 10 else _iter_pairs(n)


@dataclass(frozen=True)
class FiniteAlgebra:
    """The power set of atoms 1..n."""

    n: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_ATOMS:
            raise ValueError(f"algebra size must be in 0..{MAX_ATOMS}, got {self.n}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def size(self) -> int:
        return 1 << self.n

    def __contains__(self, mask: int) -> bool:
        return 0 <= mask <= self.full

    def members(self) -> range:
        return range(self.size)

    def check(self, mask: int) -> int:
        if mask not in self:
            raise ValueError(f"{format_set(mask)} is not a member of P({{1..{self.n}}})")
        return mask


class SetFunction:
    """A non-negative set function with ``m(∅) = 0`` on a finite power set.

    Three backings exist: an explicit ``table`` indexed by bitmask, a
    ``series`` of weights with ``m(A) = |Σ_{a∈A} w_a|``, and ``derived``
    (an evaluation rule, used for large semivariations).
    """

    def __init__(
        self,
        n: int,
        table: Sequence[Any] | Mapping[int, Any] | None = None,
        *,
        weights: Sequence[Any] | None = None,
        rule: Callable[[int], Value] | None = None,
        tail_bound: Callable[[int], Fraction] | None = None,
        tail_description: str | None = None,
        bound: Any = None,
        name: str = "",
    ):
        self.algebra = FiniteAlgebra(n)
        self.name = name
        self.tail_bound = tail_bound
        self.tail_description = tail_description
        self.weights = None
        self._table = None
        self._rule = None
        self._cache: dict = {}
        given = sum(x is not None for x in (table, weights, rule))
        if given != 1:
            raise ValueError("give exactly one of table, weights or rule")
        if weights is not None:
            w = tuple(Fraction(x) for x in weights)
            if len(w) < n:
                raise ValueError(f"need at least {n} weights, got {len(w)}")
            self.weights = w[:n]
            self.backing = "series"
        elif table is not None:
            self._table = self._coerce_table(table)
            self.backing = "table"
        else:
            self._rule = rule
            self.backing = "derived"
        if self(0) != zero_like(self(0)):
            raise ValueError("m(∅) must be 0")
        if self._table is not None:
            for mask, v in enumerate(self._table):
                if not is_nonneg(v):
                    raise ValueError(f"m({format_set(mask)}) = {v} is negative")
            kinds = {type(v) for v in self._table}
            if len(kinds) > 1:
                raise ValueError("mixed scalar and vector values")
        self._declared_bound = None if bound is None else as_value(bound)
        if self._declared_bound is not None and n <= FULL_TABLE_ATOMS:
            for mask, v in enumerate(self.table):
                if not v <= self._declared_bound:
                    raise ValueError(f"m({format_set(mask)}) exceeds the declared bound")

    def _coerce_table(self, table) -> tuple:
        size = self.algebra.size
        if isinstance(table, Mapping):
            vals = {int(k): as_value(v) for k, v in table.items()}
            sample = next(iter(vals.values()), Fraction(0))
            z = zero_like(sample)
            for k in vals:
                self.algebra.check(k)
            return tuple(vals.get(mask, z) for mask in range(size))
        vals = tuple(as_value(v) for v in table)
        if len(vals) != size:
            raise ValueError(f"table must have 2^{self.algebra.n} = {size} entries, got {len(vals)}")
        return vals

    @property
    def n(self) -> int:
        return self.algebra.n

    def __call__(self, mask: int) -> Value:
        if self._table is not None:
            return self._table[mask]
        if self.weights is not None:
            total = Fraction(0)
            a = 0
            while mask:
                if mask & 1:
                    total += self.weights[a]
                mask >>= 1
                a += 1
            return abs(total)
        return self._rule(mask)

    def of(self, atoms: Iterable[int]) -> Value:
        """Evaluate on a set given by its atoms, e.g. ``m.of({1, 3})``."""
        return self(self.algebra.check(mask_of(atoms)))

    @property
    def table(self) -> tuple:
        """All 2^n values indexed by bitmask (materialized on first use)."""
        if self._table is None:
            if self.n > MAX_ATOMS:
                raise ValueError("too many atoms to tabulate")
            if self.weights is not None:
                signed = [Fraction(0)] * self.algebra.size
                for mask in range(1, self.algebra.size):
                    low = mask & -mask
                    signed[mask] = signed[mask ^ low] + self.weights[low.bit_length() - 1]
                self._table = tuple(abs(x) for x in signed)
            else:
                self._table = tuple(self._rule(mask) for mask in range(self.algebra.size))
        return self._table

    @property
    def is_scalar(self) -> bool:
        return not isinstance(self(self.algebra.full), Vec)

    @property
    def bound(self) -> Value:
        """Declared bound, else the join of all values."""
        if self._declared_bound is not None:
            return self._declared_bound
        if "bound" not in self._cache:
            if self.weights is not None and self.n > FULL_TABLE_ATOMS:
                self._cache["bound"] = sum((abs(w) for w in self.weights), Fraction(0))
            else:
                self._cache["bound"] = join(self.table)
        return self._cache["bound"]

    def scaled(self, c: Any, name: str | None = None) -> SetFunction:
        c = Fraction(c)
        if c < 0:
            raise ValueError("scaling factor must be non-negative")
        nm = name if name is not None else f"{c}*{self.name}" if self.name else ""
        if self.weights is not None:
            tb = None if self.tail_bound is None else (lambda N, f=self.tail_bound: c * f(N))
            return SetFunction(self.n, weights=[c * w for w in self.weights], tail_bound=tb,
                               tail_description=self.tail_description, name=nm)
        return SetFunction(self.n, [c * v for v in self.table], name=nm)

    def __eq__(self, other) -> bool:
        return isinstance(other, SetFunction) and self.n == other.n and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.n, self.table))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<SetFunction{label} n={self.n} backing={self.backing}>"


def _integer_table(m: SetFunction, extra: Sequence[Fraction] = ()) -> tuple[list[int], int] | None:
    """Scalar table rescaled to integers, plus the common denominator used."""
    table = m.table
    if table and isinstance(table[0], Vec):
        return None
    d = 1
    for v in itertools.chain(table, extra):
        d = math.lcm(d, v.denominator)
    return [v.numerator * (d // v.denominator) for v in table], d


def _component_tables(m: SetFunction) -> list[SetFunction]:
    """Split a vector-valued function into scalar components."""
    table = m.table
    dim = table[0].dim
    return [SetFunction(m.n, [v[i] for v in table]) for i in range(dim)]


@dataclass
class TriangularityReport:
    """Exhaustive k-subadditivity / k-triangularity outcome.

    Empty violation lists mean the inequality holds for every ordered
    disjoint pair of the algebra.
    """

    k: Fraction
    subadditivity_violations: list = field(default_factory=list)
    lower_violations: list = field(default_factory=list)
    empty_is_zero: bool = True
    minimal_k: Fraction | None = None
    pairs_checked: int = 0

    @property
    def subadditive(self) -> bool:
        return self.empty_is_zero and not self.subadditivity_violations

    @property
    def ok(self) -> bool:
        return self.subadditive and not self.lower_violations


def check_k_triangular(m: SetFunction, k: Any, *, want_minimal: bool = True, limit: int | None = None) -> TriangularityReport:
    """Test ``m(A∪B) <= m(A) + k m(B)`` and ``m(A) - k m(B) <= m(A∪B)``.

    Every ordered disjoint pair is visited.  ``limit`` caps how many
    violations of each kind are stored (the count is still exact in
    ``pairs_checked``-sized sweeps only when ``limit`` is None).
    """
    k = Fraction(k)
    if k < 0:
        raise ValueError("k must be non-negative")
    report = TriangularityReport(k)
    report.empty_is_zero = m(0) == zero_like(m(0))
    sub, low = report.subadditivity_violations, report.lower_violations
    ints = _integer_table(m, (k,))
    if ints is not None:
        t, d = ints
        kn, kd = k.numerator, k.denominator
        count = 0
        for a, b in disjoint_pairs(m.n):
            count += 1
            u, x, y = t[a | b], t[a], t[b]
            # multiply through by kd to stay in integers
            if u * kd > x * kd + kn * y and (limit is None or len(sub) < limit):
                sub.append((a, b))
            if x * kd - kn * y > u * kd and (limit is None or len(low) < limit):
                low.append((a, b))
        report.pairs_checked = count
        if want_minimal:
            report.minimal_k = minimal_k(m)
        return report
    table = m.table
    count = 0
    for a, b in disjoint_pairs(m.n):
        count += 1
        u, x, y = table[a | b], table[a], table[b]
        if not u <= x + k * y and (limit is None or len(sub) < limit):
            sub.append((a, b))
        if not x - k * y <= u and (limit is None or len(low) < limit):
            low.append((a, b))
    report.pairs_checked = count
    return report


def minimal_k(m: SetFunction) -> Fraction | None:
    """Least k >= 0 making ``m`` k-triangular; None if no finite k works.

    Only defined for scalar functions: the ratio has no canonical meaning
    under a partial order.
    """
    ints = _integer_table(m)
    if ints is None:
        raise TypeError("minimal_k needs a totally ordered (scalar) carrier")
    t, _ = ints
    if t[0] != 0:
        return None
    best_num, best_den = 0, 1
    for a, b in disjoint_pairs(m.n):
        u, x, y = t[a | b], t[a], t[b]
        need = max(u - x, x - u)
        if need <= 0:
            continue
        if y == 0:
            return None
        if need * best_den > best_num * y:
            best_num, best_den = need, y
    return Fraction(best_num, best_den)


def semivariation(m: SetFunction) -> SetFunction:
    """``v(m)(A) = ⋁ {m(B) : B ⊂ A}`` as a new set function.

    Up to 16 atoms the full table comes from a subset-max sweep in
    O(n 2^n) joins; beyond that each query enumerates the 2^|A| subsets.
    """
    cached = m._cache.get("semivariation")
    if cached is not None:
        return cached
    name = f"v({m.name})" if m.name else "v(m)"
    if m.n > FULL_TABLE_ATOMS:
        out = SetFunction(m.n, rule=lambda mask: semivariation_at(m, mask), name=name)
    else:
        v = list(m.table)
        scalar = not isinstance(v[0], Vec)
        for i in range(m.n):
            bit = 1 << i
            for mask in range(m.algebra.size):
                if mask & bit:
                    x, y = v[mask], v[mask ^ bit]
                    if scalar:
                        if y > x:
                            v[mask] = y
                    else:
                        v[mask] = join(x, y)
        out = SetFunction(m.n, v, name=name)
    out._cache["semivariation"] = out
    m._cache["semivariation"] = out
    return out


def semivariation_at(m: SetFunction, mask: int) -> Value:
    """Brute-force ``v(m)(A)`` over all subsets of one set."""
    return join(m(b) for b in submasks(mask))


def argmax_subsets(m: SetFunction, mask: int) -> list[int]:
    """Subsets of ``mask`` attaining ``v(m)(mask)``, one per component.

    For scalars this is the single first maximizer in top-down submask
    order; for vectors each component contributes its own maximizer.
    """
    value = m(mask)
    if isinstance(value, Vec):
        picks = []
        for i in range(value.dim):
            best = max(submasks(mask), key=lambda b: (m(b)[i], -bin(b).count("1")))
            if best not in picks:
                picks.append(best)
        return picks
    best, best_v = mask, m(mask)
    for b in submasks(mask):
        if m(b) > best_v:
            best, best_v = b, m(b)
    return [best]


def finite_chain_check(m: SetFunction, sets: Sequence[int], k: Any) -> Certificate:
    """Both sides of the n-set triangular chain, plus its corollary.

    Checks ``m(E1) - kΣ_{q>=2} m(Eq) <= m(∪Eq) <= m(E1) + kΣ_{q>=2} m(Eq)``
    and ``m(E1) <= m(∪Eq) + kΣ_{q>=2} m(Eq)``.  On failure the witness
    names the induction step (a disjoint pair) where k-triangularity breaks.
    """
    k = Fraction(k)
    sets = [m.algebra.check(s) for s in sets]
    if len(sets) < 2:
        raise ValueError("a chain needs at least two sets")
    seen = 0
    for q, s in enumerate(sets, 1):
        if seen & s:
            raise ValueError(f"set E{q} = {format_set(s)} meets an earlier set")
        seen |= s
    first = m(sets[0])
    rest = sum((m(s) for s in sets[1:]), zero_like(first))
    union = m(seen)
    lower, upper = first - k * rest, first + k * rest
    checks = {
        "lower": lower <= union,
        "upper": union <= upper,
        "corollary": first <= union + k * rest,
    }
    values = {"m(E1)": first, "sum_rest": rest, "m(union)": union, "lower": lower, "upper": upper}
    horizon = {"sets": len(sets), "k": k}
    if all(checks.values()):
        return Certificate(Verdict.HOLDS, None, None, horizon, values)
    step = None
    prefix = sets[0]
    for q, s in enumerate(sets[1:], 2):
        u, x, y = m(prefix | s), m(prefix), m(s)
        if not u <= x + k * y or not x - k * y <= u:
            step = {"step": q, "A": format_set(prefix), "B": format_set(s)}
            break
        prefix |= s
    witness = {"failed": [name for name, ok in checks.items() if not ok], "values": values,
               "sets": [format_set(s) for s in sets], "triangularity_break": step}
    return Certificate(Verdict.VIOLATED, witness, None, horizon, values)


def make_series_setfunction(
    weights: Sequence[Any],
    n: int,
    tail_bound: Callable[[int], Fraction] | None = None,
    tail_description: str | None = None,
    name: str = "",
) -> SetFunction:
    """``m(A) = |Σ_{a∈A} weights[a-1]|`` on the power set of 1..n."""
    return SetFunction(n, weights=weights, tail_bound=tail_bound, tail_description=tail_description, name=name)


def is_monotone(m: SetFunction) -> Certificate:
    """Exhaustive ``m(A) <= m(B)`` for ``A ⊂ B``.

    Covering pairs ``B \\ {a} ⊂ B`` suffice by transitivity.  The scan runs
    top-down (largest B first, atoms in increasing order), so the witness
    is a violation with the largest superset.
    """
    table = m.table
    violations = 0
    witness = None
    for b in range(m.algebra.size - 1, -1, -1):
        for a in atoms_of(b):
            sub = b & ~(1 << (a - 1))
            if not table[sub] <= table[b]:
                violations += 1
                if witness is None:
                    witness = {"A": format_set(sub), "B": format_set(b), "m(A)": table[sub], "m(B)": table[b]}
    horizon = {"atoms": m.n, "covering_pairs": m.n * (1 << max(m.n - 1, 0))}
    if witness is None:
        return Certificate(Verdict.HOLDS, None, None, horizon)
    return Certificate(Verdict.VIOLATED, witness, None, horizon, {"violations": violations})
