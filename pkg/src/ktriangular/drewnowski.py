"""Extracting subsequences of disjoint sets on which a set function is
continuous from above at the empty set.

Functions live on finite subsets of the naturals and are backed by a
weight series ``m(A) = |Σ_{n∈A} w_n|`` with a closed-form tail majorant.
Infinite index blocks are arithmetic progressions ``start + step·i``; block
``(s, d)`` splits into sub-blocks ``r = 1, 2, ...`` with start
``s + d(2^(r-1) - 1)`` and step ``d·2^r``, a partition of the block into
infinitely many infinite pieces.

The semivariation of an infinite union is certified as the exact value on
a finite prefix plus ``k·tail_bound`` on the rest, which is valid for any
k-triangular m.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .lattice import Certificate, OSequence, Regulator, Verdict, o_sequence_from_regulator
from .setfun import SetFunction, check_k_triangular, format_set, mask_of

__all__ = [
    "NoTailBound",
    "NoBlockFound",
    "CountableSetFunction",
    "DisjointSequence",
    "Block",
    "Level",
    "ExtractionTrace",
    "exact_semivariation",
    "brute_semivariation",
    "certify_block",
    "default_targets",
    "derive_b",
    "extract_continuous_subsequence",
    "extract_for_family",
    "verify_restricted_continuity",
    "pushforward",
]

DEFAULT_WIDTH = 64
DEFAULT_PREFIX = 32
VALIDATION_HORIZON = 512
SPOT_CHECK_HORIZON = 10**4
_GRID_BITS = 96
B_COLUMNS = 64


class NoTailBound(ValueError):
    """The weight series has no usable tail majorant."""


class NoBlockFound(RuntimeError):
    def __init__(self, level: int, target: Fraction, width: int):
        super().__init__(f"NO-BLOCK-FOUND: no sub-block certifies <= {target} at level {level} "
                         f"within search width {width}")
        self.level = level
        self.target = target
        self.width = width


def _alternating_power(p: int) -> tuple[Callable[[int], Fraction], Callable[[int], Fraction]]:
    def weight(n: int) -> Fraction:
        return Fraction((-1) ** n, n**p)

    def tail(N: int) -> Fraction:
        # Σ_{n>=N} n^-p <= ∫_{N-1}^∞ x^-p dx for N >= 2
        if N <= 1:
            return Fraction(p, p - 1)
        return Fraction(1, (p - 1) * (N - 1) ** (p - 1))

    return weight, tail


def _geometric(q: Fraction) -> tuple[Callable[[int], Fraction], Callable[[int], Fraction]]:
    a = abs(q)

    def weight(n: int) -> Fraction:
        return q**n

    def tail(N: int) -> Fraction:
        return a ** max(N, 1) / (1 - a)

    return weight, tail


def _zero() -> tuple[Callable[[int], Fraction], Callable[[int], Fraction]]:
    return (lambda n: Fraction(0)), (lambda N: Fraction(0))


class CountableSetFunction:
    """``m(A) = |Σ_{n∈A} w_n|`` on finite subsets of {1, 2, ...}.

    ``tail_bound(N)`` must dominate ``Σ_{n>=N} |w_n|``; it is checked to be
    non-increasing and above the exact partial tails up to a validation
    horizon.  ``k`` is the triangularity constant used in certificates.
    """

    def __init__(
        self,
        weight: Callable[[int], Any],
        tail_bound: Callable[[int], Any] | None,
        k: Any = 1,
        descriptor: str = "custom",
        validate: int = VALIDATION_HORIZON,
    ):
        if tail_bound is None:
            raise NoTailBound(f"{descriptor}: a tail bound is required")
        self.weight = weight
        self.tail_bound = tail_bound
        self.k = Fraction(k)
        self.descriptor = descriptor
        if validate:
            self._validate(validate)

    @classmethod
    def from_descriptor(cls, text: str, validate: int = VALIDATION_HORIZON) -> CountableSetFunction:
        """``"alternating-power p"``, ``"geometric q"`` or ``"zero"``.

        Instances are immutable, so repeated descriptors share one validated
        object.
        """
        if cls is CountableSetFunction:
            return _from_descriptor(" ".join(text.split()), validate)
        return cls._build(text, validate)

    @classmethod
    def _build(cls, text: str, validate: int) -> CountableSetFunction:
        parts = text.split()
        if not parts:
            raise ValueError("empty weight rule")
        name, args = parts[0], parts[1:]
        if name == "alternating-power":
            if len(args) != 1:
                raise ValueError("alternating-power takes one integer exponent")
            p = int(args[0])
            if p < 2:
                raise NoTailBound(f"alternating-power {p}: |w_n| = n^-{p} is not summable")
            weight, tail = _alternating_power(p)
        elif name == "geometric":
            if len(args) != 1:
                raise ValueError("geometric takes one rational ratio")
            q = Fraction(args[0])
            if not abs(q) < 1:
                raise NoTailBound(f"geometric {q}: ratio must satisfy |q| < 1")
            weight, tail = _geometric(q)
        elif name == "zero":
            weight, tail = _zero()
        elif name == "harmonic":
            raise NoTailBound("harmonic: |w_n| = 1/n is not summable, so no tail bound exists")
        else:
            raise ValueError(f"unknown weight rule {name!r}")
        return cls(weight, tail, 1, " ".join(parts), validate)

    def _validate(self, horizon: int) -> None:
        """Exact partial tails up to ``horizon``, then a cheaper screen to 10^4.

        Past ``horizon`` each ``|w_n|`` is rounded down to a multiple of
        2^-96, so the running sums are lower bounds of the true partial
        tails and a bound below them is certainly wrong.
        """
        far = max(horizon, SPOT_CHECK_HORIZON) if horizon >= VALIDATION_HORIZON else horizon
        grid = 1 << _GRID_BITS
        low = 0
        prev = None
        for N in range(far, horizon, -1):
            w = abs(Fraction(self.weight(N)))
            low += w.numerator * grid // w.denominator
            tb = Fraction(self.tail_bound(N))
            if tb * grid < low:
                raise NoTailBound(f"{self.descriptor}: tail_bound({N}) = {tb} is below a partial tail")
            if prev is not None and tb < prev:
                raise NoTailBound(f"{self.descriptor}: tail_bound increases at N = {N + 1}")
            prev = tb
        tail = Fraction(low, grid)
        exact = Fraction(0)
        for N in range(horizon, 0, -1):
            exact += abs(Fraction(self.weight(N)))
            tb = Fraction(self.tail_bound(N))
            if tb < exact or tb < tail:
                raise NoTailBound(f"{self.descriptor}: tail_bound({N}) = {tb} is below the partial tail {exact}")
            if prev is not None and tb < prev:
                raise NoTailBound(f"{self.descriptor}: tail_bound increases at N = {N + 1}")
            prev = tb

    def __call__(self, atoms: Iterable[int]) -> Fraction:
        return abs(sum((Fraction(self.weight(n)) for n in atoms), Fraction(0)))

    def scaled(self, c: Any) -> CountableSetFunction:
        c = Fraction(c)
        if c < 0:
            raise ValueError("scaling factor must be non-negative")
        w, tb = self.weight, self.tail_bound
        return CountableSetFunction(lambda n: c * w(n), lambda N: c * tb(N), self.k, f"{c}*({self.descriptor})",
                                    validate=0)

    def restrict(self, n: int) -> SetFunction:
        """The finite set function on atoms 1..n."""
        return SetFunction(n, weights=[Fraction(self.weight(a)) for a in range(1, n + 1)],
                           tail_description=self.descriptor, name=self.descriptor)

    def regulator(self, T: int = 1, L: int = B_COLUMNS) -> Regulator:
        """Rows ``a[t, l] = k·tail_bound(l+1)``: tails of the series."""
        return Regulator.from_rule(T, L, lambda t, l: self.k * Fraction(self.tail_bound(l + 1)))

    def __repr__(self) -> str:
        return f"<CountableSetFunction {self.descriptor!r} k={self.k}>"


@functools.lru_cache(maxsize=64)
def _from_descriptor(text: str, validate: int) -> CountableSetFunction:
    return CountableSetFunction._build(text, validate)


@dataclass(frozen=True)
class DisjointSequence:
    """``h -> C_h``, pairwise disjoint finite sets of naturals.

    ``min_atom(H)`` is a lower bound for every atom of every ``C_h`` with
    ``h >= H``; tail certificates depend on it.
    """

    rule: Callable[[int], frozenset]
    min_atom: Callable[[int], int]
    descriptor: str

    def __call__(self, h: int) -> frozenset:
        return self.rule(h)

    @classmethod
    def singletons(cls) -> DisjointSequence:
        return cls(lambda h: frozenset((h,)), lambda H: H, "singletons")

    @classmethod
    def pairs(cls) -> DisjointSequence:
        return cls(lambda h: frozenset((2 * h - 1, 2 * h)), lambda H: 2 * H - 1, "pairs")

    @classmethod
    def evens(cls) -> DisjointSequence:
        return cls(lambda h: frozenset((2 * h,)), lambda H: 2 * H, "evens")

    @classmethod
    def intervals(cls, width: int) -> DisjointSequence:
        return cls(lambda h: frozenset(range(width * (h - 1) + 1, width * h + 1)),
                   lambda H: width * (H - 1) + 1, f"intervals {width}")

    @classmethod
    def from_descriptor(cls, text: str) -> DisjointSequence:
        parts = text.split()
        if parts == ["singletons"]:
            return cls.singletons()
        if parts == ["pairs"]:
            return cls.pairs()
        if parts == ["evens"]:
            return cls.evens()
        if len(parts) == 2 and parts[0] == "intervals":
            return cls.intervals(int(parts[1]))
        raise ValueError(f"unknown disjoint sequence {text!r}")


@dataclass(frozen=True)
class Block:
    """The index progression ``start, start+step, start+2·step, ...``."""

    start: int
    step: int

    def __post_init__(self):
        if self.start < 1 or self.step < 1:
            raise ValueError("blocks start at a positive index with a positive step")

    def __contains__(self, h: int) -> bool:
        return h >= self.start and (h - self.start) % self.step == 0

    def element(self, i: int) -> int:
        """0-based i-th element."""
        return self.start + self.step * i

    def prefix(self, count: int) -> list[int]:
        return [self.start + self.step * i for i in range(count)]

    def sub(self, r: int) -> Block:
        """Sub-block r (1-based) of the dyadic partition."""
        if r < 1:
            raise ValueError("sub-blocks are numbered from 1")
        return Block(self.start + self.step * (2 ** (r - 1) - 1), self.step * 2**r)

    def first_after(self, n: int) -> int:
        if n < self.start:
            return self.start
        return self.start + self.step * ((n - self.start) // self.step + 1)

    def within(self, other: Block) -> bool:
        return self.step % other.step == 0 and self.start in other

    def describe(self) -> str:
        return f"{self.start}+{self.step}i"


def exact_semivariation(m: CountableSetFunction, atoms: Iterable[int]) -> Fraction:
    """``v(m)(A)`` for finite A: the larger of the positive and negative mass."""
    pos = neg = Fraction(0)
    for n in set(atoms):
        w = Fraction(m.weight(n))
        if w > 0:
            pos += w
        else:
            neg -= w
    return max(pos, neg)


def brute_semivariation(m: CountableSetFunction, atoms: Iterable[int]) -> Fraction:
    """Reference ``v(m)(A)`` by enumerating all subsets (small A only)."""
    atoms = sorted(set(atoms))
    if len(atoms) > 20:
        raise ValueError("too many atoms for brute force")
    w = [Fraction(m.weight(a)) for a in atoms]
    best = Fraction(0)
    for mask in range(1 << len(atoms)):
        s = sum((w[i] for i in range(len(atoms)) if mask >> i & 1), Fraction(0))
        best = max(best, abs(s))
    return best


def certify_block(m: CountableSetFunction, C: DisjointSequence, block: Block,
                  prefix_len: int = DEFAULT_PREFIX) -> dict:
    """Upper bound for ``v(m)(∪_{h∈block} C_h)``: exact prefix plus tail."""
    hs = block.prefix(prefix_len)
    atoms = set().union(*(C(h) for h in hs))
    cutoff = C.min_atom(block.element(prefix_len))
    exact = exact_semivariation(m, atoms)
    tail = m.k * Fraction(m.tail_bound(cutoff))
    return {"exact_prefix": exact, "tail_part": tail, "cutoff": cutoff, "attained": exact + tail,
            "prefix_indices": len(hs)}


def default_targets(L: int) -> list[Fraction]:
    return [Fraction(1, l) for l in range(1, L + 1)]


def derive_b(ms: Sequence[CountableSetFunction], targets: Sequence[Any]) -> OSequence:
    """b from the series regulator(s) via the (O)-sequence conversion.

    For several functions the regulators are joined entrywise, so one b
    serves every member.
    """
    columns = max(B_COLUMNS, 2 * len(targets))
    regs = [m.regulator(1, columns) for m in ms]
    if len(regs) == 1:
        reg = regs[0]
    else:
        reg = Regulator.from_rule(1, columns, lambda t, l: max(r[t, l] for r in regs))
    pairs = o_sequence_from_regulator(reg, [Fraction(x) for x in targets])
    return OSequence(tuple(sigma for sigma, _ in pairs))


@dataclass
class Level:
    l: int
    r: int
    block: Block
    target: Fraction
    certified: list
    n: int

    @property
    def attained(self) -> Fraction:
        return max(c["attained"] for c in self.certified)


@dataclass
class ExtractionTrace:
    weights: list[str]
    sequence: str
    b: tuple
    levels: list[Level] = field(default_factory=list)
    width: int = DEFAULT_WIDTH
    prefix_len: int = DEFAULT_PREFIX

    @property
    def indices(self) -> list[int]:
        return [lv.n for lv in self.levels]

    @property
    def L(self) -> int:
        return len(self.levels)

    def to_record(self) -> dict:
        from .records import frac_str, to_jsonable

        return {
            "kind": "extraction-trace",
            "weights": self.weights,
            "sequence": self.sequence,
            "b": [frac_str(x) for x in self.b],
            "width": self.width,
            "prefix_len": self.prefix_len,
            "indices": self.indices,
            "levels": [
                {"l": lv.l, "r": lv.r, "block": lv.block.describe(), "block_prefix": lv.block.prefix(8),
                 "target": frac_str(lv.target), "n": lv.n, "certified": to_jsonable(lv.certified)}
                for lv in self.levels
            ],
        }


def _extract(ms: Sequence[CountableSetFunction], C: DisjointSequence, L: int, b: OSequence | Sequence | None,
             width: int, prefix_len: int, targets: Sequence[Any] | None) -> ExtractionTrace:
    if L < 1:
        raise ValueError("need at least one level")
    if b is None:
        b = derive_b(ms, targets if targets is not None else default_targets(L))
    elif not isinstance(b, OSequence):
        b = OSequence(tuple(Fraction(x) for x in b))
    if len(b) < L:
        raise ValueError(f"b has {len(b)} terms but {L} levels were requested")
    trace = ExtractionTrace([m.descriptor for m in ms], C.descriptor, tuple(b.values[:L]), width=width,
                            prefix_len=prefix_len)
    current = Block(1, 1)
    last_n = 0
    for l in range(1, L + 1):
        target = b[l - 1]
        active = ms[: min(l, len(ms))]
        chosen = None
        for r in range(1, width + 1):
            cand = current.sub(r)
            certs = [certify_block(m, C, cand, prefix_len) for m in active]
            if all(c["attained"] <= target for c in certs):
                chosen = (r, cand, certs)
                break
        if chosen is None:
            raise NoBlockFound(l, target, width)
        r, current, certs = chosen
        last_n = current.first_after(last_n)
        trace.levels.append(Level(l, r, current, target, certs, last_n))
    return trace


def extract_continuous_subsequence(
    m: CountableSetFunction,
    C: DisjointSequence,
    L: int,
    b: OSequence | Sequence | None = None,
    *,
    targets: Sequence[Any] | None = None,
    width: int = DEFAULT_WIDTH,
    prefix_len: int = DEFAULT_PREFIX,
) -> ExtractionTrace:
    """Nested blocks with certified semivariation ``<= b_l`` and indices in them.

    Level l takes the first sub-block of the previous block whose union is
    certified below ``b_l``, then ``n_l`` is its first element beyond
    ``n_{l-1}``.  Without ``b`` it is derived from the series regulator
    with ``targets`` (default ``1/l``).
    """
    return _extract([m], C, L, b, width, prefix_len, targets)


def extract_for_family(
    ms: Sequence[CountableSetFunction],
    C: DisjointSequence,
    L: int,
    u: Any,
    b: OSequence | Sequence | None = None,
    *,
    targets: Sequence[Any] | None = None,
    width: int = DEFAULT_WIDTH,
    prefix_len: int = DEFAULT_PREFIX,
) -> ExtractionTrace:
    """Diagonal extraction: level l certifies every ``m_j`` with ``j <= l``.

    One nested block chain serves the whole family, so ``m_j`` is controlled
    on every tail union starting at a level ``>= j``.
    """
    if not ms:
        raise ValueError("empty family")
    u = Fraction(u)
    for j, m in enumerate(ms, 1):
        if Fraction(m.tail_bound(1)) > u:
            raise ValueError(f"member {j} is not bounded by u = {u} (total mass up to {m.tail_bound(1)})")
    return _extract(list(ms), C, L, b, width, prefix_len, targets)


def _union(C: DisjointSequence, hs: Iterable[int]) -> set[int]:
    out: set[int] = set()
    for h in hs:
        out |= C(h)
    return out


def verify_restricted_continuity(
    trace: ExtractionTrace,
    m: CountableSetFunction | Sequence[CountableSetFunction],
    C: DisjointSequence,
    chain_depth: int | None = None,
    samples: int = 64,
    seed: int = 0,
) -> Certificate:
    """Structural and exact checks of an extraction trace.

    Structure: blocks nested, indices increasing and inside their blocks,
    certified bounds below b, b non-increasing.  Exact: for the tail unions
    ``F_s = ∪_{s<=h<=L} C_{n_h}`` and seeded random unions of suffixes,
    ``v(m_j)(F) <= b_{min index of F}`` for every member j certified there.
    """
    ms = [m] if isinstance(m, CountableSetFunction) else list(m)
    L = trace.L
    depth = L if chain_depth is None else min(chain_depth, L)
    horizon = {"levels": L, "chain_depth": depth, "samples": samples, "seed": seed, "members": len(ms)}
    b = list(trace.b)

    def fail(check: str, **info) -> Certificate:
        return Certificate(Verdict.VIOLATED, {"check": check, **info}, None, horizon)

    for i in range(len(b) - 1):
        if b[i + 1] > b[i]:
            return fail("b non-increasing", level=i + 2)
    prev_block = Block(1, 1)
    prev_n = 0
    for lv in trace.levels:
        if not lv.block.within(prev_block):
            return fail("nested blocks", level=lv.l, block=lv.block.describe(), parent=prev_block.describe())
        if lv.n <= prev_n:
            return fail("increasing indices", level=lv.l, n=lv.n, previous=prev_n)
        if lv.n not in lv.block:
            return fail("index in block", level=lv.l, n=lv.n, block=lv.block.describe())
        if lv.attained > b[lv.l - 1]:
            return fail("certified bound", level=lv.l, attained=lv.attained, b=b[lv.l - 1])
        prev_block, prev_n = lv.block, lv.n
    idx = trace.indices
    checked = 0
    unions: list[tuple[int, list[int]]] = [(s, list(range(s, L + 1))) for s in range(1, depth + 1)]
    rng = random.Random(seed)
    for _ in range(samples if L else 0):
        s = rng.randint(1, depth)
        chosen = [s] + [h for h in range(s + 1, L + 1) if rng.random() < 0.5]
        unions.append((s, chosen))
    for s, hs in unions:
        atoms = _union(C, (idx[h - 1] for h in hs))
        for j, mj in enumerate(ms, 1):
            if j > s:
                continue
            value = exact_semivariation(mj, atoms)
            checked += 1
            if value > b[s - 1]:
                return fail("restricted continuity", s=s, member=j, levels=hs, value=value, b=b[s - 1],
                            indices=[idx[h - 1] for h in hs])
    return Certificate(Verdict.HOLDS, None, None, horizon, {"unions_checked": checked, "indices": idx})


def pushforward(
    m: SetFunction | CountableSetFunction,
    blocks: Sequence[Iterable[int]] | DisjointSequence,
    R: int | None = None,
    k: Any = None,
) -> SetFunction:
    """``μ(A) = m(∪_{r∈A} blocks[r])`` on the power set of 1..R.

    Blocks are finite atom sets (1-based).  With ``k`` given (or taken from
    a countable m) the result is checked k-triangular and a failure raises.
    """
    if isinstance(blocks, DisjointSequence):
        if R is None:
            raise ValueError("R is required with a rule-based sequence")
        blocks = [blocks(r) for r in range(1, R + 1)]
    blocks = [frozenset(b) for b in blocks]
    R = len(blocks) if R is None else R
    if len(blocks) != R:
        raise ValueError(f"{len(blocks)} blocks given for R = {R}")
    seen: set[int] = set()
    for r, blk in enumerate(blocks, 1):
        if seen & blk:
            raise ValueError(f"block {r} meets an earlier block")
        seen |= blk
    if isinstance(m, SetFunction):
        for r, blk in enumerate(blocks, 1):
            if blk and max(blk) > m.n:
                raise ValueError(f"block {r} = {sorted(blk)} lies outside atoms 1..{m.n}")
        bmasks = [mask_of(blk) for blk in blocks]
        table = []
        union = [0] * (1 << R)
        for A in range(1 << R):
            if A:
                low = A & -A
                union[A] = union[A ^ low] | bmasks[low.bit_length() - 1]
            table.append(m(union[A]))
    else:
        bw = [sum((Fraction(m.weight(a)) for a in blk), Fraction(0)) for blk in blocks]
        signed = [Fraction(0)] * (1 << R)
        for A in range(1, 1 << R):
            low = A & -A
            signed[A] = signed[A ^ low] + bw[low.bit_length() - 1]
        table = [abs(x) for x in signed]
        if k is None:
            k = m.k
    mu = SetFunction(R, table, name="pushforward")
    if k is not None:
        report = check_k_triangular(mu, k, want_minimal=False, limit=1)
        if not report.ok:
            pair = (report.subadditivity_violations or report.lower_violations)[0]
            raise ValueError(f"pushforward is not {k}-triangular at ({format_set(pair[0])}, {format_set(pair[1])})")
    return mu
