"""Fixture generators and the shipped regression corpus.

Every fixture is reproducible from ``(generator, params, seed)``.  The
corpus directory holds one JSON file per fixture plus ``manifest.json``
with sha256 checksums; :func:`verify_corpus` regenerates each fixture,
compares it with the shipped file and re-checks the expected values.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .lattice import Regulator, regulator_from_o_sequence
from .limits import SetFunctionFamily, s_bounded_from_continuity, s_bounded_profile, schur_gap, singletons
from .records import (
    dumps,
    frac_str,
    parse_frac,
    parse_value,
    regulator_from_record,
    regulator_record,
    setfunction_from_record,
    setfunction_record,
    to_jsonable,
)
from .setfun import (
    SetFunction,
    check_k_triangular,
    format_set,
    is_monotone,
    make_series_setfunction,
    mask_of,
    minimal_k,
    parse_set,
    semivariation,
)

__all__ = [
    "GenerationBudgetExceeded",
    "FixtureDescriptor",
    "measuroid_weights",
    "measuroid_tail",
    "gen_measuroid",
    "gen_zero",
    "gen_scaled_family",
    "gen_hump_family",
    "gen_random_ksubadditive",
    "gen_additive_family",
    "family_record",
    "family_from_record",
    "FIXTURES",
    "build_fixture",
    "check_expected",
    "corpus_dir",
    "write_corpus",
    "load_fixture",
    "verify_corpus",
]


class GenerationBudgetExceeded(RuntimeError):
    def __init__(self, budget: int, n: int, k: Fraction):
        super().__init__(f"no {k}-subadditive candidate on {n} atoms within a budget of {budget} attempts")
        self.budget = budget


def measuroid_weights(n: int) -> list[Fraction]:
    """``(-1)^a / a^2`` for a = 1..n."""
    return [Fraction((-1) ** a, a * a) for a in range(1, n + 1)]


def measuroid_tail(N: int) -> Fraction:
    return Fraction(2) if N <= 1 else Fraction(1, N - 1)


def gen_measuroid(n: int) -> SetFunction:
    """``|Σ_{a∈A} (-1)^a/a^2|``: 1-triangular but not monotone."""
    return make_series_setfunction(measuroid_weights(n), n, tail_bound=measuroid_tail,
                                   tail_description="alternating-power 2", name=f"measuroid-{n}")


def gen_zero(n: int) -> SetFunction:
    return SetFunction(n, [Fraction(0)] * (1 << n), name=f"zero-{n}")


_SCALE_RULES = {
    "1+1/j": (lambda j: 1 + Fraction(1, j), Fraction(1)),
    "constant": (lambda j: Fraction(1), Fraction(1)),
    "2-1/j": (lambda j: 2 - Fraction(1, j), Fraction(2)),
}


def _tail_sup_regulator(diffs: Sequence[Fraction], scale: Any) -> Regulator:
    """One row ``σ_l = max_{j>=l} diffs[j]·scale``: non-increasing by construction."""
    sigma = []
    running = Fraction(0)
    for d in reversed(diffs):
        running = max(running, d)
        sigma.append(running)
    sigma.reverse()
    return Regulator((tuple(scale * s for s in sigma),))


def gen_scaled_family(
    m: SetFunction,
    scales: Sequence[Any] | str = "1+1/j",
    J: int | None = None,
    limit: Any = None,
) -> SetFunctionFamily:
    """``m_j = scales[j]·m`` with limit ``(lim scales)·m``.

    ``scales`` is an explicit list (then ``limit`` is required unless the
    list is constant) or one of ``"1+1/j"``, ``"constant"``, ``"2-1/j"``.
    """
    if isinstance(scales, str):
        if scales not in _SCALE_RULES:
            raise ValueError(f"unknown scale rule {scales!r}")
        rule, lim = _SCALE_RULES[scales]
        J = 10 if J is None else J
        vals = [rule(j) for j in range(1, J + 1)]
        name = f"{scales} x {m.name}"
    else:
        vals = [Fraction(s) for s in scales]
        if not vals:
            raise ValueError("empty scale list")
        if limit is None:
            if len(set(vals)) != 1:
                raise ValueError("give the limit of a non-constant scale list")
            limit = vals[0]
        lim = Fraction(limit)
        name = f"scaled x {m.name}"
    lim = Fraction(limit) if limit is not None else lim
    if any(s <= 0 for s in vals) or lim <= 0:
        raise ValueError("scales and their limit must be positive")
    members = [m.scaled(s, name=f"{s}*{m.name}") for s in vals]
    conv = _tail_sup_regulator([abs(s - lim) for s in vals], m.bound)
    return SetFunctionFamily(members, m.scaled(lim, name=f"{lim}*{m.name}"), conv, name=name)


def gen_hump_family(n: int, humps: Sequence[Any] | None = None) -> SetFunctionFamily:
    """``m_j(A) = 1`` if the j-th hump lies inside A, else 0.

    Humps are atom sets (default singletons 1..n).  Only singleton humps give
    1-triangular members; anything else is rejected on construction.
    """
    if humps is None:
        hmasks = singletons(n)
    else:
        hmasks = [h if isinstance(h, int) else mask_of(h) for h in humps]
    seen = 0
    for j, h in enumerate(hmasks, 1):
        if h == 0 or h >> n:
            raise ValueError(f"hump {j} must be a non-empty subset of 1..{n}")
        if seen & h:
            raise ValueError(f"hump {j} = {format_set(h)} meets an earlier hump")
        seen |= h
    members = []
    for j, h in enumerate(hmasks, 1):
        m = SetFunction(n, [Fraction(int(mask & h == h)) for mask in range(1 << n)], name=f"hump-{j}")
        report = check_k_triangular(m, 1, want_minimal=False, limit=1)
        if not report.ok:
            raise ValueError(f"hump member {j} on {format_set(h)} is not 1-triangular")
        members.append(m)
    return SetFunctionFamily(members, gen_zero(n), name=f"hump-{n}")


def _random_weights(rng: random.Random, n: int, den: int = 12) -> list[Fraction]:
    return [Fraction(rng.randint(-den, den), den) for _ in range(n)]


def _signed_table(weights: Sequence[Fraction], n: int) -> list[Fraction]:
    signed = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        signed[mask] = signed[mask ^ low] + weights[low.bit_length() - 1]
    return signed


def _normalize(table: list[Fraction], bound: Fraction) -> list[Fraction]:
    top = max(table)
    if top == 0:
        return table
    return [v * bound / top for v in table]


def _candidate(rng: random.Random, n: int, k: Fraction, bound: Fraction) -> tuple[str, list[Fraction]]:
    size = 1 << n
    strategy = rng.choice(["band", "measure", "max-measures", "cardinality", "uniform"])
    den = rng.choice([4, 6, 12, 60])
    if strategy == "band":
        lo = bound / (k + 1) if k + 1 > 0 else bound
        vals = [Fraction(0)] + [lo + (bound - lo) * Fraction(rng.randint(0, den), den) for _ in range(size - 1)]
        return strategy, vals
    if strategy == "measure":
        return strategy, _normalize([abs(x) for x in _signed_table(_random_weights(rng, n), n)], bound)
    if strategy == "max-measures":
        tables = [[abs(x) for x in _signed_table(_random_weights(rng, n), n)] for _ in range(rng.randint(2, 3))]
        return strategy, _normalize([max(col) for col in zip(*tables)], bound)
    if strategy == "cardinality":
        f = [Fraction(0)] + [Fraction(rng.randint(1, den), den) for _ in range(n)]
        return strategy, _normalize([f[bin(mask).count("1")] for mask in range(size)], bound)
    return strategy, [Fraction(0)] + [bound * Fraction(rng.randint(0, den), den) for _ in range(size - 1)]


def gen_random_ksubadditive(
    n: int,
    k: Any,
    bound: Any = 1,
    seed: int = 0,
    *,
    triangular: bool = False,
    budget: int = 1000,
    return_stats: bool = False,
):
    """A seeded random table passing the exhaustive k-subadditivity check.

    Candidates mix band tables in ``[bound/(k+1), bound]``, absolute values of
    signed measures, maxima of those, cardinality-based tables and raw
    uniform tables; the first that passes is returned.  With
    ``triangular=True`` the lower inequality is required too.  For k = 0
    only the zero function qualifies, so the budget runs out unless
    ``bound == 0``.
    """
    if not 0 <= n <= 8:
        raise ValueError("random generation is limited to n <= 8 atoms")
    k, bound = Fraction(k), Fraction(bound)
    if k < 0 or bound < 0:
        raise ValueError("k and bound must be non-negative")
    name = f"random-n{n}-k{k}-s{seed}"
    if bound == 0:
        m = gen_zero(n)
        m.name = name
        return (m, {"attempts": 0, "strategy": "zero"}) if return_stats else m
    rng = random.Random(f"ksub:{n}:{k}:{bound}:{seed}")
    for attempt in range(1, budget + 1):
        strategy, table = _candidate(rng, n, k, bound)
        m = SetFunction(n, table, name=name)
        report = check_k_triangular(m, k, want_minimal=False, limit=1)
        if report.ok if triangular else report.subadditive:
            stats = {"attempts": attempt, "strategy": strategy}
            return (m, stats) if return_stats else m
    raise GenerationBudgetExceeded(budget, n, k)


def gen_additive_family(n: int, J: int = 10, seed: int = 0) -> SetFunctionFamily:
    """``m_j = |μ + μ'/j|`` for seeded signed measures μ, μ'; limit ``|μ|``."""
    rng = random.Random(f"additive:{n}:{seed}")
    mu = _random_weights(rng, n)
    nu = _random_weights(rng, n)
    members = [SetFunction(n, weights=[a + b / j for a, b in zip(mu, nu)], name=f"additive-{seed}-{j}")
               for j in range(1, J + 1)]
    limit = SetFunction(n, weights=mu, name=f"additive-{seed}-limit")
    mass = sum((abs(b) for b in nu), Fraction(0))
    conv = _tail_sup_regulator([Fraction(1, j) for j in range(1, J + 1)], mass)
    return SetFunctionFamily(members, limit, conv, name=f"additive-{n}-{seed}")


def family_record(fam: SetFunctionFamily) -> dict:
    return {
        "kind": "family",
        "name": fam.name,
        "atoms": fam.n,
        "members": [setfunction_record(m) for m in fam.members],
        "declared_limit": None if fam.declared_limit is None else setfunction_record(fam.declared_limit),
        "convergence_regulator": regulator_record(fam.convergence_regulator),
        "regulator": regulator_record(fam.regulator),
    }


def family_from_record(rec: dict) -> SetFunctionFamily:
    members = [setfunction_from_record(r) for r in rec["members"]]
    limit = rec.get("declared_limit")
    return SetFunctionFamily(
        members,
        None if limit is None else setfunction_from_record(limit),
        regulator_from_record(rec["convergence_regulator"]) if rec.get("convergence_regulator") else None,
        regulator_from_record(rec["regulator"]) if rec.get("regulator") else None,
        name=rec.get("name", ""),
    )


@dataclass
class FixtureDescriptor:
    """How to regenerate a fixture and what it must satisfy.

    Each expected entry carries a ``tag``: ``example`` for hand-worked
    values, ``computed`` for values from an independent computation,
    ``boundary`` for degenerate cases.
    """

    name: str
    generator: str
    params: dict
    seed: int = 0
    expected: list = field(default_factory=list)


def _e(check: str, tag: str, **kw) -> dict:
    return {"check": check, "tag": tag, **kw}


FIXTURES: list[FixtureDescriptor] = [
    FixtureDescriptor("measuroid-3", "measuroid", {"n": 3}, 0, [
        _e("value", "example", set="{1,3}", value="10/9"),
        _e("value", "example", set="{1,2,3}", value="31/36"),
        _e("value", "boundary", set="{}", value="0/1"),
        _e("monotone", "example", value=False, witness=["{1,3}", "{1,2,3}"]),
        _e("semivariation", "computed", set="{1,2,3}", value="10/9"),
        _e("k-triangular", "example", k="1/1", value=True),
        _e("k-triangular", "computed", k="0/1", value=False),
        _e("minimal-k", "computed", value="1/1"),
    ]),
    FixtureDescriptor("measuroid-8", "measuroid", {"n": 8}, 0, [
        _e("value", "example", set="{1,3}", value="10/9"),
        _e("k-triangular", "example", k="1/1", value=True),
        _e("monotone", "example", value=False),
    ]),
    FixtureDescriptor("measuroid-8-misscaled", "measuroid", {
        "n": 8, "regulator_sigma": ["1/1", "1/2", "1/4", "1/8", "1/16", "1/60"]}, 0, [
        _e("s-bounded-from-continuity", "computed", k="1/1", factor="2/1", value="HOLDS-AT-HORIZON"),
        _e("s-bounded-from-continuity", "computed", k="1/1", factor="1/1", value="VIOLATED"),
    ]),
    FixtureDescriptor("zero-4", "zero", {"n": 4}, 0, [
        _e("value", "boundary", set="{1,2,3,4}", value="0/1"),
        _e("k-triangular", "boundary", k="0/1", value=True),
        _e("monotone", "boundary", value=True),
        _e("minimal-k", "boundary", value="0/1"),
    ]),
    FixtureDescriptor("scaled-measuroid-3", "scaled-family", {"n": 3, "scales": "1+1/j", "J": 50}, 0, [
        _e("schur-gap", "computed", j=1, value="10/9", witness="{1,3}"),
        _e("schur-gap", "computed", j=2, value="5/9", witness="{1,3}"),
        _e("schur-gap", "computed", j=50, value="1/45", witness="{1,3}"),
        _e("value", "computed", member=1, set="{1,3}", value="20/9"),
    ]),
    FixtureDescriptor("constant-measuroid-3", "scaled-family", {"n": 3, "scales": "constant", "J": 5}, 0, [
        _e("schur-gap", "boundary", j=1, value="0/1", witness="{}"),
        _e("schur-gap", "boundary", j=5, value="0/1", witness="{}"),
    ]),
    FixtureDescriptor("doubling-measuroid-3", "scaled-family", {"n": 3, "scales": "2-1/j", "J": 20}, 0, [
        _e("limit-value", "computed", set="{1,3}", value="20/9"),
        _e("value", "computed", member=1, set="{1,3}", value="10/9"),
    ]),
    FixtureDescriptor("hump-10", "hump-family", {"n": 10}, 0, [
        _e("value", "computed", member=3, set="{3}", value="1/1"),
        _e("value", "boundary", member=3, set="{1,2,3,4,5,6,7,8,9,10}", value="1/1"),
        _e("value", "boundary", member=3, set="{}", value="0/1"),
        _e("k-triangular", "computed", member=1, k="1/1", value=True),
        _e("k-triangular", "computed", member=1, k="0/1", value=False),
        _e("uniform-s-bounded", "computed", value="VIOLATED"),
    ]),
    FixtureDescriptor("additive-6", "additive-family", {"n": 6, "J": 12}, 7, [
        _e("k-triangular", "computed", member=1, k="1/1", value=True),
        _e("k-triangular", "computed", limit=True, k="1/1", value=True),
    ]),
    FixtureDescriptor("random-n4-k1", "random-ksubadditive", {"n": 4, "k": "1/1", "bound": "1/1"}, 0, [
        _e("k-subadditive", "computed", k="1/1", value=True),
    ]),
    FixtureDescriptor("random-n6-k2", "random-ksubadditive", {"n": 6, "k": "2/1", "bound": "1/1"}, 3, [
        _e("k-subadditive", "computed", k="2/1", value=True),
        _e("semivariation-k-triangular", "computed", k="2/1", value=True),
    ]),
]


def build_fixture(desc: FixtureDescriptor) -> dict:
    """Regenerate the JSON-ready record of a fixture."""
    p = desc.params
    rec: dict[str, Any] = {"name": desc.name, "generator": desc.generator, "params": p, "seed": desc.seed,
                           "expected": desc.expected}
    if desc.generator == "measuroid":
        rec["setfunction"] = setfunction_record(gen_measuroid(p["n"]))
        if "regulator_sigma" in p:
            sigma = [parse_frac(x) for x in p["regulator_sigma"]]
            rec["regulator"] = regulator_record(regulator_from_o_sequence(sigma))
    elif desc.generator == "zero":
        rec["setfunction"] = setfunction_record(gen_zero(p["n"]))
    elif desc.generator == "scaled-family":
        rec["family"] = family_record(gen_scaled_family(gen_measuroid(p["n"]), p["scales"], p.get("J")))
    elif desc.generator == "hump-family":
        rec["family"] = family_record(gen_hump_family(p["n"], p.get("humps")))
    elif desc.generator == "additive-family":
        rec["family"] = family_record(gen_additive_family(p["n"], p["J"], desc.seed))
    elif desc.generator == "random-ksubadditive":
        m, stats = gen_random_ksubadditive(p["n"], parse_frac(p["k"]), parse_frac(p["bound"]), desc.seed,
                                           return_stats=True)
        rec["setfunction"] = setfunction_record(m)
        rec["generation"] = stats
    else:
        raise ValueError(f"unknown generator {desc.generator!r}")
    return to_jsonable(rec)


def _target(rec: dict, entry: dict) -> SetFunction:
    if "setfunction" in rec:
        return setfunction_from_record(rec["setfunction"])
    fam = family_from_record(rec["family"])
    if entry.get("limit"):
        return fam.declared_limit
    return fam[int(entry.get("member", 1))]


def _k_of(entry: dict) -> Fraction:
    return parse_frac(entry["k"])


def check_expected(rec: dict) -> list[tuple[dict, bool, Any]]:
    """Evaluate every expected entry; returns ``(entry, ok, observed)``."""
    out = []
    for entry in rec["expected"]:
        check = entry["check"]
        if check == "value":
            m = _target(rec, entry)
            got = m(parse_set(entry["set"]))
            ok = got == parse_value(entry["value"])
        elif check == "limit-value":
            got = family_from_record(rec["family"]).declared_limit(parse_set(entry["set"]))
            ok = got == parse_value(entry["value"])
        elif check == "semivariation":
            got = semivariation(_target(rec, entry))(parse_set(entry["set"]))
            ok = got == parse_value(entry["value"])
        elif check == "monotone":
            cert = is_monotone(_target(rec, entry))
            if cert.holds:
                got, ok = True, entry["value"] is True
            else:
                got = [cert.witness["A"], cert.witness["B"]]
                ok = entry["value"] is False and entry.get("witness", got) == got
        elif check in ("k-triangular", "k-subadditive"):
            report = check_k_triangular(_target(rec, entry), _k_of(entry), want_minimal=False, limit=1)
            got = report.ok if check == "k-triangular" else report.subadditive
            ok = got == entry["value"]
        elif check == "semivariation-k-triangular":
            got = check_k_triangular(semivariation(_target(rec, entry)), _k_of(entry), want_minimal=False,
                                     limit=1).ok
            ok = got == entry["value"]
        elif check == "minimal-k":
            got = minimal_k(_target(rec, entry))
            ok = got == parse_frac(entry["value"])
        elif check == "schur-gap":
            gaps = schur_gap(family_from_record(rec["family"]))
            _, gap, witness = gaps[entry["j"] - 1]
            got = [gap, format_set(witness)]
            ok = gap == parse_value(entry["value"]) and format_set(witness) == entry["witness"]
        elif check == "uniform-s-bounded":
            fam = family_from_record(rec["family"])
            got = s_bounded_profile(fam, singletons(fam.n), True)[1].verdict.value
            ok = got == entry["value"]
        elif check == "s-bounded-from-continuity":
            m = _target(rec, entry)
            reg = regulator_from_record(rec["regulator"])
            got = s_bounded_from_continuity(m, _k_of(entry), reg, factor=parse_frac(entry["factor"])).verdict.value
            ok = got == entry["value"]
        else:
            raise ValueError(f"unknown expected check {check!r}")
        out.append((entry, ok, got))
    return out


def corpus_dir() -> Path:
    return Path(__file__).parent / "data" / "corpus"


def _serialize(rec: dict) -> str:
    return dumps(rec) + "\n"


def write_corpus(directory: Path | None = None) -> dict:
    """Regenerate all fixture files and the manifest."""
    directory = Path(directory) if directory is not None else corpus_dir()
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {"fixtures": []}
    for desc in FIXTURES:
        text = _serialize(build_fixture(desc))
        fname = f"{desc.name}.json"
        (directory / fname).write_text(text, encoding="utf-8")
        manifest["fixtures"].append({"name": desc.name, "file": fname,
                                     "sha256": hashlib.sha256(text.encode("utf-8")).hexdigest()})
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                             encoding="utf-8")
    return manifest


def load_fixture(ref: str | Path) -> dict:
    """A fixture record from a path or ``builtin:<name>``."""
    ref = str(ref)
    if ref.startswith("builtin:"):
        path = corpus_dir() / f"{ref[len('builtin:'):]}.json"
        if not path.exists():
            raise ValueError(f"no builtin fixture named {ref[len('builtin:'):]!r}")
    else:
        path = Path(ref)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ValueError(f"cannot read fixture {ref}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"fixture {ref} is not valid JSON: {exc}") from exc


def verify_corpus(directory: Path | None = None) -> list[dict]:
    """One result per manifest entry: checksum, regeneration and expected values."""
    directory = Path(directory) if directory is not None else corpus_dir()
    manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    by_name = {d.name: d for d in FIXTURES}
    results = []
    for item in manifest["fixtures"]:
        text = (directory / item["file"]).read_text(encoding="utf-8")
        row = {"name": item["name"], "checksum": hashlib.sha256(text.encode("utf-8")).hexdigest() == item["sha256"]}
        desc = by_name.get(item["name"])
        row["regenerates"] = desc is not None and _serialize(build_fixture(desc)) == text
        checks = check_expected(json.loads(text))
        row["expected"] = [(e["check"], ok) for e, ok, _ in checks]
        row["failures"] = [{"entry": e, "observed": to_jsonable(got)} for e, ok, got in checks if not ok]
        row["ok"] = row["checksum"] and row["regenerates"] and not row["failures"]
        results.append(row)
    return results
