"""Command-line front end.

Exit codes: 0 all checks pass, 1 violation (with witness), 2 input error,
3 hypothesis not met.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from typing import Any, Callable

from . import __version__
from .corpus import family_from_record, load_fixture, verify_corpus
from .drewnowski import (
    DEFAULT_PREFIX,
    DEFAULT_WIDTH,
    CountableSetFunction,
    DisjointSequence,
    NoBlockFound,
    NoTailBound,
    default_targets,
    extract_continuous_subsequence,
    verify_restricted_continuity,
)
from .lattice import DEFAULT_PHI_COUNT, NoSuchColumn, Regulator, Vec
from .limits import HarnessFixtures, SetFunctionFamily, Theorem, schur_gap, theorem_harness
from .records import dumps, frac_str, setfunction_from_record, to_jsonable
from .setfun import (
    FULL_TABLE_ATOMS,
    SetFunction,
    argmax_subsets,
    check_k_triangular,
    format_set,
    is_monotone,
    minimal_k,
    semivariation,
)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_HYPOTHESIS = 0, 1, 2, 3
MAX_SCHUR_ATOMS = 20


class InputError(Exception):
    pass


def _approx(v: Any) -> str:
    if isinstance(v, str) and "/" in v:
        v = Fraction(v)
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v)
        if len(str(v)) > 24:
            return f"~{float(v):.6g}"
        return f"{v} (~{float(v):.6g})"
    if isinstance(v, Vec):
        return "(" + ", ".join(_approx(c) for c in v) + ")"
    return str(v)


def _config(args: argparse.Namespace) -> dict:
    skip = {"func", "format"}
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cfg["format"] = args.format
    return cfg


def _load_setfunction(args) -> SetFunction:
    rec = load_fixture(args.fixture)
    if "setfunction" in rec:
        return setfunction_from_record(rec["setfunction"])
    if "family" in rec:
        fam = family_from_record(rec["family"])
        member = getattr(args, "member", None) or 1
        try:
            return fam[member]
        except IndexError as exc:
            raise InputError(str(exc)) from exc
    if rec.get("kind") == "setfunction":
        return setfunction_from_record(rec)
    raise InputError("fixture holds neither a set function nor a family")


def _load_family(args) -> SetFunctionFamily:
    rec = load_fixture(args.fixture)
    if "family" in rec:
        return family_from_record(rec["family"])
    if rec.get("kind") == "family":
        return family_from_record(rec)
    raise InputError("fixture does not hold a family")


def _emit(report: dict, fmt: str, table: Callable[[dict], str], rows: Callable[[dict], list[list]] | None) -> str:
    if fmt == "records":
        return dumps(report) + "\n"
    if fmt == "csv":
        if rows is None:
            raise InputError("this command has no CSV form")
        buf = io.StringIO()
        # config as a leading comment line; most plotting readers skip it
        buf.write("\n".join(_config_lines(report.get("config", {}))) + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        for row in rows(report):
            writer.writerow([_cell(x) for x in row])
        return buf.getvalue()
    return table(report)


def _cell(x: Any) -> str:
    if isinstance(x, (Fraction, Vec)):
        return frac_str_any(x)
    return str(x)


def _config_lines(cfg: dict) -> list[str]:
    return ["# " + " ".join(f"{k}={v}" for k, v in cfg.items() if v is not None)]


def cmd_check(args) -> tuple[int, dict]:
    m = _load_setfunction(args)
    k = Fraction(args.k)
    report = check_k_triangular(m, k, want_minimal=False)
    mono = is_monotone(m)
    out: dict[str, Any] = {
        "command": "check",
        "config": _config(args),
        "atoms": m.n,
        "k": k,
        "pairs_checked": report.pairs_checked,
        "subadditive": report.subadditive,
        "k_triangular": report.ok,
        "subadditivity_violations": [[format_set(a), format_set(b)] for a, b in report.subadditivity_violations[:20]],
        "lower_violations": [[format_set(a), format_set(b)] for a, b in report.lower_violations[:20]],
        "violation_counts": [len(report.subadditivity_violations), len(report.lower_violations)],
        "monotone": mono.to_record(),
    }
    if m.is_scalar:
        out["minimal_k"] = minimal_k(m)
    return (EXIT_OK if report.ok else EXIT_VIOLATION), out


def _check_table(r: dict) -> str:
    lines = _config_lines(r["config"])
    lines.append(f"atoms: {r['atoms']}   k: {r['k']}   ordered disjoint pairs: {r['pairs_checked']}")
    lines.append(f"k-subadditive: {'yes' if r['subadditive'] else 'NO'}   "
                 f"k-triangular: {'yes' if r['k_triangular'] else 'NO'}")
    if "minimal_k" in r:
        lines.append(f"minimal k: {r['minimal_k'] if r['minimal_k'] is not None else 'none (no finite k)'}")
    for label, key in (("subadditivity", "subadditivity_violations"), ("lower", "lower_violations")):
        if r[key]:
            a, b = r[key][0]
            lines.append(f"{label} violation: A={a} B={b} ({len(r[key])} shown)")
    mono = r["monotone"]
    if mono["verdict"] == "VIOLATED":
        w = mono["witness"]
        lines.append(f"monotone: NO, m({w['A']}) = {w['m(A)']} > m({w['B']}) = {w['m(B)']}")
    else:
        lines.append("monotone: yes")
    return "\n".join(lines) + "\n"


def _check_rows(r: dict) -> list[list]:
    rows = [["kind", "A", "B"]]
    rows += [["subadditivity", a, b] for a, b in r["subadditivity_violations"]]
    rows += [["lower", a, b] for a, b in r["lower_violations"]]
    return rows


def cmd_semivar(args) -> tuple[int, dict]:
    m = _load_setfunction(args)
    if m.n > FULL_TABLE_ATOMS:
        raise InputError(f"full semivariation tables are limited to {FULL_TABLE_ATOMS} atoms, got {m.n}")
    v = semivariation(m)
    rows = []
    for mask in range(1 << m.n):
        rows.append({"set": format_set(mask), "m": m(mask), "v": v(mask),
                     "argmax": [format_set(b) for b in argmax_subsets(m, mask)]})
    out = {"command": "semivar", "config": _config(args), "atoms": m.n, "rows": rows,
           "equals_input": all(r["m"] == r["v"] for r in rows)}
    return EXIT_OK, out


def _semivar_table(r: dict) -> str:
    lines = _config_lines(r["config"])
    width = max(len(row["set"]) for row in r["rows"])
    for row in r["rows"]:
        lines.append(f"{row['set']:<{width}}  m={_approx(row['m'])}  v(m)={_approx(row['v'])}  "
                     f"at {','.join(row['argmax'])}")
    return "\n".join(lines) + "\n"


def _semivar_rows(r: dict) -> list[list]:
    return [["set", "m", "v", "argmax"]] + [[row["set"], frac_str_any(row["m"]), frac_str_any(row["v"]),
                                             " ".join(row["argmax"])] for row in r["rows"]]


def frac_str_any(v) -> str:
    if isinstance(v, Vec):
        return " ".join(frac_str(c) for c in v)
    return frac_str(v)


def cmd_harness(args) -> tuple[int, dict]:
    fam = _load_family(args)
    if args.horizon_T or args.horizon_L:
        fam.regulator = Regulator.harmonic(fam.u, args.horizon_T or fam.regulator.T, args.horizon_L or fam.regulator.L)
    fx = HarnessFixtures(k=Fraction(args.k), phi_count=args.phi_count, seed=args.seed)
    report = theorem_harness(fam, Theorem(args.theorem), fx)
    out = {"command": "harness", "config": _config(args), **report.to_record()}
    code = {"CONSISTENT": EXIT_OK, "VIOLATION": EXIT_VIOLATION}.get(report.verdict, EXIT_HYPOTHESIS)
    return code, out


def _harness_table(r: dict) -> str:
    lines = _config_lines(r["config"])
    lines.append(f"theorem {r['theorem']}: {r['verdict']}")
    for section, tag in (("hypotheses", "hypothesis"), ("conclusions", "conclusion")):
        for item in r[section]:
            lines.append(f"  [{tag}] {item['label']}: {item['verdict']}")
    if r["failed"]:
        lines.append("failed: " + ", ".join(r["failed"]))
    if "gaps" in r:
        for g in r["gaps"]:
            lines.append(f"  gap j={g['j']}: {g['gap']} at {g['witness']}")
    return "\n".join(lines) + "\n"


def _harness_rows(r: dict) -> list[list]:
    rows = [["section", "label", "verdict"]]
    for section in ("hypotheses", "conclusions"):
        rows += [[section, item["label"], item["verdict"]] for item in r[section]]
    return rows


def _parse_targets(text: str | None, L: int) -> list[Fraction]:
    if text is None or text == "harmonic":
        return default_targets(L)
    try:
        vals = [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad targets {text!r}") from exc
    if len(vals) < L:
        raise InputError(f"{len(vals)} targets given for {L} levels")
    return vals[:L]


def cmd_drewnowski(args) -> tuple[int, dict]:
    m = CountableSetFunction.from_descriptor(args.weights)
    C = DisjointSequence.from_descriptor(args.sequence)
    if args.levels < 1:
        raise InputError("--levels must be positive")
    targets = _parse_targets(args.targets, args.levels)
    out: dict[str, Any] = {"command": "drewnowski", "config": _config(args)}
    try:
        trace = extract_continuous_subsequence(m, C, args.levels, targets=targets, width=args.search_width,
                                               prefix_len=args.prefix)
    except NoBlockFound as exc:
        out["error"] = str(exc)
        return EXIT_VIOLATION, out
    cert = verify_restricted_continuity(trace, m, C, args.chain_depth, seed=args.seed)
    out["trace"] = trace.to_record()
    out["verification"] = cert.to_record()
    return (EXIT_OK if cert.holds else EXIT_VIOLATION), out


def _drewnowski_table(r: dict) -> str:
    lines = _config_lines(r["config"])
    if "error" in r:
        return "\n".join(lines + [r["error"]]) + "\n"
    t = r["trace"]
    lines.append(f"weights: {t['weights'][0]}   sequence: {t['sequence']}")
    for lv in t["levels"]:
        c = lv["certified"][0]
        lines.append(f"level {lv['l']}: block {lv['block']} (r={lv['r']})  n={lv['n']}  "
                     f"bound {_approx(c['attained'])} <= b={lv['target']}  "
                     f"[prefix {_approx(c['exact_prefix'])} + tail {c['tail_part']}]")
    lines.append(f"verification: {r['verification']['verdict']}")
    return "\n".join(lines) + "\n"


def _drewnowski_rows(r: dict) -> list[list]:
    rows = [["level", "block", "n", "target", "exact_prefix", "tail_part", "attained"]]
    if "trace" in r:
        for lv in r["trace"]["levels"]:
            c = lv["certified"][0]
            rows.append([lv["l"], lv["block"], lv["n"], lv["target"], c["exact_prefix"], c["tail_part"], c["attained"]])
    return rows


def cmd_schur_gap(args) -> tuple[int, dict]:
    fam = _load_family(args)
    N = fam.n if args.n is None else args.n
    if N > MAX_SCHUR_ATOMS:
        raise InputError(f"N = {N} exceeds the limit of {MAX_SCHUR_ATOMS}")
    if N != fam.n:
        raise InputError(f"--n {N} does not match the family's {fam.n} atoms")
    if fam.declared_limit is None:
        raise InputError("the family has no declared limit")
    gaps = schur_gap(fam, N)
    out = {"command": "schur-gap", "config": _config(args),
           "gaps": [{"j": j, "gap": g, "witness": None if w is None else format_set(w)} for j, g, w in gaps]}
    return EXIT_OK, out


def _schur_rows(r: dict) -> list[list]:
    return [["j", "gap", "witness"]] + [[g["j"], frac_str_any(g["gap"]), g["witness"] or ""] for g in r["gaps"]]


def _schur_table(r: dict) -> str:
    lines = _config_lines(r["config"])
    lines += [f"j={g['j']}: {_approx(g['gap'])} at {g['witness']}" for g in r["gaps"]]
    return "\n".join(lines) + "\n"


def cmd_corpus_verify(args) -> tuple[int, dict]:
    results = verify_corpus(args.dir)
    out = {"command": "corpus-verify", "config": _config(args), "results": results}
    return (EXIT_OK if all(r["ok"] for r in results) else EXIT_VIOLATION), out


def _corpus_table(r: dict) -> str:
    lines = _config_lines(r["config"])
    for row in r["results"]:
        status = "ok" if row["ok"] else "FAIL"
        lines.append(f"{row['name']}: {status} (checksum {row['checksum']}, regenerates {row['regenerates']}, "
                     f"{len(row['expected']) - len(row['failures'])}/{len(row['expected'])} expected)")
    return "\n".join(lines) + "\n"


def _corpus_rows(r: dict) -> list[list]:
    return [["name", "ok", "checksum", "regenerates", "failures"]] + [
        [row["name"], row["ok"], row["checksum"], row["regenerates"], len(row["failures"])] for row in r["results"]]


COMMANDS = {
    "check": (cmd_check, _check_table, _check_rows),
    "semivar": (cmd_semivar, _semivar_table, _semivar_rows),
    "harness": (cmd_harness, _harness_table, _harness_rows),
    "drewnowski": (cmd_drewnowski, _drewnowski_table, _drewnowski_rows),
    "schur-gap": (cmd_schur_gap, _schur_table, _schur_rows),
    "corpus-verify": (cmd_corpus_verify, _corpus_table, _corpus_rows),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ktriangular",
                                     description="Exact checks for k-triangular set functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "records", "csv"],
                        help="default: csv for schur-gap, table otherwise")
    common.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="k-subadditivity, k-triangularity, monotonicity")
    p.add_argument("--fixture", required=True, help="fixture path or builtin:<name>")
    p.add_argument("--k", default="1")
    p.add_argument("--member", type=int, help="member index for family fixtures (1-based)")

    p = sub.add_parser("semivar", parents=[common], help="full semivariation table")
    p.add_argument("--fixture", required=True)
    p.add_argument("--member", type=int)

    p = sub.add_parser("harness", parents=[common], help="instance check of a convergence theorem")
    p.add_argument("--fixture", required=True)
    p.add_argument("--theorem", choices=[t.value for t in Theorem], required=True)
    p.add_argument("--k", default="1")
    p.add_argument("--horizon-T", type=int, dest="horizon_T")
    p.add_argument("--horizon-L", type=int, dest="horizon_L")
    p.add_argument("--phi-count", type=int, default=DEFAULT_PHI_COUNT)

    p = sub.add_parser("drewnowski", parents=[common], help="extract a subsequence with certified bounds")
    p.add_argument("--weights", default="alternating-power 2",
                   help='"alternating-power p", "geometric q" or "zero"')
    p.add_argument("--sequence", default="singletons", help="singletons, pairs, evens or 'intervals w'")
    p.add_argument("--levels", type=int, default=4)
    p.add_argument("--targets", help="'harmonic' (1/l) or a comma-separated list")
    p.add_argument("--search-width", type=int, default=DEFAULT_WIDTH, dest="search_width")
    p.add_argument("--chain-depth", type=int, dest="chain_depth")
    p.add_argument("--prefix", type=int, default=DEFAULT_PREFIX)

    p = sub.add_parser("schur-gap", parents=[common], help="exhaustive sup-distance to the limit per member")
    p.add_argument("--fixture", required=True)
    p.add_argument("--n", type=int)

    p = sub.add_parser("corpus-verify", parents=[common], help="re-verify the shipped fixture corpus")
    p.add_argument("--dir", help="corpus directory (default: the shipped one)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    if args.format is None:
        args.format = "csv" if args.command == "schur-gap" else "table"
    func, table, rows = COMMANDS[args.command]
    try:
        code, report = func(args)
        text = _emit(report, args.format, table, rows)
    except (InputError, NoTailBound, NoSuchColumn, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
