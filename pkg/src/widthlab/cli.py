"""Command-line front end.

Subcommands: ``compute`` (invariants of one subgroup), ``verify`` (finiteness
bounds on one subgroup or a random corpus), ``oracle`` (exact engine vs
brute-force ball enumeration), ``examples`` (the two bundled worked examples
with pinned expected values), and ``export-dot`` (graphviz files).

JSON output is canonical: keys sorted, no timestamps inside the ``payload``
object; wall-clock timing lives in the separate ``timing`` field so payloads
can be compared byte for byte.  Exit codes: 0 success/agreement, 1
mismatch or violation, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import corpus, oracle, oracle_comparison, verify_bounds
from .core_graph import CoreGraph, build_core, pullback2
from .dc import dc_automaton
from .extension import (ExtElement, ExtensionSpec, ext_inv, ext_mul, free_spec,
                        invariants_ext, node_graph, twisted_cores)
from .invariants import InvariantReport, invariants_free
from .words import Alphabet, AlphabetError, GeneratorPermutation, Word


class ProblemError(ValueError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


@dataclass
class Problem:
    alphabet: Alphabet
    generators: list[Word]
    ext: Optional[ExtensionSpec]
    options: dict
    raw: dict

    def graph(self) -> CoreGraph:
        return build_core(self.alphabet, self.generators)

    def invariants(self) -> InvariantReport:
        if self.ext is None:
            return invariants_free(self.graph())
        return invariants_ext(self.graph(), self.ext)


def parse_problem(data: bytes) -> Problem:
    """Validate a problem document, collecting every violation."""
    errors: list[str] = []
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProblemError([f"not a UTF-8 JSON document: {exc}"]) from exc
    if not isinstance(doc, dict):
        raise ProblemError(["top level: expected an object"])

    group = doc.get("group")
    if not isinstance(group, dict):
        errors.append("group: required object")
        raise ProblemError(errors)

    gtype = group.get("type")
    if gtype not in ("free", "cyclic_extension"):
        errors.append('group.type: expected "free" or "cyclic_extension"')
    rank = group.get("rank")
    if not isinstance(rank, int) or rank < 1:
        errors.append("group.rank: expected a positive integer")
        rank = 1

    ext = None
    if gtype == "cyclic_extension":
        order = group.get("order")
        perm = group.get("perm")
        if not isinstance(order, int) or order < 1:
            errors.append("group.order: expected a positive integer")
            order = 1
        if (not isinstance(perm, list) or len(perm) != rank
                or any(not isinstance(p, int) for p in perm)):
            errors.append(f"group.perm: expected a list of {rank} integers")
        elif sorted(perm) != list(range(1, rank + 1)):
            errors.append(f"group.perm: {perm} is not a permutation of 1..{rank}")
        else:
            try:
                ext = ExtensionSpec(Alphabet(rank), GeneratorPermutation(tuple(perm), order))
            except ValueError as exc:
                errors.append(f"group.perm: {exc}")

    subgroup = doc.get("subgroup")
    generators: list[Word] = []
    if not isinstance(subgroup, list) or any(not isinstance(s, str) for s in subgroup):
        errors.append("subgroup: expected a list of generator word strings")
    else:
        alphabet = Alphabet(rank)
        for idx, text in enumerate(subgroup):
            try:
                generators.append(alphabet.parse(text))
            except (AlphabetError, ValueError) as exc:
                errors.append(f"subgroup[{idx}]: {exc}")

    options = doc.get("options", {})
    if not isinstance(options, dict):
        errors.append("options: expected an object")
        options = {}
    for key in ("radius", "seed", "tuple_cap", "max_conjugates"):
        if key in options and (not isinstance(options[key], int) or options[key] < 0):
            errors.append(f"options.{key}: expected a nonnegative integer")

    if errors:
        raise ProblemError(errors)
    return Problem(Alphabet(rank), generators, ext, options, doc)


def verify_certificates(graph: CoreGraph, ext: Optional[ExtensionSpec],
                        report: InvariantReport) -> list[str]:
    """Re-check every emitted certificate through public operations only."""
    spec = ext or free_spec(graph.alphabet)
    issues: list[str] = []

    def in_conjugate(word: Word, g: ExtElement) -> bool:
        moved = ext_mul(spec, ext_mul(spec, g, spec.element(word, 0)), ext_inv(spec, g))
        return moved.tpart == 0 and graph.contains(moved.fpart)

    for cert in report.weak_width_certificates:
        g = spec.element(cert.conjugator, cert.twist)
        if not cert.witness:
            issues.append(f"weak width witness for {cert.shortest} is trivial")
        if not graph.contains(cert.witness):
            issues.append(f"weak width witness {cert.witness} is not in the subgroup")
        if not in_conjugate(cert.witness, g):
            issues.append(f"weak width witness {cert.witness} is not in the conjugate by {g}")
        inv_core = graph.relabeled(spec.twist.power(-cert.twist))
        if not dc_automaton(graph, cert.conjugator, inv_core).contains(cert.shortest):
            issues.append(f"shortest representative {cert.shortest} left its double coset")

    def member_element(m) -> ExtElement:
        return spec.element(m.conjugator, m.twist)

    wc = report.width_certificate
    if wc is not None:
        if len(wc.members) != report.width:
            issues.append("width certificate size differs from the width")
        for i, j, w in wc.pair_witnesses:
            for pos in (i, j):
                if not w or not in_conjugate(w, member_element(wc.members[pos])):
                    issues.append(f"width pair witness {w} fails at member {pos}")

    hc = report.height_certificate
    if hc is not None:
        if len(hc.members) != report.height:
            issues.append("height certificate size differs from the height")
        if report.height >= 2 or hc.witness is not None:
            if hc.witness is None or not hc.witness:
                issues.append("height certificate lacks a nontrivial witness")
            else:
                for pos, m in enumerate(hc.members):
                    if not in_conjugate(hc.witness, member_element(m)):
                        issues.append(f"height witness {hc.witness} fails at member {pos}")
    return issues


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def _emit(payload: dict, started: float, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        document = {"payload": payload, "timing": {"seconds": round(time.time() - started, 6)}}
        print(canonical_json(document))
    else:
        for line in text_lines:
            print(line)


def _invariant_lines(name: str, report: InvariantReport) -> list[str]:
    lines = [f"{name}: weak width {report.weak_width}, width {report.width}, "
             f"height {report.height}"]
    if len(report.per_twist) > 1:
        lines.append(f"  per-twist weak width: {report.per_twist}")
    for cert in report.weak_width_certificates:
        rep = ExtElement(cert.shortest, cert.twist)
        lines.append(f"  coset of {rep}: witness {cert.witness}")
    return lines


def _threads() -> int:
    raw = os.environ.get("WIDTHLAB_THREADS", "1")
    try:
        value = int(raw)
    except ValueError as exc:
        raise ProblemError([f"WIDTHLAB_THREADS: expected an integer, got {raw!r}"]) from exc
    return max(value, 1)


def _problem_from_args(args) -> Problem:
    with open(args.input, "rb") as handle:
        return parse_problem(handle.read())


def _write_report_files(out_dir: str, payload: dict, problem: Problem,
                        report: InvariantReport) -> None:
    from . import figures

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "report.json"), "w", encoding="utf-8") as handle:
        handle.write(canonical_json(payload) + "\n")

    rows = [("weak_width", report.weak_width), ("width", report.width),
            ("height", report.height)]
    rows += [(f"weak_width_twist_{k}", v) for k, v in enumerate(report.per_twist)]
    with open(os.path.join(out_dir, "invariants.csv"), "w", encoding="utf-8") as handle:
        handle.write("invariant,value,exact\n")
        for name, value in rows:
            handle.write(f"{name},{value},true\n")

    graph = problem.graph()
    figures.save_core_figure(graph, os.path.join(out_dir, "core.png"),
                             title="subgroup core graph")
    if problem.ext is None:
        comps, labels, edges = _member_layout_free(graph)
        picked = [m.vertex for m in report.width_certificate.members] if report.width_certificate else []
    else:
        labels, edges, picked = _member_layout_ext(graph, problem.ext, report)
    from .figures import save_member_figure
    save_member_figure(labels, edges, os.path.join(out_dir, "member_graph.png"),
                       title="conjugate intersection graph", highlight=picked)


def _member_layout_free(graph: CoreGraph):
    comps = pullback2(graph, graph)
    at = {}
    for idx, comp in enumerate(comps):
        for tup in comp.vertices:
            at[tup] = idx
    labels = [str(graph.label(v)) or "1" for v in range(graph.n_vertices)]
    edges = {(p, q) for p in range(graph.n_vertices) for q in range(p + 1, graph.n_vertices)
             if comps[at[(p, q)]].rank > 0}
    return comps, labels, edges


def _member_layout_ext(graph: CoreGraph, ext: ExtensionSpec, report: InvariantReport):
    ng = node_graph(graph, ext)
    labels = [str(ng.nodes[i].coset_rep) for i in range(len(ng.nodes))]
    picked = []
    if report.width_certificate:
        keyed = {(n.twist, n.vertex): i for i, n in enumerate(ng.nodes)}
        picked = [keyed[(m.twist, m.vertex)] for m in report.width_certificate.members]
    return labels, ng.edges, picked


def cmd_compute(args) -> int:
    started = time.time()
    problem = _problem_from_args(args)
    _threads()
    report = problem.invariants()
    issues = verify_certificates(problem.graph(), problem.ext, report)
    if issues:
        for issue in issues:
            print(f"error: certificate check failed: {issue}", file=sys.stderr)
        return 1
    payload = {"problem": problem.raw, "invariants": report.to_json_dict()}
    if args.out:
        _write_report_files(args.out, payload, problem, report)
    _emit(payload, started, args.format, _invariant_lines("subgroup", report))
    return 0


def cmd_verify(args) -> int:
    started = time.time()
    if args.input:
        problems = [("input", _problem_from_args(args))]
    elif args.corpus <= 0:
        raise ProblemError(["verify needs --input FILE or --corpus N"])
    else:
        members = corpus(args.seed, args.corpus, min_rank=args.rank_min, max_rank=args.rank_max,
                         min_gens=args.gens_min, max_gens=args.gens_max, max_len=args.len_max)
        problems = []
        for idx, (alphabet, gens) in enumerate(members):
            raw = {"group": {"type": "free", "rank": alphabet.rank},
                   "subgroup": [str(g) for g in gens]}
            problems.append((f"corpus[{idx}]", Problem(alphabet, gens, None, {}, raw)))

    reports = []
    all_passed = True
    lines = []
    for name, problem in problems:
        if problem.ext is not None:
            print("error: bound verification targets subgroups of free groups", file=sys.stderr)
            return 2
        result = verify_bounds(problem.graph())
        reports.append({"name": name, "problem": problem.raw,
                        "verification": result.to_json_dict()})
        all_passed = all_passed and result.passed
        status = "pass" if result.passed else "FAIL"
        ctx = result.context
        lines.append(f"{name}: {status} (K={ctx.qc_constant}, ball bound {ctx.ball_bound})")
    payload = {"reports": reports, "passed": all_passed}
    _emit(payload, started, args.format, lines)
    return 0 if all_passed else 1


def cmd_oracle(args) -> int:
    started = time.time()
    problem = _problem_from_args(args)
    radius = args.radius if args.radius is not None else problem.options.get("radius", 4)
    report = problem.invariants()
    orep = oracle(problem.alphabet, problem.generators, radius, problem.ext,
                  max_conjugates=problem.options.get("max_conjugates", 64),
                  tuple_cap=problem.options.get("tuple_cap", 8),
                  threads=_threads())
    comparison = oracle_comparison(report, orep, max(radius - 2, 0))
    payload = {"problem": problem.raw, "invariants": report.to_json_dict(),
               "oracle": orep.to_json_dict(), "comparison": comparison}
    lines = [f"oracle radius {radius}: " + ("agreement" if comparison["agree"] else "DISAGREEMENT"),
             f"  engine buckets: {comparison['engine_buckets']}",
             f"  oracle buckets: {comparison['oracle_buckets']}"]
    _emit(payload, started, args.format, lines)
    return 0 if comparison["agree"] else 1


_EXAMPLES = [
    {
        "name": "rank2-pair",
        "problem": {"group": {"type": "cyclic_extension", "rank": 4, "order": 4,
                              "perm": [2, 3, 4, 1]},
                    "subgroup": ["x1", "x2"]},
        "expected": (3, 2, 2),
        "per_twist": [1, 1, 0, 1],
        "reps": {(0, ""), (1, ""), (3, "")},
    },
    {
        "name": "rank3-triple",
        "problem": {"group": {"type": "cyclic_extension", "rank": 4, "order": 4,
                              "perm": [2, 3, 4, 1]},
                    "subgroup": ["x1", "x2", "x3"]},
        "expected": (4, 4, 3),
        "per_twist": [1, 1, 1, 1],
        "reps": {(0, ""), (1, ""), (2, ""), (3, "")},
    },
]


def cmd_examples(args) -> int:
    started = time.time()
    rows = []
    payload_reports = []
    all_ok = True
    for entry in _EXAMPLES:
        problem = parse_problem(json.dumps(entry["problem"]).encode())
        report = problem.invariants()
        got = (report.weak_width, report.width, report.height)
        reps = {(c.twist, str(c.shortest)) for c in report.weak_width_certificates}
        ok = (got == entry["expected"] and report.per_twist == entry["per_twist"]
              and reps == entry["reps"])
        all_ok = all_ok and ok
        rows.append(f"{entry['name']}: weak width {got[0]}, width {got[1]}, height {got[2]} "
                    f"[{'ok' if ok else 'MISMATCH, expected ' + str(entry['expected'])}]")
        payload_reports.append({"name": entry["name"], "problem": entry["problem"],
                                "invariants": report.to_json_dict(),
                                "expected": list(entry["expected"]), "ok": ok})
        if args.out:
            _write_report_files(os.path.join(args.out, entry["name"]),
                                {"problem": entry["problem"],
                                 "invariants": report.to_json_dict()},
                                problem, report)
    payload = {"examples": payload_reports, "passed": all_ok}
    _emit(payload, started, args.format, rows)
    return 0 if all_ok else 1


def cmd_export_dot(args) -> int:
    problem = _problem_from_args(args)
    os.makedirs(args.out, exist_ok=True)
    graph = problem.graph()
    written = []

    def write(name: str, text: str) -> None:
        path = os.path.join(args.out, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        written.append(path)

    write("core.dot", graph.to_dot("core"))
    cores = twisted_cores(graph, problem.ext) if problem.ext else [graph]
    for k, core in enumerate(cores):
        if k > 0:
            write(f"core_twist_{k}.dot", core.to_dot(f"core_twist_{k}"))
        for idx, comp in enumerate(pullback2(graph, core)):
            write(f"pullback_t{k}_comp{idx}.dot", comp.to_dot(f"pullback_t{k}_comp{idx}"))
    for path in written:
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="widthlab",
                                     description="Exact subgroup height, width, and weak "
                                                 "width in free groups and their "
                                                 "generator-permuting extensions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="problem JSON file")
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("compute", help="invariants of one subgroup")
    common(p)
    p.add_argument("--out", help="directory for report.json, invariants.csv, and figures")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="finiteness bounds on a subgroup or a random corpus")
    p.add_argument("--input", help="problem JSON file (free group)")
    p.add_argument("--corpus", type=int, default=0, help="verify this many random subgroups")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rank-min", type=int, default=2)
    p.add_argument("--rank-max", type=int, default=4)
    p.add_argument("--gens-min", type=int, default=1)
    p.add_argument("--gens-max", type=int, default=3)
    p.add_argument("--len-max", type=int, default=6)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact engine against brute-force enumeration")
    common(p)
    p.add_argument("--radius", type=int, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("examples", help="run the bundled worked examples")
    common(p, needs_input=False)
    p.add_argument("--out", help="directory for per-example reports and figures")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("export-dot", help="write DOT files for the core and its pullbacks")
    p.add_argument("--input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_dot)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemError as exc:
        for err in exc.errors:
            print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AlphabetError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
