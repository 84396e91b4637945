"""Acceptance suite: one test per pinned criterion, each printing a
pass/fail line.  Expected values for the two bundled examples are pinned
here and in the CLI only, never inside the engine."""

import json
import os
import random
import subprocess
import sys
import time

from widthlab import (Alphabet, ExtensionSpec, GeneratorPermutation, ball_count,
                      build_core, cyclic_reduce, invariants_ext, invariants_free,
                      oracle, oracle_comparison, qc_constant, weak_width_free)
from widthlab.bounds import corpus, random_reduced_word
from widthlab.cli import canonical_json

A1 = Alphabet(1)
A2 = Alphabet(2)
A4 = Alphabet(4)
SHIFT = ExtensionSpec(A4, GeneratorPermutation((2, 3, 4, 1), 4))

CORPUS_SEED = 20260809
CORPUS = corpus(CORPUS_SEED, 100)


def _report(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPT {name}: {status}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def test_criterion_1_rank2_rose_in_shift_extension():
    graph = build_core(A4, [A4.parse("x1"), A4.parse("x2")])
    started = time.time()
    report = invariants_ext(graph, SHIFT)
    elapsed = time.time() - started
    got = (report.weak_width, report.width, report.height)
    reps = {(c.twist, str(c.shortest)) for c in report.weak_width_certificates}
    ok = (got == (3, 2, 2)
          and report.per_twist == [1, 1, 0, 1]
          and reps == {(0, ""), (1, ""), (3, "")}
          and elapsed < 1.0)
    _report("example-rank2", ok,
            f"invariants {got}, per-twist {report.per_twist}, reps {sorted(reps)}, {elapsed:.3f}s")


def test_criterion_2_rank3_rose_in_shift_extension():
    graph = build_core(A4, [A4.parse(t) for t in ("x1", "x2", "x3")])
    started = time.time()
    report = invariants_ext(graph, SHIFT)
    elapsed = time.time() - started
    got = (report.weak_width, report.width, report.height)
    clique = {(m.twist, m.vertex) for m in report.width_certificate.members}
    hc = report.height_certificate
    height_members = [(m.twist, m.vertex) for m in hc.members]
    witness_core, _ = cyclic_reduce(hc.witness)
    witness_is_x3_power = bool(witness_core) and all(abs(ell) == 3 for ell in witness_core.letters)
    ok = (got == (4, 4, 3)
          and clique == {(0, 0), (1, 0), (2, 0), (3, 0)}
          and height_members == [(0, 0), (1, 0), (2, 0)]
          and witness_is_x3_power
          and elapsed < 1.0)
    _report("example-rank3", ok,
            f"invariants {got}, clique {sorted(clique)}, height tuple {height_members}, "
            f"witness {hc.witness}, {elapsed:.3f}s")


def test_criterion_3_weak_width_within_ball_bound_on_corpus():
    started = time.time()
    violations = []
    for alphabet, gens in CORPUS:
        graph = build_core(alphabet, gens)
        value = weak_width_free(graph).value
        bound = ball_count(alphabet.rank, 2 * qc_constant(graph))
        if value > bound:
            violations.append((alphabet.rank, [str(g) for g in gens], value, bound))
    elapsed = time.time() - started
    ok = not violations and elapsed < 60.0
    _report("weak-width-ball-bound", ok,
            f"{len(CORPUS)} subgroups, {len(violations)} violations, {elapsed:.1f}s")


def test_criterion_4_infinite_cosets_have_short_representatives():
    started = time.time()
    violations = []
    for alphabet, gens in CORPUS:
        graph = build_core(alphabet, gens)
        bound = 2 * qc_constant(graph)
        for cert in weak_width_free(graph).cosets:
            if len(cert.shortest) > bound:
                violations.append(([str(g) for g in gens], str(cert.shortest), bound))
    elapsed = time.time() - started
    ok = not violations and elapsed < 60.0
    _report("short-coset-representatives", ok,
            f"{len(CORPUS)} subgroups, {len(violations)} violations, {elapsed:.1f}s")


def _oracle_instances():
    cases = [
        ("square", A1, ["x1 x1"], None, 5),
        ("conjugated-loop", A2, ["x1 x2 X1"], None, 5),
        ("rank2-rose", A4, ["x1", "x2"], None, 4),
        ("rank3-rose", A4, ["x1", "x2", "x3"], None, 4),
        ("ext-rank2", A4, ["x1", "x2"], SHIFT, 3),
        ("ext-rank3", A4, ["x1", "x2", "x3"], SHIFT, 3),
    ]
    picked = 0
    for idx, (alphabet, gens) in enumerate(CORPUS):
        if picked >= 20:
            break
        if alphabet.rank > 3:
            continue
        graph = build_core(alphabet, gens)
        if graph.num_edges == 0:
            continue
        radius = 5 if alphabet.rank == 2 else 4
        if qc_constant(graph) > radius - 2:
            continue
        cases.append((f"corpus-{idx}", alphabet, [str(g) for g in gens], None, radius))
        picked += 1
    return cases


def test_criterion_5_oracle_equivalence():
    cases = _oracle_instances()
    assert len(cases) >= 25
    failures = []
    for name, alphabet, texts, spec, radius in cases:
        gens = [alphabet.parse(t) for t in texts]
        graph = build_core(alphabet, gens)
        report = invariants_ext(graph, spec) if spec else invariants_free(graph)
        orep = oracle(alphabet, gens, radius, ext_spec=spec, max_conjugates=256)
        comparison = oracle_comparison(report, orep, radius - 2)
        if orep.truncation or not comparison["agree"]:
            failures.append((name, comparison, orep.truncation))
    _report("oracle-equivalence", not failures,
            f"{len(cases)} instances, failures: {failures if failures else 'none'}")


def test_criterion_6a_folding_idempotent_and_order_independent():
    rng = random.Random(411)
    bad = 0
    for _ in range(200):
        alphabet = Alphabet(rng.randint(2, 4))
        gens = [random_reduced_word(rng, alphabet, 6) for _ in range(rng.randint(1, 3))]
        reference = build_core(alphabet, gens)
        shuffled = gens[:]
        rng.shuffle(shuffled)
        rebuilt = build_core(alphabet, shuffled)
        again = build_core(alphabet, gens + gens)
        if rebuilt != reference or again != reference:
            bad += 1
    _report("fold-determinism", bad == 0, f"200 generator sets, {bad} mismatches")


def test_criterion_6b_rank_formula():
    bad = 0
    for n in (1, 2, 3, 4):
        alphabet = Alphabet(n)
        rose = build_core(alphabet, [alphabet.parse(f"x{i}") for i in range(1, n + 1)])
        if rose.cycle_rank != n or rose.n_vertices != 1:
            bad += 1
    for length in (2, 3, 4, 5, 6, 7):
        cyc = build_core(A1, [A1.word([1] * length)])
        if cyc.cycle_rank != 1 or cyc.n_vertices != length:
            bad += 1
    _report("rank-formula", bad == 0, f"{bad} mismatches")


def test_criterion_6c_conjugation_invariance():
    rng = random.Random(631)
    bases = []
    for alphabet, gens in CORPUS:
        if len(bases) >= 10:
            break
        graph = build_core(alphabet, gens)
        if 0 < graph.num_edges and graph.n_vertices <= 8:
            bases.append((alphabet, gens, invariants_free(graph)))
    assert len(bases) == 10
    bad = 0
    for i in range(50):
        alphabet, gens, reference = bases[i % len(bases)]
        z = random_reduced_word(rng, alphabet, 4)
        conj = build_core(alphabet, [g.conjugated_by(z) for g in gens])
        report = invariants_free(conj)
        if (report.weak_width, report.width, report.height) != \
                (reference.weak_width, reference.width, reference.height):
            bad += 1
    _report("conjugation-invariance", bad == 0, f"50 conjugators, {bad} mismatches")


def test_criterion_6d_height_never_exceeds_width():
    bad = 0
    checked = 0
    for alphabet, gens in CORPUS[:40]:
        report = invariants_free(build_core(alphabet, gens))
        checked += 1
        if report.height > report.width:
            bad += 1
    for texts, spec in ((["x1", "x2"], SHIFT), (["x1", "x2", "x3"], SHIFT)):
        report = invariants_ext(build_core(A4, [A4.parse(t) for t in texts]), spec)
        checked += 1
        if report.height > report.width:
            bad += 1
    _report("height-at-most-width", bad == 0, f"{checked} reports, {bad} violations")


def test_criterion_6e_degenerate_extension_equals_free_engine():
    rng = random.Random(733)
    bad = 0
    for _ in range(25):
        alphabet = Alphabet(rng.randint(1, 3))
        gens = [random_reduced_word(rng, alphabet, 5) for _ in range(rng.randint(1, 2))]
        graph = build_core(alphabet, gens)
        free = invariants_free(graph)
        degen = invariants_ext(graph, ExtensionSpec(alphabet,
                                                    GeneratorPermutation.identity(alphabet.rank)))
        if (free.weak_width, free.width, free.height) != \
                (degen.weak_width, degen.width, degen.height):
            bad += 1
    _report("degenerate-extension", bad == 0, f"25 instances, {bad} mismatches")


def test_criterion_7_determinism_across_runs_and_threads(tmp_path):
    problem = {"group": {"type": "cyclic_extension", "rank": 4, "order": 4,
                         "perm": [2, 3, 4, 1]},
               "subgroup": ["x1", "x2"]}
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(problem))
    payloads = set()
    runs = [(None, 3), ("1", 1), ("4", 1)]
    for threads, count in runs:
        env = dict(os.environ)
        if threads is not None:
            env["WIDTHLAB_THREADS"] = threads
        for _ in range(count):
            proc = subprocess.run(
                [sys.executable, "-c",
                 "import sys; from widthlab.cli import main; sys.exit(main())",
                 "compute", "--input", str(path)],
                capture_output=True, text=True, env=env)
            assert proc.returncode == 0, proc.stderr
            payloads.add(canonical_json(json.loads(proc.stdout)["payload"]))
    _report("determinism", len(payloads) == 1,
            f"5 runs over threads {{1,4}}, {len(payloads)} distinct payloads")
