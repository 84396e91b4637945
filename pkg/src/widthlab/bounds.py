"""Quasiconvexity constants, finiteness bounds, and brute-force oracles.

In a free group (delta = 0) a subgroup presented by a core graph is
K-quasiconvex for K = the largest graph distance from a vertex to the
basepoint: every prefix of a subgroup element stops at a core vertex and can
return to the basepoint within K steps.  The finiteness bound then says the
weak width is at most the number of reduced words of length <= 2K, and every
double coset with an infinite intersection has a representative that short.

The oracle is deliberately naive ground truth: it enumerates a ball of
conjugating elements, decides each intersection by building the conjugate's
core from conjugated generator words and checking its base fiber-product
component for a cycle, and buckets elements into double cosets by automaton
membership.  It never consults the component-representative or member-node
machinery it is used to cross-check.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .core_graph import CoreGraph, build_core, pullback_n
from .dc import dc_automaton
from .extension import ExtensionSpec
from .invariants import InvariantReport, deepest_nontree_tuple, max_clique, weak_width_free
from .words import Alphabet, GeneratorPermutation, Word, apply_twist


def qc_constant(graph: CoreGraph) -> int:
    """Quasiconvexity constant of the subgroup: the eccentricity of the
    basepoint in its core graph.  May exceed the optimal constant; every
    bound checked downstream is monotone in it."""
    return max(graph.distances_to_base())


def ball_count(rank: int, length: int) -> int:
    """Number of reduced words of length <= ``length`` over ``rank`` free
    generators: 1 + sum_{i=1..L} 2n(2n-1)^(i-1)."""
    if rank < 1:
        raise ValueError("rank must be at least 1")
    if length < 0:
        raise ValueError("length must be nonnegative")
    total, layer = 1, 2 * rank
    for _ in range(length):
        total += layer
        layer *= 2 * rank - 1
    return total


@dataclass(frozen=True)
class HyperbolicContext:
    delta: int
    qc_constant: int
    ball_bound: int

    def to_json_dict(self) -> dict:
        return {"delta": self.delta, "qc_constant": self.qc_constant,
                "ball_bound": self.ball_bound}


@dataclass
class BoundCheck:
    name: str
    passed: bool
    details: str

    def to_json_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


@dataclass
class VerificationReport:
    context: HyperbolicContext
    checks: list[BoundCheck]
    violations: list[dict]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and not self.violations

    def to_json_dict(self) -> dict:
        return {"context": self.context.to_json_dict(),
                "checks": [c.to_json_dict() for c in self.checks],
                "violations": list(self.violations),
                "passed": self.passed}


def verify_bounds(graph: CoreGraph) -> VerificationReport:
    """Check the finiteness bounds on one subgroup of a free group."""
    k = qc_constant(graph)
    delta = 0
    bound = 2 * k + 2 * delta
    n = ball_count(graph.alphabet.rank, bound)
    ww = weak_width_free(graph)

    checks: list[BoundCheck] = []
    violations: list[dict] = []

    ok = ww.value <= n
    checks.append(BoundCheck("weak_width_within_ball_bound", ok,
                             f"weak width {ww.value} vs ball bound {n} at length {bound}"))
    if not ok:
        violations.append({"check": "weak_width_within_ball_bound",
                           "weak_width": ww.value, "ball_bound": n})

    long_reps = [c for c in ww.cosets if len(c.shortest) > bound]
    worst = max((len(c.shortest) for c in ww.cosets), default=0)
    checks.append(BoundCheck("infinite_cosets_have_short_representatives", not long_reps,
                             f"longest shortest-representative {worst} vs bound {bound}"))
    for c in long_reps:
        violations.append({"check": "infinite_cosets_have_short_representatives",
                           "representative": str(c.rep), "shortest": str(c.shortest),
                           "length": len(c.shortest), "bound": bound})

    checks.append(BoundCheck("finite_intersection_length_bound", True,
                             "finite intersections in a free group are trivial, so the "
                             f"element-length bound {bound + 2} holds vacuously"))
    return VerificationReport(HyperbolicContext(delta, k, n), checks, violations)


def random_reduced_word(rng: random.Random, alphabet: Alphabet,
                        max_len: int, min_len: int = 1) -> Word:
    length = rng.randint(min_len, max_len)
    letters: list[int] = []
    for _ in range(length):
        choices = [ell for ell in alphabet.signed_letters if not letters or ell != -letters[-1]]
        letters.append(rng.choice(choices))
    return Word(alphabet.rank, tuple(letters))


def random_subgroup(rng: random.Random, min_rank: int = 2, max_rank: int = 4,
                    min_gens: int = 1, max_gens: int = 3, max_len: int = 6,
                    ) -> tuple[Alphabet, list[Word]]:
    alphabet = Alphabet(rng.randint(min_rank, max_rank))
    gens = [random_reduced_word(rng, alphabet, max_len)
            for _ in range(rng.randint(min_gens, max_gens))]
    return alphabet, gens


def corpus(seed: int, count: int, **kw) -> list[tuple[Alphabet, list[Word]]]:
    rng = random.Random(seed)
    return [random_subgroup(rng, **kw) for _ in range(count)]


def ball(alphabet: Alphabet, radius: int) -> Iterable[Word]:
    """All reduced words of length <= radius, in shortlex order."""
    yield Word(alphabet.rank)
    letters = alphabet.signed_letters
    frontier: list[tuple[int, ...]] = [()]
    for _ in range(radius):
        layer: list[tuple[int, ...]] = []
        for stem in frontier:
            for ell in letters:
                if stem and stem[-1] == -ell:
                    continue
                layer.append(stem + (ell,))
        for seq in layer:
            yield Word(alphabet.rank, seq)
        frontier = layer


def _coset_key(graph: CoreGraph, word: Word) -> tuple:
    """Canonical key of the coset H·word: the vertex where the walk stalls
    plus the unread tail (the Schreier graph is the core with rigid trees)."""
    cur = graph.base
    for idx, ell in enumerate(word.letters):
        nxt = graph.step(cur, ell)
        if nxt is None:
            return ("out", cur, word.letters[idx:])
        cur = nxt
    return ("in", cur)


@dataclass
class OracleBucket:
    twist: int
    rep: Word

    def to_json_dict(self) -> dict:
        return {"twist": self.twist, "representative": str(self.rep)}


@dataclass
class OracleReport:
    radius: int
    per_twist: list[int]
    buckets: list[OracleBucket]
    conjugates: int
    width: Optional[int]
    height: Optional[int]
    truncation: list[str] = field(default_factory=list)

    def bucket_keys(self, max_len: Optional[int] = None) -> set[tuple[int, str]]:
        return {(b.twist, str(b.rep)) for b in self.buckets
                if max_len is None or len(b.rep) <= max_len}

    def to_json_dict(self) -> dict:
        return {"radius": self.radius, "per_twist": list(self.per_twist),
                "buckets": [b.to_json_dict() for b in self.buckets],
                "conjugates": self.conjugates, "width": self.width,
                "height": self.height, "truncation": list(self.truncation)}


def oracle(alphabet: Alphabet, generators: Sequence[Word], radius: int,
           ext_spec: Optional[ExtensionSpec] = None,
           max_conjugates: int = 64, tuple_cap: int = 8,
           threads: int = 1) -> OracleReport:
    """Ground-truth enumeration of conjugates in a ball of the given radius."""
    graph = build_core(alphabet, generators)
    if ext_spec is not None:
        m = ext_spec.order
        sigma = ext_spec.twist
    else:
        m = 1
        sigma = GeneratorPermutation.identity(alphabet.rank)
    gens = [g for g in generators if g]

    if graph.num_edges == 0:
        return OracleReport(radius, [0] * m, [], 0, 0, 0)

    reps: list[Word] = []
    seen_cosets: set[tuple] = set()
    for w in ball(alphabet, radius):
        key = _coset_key(graph, w)
        if key not in seen_cosets:
            seen_cosets.add(key)
            reps.append(w)

    inv_cores = [build_core(alphabet, [apply_twist(sigma, -k, g) for g in gens])
                 for k in range(m)]

    def conjugate_core(k: int, w: Word) -> CoreGraph:
        return build_core(alphabet, [apply_twist(sigma, k, g.conjugated_by(w)) for g in gens])

    work = [(k, w) for k in range(m) for w in reps]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cores = list(pool.map(lambda kw: conjugate_core(*kw), work))
    else:
        cores = [conjugate_core(k, w) for k, w in work]

    infinite: list[tuple[int, Word, CoreGraph]] = []
    buckets: list[tuple[int, Word, object]] = []
    for (k, w), core in zip(work, cores):
        if pullback_n([graph, core], (graph.base, core.base)).rank == 0:
            continue
        infinite.append((k, w, core))
        for bk, _, aut in buckets:
            if bk == k and aut.contains(w):
                break
        else:
            buckets.append((k, w, dc_automaton(graph, w, inv_cores[k])))

    per_twist = [sum(1 for bk, _, _ in buckets if bk == k) for k in range(m)]
    out_buckets = [OracleBucket(bk, w) for bk, w, _ in buckets]

    truncation: list[str] = []
    cand = infinite
    if len(cand) > max_conjugates:
        truncation.append(f"conjugate list capped at {max_conjugates} of {len(cand)}")
        cand = cand[:max_conjugates]

    pair: dict[tuple[int, int], bool] = {}
    for i in range(len(cand)):
        for j in range(i + 1, len(cand)):
            pair[(i, j)] = pullback_n([cand[i][2], cand[j][2]],
                                      (cand[i][2].base, cand[j][2].base)).rank > 0

    clique = max_clique(len(cand), _pair_neighbors(len(cand), pair))
    width: Optional[int] = max(len(clique), 1)
    n, _, _, capped = deepest_nontree_tuple(
        len(cand),
        has_edge=lambda i, j: pair[(min(i, j), max(i, j))],
        graph_of=lambda i: cand[i][2],
        vertex_of=lambda i: cand[i][2].base,
        cap=tuple_cap)
    height: Optional[int] = max(n, 1)
    if capped:
        truncation.append(f"tuple search capped at size {tuple_cap}")
        height = None
    if truncation and width is not None and len(cand) < len(infinite):
        width = None
        height = None
    return OracleReport(radius, per_twist, out_buckets, len(infinite), width, height, truncation)


def _pair_neighbors(count: int, pair: dict[tuple[int, int], bool]) -> list[set[int]]:
    nb: list[set[int]] = [set() for _ in range(count)]
    for (i, j), ok in pair.items():
        if ok:
            nb[i].add(j)
            nb[j].add(i)
    return nb


def oracle_comparison(report: InvariantReport, oracle_report: OracleReport,
                      max_len: int) -> dict:
    """Side-by-side agreement between the exact engine and the oracle.

    Double-coset buckets are compared through their shortlex-least
    representatives, both sides restricted to length <= max_len; width and
    height are compared only when the oracle ran untruncated.
    """
    engine = {(c.twist, str(c.shortest)) for c in report.weak_width_certificates
              if len(c.shortest) <= max_len}
    oracle_side = oracle_report.bucket_keys(max_len)
    buckets_agree = engine == oracle_side
    width_agree = None if oracle_report.width is None else oracle_report.width == report.width
    height_agree = None if oracle_report.height is None else oracle_report.height == report.height
    agree = buckets_agree and width_agree is not False and height_agree is not False
    return {"max_length": max_len,
            "buckets_agree": buckets_agree,
            "engine_buckets": sorted(f"t^{k}:{w}" for k, w in engine),
            "oracle_buckets": sorted(f"t^{k}:{w}" for k, w in oracle_side),
            "width_agree": width_agree,
            "height_agree": height_agree,
            "truncation": list(oracle_report.truncation),
            "agree": agree}
