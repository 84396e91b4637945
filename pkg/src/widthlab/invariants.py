"""Exact weak width, width, and height for subgroups of free groups.

Weak width counts double cosets HgH whose conjugate meets H infinitely;
components with a cycle in the fiber product of the core graph with itself
realize them.  Width and height are clique-type searches over the core
vertices: vertex q stands for the conjugate by its coset label a_q, two
vertices are related when the component of their pair has a cycle, and the
height search additionally requires a cycle in the joint n-fold product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .core_graph import CoreGraph, PullbackComponent, pullback2, pullback_n
from .dc import DoubleCosetAutomaton, dc_automaton
from .words import Word


@dataclass
class CosetWitness:
    """One double coset whose associated conjugate meets the subgroup in an
    infinite set; ``witness`` is a nontrivial element of that intersection."""

    twist: int
    rep: Word
    shortest: Word
    conjugator: Word
    witness: Word

    def to_json_dict(self) -> dict:
        return {"twist": self.twist, "representative": str(self.rep),
                "shortest": str(self.shortest), "conjugator": str(self.conjugator),
                "witness": str(self.witness)}


@dataclass
class CliqueMember:
    twist: int
    vertex: int
    label: Word
    conjugator: Word

    def to_json_dict(self) -> dict:
        return {"twist": self.twist, "vertex": self.vertex,
                "label": str(self.label), "conjugator": str(self.conjugator)}


@dataclass
class WidthCertificate:
    members: list[CliqueMember]
    pair_witnesses: list[tuple[int, int, Word]]

    def to_json_dict(self) -> dict:
        return {"members": [m.to_json_dict() for m in self.members],
                "pair_witnesses": [[i, j, str(w)] for i, j, w in self.pair_witnesses]}


@dataclass
class HeightCertificate:
    members: list[CliqueMember]
    witness: Optional[Word]

    def to_json_dict(self) -> dict:
        return {"members": [m.to_json_dict() for m in self.members],
                "witness": None if self.witness is None else str(self.witness)}


@dataclass
class WeakWidthPart:
    value: int
    cosets: list[CosetWitness]


@dataclass
class WidthPart:
    value: int
    certificate: Optional[WidthCertificate]


@dataclass
class HeightPart:
    value: int
    certificate: Optional[HeightCertificate]


@dataclass
class InvariantReport:
    weak_width: int
    width: int
    height: int
    per_twist: list[int]
    weak_width_certificates: list[CosetWitness]
    width_certificate: Optional[WidthCertificate]
    height_certificate: Optional[HeightCertificate]

    exact = {"weak_width": True, "width": True, "height": True}

    def to_json_dict(self) -> dict:
        return {
            "weak_width": self.weak_width,
            "width": self.width,
            "height": self.height,
            "exact": dict(self.exact),
            "per_twist_weak_width": list(self.per_twist),
            "certificates": {
                "weak_width": [c.to_json_dict() for c in self.weak_width_certificates],
                "width": None if self.width_certificate is None else self.width_certificate.to_json_dict(),
                "height": None if self.height_certificate is None else self.height_certificate.to_json_dict(),
            },
        }


def max_clique(count: int, neighbors: Sequence[set[int]]) -> list[int]:
    """Exact maximum clique, branch and bound over a degeneracy order;
    deterministic for a given graph."""
    if count == 0:
        return []
    remaining = set(range(count))
    order: list[int] = []
    while remaining:
        v = min(remaining, key=lambda u: (len(neighbors[u] & remaining), u))
        order.append(v)
        remaining.remove(v)

    best: list[int] = []

    def expand(clique: list[int], cand: list[int]) -> None:
        nonlocal best
        if len(clique) > len(best):
            best = list(clique)
        for idx, v in enumerate(cand):
            if len(clique) + len(cand) - idx <= len(best):
                return
            expand(clique + [v], [u for u in cand[idx + 1:] if u in neighbors[v]])

    expand([], order)
    return sorted(best)


def _cliques_of_size(count: int, has_edge: Callable[[int, int], bool], n: int):
    """Increasing n-tuples that are cliques under ``has_edge``, in
    lexicographic order."""
    clique: list[int] = []

    def extend(start: int):
        if len(clique) == n:
            yield tuple(clique)
            return
        for v in range(start, count - (n - len(clique)) + 1):
            if all(has_edge(u, v) for u in clique):
                clique.append(v)
                yield from extend(v + 1)
                clique.pop()

    yield from extend(0)


def deepest_nontree_tuple(count: int,
                          has_edge: Callable[[int, int], bool],
                          graph_of: Callable[[int], CoreGraph],
                          vertex_of: Callable[[int], int],
                          cap: Optional[int] = None,
                          ) -> tuple[int, Optional[tuple[int, ...]], Optional[Word], bool]:
    """Largest n >= 2 such that some increasing n-tuple of items, pairwise
    related by ``has_edge``, spans a fiber-product component with a cycle.

    Returns (n, tuple, witness, capped); n = 1 with no tuple when no pair
    works.  ``capped`` reports that the search stopped at ``cap`` with a
    witness still in hand, so deeper tuples were not ruled out.
    """
    best: tuple[int, Optional[tuple[int, ...]], Optional[Word]] = (1, None, None)
    top = count if cap is None else min(count, cap)
    n = 2
    while n <= top:
        found = None
        for combo in _cliques_of_size(count, has_edge, n):
            comp = pullback_n([graph_of(i) for i in combo],
                              tuple(vertex_of(i) for i in combo))
            if comp.rank > 0:
                found = (n, combo, comp.witness)
                break
        if found is None:
            return best + (False,)
        best = found
        n += 1
    return best + (best[0] == top and top < count,)


def _dedup_double_cosets(left: CoreGraph, right: CoreGraph,
                         comps: Sequence[PullbackComponent],
                         ) -> list[tuple[PullbackComponent, DoubleCosetAutomaton]]:
    """Keep one component per double coset; membership decides duplicates."""
    kept: list[tuple[PullbackComponent, DoubleCosetAutomaton]] = []
    for comp in comps:
        if any(aut.contains(comp.rep) for _, aut in kept):
            continue
        kept.append((comp, dc_automaton(left, comp.rep, right)))
    return kept


def _member_components(graph: CoreGraph):
    comps = pullback2(graph, graph)
    at: dict[tuple[int, int], int] = {}
    for idx, comp in enumerate(comps):
        for tup in comp.vertices:
            at[tup] = idx
    return comps, at


def member_edge(graph: CoreGraph, p: int, q: int) -> bool:
    """Whether the conjugates named by core vertices p and q intersect in an
    infinite subgroup; p = q asks whether the subgroup itself is infinite."""
    return pullback_n([graph, graph], (p, q)).rank > 0


def weak_width_free(graph: CoreGraph) -> WeakWidthPart:
    """Number of double cosets HgH with H meeting the conjugate by g in an
    infinite subgroup; the diagonal component counts the coset of H itself.
    Zero for the trivial subgroup."""
    if graph.num_edges == 0:
        return WeakWidthPart(0, [])
    comps = [c for c in pullback2(graph, graph) if c.rank > 0]
    kept = _dedup_double_cosets(graph, graph, comps)
    certs = []
    for comp, aut in kept:
        p = comp.rep_tuple[0]
        anchor = graph.label(p)
        certs.append(CosetWitness(twist=0, rep=comp.rep, shortest=aut.shortest(),
                                  conjugator=comp.rep.inverse(),
                                  witness=anchor * comp.witness * anchor.inverse()))
    return WeakWidthPart(len(kept), certs)


def width_free(graph: CoreGraph) -> WidthPart:
    if graph.num_edges == 0:
        return WidthPart(0, None)
    comps, at = _member_components(graph)
    n = graph.n_vertices
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for p in range(n):
        for q in range(p + 1, n):
            if comps[at[(p, q)]].rank > 0:
                neighbors[p].add(q)
                neighbors[q].add(p)
    clique = max_clique(n, neighbors)
    members = [CliqueMember(0, v, graph.label(v), graph.label(v)) for v in clique]
    pair_witnesses = []
    for i in range(len(clique)):
        for j in range(i + 1, len(clique)):
            comp = comps[at[(clique[i], clique[j])]]
            pair_witnesses.append((i, j, comp.witness_at((clique[i], clique[j]))))
    return WidthPart(len(clique), WidthCertificate(members, pair_witnesses))


def height_free(graph: CoreGraph) -> HeightPart:
    if graph.num_edges == 0:
        return HeightPart(0, None)
    comps, at = _member_components(graph)
    n, combo, witness, _ = deepest_nontree_tuple(
        graph.n_vertices,
        has_edge=lambda p, q: comps[at[(p, q)]].rank > 0,
        graph_of=lambda i: graph,
        vertex_of=lambda i: i)
    if combo is None:
        member = CliqueMember(0, graph.base, graph.label(graph.base), graph.label(graph.base))
        diag = comps[at[(graph.base, graph.base)]]
        return HeightPart(1, HeightCertificate([member], diag.witness_at((graph.base, graph.base))))
    members = [CliqueMember(0, v, graph.label(v), graph.label(v)) for v in combo]
    return HeightPart(n, HeightCertificate(members, witness))


def distinctness(graph: CoreGraph, elements: Sequence[Word], mode: str = "essential") -> bool:
    """Pairwise distinctness of the cosets Hg (essential) or the double
    cosets HgH (strong) named by the given elements."""
    if mode not in ("essential", "strong"):
        raise ValueError(f"unknown mode {mode!r}")
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if mode == "essential":
                if graph.contains(elements[i] * elements[j].inverse()):
                    return False
            else:
                if dc_automaton(graph, elements[j], graph).contains(elements[i]):
                    return False
    return True


def invariants_free(graph: CoreGraph) -> InvariantReport:
    ww = weak_width_free(graph)
    wd = width_free(graph)
    ht = height_free(graph)
    return InvariantReport(weak_width=ww.value, width=wd.value, height=ht.value,
                           per_twist=[ww.value],
                           weak_width_certificates=ww.cosets,
                           width_certificate=wd.certificate,
                           height_certificate=ht.certificate)
