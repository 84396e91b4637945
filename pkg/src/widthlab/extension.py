"""Subgroups of the free kernel inside a generator-permuting extension.

The ambient group is G = F_n ⋊ Z/m with t^-1 x_i t = x_{sigma(i)}, so every
element has the normal form w·t^k.  For a subgroup H of F the conjugate by
w·t^k equals b^-1·phi^k(H)·b with b = phi^k(w), which turns every question
about conjugates in G into fiber products of the twisted cores phi^k(H).
Double cosets H·(w t^k)·H correspond, twist by twist, to the F-side cosets
H·w·phi^-k(H); distinct twists are automatically distinct.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core_graph import CoreGraph, pullback2, pullback_n
from .dc import dc_automaton
from .invariants import (CliqueMember, CosetWitness, HeightCertificate, InvariantReport,
                         WidthCertificate, _dedup_double_cosets, deepest_nontree_tuple,
                         max_clique)
from .words import Alphabet, AlphabetError, GeneratorPermutation, Word, apply_twist


@dataclass(frozen=True)
class ExtensionSpec:
    """Ambient group F_n ⋊ Z/m given by the generator permutation sigma."""

    alphabet: Alphabet
    twist: GeneratorPermutation

    def __post_init__(self):
        if self.twist.rank != self.alphabet.rank:
            raise AlphabetError(
                f"permutation on {self.twist.rank} letters, alphabet of rank {self.alphabet.rank}")

    @property
    def order(self) -> int:
        return self.twist.order

    def element(self, fpart: Word, tpart: int) -> "ExtElement":
        if fpart.rank != self.alphabet.rank:
            raise AlphabetError("element word does not match the extension's alphabet")
        return ExtElement(fpart, tpart % self.order)

    def identity(self) -> "ExtElement":
        return ExtElement(Word(self.alphabet.rank), 0)

    def to_json_dict(self) -> dict:
        return {"rank": self.alphabet.rank, "order": self.order, "perm": list(self.twist.images)}


def free_spec(alphabet: Alphabet) -> ExtensionSpec:
    """Degenerate extension (m = 1) whose ambient group is F itself."""
    return ExtensionSpec(alphabet, GeneratorPermutation.identity(alphabet.rank))


@dataclass(frozen=True)
class ExtElement:
    """Normal form w·t^k of an element of the extension."""

    fpart: Word
    tpart: int

    def __str__(self) -> str:
        t = "" if self.tpart == 0 else ("t" if self.tpart == 1 else f"t^{self.tpart}")
        f = str(self.fpart)
        if not f and not t:
            return "1"
        return f"{f} {t}".strip()

    def to_json_dict(self) -> dict:
        return {"f": str(self.fpart), "t": self.tpart}


def ext_mul(spec: ExtensionSpec, a: ExtElement, b: ExtElement) -> ExtElement:
    # (w1, k1)(w2, k2) = (w1 · phi^-k1(w2), k1 + k2)
    return spec.element(a.fpart * apply_twist(spec.twist, -a.tpart, b.fpart),
                        a.tpart + b.tpart)


def ext_inv(spec: ExtensionSpec, a: ExtElement) -> ExtElement:
    # (w, k)^-1 = (phi^k(w^-1), -k)
    return spec.element(apply_twist(spec.twist, a.tpart, a.fpart.inverse()), -a.tpart)


def ext_conjugate(spec: ExtensionSpec, a: ExtElement, g: ExtElement) -> ExtElement:
    """g^-1 · a · g in normal form."""
    return ext_mul(spec, ext_mul(spec, ext_inv(spec, g), a), g)


def twisted_cores(graph: CoreGraph, spec: ExtensionSpec) -> list[CoreGraph]:
    """Cores of phi^k(H) for k = 0..m-1; edges relabeled, vertex ids kept."""
    return [graph.relabeled(spec.twist.power(k)) for k in range(spec.order)]


@dataclass(frozen=True)
class MemberNode:
    """A conjugate of H in G that can meet a twisted core: twist k plus a
    vertex q of core(phi^k(H)); the conjugating element is phi^-k(b_q)·t^k."""

    twist: int
    vertex: int
    label: Word
    coset_rep: ExtElement


@dataclass
class NodeGraph:
    nodes: list[MemberNode]
    edges: set[tuple[int, int]]
    witnesses: dict[tuple[int, int], Word]

    def neighbors(self) -> list[set[int]]:
        nb: list[set[int]] = [set() for _ in self.nodes]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return nb

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


def node_graph(graph: CoreGraph, spec: ExtensionSpec) -> NodeGraph:
    """All member nodes with an edge wherever the pair of conjugates has an
    infinite intersection, decided on the fiber product of the twisted cores."""
    cores = twisted_cores(graph, spec)
    m = spec.order
    nodes = [MemberNode(k, q, cores[k].label(q),
                        spec.element(apply_twist(spec.twist, -k, cores[k].label(q)), k))
             for k in range(m) for q in range(graph.n_vertices)]

    products = {}
    for k in range(m):
        for k2 in range(k, m):
            comps = pullback2(cores[k], cores[k2])
            at: dict[tuple[int, int], int] = {}
            for idx, comp in enumerate(comps):
                for tup in comp.vertices:
                    at[tup] = idx
            products[(k, k2)] = (comps, at)

    edges: set[tuple[int, int]] = set()
    witnesses: dict[tuple[int, int], Word] = {}
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            a, b = nodes[i], nodes[j]
            if a.twist <= b.twist:
                comps, at = products[(a.twist, b.twist)]
                tup = (a.vertex, b.vertex)
            else:
                comps, at = products[(b.twist, a.twist)]
                tup = (b.vertex, a.vertex)
            comp = comps[at[tup]]
            if comp.rank > 0:
                edges.add((i, j))
                witnesses[(i, j)] = comp.witness_at(tup)
    return NodeGraph(nodes, edges, witnesses)


def _node_member(node: MemberNode) -> CliqueMember:
    return CliqueMember(node.twist, node.vertex, node.label, node.coset_rep.fpart)


def invariants_ext(graph: CoreGraph, spec: ExtensionSpec) -> InvariantReport:
    """Exact weak width, width, and height of a subgroup of the free kernel
    inside the extension group."""
    if graph.alphabet != spec.alphabet:
        raise AlphabetError("subgroup graph and extension use different alphabets")
    m = spec.order
    if graph.num_edges == 0:
        return InvariantReport(0, 0, 0, [0] * m, [], None, None)

    cores = twisted_cores(graph, spec)
    inv_cores = [graph.relabeled(spec.twist.power(-k)) for k in range(m)]

    per_twist: list[int] = []
    certs: list[CosetWitness] = []
    for k in range(m):
        comps = [c for c in pullback2(cores[0], cores[k]) if c.rank > 0]
        kept = _dedup_double_cosets(graph, cores[k], comps)
        per_twist.append(len(kept))
        for comp, _ in kept:
            p = comp.rep_tuple[0]
            anchor = cores[0].label(p)
            conj_f = apply_twist(spec.twist, -k, comp.rep.inverse())
            shortest_f = dc_automaton(graph, conj_f, inv_cores[k]).shortest()
            certs.append(CosetWitness(twist=k, rep=comp.rep, shortest=shortest_f,
                                      conjugator=conj_f,
                                      witness=anchor * comp.witness * anchor.inverse()))

    ng = node_graph(graph, spec)
    clique = max_clique(len(ng.nodes), ng.neighbors())
    width_members = [_node_member(ng.nodes[i]) for i in clique]
    pair_witnesses = []
    for i in range(len(clique)):
        for j in range(i + 1, len(clique)):
            key = (min(clique[i], clique[j]), max(clique[i], clique[j]))
            pair_witnesses.append((i, j, ng.witnesses[key]))
    width_cert = WidthCertificate(width_members, pair_witnesses)

    n, combo, witness, _ = deepest_nontree_tuple(
        len(ng.nodes),
        has_edge=ng.has_edge,
        graph_of=lambda i: cores[ng.nodes[i].twist],
        vertex_of=lambda i: ng.nodes[i].vertex)
    if combo is None:
        diag = pullback_n([graph, graph], (graph.base, graph.base))
        height_cert = HeightCertificate([_node_member(ng.nodes[0])],
                                        diag.witness_at((graph.base, graph.base)))
        height = 1
    else:
        height_cert = HeightCertificate([_node_member(ng.nodes[i]) for i in combo], witness)
        height = n

    return InvariantReport(weak_width=sum(per_twist), width=len(clique), height=height,
                           per_twist=per_twist, weak_width_certificates=certs,
                           width_certificate=width_cert, height_certificate=height_cert)


def ext_distinctness(graph: CoreGraph, spec: ExtensionSpec,
                     elements: Sequence[ExtElement], mode: str = "essential") -> bool:
    """Pairwise distinctness of cosets H·g (essential) or double cosets H·g·H
    (strong) in the extension group; differing t-parts are always distinct."""
    if mode not in ("essential", "strong"):
        raise ValueError(f"unknown mode {mode!r}")
    inv_cores: dict[int, CoreGraph] = {}
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            a, b = elements[i], elements[j]
            if a.tpart != b.tpart:
                continue
            if mode == "essential":
                if graph.contains(a.fpart * b.fpart.inverse()):
                    return False
            else:
                k = a.tpart
                if k not in inv_cores:
                    inv_cores[k] = graph.relabeled(spec.twist.power(-k))
                if dc_automaton(graph, b.fpart, inv_cores[k]).contains(a.fpart):
                    return False
    return True
