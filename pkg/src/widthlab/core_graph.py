"""Stallings core graphs and their fiber products.

A ``CoreGraph`` is the folded basepointed automaton of a finitely generated
subgroup of a free group: reduced words labelling closed paths at the
basepoint are exactly the subgroup elements.  Fiber products (pullbacks) of
core graphs compute intersections of conjugates; their connected components
carry double-coset representatives and witness cycles for the invariants
built on top of them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .words import Alphabet, AlphabetError, Word, free_reduce, letter_key


class CoreGraph:
    """Folded basepointed labeled graph; the basepoint is vertex 0.

    ``edges`` holds one record ``(u, i, v)`` per positive-letter edge; the
    edge reads ``x_i`` from u to v and ``x_i^-1`` back.  Vertices other than
    the basepoint always have degree at least two (core property).
    """

    __slots__ = ("alphabet", "n_vertices", "edges", "_out", "_labels")

    base = 0

    def __init__(self, alphabet: Alphabet, n_vertices: int, edges: Iterable[tuple[int, int, int]]):
        self.alphabet = alphabet
        self.n_vertices = int(n_vertices)
        self.edges = tuple(sorted(edges))
        out: list[dict[int, int]] = [dict() for _ in range(self.n_vertices)]
        for u, i, v in self.edges:
            if not (0 < i <= alphabet.rank) or not (0 <= u < self.n_vertices) or not (0 <= v < self.n_vertices):
                raise ValueError(f"bad edge record {(u, i, v)}")
            for src, ell, tgt in ((u, i, v), (v, -i, u)):
                if out[src].get(ell, tgt) != tgt:
                    raise ValueError(f"graph is not folded at vertex {src}, letter {ell}")
                out[src][ell] = tgt
        self._out = tuple(out)
        self._labels: Optional[tuple[Word, ...]] = None

    def __eq__(self, other) -> bool:
        return (isinstance(other, CoreGraph)
                and self.alphabet == other.alphabet
                and self.n_vertices == other.n_vertices
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.alphabet, self.n_vertices, self.edges))

    def __repr__(self) -> str:
        return f"CoreGraph(rank={self.alphabet.rank}, vertices={self.n_vertices}, edges={len(self.edges)})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def cycle_rank(self) -> int:
        """E - V + 1; equals the rank of the subgroup the graph presents."""
        return len(self.edges) - self.n_vertices + 1

    def step(self, v: int, ell: int) -> Optional[int]:
        return self._out[v].get(ell)

    def out_letters(self, v: int) -> list[int]:
        return sorted(self._out[v], key=letter_key)

    def degree(self, v: int) -> int:
        return len(self._out[v])

    def labels(self) -> tuple[Word, ...]:
        """Shortlex-minimal path label from the basepoint to every vertex."""
        if self._labels is None:
            lab: list[Optional[tuple[int, ...]]] = [None] * self.n_vertices
            lab[self.base] = ()
            queue = deque([self.base])
            while queue:
                v = queue.popleft()
                for ell in self.out_letters(v):
                    w = self._out[v][ell]
                    if lab[w] is None:
                        lab[w] = lab[v] + (ell,)
                        queue.append(w)
            if any(l is None for l in lab):
                raise ValueError("core graph is not connected")
            self._labels = tuple(Word(self.alphabet.rank, l) for l in lab)
        return self._labels

    def label(self, v: int) -> Word:
        return self.labels()[v]

    def walk(self, start: int, word: Word) -> Optional[int]:
        cur: Optional[int] = start
        for ell in word.letters:
            cur = self._out[cur].get(ell)
            if cur is None:
                return None
        return cur

    def contains(self, word: Word) -> bool:
        if word.rank != self.alphabet.rank:
            raise AlphabetError(f"word over rank {word.rank}, graph over rank {self.alphabet.rank}")
        return self.walk(self.base, word) == self.base

    def locate(self, word: Word) -> Optional[tuple[int, Word]]:
        """Vertex reached reading ``word`` from the basepoint and the shortlex
        label of that vertex, or None when the walk leaves the graph."""
        if word.rank != self.alphabet.rank:
            raise AlphabetError(f"word over rank {word.rank}, graph over rank {self.alphabet.rank}")
        v = self.walk(self.base, word)
        if v is None:
            return None
        return v, self.label(v)

    def basis(self) -> list[Word]:
        """A free basis of the subgroup: one generator per edge outside the
        shortlex spanning tree, conjugated back to the basepoint."""
        labels = self.labels()
        out = []
        for u, i, v in self.edges:
            if labels[v].letters == labels[u].letters + (i,):
                continue
            if labels[u].letters == labels[v].letters + (-i,):
                continue
            out.append(labels[u] * Word(self.alphabet.rank, (i,)) * labels[v].inverse())
        return out

    def distances_to_base(self) -> tuple[int, ...]:
        dist = [-1] * self.n_vertices
        dist[self.base] = 0
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for ell in self._out[v]:
                w = self._out[v][ell]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return tuple(dist)

    def relabeled(self, table: Sequence[int]) -> "CoreGraph":
        """Rename letter i to table[i-1] (a permutation); vertex ids are kept."""
        return CoreGraph(self.alphabet, self.n_vertices,
                         ((u, table[i - 1], v) for u, i, v in self.edges))

    def canonical(self) -> "CoreGraph":
        """Renumber vertices by shortlex breadth-first discovery from the base."""
        order = [self.base]
        index = {self.base: 0}
        qi = 0
        while qi < len(order):
            v = order[qi]
            qi += 1
            for ell in self.out_letters(v):
                w = self._out[v][ell]
                if w not in index:
                    index[w] = len(order)
                    order.append(w)
        if len(order) != self.n_vertices:
            raise ValueError("core graph is not connected")
        return CoreGraph(self.alphabet, self.n_vertices,
                         ((index[u], i, index[v]) for u, i, v in self.edges))

    def to_dot(self, name: str = "core") -> str:
        lines = [f"digraph {name} {{", "  node [shape=circle];",
                 f"  {self.base} [shape=doublecircle];"]
        for v in range(self.n_vertices):
            if v != self.base:
                lines.append(f"  {v};")
        for u, i, v in self.edges:
            lines.append(f'  {u} -> {v} [label="x{i}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_core(alphabet: Alphabet, generators: Sequence[Word]) -> CoreGraph:
    """Fold the wedge of generator loops into the subgroup's core graph.

    The result is independent of generator order and redundancy: loops are
    attached at the basepoint, Stallings folding identifies same-letter edges
    until the letter action is deterministic, and hanging trees away from the
    basepoint are pruned.  Vertices are numbered canonically (breadth-first,
    shortlex), so equal subgroups give equal graphs.
    """
    for w in generators:
        if w.rank != alphabet.rank:
            raise AlphabetError(f"generator over rank {w.rank}, alphabet rank {alphabet.rank}")

    adj: list[dict[int, set[int]]] = [{}]

    def add_edge(u: int, ell: int, v: int) -> None:
        adj[u].setdefault(ell, set()).add(v)
        adj[v].setdefault(-ell, set()).add(u)

    for w in generators:
        if not w.letters:
            continue
        cur = 0
        for ell in w.letters[:-1]:
            adj.append({})
            add_edge(cur, ell, len(adj) - 1)
            cur = len(adj) - 1
        add_edge(cur, w.letters[-1], 0)

    parent = list(range(len(adj)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> int:
        a, b = find(a), find(b)
        if a == b:
            return a
        if b < a:
            a, b = b, a
        parent[b] = a
        for ell, targets in adj[b].items():
            adj[a].setdefault(ell, set()).update(targets)
        adj[b] = {}
        return a

    # fold until every vertex reads each letter at most once
    changed = True
    while changed:
        changed = False
        for u in range(len(adj)):
            if find(u) != u:
                continue
            for ell in list(adj[u]):
                targets = {find(t) for t in adj[u][ell]}
                adj[u][ell] = targets
                if len(targets) > 1:
                    run = sorted(targets)
                    acc = run[0]
                    for other in run[1:]:
                        acc = union(acc, other)
                    changed = True
                    break
            if changed:
                break

    base = find(0)
    trans: dict[int, dict[int, int]] = {}
    for u in range(len(adj)):
        if find(u) != u:
            continue
        trans[u] = {ell: find(next(iter(ts))) for ell, ts in adj[u].items() if ts}

    # prune hanging trees: a degree-one vertex other than the base is dead
    pruning = True
    while pruning:
        pruning = False
        for u in list(trans):
            if u == base or len(trans[u]) > 1:
                continue
            if trans[u]:
                ((ell, t),) = trans[u].items()
                del trans[t][-ell]
            del trans[u]
            pruning = True

    order = [base]
    index = {base: 0}
    qi = 0
    while qi < len(order):
        v = order[qi]
        qi += 1
        for ell in sorted(trans[v], key=letter_key):
            w = trans[v][ell]
            if w not in index:
                index[w] = len(order)
                order.append(w)
    edges = ((index[u], ell, index[trans[u][ell]])
             for u in trans for ell in trans[u] if ell > 0)
    return CoreGraph(alphabet, len(order), edges)


def contains(graph: CoreGraph, word: Word) -> bool:
    return graph.contains(word)


def locate_coset(graph: CoreGraph, word: Word) -> Optional[tuple[int, Word]]:
    return graph.locate(word)


@dataclass
class PullbackComponent:
    """A connected component of a fiber product of core graphs.

    ``rep_tuple`` is the component's anchor; ``labels`` maps every vertex
    tuple to the spanning-tree path label from the anchor.  For binary
    products ``rep`` is the double-coset representative a_p * b_q^-1 at the
    anchor (p, q).  ``witness`` is a nontrivial reduced word reading a closed
    path at the anchor in every coordinate at once, present exactly when the
    component has a cycle.
    """

    arity: int
    vertices: tuple[tuple[int, ...], ...]
    rank: int
    rep_tuple: tuple[int, ...]
    rep: Optional[Word]
    witness: Optional[Word]
    labels: dict[tuple[int, ...], Word] = field(repr=False)
    edge_records: tuple = field(default=(), repr=False)

    @property
    def is_tree(self) -> bool:
        return self.rank == 0

    def witness_at(self, tup: tuple[int, ...]) -> Optional[Word]:
        """The witness cycle conjugated to be a closed path at ``tup``."""
        if self.witness is None:
            return None
        path = self.labels[tup]
        return path.inverse() * self.witness * path

    def to_dot(self, name: str = "pullback") -> str:
        ids = {tup: n for n, tup in enumerate(self.vertices)}
        lines = [f"digraph {name} {{", "  node [shape=circle];"]
        for tup in self.vertices:
            shape = ' shape=doublecircle' if tup == self.rep_tuple else ""
            label = ",".join(str(c) for c in tup)
            lines.append(f'  {ids[tup]} [label="({label})"{shape}];')
        for tup, ell, nxt in self.edge_records:
            lines.append(f'  {ids[tup]} -> {ids[nxt]} [label="x{ell}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _component(graphs: Sequence[CoreGraph], base: tuple[int, ...]) -> PullbackComponent:
    alphabet = graphs[0].alphabet
    for g in graphs[1:]:
        if g.alphabet != alphabet:
            raise AlphabetError("pullback factors use different alphabets")
    for g, v in zip(graphs, base):
        if not (0 <= v < g.n_vertices):
            raise ValueError(f"vertex {v} outside graph with {g.n_vertices} vertices")
    letters = alphabet.signed_letters

    def step(tup: tuple[int, ...], ell: int) -> Optional[tuple[int, ...]]:
        nxt = []
        for g, v in zip(graphs, tup):
            w = g.step(v, ell)
            if w is None:
                return None
            nxt.append(w)
        return tuple(nxt)

    parent: dict[tuple[int, ...], Optional[tuple[tuple[int, ...], int]]] = {base: None}
    order = [base]
    qi = 0
    while qi < len(order):
        tup = order[qi]
        qi += 1
        for ell in letters:
            nxt = step(tup, ell)
            if nxt is not None and nxt not in parent:
                parent[nxt] = (tup, ell)
                order.append(nxt)

    paths: dict[tuple[int, ...], tuple[int, ...]] = {base: ()}
    for tup in order[1:]:
        pre, ell = parent[tup]
        paths[tup] = paths[pre] + (ell,)

    n_edges = 0
    witness = None
    edge_records = []
    for tup in order:
        for ell in letters:
            if ell < 0:
                continue
            nxt = step(tup, ell)
            if nxt is None:
                continue
            n_edges += 1
            edge_records.append((tup, ell, nxt))
            if witness is None:
                is_tree_edge = parent.get(nxt) == (tup, ell) or parent.get(tup) == (nxt, -ell)
                if not is_tree_edge:
                    cycle = free_reduce(paths[tup] + (ell,) + tuple(-x for x in reversed(paths[nxt])))
                    witness = Word(alphabet.rank, cycle)

    rank = n_edges - len(order) + 1
    rep = None
    if len(graphs) == 2:
        rep = graphs[0].label(base[0]) * graphs[1].label(base[1]).inverse()
    labels = {tup: Word(alphabet.rank, p) for tup, p in paths.items()}
    return PullbackComponent(arity=len(graphs), vertices=tuple(sorted(order)), rank=rank,
                             rep_tuple=base, rep=rep, witness=witness, labels=labels,
                             edge_records=tuple(edge_records))


def pullback2(a: CoreGraph, b: CoreGraph) -> list[PullbackComponent]:
    """All components of the fiber product of two core graphs.

    Vertices are the pairs (u, v); simultaneous same-letter edges join them.
    Each component is anchored at its lexicographically least pair, so the
    component of (base, base) comes first and carries the diagonal.
    """
    comps: list[PullbackComponent] = []
    seen: set[tuple[int, int]] = set()
    for p in range(a.n_vertices):
        for q in range(b.n_vertices):
            if (p, q) in seen:
                continue
            comp = _component([a, b], (p, q))
            seen.update(comp.vertices)
            comps.append(comp)
    return comps


def pullback_n(graphs: Sequence[CoreGraph], base: Sequence[int]) -> PullbackComponent:
    """The component of the n-fold fiber product containing ``base``,
    explored breadth-first without materializing the whole product."""
    if len(graphs) < 2:
        raise ValueError("pullback needs at least two factors")
    if len(graphs) != len(base):
        raise ValueError("base tuple arity does not match the number of factors")
    return _component(list(graphs), tuple(base))
