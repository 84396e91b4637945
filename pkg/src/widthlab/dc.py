"""Exact recognizers for double cosets A·d·B of subgroups of a free group.

Folding the two subgroup graphs onto a connecting path does not work here:
the folded complex also reads elements of ``<A, dBd^-1>·d`` (a path may cross
the bridge back and forth), which is strictly larger than A·d·B in general.
Instead the recognizer is a nondeterministic automaton: the two subgroup
graphs chained through a one-way path reading ``d``, then closed under free
reduction by inserting an epsilon move wherever some path reads ``x`` and
then ``x^-1``.  Reduced words accepted between the two basepoint images are
then exactly the reduced forms of the elements of A·d·B.
"""

from __future__ import annotations

from collections import deque

from .core_graph import CoreGraph
from .words import AlphabetError, Word


class DoubleCosetAutomaton:
    """Decides membership of reduced words in A·d·B and yields the
    shortlex-least element of the double coset."""

    def __init__(self, left: CoreGraph, middle: Word, right: CoreGraph):
        if left.alphabet != right.alphabet:
            raise AlphabetError("double coset factors use different alphabets")
        if middle.rank != left.alphabet.rank:
            raise AlphabetError("middle word does not match the factors' alphabet")
        self.alphabet = left.alphabet

        n_left = left.n_vertices
        bridge = max(len(middle) - 1, 0)
        offset = n_left + bridge
        n = offset + right.n_vertices
        trans: list[dict[int, set[int]]] = [dict() for _ in range(n)]

        def add(p: int, ell: int, q: int) -> None:
            trans[p].setdefault(ell, set()).add(q)

        for u, i, v in left.edges:
            add(u, i, v)
            add(v, -i, u)
        for u, i, v in right.edges:
            add(offset + u, i, offset + v)
            add(offset + v, -i, offset + u)

        self.start = left.base
        self.accept = offset + right.base
        eps: list[set[int]] = [set() for _ in range(n)]
        if middle.letters:
            prev = self.start
            for idx, ell in enumerate(middle.letters):
                nxt = self.accept if idx == len(middle.letters) - 1 else n_left + idx
                add(prev, ell, nxt)
                prev = nxt
        else:
            eps[self.start].add(self.accept)

        self._trans = trans
        self._eps = eps
        self._saturate()

    def _closures(self) -> list[frozenset[int]]:
        out = []
        for s in range(len(self._trans)):
            seen = {s}
            stack = [s]
            while stack:
                p = stack.pop()
                for q in self._eps[p]:
                    if q not in seen:
                        seen.add(q)
                        stack.append(q)
            out.append(frozenset(seen))
        return out

    def _saturate(self) -> None:
        # close under cancellation: p -x-> q =eps=> q' -x^-1-> r adds eps p -> r
        while True:
            clo = self._closures()
            added = False
            for p, tmap in enumerate(self._trans):
                for ell, targets in tmap.items():
                    for q in targets:
                        for q2 in clo[q]:
                            for r in self._trans[q2].get(-ell, ()):
                                if r != p and r not in clo[p] and r not in self._eps[p]:
                                    self._eps[p].add(r)
                                    added = True
            if not added:
                break
        self._clo = self._closures()

    def _advance(self, states: frozenset[int], ell: int) -> frozenset[int]:
        hit: set[int] = set()
        for s in states:
            hit.update(self._trans[s].get(ell, ()))
        out: set[int] = set()
        for s in hit:
            out.update(self._clo[s])
        return frozenset(out)

    def contains(self, word: Word) -> bool:
        if word.rank != self.alphabet.rank:
            raise AlphabetError("word does not match the automaton's alphabet")
        cur = self._clo[self.start]
        for ell in word.letters:
            cur = self._advance(cur, ell)
            if not cur:
                return False
        return self.accept in cur

    def shortest(self) -> Word:
        """Shortlex-least reduced word in the double coset."""
        start = self._clo[self.start]
        if self.accept in start:
            return Word(self.alphabet.rank)
        letters = self.alphabet.signed_letters
        seen = {(start, 0)}
        queue = deque([(start, 0, ())])
        while queue:
            states, last, path = queue.popleft()
            for ell in letters:
                if ell == -last:
                    continue
                nxt = self._advance(states, ell)
                if not nxt:
                    continue
                word = path + (ell,)
                if self.accept in nxt:
                    return Word(self.alphabet.rank, word)
                key = (nxt, ell)
                if key not in seen:
                    seen.add(key)
                    queue.append((nxt, ell, word))
        raise RuntimeError("double coset automaton accepted no word")


def dc_automaton(left: CoreGraph, middle: Word, right: CoreGraph) -> DoubleCosetAutomaton:
    return DoubleCosetAutomaton(left, middle, right)
