"""Freely reduced words over the symmetric alphabet of a free group.

A letter is a nonzero integer: ``+i`` is the generator ``x_i`` and ``-i``
its formal inverse.  The textual form is whitespace separated, ``x2`` for a
generator and ``X2`` for its inverse.  Everything here keeps words freely
reduced; the empty word is the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable


class AlphabetError(ValueError):
    """A letter, token, or operand does not fit the declared alphabet."""


def letter_token(ell: int) -> str:
    return f"x{ell}" if ell > 0 else f"X{-ell}"


def token_letter(token: str) -> int:
    sign, digits = token[:1], token[1:]
    if sign in ("x", "X") and digits.isdigit() and int(digits) >= 1:
        return int(digits) if sign == "x" else -int(digits)
    raise AlphabetError(f"bad token {token!r} (expected xN or XN with N >= 1)")


def letter_key(ell: int) -> tuple[int, int]:
    """Sort key giving the letter order x1 < X1 < x2 < X2 < ..."""
    return (abs(ell), 0 if ell > 0 else 1)


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for ell in letters:
        if out and out[-1] == -ell:
            out.pop()
        else:
            out.append(int(ell))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; ``rank`` pins the ambient alphabet."""

    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for ell in self.letters:
            if ell == 0 or abs(ell) > self.rank:
                raise AlphabetError(f"letter {ell!r} outside alphabet of rank {self.rank}")
        for a, b in itertools.pairwise(self.letters):
            if a == -b:
                raise ValueError(f"{self.letters} is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __str__(self) -> str:
        return " ".join(letter_token(ell) for ell in self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def inverse(self) -> "Word":
        return Word(self.rank, tuple(-ell for ell in reversed(self.letters)))

    def shortlex_key(self):
        return (len(self.letters), tuple(letter_key(ell) for ell in self.letters))

    def conjugated_by(self, g: "Word") -> "Word":
        """The reduced form of g^-1 * self * g."""
        return multiply(multiply(g.inverse(), self), g)


@dataclass(frozen=True)
class Alphabet:
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise AlphabetError("alphabet rank must be at least 1")

    @property
    def signed_letters(self) -> tuple[int, ...]:
        pairs = (ell for i in range(1, self.rank + 1) for ell in (i, -i))
        return tuple(sorted(pairs, key=letter_key))

    def identity(self) -> Word:
        return Word(self.rank)

    def word(self, letters: Iterable[int]) -> Word:
        return reduce_word(self, letters)

    def parse(self, text: str) -> Word:
        return reduce_word(self, [token_letter(tok) for tok in text.split()])


def reduce_word(alphabet: Alphabet, letters: Iterable[int]) -> Word:
    """Freely reduce a raw letter sequence; idempotent on reduced input."""
    seq = tuple(int(ell) for ell in letters)
    for ell in seq:
        if ell == 0 or abs(ell) > alphabet.rank:
            raise AlphabetError(f"letter {ell} outside alphabet of rank {alphabet.rank}")
    return Word(alphabet.rank, free_reduce(seq))


def multiply(a: Word, b: Word) -> Word:
    if a.rank != b.rank:
        raise AlphabetError(f"rank mismatch: {a.rank} vs {b.rank}")
    xs, ys = a.letters, b.letters
    i, j = len(xs), 0
    while i > 0 and j < len(ys) and xs[i - 1] == -ys[j]:
        i -= 1
        j += 1
    return Word(a.rank, xs[:i] + ys[j:])


def invert(a: Word) -> Word:
    return a.inverse()


def cyclic_reduce(a: Word) -> tuple[Word, Word]:
    """Split ``a`` as conj * core * conj^-1 with the core cyclically reduced."""
    xs = a.letters
    i, j = 0, len(xs)
    while j - i >= 2 and xs[i] == -xs[j - 1]:
        i += 1
        j -= 1
    return Word(a.rank, xs[i:j]), Word(a.rank, xs[:i])


@dataclass(frozen=True)
class GeneratorPermutation:
    """A permutation of the generator indices, together with the order of the
    twisting element.  The permutation's own order must divide ``order``."""

    images: tuple[int, ...]
    order: int

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"{self.images} is not a permutation of 1..{n}")
        if self.order < 1:
            raise ValueError("order must be a positive integer")
        table = tuple(range(1, n + 1))
        for _ in range(self.order):
            table = tuple(self.images[i - 1] for i in table)
        if table != tuple(range(1, n + 1)):
            raise ValueError(f"permutation {self.images} does not have order dividing {self.order}")

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, rank: int, order: int = 1) -> "GeneratorPermutation":
        return cls(tuple(range(1, rank + 1)), order)

    def power(self, k: int) -> tuple[int, ...]:
        """Index table of sigma^k; negative k is inverted through the order."""
        table = tuple(range(1, self.rank + 1))
        for _ in range(k % self.order):
            table = tuple(self.images[i - 1] for i in table)
        return table


def apply_twist(sigma: GeneratorPermutation, k: int, a: Word) -> Word:
    """Apply the generator substitution x_i -> x_{sigma^k(i)} letterwise."""
    if sigma.rank != a.rank:
        raise AlphabetError(f"permutation on {sigma.rank} letters, word over rank {a.rank}")
    table = sigma.power(k)
    mapped = tuple(table[ell - 1] if ell > 0 else -table[-ell - 1] for ell in a.letters)
    return Word(a.rank, mapped)
