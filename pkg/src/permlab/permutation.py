"""Permutations in one-line notation and their structural features.

A permutation of size n is the word (w(1), ..., w(n)), a rearrangement of
1..n.  Positions and values are 1-based everywhere in the public API.
All operations are pure and all returned containers are immutable, so
values can be shared freely between concurrent workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .errors import InvalidPermutationError

__all__ = [
    "Permutation",
    "RunDecomposition",
    "CycleDecomposition",
    "PositionClasses",
    "parse_permutation",
    "identity",
    "inverse",
    "reverse",
    "runs",
    "position_classes",
    "global_ascents",
    "left_to_right_maxima",
    "cycle_decomposition",
]


class Permutation:
    """A permutation of {1, ..., n} in one-line notation.

    >>> p = Permutation([3, 1, 2])
    >>> p(1), p(2), p(3)
    (3, 1, 2)
    >>> len(p)
    3
    >>> str(p)
    '3,1,2'
    """

    __slots__ = ("word",)

    def __init__(self, word: Iterable[int]) -> None:
        w = tuple(word)
        n = len(w)
        seen = [False] * (n + 1)
        for v in w:
            if not isinstance(v, int) or isinstance(v, bool):
                raise InvalidPermutationError(f"non-integer value {v!r}")
            if not 1 <= v <= n:
                raise InvalidPermutationError(f"value {v} out of range 1..{n}")
            if seen[v]:
                raise InvalidPermutationError(f"duplicate value {v}")
            seen[v] = True
        self.word = w

    def __call__(self, i: int) -> int:
        """Value at position i, 1-based."""
        if not 1 <= i <= len(self.word):
            raise IndexError(f"position {i} out of range 1..{len(self.word)}")
        return self.word[i - 1]

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self) -> Iterator[int]:
        return iter(self.word)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Permutation):
            return self.word == other.word
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.word)

    def __repr__(self) -> str:
        return f"Permutation({list(self.word)})"

    def __str__(self) -> str:
        return ",".join(map(str, self.word))


@dataclass(frozen=True)
class RunDecomposition:
    """Maximal strictly monotone consecutive blocks of a word.

    Concatenating ``runs`` in order reproduces the word.  ``tops`` holds
    each block's maximum and ``bottoms`` its minimum; for descending
    blocks the top is the first element, for ascending the last.
    """

    direction: str
    runs: tuple[tuple[int, ...], ...]
    tops: tuple[int, ...]
    bottoms: tuple[int, ...]


@dataclass(frozen=True)
class CycleDecomposition:
    """Disjoint cycles covering {1, ..., n}, with each cycle's maximum.

    A cycle (c1, ..., ck) means the permutation maps c1 -> c2 -> ... -> ck
    -> c1.  Cycles are written starting at their smallest element and
    listed by increasing smallest element.
    """

    cycles: tuple[tuple[int, ...], ...]
    maxima: frozenset[int]


class PositionClasses(NamedTuple):
    exceedances: frozenset[int]
    weak_deficiencies: frozenset[int]
    weak_deficiency_values: frozenset[int]


def parse_permutation(text: str) -> Permutation:
    """Parse a permutation from comma- or space-separated values.

    An undelimited digit string is accepted only while every value is a
    single digit, i.e. for words of length at most 9.

    >>> parse_permutation("3,1,2").word
    (3, 1, 2)
    >>> parse_permutation("312").word
    (3, 1, 2)
    """
    tokens = _tokenize(text)
    values = []
    for tok in tokens:
        try:
            values.append(int(tok))
        except ValueError:
            raise InvalidPermutationError(f"invalid token {tok!r}") from None
    return Permutation(values)


def _tokenize(text: str) -> list[str]:
    stripped = text.strip()
    if not stripped:
        return []
    if "," in stripped:
        tokens: list[str] = []
        for k, chunk in enumerate(stripped.split(","), start=1):
            sub = chunk.split()
            if not sub:
                raise InvalidPermutationError(f"empty token at position {k}")
            tokens.extend(sub)
        return tokens
    parts = stripped.split()
    if len(parts) > 1:
        return parts
    if stripped.isdigit():
        if len(stripped) > 9:
            raise InvalidPermutationError(
                f"undelimited digit string {stripped!r} is ambiguous; "
                "separate values with commas"
            )
        return list(stripped)
    return [stripped]


def identity(n: int) -> Permutation:
    """The identity permutation of size n."""
    return Permutation(range(1, n + 1))


def inverse(p: Permutation) -> Permutation:
    """The permutation q with q(p(i)) = i for all i.

    >>> inverse(Permutation([3, 1, 2])).word
    (2, 3, 1)
    """
    w = p.word
    q = [0] * len(w)
    for i, v in enumerate(w, start=1):
        q[v - 1] = i
    return Permutation(q)


def reverse(p: Permutation) -> Permutation:
    """The word read right to left."""
    return Permutation(p.word[::-1])


def runs(p: Permutation, direction: str = "descending") -> RunDecomposition:
    """Split the word into maximal strictly monotone consecutive blocks.

    >>> rd = runs(Permutation([5, 2, 9, 6, 8, 7, 3, 1, 4]))
    >>> rd.runs
    ((5, 2), (9, 6), (8, 7, 3, 1), (4,))
    >>> rd.tops, rd.bottoms
    ((5, 9, 8, 4), (2, 6, 1, 4))
    """
    if direction not in ("descending", "ascending"):
        raise ValueError(f"unknown direction {direction!r}")
    desc = direction == "descending"
    w = p.word
    n = len(w)
    blocks = []
    i = 0
    while i < n:
        j = i + 1
        if desc:
            while j < n and w[j] < w[j - 1]:
                j += 1
        else:
            while j < n and w[j] > w[j - 1]:
                j += 1
        blocks.append(w[i:j])
        i = j
    if desc:
        tops = tuple(b[0] for b in blocks)
        bottoms = tuple(b[-1] for b in blocks)
    else:
        tops = tuple(b[-1] for b in blocks)
        bottoms = tuple(b[0] for b in blocks)
    return RunDecomposition(direction, tuple(blocks), tops, bottoms)


def position_classes(p: Permutation) -> PositionClasses:
    """Partition positions into exceedances (p(i) > i) and weak deficiencies.

    Returns the exceedance positions, the weak-deficiency positions, and
    the values taken at the weak deficiencies.
    """
    exc = []
    wd = []
    wd_vals = []
    for i, v in enumerate(p.word, start=1):
        if v > i:
            exc.append(i)
        else:
            wd.append(i)
            wd_vals.append(v)
    return PositionClasses(frozenset(exc), frozenset(wd), frozenset(wd_vals))


def global_ascents(p: Permutation) -> frozenset[int]:
    """Indices m such that the first m values are exactly {1, ..., m}.

    Equivalently, m is a global ascent iff max(p(1..m)) = m.  The trivial
    index m = n is always included (for n >= 1).
    """
    out = []
    biggest = 0
    for m, v in enumerate(p.word, start=1):
        if v > biggest:
            biggest = v
        if biggest == m:
            out.append(m)
    return frozenset(out)


def left_to_right_maxima(p: Permutation) -> frozenset[int]:
    """Values strictly exceeding every value to their left."""
    out = []
    biggest = 0
    for v in p.word:
        if v > biggest:
            biggest = v
            out.append(v)
    return frozenset(out)


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    """Disjoint cycles of the permutation, with per-cycle maxima.

    >>> cd = cycle_decomposition(Permutation([3, 7, 5, 2, 1, 8, 9, 4, 6]))
    >>> cd.cycles
    ((1, 3, 5), (2, 7, 9, 6, 8, 4))
    >>> sorted(cd.maxima)
    [5, 9]
    """
    w = p.word
    n = len(w)
    seen = [False] * (n + 1)
    cycles = []
    for start in range(1, n + 1):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = w[start - 1]
        while x != start:
            cyc.append(x)
            seen[x] = True
            x = w[x - 1]
        cycles.append(tuple(cyc))
    return CycleDecomposition(tuple(cycles), frozenset(max(c) for c in cycles))
