"""Occurrence statistics on permutations.

Covers inversions and their invisible/visible split, the pattern 13-2,
the pattern 31*2 with its descent views, and the per-value descent-view
count ``dv``.  Pair sets are frozensets of 1-based position pairs (i, j);
multisets are ``collections.Counter`` maps value -> multiplicity with no
zero entries stored.
"""

from __future__ import annotations

from collections import Counter

from .permutation import Permutation, runs

__all__ = [
    "inversions",
    "invisible_inversions",
    "visible_inversions",
    "occurrences_13_2",
    "occurrences_31star2",
    "descent_views",
    "dv",
]

PairSet = frozenset      # of (i, j) position pairs
Multiset = Counter       # value -> multiplicity


def inversions(p: Permutation) -> tuple[PairSet, Multiset]:
    """All pairs i < j with p(i) > p(j), plus the multiset of bottoms p(j)."""
    w = p.word
    n = len(w)
    pairs = []
    bottoms: Counter[int] = Counter()
    for i in range(n):
        wi = w[i]
        for j in range(i + 1, n):
            if wi > w[j]:
                pairs.append((i + 1, j + 1))
                bottoms[w[j]] += 1
    return frozenset(pairs), bottoms


def invisible_inversions(p: Permutation) -> tuple[PairSet, Multiset]:
    """Inversions (i, j) that additionally satisfy p(j) > i."""
    w = p.word
    n = len(w)
    pairs = []
    bottoms: Counter[int] = Counter()
    for i in range(n):
        wi = w[i]
        for j in range(i + 1, n):
            if wi > w[j] > i + 1:
                pairs.append((i + 1, j + 1))
                bottoms[w[j]] += 1
    return frozenset(pairs), bottoms


def visible_inversions(p: Permutation) -> PairSet:
    """Inversions (i, j) with p(j) <= i; the complement of the invisible ones."""
    w = p.word
    n = len(w)
    pairs = []
    for i in range(n):
        wi = w[i]
        for j in range(i + 1, n):
            if wi > w[j] and w[j] <= i + 1:
                pairs.append((i + 1, j + 1))
    return frozenset(pairs)


def occurrences_13_2(p: Permutation) -> PairSet:
    """Pairs (i, j) with i < j and p(i) < p(j) < p(i+1)."""
    w = p.word
    n = len(w)
    pairs = []
    for i in range(n - 1):
        lo, hi = w[i], w[i + 1]
        if lo > hi:
            continue
        for j in range(i + 1, n):
            if lo < w[j] < hi:
                pairs.append((i + 1, j + 1))
    return frozenset(pairs)


def occurrences_31star2(p: Permutation) -> tuple[PairSet, Multiset]:
    """Pairs (i, j) with p(i) > p(j) > p(i+1) and a run-bottom condition.

    Position i is necessarily a descent, so p(i) and p(i+1) share a
    descending run; the pair counts only when that run's bottom is
    smaller than the bottom of the run containing p(j).  The multiset of
    values p(j) over all pairs is the multiset of descent views.

    The position j is NOT constrained relative to i: occurrences with
    j < i count as well.  Only the value window p(i) > p(j) > p(i+1)
    and the run-bottom comparison decide membership.
    """
    w = p.word
    n = len(w)
    rd = runs(p, "descending")
    bottom_of = {}
    for block, b in zip(rd.runs, rd.bottoms):
        for v in block:
            bottom_of[v] = b
    pairs = []
    views: Counter[int] = Counter()
    for i in range(n - 1):
        hi, lo = w[i], w[i + 1]
        if hi < lo:
            continue
        b_i = bottom_of[hi]
        for j in range(n):
            v = w[j]
            if hi > v > lo and b_i < bottom_of[v]:
                pairs.append((i + 1, j + 1))
                views[v] += 1
    return frozenset(pairs), views


def descent_views(p: Permutation) -> Multiset:
    """Multiset of values p(j) over all 31*2 occurrences (i, j)."""
    return occurrences_31star2(p)[1]


def dv(p: Permutation, v: int) -> int:
    """Multiplicity of v in the descent views, via the run-counting rule.

    Counts the descending runs r with min(r) < v < max(r) whose bottom is
    also smaller than the bottom of v's own run.  Agrees with the
    multiplicity of v in ``descent_views(p)`` for every v.
    """
    n = len(p)
    if not 1 <= v <= n:
        raise ValueError(f"value {v} out of range 1..{n}")
    rd = runs(p, "descending")
    b = next(bot for block, bot in zip(rd.runs, rd.bottoms) if v in block)
    return sum(1 for mn, mx in zip(rd.bottoms, rd.tops) if mn < v < mx and mn < b)
