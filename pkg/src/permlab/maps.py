"""Permutation-to-permutation maps: run sorting and the fundamental transformation."""

from __future__ import annotations

from itertools import chain

from .permutation import Permutation, cycle_decomposition, runs

__all__ = [
    "runsort",
    "sort_descending_runs_by_bottom",
    "fundamental",
    "fundamental_inverse",
    "runs_short_and_increasing",
]


def runsort(p: Permutation) -> Permutation:
    """Concatenate the ascending runs in increasing order of their minima.

    The minimum of an ascending run is its first element.  Blocks of the
    output may merge into longer ascending runs.

    >>> runsort(Permutation([4, 1, 3, 7, 8, 6, 9, 2, 5])).word
    (1, 3, 7, 8, 2, 5, 4, 6, 9)
    """
    blocks = sorted(runs(p, "ascending").runs, key=lambda b: b[0])
    return Permutation(chain.from_iterable(blocks))


def sort_descending_runs_by_bottom(p: Permutation) -> Permutation:
    """Concatenate the descending runs in increasing order of their bottoms.

    Unlike ``runsort`` this never merges blocks: each bottom is smaller
    than the next block's bottom, hence smaller than its top.  The
    descent-view multiset is unchanged by this map.
    """
    blocks = sorted(runs(p, "descending").runs, key=lambda b: b[-1])
    return Permutation(chain.from_iterable(blocks))


def fundamental_inverse(p: Permutation) -> Permutation:
    """Cut the word before each left-to-right maximum; read blocks as cycles.

    Each block maps every entry to the next one and its last entry back
    to the first, so block heads (the left-to-right maxima) become the
    cycle maxima.

    >>> fundamental_inverse(Permutation([3, 1, 2])).word
    (2, 3, 1)
    """
    w = p.word
    q = [0] * len(w)
    blocks: list[list[int]] = []
    biggest = 0
    for v in w:
        if v > biggest:
            biggest = v
            blocks.append([v])
        else:
            blocks[-1].append(v)
    for block in blocks:
        for a, b in zip(block, block[1:]):
            q[a - 1] = b
        q[block[-1] - 1] = block[0]
    return Permutation(q)


def fundamental(s: Permutation) -> Permutation:
    """Write each cycle with its maximum first, ordered by increasing maxima.

    Exact inverse of ``fundamental_inverse``.

    >>> fundamental(Permutation([2, 3, 1])).word
    (3, 1, 2)
    """
    word = []
    cycles = sorted(cycle_decomposition(s).cycles, key=max)
    for cyc in cycles:
        k = cyc.index(max(cyc))
        word.extend(cyc[k:] + cyc[:k])
    return Permutation(word)


def runs_short_and_increasing(p: Permutation) -> bool:
    """True when every descending run has length <= 2 and the tops increase.

    On exactly this set of words, chi (either variant) produces an
    involution and coincides with ``fundamental_inverse``.
    """
    rd = runs(p, "descending")
    if any(len(b) > 2 for b in rd.runs):
        return False
    return all(a < b for a, b in zip(rd.tops, rd.tops[1:]))
