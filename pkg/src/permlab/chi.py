"""The run-encoding bijections chi1 and chi2 and their constructive inverses.

Both bijections send a word to a permutation whose invisible inversion
bottoms reproduce the word's descent views.  They are built in two
stages.  ``chi_exceedances`` fixes the values on the non-run-tops: it is
the unique strict-exceedance bijection from non-run-tops to non-run-
bottoms whose inversion bottoms are the descent views that are not run
bottoms.  ``chi`` then assigns values to the run tops, smallest first,
removing each top's run from the word as it goes:

* if the run headed the remaining word, the top t receives the iterated
  preimage of t (rule ``first``, closing a cycle);
* otherwise, with a the bottom of the run immediately to the left of
  t's run, variant 1 walks the map (iterated preimage o run pairing)
  from a until the value drops below t, while variant 2 ranks a among
  the remaining run bottoms and picks the matching candidate value.

Every step is recorded in a ``ChiTrace``; ``chi_inverse`` recomputes the
same decisions from the output permutation alone and replays them
backwards to rebuild the word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import (
    CycleError,
    InternalInvariantError,
    InvalidPermutationError,
    NotInImageError,
)
from .permutation import Permutation, RunDecomposition, position_classes, runs

__all__ = [
    "PartialPermutation",
    "ChiStep",
    "ChiTrace",
    "RULE_FIRST",
    "RULE_PREDECESSOR",
    "iterated_preimage",
    "chi_exceedances",
    "bottom_to_top",
    "preimage_chain_map",
    "chi",
    "runs_from_exceedances",
    "chi_inverse",
]

RULE_FIRST = "first"
RULE_PREDECESSOR = "predecessor"


class PartialPermutation:
    """An injective map on a subset of positive integers.

    Keeps a preimage index so both directions are O(1).  Instances are
    mutated only through ``define`` while a construction is in progress;
    treat returned values as read-only.
    """

    __slots__ = ("_fwd", "_bwd")

    def __init__(self, entries: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> None:
        self._fwd: dict[int, int] = {}
        self._bwd: dict[int, int] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for i, v in items:
            self.define(i, v)

    def define(self, i: int, v: int) -> None:
        if i < 1 or v < 1:
            raise InvalidPermutationError(f"entry {i}->{v} outside positive range")
        if i in self._fwd:
            raise InvalidPermutationError(f"position {i} already assigned")
        if v in self._bwd:
            raise InvalidPermutationError(f"value {v} already assigned")
        self._fwd[i] = v
        self._bwd[v] = i

    def __getitem__(self, i: int) -> int:
        return self._fwd[i]

    def get(self, i: int, default: int | None = None) -> int | None:
        return self._fwd.get(i, default)

    def __contains__(self, i: int) -> bool:
        return i in self._fwd

    def has_value(self, v: int) -> bool:
        return v in self._bwd

    def preimage(self, v: int) -> int:
        return self._bwd[v]

    def domain(self) -> frozenset[int]:
        return frozenset(self._fwd)

    def values(self) -> frozenset[int]:
        return frozenset(self._bwd)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._fwd.items()))

    def as_tuple(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self._fwd.items()))

    def copy(self) -> "PartialPermutation":
        new = PartialPermutation()
        new._fwd = dict(self._fwd)
        new._bwd = dict(self._bwd)
        return new

    def to_permutation(self, n: int) -> Permutation:
        if len(self._fwd) != n:
            raise InvalidPermutationError(f"map is not total on 1..{n}")
        return Permutation(self._fwd[i] for i in range(1, n + 1))

    def __len__(self) -> int:
        return len(self._fwd)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PartialPermutation):
            return self._fwd == other._fwd
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{i}->{v}" for i, v in sorted(self._fwd.items()))
        return f"PartialPermutation({{{body}}})"


@dataclass(frozen=True)
class ChiStep:
    """One completion step: run top t received ``assigned`` under ``rule``.

    ``a`` is the bottom of the run immediately left of t's run at the
    time of the step, or None when the run headed the remaining word.
    """

    t: int
    rule: str
    a: int | None
    assigned: int


@dataclass(frozen=True)
class ChiTrace:
    """The completion steps of one chi run, in processing order.

    Run tops increase along ``steps``; the last step always has rule
    ``first``.
    """

    variant: int
    steps: tuple[ChiStep, ...]


def iterated_preimage(f: PartialPermutation, c: int) -> int:
    """Follow preimages from c until an element outside f's image is reached.

    Returns c itself when c is not a value of f.  Raises ``CycleError``
    when c lies on a cycle of f, where the walk would never leave.
    """
    x = c
    bwd = f._bwd
    for _ in range(len(bwd) + 1):
        nxt = bwd.get(x)
        if nxt is None:
            return x
        x = nxt
    raise CycleError(f"element {c} lies on a cycle")


def _dv_table(rd: RunDecomposition, n: int) -> list[int]:
    """Descent-view multiplicity for every value, from the run set alone."""
    bottom_of = {}
    for block, b in zip(rd.runs, rd.bottoms):
        for v in block:
            bottom_of[v] = b
    bounds = list(zip(rd.bottoms, rd.tops))
    table = [0] * (n + 1)
    for v in range(1, n + 1):
        b = bottom_of[v]
        table[v] = sum(1 for mn, mx in bounds if mn < v < mx and mn < b)
    return table


def chi_exceedances(p: Permutation) -> PartialPermutation:
    """The exceedance part shared by both chi variants.

    Built greedily: for each non-run-bottom value v in increasing order,
    the preimage of v is the (dv(v)+1)-st smallest element not yet used
    among the non-run-tops.  Every assignment lands strictly above its
    position, and the inversion bottoms of the result are exactly the
    descent views that are not run bottoms.
    """
    n = len(p)
    rd = runs(p, "descending")
    run_tops = set(rd.tops)
    run_bottoms = set(rd.bottoms)
    dv = _dv_table(rd, n)
    pool = [i for i in range(1, n + 1) if i not in run_tops]
    out = PartialPermutation()
    for v in range(1, n + 1):
        if v in run_bottoms:
            continue
        d = dv[v]
        if d >= len(pool):
            raise InternalInvariantError(
                f"needed element {d + 1} of a pool of {len(pool)} for value {v}"
            )
        out.define(pool.pop(d), v)
    return out


def bottom_to_top(rd: RunDecomposition) -> PartialPermutation:
    """Map each descending run's bottom to the top of the same run."""
    if rd.direction != "descending":
        raise ValueError("run pairing is defined on descending runs")
    return PartialPermutation(zip(rd.bottoms, rd.tops))


def preimage_chain_map(
    sigma: PartialPermutation,
    remaining_bottoms: Iterable[int],
    pairing: PartialPermutation,
) -> PartialPermutation:
    """For each remaining run bottom b, the iterated preimage of its run top.

    Must be recomputed whenever sigma gains an entry; the previous values
    go stale.
    """
    return PartialPermutation(
        (b, iterated_preimage(sigma, pairing[b])) for b in remaining_bottoms
    )


def chi(p: Permutation, variant: int) -> tuple[Permutation, ChiTrace]:
    """Extend the exceedance part to a full permutation; see module docs.

    Returns the resulting permutation together with the step trace.
    """
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant!r}")
    n = len(p)
    rd = runs(p, "descending")
    sigma = chi_exceedances(p)
    fwd = sigma._fwd
    bwd = sigma._bwd
    pair = dict(zip(rd.bottoms, rd.tops))
    remaining = list(zip(rd.tops, rd.bottoms))  # in word order
    steps = []
    while remaining:
        t, b = min(remaining)
        idx = remaining.index((t, b))
        a = None if idx == 0 else remaining[idx - 1][1]
        del remaining[idx]
        if a is None:
            val = _walk_preimage(bwd, t)
            rule = RULE_FIRST
        elif variant == 1:
            tau = {bb: _walk_preimage(bwd, pair[bb]) for _, bb in remaining}
            x = a
            for _ in range(n + 1):
                if x not in tau:
                    raise InternalInvariantError(f"chain left the run bottoms at {x}")
                x = tau[x]
                if x < t:
                    break
            else:
                raise InternalInvariantError(f"no chain value below top {t}")
            val = x
            rule = RULE_PREDECESSOR
        else:
            s = _walk_preimage(bwd, t)
            bots = sorted(bb for _, bb in remaining)
            rank_a = bots.index(a)
            val = _nth_free_value(bwd, n, s, rank_a)
            rule = RULE_PREDECESSOR
        fwd[t] = val
        bwd[val] = t
        steps.append(ChiStep(t=t, rule=rule, a=a, assigned=val))
    return sigma.to_permutation(n), ChiTrace(variant=variant, steps=tuple(steps))


def _walk_preimage(bwd: dict[int, int], c: int) -> int:
    x = c
    for _ in range(len(bwd) + 1):
        nxt = bwd.get(x)
        if nxt is None:
            return x
        x = nxt
    raise CycleError(f"element {c} lies on a cycle")


def _nth_free_value(bwd: dict[int, int], n: int, skip: int, rank: int) -> int:
    """The (rank+1)-st smallest value not in the image and different from skip."""
    k = 0
    for v in range(1, n + 1):
        if v == skip or v in bwd:
            continue
        if k == rank:
            return v
        k += 1
    raise InternalInvariantError(f"fewer than {rank + 1} free values")


def runs_from_exceedances(
    sigma_e: PartialPermutation,
    run_tops: Iterable[int],
    run_bottoms: Iterable[int],
) -> frozenset[frozenset[int]]:
    """Reconstruct the descending run set from the exceedance part alone.

    Processing tops in increasing order, a top that is also a bottom is a
    singleton run; any other top t pairs with the (d+1)-st smallest
    unmatched bottom, where d is the multiplicity of t among the
    inversion bottoms of sigma_e.  Each value that is neither a top nor
    a bottom then joins, among the matched runs enclosing it, the one
    with the (d+1)-st smallest bottom.  Inconsistent input surfaces as
    ``NotInImageError``.
    """
    tops = set(run_tops)
    bottoms = set(run_bottoms)
    n = len(tops) + len(sigma_e)
    dom = sorted(sigma_e.domain())
    if set(dom) != set(range(1, n + 1)) - tops:
        raise NotInImageError("domain is not the complement of the run tops")
    if sigma_e.values() != frozenset(range(1, n + 1)) - bottoms:
        raise NotInImageError("values are not the complement of the run bottoms")

    ib: dict[int, int] = {}
    vals = [sigma_e[i] for i in dom]
    for x in range(len(vals)):
        vx = vals[x]
        for y in range(x + 1, len(vals)):
            if vx > vals[y]:
                ib[vals[y]] = ib.get(vals[y], 0) + 1

    unmatched = sorted(bottoms)
    bottom_for: dict[int, int] = {}
    for t in sorted(tops):
        if t in bottoms:
            unmatched.remove(t)
            bottom_for[t] = t
            continue
        d = ib.get(t, 0)
        if d >= len(unmatched):
            raise NotInImageError(f"no unmatched bottom available for top {t}")
        b = unmatched.pop(d)
        if b >= t:
            raise NotInImageError(f"matched bottom {b} not below top {t}")
        bottom_for[t] = b

    members: dict[int, set[int]] = {t: {t, bottom_for[t]} for t in tops}
    for v in range(1, n + 1):
        if v in tops or v in bottoms:
            continue
        d = ib.get(v, 0)
        enclosing = sorted((b, t) for t, b in bottom_for.items() if b < v < t)
        if d >= len(enclosing):
            raise NotInImageError(f"no enclosing run for value {v}")
        members[enclosing[d][1]].add(v)
    return frozenset(frozenset(s) for s in members.values())


def chi_inverse(s: Permutation, variant: int) -> Permutation:
    """Recover the unique word that chi maps to s; see module docs.

    The weak deficiencies of s give back the run tops (positions) and run
    bottoms (values); the run set is rebuilt from the exceedance part;
    the completion steps are then re-derived top by top, and the runs are
    re-inserted in decreasing top order.  Any inconsistency raises
    ``NotInImageError`` -- for a valid total permutation this cannot
    happen, the guards exist for corrupted state and bugs.
    """
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant!r}")
    n = len(s)
    if n == 0:
        return s
    classes = position_classes(s)
    tops = classes.weak_deficiencies
    bottoms = classes.weak_deficiency_values
    sigma = PartialPermutation((i, s(i)) for i in classes.exceedances)
    run_sets = runs_from_exceedances(sigma, tops, bottoms)
    block_by_top = {max(r): tuple(sorted(r, reverse=True)) for r in run_sets}
    bottom_for = {t: block[-1] for t, block in block_by_top.items()}
    fwd = sigma._fwd
    bwd = sigma._bwd

    tops_asc = sorted(block_by_top)
    left_bottom: dict[int, int | None] = {}
    for pos, t in enumerate(tops_asc):
        remaining = tops_asc[pos + 1 :]
        val = s(t)
        if val == _walk_preimage(bwd, t):
            left_bottom[t] = None
        elif variant == 1:
            tau = {bottom_for[tt]: _walk_preimage(bwd, tt) for tt in remaining}
            # Only bottoms below t can precede t's run in a word; larger
            # bottoms would merge with it.
            found = [
                b for b in tau if b < t and _chain_below(tau, b, t) == val
            ]
            if len(found) != 1:
                raise NotInImageError(
                    f"{len(found)} predecessor candidates for top {t}"
                )
            left_bottom[t] = found[0]
        else:
            skip = _walk_preimage(bwd, t)
            rank = 0
            hit = None
            for v in range(1, n + 1):
                if v == skip or v in bwd:
                    continue
                if v == val:
                    hit = rank
                    break
                rank += 1
            if hit is None:
                raise NotInImageError(f"value {val} is not a candidate for top {t}")
            bots = sorted(bottom_for[tt] for tt in remaining)
            if hit >= len(bots):
                raise NotInImageError(f"candidate rank {hit + 1} exceeds run count")
            left_bottom[t] = bots[hit]
        fwd[t] = val
        bwd[val] = t

    ordered: list[tuple[int, ...]] = []
    for t in reversed(tops_asc):
        a = left_bottom[t]
        if a is None:
            ordered.insert(0, block_by_top[t])
        else:
            k = next(
                (i for i, block in enumerate(ordered) if block[-1] == a), None
            )
            if k is None:
                raise NotInImageError(f"predecessor run with bottom {a} not placed")
            ordered.insert(k + 1, block_by_top[t])
    word: list[int] = []
    for block in ordered:
        word.extend(block)
    return Permutation(word)


def _chain_below(tau: dict[int, int], start: int, t: int) -> int | None:
    """First value < t on the chain from start, applying tau at least once."""
    x = start
    for _ in range(len(tau) + 1):
        x = tau.get(x)
        if x is None:
            return None
        if x < t:
            return x
    return None
