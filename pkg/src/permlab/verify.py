"""Exhaustive and randomized verification over the symmetric group.

The rank space [0, n!) is enumerated lexicographically through factorial-
number-system unranking, so it can be cut into contiguous chunks and
handed to worker processes; every partial result merges associatively
and the final report does not depend on chunking or worker count.
"""

from __future__ import annotations

import multiprocessing
import os
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from math import factorial

from .chi import PartialPermutation, chi, chi_exceedances, chi_inverse
from .errors import CapExceededError
from .maps import fundamental_inverse, runsort, runs_short_and_increasing
from .permutation import (
    Permutation,
    cycle_decomposition,
    global_ascents,
    inverse,
    left_to_right_maxima,
    position_classes,
    reverse,
    runs,
)
from .statistics import (
    descent_views,
    dv,
    inversions,
    invisible_inversions,
    occurrences_13_2,
    occurrences_31star2,
    visible_inversions,
)

__all__ = [
    "DEFAULT_CAP",
    "STATISTICS",
    "ALL_CHECKS",
    "EXTRA_CHECKS",
    "Failure",
    "VerificationReport",
    "exhaustive_cap",
    "unrank",
    "rank",
    "distribution",
    "check_theorem1",
    "check_completions",
    "brute_force_preimage",
    "brute_force_exceedance_encodings",
    "verify_suite",
]

DEFAULT_CAP = 9

# Checks covered by --checks all.
ALL_CHECKS = frozenset(
    ["bijectivity", "theorem1", "roundtrip", "equidist", "completions", "runclasses"]
)
# Opt-in checks; can be much more expensive per permutation.
EXTRA_CHECKS = frozenset(["involution", "uniqueness"])

THEOREM1_CLAUSES = (
    "views-eq-invinv-bottoms",
    "rt-eq-wd-positions",
    "rb-eq-wd-values",
    "global-ascents-eq",
    "lr-maxima-eq-cycle-maxima",
)


def exhaustive_cap() -> int:
    """The largest n exhaustive commands accept; PERMLAB_MAX_N overrides."""
    raw = os.environ.get("PERMLAB_MAX_N")
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise CapExceededError(f"PERMLAB_MAX_N={raw!r} is not an integer") from None


def _require_within_cap(n: int, cap: int | None) -> None:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    limit = exhaustive_cap() if cap is None else cap
    if n > limit:
        raise CapExceededError(
            f"n={n} exceeds the exhaustive cap {limit}; "
            "raise it with PERMLAB_MAX_N or an explicit cap"
        )
    if n > 20:
        raise CapExceededError(f"n={n} is beyond any feasible exhaustive run")


def unrank(n: int, r: int) -> Permutation:
    """The r-th permutation of size n in lexicographic order, 0-based.

    >>> unrank(3, 0).word
    (1, 2, 3)
    >>> unrank(3, 5).word
    (3, 2, 1)
    """
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    total = factorial(n)
    if not 0 <= r < total:
        raise ValueError(f"rank {r} out of range 0..{total - 1} for n={n}")
    avail = list(range(1, n + 1))
    word = []
    f = total
    for k in range(n, 0, -1):
        f //= k
        q, r = divmod(r, f)
        word.append(avail.pop(q))
    return Permutation(word)


def rank(p: Permutation) -> int:
    """Lexicographic rank of p; inverse of ``unrank``."""
    w = p.word
    n = len(w)
    out = 0
    for i in range(n):
        wi = w[i]
        smaller = 0
        for j in range(i + 1, n):
            if w[j] < wi:
                smaller += 1
        out = out * (n - i) + smaller
    return out


def _stat_inv(p: Permutation) -> int:
    return len(inversions(p)[0])


def _stat_invinv(p: Permutation) -> int:
    return len(invisible_inversions(p)[0])


def _stat_visinv(p: Permutation) -> int:
    return len(visible_inversions(p))


def _stat_13_2(p: Permutation) -> int:
    return len(occurrences_13_2(p))


def _stat_31s2(p: Permutation) -> int:
    return len(occurrences_31star2(p)[0])


def _stat_13_2_runsort(p: Permutation) -> int:
    return len(occurrences_13_2(runsort(p)))


def _stat_31s2_views(p: Permutation) -> int:
    # Formula route, independent of the pair scan behind "31s2".
    return sum(dv(p, v) for v in range(1, len(p) + 1))


STATISTICS = {
    "inv": _stat_inv,
    "invinv": _stat_invinv,
    "vis-inv": _stat_visinv,
    "13-2": _stat_13_2,
    "31s2": _stat_31s2,
    "13-2-runsort": _stat_13_2_runsort,
    "31s2-views": _stat_31s2_views,
}


@dataclass(frozen=True)
class Failure:
    perm: tuple[int, ...] | None  # None for aggregate (whole-suite) checks
    check: str
    detail: str


@dataclass
class VerificationReport:
    n: int
    variant: int | None
    checks: tuple[str, ...]
    examined: int
    failures: list[Failure]
    elapsed: float
    jobs: int = 1
    seed: int = 0
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "checks": list(self.checks),
            "examined": self.examined,
            "failures": [
                {
                    "perm": list(f.perm) if f.perm is not None else None,
                    "check": f.check,
                    "detail": f.detail,
                }
                for f in self.failures
            ],
            "elapsed": self.elapsed,
            "jobs": self.jobs,
            "seed": self.seed,
            "counts": dict(self.counts),
            "passed": self.passed,
        }


def distribution(statistic: str, n: int, cap: int | None = None) -> Counter:
    """Counter mapping each statistic value to how many size-n words attain it."""
    fn = _statistic_fn(statistic)
    _require_within_cap(n, cap)
    out: Counter[int] = Counter()
    for r in range(factorial(n)):
        out[fn(unrank(n, r))] += 1
    return out


def _statistic_fn(statistic: str):
    try:
        return STATISTICS[statistic]
    except KeyError:
        known = ", ".join(sorted(STATISTICS))
        raise ValueError(f"unknown statistic {statistic!r}; known: {known}") from None


def _fmt(counter: Counter) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(counter.items())) + "}"


def _theorem1_failures(p: Permutation, s: Permutation) -> list[tuple[str, str]]:
    out = []
    views = descent_views(p)
    bottoms = invisible_inversions(s)[1]
    if views != bottoms:
        out.append(
            ("views-eq-invinv-bottoms", f"views {_fmt(views)} != bottoms {_fmt(bottoms)}")
        )
    rd = runs(p, "descending")
    classes = position_classes(s)
    if frozenset(rd.tops) != classes.weak_deficiencies:
        out.append(
            (
                "rt-eq-wd-positions",
                f"run tops {sorted(rd.tops)} != wd positions "
                f"{sorted(classes.weak_deficiencies)}",
            )
        )
    if frozenset(rd.bottoms) != classes.weak_deficiency_values:
        out.append(
            (
                "rb-eq-wd-values",
                f"run bottoms {sorted(rd.bottoms)} != wd values "
                f"{sorted(classes.weak_deficiency_values)}",
            )
        )
    ga_p, ga_s = global_ascents(p), global_ascents(s)
    if ga_p != ga_s:
        out.append(("global-ascents-eq", f"{sorted(ga_p)} != {sorted(ga_s)}"))
    lrm = left_to_right_maxima(p)
    cyc_max = cycle_decomposition(s).maxima
    if lrm != cyc_max:
        out.append(
            ("lr-maxima-eq-cycle-maxima", f"{sorted(lrm)} != {sorted(cyc_max)}")
        )
    return out


def check_theorem1(p: Permutation, variant: int) -> VerificationReport:
    """Evaluate all five chi output clauses for one permutation."""
    t0 = time.perf_counter()
    s, _ = chi(p, variant)
    failures = [
        Failure(p.word, f"theorem1:{cid}", detail)
        for cid, detail in _theorem1_failures(p, s)
    ]
    return VerificationReport(
        n=len(p),
        variant=variant,
        checks=tuple(f"theorem1:{c}" for c in THEOREM1_CLAUSES),
        examined=1,
        failures=failures,
        elapsed=time.perf_counter() - t0,
    )


def _iter_completions(tops_sorted: list[int], bottoms: list[int]):
    """All bijections run-top -> run-bottom with every image <= its position."""
    bots = sorted(bottoms)
    used = [False] * len(bots)
    assign: dict[int, int] = {}

    def rec(k: int):
        if k == len(tops_sorted):
            yield dict(assign)
            return
        t = tops_sorted[k]
        for idx, b in enumerate(bots):
            if b > t:
                break
            if used[idx]:
                continue
            used[idx] = True
            assign[t] = b
            yield from rec(k + 1)
            used[idx] = False
            del assign[t]

    yield from rec(0)


def _sample_completions(tops_sorted, bottoms, k, rng):
    bots = sorted(bottoms)
    seen = set()
    out = []
    for _ in range(50 * k + 200):
        if len(out) >= k:
            break
        values = bots[:]
        rng.shuffle(values)
        if all(v <= t for t, v in zip(tops_sorted, values)):
            key = tuple(values)
            if key not in seen:
                seen.add(key)
                out.append(dict(zip(tops_sorted, values)))
    if not out:
        for f in _iter_completions(tops_sorted, bots):
            out.append(f)
            if len(out) >= k:
                break
    return out


def _completion_failures(p: Permutation, sample: int | None, rng) -> tuple[list, int]:
    """Check every (or a sampled set of) weak-deficiency completion of the
    exceedance part: the invisible inversion bottoms must reproduce the
    descent views and the global ascents must match."""
    n = len(p)
    rd = runs(p, "descending")
    tops_sorted = sorted(rd.tops)
    sigma_e = chi_exceedances(p)
    views = descent_views(p)
    ga = global_ascents(p)
    base = [0] * n
    for i, v in sigma_e.items():
        base[i - 1] = v
    if sample is None:
        completions = _iter_completions(tops_sorted, list(rd.bottoms))
    else:
        completions = _sample_completions(tops_sorted, list(rd.bottoms), sample, rng)
    failures = []
    count = 0
    for f in completions:
        count += 1
        word = base[:]
        for t, b in f.items():
            word[t - 1] = b
        s = Permutation(word)
        bottoms = invisible_inversions(s)[1]
        if bottoms != views:
            failures.append(
                (
                    p.word,
                    "completions:views",
                    f"completion {s.word}: {_fmt(bottoms)} != {_fmt(views)}",
                )
            )
        if global_ascents(s) != ga:
            failures.append(
                (p.word, "completions:global-ascents", f"completion {s.word}")
            )
    return failures, count


def check_completions(
    p: Permutation, sample: int | None = None, seed: int = 0
) -> VerificationReport:
    """Exercise all (or ``sample`` random) weak-deficiency completions of one word."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    raw, count = _completion_failures(p, sample, rng)
    return VerificationReport(
        n=len(p),
        variant=None,
        checks=("completions",),
        examined=1,
        failures=[Failure(*f) for f in raw],
        elapsed=time.perf_counter() - t0,
        seed=seed,
        counts={"completions": count},
    )


def brute_force_preimage(
    s: Permutation, variant: int, cap: int | None = None
) -> set[Permutation]:
    """All words that chi maps to s, by exhaustive search; the oracle side
    of the constructive ``chi_inverse``."""
    n = len(s)
    _require_within_cap(n, cap)
    out = set()
    for r in range(factorial(n)):
        p = unrank(n, r)
        if chi(p, variant)[0] == s:
            out.add(p)
    return out


def brute_force_exceedance_encodings(p: Permutation) -> list[PartialPermutation]:
    """All strict-exceedance bijections non-run-tops -> non-run-bottoms whose
    inversion bottoms are the non-run-bottom descent views; the oracle side
    of ``chi_exceedances``, which should be the unique hit."""
    n = len(p)
    rd = runs(p, "descending")
    run_tops = set(rd.tops)
    run_bottoms = set(rd.bottoms)
    dom = [i for i in range(1, n + 1) if i not in run_tops]
    pool = [v for v in range(1, n + 1) if v not in run_bottoms]
    target = Counter(
        {v: m for v, m in descent_views(p).items() if v not in run_bottoms}
    )
    results: list[PartialPermutation] = []
    assign: list[int] = []
    used = [False] * len(pool)

    def rec(k: int) -> None:
        if k == len(dom):
            bottoms: Counter[int] = Counter()
            for x in range(len(assign)):
                for y in range(x + 1, len(assign)):
                    if assign[x] > assign[y]:
                        bottoms[assign[y]] += 1
            if bottoms == target:
                results.append(PartialPermutation(zip(dom, assign)))
            return
        i = dom[k]
        for idx, v in enumerate(pool):
            if used[idx] or v <= i:
                continue
            used[idx] = True
            assign.append(v)
            rec(k + 1)
            assign.pop()
            used[idx] = False

    rec(0)
    return results


def _runs_key(p: Permutation) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(runs(p, "descending").runs))


def _chunk_worker(args) -> dict:
    n, variant, checks, start, stop, seed, sample = args
    checks = frozenset(checks)
    need_sigma = bool(
        checks & {"bijectivity", "theorem1", "roundtrip", "involution"}
    )
    acc: dict = {
        "examined": stop - start,
        "failures": [],
        "image": bytearray((factorial(n) + 7) // 8),
        "dist_a": Counter(),
        "dist_b": Counter(),
        "ab": {},
        "ba": {},
        "completions": 0,
    }
    failures = acc["failures"]
    image = acc["image"]
    for r in range(start, stop):
        p = unrank(n, r)
        if need_sigma:
            s, _ = chi(p, variant)
        if "bijectivity" in checks:
            rk = rank(s)
            image[rk >> 3] |= 1 << (rk & 7)
        if "theorem1" in checks:
            for cid, detail in _theorem1_failures(p, s):
                failures.append(Failure(p.word, f"theorem1:{cid}", detail))
        if "roundtrip" in checks:
            back = chi_inverse(s, variant)
            if back != p:
                failures.append(
                    Failure(p.word, "roundtrip:inverse-of-chi", f"got {back.word}")
                )
            q = chi_inverse(p, variant)
            again = chi(q, variant)[0]
            if again != p:
                failures.append(
                    Failure(p.word, "roundtrip:chi-of-inverse", f"got {again.word}")
                )
        if "equidist" in checks:
            acc["dist_a"][_stat_invinv(p)] += 1
            acc["dist_b"][_stat_13_2_runsort(p)] += 1
            lhs = _stat_31s2(p)
            rhs = len(occurrences_13_2(runsort(reverse(p))))
            if lhs != rhs:
                failures.append(
                    Failure(p.word, "equidist:pattern-identity", f"{lhs} != {rhs}")
                )
        if "completions" in checks:
            rng = random.Random(seed * 1_000_003 + r)
            raw, count = _completion_failures(p, sample, rng)
            failures.extend(Failure(*f) for f in raw)
            acc["completions"] += count
        if "runclasses" in checks:
            key_a = chi_exceedances(p).as_tuple()
            key_b = _runs_key(p)
            acc["ab"].setdefault(key_a, set()).add(key_b)
            acc["ba"].setdefault(key_b, set()).add(key_a)
        if "involution" in checks:
            shape = runs_short_and_increasing(p)
            is_inv = s == inverse(s)
            if shape != is_inv:
                failures.append(
                    Failure(
                        p.word,
                        "involution:preimage-shape",
                        f"shape={shape} involution={is_inv}",
                    )
                )
            if shape and s != fundamental_inverse(p):
                failures.append(
                    Failure(p.word, "involution:fundamental", f"chi gave {s.word}")
                )
        if "uniqueness" in checks:
            encs = brute_force_exceedance_encodings(p)
            expected = chi_exceedances(p)
            if len(encs) != 1 or encs[0] != expected:
                failures.append(
                    Failure(
                        p.word,
                        "uniqueness:exceedance-encoding",
                        f"{len(encs)} candidates",
                    )
                )
    return acc


def _merge(parts: list[dict]) -> dict:
    total: dict = {
        "examined": 0,
        "failures": [],
        "image": None,
        "dist_a": Counter(),
        "dist_b": Counter(),
        "ab": {},
        "ba": {},
        "completions": 0,
    }
    for part in parts:
        total["examined"] += part["examined"]
        total["failures"].extend(part["failures"])
        if total["image"] is None:
            total["image"] = bytearray(part["image"])
        else:
            mine = total["image"]
            for k, byte in enumerate(part["image"]):
                mine[k] |= byte
        total["dist_a"] += part["dist_a"]
        total["dist_b"] += part["dist_b"]
        for key, vals in part["ab"].items():
            total["ab"].setdefault(key, set()).update(vals)
        for key, vals in part["ba"].items():
            total["ba"].setdefault(key, set()).update(vals)
        total["completions"] += part["completions"]
    return total


def _chunk_bounds(total: int, pieces: int) -> list[tuple[int, int]]:
    if total == 0:
        return [(0, 0)]
    pieces = max(1, min(pieces, total))
    size, extra = divmod(total, pieces)
    bounds = []
    lo = 0
    for k in range(pieces):
        hi = lo + size + (1 if k < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    return bounds


def normalize_checks(checks) -> frozenset[str]:
    """Expand 'all' and validate check names."""
    if checks is None:
        return ALL_CHECKS
    if isinstance(checks, str):
        checks = [checks]
    out: set[str] = set()
    for c in checks:
        if c == "all":
            out |= ALL_CHECKS
        elif c in ALL_CHECKS or c in EXTRA_CHECKS:
            out.add(c)
        else:
            known = ", ".join(sorted(ALL_CHECKS | EXTRA_CHECKS) + ["all"])
            raise ValueError(f"unknown check {c!r}; known: {known}")
    return frozenset(out)


def verify_suite(
    n: int,
    variant: int = 1,
    checks=None,
    jobs: int = 1,
    cap: int | None = None,
    seed: int = 0,
    completions_sample: int | None = None,
) -> VerificationReport:
    """Run the selected checks over every permutation of size n.

    The merged report is deterministic: it does not depend on ``jobs`` or
    on how the rank space was chunked.  Per-permutation failures are data
    in the report, not exceptions.
    """
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant!r}")
    selected = normalize_checks(checks)
    _require_within_cap(n, cap)
    total = factorial(n)
    t0 = time.perf_counter()
    arg_list = [
        (n, variant, tuple(sorted(selected)), lo, hi, seed, completions_sample)
        for lo, hi in _chunk_bounds(total, max(1, jobs) * 4)
    ]
    if jobs <= 1 or total <= 1:
        parts = [_chunk_worker(a) for a in arg_list]
    else:
        with multiprocessing.get_context("fork").Pool(jobs) as pool:
            parts = pool.map(_chunk_worker, arg_list)
    merged = _merge(parts)

    failures: list[Failure] = list(merged["failures"])
    counts: dict[str, int] = {}
    if "bijectivity" in selected:
        got = int.from_bytes(merged["image"], "little").bit_count()
        counts["image_size"] = got
        if got != total:
            failures.append(
                Failure(None, "bijectivity", f"image size {got} != {total}")
            )
    if "equidist" in selected:
        if merged["dist_a"] != merged["dist_b"]:
            failures.append(
                Failure(
                    None,
                    "equidist:distribution",
                    f"{_fmt(merged['dist_a'])} != {_fmt(merged['dist_b'])}",
                )
            )
    if "runclasses" in selected:
        counts["classes"] = len(merged["ab"])
        for key_a, vals in merged["ab"].items():
            if len(vals) != 1:
                failures.append(
                    Failure(
                        None,
                        "runclasses:encoding-splits",
                        f"one encoding covers {len(vals)} run sets",
                    )
                )
        for key_b, vals in merged["ba"].items():
            if len(vals) != 1:
                failures.append(
                    Failure(
                        None,
                        "runclasses:runset-splits",
                        f"one run set yields {len(vals)} encodings",
                    )
                )
    if "completions" in selected:
        counts["completions"] = merged["completions"]

    return VerificationReport(
        n=n,
        variant=variant,
        checks=tuple(sorted(selected)),
        examined=merged["examined"],
        failures=failures,
        elapsed=time.perf_counter() - t0,
        jobs=jobs,
        seed=seed,
        counts=counts,
    )
