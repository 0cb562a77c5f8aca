"""Exact minimum set cover over bit sets (iterative-deepening branch and bound)."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .ring import bits


@dataclass
class SetCoverResult:
    chosen: list[int] | None
    size: int | None
    # (k, nodes visited, found?) for every size bound tried, ascending
    log: list[tuple[int, int, bool]] = field(default_factory=list)


def min_set_cover(universe: int, sets: list[int], max_size: int | None = None) -> SetCoverResult:
    """Smallest family of ``sets`` whose union contains ``universe``.

    Branches on the uncovered element lying in the fewest candidate sets;
    prunes with ``ceil(uncovered / largest set) > remaining budget``.
    Returns ``chosen=None`` when the union of all sets misses an element.
    """
    union = 0
    for s in sets:
        union |= s
    if universe & ~union:
        return SetCoverResult(None, None)
    if universe == 0:
        return SetCoverResult([], 0, [(0, 1, True)])

    elems = bits(universe)
    containing = {e: [i for i, s in enumerate(sets) if (s >> e) & 1] for e in elems}
    freq = {e: len(v) for e, v in containing.items()}
    by_freq = sorted(elems, key=lambda e: (freq[e], e))
    largest = max(s.bit_count() for s in sets)
    log = []

    def search(k):
        nodes = 0
        chosen: list[int] = []

        def rec(uncovered, left):
            nonlocal nodes
            nodes += 1
            if uncovered == 0:
                return True
            if left == 0:
                return False
            need = -(-uncovered.bit_count() // largest)
            if need > left:
                return False
            e = next(x for x in by_freq if (uncovered >> x) & 1)
            opts = sorted(containing[e], key=lambda i: -(sets[i] & uncovered).bit_count())
            for i in opts:
                chosen.append(i)
                if rec(uncovered & ~sets[i], left - 1):
                    return True
                chosen.pop()
            return False

        ok = rec(universe, k)
        return ok, nodes, list(chosen)

    k = -(-len(elems) // largest)
    limit = len(sets) if max_size is None else max_size
    while k <= limit:
        ok, nodes, chosen = search(k)
        log.append((k, nodes, ok))
        if ok:
            return SetCoverResult(sorted(chosen), k, log)
        k += 1
    return SetCoverResult(None, None, log)


def covers_of_size(universe: int, sets: list[int], k: int) -> tuple[int, int]:
    """Exhaust all k-subsets: (subsets checked, subsets that cover)."""
    checked = hits = 0
    for combo in combinations(sets, k):
        checked += 1
        u = 0
        for s in combo:
            u |= s
        if u & universe == universe:
            hits += 1
    return checked, hits
