"""Good 4-tuples, exact covering numbers and the classification search."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .kernels import assoc_tables_f2, fill_order
from .lattice import (
    automorphisms,
    canonical_table_f2,
    ideals,
    is_ideal_mask,
    is_isomorphic,
    maximal_subrings,
    quotient,
    subrings,
)
from .ring import (
    FiniteRing,
    RingError,
    Subring,
    bits,
    is_closed,
    mask_of,
    ring_from_json,
    ring_to_json,
    two_r,
)
from .setcover import covers_of_size, min_set_cover


class AnalysisContradiction(RuntimeError):
    """A derived property of good tuples failed; input was not good or a bug."""


class NotCoverable(RingError):
    pass


def _mask(S) -> int:
    return S.members if isinstance(S, Subring) else int(S)


@dataclass(frozen=True)
class GoodTuple:
    ring: FiniteRing
    subrings: tuple[int, int, int]

    @property
    def core(self) -> int:
        a, b, c = self.subrings
        return a & b & c

    def as_subrings(self) -> list[Subring]:
        return [Subring(self.ring, m) for m in self.subrings]


def _nonzero_ideal_inside(R: FiniteRing, mask: int):
    for I in ideals(R):
        if I.members != 1 and I.members & mask == I.members:
            return I.members
    return None


def is_good_tuple(R: FiniteRing, S1, S2, S3) -> tuple[bool, str | None]:
    """(True, None) or (False, reason) with reason in
    NotSubring / NotProper / NotCovering / IdealInCore."""
    masks = [_mask(S) for S in (S1, S2, S3)]
    for m in masks:
        if not is_closed(R, m):
            return False, "NotSubring"
    full = R.full_mask
    if any(m == full for m in masks):
        return False, "NotProper"
    if masks[0] | masks[1] | masks[2] != full:
        return False, "NotCovering"
    core = masks[0] & masks[1] & masks[2]
    if _nonzero_ideal_inside(R, core) is not None:
        return False, "IdealInCore"
    # consequences of the definition; a failure here is a contradiction
    for m in masks:
        if 2 * m.bit_count() != R.order:
            raise AnalysisContradiction("good tuple member without additive index 2")
    for a, b in combinations(masks, 2):
        if a & b != core:
            raise AnalysisContradiction("pairwise intersections differ from the core")
    return True, None


@dataclass
class TupleAnalysis:
    S: int
    x: int
    y: int
    S_R: int
    S_L: int
    T: int
    ordered: tuple[int, int, int]  # (S1, S2, S3) with x in S1, y in S2


def _lowest_outside(mask: int, order: int) -> int:
    return next(i for i in range(order) if not (mask >> i) & 1)


def analyze_tuple(t: GoodTuple) -> TupleAnalysis:
    R = t.ring
    S = t.core
    x = _lowest_outside(S, R.order)
    s1 = next(m for m in t.subrings if (m >> x) & 1)
    y = _lowest_outside(s1, R.order)
    s2 = next(m for m in t.subrings if (m >> y) & 1)
    s3 = next(m for m in t.subrings if m not in (s1, s2))
    xy = R.add(x, y)

    def coset(r):
        return mask_of(R.add_table[r, bits(S)].tolist())

    cosets = [S, coset(x), coset(y), coset(xy)]
    if sum(c.bit_count() for c in cosets) != R.order or (cosets[0] | cosets[1] | cosets[2] | cosets[3]) != R.full_mask:
        raise AnalysisContradiction("(R,+) != S + {0,x,y,x+y}")
    for sub, extra in ((s1, cosets[1]), (s2, cosets[2]), (s3, cosets[3])):
        if sub != S | extra:
            raise AnalysisContradiction("member is not S + {0, rep}")

    def inS(r):
        return bool((S >> int(r)) & 1)

    S_R = S_L = 0
    for s in bits(S):
        sx, sy = inS(R.mul(s, x)), inS(R.mul(s, y))
        xs, ys = inS(R.mul(x, s)), inS(R.mul(y, s))
        if sx != sy or xs != ys:
            raise AnalysisContradiction(f"sx in S <=> sy in S fails at s={s}")
        if sx:
            S_R |= 1 << s
        if xs:
            S_L |= 1 << s
    for half in (S_R, S_L):
        el = bits(half)
        if not all((half >> R.add(a, b)) & 1 for a in el for b in el):
            raise AnalysisContradiction("S_R or S_L is not a subgroup")
        if 2 * half.bit_count() < S.bit_count():
            raise AnalysisContradiction("S_R or S_L has index above 2 in S")
    T = S_R & S_L
    if T != 1:
        raise AnalysisContradiction("T != {0}")
    return TupleAnalysis(S, x, y, S_R, S_L, T, (s1, s2, s3))


def _tuple_key(auts, masks) -> tuple:
    best = None
    for phi in auts:
        img = tuple(sorted(phi.map_mask(m) for m in masks))
        if best is None or img < best:
            best = img
    return best


def good_tuples(R: FiniteRing, bound=None, search: str = "index2") -> list[GoodTuple]:
    """Good 4-tuples on ``R``, one per class under permutation and Aut(R).

    ``search="index2"`` tries only subrings of additive index 2;
    ``search="full"`` tries every triple of proper subrings.
    """
    subs = [S for S in subrings(R, bound) if S.proper]
    if search == "index2":
        cands = [S.members for S in subs if 2 * len(S) == R.order]
    elif search == "full":
        cands = [S.members for S in subs]
    else:
        raise ValueError(search)
    found = []
    for trio in combinations(cands, 3):
        if trio[0] | trio[1] | trio[2] != R.full_mask:
            continue
        ok, _ = is_good_tuple(R, *trio)
        if ok:
            found.append(trio)
    if not found:
        return []
    auts = automorphisms(R)
    classes = {}
    for trio in found:
        key = _tuple_key(auts, trio)
        classes.setdefault(key, trio)
    return [GoodTuple(R, tuple(sorted(classes[k]))) for k in sorted(classes)]


def core_orbits(t_list: list[GoodTuple]) -> int:
    """Number of Aut(R)-orbits of the cores of the given tuples."""
    if not t_list:
        return 0
    auts = automorphisms(t_list[0].ring)
    keys = {min(phi.map_mask(t.core) for phi in auts) for t in t_list}
    return len(keys)


# -- covering number ----------------------------------------------------------


@dataclass
class CoverSolution:
    ring: FiniteRing
    members: list[int]
    size: int | None
    coverable: bool = True
    log: list[tuple[int, int, bool]] = field(default_factory=list)

    def as_subrings(self) -> list[Subring]:
        return [Subring(self.ring, m) for m in self.members]


def sigma_exact(R: FiniteRing, bound=None) -> CoverSolution:
    """Minimum number of proper subrings covering ``R``.

    Searches over maximal subrings only.  A ring with an element outside
    every proper subring comes back with ``coverable=False``.
    """
    cands = [S.members for S in maximal_subrings(R, bound)]
    res = min_set_cover(R.full_mask, cands)
    if res.chosen is None:
        return CoverSolution(R, [], None, coverable=False, log=res.log)
    return CoverSolution(R, [cands[i] for i in res.chosen], res.size, True, res.log)


def has_two_cover(R: FiniteRing) -> bool:
    cands = [S.members for S in maximal_subrings(R)]
    return covers_of_size(R.full_mask, cands, 2)[1] > 0


# -- classification -----------------------------------------------------------


def table_from_bits(k: int, flat) -> np.ndarray:
    """Flat GF(2) bitmask table -> k x k x k coordinate table."""
    flat = np.asarray(flat, dtype=np.int64).reshape(k, k)
    return ((flat[:, :, None] >> np.arange(k)[None, None, :]) & 1).astype(np.int64)


def _enumerate_prefix(args):
    k, first, second = args
    m = k * k
    nv = 1 << k
    order = fill_order(k)
    vo = np.tile(np.arange(nv, dtype=np.int64), (m, 1))
    lo = np.zeros(m, dtype=np.int64)
    hi = np.full(m, nv, dtype=np.int64)
    if m > 1:
        lo[0], hi[0] = first, first + 1
        lo[1], hi[1] = second, second + 1
    cap = 4096
    while True:
        tabs, total = assoc_tables_f2(k, order, vo, lo, hi, cap, 0)
        if total <= cap:
            return tabs
        cap = int(total)


def associative_tables_f2(k: int, jobs: int = 1) -> np.ndarray:
    """Every associative flat table on GF(2)^k, split on the first two entries."""
    nv = 1 << k
    if k == 1:
        return _enumerate_prefix((1, 0, 0))
    work = [(k, a, b) for a in range(nv) for b in range(nv)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_enumerate_prefix, work))
    else:
        parts = [_enumerate_prefix(w) for w in work]
    parts = [p for p in parts if len(p)]
    if not parts:
        return np.zeros((0, k * k), dtype=np.int64)
    out = np.concatenate(parts)
    return out[np.lexsort(out.T[::-1])]


def random_algebra_f2(k: int, rng: np.random.Generator) -> FiniteRing:
    """An associative GF(2)-algebra of dimension k: the first table met by a
    depth-first search whose value order at each entry is shuffled."""
    m = k * k
    nv = 1 << k
    vo = np.array([rng.permutation(nv) for _ in range(m)], dtype=np.int64)
    lo = np.zeros(m, dtype=np.int64)
    hi = np.full(m, nv, dtype=np.int64)
    tabs, total = assoc_tables_f2(k, fill_order(k), vo, lo, hi, 1, 1)
    assert total == 1
    return FiniteRing([2] * k, table_from_bits(k, tabs[0]))


def hyperplane_good(R: FiniteRing) -> bool:
    """Goodness test for GF(2)-algebras via index-2 subspaces.

    Three hyperplanes ker(l1), ker(l2), ker(l3) cover the space exactly
    when l3 = l1 + l2.
    """
    k = R.k
    coords = R.coords
    planes = {}
    for lam in range(1, 1 << k):
        v = np.array([(lam >> t) & 1 for t in range(k)], dtype=np.int64)
        mask = mask_of(np.flatnonzero((coords @ v) % 2 == 0).tolist())
        if is_closed(R, mask):
            planes[lam] = mask
    lams = sorted(planes)
    for i, a in enumerate(lams):
        for b in lams[i + 1 :]:
            c = a ^ b
            if c <= b or c not in planes:
                continue
            if _nonzero_ideal_inside(R, planes[a] & planes[b]) is None:
                return True
    return False


@dataclass
class ClassifiedRing:
    ring: FiniteRing
    tuple: GoodTuple
    n_tables: int  # tables in the enumeration isomorphic to this ring


def _candidate_entries(moduli):
    k = len(moduli)
    vecs = list(product(*[range(d) for d in moduli]))
    out = []
    for i in range(k):
        for j in range(k):
            ok = [
                v for v in vecs
                if all((moduli[i] * c) % d == 0 and (moduli[j] * c) % d == 0 for c, d in zip(v, moduli))
            ]
            out.append(ok)
    return out


def rings_on_group(moduli) -> list[FiniteRing]:
    """All associative structure-constant tables on a given additive group.

    Plain product enumeration; meant for small non-elementary groups.
    """
    k = len(moduli)
    out = []
    for entries in product(*_candidate_entries(moduli)):
        tab = np.array(entries, dtype=np.int64).reshape(k, k, k)
        try:
            out.append(FiniteRing(moduli, tab))
        except RingError:
            continue
    return out


NON_ELEMENTARY_GROUPS = {4: [(4,)], 8: [(8,), (4, 2)]}


def good_rings_on_other_groups(order: int) -> list[FiniteRing]:
    """Good rings whose additive group of the given order is not elementary abelian."""
    found = []
    for moduli in NON_ELEMENTARY_GROUPS[order]:
        for R in rings_on_group(moduli):
            if good_tuples(R, search="full"):
                found.append(R)
    return found


def classify_good_rings(order: int, jobs: int = 1, full_check: bool = True) -> list[ClassifiedRing]:
    """Good rings of order 4 or 8, one per isomorphism class.

    Runs the associative-table enumeration on (Z/2)^k, filters by
    goodness (index-2 search, cross-checked against the all-subrings
    search when ``full_check``), then deduplicates by canonical table.
    """
    if order not in (4, 8):
        raise ValueError("order must be 4 or 8")
    k = order.bit_length() - 1
    flats = associative_tables_f2(k, jobs)
    classes: dict[tuple, list] = {}
    for flat in flats:
        R = FiniteRing([2] * k, table_from_bits(k, flat))
        fast = hyperplane_good(R)
        if full_check:
            slow = bool(good_tuples(R, search="full"))
            if slow != fast:
                raise AnalysisContradiction(f"index-2 and full searches disagree on {flat.tolist()}")
        if not fast:
            continue
        key = canonical_table_f2(R.table)
        classes.setdefault(key, []).append(R)
    if good_rings_on_other_groups(order):
        raise AnalysisContradiction("good ring with 2R != 0 found")
    out = []
    for key in sorted(classes):
        R = FiniteRing([2] * k, np.array(key, dtype=np.int64).reshape(k, k, k))
        tuples = good_tuples(R)
        out.append(ClassifiedRing(R, tuples[0], len(classes[key])))
    for a, b in combinations(out, 2):
        if is_isomorphic(a.ring, b.ring) is not None:
            raise AnalysisContradiction("canonical forms split an isomorphism class")
    return out


# -- Theorem 2 style decision -----------------------------------------------

FACTOR_TARGETS = (1, 2, 3, 4, 6)


@dataclass
class Theorem2Result:
    direct: bool
    via_quotient: bool
    cover: tuple[int, int, int] | None
    ideal: int | None
    target: int | None

    @property
    def agree(self) -> bool:
        return self.direct == self.via_quotient

    @property
    def answer(self) -> bool:
        return self.direct


def three_cover(R: FiniteRing):
    """Three proper subrings covering R, or None."""
    cands = [S.members for S in maximal_subrings(R)]
    for trio in combinations(cands, 3):
        if trio[0] | trio[1] | trio[2] == R.full_mask:
            return trio
    return None


def good_factor(R: FiniteRing, targets=FACTOR_TARGETS):
    """(ideal mask, catalog id) with R/I isomorphic to a listed good ring, or None."""
    from .catalog import example

    target_rings = {t: example(t).ring for t in targets}
    for I in ideals(R):
        qorder = R.order // len(I)
        if qorder not in (4, 8):
            continue
        Q, _ = quotient(R, I)
        for t, G in target_rings.items():
            if G.order == qorder and is_isomorphic(Q, G) is not None:
                return I.members, t
    return None


def theorem2_decide(R: FiniteRing) -> Theorem2Result:
    cover = three_cover(R)
    fac = good_factor(R)
    return Theorem2Result(
        direct=cover is not None,
        via_quotient=fac is not None,
        cover=cover,
        ideal=fac[0] if fac else None,
        target=fac[1] if fac else None,
    )


# -- certificates ---------------------------------------------------------------


def cover_certificate(sol: CoverSolution) -> dict:
    return {
        "kind": "cover",
        "ring": json.loads(ring_to_json(sol.ring)),
        "coverable": sol.coverable,
        "size": sol.size,
        "members": [bits(m) for m in sol.members],
        "search_log": [list(entry) for entry in sol.log],
        "checks": _cover_checks(sol.ring, sol.members) if sol.coverable else {},
    }


def tuple_certificate(t: GoodTuple) -> dict:
    ok, reason = is_good_tuple(t.ring, *t.subrings)
    return {
        "kind": "good_tuple",
        "ring": json.loads(ring_to_json(t.ring)),
        "members": [bits(m) for m in t.subrings],
        "checks": {
            **_cover_checks(t.ring, list(t.subrings)),
            "no_ideal_in_core": ok,
            "index_two": all(2 * m.bit_count() == t.ring.order for m in t.subrings),
            "two_r_zero": len(two_r(t.ring)) == 1,
        },
    }


def _cover_checks(R, masks) -> dict:
    union = 0
    for m in masks:
        union |= m
    return {
        "subrings": all(is_closed(R, m) for m in masks),
        "proper": all(m != R.full_mask for m in masks),
        "covers": union == R.full_mask,
    }


def verify_certificate(doc: dict) -> dict:
    """Recompute every check of a ring certificate; returns name -> bool."""
    R = ring_from_json(json.dumps(doc["ring"]))
    masks = [mask_of(m) for m in doc["members"]]
    kind = doc["kind"]
    if kind == "cover":
        if not doc["coverable"]:
            return {"not_coverable": not sigma_exact(R).coverable}
        checks = _cover_checks(R, masks)
        checks["size_matches"] = len(masks) == doc["size"]
        checks["minimal"] = sigma_exact(R).size == doc["size"]
        return checks
    if kind == "good_tuple":
        checks = _cover_checks(R, masks)
        ok, _ = is_good_tuple(R, *masks) if len(masks) == 3 else (False, None)
        checks["no_ideal_in_core"] = ok
        checks["index_two"] = all(2 * m.bit_count() == R.order for m in masks)
        return checks
    raise ValueError(f"unknown certificate kind {kind!r}")


__all__ = [
    "AnalysisContradiction",
    "ClassifiedRing",
    "CoverSolution",
    "GoodTuple",
    "NotCoverable",
    "Theorem2Result",
    "TupleAnalysis",
    "analyze_tuple",
    "classify_good_rings",
    "core_orbits",
    "good_rings_on_other_groups",
    "good_tuples",
    "has_two_cover",
    "hyperplane_good",
    "random_algebra_f2",
    "is_good_tuple",
    "is_ideal_mask",
    "sigma_exact",
    "theorem2_decide",
]
