"""Subrings, ideals, quotients, radical and isomorphisms of small rings."""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .kernels import closure_mask
from .ring import (
    BoundExceeded,
    FiniteRing,
    RingError,
    Subring,
    annihilator_sizes,
    bits,
    from_tables,
    has_identity,
    mask_of,
)

DEFAULT_BOUND = 256


class NotAnIdeal(RingError):
    pass


def order_bound() -> int:
    return int(os.environ.get("RINGCOVER_ORDER_BOUND", DEFAULT_BOUND))


def _check_bound(R: FiniteRing, bound):
    bound = order_bound() if bound is None else bound
    if R.order > bound:
        raise BoundExceeded(f"ring of order {R.order} exceeds bound {bound}")


def _to_bool(R, mask):
    out = np.zeros(R.order, dtype=np.bool_)
    out[bits(mask)] = True
    return out


def _to_mask(flags) -> int:
    return mask_of(np.flatnonzero(flags).tolist())


def closure(R: FiniteRing, elements) -> int:
    """Bit set of the subring generated by ``elements``."""
    seed = np.zeros(R.order, dtype=np.bool_)
    seed[list(elements)] = True
    return _to_mask(closure_mask(R.add_table, R.mul_table, seed))


def _sort_key(mask):
    return (mask.bit_count(), mask)


@lru_cache(maxsize=256)
def _subring_masks(R: FiniteRing) -> tuple[int, ...]:
    add, mul = R.add_table, R.mul_table
    seen = {1}
    frontier = [1]
    while frontier:
        nxt = []
        for S in frontier:
            inside = _to_bool(R, S)
            for x in range(R.order):
                if inside[x]:
                    continue
                seed = inside.copy()
                seed[x] = True
                T = _to_mask(closure_mask(add, mul, seed))
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return tuple(sorted(seen, key=_sort_key))


def subrings(R: FiniteRing, bound=None) -> list[Subring]:
    """Every subring of ``R`` (including {0} and R), by growing closures."""
    _check_bound(R, bound)
    return [Subring(R, m) for m in _subring_masks(R)]


def maximal_subrings(R: FiniteRing, bound=None) -> list[Subring]:
    subs = [S for S in subrings(R, bound) if S.proper]
    out = []
    for S in subs:
        if not any(T.members != S.members and T.members & S.members == S.members for T in subs):
            out.append(S)
    return out


def is_ideal_mask(R: FiniteRing, mask: int) -> bool:
    el = np.array(bits(mask), dtype=np.int64)
    inside = _to_bool(R, mask)
    m = R.mul_table
    return bool(inside[m[:, el]].all() and inside[m[el, :]].all())


def ideals(R: FiniteRing, bound=None) -> list[Subring]:
    return [S for S in subrings(R, bound) if is_ideal_mask(R, S.members)]


def quotient(R: FiniteRing, I) -> tuple[FiniteRing, np.ndarray]:
    """``R/I`` and the projection ``R index -> quotient index``."""
    mask = I.members if isinstance(I, Subring) else int(I)
    if not (mask & 1) or not is_ideal_mask(R, mask) or not _is_additive_subgroup(R, mask):
        raise NotAnIdeal("not a two-sided ideal")
    members = np.array(bits(mask), dtype=np.int64)
    coset_of = np.full(R.order, -1, dtype=np.int64)
    reps = []
    for r in range(R.order):
        if coset_of[r] >= 0:
            continue
        coset_of[R.add_table[r, members]] = len(reps)
        reps.append(r)
    reps = np.array(reps, dtype=np.int64)
    add = coset_of[R.add_table[np.ix_(reps, reps)]]
    mul = coset_of[R.mul_table[np.ix_(reps, reps)]]
    Q, elem = from_tables(add, mul)
    where = np.empty_like(elem)
    where[elem] = np.arange(len(elem))
    return Q, where[coset_of]


def _is_additive_subgroup(R, mask):
    el = np.array(bits(mask), dtype=np.int64)
    inside = _to_bool(R, mask)
    return bool(inside[R.add_table[np.ix_(el, el)]].all())


def quasi_regular(R: FiniteRing) -> np.ndarray:
    """Flags z with some z' such that z + z' + zz' = 0 = z + z' + z'z."""
    a, m = R.add_table, R.mul_table
    zs = np.arange(R.order)
    s = a[zs[:, None], zs[None, :]]
    right = a[s, m] == 0
    left = a[s, m.T] == 0
    return np.any(right & left, axis=1)


def jacobson_radical(R: FiniteRing, bound=None) -> Subring:
    """Largest ideal made of quasi-regular elements."""
    qr = quasi_regular(R)
    good = [I for I in ideals(R, bound) if qr[bits(I.members)].all()]
    best = max(good, key=lambda I: len(I))
    for I in good:
        if I.members & best.members != I.members:  # pragma: no cover
            raise RingError("quasi-regular ideals do not have a largest member")
    return best


# -- isomorphism --------------------------------------------------------------


@dataclass(frozen=True)
class IsoMap:
    """``image[i]`` is the image of element ``i``."""

    source: FiniteRing
    target: FiniteRing
    image: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.image[i]

    def map_mask(self, mask: int) -> int:
        return mask_of(self.image[i] for i in bits(mask))


@lru_cache(maxsize=512)
def element_signatures(R: FiniteRing) -> tuple:
    m = R.mul_table
    sq = m[np.arange(R.order), np.arange(R.order)]
    orders = R.additive_orders
    left0 = np.sum(m == 0, axis=1)
    right0 = np.sum(m == 0, axis=0)
    central = np.sum(m == m.T, axis=1)
    sigs = []
    for x in range(R.order):
        s = int(sq[x])
        sigs.append(
            (
                int(orders[x]),
                s == x,
                s == 0,
                int(orders[s]),
                int(left0[x]),
                int(right0[x]),
                int(central[x]),
            )
        )
    return tuple(sigs)


@lru_cache(maxsize=512)
def ring_invariants(R: FiniteRing) -> tuple:
    sigs = element_signatures(R)
    return (
        R.order,
        tuple(sorted(R.additive_orders.tolist())),
        has_identity(R) is not None,
        annihilator_sizes(R),
        tuple(sorted(sigs)),
    )


def _iso_search(R1: FiniteRing, R2: FiniteRing, first_only: bool):
    if ring_invariants(R1) != ring_invariants(R2):
        return []
    s1, s2 = element_signatures(R1), element_signatures(R2)
    k = R1.k
    basis = [int(x) for x in R1.strides]
    cands = [[y for y in range(R2.order) if s2[y] == s1[b]] for b in basis]
    tab = R1.table
    support = [[set(np.flatnonzero(tab[a, b]).tolist()) for b in range(k)] for a in range(k)]
    add2, mul2 = R2.add_table, R2.mul_table
    found = []
    imgs = [0] * k

    def combo(vec):
        acc = 0
        for t, c in enumerate(vec):
            for _ in range(int(c)):
                acc = int(add2[acc, imgs[t]])
        return acc

    def rec(i, span):
        if i == k:
            f = span
            if np.array_equal(mul2[f[:, None], f[None, :]], f[R1.mul_table]):
                found.append(IsoMap(R1, R2, tuple(int(v) for v in f)))
                return first_only
            return False  # pragma: no cover
        d = R1.moduli[i]
        have = np.zeros(R2.order, dtype=bool)
        have[span] = True
        for g in cands[i]:
            if have[g]:
                continue
            blocks = [span]
            cur = span
            for _ in range(d - 1):
                cur = add2[cur, g]
                blocks.append(cur)
            new = np.concatenate(blocks)
            if len(np.unique(new)) != len(new):
                continue
            imgs[i] = g
            ok = True
            for a in range(i + 1):
                for b in range(i + 1):
                    if a != i and b != i:
                        continue
                    if not support[a][b] <= set(range(i + 1)):
                        continue
                    if mul2[imgs[a], imgs[b]] != combo(tab[a, b]):
                        ok = False
                        break
                if not ok:
                    break
            if ok and rec(i + 1, new):
                return True
        return False

    rec(0, np.zeros(1, dtype=np.int64))
    return found


def is_isomorphic(R1: FiniteRing, R2: FiniteRing, bound=None):
    """An isomorphism ``R1 -> R2`` or None."""
    _check_bound(R1, bound)
    _check_bound(R2, bound)
    if R1.order != R2.order:
        return None
    found = _iso_search(R1, R2, first_only=True)
    return found[0] if found else None


def automorphisms(R: FiniteRing, bound=None) -> list[IsoMap]:
    _check_bound(R, bound)
    return _iso_search(R, R, first_only=False)


# -- canonical form for GF(2)-algebras ---------------------------------------


@lru_cache(maxsize=8)
def gl2_matrices(k: int) -> np.ndarray:
    """All invertible k x k matrices over GF(2), shape (N, k, k)."""
    out = []
    for entries in product((0, 1), repeat=k * k):
        A = np.array(entries, dtype=np.int64).reshape(k, k)
        if _rank2(A) == k:
            out.append(A)
    return np.array(out, dtype=np.int64).reshape(-1, k, k)


def _rank2(A) -> int:
    A = A.copy() % 2
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] ^= A[r]
        r += 1
    return r


def _inv2(A):
    k = A.shape[0]
    M = np.concatenate([A % 2, np.eye(k, dtype=np.int64)], axis=1)
    r = 0
    for c in range(k):
        piv = next(i for i in range(r, k) if M[i, c])
        M[[r, piv]] = M[[piv, r]]
        for i in range(k):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
    return M[:, k:]


def canonical_table_f2(table) -> tuple:
    """Lexicographically least structure-constant table over all bases.

    ``table`` is k x k x k over GF(2).  Two GF(2)-algebras are isomorphic
    iff their canonical tables agree.
    """
    c = np.asarray(table, dtype=np.int64) % 2
    k = c.shape[0]
    if k == 0:
        return ()
    Ps = gl2_matrices(k)
    Pinv = np.array([_inv2(P) for P in Ps])
    # new basis f_i = sum_a P[a, i] e_a
    prod = np.einsum("nai,nbj,abt->nijt", Ps, Ps, c) % 2
    new = np.einsum("nst,nijt->nijs", Pinv, prod) % 2
    flat = new.reshape(len(Ps), -1)
    order = np.lexsort(flat.T[::-1])
    return tuple(flat[order[0]].tolist())
