"""The ten good rings, built from their ambient matrix presentations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable

import numpy as np

from .covering import GoodTuple, good_tuples, is_good_tuple
from .lattice import ideals, is_ideal_mask, is_isomorphic, quotient
from .ring import FiniteRing, from_tables, has_identity, mask_of


def _key(M) -> tuple:
    return tuple(np.asarray(M, dtype=np.int64).ravel().tolist())


def matrix_ring(mats, modulus: int):
    """Subring of M_n(Z/modulus) generated by ``mats``.

    Returns ``(ring, matrices)`` with ``matrices[i]`` the matrix for ring
    index ``i``.
    """
    mats = [np.asarray(M, dtype=np.int64) % modulus for M in mats]
    n = mats[0].shape[0]
    zero = np.zeros((n, n), dtype=np.int64)
    elems = {_key(zero): zero}
    frontier = list(mats)
    for M in mats:
        elems.setdefault(_key(M), M)
    while frontier:
        new = []
        cur = list(elems.values())
        for A in frontier:
            for B in cur:
                for C in (A + B, A @ B, B @ A):
                    C = C % modulus
                    if _key(C) not in elems:
                        elems[_key(C)] = C
                        new.append(C)
        frontier = new
    keys = sorted(elems, key=lambda t: (any(t), t))
    pos = {k: i for i, k in enumerate(keys)}
    ms = [elems[k] for k in keys]
    m = len(ms)
    add = np.empty((m, m), dtype=np.int64)
    mul = np.empty((m, m), dtype=np.int64)
    for i, A in enumerate(ms):
        for j, B in enumerate(ms):
            add[i, j] = pos[_key((A + B) % modulus)]
            mul[i, j] = pos[_key((A @ B) % modulus)]
    ring, elem = from_tables(add, mul)
    return ring, [ms[e] for e in elem]


def _family(shape: Callable, nparams: int, restriction: Callable | None = None):
    out = []
    for vals in product((0, 1), repeat=nparams):
        if restriction is None or restriction(*vals) % 2 == 0:
            out.append(np.array(shape(*vals), dtype=np.int64))
    return out


def _E(n, i, j):
    M = np.zeros((n, n), dtype=np.int64)
    M[i - 1, j - 1] = 1
    return M


@dataclass
class CatalogEntry:
    id: int
    ring: FiniteRing
    tuple: GoodTuple
    ambient: str
    matrices: list  # matrices[i] is the matrix for ring index i
    unital: bool
    commutative: bool

    def find(self, M) -> int:
        key = _key(M)
        return next(i for i, A in enumerate(self.matrices) if _key(A) == key)


ORDERS = {1: 4, 2: 4, 3: 4, 4: 4, 5: 8, 6: 8, 7: 8, 8: 8, 9: 8, 10: 16}


def _spec(i):
    """(ambient text, elements, modulus, three membership predicates on params)."""
    if i == 1:
        els = [np.zeros((2, 2)), np.eye(2), _E(2, 1, 1), _E(2, 2, 2)]
        return "M_2(Z/2): {0, I, E11, E22}", els, None
    if i == 2:
        els = [np.zeros((3, 3)), _E(3, 2, 1), _E(3, 3, 1), _E(3, 2, 1) + _E(3, 3, 1)]
        return "M_3(Z/2): {0, E21, E31, E21+E31}", els, None
    if i == 3:
        els = [np.zeros((2, 2)), _E(2, 1, 2), _E(2, 1, 1), _E(2, 1, 1) + _E(2, 1, 2)]
        return "M_2(Z/2): {0, E12, E11, E11+E12}", els, None
    if i == 4:
        els = [np.zeros((2, 2)), _E(2, 1, 2), _E(2, 2, 2), _E(2, 1, 2) + _E(2, 2, 2)]
        return "M_2(Z/2): {0, E12, E22, E12+E22}", els, None
    if i == 5:
        shape = lambda a, b, c: np.diag([a, b, c])
        preds = (lambda a, b, c: a + b, lambda a, b, c: a + c, lambda a, b, c: b + c)
        return "M_3(Z/2): diag(a, b, c)", (shape, 3, None), preds
    if i == 6:
        shape = lambda a, b, c: [[a, 0, 0], [b, a, 0], [c, 0, a]]
        preds = (lambda a, b, c: b, lambda a, b, c: c, lambda a, b, c: b + c)
        return "M_3(Z/2): [[a,0,0],[b,a,0],[c,0,a]]", (shape, 3, None), preds
    if i == 7:
        shape = lambda a, b, c: [[a, c], [0, b]]
        preds = (lambda a, b, c: c, lambda a, b, c: a + b, lambda a, b, c: a + b + c)
        return "M_2(Z/2): [[a,c],[0,b]]", (shape, 3, None), preds
    if i == 8:
        shape = lambda b, c, d, e: [[0, b, c, d], [0, e, 0, 0], [0, 0, e, 0], [0, 0, 0, e]]
        preds = (lambda b, c, d, e: c, lambda b, c, d, e: d, lambda b, c, d, e: c + d)
        return ("M_4(Z/2): [[0,b,c,d],[0,e,0,0],[0,0,e,0],[0,0,0,e]], b+e=0",
                (shape, 4, lambda b, c, d, e: b + e), preds)
    if i == 9:
        shape = lambda b, c, d, e: [[0, 0, 0, 0], [b, e, 0, 0], [c, 0, e, 0], [d, 0, 0, e]]
        preds = (lambda b, c, d, e: c, lambda b, c, d, e: d, lambda b, c, d, e: c + d)
        return ("M_4(Z/2): [[0,0,0,0],[b,e,0,0],[c,0,e,0],[d,0,0,e]], b+e=0",
                (shape, 4, lambda b, c, d, e: b + e), preds)
    if i == 10:
        shape = lambda a, b, c, d, e: [[a, 0, 0, 0], [b, e, 0, 0], [c, 0, e, 0], [d, 0, 0, e]]
        preds = (lambda a, b, c, d, e: c, lambda a, b, c, d, e: d, lambda a, b, c, d, e: c + d)
        return ("M_4(Z/2): [[a,0,0,0],[b,e,0,0],[c,0,e,0],[d,0,0,e]], a+b+e=0",
                (shape, 5, lambda a, b, c, d, e: a + b + e), preds)
    raise ValueError(f"no example {i}")


@lru_cache(maxsize=None)
def example(i: int) -> CatalogEntry:
    """Catalog entry for Example 2.i, validated before return."""
    if not 1 <= i <= 10:
        raise ValueError("example id must be in 1..10")
    ambient, els, preds = _spec(i)
    if preds is None:
        ring, mats = matrix_ring(els, 2)
        if len(mats) != len(els):
            raise AssertionError(f"example {i}: listed set is not closed")
        # the three order-2 subrings {0, r}
        subs = [mask_of([0, r]) for r in range(1, ring.order)]
        trio = tuple(subs)
    else:
        shape, nparams, restriction = els
        family = _family(shape, nparams, restriction)
        params = [v for v in product((0, 1), repeat=nparams)
                  if restriction is None or restriction(*v) % 2 == 0]
        ring, mats = matrix_ring(family, 2)
        if len(mats) != len(family):
            raise AssertionError(f"example {i}: parametrised set is not closed")
        where = {_key(shape(*v)): v for v in params}
        trio = tuple(
            mask_of(idx for idx, M in enumerate(mats) if p(*where[_key(M)]) % 2 == 0)
            for p in preds
        )
    ok, reason = is_good_tuple(ring, *trio)
    if not ok:
        raise AssertionError(f"example {i}: tuple not good ({reason})")
    if ring.order != ORDERS[i]:
        raise AssertionError(f"example {i}: order {ring.order}")
    return CatalogEntry(
        id=i,
        ring=ring,
        tuple=GoodTuple(ring, tuple(sorted(trio))),
        ambient=ambient,
        matrices=mats,
        unital=has_identity(ring) is not None,
        commutative=ring.is_commutative(),
    )


def example_2_2_z4() -> FiniteRing:
    """The Z/4 presentation: {0, 2E11, 2E22, 2I} in M_2(Z/4)."""
    els = [np.zeros((2, 2)), 2 * _E(2, 1, 1), 2 * _E(2, 2, 2), 2 * np.eye(2)]
    ring, _ = matrix_ring(els, 4)
    return ring


def catalog() -> list[CatalogEntry]:
    return [example(i) for i in range(1, 11)]


def identify(R: FiniteRing):
    """Catalog id of the example isomorphic to R, or None."""
    for i in range(1, 11):
        if ORDERS[i] == R.order and is_isomorphic(R, example(i).ring) is not None:
            return i
    return None


# -- factor-ring claims -------------------------------------------------------


@dataclass
class Claim:
    name: str
    passed: bool
    detail: str


def _factor_claim(src: int, dst: int, ideal_mats) -> Claim:
    e = example(src)
    mask = mask_of(e.find(M) for M in ideal_mats) | 1
    name = f"{src}->{dst}"
    if not is_ideal_mask(e.ring, mask):
        return Claim(name, False, "stated set is not an ideal")
    Q, _ = quotient(e.ring, mask)
    iso = is_isomorphic(Q, example(dst).ring)
    detail = f"|I|={mask.bit_count()}, R/I {'~' if iso else 'not ~'} Example 2.{dst}"
    return Claim(name, iso is not None, detail)


def verify_section6() -> list[Claim]:
    """Factor-ring claims for Examples 2.5-2.10."""
    claims = [
        _factor_claim(5, 1, [np.diag([1, 0, 0])]),
        _factor_claim(7, 1, [_E(2, 1, 2)]),
        _factor_claim(8, 4, [_E(4, 1, 4)]),
        _factor_claim(9, 3, [_E(4, 4, 1)]),
        _factor_claim(10, 1, [_E(4, 3, 1), _E(4, 4, 1), _E(4, 3, 1) + _E(4, 4, 1)]),
    ]
    R = example(6).ring
    bad = []
    nontrivial = [I for I in ideals(R) if I.members != 1]
    for I in nontrivial:
        Q, _ = quotient(R, I)
        if Q.order > 1 and good_tuples(Q):
            bad.append(I.elements())
    claims.append(
        Claim(
            "6 has no good proper factor",
            not bad,
            f"{len(nontrivial)} nonzero ideals checked" + (f", good quotients from {bad}" if bad else ""),
        )
    )
    return claims


# -- corpus for the three-cover criterion -----------------------------------------


def field_ring(q: int) -> FiniteRing:
    """GF(q) as a FiniteRing."""
    from .gfq import field_of_order

    F = field_of_order(q)
    ring, _ = from_tables(F.add_t, F.mul_t)
    return ring


def theorem2_corpus(n_random: int = 10, seed: int = 20240917, jobs: int = 1) -> list[tuple[str, FiniteRing]]:
    """Named rings: the enumerated good rings of orders 4 and 8, the catalog,
    GF(8), GF(4) + GF(2) and ``n_random`` random GF(2)-algebras of order 16."""
    from .covering import classify_good_rings, random_algebra_f2
    from .ring import direct_sum

    out = []
    for order in (4, 8):
        for idx, c in enumerate(classify_good_rings(order, jobs=jobs, full_check=False)):
            out.append((f"good order {order} #{idx}", c.ring))
    out.extend((f"Example 2.{e.id}", e.ring) for e in catalog())
    out.append(("GF(8)", field_ring(8)))
    out.append(("GF(4)+GF(2)", direct_sum(field_ring(4), field_ring(2))))
    rng = np.random.default_rng(seed)
    for t in range(n_random):
        out.append((f"random order 16 #{t}", random_algebra_f2(4, rng)))
    return out
