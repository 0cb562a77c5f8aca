"""Finite rings given by structure constants.

A ring is an additive group ``Z/d_1 x ... x Z/d_k`` together with the
products ``e_i e_j`` of the standard generators, written as coordinate
vectors.  Elements are addressed by a mixed-radix index

    index = c_1 + d_1 * (c_2 + d_2 * (c_3 + ...))

so every subset of the ring is a Python int used as a bit set.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np


class RingError(ValueError):
    pass


class IllFormed(RingError):
    """Table shape or modulus violation; ``witness`` names the offending entry."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAssociative(RingError):
    def __init__(self, witness):
        i, j, l = witness
        super().__init__(f"(e{i} e{j}) e{l} != e{i} (e{j} e{l})")
        self.witness = witness


class BoundExceeded(RingError):
    pass


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)
    return m


class FiniteRing:
    """Immutable finite ring; validated on construction."""

    def __init__(self, moduli: Sequence[int], table):
        moduli = tuple(int(d) for d in moduli)
        k = len(moduli)
        if any(d < 2 for d in moduli):
            raise IllFormed("every modulus must be at least 2", witness=moduli)
        tab = np.asarray(table, dtype=np.int64)
        if k == 0:
            tab = np.zeros((0, 0, 0), dtype=np.int64)
        if tab.shape != (k, k, k):
            raise IllFormed(f"table must have shape {(k, k, k)}, got {tab.shape}")
        mods = np.array(moduli, dtype=np.int64)
        if k:
            bad = np.argwhere((tab < 0) | (tab >= mods[None, None, :]))
            if len(bad):
                i, j, t = bad[0]
                raise IllFormed("coordinate out of range", witness=(int(i), int(j), int(t)))
            for i, j in product(range(k), repeat=2):
                for d in (moduli[i], moduli[j]):
                    if np.any((d * tab[i, j]) % mods):
                        raise IllFormed(
                            f"{d} * (e{i} e{j}) != 0, product not well defined",
                            witness=(i, j),
                        )
        self.moduli = moduli
        self.table = tab
        self.table.setflags(write=False)
        self.k = k
        self.order = int(np.prod(mods)) if k else 1
        strides = [1]
        for d in moduli[:-1]:
            strides.append(strides[-1] * d)
        self.strides = np.array(strides[:k], dtype=np.int64)
        witness = self._associativity_witness()
        if witness is not None:
            raise NotAssociative(witness)

    # -- coordinates -------------------------------------------------------

    def encode(self, coords) -> int:
        c = np.asarray(coords, dtype=np.int64) % np.array(self.moduli, dtype=np.int64)
        return int(c @ self.strides) if self.k else 0

    def decode(self, index: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.coords[index])

    @cached_property
    def coords(self) -> np.ndarray:
        idx = np.arange(self.order, dtype=np.int64)
        if not self.k:
            return np.zeros((1, 0), dtype=np.int64)
        mods = np.array(self.moduli, dtype=np.int64)
        return (idx[:, None] // self.strides[None, :]) % mods[None, :]

    def basis_product(self, a, b) -> np.ndarray:
        """Bilinear product of two coordinate vectors."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if not self.k:
            return np.zeros(0, dtype=np.int64)
        v = np.einsum("i,j,ijt->t", a, b, self.table)
        return v % np.array(self.moduli, dtype=np.int64)

    def _associativity_witness(self):
        k = self.k
        if not k:
            return None
        mods = np.array(self.moduli, dtype=np.int64)
        c = self.table
        # lhs[i,j,l] = (e_i e_j) e_l,  rhs[i,j,l] = e_i (e_j e_l)
        lhs = np.einsum("ijs,slt->ijlt", c, c) % mods
        rhs = np.einsum("jls,ist->ijlt", c, c) % mods
        bad = np.argwhere(np.any(lhs != rhs, axis=3))
        if len(bad):
            return tuple(int(x) for x in bad[0])
        return None

    # -- element tables ----------------------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        if not self.k:
            return np.zeros((1, 1), dtype=np.int64)
        mods = np.array(self.moduli, dtype=np.int64)
        s = (self.coords[:, None, :] + self.coords[None, :, :]) % mods
        t = s @ self.strides
        t.setflags(write=False)
        return t

    @cached_property
    def neg_table(self) -> np.ndarray:
        if not self.k:
            return np.zeros(1, dtype=np.int64)
        mods = np.array(self.moduli, dtype=np.int64)
        t = ((-self.coords) % mods) @ self.strides
        t.setflags(write=False)
        return t

    @cached_property
    def mul_table(self) -> np.ndarray:
        if not self.k:
            return np.zeros((1, 1), dtype=np.int64)
        mods = np.array(self.moduli, dtype=np.int64)
        x = self.coords
        half = np.einsum("ai,ijt->ajt", x, self.table)
        full = np.einsum("bj,ajt->abt", x, half) % mods
        t = full @ self.strides
        t.setflags(write=False)
        return t

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def additive_order(self, a: int) -> int:
        n, x = 1, a
        while x != 0:
            x = self.add(x, a)
            n += 1
        return n

    @cached_property
    def additive_orders(self) -> np.ndarray:
        mods = np.array(self.moduli, dtype=np.int64)
        out = np.ones(self.order, dtype=np.int64)
        for t, d in enumerate(mods):
            c = self.coords[:, t]
            o = d // np.gcd(c, d)
            out = np.lcm(out, o)
        return out

    # -- misc ----------------------------------------------------------------

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.mul_table, self.mul_table.T))

    def __eq__(self, other):
        return (
            isinstance(other, FiniteRing)
            and self.moduli == other.moduli
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self):
        return hash((self.moduli, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteRing(moduli={list(self.moduli)}, order={self.order})"


def make_ring(moduli: Sequence[int], table) -> FiniteRing:
    """Validated ring from moduli and a k x k table of coordinate vectors."""
    return FiniteRing(moduli, table)


def zero_ring(moduli: Sequence[int]) -> FiniteRing:
    k = len(moduli)
    return FiniteRing(moduli, np.zeros((k, k, k), dtype=np.int64))


def arith(R: FiniteRing, op: str, a, b=None):
    """``add``/``neg``/``mul`` on coordinate vectors."""
    mods = np.array(R.moduli, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64)
    if op == "add":
        out = (a + np.asarray(b, dtype=np.int64)) % mods
    elif op == "neg":
        out = (-a) % mods
    elif op == "mul":
        out = R.basis_product(a, b)
    else:
        raise ValueError(f"unknown op {op!r}")
    return tuple(int(x) for x in out)


@dataclass(frozen=True)
class Subring:
    parent: FiniteRing
    members: int

    def __len__(self):
        return self.members.bit_count()

    def __contains__(self, index):
        return bool((self.members >> index) & 1)

    def elements(self) -> list[int]:
        return bits(self.members)

    @property
    def proper(self) -> bool:
        return self.members != self.parent.full_mask

    def __repr__(self):
        return f"Subring(order={len(self)}, members={self.elements()})"


def is_closed(R: FiniteRing, mask: int) -> bool:
    """Additive subgroup closed under multiplication."""
    el = np.array(bits(mask), dtype=np.int64)
    if not len(el) or el[0] != 0:
        return False
    inside = np.zeros(R.order, dtype=bool)
    inside[el] = True
    sub = np.ix_(el, el)
    return bool(inside[R.add_table[sub]].all() and inside[R.mul_table[sub]].all())


def has_identity(R: FiniteRing):
    """Index of the two-sided identity, or None."""
    ar = np.arange(R.order)
    m = R.mul_table
    for e in range(R.order):
        if np.array_equal(m[e], ar) and np.array_equal(m[:, e], ar):
            return e
    return None


def opposite(R: FiniteRing) -> FiniteRing:
    return FiniteRing(R.moduli, R.table.transpose(1, 0, 2))


def two_r(R: FiniteRing) -> Subring:
    doubles = R.add_table[np.arange(R.order), np.arange(R.order)]
    return Subring(R, mask_of(set(doubles.tolist())))


def annihilator_sizes(R: FiniteRing) -> tuple[int, int]:
    """(|{a : aR = 0}|, |{a : Ra = 0}|)."""
    m = R.mul_table
    left = int(np.sum(np.all(m == 0, axis=1)))
    right = int(np.sum(np.all(m == 0, axis=0)))
    return left, right


def unitalize(R: FiniteRing):
    """Adjoin an identity ``u`` with ``u + u = 0``.

    Returns ``(R_star, embedding)``; ``embedding[i]`` is the index of
    element ``i`` of ``R`` inside ``R_star``, and the adjoined identity is
    ``R_star`` index ``R.order``.  Requires ``2R = 0``: otherwise ``u*r = r``
    clashes with ``2u = 0``.
    """
    if len(two_r(R)) != 1:
        raise IllFormed("unitalization with u + u = 0 needs 2R = 0")
    k = R.k
    moduli = R.moduli + (2,)
    tab = np.zeros((k + 1, k + 1, k + 1), dtype=np.int64)
    tab[:k, :k, :k] = R.table
    for i in range(k):
        tab[k, i, i] = 1
        tab[i, k, i] = 1
    tab[k, k, k] = 1
    Rs = FiniteRing(moduli, tab)
    return Rs, np.arange(R.order, dtype=np.int64)


def direct_sum(*rings: FiniteRing) -> FiniteRing:
    moduli: tuple[int, ...] = ()
    for S in rings:
        moduli += S.moduli
    k = len(moduli)
    tab = np.zeros((k, k, k), dtype=np.int64)
    off = 0
    for S in rings:
        s = S.k
        tab[off : off + s, off : off + s, off : off + s] = S.table
        off += s
    return FiniteRing(moduli, tab)


# -- generic construction from Cayley tables -------------------------------


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _span(add: np.ndarray, gens, orders) -> np.ndarray:
    """Mixed-radix listing of all sums ``sum c_t g_t`` (index 0 = zero)."""
    span = np.zeros(1, dtype=np.int64)
    for g, d in zip(gens, orders):
        blocks = [span]
        cur = span
        for _ in range(d - 1):
            cur = add[cur, g]
            blocks.append(cur)
        span = np.concatenate(blocks)
    return span


def abelian_basis(add: np.ndarray) -> tuple[list[int], list[int]]:
    """Generators with prime-power orders giving a direct decomposition.

    ``add`` is the Cayley table of an abelian group with identity 0.
    Generators are grouped by prime, larger orders first.
    """
    n = add.shape[0]
    orders = np.ones(n, dtype=np.int64)
    for a in range(1, n):
        x, o = a, 1
        while x != 0:
            x = int(add[x, a])
            o += 1
        orders[a] = o
    gens: list[int] = []
    gen_orders: list[int] = []
    for p in _prime_factors(n):
        ppart = [a for a in range(n) if _is_power_of(int(orders[a]), p)]
        # elementary divisor type from counts of elements of order | p^j
        count = {}
        j = 0
        while True:
            c = sum(1 for a in ppart if (p**j) % orders[a] == 0)
            count[j] = c
            if c == len(ppart):
                break
            j += 1
        exps = []
        for jj in range(1, j + 1):
            r = _log(count[jj] // count[jj - 1], p)
            exps.append(r)
        # exps[jj-1] = number of cyclic factors of order >= p^jj
        factor_orders = []
        for jj in range(j, 0, -1):
            nbig = exps[jj - 1] - (exps[jj] if jj < j else 0)
            factor_orders += [p**jj] * nbig
        chosen = _independent(add, ppart, orders, factor_orders)
        gens += chosen
        gen_orders += factor_orders
    return gens, gen_orders


def _is_power_of(x: int, p: int) -> bool:
    while x % p == 0:
        x //= p
    return x == 1


def _log(x: int, p: int) -> int:
    r = 0
    while x > 1:
        x //= p
        r += 1
    return r


def _independent(add, pool, orders, factor_orders):
    """Backtracking choice of independent generators with the given orders."""
    chosen: list[int] = []

    def rec(i, span):
        if i == len(factor_orders):
            return True
        d = factor_orders[i]
        have = set(span.tolist())
        for g in pool:
            if orders[g] != d or g in have:
                continue
            new = _span(add, [g], [d])
            combo = add[span[:, None], new[None, :]].ravel()
            if len(np.unique(combo)) != len(combo):
                continue
            chosen.append(g)
            if rec(i + 1, combo):
                return True
            chosen.pop()
        return False

    if not rec(0, np.zeros(1, dtype=np.int64)):  # pragma: no cover
        raise RingError("no basis found for abelian group")
    return chosen


def from_tables(add, mul) -> tuple[FiniteRing, np.ndarray]:
    """Ring isomorphic to the one given by Cayley tables (0 = zero element).

    Returns ``(R, elem)`` where ``elem[i]`` is the table element that ``R``'s
    index ``i`` stands for.
    """
    add = np.asarray(add, dtype=np.int64)
    mul = np.asarray(mul, dtype=np.int64)
    gens, orders = abelian_basis(add)
    elem = _span(add, gens, orders)
    if len(elem) != add.shape[0]:  # pragma: no cover
        raise RingError("basis does not span")
    where = np.empty_like(elem)
    where[elem] = np.arange(len(elem))
    k = len(gens)
    strides = np.ones(k, dtype=np.int64)
    for t in range(1, k):
        strides[t] = strides[t - 1] * orders[t - 1]
    tab = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            idx = where[mul[gens[i], gens[j]]]
            tab[i, j] = (idx // strides) % np.array(orders, dtype=np.int64)
    return FiniteRing(orders, tab), elem


def restrict_tables(add, mul, members: Sequence[int]):
    """Cayley tables of a closed subset, relabelled 0..m-1 in given order."""
    members = np.asarray(members, dtype=np.int64)
    pos = {int(v): i for i, v in enumerate(members)}
    sub = np.ix_(members, members)
    a = np.vectorize(pos.__getitem__)(np.asarray(add)[sub])
    m = np.vectorize(pos.__getitem__)(np.asarray(mul)[sub])
    return a.astype(np.int64), m.astype(np.int64)


def subring_as_ring(S: Subring) -> tuple[FiniteRing, np.ndarray]:
    """``S`` as a standalone ring plus the map from its indices into the parent."""
    members = S.elements()
    a, m = restrict_tables(S.parent.add_table, S.parent.mul_table, members)
    ring, elem = from_tables(a, m)
    return ring, np.asarray(members, dtype=np.int64)[elem]


# -- ring file format --------------------------------------------------------


def ring_to_json(R: FiniteRing) -> str:
    doc = {"moduli": list(R.moduli), "table": R.table.tolist()}
    return json.dumps(doc, separators=(", ", ": ")) + "\n"


def ring_from_json(text: str) -> FiniteRing:
    doc = json.loads(text)
    try:
        moduli = doc["moduli"]
        table = doc["table"]
    except (KeyError, TypeError) as exc:
        raise IllFormed("ring file needs 'moduli' and 'table'") from exc
    return make_ring(moduli, table)


def save_ring(R: FiniteRing, path) -> None:
    with open(path, "w") as f:
        f.write(ring_to_json(R))


def load_ring(path) -> FiniteRing:
    with open(path) as f:
        return ring_from_json(f.read())
