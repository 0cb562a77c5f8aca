"""Covers of full matrix rings M_n(q) by maximal subrings.

Maximal subrings of M_n(q) come in two families: stabilizers M(U) of
proper nonzero subspaces U, and conjugates of M_{n/a}(q^a) for primes
a | n.  The latter are represented through the embedded field
GF(q^a): a matrix lies in the conjugate iff it commutes with the
conjugated field generator.

Matrices act on column vectors.  A batch of matrices is an int array
of shape (N, n, n) with entries in the field encoding of :mod:`gfq`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

import numpy as np

from .gfq import (
    BudgetExceeded,
    FieldCtx,
    Subspace,
    all_matrices,
    budget,
    char_poly,
    companion,
    complementary,
    count_N,
    encode_matrices,
    euler_phi,
    field_of_order,
    gaussian_binomial,
    general_linear,
    gl_order,
    identity,
    irreducible_factors,
    mat_inv,
    mat_pow,
    membership_table,
    monic_polys,
    prime_factors,
    prime_power,
    primitive_poly,
    smallest_prime_divisor,
    subspace_of,
    subspaces,
    vector_codes,
)
from .setcover import covers_of_size, min_set_cover


class NotADivisor(ValueError):
    pass


class VerificationBudgetExceeded(BudgetExceeded):
    """Raised by :func:`build_cover`; ``certificate`` holds the unverified result."""

    def __init__(self, msg, certificate=None):
        super().__init__(msg)
        self.certificate = certificate


# -- formulas -------------------------------------------------------------------


def sigma_formula(n: int, q: int) -> int:
    """(1/b) prod_{1<=i<n, b∤i} (q^n - q^i) + N(b), b the least prime of n."""
    prime_power(q)
    b, N = count_N(n, q)
    num = 1
    for i in range(1, n):
        if i % b:
            num *= q**n - q**i
    head, rem = divmod(num, b)
    assert rem == 0, "product term not divisible by b"
    return head + N


def conjugate_count(n: int, q: int, a: int) -> int:
    """Number of GL(n,q)-conjugates of M_{n/a}(q^a)."""
    if a < 1 or n % a:
        raise NotADivisor(f"{a} does not divide {n}")
    value, rem = divmod(gl_order(n, q), a * gl_order(n // a, q**a))
    assert rem == 0, "conjugate count not integral"
    return value


def singer_cycle_count(n: int, q: int) -> int:
    value, rem = divmod(gl_order(n, q), (q**n - 1) * n)
    assert rem == 0
    return value


# -- descriptors ----------------------------------------------------------------


def _mat_tuple(M) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in np.asarray(M))


@dataclass(frozen=True)
class Stabilizer:
    """M(U); ``count`` > 1 means a stand-in for every subspace of that dimension."""

    U: Subspace
    count: int = 1

    def __post_init__(self):
        if not 0 < self.U.dim < self.U.n:
            raise ValueError("stabilizer needs a proper nonzero subspace")

    @property
    def label(self) -> str:
        return f"M(U) dim {self.U.dim} basis {list(map(list, self.U.basis))}"


@dataclass(frozen=True)
class SubfieldConjugate:
    """g M_{n/a}(q^a) g^-1; ``count`` > 1 means a stand-in for that many conjugates."""

    n: int
    q: int
    a: int
    g: tuple[tuple[int, ...], ...]
    count: int = 1

    def __post_init__(self):
        if self.a not in prime_factors(self.n):
            raise ValueError("a must be a prime divisor of n")

    @property
    def label(self) -> str:
        return f"conjugate of M_{self.n // self.a}({self.q}^{self.a}) g={list(map(list, self.g))}"

    @property
    def generator(self) -> np.ndarray:
        return _conjugate_generator(self.n, self.q, self.a, self.g)


@lru_cache(maxsize=None)
def embedded_field_generator(n: int, q: int, a: int) -> np.ndarray:
    """diag(C, ..., C) with C the companion matrix of the primitive
    degree-a polynomial over GF(q)."""
    F = field_of_order(q)
    C = companion(F, primitive_poly(F, a))
    D = np.zeros((n, n), dtype=np.int64)
    for blk in range(n // a):
        D[blk * a:(blk + 1) * a, blk * a:(blk + 1) * a] = C
    D.setflags(write=False)
    return D


@lru_cache(maxsize=4096)
def _conjugate_generator(n, q, a, g):
    F = field_of_order(q)
    G = np.array(g, dtype=np.int64).reshape(n, n)
    out = F.matmul(F.matmul(G, embedded_field_generator(n, q, a)), mat_inv(F, G))
    out.setflags(write=False)
    return out


def membership(F: FieldCtx, X, d) -> np.ndarray:
    """Boolean flags: which matrices of the batch X lie in descriptor d."""
    X = np.asarray(X, dtype=np.int64)
    if isinstance(d, Stabilizer):
        inside = _inside_table(F, d.U)
        images = F.matmul(X, d.U.basis_array().T)  # (N, n, k)
        codes = vector_codes(F, np.swapaxes(images, -1, -2))  # (N, k)
        return inside[codes].all(axis=-1)
    G = d.generator
    return (F.matmul(X, G) == F.matmul(G, X)).all(axis=(-1, -2))


@lru_cache(maxsize=4096)
def _inside_table(F, U):
    return membership_table(F, U)


def subring_membership(x, d) -> bool:
    """Does the single matrix x lie in the maximal subring d?"""
    q = d.U.q if isinstance(d, Stabilizer) else d.q
    F = field_of_order(q)
    return bool(membership(F, np.asarray(x, dtype=np.int64)[None], d)[0])


# -- enumerating maximal subrings -------------------------------------------------


def _gl_generators(F, n):
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                T = identity(n)
                T[i, j] = 1
                gens.append(T)
    if F.q > 2:
        Dg = identity(n)
        Dg[0, 0] = F.primitive
        gens.append(Dg)
    return gens


def _field_key(F, G) -> tuple[int, ...]:
    """Sorted codes of the field {0} ∪ {G^i}; identifies the subring."""
    n = G.shape[0]
    powers = [np.zeros((n, n), dtype=np.int64)]
    cur = identity(n)
    while True:
        powers.append(cur)
        cur = F.matmul(cur, G)
        if np.array_equal(cur, identity(n)):
            break
    return tuple(sorted(encode_matrices(F, np.array(powers)).tolist()))


@lru_cache(maxsize=None)
def subfield_conjugates(n: int, q: int, a: int) -> tuple[SubfieldConjugate, ...]:
    """All distinct conjugates of M_{n/a}(q^a), by orbit search under GL(n,q)."""
    F = field_of_order(q)
    expected = conjugate_count(n, q, a)
    if expected * (q**a) > budget():
        raise BudgetExceeded(f"{expected} conjugates exceed budget")
    gens = [(h, mat_inv(F, h)) for h in _gl_generators(F, n)]
    D = embedded_field_generator(n, q, a)
    start = identity(n)
    seen = {_field_key(F, D): start}
    frontier = [(start, D)]
    while frontier:
        nxt = []
        for g, G in frontier:
            for h, hinv in gens:
                G2 = F.matmul(F.matmul(h, G), hinv)
                key = _field_key(F, G2)
                if key not in seen:
                    g2 = F.matmul(h, g)
                    seen[key] = g2
                    nxt.append((g2, G2))
        frontier = nxt
    out = tuple(
        SubfieldConjugate(n, q, a, _mat_tuple(g)) for _, g in sorted(seen.items(), key=lambda kv: kv[0])
    )
    if len(out) != expected:
        raise AssertionError(f"found {len(out)} conjugates, expected {expected}")
    return out


def _explicit_ok(n, q) -> bool:
    return all(conjugate_count(n, q, a) * q**a <= budget() for a in prime_factors(n))


def maximal_subrings(n: int, q: int, explicit: bool | None = None) -> list:
    """Stabilizers of every proper nonzero subspace, then the subfield
    conjugates per prime a | n (one counted representative per class when
    not enumerated explicitly)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    F = field_of_order(q)
    out: list = [Stabilizer(U) for k in range(1, n) for U in subspaces(F, n, k)]
    explicit = _explicit_ok(n, q) if explicit is None else explicit
    for a in prime_factors(n):
        if explicit:
            out.extend(subfield_conjugates(n, q, a))
        else:
            out.append(SubfieldConjugate(n, q, a, _mat_tuple(identity(n)), conjugate_count(n, q, a)))
    return out


def descriptor_count(ds) -> int:
    return sum(d.count for d in ds)


# -- Singer cycles and the witness set ---------------------------------------------


def singer_generator(n: int, q: int) -> np.ndarray:
    F = field_of_order(q)
    S = companion(F, primitive_poly(F, n))
    N = q**n - 1
    if not np.array_equal(mat_pow(F, S, N), identity(n)):
        raise AssertionError("companion matrix order does not divide q^n - 1")
    for r in prime_factors(N) if N > 1 else []:
        if np.array_equal(mat_pow(F, S, N // r), identity(n)):
            raise AssertionError("companion matrix order is a proper divisor")
    if n <= 3 and q <= 3:
        _assert_single_cycle(F, S)
    return S


def _assert_single_cycle(F, S):
    n = S.shape[0]
    v = np.zeros(n, dtype=np.int64)
    v[0] = 1
    start = int(vector_codes(F, v))
    seen = {start}
    cur = v
    while True:
        cur = F.matmul(S, cur[:, None])[:, 0]
        c = int(vector_codes(F, cur))
        if c == start:
            break
        seen.add(c)
    if len(seen) != F.q**n - 1:
        raise AssertionError("Singer generator does not cycle all nonzero vectors")


def elements_of_order(F, X, N: int) -> np.ndarray:
    """Flags for matrices in the batch X of multiplicative order exactly N."""
    n = X.shape[-1]
    I = identity(n)
    ok = (mat_pow(F, X, N) == I).all(axis=(-1, -2))
    for r in prime_factors(N) if N > 1 else []:
        ok &= ~(mat_pow(F, X, N // r) == I).all(axis=(-1, -2))
    return ok


@lru_cache(maxsize=None)
def singer_generators(m: int, q: int) -> np.ndarray:
    """Every element of order q^m - 1 in GL(m, q)."""
    F = field_of_order(q)
    if m == 1:
        return np.array([[[F.antilog[i]]] for i in range(q - 1) if gcd(i, q - 1) == 1], dtype=np.int64)
    G = general_linear(F, m)
    out = G[elements_of_order(F, G, q**m - 1)]
    expected = singer_cycle_count(m, q) * euler_phi(q**m - 1)
    if len(out) != expected:
        raise AssertionError(f"{len(out)} Singer generators in GL({m},{q}), expected {expected}")
    return out


@dataclass(frozen=True)
class PiElement:
    kind: str  # "T0", "Tk" or "Thalf"
    matrix: tuple[tuple[int, ...], ...]
    k: int = 0
    U: Subspace | None = None
    W: Subspace | None = None

    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)


def complement_matching(F, n: int, k: int) -> dict[Subspace, Subspace]:
    """A bijection U -> W from k- to (n-k)-subspaces with V = U ⊕ W.

    Augmenting-path matching in the complementarity graph, visiting both
    sides in echelon order.
    """
    left = subspaces(F, n, k)
    right = subspaces(F, n, n - k)
    adj = [[j for j, W in enumerate(right) if complementary(F, U, W)] for U in left]
    match_r: dict[int, int] = {}

    def augment(i, seen):
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_r or augment(match_r[j], seen):
                match_r[j] = i
                return True
        return False

    for i in range(len(left)):
        if not augment(i, set()):
            raise AssertionError("no perfect complement matching")
    return {left[i]: right[j] for j, i in match_r.items()}


def _basis_change(U: Subspace, W: Subspace) -> np.ndarray:
    return np.concatenate([U.basis_array(), W.basis_array()]).T


def build_pi(n: int, q: int) -> list[PiElement]:
    """Witness set: Singer generators (T0), block Singer pairs on matched
    complements (Tk) and, for n ≡ 2 mod 4, the [[S, I], [0, S]] elements."""
    F = field_of_order(q)
    b = smallest_prime_divisor(n)
    out: list[PiElement] = []
    seen: set[int] = set()

    def push(M, **kw):
        code = int(encode_matrices(F, M))
        if code not in seen:
            seen.add(code)
            out.append(PiElement(matrix=_mat_tuple(M), **kw))

    for S in singer_generators(n, q):
        push(S, kind="T0")
    for k in range(1, (n + 1) // 2):
        if 2 * k >= n or k % b == 0:
            continue
        for U, W in sorted(complement_matching(F, n, k).items(), key=lambda t: t[0].basis):
            P = _basis_change(U, W)
            Pinv = mat_inv(F, P)
            for A in singer_generators(k, q):
                for B in singer_generators(n - k, q):
                    blk = np.zeros((n, n), dtype=np.int64)
                    blk[:k, :k] = A
                    blk[k:, k:] = B
                    push(F.matmul(F.matmul(P, blk), Pinv), kind="Tk", k=k, U=U, W=W)
    if n % 4 == 2:
        h = n // 2
        half = subspaces(F, n, h)
        for U in half:
            for W in half:
                if not complementary(F, U, W):
                    continue
                P = _basis_change(U, W)
                Pinv = mat_inv(F, P)
                for S in singer_generators(h, q):
                    blk = np.zeros((n, n), dtype=np.int64)
                    blk[:h, :h] = S
                    blk[h:, h:] = S
                    blk[:h, h:] = identity(h)
                    push(F.matmul(F.matmul(P, blk), Pinv), kind="Thalf", k=h, U=U, W=W)
    return out


def pi_array(pi: list[PiElement]) -> np.ndarray:
    n = len(pi[0].matrix)
    return np.array([p.matrix for p in pi], dtype=np.int64).reshape(-1, n, n)


# -- the cover family ---------------------------------------------------------------


def cover_family(n: int, q: int, explicit: bool | None = None) -> list:
    """Conjugates of M_{n/b}(q^b) and stabilizers M(U) with dim U <= n/2, b ∤ dim U."""
    F = field_of_order(q)
    b = smallest_prime_divisor(n)
    explicit = _explicit_ok(n, q) if explicit is None else explicit
    if explicit:
        fam: list = list(subfield_conjugates(n, q, b))
    else:
        fam = [SubfieldConjugate(n, q, b, _mat_tuple(identity(n)), conjugate_count(n, q, b))]
    for k in range(1, n // 2 + 1):
        if k % b == 0:
            continue
        if q ** (k * n) <= budget():
            fam.extend(Stabilizer(U) for U in subspaces(F, n, k))
        else:
            U = subspace_of(F, identity(n)[:k], n)
            fam.append(Stabilizer(U, gaussian_binomial(n, k, q)))
    return fam


@dataclass
class CoverCertificate:
    n: int
    q: int
    family: list
    mode: str  # "full-scan", "charpoly" or "unverified"
    verified: bool
    size: int
    covered: int | None = None
    total: int | None = None
    cases: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        stabs = [
            {"basis": [list(r) for r in d.U.basis], "count": d.count}
            for d in self.family
            if isinstance(d, Stabilizer)
        ]
        conj = [
            {"a": d.a, "g": [list(r) for r in d.g], "count": d.count}
            for d in self.family
            if isinstance(d, SubfieldConjugate)
        ]
        return {
            "kind": "matrix_cover",
            "n": self.n,
            "q": self.q,
            "mode": self.mode,
            "verified": self.verified,
            "size": self.size,
            "covered": self.covered,
            "total": self.total,
            "cases": self.cases,
            "stabilizers": stabs,
            "conjugates": conj,
        }


def _scan_cover(F, n, fam, chunk=1 << 14) -> tuple[int, int]:
    X = all_matrices(F, n)
    covered = 0
    for s in range(0, len(X), chunk):
        block = X[s:s + chunk]
        hit = np.zeros(len(block), dtype=bool)
        for d in fam:
            hit |= membership(F, block, d)
            if hit.all():
                break
        covered += int(hit.sum())
    return covered, len(X)


def charpoly_cases(n: int, q: int) -> dict:
    """Classify every monic degree-n polynomial by the case split of the
    cover argument: an irreducible factor of degree k with b ∤ k gives an
    invariant subspace of dimension min(k, n-k); otherwise every factor
    degree is divisible by b and x lies in a conjugate of M_{n/b}(q^b)."""
    if q**n > budget():
        raise VerificationBudgetExceeded(f"{q**n} characteristic polynomials exceed budget")
    F = field_of_order(q)
    b = smallest_prime_divisor(n)
    cases: dict[str, int] = {}
    for f in monic_polys(F, n):
        degs = [len(g) - 1 for g, _ in irreducible_factors(F, f)]
        if sum(d * m for d, (_, m) in zip(degs, irreducible_factors(F, f))) != n:
            raise AssertionError("factorisation degree mismatch")
        off = [d for d in degs if d % b]
        if off:
            dim = min(off[0], n - off[0])
            assert dim % b and dim <= n // 2
            key = f"stabilizer dim {dim}"
        else:
            key = f"subfield a={b}"
        cases[key] = cases.get(key, 0) + 1
    return dict(sorted(cases.items()))


def build_cover(n: int, q: int) -> CoverCertificate:
    F = field_of_order(q)
    fam = cover_family(n, q)
    size = descriptor_count(fam)
    if size != sigma_formula(n, q):
        raise AssertionError(f"|H| = {size} differs from the formula")
    explicit = all(d.count == 1 for d in fam)
    if explicit and q ** (n * n) <= budget():
        covered, total = _scan_cover(F, n, fam)
        return CoverCertificate(n, q, fam, "full-scan", covered == total, size, covered, total)
    cert = CoverCertificate(n, q, fam, "unverified", False, size)
    try:
        cert.cases = charpoly_cases(n, q)
    except VerificationBudgetExceeded as exc:
        exc.certificate = cert
        raise
    cert.mode = "charpoly"
    cert.verified = sum(cert.cases.values()) == q**n
    cert.total = q ** (n * n)
    return cert


def _family_from_json(doc) -> list:
    F = field_of_order(doc["q"])
    n = doc["n"]
    fam: list = []
    for c in doc["conjugates"]:
        fam.append(SubfieldConjugate(n, doc["q"], c["a"], tuple(tuple(r) for r in c["g"]), c["count"]))
    for st in doc["stabilizers"]:
        U = Subspace(n, F.q, tuple(tuple(r) for r in st["basis"]))
        if subspace_of(F, st["basis"], n) != U:
            raise ValueError("stabilizer basis is not in reduced echelon form")
        fam.append(Stabilizer(U, st["count"]))
    return fam


def verify_cover_certificate(doc: dict) -> dict:
    """Recompute the checks of a matrix-cover certificate; name -> bool."""
    n, q = doc["n"], doc["q"]
    F = field_of_order(q)
    fam = _family_from_json(doc)
    b = smallest_prime_divisor(n)
    checks = {
        "size_matches_formula": descriptor_count(fam) == sigma_formula(n, q) == doc["size"],
        "stabilizer_dims": all(
            d.U.dim <= n // 2 and d.U.dim % b for d in fam if isinstance(d, Stabilizer)
        ),
        "distinct_stabilizers": len({d.U for d in fam if isinstance(d, Stabilizer)})
        == sum(isinstance(d, Stabilizer) for d in fam),
    }
    conj = [d for d in fam if isinstance(d, SubfieldConjugate)]
    if all(d.count == 1 for d in fam):
        keys = {_field_key(F, d.generator) for d in conj}
        checks["distinct_conjugates"] = len(keys) == len(conj)
    if doc["mode"] == "full-scan":
        covered, total = _scan_cover(F, n, fam)
        checks["covers_all"] = covered == total == doc["total"]
    elif doc["mode"] == "charpoly":
        checks["charpoly_split"] = charpoly_cases(n, q) == doc["cases"]
    else:
        checks["verified"] = False
    return checks


def save_certificate(cert: CoverCertificate, path) -> None:
    with open(path, "w") as fh:
        json.dump(cert.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")


# -- brute force --------------------------------------------------------------------


@dataclass
class MatrixCoverSolution:
    n: int
    q: int
    members: list
    size: int
    log: list
    candidates: int
    elements: int


def _bitset(flags) -> int:
    return int.from_bytes(np.packbits(np.asarray(flags, dtype=np.uint8), bitorder="little").tobytes(), "little")


@lru_cache(maxsize=None)
def _membership_sets(n: int, q: int) -> tuple[tuple, tuple[int, ...], int]:
    F = field_of_order(q)
    X = all_matrices(F, n)
    ds = maximal_subrings(n, q, explicit=True)
    if len(ds) > 64:
        raise BudgetExceeded(f"{len(ds)} maximal subrings exceed 64 candidates")
    masks = tuple(_bitset(membership(F, X, d)) for d in ds)
    if len(set(masks)) != len(masks):
        raise AssertionError("two descriptors give the same subring")
    return tuple(ds), masks, len(X)


def brute_force_sigma(n: int, q: int) -> MatrixCoverSolution:
    """Exact minimum cover of M_n(q) by its maximal subrings."""
    ds, masks, size = _membership_sets(n, q)
    universe = (1 << size) - 1
    res = min_set_cover(universe, list(masks))
    return MatrixCoverSolution(n, q, [ds[i] for i in res.chosen], res.size, res.log, len(ds), size)


def exhaust_covers(n: int, q: int, k: int) -> tuple[int, int]:
    """(k-subsets of maximal subrings checked, how many cover M_n(q))."""
    _, masks, size = _membership_sets(n, q)
    return covers_of_size((1 << size) - 1, list(masks), k)


# -- definite unbeatability -----------------------------------------------------------


@dataclass
class Condition:
    passed: bool | None  # None: not evaluated in this mode
    detail: str


@dataclass
class UnbeatabilityReport:
    n: int
    q: int
    mode: str  # "elementwise" or "counting"
    conditions: dict[str, Condition]
    checks: dict[str, Condition] = field(default_factory=dict)
    # pairs (i, j) of H-indices with a claimed empty Π ∩ H_i ∩ H_j
    family: list = field(default_factory=list)
    pi: list = field(default_factory=list)
    overlaps: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in [*self.conditions.values(), *self.checks.values()])

    def reverify_pair(self, i: int, j: int) -> int:
        """Recount |Π ∩ H_i ∩ H_j| from scratch, element by element."""
        Hi, Hj = self.family[i], self.family[j]
        return sum(
            subring_membership(p.array(), Hi) and subring_membership(p.array(), Hj) for p in self.pi
        )


def second_prime(n: int) -> int:
    ps = prime_factors(n)
    if len(ps) < 2:
        raise ValueError(f"{n} has a single prime divisor")
    return ps[1]


def counting_bounds(n: int, q: int) -> dict[str, tuple[int, Fraction]]:
    """For each H-shape: (|GL(n/c, q^c)|, |Π ∩ H|) from the closed forms."""
    b = smallest_prime_divisor(n)
    c = second_prime(n)
    lhs = gl_order(n // c, q**c)

    def cyc(m):  # |GL(m,q)| / (|GL(1,q^m)| m)
        return Fraction(gl_order(m, q), (q**m - 1) * m)

    out = {}
    out["conjugate"] = (lhs, Fraction(gl_order(n // b, q**b) * b, (q**n - 1) * n) * euler_phi(q**n - 1))
    for k in range(1, n):
        if 2 * k < n and k % b:
            val = cyc(k) * cyc(n - k) * euler_phi(q**k - 1) * euler_phi(q ** (n - k) - 1)
            out[f"stabilizer dim {k}"] = (lhs, val)
    if n % 4 == 2:
        h = n // 2
        out[f"stabilizer dim {h}"] = (lhs, q ** (n * n // 4) * cyc(h) * euler_phi(q**h - 1))
        try:
            out[f"stabilizer dim {h}, all bases"] = (lhs, Fraction(pi3_stabilizer_count(n, q)))
        except BudgetExceeded:
            pass
    return out


def pi3_stabilizer_count(n: int, q: int) -> int:
    """|Π₃ ∩ M(U)| for one n/2-subspace U, counting every basis choice.

    With S the Singer generator on U and S' the induced map on V/U, an
    element [[S, B], [0, S']] of M(U) has type T_{n/2} iff B lies in
    T + {SY - YS'} for an invertible T with T S' = S T.  Hence the count
    is (#Singer generators) * |class of S| * (q^h - 1) * |image of Y -> SY - YS|,
    valid when no nonzero intertwiner lies in that image (asserted).
    """
    if n % 4 != 2:
        raise ValueError("type T_{n/2} needs n ≡ 2 mod 4")
    h = n // 2
    if q ** (h * h) > budget():
        raise BudgetExceeded("h x h matrices exceed budget")
    F = field_of_order(q)
    S = companion(F, primitive_poly(F, h))
    Y = all_matrices(F, h)
    L = F.matsub(F.matmul(S, Y), F.matmul(Y, S))
    image = set(encode_matrices(F, L).tolist())
    kernel = Y[(L == 0).all(axis=(1, 2))]
    assert len(kernel) == q**h, "centralizer of a Singer generator is not a field"
    if len(image & set(encode_matrices(F, kernel).tolist())) != 1:
        raise AssertionError("intertwiners meet the commutator image")
    singers = singer_cycle_count(h, q) * euler_phi(q**h - 1)
    klass = gl_order(h, q) // (q**h - 1)
    return singers * klass * (q**h - 1) * len(image)


def pi3_all_bases(q: int) -> dict:
    """n = 2: every P [[s, 1], [0, s]] P^-1 over all bases P; U -> element codes."""
    F = field_of_order(q)
    out: dict = {}
    gens = singer_generators(1, q)
    for P in general_linear(F, 2):
        Pinv = mat_inv(F, P)
        U = subspace_of(F, P[:, :1].T, 2)
        for s in gens:
            blk = np.array([[s[0, 0], 1], [0, s[0, 0]]], dtype=np.int64)
            x = F.matmul(F.matmul(P, blk), Pinv)
            out.setdefault(U, set()).add(int(encode_matrices(F, x)))
    return out


def _kinds_expected(p: PiElement, n: int) -> tuple[set, set]:
    """(subspaces whose stabilizers contain p, primes a whose conjugates may)."""
    primes = set(prime_factors(n))
    if p.kind == "T0":
        return set(), primes
    if p.kind == "Tk":
        return {p.U, p.W}, {a for a in primes if p.k % a == 0}
    return {p.U}, {a for a in primes if (n // 2) % a == 0}


def check_unbeatable(n: int, q: int, mode: str | None = None) -> UnbeatabilityReport:
    if mode is None:
        mode = "elementwise" if q ** (n * n) <= budget() and n <= 4 else "counting"
    if mode == "counting":
        return _unbeatable_counting(n, q)
    if mode != "elementwise":
        raise ValueError(f"unknown mode {mode!r}")
    return _unbeatable_elementwise(n, q)


def _unbeatable_counting(n, q) -> UnbeatabilityReport:
    b = smallest_prime_divisor(n)
    conds = {k: Condition(None, "not evaluated in counting mode") for k in ("1", "2", "3")}
    if len(prime_factors(n)) < 2:
        conds["4"] = Condition(None, "n is a prime power; counting bound needs a second prime")
        return UnbeatabilityReport(n, q, "counting", conds)
    rows = counting_bounds(n, q)
    bad = []
    parts = []
    for shape, (lhs, rhs) in rows.items():
        if rhs.denominator != 1:
            bad.append(f"{shape}: non-integral |Π∩H| = {rhs}")
        elif not lhs < rhs:
            bad.append(f"{shape}: {lhs} >= {rhs}")
        parts.append(f"{shape}: {lhs} < {rhs}")
    c = second_prime(n)
    detail = f"|GL({n // c},{q}^{c})| vs |Π∩H|; " + "; ".join(parts)
    conds["4"] = Condition(not bad, detail + ("" if not bad else " FAIL " + "; ".join(bad)))
    return UnbeatabilityReport(n, q, "counting", conds)


def _unbeatable_elementwise(n, q) -> UnbeatabilityReport:
    F = field_of_order(q)
    b = smallest_prime_divisor(n)
    pi = build_pi(n, q)
    P = pi_array(pi)
    H = cover_family(n, q, explicit=True)
    allmax = maximal_subrings(n, q, explicit=True)
    K = [d for d in allmax if not (isinstance(d, Stabilizer) and 2 * d.U.dim > n)]
    hset = set(H)
    KminusH = [d for d in K if d not in hset]

    memH = np.array([membership(F, P, d) for d in H])
    conds: dict[str, Condition] = {}
    uncovered = np.flatnonzero(~memH.any(axis=0))
    conds["1"] = Condition(
        len(uncovered) == 0,
        f"{len(pi)} elements of Π, {len(uncovered)} outside the union of H",
    )
    empty = np.flatnonzero(~memH.any(axis=1))
    conds["2"] = Condition(len(empty) == 0, f"{len(H)} members of H, {len(empty)} miss Π")
    inter = memH.astype(np.int64) @ memH.T.astype(np.int64)
    overlaps = {
        (int(i), int(j)): int(inter[i, j]) for i, j in combinations(range(len(H)), 2) if inter[i, j]
    }
    conds["3"] = Condition(
        not overlaps,
        f"{len(H) * (len(H) - 1) // 2} pairs, {len(overlaps)} with common Π elements",
    )
    sizes = memH.sum(axis=1)
    if KminusH:
        memK = np.array([membership(F, P, d) for d in KminusH]).sum(axis=1)
        worst = int(memK.max())
        conds["4"] = Condition(
            worst <= int(sizes.min()),
            f"|K \\ H| = {len(KminusH)}, max |Π∩K| = {worst}, min |Π∩H| = {int(sizes.min())}",
        )
    else:
        conds["4"] = Condition(True, "K \\ H is empty (vacuous)")

    # which maximal subrings contain each Π element, against the type lemmas
    mem_all = np.array([membership(F, P, d) for d in allmax])
    wrong = []
    for idx, p in enumerate(pi):
        stabs, primes = _kinds_expected(p, n)
        for di in np.flatnonzero(mem_all[:, idx]):
            d = allmax[di]
            if isinstance(d, Stabilizer):
                if d.U not in stabs:
                    wrong.append((idx, d.label))
            elif d.a not in primes:
                wrong.append((idx, d.label))
        got_stabs = {allmax[di].U for di in np.flatnonzero(mem_all[:, idx]) if isinstance(allmax[di], Stabilizer)}
        if got_stabs != stabs:
            wrong.append((idx, "missing expected stabilizer"))
    checks = {
        "type containment": Condition(not wrong, f"{len(wrong)} unexpected memberships" + (f", first {wrong[0]}" if wrong else ""))
    }
    return UnbeatabilityReport(n, q, "elementwise", conds, checks, H, pi, overlaps)


# -- further concrete checks ------------------------------------------------------------


def singer_uniqueness(n: int, q: int) -> Condition:
    """Each Singer generator lies in exactly one conjugate of M_{n/a}(q^a) per prime a | n."""
    F = field_of_order(q)
    S = singer_generators(n, q)
    bad = []
    for a in prime_factors(n):
        conj = subfield_conjugates(n, q, a)
        mem = np.array([membership(F, S, d) for d in conj]).sum(axis=0)
        bad.extend((a, int(i), int(mem[i])) for i in np.flatnonzero(mem != 1))
    return Condition(not bad, f"{len(S)} generators checked" + (f"; counts {bad[:3]}" if bad else ""))


def centralizer_size(F, x) -> int:
    G = general_linear(F, x.shape[0])
    return int((F.matmul(G, x) == F.matmul(x, G)).all(axis=(-1, -2)).sum())


def centralizer_check(n: int, q: int) -> Condition:
    """|C_GL(x)| = (q^k - 1)(q^(n-k) - 1) for every type-Tk element."""
    F = field_of_order(q)
    bad = []
    tk = [p for p in build_pi(n, q) if p.kind == "Tk"]
    for p in tk:
        want = (q**p.k - 1) * (q ** (n - p.k) - 1)
        got = centralizer_size(F, p.array())
        if got != want:
            bad.append((p.matrix, got, want))
    return Condition(bool(tk) and not bad, f"{len(tk)} type-Tk elements" + (f"; mismatches {bad[:2]}" if bad else ""))


def half_block_check(n: int, q: int) -> Condition:
    """Every c in GL(n,q) commuting with a type-T_{n/2} element x is, in the
    U ⊕ U' basis, block upper triangular with both diagonal blocks powers
    of the Singer generator of x."""
    F = field_of_order(q)
    h = n // 2
    G = general_linear(F, n)
    bad = []
    elems = [p for p in build_pi(n, q) if p.kind == "Thalf"]
    for p in elems:
        x = p.array()
        P = _basis_change(p.U, p.W)
        Pinv = mat_inv(F, P)
        S = F.matmul(F.matmul(Pinv, x), P)[:h, :h]
        powers = {int(encode_matrices(F, mat_pow(F, S, e))) for e in range(q**h - 1)}
        comm = G[(F.matmul(G, x) == F.matmul(x, G)).all(axis=(-1, -2))]
        for c in comm:
            B = F.matmul(F.matmul(Pinv, c), P)
            if B[h:, :h].any():
                bad.append("lower block nonzero")
            elif int(encode_matrices(F, B[:h, :h])) not in powers or int(encode_matrices(F, B[h:, h:])) not in powers:
                bad.append("diagonal block not a Singer power")
    return Condition(bool(elems) and not bad, f"{len(elems)} type-T_{{n/2}} elements" + (f"; {bad[0]}" if bad else ""))
