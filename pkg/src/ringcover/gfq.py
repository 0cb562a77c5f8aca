"""Finite fields GF(p^d), matrices and subspaces over them, and exact counts.

Field elements are ints ``0..q-1`` holding the base-p digits of their
polynomial representation; polynomials over a field are coefficient
lists, lowest degree first.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from math import gcd, prod

import numpy as np


class NotPrime(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


DEFAULT_BUDGET = 10**6


def budget() -> int:
    """Enumeration budget; raise it with ``RINGCOVER_BUDGET``."""
    return int(os.environ.get("RINGCOVER_BUDGET", DEFAULT_BUDGET))


# -- integers -------------------------------------------------------------------


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
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


def smallest_prime_divisor(n: int) -> int:
    return prime_factors(n)[0]


def prime_power(q: int) -> tuple[int, int]:
    """(p, d) with q = p^d, or ValueError."""
    fs = prime_factors(q) if q > 1 else []
    if len(fs) != 1:
        raise ValueError(f"{q} is not a prime power")
    p, d = fs[0], 0
    while q > 1:
        q //= p
        d += 1
    return p, d


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError("m must be positive")
    out = m
    for p in prime_factors(m):
        out = out // p * (p - 1)
    return out


def gl_order(m: int, q: int) -> int:
    """|GL(m, q)| = prod_{i<m} (q^m - q^i)."""
    return prod(q**m - q**i for i in range(m))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    value, rem = divmod(num, den)
    assert rem == 0, "q-binomial division not exact"
    return value


def count_N(n: int, q: int) -> tuple[int, int]:
    """(b, N(b)): smallest prime b | n and the number of subspaces of
    dimension at most n/2 not divisible by b."""
    if n < 2:
        raise ValueError("n must be at least 2")
    b = smallest_prime_divisor(n)
    total = sum(gaussian_binomial(n, k, q) for k in range(1, n // 2 + 1) if k % b)
    return b, total


# -- fields ---------------------------------------------------------------------


class FieldCtx:
    """GF(p^d) defined by a primitive polynomial over GF(p).

    Built by :func:`make_field`; ``poly`` is monic, lowest degree first.
    """

    def __init__(self, p: int, d: int, poly: tuple[int, ...]):
        self.p = p
        self.d = d
        self.q = p**d
        self.poly = tuple(poly)
        digits = np.array([[(x // p**i) % p for i in range(d)] for x in range(self.q)], dtype=np.int64)
        self._digits = digits
        weights = p ** np.arange(d, dtype=np.int64)
        self.add_t = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg_t = ((-digits) % p) @ weights
        # log / antilog tables through the primitive root x
        q = self.q
        antilog = np.zeros(max(q - 1, 1), dtype=np.int64)
        cur = np.zeros(d, dtype=np.int64)
        cur[0] = 1
        red = np.array(poly[:d], dtype=np.int64)
        for i in range(q - 1):
            antilog[i] = int(cur @ weights)
            top = cur[d - 1]
            cur = np.roll(cur, 1)
            cur[0] = 0
            cur = (cur - top * red) % p
        log = np.full(q, -1, dtype=np.int64)
        log[antilog] = np.arange(q - 1)
        if (log[1:] < 0).any():
            raise ValueError("defining polynomial is not primitive")
        self.antilog = antilog
        self.log = log
        mul = np.zeros((q, q), dtype=np.int64)
        nz = np.arange(1, q)
        mul[1:, 1:] = antilog[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        self.mul_t = mul
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = antilog[(-log[nz]) % (q - 1)]
        self.inv_t = inv

    @property
    def prime_field(self) -> bool:
        return self.d == 1

    def add(self, a, b):
        return int(self.add_t[a, b])

    def sub(self, a, b):
        return int(self.add_t[a, self.neg_t[b]])

    def neg(self, a):
        return int(self.neg_t[a])

    def mul(self, a, b):
        return int(self.mul_t[a, b])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_t[a])

    def pow(self, a, e: int):
        if a == 0:
            return 1 if e == 0 else 0
        return int(self.antilog[(self.log[a] * e) % (self.q - 1)])

    @property
    def primitive(self) -> int:
        """A generator of the multiplicative group."""
        return int(self.antilog[1 % (self.q - 1)]) if self.q > 2 else 1

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.d, self.poly) == (other.p, other.d, other.poly)

    def __hash__(self):
        return hash((self.p, self.d, self.poly))

    # -- vectorised matrix arithmetic ------------------------------------------

    def matmul(self, A, B):
        """Batched matrix product (broadcasts over leading axes)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.prime_field:
            return np.matmul(A, B) % self.p
        terms = self.mul_t[A[..., :, :, None], B[..., None, :, :]]
        out = terms[..., 0, :]
        for t in range(1, terms.shape[-2]):
            out = self.add_t[out, terms[..., t, :]]
        return out

    def matadd(self, A, B):
        return self.add_t[np.asarray(A), np.asarray(B)]

    def matsub(self, A, B):
        return self.add_t[np.asarray(A), self.neg_t[np.asarray(B)]]


def _poly_trim(f):
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def poly_mul(F, f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return _poly_trim(out)


def poly_divmod(F, f, g):
    f = _poly_trim(f)
    g = _poly_trim(g)
    if g == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(f)
    dg = len(g) - 1
    inv_lead = F.inv(g[-1])
    quo = [0] * max(len(f) - dg, 1)
    while len(rem) - 1 >= dg and rem != [0]:
        shift = len(rem) - 1 - dg
        c = F.mul(rem[-1], inv_lead)
        quo[shift] = c
        for i, b in enumerate(g):
            rem[shift + i] = F.sub(rem[shift + i], F.mul(c, b))
        rem = _poly_trim(rem)
        if len(rem) - 1 < dg:
            break
    return _poly_trim(quo), rem


def poly_powmod_x(F, e: int, f):
    """x^e mod f."""
    result = [1]
    base = poly_divmod(F, [0, 1], f)[1]
    while e:
        if e & 1:
            result = poly_divmod(F, poly_mul(F, result, base), f)[1]
        base = poly_divmod(F, poly_mul(F, base, base), f)[1]
        e >>= 1
    return result


def monic_polys(F, degree: int):
    """Monic polynomials of the given degree in coefficient-lex order
    (compared from the x^(degree-1) coefficient down)."""
    for low in product(range(F.q), repeat=degree):
        yield list(reversed(low)) + [1]


def is_primitive_poly(F, f) -> bool:
    m = len(f) - 1
    if f[0] == 0:
        return False
    N = F.q**m - 1
    if poly_powmod_x(F, N, f) != [1]:
        return False
    return all(poly_powmod_x(F, N // r, f) != [1] for r in prime_factors(N)) if N > 1 else True


def primitive_poly(F, degree: int) -> tuple[int, ...]:
    """Smallest primitive polynomial of the given degree over F."""
    for f in monic_polys(F, degree):
        if is_primitive_poly(F, f):
            return tuple(f)
    raise AssertionError("no primitive polynomial found")  # pragma: no cover


@lru_cache(maxsize=None)
def _prime_field(p: int) -> FieldCtx:
    g = next(a for a in range(1, p) if all(pow(a, (p - 1) // r, p) != 1 for r in prime_factors(p - 1))) if p > 2 else 1
    return FieldCtx(p, 1, ((-g) % p, 1))


@lru_cache(maxsize=None)
def make_field(p: int, d: int = 1) -> FieldCtx:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if d < 1:
        raise ValueError("degree must be positive")
    base = _prime_field(p)
    if d == 1:
        return base
    return FieldCtx(p, d, primitive_poly(base, d))


def field_of_order(q: int) -> FieldCtx:
    p, d = prime_power(q)
    return make_field(p, d)


# -- irreducible factors ----------------------------------------------------------


@lru_cache(maxsize=None)
def _irreducibles(F: FieldCtx, degree: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for f in monic_polys(F, degree):
        if _irreducible(F, f):
            out.append(tuple(f))
    return tuple(out)


def _irreducible(F, f) -> bool:
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for g in _irreducibles(F, d):
            if poly_divmod(F, f, list(g))[1] == [0]:
                return False
    return True


def irreducible_factors(F, f) -> list[tuple[tuple[int, ...], int]]:
    """Monic irreducible factorisation of monic ``f`` by trial division."""
    f = _poly_trim(f)
    out = []
    d = 1
    while len(f) - 1 >= 2 * d:
        for g in _irreducibles(F, d):
            mult = 0
            while True:
                quo, rem = poly_divmod(F, f, list(g))
                if rem != [0]:
                    break
                f = quo
                mult += 1
            if mult:
                out.append((g, mult))
        d += 1
    if len(f) > 1:
        out.append((tuple(f), 1))
    return sorted(out, key=lambda t: (len(t[0]), t[0]))


# -- matrices -------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixElement:
    field: FieldCtx
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, F, M):
        M = np.asarray(M, dtype=np.int64)
        return cls(F, tuple(tuple(int(x) for x in row) for row in M))

    @property
    def n(self) -> int:
        return len(self.entries)

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def __matmul__(self, other):
        return MatrixElement.of(self.field, self.field.matmul(self.array(), other.array()))


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def encode_matrices(F, X) -> np.ndarray:
    """Row-major base-q encoding of a batch of n x n matrices."""
    X = np.asarray(X, dtype=np.int64)
    n2 = X.shape[-1] * X.shape[-2]
    w = F.q ** np.arange(n2, dtype=np.int64)
    return X.reshape(*X.shape[:-2], n2) @ w


def all_matrices(F, n: int) -> np.ndarray:
    """Every n x n matrix, in encoding order; shape (q^(n^2), n, n)."""
    total = F.q ** (n * n)
    if total > budget():
        raise BudgetExceeded(f"{total} matrices exceed budget {budget()}")
    idx = np.arange(total, dtype=np.int64)
    digits = (idx[:, None] // (F.q ** np.arange(n * n, dtype=np.int64))[None, :]) % F.q
    return digits.reshape(total, n, n)


def rref(F, M) -> tuple[np.ndarray, list[int]]:
    A = np.array(M, dtype=np.int64)
    rows, cols = A.shape
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i, c]), None)
        if p is None:
            continue
        A[[r, p]] = A[[p, r]]
        inv = F.inv(int(A[r, c]))
        A[r] = F.mul_t[inv, A[r]]
        for i in range(rows):
            if i != r and A[i, c]:
                f = int(A[i, c])
                A[i] = F.add_t[A[i], F.neg_t[F.mul_t[f, A[r]]]]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return A, piv


def rank(F, M) -> int:
    return len(rref(F, M)[1])


def mat_inv(F, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    A, piv = rref(F, np.concatenate([M, identity(n)], axis=1))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return A[:, n:]


def general_linear(F, n: int) -> np.ndarray:
    """All of GL(n, q) as an array (|GL|, n, n), in encoding order."""
    X = all_matrices(F, n)
    keep = np.array([rank(F, x) == n for x in X], dtype=bool) if not F.prime_field else _invertible_mask(F, X)
    return X[keep]


def _invertible_mask(F, X) -> np.ndarray:
    # batched Gaussian elimination over a prime field
    A = X.copy() % F.p
    N, n, _ = A.shape
    ok = np.ones(N, dtype=bool)
    p = F.p
    inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
    for c in range(n):
        has = A[:, c:, c] != 0
        ok &= has.any(axis=1)
        pr = c + np.argmax(has, axis=1)
        rows = np.arange(N)
        top = A[rows, pr].copy()
        A[rows, pr] = A[rows, c]
        A[rows, c] = top
        pv = inv[A[:, c, c]]
        A[:, c] = (A[:, c] * pv[:, None]) % p
        f = A[:, :, c].copy()
        f[:, c] = 0
        A = (A - f[:, :, None] * A[:, c][:, None, :]) % p
    return ok


def mat_pow(F, M, e: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[-1]
    result = np.broadcast_to(identity(n), M.shape).copy()
    base = M.copy()
    while e:
        if e & 1:
            result = F.matmul(result, base)
        base = F.matmul(base, base)
        e >>= 1
    return result


def multiplicative_order(F, M) -> int:
    """Order of an invertible matrix."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[0]
    I = identity(n)
    cur = M.copy()
    k = 1
    while not np.array_equal(cur, I):
        cur = F.matmul(cur, M)
        k += 1
        if k > F.q ** (n * n):
            raise ZeroDivisionError("matrix is not invertible")
    return k


def companion(F, f) -> np.ndarray:
    """Companion matrix of monic f: ones on the subdiagonal, -f_i in the last column."""
    m = len(f) - 1
    C = np.zeros((m, m), dtype=np.int64)
    for i in range(1, m):
        C[i, i - 1] = 1
    for i in range(m):
        C[i, m - 1] = F.neg(f[i])
    return C


def char_poly(F, M) -> list[int]:
    """Monic characteristic polynomial det(xI - M), lowest degree first.

    Hessenberg reduction by similarity, then the standard recurrence.
    """
    H = np.array(M, dtype=np.int64)
    n = H.shape[0]
    for m in range(1, n - 1):
        i = next((r for r in range(m, n) if H[r, m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        t_inv = F.inv(int(H[m, m - 1]))
        for r in range(m + 1, n):
            u = F.mul(int(H[r, m - 1]), t_inv)
            if u:
                H[r] = F.add_t[H[r], F.neg_t[F.mul_t[u, H[m]]]]
                H[:, m] = F.add_t[H[:, m], F.mul_t[u, H[:, r]]]
    polys = [[1]]
    for m in range(1, n + 1):
        # 1-based H[m, m] -> H[m-1, m-1]
        pm = poly_mul(F, [F.neg(int(H[m - 1, m - 1])), 1], polys[m - 1])
        t = 1
        for i in range(1, m):
            t = F.mul(t, int(H[m - i, m - i - 1]))
            coef = F.mul(int(H[m - i - 1, m - 1]), t)
            term = [F.mul(coef, c) for c in polys[m - i - 1]]
            pm = _poly_sub(F, pm, term)
        polys.append(pm)
    return polys[n]


def _poly_sub(F, f, g):
    L = max(len(f), len(g))
    f = list(f) + [0] * (L - len(f))
    g = list(g) + [0] * (L - len(g))
    return _poly_trim([F.sub(a, b) for a, b in zip(f, g)])


# -- subspaces ------------------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """Row space of a reduced-echelon basis (rows are vectors of GF(q)^n)."""

    n: int
    q: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_array(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.n)


def vector_codes(F, V) -> np.ndarray:
    V = np.asarray(V, dtype=np.int64)
    return V @ (F.q ** np.arange(V.shape[-1], dtype=np.int64))


def span_vectors(F, U: Subspace) -> np.ndarray:
    """All q^k vectors of U, shape (q^k, n)."""
    if U.dim == 0:
        return np.zeros((1, U.n), dtype=np.int64)
    coeffs = np.array(list(product(range(F.q), repeat=U.dim)), dtype=np.int64)
    return F.matmul(coeffs, U.basis_array())


def membership_table(F, U: Subspace) -> np.ndarray:
    """Boolean lookup over vector codes 0..q^n-1."""
    inside = np.zeros(F.q**U.n, dtype=bool)
    inside[vector_codes(F, span_vectors(F, U))] = True
    return inside


def subspaces(F, n: int, k: int) -> list[Subspace]:
    """Every k-dimensional subspace of GF(q)^n, as reduced echelon bases."""
    q = F.q
    if q ** (k * n) > budget():
        raise BudgetExceeded(f"q^(kn) = {q ** (k * n)} exceeds budget")
    out = []
    for pivots in combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(pivots[r] + 1, n) if c not in pivots]
        for vals in product(range(q), repeat=len(free)):
            B = np.zeros((k, n), dtype=np.int64)
            for r, c in enumerate(pivots):
                B[r, c] = 1
            for (r, c), v in zip(free, vals):
                B[r, c] = v
            out.append(Subspace(n, q, tuple(tuple(int(x) for x in row) for row in B)))
    return out


def subspace_of(F, vectors, n: int) -> Subspace:
    """Canonical Subspace spanned by the given row vectors."""
    V = np.asarray(vectors, dtype=np.int64).reshape(-1, n)
    A, piv = rref(F, V)
    B = A[: len(piv)]
    return Subspace(n, F.q, tuple(tuple(int(x) for x in row) for row in B))


def complementary(F, U: Subspace, W: Subspace) -> bool:
    if U.dim + W.dim != U.n:
        return False
    stack = np.concatenate([U.basis_array(), W.basis_array()])
    return rank(F, stack) == U.n


def gcd_identity_holds(q: int, a: int, k: int) -> bool:
    return gcd(q**a - 1, q**k - 1) == q ** gcd(a, k) - 1
