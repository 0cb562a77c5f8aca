from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcover.gfq import (
    BudgetExceeded,
    NotPrime,
    char_poly,
    companion,
    count_N,
    euler_phi,
    field_of_order,
    gaussian_binomial,
    gcd_identity_holds,
    general_linear,
    gl_order,
    irreducible_factors,
    is_primitive_poly,
    make_field,
    mat_inv,
    poly_mul,
    rank,
    subspaces,
)

QS = [2, 3, 4, 5, 7, 8, 9]


def test_make_field_polynomials():
    assert make_field(2, 1).poly == (1, 1)
    assert make_field(2, 2).poly == (1, 1, 1)
    assert make_field(3, 1).q == 3
    assert make_field(3, 2).poly == (2, 1, 1)
    with pytest.raises(NotPrime):
        make_field(4, 1)


@pytest.mark.parametrize("q", QS)
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    A = np.arange(q)
    add, mul = F.add_t, F.mul_t
    assert (add[add[A[:, None], A[None, :]][:, :, None], A[None, None, :]]
            == add[A[:, None, None], add[A[None, :], A[:, None]].T[None, :, :]]).all()
    for a, b, c in product(range(q), repeat=3):
        assert mul[mul[a, b], c] == mul[a, mul[b, c]]
        assert mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, q - 1) == 1
    assert (mul == mul.T).all() and (add == add.T).all()
    # primitive root generates the multiplicative group
    assert len({F.pow(F.primitive, e) for e in range(q - 1)}) == q - 1


@settings(max_examples=60, deadline=None)
@given(q=st.sampled_from([16, 25, 27, 32, 49]), data=st.data())
def test_field_axioms_sampled(q, data):
    F = field_of_order(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    if a:
        assert F.mul(F.inv(a), a) == 1


def test_gl_order_by_enumeration():
    assert gl_order(1, 7) == 6
    assert len(general_linear(field_of_order(2), 2)) == gl_order(2, 2) == 6
    assert len(general_linear(field_of_order(2), 3)) == gl_order(3, 2) == 168
    assert len(general_linear(field_of_order(3), 2)) == gl_order(2, 3) == 48
    assert len(general_linear(field_of_order(4), 2)) == gl_order(2, 4) == 180


def q_pascal(n, k, q):
    if k == 0 or k == n:
        return 1
    return q_pascal(n - 1, k - 1, q) + q**k * q_pascal(n - 1, k, q)


@pytest.mark.parametrize("n", range(0, 9))
@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gaussian_binomial_pascal_and_symmetry(n, q):
    for k in range(n + 1):
        g = gaussian_binomial(n, k, q)
        assert g == q_pascal(n, k, q)
        assert g == gaussian_binomial(n, n - k, q)


def test_gaussian_binomial_values():
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(6, 3, 2) == 1395
    assert gaussian_binomial(7, 0, 5) == 1


@pytest.mark.parametrize("n, q, k", [(2, 2, 1), (3, 2, 1), (3, 2, 2), (4, 2, 2), (3, 3, 1), (2, 4, 1), (4, 3, 2), (3, 2, 3), (3, 2, 0)])
def test_subspace_enumeration_matches_count(n, q, k):
    F = field_of_order(q)
    subs = subspaces(F, n, k)
    assert len(subs) == gaussian_binomial(n, k, q)
    assert len(set(subs)) == len(subs)
    for U in subs:
        assert U.dim == k
        if k:
            assert rank(F, U.basis_array()) == k


def test_subspace_budget(monkeypatch):
    monkeypatch.setenv("RINGCOVER_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        subspaces(field_of_order(2), 8, 4)


def test_count_N_values():
    assert count_N(2, 2) == (2, 3)
    assert count_N(3, 2) == (3, 7)
    assert count_N(6, 2) == (2, 63 + 1395)


def test_euler_phi():
    assert [euler_phi(m) for m in (1, 3, 7, 8, 12, 63)] == [1, 2, 6, 4, 4, 36]


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gl_lower_bound(m, q):
    assert q ** (m * m) <= (m + 1) * gl_order(m, q)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gcd_identity(q):
    for a in range(1, 13):
        for k in range(1, 13):
            assert gcd_identity_holds(q, a, k)


def leibniz_char_poly(F, A):
    n = A.shape[0]
    total = [0] * (n + 1)
    for perm in permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = [1]
        for i in range(n):
            entry = [F.neg(int(A[i, perm[i]])), 1 if perm[i] == i else 0]
            term = poly_mul(F, term, entry)
        term = term + [0] * (n + 1 - len(term))
        for t, c in enumerate(term):
            total[t] = F.add(total[t], F.neg(c) if inversions % 2 else c)
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total


@settings(max_examples=80, deadline=None)
@given(q=st.sampled_from([2, 3, 4, 5]), n=st.integers(1, 4), seed=st.integers(0, 2**31))
def test_char_poly_matches_determinant_expansion(q, n, seed):
    F = field_of_order(q)
    A = np.random.default_rng(seed).integers(0, q, (n, n))
    assert char_poly(F, A) == leibniz_char_poly(F, A)


def test_char_poly_examples():
    F = field_of_order(2)
    assert char_poly(F, np.eye(2, dtype=int)) == [1, 0, 1]  # (x+1)^2
    C = companion(F, [1, 1, 1])
    assert char_poly(F, C) == [1, 1, 1]
    assert irreducible_factors(F, [1, 1, 1]) == [((1, 1, 1), 1)]
    assert char_poly(F, np.zeros((3, 3), dtype=int)) == [0, 0, 0, 1]
    assert irreducible_factors(F, [1, 0, 1]) == [((1, 1), 2)]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_factorisation_reassembles(q):
    F = field_of_order(q)
    for f in product(range(q), repeat=3):
        f = list(f) + [1]
        prod_ = [1]
        for g, m in irreducible_factors(F, f):
            for _ in range(m):
                prod_ = poly_mul(F, prod_, list(g))
        assert prod_ == f


def test_defining_polynomials_primitive():
    for q in QS:
        F = field_of_order(q)
        assert is_primitive_poly(make_field(F.p, 1), list(F.poly))


def test_matrix_inverse():
    F = field_of_order(4)
    for M in general_linear(F, 2)[:50]:
        assert (F.matmul(M, mat_inv(F, M)) == np.eye(2, dtype=int)).all()


def test_zero_subspace_span():
    from ringcover.gfq import membership_table, span_vectors

    F = field_of_order(3)
    (Z,) = subspaces(F, 2, 0)
    assert span_vectors(F, Z).tolist() == [[0, 0]]
    assert membership_table(F, Z).sum() == 1
