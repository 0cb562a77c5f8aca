from itertools import combinations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringcover.catalog import field_ring
from ringcover.lattice import (
    NotAnIdeal,
    automorphisms,
    canonical_table_f2,
    closure,
    gl2_matrices,
    ideals,
    is_isomorphic,
    jacobson_radical,
    maximal_subrings,
    quotient,
    subrings,
)
from ringcover.ring import (
    BoundExceeded,
    FiniteRing,
    bits,
    direct_sum,
    from_tables,
    is_closed,
    make_ring,
    mask_of,
    zero_ring,
)

from conftest import f2_algebra


def z_mod(n):
    return make_ring([n], [[[1]]])


def brute_subrings(R):
    return sorted(
        (m for m in range(1, 1 << R.order) if m & 1 and is_closed(R, m)),
        key=lambda m: (m.bit_count(), m),
    )


def brute_ideals(R):
    out = []
    for m in brute_subrings(R):
        el = bits(m)
        if all(R.mul(r, s) in el and R.mul(s, r) in el for r in range(R.order) for s in el):
            out.append(m)
    return out


SMALL = [
    z_mod(8),
    z_mod(6),
    zero_ring([2, 2]),
    direct_sum(z_mod(2), z_mod(2)),
    direct_sum(z_mod(2), zero_ring([2, 2])),
    field_ring(4),
    field_ring(8),
    direct_sum(z_mod(2), z_mod(4)),
]


@pytest.mark.parametrize("R", SMALL, ids=lambda R: f"order{R.order}-{R.moduli}")
def test_subrings_match_subset_scan(R):
    assert [S.members for S in subrings(R)] == brute_subrings(R)


@pytest.mark.parametrize("R", SMALL, ids=lambda R: f"order{R.order}-{R.moduli}")
def test_ideals_match_subset_scan(R):
    assert [I.members for I in ideals(R)] == brute_ideals(R)


def test_maximal_subrings_of_gf4():
    # GF(4) has proper subrings {0} and GF(2) = {0, 1}
    R = field_ring(4)
    ms = maximal_subrings(R)
    assert len(ms) == 1 and len(ms[0]) == 2


def test_closure_generates():
    R = z_mod(8)
    assert closure(R, [2]) == mask_of([0, 2, 4, 6])
    assert closure(R, [3]) == R.full_mask


def test_bound_enforced():
    with pytest.raises(BoundExceeded):
        subrings(z_mod(8), bound=4)


def test_quotient_projection_is_homomorphism():
    R = z_mod(8)
    I = mask_of([0, 4])
    Q, proj = quotient(R, I)
    assert Q.order == 4
    assert is_isomorphic(Q, z_mod(4)) is not None
    for a, b in product(range(8), repeat=2):
        assert proj[R.add(a, b)] == Q.add(proj[a], proj[b])
        assert proj[R.mul(a, b)] == Q.mul(proj[a], proj[b])


def test_quotient_rejects_non_ideal():
    R = direct_sum(z_mod(2), z_mod(2))
    diag = mask_of([0, 3])  # {(0,0), (1,1)} is a subring, not an ideal
    assert is_closed(R, diag)
    with pytest.raises(NotAnIdeal):
        quotient(R, diag)


@pytest.mark.parametrize(
    "R, size",
    [(z_mod(8), 4), (z_mod(6), 1), (zero_ring([2, 2]), 4), (field_ring(8), 1), (z_mod(9), 3)],
)
def test_jacobson_radical_sizes(R, size):
    assert len(jacobson_radical(R)) == size


def test_isomorphism_found_after_relabelling(rng):
    R = direct_sum(z_mod(2), field_ring(4))
    perm = np.concatenate([[0], 1 + rng.permutation(R.order - 1)])
    inv = np.argsort(perm)
    S, _ = from_tables(perm[R.add_table[np.ix_(inv, inv)]], perm[R.mul_table[np.ix_(inv, inv)]])
    f = is_isomorphic(R, S)
    assert f is not None
    for a, b in product(range(R.order), repeat=2):
        assert f(R.mul(a, b)) == S.mul(f(a), f(b))
        assert f(R.add(a, b)) == S.add(f(a), f(b))


def test_non_isomorphic_same_order():
    assert is_isomorphic(z_mod(4), direct_sum(z_mod(2), z_mod(2))) is None
    assert is_isomorphic(field_ring(4), direct_sum(z_mod(2), z_mod(2))) is None


@pytest.mark.parametrize(
    "R, count",
    [(field_ring(4), 2), (field_ring(8), 3), (zero_ring([2, 2]), 6), (z_mod(8), 1), (direct_sum(z_mod(2), z_mod(2)), 2)],
)
def test_automorphism_counts(R, count):
    assert len(automorphisms(R)) == count


def test_gl2_sizes():
    assert [len(gl2_matrices(k)) for k in (1, 2, 3)] == [1, 6, 168]


def _random_f2_algebra(k, rng):
    from ringcover.covering import random_algebra_f2

    return random_algebra_f2(k, rng)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), which=st.integers(0, 167))
def test_canonical_form_is_basis_invariant(seed, which):
    rng = np.random.default_rng(seed)
    R = _random_f2_algebra(3, rng)
    P = gl2_matrices(3)[which]
    # change of basis f_i = sum_a P[a, i] e_a
    c = R.table
    prod_ = np.einsum("ai,bj,abt->ijt", P, P, c) % 2
    from ringcover.lattice import _inv2

    new = np.einsum("st,ijt->ijs", _inv2(P), prod_) % 2
    S = FiniteRing([2, 2, 2], new)
    assert canonical_table_f2(S.table) == canonical_table_f2(R.table)
    assert is_isomorphic(R, S) is not None


def test_canonical_form_separates_classes():
    a = f2_algebra([1, 0, 0, 2], 2)  # GF(2) + GF(2)
    b = f2_algebra([1, 2, 2, 0], 2)  # GF(2)[x]/(x^2)
    assert canonical_table_f2(a.table) != canonical_table_f2(b.table)
