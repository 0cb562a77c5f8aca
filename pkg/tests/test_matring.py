import json

import numpy as np
import pytest

from ringcover.gfq import (
    BudgetExceeded,
    all_matrices,
    encode_matrices,
    euler_phi,
    field_of_order,
    general_linear,
    mat_inv,
    smallest_prime_divisor,
    subspace_of,
)
from ringcover.matring import (
    NotADivisor,
    Stabilizer,
    SubfieldConjugate,
    VerificationBudgetExceeded,
    brute_force_sigma,
    build_cover,
    build_pi,
    pi3_all_bases,
    pi3_stabilizer_count,
    centralizer_check,
    check_unbeatable,
    conjugate_count,
    counting_bounds,
    embedded_field_generator,
    exhaust_covers,
    half_block_check,
    maximal_subrings,
    membership,
    singer_generator,
    sigma_formula,
    singer_cycle_count,
    singer_uniqueness,
    subfield_conjugates,
    subring_membership,
    verify_cover_certificate,
)

DESK = [(2, 2), (2, 3), (3, 2)]


def test_sigma_formula_values():
    assert sigma_formula(2, 2) == 4
    assert sigma_formula(2, 3) == 7
    assert sigma_formula(3, 2) == 15
    assert sigma_formula(6, 2) == 62 * 56 * 32 // 2 + 1458 == 57010


@pytest.mark.parametrize("n", range(2, 13))
@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_product_term_equals_conjugate_count(n, q):
    b = smallest_prime_divisor(n)
    num = 1
    for i in range(1, n):
        if i % b:
            num *= q**n - q**i
    assert num % b == 0
    assert num // b == conjugate_count(n, q, b)


def test_conjugate_count_values():
    assert conjugate_count(2, 2, 2) == 1
    assert conjugate_count(2, 3, 2) == 3
    assert conjugate_count(3, 2, 3) == 8
    with pytest.raises(NotADivisor):
        conjugate_count(3, 2, 2)


def conjugates_by_full_scan(n, q, a):
    """Distinct conjugate subrings, as element sets, over every g in GL(n, q)."""
    F = field_of_order(q)
    X = all_matrices(F, n)
    D = embedded_field_generator(n, q, a)
    seen = set()
    for g in general_linear(F, n):
        G = F.matmul(F.matmul(g, D), mat_inv(F, g))
        inside = (F.matmul(X, G) == F.matmul(G, X)).all(axis=(1, 2))
        seen.add(np.flatnonzero(inside).tobytes())
    return len(seen)


@pytest.mark.parametrize("n, q, a", [(2, 2, 2), (2, 3, 2), (3, 2, 3)])
def test_conjugate_orbit_matches_full_scan(n, q, a):
    assert conjugates_by_full_scan(n, q, a) == conjugate_count(n, q, a) == len(subfield_conjugates(n, q, a))


@pytest.mark.parametrize("nq, count", [((2, 2), 4), ((2, 3), 7), ((3, 2), 22)])
def test_maximal_subring_counts(nq, count):
    ms = maximal_subrings(*nq)
    assert len(ms) == count
    F = field_of_order(nq[1])
    X = all_matrices(F, nq[0])
    masks = {membership(F, X, d).tobytes() for d in ms}
    assert len(masks) == count  # distinct as sets


def test_maximal_subrings_are_subrings_and_proper():
    F = field_of_order(2)
    X = all_matrices(F, 2)
    codes = encode_matrices(F, X)
    for d in maximal_subrings(2, 2):
        inside = membership(F, X, d)
        S = X[inside]
        assert 0 < len(S) < len(X)
        member_codes = set(codes[inside].tolist())
        for A in S:
            for B in S:
                assert int(encode_matrices(F, (A + B) % 2)) in member_codes
                assert int(encode_matrices(F, F.matmul(A, B))) in member_codes


def test_membership_examples():
    F = field_of_order(2)
    I = np.eye(2, dtype=int)
    for d in maximal_subrings(2, 2):
        assert subring_membership(I, d)
    S = singer_generator(2, 2)
    assert [subring_membership(S, d) for d in maximal_subrings(2, 2)] == [False, False, False, True]
    U = subspace_of(F, [[1, 0]], 2)
    assert subring_membership(np.array([[1, 1], [0, 1]]), Stabilizer(U))
    assert not subring_membership(np.array([[1, 0], [1, 1]]), Stabilizer(U))


def test_descriptor_validation():
    F = field_of_order(2)
    with pytest.raises(ValueError):
        Stabilizer(subspace_of(F, [[1, 0], [0, 1]], 2))
    with pytest.raises(ValueError):
        SubfieldConjugate(3, 2, 2, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))


@pytest.mark.parametrize("n, q", [(1, 2), (1, 5), (2, 2), (3, 2), (2, 3), (3, 3), (4, 2)])
def test_singer_generator_order(n, q):
    F = field_of_order(q)
    S = singer_generator(n, q)
    from ringcover.gfq import multiplicative_order

    assert multiplicative_order(F, S) == q**n - 1


@pytest.mark.parametrize("nq, sizes", [((2, 2), (2, 0, 3)), ((3, 2), (48, 14, 0)), ((2, 3), (12, 0, 7)), ((4, 2), None)])
def test_pi_sizes(nq, sizes):
    pi = build_pi(*nq)
    n, q = nq
    t0 = sum(p.kind == "T0" for p in pi)
    assert t0 == singer_cycle_count(n, q) * euler_phi(q**n - 1)
    if sizes:
        assert (t0, sum(p.kind == "Tk" for p in pi), sum(p.kind == "Thalf" for p in pi)) == sizes
    else:
        assert not any(p.kind == "Thalf" for p in pi)


@pytest.mark.parametrize("nq", DESK)
def test_cover_certificate_full_scan(nq, tmp_path):
    cert = build_cover(*nq)
    assert cert.mode == "full-scan" and cert.verified
    assert cert.size == sigma_formula(*nq) == len(cert.family)
    assert cert.covered == cert.total == nq[1] ** (nq[0] ** 2)
    doc = json.loads(json.dumps(cert.to_json()))
    assert all(verify_cover_certificate(doc).values())
    doc["stabilizers"] = doc["stabilizers"][1:]
    doc["size"] -= 1
    assert not all(verify_cover_certificate(doc).values())


def test_cover_certificate_charpoly_mode():
    cert = build_cover(6, 2)
    assert cert.mode == "charpoly" and cert.verified and cert.size == 57010
    assert sum(cert.cases.values()) == 2**6
    assert all(verify_cover_certificate(cert.to_json()).values())


def test_cover_over_budget(monkeypatch):
    monkeypatch.setenv("RINGCOVER_BUDGET", "1000")
    with pytest.raises(VerificationBudgetExceeded) as err:
        build_cover(5, 5)
    cert = err.value.certificate
    assert cert is not None and not cert.verified and cert.size == sigma_formula(5, 5)


@pytest.mark.parametrize("nq", DESK)
def test_brute_force_agrees_with_formula(nq):
    sol = brute_force_sigma(*nq)
    assert sol.size == sigma_formula(*nq)
    assert sol.log[-1] == (sol.size, sol.log[-1][1], True)


def test_small_exhaustions():
    assert exhaust_covers(2, 2, 3) == (4, 0)
    assert exhaust_covers(2, 3, 6) == (7, 0)


def test_brute_force_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_sigma(4, 2)  # 121 candidate subrings


@pytest.mark.parametrize("nq", DESK + [(4, 2)])
def test_unbeatable_elementwise(nq):
    r = check_unbeatable(*nq)
    assert r.mode == "elementwise"
    assert r.passed, r.conditions
    assert all(c.passed for c in r.conditions.values())
    assert r.overlaps == {}
    # honest witnesses: recount a few pairs from scratch
    for i, j in [(0, 1), (0, len(r.family) - 1), (1, 2)]:
        assert r.reverify_pair(i, j) == 0


def test_unbeatable_counting():
    for n, q in [(6, 2), (6, 3), (10, 2), (12, 2)]:
        r = check_unbeatable(n, q)
        assert r.mode == "counting"
        assert r.conditions["4"].passed, r.conditions["4"].detail
    rows = counting_bounds(6, 2)
    assert rows["conjugate"] == (3528, 34560)
    assert rows["stabilizer dim 1"] == (3528, 1935360)
    assert rows["stabilizer dim 3"] == (3528, 24576)


@pytest.mark.parametrize("nq", DESK)
def test_singer_uniqueness(nq):
    assert singer_uniqueness(*nq).passed


def test_centralizer_and_blocks():
    assert centralizer_check(3, 2).passed
    assert half_block_check(2, 2).passed
    assert half_block_check(2, 3).passed


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pi3_stabilizer_count_matches_all_bases(q):
    per_u = pi3_all_bases(q)
    assert len(per_u) == q + 1
    assert {len(v) for v in per_u.values()} == {pi3_stabilizer_count(2, q)}


@pytest.mark.parametrize("q", [2, 3])
def test_canonical_half_elements_lie_in_all_bases_set(q):
    everything = set().union(*pi3_all_bases(q).values())
    F = field_of_order(q)
    half = [p.matrix for p in build_pi(2, q) if p.kind == "Thalf"]
    assert half and all(int(encode_matrices(F, m)) in everything for m in half)


def test_pi3_count_n6_q2():
    # 48 Singer generators, class size 24, 7 intertwiners, 2^6 commutators
    assert pi3_stabilizer_count(6, 2) == 48 * 24 * 7 * 64
