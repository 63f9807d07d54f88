import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from rsfpl.patterns import (
    LinkPattern,
    apply_e,
    basis_index,
    catalan,
    check_tl_relations,
    enumerate_link_patterns,
    matmul,
    operator_matrix,
    rotate_pattern,
)


def brute_force_noncrossing(n):
    """All perfect matchings of 1..2n, filtered by an independent crossing test."""

    def matchings(points):
        if not points:
            yield []
            return
        a = points[0]
        for k in range(1, len(points)):
            for rest in matchings(points[1:k] + points[k + 1:]):
                yield [(a, points[k])] + rest

    out = []
    for m in matchings(list(range(1, 2 * n + 1))):
        if any(a < b < c < d for a, c in m for b, d in m):
            continue
        match = [0] * (2 * n)
        for p, q in m:
            match[p - 1], match[q - 1] = q, p
        out.append(tuple(match))
    return sorted(out)


def pi(n, *pairs):
    return LinkPattern.from_pairs(n, pairs)


@st.composite
def patterns_and_index(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    p = draw(st.sampled_from(enumerate_link_patterns(n)))
    i = draw(st.integers(1, 2 * n))
    return p, i


def test_n0_convention():
    assert enumerate_link_patterns(0) == (LinkPattern(0, ()),)
    assert catalan(0) == 1


def test_small_bases():
    assert enumerate_link_patterns(1) == (pi(1, (1, 2)),)
    b2 = enumerate_link_patterns(2)
    assert b2 == (pi(2, (1, 2), (3, 4)), pi(2, (1, 4), (2, 3)))
    assert len(enumerate_link_patterns(3)) == 5


@pytest.mark.parametrize("n", range(1, 6))
def test_matches_brute_force(n):
    assert [p.match for p in enumerate_link_patterns(n)] == brute_force_noncrossing(n)


@pytest.mark.parametrize("n", range(0, 9))
def test_catalan_count(n):
    assert len(enumerate_link_patterns(n)) == catalan(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_every_pattern_valid(n):
    for p in enumerate_link_patterns(n):
        assert p.is_valid()
        for q in range(1, 2 * n + 1):
            assert p.partner(p.partner(q)) == q != p.partner(q)


def test_invalid_patterns_detected():
    assert not LinkPattern(2, (3, 4, 1, 2)).is_valid()  # crossing
    assert not LinkPattern(2, (1, 2, 4, 3)).is_valid()  # fixed point
    with pytest.raises(ValueError):
        LinkPattern.from_json({"n": 2, "match": [3, 4, 1, 2]})


def test_json_round_trip():
    p = pi(3, (1, 6), (2, 5), (3, 4))
    assert json.loads(json.dumps(p.to_json())) == {"n": 3, "match": [6, 5, 4, 3, 2, 1]}
    assert LinkPattern.from_json(json.dumps(p.to_json())) == p


def test_e_action_n2():
    p1, p2 = enumerate_link_patterns(2)
    for i in (1, 3):
        assert apply_e(i, p1) == p1
        assert apply_e(i, p2) == p1
    # joining 2-3 (or 4-1) always lands on the second pattern
    for i in (2, 4):
        assert apply_e(i, p1) == p2
        assert apply_e(i, p2) == p2


def test_e_wraps_cyclically():
    p = pi(3, (1, 2), (3, 4), (5, 6))
    assert apply_e(6, p) == pi(3, (6, 1), (2, 5), (3, 4))


def test_e_index_out_of_range():
    with pytest.raises(IndexError):
        apply_e(0, pi(1, (1, 2)))
    with pytest.raises(IndexError):
        apply_e(5, pi(2, (1, 2), (3, 4)))


@given(patterns_and_index())
def test_e_idempotent_and_closed(args):
    p, i = args
    q = apply_e(i, p)
    assert q.is_valid()
    assert q in basis_index(p.n)
    assert apply_e(i, q) == q
    assert q.partner(i) == i % (2 * p.n) + 1


@given(patterns_and_index(), st.integers(-20, 20))
def test_rotation_group_action(args, k):
    p, _ = args
    n = p.n
    assert rotate_pattern(p, 0) == p
    assert rotate_pattern(p, 2 * n) == p
    assert rotate_pattern(rotate_pattern(p, 1), 2 * n - 1) == p
    assert rotate_pattern(rotate_pattern(p, k), -k) == p
    assert rotate_pattern(p, k).is_valid()


def test_rotate_n2():
    p1, p2 = enumerate_link_patterns(2)
    assert rotate_pattern(p1, 1) == p2


@pytest.mark.parametrize("n", range(1, 6))
def test_operator_matrices(n):
    basis = enumerate_link_patterns(n)
    ones = [1] * len(basis)
    for i in range(1, 2 * n + 1):
        m = operator_matrix(i, basis).entries
        for j in range(len(basis)):
            assert sum(row[j] for row in m) == 1
        assert matmul([ones], m) == (tuple(ones),)
        assert matmul(m, m) == m


def test_operator_matrix_n2():
    m = operator_matrix(1, enumerate_link_patterns(2))
    assert m.entries == ((1, 1), (0, 0))
    assert m.column_images() == [0, 0]


def test_operator_matrix_rejects_noncanonical_basis():
    basis = list(enumerate_link_patterns(3))
    basis[0], basis[1] = basis[1], basis[0]
    with pytest.raises(ValueError):
        operator_matrix(1, basis)


@pytest.mark.parametrize("n", range(1, 6))
def test_tl_relations(n):
    report = check_tl_relations(n)
    assert report and all(r.passed for r in report)
    families = {r.family for r in report}
    assert families == ({"idempotent", "braid"} if n == 1 else {"idempotent", "commute", "braid"})


def test_commutation_instance_n2():
    report = check_tl_relations(2)
    assert any(r.family == "commute" and r.indices == (1, 3) and r.passed for r in report)


def test_matmul_against_product_definition():
    a = ((1, 2), (3, 4))
    b = ((0, 1), (1, 0))
    expected = tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )
    assert matmul(a, b) == expected == ((2, 1), (4, 3))


def test_exhaustive_closure_small():
    for n, i in product(range(1, 5), range(1, 9)):
        if i > 2 * n:
            continue
        for p in enumerate_link_patterns(n):
            assert apply_e(i, p) in basis_index(n)
