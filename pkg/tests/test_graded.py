from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from curvedgraphs.graded import (
    GradedError,
    GradedSpace,
    InnerProduct,
    inverse_pairing,
    koszul_sign,
    perm_sign,
)


def test_space_construction_and_reversion():
    v = GradedSpace.of(2, 1)
    assert v.parities == (0, 0, 1)
    assert v.dim == 3
    pv = v.reversed()
    assert pv.parities == (1, 1, 0)
    assert pv.dim_even == 1 and pv.dim_odd == 2
    assert pv.reversed() == v


def test_space_invariants_enforced():
    with pytest.raises(GradedError):
        GradedSpace(1, 1, (0, 0))
    with pytest.raises(GradedError):
        GradedSpace(1, 0, (0, 1))


def test_koszul_sign_basic_cases():
    # identity permutation
    assert koszul_sign((0, 1, 2), (1, 1, 1)) == 1
    # transposing two odd slots
    assert koszul_sign((1, 0), (1, 1)) == -1
    # transposing odd past even costs nothing
    assert koszul_sign((1, 0), (0, 1)) == 1
    assert koszul_sign((1, 0), (1, 0)) == 1


def test_koszul_sign_rejects_bad_input():
    with pytest.raises(GradedError):
        koszul_sign((0, 1), (1,))
    with pytest.raises(GradedError):
        koszul_sign((0, 0), (1, 1))


@st.composite
def two_perms_and_parities(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    inner = tuple(draw(st.permutations(range(n))))
    outer = tuple(draw(st.permutations(range(n))))
    parities = tuple(draw(st.integers(0, 1)) for _ in range(n))
    return inner, outer, parities


@given(two_perms_and_parities())
def test_koszul_cocycle_rule(data):
    """Multiplicativity under composition: the sign of a composite equals the
    product of the signs, the outer one taken on the permuted parities."""
    inner, outer, parities = data
    n = len(inner)
    composite = tuple(outer[inner[i]] for i in range(n))
    moved = [0] * n
    for i in range(n):
        moved[inner[i]] = parities[i]
    lhs = koszul_sign(composite, parities)
    rhs = koszul_sign(outer, tuple(moved)) * koszul_sign(inner, parities)
    assert lhs == rhs


def test_perm_sign_matches_all_odd_koszul():
    assert perm_sign((2, 0, 1)) == koszul_sign((2, 0, 1), (1, 1, 1))


def test_inner_product_validation():
    v = GradedSpace.of(1, 1)
    with pytest.raises(GradedError):  # not even
        InnerProduct.from_rows(v, [[0, 1], [1, 0]])
    with pytest.raises(GradedError):  # odd block must be antisymmetric
        InnerProduct.from_rows(v, [[1, 0], [0, 1]])
    with pytest.raises(GradedError):  # degenerate
        InnerProduct.from_rows(GradedSpace.of(2, 0), [[1, 0], [0, 0]])


def test_inverse_pairing_one_dim():
    v = GradedSpace.of(1, 0)
    ip = InnerProduct.from_rows(v, [[1]])
    assert inverse_pairing(ip) == {(0, 0): Fraction(1)}


def test_inverse_pairing_hyperbolic():
    v = GradedSpace.of(2, 0)
    ip = InnerProduct.from_rows(v, [[0, 1], [1, 0]])
    assert inverse_pairing(ip) == {(0, 1): Fraction(1), (1, 0): Fraction(1)}


def test_inverse_pairing_odd_symplectic():
    v = GradedSpace.of(0, 2)
    ip = InnerProduct.from_rows(v, [[0, 1], [-1, 0]])
    f = inverse_pairing(ip)
    assert f == {(0, 1): Fraction(-1), (1, 0): Fraction(1)}
    # contraction against the pairing in either slot is the identity
    n = ip.space.dim
    for i in range(n):
        for k in range(n):
            left = sum(
                f.get((i, j), Fraction(0)) * ip.gram[j][k] for j in range(n)
            )
            right = sum(
                ip.gram[k][j] * f.get((j, i), Fraction(0)) for j in range(n)
            )
            assert left == (1 if i == k else 0)
            assert right == (1 if i == k else 0)


def test_inverse_pairing_contraction_random_mixed():
    v = GradedSpace.of(2, 2)
    ip = InnerProduct.from_rows(
        v, [[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 3], [0, 0, -3, 0]]
    )
    f = inverse_pairing(ip)
    n = v.dim
    for i in range(n):
        for k in range(n):
            val = sum(f.get((i, j), Fraction(0)) * ip.gram[j][k] for j in range(n))
            assert val == (1 if i == k else 0)
