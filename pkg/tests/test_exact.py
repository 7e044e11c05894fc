import random
from fractions import Fraction

import numpy as np
import pytest

from symkilling import exact
from symkilling.exact import (
    ExactnessError, RatMat, Subspace, common_kernel, float_kernel,
    float_largest_invariant_subspace, FloatSubspace, kernel,
    largest_invariant_subspace, mat_inverse, rank_at_eigenvalue, solve,
)


def frac_mat(rows):
    return RatMat.from_fractions(rows)


def test_kernel_zero_matrix_full_space():
    A = RatMat.zeros(3, 3)
    assert kernel(A).shape[1] == 3


def test_kernel_identity_empty():
    assert kernel(RatMat.eye(4)).shape[1] == 0


def test_kernel_rank_one():
    A = frac_mat([[1, 1], [2, 2]])
    K = kernel(A)
    assert K.shape[1] == 1
    v = [K.entry(0, 0), K.entry(1, 0)]
    assert v[0] == -v[1]


def test_kernel_random_consistency():
    rng = random.Random(7)
    for _ in range(25):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        rows = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(c)]
                for _ in range(r)]
        A = frac_mat(rows)
        K = kernel(A)
        if K.shape[1]:
            assert (A @ K).is_zero()
        # rank-nullity against float rank
        fr = np.linalg.matrix_rank(A.to_float())
        assert K.shape[1] == c - fr


def test_solve_and_inverse():
    A = frac_mat([[2, 1], [1, 1]])
    B = frac_mat([[1], [0]])
    X = solve(A, B)
    assert (A @ X) == B
    Ainv = mat_inverse(A)
    assert (A @ Ainv) == RatMat.eye(2)


def test_solve_unsolvable_certified():
    A = frac_mat([[1, 1], [1, 1]])
    B = frac_mat([[1], [0]])
    with pytest.raises(ExactnessError):
        solve(A, B)


def test_subspace_echelon_and_membership():
    B = frac_mat([[1, 2], [2, 4], [Fraction(1, 2), 1], [0, 1]])
    S = Subspace.from_columns(B)
    assert S.dim == 2
    assert S.contains_columns(B)
    v = frac_mat([[1], [2], [Fraction(1, 2)], [5]])  # B[:,0] + 5*(second direction)
    # build a vector genuinely inside the span
    w = B @ frac_mat([[3], [-2]])
    assert S.contains_columns(w)
    outside = frac_mat([[1], [0], [0], [0]])
    assert not S.contains_columns(outside)
    del v


def test_intersect():
    e = RatMat.eye(3)
    s12 = Subspace.from_columns(e.take_columns([0, 1]))
    s23 = Subspace.from_columns(e.take_columns([1, 2]))
    inter = s12.intersect(s23)
    assert inter.dim == 1
    assert inter.contains_columns(e.take_columns([1]))
    assert s12.intersect(s12).dim == 2
    s1 = Subspace.from_columns(e.take_columns([0]))
    s2 = Subspace.from_columns(e.take_columns([1]))
    assert s1.intersect(s2).dim == 0


def test_largest_invariant_subspace_trivial_cases():
    full = Subspace.full(4)
    S, trace = largest_invariant_subspace(full, [])
    assert S.dim == 4
    perm = frac_mat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    S, _ = largest_invariant_subspace(full, [perm])
    assert S.dim == 4


def test_largest_invariant_subspace_permutation_kills_line():
    # span(e1) with the swap e1 <-> e2: nothing invariant survives
    e = RatMat.eye(2)
    v0 = Subspace.from_columns(e.take_columns([0]))
    swap = frac_mat([[0, 1], [1, 0]])
    S, trace = largest_invariant_subspace(v0, [swap])
    assert S.dim == 0
    assert trace[0] == 1
    assert all(a >= b for a, b in zip(trace, trace[1:]))


def test_largest_invariant_maximality_spot_check():
    # adjoining any dropped vector of V0 must break invariance
    rng = random.Random(3)
    n = 5
    rows = [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
    op = frac_mat(rows)
    e = RatMat.eye(n)
    v0 = Subspace.from_columns(e.take_columns([0, 1, 2]))
    S, _ = largest_invariant_subspace(v0, [op])
    for j in range(3):
        col = e.take_columns([j])
        if S.dim and S.contains_columns(col):
            continue
        ext = Subspace.from_columns(S.basis.hstack(col))
        bigger, _ = largest_invariant_subspace(ext, [op])
        assert bigger.dim < ext.dim or not v0.contains_columns(bigger.basis)


def test_rank_at_eigenvalue():
    A = frac_mat([[1, 0, 0], [0, Fraction(1, 2), 0], [0, 0, Fraction(1, 2)]])
    assert rank_at_eigenvalue(A, 1) == 1
    assert rank_at_eigenvalue(A, Fraction(1, 2)) == 2
    assert rank_at_eigenvalue(RatMat.eye(4), 1) == 4


def test_common_kernel():
    A = frac_mat([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    B = frac_mat([[0, 0, 0], [0, 1, 0], [0, 0, 0]])
    S = common_kernel([A, B], 3)
    assert S.dim == 1
    assert S.contains_columns(RatMat.eye(3).take_columns([2]))


def test_float_kernel_matches_exact():
    rng = random.Random(11)
    for _ in range(10):
        r, c = rng.randint(2, 7), rng.randint(2, 7)
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(c)] for _ in range(r)]
        A = frac_mat(rows)
        assert float_kernel(A.to_float()).shape[1] == kernel(A).shape[1]


def test_float_invariant_subspace_matches_exact():
    perm = frac_mat([[0, 1], [1, 0]])
    e = RatMat.eye(2)
    v0 = Subspace.from_columns(e.take_columns([0]))
    S, _ = largest_invariant_subspace(v0, [perm])
    Sf, _ = float_largest_invariant_subspace(
        FloatSubspace(v0.basis.to_float()), [perm.to_float()])
    assert Sf.dim == S.dim == 0


def test_big_entry_escalation():
    big = 10 ** 30
    A = RatMat(np.array([[big, -big]], dtype=object))
    K = kernel(A)
    assert K.shape[1] == 1
    assert (A @ K).is_zero()


def test_rational_reconstruction_roundtrip():
    m = 2147483647 * 2147483629
    for val in [Fraction(3, 7), Fraction(-22, 9), Fraction(10 ** 6, 11)]:
        x = val.numerator * pow(val.denominator, -1, m) % m
        pq = exact.rational_reconstruct(x, m)
        assert pq is not None
        assert Fraction(pq[0], pq[1]) == val
