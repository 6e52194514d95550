from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from beliefmodels.linalg import (
    AffineSet,
    LabelSet,
    LinalgError,
    Mat,
    Subspace,
    factor_right,
    format_rational,
    from_row_map,
    image_basis,
    intersect,
    is_contained,
    kernel_basis,
    lift,
    map_subspace,
    parse_rational,
    q,
    rref,
    solve_affine,
    solve_affine_in,
    subspace_sum,
)

from oracles import in_span, matvec, minor_rank

ALICE = [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 3, 0, 2]]
CODE4_BELIEF = [[0, 1, 0, 1], [0, 0, 1, 1], [0, 3, 0, 2], [0, 0, 0, 1]]


def mat(rows):
    return Mat(LabelSet.numbered("r", len(rows)), LabelSet.numbered("c", len(rows[0])), rows)


def test_parse_and_format_rationals():
    assert parse_rational("1/3") == Fraction(1, 3)
    assert parse_rational("-4") == -4
    assert parse_rational(" 6/4 ") == Fraction(3, 2)
    assert format_rational(Fraction(-2, 6)) == "-1/3"
    assert format_rational(Fraction(5)) == "5"
    for bad in ["0.5", "1e3", "1/0", "", "a/b", "1//2"]:
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        q(0.5)
    with pytest.raises(TypeError):
        mat([[1.0]])


def test_labelset_rejects_duplicates():
    with pytest.raises(LinalgError):
        LabelSet(["a", "b", "a"])
    assert LabelSet(["x", "y"]).index("y") == 1


def test_matmul_checks_inner_labels():
    A = Mat(["a"], ["x", "y"], [[1, 2]])
    B = Mat(["x", "y"], ["u"], [[3], [4]])
    assert (A @ B).data == ((11,),)
    with pytest.raises(LinalgError):
        B @ B


def test_rref_examples():
    R, rank = rref(mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert rank == 3 and R.data == mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).data
    R, rank = rref(mat([[1, 2], [2, 4]]))
    assert rank == 1 and R.data == ((1, 2), (0, 0))
    R, rank = rref(mat(ALICE))
    assert rank == 4 and R == Mat.identity(LabelSet.numbered("c", 4)).relabel(rows=R.rows)


def test_kernel_examples():
    assert kernel_basis(mat([[1, 0], [0, 1]])).is_zero()
    K = kernel_basis(mat(CODE4_BELIEF))
    assert K == Subspace(K.ambient, [[1, 0, 0, 0]])
    K = kernel_basis(mat([[1, 2], [2, 4]]))
    assert K == Subspace(K.ambient, [[2, -1]])


def test_image_examples():
    assert image_basis(mat([[0, 0], [0, 0]])).is_zero()
    assert image_basis(mat(ALICE)).is_full()
    I = image_basis(mat([[1], [2]]))
    assert I == Subspace(I.ambient, [[1, 2]])


def test_containment_examples():
    amb = LabelSet(["x", "y"])
    e1, e2 = Subspace(amb, [[1, 0]]), Subspace(amb, [[0, 1]])
    assert is_contained(Subspace.zero(amb), e1)
    assert is_contained(e2, subspace_sum(e1, e2))
    assert not is_contained(Subspace(amb, [[1, 1]]), e1)


def test_symmetry_example_kernel_meets_valid_trivially():
    B = mat([ALICE[0], ALICE[1], ALICE[3]])
    V = kernel_basis(Mat(["c"], B.cols, [[0, 0, 1, 1]]))
    assert intersect(kernel_basis(B), V).is_zero()
    sol = solve_affine_in(B, B.apply([1, -1, 2, -2]), V)
    assert sol.dim == 0 and sol.point == (1, -1, 2, -2)
    assert solve_affine_in(B, [0, 0, 1], Subspace(B.cols, [[0, 0, 1, -1]])) is None


def test_map_subspace_example():
    lam = mat([[0, 1, 0, 1], [0, 0, 1, 1], [0, 3, 0, 2], [1, 0, 0, 1]])
    image = map_subspace(lam, Subspace(lam.cols, [[1, 0, 0, 0]]))
    assert image == Subspace(lam.rows, [lam.col("c1")]) and image.dim == 1


def test_solve_examples():
    A = mat([[1, 2], [2, 4]])
    assert solve_affine(A, [0, 0]).same_set(AffineSet([0, 0], kernel_basis(A)))
    sol = solve_affine(mat(ALICE), [-3, 1, 0, 4])
    assert sol.point == (-2, 2, 1, -1) and sol.dim == 0
    assert solve_affine(mat([[1], [1]]), [1, 2]) is None
    with pytest.raises(LinalgError):
        solve_affine(A, [1])


def test_solve_in_full_matches_plain_solve():
    A = mat([[1, 2, 0], [0, 1, 1]])
    full = Subspace.full(A.cols)
    assert solve_affine_in(A, [1, 2], full).same_set(solve_affine(A, [1, 2]))


def test_factor_and_lift_examples():
    B = mat(ALICE)
    Z = factor_right(B, B)
    assert Z @ B == B
    C = lift(B, B)
    assert B @ C == B
    col = Mat(["u", "v"], ["k"], [[1], [0]])
    assert lift(Mat(["u", "v"], ["j"], [[2], [0]]), col).data == ((2,),)
    assert lift(Mat(["u", "v"], ["j"], [[0], [1]]), col) is None


def test_from_row_map():
    labels = LabelSet(["a", "b", "c"])
    I = from_row_map(labels, labels, lambda y: [int(y == x) for x in labels])
    assert I == Mat.identity(labels)
    # a deterministic h: Y -> X gives exactly one 1 per row
    h = {"p": "a", "q": "a", "r": "c"}
    H = from_row_map(LabelSet(h), labels, {y: [int(h[y] == x) for x in labels] for y in h})
    assert all(sum(r) == 1 for r in H.data)
    assert from_row_map(H.rows, H.cols, H.row_map()) == H


def test_affine_set_membership():
    amb = LabelSet(["x", "y"])
    S = AffineSet([1, 1], Subspace(amb, [[1, -1]]))
    assert S.contains([3, -1]) and not S.contains([0, 0])


# --- properties -------------------------------------------------------------

small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    m = draw(st.integers(1, max_rows))
    n = draw(st.integers(1, max_cols))
    return mat(draw(st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_idempotent_and_rank_matches_minors(A):
    R, rank = rref(A)
    R2, rank2 = rref(R)
    assert R2 == R and rank2 == rank
    assert rank == minor_rank(A.data)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_nullity(A):
    K, I = kernel_basis(A), image_basis(A)
    assert K.dim + I.dim == len(A.cols)
    for v in K.vectors:
        assert not any(A.apply(v))
    for v in I.vectors:
        assert in_span([list(c) for c in A.T.data], v)


@st.composite
def subspace_pairs(draw):
    n = draw(st.integers(1, 5))
    amb = LabelSet.numbered("x", n)
    vecs = st.lists(st.lists(small, min_size=n, max_size=n), max_size=4)
    return Subspace(amb, draw(vecs)), Subspace(amb, draw(vecs))


@settings(max_examples=200, deadline=None)
@given(subspace_pairs())
def test_intersection_dimension_formula(pair):
    U, W = pair
    cap, cup = intersect(U, W), subspace_sum(U, W)
    assert cap.dim == U.dim + W.dim - cup.dim
    assert is_contained(cap, U) and is_contained(cap, W)
    assert intersect(U, W) == intersect(W, U)


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_factor_right_exists_iff_kernel_containment(B, data):
    m = data.draw(st.integers(1, 3))
    rows = data.draw(st.lists(st.lists(small, min_size=len(B.cols), max_size=len(B.cols)),
                              min_size=m, max_size=m))
    A = Mat(LabelSet.numbered("a", m), B.cols, rows)
    Z = factor_right(A, B)
    expected = is_contained(kernel_basis(B), kernel_basis(A))
    # independent route: ker B ⊆ ker A iff rows of A lie in the row space of B
    assert expected == all(in_span(B.data, r) for r in A.data)
    assert (Z is not None) == expected
    if Z is not None:
        assert Z @ B == A


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_lift_exists_iff_image_containment(B, data):
    k = data.draw(st.integers(1, 3))
    cols = data.draw(st.lists(st.lists(small, min_size=len(B.rows), max_size=len(B.rows)),
                              min_size=k, max_size=k))
    A = Mat(B.rows, LabelSet.numbered("k", k), [list(r) for r in zip(*cols)])
    C = lift(A, B)
    expected = all(in_span([list(c) for c in B.T.data], c) for c in cols)
    assert (C is not None) == expected == is_contained(image_basis(A), image_basis(B))
    if C is not None:
        assert B @ C == A


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_solve_affine_matches_rank_test(A, data):
    b = data.draw(st.lists(small, min_size=len(A.rows), max_size=len(A.rows)))
    sol = solve_affine(A, b)
    solvable = minor_rank([list(r) + [x] for r, x in zip(A.data, b)]) == minor_rank(A.data)
    assert (sol is not None) == solvable
    if sol is not None:
        assert list(A.apply(sol.point)) == b
        assert matvec(A.data, sol.point) == b
        assert sol.direction == kernel_basis(A)
