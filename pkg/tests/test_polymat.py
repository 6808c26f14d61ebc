from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lineschemes import polymat
from lineschemes.errors import IndeterminateRank, NotSquare, SizeError
from lineschemes.multipoly import MPoly, VarSet, parse_poly
from lineschemes.scalars import TowerRing

XYZ = VarSet(("x", "y", "z"))


def square_matrices(n):
    entries = st.integers(-9, 9).map(Fraction)
    return st.lists(st.lists(entries, min_size=n, max_size=n), min_size=n, max_size=n)


def poly_matrix(text_rows):
    return [[parse_poly(t, XYZ) for t in row] for row in text_rows]


def test_det_examples():
    assert polymat.det(polymat.identity(4)) == 1
    assert polymat.det([[1, 2], [1, 2]]) == 0
    assert polymat.det([]) == 1
    m = poly_matrix([["x", "y", "z"], ["y", "z", "x"], ["x", "y", "z"]])
    assert polymat.det(m).is_zero()
    with pytest.raises(NotSquare):
        polymat.det([[1, 2, 3], [4, 5, 6]])


def test_minor_counts():
    m = [[Fraction(i * 8 + j) for j in range(8)] for i in range(10)]
    assert len(polymat.enumerate_minors(m, 8)) == 45
    six_by_four = [[Fraction(i + j * j) for j in range(4)] for i in range(6)]
    assert len(polymat.enumerate_minors(six_by_four, 4)) == 15
    assert [v for _, _, v in polymat.enumerate_minors(six_by_four, 0)] == [1]
    with pytest.raises(SizeError):
        polymat.enumerate_minors(six_by_four, 5)


def test_relation_coefficients_have_ten_dimensional_kernel(alg):
    coeffs = alg.coefficient_matrix()
    assert polymat.shape(coeffs) == (6, 16)
    assert len(polymat.null_space(coeffs, 16)) == 10


def test_null_space_examples():
    assert polymat.null_space(polymat.identity(3)) == []
    assert len(polymat.null_space([[0, 0, 0], [0, 0, 0]])) == 3


def test_rank_at_points():
    f2 = parse_poly("M12*M34 - M13*M24", VarSet(("M12", "M13", "M24", "M34")))
    g2 = parse_poly("M12^2 + 2*M24^2 + alpha*M34^2", f2.varset)
    jac = [[f.diff(n) for n in f2.varset.names] for f in (f2, g2)]
    assert polymat.rank_at(jac, {"M12": 0, "M13": 1, "M24": 0, "M34": 0}) == 1
    zero = [[MPoly(XYZ, {})] * 3] * 2
    assert polymat.rank_at(zero, {"x": 1, "y": 2, "z": 3}) == 0


def test_rank_over_a_tower_with_zero_divisors():
    ring = TowerRing("Q").adjoin_sqrt(1, "s")
    s = ring.gen("s")
    # 1 + s is a zero divisor: (1 + s)(1 - s) = 0
    with pytest.raises(IndeterminateRank):
        polymat.rank([[1 + s, ring.zero()], [ring.zero(), ring.one()]])


@given(square_matrices(4))
def test_bareiss_matches_cofactor_and_sympy(m):
    fast = polymat.bareiss_det(m)
    slow = polymat.CofactorCache(m, range(4), Fraction(1)).det(range(4))
    assert fast == slow == sympy.Matrix(m).det()


@given(square_matrices(3), square_matrices(3))
def test_det_is_multiplicative(a, b):
    prod = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert polymat.det(prod) == polymat.det(a) * polymat.det(b)


@given(square_matrices(3), st.integers(0, 2), st.integers(0, 2))
def test_det_alternates_under_row_swaps(m, i, j):
    swapped = [list(r) for r in m]
    swapped[i], swapped[j] = swapped[j], swapped[i]
    sign = 1 if i == j else -1
    assert polymat.det(swapped) == sign * polymat.det(m)


@given(st.lists(st.lists(st.integers(-3, 3).map(Fraction), min_size=5, max_size=5), min_size=1, max_size=4))
def test_null_space_vectors_are_killed(m):
    basis = polymat.null_space(m, 5)
    assert len(basis) + polymat.rank(m) == 5
    for v in basis:
        assert all(x == 0 for x in polymat.mat_vec(m, v))


def test_symbolic_determinant_matches_sympy():
    rows = [["x", "y", "1"], ["y^2", "z", "x"], ["1", "x*z", "y"]]
    m = poly_matrix(rows)
    got = polymat.det(m)
    sym = sympy.Matrix([[sympy.sympify(t.replace("^", "**")) for t in row] for row in rows]).det()
    want = sympy.sympify(got.to_str().replace("^", "**"))
    assert sympy.expand(sym - want) == 0
