from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from heckesym.rings import GF, QQ, ZZ, QuotientExtension
from heckesym.linalg import (
    FPModule,
    FPMap,
    IllDefinedMapError,
    Matrix,
    NotInSpanError,
    RowBasis,
    charpoly,
    echelon_and_kernel,
    hermite_normal_form,
    induced_map,
    left_kernel,
    matrix_rank,
    quotient_presentation,
    rref,
    right_kernel,
    smith_normal_form,
)

import oracles

small_int = st.integers(-9, 9)


def int_matrix(max_n=5, max_m=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.integers(1, max_m).flatmap(
            lambda m: st.lists(
                st.lists(small_int, min_size=m, max_size=m), min_size=n, max_size=n
            )
        )
    )


def as_zz(rows):
    return Matrix(ZZ, rows)


# -- echelon / kernels -------------------------------------------------------


def test_rref_hand_example():
    A = Matrix(QQ, [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(7)]])
    R, pivots = rref(A)
    assert pivots == (0, 2)
    assert R.rows[0] == [1, 2, 0]
    assert R.rows[1] == [0, 0, 1]


@settings(max_examples=80)
@given(int_matrix())
def test_rref_transform_reproduces_echelon(rows):
    A = Matrix(QQ, [[Fraction(x) for x in r] for r in rows])
    R, pivots, T = rref(A, with_transform=True)
    assert T.mul(A) == R
    for r, c in zip(range(len(pivots)), pivots):
        assert R.rows[r][c] == 1
        for rr in range(A.nrows):
            if rr != r:
                assert R.rows[rr][c] == 0


@settings(max_examples=60)
@given(int_matrix())
def test_rank_matches_sympy(rows):
    A = as_zz(rows)
    assert matrix_rank(A) == sympy.Matrix(rows).rank()


@settings(max_examples=60)
@given(int_matrix())
def test_right_kernel_annihilates_and_has_full_nullity(rows):
    A = as_zz(rows)
    R, K = echelon_and_kernel(A)
    At = Matrix(QQ, [[Fraction(x) for x in r] for r in rows])
    for v in K.rows:
        prod = At.mul(Matrix(QQ, [[x] for x in v], 1))
        assert all(e == 0 for r in prod.rows for e in r)
    assert K.nrows == A.ncols - matrix_rank(A)


@settings(max_examples=60)
@given(int_matrix())
def test_left_kernel_over_z_is_saturated(rows):
    A = as_zz(rows)
    K = left_kernel(A)
    for v in K.rows:
        out = A.act_on_row(list(v)) if A.nrows == len(v) else None
        assert out is not None and all(x == 0 for x in out)
    assert K.nrows == A.nrows - matrix_rank(A)
    # saturation: if w is rational in the kernel with integer entries,
    # it must lie in the integer row span of K
    if K.nrows:
        basis = RowBasis(Matrix(ZZ, [list(r) for r in K.rows], K.ncols))
        Kq = left_kernel(Matrix(QQ, [[Fraction(x) for x in r] for r in rows]))
        for v in Kq.rows:
            den = 1
            for x in v:
                den = den * x.denominator // sympy.gcd(den, x.denominator)
            w = [int(x * den) for x in v]
            assert basis.contains(w)


def test_left_kernel_gf_example():
    F = GF(2)
    A = Matrix(F, [[1, 1], [1, 1], [0, 1]])
    K = left_kernel(A)
    assert K.nrows == 1
    assert K.rows[0] == [1, 1, 0]


# -- integer normal forms ----------------------------------------------------


@settings(max_examples=60)
@given(int_matrix())
def test_hermite_form_properties(rows):
    A = as_zz(rows)
    H, U = hermite_normal_form(A, with_transform=True)
    assert U.mul(A) == H
    assert abs(sympy.Matrix([r for r in U.rows]).det()) == 1
    # staircase with positive pivots, entries above reduced
    lastcol = -1
    for r in H.rows:
        nz = [j for j, x in enumerate(r) if x]
        if not nz:
            continue
        c = nz[0]
        assert c > lastcol
        assert r[c] > 0
        lastcol = c


@settings(max_examples=60)
@given(int_matrix())
def test_smith_form_matches_sympy_invariants(rows):
    A = as_zz(rows)
    D, U, W = smith_normal_form(A)
    assert U.mul(A).mul(W) == D
    assert abs(sympy.Matrix(U.rows).det()) == 1
    assert abs(sympy.Matrix(W.rows).det()) == 1
    got = [D.rows[i][i] for i in range(min(D.nrows, D.ncols))]
    from sympy.matrices.normalforms import smith_normal_form as sympy_snf

    S = sympy_snf(sympy.Matrix(rows))
    want = [abs(int(S[i, i])) for i in range(min(S.rows, S.cols))]
    assert sorted(got) == sorted(want)


def test_smith_form_hand_example():
    D, U, W = smith_normal_form(as_zz([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]))
    assert [D.rows[i][i] for i in range(3)] == [2, 2, 156]


# -- row bases ---------------------------------------------------------------


def test_rowbasis_express_rational():
    A = Matrix(QQ, [[Fraction(1, 2), Fraction(0)], [Fraction(1), Fraction(1)]])
    B = RowBasis(A)
    coeffs = B.express([Fraction(2), Fraction(1)])
    assert coeffs[0] * A.rows[0][0] + coeffs[1] * A.rows[1][0] == 2
    assert coeffs[0] * A.rows[0][1] + coeffs[1] * A.rows[1][1] == 1
    with pytest.raises(NotInSpanError):
        RowBasis(Matrix(QQ, [[Fraction(1), Fraction(0)]])).express([Fraction(0), Fraction(1)])


def test_rowbasis_integer_lattice():
    B = RowBasis(as_zz([[2, 0], [0, 3]]))
    assert B.contains([4, 3])
    assert not B.contains([1, 0])
    c = B.express([2, 3])
    assert c == [1, 1]


# -- presented modules -------------------------------------------------------


def test_fpmodule_z_torsion():
    M = quotient_presentation(ZZ, 2, [[2, 0]])
    assert M.rank() == 1
    assert M.torsion() == (2,)
    assert M.is_zero_element([2, 0])
    assert not M.is_zero_element([1, 0])


def test_fpmodule_field_dim_and_reduce():
    M = quotient_presentation(QQ, 3, [[Fraction(1), Fraction(1), Fraction(0)]])
    assert M.dim() == 2
    r1 = M.reduce([Fraction(1), Fraction(0), Fraction(0)])
    r2 = M.reduce([Fraction(0), Fraction(-1), Fraction(0)])
    assert r1 == r2


def test_fpmap_welldefined_check():
    src = quotient_presentation(ZZ, 1, [[2]])
    dst = quotient_presentation(ZZ, 1, [[3]])
    with pytest.raises(IllDefinedMapError):
        induced_map(src, dst, Matrix(ZZ, [[1]]))
    ok = induced_map(src, quotient_presentation(ZZ, 1, [[2]]), Matrix(ZZ, [[1]]))
    assert ok.matrix_on_generators().rows


def test_fpmap_kernel_image_cokernel_over_q():
    # map Q^2 -> Q^2 collapsing the second coordinate
    src = quotient_presentation(QQ, 2, [])
    dst = quotient_presentation(QQ, 2, [])
    A = Matrix(QQ, [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(0)]])
    f = FPMap(src, dst, A)
    ker, kgens = f.kernel()
    assert ker.dim() == 1
    img, _ = f.image()
    assert img.dim() == 1
    cok = f.cokernel()
    assert cok.dim() == 1


def test_fpmap_kernel_over_z_with_torsion_target():
    # multiplication by 1: Z -> Z/4 has kernel 4Z, presented as free rank 1
    src = quotient_presentation(ZZ, 1, [])
    dst = quotient_presentation(ZZ, 1, [[4]])
    f = FPMap(src, dst, Matrix(ZZ, [[1]]))
    ker, kgens = f.kernel()
    assert kgens.rows == [[4]]
    assert ker.rank() == 1 and ker.torsion() == ()
    cok = f.cokernel()
    assert cok.rank() == 0 and cok.torsion() == ()


def test_fpmap_image_with_torsion():
    # x -> 2x : Z/4 -> Z/4 has image of order 2, kernel of order 2
    src = quotient_presentation(ZZ, 1, [[4]])
    dst = quotient_presentation(ZZ, 1, [[4]])
    f = FPMap(src, dst, Matrix(ZZ, [[2]]))
    ker, kgens = f.kernel()
    assert ker.rank() == 0 and ker.torsion() == (2,)
    img, _ = f.image()
    assert img.rank() == 0 and img.torsion() == (2,)


@settings(max_examples=40)
@given(int_matrix(4, 4), int_matrix(4, 4))
def test_fpmap_rank_nullity_over_q(rows_rel, rows_map):
    n = len(rows_map[0])
    src = quotient_presentation(QQ, len(rows_map), [])
    dst = quotient_presentation(QQ, n, [])
    A = Matrix(QQ, [[Fraction(x) for x in r] for r in rows_map])
    f = FPMap(src, dst, A)
    ker, _ = f.kernel()
    img, _ = f.image()
    assert ker.dim() + img.dim() == src.dim()


# -- characteristic polynomial ----------------------------------------------


@settings(max_examples=50)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_charpoly_matches_sympy(rows):
    A = as_zz(rows)
    got = charpoly(A)
    want = oracles.sl2_charpoly(rows)
    assert tuple(Fraction(x) for x in got) == tuple(Fraction(x) for x in want)


def test_charpoly_over_gf():
    F = GF(5)
    A = Matrix(F, [[1, 2], [3, 4]])
    # char poly x^2 - 5x - 2 = x^2 + 3 over F_5
    assert charpoly(A) == [3, 0, 1]


def test_charpoly_over_extension_field():
    R = QuotientExtension(QQ, (-1, -1, 1))
    lam = R.generator()
    A = Matrix(R, [[lam, R.one], [R.zero, lam]])
    p = charpoly(A)
    # (x - lam)^2 = x^2 - 2 lam x + lam^2, and lam^2 = lam + 1
    assert p == [R.add(lam, R.one), R.mul(R.of_int(-2), lam), R.one]
