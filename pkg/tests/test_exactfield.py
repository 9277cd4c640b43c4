from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilcohom.exactfield import (
    ONE,
    ZERO,
    FieldError,
    GaussianRational,
    I,
    Matrix,
    det,
    field_arith,
    format_scalar,
    gr,
    hermitian_form,
    in_span,
    inverse,
    is_pos_def_hermitian,
    is_psd_hermitian,
    mat_kernel,
    mat_rank,
    mat_solve,
    orth_project,
    subspace_sum_dim,
    unit_vector,
    vis_zero,
    vsub,
)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(GaussianRational, fractions, fractions)
small = st.sampled_from([ZERO, ONE, -ONE, I, -I, GaussianRational(1, 1), GaussianRational(Fraction(1, 2), -2)])


def matrices(max_rows: int = 5, max_cols: int = 5, entries=small):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r).map(lambda rows: Matrix(rows, c))
        )
    )


def naive_rank(M: Matrix) -> int:
    """Plain Gaussian elimination with division, independent of the library's elimination."""
    rows = [list(r) for r in M.rows]
    rank, col = 0, 0
    while rank < len(rows) and col < M.ncols:
        piv = next((i for i in range(rank, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and not rows[i][col].is_zero():
                f = rows[i][col] / rows[rank][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


# -- field arithmetic ---------------------------------------------------------


def test_field_examples():
    # [TRIVIAL] |1+i|^2
    assert field_arith(gr("1+i"), gr("1-i"), "mul") == gr(2)
    # [TRIVIAL]
    assert field_arith(gr("1/2+3/4*i"), None, "conj") == gr("1/2-3/4*i")
    # [DERIVED] (1+i)/(1-i) = (1+i)^2/2 = i
    assert field_arith(gr("1+i"), gr("1-i"), "div") == I


def test_division_by_zero_is_an_error():
    with pytest.raises(FieldError):
        field_arith(ONE, ZERO, "div")


def test_canonical_strings():
    assert format_scalar(gr("2/4")) == "1/2"
    assert format_scalar(gr("-i")) == "-i"
    assert format_scalar(gr("1/2-3/4*i")) == "1/2-3/4*i"
    assert format_scalar(ZERO) == "0"


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO


@given(scalars)
def test_inverse_conj_abs(a):
    assert a.conj().conj() == a
    assert a.abs2() == a.re**2 + a.im**2
    assert (a.abs2() == 0) == a.is_zero()
    if not a.is_zero():
        assert a * a.inverse() == ONE


@given(scalars)
def test_string_round_trip(a):
    assert gr(format_scalar(a)) == a


# -- rank, kernel, solve ----------------------------------------------------------


def test_rank_examples():
    # [TRIVIAL] row 2 = i * row 1
    assert mat_rank(Matrix([[ONE, I], [I, -ONE]], 2)) == 1
    assert mat_rank(Matrix.zeros(3, 5)) == 0


def test_rank_against_naive_oracle():
    # [DERIVED] 6x6 entries in {0, +-1, +-i} against plain elimination
    rng = random.Random(7)
    pool = [ZERO, ONE, -ONE, I, -I]
    for _ in range(60):
        M = Matrix([[rng.choice(pool) for _ in range(6)] for _ in range(6)], 6)
        assert mat_rank(M) == naive_rank(M)


@given(matrices())
def test_rank_nullity_and_conjugate_transpose(M):
    ker = mat_kernel(M)
    assert mat_rank(M) + len(ker) == M.ncols
    assert mat_rank(M) == mat_rank(M.H)
    assert mat_rank(M) == naive_rank(M)
    for v in ker:
        assert vis_zero(M.apply(v))
    if ker:
        assert mat_rank(Matrix.from_columns(ker, M.ncols)) == len(ker)


def test_kernel_examples():
    assert mat_kernel(Matrix.identity(4)) == []
    (v,) = mat_kernel(Matrix([[ONE, I]], 2))
    # [TRIVIAL] 1*(-i) + i*1 = 0, so the kernel is spanned by (-i, 1)
    assert in_span((-I, ONE), [v])


def test_solve_examples():
    y = (gr(3), gr("1/2"), I)
    assert mat_solve(Matrix.identity(3), y) == y
    M = Matrix([[ONE], [I]], 1)
    assert mat_solve(M, (ONE, I)) == (ONE,)
    assert mat_solve(M, (ONE, ZERO)) is None


@given(matrices(), st.data())
def test_solve_verifies(M, data):
    x = tuple(data.draw(small) for _ in range(M.ncols))
    y = M.apply(x)
    sol = mat_solve(M, y)
    assert sol is not None and M.apply(sol) == y


def test_subspace_sum_dim():
    e1, e2 = unit_vector(3, 0), unit_vector(3, 1)
    assert subspace_sum_dim([e1], [e1]) == 1
    assert subspace_sum_dim([e1], [e2]) == 2


@given(matrices(4, 4))
def test_inverse_and_det(M):
    if M.nrows != M.ncols:
        return
    if det(M).is_zero():
        assert mat_rank(M) < M.nrows
        return
    assert M @ inverse(M) == Matrix.identity(M.nrows)


# -- projection and positivity ----------------------------------------------------


def test_orth_project_examples():
    G = Matrix.identity(2)
    v = (ONE, ZERO)
    assert orth_project(v, [], G) == (ZERO, ZERO)
    assert orth_project(v, [(ONE, ZERO)], G) == v
    # [DERIVED] <v,w>/<w,w> w with <x,y> = y^H x: (1/2)(1, i)
    assert orth_project(v, [(ONE, I)], G) == (gr("1/2"), gr("1/2*i"))


def test_orth_project_rejects_non_pd():
    with pytest.raises(FieldError):
        orth_project((ONE, ZERO), [(ONE, ONE)], Matrix.diag([ONE, -ONE]))


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=2), st.tuples(small, small, small))
def test_orth_project_residual_orthogonal(W, v):
    G = Matrix([[gr(2), I, ZERO], [-I, gr(2), ZERO], [ZERO, ZERO, ONE]], 3)
    pr = orth_project(v, W, G)
    r = vsub(v, pr)
    assert all(hermitian_form(G, r, w).is_zero() for w in W)


def test_positive_definite_examples():
    assert is_pos_def_hermitian(Matrix.identity(3))
    assert not is_pos_def_hermitian(Matrix.diag([ONE, -ONE]))
    # [DERIVED] minors 2 and 2*1 - i*(-i) = 1
    assert is_pos_def_hermitian(Matrix([[gr(2), I], [-I, ONE]], 2))
    with pytest.raises(FieldError):
        is_pos_def_hermitian(Matrix([[ONE, I], [I, ONE]], 2))


def _charpoly_2x2_pd(H: Matrix) -> bool:
    # eigenvalues of a Hermitian 2x2 are positive iff trace > 0 and det > 0
    tr = (H[0, 0] + H[1, 1]).re
    return tr > 0 and det(H).re > 0


@given(fractions, fractions, scalars)
def test_pd_agrees_with_eigen_sign_oracle(a, d, b):
    H = Matrix([[GaussianRational(a), b], [b.conj(), GaussianRational(d)]], 2)
    assert is_pos_def_hermitian(H) == _charpoly_2x2_pd(H)
    probes = [(ONE, ZERO), (ZERO, ONE), (ONE, ONE), (ONE, I), (ONE, -ONE), (I, ONE)]
    if is_pos_def_hermitian(H):
        assert all(hermitian_form(H, v, v).re > 0 for v in probes)
    if is_psd_hermitian(H):
        assert all(hermitian_form(H, v, v).re >= 0 for v in probes)
