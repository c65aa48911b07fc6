"""Field and linear-algebra kernel tests.

The extension-field tests are checked against an independent polynomial
oracle that reduces modulo w^p - w - 1 by long division, sharing no code
with the implementation under test.
"""

import numpy as np
import pytest

from periplectic.field import (
    FieldParams,
    Matrix,
    NoSolutionError,
    RowSpace,
    SparseOp,
)

GF5 = FieldParams(5, 1)
GF5E = FieldParams(5, 5)
GF7E = FieldParams(7, 7)


# --- independent oracle -----------------------------------------------------

def poly_reduce_oracle(coeffs, p):
    """Reduce a polynomial in w modulo w^p - w - 1 by long division, mod p."""
    c = [x % p for x in coeffs]
    while len(c) > p:
        d = len(c) - 1
        lead = c[d]
        c[d] = 0
        # w^d = w^(d-p) * (w + 1)
        c[d - p + 1] = (c[d - p + 1] + lead) % p
        c[d - p] = (c[d - p] + lead) % p
        while len(c) > 1 and c[-1] == 0:
            c.pop()
    c += [0] * (p - len(c))
    return c


def poly_mul_oracle(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return poly_reduce_oracle(out, p)


def poly_pow_oracle(a, e, p):
    out = [1]
    for _ in range(e):
        out = poly_mul_oracle(out, a, p)
    return out


# --- prime field basics -----------------------------------------------------

def test_prime_field_mul():
    a = GF5.element(3)
    b = GF5.element(4)
    assert (a * b) == GF5.element(2)


def test_prime_field_axioms_exhaustive():
    els = [GF5.element(i) for i in range(5)]
    for a in els:
        for b in els:
            assert a + b == b + a
            assert a * b == b * a
            for c in els:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c
    for a in els[1:]:
        assert a * a.inverse() == GF5.one()


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF5.zero().inverse()
    with pytest.raises(ZeroDivisionError):
        GF5E.zero().inverse()


def test_params_validation():
    with pytest.raises(ValueError):
        FieldParams(4, 1)
    with pytest.raises(ValueError):
        FieldParams(3, 1)
    with pytest.raises(ValueError):
        FieldParams(5, 3)


# --- extension field ---------------------------------------------------------

def test_generator_relation():
    w = GF5E.gen()
    assert w**5 == w + 1


def test_artin_schreier_solution_against_oracle():
    # (2w)^5 - 2w should equal 2, and must match the long-division oracle
    p = 5
    lhs = poly_pow_oracle([0, 2], 5, p)
    lhs[1] = (lhs[1] - 2) % p
    assert lhs == [2, 0, 0, 0, 0]
    w = GF5E.gen()
    a = GF5E.element(2) * w
    assert a**5 - a == GF5E.element(2)


def test_artin_schreier_all_constants():
    for params in (GF5E, GF7E):
        w = params.gen()
        for c in range(params.p):
            a = params.element(c) * w
            assert a**params.p - a == params.element(c)


def test_ext_mul_matches_oracle_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        ac = [int(x) for x in rng.integers(0, 5, size=5)]
        bc = [int(x) for x in rng.integers(0, 5, size=5)]
        got = GF5E.element(ac) * GF5E.element(bc)
        want = GF5E.element(poly_mul_oracle(ac, bc, 5))
        assert got == want


def test_frobenius_orbit_returns_after_p_steps():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = GF5E.element([int(x) for x in rng.integers(0, 5, size=5)])
        b = a
        for _ in range(5):
            b = b.frobenius()
        assert b == a


def test_ext_inverse_random():
    rng = np.random.default_rng(13)
    for _ in range(30):
        a = GF5E.element([int(x) for x in rng.integers(0, 5, size=5)])
        if a.is_zero():
            continue
        assert a * a.inverse() == GF5E.one()


def test_field_axioms_ext_sampled():
    rng = np.random.default_rng(17)
    els = [GF5E.element([int(x) for x in rng.integers(0, 5, size=5)]) for _ in range(8)]
    for a in els:
        for b in els:
            for c in els:
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


def test_repr_uses_w_symbol():
    w = GF5E.gen()
    s = repr(GF5E.element(2) * w + GF5E.element(3))
    assert "w" in s and "2" in s and "3" in s


# --- matrices -----------------------------------------------------------------

def random_matrix(params, rows, cols, rng):
    arr = rng.integers(0, params.p, size=(rows, cols, params.m))
    return Matrix(params, arr.astype(np.int64))


def naive_matmul(a: Matrix, b: Matrix) -> Matrix:
    out = Matrix.zeros(a.params, a.rows, b.cols)
    ents = [
        [
            sum((a.get(i, k) * b.get(k, j) for k in range(a.cols)), a.params.zero())
            for j in range(b.cols)
        ]
        for i in range(a.rows)
    ]
    return Matrix.from_rows(a.params, ents) if a.rows else out


def test_matmul_matches_naive():
    rng = np.random.default_rng(23)
    for params in (GF5, GF5E):
        a = random_matrix(params, 4, 3, rng)
        b = random_matrix(params, 3, 5, rng)
        assert (a @ b) == naive_matmul(a, b)


def test_matmul_associative():
    rng = np.random.default_rng(29)
    for params in (GF5, GF5E):
        a = random_matrix(params, 3, 4, rng)
        b = random_matrix(params, 4, 2, rng)
        c = random_matrix(params, 2, 3, rng)
        assert (a @ b) @ c == a @ (b @ c)


def test_rref_known_rank_one():
    m = Matrix.from_rows(GF5, [[1, 2], [3, 6]])
    R, rank, pivots = m.rref()
    assert rank == 1
    assert pivots == (0,)
    assert R.get(0, 0) == GF5.one()
    assert R.get(0, 1) == GF5.element(2)
    assert not R.arr[1].any()


def test_rref_identity_and_zero():
    eye = Matrix.identity(GF5, 3)
    R, rank, pivots = eye.rref()
    assert rank == 3 and pivots == (0, 1, 2) and R == eye
    z = Matrix.zeros(GF5, 2, 4)
    R, rank, pivots = z.rref()
    assert rank == 0 and pivots == ()


def test_rref_idempotent():
    rng = np.random.default_rng(31)
    for params in (GF5, GF5E):
        for _ in range(5):
            m = random_matrix(params, 5, 7, rng)
            R1, r1, p1 = m.rref()
            R2, r2, p2 = R1.rref()
            assert R1 == R2 and r1 == r2 and p1 == p2


def test_nullspace_properties():
    rng = np.random.default_rng(37)
    for params in (GF5, GF5E):
        for _ in range(5):
            m = random_matrix(params, 4, 6, rng)
            ns = m.nullspace()
            rank = m.rank()
            assert ns.cols == 6 - rank  # rank-nullity
            assert (m @ ns).is_zero()
            assert ns.transpose().rank() == ns.cols  # columns independent


def test_nullspace_of_identity_empty():
    assert Matrix.identity(GF5, 3).nullspace().cols == 0


def test_solve_roundtrip():
    rng = np.random.default_rng(41)
    for params in (GF5, GF5E):
        for _ in range(5):
            a = random_matrix(params, 5, 4, rng)
            x0 = random_matrix(params, 4, 2, rng)
            b = a @ x0
            x = a.solve(b)
            assert a @ x == b


def test_solve_no_solution():
    a = Matrix.zeros(GF5, 2, 2)
    b = Matrix.from_rows(GF5, [[1], [0]])
    with pytest.raises(NoSolutionError):
        a.solve(b)


def test_matrix_text_roundtrip():
    rng = np.random.default_rng(43)
    for params in (GF5, GF5E):
        m = random_matrix(params, 3, 4, rng)
        m2 = Matrix.from_text(m.to_text())
        assert m2 == m
        assert m2.params == params


def test_matpow():
    rng = np.random.default_rng(47)
    m = random_matrix(GF5E, 4, 4, rng)
    assert m.matpow(3) == m @ m @ m
    assert m.matpow(0) == Matrix.identity(GF5E, 4)


# --- RowSpace ------------------------------------------------------------------

def test_rowspace_matches_matrix_rank():
    rng = np.random.default_rng(53)
    for params in (GF5, GF5E):
        vecs = [rng.integers(0, params.p, size=(6, params.m)).astype(np.int64) for _ in range(8)]
        rs = RowSpace(params, 6)
        for v in vecs:
            rs.add(v)
        m = Matrix(params, np.stack(vecs))
        assert rs.dim == m.rank()
        for v in vecs:
            assert rs.contains(v)


def test_rowspace_rejects_dependent():
    rs = RowSpace(GF5, 3)
    v1 = np.array([[1], [2], [0]], dtype=np.int64)
    assert rs.add(v1)
    assert not rs.add((3 * v1) % 5)
    assert rs.dim == 1


def test_rowspace_sorted_rows_canonical():
    rng = np.random.default_rng(59)
    rs = RowSpace(GF5E, 5)
    for _ in range(10):
        rs.add(rng.integers(0, 5, size=(5, 5)).astype(np.int64))
    rows = rs.sorted_rows()
    pivots = rs.sorted_pivots()
    # pivot entries are 1, pivot columns are otherwise zero
    for i, pc in enumerate(pivots):
        assert rows[i, pc, 0] == 1 and not rows[i, pc, 1:].any()
        col = rows[:, pc, :]
        assert int(col.any(axis=1).sum()) == 1


# --- SparseOp --------------------------------------------------------------------

def test_sparseop_apply_matches_dense():
    rng = np.random.default_rng(61)
    for params in (GF5, GF5E):
        arr = rng.integers(0, params.p, size=(6, 4, params.m)).astype(np.int64)
        op = SparseOp.from_dense(params, arr)
        vec = rng.integers(0, params.p, size=(4, params.m)).astype(np.int64)
        dense = Matrix(params, arr)
        vm = Matrix(params, vec[:, None, :])
        assert np.array_equal(op.apply(vec), (dense @ vm).arr[:, 0, :])


def test_sparseop_matmul_matches_dense():
    rng = np.random.default_rng(67)
    for params in (GF5, GF5E):
        a = rng.integers(0, params.p, size=(4, 5, params.m)).astype(np.int64)
        b = rng.integers(0, params.p, size=(5, 3, params.m)).astype(np.int64)
        got = SparseOp.from_dense(params, a) @ SparseOp.from_dense(params, b)
        want = Matrix(params, a) @ Matrix(params, b)
        assert got.to_matrix() == want


def test_sparseop_matpow_matches_dense():
    rng = np.random.default_rng(71)
    arr = rng.integers(0, 5, size=(4, 4, 5)).astype(np.int64)
    op = SparseOp.from_dense(GF5E, arr)
    assert op.matpow(5).to_matrix() == Matrix(GF5E, arr).matpow(5)


def test_sparseop_transpose_and_column():
    rng = np.random.default_rng(73)
    arr = rng.integers(0, 5, size=(4, 6, 5)).astype(np.int64)
    op = SparseOp.from_dense(GF5E, arr)
    assert np.array_equal(op.transpose().to_dense(), arr.transpose(1, 0, 2))
    assert np.array_equal(op.column(2), arr[:, 2, :])
