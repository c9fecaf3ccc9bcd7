"""Tests for the BLAS subset: containers, level-1/2/3 kernels, parallel variants."""

import random
from fractions import Fraction

import numpy as np
import pytest

from mpkit.ddarith import DDComplex, DDouble, dd_add, dd_div, dd_mul, dd_sub
from mpkit.mpblas import (
    BlasError,
    Cgemm,
    Matrix,
    Raxpy,
    Raxpy_par,
    Rdot,
    Rdot_par,
    Rgemm,
    Rgemm_par,
    Rgemv,
    Rnrm2,
    Rsyrk,
    Rtrsm,
    Vector,
    get_backend,
    iRamax,
    resolve_threads,
)
from mpkit import testkit

EPS_DD = 4.93038065763131995214781514484568e-32


def as_f64(v):
    return v.hi + v.lo if isinstance(v, DDouble) else float(v)


def rand_rows(rng, m, n):
    return [[rng.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(m)]


def rand_list(rng, n):
    return [rng.uniform(-1.0, 1.0) for _ in range(n)]


def dd_exact(v):
    return Fraction(v.hi) + Fraction(v.lo)


# ---------------------------------------------------------------------------
# containers

def test_matrix_column_major_addressing():
    a = Matrix(3, 2, "f64", ld=5)
    a.set(2, 1, 7.0)
    a.set(0, 0, -1.5)
    assert a.get(2, 1) == 7.0
    assert a.get(0, 0) == -1.5
    # flat layout: element (i, j) at i + j*ld
    assert a.store[0][2 + 1 * 5] == 7.0
    assert a.store[0][0] == -1.5
    v = a.view2d()
    assert v[0].shape == (3, 2)
    assert v[0][2, 1] == 7.0


def test_matrix_from_rows_round_trip():
    rows = [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]
    a = Matrix.from_rows(rows, "f64")
    assert (a.m, a.n, a.ld) == (3, 2, 3)
    assert a.to_rows() == rows
    b = Matrix.from_rows(rows, "dd")
    got = b.to_rows()
    for i in range(3):
        for j in range(2):
            assert got[i][j].hi == rows[i][j]
            assert got[i][j].lo == 0.0


def test_matrix_from_rows_accepts_dd_values():
    x = DDouble(1.0, 2.0 ** -60)
    a = Matrix.from_rows([[x]], "dd")
    got = a.get(0, 0)
    assert got.hi == x.hi and got.lo == x.lo


def test_matrix_identity():
    a = Matrix.identity(3, "dd")
    for i in range(3):
        for j in range(3):
            v = a.get(i, j)
            assert v.hi == (1.0 if i == j else 0.0)
            assert v.lo == 0.0


def test_matrix_validation():
    with pytest.raises(ValueError):
        Matrix(-1, 2)
    with pytest.raises(ValueError):
        Matrix(3, 3, ld=2)
    with pytest.raises(ValueError):
        Matrix.from_rows([[1.0, 2.0], [3.0]])


def test_matrix_astype_promotion_exact():
    rows = [[0.1, -2.5], [3.25, 1e-300]]
    a = Matrix.from_rows(rows, "f64")
    d = a.astype("dd")
    for i in range(2):
        for j in range(2):
            v = d.get(i, j)
            assert v.hi == rows[i][j] and v.lo == 0.0
    back = d.astype("f64")
    assert back.to_rows() == rows


def test_matrix_transpose():
    rows = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]
    t = Matrix.from_rows(rows, "f64").transpose()
    assert t.to_rows() == [[1.0, 4.0], [2.0, 5.0], [3.0, 6.0]]


def test_vector_strided_views():
    v = Vector.from_list([0.0, 1.0, 2.0, 3.0, 4.0, 5.0], "f64")
    fwd = v.strided(3, 2)
    assert list(fwd[0]) == [0.0, 2.0, 4.0]
    # negative stride visits from the far end, reference addressing rule
    bwd = v.strided(3, -2)
    assert list(bwd[0]) == [4.0, 2.0, 0.0]
    with pytest.raises(ValueError):
        v.strided(3, 0)
    with pytest.raises(ValueError):
        v.strided(4, 2)


def test_vector_set_get_dd():
    v = Vector(2, "dd")
    v.set(1, DDouble(0.5, 2.0 ** -70))
    got = v.get(1)
    assert got.hi == 0.5 and got.lo == 2.0 ** -70
    assert v.get(0).hi == 0.0


def test_mixed_precision_rejected():
    a = Matrix(2, 2, "f64")
    b = Matrix(2, 2, "dd")
    with pytest.raises(ValueError):
        Rgemm("N", "N", 2, 2, 2, 1.0, a, 2, b, 2, 1.0, a, 2)


# ---------------------------------------------------------------------------
# element backend vs scalar double-double chain (bitwise)

def test_dd_backend_matches_scalar_ops_bitwise():
    rng = random.Random(201)
    xs = [DDouble(rng.uniform(-1, 1), rng.uniform(-1, 1) * 2.0 ** -53)
          for _ in range(400)]
    ys = [DDouble(rng.uniform(-1, 1) + 2.5, rng.uniform(-1, 1) * 2.0 ** -53)
          for _ in range(400)]
    be = get_backend("dd")
    xv = be.from_python(xs)
    yv = be.from_python(ys)
    assert list(xv[0]) == [x.hi for x in xs]
    assert list(xv[1]) == [x.lo for x in xs]
    for name, vec_op, scal_op in [
        ("add", be.add, dd_add),
        ("sub", be.sub, dd_sub),
        ("mul", be.mul, dd_mul),
        ("div", be.div, dd_div),
    ]:
        hi, lo = vec_op(xv, yv)
        for i in range(len(xs)):
            want = scal_op(xs[i], ys[i])
            assert hi[i] == want.hi, (name, i)
            assert lo[i] == want.lo, (name, i)


def test_cdd_backend_matches_scalar_mul_bitwise():
    from mpkit.ddarith import cmul
    rng = random.Random(202)
    xs = [DDComplex(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)))
          for _ in range(100)]
    ys = [DDComplex(complex(rng.uniform(-1, 1) + 2.0, rng.uniform(-1, 1)))
          for _ in range(100)]
    be = get_backend("cdd")
    xv = be.from_python(xs)
    yv = be.from_python(ys)
    rh, rl, ih, il = be.mul(xv, yv)
    for i in range(len(xs)):
        want = cmul(xs[i], ys[i])
        assert rh[i] == want.re.hi and rl[i] == want.re.lo, i
        assert ih[i] == want.im.hi and il[i] == want.im.lo, i


# ---------------------------------------------------------------------------
# level 1

def test_raxpy_bitwise_vs_oracle_strides():
    rng = random.Random(301)
    n = 37
    for incx, incy in [(1, 1), (2, 1), (1, 3), (-1, 1), (2, -3), (-2, -1)]:
        xs = rand_list(rng, 1 + (n - 1) * abs(incx))
        ys = rand_list(rng, 1 + (n - 1) * abs(incy))
        x = Vector.from_list(xs, "f64")
        y = Vector.from_list(ys, "f64")
        Raxpy(n, 0.75, x, incx, y, incy)
        # the oracle walks the same flat buffers with reference indexing
        ref = testkit.oracle_axpy(n, 0.75, xs, incx, ys, incy)
        assert y.to_list() == ref, (incx, incy)


def test_raxpy_noop_cases():
    ys = [1.0, 2.0, 3.0]
    y = Vector.from_list(ys, "f64")
    x = Vector.from_list([9.0, 9.0, 9.0], "f64")
    Raxpy(0, 0.75, x, 1, y, 1)
    assert y.to_list() == ys
    Raxpy(3, 0.0, x, 1, y, 1)
    assert y.to_list() == ys
    Raxpy(-2, 0.75, x, 1, y, 1)
    assert y.to_list() == ys


def test_raxpy_dd_close_to_exact():
    rng = random.Random(302)
    n = 64
    xs = rand_list(rng, n)
    ys = rand_list(rng, n)
    x = Vector.from_list(xs, "dd")
    y = Vector.from_list(ys, "dd")
    alpha = DDouble(0.75)
    Raxpy(n, alpha, x, 1, y, 1)
    for i in range(n):
        exact = Fraction(3, 4) * Fraction(xs[i]) + Fraction(ys[i])
        err = abs(dd_exact(y.get(i)) - exact)
        assert err <= Fraction(2) ** -100 * (abs(exact) + 1)


def test_rdot_block_boundary_bitwise():
    rng = random.Random(303)
    for n in (1, 5, 4095, 4096, 4097, 8192, 8197):
        xs = rand_list(rng, n)
        ys = rand_list(rng, n)
        got = Rdot(n, Vector.from_list(xs, "f64"), 1,
                   Vector.from_list(ys, "f64"), 1)
        assert got == testkit.oracle_dot(n, xs, 1, ys, 1), n
    assert Rdot(0, Vector(0, "f64"), 1, Vector(0, "f64"), 1) == 0.0


def test_rdot_negative_stride_bitwise():
    rng = random.Random(304)
    n = 23
    xs = rand_list(rng, 2 * n)
    ys = rand_list(rng, n)
    got = Rdot(n, Vector.from_list(xs, "f64"), -2,
               Vector.from_list(ys, "f64"), 1)
    assert got == testkit.oracle_dot(n, xs, -2, ys, 1)


def test_rdot_dd_tighter_than_f64():
    rng = random.Random(305)
    n = 300
    xs = rand_list(rng, n)
    ys = rand_list(rng, n)
    exact = sum(Fraction(a) * Fraction(b) for a, b in zip(xs, ys))
    got = Rdot(n, Vector.from_list(xs, "dd"), 1,
               Vector.from_list(ys, "dd"), 1)
    err = abs(dd_exact(got) - exact)
    scale = sum(abs(Fraction(a) * Fraction(b)) for a, b in zip(xs, ys))
    assert err <= n * Fraction(2) ** -100 * scale


def test_rnrm2_bitwise_and_overflow_safe():
    rng = random.Random(306)
    xs = rand_list(rng, 41)
    got = Rnrm2(41, Vector.from_list(xs, "f64"), 1)
    assert got == testkit.oracle_nrm2(41, xs, 1)
    big = [1e307, -1e307, 1e307, 1e307]
    assert Rnrm2(4, Vector.from_list(big, "f64"), 1) == 2e307
    tiny = [1e-300, 1e-300]
    got = Rnrm2(2, Vector.from_list(tiny, "f64"), 1)
    assert abs(got - 1e-300 * 2 ** 0.5) < 1e-315
    assert Rnrm2(0, Vector(0, "f64"), 1) == 0.0


def test_rnrm2_dd_matches_exact_sqrt():
    xs = [3.0, 4.0]
    got = Rnrm2(2, Vector.from_list(xs, "dd"), 1)
    assert abs(float(dd_sub(got, DDouble(5.0)))) <= 100 * EPS_DD * 5.0


def test_iramax_first_maximum_wins():
    x = Vector.from_list([1.0, -3.0, 3.0, 2.0], "f64")
    assert iRamax(4, x, 1) == 2
    assert iRamax(4, x, 1) == testkit.oracle_iramax(
        4, [1.0, -3.0, 3.0, 2.0], 1)
    assert iRamax(0, x, 1) == 0
    assert iRamax(4, x, -1) == 0
    assert iRamax(1, x, 1) == 1


def test_iramax_dd_agrees_with_f64():
    rng = random.Random(307)
    xs = rand_list(rng, 57)
    a = iRamax(57, Vector.from_list(xs, "f64"), 1)
    b = iRamax(57, Vector.from_list(xs, "dd"), 1)
    assert a == b == testkit.oracle_iramax(57, xs, 1)


# ---------------------------------------------------------------------------
# level 2/3: binary64 route is bitwise against the naive oracle for every
# flag combination; the dd route tracks the exact rational answer

def test_rgemv_trans_bitwise_vs_oracle():
    rng = random.Random(401)
    m, n = 5, 4
    for trans in ("N", "T", "C"):
        ad = rand_rows(rng, m, n)
        nx = n if trans == "N" else m
        ny = m if trans == "N" else n
        xs = rand_list(rng, nx)
        ys = rand_list(rng, ny)
        a = Matrix.from_rows(ad, "f64")
        x = Vector.from_list(xs, "f64")
        y = Vector.from_list(ys, "f64")
        Rgemv(trans, m, n, 0.75, a, a.ld, x, 1, -0.5, y, 1)
        ref = testkit.oracle_gemv(trans, m, n, 0.75, ad, xs, 1, -0.5, ys, 1)
        assert y.to_list() == ref, trans


def test_rgemv_strided_bitwise_vs_oracle():
    rng = random.Random(402)
    m, n = 4, 3
    ad = rand_rows(rng, m, n)
    xs = rand_list(rng, 2 * n)
    ys = rand_list(rng, 3 * m)
    a = Matrix.from_rows(ad, "f64")
    x = Vector.from_list(xs, "f64")
    y = Vector.from_list(ys, "f64")
    Rgemv("N", m, n, 0.75, a, a.ld, x, 2, -0.5, y, -3)
    ref = testkit.oracle_gemv("N", m, n, 0.75, ad, xs, 2, -0.5, ys, -3)
    assert y.to_list() == ref


def test_rgemm_all_trans_pairs_bitwise_vs_oracle():
    rng = random.Random(403)
    m, n, k = 4, 3, 5
    for ta in ("N", "T", "C"):
        for tb in ("N", "T", "C"):
            ad = rand_rows(rng, *((m, k) if ta == "N" else (k, m)))
            bd = rand_rows(rng, *((k, n) if tb == "N" else (n, k)))
            cd = rand_rows(rng, m, n)
            a = Matrix.from_rows(ad, "f64")
            b = Matrix.from_rows(bd, "f64")
            c = Matrix.from_rows(cd, "f64")
            Rgemm(ta, tb, m, n, k, 0.75, a, a.ld, b, b.ld, -0.5, c, c.ld)
            ref = testkit.oracle_gemm(ta, tb, m, n, k, 0.75, ad, bd, -0.5, cd)
            assert c.to_rows() == ref, (ta, tb)


def test_rgemm_beta_zero_clears_c():
    # beta == 0 must overwrite, not scale
    c = Matrix.from_rows([[float("nan"), 1.0], [2.0, float("nan")]], "f64")
    a = Matrix.identity(2, "f64")
    Rgemm("N", "N", 2, 2, 2, 1.0, a, 2, a, 2, 0.0, c, 2)
    assert c.to_rows() == [[1.0, 0.0], [0.0, 1.0]]


def test_rgemm_alpha_zero_scales_only():
    cd = [[1.0, -2.0], [3.0, 4.0]]
    c = Matrix.from_rows(cd, "f64")
    a = Matrix.from_rows([[float("nan"), 0.0], [0.0, 0.0]], "f64")
    Rgemm("N", "N", 2, 2, 2, 0.0, a, 2, a, 2, -0.5, c, 2)
    assert c.to_rows() == [[-0.5, 1.0], [-1.5, -2.0]]


def test_rgemm_degenerate_dims_noop():
    c = Matrix.from_rows([[5.0]], "f64")
    a = Matrix(1, 0, "f64")
    Rgemm("N", "N", 1, 1, 0, 0.75, a, 1, a, 1, 1.0, c, 1)
    assert c.get(0, 0) == 5.0
    Rgemm("N", "N", 0, 0, 0, 0.75, a, 1, a, 1, 1.0, c, 1)
    assert c.get(0, 0) == 5.0


def test_rgemm_respects_lda_submatrix():
    # operate on the top-left 2x2 of a 4x4 allocation
    rows = [[1.0, 2.0, 9.0, 9.0], [3.0, 4.0, 9.0, 9.0],
            [9.0, 9.0, 9.0, 9.0], [9.0, 9.0, 9.0, 9.0]]
    a = Matrix.from_rows(rows, "f64")
    c = Matrix.from_rows(rows, "f64")
    Rgemm("N", "N", 2, 2, 2, 1.0, a, a.ld, a, a.ld, 0.0, c, c.ld)
    ref = np.array(rows)[:2, :2] @ np.array(rows)[:2, :2]
    assert c.get(0, 0) == ref[0, 0] and c.get(1, 1) == ref[1, 1]
    # padding rows/cols untouched
    assert c.get(2, 2) == 9.0 and c.get(0, 2) == 9.0


def test_rgemm_dd_tracks_exact_rational():
    rng = random.Random(404)
    n = 4
    ad = rand_rows(rng, n, n)
    bd = rand_rows(rng, n, n)
    cd = rand_rows(rng, n, n)
    a = Matrix.from_rows(ad, "dd")
    b = Matrix.from_rows(bd, "dd")
    c = Matrix.from_rows(cd, "dd")
    Rgemm("N", "N", n, n, n, DDouble(0.75), a, a.ld, b, b.ld,
          DDouble(-0.5), c, c.ld)
    fa, fb, fc = ([[Fraction(v) for v in row] for row in m_]
                  for m_ in (ad, bd, cd))
    for i in range(n):
        for j in range(n):
            exact = (Fraction(3, 4)
                     * sum(fa[i][l] * fb[l][j] for l in range(n))
                     - Fraction(1, 2) * fc[i][j])
            err = abs(dd_exact(c.get(i, j)) - exact)
            assert err <= (n + 2) * Fraction(2) ** -102 * (abs(exact) + 1)


def test_rsyrk_triangles_bitwise_vs_oracle():
    rng = random.Random(405)
    n, k = 4, 3
    for uplo in ("U", "L"):
        for trans in ("N", "T"):
            ad = rand_rows(rng, *((n, k) if trans == "N" else (k, n)))
            cd = rand_rows(rng, n, n)
            a = Matrix.from_rows(ad, "f64")
            c = Matrix.from_rows(cd, "f64")
            Rsyrk(uplo, trans, n, k, 0.75, a, a.ld, -0.5, c, c.ld)
            ref = testkit.oracle_syrk(uplo, trans, n, k, 0.75, ad, -0.5, cd)
            assert c.to_rows() == ref, (uplo, trans)
            # opposite triangle untouched
            for i in range(n):
                for j in range(n):
                    inside = j >= i if uplo == "U" else j <= i
                    if not inside:
                        assert c.get(i, j) == cd[i][j]


def test_rtrsm_all_sixteen_combos_bitwise_vs_oracle():
    rng = random.Random(406)
    m, n = 4, 3
    for side in ("L", "R"):
        for uplo in ("U", "L"):
            for trans in ("N", "T"):
                for diag in ("N", "U"):
                    na = m if side == "L" else n
                    ad = rand_rows(rng, na, na)
                    for i in range(na):
                        ad[i][i] += 2.0  # keep well conditioned
                    bd = rand_rows(rng, m, n)
                    a = Matrix.from_rows(ad, "f64")
                    b = Matrix.from_rows(bd, "f64")
                    Rtrsm(side, uplo, trans, diag, m, n, 0.75,
                          a, a.ld, b, b.ld)
                    ref = testkit.oracle_trsm(side, uplo, trans, diag,
                                              m, n, 0.75, ad, bd)
                    assert b.to_rows() == ref, (side, uplo, trans, diag)


def test_rtrsm_solves_triangular_system_dd():
    # L X = alpha B recovered: L (X) should reproduce alpha*B closely
    rng = random.Random(407)
    m, n = 5, 2
    ad = rand_rows(rng, m, m)
    for i in range(m):
        ad[i][i] += 2.0
        for j in range(i + 1, m):
            ad[i][j] = 0.0
    bd = rand_rows(rng, m, n)
    a = Matrix.from_rows(ad, "dd")
    b = Matrix.from_rows(bd, "dd")
    Rtrsm("L", "L", "N", "N", m, n, DDouble(1.0), a, a.ld, b, b.ld)
    la = np.array(ad)
    x = np.array([[as_f64(b.get(i, j)) for j in range(n)] for i in range(m)])
    resid = np.abs(la @ x - np.array(bd)).max()
    assert resid < 1e-14


def test_cgemm_matches_complex_oracle():
    rng = random.Random(408)
    n = 3

    def crand():
        return complex(rng.uniform(-1, 1), rng.uniform(-1, 1))

    ad = [[crand() for _ in range(n)] for _ in range(n)]
    bd = [[crand() for _ in range(n)] for _ in range(n)]
    cd = [[crand() for _ in range(n)] for _ in range(n)]
    alpha, beta = complex(0.75, -0.25), complex(-0.5, 0.125)

    # exact rational complex arithmetic: values as (Fraction, Fraction)
    def fc(z):
        return (Fraction(z.real), Fraction(z.imag))

    def fmul(x, y):
        return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def fadd(x, y):
        return (x[0] + y[0], x[1] + y[1])

    ref = [[fadd(fmul(fc(alpha),
                      [sum(fmul(fc(ad[i][l]), fc(bd[l][j]))[p]
                           for l in range(n)) for p in (0, 1)]),
                 fmul(fc(beta), fc(cd[i][j])))
            for j in range(n)] for i in range(n)]
    for precision, tol in (("c64", 1e-14), ("cdd", 1e-28)):
        a = Matrix.from_rows(ad, precision)
        b = Matrix.from_rows(bd, precision)
        c = Matrix.from_rows(cd, precision)
        Cgemm("N", "N", n, n, n, alpha, a, a.ld, b, b.ld, beta, c, c.ld)
        for i in range(n):
            for j in range(n):
                got = c.get(i, j)
                if precision == "c64":
                    gre, gim = Fraction(got.real), Fraction(got.imag)
                else:
                    gre = Fraction(got.re.hi) + Fraction(got.re.lo)
                    gim = Fraction(got.im.hi) + Fraction(got.im.lo)
                diff = max(abs(gre - ref[i][j][0]), abs(gim - ref[i][j][1]))
                assert diff < tol, (precision, i, j)


def test_cgemm_conjugate_transpose():
    a = Matrix.from_rows([[complex(1, 2), complex(3, -1)],
                          [complex(0, 1), complex(2, 2)]], "c64")
    b = Matrix.identity(2, "c64")
    c = Matrix(2, 2, "c64")
    Cgemm("C", "N", 2, 2, 2, complex(1, 0), a, 2, b, 2, complex(0, 0), c, 2)
    ad = np.array([[1 + 2j, 3 - 1j], [0 + 1j, 2 + 2j]])
    ref = ad.conj().T
    for i in range(2):
        for j in range(2):
            assert c.get(i, j) == ref[i, j]


# ---------------------------------------------------------------------------
# invalid-argument reporting (reference argument numbering, identical
# across precisions)

GEMM_BAD = [
    (("X", "N", 2, 2, 2), 1),
    (("N", "X", 2, 2, 2), 2),
    (("N", "N", -1, 2, 2), 3),
    (("N", "N", 2, -1, 2), 4),
    (("N", "N", 2, 2, -1), 5),
]


def test_rgemm_error_indices_both_precisions():
    for precision in ("f64", "dd"):
        a = Matrix(2, 2, precision)
        one = DDouble(1.0) if precision == "dd" else 1.0
        for (ta, tb, m, n, k), want in GEMM_BAD:
            with pytest.raises(BlasError) as exc:
                Rgemm(ta, tb, m, n, k, one, a, 2, a, 2, one, a, 2)
            assert exc.value.index == want, (precision, want)
        # leading-dimension checks
        for args, want in [((1, 8), 8), ((1, 10), 10), ((1, 13), 13)]:
            lds = [2, 2, 2]
            lds[(args[1] - 8) // 2 if args[1] != 13 else 2] = 1
            with pytest.raises(BlasError) as exc:
                Rgemm("N", "N", 2, 2, 2, one, a, lds[0], a, lds[1],
                      one, a, lds[2])
            assert exc.value.index == want


def test_rgemv_error_indices():
    a = Matrix(3, 3, "f64")
    v = Vector(3, "f64")
    cases = [
        (lambda: Rgemv("X", 3, 3, 1.0, a, 3, v, 1, 1.0, v, 1), 1),
        (lambda: Rgemv("N", -1, 3, 1.0, a, 3, v, 1, 1.0, v, 1), 2),
        (lambda: Rgemv("N", 3, -1, 1.0, a, 3, v, 1, 1.0, v, 1), 3),
        (lambda: Rgemv("N", 3, 3, 1.0, a, 2, v, 1, 1.0, v, 1), 6),
        (lambda: Rgemv("N", 3, 3, 1.0, a, 3, v, 0, 1.0, v, 1), 8),
        (lambda: Rgemv("N", 3, 3, 1.0, a, 3, v, 1, 1.0, v, 0), 11),
    ]
    for fn, want in cases:
        with pytest.raises(BlasError) as exc:
            fn()
        assert exc.value.index == want


def test_rsyrk_rtrsm_error_indices():
    a = Matrix(3, 3, "f64")
    syrk = [
        (lambda: Rsyrk("X", "N", 3, 3, 1.0, a, 3, 1.0, a, 3), 1),
        (lambda: Rsyrk("U", "N", -1, 3, 1.0, a, 3, 1.0, a, 3), 3),
        (lambda: Rsyrk("U", "N", 3, -1, 1.0, a, 3, 1.0, a, 3), 4),
        (lambda: Rsyrk("U", "N", 3, 3, 1.0, a, 2, 1.0, a, 3), 7),
        (lambda: Rsyrk("U", "N", 3, 3, 1.0, a, 3, 1.0, a, 2), 10),
    ]
    trsm = [
        (lambda: Rtrsm("X", "U", "N", "N", 3, 3, 1.0, a, 3, a, 3), 1),
        (lambda: Rtrsm("L", "X", "N", "N", 3, 3, 1.0, a, 3, a, 3), 2),
        (lambda: Rtrsm("L", "U", "X", "N", 3, 3, 1.0, a, 3, a, 3), 3),
        (lambda: Rtrsm("L", "U", "N", "X", 3, 3, 1.0, a, 3, a, 3), 4),
        (lambda: Rtrsm("L", "U", "N", "N", -1, 3, 1.0, a, 3, a, 3), 5),
        (lambda: Rtrsm("L", "U", "N", "N", 3, -1, 1.0, a, 3, a, 3), 6),
        (lambda: Rtrsm("L", "U", "N", "N", 3, 3, 1.0, a, 2, a, 3), 9),
        (lambda: Rtrsm("L", "U", "N", "N", 3, 3, 1.0, a, 3, a, 2), 11),
    ]
    for fn, want in syrk + trsm:
        with pytest.raises(BlasError) as exc:
            fn()
        assert exc.value.index == want


def test_error_message_uses_reference_wording():
    a = Matrix(2, 2, "f64")
    with pytest.raises(BlasError, match="parameter number 1"):
        Rgemm("X", "N", 2, 2, 2, 1.0, a, 2, a, 2, 1.0, a, 2)


def test_error_index_parity_between_precisions():
    for routine in ("Rgemv", "Rgemm", "Rsyrk", "Rtrsm"):
        rep = testkit.compare_vs_oracle(routine, 3, seed=11)
        assert rep.passed


# ---------------------------------------------------------------------------
# deterministic parallel variants

def test_raxpy_par_bitwise_equal_any_thread_count():
    rng = random.Random(501)
    n = 501
    xs = rand_list(rng, n)
    ys = rand_list(rng, n)
    for precision in ("f64", "dd"):
        base = Vector.from_list(ys, precision)
        Raxpy(n, 0.75, Vector.from_list(xs, precision), 1, base, 1)
        want = [(v.hi, v.lo) if isinstance(v, DDouble) else v
                for v in base.to_list()]
        for t in (1, 2, 3, 4, 8):
            y = Vector.from_list(ys, precision)
            Raxpy_par(n, 0.75, Vector.from_list(xs, precision), 1, y, 1, t=t)
            got = [(v.hi, v.lo) if isinstance(v, DDouble) else v
                   for v in y.to_list()]
            assert got == want, (precision, t)


def test_rdot_par_bitwise_equal_any_thread_count():
    rng = random.Random(502)
    n = 3 * 4096 + 17  # spans several summation blocks
    xs = rand_list(rng, n)
    ys = rand_list(rng, n)
    for precision in ("f64", "dd"):
        x = Vector.from_list(xs, precision)
        y = Vector.from_list(ys, precision)
        want = Rdot(n, x, 1, y, 1)
        for t in (1, 2, 3, 4, 8):
            got = Rdot_par(n, x, 1, y, 1, t=t)
            if precision == "dd":
                assert got.hi == want.hi and got.lo == want.lo, t
            else:
                assert got == want, t


def test_rgemm_par_bitwise_equal_any_thread_count():
    rng = random.Random(503)
    n = 8
    ad = rand_rows(rng, n, n)
    bd = rand_rows(rng, n, n)
    cd = rand_rows(rng, n, n)
    for precision in ("f64", "dd"):
        cref = Matrix.from_rows(cd, precision)
        Rgemm("N", "N", n, n, n, 0.75,
              Matrix.from_rows(ad, precision), n,
              Matrix.from_rows(bd, precision), n, -0.5, cref, n)
        want = [[(v.hi, v.lo) if isinstance(v, DDouble) else v
                 for v in row] for row in cref.to_rows()]
        for t in (1, 2, 3, 4, 8):
            c = Matrix.from_rows(cd, precision)
            Rgemm_par("N", "N", n, n, n, 0.75,
                      Matrix.from_rows(ad, precision), n,
                      Matrix.from_rows(bd, precision), n, -0.5, c, n, t=t)
            got = [[(v.hi, v.lo) if isinstance(v, DDouble) else v
                    for v in row] for row in c.to_rows()]
            assert got == want, (precision, t)


def test_rgemm_par_validates_like_sequential():
    a = Matrix(2, 2, "f64")
    with pytest.raises(BlasError) as exc:
        Rgemm_par("X", "N", 2, 2, 2, 1.0, a, 2, a, 2, 1.0, a, 2, t=4)
    assert exc.value.index == 1


def test_resolve_threads(monkeypatch):
    assert resolve_threads(3) == 3
    with pytest.raises(ValueError):
        resolve_threads(0)
    monkeypatch.delenv("MPKIT_THREADS", raising=False)
    assert resolve_threads() == 1
    monkeypatch.setenv("MPKIT_THREADS", "5")
    assert resolve_threads() == 5
    monkeypatch.setenv("MPKIT_THREADS", "junk")
    assert resolve_threads() == 1
