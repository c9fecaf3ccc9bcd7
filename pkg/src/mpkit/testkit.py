"""Residual-ratio quality assurance for the kit.

Three legs:
  * seeded matrix generators (identical binary64 draws feed every
    precision, so cross-precision comparisons see the same inputs),
  * an independent naive binary64 oracle for the BLAS subset, written
    as plain scalar loops so it cannot share bugs with the kernels,
  * LAPACK-style residual ratios r = ||residual|| / (dim * ||A|| * eps)
    with the classic pass threshold of 30.

`run_suite` drives the whole thing over seed/size grids and can emit a
text report, a CSV, and a PNG chart of the ratios.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ddarith import DDouble, _round_fraction, machine_params
from .mpblas.elem import get_backend
from .mpblas.level1 import Raxpy, Rdot, Rnrm2, iRamax
from .mpblas.level23 import Rgemm, Rgemv, Rsyrk, Rtrsm
from .mpblas.matrix import BlasError, Matrix, Vector
from .mplapack import (Rgees, Rgesvd, Rgetrf, Rgetri, Rgetrs, Rpotrf, Rsyev,
                       workspace_query)
from .mplapack.lu import laswp

THRESHOLD = 30.0

_KIND_CODES = {
    "random-uniform": 1,
    "random-symmetric": 2,
    "random-spd": 3,
    "hilbert": 4,
    "frank": 5,
    "diagonal-given": 6,
}


@dataclass(frozen=True)
class MatrixGenSpec:
    """Reproducible matrix recipe: same spec, same matrix, always."""

    kind: str
    m: int
    n: int
    seed: int = 0
    diag: tuple = ()

    def __post_init__(self):
        if self.kind not in _KIND_CODES:
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        if self.m < 0 or self.n < 0:
            raise ValueError("dimensions must be nonnegative")
        if self.kind == "diagonal-given" and len(self.diag) != min(self.m,
                                                                   self.n):
            raise ValueError("diagonal-given needs min(m, n) diagonal values")


def _rng(spec):
    return np.random.default_rng(
        np.random.SeedSequence([spec.seed, _KIND_CODES[spec.kind],
                                spec.m, spec.n]))


def _draw_rows(spec):
    """binary64-exact entry grid for the random kinds."""
    m, n = spec.m, spec.n
    g = _rng(spec)
    if spec.kind == "random-uniform":
        return g.uniform(-1.0, 1.0, (m, n))
    if spec.kind == "random-symmetric":
        a = g.uniform(-1.0, 1.0, (n, n))
        return (a + a.T) / 2.0
    if spec.kind == "random-spd":
        mfac = g.uniform(-1.0, 1.0, (n, n))
        return mfac.T @ mfac + float(n) * np.eye(n)
    raise ValueError(spec.kind)


def gen_matrix(spec, precision="f64"):
    """Materialize the spec at the requested precision.

    Random kinds are drawn once as binary64 and promoted, so "f64" and
    "dd" instantiations receive bit-identical inputs.  Hilbert entries
    are correctly rounded to the active precision from the exact
    rationals 1/(i+j-1); Frank and diagonal kinds are exact integers or
    caller-supplied binary64 values.
    """
    m, n = spec.m, spec.n
    if spec.kind in ("random-uniform", "random-symmetric", "random-spd"):
        return Matrix.from_rows(_draw_rows(spec).tolist(), precision)
    a = Matrix(m, n, precision)
    if spec.kind == "hilbert":
        for j in range(n):
            for i in range(m):
                q = Fraction(1, i + j + 1)
                if precision == "dd":
                    a.set(i, j, DDouble._raw(*_round_fraction(q)))
                else:
                    a.set(i, j, float(q))
    elif spec.kind == "frank":
        for j in range(n):
            for i in range(m):
                v = float(n - max(i, j)) if j >= i - 1 else 0.0
                a.set(i, j, DDouble(v) if precision == "dd" else v)
    elif spec.kind == "diagonal-given":
        for i in range(min(m, n)):
            v = float(spec.diag[i])
            a.set(i, i, DDouble(v) if precision == "dd" else v)
    return a


@dataclass
class ResidualReport:
    """One test-ratio outcome; passed means ratio < threshold."""

    name: str
    dims: tuple
    ratio: float
    threshold: float = THRESHOLD
    passed: bool = field(init=False)

    def __post_init__(self):
        self.ratio = float(self.ratio)
        self.passed = self.ratio < self.threshold

    def line(self):
        d = "x".join(str(v) for v in self.dims)
        return "%-34s %8s %12.4e %6.1f %s" % (
            self.name, d, self.ratio, self.threshold,
            "PASS" if self.passed else "FAIL")


# ---------------------------------------------------------------------------
# independent binary64 oracle (plain scalar loops, reference orders)

def oracle_axpy(n, alpha, x, incx, y, incy):
    y = list(y)
    if n <= 0 or alpha == 0.0:
        return y
    ix = 0 if incx > 0 else (1 - n) * incx
    iy = 0 if incy > 0 else (1 - n) * incy
    for _ in range(n):
        y[iy] = y[iy] + alpha * x[ix]
        ix += incx
        iy += incy
    return y


def oracle_dot(n, x, incx, y, incy):
    if n <= 0:
        return 0.0
    ix = 0 if incx > 0 else (1 - n) * incx
    iy = 0 if incy > 0 else (1 - n) * incy
    # 4096-wide blocks folded left to right, matching Rdot's fixed shape
    total = None
    block = 0.0
    cnt = 0
    for _ in range(n):
        block = block + x[ix] * y[iy]
        cnt += 1
        if cnt == 4096:
            total = block if total is None else total + block
            block = 0.0
            cnt = 0
        ix += incx
        iy += incy
    if cnt:
        total = block if total is None else total + block
    return 0.0 if total is None else total


def oracle_nrm2(n, x, incx):
    if n < 1:
        return 0.0
    if n == 1:
        return abs(x[0])
    scale = 0.0
    ssq = 1.0
    ix = 0 if incx > 0 else (1 - n) * incx
    for _ in range(n):
        v = x[ix]
        if v != 0.0:
            av = abs(v)
            if scale < av:
                ssq = 1.0 + ssq * (scale / av) ** 2
                scale = av
            else:
                ssq = ssq + (av / scale) ** 2
        ix += incx
    import math
    return scale * math.sqrt(ssq)


def oracle_iramax(n, x, incx):
    if n < 1 or incx <= 0:
        return 0
    if n == 1:
        return 1
    best = 1
    ix = incx
    dmax = abs(x[0])
    for i in range(1, n):
        if abs(x[ix]) > dmax:
            best = i + 1
            dmax = abs(x[ix])
        ix += incx
    return best


def oracle_gemm(transa, transb, m, n, k, alpha, a, b, beta, c):
    """a, b, c are row-major nested lists; returns the updated c."""
    c = [row[:] for row in c]
    nota = transa.upper() == "N"
    notb = transb.upper() == "N"
    for j in range(n):
        if beta == 0.0:
            for i in range(m):
                c[i][j] = 0.0
        elif beta != 1.0:
            for i in range(m):
                c[i][j] = beta * c[i][j]
        if alpha == 0.0:
            continue
        if nota and notb:
            for l in range(k):
                temp = alpha * b[l][j]
                for i in range(m):
                    c[i][j] = c[i][j] + temp * a[i][l]
        elif (not nota) and notb:
            for i in range(m):
                temp = 0.0
                for l in range(k):
                    temp = temp + a[l][i] * b[l][j]
                c[i][j] = c[i][j] + alpha * temp
        elif nota:
            for l in range(k):
                temp = alpha * b[j][l]
                for i in range(m):
                    c[i][j] = c[i][j] + temp * a[i][l]
        else:
            for i in range(m):
                temp = 0.0
                for l in range(k):
                    temp = temp + a[l][i] * b[j][l]
                c[i][j] = c[i][j] + alpha * temp
    return c


def oracle_gemv(trans, m, n, alpha, a, x, incx, beta, y, incy):
    y = list(y)
    leny = m if trans.upper() == "N" else n
    lenx = n if trans.upper() == "N" else m
    ky = 0 if incy > 0 else (1 - leny) * incy
    kx = 0 if incx > 0 else (1 - lenx) * incx
    if beta != 1.0:
        iy = ky
        for _ in range(leny):
            y[iy] = 0.0 if beta == 0.0 else beta * y[iy]
            iy += incy
    if alpha == 0.0:
        return y
    if trans.upper() == "N":
        jx = kx
        for j in range(n):
            temp = alpha * x[jx]
            iy = ky
            for i in range(m):
                y[iy] = y[iy] + temp * a[i][j]
                iy += incy
            jx += incx
    else:
        jy = ky
        for j in range(n):
            temp = 0.0
            ix = kx
            for i in range(m):
                temp = temp + a[i][j] * x[ix]
                ix += incx
            y[jy] = y[jy] + alpha * temp
            jy += incy
    return y


def oracle_syrk(uplo, trans, n, k, alpha, a, beta, c):
    c = [row[:] for row in c]
    upper = uplo.upper() == "U"
    for j in range(n):
        rows = range(0, j + 1) if upper else range(j, n)
        if beta == 0.0:
            for i in rows:
                c[i][j] = 0.0
        elif beta != 1.0:
            for i in rows:
                c[i][j] = beta * c[i][j]
        if alpha == 0.0:
            continue
        if trans.upper() == "N":
            for l in range(k):
                temp = alpha * a[j][l]
                for i in rows:
                    c[i][j] = c[i][j] + temp * a[i][l]
        else:
            for i in rows:
                temp = 0.0
                for l in range(k):
                    temp = temp + a[l][i] * a[l][j]
                c[i][j] = c[i][j] + alpha * temp
    return c


def oracle_trsm(side, uplo, transa, diag, m, n, alpha, a, b):
    b = [row[:] for row in b]
    lside = side.upper() == "L"
    upper = uplo.upper() == "U"
    nounit = diag.upper() == "N"
    nota = transa.upper() == "N"
    if alpha == 0.0:
        return [[0.0] * n for _ in range(m)]
    if lside and nota:
        for j in range(n):
            if alpha != 1.0:
                for i in range(m):
                    b[i][j] = alpha * b[i][j]
            ks = range(m - 1, -1, -1) if upper else range(m)
            for k in ks:
                if b[k][j] != 0.0:
                    if nounit:
                        b[k][j] = b[k][j] / a[k][k]
                    irange = range(k) if upper else range(k + 1, m)
                    for i in irange:
                        b[i][j] = b[i][j] - b[k][j] * a[i][k]
    elif lside:
        for j in range(n):
            iorder = range(m) if upper else range(m - 1, -1, -1)
            for i in iorder:
                temp = alpha * b[i][j]
                krange = range(i) if upper else range(i + 1, m)
                for k in krange:
                    temp = temp - a[k][i] * b[k][j]
                if nounit:
                    temp = temp / a[i][i]
                b[i][j] = temp
    elif nota:
        jorder = range(n) if upper else range(n - 1, -1, -1)
        for j in jorder:
            if alpha != 1.0:
                for i in range(m):
                    b[i][j] = alpha * b[i][j]
            krange = range(j) if upper else range(j + 1, n)
            for k in krange:
                if a[k][j] != 0.0:
                    for i in range(m):
                        b[i][j] = b[i][j] - a[k][j] * b[i][k]
            if nounit:
                temp = 1.0 / a[j][j]
                for i in range(m):
                    b[i][j] = temp * b[i][j]
    else:
        korder = range(n - 1, -1, -1) if upper else range(n)
        for k in korder:
            if nounit:
                temp = 1.0 / a[k][k]
                for i in range(m):
                    b[i][k] = temp * b[i][k]
            jrange = range(k) if upper else range(k + 1, n)
            for j in jrange:
                if a[j][k] != 0.0:
                    temp = a[j][k]
                    for i in range(m):
                        b[i][j] = b[i][j] - temp * b[i][k]
            if alpha != 1.0:
                for i in range(m):
                    b[i][k] = alpha * b[i][k]
    return b


# ---------------------------------------------------------------------------
# active-precision norm helpers

def _scal(precision, v):
    return DDouble(v) if precision == "dd" else float(v)


def infnorm(a):
    """Max row sum of |entries|, accumulated in the active precision."""
    prec = a.precision
    worst = _scal(prec, 0.0)
    for i in range(a.m):
        s = _scal(prec, 0.0)
        for j in range(a.n):
            s = s + abs(a.get(i, j))
        if s > worst:
            worst = s
    return worst


def _mm(a, b):
    """a @ b at the active precision via Rgemm."""
    prec = a.precision
    c = Matrix(a.m, b.n, prec)
    Rgemm("N", "N", a.m, b.n, a.n, _scal(prec, 1.0), a, a.ld, b, b.ld,
          _scal(prec, 0.0), c, c.ld)
    return c


def _sub_identity(a):
    prec = a.precision
    one = _scal(prec, 1.0)
    for i in range(min(a.m, a.n)):
        a.set(i, i, a.get(i, i) - one)
    return a


def _sub(a, b):
    c = a.copy()
    be = get_backend(a.precision)
    cv = c.view2d()
    be.assign(cv, (slice(None), slice(None)), be.sub(cv, b.view2d()))
    return c


def _ratio(num, n, anorm, precision):
    eps = machine_params(precision).eps
    denom = _scal(precision, max(1, n)) * anorm * eps
    if not denom:
        return float(num)
    return float(num / denom)


# ---------------------------------------------------------------------------
# residual ratios for the factorizations

def residual_lu(a, lu, ipiv):
    """|| L*U - P*A || / (n * ||A|| * eps) in the active precision."""
    prec = a.precision
    m, n = a.m, a.n
    lmat = Matrix(m, m, prec)
    umat = Matrix(m, n, prec)
    one = _scal(prec, 1.0)
    for i in range(m):
        lmat.set(i, i, one)
        for j in range(min(i, n)):
            lmat.set(i, j, lu.get(i, j))
    for j in range(n):
        for i in range(min(j + 1, m)):
            umat.set(i, j, lu.get(i, j))
    pa = a.copy()
    be = get_backend(prec)
    laswp(be, pa.view2d(), ipiv, forward=True)
    diff = _sub(_mm(lmat, umat), pa)
    r = _ratio(infnorm(diff), n, infnorm(a), prec)
    return ResidualReport("Rgetrf[%s]" % prec, (m, n), r)


def residual_solve(a, x, b):
    """|| b - A*x || / (n * ||A|| * ||x|| * eps), columnwise worst case."""
    prec = a.precision
    n, nrhs = a.n, x.n
    diff = _sub(_mm(a, x), b)
    eps = machine_params(prec).eps
    xnorm = infnorm(x)
    denom = _scal(prec, max(1, n)) * infnorm(a) * xnorm * eps
    r = float(infnorm(diff)) if not denom else float(infnorm(diff) / denom)
    return ResidualReport("Rgetrs[%s]" % prec, (n, nrhs), r)


def residual_chol(uplo, a, factor):
    """|| F*F^T - A || / (n * ||A|| * eps) for the requested triangle."""
    prec = a.precision
    n = a.n
    f = Matrix(n, n, prec)
    upper = uplo.upper() == "U"
    for j in range(n):
        rng_i = range(0, j + 1) if upper else range(j, n)
        for i in rng_i:
            f.set(i, j, factor.get(i, j))
    prod = _mm(f.transpose(), f) if upper else _mm(f, f.transpose())
    diff = _sub(prod, a)
    r = _ratio(infnorm(diff), n, infnorm(a), prec)
    return ResidualReport("Rpotrf[%s]" % prec, (n, n), r)


def _ortho_ratio(name, q, prec):
    g = _sub_identity(_mm(q.transpose(), q))
    eps = machine_params(prec).eps
    denom = _scal(prec, max(1, q.n)) * eps
    return ResidualReport(name, (q.m, q.n), float(infnorm(g) / denom))


def residual_eig(a, w, v):
    """[ ||A*V - V*diag(w)|| / (n*||A||*eps),  ||V^T*V - I|| / (n*eps) ]."""
    prec = a.precision
    n = a.n
    av = _mm(a, v)
    vl = v.copy()
    be = get_backend(prec)
    vlv = vl.view2d()
    for j in range(n):
        col = be.view(vlv, (slice(None), j))
        be.fill(col, be.mul(be.from_python(w.get(j)), col))
    diff = _sub(av, vl)
    r = _ratio(infnorm(diff), n, infnorm(a), prec)
    return [ResidualReport("Rsyev[%s]" % prec, (n, n), r),
            _ortho_ratio("Rsyev-ortho[%s]" % prec, v, prec)]


def residual_schur(a, t, z):
    """[ ||Z*T*Z^T - A|| / (n*||A||*eps),  ||Z^T*Z - I|| / (n*eps) ]."""
    prec = a.precision
    n = a.n
    diff = _sub(_mm(_mm(z, t), z.transpose()), a)
    r = _ratio(infnorm(diff), n, infnorm(a), prec)
    return [ResidualReport("Rgees[%s]" % prec, (n, n), r),
            _ortho_ratio("Rgees-ortho[%s]" % prec, z, prec)]


def residual_svd(a, s, u, vt):
    """Reconstruction plus both orthogonality ratios."""
    prec = a.precision
    m, n = a.m, a.n
    k = min(m, n)
    us = u.copy()
    be = get_backend(prec)
    usv = us.view2d()
    for j in range(m):
        col = be.view(usv, (slice(None), j))
        if j < k:
            be.fill(col, be.mul(be.from_python(s.get(j)), col))
        else:
            be.fill(col, be.zeros(m))
    usk = Matrix(m, k, prec)
    for j in range(k):
        for i in range(m):
            usk.set(i, j, us.get(i, j))
    vtk = Matrix(k, n, prec)
    for j in range(n):
        for i in range(k):
            vtk.set(i, j, vt.get(i, j))
    diff = _sub(_mm(usk, vtk), a)
    r = _ratio(infnorm(diff), max(m, n), infnorm(a), prec)
    return [ResidualReport("Rgesvd[%s]" % prec, (m, n), r),
            _ortho_ratio("Rgesvd-orthoU[%s]" % prec, u, prec),
            _ortho_ratio("Rgesvd-orthoV[%s]" % prec, vt, prec)]


# ---------------------------------------------------------------------------
# cross-precision oracle comparison for the BLAS subset

COMPARE_ROUTINES = ("Raxpy", "Rdot", "Rnrm2", "iRamax", "Rgemv", "Rgemm",
                     "Rsyrk", "Rtrsm")


def _vec(values, precision):
    v = Vector(len(values), precision)
    for i, x in enumerate(values):
        v.set(i, DDouble(x) if precision == "dd" else float(x))
    return v


def _as_f64(x):
    return x.hi + x.lo if isinstance(x, DDouble) else float(x)


def _parity_probe(routine, precision):
    """Trigger the canonical invalid-argument error; return its index."""
    a = Matrix(2, 2, precision)
    v = Vector(2, precision)
    one = _scal(precision, 1.0)
    try:
        if routine == "Rgemv":
            Rgemv("X", 2, 2, one, a, 2, v, 1, one, v, 1)
        elif routine == "Rgemm":
            Rgemm("X", "N", 2, 2, 2, one, a, 2, a, 2, one, a, 2)
        elif routine == "Rsyrk":
            Rsyrk("X", "N", 2, 2, one, a, 2, one, a, 2)
        elif routine == "Rtrsm":
            Rtrsm("X", "U", "N", "N", 2, 2, one, a, 2, a, 2)
        else:
            return None
    except BlasError as err:
        return err.index
    return -1


def compare_vs_oracle(routine, n, seed=0, tolerance=THRESHOLD):
    """Run the binary64 and dd instantiations on identical binary64
    inputs, bit-check the binary64 one against the naive oracle, and
    report the dd-vs-binary64 deviation as a LAPACK-style ratio.

    Also probes the invalid-argument path in both precisions and raises
    if the BlasError indices disagree.
    """
    if routine not in COMPARE_ROUTINES:
        raise ValueError(f"unknown routine {routine!r}")
    i1 = _parity_probe(routine, "f64")
    i2 = _parity_probe(routine, "dd")
    if i1 != i2:
        raise AssertionError(
            f"{routine}: error-index parity broken ({i1} vs {i2})")
    g = np.random.default_rng(np.random.SeedSequence([seed, 97, n]))
    eps64 = machine_params("f64").eps
    m = n
    k = n
    amat = g.uniform(-1.0, 1.0, (max(1, m), max(1, k)))
    bmat = g.uniform(-1.0, 1.0, (max(1, k), max(1, n)))
    cmat = g.uniform(-1.0, 1.0, (max(1, m), max(1, n)))
    xv = g.uniform(-1.0, 1.0, max(1, n))
    yv = g.uniform(-1.0, 1.0, max(1, n))
    alpha, beta = 0.75, -0.5
    scale = max(1.0, np.abs(amat).max(), np.abs(bmat).max(),
                np.abs(cmat).max(), np.abs(xv).max(), np.abs(yv).max())
    results = {}
    for precision in ("f64", "dd"):
        al = _scal(precision, alpha)
        bt = _scal(precision, beta)
        if routine == "Raxpy":
            x = _vec(xv, precision)
            y = _vec(yv, precision)
            Raxpy(n, al, x, 1, y, 1)
            results[precision] = [y.get(i) for i in range(n)]
        elif routine == "Rdot":
            results[precision] = [Rdot(n, _vec(xv, precision), 1,
                                       _vec(yv, precision), 1)]
        elif routine == "Rnrm2":
            results[precision] = [Rnrm2(n, _vec(xv, precision), 1)]
        elif routine == "iRamax":
            results[precision] = [iRamax(n, _vec(xv, precision), 1)]
        elif routine == "Rgemv":
            a = Matrix.from_rows(amat.tolist(), precision)
            x = _vec(xv[:k], precision)
            y = _vec(yv[:m], precision)
            Rgemv("N", m, k, al, a, a.ld, x, 1, bt, y, 1)
            results[precision] = [y.get(i) for i in range(m)]
        elif routine == "Rgemm":
            a = Matrix.from_rows(amat.tolist(), precision)
            b = Matrix.from_rows(bmat.tolist(), precision)
            c = Matrix.from_rows(cmat.tolist(), precision)
            Rgemm("N", "N", m, n, k, al, a, a.ld, b, b.ld, bt, c, c.ld)
            results[precision] = [c.get(i, j) for j in range(n)
                                  for i in range(m)]
        elif routine == "Rsyrk":
            a = Matrix.from_rows(amat.tolist(), precision)
            c = Matrix.from_rows(cmat.tolist(), precision)
            Rsyrk("U", "N", n, k, al, a, a.ld, bt, c, c.ld)
            results[precision] = [c.get(i, j) for j in range(n)
                                  for i in range(j + 1)]
        elif routine == "Rtrsm":
            tri = amat.copy()
            for i in range(m):
                tri[i, i] = tri[i, i] + 2.0  # keep well conditioned
            a = Matrix.from_rows(tri.tolist(), precision)
            b = Matrix.from_rows(cmat.tolist(), precision)
            Rtrsm("L", "L", "N", "N", m, n, al, a, a.ld, b, b.ld)
            results[precision] = [b.get(i, j) for j in range(n)
                                  for i in range(m)]
    # bit-check binary64 against the naive oracle
    if routine == "Raxpy":
        ref = oracle_axpy(n, alpha, list(xv), 1, list(yv), 1)
    elif routine == "Rdot":
        ref = [oracle_dot(n, list(xv), 1, list(yv), 1)]
    elif routine == "Rnrm2":
        ref = [oracle_nrm2(n, list(xv), 1)]
    elif routine == "iRamax":
        ref = [oracle_iramax(n, list(xv), 1)]
    elif routine == "Rgemv":
        ref = oracle_gemv("N", m, k, alpha, amat.tolist(), list(xv[:k]), 1,
                          beta, list(yv[:m]), 1)
    elif routine == "Rgemm":
        rc = oracle_gemm("N", "N", m, n, k, alpha, amat.tolist(),
                         bmat.tolist(), beta, cmat.tolist())
        ref = [rc[i][j] for j in range(n) for i in range(m)]
    elif routine == "Rsyrk":
        rc = oracle_syrk("U", "N", n, k, alpha, amat.tolist(), beta,
                         cmat.tolist())
        ref = [rc[i][j] for j in range(n) for i in range(j + 1)]
    else:
        tri = amat.copy()
        for i in range(m):
            tri[i, i] = tri[i, i] + 2.0
        rb = oracle_trsm("L", "L", "N", "N", m, n, alpha, tri.tolist(),
                         cmat.tolist())
        ref = [rb[i][j] for j in range(n) for i in range(m)]
    got64 = [_as_f64(v) for v in results["f64"]]
    for gv, rv in zip(got64, ref):
        if gv != rv and not (np.isnan(gv) and np.isnan(rv)):
            raise AssertionError(
                f"{routine}: binary64 kernel deviates from oracle "
                f"({gv!r} != {rv!r})")
    if routine == "iRamax":
        worst = 0.0 if results["dd"] == results["f64"] else float("inf")
    else:
        worst = max(abs(_as_f64(dv) - fv)
                    for dv, fv in zip(results["dd"], got64)) if got64 else 0.0
    denom = max(1, n) * eps64 * scale
    return ResidualReport("%s[dd-vs-f64]" % routine, (n,), worst / denom,
                          tolerance)


# ---------------------------------------------------------------------------
# suite runner and the Hilbert precision study

SUITE_SIZES = (1, 2, 3, 5, 10, 50)


def _suite_one(precision, n, seed):
    reports = []
    spec_g = MatrixGenSpec("random-uniform", n, n, seed)
    spec_s = MatrixGenSpec("random-symmetric", n, n, seed)
    spec_p = MatrixGenSpec("random-spd", n, n, seed)
    # LU factor + solve
    a = gen_matrix(spec_g, precision)
    lu = a.copy()
    ipiv, info = Rgetrf(n, n, lu)
    assert info == 0, f"Rgetrf info={info} at n={n} seed={seed}"
    reports.append(residual_lu(a, lu, ipiv))
    bspec = MatrixGenSpec("random-uniform", n, 2, seed + 1)
    b = gen_matrix(bspec, precision)
    x = b.copy()
    Rgetrs("N", n, 2, lu, lu.ld, ipiv, x, x.ld)
    reports.append(residual_solve(a, x, b))
    # Cholesky
    a = gen_matrix(spec_p, precision)
    f = a.copy()
    info = Rpotrf("L", n, f)
    assert info == 0, f"Rpotrf info={info} at n={n} seed={seed}"
    reports.append(residual_chol("L", a, f))
    # symmetric eigenproblem
    a = gen_matrix(spec_s, precision)
    v = a.copy()
    w = Vector(n, precision)
    lwork = max(1, 3 * n - 1)
    info = Rsyev("V", "U", n, v, v.ld, w, Vector(lwork, precision), lwork)[1]
    assert info == 0, f"Rsyev info={info} at n={n} seed={seed}"
    reports.extend(residual_eig(a, w, v))
    # Schur
    a = gen_matrix(spec_g, precision)
    t = a.copy()
    res, info = Rgees("V", n, t, t.ld)
    assert info == 0, f"Rgees info={info} at n={n} seed={seed}"
    reports.extend(residual_schur(a, res.T, res.Z))
    # SVD
    a = gen_matrix(spec_g, precision)
    work = a.copy()
    res, info = Rgesvd("A", "A", n, n, work, work.ld)
    assert info == 0, f"Rgesvd info={info} at n={n} seed={seed}"
    reports.extend(residual_svd(a, res.s, res.U, res.VT))
    return reports


def run_suite(seeds=range(1), sizes=SUITE_SIZES, precisions=("f64", "dd"),
              blas=True, csv_path=None, text=None, routines=None):
    """Full QA sweep; returns the report list.

    When csv_path is given, writes the CSV and a ratio chart PNG next to
    it (same name, .png suffix).  `text` may be a writable stream for
    the line-per-report plain text form.  `routines` restricts the run
    to the oracle comparison of just those kernels (no driver residuals).
    """
    reports = []
    for seed in seeds:
        for n in sizes:
            if routines is None:
                for precision in precisions:
                    reports.extend(_suite_one(precision, n, seed))
            if blas:
                for routine in (COMPARE_ROUTINES if routines is None
                                else routines):
                    reports.append(compare_vs_oracle(routine, n, seed))
    if text is not None:
        for r in reports:
            text.write(r.line() + "\n")
    if csv_path:
        emit_report_csv(reports, csv_path)
        render_report_png(reports, _png_sibling(csv_path))
    return reports


def _png_sibling(csv_path):
    import os
    root, _ = os.path.splitext(csv_path)
    return root + ".png"


def emit_report_csv(reports, path):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["name", "dims", "ratio", "threshold", "status"])
        for r in reports:
            wr.writerow([r.name, "x".join(str(v) for v in r.dims),
                         repr(r.ratio), repr(r.threshold),
                         "PASS" if r.passed else "FAIL"])


def render_report_png(reports, path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    names = sorted({r.name for r in reports})
    idx = {nm: i for i, nm in enumerate(names)}
    xs = [idx[r.name] for r in reports]
    ys = [max(r.ratio, 1e-18) for r in reports]
    fig, ax = plt.subplots(figsize=(max(6.0, 0.45 * len(names) + 2), 4.5))
    ax.scatter(xs, ys, s=12, alpha=0.6)
    thr = reports[0].threshold if reports else THRESHOLD
    ax.axhline(thr, color="red", linewidth=1, label=f"threshold {thr:g}")
    ax.set_yscale("log")
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("residual ratio")
    ax.set_title("QA residual ratios")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def left_residual_infnorm(a, ainv):
    """||ainv*a - I||_inf in the active precision (a DDouble for "dd",
    so exact zeros stay exact)."""
    return infnorm(_sub_identity(_mm(ainv, a)))


def hilbert_infnorm_study(n_max, precision):
    """Invert Hilbert matrices and report ||inv(A)*A - I||_inf per n.

    Returns a list of (n, value); value is None when the factorization
    or inversion reports failure.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = []
    for n in range(1, n_max + 1):
        a = gen_matrix(MatrixGenSpec("hilbert", n, n), precision)
        lu = a.copy()
        ipiv, info = Rgetrf(n, n, lu)
        if info != 0:
            out.append((n, None))
            continue
        lwork = workspace_query("Rgetri", n)
        info = Rgetri(n, lu, lu.ld, ipiv, Vector(lwork, precision), lwork)
        if info != 0:
            out.append((n, None))
            continue
        out.append((n, left_residual_infnorm(a, lu)))
    return out
