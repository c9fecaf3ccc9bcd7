"""Level-2/3 routines: Rgemv, Rgemm, Rsyrk, Rtrsm, Cgemm.

Each kernel reproduces the reference implementation's operation order
element for element (same bracketing, same loop nesting seen by any one
output element), vectorizing only across independent elements.  That
keeps results bit-identical to a scalar transcription of the reference
loops, which the test suite checks directly in binary64.

One deliberate deviation: the reference skips updates when a multiplier
is exactly zero (an optimization); we always apply them.  The numeric
effect is confined to the sign of zero in corner cases, and the naive
oracle used by the tests follows the same convention.
"""

from __future__ import annotations

import numpy as np

from .elem import get_backend
from .matrix import BlasError, _scalar_for, require, same_precision


def _flag(routine, value, allowed, index):
    ok = isinstance(value, str) and len(value) == 1 and value.upper() in allowed
    require(routine, ok, index)
    return value.upper()


def _ld_of(mat, ld):
    return mat.ld if ld is None else ld


def _scalarize(tag, v):
    return _scalar_for(tag, v)


# ---------------------------------------------------------------------------

def Rgemv(trans, m, n, alpha, a, lda=None, x=None, incx=1,
          beta=1.0, y=None, incy=1):
    """y <- alpha*op(A)*x + beta*y."""
    routine = "Rgemv"
    tag = same_precision(routine, a, x, y)
    be = get_backend(tag)
    lda = _ld_of(a, lda)
    trans = _flag(routine, trans, ("N", "T", "C"), 1)
    require(routine, m >= 0, 2)
    require(routine, n >= 0, 3)
    require(routine, lda >= max(1, m), 6)
    require(routine, incx != 0, 8)
    require(routine, incy != 0, 11)
    alpha = _scalarize(tag, alpha)
    beta = _scalarize(tag, beta)
    if m == 0 or n == 0 or (not alpha and beta == 1):
        return
    lenx, leny = (n, m) if trans == "N" else (m, n)
    av = a.view2d(m, n, lda)
    xv = x.strided(lenx, incx)
    yv = y.strided(leny, incy)
    ab = be.from_python(alpha)
    if beta != 1:
        if not beta:
            be.fill(yv, be.zeros(leny))
        else:
            be.fill(yv, be.mul(be.from_python(beta), yv))
    if not alpha:
        return
    if trans == "N":
        for j in range(n):
            temp = be.mul(ab, be.view(xv, slice(j, j + 1)))
            col = be.view(av, (slice(None), j))
            be.fill(yv, be.add(yv, be.mul(temp, col)))
    else:
        acc = be.zeros(n)
        for i in range(m):
            xi = be.view(xv, slice(i, i + 1))
            row = be.view(av, (i, slice(None)))
            acc = be.add(acc, be.mul(row, xi))
        be.fill(yv, be.add(yv, be.mul(ab, acc)))


# ---------------------------------------------------------------------------

def _gemm_validate(routine, transa, transb, m, n, k, lda, ldb, ldc,
                   allowed=("N", "T", "C")):
    transa = _flag(routine, transa, allowed, 1)
    transb = _flag(routine, transb, allowed, 2)
    require(routine, m >= 0, 3)
    require(routine, n >= 0, 4)
    require(routine, k >= 0, 5)
    nrowa = m if transa == "N" else k
    nrowb = k if transb == "N" else n
    require(routine, lda >= max(1, nrowa), 8)
    require(routine, ldb >= max(1, nrowb), 10)
    require(routine, ldc >= max(1, m), 13)
    return transa, transb


def _conj(be, s):
    if be.tag == "c64":
        return (np.conj(s[0]),)
    if be.tag == "cdd":
        return (s[0], s[1], -s[2], -s[3])
    return s


def _gemm_core(be, transa, transb, m, n, k, alpha, av, bv, beta, cv):
    """Shared by Rgemm/Cgemm once views and scalars are in hand."""
    ab = be.from_python(alpha)
    if not alpha:
        if not beta:
            be.fill(cv, be.zeros((m, n)))
        elif beta != 1:
            be.fill(cv, be.mul(be.from_python(beta), cv))
        return
    conja = transa == "C" and be.is_complex
    conjb = transb == "C" and be.is_complex
    nota = transa == "N"
    notb = transb == "N"
    if nota and notb:
        _scale_full(be, cv, beta, m, n)
        for l in range(k):
            temp = be.mul(ab, be.view(bv, (l, slice(None))))
            col = be.view(av, (slice(None), l))
            _rank1_add(be, cv, col, temp, m, n)
    elif not nota and notb:
        aop = _conj(be, av) if conja else av
        acc = be.zeros((m, n))
        for l in range(k):
            arow = be.view(aop, (l, slice(None)))
            brow = be.view(bv, (l, slice(None)))
            acc = be.add(acc, _outer(be, arow, brow, m, n))
        _combine(be, cv, alpha, acc, beta)
    elif nota:
        bop = _conj(be, bv) if conjb else bv
        _scale_full(be, cv, beta, m, n)
        for l in range(k):
            temp = be.mul(ab, be.view(bop, (slice(None), l)))
            col = be.view(av, (slice(None), l))
            _rank1_add(be, cv, col, temp, m, n)
    else:
        aop = _conj(be, av) if conja else av
        bop = _conj(be, bv) if conjb else bv
        acc = be.zeros((m, n))
        for l in range(k):
            arow = be.view(aop, (l, slice(None)))
            bcol = be.view(bop, (slice(None), l))
            acc = be.add(acc, _outer(be, arow, bcol, m, n))
        _combine(be, cv, alpha, acc, beta)


def _outer(be, xrow, ycol, m, n):
    xc = tuple(c.reshape(m, 1) for c in xrow)
    yr = tuple(c.reshape(1, n) for c in ycol)
    return be.mul(xc, yr)


def _rank1_add(be, cv, col, row, m, n):
    p = _outer(be, col, row, m, n)
    be.fill(cv, be.add(cv, p))


def _scale_full(be, cv, beta, m, n):
    if beta == 1:
        return
    if not beta:
        be.fill(cv, be.zeros((m, n)))
    else:
        be.fill(cv, be.mul(be.from_python(beta), cv))


def _combine(be, cv, alpha, acc, beta):
    at = be.mul(be.from_python(alpha), acc)
    if not beta:
        be.fill(cv, at)
    else:
        be.fill(cv, be.add(at, be.mul(be.from_python(beta), cv)))


def Rgemm(transa, transb, m, n, k, alpha, a, lda=None, b=None, ldb=None,
          beta=1.0, c=None, ldc=None):
    """C <- alpha*op(A)*op(B) + beta*C, ascending-k accumulation."""
    routine = "Rgemm"
    tag = same_precision(routine, a, b, c)
    be = get_backend(tag)
    lda, ldb, ldc = _ld_of(a, lda), _ld_of(b, ldb), _ld_of(c, ldc)
    transa, transb = _gemm_validate(routine, transa, transb, m, n, k,
                                    lda, ldb, ldc)
    alpha = _scalarize(tag, alpha)
    beta = _scalarize(tag, beta)
    if m == 0 or n == 0 or ((not alpha or k == 0) and beta == 1):
        return
    nrowa, ncola = (m, k) if transa == "N" else (k, m)
    nrowb, ncolb = (k, n) if transb == "N" else (n, k)
    av = a.view2d(nrowa, ncola, lda)
    bv = b.view2d(nrowb, ncolb, ldb)
    cv = c.view2d(m, n, ldc)
    _gemm_core(be, transa, transb, m, n, k, alpha, av, bv, beta, cv)


def Cgemm(transa, transb, m, n, k, alpha, a, lda=None, b=None, ldb=None,
          beta=1.0, c=None, ldc=None):
    """Complex GEMM; 'C' flags request conjugate transposition."""
    routine = "Cgemm"
    tag = same_precision(routine, a, b, c)
    be = get_backend(tag)
    if not be.is_complex:
        raise ValueError("Cgemm requires complex matrices")
    lda, ldb, ldc = _ld_of(a, lda), _ld_of(b, ldb), _ld_of(c, ldc)
    transa, transb = _gemm_validate(routine, transa, transb, m, n, k,
                                    lda, ldb, ldc)
    alpha = _scalarize(tag, alpha)
    beta = _scalarize(tag, beta)
    if m == 0 or n == 0 or ((not alpha or k == 0) and beta == 1):
        return
    nrowa, ncola = (m, k) if transa == "N" else (k, m)
    nrowb, ncolb = (k, n) if transb == "N" else (n, k)
    av = a.view2d(nrowa, ncola, lda)
    bv = b.view2d(nrowb, ncolb, ldb)
    cv = c.view2d(m, n, ldc)
    _gemm_core(be, transa, transb, m, n, k, alpha, av, bv, beta, cv)


# ---------------------------------------------------------------------------

def Rsyrk(uplo, trans, n, k, alpha, a, lda=None, beta=1.0, c=None, ldc=None):
    """C <- alpha*A*A^T + beta*C (trans='N') or alpha*A^T*A + beta*C,
    touching only the uplo triangle of C."""
    routine = "Rsyrk"
    tag = same_precision(routine, a, c)
    be = get_backend(tag)
    lda, ldc = _ld_of(a, lda), _ld_of(c, ldc)
    uplo = _flag(routine, uplo, ("U", "L"), 1)
    trans = _flag(routine, trans, ("N", "T", "C"), 2)
    require(routine, n >= 0, 3)
    require(routine, k >= 0, 4)
    nrowa = n if trans == "N" else k
    require(routine, lda >= max(1, nrowa), 7)
    require(routine, ldc >= max(1, n), 10)
    alpha = _scalarize(tag, alpha)
    beta = _scalarize(tag, beta)
    if n == 0 or ((not alpha or k == 0) and beta == 1):
        return
    cv = c.view2d(n, n, ldc)
    mask = np.triu(np.ones((n, n), dtype=bool)) if uplo == "U" \
        else np.tril(np.ones((n, n), dtype=bool))
    if not alpha:
        _scale_masked(be, cv, beta, mask, n)
        return
    if trans == "N":
        av = a.view2d(n, k, lda)
        ab = be.from_python(alpha)
        _scale_masked(be, cv, beta, mask, n)
        for l in range(k):
            col = be.view(av, (slice(None), l))
            temp = be.mul(ab, col)
            p = _outer(be, col, temp, n, n)
            _masked_add(be, cv, p, mask)
    else:
        av = a.view2d(k, n, lda)
        acc = be.zeros((n, n))
        for l in range(k):
            row = be.view(av, (l, slice(None)))
            acc = be.add(acc, _outer(be, row, row, n, n))
        at = be.mul(be.from_python(alpha), acc)
        if not beta:
            be.assign(cv, mask, be.view(at, mask))
        else:
            new = be.add(at, be.mul(be.from_python(beta), cv))
            be.assign(cv, mask, be.view(new, mask))


def _scale_masked(be, cv, beta, mask, n):
    if beta == 1:
        return
    if not beta:
        be.assign(cv, mask, be.view(be.zeros((n, n)), mask))
    else:
        scaled = be.mul(be.from_python(beta), cv)
        be.assign(cv, mask, be.view(scaled, mask))


def _masked_add(be, cv, p, mask):
    new = be.add(cv, p)
    be.assign(cv, mask, be.view(new, mask))


# ---------------------------------------------------------------------------

def Rtrsm(side, uplo, transa, diag, m, n, alpha, a, lda=None,
          b=None, ldb=None):
    """Solve op(A)*X = alpha*B or X*op(A) = alpha*B in place in B."""
    routine = "Rtrsm"
    tag = same_precision(routine, a, b)
    be = get_backend(tag)
    lda, ldb = _ld_of(a, lda), _ld_of(b, ldb)
    side = _flag(routine, side, ("L", "R"), 1)
    uplo = _flag(routine, uplo, ("U", "L"), 2)
    transa = _flag(routine, transa, ("N", "T", "C"), 3)
    diag = _flag(routine, diag, ("U", "N"), 4)
    require(routine, m >= 0, 5)
    require(routine, n >= 0, 6)
    nrowa = m if side == "L" else n
    require(routine, lda >= max(1, nrowa), 9)
    require(routine, ldb >= max(1, m), 11)
    alpha = _scalarize(tag, alpha)
    if m == 0 or n == 0:
        return
    av = a.view2d(nrowa, nrowa, lda)
    bv = b.view2d(m, n, ldb)
    if not alpha:
        be.fill(bv, be.zeros((m, n)))
        return
    nounit = diag == "N"
    ab = be.from_python(alpha)
    one = be.from_python(_scalarize(tag, 1))

    def arow(i, cols):
        return be.view(av, (i, cols))

    def aelt(i, j):
        return be.view(av, (slice(i, i + 1), j))

    def brow(i):
        return be.view(bv, (i, slice(None)))

    def bcol(j):
        return be.view(bv, (slice(None), j))

    if side == "L" and transa == "N":
        if alpha != 1:
            be.fill(bv, be.mul(ab, bv))
        order = range(m - 1, -1, -1) if uplo == "U" else range(m)
        for kk in order:
            if nounit:
                be.assign(bv, (kk, slice(None)),
                          be.div(brow(kk), aelt(kk, kk)))
            rest = slice(0, kk) if uplo == "U" else slice(kk + 1, m)
            if rest.stop > rest.start:
                sub = be.view(bv, (rest, slice(None)))
                upd = be.sub(sub, _outer(be, be.view(av, (rest, kk)),
                                         brow(kk), rest.stop - rest.start, n))
                be.assign(bv, (rest, slice(None)), upd)
    elif side == "L":
        # B := alpha*inv(A**T)*B; upper storage solves forward
        order = range(m) if uplo == "U" else range(m - 1, -1, -1)
        for i in order:
            temp = be.mul(ab, brow(i))
            ks = range(0, i) if uplo == "U" else range(i + 1, m)
            for kk in ks:
                temp = be.sub(temp, be.mul(aelt(kk, i), brow(kk)))
            if nounit:
                temp = be.div(temp, aelt(i, i))
            be.assign(bv, (i, slice(None)), temp)
    elif transa == "N":
        # B := alpha*B*inv(A)
        order = range(n) if uplo == "U" else range(n - 1, -1, -1)
        for j in order:
            if alpha != 1:
                be.assign(bv, (slice(None), j), be.mul(ab, bcol(j)))
            ks = range(0, j) if uplo == "U" else range(j + 1, n)
            for kk in ks:
                upd = be.sub(bcol(j), be.mul(aelt(kk, j), bcol(kk)))
                be.assign(bv, (slice(None), j), upd)
            if nounit:
                temp = be.div(one, aelt(j, j))
                be.assign(bv, (slice(None), j), be.mul(temp, bcol(j)))
    else:
        # B := alpha*B*inv(A**T)
        order = range(n - 1, -1, -1) if uplo == "U" else range(n)
        for kk in order:
            if nounit:
                temp = be.div(one, aelt(kk, kk))
                be.assign(bv, (slice(None), kk), be.mul(temp, bcol(kk)))
            js = range(0, kk) if uplo == "U" else range(kk + 1, n)
            for j in js:
                upd = be.sub(bcol(j), be.mul(aelt(j, kk), bcol(kk)))
                be.assign(bv, (slice(None), j), upd)
            if alpha != 1:
                be.assign(bv, (slice(None), kk), be.mul(ab, bcol(kk)))
