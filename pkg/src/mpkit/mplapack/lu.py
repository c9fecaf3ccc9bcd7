"""LU factorization with partial pivoting: Rgetrf, Rgetrs, Rgetri.

Unblocked right-looking elimination with the reference operation order:
pivot search by magnitude (first index on ties), row interchange, column
scale by the pivot reciprocal when safe, rank-1 trailing update.  The
solve and invert drivers reuse the triangular kernels so every element
sees the same rounding history in binary64 and double-double.
"""

from __future__ import annotations

from ..mpblas.elem import get_backend
from ..mpblas.level23 import Rtrsm
from ..mpblas.matrix import BlasError, require
from .aux import scalars


class PivotVector:
    """1-based row interchange record: row k was swapped with ipiv[k-1].

    Invariant: k <= ipiv[k-1] <= m for every recorded step k.
    """

    def __init__(self, ipiv=()):
        self.ipiv = [int(p) for p in ipiv]

    def __len__(self):
        return len(self.ipiv)

    def __getitem__(self, k):
        return self.ipiv[k]

    def __iter__(self):
        return iter(self.ipiv)

    def __eq__(self, other):
        other = list(other) if not isinstance(other, PivotVector) \
            else other.ipiv
        return self.ipiv == other

    def __repr__(self):
        return f"PivotVector({self.ipiv})"


def _swap_rows(be, av, i1, i2):
    if i1 == i2:
        return
    tmp = be.copy(be.view(av, (i1, slice(None))))
    be.assign(av, (i1, slice(None)), be.view(av, (i2, slice(None))))
    be.assign(av, (i2, slice(None)), tmp)


def _swap_cols(be, av, j1, j2):
    if j1 == j2:
        return
    tmp = be.copy(be.view(av, (slice(None), j1)))
    be.assign(av, (slice(None), j1), be.view(av, (slice(None), j2)))
    be.assign(av, (slice(None), j2), tmp)


def laswp(be, bv, ipiv, forward=True):
    """Apply the recorded row interchanges to all columns of bv."""
    steps = range(len(ipiv)) if forward else range(len(ipiv) - 1, -1, -1)
    for k in steps:
        _swap_rows(be, bv, k, ipiv[k] - 1)


def _outer(be, x, y, m, n):
    xs = tuple(c.reshape(m, 1) for c in x)
    ys = tuple(c.reshape(1, n) for c in y)
    return be.mul(xs, ys)


def Rgetrf(m, n, a, lda=None):
    """Factor A = P*L*U in place; returns (PivotVector, info).

    info = k > 0 flags an exactly zero pivot U(k,k); the factorization
    still completes and a later divide by U(k,k) would produce inf.
    """
    routine = "Rgetrf"
    lda = a.ld if lda is None else lda
    require(routine, m >= 0, 1)
    require(routine, n >= 0, 2)
    require(routine, lda >= max(1, m), 4)
    if m == 0 or n == 0:
        return PivotVector(), 0
    be = get_backend(a.precision)
    sc = scalars(a.precision)
    av = a.view2d(m, n, lda)
    sfmin = sc.safmin
    ipiv = []
    info = 0
    for j in range(min(m, n)):
        col = be.view(av, (slice(j, m), j))
        jp = j + be.argmax_abs(col)
        ipiv.append(jp + 1)
        pivot = be.item(be.view(av, (slice(jp, jp + 1), j)))
        if pivot:
            _swap_rows(be, av, j, jp)
            if j < m - 1:
                sub = be.view(av, (slice(j + 1, m), j))
                if abs(pivot) >= sfmin:
                    rec = be.from_python(sc.one / pivot)
                    be.fill(sub, be.mul(rec, sub))
                else:
                    be.fill(sub, be.div(sub, be.from_python(pivot)))
        elif info == 0:
            info = j + 1
        if j < min(m, n) - 1:
            x = be.view(av, (slice(j + 1, m), j))
            y = be.neg(be.view(av, (j, slice(j + 1, n))))
            sub = be.view(av, (slice(j + 1, m), slice(j + 1, n)))
            be.fill(sub, be.add(sub, _outer(be, x, y, m - j - 1, n - j - 1)))
    return PivotVector(ipiv), 0 if info == 0 else info


def Rgetrs(trans, n, nrhs, a, lda=None, ipiv=None, b=None, ldb=None):
    """Solve op(A)*X = B in place in B using a factorization from Rgetrf."""
    routine = "Rgetrs"
    lda = a.ld if lda is None else lda
    ldb = b.ld if (b is not None and ldb is None) else ldb
    ok = isinstance(trans, str) and trans.upper() in ("N", "T", "C")
    require(routine, ok, 1)
    trans = trans.upper()
    require(routine, n >= 0, 2)
    require(routine, nrhs >= 0, 3)
    require(routine, lda >= max(1, n), 5)
    require(routine, ldb is not None and ldb >= max(1, n), 8)
    if n == 0 or nrhs == 0:
        return 0
    be = get_backend(a.precision)
    bv = b.view2d(n, nrhs, ldb)
    if trans == "N":
        laswp(be, bv, ipiv, forward=True)
        Rtrsm("L", "L", "N", "U", n, nrhs, 1.0, a, lda, b, ldb)
        Rtrsm("L", "U", "N", "N", n, nrhs, 1.0, a, lda, b, ldb)
    else:
        Rtrsm("L", "U", "T", "N", n, nrhs, 1.0, a, lda, b, ldb)
        Rtrsm("L", "L", "T", "U", n, nrhs, 1.0, a, lda, b, ldb)
        laswp(be, bv, ipiv, forward=False)
    return 0


def _trmv_upper(be, av, x, jlen, nounit=True):
    """x <- U*x on store views, ascending-column order."""
    for jj in range(jlen):
        xj = be.view(x, slice(jj, jj + 1))
        if jj > 0:
            head = be.view(x, slice(0, jj))
            colpart = be.view(av, (slice(0, jj), jj))
            be.fill(head, be.add(head, be.mul(xj, colpart)))
        if nounit:
            ajj = be.view(av, (slice(jj, jj + 1), jj))
            be.fill(xj, be.mul(xj, ajj))


def _trmv_lower(be, av, x, jlen, nounit=True):
    """x <- L*x on store views, descending-column order."""
    for jj in range(jlen - 1, -1, -1):
        xj = be.view(x, slice(jj, jj + 1))
        if jj < jlen - 1:
            tail = be.view(x, slice(jj + 1, jlen))
            colpart = be.view(av, (slice(jj + 1, jlen), jj))
            be.fill(tail, be.add(tail, be.mul(xj, colpart)))
        if nounit:
            ajj = be.view(av, (slice(jj, jj + 1), jj))
            be.fill(xj, be.mul(xj, ajj))


def _trti2_upper(be, av, n, sc):
    """Invert the upper triangle in place (non-unit diagonal)."""
    for j in range(n):
        piv = be.item(be.view(av, (slice(j, j + 1), j)))
        inv = sc.one / piv
        be.assign(av, (j, j), be.from_python(inv))
        ajj = -inv
        if j > 0:
            x = be.view(av, (slice(0, j), j))
            sub = be.view(av, (slice(0, j), slice(0, j)))
            _trmv_upper(be, sub, x, j)
            be.fill(x, be.mul(be.from_python(ajj), x))
    return 0


def Rgetri(n, a, lda=None, ipiv=None, work=None, lwork=None):
    """Invert A in place from its Rgetrf factorization.

    lwork == -1 performs a workspace query: the optimal size is stored
    in work[0] and nothing else happens.
    """
    routine = "Rgetri"
    lda = a.ld if lda is None else lda
    require(routine, n >= 0, 1)
    require(routine, lda >= max(1, n), 3)
    lquery = lwork == -1
    require(routine, lquery or (lwork is not None and lwork >= max(1, n)), 6)
    work.set(0, float(max(1, n)))
    if lquery:
        return 0
    if n == 0:
        return 0
    be = get_backend(a.precision)
    sc = scalars(a.precision)
    av = a.view2d(n, n, lda)
    for k in range(n):
        if not be.item(be.view(av, (slice(k, k + 1), k))):
            return k + 1
    _trti2_upper(be, av, n, sc)
    wv = work.store
    for j in range(n - 1, -1, -1):
        cnt = n - 1 - j
        if cnt:
            src = be.view(av, (slice(j + 1, n), j))
            be.assign(wv, slice(j + 1, n), src)
            be.fill(src, be.zeros(cnt))
            col = be.view(av, (slice(None), j))
            for jj in range(j + 1, n):
                t = -be.item(be.view(wv, slice(jj, jj + 1)))
                acol = be.view(av, (slice(None), jj))
                be.fill(col, be.add(col, be.mul(be.from_python(t), acol)))
    for j in range(n - 2, -1, -1):
        _swap_cols(be, av, j, ipiv[j] - 1)
    return 0
