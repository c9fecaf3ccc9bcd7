"""Cholesky factorization Rpotrf (unblocked, either triangle).

A = U^T*U or A = L*L^T in place.  info = k > 0 reports the first pivot
that is not positive (or is NaN); the failing value is left in A(k,k).
"""

from __future__ import annotations

import math

from ..mpblas.elem import get_backend
from ..mpblas.matrix import require
from .aux import scalars


def _isnan(x):
    f = x if isinstance(x, float) else float(x)
    return math.isnan(f)


def Rpotrf(uplo, n, a, lda=None):
    routine = "Rpotrf"
    lda = a.ld if lda is None else lda
    ok = isinstance(uplo, str) and uplo.upper() in ("U", "L")
    require(routine, ok, 1)
    uplo = uplo.upper()
    require(routine, n >= 0, 2)
    require(routine, lda >= max(1, n), 4)
    if n == 0:
        return 0
    be = get_backend(a.precision)
    sc = scalars(a.precision)
    av = a.view2d(n, n, lda)
    upper = uplo == "U"
    for j in range(n):
        if upper:
            head = be.view(av, (slice(0, j), j))
        else:
            head = be.view(av, (j, slice(0, j)))
        dot = be.sum_ltr(be.mul(head, head))
        ajj = be.item(be.view(av, (slice(j, j + 1), j))) - be.item(dot)
        if _isnan(ajj) or ajj <= 0:
            be.assign(av, (j, j), be.from_python(ajj))
            return j + 1
        ajj = sc.sqrt(ajj)
        be.assign(av, (j, j), be.from_python(ajj))
        if j < n - 1:
            if upper:
                # row j of U beyond the diagonal
                tail = be.view(av, (j, slice(j + 1, n)))
                for jj in range(j + 1, n):
                    colpart = be.view(av, (slice(0, j), jj))
                    temp = be.sum_ltr(be.mul(colpart, head))
                    elt = be.view(av, (j, slice(jj, jj + 1)))
                    be.fill(elt, be.add(elt, be.neg(temp)))
            else:
                tail = be.view(av, (slice(j + 1, n), j))
                for l in range(j):
                    t = -be.item(be.view(av, (j, slice(l, l + 1))))
                    colpart = be.view(av, (slice(j + 1, n), l))
                    be.fill(tail, be.add(tail,
                                         be.mul(be.from_python(t), colpart)))
            rec = be.from_python(sc.one / ajj)
            be.fill(tail, be.mul(rec, tail))
    return 0
