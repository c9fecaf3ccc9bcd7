"""Level-1 routines: Raxpy, Rdot, Rnrm2, iRamax.

Summation order contract: Rdot multiplies elementwise, sums each
4096-element block left to right, and combines block partials left to
right.  The parallel variant reuses the identical structure, which is
what makes its result independent of the thread count.
"""

from __future__ import annotations

from ..ddarith import DDouble, dd_sqrt
from .elem import get_backend
from .matrix import _scalar_for

DOT_BLOCK = 4096


def _zero(precision):
    return _scalar_for(precision, 0)


def Raxpy(n, alpha, x, incx, y, incy):
    """y <- alpha*x + y over n strided elements; n <= 0 or alpha == 0 is a no-op."""
    if n <= 0:
        return
    be = get_backend(y.precision)
    alpha = _scalar_for(y.precision, alpha)
    if not alpha:
        return
    xv = x.strided(n, incx)
    yv = y.strided(n, incy)
    a = be.from_python(alpha)
    be.fill(yv, be.add(yv, be.mul(a, xv)))


def Rdot(n, x, incx, y, incy):
    """Dot product in fixed blocked ascending order."""
    be = get_backend(x.precision)
    total = be.from_python(_zero(x.precision))
    if n <= 0:
        return be.item(total)
    xv = x.strided(n, incx)
    yv = y.strided(n, incy)
    for start in range(0, n, DOT_BLOCK):
        blk = slice(start, min(start + DOT_BLOCK, n))
        prod = be.mul(be.view(xv, blk), be.view(yv, blk))
        total = be.add(total, be.sum_ltr(prod))
    return be.item(total)


def Rnrm2(n, x, incx):
    """Euclidean norm with overflow-safe scaling; zero vector gives 0."""
    if n <= 0:
        return _zero(x.precision)
    one = _scalar_for(x.precision, 1)
    scale = _zero(x.precision)
    ssq = one
    for xi in _scalar_iter(x, n, incx):
        if not xi:
            continue
        axi = abs(xi)
        if scale < axi:
            r = scale / axi
            ssq = one + ssq * (r * r)
            scale = axi
        else:
            r = axi / scale
            ssq = ssq + r * r
    root = dd_sqrt(ssq) if isinstance(ssq, DDouble) else ssq ** 0.5
    return scale * root


def iRamax(n, x, incx):
    """1-based index of the first element of maximal |x_i|; 0 for n <= 0
    or incx <= 0 (the classic convention)."""
    if n <= 0 or incx <= 0:
        return 0
    be = get_backend(x.precision)
    return be.argmax_abs(x.strided(n, incx)) + 1


def _scalar_iter(x, n, incx):
    be = get_backend(x.precision)
    view = x.strided(n, incx)
    for i in range(n):
        yield be.item(be.view(view, slice(i, i + 1)))
