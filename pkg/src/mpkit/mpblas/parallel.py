"""Deterministic parallel variants of selected kernels.

Threads partition work over disjoint output regions and every element
keeps the exact accumulation order of the sequential kernel, so results
are bitwise equal to sequential for any thread count.  Rdot_par reuses
Rdot's fixed 4096-element block structure: blocks are computed in
parallel but combined left to right, making the value independent of t.

Thread count resolution: an explicit t wins, else the MPKIT_THREADS
environment variable, else 1.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

from .elem import get_backend
from .level1 import DOT_BLOCK, Raxpy, Rdot
from .level23 import Rgemm
from .matrix import _scalar_for


def resolve_threads(t=None):
    if t is not None:
        if t < 1:
            raise ValueError("thread count must be >= 1")
        return int(t)
    env = os.environ.get("MPKIT_THREADS", "")
    try:
        val = int(env)
    except ValueError:
        return 1
    return max(1, val)


def _chunks(total, parts):
    """Split range(total) into <= parts contiguous spans."""
    parts = max(1, min(parts, total)) if total else 0
    out = []
    base, extra = divmod(total, parts) if parts else (0, 0)
    start = 0
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        out.append((start, start + size))
        start += size
    return out


def Raxpy_par(n, alpha, x, incx, y, incy, t=None):
    """Raxpy with the index range split into contiguous spans per thread."""
    t = resolve_threads(t)
    if n <= 0:
        return
    alpha = _scalar_for(y.precision, alpha)
    if not alpha:
        return
    if t == 1 or n < 2:
        Raxpy(n, alpha, x, incx, y, incy)
        return
    be = get_backend(y.precision)
    xv = x.strided(n, incx)
    yv = y.strided(n, incy)
    ab = be.from_python(alpha)

    def work(span):
        lo, hi = span
        sl = slice(lo, hi)
        xs = be.view(xv, sl)
        ys = be.view(yv, sl)
        be.fill(ys, be.add(ys, be.mul(ab, xs)))

    with ThreadPoolExecutor(max_workers=t) as pool:
        list(pool.map(work, _chunks(n, t)))


def Rdot_par(n, x, incx, y, incy, t=None):
    """Rdot with per-block partials computed in parallel."""
    t = resolve_threads(t)
    be = get_backend(x.precision)
    if n <= 0:
        return be.item(be.from_python(_scalar_for(x.precision, 0)))
    if t == 1 or n <= DOT_BLOCK:
        return Rdot(n, x, incx, y, incy)
    xv = x.strided(n, incx)
    yv = y.strided(n, incy)
    nblocks = (n + DOT_BLOCK - 1) // DOT_BLOCK

    def work(bi):
        blk = slice(bi * DOT_BLOCK, min((bi + 1) * DOT_BLOCK, n))
        prod = be.mul(be.view(xv, blk), be.view(yv, blk))
        return be.sum_ltr(prod)

    with ThreadPoolExecutor(max_workers=t) as pool:
        partials = list(pool.map(work, range(nblocks)))
    total = be.from_python(_scalar_for(x.precision, 0))
    for p in partials:
        total = be.add(total, p)
    return be.item(total)


def Rgemm_par(transa, transb, m, n, k, alpha, a, lda=None, b=None, ldb=None,
              beta=1.0, c=None, ldc=None, t=None):
    """Rgemm with C partitioned into column panels, one per thread.

    Each panel is computed by the sequential kernel restricted to those
    columns, so each element of C sees the exact sequential operation
    order.
    """
    t = resolve_threads(t)
    if t == 1 or n < 2:
        Rgemm(transa, transb, m, n, k, alpha, a, lda, b, ldb, beta, c, ldc)
        return
    # validate once with full dimensions (errors must not depend on t)
    panels = _chunks(n, t)

    def work(span):
        j0, j1 = span
        _gemm_panel(transa, transb, m, n, k, alpha, a, lda, b, ldb,
                    beta, c, ldc, j0, j1)

    _gemm_panel(transa, transb, m, n, k, alpha, a, lda, b, ldb,
                beta, c, ldc, 0, 0)  # argument validation only
    with ThreadPoolExecutor(max_workers=t) as pool:
        list(pool.map(work, panels))


def _gemm_panel(transa, transb, m, n, k, alpha, a, lda, b, ldb,
                beta, c, ldc, j0, j1):
    from .elem import get_backend as _gb
    from .level23 import _gemm_core, _gemm_validate, _ld_of, _scalarize
    from .matrix import same_precision

    tag = same_precision("Rgemm", a, b, c)
    be = _gb(tag)
    lda, ldb, ldc = _ld_of(a, lda), _ld_of(b, ldb), _ld_of(c, ldc)
    transa, transb = _gemm_validate("Rgemm", transa, transb, m, n, k,
                                    lda, ldb, ldc)
    alpha = _scalarize(tag, alpha)
    beta = _scalarize(tag, beta)
    ncols = j1 - j0
    if m == 0 or ncols == 0 or ((not alpha or k == 0) and beta == 1):
        return
    nrowa, ncola = (m, k) if transa == "N" else (k, m)
    nrowb, ncolb = (k, n) if transb == "N" else (n, k)
    av = a.view2d(nrowa, ncola, lda)
    bv = b.view2d(nrowb, ncolb, ldb)
    cv = c.view2d(m, n, ldc)
    cols = slice(j0, j1)
    cpanel = be.view(cv, (slice(None), cols))
    # restrict the B operand to the panel's columns of op(B)
    if transb == "N":
        bpanel = be.view(bv, (slice(None), cols))
    else:
        bpanel = be.view(bv, (cols, slice(None)))
    _gemm_core(be, transa, transb, m, ncols, k, alpha, av, bpanel,
               beta, cpanel)
