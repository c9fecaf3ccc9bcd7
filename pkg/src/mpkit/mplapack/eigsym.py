"""Symmetric eigensolver Rsyev: tridiagonalize, accumulate Q, then
shifted QL/QR iteration on the tridiagonal.

Pipeline and operation order follow the classic unblocked path
(Householder reduction, rotation-product eigenvector accumulation,
Wilkinson-shift bulge chasing with the direction chosen by comparing
the end diagonal magnitudes).  Eigenvalues come out ascending; the
eigenvector for w[k] is column k of V.
"""

from __future__ import annotations

from ..mpblas.elem import get_backend
from ..mpblas.matrix import Vector, require
from .aux import (getm, laev2, lae2, lapy2, larfg, lartg, org2l, org2r,
                  rot_cols, scalars, setm, sign)

MAXIT = 30


class EigenResult:
    """Ascending eigenvalues w and (optionally) orthonormal V."""

    def __init__(self, w, V=None):
        self.w = w
        self.V = V

    def __repr__(self):
        return f"EigenResult(w={self.w!r}, V={self.V!r})"


# ---------------------------------------------------------------------------
# symmetric rank-2 helpers on store views (reference operation order)

def _symv_upper(be, av, rows, x, alpha):
    """y = alpha * A * x for the upper-triangle block av[rows x rows]."""
    y = be.zeros(rows)
    ab = be.from_python(alpha)
    for j in range(rows):
        xj = be.view(x, slice(j, j + 1))
        t1 = be.mul(ab, xj)
        if j > 0:
            head = be.view(y, slice(0, j))
            col = be.view(av, (slice(0, j), j))
            be.fill(head, be.add(head, be.mul(t1, col)))
            t2 = be.sum_ltr(be.mul(col, be.view(x, slice(0, j))))
        else:
            t2 = be.zeros(1)
        yj = be.view(y, slice(j, j + 1))
        ajj = be.view(av, (slice(j, j + 1), j))
        be.fill(yj, be.add(be.add(yj, be.mul(t1, ajj)), be.mul(ab, t2)))
    return y


def _symv_lower(be, av, rows, x, alpha):
    y = be.zeros(rows)
    ab = be.from_python(alpha)
    for j in range(rows):
        xj = be.view(x, slice(j, j + 1))
        t1 = be.mul(ab, xj)
        yj = be.view(y, slice(j, j + 1))
        ajj = be.view(av, (slice(j, j + 1), j))
        be.fill(yj, be.add(yj, be.mul(t1, ajj)))
        if j < rows - 1:
            tail = be.view(y, slice(j + 1, rows))
            col = be.view(av, (slice(j + 1, rows), j))
            be.fill(tail, be.add(tail, be.mul(t1, col)))
            t2 = be.sum_ltr(be.mul(col, be.view(x, slice(j + 1, rows))))
        else:
            t2 = be.zeros(1)
        be.fill(yj, be.add(yj, be.mul(ab, t2)))
    return y


def _syr2(be, av, rows, x, y, upper):
    """A += -(x*y^T + y*x^T) on one triangle of the block."""
    mone = be.from_python(-1.0)
    for j in range(rows):
        t1 = be.mul(mone, be.view(y, slice(j, j + 1)))
        t2 = be.mul(mone, be.view(x, slice(j, j + 1)))
        rsel = slice(0, j + 1) if upper else slice(j, rows)
        col = be.view(av, (rsel, j))
        xs = be.view(x, rsel)
        ys = be.view(y, rsel)
        be.fill(col, be.add(be.add(col, be.mul(xs, t1)), be.mul(ys, t2)))


# ---------------------------------------------------------------------------
# tridiagonal reduction

def _sytd2(be, av, n, sc, upper):
    """Reduce the symmetric matrix in av to tridiagonal form in place.

    Returns (d, e, tau) as python scalar lists; the reflector vectors
    stay packed in av the way the unblocked reference leaves them.
    """
    d = [sc.zero] * n
    e = [sc.zero] * max(0, n - 1)
    tau = [sc.zero] * max(0, n - 1)
    if n == 0:
        return d, e, tau
    if upper:
        for i in range(n - 2, -1, -1):
            alpha = getm(be, av, i, i + 1)
            xs = [getm(be, av, k, i + 1) for k in range(i)]
            beta, taui = larfg(i + 1, alpha, xs, sc)
            e[i] = beta
            if xs:
                be.assign(av, (slice(0, i), i + 1), be.from_python(xs))
            if taui:
                setm(be, av, i, i + 1, sc.one)
                v = be.view(av, (slice(0, i + 1), i + 1))
                w = _symv_upper(be, av, i + 1, v, taui)
                dot = be.item(be.sum_ltr(be.mul(w, v)))
                corr = (-sc.half * taui) * dot
                be.fill(w, be.add(w, be.mul(be.from_python(corr), v)))
                _syr2(be, av, i + 1, v, w, upper=True)
                setm(be, av, i, i + 1, e[i])
            d[i + 1] = getm(be, av, i + 1, i + 1)
            tau[i] = taui
        d[0] = getm(be, av, 0, 0)
    else:
        for i in range(n - 1):
            alpha = getm(be, av, i + 1, i)
            xs = [getm(be, av, k, i) for k in range(i + 2, n)]
            beta, taui = larfg(n - 1 - i, alpha, xs, sc)
            e[i] = beta
            if xs:
                be.assign(av, (slice(i + 2, n), i), be.from_python(xs))
            if taui:
                setm(be, av, i + 1, i, sc.one)
                v = be.view(av, (slice(i + 1, n), i))
                sub = be.view(av, (slice(i + 1, n), slice(i + 1, n)))
                w = _symv_lower(be, sub, n - 1 - i, v, taui)
                dot = be.item(be.sum_ltr(be.mul(w, v)))
                corr = (-sc.half * taui) * dot
                be.fill(w, be.add(w, be.mul(be.from_python(corr), v)))
                _syr2(be, sub, n - 1 - i, v, w, upper=False)
                setm(be, av, i + 1, i, e[i])
            d[i] = getm(be, av, i, i)
            tau[i] = taui
        d[n - 1] = getm(be, av, n - 1, n - 1)
    return d, e, tau


# ---------------------------------------------------------------------------
# accumulate the orthogonal factor of the reduction

def _orgtr(be, av, n, sc, tau, upper):
    """Overwrite av with the orthogonal matrix of the reduction."""
    if upper:
        # shift reflector columns left, pad the last row/column with e_n
        for j in range(n - 1):
            for i in range(j):
                setm(be, av, i, j, getm(be, av, i, j + 1))
            setm(be, av, n - 1, j, sc.zero)
        for i in range(n - 1):
            setm(be, av, i, n - 1, sc.zero)
        setm(be, av, n - 1, n - 1, sc.one)
        if n > 1:
            org2l(be, av, n - 1, sc, tau)
    else:
        # shift reflector columns right, pad the first row/column
        for j in range(n - 1, 0, -1):
            setm(be, av, 0, j, sc.zero)
            for i in range(j + 1, n):
                setm(be, av, i, j, getm(be, av, i, j - 1))
        setm(be, av, 0, 0, sc.one)
        for i in range(1, n):
            setm(be, av, i, 0, sc.zero)
        if n > 1:
            org2r(be, av, 1, 1, n - 1, n - 1, n - 1, tau, sc)


# ---------------------------------------------------------------------------
# shifted QL/QR iteration on the tridiagonal

def _small(e_i, d_i, d_i1, eps):
    a = abs(e_i)
    return not a or a <= eps * (abs(d_i) + abs(d_i1))


def steqr(n, d, e, sc, be=None, z=None):
    """Eigenvalues (and eigenvectors when z is given) of the symmetric
    tridiagonal (d, e); d and e are python scalar lists, mutated.

    Returns info: 0 on convergence, else the number of unconverged
    off-diagonal elements after n*30 total sweeps.
    """
    if n <= 1:
        return 0
    eps = sc.eps
    two = sc.two
    nmaxit = n * MAXIT
    jtot = 0
    cls = [sc.one] * (n - 1)
    sns = [sc.one] * (n - 1)
    l1 = 0
    while True:
        if l1 > n - 1:
            _order(n, d, be, z)
            return 0
        if l1 > 0:
            e[l1 - 1] = sc.zero
        m = n - 1
        for mm in range(l1, n - 1):
            if _small(e[mm], d[mm], d[mm + 1], eps):
                e[mm] = sc.zero
                m = mm
                break
        l = l1
        lend = m
        l1 = m + 1
        if lend == l:
            continue
        if abs(d[lend]) < abs(d[l]):
            l, lend = lend, l
        hit_cap = False
        if lend > l:
            # QL iteration
            while True:
                m = lend
                if l != lend:
                    for mm in range(l, lend):
                        if _small(e[mm], d[mm], d[mm + 1], eps):
                            m = mm
                            break
                if m < lend:
                    e[m] = sc.zero
                p = d[l]
                if m == l:
                    d[l] = p
                    l += 1
                    if l <= lend:
                        continue
                    break
                if m == l + 1:
                    if z is not None:
                        rt1, rt2, c, s = laev2(d[l], e[l], d[l + 1], sc)
                        rot_cols(be, z, l, l + 1, c, s)
                    else:
                        rt1, rt2 = lae2(d[l], e[l], d[l + 1], sc)
                    d[l] = rt1
                    d[l + 1] = rt2
                    e[l] = sc.zero
                    l += 2
                    if l <= lend:
                        continue
                    break
                if jtot == nmaxit:
                    hit_cap = True
                    break
                jtot += 1
                g = (d[l + 1] - p) / (two * e[l])
                r = lapy2(g, sc.one)
                g = d[m] - p + (e[l] / (g + sign(r, g)))
                s = sc.one
                c = sc.one
                p = sc.zero
                for i in range(m - 1, l - 1, -1):
                    f = s * e[i]
                    b = c * e[i]
                    c, s, r = lartg(g, f, sc)
                    if i != m - 1:
                        e[i + 1] = r
                    g = d[i + 1] - p
                    r = (d[i] - g) * s + two * c * b
                    p = s * r
                    d[i + 1] = g + p
                    g = c * r - b
                    if z is not None:
                        cls[i] = c
                        sns[i] = -s
                if z is not None:
                    for i in range(m - 1, l - 1, -1):
                        rot_cols(be, z, i, i + 1, cls[i], sns[i])
                d[l] = d[l] - p
                e[l] = g
        else:
            # QR iteration
            while True:
                m = lend
                if l != lend:
                    for mm in range(l, lend, -1):
                        if _small(e[mm - 1], d[mm], d[mm - 1], eps):
                            m = mm
                            break
                if m > lend:
                    e[m - 1] = sc.zero
                p = d[l]
                if m == l:
                    d[l] = p
                    l -= 1
                    if l >= lend:
                        continue
                    break
                if m == l - 1:
                    if z is not None:
                        rt1, rt2, c, s = laev2(d[l - 1], e[l - 1], d[l], sc)
                        rot_cols(be, z, l - 1, l, c, s)
                    else:
                        rt1, rt2 = lae2(d[l - 1], e[l - 1], d[l], sc)
                    d[l - 1] = rt1
                    d[l] = rt2
                    e[l - 1] = sc.zero
                    l -= 2
                    if l >= lend:
                        continue
                    break
                if jtot == nmaxit:
                    hit_cap = True
                    break
                jtot += 1
                g = (d[l - 1] - p) / (two * e[l - 1])
                r = lapy2(g, sc.one)
                g = d[m] - p + (e[l - 1] / (g + sign(r, g)))
                s = sc.one
                c = sc.one
                p = sc.zero
                for i in range(m, l):
                    f = s * e[i]
                    b = c * e[i]
                    c, s, r = lartg(g, f, sc)
                    if i != m:
                        e[i - 1] = r
                    g = d[i] - p
                    r = (d[i + 1] - g) * s + two * c * b
                    p = s * r
                    d[i] = g + p
                    g = c * r - b
                    if z is not None:
                        cls[i] = c
                        sns[i] = s
                if z is not None:
                    for i in range(m, l):
                        rot_cols(be, z, i, i + 1, cls[i], sns[i])
                d[l] = d[l] - p
                e[l - 1] = g
        if hit_cap or jtot >= nmaxit:
            return sum(1 for i in range(n - 1) if e[i])


def _order(n, d, be, z):
    """Ascending eigenvalue order; selection sort with column swaps when
    eigenvectors ride along."""
    if z is None:
        d.sort()
        return
    for ii in range(1, n):
        i = ii - 1
        k = i
        p = d[i]
        for j in range(ii, n):
            if d[j] < p:
                k = j
                p = d[j]
        if k != i:
            d[k] = d[i]
            d[i] = p
            tmp = be.copy(be.view(z, (slice(None), i)))
            be.assign(z, (slice(None), i), be.view(z, (slice(None), k)))
            be.assign(z, (slice(None), k), tmp)


# ---------------------------------------------------------------------------

def Rsyev(jobz, uplo, n, a, lda=None, w=None, work=None, lwork=None):
    """Eigendecomposition of the symmetric matrix in a.

    jobz 'V' overwrites a with the eigenvector columns; w receives the
    ascending eigenvalues.  lwork == -1 queries the optimal workspace
    into work[0] without touching a.  Returns (EigenResult, info).
    """
    routine = "Rsyev"
    lda = a.ld if lda is None else lda
    okj = isinstance(jobz, str) and jobz.upper() in ("V", "N")
    require(routine, okj, 1)
    oku = isinstance(uplo, str) and uplo.upper() in ("U", "L")
    require(routine, oku, 2)
    jobz = jobz.upper()
    uplo = uplo.upper()
    require(routine, n >= 0, 3)
    require(routine, lda >= max(1, n), 5)
    minwork = max(1, 3 * n - 1)
    lquery = lwork == -1
    require(routine, lquery or (lwork is not None and lwork >= minwork), 8)
    work.set(0, float(minwork))
    if lquery:
        return None, 0
    if n == 0:
        return EigenResult(Vector(0, a.precision)), 0
    if w is None:
        w = Vector(n, a.precision)
    be = get_backend(a.precision)
    sc = scalars(a.precision)
    av = a.view2d(n, n, lda)
    upper = uplo == "U"
    d, e, tau = _sytd2(be, av, n, sc, upper)
    if jobz == "V":
        _orgtr(be, av, n, sc, tau, upper)
        info = steqr(n, d, e, sc, be, av)
    else:
        info = steqr(n, d, e, sc)
    for i in range(n):
        w.set(i, d[i])
    return EigenResult(w, a if jobz == "V" else None), info
