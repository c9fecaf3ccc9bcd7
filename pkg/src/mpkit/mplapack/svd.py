"""Singular value decomposition Rgesvd: A = U * diag(s) * VT.

Householder bidiagonalization, accumulation of the full U and VT, then
implicit-shift QR on the bidiagonal (Golub-Kahan style with the
Demmel-Kahan zero-shift sweep when high relative accuracy is cheap or
the shift would be negligible).  Singular values come out descending
and nonnegative; jobu/jobvt accept 'A' (full factor) or 'N' (skip).
A wide matrix (m < n) is handled by factoring the transpose and
swapping the roles of U and VT.
"""

from __future__ import annotations

from ..mpblas.elem import get_backend
from ..mpblas.matrix import Matrix, Vector, require
from .aux import (getm, larf_left, larf_right, larfg, lartg, las2, lasv2,
                  org2r, orgl2, rot_cols, rot_rows, scalars, setm, sign)

MAXIT_PER_N = 30


class SvdResult:
    """Descending nonnegative singular values s, plus U (m x m) and
    VT (n x n) when requested ('A'), else None."""

    def __init__(self, s, U=None, VT=None):
        self.s = s
        self.U = U
        self.VT = VT

    def __repr__(self):
        return f"SvdResult(s={self.s!r}, U={self.U!r}, VT={self.VT!r})"


def _gebd2(be, av, m, n, sc):
    """Reduce the tall matrix (m >= n) to upper bidiagonal form.

    Returns (d, e, tauq, taup) scalar lists; reflectors stay packed in
    av (columns below the diagonal, rows right of the superdiagonal).
    """
    d = [sc.zero] * n
    e = [sc.zero] * max(0, n - 1)
    tauq = [sc.zero] * n
    taup = [sc.zero] * n
    for i in range(n):
        alpha = getm(be, av, i, i)
        xs = [getm(be, av, k, i) for k in range(i + 1, m)]
        beta, tq = larfg(m - i, alpha, xs, sc)
        d[i] = beta
        tauq[i] = tq
        if xs:
            be.assign(av, (slice(i + 1, m), i), be.from_python(xs))
        setm(be, av, i, i, sc.one)
        v = be.view(av, (slice(i, m), i))
        larf_left(be, av, i, m, i + 1, n, v, tq)
        setm(be, av, i, i, d[i])
        if i < n - 1:
            alpha = getm(be, av, i, i + 1)
            xs = [getm(be, av, i, k) for k in range(i + 2, n)]
            beta, tp = larfg(n - 1 - i, alpha, xs, sc)
            e[i] = beta
            taup[i] = tp
            if xs:
                be.assign(av, (i, slice(i + 2, n)), be.from_python(xs))
            setm(be, av, i, i + 1, sc.one)
            vrow = be.view(av, (i, slice(i + 1, n)))
            larf_right(be, av, i + 1, m, i + 1, n, vrow, tp)
            setm(be, av, i, i + 1, e[i])
        else:
            taup[i] = sc.zero
    return d, e, tauq, taup


def _build_u(be, av, m, n, tauq, sc, prec):
    """Assemble the full m x m left factor from the column reflectors."""
    u = Matrix(m, m, prec)
    uv = u.view2d()
    be.assign(uv, (slice(None), slice(0, n)), be.view(av, (slice(0, m),
                                                          slice(0, n))))
    org2r(be, uv, 0, 0, m, m, n, tauq, sc)
    return u


def _build_vt(be, av, n, taup, sc, prec):
    """Assemble the full n x n right factor from the row reflectors."""
    vt = Matrix(n, n, prec)
    vtv = vt.view2d()
    be.assign(vtv, (slice(None), slice(None)),
              be.view(av, (slice(0, n), slice(0, n))))
    # shift reflector rows down by one; first row and column become e_1
    setm(be, vtv, 0, 0, sc.one)
    for i in range(1, n):
        setm(be, vtv, i, 0, sc.zero)
    for j in range(1, n):
        for i in range(j - 1, 0, -1):
            setm(be, vtv, i, j, getm(be, vtv, i - 1, j))
        setm(be, vtv, 0, j, sc.zero)
    if n > 1:
        orgl2(be, vtv, 1, 1, n - 1, n - 1, taup, sc)
    return vt


def bdsqr(n, d, e, sc, be=None, vtv=None, ncvt=0, uv=None, nru=0):
    """Implicit-shift QR on the upper bidiagonal (d, e), in place.

    Rotations ride along on the rows of vtv and the columns of uv when
    given.  On success d holds the singular values descending and
    nonnegative.  Returns info: 0, or the count of unconverged
    superdiagonal entries after the sweep cap.
    """
    if n == 0:
        return 0
    eps = sc.eps
    one, zero = sc.one, sc.zero
    maxit = MAXIT_PER_N * n
    itcnt = 0
    hit_cap = False
    if n > 1:
        m = n - 1
        idir = 0
        oldll = -1
        oldm = -1
        while m > 0:
            # find the active block [ll, m]
            ll = m - 1
            while ll >= 0:
                ae = abs(e[ll])
                if not ae or ae <= eps * (abs(d[ll]) + abs(d[ll + 1])):
                    e[ll] = zero
                    break
                ll -= 1
            if ll == m - 1:
                # 1x1 split
                m -= 1
                continue
            ll += 1
            if ll == m - 1:
                # 2x2 block: closed form, then deflate both
                sigmn, sigmx, sinr, cosr, sinl, cosl = \
                    lasv2(d[m - 1], e[m - 1], d[m], sc)
                d[m - 1] = sigmx
                e[m - 1] = zero
                d[m] = sigmn
                if ncvt > 0:
                    rot_rows(be, vtv, m - 1, m, cosr, sinr)
                if nru > 0:
                    rot_cols(be, uv, m - 1, m, cosl, sinl)
                m -= 2
                continue
            if itcnt > maxit:
                hit_cap = True
                break
            if ll > oldm or m < oldll:
                idir = 1 if abs(d[ll]) >= abs(d[m]) else 2
            oldll, oldm = ll, m
            # shift from the trailing (or leading) 2x2; drop it to zero
            # when it would be lost to rounding against the block corner
            if idir == 1:
                sll = abs(d[ll])
                shift, _ = las2(d[m - 1], e[m - 1], d[m], sc)
            else:
                sll = abs(d[m])
                shift, _ = las2(d[ll], e[ll], d[ll + 1], sc)
            if sll > 0:
                r = shift / sll
                if r * r < eps:
                    shift = zero
            else:
                shift = zero
            itcnt += 1
            if not shift:
                # Demmel-Kahan zero-shift sweep
                if idir == 1:
                    cs = one
                    oldcs = one
                    sn = zero
                    oldsn = zero
                    crs, srs, cls_, sls = {}, {}, {}, {}
                    for i in range(ll, m):
                        cs, sn, r = lartg(d[i] * cs, e[i], sc)
                        if i > ll:
                            e[i - 1] = oldsn * r
                        oldcs, oldsn, d[i] = lartg(oldcs * r, d[i + 1] * sn,
                                                   sc)
                        crs[i], srs[i] = cs, sn
                        cls_[i], sls[i] = oldcs, oldsn
                    h = d[m] * cs
                    d[m] = h * oldcs
                    e[m - 1] = h * oldsn
                    if ncvt > 0:
                        for i in range(ll, m):
                            rot_rows(be, vtv, i, i + 1, crs[i], srs[i])
                    if nru > 0:
                        for i in range(ll, m):
                            rot_cols(be, uv, i, i + 1, cls_[i], sls[i])
                else:
                    cs = one
                    oldcs = one
                    sn = zero
                    oldsn = zero
                    crs, srs, cls_, sls = {}, {}, {}, {}
                    for i in range(m, ll, -1):
                        cs, sn, r = lartg(d[i] * cs, e[i - 1], sc)
                        if i < m:
                            e[i] = oldsn * r
                        oldcs, oldsn, d[i] = lartg(oldcs * r, d[i - 1] * sn,
                                                   sc)
                        crs[i - 1], srs[i - 1] = oldcs, -oldsn
                        cls_[i - 1], sls[i - 1] = cs, -sn
                    h = d[ll] * cs
                    d[ll] = h * oldcs
                    e[ll] = h * oldsn
                    if ncvt > 0:
                        for i in range(m - 1, ll - 1, -1):
                            rot_rows(be, vtv, i, i + 1, crs[i], srs[i])
                    if nru > 0:
                        for i in range(m - 1, ll - 1, -1):
                            rot_cols(be, uv, i, i + 1, cls_[i], sls[i])
            else:
                # shifted sweep
                if idir == 1:
                    f = ((abs(d[ll]) - shift)
                         * (sign(one, d[ll]) + shift / d[ll]))
                    g = e[ll]
                    crs, srs, cls_, sls = {}, {}, {}, {}
                    for i in range(ll, m):
                        cosr, sinr, r = lartg(f, g, sc)
                        if i > ll:
                            e[i - 1] = r
                        f = cosr * d[i] + sinr * e[i]
                        e[i] = cosr * e[i] - sinr * d[i]
                        g = sinr * d[i + 1]
                        d[i + 1] = cosr * d[i + 1]
                        cosl, sinl, r = lartg(f, g, sc)
                        d[i] = r
                        f = cosl * e[i] + sinl * d[i + 1]
                        d[i + 1] = cosl * d[i + 1] - sinl * e[i]
                        if i < m - 1:
                            g = sinl * e[i + 1]
                            e[i + 1] = cosl * e[i + 1]
                        crs[i], srs[i] = cosr, sinr
                        cls_[i], sls[i] = cosl, sinl
                    e[m - 1] = f
                    if ncvt > 0:
                        for i in range(ll, m):
                            rot_rows(be, vtv, i, i + 1, crs[i], srs[i])
                    if nru > 0:
                        for i in range(ll, m):
                            rot_cols(be, uv, i, i + 1, cls_[i], sls[i])
                else:
                    f = ((abs(d[m]) - shift)
                         * (sign(one, d[m]) + shift / d[m]))
                    g = e[m - 1]
                    crs, srs, cls_, sls = {}, {}, {}, {}
                    for i in range(m, ll, -1):
                        cosr, sinr, r = lartg(f, g, sc)
                        if i < m:
                            e[i] = r
                        f = cosr * d[i] + sinr * e[i - 1]
                        e[i - 1] = cosr * e[i - 1] - sinr * d[i]
                        g = sinr * d[i - 1]
                        d[i - 1] = cosr * d[i - 1]
                        cosl, sinl, r = lartg(f, g, sc)
                        d[i] = r
                        f = cosl * e[i - 1] + sinl * d[i - 1]
                        d[i - 1] = cosl * d[i - 1] - sinl * e[i - 1]
                        if i > ll + 1:
                            g = sinl * e[i - 2]
                            e[i - 2] = cosl * e[i - 2]
                        cls_[i - 1], sls[i - 1] = cosl, -sinl
                        crs[i - 1], srs[i - 1] = cosr, -sinr
                    e[ll] = f
                    if ncvt > 0:
                        for i in range(m - 1, ll - 1, -1):
                            rot_rows(be, vtv, i, i + 1, crs[i], srs[i])
                    if nru > 0:
                        for i in range(m - 1, ll - 1, -1):
                            rot_cols(be, uv, i, i + 1, cls_[i], sls[i])
        if hit_cap:
            return sum(1 for i in range(n - 1) if e[i])
    # all converged: force nonnegative values (and a canonical +0)
    for i in range(n):
        if d[i] < 0:
            d[i] = -d[i]
            if ncvt > 0:
                row = be.view(vtv, (i, slice(None)))
                be.fill(row, be.neg(row))
        elif not d[i]:
            d[i] = zero
    # sort descending (selection of the smallest into the tail)
    for i in range(1, n):
        isub = 0
        smin = d[0]
        for j in range(1, n + 1 - i):
            if d[j] <= smin:
                isub = j
                smin = d[j]
        tgt = n - i
        if isub != tgt:
            d[isub] = d[tgt]
            d[tgt] = smin
            if ncvt > 0:
                r1 = be.copy(be.view(vtv, (isub, slice(None))))
                be.assign(vtv, (isub, slice(None)),
                          be.view(vtv, (tgt, slice(None))))
                be.assign(vtv, (tgt, slice(None)), r1)
            if nru > 0:
                c1 = be.copy(be.view(uv, (slice(None), isub)))
                be.assign(uv, (slice(None), isub),
                          be.view(uv, (slice(None), tgt)))
                be.assign(uv, (slice(None), tgt), c1)
    return 0


def _gesvd_core(jobu, jobvt, m, n, a, lda):
    """m >= n path; a is overwritten."""
    prec = a.precision
    be = get_backend(prec)
    sc = scalars(prec)
    av = a.view2d(m, n, lda)
    d, e, tauq, taup = _gebd2(be, av, m, n, sc)
    u = _build_u(be, av, m, n, tauq, sc, prec) if jobu == "A" else None
    vt = _build_vt(be, av, n, taup, sc, prec) if jobvt == "A" else None
    info = bdsqr(n, d, e, sc, be,
                 vt.view2d() if vt is not None else None,
                 n if vt is not None else 0,
                 u.view2d() if u is not None else None,
                 m if u is not None else 0)
    s = Vector(n, prec)
    for i in range(n):
        s.set(i, d[i])
    return SvdResult(s, u, vt), info


def Rgesvd(jobu, jobvt, m, n, a, lda=None):
    """SVD of the matrix in a (contents destroyed).

    Returns (SvdResult, info); info > 0 is the number of superdiagonal
    entries of the intermediate bidiagonal that failed to converge.
    """
    routine = "Rgesvd"
    lda = a.ld if lda is None else lda
    oku = isinstance(jobu, str) and jobu.upper() in ("A", "N")
    require(routine, oku, 1)
    okv = isinstance(jobvt, str) and jobvt.upper() in ("A", "N")
    require(routine, okv, 2)
    jobu = jobu.upper()
    jobvt = jobvt.upper()
    require(routine, m >= 0, 3)
    require(routine, n >= 0, 4)
    require(routine, lda >= max(1, m), 6)
    prec = a.precision
    if m == 0 or n == 0:
        return SvdResult(Vector(0, prec),
                         Matrix.identity(m, prec) if jobu == "A" else None,
                         Matrix.identity(n, prec) if jobvt == "A" else None), 0
    if m >= n:
        return _gesvd_core(jobu, jobvt, m, n, a, lda)
    at = a.transpose()
    res, info = _gesvd_core(jobvt, jobu, n, m, at, at.ld)
    u = res.VT.transpose() if jobu == "A" else None
    vt = res.U.transpose() if jobvt == "A" else None
    return SvdResult(res.s, u, vt), info
