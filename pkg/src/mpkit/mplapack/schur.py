"""Real Schur decomposition Rgees: A = Z*T*Z^T with T quasi-triangular.

Householder reduction to Hessenberg form, accumulation of Z, then the
classic small-matrix double-shift QR iteration with exceptional shifts
every tenth sweep on a stalled block.  2x2 blocks are standardized so
a complex pair has equal diagonal entries and opposite-sign
off-diagonals; eigenvalues are reported per diagonal block, the +wi
member of a conjugate pair first.  No eigenvalue reordering is done.
"""

from __future__ import annotations

from ..mpblas.elem import get_backend
from ..mpblas.matrix import Matrix, Vector, require
from .aux import (getm, lanv2, larf_left, larf_right, larfg, org2r,
                  rot_cols, rot_rows, scalars, setm)

EXC_SHIFT_EVERY = 10  # sweeps on one block before an exceptional shift
DAT1 = 0.75
DAT2 = -0.4375


class SchurResult:
    """T (quasi-triangular), Z (orthogonal, or None), wr/wi eigenvalue
    parts aligned with the diagonal blocks of T."""

    def __init__(self, T, Z, wr, wi):
        self.T = T
        self.Z = Z
        self.wr = wr
        self.wi = wi

    def __repr__(self):
        return (f"SchurResult(T={self.T!r}, Z={self.Z!r}, "
                f"n={len(self.wr)})")


def _gehd2(be, av, n, sc):
    """Reduce to upper Hessenberg form in place; returns tau."""
    tau = [sc.zero] * max(0, n - 1)
    for i in range(n - 1):
        alpha = getm(be, av, i + 1, i)
        xs = [getm(be, av, k, i) for k in range(i + 2, n)]
        beta, taui = larfg(n - 1 - i, alpha, xs, sc)
        tau[i] = taui
        if xs:
            be.assign(av, (slice(i + 2, n), i), be.from_python(xs))
        setm(be, av, i + 1, i, sc.one)
        v = be.view(av, (slice(i + 1, n), i))
        larf_right(be, av, 0, n, i + 1, n, v, taui)
        larf_left(be, av, i + 1, n, i + 1, n, v, taui)
        setm(be, av, i + 1, i, beta)
    return tau


def _orghr(be, av, n, sc, tau):
    """Overwrite av (holding gehd2 reflectors) with the orthogonal Q."""
    for jc in range(n - 1, 0, -1):
        for i in range(jc):
            setm(be, av, i, jc, sc.zero)
        for i in range(n - 1, jc, -1):
            setm(be, av, i, jc, getm(be, av, i, jc - 1))
    be.fill(be.view(av, (slice(None), 0)), be.zeros(n))
    setm(be, av, 0, 0, sc.one)
    if n > 1:
        org2r(be, av, 1, 1, n - 1, n - 1, n - 1, tau, sc)


def _shift_pair(h11, h12, h21, h22, sc):
    """Eigenvalues of the scaled trailing 2x2, as the double-shift pair.
    Real roots are collapsed onto the one closer to h22."""
    zero, half = sc.zero, sc.half
    s = abs(h11) + abs(h12) + abs(h21) + abs(h22)
    if not s:
        return zero, zero, zero, zero
    h11, h12, h21, h22 = h11 / s, h12 / s, h21 / s, h22 / s
    tr = (h11 + h22) * half
    det = (h11 - tr) * (h22 - tr) - h12 * h21
    disc = -det
    rtdisc = sc.sqrt(abs(disc))
    if disc >= 0:
        rt1r = tr + rtdisc
        rt2r = tr - rtdisc
        if abs(rt1r - h22) <= abs(rt2r - h22):
            rt2r = rt1r
        else:
            rt1r = rt2r
        return rt1r * s, zero, rt2r * s, zero
    return tr * s, rtdisc * s, tr * s, -(rtdisc * s)


def _row3_update(be, h, k, c1, nr, v2, v3, t1, t2, t3):
    n = be.shape(h)[1]
    csel = slice(c1, n)
    r0 = be.view(h, (k, csel))
    r1 = be.view(h, (k + 1, csel))
    t1b, t2b = be.from_python(t1), be.from_python(t2)
    if nr == 3:
        r2 = be.view(h, (k + 2, csel))
        total = be.add(be.add(r0, be.mul(be.from_python(v2), r1)),
                       be.mul(be.from_python(v3), r2))
        be.fill(r0, be.sub(r0, be.mul(total, t1b)))
        be.fill(r1, be.sub(r1, be.mul(total, t2b)))
        be.fill(r2, be.sub(r2, be.mul(total, be.from_python(t3))))
    else:
        total = be.add(r0, be.mul(be.from_python(v2), r1))
        be.fill(r0, be.sub(r0, be.mul(total, t1b)))
        be.fill(r1, be.sub(r1, be.mul(total, t2b)))


def _col3_update(be, h, k, rend, nr, v2, v3, t1, t2, t3):
    rsel = slice(0, rend)
    c0 = be.view(h, (rsel, k))
    c1 = be.view(h, (rsel, k + 1))
    t1b, t2b = be.from_python(t1), be.from_python(t2)
    if nr == 3:
        c2 = be.view(h, (rsel, k + 2))
        total = be.add(be.add(c0, be.mul(be.from_python(v2), c1)),
                       be.mul(be.from_python(v3), c2))
        be.fill(c0, be.sub(c0, be.mul(total, t1b)))
        be.fill(c1, be.sub(c1, be.mul(total, t2b)))
        be.fill(c2, be.sub(c2, be.mul(total, be.from_python(t3))))
    else:
        total = be.add(c0, be.mul(be.from_python(v2), c1))
        be.fill(c0, be.sub(c0, be.mul(total, t1b)))
        be.fill(c1, be.sub(c1, be.mul(total, t2b)))


def lahqr(be, h, n, sc, z=None):
    """Double-shift QR on the Hessenberg matrix in h (in place).

    Fills wr/wi (python scalar lists) and returns info: 0 on success,
    or 1-based i when rows 0..i-1 failed to converge within 30*n sweeps
    of one block.
    """
    wr = [sc.zero] * n
    wi = [sc.zero] * n
    if n == 0:
        return wr, wi, 0
    eps = sc.eps
    ulp = sc.two * eps
    smlnum = sc.safmin * (float(n) / ulp)
    itmax = 30 * max(1, n)
    i = n - 1
    kdefl = 0
    while i >= 0:
        if i == 0:
            wr[0] = getm(be, h, 0, 0)
            i -= 1
            continue
        l = 0
        converged = False
        for _ in range(itmax):
            # find a small subdiagonal to split the active block
            k = i
            while k > l:
                sub = abs(getm(be, h, k, k - 1))
                if sub <= smlnum:
                    break
                tst = eps * (abs(getm(be, h, k - 1, k - 1))
                             + abs(getm(be, h, k, k)))
                if sub <= max(smlnum, tst):
                    break
                k -= 1
            l = k
            if l > 0:
                setm(be, h, l, l - 1, sc.zero)
            if l >= i - 1:
                converged = True
                break
            kdefl += 1
            h22 = getm(be, h, i, i)
            h11 = getm(be, h, i - 1, i - 1)
            h12 = getm(be, h, i - 1, i)
            h21 = getm(be, h, i, i - 1)
            if kdefl % (2 * EXC_SHIFT_EVERY) == 0:
                s = abs(h21) + abs(getm(be, h, i - 1, i - 2))
                h11 = DAT1 * s + h22
                h12 = DAT2 * s
                h21 = s
                h22 = h11
            elif kdefl % EXC_SHIFT_EVERY == 0:
                s = abs(getm(be, h, l + 1, l)) + abs(getm(be, h, l + 2, l + 1))
                h11 = DAT1 * s + getm(be, h, l, l)
                h12 = DAT2 * s
                h21 = s
                h22 = h11
            rt1r, rt1i, rt2r, rt2i = _shift_pair(h11, h12, h21, h22, sc)
            # first column of (H - rt1)(H - rt2), scanned for a safe start
            m = i - 2
            while m >= l:
                hmm = getm(be, h, m, m)
                h21s = getm(be, h, m + 1, m)
                s = abs(hmm - rt2r) + abs(rt2i) + abs(h21s)
                h21s = h21s / s
                v1 = (h21s * getm(be, h, m, m + 1)
                      + (hmm - rt1r) * ((hmm - rt2r) / s)
                      - rt1i * (rt2i / s))
                v2 = h21s * (hmm + getm(be, h, m + 1, m + 1) - rt1r - rt2r)
                v3 = h21s * getm(be, h, m + 2, m + 1)
                s = abs(v1) + abs(v2) + abs(v3)
                v1, v2, v3 = v1 / s, v2 / s, v3 / s
                if m == l:
                    break
                tst = (abs(getm(be, h, m, m - 1)) * (abs(v2) + abs(v3)))
                lim = (eps * abs(v1)
                       * (abs(getm(be, h, m - 1, m - 1)) + abs(hmm)
                          + abs(getm(be, h, m + 1, m + 1))))
                if tst <= lim:
                    break
                m -= 1
            # chase the bulge from row m to row i-1
            vv = [v1, v2, v3]
            for k in range(m, i):
                nr = min(3, i - k + 1)
                if k > m:
                    vv = [getm(be, h, k + q, k - 1) for q in range(nr)]
                xs = vv[1:nr]
                beta, t1 = larfg(nr, vv[0], xs, sc)
                vv[0] = beta
                vv[1:nr] = xs
                if k > m:
                    setm(be, h, k, k - 1, vv[0])
                    setm(be, h, k + 1, k - 1, sc.zero)
                    if k < i - 1:
                        setm(be, h, k + 2, k - 1, sc.zero)
                elif m > l:
                    # guarded form of negating h(k, k-1)
                    cur = getm(be, h, k, k - 1)
                    setm(be, h, k, k - 1, cur * (sc.one - t1))
                v2s = vv[1]
                t2 = t1 * v2s
                if nr == 3:
                    v3s = vv[2]
                    t3 = t1 * v3s
                else:
                    v3s = sc.zero
                    t3 = sc.zero
                _row3_update(be, h, k, k, nr, v2s, v3s, t1, t2, t3)
                _col3_update(be, h, k, min(k + 3, i) + 1, nr,
                             v2s, v3s, t1, t2, t3)
                if z is not None:
                    _col3_update(be, z, k, n, nr, v2s, v3s, t1, t2, t3)
        if not converged:
            return wr, wi, i + 1
        if l == i:
            wr[i] = getm(be, h, i, i)
            i -= 1
        else:
            # standardize the converged trailing 2x2 block
            a = getm(be, h, i - 1, i - 1)
            b = getm(be, h, i - 1, i)
            c = getm(be, h, i, i - 1)
            d = getm(be, h, i, i)
            a, b, c, d, rt1r, rt1i, rt2r, rt2i, cs, sn = lanv2(a, b, c, d, sc)
            wr[i - 1], wi[i - 1] = rt1r, rt1i
            wr[i], wi[i] = rt2r, rt2i
            setm(be, h, i - 1, i - 1, a)
            setm(be, h, i - 1, i, b)
            setm(be, h, i, i - 1, c)
            setm(be, h, i, i, d)
            if i < n - 1:
                rot_rows(be, h, i - 1, i, cs, sn, cols=slice(i + 1, n))
            if i > 1:
                rot_cols(be, h, i - 1, i, cs, sn, rows=slice(0, i - 1))
            if z is not None:
                rot_cols(be, z, i - 1, i, cs, sn)
            i -= 2
        kdefl = 0
    return wr, wi, 0


def Rgees(jobvs, n, a, lda=None):
    """Schur factorization of the square matrix in a (overwritten by T).

    jobvs 'V' also accumulates the orthogonal Z.  Returns
    (SchurResult, info); info > 0 flags a block that failed to converge,
    with eigenvalues i..n-1 (0-based) still correct.
    """
    routine = "Rgees"
    lda = a.ld if lda is None else lda
    ok = isinstance(jobvs, str) and jobvs.upper() in ("V", "N")
    require(routine, ok, 1)
    jobvs = jobvs.upper()
    require(routine, n >= 0, 2)
    require(routine, lda >= max(1, n), 4)
    prec = a.precision
    wantz = jobvs == "V"
    if n == 0:
        z = Matrix(0, 0, prec) if wantz else None
        return SchurResult(a, z, Vector(0, prec), Vector(0, prec)), 0
    be = get_backend(prec)
    sc = scalars(prec)
    av = a.view2d(n, n, lda)
    tau = _gehd2(be, av, n, sc)
    zmat = None
    zv = None
    if wantz:
        zmat = Matrix(n, n, prec)
        zv = zmat.view2d()
        be.fill(zv, av)
        _orghr(be, zv, n, sc, tau)
    # discard the reflector vectors; iterate on the Hessenberg part only
    for j in range(n - 2):
        be.fill(be.view(av, (slice(j + 2, n), j)), be.zeros(n - j - 2))
    wr, wi, info = lahqr(be, av, n, sc, zv)
    wrv = Vector(n, prec)
    wiv = Vector(n, prec)
    for k in range(n):
        wrv.set(k, wr[k])
        wiv.set(k, wi[k])
    return SchurResult(a, zmat, wrv, wiv), info
