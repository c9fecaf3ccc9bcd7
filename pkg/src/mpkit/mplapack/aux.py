"""Auxiliary scalar kernels shared by the drivers.

Everything here is precision-generic: scalars are either python floats
or DDouble and flow through the same expressions.  The 2x2 solvers
(symmetric eigenproblem, Schur standardization, bidiagonal SVD) are
ports of the classic unblocked algorithms of Golub/Van Loan lineage,
keeping the guarded formulations that avoid overflow and cancellation.
"""

from __future__ import annotations

import math
from types import SimpleNamespace

from ..ddarith import DDouble, dd_sqrt, machine_params


def _sqrt(x):
    if isinstance(x, DDouble):
        return dd_sqrt(x)
    return math.sqrt(x)


def sign(a, b):
    """Fortran SIGN: |a| carrying the sign of b (b == 0 counts positive)."""
    return abs(a) if b >= 0 else -abs(a)


def scalars(tag):
    """Machine-dependent scalar set for one working precision."""
    if tag == "f64":
        p = machine_params("f64")
        eps = p.eps
        safmin = p.safe_min
        zero, one = 0.0, 1.0
    elif tag == "dd":
        p = machine_params("dd")
        eps = p.eps
        safmin = p.safe_min
        zero, one = DDouble(0.0), DDouble(1.0)
    else:
        raise ValueError(f"no real scalar set for {tag!r}")
    base = 2.0
    k = int(math.log(float(safmin) / float(eps)) / math.log(base) / 2.0)
    safmn2 = _pow2(tag, k)
    return SimpleNamespace(
        tag=tag,
        zero=zero,
        one=one,
        two=one + one,
        half=one / 2,
        eps=eps,
        eps2=eps * eps,
        safmin=safmin,
        smlnum=safmin / eps,
        bignum=one / (safmin / eps),
        safmn2=safmn2,
        safmx2=one / safmn2,
        sqrt=_sqrt,
    )


def _pow2(tag, k):
    v = math.ldexp(1.0, k)
    return DDouble(v) if tag == "dd" else v


def lapy2(x, y):
    """sqrt(x**2 + y**2) without gratuitous over/underflow."""
    xa, ya = abs(x), abs(y)
    w = max(xa, ya)
    z = min(xa, ya)
    if not z:
        return w
    r = z / w
    return w * _sqrt(1 + r * r)


def lapy3(x, y, z):
    xa, ya, za = abs(x), abs(y), abs(z)
    w = max(xa, ya, za)
    if not w:
        return xa + ya + za
    rx, ry, rz = xa / w, ya / w, za / w
    return w * _sqrt(rx * rx + ry * ry + rz * rz)


def lartg(f, g, sc):
    """Generate a plane rotation: returns (cs, sn, r) with
    [cs sn; -sn cs] [f; g] = [r; 0]."""
    zero, one = sc.zero, sc.one
    if not g:
        return one, zero, f
    if not f:
        return zero, one, g
    f1, g1 = f, g
    scale = max(abs(f1), abs(g1))
    count = 0
    if scale >= sc.safmx2:
        while scale >= sc.safmx2:
            count += 1
            f1 = f1 * sc.safmn2
            g1 = g1 * sc.safmn2
            scale = max(abs(f1), abs(g1))
        r = _sqrt(f1 * f1 + g1 * g1)
        cs = f1 / r
        sn = g1 / r
        for _ in range(count):
            r = r * sc.safmx2
    elif scale <= sc.safmn2:
        while scale <= sc.safmn2:
            count += 1
            f1 = f1 * sc.safmx2
            g1 = g1 * sc.safmx2
            scale = max(abs(f1), abs(g1))
        r = _sqrt(f1 * f1 + g1 * g1)
        cs = f1 / r
        sn = g1 / r
        for _ in range(count):
            r = r * sc.safmn2
    else:
        r = _sqrt(f1 * f1 + g1 * g1)
        cs = f1 / r
        sn = g1 / r
    if abs(f) > abs(g) and cs < 0:
        cs, sn, r = -cs, -sn, -r
    return cs, sn, r


def lae2(a, b, c, sc):
    """Eigenvalues (rt1 >= rt2) of the symmetric 2x2 [[a, b], [b, c]]."""
    half = sc.half
    sm = a + c
    df = a - c
    adf = abs(df)
    tb = b + b
    ab = abs(tb)
    if adf > ab:
        r = ab / adf
        rt = adf * _sqrt(1 + r * r)
    elif adf < ab:
        r = adf / ab
        rt = ab * _sqrt(1 + r * r)
    else:
        rt = ab * _sqrt(sc.two)
    if abs(a) > abs(c):
        acmx, acmn = a, c
    else:
        acmx, acmn = c, a
    if sm < 0:
        rt1 = half * (sm - rt)
        rt2 = (acmx / rt1) * acmn - (b / rt1) * b
    elif sm > 0:
        rt1 = half * (sm + rt)
        rt2 = (acmx / rt1) * acmn - (b / rt1) * b
    else:
        rt1 = half * rt
        rt2 = -half * rt
    return rt1, rt2


def laev2(a, b, c, sc):
    """Eigendecomposition of symmetric 2x2: (rt1, rt2, cs1, sn1) with the
    (cs1, sn1) eigenvector belonging to rt1."""
    half = sc.half
    sm = a + c
    df = a - c
    adf = abs(df)
    tb = b + b
    ab = abs(tb)
    if adf > ab:
        r = ab / adf
        rt = adf * _sqrt(1 + r * r)
    elif adf < ab:
        r = adf / ab
        rt = ab * _sqrt(1 + r * r)
    else:
        rt = ab * _sqrt(sc.two)
    if abs(a) > abs(c):
        acmx, acmn = a, c
    else:
        acmx, acmn = c, a
    if sm < 0:
        rt1 = half * (sm - rt)
        sgn1 = -1
        rt2 = (acmx / rt1) * acmn - (b / rt1) * b
    elif sm > 0:
        rt1 = half * (sm + rt)
        sgn1 = 1
        rt2 = (acmx / rt1) * acmn - (b / rt1) * b
    else:
        rt1 = half * rt
        rt2 = -half * rt
        sgn1 = 1
    if df >= 0:
        cs = df + rt
        sgn2 = 1
    else:
        cs = df - rt
        sgn2 = -1
    acs = abs(cs)
    if acs > ab:
        ct = -tb / cs
        sn1 = sc.one / _sqrt(1 + ct * ct)
        cs1 = ct * sn1
    else:
        if not ab:
            cs1 = sc.one
            sn1 = sc.zero
        else:
            tn = -cs / tb
            cs1 = sc.one / _sqrt(1 + tn * tn)
            sn1 = tn * cs1
    if sgn1 == sgn2:
        cs1, sn1 = -sn1, cs1
    return rt1, rt2, cs1, sn1


def lanv2(a, b, c, d, sc):
    """Standardize a real 2x2 block to Schur form.

    Returns (a, b, c, d, rt1r, rt1i, rt2r, rt2i, cs, sn).  On exit either
    c == 0 (two real eigenvalues) or a == d and b*c < 0 (complex pair).
    """
    zero, one, half = sc.zero, sc.one, sc.half
    multpl = 4.0
    eps = sc.eps
    if not c:
        cs, sn = one, zero
    elif not b:
        cs, sn = zero, one
        a, b, c, d = d, -c, zero, a
    elif (a - d) == 0 and sign(one, b) != sign(one, c):
        cs, sn = one, zero
    else:
        temp = a - d
        p = half * temp
        bcmax = max(abs(b), abs(c))
        bcmis = min(abs(b), abs(c)) * sign(one, b) * sign(one, c)
        scale = max(abs(p), bcmax)
        z = (p / scale) * p + (bcmax / scale) * bcmis
        if z >= multpl * eps:
            # real eigenvalues; reduce to upper triangular form
            z = p + sign(_sqrt(scale) * _sqrt(z), p)
            a = d + z
            d = d - (bcmax / z) * bcmis
            tau = lapy2(c, z)
            cs = z / tau
            sn = c / tau
            b = b - c
            c = zero
        else:
            # complex or nearly equal real eigenvalues
            sigma = b + c
            tau = lapy2(sigma, temp)
            cs = _sqrt(half * (one + abs(sigma) / tau))
            sn = -(p / (tau * cs)) * sign(one, sigma)
            aa = a * cs + b * sn
            bb = -a * sn + b * cs
            cc = c * cs + d * sn
            dd = -c * sn + d * cs
            a = aa * cs + cc * sn
            b = bb * cs + dd * sn
            c = -aa * sn + cc * cs
            d = -bb * sn + dd * cs
            temp = half * (a + d)
            a = temp
            d = temp
            if c:
                if b:
                    if sign(one, b) == sign(one, c):
                        # real eigenvalues after all
                        sab = _sqrt(abs(b))
                        sac = _sqrt(abs(c))
                        p = sign(sab * sac, c)
                        tau = one / _sqrt(abs(b + c))
                        a = temp + p
                        d = temp - p
                        b = b - c
                        c = zero
                        cs1 = sab * tau
                        sn1 = sac * tau
                        temp = cs * cs1 - sn * sn1
                        sn = cs * sn1 + sn * cs1
                        cs = temp
                else:
                    b = -c
                    c = zero
                    cs, sn = -sn, cs
    rt1r, rt2r = a, d
    if not c:
        rt1i, rt2i = zero, zero
    else:
        rt1i = _sqrt(abs(b)) * _sqrt(abs(c))
        rt2i = -rt1i
    return a, b, c, d, rt1r, rt1i, rt2r, rt2i, cs, sn


def las2(f, g, h, sc):
    """Singular values (ssmin <= ssmax) of 2x2 upper bidiagonal [[f,g],[0,h]]."""
    one, two = sc.one, sc.two
    fa, ga, ha = abs(f), abs(g), abs(h)
    fhmn = min(fa, ha)
    fhmx = max(fa, ha)
    if not fhmn:
        ssmin = sc.zero
        if not fhmx:
            ssmax = ga
        else:
            mn = min(fhmx, ga)
            mx = max(fhmx, ga)
            r = mn / mx
            ssmax = mx * _sqrt(1 + r * r)
        return ssmin, ssmax
    if ga < fhmx:
        as_ = one + fhmn / fhmx
        at = (fhmx - fhmn) / fhmx
        r = ga / fhmx
        au = r * r
        c = two / (_sqrt(as_ * as_ + au) + _sqrt(at * at + au))
        ssmin = fhmn * c
        ssmax = fhmx / c
    else:
        au = fhmx / ga
        if not au:
            ssmin = (fhmn * fhmx) / ga
            ssmax = ga
        else:
            as_ = one + fhmn / fhmx
            at = (fhmx - fhmn) / fhmx
            c = one / (_sqrt(one + (as_ * au) * (as_ * au))
                       + _sqrt(one + (at * au) * (at * au)))
            ssmin = (fhmn * c) * au
            ssmin = ssmin + ssmin
            ssmax = ga / (c + c)
    return ssmin, ssmax


def lasv2(f, g, h, sc):
    """SVD of 2x2 upper bidiagonal: (ssmin, ssmax, snr, csr, snl, csl)."""
    zero, one, two, half = sc.zero, sc.one, sc.two, sc.half
    four = two + two
    ft, ht, gt = f, h, g
    fa, ha, ga = abs(f), abs(h), abs(g)
    pmax = 1
    swap = ha > fa
    if swap:
        pmax = 3
        ft, ht = ht, ft
        fa, ha = ha, fa
    if not ga:
        ssmin, ssmax = ha, fa
        clt, crt, slt, srt = one, one, zero, zero
    else:
        gasmal = True
        if ga > fa:
            pmax = 2
            if (fa / ga) < sc.eps:
                gasmal = False
                ssmax = ga
                if ha > 1:
                    ssmin = fa / (ga / ha)
                else:
                    ssmin = (fa / ga) * ha
                clt, slt = one, ht / gt
                srt, crt = one, ft / gt
        if gasmal:
            d = fa - ha
            if d == fa:
                l = one
            else:
                l = d / fa
            m = gt / ft
            t = two - l
            mm = m * m
            tt = t * t
            s = _sqrt(tt + mm)
            if not l:
                r = abs(m)
            else:
                r = _sqrt(l * l + mm)
            a = half * (s + r)
            ssmin = ha / a
            ssmax = fa * a
            if not mm:
                if not l:
                    t = sign(two, ft) * sign(one, gt)
                else:
                    t = gt / sign(d, ft) + m / t
            else:
                t = (m / (s + t) + m / (r + l)) * (one + a)
            l2 = _sqrt(t * t + four)
            crt = two / l2
            srt = t / l2
            clt = (crt + srt * m) / a
            slt = (ht / ft) * srt / a
        if swap:
            csl, snl, csr, snr = srt, crt, slt, clt
        else:
            csl, snl, csr, snr = clt, slt, crt, srt
    if pmax == 1:
        tsign = sign(one, csr) * sign(one, csl) * sign(one, f)
    elif pmax == 2:
        tsign = sign(one, snr) * sign(one, csl) * sign(one, g)
    else:
        tsign = sign(one, snr) * sign(one, snl) * sign(one, h)
    ssmax = sign(ssmax, tsign)
    ssmin = sign(ssmin, tsign * sign(one, f) * sign(one, h))
    return ssmin, ssmax, snr, csr, snl, csl


# ---------------------------------------------------------------------------
# store-level helpers for the drivers

def sc_store(be, value):
    return be.from_python(value)


def getm(be, v, i, j):
    return be.item(be.view(v, (slice(i, i + 1), j)))


def setm(be, v, i, j, value):
    be.assign(v, (i, j), be.from_python(value))


def rot_cols(be, z, j1, j2, c, s, rows=None):
    """Apply [[c, s], [-s, c]] from the right to columns (j1, j2) of z:
    new_j1 = s*old_j2 + c*old_j1, new_j2 = c*old_j2 - s*old_j1."""
    rsel = slice(None) if rows is None else rows
    cb = be.from_python(c)
    sb = be.from_python(s)
    a1 = be.view(z, (rsel, j1))
    a2 = be.view(z, (rsel, j2))
    new2 = be.sub(be.mul(cb, a2), be.mul(sb, a1))
    new1 = be.add(be.mul(sb, a2), be.mul(cb, a1))
    be.assign(z, (rsel, j2), new2)
    be.assign(z, (rsel, j1), new1)


def rot_rows(be, a, i1, i2, c, s, cols=None):
    """Apply the rotation from the left to rows (i1, i2):
    new_i1 = c*old_i1 + s*old_i2, new_i2 = -s*old_i1 + c*old_i2."""
    csel = slice(None) if cols is None else cols
    cb = be.from_python(c)
    sb = be.from_python(s)
    r1 = be.view(a, (i1, csel))
    r2 = be.view(a, (i2, csel))
    new1 = be.add(be.mul(cb, r1), be.mul(sb, r2))
    new2 = be.sub(be.mul(cb, r2), be.mul(sb, r1))
    be.assign(a, (i1, csel), new1)
    be.assign(a, (i2, csel), new2)


def nrm2_scalars(xs, sc):
    """Overflow-safe Euclidean norm of a python scalar list."""
    scale, ssq = sc.zero, sc.one
    for v in xs:
        if not v:
            continue
        av = abs(v)
        if scale < av:
            r = scale / av
            ssq = sc.one + ssq * (r * r)
            scale = av
        else:
            r = av / scale
            ssq = ssq + r * r
    return scale * sc.sqrt(ssq)


def larfg(n, alpha, x, sc):
    """Householder generator on python scalars.

    x is a python list of length n-1 (modified in place); returns
    (beta, tau) where beta replaces alpha.  The reflector has the
    LAPACK sign convention: beta = -sign(norm, alpha).
    """
    if n <= 1:
        return alpha, sc.zero
    xnorm = nrm2_scalars(x, sc)
    if not xnorm:
        return alpha, sc.zero
    beta = -sign(lapy2(alpha, xnorm), alpha)
    safmin = sc.safmin / sc.eps
    knt = 0
    if abs(beta) < safmin:
        rsafmn = sc.one / safmin
        while abs(beta) < safmin and knt < 20:
            knt += 1
            for i in range(len(x)):
                x[i] = x[i] * rsafmn
            beta = beta * rsafmn
            alpha = alpha * rsafmn
            xnorm = xnorm * rsafmn
        beta = -sign(lapy2(alpha, xnorm), alpha)
    tau = (beta - alpha) / beta
    scal = sc.one / (alpha - beta)
    for i in range(len(x)):
        x[i] = x[i] * scal
    for _ in range(knt):
        beta = beta * safmin
    return beta, tau


def lasrt_ascending(xs):
    return sorted(xs)


def isnan_scalar(x):
    f = x if isinstance(x, float) else float(x)
    return math.isnan(f)


def larf_left(be, av, r0, r1, c0, c1, v, tau):
    """Apply (I - tau*v*v^T) from the left to av[r0:r1, c0:c1];
    v is a column store of length r1 - r0."""
    if r1 <= r0 or c1 <= c0:
        return
    taub = be.from_python(-tau)
    for j in range(c0, c1):
        col = be.view(av, (slice(r0, r1), j))
        w = be.sum_ltr(be.mul(col, v))
        t = be.mul(taub, w)
        be.fill(col, be.add(col, be.mul(v, t)))


def larf_right(be, av, r0, r1, c0, c1, v, tau):
    """Apply (I - tau*v*v^T) from the right to av[r0:r1, c0:c1];
    v is a row store of length c1 - c0."""
    if r1 <= r0 or c1 <= c0:
        return
    w = be.zeros(r1 - r0)
    for j in range(c0, c1):
        vj = be.view(v, slice(j - c0, j - c0 + 1))
        col = be.view(av, (slice(r0, r1), j))
        be.fill(w, be.add(w, be.mul(vj, col)))
    taub = be.from_python(-tau)
    for j in range(c0, c1):
        vj = be.view(v, slice(j - c0, j - c0 + 1))
        t = be.mul(taub, vj)
        col = be.view(av, (slice(r0, r1), j))
        be.fill(col, be.add(col, be.mul(w, t)))


def org2r(be, av, r0, c0, m2, n2, k, tau, sc):
    """Build the orthogonal factor from k column reflectors packed below
    the diagonal of the block av[r0:r0+m2, c0:c0+n2] (forward product)."""
    for j in range(k, n2):
        be.fill(be.view(av, (slice(r0, r0 + m2), c0 + j)), be.zeros(m2))
        setm(be, av, r0 + j, c0 + j, sc.one)
    for i in range(k - 1, -1, -1):
        if i < n2 - 1:
            setm(be, av, r0 + i, c0 + i, sc.one)
            v = be.view(av, (slice(r0 + i, r0 + m2), c0 + i))
            larf_left(be, av, r0 + i, r0 + m2, c0 + i + 1, c0 + n2,
                      v, tau[i])
        if i < m2 - 1:
            body = be.view(av, (slice(r0 + i + 1, r0 + m2), c0 + i))
            be.fill(body, be.mul(be.from_python(-tau[i]), body))
        setm(be, av, r0 + i, c0 + i, sc.one - tau[i])
        if i > 0:
            be.fill(be.view(av, (slice(r0, r0 + i), c0 + i)), be.zeros(i))


def orgl2(be, av, r0, c0, k, n2, tau, sc):
    """Build the orthogonal factor from k row reflectors packed to the
    right of the diagonal of the square block av[r0:r0+n2, c0:c0+n2]."""
    for i in range(k - 1, -1, -1):
        if i < n2 - 1:
            setm(be, av, r0 + i, c0 + i, sc.one)
            v = be.view(av, (r0 + i, slice(c0 + i, c0 + n2)))
            larf_right(be, av, r0 + i + 1, r0 + n2, c0 + i, c0 + n2,
                       v, tau[i])
            row = be.view(av, (r0 + i, slice(c0 + i + 1, c0 + n2)))
            be.fill(row, be.mul(be.from_python(-tau[i]), row))
        setm(be, av, r0 + i, c0 + i, sc.one - tau[i])
        if i > 0:
            be.fill(be.view(av, (r0 + i, slice(c0, c0 + i))), be.zeros(i))


def org2l(be, av, k, sc, tau):
    """Build the orthogonal factor from k column reflectors packed above
    the diagonal of the leading (k x k) block (backward product)."""
    for i in range(k):
        setm(be, av, i, i, sc.one)
        v = be.view(av, (slice(0, i + 1), i))
        larf_left(be, av, 0, i + 1, 0, i, v, tau[i])
        if i > 0:
            head = be.view(av, (slice(0, i), i))
            be.fill(head, be.mul(be.from_python(-tau[i]), head))
        setm(be, av, i, i, sc.one - tau[i])
        if i < k - 1:
            be.fill(be.view(av, (slice(i + 1, k), i)), be.zeros(k - 1 - i))
