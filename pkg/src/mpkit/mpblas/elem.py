"""Per-precision vectorized element kernels.

A "store" is a tuple of numpy float64/complex128 arrays, one per
component of the element type:

    f64  (a,)                     c64  (a,)
    dd   (hi, lo)                 cdd  (re_hi, re_lo, im_hi, im_lo)

All stores in one call must share a backend; shapes follow numpy
broadcasting.  The double-double formulas here mirror ddarith's scalar
kernels operation for operation, so an array op applied elementwise is
bitwise identical to the scalar chain on each element.  That equivalence
is what lets the BLAS/LAPACK layer vectorize freely while keeping one
well-defined rounding history per element (and it is pinned by tests).
"""

from __future__ import annotations

import math

import numpy as np

from ..ddarith import DDComplex, DDouble, _div2

_SPLITTER = 134217729.0  # 2**27 + 1

def _quiet():
    # numpy 2.x errstate objects are single-entry; make a fresh one
    return np.errstate(all="ignore")


def _v_two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _v_quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _v_two_prod(a, b):
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _v_add2(xh, xl, yh, yl):
    s0 = np.asarray(xh + yh)
    sh, sl = _v_two_sum(xh, yh)
    th, tl = _v_two_sum(xl, yl)
    sl = sl + th
    sh, sl = _v_quick_two_sum(sh, sl)
    sl = sl + tl
    sh, sl = _v_quick_two_sum(sh, sl)
    bad = ~np.isfinite(s0)
    if bad.any():
        sh = np.where(bad, s0, sh)
        sl = np.where(bad, 0.0, sl)
    return sh, sl


def _v_mul2(xh, xl, yh, yl):
    p, e = _v_two_prod(xh, yh)
    bad = ~(np.isfinite(p) & np.isfinite(e))
    e = e + (xh * yl + xl * yh)
    rh, rl = _v_quick_two_sum(p, e)
    if bad.any():
        p = np.broadcast_to(p, np.shape(rh))
        rh = np.where(bad, p, rh)
        rl = np.where(bad, 0.0, rl)
    return rh, rl


def _v_mul21(xh, xl, y):
    p, e = _v_two_prod(xh, y)
    bad = ~(np.isfinite(p) & np.isfinite(e))
    e = e + xl * y
    rh, rl = _v_quick_two_sum(p, e)
    if bad.any():
        p = np.broadcast_to(p, np.shape(rh))
        rh = np.where(bad, p, rh)
        rl = np.where(bad, 0.0, rl)
    return rh, rl


def _v_div2(xh, xl, yh, yl):
    q1 = xh / yh
    p, e = _v_mul21(yh, yl, q1)
    rh, rl = _v_add2(xh, xl, -p, -e)
    q2 = rh / yh
    p, e = _v_mul21(yh, yl, q2)
    rh, rl = _v_add2(rh, rl, -p, -e)
    q3 = rh / yh
    a, b = _v_quick_two_sum(q1, q2)
    zh, zl = _v_add2(a, b, q3, np.float64(0.0))
    bad = (yh == 0.0) | ~(np.isfinite(xh) & np.isfinite(yh))
    if np.any(bad):
        # rare lanes take the scalar special-case path for identical
        # IEEE semantics (signed inf, nan propagation)
        shape = np.shape(bad)
        zh = np.array(np.broadcast_to(zh, shape), dtype=np.float64, ndmin=1)
        zl = np.array(np.broadcast_to(zl, shape), dtype=np.float64, ndmin=1)
        ops = [np.atleast_1d(np.broadcast_to(c, shape))
               for c in (xh, xl, yh, yl)]
        for idx in zip(*np.nonzero(np.atleast_1d(bad))):
            zh[idx], zl[idx] = _div2(float(ops[0][idx]), float(ops[1][idx]),
                                     float(ops[2][idx]), float(ops[3][idx]))
        zh = zh.reshape(shape)
        zl = zl.reshape(shape)
    return zh, zl


class _Backend:
    tag = None
    ncomp = None
    is_complex = False

    def zeros(self, shape):
        return tuple(np.zeros(shape) for _ in range(self.ncomp))

    def copy(self, s):
        return tuple(np.array(c, dtype=np.float64) for c in s)

    def view(self, s, index):
        return tuple(c[index] for c in s)

    def assign(self, dst, index, src):
        for d, c in zip(dst, src):
            d[index] = c

    def fill(self, dst, src):
        for d, c in zip(dst, src):
            d[...] = c

    def shape(self, s):
        return s[0].shape

    def broadcast_to(self, s, shape):
        return tuple(np.broadcast_to(c, shape) for c in s)


class F64Backend(_Backend):
    tag = "f64"
    ncomp = 1

    def from_python(self, v):
        if np.ndim(v) == 0 and not isinstance(v, (list, tuple)):
            return (np.asarray(float(v)),)
        return (np.array(v, dtype=np.float64),)

    def item(self, s):
        return float(np.asarray(s[0]).reshape(-1)[0])

    def add(self, x, y):
        with _quiet():
            return (x[0] + y[0],)

    def sub(self, x, y):
        with _quiet():
            return (x[0] - y[0],)

    def mul(self, x, y):
        with _quiet():
            return (x[0] * y[0],)

    def div(self, x, y):
        with _quiet():
            return (x[0] / y[0],)

    def neg(self, x):
        return (-x[0],)

    def absval(self, x):
        return (np.abs(x[0]),)

    def argmax_abs(self, s):
        a = np.abs(s[0])
        if a.size == 0:
            return -1
        m = np.max(a)
        idx = np.nonzero(a == m)[0]
        return int(idx[0]) if idx.size else 0

    def sum_ltr(self, s):
        # strict left-to-right accumulation; numpy reductions use
        # pairwise order, which would break cross-size determinism
        acc = 0.0
        for v in s[0].reshape(-1).tolist():
            acc = acc + v
        return (np.asarray(acc),)


class DDBackend(_Backend):
    tag = "dd"
    ncomp = 2

    def from_python(self, v):
        if np.ndim(v) == 0 and not isinstance(v, (list, tuple)):
            d = DDouble(v)
            return (np.asarray(d.hi), np.asarray(d.lo))
        arr = np.empty(np.shape(np.asarray(v, dtype=object)), dtype=object)
        arr[...] = v
        hi = np.empty(arr.shape)
        lo = np.empty(arr.shape)
        flat_hi, flat_lo, flat = hi.reshape(-1), lo.reshape(-1), arr.reshape(-1)
        for i in range(flat.size):
            d = DDouble(flat[i])
            flat_hi[i] = d.hi
            flat_lo[i] = d.lo
        return (hi, lo)

    def item(self, s):
        return DDouble._raw(float(np.asarray(s[0]).reshape(-1)[0]),
                            float(np.asarray(s[1]).reshape(-1)[0]))

    def add(self, x, y):
        with _quiet():
            return _v_add2(x[0], x[1], y[0], y[1])

    def sub(self, x, y):
        with _quiet():
            return _v_add2(x[0], x[1], -y[0], -y[1])

    def mul(self, x, y):
        with _quiet():
            return _v_mul2(x[0], x[1], y[0], y[1])

    def div(self, x, y):
        with _quiet():
            return _v_div2(x[0], x[1], y[0], y[1])

    def neg(self, x):
        return (-x[0], -x[1])

    def absval(self, x):
        sign = np.where(x[0] < 0.0, -1.0, 1.0)
        return (np.abs(x[0]), x[1] * sign)

    def argmax_abs(self, s):
        ah, al = self.absval(s)
        ah = ah.reshape(-1)
        al = al.reshape(-1)
        if ah.size == 0:
            return -1
        m = np.max(ah)
        idx = np.nonzero(ah == m)[0]
        if idx.size == 0:
            return 0
        if idx.size == 1:
            return int(idx[0])
        sub = al[idx]
        return int(idx[np.nonzero(sub == np.max(sub))[0][0]])

    def sum_ltr(self, s):
        hs = s[0].reshape(-1).tolist()
        ls = s[1].reshape(-1).tolist()
        ah, al = 0.0, 0.0
        for bh, bl in zip(hs, ls):
            # inline scalar _add2 on plain floats for speed
            s0 = ah + bh
            if not math.isfinite(s0):
                ah, al = s0, 0.0
                continue
            sh = s0
            bb = sh - ah
            sl = (ah - (sh - bb)) + (bh - bb)
            th = al + bl
            b2 = th - al
            tl = (al - (th - b2)) + (bl - b2)
            sl += th
            sh2 = sh + sl
            sl = sl - (sh2 - sh)
            sl += tl
            ah = sh2 + sl
            al = sl - (ah - sh2)
        return (np.asarray(ah), np.asarray(al))


class C64Backend(_Backend):
    tag = "c64"
    ncomp = 1
    is_complex = True

    def zeros(self, shape):
        return (np.zeros(shape, dtype=np.complex128),)

    def copy(self, s):
        return (np.array(s[0], dtype=np.complex128),)

    def from_python(self, v):
        if np.ndim(v) == 0 and not isinstance(v, (list, tuple)):
            return (np.asarray(complex(v)),)
        return (np.array(v, dtype=np.complex128),)

    def item(self, s):
        return complex(np.asarray(s[0]).reshape(-1)[0])

    def add(self, x, y):
        with _quiet():
            return (x[0] + y[0],)

    def sub(self, x, y):
        with _quiet():
            return (x[0] - y[0],)

    def mul(self, x, y):
        with _quiet():
            # explicit real/imag form, identical to the scalar complex rule
            a, b = x[0].real, x[0].imag
            c, d = y[0].real, y[0].imag
            return ((a * c - b * d) + 1j * (a * d + b * c),)

    def neg(self, x):
        return (-x[0],)


class CDDBackend(_Backend):
    tag = "cdd"
    ncomp = 4
    is_complex = True
    _dd = None  # set after DDBackend instantiation

    def from_python(self, v):
        if np.ndim(v) == 0 and not isinstance(v, (list, tuple)):
            z = DDComplex(v) if not isinstance(v, complex) \
                else DDComplex(v.real, v.imag)
            return (np.asarray(z.re.hi), np.asarray(z.re.lo),
                    np.asarray(z.im.hi), np.asarray(z.im.lo))
        arr = np.empty(np.shape(np.asarray(v, dtype=object)), dtype=object)
        arr[...] = v
        comps = tuple(np.empty(arr.shape) for _ in range(4))
        flat = [c.reshape(-1) for c in comps]
        src = arr.reshape(-1)
        for i in range(src.size):
            z = src[i]
            z = DDComplex(z.real, z.imag) if isinstance(z, complex) \
                else DDComplex(z)
            flat[0][i] = z.re.hi
            flat[1][i] = z.re.lo
            flat[2][i] = z.im.hi
            flat[3][i] = z.im.lo
        return comps

    def item(self, s):
        f = [float(np.asarray(c).reshape(-1)[0]) for c in s]
        return DDComplex(DDouble._raw(f[0], f[1]), DDouble._raw(f[2], f[3]))

    def _parts(self, s):
        return (s[0], s[1]), (s[2], s[3])

    def add(self, x, y):
        xr, xi = self._parts(x)
        yr, yi = self._parts(y)
        return self._dd.add(xr, yr) + self._dd.add(xi, yi)

    def sub(self, x, y):
        xr, xi = self._parts(x)
        yr, yi = self._parts(y)
        return self._dd.sub(xr, yr) + self._dd.sub(xi, yi)

    def mul(self, x, y):
        xr, xi = self._parts(x)
        yr, yi = self._parts(y)
        dd = self._dd
        re = dd.sub(dd.mul(xr, yr), dd.mul(xi, yi))
        im = dd.add(dd.mul(xr, yi), dd.mul(xi, yr))
        return re + im

    def neg(self, x):
        return tuple(-c for c in x)


F64 = F64Backend()
DD = DDBackend()
C64 = C64Backend()
CDD = CDDBackend()
CDD._dd = DD

_BACKENDS = {"f64": F64, "dd": DD, "c64": C64, "cdd": CDD}

REAL_PRECISIONS = ("f64", "dd")
COMPLEX_PRECISIONS = ("c64", "cdd")


def get_backend(tag):
    try:
        return _BACKENDS[tag]
    except KeyError:
        raise ValueError(f"unknown precision tag {tag!r}") from None


def complex_tag_for(tag):
    return {"f64": "c64", "dd": "cdd"}[tag]


def real_tag_for(tag):
    return {"c64": "f64", "cdd": "dd", "f64": "f64", "dd": "dd"}[tag]
