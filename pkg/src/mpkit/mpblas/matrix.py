"""Column-major matrix/vector containers and BLAS-style argument errors.

Element (i, j) of a Matrix, 0-based, lives at flat index i + j*ld, the
classic Fortran addressing rule.  Public routine signatures keep the
reference argument lists (explicit dimensions, leading dimensions,
strides), so invalid-argument reporting can use the reference argument
numbering; the containers merely own the storage.
"""

from __future__ import annotations

import numpy as np

from ..ddarith import DDComplex, DDouble
from .elem import get_backend, real_tag_for


class BlasError(ValueError):
    """Invalid argument, reported with the reference argument index."""

    def __init__(self, routine, index):
        self.routine = routine
        self.index = index
        super().__init__(
            f"on entry to {routine} parameter number {index} "
            "had an illegal value")


def _scalar_for(tag, value):
    if tag == "f64":
        return float(value)
    if tag == "dd":
        return DDouble(value)
    if tag == "c64":
        return complex(value)
    return DDComplex(value.real, value.imag) if isinstance(value, complex) \
        else DDComplex(value)


class Vector:
    """Flat element storage addressed with a BLAS stride rule."""

    def __init__(self, length, precision="f64"):
        if length < 0:
            raise ValueError("vector length must be >= 0")
        self.precision = precision
        self.backend = get_backend(precision)
        self.store = self.backend.zeros(length)

    @classmethod
    def from_list(cls, values, precision="f64"):
        v = cls(0, precision)
        v.store = v.backend.from_python(list(values))
        return v

    @property
    def length(self):
        return self.store[0].shape[0]

    def strided(self, n, inc):
        """Store views visiting n elements in reference stride order."""
        if inc == 0:
            raise ValueError("zero increment")
        need = 1 + (n - 1) * abs(inc)
        if n > 0 and self.length < need:
            raise ValueError(
                f"vector of length {self.length} too short for "
                f"n={n}, inc={inc}")
        start = 0 if inc > 0 else (n - 1) * (-inc)
        return tuple(c[start::inc][:n] for c in self.store)

    def get(self, i):
        return self.backend.item(self.backend.view(self.store, slice(i, i + 1)))

    def set(self, i, value):
        self.backend.assign(
            self.store, i,
            tuple(np.asarray(c).reshape(())
                  for c in self.backend.from_python(_scalar_for(self.precision,
                                                                value))))

    def to_list(self):
        return [self.get(i) for i in range(self.length)]

    def copy(self):
        v = Vector(0, self.precision)
        v.store = self.backend.copy(self.store)
        return v

    def astype(self, precision):
        return _convert(self, Vector(0, precision))

    def __len__(self):
        return self.length

    def __repr__(self):
        return f"Vector(length={self.length}, precision={self.precision!r})"


class Matrix:
    """m x n matrix over one element precision, column-major flat storage."""

    def __init__(self, m, n, precision="f64", ld=None):
        if m < 0 or n < 0:
            raise ValueError("matrix dimensions must be >= 0")
        ld = max(1, m) if ld is None else ld
        if ld < max(1, m):
            raise ValueError("leading dimension too small")
        self.m = m
        self.n = n
        self.ld = ld
        self.precision = precision
        self.backend = get_backend(precision)
        self.store = self.backend.zeros(ld * n)

    @classmethod
    def from_rows(cls, rows, precision="f64", ld=None):
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if m else 0
        if any(len(r) != n for r in rows):
            raise ValueError("ragged rows")
        a = cls(m, n, precision, ld)
        if m and n:
            a.backend.assign(
                a.view2d(), (slice(None), slice(None)),
                a.backend.from_python([[rows[i][j] for j in range(n)]
                                       for i in range(m)]))
        return a

    @classmethod
    def identity(cls, n, precision="f64"):
        a = cls(n, n, precision)
        one = a.backend.from_python(_scalar_for(precision, 1))
        v = a.view2d()
        for i in range(n):
            a.backend.assign(v, (i, i), one)
        return a

    def view2d(self, nrow=None, ncol=None, ld=None):
        """Component views of shape (nrow, ncol) under leading dimension ld.

        Defaults describe the whole matrix; explicit values let a routine
        reinterpret the flat storage the way Fortran callers do.
        """
        nrow = self.m if nrow is None else nrow
        ncol = self.n if ncol is None else ncol
        ld = self.ld if ld is None else ld
        need = ld * ncol
        if self.store[0].shape[0] < need:
            raise ValueError(
                f"storage of length {self.store[0].shape[0]} too short for "
                f"{nrow}x{ncol} with ld={ld}")
        return tuple(c[:need].reshape(ncol, ld).T[:nrow, :]
                     for c in self.store)

    def get(self, i, j):
        if not (0 <= i < self.m and 0 <= j < self.n):
            raise IndexError("matrix index out of range")
        return self.backend.item(self.backend.view(self.store,
                                                   slice(i + j * self.ld,
                                                         i + j * self.ld + 1)))

    def set(self, i, j, value):
        if not (0 <= i < self.m and 0 <= j < self.n):
            raise IndexError("matrix index out of range")
        self.backend.assign(
            self.store, i + j * self.ld,
            tuple(np.asarray(c).reshape(())
                  for c in self.backend.from_python(_scalar_for(self.precision,
                                                                value))))

    def to_rows(self):
        return [[self.get(i, j) for j in range(self.n)] for i in range(self.m)]

    def copy(self):
        a = Matrix(self.m, self.n, self.precision, self.ld)
        a.store = self.backend.copy(self.store)
        return a

    def astype(self, precision):
        out = Matrix(self.m, self.n, precision, self.ld)
        return _convert(self, out)

    def transpose(self):
        a = Matrix(self.n, self.m, self.precision)
        if self.m and self.n:
            src = self.view2d()
            a.backend.assign(a.view2d(), (slice(None), slice(None)),
                             tuple(c.T for c in src))
        return a

    def __repr__(self):
        return (f"Matrix({self.m}x{self.n}, ld={self.ld}, "
                f"precision={self.precision!r})")


def _convert(src, out):
    stag, dtag = src.precision, out.precision
    s = src.store
    if stag == dtag:
        out.store = src.backend.copy(s)
        return out
    promote = {
        ("f64", "dd"): lambda: (s[0].copy(), np.zeros_like(s[0])),
        ("dd", "f64"): lambda: (s[0].copy(),),
        ("c64", "cdd"): lambda: (s[0].real.copy(), np.zeros_like(s[0].real),
                                 s[0].imag.copy(), np.zeros_like(s[0].real)),
        ("cdd", "c64"): lambda: (s[0] + 1j * s[2],),
        ("f64", "c64"): lambda: (s[0].astype(np.complex128),),
        ("dd", "cdd"): lambda: (s[0].copy(), s[1].copy(),
                                np.zeros_like(s[0]), np.zeros_like(s[0])),
    }
    try:
        out.store = promote[(stag, dtag)]()
    except KeyError:
        raise ValueError(f"cannot convert {stag} to {dtag}") from None
    return out


# ---------------------------------------------------------------------------
# shared validation helpers (used by kernels and by the naive oracle so
# that both report identical argument indices)

def require(routine, cond, index):
    if not cond:
        raise BlasError(routine, index)


def check_flag(routine, value, allowed, index):
    require(routine, isinstance(value, str) and value.upper() in allowed, index)
    return value.upper()


def same_precision(routine, *objs):
    tags = {o.precision for o in objs}
    if len(tags) > 1:
        raise ValueError(f"{routine}: mixed precisions {sorted(tags)}")
    return tags.pop()
