"""Double-double arithmetic built on error-free transforms.

A double-double represents a real number as an unevaluated sum of two
binary64 values (hi, lo) with hi == fl(hi + lo), giving about 106
significand bits (~32 decimal digits).  The error-free transforms follow
Knuth (TAOCP vol 2) for two_sum and Dekker (Numer. Math. 18, 1971) for
the split/product; the composite add/mul/div/sqrt follow the accurate
variants of the QD library (Hida, Li, Bailey, LBNL-46996).

No fused multiply-add is assumed anywhere: the platform offers none that
is correctly rounded on every code path, so two_prod always uses the
Dekker split.  TWO_PROD_SCHEME records that choice for reporting.

Accuracy contracts hold for operands and results with magnitude inside
[underflow * 2**110, overflow / 2**110]; outside that window the Dekker
splitter (2**27 + 1) can overflow an intermediate and results degrade to
the IEEE non-finite flow-through (hi = +-inf or nan, lo = 0).
"""

from __future__ import annotations

import math
import re as _re
from dataclasses import dataclass
from fractions import Fraction

_SPLITTER = 134217729.0  # 2**27 + 1, Dekker 1971
_INF = math.inf
_NAN = math.nan

TWO_PROD_SCHEME = "dekker-split"


# ---------------------------------------------------------------------------
# error-free transforms on raw floats

def two_sum(a, b):
    """Return (s, e) with s = fl(a+b) and s + e == a + b exactly."""
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    """two_sum specialization valid when |a| >= |b| (or a == 0)."""
    s = a + b
    return s, b - (s - a)


def split(a):
    """Dekker split of a into a 26-bit head and 26-bit tail."""
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    """Return (p, e) with p = fl(a*b) and p + e == a * b exactly."""
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


# ---------------------------------------------------------------------------
# raw (hi, lo) kernels; the array backend mirrors these formulas exactly

def _canon(hi, lo):
    if math.isfinite(hi):
        return hi, lo
    return hi, 0.0


def _norm(hi, lo):
    s, e = two_sum(hi, lo)
    return _canon(s, e)


def _add2(xh, xl, yh, yl):
    # accurate (ieee) double-double addition: two two_sum passes
    s0 = xh + yh
    if not math.isfinite(s0):
        return s0, 0.0
    sh, sl = two_sum(xh, yh)
    th, tl = two_sum(xl, yl)
    sl += th
    sh, sl = quick_two_sum(sh, sl)
    sl += tl
    sh, sl = quick_two_sum(sh, sl)
    return _canon(sh, sl)


def _mul2(xh, xl, yh, yl):
    p, e = two_prod(xh, yh)
    if not (math.isfinite(p) and math.isfinite(e)):
        # operand or product outside the splitter-safe window
        return _canon(p, 0.0)
    e += xh * yl + xl * yh
    p, e = quick_two_sum(p, e)
    return _canon(p, e)


def _mul21(xh, xl, y):
    # dd * double
    p, e = two_prod(xh, y)
    if not (math.isfinite(p) and math.isfinite(e)):
        return _canon(p, 0.0)
    e += xl * y
    p, e = quick_two_sum(p, e)
    return _canon(p, e)


def _div2(xh, xl, yh, yl):
    if yh == 0.0:
        if xh == 0.0:
            return _NAN, 0.0
        return math.copysign(_INF, xh) * math.copysign(1.0, yh), 0.0
    if not (math.isfinite(xh) and math.isfinite(yh)):
        if math.isinf(yh):
            if math.isinf(xh):
                return _NAN, 0.0
            return math.copysign(0.0, xh) * math.copysign(1.0, yh), 0.0
        return _canon(xh * math.copysign(1.0, yh), 0.0)
    # long division with three quotient terms
    q1 = xh / yh
    rh, rl = _add2(xh, xl, *_neg2(*_mul21(yh, yl, q1)))
    q2 = rh / yh
    rh, rl = _add2(rh, rl, *_neg2(*_mul21(yh, yl, q2)))
    q3 = rh / yh
    q1, q2 = quick_two_sum(q1, q2)
    return _add2(q1, q2, q3, 0.0)


def _neg2(h, l):
    return -h, -l


def _sub2(xh, xl, yh, yl):
    return _add2(xh, xl, -yh, -yl)


def _sqrt2(h, l):
    # Karp and Markstein style: one Newton correction on 1/sqrt(hi)
    if h == 0.0 and l == 0.0:
        return 0.0, 0.0
    if h < 0.0:
        raise ValueError("dd_sqrt of negative value")
    if not math.isfinite(h):
        return h, 0.0
    # exact even-power scaling keeps ax*ax and 1/sqrt(h) inside range
    shift = 0
    if h >= 2.0 ** 996:
        h, l, shift = math.ldexp(h, -106), math.ldexp(l, -106), 53
    elif h <= 2.0 ** -996:
        h, l, shift = math.ldexp(h, 106), math.ldexp(l, 106), -53
    x = 1.0 / math.sqrt(h)
    ax = h * x
    p, e = two_prod(ax, ax)
    rh, _ = _add2(h, l, -p, -e)
    s, e2 = quick_two_sum(ax, rh * (x * 0.5))
    if shift:
        s, e2 = math.ldexp(s, shift), math.ldexp(e2, shift)
    return _canon(s, e2)


def _cmp2(xh, xl, yh, yl):
    # valid for normalized pairs: lexicographic order on (hi, lo)
    if xh < yh:
        return -1
    if xh > yh:
        return 1
    if xl < yl:
        return -1
    if xl > yl:
        return 1
    return 0


# ---------------------------------------------------------------------------
# scalar value type

class DDouble:
    """An immutable double-double scalar.

    Accepts a float/int, a decimal string (parsed exactly, then correctly
    rounded), another DDouble, or an explicit (hi, lo) pair which is
    renormalized.  Treat instances as immutable.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, value=0.0, lo=None):
        if lo is not None:
            hi, lo = _norm(float(value), float(lo))
        elif isinstance(value, DDouble):
            hi, lo = value.hi, value.lo
        elif isinstance(value, str):
            hi, lo = _parse(value)
        elif isinstance(value, float):
            hi, lo = value, 0.0
        elif isinstance(value, int):
            try:
                hi = float(value)
            except OverflowError:
                hi = _INF if value > 0 else -_INF
            if math.isfinite(hi):
                lo = float(value - int(hi))
                hi, lo = _norm(hi, lo)
            else:
                lo = 0.0
        else:
            raise TypeError(f"cannot make DDouble from {type(value).__name__}")
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo", lo)

    @classmethod
    def _raw(cls, hi, lo):
        # trusted already-normalized pair, skips renormalization
        self = object.__new__(cls)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo", lo)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("DDouble is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, DDouble):
            return other.hi, other.lo
        if isinstance(other, (int, float)):
            d = DDouble(other)
            return d.hi, d.lo
        return None

    def __add__(self, other):
        o = DDouble._coerce(other)
        if o is None:
            return NotImplemented
        return DDouble._raw(*_add2(self.hi, self.lo, *o))

    __radd__ = __add__

    def __sub__(self, other):
        o = DDouble._coerce(other)
        if o is None:
            return NotImplemented
        return DDouble._raw(*_sub2(self.hi, self.lo, *o))

    def __rsub__(self, other):
        o = DDouble._coerce(other)
        if o is None:
            return NotImplemented
        return DDouble._raw(*_sub2(*o, self.hi, self.lo))

    def __mul__(self, other):
        o = DDouble._coerce(other)
        if o is None:
            return NotImplemented
        return DDouble._raw(*_mul2(self.hi, self.lo, *o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = DDouble._coerce(other)
        if o is None:
            return NotImplemented
        return DDouble._raw(*_div2(self.hi, self.lo, *o))

    def __rtruediv__(self, other):
        o = DDouble._coerce(other)
        if o is None:
            return NotImplemented
        return DDouble._raw(*_div2(*o, self.hi, self.lo))

    def __neg__(self):
        return DDouble._raw(-self.hi, -self.lo)

    def __pos__(self):
        return self

    def __abs__(self):
        if self.hi < 0.0 or (self.hi == 0.0 and self.lo < 0.0):
            return -self
        return self

    def __float__(self):
        return self.hi + self.lo

    def __bool__(self):
        return self.hi != 0.0 or self.lo != 0.0

    def _cmp(self, other):
        o = DDouble._coerce(other)
        if o is None:
            return None
        return _cmp2(self.hi, self.lo, *o)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __ne__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c != 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return hash((self.hi, self.lo))

    def is_finite(self):
        return math.isfinite(self.hi)

    def __repr__(self):
        return f"DDouble({self.hi!r}, {self.lo!r})"

    def __str__(self):
        return dd_to_string(self, 33)


def dd_add(a, b):
    return DDouble(a) + b


def dd_sub(a, b):
    return DDouble(a) - b


def dd_mul(a, b):
    return DDouble(a) * b


def dd_div(a, b):
    return DDouble(a) / b


def dd_sqrt(a):
    a = DDouble(a)
    return DDouble._raw(*_sqrt2(a.hi, a.lo))


# ---------------------------------------------------------------------------
# complex arithmetic

class DDComplex:
    """Complex number with double-double real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0.0, im=0.0):
        if isinstance(re, DDComplex):
            re, im = re.re, re.im
        elif isinstance(re, complex):
            re, im = re.real, re.imag
        object.__setattr__(self, "re", DDouble(re))
        object.__setattr__(self, "im", DDouble(im))

    def __setattr__(self, name, value):
        raise AttributeError("DDComplex is immutable")

    @staticmethod
    def _coerce(other):
        if isinstance(other, DDComplex):
            return other
        if isinstance(other, (int, float, complex, DDouble)):
            return DDComplex(other) if not isinstance(other, complex) \
                else DDComplex(other.real, other.imag)
        return None

    def __add__(self, other):
        o = DDComplex._coerce(other)
        if o is None:
            return NotImplemented
        return cadd(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = DDComplex._coerce(other)
        if o is None:
            return NotImplemented
        return csub(self, o)

    def __rsub__(self, other):
        o = DDComplex._coerce(other)
        if o is None:
            return NotImplemented
        return csub(o, self)

    def __mul__(self, other):
        o = DDComplex._coerce(other)
        if o is None:
            return NotImplemented
        return cmul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = DDComplex._coerce(other)
        if o is None:
            return NotImplemented
        return cdiv(self, o)

    def __rtruediv__(self, other):
        o = DDComplex._coerce(other)
        if o is None:
            return NotImplemented
        return cdiv(o, self)

    def __neg__(self):
        return _craw(-self.re, -self.im)

    def __eq__(self, other):
        o = DDComplex._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"DDComplex({self.re!r}, {self.im!r})"

    def __str__(self):
        return dd_to_string(self.re, 33) + dd_to_string(self.im, 33) + "i"


def _craw(re, im):
    c = object.__new__(DDComplex)
    object.__setattr__(c, "re", re)
    object.__setattr__(c, "im", im)
    return c


def cadd(a, b):
    a, b = DDComplex(a), DDComplex._coerce(b)
    return _craw(a.re + b.re, a.im + b.im)


def csub(a, b):
    a, b = DDComplex(a), DDComplex._coerce(b)
    return _craw(a.re - b.re, a.im - b.im)


def cmul(a, b):
    a, b = DDComplex(a), DDComplex._coerce(b)
    return _craw(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)


def cdiv(a, b):
    # Smith's scaled scheme, robust to component magnitude disparity
    a, b = DDComplex(a), DDComplex._coerce(b)
    c, d = b.re, b.im
    if not c and not d:
        return _craw(DDouble._raw(*_div2(a.re.hi, a.re.lo, 0.0, 0.0)),
                     DDouble._raw(*_div2(a.im.hi, a.im.lo, 0.0, 0.0)))
    if abs(c.hi) >= abs(d.hi):
        r = d / c
        den = c + d * r
        return _craw((a.re + a.im * r) / den, (a.im - a.re * r) / den)
    r = c / d
    den = c * r + d
    return _craw((a.re * r + a.im) / den, (a.im * r - a.re) / den)


def cabs(a):
    a = DDComplex(a)
    x, y = abs(a.re), abs(a.im)
    if x < y:
        x, y = y, x
    if not y:
        return x
    r = y / x
    return x * dd_sqrt(r * r + 1.0)


def conj(a):
    a = DDComplex(a)
    return _craw(a.re, -a.im)


# ---------------------------------------------------------------------------
# decimal conversion (exact, via big-integer arithmetic)

_DECIMAL_RE = _re.compile(
    r"^\s*([+-]?)(?:(\d+)(?:\.(\d*))?|\.(\d+))(?:[eE]([+-]?\d+))?\s*$")


def _parse(s):
    m = _DECIMAL_RE.match(s)
    if not m:
        raise ValueError(f"not a decimal number: {s!r}")
    sign, ip, fp1, fp2, ex = m.groups()
    frac = fp1 if fp1 is not None else fp2
    frac = frac or ""
    digits = (ip or "") + frac
    v = Fraction(int(digits), 1) * Fraction(10) ** (int(ex or 0) - len(frac))
    if sign == "-":
        v = -v
    return _round_fraction(v)


def _round_fraction(v):
    """Round an exact rational to the nearest representable (hi, lo) pair."""
    try:
        hi = float(v)
    except OverflowError:
        return (_INF if v > 0 else -_INF), 0.0
    if math.isinf(hi):
        return hi, 0.0
    r = v - Fraction(hi)
    lo = float(r)  # correctly rounded; may be subnormal
    return _norm(hi, lo)


def dd_from_string(s):
    """Parse a decimal string to DDouble, correctly rounded.

    The value is read exactly with integer arithmetic and rounded to the
    nearest representable pair, so the error is at most half a unit in
    the last place of the lo word (never more than half a unit in the
    106-bit significand).
    """
    return DDouble._raw(*_parse(s))


def dd_to_string(a, digits=33):
    """Format a DDouble with `digits` significant digits, correctly rounded.

    Style: explicit sign, one digit before the point, two-or-more digit
    exponent, e.g. +4.93038065763131995214781514484568e-32.  With
    digits=34 the output parses back to the identical value for any pair
    whose words span at most ~107 significand bits; a pair with a large
    hi/lo gap (say (1.0, 2**-900)) carries more information than any
    34-digit decimal can hold and only round-trips approximately.
    """
    if not 1 <= digits <= 34:
        raise ValueError("digits must be in 1..34")
    a = DDouble(a)
    if not math.isfinite(a.hi):
        if math.isnan(a.hi):
            return "nan"
        return "+inf" if a.hi > 0 else "-inf"
    v = Fraction(a.hi) + Fraction(a.lo)
    if v == 0:
        if digits == 1:
            return "+0e+00"
        return "+0." + "0" * (digits - 1) + "e+00"
    sign = "+" if v > 0 else "-"
    v = abs(v)
    e10 = len(str(v.numerator)) - len(str(v.denominator))
    while Fraction(10) ** e10 > v:
        e10 -= 1
    while Fraction(10) ** (e10 + 1) <= v:
        e10 += 1
    scaled = v / Fraction(10) ** (e10 - digits + 1)
    n, r = divmod(scaled.numerator, scaled.denominator)
    q = scaled.denominator
    if 2 * r > q or (2 * r == q and n % 2 == 1):
        n += 1
    if n == 10 ** digits:
        n //= 10
        e10 += 1
    ds = str(n)
    mant = ds[0] if digits == 1 else ds[0] + "." + ds[1:]
    return f"{sign}{mant}e{e10:+03d}"


def format_f64(x, digits=16):
    """Binary64 counterpart of dd_to_string's style."""
    if not math.isfinite(x):
        if math.isnan(x):
            return "nan"
        return "+inf" if x > 0 else "-inf"
    if x == 0.0:
        x = 0.0  # normalize -0
    return "%+.*e" % (digits - 1, x)


# ---------------------------------------------------------------------------
# machine parameters

@dataclass(frozen=True)
class MachineParams:
    """LAPACK-style machine constant set for one working precision.

    The original table for double-double was produced with the QD
    library's runtime probing and digit extraction, so the published
    decimals of the extreme rows (safe minimum, underflow, overflow) sit
    between representable pairs; `table_rows` therefore reports the
    published canonical decimals while the value fields carry the
    nearest representable realizations (overflow saturates to the
    largest normalized pair so that dd_sqrt of it stays finite).
    """

    name: str
    eps: object
    safe_min: object
    base: object
    precision: object
    mantissa_digits: int
    rounding: object
    min_exponent: int
    underflow: object
    max_exponent: int
    overflow: object
    recip_safe_min: object
    _rows: tuple = ()

    def table_rows(self):
        """(key, description, canonical decimal string) for each constant."""
        return list(self._rows)

    def table_text(self):
        lines = []
        for key, desc, s in self._rows:
            label = f"Rlamch {key}: {desc}"
            lines.append(f"{label:<39}{s}")
        return "\n".join(lines)


_DD_TABLE = (
    ("E", "Epsilon", "+4.93038065763131995214781514484568e-32"),
    ("S", "Safe minimum", "+2.00416836000897277799610805134985e-292"),
    ("B", "Base", "+2.00000000000000000000000000000000e+00"),
    ("P", "Precision", "+9.86076131526263990429563028969136e-32"),
    ("N", "Number of digits in mantissa", "+1.06000000000000000000000000000000e+02"),
    ("R", "Rounding mode", "+1.00000000000000000000000000000000e+00"),
    ("M", "Minimum exponent:", "-9.68000000000000000000000000000001e+02"),
    ("U", "Underflow threshold", "+2.00416836000897277799610805134985e-292"),
    ("L", "Largest exponent", "+1.02400000000000000000000000000000e+03"),
    ("O", "Overflow threshold", "+1.79769313486231580793728971405328e+308"),
    ("-", "Reciprocal of safe minimum", "+4.98960077383679952914093178259285e+291"),
)

# largest normalized pair: (DBL_MAX, largest double below 2**970)
_DD_MAX = DDouble._raw(float.fromhex("0x1.fffffffffffffp+1023"),
                       float.fromhex("0x1.fffffffffffffp+969"))

_F64_VALUES = {
    "E": 2.0 ** -53,
    "S": 2.0 ** -1022,
    "B": 2.0,
    "P": 2.0 ** -52,
    "N": 53.0,
    "R": 1.0,
    "M": -1021.0,
    "U": 2.0 ** -1022,
    "L": 1024.0,
    "O": float.fromhex("0x1.fffffffffffffp+1023"),
    "-": 2.0 ** 1022,
}

_F64_DESCRIPTIONS = {k: d for k, d, _ in _DD_TABLE}


def _build_dd_params():
    vals = {}
    for key, _, s in _DD_TABLE:
        if key == "O":
            vals[key] = _DD_MAX
        else:
            vals[key] = dd_from_string(s)
    return MachineParams(
        name="double-double",
        eps=vals["E"],
        safe_min=vals["S"],
        base=vals["B"],
        precision=vals["P"],
        mantissa_digits=106,
        rounding=vals["R"],
        min_exponent=-968,
        underflow=vals["U"],
        max_exponent=1024,
        overflow=vals["O"],
        recip_safe_min=vals["-"],
        _rows=_DD_TABLE,
    )


def _build_f64_params():
    rows = tuple(
        (k, _F64_DESCRIPTIONS[k], format_f64(_F64_VALUES[k], 17))
        for k, _, _ in _DD_TABLE)
    v = _F64_VALUES
    return MachineParams(
        name="binary64",
        eps=v["E"],
        safe_min=v["S"],
        base=v["B"],
        precision=v["P"],
        mantissa_digits=53,
        rounding=v["R"],
        min_exponent=-1021,
        underflow=v["U"],
        max_exponent=1024,
        overflow=v["O"],
        recip_safe_min=v["-"],
        _rows=rows,
    )


_PARAMS = {}


def machine_params(precision):
    """Return the MachineParams for 'binary64'/'f64' or 'double-double'/'dd'."""
    key = {"binary64": "f64", "f64": "f64",
           "double-double": "dd", "dd": "dd"}.get(precision)
    if key is None:
        raise ValueError(f"unknown precision {precision!r}")
    if key not in _PARAMS:
        _PARAMS[key] = _build_f64_params() if key == "f64" else _build_dd_params()
    return _PARAMS[key]
