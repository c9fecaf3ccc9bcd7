"""Tests for scalar double-double arithmetic, string conversion, machine params."""

import math
import random
from fractions import Fraction

import mpmath
import pytest

from mpkit.ddarith import (
    DDComplex,
    DDouble,
    TWO_PROD_SCHEME,
    cabs,
    cadd,
    cdiv,
    cmul,
    conj,
    csub,
    dd_add,
    dd_div,
    dd_from_string,
    dd_mul,
    dd_sqrt,
    dd_sub,
    dd_to_string,
    format_f64,
    machine_params,
    quick_two_sum,
    two_prod,
    two_sum,
)

EPS_DD = 4.93038065763131995214781514484568e-32  # 2**-104
REL_BOUND = 2.0 ** -99
CPX_BOUND = 2.0 ** -97


def to_fraction(d):
    d = DDouble(d)
    return Fraction(d.hi) + Fraction(d.lo)


def to_mp(d):
    d = DDouble(d)
    return mpmath.mpf(d.hi) + mpmath.mpf(d.lo)


def rel_err_mp(got, want):
    if want == 0:
        return abs(to_mp(got))
    return abs((to_mp(got) - want) / want)


def random_dd(rng, scale=1.0):
    hi = rng.uniform(-1.0, 1.0) * scale
    lo = rng.uniform(-1.0, 1.0) * scale * 2.0 ** -53
    return DDouble(hi, lo)


@pytest.fixture(autouse=True, scope="module")
def high_precision():
    with mpmath.workprec(240):
        yield


# ---------------------------------------------------------------------------
# error-free transforms

def test_two_sum_exact():
    rng = random.Random(101)
    cases = [(0.1, 0.2), (1e16, 1.0), (1.0, -1.0 + 2.0 ** -53),
             (2.0 ** 520, 2.0 ** -520), (-0.0, 0.0)]
    cases += [(rng.uniform(-1, 1) * 10 ** rng.randint(-30, 30),
               rng.uniform(-1, 1) * 10 ** rng.randint(-30, 30))
              for _ in range(3000)]
    for a, b in cases:
        s, e = two_sum(a, b)
        assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)
        assert s == a + b


def test_quick_two_sum_exact_when_ordered():
    rng = random.Random(102)
    for _ in range(3000):
        a = rng.uniform(-1, 1) * 10 ** rng.randint(-30, 30)
        b = rng.uniform(-1, 1) * abs(a) * 2.0 ** -rng.randint(0, 60)
        s, e = quick_two_sum(a, b)
        assert Fraction(s) + Fraction(e) == Fraction(a) + Fraction(b)


def test_two_prod_exact():
    rng = random.Random(103)
    cases = [(0.1, 0.3), (1.0 + 2.0 ** -52, 1.0 - 2.0 ** -52),
             (3.0, 1.0 / 3.0), (2.0 ** 500, 2.0 ** -510)]
    cases += [(rng.uniform(-1, 1) * 10 ** rng.randint(-100, 100),
               rng.uniform(-1, 1) * 10 ** rng.randint(-100, 100))
              for _ in range(3000)]
    for a, b in cases:
        p, e = two_prod(a, b)
        assert Fraction(p) + Fraction(e) == Fraction(a) * Fraction(b)
        assert p == a * b


def test_two_prod_scheme_reported():
    assert TWO_PROD_SCHEME == "dekker-split"


# ---------------------------------------------------------------------------
# double-double ring operations vs 240-bit oracle

def test_dd_add_sub_accuracy():
    rng = random.Random(104)
    for _ in range(1500):
        a = random_dd(rng, 10.0 ** rng.randint(-20, 20))
        b = random_dd(rng, 10.0 ** rng.randint(-20, 20))
        want = to_mp(a) + to_mp(b)
        assert rel_err_mp(dd_add(a, b), want) <= REL_BOUND
        want = to_mp(a) - to_mp(b)
        assert rel_err_mp(dd_sub(a, b), want) <= REL_BOUND


def test_dd_add_cancellation():
    a = DDouble(1.0, 2.0 ** -60)
    b = -DDouble(1.0, 2.0 ** -61)
    r = dd_add(a, b)
    assert to_fraction(r) == Fraction(1, 2 ** 61)


def test_dd_mul_div_accuracy():
    rng = random.Random(105)
    for _ in range(1500):
        a = random_dd(rng, 10.0 ** rng.randint(-20, 20))
        b = random_dd(rng, 10.0 ** rng.randint(-20, 20))
        want = to_mp(a) * to_mp(b)
        assert rel_err_mp(dd_mul(a, b), want) <= REL_BOUND
        if b:
            want = to_mp(a) / to_mp(b)
            assert rel_err_mp(dd_div(a, b), want) <= REL_BOUND


def test_dd_div_simple_values():
    r = dd_div(1, 3)
    assert rel_err_mp(r, mpmath.mpf(1) / 3) <= REL_BOUND
    assert dd_to_string(r, 30) == "+3.33333333333333333333333333333e-01"


def test_dd_div_by_zero_nonfinite():
    assert dd_div(1.0, DDouble(0.0)).hi == math.inf
    assert dd_div(-2.5, DDouble(0.0)).hi == -math.inf
    nan = dd_div(DDouble(0.0), DDouble(0.0))
    assert math.isnan(nan.hi) and nan.lo == 0.0


def test_nonfinite_flow_through():
    inf = DDouble(math.inf)
    assert (inf + 1.0).hi == math.inf and (inf + 1.0).lo == 0.0
    assert (inf * -2.0).hi == -math.inf
    assert math.isnan((inf - inf).hi)
    assert (DDouble(1.0) / inf).hi == 0.0
    assert math.isnan((inf / inf).hi)


def test_dd_sqrt_residual_bound():
    rng = random.Random(106)
    vals = [DDouble(2), DDouble(0.5), dd_from_string("1e-200"),
            dd_from_string("12345.6789")]
    vals += [abs(random_dd(rng, 10.0 ** rng.randint(-30, 30)))
             for _ in range(800)]
    for a in vals:
        if not a:
            continue
        r = dd_sqrt(a)
        resid = abs(to_mp(dd_sub(dd_mul(r, r), a)))
        assert resid <= 4 * EPS_DD * to_mp(a)


def test_dd_sqrt_edge_cases():
    z = dd_sqrt(DDouble(0.0))
    assert z.hi == 0.0 and z.lo == 0.0
    with pytest.raises(ValueError):
        dd_sqrt(DDouble(-1.0))
    big = dd_sqrt(machine_params("dd").overflow)
    assert math.isfinite(big.hi)
    assert rel_err_mp(big, mpmath.sqrt(to_mp(machine_params("dd").overflow))) \
        <= REL_BOUND


# ---------------------------------------------------------------------------
# scalar value type semantics

def test_ddouble_construction():
    assert DDouble(1.5).hi == 1.5 and DDouble(1.5).lo == 0.0
    big = 2 ** 80 + 1
    assert to_fraction(DDouble(big)) == big
    d = DDouble(1.0, 1e-20)
    assert d.hi == 1.0 and d.lo == 1e-20
    # unnormalized pair gets renormalized
    d = DDouble(1.0, 1.0)
    assert d.hi == 2.0 and d.lo == 0.0
    assert DDouble(DDouble(3.25)).hi == 3.25
    with pytest.raises(TypeError):
        DDouble([1.0])


def test_ddouble_immutable():
    d = DDouble(1.0)
    with pytest.raises(AttributeError):
        d.hi = 2.0


def test_ddouble_operators_and_coercion():
    a = DDouble("0.1")
    assert float(a + 1) == pytest.approx(1.1)
    assert float(2 - a) == pytest.approx(1.9)
    assert float(3 * a) == pytest.approx(0.3)
    assert float(1 / a) == pytest.approx(10.0)
    assert to_fraction(-a) == -to_fraction(a)
    assert abs(DDouble(-2.0)) == DDouble(2.0)


def test_ddouble_comparisons():
    a, b = DDouble(1.0, 1e-20), DDouble(1.0, 2e-20)
    assert a < b and b > a and a != b and a <= b and b >= a
    assert DDouble(1.0) == 1.0 and DDouble(1.0) == 1
    assert DDouble(0.5) < 1 and DDouble(1.5) > 1.0
    assert hash(DDouble(2.0)) == hash(DDouble(2.0, 0.0))
    assert bool(DDouble(0.0)) is False
    assert bool(DDouble(0.0, 0.0) + 0.0) is False


# ---------------------------------------------------------------------------
# complex arithmetic

def cpx_mp(z):
    z = DDComplex(z)
    return mpmath.mpc(to_mp(z.re), to_mp(z.im))


def cpx_rel_err(got, want):
    if want == 0:
        return abs(cpx_mp(got))
    return abs((cpx_mp(got) - want) / want)


def random_cdd(rng, scale=1.0):
    return DDComplex(random_dd(rng, scale), random_dd(rng, scale))


def test_complex_ops_accuracy():
    rng = random.Random(107)
    for _ in range(800):
        a = random_cdd(rng, 10.0 ** rng.randint(-15, 15))
        b = random_cdd(rng, 10.0 ** rng.randint(-15, 15))
        ma, mb = cpx_mp(a), cpx_mp(b)
        assert cpx_rel_err(cadd(a, b), ma + mb) <= CPX_BOUND
        assert cpx_rel_err(csub(a, b), ma - mb) <= CPX_BOUND
        assert cpx_rel_err(cmul(a, b), ma * mb) <= CPX_BOUND
        if b != DDComplex(0):
            assert cpx_rel_err(cdiv(a, b), ma / mb) <= CPX_BOUND


def test_complex_div_component_disparity():
    # naive (ac+bd)/(c^2+d^2) would overflow here; the scaled form must not
    a = DDComplex(1e200, 1e-200)
    b = DDComplex(1e200, 1e200)
    got = cdiv(a, b)
    want = cpx_mp(a) / cpx_mp(b)
    assert cpx_rel_err(got, want) <= CPX_BOUND


def test_cabs_and_conj():
    rng = random.Random(108)
    for _ in range(400):
        z = random_cdd(rng, 10.0 ** rng.randint(-15, 15))
        want = abs(cpx_mp(z))
        got = cabs(z)
        assert rel_err_mp(got, want) <= CPX_BOUND
        c = conj(z)
        assert c.re == z.re and to_fraction(c.im) == -to_fraction(z.im)
    assert cabs(DDComplex(3.0, 4.0)) == DDouble(5.0)
    assert float(cabs(DDComplex(0.0, 0.0))) == 0.0


def test_complex_operators():
    a = DDComplex(1, 2)
    b = DDComplex(3, -1)
    assert complex(a + b) == complex(4, 1)
    assert complex(a * b) == complex((1 + 2j) * (3 - 1j))
    assert complex(a - 1) == complex(0, 2)
    assert a == DDComplex(1.0, 2.0)


# ---------------------------------------------------------------------------
# decimal string conversion

def test_parse_basic_forms():
    assert float(dd_from_string("1.5")) == 1.5
    assert float(dd_from_string("-2")) == -2.0
    assert float(dd_from_string("+.5")) == 0.5
    assert float(dd_from_string("5.")) == 5.0
    assert float(dd_from_string("1e3")) == 1000.0
    assert float(dd_from_string("2.5E-2")) == 0.025
    assert float(dd_from_string(" 7 ")) == 7.0


def test_parse_correctly_rounded():
    rng = random.Random(109)
    for _ in range(300):
        digits = "".join(rng.choice("0123456789") for _ in range(40))
        e = rng.randint(-50, 50)
        s = f"{rng.choice(['', '-'])}{digits[0]}.{digits[1:]}e{e}"
        want = Fraction(int(digits), 10 ** 39) * Fraction(10) ** e
        if s.startswith("-"):
            want = -want
        got = to_fraction(dd_from_string(s))
        # error at most half an ulp of the lo word
        d = dd_from_string(s)
        ulp_lo = Fraction(math.ulp(d.lo) if d.lo else math.ulp(d.hi) * 2 ** -53)
        assert abs(got - want) <= ulp_lo / 2


def test_parse_malformed():
    for bad in ["", "abc", "1.2.3", "1e", "--3", "1d0", "0x10", "nan", "inf"]:
        with pytest.raises(ValueError):
            dd_from_string(bad)


def test_to_string_digit_bounds():
    with pytest.raises(ValueError):
        dd_to_string(DDouble(1.0), 0)
    with pytest.raises(ValueError):
        dd_to_string(DDouble(1.0), 35)
    assert dd_to_string(DDouble(1.0), 1) == "+1e+00"


def test_to_string_known_values():
    assert dd_to_string(DDouble(0.0), 33) == \
        "+0.00000000000000000000000000000000e+00"
    assert dd_to_string(dd_from_string("1.2"), 33) == \
        "+1.20000000000000000000000000000000e+00"
    assert dd_to_string(machine_params("dd").eps, 33) == \
        "+4.93038065763131995214781514484568e-32"
    assert dd_to_string(DDouble(-0.0), 33).startswith("+0.")
    assert dd_to_string(DDouble(math.inf)) == "+inf"
    assert dd_to_string(DDouble(-math.inf)) == "-inf"
    assert dd_to_string(DDouble(math.nan)) == "nan"


def test_to_string_rounding_carry():
    assert dd_to_string(DDouble(0.999999), 3) == "+1.00e+00"
    assert dd_to_string(DDouble(9.99), 2) == "+1.0e+01"
    assert dd_to_string(DDouble(0.125), 2) == "+1.2e-01"  # ties to even
    assert dd_to_string(DDouble(0.375), 2) == "+3.8e-01"


def test_round_trip_34_digits():
    # exact round-trip holds when the two words span <= 107 significand
    # bits; a pair like (1.0, 2**-900) carries more information than any
    # 34-digit decimal and is out of scope
    rng = random.Random(110)
    vals = [dd_div(1, 3), dd_sqrt(2), dd_from_string("6.02214076e23")]
    for _ in range(300):
        hi = rng.uniform(-1.0, 1.0) * 10.0 ** rng.randint(-30, 30)
        lo = math.ulp(hi) * rng.uniform(0.25, 0.5) * rng.choice([-1.0, 1.0])
        vals.append(DDouble(hi, lo))
    for v in vals:
        s = dd_to_string(v, 34)
        w = dd_from_string(s)
        assert (w.hi, w.lo) == (v.hi, v.lo), s


def test_format_f64():
    assert format_f64(2.0 ** -53, 17) == "+1.1102230246251565e-16"
    assert format_f64(-1021.0, 17) == "-1.0210000000000000e+03"
    assert format_f64(0.0, 17) == "+0.0000000000000000e+00"
    assert format_f64(math.inf) == "+inf"


# ---------------------------------------------------------------------------
# machine parameters

DD_TABLE_PUBLISHED = [
    ("E", "+4.93038065763131995214781514484568e-32"),
    ("S", "+2.00416836000897277799610805134985e-292"),
    ("B", "+2.00000000000000000000000000000000e+00"),
    ("P", "+9.86076131526263990429563028969136e-32"),
    ("N", "+1.06000000000000000000000000000000e+02"),
    ("R", "+1.00000000000000000000000000000000e+00"),
    ("M", "-9.68000000000000000000000000000001e+02"),
    ("U", "+2.00416836000897277799610805134985e-292"),
    ("L", "+1.02400000000000000000000000000000e+03"),
    ("O", "+1.79769313486231580793728971405328e+308"),
    ("-", "+4.98960077383679952914093178259285e+291"),
]

F64_TABLE_PUBLISHED = [
    ("E", "+1.1102230246251565e-16"),
    ("S", "+2.2250738585072014e-308"),
    ("B", "+2.0000000000000000e+00"),
    ("P", "+2.2204460492503131e-16"),
    ("N", "+5.3000000000000000e+01"),
    ("R", "+1.0000000000000000e+00"),
    ("M", "-1.0210000000000000e+03"),
    ("U", "+2.2250738585072014e-308"),
    ("L", "+1.0240000000000000e+03"),
    ("O", "+1.7976931348623157e+308"),
    ("-", "+4.4942328371557898e+307"),
]


def test_dd_table_digit_for_digit():
    rows = machine_params("double-double").table_rows()
    assert [(k, s) for k, _, s in rows] == DD_TABLE_PUBLISHED


def test_f64_table_digit_for_digit():
    rows = machine_params("binary64").table_rows()
    assert [(k, s) for k, _, s in rows] == F64_TABLE_PUBLISHED


def test_dd_constants_realize_published_digits():
    # rows whose decimal sits on a representable pair must reprint exactly;
    # S/U sit below the subnormal spacing of the lo word and O lies beyond
    # the largest pair, so their realizations are nearest-representable
    p = machine_params("dd")
    for key, s in DD_TABLE_PUBLISHED:
        if key in ("S", "U", "O"):
            continue
        assert dd_to_string(dd_from_string(s), 33) == s
    # S/U realization: within one subnormal unit of the published decimal
    for v in (p.safe_min, p.underflow):
        err = abs(to_fraction(v) - Fraction("2.00416836000897277799610805134985e-292"))
        assert err <= Fraction(2) ** -1074
    # overflow realization: the largest normalized pair, just under the
    # published decimal, and still safe under squaring's error terms
    o = p.overflow
    assert o.hi == float.fromhex("0x1.fffffffffffffp+1023")
    assert o.lo == float.fromhex("0x1.fffffffffffffp+969")
    gap = Fraction("1.79769313486231580793728971405328e+308") - to_fraction(o)
    assert 0 < gap / to_fraction(o) < Fraction(2, 10 ** 31)


def test_f64_param_values():
    p = machine_params("f64")
    assert p.eps == 2.0 ** -53
    assert p.precision == 2.0 ** -52
    assert p.safe_min == p.underflow == 2.0 ** -1022
    assert p.overflow == float.fromhex("0x1.fffffffffffffp+1023")
    assert p.recip_safe_min == 2.0 ** 1022
    assert p.mantissa_digits == 53
    assert p.base == 2.0 and p.rounding == 1.0
    assert p.min_exponent == -1021 and p.max_exponent == 1024


def test_dd_param_values():
    p = machine_params("dd")
    assert p.mantissa_digits == 106
    assert float(p.eps) == pytest.approx(2.0 ** -104)
    assert float(p.base) == 2.0 and float(p.rounding) == 1.0
    assert float(p.recip_safe_min) * float(p.safe_min) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        machine_params("binary32")


def test_machine_params_aliases():
    assert machine_params("dd") is machine_params("double-double")
    assert machine_params("f64") is machine_params("binary64")
