"""Exact fixed-point arithmetic: constructors, distance, certified compares.

Oracle for irrational pins: mpmath at 60 digits, computed independently of
the mantissa pipeline and frozen below.
"""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrgap.errors import PrecisionExhausted, ValidationError
from bohrgap.realfield import (
    DEFAULT_SCALE,
    FixedReal,
    RealSpec,
    ceil_pow_sqrt,
    cmp_dist_root,
    cmp_fixed,
    cmp_frac_pow_sqrt,
    cmp_int_pow,
    cmp_int_pow_sqrt,
    decide_le,
    dist_nearest_int,
    fr_from_decimal,
    fr_from_fraction,
    fr_from_int,
    fr_root_rational,
    fr_sqrt_int,
    norm_form,
    sqrt_fraction,
)

Q = Fraction

# ||12*sqrt(2)|| to 30 places, mpmath oracle (see oracle test below)
NORM_12_SQRT2 = "0.029437251522859414379735309483"


def test_from_decimal_half_exact():
    x = fr_from_decimal("0.5", 128)
    assert x.man == 1 << 127
    assert x.err == 0


def test_from_decimal_one_at_64():
    x = fr_from_decimal("1", 64)
    assert x.man == 1 << 64
    assert x.err == 0


def test_from_decimal_tenth_rounds_to_nearest():
    x = fr_from_decimal("0.1", 128)
    assert x.err <= Q(1, 2)
    assert abs(Q(x.man, 1 << 128) - Q(1, 10)) <= Q(1, 1 << 129)
    assert x.exact() == Q(1, 10)


def test_scale_guard():
    with pytest.raises(ValidationError):
        FixedReal(1, 32)


def test_sqrt2_square_within_three_ulp():
    x = fr_sqrt_int(2, 128)
    # |v^2 - 2| <= 3*2^-128  <=>  |man^2 - 2^257| <= 3*2^128
    assert abs(x.man * x.man - (2 << 256)) <= 3 << 128
    assert x.err == 1


def test_sqrt_perfect_square_exact():
    x = fr_sqrt_int(9, 128)
    assert x.exact() == 3
    assert x.err == 0


def test_root_rational_cube():
    x = fr_root_rational(Q(8), 3, 128)
    assert x.exact() == 2
    y = fr_root_rational(Q(2), 3, 128)
    lo, hi = y.bounds()
    assert lo**3 <= 2 <= (hi + Q(2, 1 << 128)) ** 3


def test_norm_form_12_sqrt2_oracle():
    # oracle: 17 - 12*sqrt(2) at 60 digits
    with mpmath.workdps(60):
        oracle = mpmath.mpf(17) - 12 * mpmath.sqrt(2)
        assert mpmath.nstr(oracle, 28, strip_zeros=False).startswith(NORM_12_SQRT2[:29])
    d = norm_form(12, fr_sqrt_int(2, 128), fr_from_int(0, 128))
    pin = Q(NORM_12_SQRT2)
    assert abs(Q(d.man, 1 << 128) - pin) < Q(1, 10**29)
    assert d.err <= 12
    assert f"{d.value():.10f}" == "0.0294372515"


def test_norm_form_error_budget():
    a = fr_sqrt_int(3, 128)
    g = fr_from_decimal("0.3", 128)
    n = 12345
    d = norm_form(n, a, g)
    assert d.err <= (abs(n) + 1) * (a.err + g.err + 1)


def test_dist_ties_at_half():
    for q in (Q(1, 2), Q(3, 2), Q(-1, 2), Q(-7, 2)):
        d = dist_nearest_int(fr_from_fraction(q, 128))
        assert d.exact() == Q(1, 2)


def test_dist_zero_on_integers():
    for n in (-3, 0, 5):
        d = dist_nearest_int(fr_from_int(n, 128))
        assert d.exact() == 0


@given(st.integers(-(10**6), 10**6), st.integers(1, 10**6))
@settings(max_examples=200, deadline=None)
def test_dist_matches_fraction_oracle(num, den):
    q = Q(num, den)
    d = dist_nearest_int(fr_from_fraction(q, 128))
    frac = q - math.floor(q)
    oracle = min(frac, 1 - frac)
    assert d.exact() == oracle


@given(st.integers(-(10**6), 10**6), st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_dist_symmetry(num, den):
    q = Q(num, den)
    a = dist_nearest_int(fr_from_fraction(q, 128))
    b = dist_nearest_int(fr_from_fraction(-q, 128))
    assert a.exact() == b.exact()


def test_norm_form_periodicity_dyadic():
    # alpha = 5/16, gamma = 3/8: exactly representable, exact period 16
    a = fr_from_decimal("0.3125", 128)
    g = fr_from_decimal("0.375", 128)
    vals = [norm_form(n, a, g).man for n in range(64)]
    for n in range(48):
        assert vals[n] == vals[n + 16]


def test_error_soundness_under_refinement():
    # recomputing at scale+64 stays inside the coarse interval
    a = fr_sqrt_int(5, 128)
    b = a.refined(192)
    lo1, hi1 = a.bounds()
    lo2, hi2 = b.bounds()
    assert lo1 <= lo2 and hi2 <= hi1 + Q(1, 1 << 150)


def test_cmp_fixed_decisive_and_equal():
    x = fr_sqrt_int(2, 128)
    y = fr_from_decimal("1.4142135", 128)
    assert cmp_fixed(x, y) == 1
    z = fr_from_decimal("0.25", 128)
    w = fr_from_fraction(Q(1, 4), 128)
    assert cmp_fixed(z, w) == 0


def test_decide_le_escalates_through_source():
    # sqrt(2) vs a rational within 2^-200 of it: needs refinement past 128 bits
    x = fr_sqrt_int(2, 128)
    lo, _ = x.bounds()
    near = lo + Q(1, 1 << 200)
    assert decide_le(x, near + Q(1, 1 << 10)) is True


def test_precision_exhausted_without_source():
    x = FixedReal(1 << 127, 128, Q(2), None)
    y = Q(1, 2)
    with pytest.raises(PrecisionExhausted):
        decide_le(x, y)


def test_mul_int_and_add_err_propagation():
    a = fr_sqrt_int(2, 128)
    b = a.mul_int(10)
    assert b.err == 10 * a.err
    c = b + b
    assert c.err == 2 * b.err


def test_mul_fixedreal_interval_sound():
    a = fr_sqrt_int(2, 128)
    p = a * a
    lo, hi = p.bounds()
    assert lo <= 2 <= hi


def test_realspec_parse_roundtrip():
    for text in ("rat:1/3", "sqrt:2", "dec:0.35"):
        spec = RealSpec.parse(text)
        assert spec.text() == text
    with pytest.raises(ValidationError):
        RealSpec.parse("0.35")
    with pytest.raises(ValidationError):
        RealSpec.parse("cos:1")


def test_sqrt_fraction():
    assert sqrt_fraction(Q(1, 4)) == Q(1, 2)
    assert sqrt_fraction(Q(9)) == 3
    assert sqrt_fraction(Q(1, 20)) is None


def test_cmp_int_pow_exact():
    # 31 vs 10^(3/2): 31^2 = 961 < 1000
    assert cmp_int_pow(31, 10, Q(3, 2)) == -1
    assert cmp_int_pow(32, 10, Q(3, 2)) == 1
    assert cmp_int_pow(8, 2, Q(3)) == 0


def test_cmp_int_pow_sqrt_paths():
    # rational sqrt: eps = 1/4 -> exponent 1/2; 10 vs 100^(1/2) = 10
    assert cmp_int_pow_sqrt(10, 100, Q(1, 4)) == 0
    # irrational: 2 vs 10^sqrt(1/20) ~ 10^0.2236 ~ 1.674
    assert cmp_int_pow_sqrt(2, 10, Q(1, 20)) == 1
    assert cmp_int_pow_sqrt(1, 10, Q(1, 20)) == -1


def test_ceil_pow_sqrt():
    # 10^6 ^ sqrt(0.05): 10^(6*0.22360679...) = 10^1.3416 = 21.96...
    m = ceil_pow_sqrt(10**6, Q(1, 20))
    assert m == 22
    assert cmp_int_pow_sqrt(m, 10**6, Q(1, 20)) >= 0
    assert cmp_int_pow_sqrt(m - 1, 10**6, Q(1, 20)) < 0


def test_cmp_dist_root():
    # d/2^128 vs 500^(-1/2) = 0.044721...
    scale = 128
    t = int(Q(1, 1) * (1 << scale) * 44721 // 10**6)
    assert cmp_dist_root(t, Q(0), scale, 500, 2) == -1
    t2 = int((1 << scale) * 44722 // 10**6)
    assert cmp_dist_root(t2, Q(0), scale, 500, 2) == 1
    # exact hit: d = 2^128/2, q = 4, r = 2 -> (1/2) == 4^(-1/2)
    assert cmp_dist_root(1 << 127, Q(0), 128, 4, 2) == 0
    # straddle: wide error
    assert cmp_dist_root(1 << 127, Q(1 << 100), 128, 4, 2) is None


def test_cmp_frac_pow_sqrt_exact_path():
    # eps = 1/4: threshold n^(-1/2); 1/6 vs 36^(-1/2) = 1/6 exactly
    assert cmp_frac_pow_sqrt(Q(1, 6), Q(1, 6), 36, Q(1, 4)) == 0
    assert cmp_frac_pow_sqrt(Q(1, 6), Q(1, 6), 35, Q(1, 4)) == -1
    assert cmp_frac_pow_sqrt(Q(1, 6), Q(1, 6), 37, Q(1, 4)) == 1


def test_cmp_frac_pow_sqrt_irrational_path():
    # n = 100, eps = 1/20: threshold 100^(-0.2236..) = 0.35725...
    assert cmp_frac_pow_sqrt(Q(36, 100), Q(36, 100), 100, Q(1, 20)) == 1
    assert cmp_frac_pow_sqrt(Q(35, 100), Q(35, 100), 100, Q(1, 20)) == -1


def test_decimal_rendering():
    x = fr_from_decimal("0.1", 128)
    assert x.decimal(12) == "0.100000000000"
    y = fr_from_fraction(Q(-7, 2), 128)
    assert y.decimal(3) == "-3.500"
