"""Exact fixed-point arithmetic over dyadic mantissas with error accounting.

A FixedReal stores an integer mantissa at a power-of-two scale together
with a rational error bound in mantissa units, so every value is a
certified interval [ (man-err)/2^scale, (man+err)/2^scale ].  Comparisons
either return a certified sign or report indecision; nothing here guesses.

Values are built from decimal strings, rationals, or integer square roots,
never from machine floats.  Constructors are kept on the value (``source``)
so an indecisive comparison can be retried at a higher scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .errors import PrecisionExhausted, ValidationError

DEFAULT_SCALE = 128
MIN_SCALE = 64

Q = Fraction


def _round_half_even(num: int, den: int) -> int:
    # round num/den to the nearest integer, ties to even; den > 0
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and q % 2 == 1):
        q += 1
    return q


@dataclass(frozen=True)
class RealSpec:
    """Constructor descriptor for a real number: how to rebuild it at any scale.

    kind is one of 'rat' (payload Fraction), 'sqrt' (payload int m >= 0,
    value sqrt(m)), 'dec' (payload decimal string).
    """

    kind: str
    payload: object

    @classmethod
    def parse(cls, text: str) -> "RealSpec":
        """Parse 'rat:p/q', 'sqrt:m', or 'dec:string'."""
        if ":" not in text:
            raise ValidationError(f"real constructor needs a 'rat:'/'sqrt:'/'dec:' prefix: {text!r}")
        kind, _, body = text.partition(":")
        if kind == "rat":
            try:
                return cls("rat", Fraction(body))
            except (ValueError, ZeroDivisionError) as e:
                raise ValidationError(f"bad rational {body!r}: {e}") from e
        if kind == "sqrt":
            m = int(body)
            if m < 0:
                raise ValidationError("sqrt constructor needs m >= 0")
            return cls("sqrt", m)
        if kind == "dec":
            try:
                Fraction(body)  # decimal strings are exact rationals
            except ValueError as e:
                raise ValidationError(f"bad decimal {body!r}: {e}") from e
            return cls("dec", body)
        raise ValidationError(f"unknown real constructor kind {kind!r}")

    def exact(self) -> Optional[Fraction]:
        """The exact rational value, or None if irrational."""
        if self.kind == "rat":
            return self.payload
        if self.kind == "dec":
            return Fraction(self.payload)
        r = math.isqrt(self.payload)
        return Fraction(r) if r * r == self.payload else None

    def realize(self, scale: int) -> "FixedReal":
        if self.kind == "sqrt" and self.exact() is None:
            return fr_sqrt_int(self.payload, scale)
        return fr_from_fraction(self.exact(), scale, source=self)

    def text(self) -> str:
        if self.kind == "rat":
            return f"rat:{self.payload}"
        if self.kind == "dec":
            return f"dec:{self.payload}"
        return f"sqrt:{self.payload}"


@dataclass(frozen=True)
class FixedReal:
    """Dyadic interval value: man*2^-scale with error err*2^-scale, err rational >= 0."""

    man: int
    scale: int
    err: Fraction = Q(0)
    source: Optional[RealSpec] = None

    def __post_init__(self):
        if self.scale < MIN_SCALE:
            raise ValidationError(f"scale {self.scale} below minimum {MIN_SCALE}")
        if self.err < 0:
            raise ValidationError("negative error bound")

    # -- interval views ------------------------------------------------

    def bounds(self) -> tuple[Fraction, Fraction]:
        u = Q(1, 1 << self.scale)
        return (self.man - self.err) * u, (self.man + self.err) * u

    def exact(self) -> Optional[Fraction]:
        """Exact rational value when known (zero error, or rational source)."""
        if self.err == 0:
            return Q(self.man, 1 << self.scale)
        if self.source is not None:
            return self.source.exact()
        return None

    def value(self) -> float:
        return self.man / (1 << self.scale)

    def decimal(self, digits: int = 24) -> str:
        """Decimal string of the mantissa value, rounded to `digits` places."""
        p = 10**digits
        neg = self.man < 0
        n = -self.man if neg else self.man
        q = _round_half_even(n * p, 1 << self.scale)
        whole, frac = divmod(q, p)
        s = f"{whole}.{frac:0{digits}d}"
        return "-" + s if neg else s

    # -- arithmetic ----------------------------------------------------

    def _match(self, other: "FixedReal"):
        if self.scale != other.scale:
            raise ValidationError("mixed scales")

    def __neg__(self) -> "FixedReal":
        src = None
        if self.source is not None and self.source.exact() is not None:
            src = RealSpec("rat", -self.source.exact())
        return FixedReal(-self.man, self.scale, self.err, src)

    def __add__(self, other: "FixedReal") -> "FixedReal":
        self._match(other)
        src = None
        a, b = self.exact(), other.exact()
        if a is not None and b is not None:
            src = RealSpec("rat", a + b)
        return FixedReal(self.man + other.man, self.scale, self.err + other.err, src)

    def __sub__(self, other: "FixedReal") -> "FixedReal":
        return self + (-other)

    def mul_int(self, n: int) -> "FixedReal":
        src = None
        a = self.exact()
        if a is not None:
            src = RealSpec("rat", a * n)
        return FixedReal(self.man * n, self.scale, self.err * abs(n), src)

    def div_int(self, n: int) -> "FixedReal":
        if n == 0:
            raise ZeroDivisionError("div_int by zero")
        a = self.exact()
        if a is not None:
            return fr_from_fraction(a / n, self.scale)
        num, den = (self.man, n) if n > 0 else (-self.man, -n)
        man = _round_half_even(num, den)
        drift = abs(Fraction(num, den) - man)
        return FixedReal(man, self.scale, self.err / den + drift, None)

    def __mul__(self, other: "FixedReal") -> "FixedReal":
        # |xy - round(MxMy/2^s)| <= 1/2 + (|Mx| Ey + |My| Ex + Ex Ey)/2^s ulp
        self._match(other)
        s = self.scale
        man = _round_half_even(self.man * other.man, 1 << s)
        err = Q(1, 2) + Q(abs(self.man) * other.err + abs(other.man) * self.err + self.err * other.err, 1 << s)
        src = None
        a, b = self.exact(), other.exact()
        if a is not None and b is not None:
            src = RealSpec("rat", a * b)
        return FixedReal(man, s, err, src)

    def abs_(self) -> "FixedReal":
        src = None
        a = self.exact()
        if a is not None:
            src = RealSpec("rat", abs(a))
        return FixedReal(abs(self.man), self.scale, self.err, src)

    def refined(self, scale: int) -> "FixedReal":
        """Re-realize at a higher scale via the constructor, if one is known."""
        if scale <= self.scale:
            return self
        if self.err == 0:
            return FixedReal(self.man << (scale - self.scale), scale, Q(0), self.source)
        if self.source is None:
            raise PrecisionExhausted("no constructor available for refinement")
        return self.source.realize(scale)


# -- constructors ------------------------------------------------------


def fr_from_fraction(q: Fraction, scale: int = DEFAULT_SCALE, source: Optional[RealSpec] = None) -> FixedReal:
    """Nearest mantissa to q at the scale; err is the exact residual (0 when dyadic)."""
    q = Fraction(q)
    man = _round_half_even(q.numerator * (1 << scale), q.denominator)
    err = abs(q * (1 << scale) - man)
    return FixedReal(man, scale, err, source if source is not None else RealSpec("rat", q))


def fr_from_decimal(text: str, scale: int = DEFAULT_SCALE) -> FixedReal:
    """Exact decimal-string constructor (dyadic decimals get err = 0)."""
    try:
        q = Fraction(text)
    except ValueError as e:
        raise ValidationError(f"bad decimal literal {text!r}: {e}") from e
    return fr_from_fraction(q, scale, source=RealSpec("dec", text))


def fr_from_int(n: int, scale: int = DEFAULT_SCALE) -> FixedReal:
    return FixedReal(n << scale, scale, Q(0), RealSpec("rat", Q(n)))


def fr_sqrt_int(m: int, scale: int = DEFAULT_SCALE) -> FixedReal:
    """sqrt(m) with |value - sqrt(m)| <= 2^-scale (floor of the integer root)."""
    if m < 0:
        raise ValidationError("sqrt of negative integer")
    r = math.isqrt(m)
    if r * r == m:
        return FixedReal(r << scale, scale, Q(0), RealSpec("sqrt", m))
    man = math.isqrt(m << (2 * scale))
    return FixedReal(man, scale, Q(1), RealSpec("sqrt", m))


def fr_root_rational(q: Fraction, k: int, scale: int = DEFAULT_SCALE) -> FixedReal:
    """q^(1/k) for rational q > 0, mantissa within 1 ulp of the true root."""
    q = Fraction(q)
    if q <= 0:
        raise ValidationError("root of nonpositive rational")
    if k < 1:
        raise ValidationError("root order must be >= 1")
    # floor of (q * 2^(k*scale))^(1/k) via integer Newton on num/den
    target_num = q.numerator << (k * scale)
    target = target_num // q.denominator
    x = _iroot(target, k)
    exact = Q(x, 1 << scale) ** k == q
    return FixedReal(x, scale, Q(0) if exact else Q(1), None)


def _iroot(n: int, k: int) -> int:
    """floor(n^(1/k)) by Newton iteration on integers."""
    if n < 0:
        raise ValidationError("integer root of negative")
    if n == 0:
        return 0
    if k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << (-(-n.bit_length() // k))  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    return x


# -- distance to nearest integer ---------------------------------------


def dist_nearest_int(x: FixedReal) -> FixedReal:
    """||x||: distance to the nearest integer, in [0, 1/2], ties give exactly 1/2.

    The fold r -> min(r, 1-r) is 1-Lipschitz, so the error bound carries over
    unchanged.  An exact rational source folds exactly.
    """
    one = 1 << x.scale
    r = x.man % one
    d = r if 2 * r <= one else one - r
    src = None
    ex = x.exact()
    if ex is not None:
        fr = ex - math.floor(ex)
        src = RealSpec("rat", min(fr, 1 - fr))
    return FixedReal(d, x.scale, x.err, src)


def norm_form(n: int, alpha: FixedReal, gamma: Optional[FixedReal] = None) -> FixedReal:
    """||n*alpha - gamma|| with exact mantissa bookkeeping.

    The mantissa product n*man is exact; the error bound is
    |n|*err_alpha + err_gamma, within the (|n|+1)(err_a + err_g + 1) budget.
    """
    v = alpha.mul_int(n)
    if gamma is not None:
        if gamma.scale != alpha.scale:
            raise ValidationError("alpha and gamma scales differ")
        v = v - gamma
    return dist_nearest_int(v)


# -- certified comparisons ---------------------------------------------


def cmp_fixed(x: FixedReal, y) -> Optional[int]:
    """Certified sign of x - y for y a FixedReal or Fraction.

    Returns -1/0/+1 when certain (0 means proven equal), None when the
    intervals overlap without an exactness fallback.
    """
    if isinstance(y, FixedReal):
        ylo, yhi = y.bounds()
        yex = y.exact()
    else:
        ylo = yhi = Fraction(y)
        yex = ylo
    xlo, xhi = x.bounds()
    if xhi < ylo:
        return -1
    if xlo > yhi:
        return 1
    xex = x.exact()
    if xex is not None and yex is not None:
        d = xex - yex
        return 0 if d == 0 else (1 if d > 0 else -1)
    return None


def decide_le(x: FixedReal, y, *, what: str = "comparison") -> bool:
    """x <= y with escalation through the constructor; raises if truly stuck."""
    cur = x
    for extra in (0, 64, 192):
        if extra:
            try:
                cur = cur.refined(cur.scale + extra)
            except PrecisionExhausted:
                break
        c = cmp_fixed(cur, y)
        if c is not None:
            return c <= 0
    raise PrecisionExhausted(f"indecisive {what}")


# -- certified power comparisons ---------------------------------------


def sqrt_fraction(f: Fraction) -> Optional[Fraction]:
    """Exact square root of a rational, or None when irrational."""
    f = Fraction(f)
    if f < 0:
        return None
    rn, rd = math.isqrt(f.numerator), math.isqrt(f.denominator)
    if rn * rn == f.numerator and rd * rd == f.denominator:
        return Q(rn, rd)
    return None


def cmp_int_pow(m: int, base: int, expo: Fraction) -> int:
    """Exact sign of m - base^expo for integers m >= 0, base >= 1, expo rational > 0."""
    expo = Fraction(expo)
    a, b = expo.numerator, expo.denominator
    lhs = m**b
    rhs = base**a
    return 0 if lhs == rhs else (1 if lhs > rhs else -1)


def cmp_int_pow_sqrt(m: int, base: int, eps: Fraction) -> int:
    """Sign of m - base^sqrt(eps); exact when sqrt(eps) is rational, else via
    escalating-precision logs (equality is impossible for irrational exponents)."""
    r = sqrt_fraction(eps)
    if r is not None:
        return cmp_int_pow(m, base, r)
    if m <= 0:
        return -1
    if m == 1:
        return -1 if base >= 2 else 0
    # sign of (ln m)^2 - eps (ln base)^2, both logs positive
    eps = Fraction(eps)
    for dps in (40, 120, 400):
        with mpmath.workdps(dps):
            lm, lb = mpmath.ln(m), mpmath.ln(base)
            lhs = lm * lm * eps.denominator
            rhs = lb * lb * eps.numerator
            tol = (abs(lhs) + abs(rhs)) * mpmath.mpf(10) ** (8 - dps)
            if lhs > rhs + tol:
                return 1
            if lhs < rhs - tol:
                return -1
    raise PrecisionExhausted(f"cannot separate {m} from {base}^sqrt({eps})")


def ceil_pow_sqrt(base: int, eps: Fraction) -> int:
    """Smallest integer >= base^sqrt(eps), certified."""
    with mpmath.workdps(40):
        guess = int(mpmath.floor(mpmath.power(base, mpmath.sqrt(mpmath.mpf(eps.numerator) / eps.denominator))))
    for m in range(max(guess - 2, 0), guess + 4):
        # smallest m with m >= base^sqrt(eps)
        if cmp_int_pow_sqrt(m, base, eps) >= 0:
            return m
    raise PrecisionExhausted("ceil_pow_sqrt guess window missed")


def cmp_dist_root(d: int, err: Fraction, scale: int, q: int, r: int) -> Optional[int]:
    """Certified sign of d*2^-scale - q^(-1/r) for integers q >= 1, r >= 1.

    Exact integer test: d/2^scale >= q^(-1/r)  iff  d^r * q >= 2^(r*scale).
    Returns None when the error interval straddles the root.
    """
    rhs = 1 << (r * scale)
    lo = Q(d - err)
    hi = Q(d + err)

    def side(v: Fraction) -> int:
        if v < 0:
            return -1
        lhs = v.numerator**r * q
        right = rhs * v.denominator**r
        return 0 if lhs == right else (1 if lhs > right else -1)

    slo, shi = side(Q(lo)), side(Q(hi))
    if slo == shi:
        return slo
    if slo > 0:
        return 1
    if shi < 0:
        return -1
    return None


def cmp_frac_pow_sqrt(lo: Fraction, hi: Fraction, n: int, eps: Fraction) -> Optional[int]:
    """Certified sign of x - n^(-sqrt(eps)) for x in [lo, hi], n >= 1.

    Exact when sqrt(eps) is rational; otherwise decided by escalating-precision
    evaluation of the threshold.  None only if the interval itself straddles.
    """
    if n == 1:
        # threshold is exactly 1
        if lo > 1:
            return 1
        if hi < 1:
            return -1
        return 0 if lo == hi == 1 else None
    r = sqrt_fraction(eps)
    if r is not None:
        a, b = r.numerator, r.denominator

        def side(v: Fraction) -> int:
            if v <= 0:
                return -1
            lhs = v.numerator**b * n**a
            rhs = v.denominator**b
            return 0 if lhs == rhs else (1 if lhs > rhs else -1)

        slo, shi = side(lo), side(hi)
        if slo == shi:
            return slo
        if slo > 0:
            return 1
        if shi < 0:
            return -1
        return None
    eps = Fraction(eps)
    for dps in (40, 120, 400):
        with mpmath.workdps(dps):
            t = mpmath.power(n, -mpmath.sqrt(mpmath.mpf(eps.numerator) / eps.denominator))
            tol = t * mpmath.mpf(10) ** (8 - dps)
            flo = mpmath.mpf(lo.numerator) / lo.denominator
            fhi = mpmath.mpf(hi.numerator) / hi.denominator
            if flo > t + tol:
                return 1
            if fhi < t - tol:
                return -1
            if flo < t - tol and fhi < t - tol:
                return -1
    return None
