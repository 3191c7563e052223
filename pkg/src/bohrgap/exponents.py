"""Finite-horizon Diophantine exponent estimators.

Each estimator scans exactly (vectorized fixed-point distances), tracks the
running maximum of -log(quality), and reports the horizon-normalized value
value = running_max / log(horizon).  The running maximum is non-decreasing in
the horizon; the normalized value is what converges to the exponent.  Exact
zeros of any distance factor short-circuit with an infinity witness instead
of a fake large number.  All reported values are lower-bound style estimates
at the stated horizon; transference checks are advisory flags, never asserts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import PrecisionExhausted, ValidationError
from .realfield import DEFAULT_SCALE, FixedReal, RealSpec, dist_nearest_int, fr_from_int
from .scan import BLOCK, CoordScan

Q = Fraction


@dataclass(frozen=True)
class TargetVector:
    """The real vector alpha = (alpha_1..alpha_d); k = d + 1 Bohr-set rank."""

    alphas: tuple[FixedReal, ...]

    def __post_init__(self):
        if not self.alphas:
            raise ValidationError("empty target vector")
        scales = {a.scale for a in self.alphas}
        if len(scales) != 1:
            raise ValidationError("all entries must carry the same scale")

    @property
    def d(self) -> int:
        return len(self.alphas)

    @property
    def k(self) -> int:
        return self.d + 1

    @property
    def scale(self) -> int:
        return self.alphas[0].scale

    @classmethod
    def parse(cls, texts: Sequence[str], scale: int = DEFAULT_SCALE) -> "TargetVector":
        return cls(tuple(RealSpec.parse(t).realize(scale) for t in texts))

    def rational_entries(self) -> list[int]:
        """Indices (0-based) of entries with exactly rational values."""
        return [i for i, a in enumerate(self.alphas) if a.exact() is not None]


@dataclass
class ExponentEstimate:
    value: Optional[float]  # running_max / log(horizon)
    running_max: Optional[float]  # max over the window of -log(quality); monotone in horizon
    argmax: Optional[object]  # n (or vector) achieving the running max
    horizon: int
    infinite_witness: Optional[object] = None  # n (or vector) with an exact zero factor
    per_x: Optional[dict] = None  # uniform estimator: X -> normalized value


def _gammas_or_zero(alpha: TargetVector, gamma) -> list[FixedReal]:
    if gamma is None:
        return [fr_from_int(0, alpha.scale) for _ in alpha.alphas]
    gs = list(gamma)
    if len(gs) != alpha.d:
        raise ValidationError("gamma length must match alpha")
    for g in gs:
        if g.scale != alpha.scale:
            raise ValidationError("gamma scale mismatch")
    return gs


def _certify_nonzero(coord: CoordScan, n: int) -> Optional[float]:
    """Return -log(dist) if provably nonzero, None if dist is exactly zero."""
    d = coord.dist_fixed(n)
    for extra in (0, 64, 192):
        if extra:
            d = coord.dist_fixed(n, extra)
        ex = d.exact()
        if ex is not None:
            if ex == 0:
                return None
            return -math.log(float(ex))
        lo, hi = d.bounds()
        if lo > 0:
            return -math.log(float((lo + hi) / 2))
    raise PrecisionExhausted(f"cannot separate ||n*alpha-gamma|| from 0 at n={n}", n=n)


def _sqfree(m: int) -> tuple[int, int]:
    """Write m = s^2 * m0 with m0 squarefree.  Exact for m <= 10^12."""
    if m <= 0:
        raise ValidationError("square root payloads must be positive here")
    if m > 10**12:
        raise ValidationError("cannot certify squarefree part above 10^12")
    s, m0 = 1, 1
    r = m
    for p in range(2, 10**4 + 1):
        if p * p > r:
            break
        while r % (p * p) == 0:
            r //= p * p
            s *= p
        if r % p == 0:
            r //= p
            m0 *= p
    # remainder r has no prime factor <= 10^4, so r < 10^12 is either 1, a
    # prime, a product of two primes (both squarefree) or a perfect square
    t = math.isqrt(r)
    if t * t == r:
        s *= t
    else:
        m0 *= r
    return s, m0


def _integer_combination(alpha: TargetVector, vec: Sequence[int]) -> Optional[bool]:
    """Exactly decide whether sum_j vec_j * alpha_j is an integer.

    Reasons through the construction sources: rationals accumulate exactly,
    sqrt:m entries reduce to s*sqrt(m0) and distinct squarefree kernels are
    linearly independent over Q.  Returns None when an entry carries no
    source to reason from.
    """
    rational = Q(0)
    kernels: dict[int, int] = {}
    for c, a in zip(vec, alpha.alphas):
        c = int(c)
        if c == 0:
            continue
        ex = a.exact()
        if ex is not None:
            rational += c * ex
            continue
        src = a.source
        if src is None or src.kind != "sqrt":
            return None
        s, m0 = _sqfree(int(src.payload))
        kernels[m0] = kernels.get(m0, 0) + c * s
    if any(v != 0 for v in kernels.values()):
        return False
    return rational.denominator == 1


def _certify_vector(alpha: TargetVector, vec: tuple) -> Optional[float]:
    """-log||sum_j vec_j alpha_j|| if provably nonzero, None if exactly integer."""
    known = _integer_combination(alpha, vec)
    if known is True:
        return None
    for extra in (0, 64, 192):
        s = alpha.scale + extra
        acc = fr_from_int(0, s)
        for c, a in zip(vec, alpha.alphas):
            acc = acc + a.refined(s).mul_int(int(c))
        d = dist_nearest_int(acc)
        ex = d.exact()
        if ex is not None:
            if ex == 0:
                return None
            return -math.log(float(ex))
        lo, hi = d.bounds()
        if lo > 0:
            return -math.log(float((lo + hi) / 2))
    raise PrecisionExhausted(f"cannot separate the norm form from 0 at vector {vec}")


def _scan_running_max(coords: list[CoordScan], n_lo: int, n_hi: int, combine: str):
    """Running max of -log(combined dist) over [n_lo, n_hi].

    combine: 'prod' multiplies the coordinate distances, 'max' takes the
    largest (simultaneous max-norm).  Returns (running values at each n via
    callback-free arrays per block) as an iterator of (ns, score) blocks.
    Exact zeros surface as +inf scores plus a witness check hook by caller.
    """
    tiny = [max((c.err_int(n_hi) + 2) * math.ldexp(1.0, -c.scale) * 4.0, 5e-324) for c in coords]
    for start in range(n_lo, n_hi + 1, BLOCK):
        ns = np.arange(start, min(start + BLOCK, n_hi + 1), dtype=np.uint64)
        dists = [c.dist_floats(ns) for c in coords]
        suspicious = None
        for c, dd, t in zip(coords, dists, tiny):
            s = dd < t
            suspicious = s if suspicious is None else (suspicious | s)
        if combine == "prod":
            agg = dists[0].copy()
            for dd in dists[1:]:
                agg *= dd
        else:
            agg = np.maximum.reduce(dists)
        yield ns, agg, suspicious, dists


def _estimate_from_scan(alpha: TargetVector, gamma, n_max: int, combine: str) -> ExponentEstimate:
    if n_max < 2:
        raise ValidationError("horizon must be >= 2")
    gs = _gammas_or_zero(alpha, gamma)
    coords = [CoordScan(a, g) for a, g in zip(alpha.alphas, gs)]
    best = -math.inf
    best_n = None
    for ns, agg, suspicious, dists in _scan_running_max(coords, 2, n_max, combine):
        if suspicious is not None and suspicious.any():
            for idx in np.nonzero(suspicious)[0]:
                n = int(ns[idx])
                vals = []
                for c in coords:
                    v = _certify_nonzero(c, n)
                    if v is None:
                        return ExponentEstimate(None, None, None, n_max, infinite_witness=n)
                    vals.append(v)
                if combine == "prod":
                    score = sum(vals)
                else:
                    score = min(vals)
                if score > best:
                    best, best_n = score, n
            agg[suspicious] = np.inf  # already handled exactly above
        score = -np.log(agg)
        i = int(np.argmax(score))
        if score[i] > best:
            best, best_n = float(score[i]), int(ns[i])
    return ExponentEstimate(best / math.log(n_max), best, best_n, n_max)


def mult_exponent_est(alpha: TargetVector, gamma=None, n_max: int = 10**6) -> ExponentEstimate:
    """Multiplicative exponent estimate: max_n -log(prod_i ||n a_i - g_i||) / log(horizon)."""
    return _estimate_from_scan(alpha, gamma, n_max, "prod")


def simult_exponent_est(alpha: TargetVector, gamma=None, n_max: int = 10**6) -> ExponentEstimate:
    """Simultaneous exponent estimate with the max-norm quality."""
    return _estimate_from_scan(alpha, gamma, n_max, "max")


def dual_exponent_est(alpha: TargetVector, h_max: int = 2000) -> ExponentEstimate:
    """Dual exponent estimate over integer vectors 0 < |n|_inf <= h_max.

    d <= 3 only (the vector loop is exhaustive).
    """
    d = alpha.d
    if d > 3:
        raise ValidationError("dual estimator supports d <= 3")
    if h_max < 2:
        raise ValidationError("horizon must be >= 2")
    if (2 * h_max + 1) ** d > 2 * 10**8:
        raise ValidationError("dual horizon too large for exhaustive vector scan")
    logh = math.log(h_max)
    best = -math.inf
    best_vec = None

    def outer_vectors():
        if d == 1:
            yield ()
            return
        rng = range(-h_max, h_max + 1)
        if d == 2:
            for n1 in range(0, h_max + 1):  # (n1,..) ~ -(n1,..) symmetry
                yield (n1,)
        else:
            for n1 in range(0, h_max + 1):
                for n2 in rng:
                    yield (n1, n2)

    last = alpha.alphas[-1]
    zero = fr_from_int(0, alpha.scale)
    for head in outer_vectors():
        base = zero
        for c, a in zip(head, alpha.alphas):
            base = base + a.mul_int(c)
        # scan tail coefficient in [-h, h]; skip the zero vector
        for sign in (1, -1):
            # ||head.alpha + sign*n*last|| = ||n*last - (-sign*head.alpha)||
            coord = CoordScan(last, -base) if sign > 0 else CoordScan(last, base)
            lo = 0 if sign > 0 else 1
            if sign < 0 and all(c == 0 for c in head):
                continue  # mirror image of the positive scan
            ns = np.arange(lo, h_max + 1, dtype=np.uint64)
            if len(ns) == 0:
                continue
            dd = coord.dist_floats(ns)
            if sign > 0 and all(c == 0 for c in head):
                dd[0] = np.inf  # exclude the zero vector
            tiny = max((coord.err_int(h_max) + 2) * math.ldexp(1.0, -coord.scale) * 4.0, 5e-324)
            susp = dd < tiny
            if susp.any():
                for idx in np.nonzero(susp)[0]:
                    nt = int(ns[idx]) * sign
                    vec = head + (nt,)
                    v = _certify_vector(alpha, vec)
                    if v is None:
                        return ExponentEstimate(None, None, None, h_max, infinite_witness=vec)
                    if v > best:
                        best, best_vec = v, vec
                dd[susp] = np.inf
            score = -np.log(dd)
            i = int(np.argmax(score))
            if score[i] > best:
                best, best_vec = float(score[i]), head + (int(ns[i]) * sign,)
    return ExponentEstimate(best / logh, best, best_vec, h_max)


def uniform_inhom_est(alpha: TargetVector, gamma=None, x_list: Sequence[int] = (10**3, 10**4, 10**5, 10**6)) -> ExponentEstimate:
    """Uniform (inhomogeneous) proxy: min over X of max_{1<=n<X} min_i -log||n a_i - g_i|| / log X."""
    xs = sorted(set(int(x) for x in x_list))
    if not xs or xs[0] < 3:
        raise ValidationError("x_list entries must be >= 3")
    n_hi = xs[-1] - 1
    gs = _gammas_or_zero(alpha, gamma)
    coords = [CoordScan(a, g) for a, g in zip(alpha.alphas, gs)]
    running = -math.inf
    arg = None
    per_x = {}
    xi = 0
    for ns, agg, suspicious, dists in _scan_running_max(coords, 1, n_hi, "max"):
        if suspicious is not None and suspicious.any():
            for idx in np.nonzero(suspicious)[0]:
                n = int(ns[idx])
                worst = math.inf
                for c in coords:
                    v = _certify_nonzero(c, n)
                    if v is None:
                        return ExponentEstimate(None, None, None, xs[-1], infinite_witness=n)
                    worst = min(worst, v)
                agg[idx] = math.exp(-worst)
        score = -np.log(agg)  # min_i -log dist_i == -log max_i dist_i
        # checkpoints are strict: max over n < X
        while xi < len(xs) and xs[xi] - 1 <= int(ns[-1]):
            cut = xs[xi] - 1 - int(ns[0])
            if cut >= 0:
                upto = score[: cut + 1]
                if len(upto):
                    i = int(np.argmax(upto))
                    if upto[i] > running:
                        running, arg = float(upto[i]), int(ns[i])
            per_x[xs[xi]] = running / math.log(xs[xi])
            xi += 1
        i = int(np.argmax(score))
        if score[i] > running:
            running, arg = float(score[i]), int(ns[i])
    value = min(per_x.values())
    return ExponentEstimate(value, running, arg, xs[-1], per_x=per_x)


@dataclass
class ExponentReport:
    omega_lower: ExponentEstimate
    omega_times_lower: ExponentEstimate
    omega_star_lower: ExponentEstimate
    omega_hat_lower: ExponentEstimate
    flags: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        def enc(e: ExponentEstimate):
            return {
                "value": e.value,
                "running_max": e.running_max,
                "argmax": list(e.argmax) if isinstance(e.argmax, tuple) else e.argmax,
                "horizon": e.horizon,
                "infinite_witness": list(e.infinite_witness) if isinstance(e.infinite_witness, tuple) else e.infinite_witness,
                "per_x": {str(k): v for k, v in e.per_x.items()} if e.per_x else None,
            }

        return {
            "omega_lower": enc(self.omega_lower),
            "omega_times_lower": enc(self.omega_times_lower),
            "omega_star_lower": enc(self.omega_star_lower),
            "omega_hat_lower": enc(self.omega_hat_lower),
            "flags": self.flags,
        }


def exponent_report(
    alpha: TargetVector,
    gamma=None,
    n_max: int = 10**6,
    h_max: int = 2000,
    x_list: Sequence[int] = (10**3, 10**4, 10**5, 10**6),
    tol: float = 0.1,
) -> ExponentReport:
    """All four estimators plus advisory transference flags.

    Flags compare finite-horizon estimates, so they are diagnostics; a False
    flag signals horizons too short to see the asymptotic inequality, not an
    arithmetic error.
    """
    om = simult_exponent_est(alpha, gamma, n_max)
    omx = mult_exponent_est(alpha, gamma, n_max)
    oms = dual_exponent_est(alpha, h_max)
    omh = uniform_inhom_est(alpha, gamma, x_list)
    d = alpha.d
    flags = {}
    if None not in (om.value, omx.value):
        flags["simult_vs_mult"] = bool(d * om.value <= omx.value + tol)
    if None not in (oms.value, om.value) and oms.value > 0:
        flags["dual_vs_simult"] = bool(oms.value / (d + (d - 1) * oms.value) <= om.value + tol)
    if None not in (omh.value, oms.value) and oms.value > 0:
        flags["uniform_vs_dual"] = bool(omh.value >= 1.0 / oms.value - tol)
    return ExponentReport(om, omx, oms, omh, flags)


def multiplicative_hypothesis(alpha: TargetVector, n_max: int = 10**6, tol: float = 0.0) -> dict:
    """Screen for the k-variable multiplicative hypothesis: rational entries
    disqualify; for k >= 3 the multiplicative exponent estimate must sit below
    (k-1)/(k-2).  Advisory: finite horizons only ever certify lower bounds."""
    rat = alpha.rational_entries()
    out = {
        "k": alpha.k,
        "rational_entries": rat,
        "rationality_ok": not rat,
        "threshold": None,
        "estimate": None,
        "estimate_ok": None,
    }
    if rat:
        return out
    if alpha.k == 2:
        return out
    thr = Q(alpha.k - 1, alpha.k - 2)
    est = mult_exponent_est(alpha, None, n_max)
    out["threshold"] = float(thr)
    out["estimate"] = est.value
    out["estimate_ok"] = bool(est.value is not None and est.value < float(thr) - tol)
    return out
