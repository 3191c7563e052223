"""Proper generalised arithmetic progressions inside and outside Bohr sets.

inner_gap builds P = {b + n_1 A_1 + ... + n_k A_k : 1 <= n_i <= N_i} with
moduli from a certified unimodular basis of the shrunken lifted set, lengths
N_i = floor(1/(k m_i)) in R-gauge units, and a base point found by an exact
scan.  Every postcondition (P inside the Bohr set, properness, coprimality,
base-point window) is verified elementwise, never assumed.  outer_gap builds
the covering progression P' with lengths C_k/m_i and verifies that every lift
of the homogeneous Bohr set decomposes over the basis within those lengths.
Finite-N failures surface as typed errors with diagnostics; they are expected
behaviour for parameter ranges where the asymptotic argument has no room.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .bohr import (
    BohrSpec,
    enumerate_bohr,
    is_member,
    shift_injection_holds,
)
from .errors import (
    BasePointDrift,
    BudgetExceeded,
    ConstructionError,
    LengthUnderflow,
    MinimaDegenerate,
    NoBasePoint,
    PrecisionExhausted,
    SmallDirichletWitness,
    ValidationError,
)
from .minima import (
    GaugeVal,
    MinimaResult,
    _int_det,
    build_body,
    gauge_interval,
    successive_minima,
)
from .realfield import (
    _iroot,
    cmp_dist_root,
    cmp_fixed,
    cmp_frac_pow_sqrt,
    cmp_int_pow_sqrt,
    fr_from_int,
)
from .scan import CoordScan, ThresholdSpec, first_in_range

Q = Fraction

_EXTRAS = (0, 64, 192)


@dataclass
class GAP:
    """b + {n_1 A_1 + ... + n_k A_k} over a positive or symmetric box."""

    b: int
    moduli: tuple[int, ...]
    lengths: tuple[int, ...]
    form: str  # positive (1 <= n_i <= N_i) | symmetric (|n_i| <= N_i)
    sigma: tuple[int, ...]  # signs of the basis first coordinates
    minima: Optional[MinimaResult] = None
    checks: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.moduli)

    def box_size(self) -> int:
        if self.form == "positive":
            return math.prod(self.lengths)
        return math.prod(2 * L + 1 for L in self.lengths)

    def to_dict(self) -> dict:
        return {
            "b": self.b,
            "moduli": list(self.moduli),
            "lengths": list(self.lengths),
            "form": self.form,
            "sigma": list(self.sigma),
            "box_size": self.box_size(),
            "checks": self.checks,
            "trace": list(self.trace),
            "minima": self.minima.to_dict() if self.minima is not None else None,
        }


# -- small exact helpers ----------------------------------------------------


def _ge_pow_neg_eps(delta: Fraction, N: int, eps: Fraction) -> bool:
    """delta >= N^(-eps) for rational eps = p/q, exactly."""
    p, q = eps.numerator, eps.denominator
    return delta.numerator**q * N**p >= delta.denominator**q


def _floor_inv_gauge(body, g: GaugeVal, k: int) -> int:
    """floor(1/(k*m)) with certified agreement of both interval ends."""
    cur = g
    for extra in _EXTRAS:
        if extra:
            cur = gauge_interval(body, g.vec, extra)
        if cur.exact is not None:
            return int(Q(1, 1) / (k * cur.exact))
        if cur.lo > 0:
            f_lo = int(Q(1, 1) / (k * cur.hi))
            f_hi = int(Q(1, 1) / (k * cur.lo))
            if f_lo == f_hi:
                return f_lo
    raise PrecisionExhausted(f"length parameter undecidable at {g.vec}")


def _dirichlet_tspec(coord: CoordScan, q: int, r: int, n_max: int) -> ThresholdSpec:
    """Membership ||n*alpha|| <= q^(-1/r), decided exactly on the boundary."""
    x = _iroot((1 << (r * coord.scale)) // q, r)
    e = coord.err_int(n_max)

    def exact(n: int) -> bool:
        for extra in _EXTRAS:
            d = coord.dist_fixed(n, extra)
            c = cmp_dist_root(d.man, d.err, d.scale, q, r)
            if c is not None:
                return c <= 0
        raise PrecisionExhausted(f"Dirichlet boundary undecidable at n={n}", n=n)

    return ThresholdSpec(x - e - 2, x + e + 2, exact)


def _int_adjugate(rows: list[list[int]]) -> list[list[int]]:
    """Adjugate of a small integer matrix (so inv = adj/det)."""
    n = len(rows)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [[rows[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * (_int_det(sub) if sub else 1)
    return adj


def decompose(minima: MinimaResult, point) -> tuple[int, ...]:
    """Integer coefficients n with point = sum n_i v_i (rows of the basis)."""
    rows = [list(v) for v in minima.basis]
    det = _int_det(rows)
    adj = _int_adjugate(rows)
    point = [int(x) for x in point]
    k = len(rows)
    # point = n . V  =>  n = point . V^{-1} = point . adj(V)/det
    out = []
    for j in range(k):
        s = sum(point[i] * adj[i][j] for i in range(k))
        if s % det:
            raise ConstructionError("non-integral decomposition over a unimodular basis")
        out.append(s // det)
    return tuple(out)


# -- element materialization -------------------------------------------------


def gap_elements(gap: GAP, budget: int = 10**8) -> np.ndarray:
    """All values b + sum n_i A_i over the coefficient box, sorted, duplicates kept."""
    size = gap.box_size()
    if size > budget:
        raise BudgetExceeded(f"coefficient box of {size} exceeds budget {budget}")
    if size > 4 * 10**7:
        raise BudgetExceeded("coefficient box too large to materialize in memory")
    vals = np.array([gap.b], dtype=np.int64)
    for A, L in zip(gap.moduli, gap.lengths):
        coeffs = np.arange(1, L + 1, dtype=np.int64) if gap.form == "positive" else np.arange(-L, L + 1, dtype=np.int64)
        vals = (vals[:, None] + (A * coeffs)[None, :]).ravel()
    vals.sort()
    return vals


@dataclass
class ProperCertificate:
    proper: bool
    count_distinct: int
    box_size: int
    sha256: Optional[str] = None
    collision: Optional[tuple] = None  # two coefficient vectors with equal value

    def to_dict(self) -> dict:
        return {
            "proper": self.proper,
            "count_distinct": self.count_distinct,
            "box_size": self.box_size,
            "sha256": self.sha256,
            "collision": [list(c) for c in self.collision] if self.collision else None,
        }


def _coeff_vector(gap: GAP, flat: int) -> tuple[int, ...]:
    dims = []
    for L in gap.lengths:
        dims.append(L if gap.form == "positive" else 2 * L + 1)
    idx = np.unravel_index(flat, dims)
    if gap.form == "positive":
        return tuple(int(i) + 1 for i in idx)
    return tuple(int(i) - L for i, L in zip(idx, gap.lengths))


def is_proper(gap: GAP, budget: int = 10**8) -> ProperCertificate:
    """Exhaustive distinctness check over the coefficient box."""
    size = gap.box_size()
    if size > budget:
        raise BudgetExceeded(f"coefficient box of {size} exceeds budget {budget}")
    if size > 4 * 10**7:
        raise BudgetExceeded("coefficient box too large to materialize in memory")
    vals = np.array([gap.b], dtype=np.int64)
    for A, L in zip(gap.moduli, gap.lengths):
        coeffs = np.arange(1, L + 1, dtype=np.int64) if gap.form == "positive" else np.arange(-L, L + 1, dtype=np.int64)
        vals = (vals[:, None] + (A * coeffs)[None, :]).ravel()
    order = np.argsort(vals, kind="stable")
    svals = vals[order]
    dup = np.nonzero(svals[1:] == svals[:-1])[0]
    if len(dup):
        i = int(dup[0])
        pair = (_coeff_vector(gap, int(order[i])), _coeff_vector(gap, int(order[i + 1])))
        return ProperCertificate(False, int(len(np.unique(svals))), size, collision=pair)
    digest = hashlib.sha256(svals.astype("<i8").tobytes()).hexdigest()
    return ProperCertificate(True, size, size, sha256=digest)


# -- the inner construction ---------------------------------------------------


def inner_gap(spec: BohrSpec, budget: int = 10**8) -> GAP:
    """Proper GAP inside B_gamma(N; delta), all postconditions verified.

    Raises typed construction errors when the finite-N search has no room:
    NoBasePoint, SmallDirichletWitness, LengthUnderflow, BasePointDrift.
    """
    N, k, eps = spec.N, spec.k, spec.epsilon
    if N < 100:
        raise ValidationError("the construction needs N >= 100")
    deltas = spec.delta_fractions()
    for i, d in enumerate(deltas):
        if d > 1:
            raise ValidationError(f"width {i} exceeds 1; the inner window needs delta <= 1")
    # the delta >= N^-eps hypothesis is asymptotic; at finite N we record its
    # status and let the verified postconditions decide the construction
    hyp_lower = all(_ge_pow_neg_eps(d, N, eps) for d in deltas)
    trace = [f"hypotheses: N={N}, k={k}, eps={eps}, delta lower bound {'ok' if hyp_lower else 'short'}"]

    body = build_body(spec)
    minima = successive_minima(body)
    trace.append(f"basis {minima.basis} with det {minima.det_sign}")

    moduli = []
    sigma = []
    for v in minima.basis:
        a = abs(v[0])
        if a == 0:
            raise MinimaDegenerate(f"basis vector {v} projects to 0; moduli must be positive")
        moduli.append(a)
        sigma.append(1 if v[0] > 0 else -1)
    if math.gcd(*moduli) != 1:
        raise ConstructionError("moduli share a factor despite unimodular basis")  # unreachable
    trace.append(f"moduli A={moduli}, sigma={sigma}")

    lengths = []
    for g in minima.basis_m:
        L = _floor_inv_gauge(body, g, k)
        lengths.append(L)
    p, q = eps.numerator, eps.denominator
    if any(L < 1 or L**q < N**p for L in lengths):
        raise LengthUnderflow(
            f"lengths {lengths} fall below N^epsilon = {N}^{eps}; "
            "the minima leave no room at this N and delta"
        )
    trace.append(f"lengths N_i={lengths}")

    # base point: b0 then the Dirichlet adjustment s, both smallest witnesses
    n20 = N // 20
    coords = [CoordScan(a, g) for a, g in zip(spec.alpha.alphas, spec.gammas())]
    tspecs = [ThresholdSpec.for_fraction(c, d / 20, n20) for c, d in zip(coords, deltas)]
    b0 = first_in_range(coords, tspecs, 1, n20)
    if b0 is None:
        raise NoBasePoint(f"no b0 <= {n20} matches the shifted window delta/20")
    trace.append(f"b0={b0}")

    hcoords = [CoordScan(a) for a in spec.alpha.alphas]
    dspecs = [_dirichlet_tspec(c, n20, k - 1, n20) for c in hcoords]
    s = first_in_range(hcoords, dspecs, 1, n20)
    if s is None:
        raise ConstructionError("no Dirichlet witness below N/20")  # excluded by Dirichlet's theorem
    if cmp_int_pow_sqrt(s, N, eps) < 0:
        raise SmallDirichletWitness(
            f"s={s} sits below N^sqrt(eps); the base point cannot clear the lower window"
        )
    b = b0 + s
    trace.append(f"s={s}, b={b}")

    # base point window and drift, verified exactly
    if not (cmp_int_pow_sqrt(b, N, eps) >= 0 and 10 * b <= N):
        raise BasePointDrift(f"b={b} outside [N^sqrt(eps), N/10]")
    # scaled() drops gamma, so rebuild the delta/10 window around the shift
    tenth = spec.scaled(N, 1, 10)
    tenth = BohrSpec(spec.alpha, spec.gamma, N, tenth.delta, spec.epsilon)
    if not is_member(tenth, b):
        raise BasePointDrift(f"b={b} misses the delta/10 window; triangle chain broke at finite N")
    trace.append("base point window verified")

    gap = GAP(
        b=b,
        moduli=tuple(moduli),
        lengths=tuple(lengths),
        form="positive",
        sigma=tuple(sigma),
        minima=minima,
        trace=trace,
    )

    elements = gap_elements(gap, budget)
    bset = enumerate_bohr(spec, "positive")
    inside = np.isin(elements, bset.members)
    containment = bool(inside.all())
    cert = is_proper(gap, budget)
    gap.checks = {
        "hypothesis_delta_lower": hyp_lower,
        "containment": containment,
        "containment_failures": int((~inside).sum()),
        "proper": cert.proper,
        "proper_sha256": cert.sha256,
        "gcd_moduli": int(math.gcd(*moduli)),
        "element_min": int(elements.min()),
        "element_max": int(elements.max()),
        "box_size": gap.box_size(),
        "bohr_cardinality": bset.cardinality,
        "density_constant": float(Q(gap.box_size()) / (math.prod(deltas) * N)),
        "base_point": {"b0": b0, "s": s, "b": b},
    }
    if not containment:
        raise ConstructionError(
            f"{int((~inside).sum())} elements escape the Bohr set; construction invalid"
        )
    if not cert.proper:
        raise ConstructionError(f"progression not proper; collision {cert.collision}")
    trace.append(
        f"verified: {len(elements)} elements inside the Bohr set, proper, gcd 1"
    )
    return gap


# -- the outer construction ---------------------------------------------------


def _cramer_constant(body, minima: MinimaResult) -> Fraction:
    """Certified constant C with |n_i| <= C/m_i for every lift in 10*lambda*S.

    Cramer determinant bound: |det(M_i)| <= k!*(10)*prod_{j!=i} m_j*prod c_l
    in R-gauge units, using the upper ends of the basis gauge intervals.
    """
    k = body.k
    prod = Q(10 * math.factorial(k))
    for c in body.c:
        prod *= c
    for g in minima.basis_m:
        prod *= g.exact if g.exact is not None else g.hi
    return prod


def _lift_coeff_check(spec: BohrSpec, minima: MinimaResult, lengths, members, budget: int):
    """Decompose every lift of every member; return (count, failures).

    Integer fast path: candidate witnesses come from the exact mantissa product
    n*Ma with an error margin; only genuinely borderline witnesses fall back to
    escalating fixed-point comparison.
    """
    one = 1 << spec.scale
    deltas = spec.delta_fractions()
    coords = []
    for i, a in enumerate(spec.alpha.alphas):
        er = math.ceil(a.err * spec.N)
        dd = deltas[i] * one
        coords.append((a.man, math.floor(dd - er), math.floor(dd + er)))

    def borderline(n: int, i: int, a: int) -> bool:
        from .bohr import _unfolded

        for extra in _EXTRAS:
            d = (_unfolded(spec, n, i, extra) - fr_from_int(a, spec.scale + extra)).abs_()
            c = cmp_fixed(d, deltas[i])
            if c is not None:
                return c <= 0
        raise PrecisionExhausted(f"witness boundary undecidable at n={n}", n=n, coord=i)

    rows = [list(v) for v in minima.basis]
    det = _int_det(rows)
    adj = _int_adjugate(rows)  # coeff_j = det * sum_i pt_i * adj[i][j] since det = +-1
    k = len(rows)
    failures = []
    checked = 0
    for nn in members:
        n = int(nn)
        windows = []
        for i, (ma, din, dout) in enumerate(coords):
            p = n * ma
            alo = -((dout - p) // one)
            ahi = (p + dout) // one
            cand = []
            for a in range(alo, ahi + 1):
                r = abs(p - a * one)
                if r <= din or (r <= dout and borderline(n, i, a)):
                    cand.append(a)
            windows.append(cand)
        for tail in itertools.product(*windows):
            checked += 1
            if checked > budget:
                raise BudgetExceeded(f"more than {budget} lifts to verify")
            pt = (n,) + tail
            bad = False
            for j in range(k):
                c = det * sum(pt[i] * adj[i][j] for i in range(k))
                if abs(c) > lengths[j]:
                    bad = True
                    break
            if bad:
                coeffs = tuple(det * sum(pt[i] * adj[i][j] for i in range(k)) for j in range(k))
                failures.append((n, pt, coeffs))
                if len(failures) > 16:
                    return checked, failures
    return checked, failures


def outer_gap(spec: BohrSpec, c_k=None, budget: int = 10**8) -> GAP:
    """Symmetric GAP P' containing the homogeneous B^0(N; delta), verified.

    Every lift of every member must decompose over the basis with |n_i| <= N_i.
    The default coefficient constant is the certified Cramer bound for this
    instance, which makes containment provable; pass c_k to override.
    """
    if not spec.is_homogeneous():
        raise ValidationError("outer structure is stated for the homogeneous set")
    N, k, eps = spec.N, spec.k, spec.epsilon
    if N < 100:
        raise ValidationError("the construction needs N >= 100")
    deltas = spec.delta_fractions()
    hyp_lower = all(_cmp_delta_pow_neg_sqrt(d, N, eps) >= 0 for d in deltas)

    body = build_body(spec)
    minima = successive_minima(body)
    if c_k is None:
        c_k = _cramer_constant(body, minima)
    c_k = Q(c_k)
    trace = [
        f"hypotheses: N={N}, k={k}, tau=sqrt({eps}), C_k={float(c_k):.6g}, "
        f"delta lower bound {'ok' if hyp_lower else 'short'}"
    ]
    trace.append(f"basis {minima.basis} with det {minima.det_sign}")

    moduli = tuple(abs(v[0]) for v in minima.basis)
    sigma = tuple(1 if v[0] > 0 else (-1 if v[0] < 0 else 0) for v in minima.basis)
    lengths = []
    for g in minima.basis_m:
        lengths.append(_floor_const_inv_gauge(body, g, c_k))
    if any(L < 1 or cmp_int_pow_sqrt(L, N, eps) < 0 for L in lengths):
        raise LengthUnderflow(
            f"lengths {lengths} fall below N^tau = {N}^sqrt({eps}); "
            "the minima leave no room at this N and delta"
        )
    trace.append(f"moduli A={list(moduli)}, lengths N_i={lengths}")

    gap = GAP(
        b=0,
        moduli=moduli,
        lengths=tuple(lengths),
        form="symmetric",
        sigma=sigma,
        minima=minima,
        trace=trace,
    )

    bset = enumerate_bohr(spec, "symmetric")
    checked_lifts, failures = _lift_coeff_check(spec, minima, lengths, bset.members, budget)
    containment = not failures
    box = gap.box_size()
    dprod = Q(1)
    for d in deltas:
        dprod *= d
    realized = Q(box) / (dprod * N)
    gap.checks = {
        "hypothesis_delta_lower": hyp_lower,
        "containment": containment,
        "containment_failures": [
            {"n": f[0], "lift": list(f[1]), "coeffs": list(f[2])} for f in failures[:4]
        ],
        "checked_lifts": checked_lifts,
        "bohr_cardinality": bset.cardinality,
        "box_size": box,
        "realized_constant": float(realized),
        "c_k": float(c_k),
    }
    if not containment:
        raise ConstructionError(
            f"{len(failures)}+ lifted members escape the coefficient box"
        )
    trace.append(f"verified: {checked_lifts} lifts decompose inside the box")
    return gap


def _cmp_delta_pow_neg_sqrt(d: Fraction, N: int, eps: Fraction) -> int:
    """Sign of d - N^(-sqrt(eps)), certified."""
    sgn = cmp_frac_pow_sqrt(d, d, N, eps)
    if sgn is None:
        raise PrecisionExhausted("width vs N^-sqrt(eps) undecidable")
    return sgn


def _floor_const_inv_gauge(body, g: GaugeVal, c_k: int) -> int:
    """floor(c_k/m) certified, for the outer lengths."""
    cur = g
    for extra in _EXTRAS:
        if extra:
            cur = gauge_interval(body, g.vec, extra)
        if cur.exact is not None:
            return int(Q(c_k) / cur.exact)
        if cur.lo > 0:
            f_lo = int(Q(c_k) / cur.hi)
            f_hi = int(Q(c_k) / cur.lo)
            if f_lo == f_hi:
                return f_lo
    raise PrecisionExhausted(f"outer length undecidable at {g.vec}")


# -- cardinality corollary ----------------------------------------------------


def cardinality_ratio(spec: BohrSpec) -> dict:
    """#B / (delta_1..delta_{k-1} N) on the symmetric set, plus the shift check."""
    deltas = spec.delta_fractions()
    for i, d in enumerate(deltas):
        if d > 1:
            raise ValidationError(f"width {i} exceeds 1")
    hyp_lower = all(_cmp_delta_pow_neg_sqrt(d, spec.N, spec.epsilon) >= 0 for d in deltas)
    sym = enumerate_bohr(spec, "symmetric")
    pos = enumerate_bohr(spec, "positive")
    dprod = Q(1)
    for d in deltas:
        dprod *= d
    ratio = Q(sym.cardinality) / (dprod * spec.N)
    return {
        "cardinality": sym.cardinality,
        "cardinality_positive": pos.cardinality,
        "ratio": float(ratio),
        "ratio_exact": str(ratio),
        "hypothesis_delta_lower": hyp_lower,
        "shift_injection": shift_injection_holds(spec, pos),
    }
