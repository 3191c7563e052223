"""Euler totient tables, divisibility densities on progressions, and exact
lattice point counts with discrepancy certificates.

The counting theorem compares |box cap Lambda| against vol(box)/det(Lambda)
with an error controlled by projection volumes over Euclidean successive
minima.  Everything here is exact: counts by enumeration, determinants and
densities as integers or Fractions, minima as integer squared norms.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from io import StringIO
from typing import Optional

import mpmath
import numpy as np

from .errors import BudgetExceeded, ValidationError
from .gap import GAP, gap_elements
from .minima import _int_det

Q = Fraction

_EAGER_LIMIT = 10**7
_SIEVE_CAP = 10**8
_BLOCK = 10**6
_CACHE_BLOCKS = 4


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    # deterministic Miller-Rabin for anything below 3.3 * 10^24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _phi_segment(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    """phi(n) for lo <= n < hi; primes must cover sqrt(hi-1)."""
    phi = np.arange(lo, hi, dtype=np.int64)
    rem = phi.copy()
    for p in map(int, primes):
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        if start >= hi:
            continue
        sl = slice(start - lo, hi - lo, p)
        phi[sl] -= phi[sl] // p
        sub = rem[sl]
        sub //= p
        while True:
            m = sub % p == 0
            if not m.any():
                break
            sub[m] //= p
    big = rem > 1  # a single prime factor above sqrt(hi) survives
    phi[big] = phi[big] // rem[big] * (rem[big] - 1)
    return phi


class TotientTable:
    """phi(1..limit); materialized below 10^7, block-on-demand above."""

    def __init__(self, limit: int):
        if limit < 1:
            raise ValidationError("sieve limit must be at least 1")
        if limit > _SIEVE_CAP:
            raise BudgetExceeded(f"sieve limit {limit} exceeds {_SIEVE_CAP}")
        self.limit = int(limit)
        self._primes = primes_up_to(math.isqrt(self.limit) + 1)
        if self.limit <= _EAGER_LIMIT:
            self._values: Optional[np.ndarray] = _phi_segment(
                1, self.limit + 1, self._primes
            )
        else:
            self._values = None
            self._cache: dict[int, np.ndarray] = {}

    def _segment(self, j: int) -> np.ndarray:
        seg = self._cache.get(j)
        if seg is None:
            lo = 1 + j * _BLOCK
            hi = min(self.limit + 1, lo + _BLOCK)
            seg = _phi_segment(lo, hi, self._primes)
            if len(self._cache) >= _CACHE_BLOCKS:
                self._cache.pop(next(iter(self._cache)))
            self._cache[j] = seg
        return seg

    def phi(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValidationError(f"{n} outside sieve range 1..{self.limit}")
        if self._values is not None:
            return int(self._values[n - 1])
        j = (n - 1) // _BLOCK
        return int(self._segment(j)[(n - 1) % _BLOCK])

    def block(self, lo: int, hi: int) -> np.ndarray:
        """phi(lo), ..., phi(hi-1) as one array."""
        if not 1 <= lo <= hi <= self.limit + 1:
            raise ValidationError("block outside sieve range")
        if self._values is not None:
            return self._values[lo - 1 : hi - 1]
        parts = []
        n = lo
        while n < hi:
            j = (n - 1) // _BLOCK
            seg = self._segment(j)
            base = 1 + j * _BLOCK
            upto = min(hi, base + len(seg))
            parts.append(seg[n - base : upto - base])
            n = upto
        return np.concatenate(parts) if len(parts) != 1 else parts[0]


def totient_sieve(limit: int) -> TotientTable:
    return TotientTable(limit)


def totient_average(ns, table: Optional[TotientTable] = None) -> Fraction:
    """Exact sum of phi(n)/n over the given integers.

    Summation goes through the least common multiple of the inputs once,
    so no intermediate reduction of huge fractions is needed.
    """
    ns = [int(n) for n in ns]
    if not ns:
        return Q(0)
    if min(ns) < 1:
        raise ValidationError("totient average needs positive integers")
    hi = max(ns)
    if table is None:
        table = totient_sieve(hi)
    elif table.limit < hi:
        raise ValidationError(f"sieve limit {table.limit} below max element {hi}")
    uniq = sorted(set(ns))
    lcm = 1
    for n in uniq:
        lcm = math.lcm(lcm, n)
    weight = {n: lcm // n for n in uniq}
    num = sum(table.phi(n) * weight[n] for n in ns)
    return Q(num, lcm)


# -- divisibility densities ---------------------------------------------------


def alpha_p(gap: GAP, p: int, budget: int = 10**8) -> Fraction:
    """Fraction of the progression's coefficient box hitting 0 mod p."""
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    els = gap_elements(gap, budget)
    hits = int(np.count_nonzero(els % p == 0))
    return Q(hits, int(els.size))


def alpha_p_table(gap: GAP, p_max: int, eps: Fraction, budget: int = 10**8) -> list:
    """Rows (p, alpha_p, alpha_p * p^eps, reference bound 1/p + 1/min N_i)."""
    els = gap_elements(gap, budget)
    size = int(els.size)
    min_len = min(gap.lengths)
    e = float(eps)
    rows = []
    for p in map(int, primes_up_to(p_max)):
        a = Q(int(np.count_nonzero(els % p == 0)), size)
        ref = Q(1, p) + Q(1, min_len)
        rows.append(
            {
                "p": p,
                "alpha_p": a,
                "alpha_p_float": float(a),
                "p_eps_weighted": float(a) * p**e,
                "reference_bound": float(ref),
                "excess": float(a - ref),
            }
        )
    return rows


def alpha_table_csv(rows) -> str:
    out = StringIO()
    out.write("p,alpha_p,alpha_p_float,p_eps_weighted,reference_bound,excess\n")
    for r in rows:
        out.write(
            f"{r['p']},{r['alpha_p']},{r['alpha_p_float']:.12g},"
            f"{r['p_eps_weighted']:.12g},{r['reference_bound']:.12g},"
            f"{r['excess']:.12g}\n"
        )
    return out.getvalue()


# -- congruence lattices -------------------------------------------------------


@dataclass(frozen=True)
class CongruenceLattice:
    """{x in Z^d : sum A_i x_i = 0 mod p} on the coordinates coprime to p."""

    moduli: tuple
    p: int
    divisible: tuple  # indices with p | A_i, dropped from the lattice
    coprime: tuple  # surviving indices, in order
    basis: tuple  # rows spanning the lattice in Z^d
    det: int

    @property
    def d(self) -> int:
        return len(self.coprime)

    def contains(self, x) -> bool:
        s = sum(self.moduli[i] * int(c) for i, c in zip(self.coprime, x))
        return s % self.p == 0

    def to_dict(self) -> dict:
        return {
            "moduli": list(self.moduli),
            "p": self.p,
            "divisible_indices": list(self.divisible),
            "coprime_indices": list(self.coprime),
            "basis": [list(r) for r in self.basis],
            "det": self.det,
        }


def congruence_lattice(moduli, p: int) -> CongruenceLattice:
    moduli = tuple(int(a) for a in moduli)
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    divisible = tuple(i for i, a in enumerate(moduli) if a % p == 0)
    coprime = tuple(i for i in range(len(moduli)) if i not in divisible)
    if not coprime:
        raise ValidationError(
            f"every modulus is divisible by {p}; the congruence is vacuous"
        )
    sub = [moduli[i] for i in coprime]
    d = len(sub)
    inv = pow(sub[0], -1, p)
    rows = [tuple(p if j == 0 else 0 for j in range(d))]
    for i in range(1, d):
        t = (-sub[i] * inv) % p
        rows.append(tuple(t if j == 0 else int(j == i) for j in range(d)))
    det = abs(_int_det([list(r) for r in rows]))
    if det != p:
        raise ValidationError("congruence basis does not have determinant p")
    return CongruenceLattice(moduli, p, divisible, coprime, tuple(rows), det)


# -- Euclidean successive minima ----------------------------------------------


def _int_rank(vectors) -> int:
    rows = [[Q(c) for c in v] for v in vectors]
    rank, col, n = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < n:
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _lattice_points_box(lat: CongruenceLattice, r: int, budget: int) -> np.ndarray:
    """All lattice points with sup-norm <= r, solved coordinate first."""
    d, p = lat.d, lat.p
    sub = [lat.moduli[i] for i in lat.coprime]
    if d == 1:
        vals = np.arange(-(r // p) * p, r + 1, p, dtype=np.int64)
        return vals.reshape(-1, 1)
    reps = (2 * r) // p + 2
    if (2 * r + 1) ** (d - 1) * reps > budget:
        raise BudgetExceeded("minima enumeration exceeds the point budget")
    axes = [np.arange(-r, r + 1, dtype=np.int64) for _ in range(d - 1)]
    tail = np.stack(
        [g.ravel() for g in np.meshgrid(*axes, indexing="ij")], axis=-1
    )
    # x_0 = -inv * (A_1 x_1 + ... ) mod p, then shifted by multiples of p
    inv = pow(sub[0], -1, p)
    res = np.zeros(len(tail), dtype=np.int64)
    for i in range(1, d):
        res = (res + sub[i] % p * tail[:, i - 1]) % p
    x0 = (-inv * res) % p  # representative in [0, p)
    pts = []
    for m in range(-reps, reps + 1):
        cand = x0 + m * p
        keep = np.abs(cand) <= r
        if keep.any():
            pts.append(
                np.concatenate([cand[keep, None], tail[keep]], axis=1)
            )
    return np.concatenate(pts) if pts else np.empty((0, d), dtype=np.int64)


def euclidean_minima(lat: CongruenceLattice, budget: int = 10**8) -> tuple:
    """Squared Euclidean successive minima, certified by enumeration.

    Doubling sup-norm balls until d independent vectors appear; every
    candidate with Euclidean norm below the final pick is inside some
    enumerated ball, so the greedy choice is exact.
    """
    d, p = lat.d, lat.p
    r = 2
    while True:
        pts = _lattice_points_box(lat, r, budget)
        if len(pts):
            norms = (pts * pts).sum(axis=1)
            order = np.argsort(norms, kind="stable")
            chosen: list = []
            mins = []
            for idx in order:
                v = pts[idx]
                if not v.any():
                    continue
                if _int_rank(chosen + [v.tolist()]) > len(chosen):
                    chosen.append(v.tolist())
                    mins.append(int(norms[idx]))
                    if len(chosen) == d:
                        break
            if len(chosen) == d and mins[-1] <= r * r:
                return tuple(mins)
        if r > p:  # p*e_i always span, norms p^2 each
            raise BudgetExceeded("minima search ran past the guaranteed radius")
        r *= 2


# -- Davenport counting --------------------------------------------------------


@dataclass
class DavenportCertificate:
    box: tuple  # half side lengths N_i
    count: int
    main_term: Fraction
    discrepancy: Fraction
    minima_sq: tuple
    projections: tuple  # V_j, max coordinate j-subset side products
    subset_constants: tuple  # comb(d, j) recorded alongside each V_j
    bound: float
    realized_ratio: float

    def to_dict(self) -> dict:
        return {
            "box": list(self.box),
            "count": self.count,
            "main_term": str(self.main_term),
            "discrepancy": str(self.discrepancy),
            "minima_sq": list(self.minima_sq),
            "projections": list(self.projections),
            "subset_constants": list(self.subset_constants),
            "bound": self.bound,
            "realized_ratio": self.realized_ratio,
        }


def davenport_count(
    box, lattice: Optional[CongruenceLattice] = None, budget: int = 10**8
) -> DavenportCertificate:
    """Exact |box cap Lambda| with main term, discrepancy, and its certificate.

    box gives half side lengths: the region is prod [-N_i, N_i].
    """
    box = tuple(int(n) for n in box)
    d = len(box)
    if d < 1 or d > 4:
        raise ValidationError("counting supports dimensions 1 through 4")
    if min(box) < 0:
        raise ValidationError("box sides must be nonnegative")
    if lattice is not None and lattice.d != d:
        raise ValidationError(
            f"lattice dimension {lattice.d} does not match box dimension {d}"
        )
    total = math.prod(2 * n + 1 for n in box)
    if total > min(budget, 4 * 10**7):
        raise BudgetExceeded(f"box holds {total} points, over the budget")

    if lattice is None:
        count = total
        det = 1
        minima_sq = (1,) * d
    else:
        p = lattice.p
        sub = [lattice.moduli[i] for i in lattice.coprime]
        acc = np.zeros((1,) * d, dtype=np.int64)
        for i, n in enumerate(box):
            axis = np.arange(-n, n + 1, dtype=np.int64)
            shape = [1] * d
            shape[i] = len(axis)
            acc = (acc + (sub[i] % p) * axis.reshape(shape)) % p
        count = int(np.count_nonzero(acc == 0))
        det = lattice.det
        minima_sq = euclidean_minima(lattice, budget)

    vol = math.prod(2 * n for n in box)
    main = Q(vol, det)
    disc = abs(Q(count) - main)

    sides = [2 * n for n in box]
    projections = []
    constants = []
    for j in range(d):
        if j == 0:
            projections.append(1)
        else:
            projections.append(
                max(math.prod(c) for c in itertools.combinations(sides, j))
            )
        constants.append(math.comb(d, j))

    with mpmath.workdps(50):
        b = mpmath.mpf(0)
        for j in range(d):
            denom = mpmath.sqrt(math.prod(minima_sq[:j])) if j else mpmath.mpf(1)
            b += projections[j] / denom
        bound = float(b)
        ratio = float(mpmath.mpf(disc.numerator) / disc.denominator / b)

    return DavenportCertificate(
        box=box,
        count=count,
        main_term=main,
        discrepancy=disc,
        minima_sq=minima_sq,
        projections=tuple(projections),
        subset_constants=tuple(constants),
        bound=bound,
        realized_ratio=ratio,
    )


def davenport_csv(certs) -> str:
    out = StringIO()
    out.write("box,count,main_term,discrepancy,bound,realized_ratio\n")
    for c in certs:
        box = "x".join(str(n) for n in c.box)
        out.write(
            f"{box},{c.count},{c.main_term},{c.discrepancy},"
            f"{c.bound:.12g},{c.realized_ratio:.12g}\n"
        )
    return out.getvalue()
