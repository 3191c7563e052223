"""Totient tables, divisibility densities, and lattice counting against
trial-division and double-loop oracles."""

import itertools
import math
import random
from fractions import Fraction as Q

import numpy as np
import pytest

from bohrgap.bohr import BohrSpec, restricted_bohr
from bohrgap.counting import (
    CongruenceLattice,
    alpha_p,
    alpha_p_table,
    alpha_table_csv,
    congruence_lattice,
    davenport_count,
    davenport_csv,
    euclidean_minima,
    is_prime,
    primes_up_to,
    totient_average,
    totient_sieve,
)
from bohrgap.errors import BudgetExceeded, ValidationError
from bohrgap.gap import GAP, gap_elements, inner_gap


# -- oracles -------------------------------------------------------------------


def phi_oracle(n):
    """Totient by trial-division factorization."""
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def rank_oracle(vectors):
    rows = [[Q(c) for c in v] for v in vectors]
    r = 0
    for col in range(len(rows[0]) if rows else 0):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col] / rows[r][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def brute_count(box, moduli, p):
    """Double loop over the box, counting the congruence directly."""
    ranges = [range(-n, n + 1) for n in box]
    total = 0
    for x in itertools.product(*ranges):
        if sum(a * c for a, c in zip(moduli, x)) % p == 0:
            total += 1
    return total


@pytest.fixture(scope="module")
def sqrt2_gap():
    return inner_gap(BohrSpec.build(["sqrt:2"], None, 10**5, ["0.1"], "0.05"))


# -- totient sieve ---------------------------------------------------------------


def test_phi_small_values():
    t = totient_sieve(100)
    assert t.phi(1) == 1
    assert t.phi(12) == 4 == sum(1 for a in range(1, 13) if math.gcd(a, 12) == 1)
    assert t.phi(97) == 96


def test_phi_matches_oracle_block():
    t = totient_sieve(3000)
    vals = t.block(1, 3001)
    for n in range(1, 3001):
        assert int(vals[n - 1]) == phi_oracle(n), n


def test_phi_primes_and_multiplicativity():
    t = totient_sieve(10**4)
    for p in map(int, primes_up_to(10**4)):
        assert t.phi(p) == p - 1
    rng = random.Random(5)
    for _ in range(200):
        a, b = rng.randrange(2, 90), rng.randrange(2, 90)
        if math.gcd(a, b) == 1:
            assert t.phi(a * b) == t.phi(a) * t.phi(b)


def test_phi_density_constant():
    t = totient_sieve(10**4)
    s = math.fsum(
        int(p) / n for n, p in enumerate(t.block(1, 10**4 + 1), start=1)
    )
    assert s == pytest.approx(6079.3841356524645, rel=1e-12)
    assert abs(s - 6 / math.pi**2 * 10**4) <= 0.01 * 10**4


def test_segmented_table_agrees():
    t = totient_sieve(10**7 + 2 * 10**6)
    for n in (10**7 - 1, 10**7, 10**7 + 1, 10**7 + 999983, 10**7 + 2 * 10**6):
        assert t.phi(n) == phi_oracle(n), n
    blk = t.block(10**7 + 10**6 - 3, 10**7 + 10**6 + 3)  # spans two segments
    for off, n in enumerate(range(10**7 + 10**6 - 3, 10**7 + 10**6 + 3)):
        assert int(blk[off]) == phi_oracle(n)


def test_sieve_guards():
    with pytest.raises(BudgetExceeded):
        totient_sieve(10**8 + 1)
    with pytest.raises(ValidationError):
        totient_sieve(0)
    t = totient_sieve(50)
    with pytest.raises(ValidationError):
        t.phi(51)


# -- totient averages -------------------------------------------------------------


def test_average_trivial_sets():
    assert totient_average([1]) == 1
    assert totient_average([2, 4, 8]) == Q(3, 2)
    assert totient_average([]) == 0


def test_average_matches_direct_fraction_sum():
    rng = random.Random(9)
    ns = [rng.randrange(1, 500) for _ in range(60)]
    t = totient_sieve(500)
    direct = sum(Q(t.phi(n), n) for n in ns)
    assert totient_average(ns, t) == direct


def test_average_restricted_bohr_pinned():
    spec = BohrSpec.build(
        ["sqrt:2", "sqrt:3"], ["dec:0.3", "dec:0.7"], 10**5, ["0.2", "0.2"], "0.04"
    )
    ms = [int(n) for n in restricted_bohr(spec).members]
    assert len(ms) == 15999
    assert min(ms) == 13 and max(ms) == 99997
    avg = totient_average(ms)
    assert float(avg) == pytest.approx(9728.268189714086, rel=1e-12)
    m61 = 2**61 - 1
    assert avg.numerator % m61 == 45268245456389359
    assert avg.denominator % m61 == 959683354158439295
    # the average keeps pace with the expected delta1*delta2*N scale
    assert 1 <= float(avg) / (0.04 * 10**5) <= 10


def test_average_range_guard():
    t = totient_sieve(10)
    with pytest.raises(ValidationError):
        totient_average([5, 20], t)
    with pytest.raises(ValidationError):
        totient_average([0])


# -- divisibility densities --------------------------------------------------------


def test_alpha_p_degenerate_even_gap():
    g = GAP(b=2, moduli=(2,), lengths=(5,), form="positive", sigma=(1,))
    assert alpha_p(g, 2) == 1


def test_alpha_p_single_period():
    for p in (2, 3, 7, 13):
        g = GAP(b=0, moduli=(1,), lengths=(p,), form="positive", sigma=(1,))
        assert alpha_p(g, p) == Q(1, p)


def test_alpha_p_requires_prime():
    g = GAP(b=0, moduli=(1,), lengths=(4,), form="positive", sigma=(1,))
    with pytest.raises(ValidationError):
        alpha_p(g, 6)


def test_alpha_table_pinned(sqrt2_gap):
    rows = alpha_p_table(sqrt2_gap, 97, Q(1, 20))
    by_p = {r["p"]: r for r in rows}
    assert by_p[2]["alpha_p"] == Q(3, 5)
    assert by_p[3]["alpha_p"] == Q(1, 5)
    assert by_p[5]["alpha_p"] == Q(1, 5)
    assert by_p[7]["alpha_p"] == Q(3, 25)
    mx = max(r["p_eps_weighted"] for r in rows)
    assert mx == pytest.approx(0.6211589543048265, rel=1e-12)
    # the reference bound 1/p + 1/min(N_i) holds outright on this instance
    assert all(r["excess"] <= 0 for r in rows)


def test_alpha_table_wide_prime_range(sqrt2_gap):
    rows = alpha_p_table(sqrt2_gap, 10**4, Q(1, 20))
    assert max(r["p_eps_weighted"] for r in rows) == pytest.approx(
        0.6211589543048265, rel=1e-12
    )


def test_alpha_csv_shape(sqrt2_gap):
    rows = alpha_p_table(sqrt2_gap, 10, Q(1, 20))
    text = alpha_table_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0].startswith("p,alpha_p,")
    assert lines[1].startswith("2,3/5,0.6,")
    assert len(lines) == 1 + 4  # primes 2, 3, 5, 7


def test_amgm_chain_exact(sqrt2_gap):
    # prod phi(n)/n >= prod_p (p/(p+2))^{c_p} with c_p the divisibility counts
    els = [int(n) for n in gap_elements(sqrt2_gap)]
    t = totient_sieve(max(els))
    lhs = Q(1)
    for n in els:
        lhs *= Q(t.phi(n), n)
    rhs = Q(1)
    for p in map(int, primes_up_to(max(els))):
        c = sum(1 for n in els if n % p == 0)
        if c:
            rhs *= Q(p, p + 2) ** c
    assert lhs >= rhs


# -- congruence lattices ------------------------------------------------------------


def test_lattice_pair_modulus_two():
    lat = congruence_lattice((1, 1), 2)
    assert lat.det == 2 and lat.divisible == () and lat.coprime == (0, 1)
    for v in [(1, 1), (0, 2)] + [tuple(r) for r in lat.basis]:
        assert lat.contains(v)
    assert not lat.contains((1, 0))


def test_lattice_with_zero_modulus():
    lat = congruence_lattice((1, 0), 3)
    assert lat.divisible == (1,) and lat.coprime == (0,)
    assert lat.basis == ((3,),) and lat.det == 3


def test_lattice_mixed_divisibility():
    lat = congruence_lattice((3, 5, 7), 5)
    assert lat.divisible == (1,) and lat.coprime == (0, 2)
    assert lat.det == 5
    # residue-count oracle: p^{d-1} solutions in a fundamental box
    sols = sum(
        1 for x in range(5) for z in range(5) if (3 * x + 7 * z) % 5 == 0
    )
    assert sols == 5


def test_lattice_rejects_vacuous():
    with pytest.raises(ValidationError):
        congruence_lattice((4, 6), 2)
    with pytest.raises(ValidationError):
        congruence_lattice((1, 1), 4)  # not prime


def test_lattice_det_and_index_random():
    rng = random.Random(3)
    primes = [2, 3, 5, 7, 11, 13]
    for _ in range(30):
        p = rng.choice(primes)
        k = rng.randrange(1, 4)
        moduli = tuple(rng.randrange(0, 30) for _ in range(k))
        if all(a % p == 0 for a in moduli):
            continue
        lat = congruence_lattice(moduli, p)
        assert lat.det == p
        d = lat.d
        inside = sum(
            1
            for x in itertools.product(range(p), repeat=d)
            if lat.contains(x)
        )
        assert inside == p ** (d - 1)  # index p in Z^d
        for row in lat.basis:
            assert lat.contains(row)


# -- Euclidean minima ----------------------------------------------------------------


def test_minima_checkerboard():
    lat = congruence_lattice((1, 1), 2)
    assert euclidean_minima(lat) == (2, 2)


def test_minima_pinned_dim3():
    lat = congruence_lattice((1, 2, 3), 5)
    assert euclidean_minima(lat) == (2, 3, 5)


def test_minima_against_greedy_oracle():
    rng = random.Random(17)
    for _ in range(12):
        p = rng.choice([2, 3, 5, 7])
        d = rng.randrange(1, 4)
        moduli = tuple(rng.randrange(1, 20) for _ in range(d))
        if all(a % p == 0 for a in moduli):
            continue
        lat = congruence_lattice(moduli, p)
        got = euclidean_minima(lat)
        # oracle: all vectors with sup norm <= p, greedy by exact norm
        pts = [
            v
            for v in itertools.product(range(-p, p + 1), repeat=lat.d)
            if any(v) and lat.contains(v)
        ]
        pts.sort(key=lambda v: sum(c * c for c in v))
        chosen, mins = [], []
        for v in pts:
            if rank_oracle(chosen + [list(v)]) > len(chosen):
                chosen.append(list(v))
                mins.append(sum(c * c for c in v))
            if len(chosen) == lat.d:
                break
        assert got == tuple(mins)
        assert got[0] >= 1  # sublattice of Z^d


# -- Davenport counting ---------------------------------------------------------------


def test_davenport_full_lattice():
    c = davenport_count((2, 2))
    assert c.count == 25
    assert c.main_term == 16
    assert c.discrepancy == 9
    assert c.minima_sq == (1, 1)
    assert c.projections == (1, 4)
    assert c.subset_constants == (1, 2)


def test_davenport_checkerboard():
    lat = congruence_lattice((1, 1), 2)
    c = davenport_count((2, 2), lat)
    assert c.count == 13 == brute_count((2, 2), (1, 1), 2)
    assert c.main_term == 8
    assert c.discrepancy == 5
    assert c.minima_sq == (2, 2)


def test_davenport_dim3_pinned():
    lat = congruence_lattice((1, 2, 3), 5)
    c = davenport_count((10, 10, 10), lat)
    assert c.count == 1853
    assert c.main_term == 1600
    assert c.discrepancy == 253
    assert c.minima_sq == (2, 3, 5)
    assert c.projections == (1, 20, 400)
    assert c.realized_ratio == pytest.approx(1.417831997, rel=1e-6)


def test_davenport_matches_brute_force():
    rng = random.Random(29)
    done = 0
    while done < 30:
        p = rng.choice([2, 3, 5, 7, 11])
        d = rng.randrange(1, 4)
        moduli = tuple(rng.randrange(0, 25) for _ in range(d))
        if all(a % p == 0 for a in moduli):
            continue
        lat = congruence_lattice(moduli, p)
        box = tuple(rng.randrange(1, 13) for _ in range(lat.d))
        c = davenport_count(box, lat)
        sub = tuple(moduli[i] for i in lat.coprime)
        assert c.count == brute_count(box, sub, p)
        assert c.discrepancy == abs(Q(c.count) - c.main_term)
        assert c.bound >= 1
        done += 1


def test_davenport_guards():
    with pytest.raises(ValidationError):
        davenport_count((2,) * 5)
    with pytest.raises(BudgetExceeded):
        davenport_count((10**4, 10**4))
    lat = congruence_lattice((1, 1), 2)
    with pytest.raises(ValidationError):
        davenport_count((2, 2, 2), lat)


def test_davenport_csv_shape():
    lat = congruence_lattice((1, 1), 2)
    certs = [davenport_count((2, 2), lat)]
    text = davenport_csv(certs)
    lines = text.strip().split("\n")
    assert lines[0] == "box,count,main_term,discrepancy,bound,realized_ratio"
    assert lines[1].startswith("2x2,13,8,5,")


def test_is_prime_small():
    truth = {n for n in range(2, 1000) if all(n % d for d in range(2, n))}
    for n in range(1000):
        assert is_prime(n) == (n in truth)
