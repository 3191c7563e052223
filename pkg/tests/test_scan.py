"""Vectorized exact scanner vs plain big-int reference evaluation."""

import random
from fractions import Fraction

import numpy as np
import pytest

from bohrgap.realfield import FixedReal, RealSpec, fr_from_decimal, fr_from_fraction, fr_sqrt_int, norm_form
from bohrgap.scan import BLOCK, CoordScan, ThresholdSpec, first_in_range, members_in_range

Q = Fraction


def bigint_dist(ma: int, mg: int, n: int, scale: int) -> int:
    # reference route: one big multiplication per n, no limbs
    one = 1 << scale
    r = (n * ma - mg) % one
    return r if 2 * r <= one else one - r


@pytest.mark.parametrize("alpha_spec,gamma_text", [
    ("sqrt:2", "0"),
    ("sqrt:3", "0.3"),
    ("rat:1/3", "0.5"),
    ("dec:0.7312", "0.25"),
])
def test_dist_words_match_bigint(alpha_spec, gamma_text):
    a = RealSpec.parse(alpha_spec).realize(128)
    g = fr_from_decimal(gamma_text, 128)
    sc = CoordScan(a, g)
    rng = random.Random(7)
    ns = sorted(rng.sample(range(1, 10**7), 400))
    words = sc.dist_words(np.array(ns, dtype=np.uint64))
    got = [int(words[0][i]) | (int(words[1][i]) << 64) for i in range(len(ns))]
    want = [bigint_dist(a.man % (1 << 128), g.man % (1 << 128), n, 128) for n in ns]
    assert got == want


def test_dist_floats_close_to_exact():
    a = fr_sqrt_int(5, 128)
    sc = CoordScan(a, None)
    ns = np.arange(1, 5000, dtype=np.uint64)
    f = sc.dist_floats(ns)
    for i in (0, 1, 57, 2500, 4998):
        d = bigint_dist(a.man, 0, int(ns[i]), 128)
        assert abs(f[i] - d / 2**128) <= 1e-14


def brute_members(alpha, gamma, thr, lo, hi):
    out = []
    for n in range(lo, hi + 1):
        d = norm_form(n, alpha, gamma)
        ex = d.exact()
        if ex is not None:
            if ex <= thr:
                out.append(n)
        else:
            dlo, dhi = d.bounds()
            assert dhi < thr or dlo > thr, "reference needs a decisive margin"
            if dhi <= thr:
                out.append(n)
    return out


@pytest.mark.parametrize("alpha_spec,gamma_text,thr", [
    ("sqrt:2", "0", Q(1, 20)),
    ("sqrt:7", "0.3", Q(1, 10)),
    ("rat:2/7", "0.5", Q(1, 7)),
])
def test_members_match_bruteforce(alpha_spec, gamma_text, thr):
    a = RealSpec.parse(alpha_spec).realize(128)
    g = fr_from_decimal(gamma_text, 128)
    sc = CoordScan(a, g)
    spec = ThresholdSpec.for_fraction(sc, thr, 3000)
    got = members_in_range([sc], [spec], 0, 3000).tolist()
    assert got == brute_members(a, g, thr, 0, 3000)


def test_threshold_boundary_inclusive_exact():
    # alpha = 1/4 exactly (dyadic): ||2 * 1/4|| = 1/2 == thr must be included
    a = fr_from_decimal("0.25", 128)
    sc = CoordScan(a, None)
    spec = ThresholdSpec.for_fraction(sc, Q(1, 2), 100)
    got = members_in_range([sc], [spec], 1, 8).tolist()
    assert got == [1, 2, 3, 4, 5, 6, 7, 8]
    tight = ThresholdSpec.for_fraction(sc, Q(1, 4), 100)
    got = members_in_range([sc], [tight], 1, 8).tolist()
    assert got == [1, 3, 4, 5, 7, 8]


def test_borderline_falls_back_to_exact():
    # inflate the error so the vector pass cannot decide anything; the
    # refinement path must still produce the exact member list
    base = fr_sqrt_int(2, 128)
    fat = FixedReal(base.man, 128, Q(1, 1) * (1 << 90), base.source)
    sc = CoordScan(fat, None)
    spec = ThresholdSpec.for_fraction(sc, Q(1, 20), 200)
    got = members_in_range([sc], [spec], 1, 200).tolist()
    want = brute_members(base, None, Q(1, 20), 1, 200)
    assert got == want


def test_two_coordinates_intersect():
    a1, a2 = fr_sqrt_int(2, 128), fr_sqrt_int(3, 128)
    s1, s2 = CoordScan(a1, None), CoordScan(a2, None)
    t1 = ThresholdSpec.for_fraction(s1, Q(1, 5), 500)
    t2 = ThresholdSpec.for_fraction(s2, Q(1, 5), 500)
    got = set(members_in_range([s1, s2], [t1, t2], 1, 500).tolist())
    w1 = set(brute_members(a1, None, Q(1, 5), 1, 500))
    w2 = set(brute_members(a2, None, Q(1, 5), 1, 500))
    assert got == (w1 & w2)


def test_first_in_range_matches_members():
    a = fr_sqrt_int(2, 128)
    sc = CoordScan(a, fr_from_decimal("0.3", 128))
    spec = ThresholdSpec.for_fraction(sc, Q(1, 50), 10**5)
    members = members_in_range([sc], [spec], 1, 10**5)
    assert first_in_range([sc], [spec], 1, 10**5) == int(members[0])
    assert first_in_range([sc], [spec], 1, int(members[0]) - 1) is None


def test_block_boundaries_are_seamless():
    a = fr_sqrt_int(2, 128)
    sc = CoordScan(a, None)
    spec = ThresholdSpec.for_fraction(sc, Q(1, 3), BLOCK * 2 + 100)
    got = members_in_range([sc], [spec], BLOCK - 5, BLOCK + 5, block=BLOCK).tolist()
    want = brute_members(a, None, Q(1, 3), BLOCK - 5, BLOCK + 5)
    assert got == want


def test_flipped_handles_negative_axis():
    a = fr_sqrt_int(2, 128)
    g = fr_from_decimal("0.3", 128)
    sc = CoordScan(a, g).flipped()
    # ||(-n) alpha - gamma|| == ||n alpha + gamma||
    for n in (1, 12, 99):
        d1 = norm_form(-n, a, g)
        words = sc.dist_words(np.array([n], dtype=np.uint64))
        got = int(words[0][0]) | (int(words[1][0]) << 64)
        assert got == d1.man
