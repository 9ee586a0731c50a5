"""Exit criteria, one test per criterion.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import random
import time
from fractions import Fraction
from math import gcd

import pytest

from oracles import canonical_masks, ln_oracle, simple_sieve, within
from primeset import PrimeCodebook
from primeset.exact import apply_phi, compose_phi, decode_exact, encode_exact, multiply_codes
from primeset.multiset import Multiset, enumerate_multisets, union
from primeset.pairs import (
    Epsilon,
    certified_pair_distinct,
    certify_real_injectivity,
    construct_integer_eps_collision,
    encode_pair,
    pair_real,
    rational_eps_z_witness,
)
from primeset.primes import PrimeSupply, nth_prime
from primeset.real import Verdict, aggregate, certified_distinct, min_gap
from primeset.wl import Graph, wl_fingerprint

acceptance = pytest.mark.acceptance


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


@acceptance("AC1 exact injectivity and decode on 1287 multisets (n=8, s<=5), < 1 s")
def test_ac1_exact_injectivity():
    t0 = time.perf_counter()
    cb = PrimeCodebook(range(8))
    ms = list(enumerate_multisets(8, 5))
    assert len(ms) == 1287
    codes = [encode_exact(cb, X) for X in ms]
    ordered = sorted(c.value for c in codes)
    assert all(a != b for a, b in zip(ordered, ordered[1:]))
    assert all(decode_exact(cb, c) == X for c, X in zip(codes, ms))
    assert time.perf_counter() - t0 < 1.0


@acceptance("AC2 phi table reproduces an arbitrary labeling of the 1287 multisets")
def test_ac2_phi_decomposition():
    cb = PrimeCodebook(range(8))
    rng = random.Random(2024)
    ms = list(enumerate_multisets(8, 5))
    g = {X: (rng.random(), rng.choice("abcdefg")) for X in ms}
    phi = compose_phi(cb, g.items())  # raises InvariantViolation on any collision
    assert len(phi) == len(ms)
    assert all(apply_phi(phi, encode_exact(cb, X)) == label for X, label in g.items())


@acceptance("AC3 log-sum within radius of log(exact code) for n=6, s<=4 at 53 bits; min_gap(2,2) = ln(4/3)")
def test_ac3_real_consistency():
    cb = PrimeCodebook(range(6))
    count = 0
    for X in enumerate_multisets(6, 4):
        r = aggregate(cb, X, 53)
        # oracle: 80-digit Decimal ln, about 265 bits
        truth, err = ln_oracle(encode_exact(cb, X).value)
        assert within(r.value, r.error_radius, truth, err), X
        count += 1
    assert count == 210
    cb2 = PrimeCodebook(range(2))
    res = min_gap(cb2, 2, 2, 53)
    assert within(res.gap.value, res.gap.error_radius, *ln_oracle(Fraction(4, 3)))


@acceptance("AC4 pair injectivity, eps=sqrt2, n=6, s<=3, all centers, certified at <= 256 bits; case (a) agrees with exact")
def test_ac4_pair_injectivity():
    cb = PrimeCodebook(range(6))
    eps = Epsilon.sqrt2()
    ms = list(enumerate_multisets(6, 3))
    items = [(c, X) for c in range(6) for X in ms]
    p = certify_real_injectivity(cb, eps, items, 53, max_precision=256)
    assert p <= 256
    # every pair, not just sorted neighbours
    intervals = [pair_real(cb, eps, c, X, p).interval() for c, X in items]
    for i, (lo_i, hi_i) in enumerate(intervals):
        for lo_j, hi_j in intervals[i + 1:]:
            assert hi_i < lo_j or hi_j < lo_i
    # case (a): equal centers
    for c in range(6):
        codes = [encode_pair(cb, eps, c, X, p) for X in ms]
        exact = [encode_exact(cb, X) for X in ms]
        for i in range(len(ms)):
            for j in range(len(ms)):
                verdict = certified_pair_distinct(codes[i], codes[j])
                if exact[i] != exact[j]:
                    assert verdict is Verdict.DISTINCT
                else:
                    assert verdict is Verdict.IDENTICAL


@acceptance("AC5 every rational a/b (|a|, b <= 20) has a verified witness (2^a, 2^b)")
def test_ac5_rational_refutation():
    checked = 0
    for b in range(1, 21):
        for a in range(-20, 21):
            if gcd(a, b) != 1:
                continue
            w = rational_eps_z_witness(a, b)
            assert (w.p, w.q) == (Fraction(2) ** a, Fraction(2) ** b)
            assert w.q != 1 and w.p > 0
            assert w.p**b == w.q**a
            checked += 1
    assert checked > 0


@acceptance("AC6 integer eps collisions (1 <= |k| <= 10) equal exactly and within radii at 256 bits")
def test_ac6_integer_collisions():
    cb = PrimeCodebook(["a", "b", "c"])
    for k in [k for k in range(-10, 11) if k]:
        col = construct_integer_eps_collision(cb, k)
        b1, b2 = cb.beta(col.c1), cb.beta(col.c2)
        e1, e2 = encode_exact(cb, col.X1).value, encode_exact(cb, col.X2).value
        m = abs(k)
        if k > 0:
            assert b1**m * e1 == b2**m * e2
        else:
            assert e1 * b2**m == e2 * b1**m
        eps = Epsilon.rational(k)
        r1 = pair_real(cb, eps, col.c1, col.X1, 256)
        r2 = pair_real(cb, eps, col.c2, col.X2, 256)
        v1, v2 = (Fraction(*r.value.as_integer_ratio()) for r in (r1, r2))
        slack = sum(Fraction(*r.error_radius.as_integer_ratio()) for r in (r1, r2))
        assert abs(v1 - v2) <= slack
        assert certified_distinct(r1, r2) is not Verdict.DISTINCT


@acceptance("AC7 encode(X+Y) = encode(X)*encode(Y) on all pairs n=4, s<=3 and 200 random larger pairs")
def test_ac7_homomorphism():
    cb = PrimeCodebook(range(4))
    ms = list(enumerate_multisets(4, 3))
    codes = {X: encode_exact(cb, X) for X in ms}
    for X in ms:
        for Y in ms:
            assert encode_exact(cb, union(X, Y)) == multiply_codes(codes[X], codes[Y])
    big = PrimeCodebook(range(100))
    rng = random.Random(7)
    for _ in range(200):
        X = Multiset([rng.randrange(100) for _ in range(rng.randint(0, 60))])
        Y = Multiset([rng.randrange(100) for _ in range(rng.randint(0, 60))])
        product = encode_exact(big, X).value * encode_exact(big, Y).value
        assert encode_exact(big, union(X, Y)).value == product
        assert multiply_codes(encode_exact(big, X), encode_exact(big, Y)).value == product


@acceptance("AC8 WL: permutation invariance, K4/C4, K1,3/P4, C6 = 2C3, soundness for all graphs n<=6, < 30 s")
def test_ac8_wl_harness():
    t0 = time.perf_counter()
    rng = random.Random(8)
    for _ in range(50):
        n = rng.randint(1, 12)
        g = Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3])
        fp = wl_fingerprint(g)
        for _ in range(20):
            perm = list(range(n))
            rng.shuffle(perm)
            assert wl_fingerprint(g.relabel(perm)) == fp

    cb = PrimeCodebook()
    k4 = Graph.from_edges(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    p4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    assert wl_fingerprint(k4, codebook=cb) != wl_fingerprint(cycle(4), codebook=cb)
    assert wl_fingerprint(star, codebook=cb) != wl_fingerprint(p4, codebook=cb)
    assert wl_fingerprint(cycle(6), codebook=cb) == wl_fingerprint(cycle(3).disjoint_union(cycle(3)), codebook=cb)

    # Soundness over every labeled simple graph with n <= 6. The oracle's
    # canonical form is a minimum over all node permutations; isomorphic
    # graphs (same canonical form) must share one fingerprint, which is the
    # same as: different fingerprints imply non-isomorphic.
    shared = PrimeCodebook()
    for n in range(7):
        pairs, canon = canonical_masks(n)
        fp_of_class: dict[tuple[int, int], int] = {}
        for mask in range(1 << len(pairs)):
            g = Graph.from_edges(n, [pairs[k] for k in range(len(pairs)) if mask >> k & 1])
            fp = wl_fingerprint(g, codebook=shared).value
            key = (n, int(canon[mask]))
            assert fp_of_class.setdefault(key, fp) == fp
    assert time.perf_counter() - t0 < 30.0


@acceptance("AC9 first 10,000 primes match an independent sieve; nth_prime(999) = 7919")
def test_ac9_prime_supply():
    reference = simple_sieve(105_000)[:10_000]
    assert len(reference) == 10_000
    assert PrimeSupply().primes(10_000) == reference
    assert nth_prime(999) == 7919
