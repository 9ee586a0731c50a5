"""Throughput measurements for the CLI ``bench`` command.

Inputs come from a seeded RNG, so the codes (and ``codes_digest``) repeat
exactly between runs; only the timing fields vary.
"""

from __future__ import annotations

import hashlib
import random
import time
from collections import Counter
from collections.abc import Callable

from .codebook import PrimeCodebook
from .exact import DEFAULT_BIT_CAP, decode_exact, encode_exact
from .multiset import Multiset
from .primes import PrimeSupply
from .real import aggregate

ENCODE_SIZES = (10, 100, 1000)
PRECISIONS = (53, 256)
ALPHABET = 100


def _rate(fn: Callable[[], object], count: int, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return count / best if best > 0 else float("inf")


def random_multiset(rng: random.Random, alphabet: int, size: int) -> Multiset:
    return Multiset(Counter(rng.randrange(alphabet) for _ in range(size)))


def run_bench(cb: PrimeCodebook | None = None, *, seed: int = 0, batch: int = 200,
              sieve_count: int = 100_000, bit_cap: int = DEFAULT_BIT_CAP) -> dict[str, object]:
    """Return stable-keyed results: ``*_per_sec`` rates plus ``codes_digest``."""
    if cb is None:
        cb = PrimeCodebook()
    for i in range(ALPHABET):
        cb.intern(f"s{i}")
    ids = [cb.id_of(f"s{i}") for i in range(ALPHABET)]
    rng = random.Random(seed)
    results: dict[str, object] = {}

    results["sieve_primes_per_sec"] = _rate(lambda: PrimeSupply().ensure_count(sieve_count), sieve_count)

    digest = hashlib.sha256()
    batches = {}
    for size in ENCODE_SIZES:
        batch_ms = [
            Multiset({ids[x]: k for x, k in random_multiset(rng, ALPHABET, size).items()})
            for _ in range(batch)
        ]
        batches[size] = batch_ms
        codes = [encode_exact(cb, X, bit_cap=bit_cap) for X in batch_ms]
        for c in codes:
            digest.update(c.hex().encode() + b"\n")
        results[f"encode_per_sec_size_{size}"] = _rate(
            lambda: [encode_exact(cb, X, bit_cap=bit_cap) for X in batch_ms], batch
        )
        results[f"decode_per_sec_size_{size}"] = _rate(
            lambda: [decode_exact(cb, c) for c in codes], batch
        )
    for p in PRECISIONS:
        results[f"aggregate_per_sec_p{p}"] = _rate(
            lambda: [aggregate(cb, X, p) for X in batches[100]], batch
        )
    results["codes_digest"] = digest.hexdigest()
    return results
