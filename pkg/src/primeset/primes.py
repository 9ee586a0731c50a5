"""Lazily grown prime table backed by a segmented sieve of Eratosthenes.

The sieve bound doubles whenever a caller asks for a prime past the end of
the table, so ``nth_prime`` is amortized cheap for an open-ended stream of
requests. A hard upper bound (``PRIMESET_SIEVE_LIMIT`` in the environment,
default 2**32) turns runaway growth into :class:`ResourceLimitError`.
"""

from __future__ import annotations

import os
import threading
from array import array
from bisect import bisect_left
from math import isqrt

from .errors import ResourceLimitError

DEFAULT_SIEVE_LIMIT = 2**32
SEGMENT_SIZE = 1 << 18
_INITIAL_BOUND = 1 << 10

# Deterministic Miller-Rabin witnesses, valid for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981


def sieve_limit_from_env() -> int:
    raw = os.environ.get("PRIMESET_SIEVE_LIMIT")
    if not raw:
        return DEFAULT_SIEVE_LIMIT
    return int(raw)


def is_prime(n: int) -> bool:
    """Deterministic primality test for ``n < 3.3e24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= MR_DETERMINISTIC_BOUND:
        raise ResourceLimitError(f"{n} is beyond the deterministic primality range")
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeSupply:
    """Growable, strictly increasing table of all primes below ``bound``."""

    def __init__(self, limit: int | None = None):
        self.limit = sieve_limit_from_env() if limit is None else limit
        self._primes = array("Q")
        self._bound = 2  # every prime < _bound is in _primes
        self._lock = threading.Lock()

    @property
    def bound(self) -> int:
        return self._bound

    def __len__(self) -> int:
        return len(self._primes)

    def _sieve_segment(self, lo: int, hi: int) -> None:
        # all base primes <= isqrt(hi - 1) are already in the table
        seg = bytearray(b"\x01") * (hi - lo)
        if lo <= 1:
            seg[: 2 - lo] = b"\x00" * (2 - lo)
        root = isqrt(hi - 1)
        for p in self._primes:
            if p > root:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            if start >= hi:
                continue
            seg[start - lo :: p] = bytes(len(range(start - lo, hi - lo, p)))
        self._primes.extend(lo + i for i, flag in enumerate(seg) if flag)

    def _extend_to(self, new_bound: int) -> None:
        if new_bound > self.limit:
            raise ResourceLimitError(
                f"sieve would need to reach {new_bound}, above the limit {self.limit}"
            )
        while self._bound < new_bound:
            # keep each segment's base primes inside the table
            hi = min(new_bound, self._bound + SEGMENT_SIZE, max(self._bound**2, 4))
            self._sieve_segment(self._bound, hi)
            self._bound = hi

    def ensure_count(self, count: int) -> None:
        """Grow until at least ``count`` primes are known."""
        with self._lock:
            while len(self._primes) < count:
                target = max(_INITIAL_BOUND, self._bound * 2)
                if target > self.limit:
                    if self._bound >= self.limit:
                        raise ResourceLimitError(
                            f"only {len(self._primes)} primes below the sieve limit {self.limit}"
                        )
                    target = self.limit
                self._extend_to(target)

    def ensure_bound(self, n: int) -> None:
        """Grow until every prime < ``n`` is known."""
        with self._lock:
            if n > self._bound:
                target = max(n, min(self._bound * 2, self.limit))
                self._extend_to(target)

    def nth_prime(self, i: int) -> int:
        """The (i+1)-th prime: ``nth_prime(0) == 2``."""
        if i < 0:
            raise ValueError("prime index must be non-negative")
        if i >= len(self._primes):
            self.ensure_count(i + 1)
        return self._primes[i]

    def index_of(self, p: int) -> int | None:
        """Index of ``p`` in the table, or None if ``p`` is not a known prime."""
        i = bisect_left(self._primes, p)
        if i < len(self._primes) and self._primes[i] == p:
            return i
        return None

    def primes(self, count: int) -> list[int]:
        self.ensure_count(count)
        return list(self._primes[:count])


_default_supply = PrimeSupply()


def default_supply() -> PrimeSupply:
    return _default_supply


def nth_prime(i: int) -> int:
    return _default_supply.nth_prime(i)
