"""Exact multiset codes: the product of element primes raised to multiplicities.

Distinct multisets get distinct codes by unique factorization, and the code
of a multiset sum is the product of the codes, so codes can be merged
without revisiting the elements.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from typing import Generic, TypeVar

from .codebook import PrimeCodebook
from .errors import (
    DuplicateMultisetError,
    InvariantViolation,
    ParseError,
    ResourceLimitError,
    UnknownCodeError,
    UnknownFactorError,
)
from .multiset import Multiset

DEFAULT_BIT_CAP = 1_000_000

L = TypeVar("L")


@dataclass(frozen=True, order=True)
class ExactCode:
    value: int

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"exact codes are >= 1, got {self.value}")

    def hex(self) -> str:
        """Lowercase hex, no prefix, no leading zeros."""
        return format(self.value, "x")

    @classmethod
    def from_hex(cls, text: str) -> ExactCode:
        text = text.strip()
        if not text or any(ch not in "0123456789abcdefABCDEF" for ch in text):
            raise ParseError(f"not a hexadecimal code: {text!r}")
        value = int(text, 16)
        if value < 1:
            raise ParseError("code must be >= 1")
        return cls(value)

    def bit_length(self) -> int:
        return self.value.bit_length()

    def __str__(self) -> str:
        return self.hex()


EMPTY_CODE = ExactCode(1)


def _product_tree(factors: list[int]) -> int:
    if not factors:
        return 1
    while len(factors) > 1:
        paired = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) % 2:
            paired.append(factors[-1])
        factors = paired
    return factors[0]


def _check_cap(bits: int, cap: int) -> None:
    if bits > cap:
        raise ResourceLimitError(f"code needs {bits} bits, above the cap of {cap}")


def encode_exact(cb: PrimeCodebook, X: Multiset, *, bit_cap: int = DEFAULT_BIT_CAP) -> ExactCode:
    if not X:
        return EMPTY_CODE
    items = X.sorted_items()
    primes = [cb.beta(x) for x, _ in items]
    # bit_length(prod p^m) lies in [sum m*(bl(p)-1) + 1, sum m*bl(p)]
    lower = sum(k * (p.bit_length() - 1) for p, (_, k) in zip(primes, items)) + 1
    _check_cap(lower, bit_cap)
    value = _product_tree([p**k for p, (_, k) in zip(primes, items)])
    _check_cap(value.bit_length(), bit_cap)
    return ExactCode(value)


def _valuation(n: int, p: int) -> tuple[int, int]:
    """Return ``(v, n // p**v)`` with ``p**v`` the largest power dividing ``n``."""
    if n % p:
        return 0, n
    # grow p^(2^i) while it divides, then walk back down
    powers = [p]
    while n % (powers[-1] ** 2) == 0:
        powers.append(powers[-1] ** 2)
    v = 0
    for i in range(len(powers) - 1, -1, -1):
        if n % powers[i] == 0:
            n //= powers[i]
            v += 1 << i
    while n % p == 0:
        n //= p
        v += 1
    return v, n


def decode_exact(cb: PrimeCodebook, c: ExactCode) -> Multiset:
    """Recover the multiset whose code is ``c``.

    Trial division by codebook primes in increasing order. Stops once the
    residual is 1 or smaller than the next prime squared (so it is prime).
    """
    residual = c.value
    counts: dict[int, int] = {}
    n = len(cb)
    for idx in range(n):
        if residual == 1:
            break
        p = cb.beta(idx)
        if residual < p * p:
            # residual is itself prime
            try:
                j = cb.beta_inverse(residual)
            except LookupError:
                raise UnknownFactorError(residual) from None
            counts[j] = counts.get(j, 0) + 1
            residual = 1
            break
        v, residual = _valuation(residual, p)
        if v:
            counts[idx] = v
    if residual != 1:
        raise UnknownFactorError(residual)
    return Multiset(counts)


def multiply_codes(c1: ExactCode, c2: ExactCode, *, bit_cap: int = DEFAULT_BIT_CAP) -> ExactCode:
    _check_cap(c1.bit_length() + c2.bit_length() - 1, bit_cap)
    value = c1.value * c2.value
    _check_cap(value.bit_length(), bit_cap)
    return ExactCode(value)


class PhiTable(Generic[L]):
    """Lookup from exact codes to labels, so any multiset function factors through the code."""

    def __init__(self, table: dict[int, L]):
        self._table = table

    def __len__(self) -> int:
        return len(self._table)

    def __call__(self, c: ExactCode) -> L:
        try:
            return self._table[c.value]
        except KeyError:
            raise UnknownCodeError(f"no label for code {c.hex()}") from None


def compose_phi(cb: PrimeCodebook, pairs: Iterable[tuple[Multiset, L]], *,
                bit_cap: int = DEFAULT_BIT_CAP) -> PhiTable[L]:
    seen: set[Multiset] = set()
    table: dict[int, L] = {}
    owner: dict[int, Multiset] = {}
    for X, label in pairs:
        if X in seen:
            raise DuplicateMultisetError(f"multiset {X!r} listed more than once")
        seen.add(X)
        code = encode_exact(cb, X, bit_cap=bit_cap).value
        if code in table:
            raise InvariantViolation(
                f"distinct multisets {owner[code]!r} and {X!r} share code {code:x}"
            )
        table[code] = label
        owner[code] = X
    return PhiTable(table)


def apply_phi(phi: PhiTable[L], c: ExactCode) -> L:
    return phi(c)


__all__ = [
    "DEFAULT_BIT_CAP",
    "EMPTY_CODE",
    "ExactCode",
    "PhiTable",
    "apply_phi",
    "compose_phi",
    "decode_exact",
    "encode_exact",
    "multiply_codes",
]
