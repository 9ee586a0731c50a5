"""Log-sum codes at a chosen binary precision, with a sound error radius.

``aggregate`` returns sum(m(x) * ln(beta(x))) rounded at ``precision_bits``,
together with a worst-case bound on its distance from the true real. Every
MPFR operation is correctly rounded to nearest, so each one contributes at
most half an ulp of its result; the bounds simply add. Radii are carried at
64 bits, rounded upward.

Equality decisions made on these values are three-way (see
:class:`Verdict`); anything uncertain should be settled with the exact
product code.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import ROUND_CEILING, Context, Decimal
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .codebook import PrimeCodebook
from .errors import PrecisionEscalationError
from .multiset import ElementId, Multiset, enumerate_multisets, multiset_count

DEFAULT_PRECISION = 53
MAX_PRECISION = 4096
MIN_PRECISION = 24

_RADIUS_CTX = gmpy2.context(precision=64, round=gmpy2.RoundUp)
ZERO_RADIUS = mpfr(0)


def working_context(precision_bits: int) -> gmpy2.context:
    if precision_bits < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {precision_bits}")
    return gmpy2.context(precision=precision_bits, round=gmpy2.RoundToNearest)


def exact_mpfr(n: int) -> mpfr:
    """Convert an integer to mpfr without rounding."""
    return mpfr(n, max(n.bit_length(), 1))


def half_ulp(v: mpfr, precision_bits: int) -> mpfr:
    """Half an ulp of ``v`` at ``precision_bits``: the round-to-nearest error bound."""
    if v == 0:
        return ZERO_RADIUS
    # v = m * 2**e with 0.5 <= |m| < 1, so ulp(v) = 2**(e - p)
    return gmpy2.mul_2exp(mpfr(1), gmpy2.get_exp(v) - precision_bits - 1)


def radius_add(*terms: mpfr) -> mpfr:
    total = ZERO_RADIUS
    for t in terms:
        total = _RADIUS_CTX.add(total, t)
    return total


def radius_mul(a, b) -> mpfr:
    return _RADIUS_CTX.mul(abs(a), abs(b))


@dataclass(frozen=True)
class RealCode:
    """A real value with ``|value - true| <= error_radius``."""

    value: mpfr
    error_radius: mpfr
    precision_bits: int

    def interval(self) -> tuple[Fraction, Fraction]:
        v = Fraction(*self.value.as_integer_ratio())
        r = Fraction(*self.error_radius.as_integer_ratio())
        return v - r, v + r

    def contains(self, x: Fraction) -> bool:
        lo, hi = self.interval()
        return lo <= x <= hi

    def __str__(self) -> str:
        return f"{format_value(self)} ± {format_radius(self.error_radius)}"


def _digits_for(precision_bits: int) -> int:
    # enough significant decimal digits to pin the binary value
    return int(precision_bits * 0.30103) + 2


def format_value(r: RealCode) -> str:
    return format(r.value, f".{_digits_for(r.precision_bits)}g")


def format_radius(radius: mpfr) -> str:
    """Short decimal form, rounded upward so the printed bound stays valid."""
    if radius == 0:
        return "0"
    num, den = radius.as_integer_ratio()
    ctx = Context(prec=3, rounding=ROUND_CEILING)
    return format(ctx.divide(Decimal(int(num)), Decimal(int(den))), ".2e")


def f_log(cb: PrimeCodebook, x: ElementId, precision_bits: int = DEFAULT_PRECISION) -> RealCode:
    """ln(beta(x)), correctly rounded."""
    ctx = working_context(precision_bits)
    value = ctx.log(exact_mpfr(cb.beta(x)))
    return RealCode(value, half_ulp(value, precision_bits), precision_bits)


def aggregate(cb: PrimeCodebook, X: Multiset, precision_bits: int = DEFAULT_PRECISION) -> RealCode:
    ctx = working_context(precision_bits)
    total = mpfr(0)
    radius = ZERO_RADIUS
    for x, k in X.sorted_items():
        log_p = ctx.log(exact_mpfr(cb.beta(x)))
        term = ctx.mul(exact_mpfr(k), log_p)
        total = ctx.add(total, term)
        radius = radius_add(
            radius,
            radius_mul(k, half_ulp(log_p, precision_bits)),
            half_ulp(term, precision_bits),
            half_ulp(total, precision_bits),
        )
    return RealCode(total, radius, precision_bits)


class Verdict(str, enum.Enum):
    DISTINCT = "distinct"
    EQUAL_UNCERTAIN = "equal-uncertain"
    IDENTICAL = "identical-representation"


def certified_distinct(r1: RealCode, r2: RealCode) -> Verdict:
    """Compare two radius-carrying reals without rounding the comparison itself."""
    v1 = Fraction(*r1.value.as_integer_ratio())
    v2 = Fraction(*r2.value.as_integer_ratio())
    slack = Fraction(*r1.error_radius.as_integer_ratio()) + Fraction(*r2.error_radius.as_integer_ratio())
    if abs(v1 - v2) > slack:
        return Verdict.DISTINCT
    if v1 == v2 and slack == 0:
        return Verdict.IDENTICAL
    return Verdict.EQUAL_UNCERTAIN


@dataclass(frozen=True)
class GapResult:
    gap: RealCode
    witness: tuple[Multiset, Multiset]
    precision_bits: int


def _difference(hi: RealCode, lo: RealCode, precision_bits: int) -> RealCode:
    ctx = working_context(precision_bits)
    d = ctx.sub(hi.value, lo.value)
    radius = radius_add(hi.error_radius, lo.error_radius, half_ulp(d, precision_bits))
    return RealCode(d, radius, precision_bits)


def min_gap(
    cb: PrimeCodebook,
    alphabet_size: int,
    max_size: int,
    precision_bits: int = DEFAULT_PRECISION,
    *,
    max_precision: int = MAX_PRECISION,
) -> GapResult:
    """Smallest |h(X1) - h(X2)| over distinct multisets of the enumeration.

    Codes are sorted by value. When every neighbouring pair is certified
    distinct, the error intervals are disjoint and ordered, so the true
    order matches the computed one and the minimum gap is between
    neighbours. Otherwise precision doubles, up to ``max_precision``.
    """
    if multiset_count(alphabet_size, max_size) < 2:
        raise ValueError("need at least two multisets to define a gap")
    multisets = list(enumerate_multisets(alphabet_size, max_size))
    p = precision_bits
    while True:
        codes = sorted(
            ((aggregate(cb, X, p), X) for X in multisets),
            key=lambda pair: pair[0].value,
        )
        neighbours = list(zip(codes, codes[1:]))
        if all(certified_distinct(a, b) is Verdict.DISTINCT for (a, _), (b, _) in neighbours):
            best = None
            for (a, Xa), (b, Xb) in neighbours:
                d = _difference(b, a, p)
                if best is None or d.value < best[0].value:
                    best = (d, (Xa, Xb))
            assert best is not None
            return GapResult(best[0], best[1], p)
        if p >= max_precision:
            raise PrecisionEscalationError(
                f"could not certify all gaps for n={alphabet_size}, s={max_size} "
                f"at {p} bits"
            )
        p = min(p * 2, max_precision)
