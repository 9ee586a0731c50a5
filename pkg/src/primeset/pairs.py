"""Codes for (center, multiset) pairs: eps * ln(beta(c)) + sum ln(beta(x)).

The weighted sum is injective as long as eps is not log_q(p) for any
positive rationals p, q with q != 1. That excluded set contains every
rational, which :func:`rational_eps_z_witness` exhibits directly, and
:func:`construct_integer_eps_collision` shows integer eps really do collide.
The default eps = sqrt(2) is safe: q**sqrt(2) is transcendental for every
rational q other than 0 and 1 (Gelfond-Schneider), so it is never a
positive rational p.
"""

from __future__ import annotations

import enum
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from .codebook import PrimeCodebook
from .errors import InvariantViolation, MixedEpsilonError, ParseError, PrecisionEscalationError
from .exact import DEFAULT_BIT_CAP, ExactCode, encode_exact
from .multiset import ElementId, Multiset
from .real import (
    DEFAULT_PRECISION,
    RealCode,
    Verdict,
    aggregate,
    certified_distinct,
    exact_mpfr,
    half_ulp,
    radius_add,
    radius_mul,
    working_context,
)


class EpsKind(str, enum.Enum):
    SQRT2 = "sqrt2"
    RATIONAL = "rational"
    REAL = "real"


class Safety(str, enum.Enum):
    SAFE = "safe"          # proven outside the excluded set
    UNSAFE = "unsafe"      # inside the excluded set (every rational)
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Epsilon:
    kind: EpsKind
    numerator: int = 0
    denominator: int = 1
    name: str = ""
    # REAL kind only: correctly rounded evaluation at a given precision
    evaluator: Callable[[int], mpfr] | None = field(default=None, compare=False)
    safety_argument: str | None = field(default=None, compare=False)

    @classmethod
    def sqrt2(cls) -> Epsilon:
        return cls(EpsKind.SQRT2, name="sqrt2")

    @classmethod
    def rational(cls, a: int | Fraction, b: int = 1) -> Epsilon:
        q = Fraction(a, b)
        return cls(EpsKind.RATIONAL, q.numerator, q.denominator, name=str(q))

    @classmethod
    def real(cls, name: str, evaluator: Callable[[int], mpfr], *,
             safety_argument: str | None = None) -> Epsilon:
        """A user-supplied real. ``evaluator(p)`` must be correctly rounded at p bits.

        Pass ``safety_argument`` only with a written reason the value avoids
        the excluded set; it is then reported as safe.
        """
        return cls(EpsKind.REAL, name=name, evaluator=evaluator, safety_argument=safety_argument)

    @property
    def fraction(self) -> Fraction:
        if self.kind is not EpsKind.RATIONAL:
            raise TypeError(f"epsilon {self.name} is not rational")
        return Fraction(self.numerator, self.denominator)

    def safety(self) -> Safety:
        if self.kind is EpsKind.SQRT2:
            return Safety.SAFE
        if self.kind is EpsKind.RATIONAL:
            return Safety.UNSAFE
        return Safety.SAFE if self.safety_argument else Safety.UNKNOWN

    def evaluate(self, precision_bits: int) -> RealCode:
        ctx = working_context(precision_bits)
        if self.kind is EpsKind.SQRT2:
            v = ctx.sqrt(mpfr(2))
        elif self.kind is EpsKind.RATIONAL:
            v = ctx.div(exact_mpfr(self.numerator), exact_mpfr(self.denominator))
        else:
            assert self.evaluator is not None
            v = ctx.plus(self.evaluator(precision_bits))
        return RealCode(v, half_ulp(v, precision_bits), precision_bits)

    def __str__(self) -> str:
        return self.name


NAMED_REALS: dict[str, Callable[[int], mpfr]] = {
    "pi": lambda p: gmpy2.const_pi(p),
    "e": lambda p: gmpy2.context(precision=p).exp(1),
}


def parse_epsilon(text: str) -> Epsilon:
    """``sqrt2``, a rational (``3/2``, ``-1``, ``0.25``), or ``pi`` / ``e``."""
    text = text.strip()
    if text.lower() in ("sqrt2", "sqrt(2)", "√2"):
        return Epsilon.sqrt2()
    if text in NAMED_REALS:
        return Epsilon.real(text, NAMED_REALS[text])
    try:
        return Epsilon.rational(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot read epsilon {text!r}") from None


@dataclass(frozen=True)
class PairCode:
    center_prime: int
    multiset_code: ExactCode
    real_value: RealCode
    epsilon: Epsilon

    @property
    def symbolic(self) -> tuple[int, int]:
        return self.center_prime, self.multiset_code.value


def pair_real(cb: PrimeCodebook, eps: Epsilon, c: ElementId, X: Multiset,
              precision_bits: int = DEFAULT_PRECISION) -> RealCode:
    ctx = working_context(precision_bits)
    e = eps.evaluate(precision_bits)
    log_c = ctx.log(exact_mpfr(cb.beta(c)))
    r_log = half_ulp(log_c, precision_bits)
    term = ctx.mul(e.value, log_c)
    # |e~ L~ - e L| <= |e~| rL + |L~| re + re rL, plus rounding of the product
    term_radius = radius_add(
        radius_mul(e.value, r_log),
        radius_mul(log_c, e.error_radius),
        radius_mul(e.error_radius, r_log),
        half_ulp(term, precision_bits),
    )
    agg = aggregate(cb, X, precision_bits)
    total = ctx.add(term, agg.value)
    radius = radius_add(term_radius, agg.error_radius, half_ulp(total, precision_bits))
    return RealCode(total, radius, precision_bits)


def encode_pair(cb: PrimeCodebook, eps: Epsilon, c: ElementId, X: Multiset,
                precision_bits: int = DEFAULT_PRECISION, *,
                bit_cap: int = DEFAULT_BIT_CAP) -> PairCode:
    return PairCode(
        center_prime=cb.beta(c),
        multiset_code=encode_exact(cb, X, bit_cap=bit_cap),
        real_value=pair_real(cb, eps, c, X, precision_bits),
        epsilon=eps,
    )


def certified_pair_distinct(a: PairCode, b: PairCode) -> Verdict:
    """Real comparison first; if inconclusive, the symbolic parts decide."""
    if a.epsilon != b.epsilon:
        raise MixedEpsilonError(f"cannot compare codes built with eps={a.epsilon} and eps={b.epsilon}")
    verdict = certified_distinct(a.real_value, b.real_value)
    if verdict is Verdict.DISTINCT:
        return verdict
    return Verdict.IDENTICAL if a.symbolic == b.symbolic else Verdict.DISTINCT


def certify_real_injectivity(
    cb: PrimeCodebook,
    eps: Epsilon,
    items: Sequence[tuple[ElementId, Multiset]],
    precision_bits: int = DEFAULT_PRECISION,
    *,
    max_precision: int = 256,
) -> int:
    """Smallest tried precision at which all real pair values are certified apart.

    Uses the real values alone, never the symbolic fallback. Items must be
    distinct. Precision doubles until it would pass ``max_precision``.
    """
    p = precision_bits
    while True:
        reals = sorted((pair_real(cb, eps, c, X, p) for c, X in items), key=lambda r: r.value)
        if all(certified_distinct(r, s) is Verdict.DISTINCT for r, s in zip(reals, reals[1:])):
            return p
        if p >= max_precision:
            raise PrecisionEscalationError(f"pair values not separated at {p} bits")
        p = min(p * 2, max_precision)


# -- the excluded set ----------------------------------------------------------

@dataclass(frozen=True)
class ZWitness:
    """Positive rationals p, q (q != 1) with log_q(p) = eps."""

    eps: Fraction
    p: Fraction
    q: Fraction

    def verify(self) -> bool:
        a, b = self.eps.numerator, self.eps.denominator
        if self.p <= 0 or self.q <= 0 or self.q == 1:
            return False
        # log_q(p) = a/b  <=>  p**b == q**a
        return self.p**b == self.q**a

    def identity(self) -> str:
        a, b = self.eps.numerator, self.eps.denominator
        return f"({self.p})^{b} = ({self.q})^{a} = {self.p**b}"


def rational_eps_z_witness(a: int | Fraction, b: int = 1) -> ZWitness:
    eps = Fraction(a, b)
    num, den = eps.numerator, eps.denominator
    w = ZWitness(eps, Fraction(2) ** num, Fraction(2) ** den)
    if not w.verify():
        raise InvariantViolation(f"witness for {eps} failed to verify")
    return w


@dataclass(frozen=True)
class Collision:
    k: int
    c1: ElementId
    X1: Multiset
    c2: ElementId
    X2: Multiset
    lhs: Fraction  # beta(c1)**k * code(X1)
    rhs: Fraction  # beta(c2)**k * code(X2)


def construct_integer_eps_collision(cb: PrimeCodebook, k: int) -> Collision:
    """Two distinct (center, multiset) pairs with equal value at eps = k.

    For k > 0: (c1, {c2: k}) and (c2, {c1: k}). For k < 0 the multisets
    swap roles: (c1, {c1: |k|}) and (c2, {c2: |k|}), both of value 0.
    """
    if k == 0:
        raise ValueError("k must be nonzero; eps = 0 ignores the center entirely")
    if len(cb) < 2:
        raise ValueError("need at least two assigned ids")
    c1, c2 = 0, 1
    m = abs(k)
    if k > 0:
        X1, X2 = Multiset({c2: m}), Multiset({c1: m})
    else:
        X1, X2 = Multiset({c1: m}), Multiset({c2: m})
    lhs = Fraction(cb.beta(c1)) ** k * encode_exact(cb, X1).value
    rhs = Fraction(cb.beta(c2)) ** k * encode_exact(cb, X2).value
    if lhs != rhs:
        raise InvariantViolation(f"collision construction failed for k={k}")
    return Collision(k, c1, X1, c2, X2, lhs, rhs)

