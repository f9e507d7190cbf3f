"""Exact arithmetic for numbers of the form u + v*alpha.

alpha is a fixed quadratic irrational (p + q*sqrt(d)) / r in (0, 1).
Every quantity the rest of the package compares or hashes is kept as a
pair of rationals (u, v); no decision anywhere is made in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Union

from .errors import EmptyIntervalError, OutOfRangeError, RationalAlphaError

RationalLike = Union[int, str, Fraction]

LESS = -1
EQUAL = 0
GREATER = 1


@dataclass(frozen=True)
class AlphaSpec:
    """alpha = (p + q*sqrt(d)) / r.

    d must be a positive non-square integer and q nonzero, so that alpha
    is irrational; r must be positive.
    """

    p: int
    q: int
    d: int
    r: int


@dataclass(frozen=True)
class AlgebraicPoint:
    """Exact value u + v*alpha with rational u, v.

    Because alpha is irrational, two points are equal iff their (u, v)
    pairs are equal, so dataclass equality and hashing are sound and need
    no comparison context.
    """

    u: Fraction
    v: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    def __add__(self, other: "AlgebraicPoint") -> "AlgebraicPoint":
        return AlgebraicPoint(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "AlgebraicPoint") -> "AlgebraicPoint":
        return AlgebraicPoint(self.u - other.u, self.v - other.v)

    def __neg__(self) -> "AlgebraicPoint":
        return AlgebraicPoint(-self.u, -self.v)

    def scale(self, factor: RationalLike) -> "AlgebraicPoint":
        f = Fraction(factor)
        return AlgebraicPoint(self.u * f, self.v * f)

    def __str__(self) -> str:
        if self.v == 0:
            return str(self.u)
        if self.v == 1:
            head = "a"
        elif self.v == -1:
            head = "-a"
        else:
            head = f"{self.v}a"
        if self.u == 0:
            return head
        sign = "+" if self.v > 0 else "-"
        mag = abs(self.v)
        tail = "a" if mag == 1 else f"{mag}a"
        return f"{self.u}{sign}{tail}"


def point(u: RationalLike, v: RationalLike = 0) -> AlgebraicPoint:
    """Convenience constructor coercing ints/strings to Fractions."""
    return AlgebraicPoint(Fraction(u), Fraction(v))


ZERO = point(0)
ONE = point(1)
ALPHA = point(0, 1)


def canonical_key(x: AlgebraicPoint) -> tuple[int, int, int, int]:
    """Hashable key; equal keys iff compare(...) == EQUAL."""
    return (x.u.numerator, x.u.denominator, x.v.numerator, x.v.denominator)


def _sign_of_s_plus_t_sqrt_d(s: Fraction, t: Fraction, d: int) -> int:
    """Exact sign of s + t*sqrt(d) for rational s, t and non-square d > 0."""
    if t == 0:
        return (s > 0) - (s < 0)
    if s == 0:
        return (t > 0) - (t < 0)
    if s > 0 and t > 0:
        return 1
    if s < 0 and t < 0:
        return -1
    # Signs differ: the comparison reduces to s*s versus t*t*d, which can
    # never tie since d is not a square of a rational.
    lhs = s * s
    rhs = t * t * d
    if lhs == rhs:  # pragma: no cover - excluded by the non-square check
        raise RationalAlphaError(f"d={d} admits a rational square root")
    bigger_is_s = lhs > rhs
    if s > 0:
        return 1 if bigger_is_s else -1
    return -1 if bigger_is_s else 1


class AlphaContext:
    """Comparison context for a validated alpha.

    Use make_alpha() to construct; the constructor checks irrationality
    and the open-interval bound 0 < alpha < 1 exactly.
    """

    def __init__(self, spec: AlphaSpec):
        if spec.r <= 0:
            raise OutOfRangeError(f"r must be positive, got {spec.r}")
        if spec.d <= 0 or isqrt(spec.d) ** 2 == spec.d:
            raise RationalAlphaError(f"d must be a positive non-square, got {spec.d}")
        if spec.q == 0:
            raise RationalAlphaError("q = 0 makes alpha rational")
        self.spec = spec
        self._p_over_r = Fraction(spec.p, spec.r)
        self._q_over_r = Fraction(spec.q, spec.r)
        if self.sign(ALPHA) <= 0 or self.sign(ALPHA - ONE) >= 0:
            raise OutOfRangeError(
                f"alpha = ({spec.p}+{spec.q}*sqrt({spec.d}))/{spec.r} is not in (0, 1)"
            )

    def sign(self, x: AlgebraicPoint) -> int:
        """Exact sign of u + v*alpha, one of -1, 0, 1."""
        s = x.u + x.v * self._p_over_r
        t = x.v * self._q_over_r
        return _sign_of_s_plus_t_sqrt_d(s, t, self.spec.d)

    def compare(self, x: AlgebraicPoint, y: AlgebraicPoint) -> int:
        """LESS, EQUAL, or GREATER; total order, exact."""
        return self.sign(x - y)

    def lt(self, x: AlgebraicPoint, y: AlgebraicPoint) -> bool:
        return self.compare(x, y) == LESS

    def le(self, x: AlgebraicPoint, y: AlgebraicPoint) -> bool:
        return self.compare(x, y) != GREATER

    def in_interval(
        self,
        x: AlgebraicPoint,
        lo: AlgebraicPoint,
        hi: AlgebraicPoint,
        closed: bool = True,
    ) -> bool:
        """Exact membership of x in [lo, hi] (closed) or (lo, hi) (open)."""
        c = self.compare(lo, hi)
        if c == GREATER:
            raise EmptyIntervalError(f"interval bounds reversed: {lo} > {hi}")
        if closed:
            return self.le(lo, x) and self.le(x, hi)
        return self.lt(lo, x) and self.lt(x, hi)

    def to_float(self, x: AlgebraicPoint) -> float:
        """Approximate value, for display and sanity cross-checks only."""
        root = self.spec.d ** 0.5
        alpha = (self.spec.p + self.spec.q * root) / self.spec.r
        return float(x.u) + float(x.v) * alpha

    def __repr__(self) -> str:
        s = self.spec
        return f"AlphaContext(({s.p}+{s.q}*sqrt({s.d}))/{s.r})"


def make_alpha(spec: AlphaSpec) -> AlphaContext:
    """Validate a spec and return its comparison context."""
    return AlphaContext(spec)


# alpha = sqrt(2) - 1, the default used throughout the command line tools.
DEFAULT_ALPHA = AlphaSpec(p=-1, q=1, d=2, r=1)
