"""Normal forms for the group generated by the four interval isometries.

Every word in the generators
    Id : x -> x          T   : x -> x + 2*alpha
    R2 : x -> 2 - x      R2a : x -> 2*alpha - x
collapses to a map x -> a*x + 2*alpha*b + 2*c with a in {+1, -1} and
integer b, c, and distinct triples are distinct maps.  All group
operations below work purely on (a, b, c).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import AlgebraicPoint
from .errors import BallTooLargeError

MAX_BALL_RADIUS = 10


class Generator(Enum):
    ID = "Id"
    T = "T"
    R2 = "R2"
    R2A = "R2a"


@dataclass(frozen=True, order=True)
class GroupElement:
    """The isometry x -> a*x + 2*alpha*b + 2*c in normal form."""

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if self.a not in (1, -1):
            raise ValueError(f"a must be +1 or -1, got {self.a}")


IDENTITY = GroupElement(1, 0, 0)

GENERATOR_ELEMENTS: dict[Generator, GroupElement] = {
    Generator.ID: IDENTITY,
    Generator.T: GroupElement(1, 1, 0),
    Generator.R2: GroupElement(-1, 0, 1),
    Generator.R2A: GroupElement(-1, 1, 0),
}


def element_of(gen: Generator) -> GroupElement:
    return GENERATOR_ELEMENTS[gen]


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """g after h: apply(compose(g, h), x) == apply(g, apply(h, x))."""
    return GroupElement(g.a * h.a, g.a * h.b + g.b, g.a * h.c + g.c)


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.a, -g.a * g.b, -g.a * g.c)


def apply(g: GroupElement, x: AlgebraicPoint) -> AlgebraicPoint:
    """Image of u + v*alpha: (a*u + 2c) + (a*v + 2b)*alpha."""
    return AlgebraicPoint(g.a * x.u + 2 * g.c, g.a * x.v + 2 * g.b)


def word_to_element(word: Sequence[Generator]) -> GroupElement:
    """Collapse a word, first generator applied first.

    apply(word_to_element(w), x) equals applying w's generators to x in
    sequence, so word_to_element([T, R2]) is compose(R2's map, T's map).
    """
    acc = IDENTITY
    for gen in word:
        acc = compose(element_of(gen), acc)
    return acc


def enumerate_ball(radius: int, max_radius: int = MAX_BALL_RADIUS) -> set[GroupElement]:
    """All elements expressible as words of length <= radius.

    Breadth-first over words with normal-form dedup, so membership is
    faithful to word length over the four generators.  Every returned
    element satisfies |b| <= radius and |c| <= radius.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    if radius > max_radius:
        raise BallTooLargeError(f"radius {radius} exceeds maximum {max_radius}")
    seen: set[GroupElement] = {IDENTITY}
    frontier: set[GroupElement] = {IDENTITY}
    for _ in range(radius):
        nxt: set[GroupElement] = set()
        for g in frontier:
            for gen_el in GENERATOR_ELEMENTS.values():
                h = compose(gen_el, g)
                if h not in seen:
                    seen.add(h)
                    nxt.add(h)
        frontier = nxt
    return seen


def is_member(a: int, u: Fraction, v: Fraction) -> bool:
    """Whether x -> a*x + u + v*alpha belongs to the generated group.

    True iff u and v are both even integers; the element is then
    (a, v/2, u/2).  In particular translation by alpha itself (u=0, v=1)
    is excluded.
    """
    if a not in (1, -1):
        raise ValueError(f"a must be +1 or -1, got {a}")
    u = Fraction(u)
    v = Fraction(v)
    return (
        u.denominator == 1
        and v.denominator == 1
        and u.numerator % 2 == 0
        and v.numerator % 2 == 0
    )


def normal_form_from_images(
    x0: AlgebraicPoint, fx0: AlgebraicPoint, x1: AlgebraicPoint, fx1: AlgebraicPoint
) -> GroupElement:
    """Recover (a, b, c) from the images of two distinct points.

    Used by tests to confirm normal-form uniqueness against evaluation.
    """
    du = fx1.u - fx0.u
    dv = fx1.v - fx0.v
    span_u = x1.u - x0.u
    span_v = x1.v - x0.v
    if (span_u, span_v) == (0, 0):
        raise ValueError("sample points must be distinct")
    # a is the ratio of differences; both coordinates must agree.
    if span_u != 0:
        a = du / span_u
    else:
        a = dv / span_v
    if du != a * span_u or dv != a * span_v or a not in (1, -1):
        raise ValueError("images are not consistent with any group element")
    shift_u = fx0.u - a * x0.u
    shift_v = fx0.v - a * x0.v
    if shift_u.denominator != 1 or shift_v.denominator != 1:
        raise ValueError("shift is not integral")
    if shift_u.numerator % 2 or shift_v.numerator % 2:
        raise ValueError("shift is not even")
    return GroupElement(int(a), shift_v.numerator // 2, shift_u.numerator // 2)


def sort_elements(elements: Iterable[GroupElement]) -> list[GroupElement]:
    """Deterministic (a, b, c) ordering for reports."""
    return sorted(elements)
