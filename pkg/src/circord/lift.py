"""The central extension of a circularly ordered group by Z.

Elements are pairs (g, n) multiplied with the {0,1}-valued cocycle f_c that
counts wrap-around; the cone {n >= 0} minus the identity orders the lift, and
the integer part of an element is simply its level.
"""

from __future__ import annotations

import random
from typing import NamedTuple

from .groups import Element, Group, is_identity
from .orders import CircularOrder, LeftOrder


class LiftElement(NamedTuple):
    base: Element
    level: int


def cocycle_f(c: CircularOrder, g: Element, h: Element) -> int:
    """The wrap-around cocycle: 0 or 1."""
    key = (g, h)
    cache = c._f_cache
    v = cache.get(key)
    if v is not None:
        return v
    G = c.group
    if is_identity(g) or is_identity(h):
        v = 0
    else:
        gh = G.mul(g, h)
        if is_identity(gh):
            v = 1
        else:
            v = 0 if c(G.identity, g, gh) == 1 else 1
    if len(cache) < c.F_CACHE_LIMIT:
        # same key always maps to the same value, so racing writers agree
        cache[key] = v
    return v


def lift_mul(c: CircularOrder, x: LiftElement, y: LiftElement) -> LiftElement:
    return LiftElement(c.group.mul(x.base, y.base), x.level + y.level + cocycle_f(c, x.base, y.base))


def lift_inv(c: CircularOrder, x: LiftElement) -> LiftElement:
    gi = c.group.inv(x.base)
    return LiftElement(gi, -x.level - cocycle_f(c, x.base, gi))


def lift_positive(x: LiftElement) -> bool:
    return x.level >= 0 and not (x.level == 0 and is_identity(x.base))


def floor(x: LiftElement) -> int:
    """[x]_c: the unique k with z^k <= x < z^(k+1); read directly off the level."""
    return x.level


def z_power(c: CircularOrder, k: int) -> LiftElement:
    return LiftElement(c.group.identity, k)


def power_floor(c: CircularOrder, g: Element, n: int) -> int:
    """Level of (g, 0)^n, i.e. the sum of f_c(g^i, g) for i = 1..n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    G = c.group
    total = 0
    gi = g
    for _ in range(n - 1):
        total += cocycle_f(c, gi, g)
        gi = G.mul(gi, g)
    return total


def lift_power(c: CircularOrder, x: LiftElement, n: int) -> LiftElement:
    out = z_power(c, 0)
    for _ in range(n):
        out = lift_mul(c, out, x)
    return out


class LiftGroup(Group):
    """The lift as a backend in its own right, so orderings can live on it."""

    kind = "lift"

    def __init__(self, c: CircularOrder):
        self.c = c
        self.base = c.group

    def __eq__(self, other):
        return isinstance(other, LiftGroup) and other.c is self.c

    def __hash__(self):
        return id(self.c)

    @property
    def identity(self):
        return LiftElement(self.base.identity, 0)

    def mul(self, x, y):
        return lift_mul(self.c, x, y)

    def inv(self, x):
        return lift_inv(self.c, x)

    def is_element(self, x):
        return (isinstance(x, tuple) and len(x) == 2 and isinstance(x[1], int)
                and self.base.is_element(x[0]))

    def check(self, x):
        if isinstance(x, tuple) and len(x) == 2 and not isinstance(x, LiftElement):
            x = LiftElement(*x)
        return super().check(x)

    def ball(self, r):
        return [LiftElement(g, n) for g in self.base.ball(r) for n in range(-r, r + 1)]

    def random_element(self, rng: random.Random, r: int):
        return LiftElement(self.base.random_element(rng, r), rng.randint(-r, r))

    def order(self, x):
        return 1 if is_identity(x) else None

    def to_json(self):
        return {"type": "lift", "of": self.c.descriptor}

    def element_to_list(self, x):
        return self.base.element_to_list(x.base) + [x.level]

    def element_from_list(self, values):
        values = list(values)
        w = self.base.flat_length
        if len(values) != w + 1:
            from .groups import DescriptorMismatch
            raise DescriptorMismatch(f"lift element needs {w + 1} integers, got {values}")
        return LiftElement(self.base.element_from_list(values[:w]), int(values[w]))

    @property
    def flat_length(self):
        return self.base.flat_length + 1


def lift_cone(c: CircularOrder) -> LeftOrder:
    """The canonical left order of the lift: level >= 0, identity excluded."""
    return LeftOrder(LiftGroup(c), lift_positive, {"kind": "lift_cone", "of": c.descriptor})


class EtaFunction:
    """eta(g) = 0 for the identity and for positive g, 1 otherwise.

    For a secret ordering c_<, f_c(g, h) = eta(g) - eta(gh) + eta(h); on a convex
    kernel of a lexicographic ordering the same identity holds for kernel elements.
    """

    def __init__(self, cone: LeftOrder):
        self.cone = cone

    def __call__(self, g: Element) -> int:
        if is_identity(g):
            return 0
        return 0 if self.cone.positive(g) else 1

    def section(self, g: Element) -> LiftElement:
        """psi(g) = (g, -eta(g)), a homomorphic section with bounded image."""
        return LiftElement(g, -self(g))


def eta_of_secret(L: LeftOrder) -> EtaFunction:
    return EtaFunction(L)
