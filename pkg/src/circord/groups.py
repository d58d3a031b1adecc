"""Exact-arithmetic group backends.

Every backend stores elements as tuples of Python ints in a unique normal
form, so equality of elements is tuple equality and the identity is always
the all-zero tuple.  Nothing here touches floating point.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterable, Sequence

Element = tuple


class DescriptorMismatch(ValueError):
    """An element does not belong to the group it was handed to."""


def is_identity(x) -> bool:
    if isinstance(x, int):
        return x == 0
    return all(is_identity(v) for v in x)


class Group:
    """Base class for the concrete backends."""

    kind: str = "abstract"

    @property
    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def inv(self, x: Element) -> Element:
        raise NotImplementedError

    def is_element(self, x) -> bool:
        raise NotImplementedError

    def ball(self, r: int) -> list[Element]:
        raise NotImplementedError

    def random_element(self, rng: random.Random, r: int) -> Element:
        raise NotImplementedError

    def order(self, x: Element) -> int | None:
        """Finite order of ``x`` or None when ``x`` has infinite order."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    # -- serialization of elements as flat integer lists
    def element_to_list(self, x: Element) -> list[int]:
        return list(x)

    def element_from_list(self, values: Sequence[int]) -> Element:
        x = tuple(int(v) for v in values)
        if not self.is_element(x):
            raise DescriptorMismatch(f"{list(values)} is not a normal form of {self.to_json()}")
        return x

    @property
    def flat_length(self) -> int:
        return len(self.element_to_list(self.identity))

    # -- derived operations
    def power(self, x: Element, k: int) -> Element:
        if k < 0:
            x, k = self.inv(x), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            k >>= 1
        return result

    def conj(self, g: Element, x: Element) -> Element:
        """g x g^-1"""
        return self.mul(self.mul(g, x), self.inv(g))

    def check(self, x) -> Element:
        if not self.is_element(x):
            raise DescriptorMismatch(f"{x!r} is not a normal form of {self.to_json()}")
        return x


def _box(k: int, r: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(-r, r + 1), repeat=k))


def _is_int_tuple(x, k: int) -> bool:
    return isinstance(x, tuple) and len(x) == k and all(isinstance(v, int) for v in x)


@dataclass(frozen=True)
class Cyclic(Group):
    n: int
    kind = "cyclic"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Cyclic(n) needs n >= 1")

    @property
    def identity(self):
        return (0,)

    def mul(self, x, y):
        return ((x[0] + y[0]) % self.n,)

    def inv(self, x):
        return ((-x[0]) % self.n,)

    def is_element(self, x):
        return _is_int_tuple(x, 1) and 0 <= x[0] < self.n

    def ball(self, r):
        return [(a,) for a in range(self.n)]

    def random_element(self, rng, r):
        return (rng.randrange(self.n),)

    def order(self, x):
        return self.n // gcd(x[0], self.n)

    def to_json(self):
        return {"type": "cyclic", "n": self.n}


@dataclass(frozen=True)
class FreeAbelian(Group):
    k: int
    kind = "free_abelian"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("FreeAbelian(k) needs k >= 1")

    @property
    def identity(self):
        return (0,) * self.k

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def is_element(self, x):
        return _is_int_tuple(x, self.k)

    def ball(self, r):
        return _box(self.k, r)

    def random_element(self, rng, r):
        return tuple(rng.randint(-r, r) for _ in range(self.k))

    def order(self, x):
        return 1 if is_identity(x) else None

    def to_json(self):
        return {"type": "free_abelian", "k": self.k}


def _tararin_mul(x, y):
    k = len(x)
    out = [0] * k
    for i in range(k - 1):
        out[i] = x[i] + (y[i] if x[i + 1] % 2 == 0 else -y[i])
    out[k - 1] = x[k - 1] + y[k - 1]
    return tuple(out)


def _tararin_inv(x):
    k = len(x)
    out = [0] * k
    for i in range(k - 1):
        out[i] = -x[i] if x[i + 1] % 2 == 0 else x[i]
    out[k - 1] = -x[k - 1]
    return tuple(out)


@dataclass(frozen=True)
class Tararin(Group):
    """Polycyclic group on x_1..x_k where x_{i+1} inverts x_i and commutes with x_j, j < i.

    The normal form (a_1, ..., a_k) stands for x_1^a_1 x_2^a_2 ... x_k^a_k.
    The subgroup T_i is the set of elements whose coordinates above i vanish.
    """

    k: int
    kind = "tararin"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("Tararin(k) needs k >= 1")

    @property
    def identity(self):
        return (0,) * self.k

    def mul(self, x, y):
        return _tararin_mul(x, y)

    def inv(self, x):
        return _tararin_inv(x)

    def is_element(self, x):
        return _is_int_tuple(x, self.k)

    def ball(self, r):
        return _box(self.k, r)

    def random_element(self, rng, r):
        return tuple(rng.randint(-r, r) for _ in range(self.k))

    def order(self, x):
        return 1 if is_identity(x) else None

    def to_json(self):
        return {"type": "tararin", "k": self.k}

    def filtration_level(self, x) -> int:
        """Least i with x in T_i."""
        for i in range(self.k, 0, -1):
            if x[i - 1] != 0:
                return i
        return 0


@dataclass(frozen=True)
class TararinExt(Group):
    """T_k semidirect Z/n; the cyclic generator t inverts x_k and fixes x_j for j < k.

    Normal form (a_1, ..., a_k, r) stands for x_1^a_1 ... x_k^a_k t^r.
    """

    k: int
    n: int
    kind = "tararin_ext"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("TararinExt(k, n) needs k >= 1")
        if self.n < 2 or self.n % 2:
            raise ValueError("TararinExt(k, n) needs n even: the action has order 2")

    @property
    def identity(self):
        return (0,) * (self.k + 1)

    def _act(self, r, b):
        if r % 2 == 0:
            return b
        return b[:-1] + (-b[-1],)

    def mul(self, x, y):
        a, r = x[:-1], x[-1]
        b, s = y[:-1], y[-1]
        return _tararin_mul(a, self._act(r, b)) + ((r + s) % self.n,)

    def inv(self, x):
        a, r = x[:-1], x[-1]
        # (a t^r)^-1 = t^-r a^-1 = act^-r(a^-1) t^-r
        return self._act(r, _tararin_inv(a)) + ((-r) % self.n,)

    def is_element(self, x):
        return _is_int_tuple(x, self.k + 1) and 0 <= x[-1] < self.n

    def ball(self, r):
        return [a + (s,) for a in _box(self.k, r) for s in range(self.n)]

    def random_element(self, rng, r):
        return tuple(rng.randint(-r, r) for _ in range(self.k)) + (rng.randrange(self.n),)

    def order(self, x):
        m = self.n // gcd(x[-1], self.n)
        return m if is_identity(self.power(x, m)) else None

    def to_json(self):
        return {"type": "tararin_ext", "k": self.k, "n": self.n}


@dataclass(frozen=True)
class Heisenberg(Group):
    """Integer Heisenberg group; (a, b, c) is the unitriangular matrix [[1,a,c],[0,1,b],[0,0,1]]."""

    kind = "heisenberg"

    @property
    def identity(self):
        return (0, 0, 0)

    def mul(self, x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])

    def inv(self, x):
        a, b, c = x
        return (-a, -b, -c + a * b)

    def is_element(self, x):
        return _is_int_tuple(x, 3)

    def ball(self, r):
        return _box(3, r)

    def random_element(self, rng, r):
        return tuple(rng.randint(-r, r) for _ in range(3))

    def order(self, x):
        return 1 if is_identity(x) else None

    def to_json(self):
        return {"type": "heisenberg"}


@dataclass(frozen=True)
class DirectProduct(Group):
    """Direct product of backends; coordinates are concatenated."""

    factors: tuple
    kind = "direct_product"

    def __post_init__(self):
        if not self.factors:
            raise ValueError("DirectProduct needs at least one factor")
        object.__setattr__(self, "_widths", tuple(f.flat_length for f in self.factors))

    def _split(self, x):
        out, i = [], 0
        for w in self._widths:
            out.append(tuple(x[i:i + w]))
            i += w
        return out

    @property
    def identity(self):
        return sum((f.identity for f in self.factors), ())

    def mul(self, x, y):
        return sum((f.mul(a, b) for f, a, b in zip(self.factors, self._split(x), self._split(y))), ())

    def inv(self, x):
        return sum((f.inv(a) for f, a in zip(self.factors, self._split(x))), ())

    def is_element(self, x):
        if not isinstance(x, tuple) or len(x) != sum(self._widths):
            return False
        return all(f.is_element(a) for f, a in zip(self.factors, self._split(x)))

    def ball(self, r):
        return [sum(parts, ()) for parts in itertools.product(*(f.ball(r) for f in self.factors))]

    def random_element(self, rng, r):
        return sum((f.random_element(rng, r) for f in self.factors), ())

    def order(self, x):
        total = 1
        for f, a in zip(self.factors, self._split(x)):
            m = f.order(a)
            if m is None:
                return None
            total = total * m // gcd(total, m)
        return total

    def to_json(self):
        return {"type": "direct_product", "factors": [f.to_json() for f in self.factors]}

    def factor_slice(self, index: int) -> slice:
        start = sum(self._widths[:index])
        return slice(start, start + self._widths[index])


# -- module-level operations ------------------------------------------------

def multiply(G: Group, x: Element, y: Element) -> Element:
    return G.mul(G.check(x), G.check(y))


def invert(G: Group, x: Element) -> Element:
    return G.inv(G.check(x))


def ball(G: Group, r: int) -> list[Element]:
    if r < 0:
        raise ValueError("ball radius must be nonnegative")
    return G.ball(r)


# -- homomorphisms ----------------------------------------------------------

@dataclass(frozen=True)
class Morphism:
    """A named homomorphism between two backends."""

    name: str
    source: Group
    target: Group
    fn: Callable = field(compare=False, repr=False)
    params: dict = field(default_factory=dict, compare=False)
    injective: bool = True

    def __call__(self, x):
        return self.fn(x)

    def to_json(self):
        return {"name": self.name, **self.params}


def identity_morphism(G: Group) -> Morphism:
    return Morphism("identity", G, G, lambda x: x)


def inclusion_axis(i: int, k: int) -> Morphism:
    """Z -> Z^k, n -> n e_i."""
    if not 0 <= i < k:
        raise ValueError(f"axis {i} out of range for Z^{k}")

    def fn(x):
        out = [0] * k
        out[i] = x[0]
        return tuple(out)

    return Morphism("inclusion_axis_i", FreeAbelian(1), FreeAbelian(k), fn, {"i": i, "k": k})


def scale(factor: int) -> Morphism:
    """Z -> Z, n -> factor * n."""
    if factor == 0:
        raise ValueError("scale factor must be nonzero")
    return Morphism("scale", FreeAbelian(1), FreeAbelian(1), lambda x: (factor * x[0],), {"factor": factor})


def heisenberg_to_z2() -> Morphism:
    return Morphism("heisenberg_to_z2", Heisenberg(), FreeAbelian(2), lambda x: (x[0], x[1]), injective=False)


def project_factor(G: DirectProduct, index: int) -> Morphism:
    sl = G.factor_slice(index)
    return Morphism("project_factor", G, G.factors[index], lambda x: tuple(x[sl]), {"index": index},
                    injective=len(G.factors) == 1)


def tararin_ext_to_cyclic(G: TararinExt) -> Morphism:
    return Morphism("tararin_ext_to_cyclic", G, Cyclic(G.n), lambda x: (x[-1],), injective=False)


def sample_pairs(items: Sequence, cap: int, rng: random.Random) -> list[tuple]:
    """All ordered pairs from ``items``, or ``cap`` seeded pairs when there are more."""
    total = len(items) ** 2
    if total <= cap:
        return [(a, b) for a in items for b in items]
    return [(rng.choice(items), rng.choice(items)) for _ in range(cap)]


def distinct_sorted(elements: Iterable[Element]) -> list[Element]:
    return sorted(set(elements))
