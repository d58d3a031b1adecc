"""Lexicographic extensions, quotient circular orderings and genuine approximation sequences."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .groups import Element, Group, Morphism, is_identity
from .orders import CircularOrder, LeftOrder, permutation_sign


class ConstructionError(ValueError):
    pass


@dataclass
class ShortExactSequence:
    """1 -> K -> G -> H -> 1 given by a projection q: G -> H; K is the preimage of the identity."""

    total: Group
    quotient: Group
    project: Callable[[Element], Element]
    descriptor: dict = field(default_factory=dict)

    def in_kernel(self, x: Element) -> bool:
        return is_identity(self.project(x))

    def validate(self, radius: int = 2, samples: int = 500, seed: int = 0) -> list[tuple]:
        """Sampled homomorphism check; returns failing pairs."""
        rng = random.Random(seed)
        G, H, q = self.total, self.quotient, self.project
        bad = []
        for _ in range(samples):
            x, y = G.random_element(rng, radius), G.random_element(rng, radius)
            if q(G.mul(x, y)) != H.mul(q(x), q(y)):
                bad.append((x, y))
        return bad


def ses_from_morphism(phi: Morphism) -> ShortExactSequence:
    return ShortExactSequence(phi.source, phi.target, phi,
                              {"total": phi.source.to_json(), "quotient": phi.target.to_json(),
                               "projection": phi.to_json()})


class LexExtension(CircularOrder):
    """Lexicographic circular ordering from a kernel left order and a quotient circular order."""

    def __init__(self, ses: ShortExactSequence, kernel_order: LeftOrder, quotient_order: CircularOrder,
                 descriptor: dict | None = None, provenance: dict | None = None):
        super().__init__(ses.total)
        if quotient_order.group != ses.quotient:
            raise ConstructionError("quotient ordering lives on a different group than the projection target")
        self.ses = ses
        self.kernel_order = kernel_order
        self.quotient_order = quotient_order
        self.lex = (ses, kernel_order, quotient_order)
        self._descriptor = descriptor
        self.provenance = provenance or {}

    def _kernel_less(self, x, y):
        G = self.group
        return self.kernel_order.positive(G.mul(G.inv(x), y))

    def _orient(self, g1, g2, g3):
        q = self.ses.project
        q1, q2, q3 = q(g1), q(g2), q(g3)
        if q1 != q2 and q2 != q3 and q1 != q3:
            return self.quotient_order._orient(q1, q2, q3)
        if q1 == q2 == q3:
            return permutation_sign(self._kernel_less, g1, g2, g3)
        # rotate cyclically so that the first two share a coset; c is invariant under rotation
        if q1 == q2:
            h1, h2 = g1, g2
        elif q2 == q3:
            h1, h2 = g2, g3
        else:
            h1, h2 = g3, g1
        return 1 if self._kernel_less(h1, h2) else -1

    @property
    def descriptor(self):
        if self._descriptor is not None:
            return self._descriptor
        return {"kind": "lex_ses", "ses": self.ses.descriptor,
                "kernel_order": self.kernel_order.descriptor,
                "quotient_order": self.quotient_order.descriptor}


def lex_extend(ses: ShortExactSequence, kernel_left_order: LeftOrder,
               quotient_circular_order: CircularOrder, check_radius: int = 1) -> LexExtension:
    bad = ses.validate(radius=check_radius, samples=200)
    if bad:
        raise ConstructionError(f"projection is not a homomorphism on sample {bad[0]}")
    return LexExtension(ses, kernel_left_order, quotient_circular_order)


# -- quotients by a cofinal central element --------------------------------

@dataclass
class CofinalCentralDatum:
    """A left-ordered group H with a positive central element z that is cofinal."""

    order: LeftOrder
    z: Element
    bound: int = 64
    radius: int = 2
    witnesses: dict = field(default_factory=dict)

    @property
    def group(self) -> Group:
        return self.order.group

    def validate(self) -> "CofinalCentralDatum":
        H, L, z = self.group, self.order, self.z
        if not L.positive(z):
            raise ConstructionError(f"z={list(z)} is not positive")
        elements = H.ball(self.radius)
        for g in elements:
            if H.mul(g, z) != H.mul(z, g):
                raise ConstructionError(f"z={list(z)} does not commute with {list(g)}")
        worst = 0
        for g in elements:
            zk, zk_inv = z, H.inv(z)
            for k in range(1, self.bound + 1):
                if L.less(zk_inv, g) and L.less(g, zk):
                    worst = max(worst, k)
                    break
                zk, zk_inv = H.mul(zk, z), H.mul(zk_inv, H.inv(z))
            else:
                raise ConstructionError(f"no k <= {self.bound} with z^-k < {list(g)} < z^k")
        self.witnesses = {"central_checked": len(elements), "cofinal_max_k": worst,
                          "radius": self.radius, "bound": self.bound}
        return self

    def to_json(self):
        return {"h": self.order.descriptor, "z": self.group.element_to_list(self.z)}


class CentralQuotient(Group):
    """H / <z^n> with each coset stored as its minimal representative in [id, z^n)."""

    kind = "central_quotient"
    MAX_STEPS = 1_000_000
    ORDER_CAP = 4096

    def __init__(self, datum: CofinalCentralDatum, n: int):
        if n < 1:
            raise ConstructionError("n must be >= 1")
        self.datum = datum
        self.n = n
        self.H = datum.group
        self.w = self.H.power(datum.z, n)
        self.w_inv = self.H.inv(self.w)

    def __eq__(self, other):
        return (isinstance(other, CentralQuotient) and other.n == self.n
                and other.datum.z == self.datum.z and other.datum.order is self.datum.order)

    def __hash__(self):
        return hash((self.n, self.datum.z))

    def rep(self, g: Element) -> Element:
        H, L = self.H, self.datum.order
        x = g
        steps = 0
        while L.positive(H.inv(x)):  # x < id
            x = H.mul(x, self.w)
            steps += 1
            if steps > self.MAX_STEPS:
                raise ConstructionError("minimal representative search did not terminate; is z cofinal?")
        while not L.less(x, self.w):  # x >= z^n
            x = H.mul(x, self.w_inv)
            steps += 1
            if steps > self.MAX_STEPS:
                raise ConstructionError("minimal representative search did not terminate; is z cofinal?")
        return x

    @property
    def identity(self):
        return self.H.identity

    def mul(self, x, y):
        return self.rep(self.H.mul(x, y))

    def inv(self, x):
        return self.rep(self.H.inv(x))

    def is_element(self, x):
        return self.H.is_element(x) and self.rep(x) == x

    def ball(self, r):
        return sorted({self.rep(g) for g in self.H.ball(r)})

    def random_element(self, rng, r):
        return self.rep(self.H.random_element(rng, r))

    def order(self, x):
        if self.H.kind == "free_abelian":
            return self._order_free_abelian(x)
        y = x
        for m in range(1, self.ORDER_CAP + 1):
            if is_identity(y):
                return m
            y = self.mul(y, x)
        return None

    def _order_free_abelian(self, x):
        # x + <w> has finite order iff x is a rational multiple of w
        x = self.rep(x)
        if is_identity(x):
            return 1
        w = self.w
        pivot = next(i for i, v in enumerate(w) if v)
        ratio = Fraction(x[pivot], w[pivot])
        if any(Fraction(xi) != ratio * wi for xi, wi in zip(x, w)):
            return None
        return ratio.denominator

    def to_json(self):
        return {"type": "central_quotient", **self.datum.to_json(), "n": self.n}

    def element_to_list(self, x):
        return self.H.element_to_list(x)

    def element_from_list(self, values):
        x = self.H.element_from_list(values)
        return self.rep(x)

    @property
    def flat_length(self):
        return self.H.flat_length


class QuotientOrder(CircularOrder):
    """Circular order on H/<z^n> by sorting minimal representatives in H."""

    def __init__(self, quotient: CentralQuotient):
        super().__init__(quotient)
        self._less = quotient.datum.order.less

    def _orient(self, g1, g2, g3):
        return permutation_sign(self._less, g1, g2, g3)

    @property
    def descriptor(self):
        Q = self.group
        return {"kind": "quotient_mod_z", **Q.datum.to_json(), "n": Q.n}


def quotient_circular(datum: CofinalCentralDatum, n: int) -> QuotientOrder:
    if not datum.witnesses:
        datum.validate()
    return QuotientOrder(CentralQuotient(datum, n))


def approx_dn(datum: CofinalCentralDatum, n: int) -> LexExtension:
    """d_n on H: <z^n> ordered with z^n > id, H/<z^n> ordered by c_n, glued lexicographically."""
    qorder = quotient_circular(datum, n)
    Q = qorder.group
    ses = ShortExactSequence(datum.group, Q, Q.rep, {"kind": "mod_central", **datum.to_json(), "n": n})
    desc = {"kind": "approx_dn", **datum.to_json(), "n": n}
    return LexExtension(ses, datum.order, qorder, descriptor=desc,
                        provenance={"datum": datum.witnesses, "n": n})


def approx_rot(datum: CofinalCentralDatum, n: int, g: Element):
    from .semiconj import rot_exact

    value = rot_exact(approx_dn(datum, n), g)
    if value is None:
        raise ConstructionError("no exact path for this element")
    return value


class PullbackOrder(CircularOrder):
    def __init__(self, base: CircularOrder, phi: Morphism):
        super().__init__(phi.source)
        self.base = base
        self.phi = phi
        self.pullback_of = (base, phi)
        if base.secret_cone is not None:
            cone = base.secret_cone
            self.secret_cone = LeftOrder(phi.source, lambda x: cone.positive(phi(x)),
                                         {"kind": "pullback_cone", "of": cone.descriptor, "phi": phi.to_json()})

    def _orient(self, g1, g2, g3):
        p = self.phi
        return self.base._orient(p(g1), p(g2), p(g3))

    @property
    def descriptor(self):
        return {"kind": "pullback", "of": self.base.descriptor, "phi": self.phi.to_json(),
                "source": self.phi.source.to_json()}


def pullback(c: CircularOrder, phi: Morphism, check_radius: int = 2) -> PullbackOrder:
    if phi.target != c.group:
        raise ConstructionError("morphism target differs from the ordered group")
    seen: dict = {}
    for x in phi.source.ball(check_radius):
        y = phi(x)
        if y in seen and seen[y] != x:
            raise ConstructionError(f"morphism is not injective: {list(seen[y])} and {list(x)} share an image")
        seen[y] = x
    return PullbackOrder(c, phi)


# -- genuine approximation sequences ---------------------------------------

def find_preimage(phi: Morphism, target: Element, radius: int = 3) -> Element | None:
    """A preimage of ``target`` with the fewest nonzero entries, smallest first."""
    flat = phi.source.element_to_list
    ranked = sorted(phi.source.ball(radius),
                    key=lambda x: (sum(v != 0 for v in flat(x)), sum(abs(v) for v in flat(x)), flat(x)))
    return next((x for x in ranked if phi(x) == target), None)


def genuine_sequence(G: Group, phi: Morphism, kernel_order: LeftOrder, datum: CofinalCentralDatum,
                     n_list: Sequence[int], search_radius: int = 3) -> list[LexExtension]:
    """c_n = lexicographic extension of the kernel order of phi by d_n on the image.

    Each member records a preimage of z as its rotation witness.
    """
    if phi.source != G or phi.target != datum.group:
        raise ConstructionError("morphism does not run from G to the ordered group")
    if not datum.witnesses:
        datum.validate()
    witness = find_preimage(phi, datum.z, search_radius)
    if witness is None:
        raise ConstructionError(f"image of G does not reach z within radius {search_radius}; "
                                "cannot witness cofinality")
    ses = ses_from_morphism(phi)
    out = []
    for n in n_list:
        dn = approx_dn(datum, n)
        member = LexExtension(ses, kernel_order, dn,
                              provenance={"n": n, "witness": G.element_to_list(witness)})
        out.append(member)
    return out


@dataclass
class ConvergenceRow:
    triple: tuple
    index: int | None  # None: no agreement by the end of the sequence


def convergence_table(target: CircularOrder, sequence: Sequence[tuple[int, CircularOrder]],
                      triples: Sequence[tuple]) -> list[ConvergenceRow]:
    """For each triple, the least label from which every later member agrees with ``target``."""
    rows = []
    for t in triples:
        want = target(*t)
        index = None
        for label, member in reversed(sequence):
            if member(*t) != want:
                break
            index = label
        rows.append(ConvergenceRow(tuple(t), index))
    return rows
