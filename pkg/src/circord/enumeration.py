"""Brute-force enumeration of circular orderings of Z/n and of ball-restricted positive cones."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from . import kernels
from .groups import Group, Tararin, is_identity
from .orders import ArrangementOrder, LeftOrder, lex_cone

DEFAULT_MAX_CELLS = 50_000_000
DEFAULT_MAX_SOLUTIONS = 1 << 16


class EnumerationOverflow(RuntimeError):
    """The search exceeded its configured work or output cap."""


def max_cells_from_env() -> int:
    raw = os.environ.get("CIRCORD_MAX_CELLS")
    if not raw:
        return DEFAULT_MAX_CELLS
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"CIRCORD_MAX_CELLS must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("CIRCORD_MAX_CELLS must be positive")
    return value


# -- circular orderings of finite cyclic groups -----------------------------

def cyclic_arrangements(n: int) -> np.ndarray:
    """Every cyclic arrangement of 0..n-1 with 0 pinned in front, one per row."""
    rest = np.array(list(itertools.permutations(range(1, n))), dtype=np.int64).reshape(-1, n - 1)
    return np.hstack([np.zeros((rest.shape[0], 1), dtype=np.int64), rest])


def enumerate_co_cyclic(n: int, use_numba: bool | None = None) -> list[ArrangementOrder]:
    """All left-invariant circular orderings of Z/n, sorted by arrangement."""
    if not 2 <= n <= 9:
        raise ValueError(f"enumerate_co_cyclic needs 2 <= n <= 9, got {n}")
    perms = cyclic_arrangements(n)
    mask = kernels.invariant_arrangements(perms, n, use_numba=use_numba)
    keep = sorted(tuple(int(v) for v in row) for row in perms[mask])
    return [ArrangementOrder(n, a) for a in keep]


# -- ball-restricted cones ---------------------------------------------------

@dataclass(frozen=True)
class ConeCandidate:
    """Signs on the nonidentity elements of a ball; +1 means positive."""

    radius: int
    assignment: tuple  # sorted tuple of (element, sign)

    def as_dict(self) -> dict:
        return dict(self.assignment)

    def to_json(self, group: Group):
        return {"radius": self.radius,
                "signs": {",".join(map(str, group.element_to_list(x))): s for x, s in self.assignment}}


def _ball_problem(G: Group, r: int):
    elements = [x for x in G.ball(r) if not is_identity(x)]
    elements.sort()
    index = {x: i for i, x in enumerate(elements)}
    inv = np.empty(len(elements), dtype=np.int64)
    for x, i in index.items():
        j = index.get(G.inv(x))
        if j is None:
            raise ValueError("ball is not closed under inversion")
        inv[i] = j
    triples = []
    for x, i in index.items():
        for y, j in index.items():
            k = index.get(G.mul(x, y))
            if k is not None:
                triples.append((i, j, k))
    return elements, inv, np.array(triples, dtype=np.int64).reshape(-1, 3)


def enumerate_lo_ball(G: Group, r: int, max_cells: int | None = None,
                      max_solutions: int = DEFAULT_MAX_SOLUTIONS,
                      use_numba: bool | None = None) -> list[ConeCandidate]:
    """Every sign assignment on ball(r) minus the identity that is antisymmetric and closed under in-ball products."""
    if not isinstance(G, Tararin):
        raise ValueError("ball cone enumeration is provided for Tararin backends")
    if G.k > 3 or not 0 <= r <= 3:
        raise ValueError(f"need k <= 3 and 0 <= r <= 3, got k={G.k}, r={r}")
    cap = max_cells if max_cells is not None else max_cells_from_env()
    elements, inv, triples = _ball_problem(G, r)
    if len(triples) > cap:
        raise EnumerationOverflow(f"{len(triples)} product constraints exceed the cap of {cap}")
    sols, status, steps = kernels.cone_search(inv, triples, max_solutions, cap, use_numba=use_numba)
    if status == 1:
        raise EnumerationOverflow(f"more than {max_solutions} candidates on ball({r})")
    if status == 2:
        raise EnumerationOverflow(f"search exceeded {cap} steps on ball({r})")
    out = [ConeCandidate(r, tuple((x, int(s)) for x, s in zip(elements, row))) for row in sols]
    out.sort(key=lambda c: tuple(s for _, s in c.assignment), reverse=True)
    return out


def restrict(L: LeftOrder, r: int) -> ConeCandidate:
    elements = sorted(x for x in L.group.ball(r) if not is_identity(x))
    return ConeCandidate(r, tuple((x, L.sign(x)) for x in elements))


def canonical_tararin_cones(k: int) -> list[LeftOrder]:
    """The 2^k orders: g positive iff eps_i * a_i > 0 for the top nonzero coordinate i.

    Sign vectors are listed with eps_0 varying slowest, +1 before -1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    G = Tararin(k)
    out = []
    for eps in itertools.product((1, -1), repeat=k):
        # lex_cone expects signs in priority order, top coordinate first
        L = lex_cone(G, list(reversed(eps)))
        L.descriptor = {**L.descriptor, "eps": list(eps)}
        out.append(L)
    return out


def is_absolutely_convex_level(L: LeftOrder, level: int, r: int) -> bool:
    """Is the subgroup of elements supported below ``level`` an interval around id on ball(r)?

    Checks that whenever id < y < x (or x < y < id) with x in the subgroup, y is in it too.
    """
    G = L.group
    ball = G.ball(r)
    inside = [x for x in ball if all(v == 0 for v in x[level:])]
    for x in inside:
        for y in ball:
            if all(v == 0 for v in y[level:]):
                continue
            if L.less(G.identity, y) and L.less(y, x):
                return False
            if L.less(x, y) and L.less(y, G.identity):
                return False
    return True

