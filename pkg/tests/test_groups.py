import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circord.groups import (Cyclic, DescriptorMismatch, DirectProduct, FreeAbelian, Heisenberg, Tararin,
                            TararinExt, ball, heisenberg_to_z2, inclusion_axis, invert, multiply, scale)

BACKENDS = [Cyclic(5), Cyclic(1), FreeAbelian(1), FreeAbelian(3), Tararin(1), Tararin(2), Tararin(3),
            TararinExt(1, 2), TararinExt(2, 4), Heisenberg(), DirectProduct((FreeAbelian(1), Cyclic(3)))]


def _ids(g):
    return repr(g.to_json())


# -- independent oracles --------------------------------------------------------

def heisenberg_matrix(x):
    a, b, c = x
    return [[1, a, c], [0, 1, b], [0, 0, 1]]


def matmul(p, q):
    return [[sum(p[i][k] * q[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def tararin_times_generator(a, j, e):
    """Right-multiply the normal form x1^a1...xk^ak by x_j^e using only the defining relations.

    x_j^e has to travel left past x_k^{a_k} ... x_{j+1}^{a_{j+1}}: it commutes with x_i for i > j + 1
    and x_{j+1}^m x_j = x_j^{(-1)^m} x_{j+1}^m.
    """
    a = list(a)
    sign = -1 if (j + 1 < len(a) and a[j + 1] % 2) else 1
    a[j] += sign * e
    return tuple(a)


def tararin_collect(x, y):
    """x * y by expanding y into generators x_1^{b_1} ... x_k^{b_k} and collecting one at a time."""
    out = x
    for j, b in enumerate(y):
        step = 1 if b > 0 else -1
        for _ in range(abs(b)):
            out = tararin_times_generator(out, j, step)
    return out


# -- examples -----------------------------------------------------------------

def test_tararin_twisted_product():
    assert multiply(Tararin(2), (0, 1), (1, 0)) == (-1, 1)


def test_tararin_untwisted_product():
    assert multiply(Tararin(2), (1, 0), (0, 1)) == (1, 1)


def test_heisenberg_product_example():
    assert multiply(Heisenberg(), (1, 0, 0), (0, 1, 0)) == (1, 1, 1)


def test_tararin_inverse_example():
    assert invert(Tararin(2), (1, 1)) == (1, -1)


@pytest.mark.parametrize("G", BACKENDS, ids=_ids)
def test_identity_inverts_to_identity(G):
    assert invert(G, G.identity) == G.identity


def test_cyclic_inverse():
    assert invert(Cyclic(5), (2,)) == (3,)


@pytest.mark.parametrize("G, r, size", [(Cyclic(5), 1, 5), (Tararin(2), 1, 9), (Heisenberg(), 1, 27),
                                         (FreeAbelian(2), 0, 1), (TararinExt(1, 4), 1, 12)])
def test_ball_sizes(G, r, size):
    assert len(ball(G, r)) == size


def test_negative_radius_rejected():
    with pytest.raises(ValueError):
        ball(Tararin(2), -1)


def test_mismatched_element_rejected():
    with pytest.raises(DescriptorMismatch):
        multiply(Tararin(2), (1, 0, 0), (0, 1))
    with pytest.raises(DescriptorMismatch):
        Cyclic(5).element_from_list([7])


@pytest.mark.parametrize("bad", [lambda: Cyclic(0), lambda: TararinExt(1, 3), lambda: Tararin(0)])
def test_invalid_descriptors(bad):
    with pytest.raises(ValueError):
        bad()


# -- oracle agreement -----------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=6, max_size=6))
def test_heisenberg_matches_matrix_product(v):
    x, y = tuple(v[:3]), tuple(v[3:])
    G = Heisenberg()
    assert heisenberg_matrix(G.mul(x, y)) == matmul(heisenberg_matrix(x), heisenberg_matrix(y))
    assert heisenberg_matrix(G.inv(x)) == _matrix_inverse(heisenberg_matrix(x))


def _matrix_inverse(m):
    a, b, c = m[0][1], m[1][2], m[0][2]
    return [[1, -a, a * b - c], [0, 1, -b], [0, 0, 1]]


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 4).flatmap(lambda k: st.tuples(st.just(k),
                                                     st.lists(st.integers(-4, 4), min_size=2 * k,
                                                              max_size=2 * k))))
def test_tararin_matches_generator_collection(data):
    k, v = data
    G = Tararin(k)
    x, y = tuple(v[:k]), tuple(v[k:])
    assert G.mul(x, y) == tararin_collect(x, y)


# -- group laws -----------------------------------------------------------------

@pytest.mark.parametrize("G", BACKENDS, ids=_ids)
def test_group_laws_on_samples(G):
    rng = random.Random(7)
    e = G.identity
    for _ in range(10_000):
        x, y, z = (G.random_element(rng, 4) for _ in range(3))
        assert G.is_element(G.mul(x, y))
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
        assert G.mul(x, e) == x == G.mul(e, x)
        assert G.mul(x, G.inv(x)) == e == G.mul(G.inv(x), x)


@pytest.mark.parametrize("k", [2, 3])
def test_tararin_filtration_subgroups(k):
    G = Tararin(k)
    for level in range(1, k + 1):
        sub = [x for x in G.ball(2) if all(v == 0 for v in x[level:])]
        for x in sub:
            assert all(v == 0 for v in G.inv(x)[level:])
            for y in sub:
                assert all(v == 0 for v in G.mul(x, y)[level:])
        assert all(G.filtration_level(x) <= level for x in sub)


@pytest.mark.parametrize("k, n", [(1, 2), (2, 2), (2, 4), (3, 6)])
def test_tararin_ext_action(k, n):
    G = TararinExt(k, n)
    t = (0,) * k + (1,)
    for x in G.ball(2):
        if x[-1] != 0:
            continue
        y = G.conj(t, x)
        assert y[-1] == 0
        assert y[k - 1] == -x[k - 1]  # top coordinate inverted modulo the lower terms


def test_ball_is_coordinate_box():
    assert sorted(ball(FreeAbelian(2), 1)) == sorted((a, b) for a in (-1, 0, 1) for b in (-1, 0, 1))
    assert all(max(map(abs, x)) <= 2 for x in ball(Heisenberg(), 2))


def test_power_matches_repeated_product():
    G = Heisenberg()
    x = (1, 2, -1)
    acc = G.identity
    for k in range(6):
        assert G.power(x, k) == acc
        assert G.power(x, -k) == G.inv(acc)
        acc = G.mul(acc, x)


def test_orders_of_elements():
    assert Cyclic(6).order((4,)) == 3
    assert TararinExt(1, 2).order((1, 1)) == 2
    assert TararinExt(1, 4).order((0, 1)) == 4
    assert Heisenberg().order((0, 0, 1)) is None
    assert DirectProduct((FreeAbelian(1), Cyclic(3))).order((0, 1)) == 3


def test_morphisms_are_homomorphisms():
    rng = random.Random(1)
    for phi in (heisenberg_to_z2(), inclusion_axis(1, 3), scale(-2)):
        for _ in range(500):
            x, y = (phi.source.random_element(rng, 3) for _ in range(2))
            assert phi(phi.source.mul(x, y)) == phi.target.mul(phi(x), phi(y))


def test_element_serialization_roundtrip():
    for G in BACKENDS:
        for x in G.ball(1):
            assert G.element_from_list(G.element_to_list(x)) == x
