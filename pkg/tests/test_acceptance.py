"""Acceptance gate: ten timed checks, each printing one PASS/FAIL line."""
import contextlib
import itertools
import random
import time
from fractions import Fraction as F
from math import gcd

from circord.construct import (CofinalCentralDatum, approx_dn, approx_rot, convergence_table, genuine_sequence,
                               lex_extend, pullback, quotient_circular, ses_from_morphism)
from circord.enumeration import canonical_tararin_cones, enumerate_co_cyclic, enumerate_lo_ball, restrict
from circord.groups import (Cyclic, DirectProduct, FreeAbelian, Heisenberg, Tararin, TararinExt, heisenberg_to_z2,
                            project_factor, scale, tararin_ext_to_cyclic)
from circord.lift import (LiftElement, cocycle_f, eta_of_secret, floor, lift_inv, lift_mul, lift_positive,
                          power_floor, z_power)
from circord.orders import (ConjugatedOrder, CyclicStandard, SecretOrder, lex_cone, neighborhood_Un, satisfies,
                            validate)
from circord.semiconj import Exact, VerdictKind, is_secret, rot_exact, semiconjugate, tau

Z = FreeAbelian(1)
Z2 = FreeAbelian(2)
Z_LEX = lex_cone(Z, [1])
Z2_LEX = lex_cone(Z2, [1, 1])

# values from the plain Python brute force in test_enumeration.py (n = 8 from the arrangement kernel)
CO_CYCLIC_COUNTS = {2: 1, 3: 2, 4: 2, 5: 4, 6: 2, 7: 6, 8: 4}


@contextlib.contextmanager
def criterion(capsys, number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.2f}s / {limit}s)")


def test_c01_cyclic_rotation_numbers_exact(capsys):
    with criterion(capsys, 1, "rot_exact(g) = g/n on Cyclic(n), n = 2..12", 1.0):
        for n in range(2, 13):
            c = CyclicStandard(n)
            for g in range(n):
                v = rot_exact(c, (g,))
                assert isinstance(v, Exact) and v.value == F(g, n), (n, g, v)
                # lift-power oracle: (g, 0)^n = z^g for the unit-1 ordering
                assert power_floor(c, (g,), n) == g


def test_c02_approximation_rotation_values(capsys):
    with criterion(capsys, 2, "approx_rot(Z, z=1, g=2) = 2/n mod Z, n = 3..10, pairwise distinct", 1.0):
        datum = CofinalCentralDatum(Z_LEX, (1,)).validate()
        values = []
        for n in range(3, 11):
            v = approx_rot(datum, n, (2,))
            assert isinstance(v, Exact)
            assert v.residue == F(2, n) % 1
            values.append(v.residue)
        assert len(set(values)) == len(values)


def _secret_orderings():
    out = {"Z": SecretOrder(Z_LEX), "Z2": SecretOrder(Z2_LEX),
           "Heisenberg": SecretOrder(lex_cone(Heisenberg(), [1, 1, 1]))}
    for i, L in enumerate(canonical_tararin_cones(2)):
        out[f"Tararin(2)#{i}"] = SecretOrder(L)
    return out


def test_c03_secret_orderings_have_zero_invariants(capsys):
    with criterion(capsys, 3, "secret orderings: rot = 0, tau = 0, section powers floor in {-1, 0}", 30.0):
        orderings = _secret_orderings()
        assert len(orderings) == 7
        for name, c in orderings.items():
            G = c.group
            eta = eta_of_secret(c.secret_cone)
            rng = random.Random(1000 + len(name))
            for _ in range(1000):
                g, h = G.random_element(rng, 6), G.random_element(rng, 6)
                r = rot_exact(c, g)
                assert isinstance(r, Exact) and r.residue == 0, (name, g, r)
                t = tau(c, g, h)
                assert isinstance(t, Exact) and t.value == 0, (name, g, h, t)
                x = eta.section(g)
                p = x
                for _ in range(256):
                    assert floor(p) in (-1, 0), (name, g)
                    p = lift_mul(c, p, x)


def test_c04_semiconjugacy_verdicts(capsys):
    with criterion(capsys, 4, "TararinExt(1,2) kernel orders agree; Cyclic(3) units refuted", 5.0):
        T = TararinExt(1, 2)
        ses = ses_from_morphism(tararin_ext_to_cyclic(T))
        a = lex_extend(ses, lex_cone(T, [1]), CyclicStandard(2))
        b = lex_extend(ses, lex_cone(T, [-1]), CyclicStandard(2))
        assert any(a(*t) != b(*t) for t in itertools.permutations(T.ball(1), 3))
        assert semiconjugate(a, b, [(1, 0), (0, 1)]).kind is VerdictKind.CERTIFIED_EQUAL
        v = semiconjugate(CyclicStandard(3, 1), CyclicStandard(3, 2), [(1,)])
        assert v.kind is VerdictKind.REFUTED
        assert v.witness["element"] == [1]
        assert v.witness["a"]["value"] == [1, 3] and v.witness["b"]["value"] == [2, 3]


def test_c05_cyclic_enumeration_counts(capsys):
    with criterion(capsys, 5, "CO(Z/n) counts for n = 2..8 match the frozen brute-force values", 60.0):
        for n in range(2, 9):
            found = enumerate_co_cyclic(n)
            assert len(found) == CO_CYCLIC_COUNTS[n], n
            units = [u for u in range(1, n) if gcd(u, n) == 1]
            assert len(found) >= len(units)
            for u in units:
                std = CyclicStandard(n, u)
                assert any(all(std(*t) == c(*t) for t in itertools.permutations([(a,) for a in range(n)], 3))
                           for c in found), (n, u)


def test_c06_tararin_orderings(capsys):
    with criterion(capsys, 6, "Tararin(k): 2^k valid distinct cones, each found by the r = 2 ball search", 30.0):
        for k in (1, 2, 3):
            cones = canonical_tararin_cones(k)
            assert len(cones) == 2 ** k
            assert len({restrict(L, 3).assignment for L in cones}) == 2 ** k
            for L in cones:
                assert validate(L, sample_radius=2, sample_count=1000, seed=k).passed
            found = {c.assignment for c in enumerate_lo_ball(Tararin(k), 2)}
            for L in cones:
                assert restrict(L, 2).assignment in found


def _lift_matrix():
    z_datum = CofinalCentralDatum(Z_LEX, (1,)).validate()
    z2_datum = CofinalCentralDatum(Z2_LEX, (0, 1)).validate()
    T = TararinExt(1, 2)
    P = DirectProduct((Z, Cyclic(5)))
    H = Heisenberg()
    return {
        "cyclic(7)": CyclicStandard(7),
        "cyclic(8) unit 3": CyclicStandard(8, 3),
        "secret Z": SecretOrder(Z_LEX),
        "secret Z2": SecretOrder(Z2_LEX),
        "secret Tararin(2)": SecretOrder(canonical_tararin_cones(2)[1]),
        "secret Heisenberg": SecretOrder(lex_cone(H, [1, 1, 1])),
        "conjugated Tararin(2)": ConjugatedOrder(SecretOrder(canonical_tararin_cones(2)[2]), (1, 1)),
        "d_4 on Z": approx_dn(z_datum, 4),
        "d_3 on Z2": approx_dn(z2_datum, 3),
        "quotient Z2/<z^3>": quotient_circular(z2_datum, 3),
        "pullback of d_5 along x2": pullback(approx_dn(z_datum, 5), scale(2)),
        "lex TararinExt(1,2)": lex_extend(ses_from_morphism(tararin_ext_to_cyclic(T)), lex_cone(T, [1]),
                                          CyclicStandard(2)),
        "lex Z x Z/5": lex_extend(ses_from_morphism(project_factor(P, 1)), lex_cone(P, [-1]), CyclicStandard(5, 2)),
        "genuine Heisenberg n=3": genuine_sequence(H, heisenberg_to_z2(), lex_cone(H, [1, 1, 1]), z2_datum, [3])[0],
    }


def test_c07_lift_group_laws(capsys):
    matrix = _lift_matrix()
    with criterion(capsys, 7, f"lift laws: 10^4 checks on each of {len(matrix)} orderings", 60.0):
        for name, c in matrix.items():
            G = c.group
            rng = random.Random(7)
            e = LiftElement(G.identity, 0)
            z = z_power(c, 1)
            for _ in range(10_000):
                g, h, k = (G.random_element(rng, 3) for _ in range(3))
                # cocycle identity for f_c
                assert cocycle_f(c, g, h) + cocycle_f(c, G.mul(g, h), k) == \
                    cocycle_f(c, h, k) + cocycle_f(c, g, G.mul(h, k)), name
                x, y, w = LiftElement(g, rng.randint(-3, 3)), LiftElement(h, rng.randint(-3, 3)), \
                    LiftElement(k, rng.randint(-3, 3))
                xy = lift_mul(c, x, y)
                assert lift_mul(c, xy, w) == lift_mul(c, x, lift_mul(c, y, w)), name
                assert lift_mul(c, x, z) == lift_mul(c, z, x), name
                assert lift_mul(c, x, lift_inv(c, x)) == e, name
                if x != e:
                    assert lift_positive(x) != lift_positive(lift_inv(c, x)), name
                if lift_positive(x) and lift_positive(y):
                    assert lift_positive(xy), name


def _prefix_levels(c, g, n):
    """[g~^m]_c for m = 1..n via running cocycle sums."""
    G = c.group
    out, total, gi = [0], 0, g
    for _ in range(n - 1):
        total += cocycle_f(c, gi, g)
        gi = G.mul(gi, g)
        out.append(total)
    return out


def test_c08_neighbourhoods_fix_power_floors(capsys):
    with criterion(capsys, 8, "d in U_n(c, g) implies equal power floors, n <= 32", 30.0):
        N = 32
        z_datum = CofinalCentralDatum(Z_LEX, (1,)).validate()
        z_family = [approx_dn(z_datum, m) for m in range(1, 41)]
        z_family += [SecretOrder(Z_LEX), SecretOrder(lex_cone(Z, [-1]))]
        z_family += [pullback(approx_dn(z_datum, m), scale(s)) for m in (3, 7, 20) for s in (2, 3)]
        cases = [
            (CyclicStandard(7), enumerate_co_cyclic(7) + [ConjugatedOrder(CyclicStandard(7, u), (2,))
                                                         for u in range(1, 7)], [(g,) for g in range(7)]),
            (SecretOrder(Z_LEX), z_family, [(g,) for g in range(-12, 13)]),
        ]
        for c, family, elements in cases:
            probe = list(itertools.permutations(c.group.ball(2), 3))
            reference = [c(*t) for t in probe]
            differs = [[d(*t) for t in probe] != reference for d in family]
            nontrivial = 0
            for g in elements:
                constraints = neighborhood_Un(c, g, N)
                target = _prefix_levels(c, g, N)
                for d, d_differs in zip(family, differs):
                    levels = _prefix_levels(d, g, N)
                    agree = 0
                    while agree < N and d(*constraints[agree][0]) == constraints[agree][1]:
                        agree += 1
                    # d lies in U_n(c, g) exactly for n <= agree
                    for n in range(1, agree + 1):
                        assert levels[n - 1] == target[n - 1], (c.descriptor, d.descriptor, g, n)
                    if d_differs and agree >= 2 and g != c.group.identity:
                        nontrivial += 1
                    if agree == N:
                        assert satisfies(d, constraints)
                        assert power_floor(d, g, N) == power_floor(c, g, N)
            assert nontrivial > 0, c.descriptor


def test_c09_convergence_to_secret(capsys):
    with criterion(capsys, 9, "d_n -> secret(Z) on ball(3)^3 with index <= 2*max|x|+3", 10.0):
        datum = CofinalCentralDatum(Z_LEX, (1,)).validate()
        sequence = [(n, approx_dn(datum, n)) for n in range(1, 13)]
        ball = Z.ball(3)
        triples = list(itertools.product(ball, repeat=3))
        assert len(triples) == 343
        rows = convergence_table(SecretOrder(Z_LEX), sequence, triples)
        for row in rows:
            assert row.index is not None, row.triple
            assert row.index <= 2 * max(abs(x[0]) for x in row.triple) + 3, row


def test_c10_genuine_sequence_through_heisenberg(capsys):
    with criterion(capsys, 10, "Heisenberg genuine sequence n = 2..8: refuted, rot(witness) = 1/n", 30.0):
        H = Heisenberg()
        datum = CofinalCentralDatum(Z2_LEX, (0, 1)).validate()
        seq = genuine_sequence(H, heisenberg_to_z2(), lex_cone(H, [1, 1, 1]), datum, range(2, 9))
        assert len(seq) == 7
        for n, c in zip(range(2, 9), seq):
            witness = tuple(c.provenance["witness"])
            v = rot_exact(c, witness)
            assert isinstance(v, Exact) and v.residue == F(1, n) and v.residue != 0
            verdict = is_secret(c, sample_radius=1, candidates=[witness])
            assert verdict.kind is VerdictKind.REFUTED
            assert verdict.witness["element"] == list(witness)
