"""Rotation numbers, the translation defect tau, and semiconjugacy verdicts.

Lifts are always the canonical (g, 0).  Estimates come from the level of
(g, 0)^n and carry radius 1/n; exact values come from one of three paths:

* torsion: g^m = id, so (g, 0)^m = z^T and the lifted rotation number is T/m;
* secret: c = c_< for a known cone, and the lifted rotation number of (g, 0) is eta(g);
* quotient: c is a lexicographic extension whose kernel is convex.  If q(g) has
  order m then g^m lies in the kernel and the value is (level + eta_K(g^m)) / m;
  otherwise the value is inherited from the quotient ordering modulo Z.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .groups import Element, is_identity, sample_pairs
from .lift import EtaFunction, cocycle_f, power_floor
from .orders import CircularOrder, ConjugatedOrder

DEFAULT_N = 256
DEFAULT_PAIR_CAP = 10_000


@dataclass(frozen=True)
class Exact:
    """Exact value of the lifted rotation number; ``mod_one`` means only its class mod Z is known."""

    value: Fraction
    path: str
    mod_one: bool = False

    @property
    def residue(self) -> Fraction:
        return self.value % 1

    @property
    def radius(self) -> Fraction:
        return Fraction(0)

    @property
    def center(self) -> Fraction:
        return self.value


@dataclass(frozen=True)
class Certified:
    center: Fraction
    radius: Fraction
    path: str = "estimate"
    mod_one: bool = False

    @property
    def lo(self):
        return self.center - self.radius

    @property
    def hi(self):
        return self.center + self.radius

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


RotationValue = Exact | Certified


class VerdictKind(str, Enum):
    CERTIFIED_EQUAL = "CertifiedEqual"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class Verdict:
    kind: VerdictKind
    witness: dict | None = None
    separation: Fraction | None = None
    checked: int = 0

    def to_json(self):
        out = {"verdict": self.kind.value, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.separation is not None:
            out["closest_separation"] = _frac_json(self.separation)
        return out


def _frac_json(x: Fraction):
    return [x.numerator, x.denominator]


def value_json(v: RotationValue) -> dict:
    out = {"path": v.path, "value": _frac_json(v.center), "radius": _frac_json(v.radius)}
    if v.mod_one:
        out["mod_one"] = True
    return out


# -- estimates and exact paths ----------------------------------------------

def rot_estimate(c: CircularOrder, g: Element, n: int = DEFAULT_N) -> Certified:
    """[(g,0)^n]/n with radius 1/n; encloses the lifted rotation number of (g, 0)."""
    return Certified(Fraction(power_floor(c, g, n), n), Fraction(1, n))


def _torsion_path(c, g):
    m = c.group.order(g)
    if m is None:
        return None
    return Exact(Fraction(power_floor(c, g, m), m), "torsion")


def _secret_path(c, g):
    cone = c.secret_cone
    if cone is None:
        return None
    return Exact(Fraction(EtaFunction(cone)(g)), "secret")


def _quotient_path(c, g):
    lex = getattr(c, "lex", None)
    if lex is None:
        return None
    ses, kernel_order, quotient_order = lex
    G = c.group
    qg = ses.project(g)
    m = ses.quotient.order(qg)
    if m is not None:
        gm = G.power(g, m)
        eta = 0 if is_identity(gm) or kernel_order.positive(gm) else 1
        return Exact(Fraction(power_floor(c, g, m) + eta, m), "quotient")
    inner = rot_exact(quotient_order, qg)
    if inner is None:
        return None
    return Exact(inner.residue, "quotient>" + inner.path, mod_one=True)


def _pullback_path(c, g):
    pb = getattr(c, "pullback_of", None)
    if pb is None:
        return None
    base, phi = pb
    # f_{phi*c}(g, h) = f_c(phi g, phi h) for injective phi, so the levels agree termwise
    inner = rot_exact(base, phi(g))
    if inner is None:
        return None
    return Exact(inner.value, "pullback>" + inner.path, inner.mod_one)


_PATHS = (("torsion", _torsion_path), ("secret", _secret_path),
          ("quotient", _quotient_path), ("pullback", _pullback_path))


def rot_exact_all(c: CircularOrder, g: Element) -> dict[str, Exact]:
    """Every exact path that applies, keyed by path name."""
    out = {}
    for name, path in _PATHS:
        v = path(c, g)
        if v is not None:
            out[name] = v
    return out


def rot_exact(c: CircularOrder, g: Element) -> Exact | None:
    """Exact lifted rotation number of (g, 0), by precedence torsion > secret > quotient."""
    for _, path in _PATHS:
        v = path(c, g)
        if v is not None:
            return v
    return None


def rotation(c: CircularOrder, g: Element, n: int = DEFAULT_N) -> RotationValue:
    v = rot_exact(c, g)
    return v if v is not None else rot_estimate(c, g, n)


def tau(c: CircularOrder, g: Element, h: Element, n: int = DEFAULT_N, exact: bool = True) -> RotationValue:
    """rot~((g,0)(h,0)) - rot~((g,0)) - rot~((h,0)); the product lift is (gh, f_c(g, h))."""
    G = c.group
    gh = G.mul(g, h)
    f = cocycle_f(c, g, h)
    if exact:
        vals = [rot_exact(c, x) for x in (gh, g, h)]
        if all(v is not None and not v.mod_one for v in vals):
            return Exact(vals[0].value + f - vals[1].value - vals[2].value, "exact")
    e_gh, e_g, e_h = (rot_estimate(c, x, n) for x in (gh, g, h))
    return Certified(e_gh.center + f - e_g.center - e_h.center, Fraction(3, n))


# -- comparisons ------------------------------------------------------------

def _gap(a: RotationValue, b: RotationValue, modular: bool) -> Fraction:
    """Distance between the two enclosures (negative or zero means they overlap)."""
    d = a.center - b.center
    if modular:
        d = d % 1
        if d > Fraction(1, 2):
            d -= 1
    return abs(d) - a.radius - b.radius


def compare(a: RotationValue, b: RotationValue, modular: bool) -> tuple[str, Fraction]:
    """'equal' (both exact and equal), 'disjoint', or 'overlap', with the separation."""
    modular = modular or a.mod_one or b.mod_one
    gap = _gap(a, b, modular)
    if isinstance(a, Exact) and isinstance(b, Exact):
        return ("equal" if gap == 0 else "disjoint"), gap
    return ("disjoint" if gap > 0 else "overlap"), gap


def _element_list(c: CircularOrder, g):
    return c.group.element_to_list(g)


class _Aggregate:
    """Folds per-witness comparisons into a verdict; order of folding does not matter."""

    def __init__(self):
        self.all_equal = True
        self.refuted: dict | None = None
        self.closest: Fraction | None = None
        self.checked = 0

    def add(self, status: str, gap: Fraction, witness: dict):
        self.checked += 1
        if status == "disjoint":
            if self.refuted is None:
                self.refuted = witness
            return
        if status == "overlap":
            self.all_equal = False
            if self.closest is None or gap > self.closest:
                self.closest = gap

    def verdict(self) -> Verdict:
        if self.refuted is not None:
            return Verdict(VerdictKind.REFUTED, self.refuted, checked=self.checked)
        if self.all_equal:
            return Verdict(VerdictKind.CERTIFIED_EQUAL, checked=self.checked)
        return Verdict(VerdictKind.INCONCLUSIVE, separation=self.closest, checked=self.checked)


ZERO = Exact(Fraction(0), "zero")


def _sample_elements(c, radius, candidates, cap, rng):
    G = c.group
    elements = list(candidates)
    ball = G.ball(radius)
    if len(ball) > cap:
        ball = [rng.choice(ball) for _ in range(cap)]
    seen = set(elements)
    elements += [x for x in ball if x not in seen]
    return elements


def is_secret(c: CircularOrder, sample_radius: int = 2, n: int = DEFAULT_N,
              candidates: Iterable[Element] = (), pair_cap: int = DEFAULT_PAIR_CAP,
              seed: int = 0, stop_on_refute: bool = True) -> Verdict:
    """Decide membership in the secret class: rot = 0 and tau = 0 on the sample."""
    rng = random.Random(seed)
    elements = _sample_elements(c, sample_radius, candidates, pair_cap, rng)
    agg = _Aggregate()
    for g in elements:
        v = rotation(c, g, n)
        status, gap = compare(v, ZERO, modular=True)
        agg.add(status, gap, {"kind": "rot", "element": _element_list(c, g), **value_json(v)})
        if agg.refuted is not None and stop_on_refute:
            return agg.verdict()
    for g, h in sample_pairs(elements, pair_cap, rng):
        v = tau(c, g, h, n)
        status, gap = compare(v, ZERO, modular=False)
        agg.add(status, gap, {"kind": "tau", "pair": [_element_list(c, g), _element_list(c, h)],
                              **value_json(v)})
        if agg.refuted is not None and stop_on_refute:
            return agg.verdict()
    return agg.verdict()


def semiconjugate(c: CircularOrder, d: CircularOrder, generators: Sequence[Element],
                  pair_sample: Sequence[tuple] | None = None, n: int = DEFAULT_N,
                  radius: int = 2, seed: int = 0, pair_cap: int = DEFAULT_PAIR_CAP) -> Verdict:
    """Compare rot on the generators and tau on the pairs.

    Equality is certified only when every compared value is exact on both sides.
    """
    if c.group != d.group:
        raise ValueError("orderings live on different groups")
    rng = random.Random(seed)
    agg = _Aggregate()
    for s in generators:
        a, b = rotation(c, s, n), rotation(d, s, n)
        status, gap = compare(a, b, modular=True)
        agg.add(status, gap, {"kind": "rot", "element": _element_list(c, s),
                              "a": value_json(a), "b": value_json(b)})
        if agg.refuted is not None:
            return agg.verdict()
    if pair_sample is None:
        pair_sample = sample_pairs(c.group.ball(radius), pair_cap, rng)
    for g, h in pair_sample:
        a, b = tau(c, g, h, n), tau(d, g, h, n)
        status, gap = compare(a, b, modular=False)
        agg.add(status, gap, {"kind": "tau", "pair": [_element_list(c, g), _element_list(c, h)],
                              "a": value_json(a), "b": value_json(b)})
        if agg.refuted is not None:
            return agg.verdict()
    return agg.verdict()


@dataclass
class ConjugationRow:
    element: Element
    quantity: str
    status: str  # exact-equal, exact-mismatch, overlap, disjoint
    values: tuple


@dataclass
class ConjugationReport:
    rows: list = field(default_factory=list)

    @property
    def exact_equal(self) -> int:
        return sum(r.status == "exact-equal" for r in self.rows)

    @property
    def violations(self) -> list:
        return [r for r in self.rows if r.status in ("exact-mismatch", "disjoint")]

    @property
    def passed(self) -> bool:
        return not self.violations


def _status(a, b, modular):
    st, _ = compare(a, b, modular)
    if st == "equal":
        return "exact-equal"
    if st == "disjoint" and isinstance(a, Exact) and isinstance(b, Exact):
        return "exact-mismatch"
    return st


def check_conjugation_invariance(c: CircularOrder, g: Element, sample: Sequence[Element],
                                 n: int = DEFAULT_N) -> ConjugationReport:
    """rot_c(h) against rot_c(g h g^-1) and rot_{c.g}(h); tau_c(h, g) against its conjugate pair.

    Exact paths are required to agree exactly; certified enclosures can only overlap.
    """
    G = c.group
    cg = ConjugatedOrder(c, g)
    report = ConjugationReport()
    for h in sample:
        r_h = rotation(c, h, n)
        r_conj = rotation(c, G.conj(g, h), n)
        r_act = rotation(cg, h, n)
        report.rows.append(ConjugationRow(h, "rot(h) vs rot(ghg^-1)", _status(r_h, r_conj, True), (r_h, r_conj)))
        report.rows.append(ConjugationRow(h, "rot_c(h) vs rot_(c.g)(h)", _status(r_h, r_act, True), (r_h, r_act)))
        t = tau(c, h, g, n)
        t_conj = tau(c, G.conj(g, h), g, n)
        report.rows.append(ConjugationRow(h, "tau(h,g) vs tau(ghg^-1,g)", _status(t, t_conj, False), (t, t_conj)))
    return report
