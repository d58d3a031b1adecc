import pytest

from circord.construct import LexExtension, PullbackOrder, QuotientOrder
from circord.descriptors import (DescriptorError, load_text, parse_circular, parse_element, parse_group,
                                 parse_left, parse_morphism, parse_ordering)
from circord.groups import Cyclic, DirectProduct, FreeAbelian, Heisenberg, Tararin, TararinExt
from circord.lift import LiftElement, LiftGroup
from circord.orders import CyclicStandard, LeftOrder, SecretOrder, lex_cone


@pytest.mark.parametrize("d, G", [
    ({"type": "cyclic", "n": 5}, Cyclic(5)),
    ({"type": "free_abelian", "k": 2}, FreeAbelian(2)),
    ({"type": "tararin", "k": 2}, Tararin(2)),
    ({"type": "tararin_ext", "k": 1, "n": 2}, TararinExt(1, 2)),
    ({"type": "heisenberg"}, Heisenberg()),
    ({"type": "direct_product", "factors": [{"type": "free_abelian", "k": 1}, {"type": "cyclic", "n": 3}]},
     DirectProduct((FreeAbelian(1), Cyclic(3)))),
])
def test_group_roundtrip(d, G):
    assert parse_group(d) == G
    assert G.to_json() == d


def test_lift_group_descriptor():
    G = parse_group({"type": "lift", "of": {"kind": "cyclic_standard", "group": {"type": "cyclic", "n": 3}}})
    assert isinstance(G, LiftGroup) and G.base == Cyclic(3)


@pytest.mark.parametrize("c", [
    CyclicStandard(7, 3),
    SecretOrder(lex_cone(Tararin(2), [1, -1])),
    SecretOrder(lex_cone(Heisenberg(), [-1, 1, 1])),
], ids=["cyclic", "tararin", "heisenberg"])
def test_ordering_descriptor_roundtrip(c):
    back = parse_circular(c.descriptor)
    assert back.descriptor == c.descriptor
    for t in [((0,) * len(c.group.identity), x, y) for x in c.group.ball(1) for y in c.group.ball(1)]:
        assert back(*t) == c(*t)


def test_constructed_descriptors_rebuild():
    approx = {"kind": "approx_dn", "h": {"kind": "lex_cone", "group": {"type": "free_abelian", "k": 1},
                                        "signs": [1]}, "z": [1], "n": 4}
    d = parse_circular(approx)
    assert isinstance(d, LexExtension) and d.descriptor == approx
    q = parse_circular({**approx, "kind": "quotient_mod_z"})
    assert isinstance(q, QuotientOrder) and q.group.n == 4
    p = parse_circular({"kind": "pullback", "of": approx, "phi": {"name": "scale", "factor": 2}})
    assert isinstance(p, PullbackOrder) and p((0,), (1,), (2,)) == d((0,), (2,), (4,))
    again = parse_circular(p.descriptor)
    assert again((0,), (1,), (3,)) == p((0,), (1,), (3,))
    conj = parse_circular({"kind": "conjugated", "of": {"kind": "cyclic_standard", "n": 3}, "by": [1]})
    assert conj((0,), (1,), (2,)) == 1


def test_lex_ses_descriptor():
    G = {"type": "direct_product", "factors": [{"type": "free_abelian", "k": 1}, {"type": "cyclic", "n": 2}]}
    d = {"kind": "lex_ses", "ses": {"total": G, "projection": {"name": "project_factor", "index": 1}},
         "kernel_order": {"kind": "lex_cone", "group": G, "signs": [1]},
         "quotient_order": {"kind": "cyclic_standard", "n": 2}}
    c = parse_circular(d)
    assert c((0, 0), (3, 0), (0, 1)) == 1
    assert parse_circular(c.descriptor)((0, 0), (3, 0), (0, 1)) == 1


def test_left_orders():
    L = parse_left({"kind": "lex_cone", "group": {"type": "heisenberg"}})
    assert L.descriptor["signs"] == [1, 1, 1]
    assert isinstance(parse_ordering({"kind": "lex_cone", "group": {"type": "tararin", "k": 2}}), LeftOrder)
    lc = parse_left({"kind": "lift_cone", "of": {"kind": "cyclic_standard", "n": 3}})
    assert lc.positive(LiftElement((1,), 0)) and not lc.positive(LiftElement((0,), 0))


def test_morphisms():
    assert parse_morphism("heisenberg_to_z2").target == FreeAbelian(2)
    assert parse_morphism({"name": "inclusion_axis_i", "i": 1, "k": 2})((3,)) == (0, 3)
    with pytest.raises(DescriptorError):
        parse_morphism("identity")
    with pytest.raises(DescriptorError) as info:
        parse_morphism({"name": "warp"})
    assert info.value.path == "$.name"


def test_elements():
    G = Heisenberg()
    assert parse_element(G, "1,0,2") == (1, 0, 2)
    assert parse_element(G, "[1, 0, 2]") == (1, 0, 2)
    assert parse_element(Cyclic(4), 3) == (3,)
    with pytest.raises(DescriptorError):
        parse_element(Cyclic(4), 4)
    with pytest.raises(DescriptorError):
        parse_element(G, "1,a")


@pytest.mark.parametrize("d, path", [
    ({"kind": "secret_lex", "group": {"type": "cyclic", "n": "five"}}, "$.group.n"),
    ({"kind": "conjugated", "of": {"kind": "cyclic_standard", "group": {"type": "cyclic", "n": 0}}, "by": [0]},
     "$.of.group.n"),
    ({"kind": "cyclic_standard", "group": {"type": "cyclic", "n": 4}, "unit": 2}, "$.unit"),
    ({"kind": "nope"}, "$.kind"),
    ({"group": {}}, "$.kind"),
    ({"kind": "secret_lex", "group": {"type": "free_abelian", "k": 2}, "signs": [1]}, "$.signs"),
    ({"kind": "approx_dn", "h": {"kind": "lex_cone", "group": {"type": "free_abelian", "k": 2}}, "z": [1, 0],
      "n": 2}, "$.z"),
    ({"kind": "pullback", "of": {"kind": "secret_lex", "group": {"type": "free_abelian", "k": 2}},
      "phi": "heisenberg_to_z2"}, "$.phi"),
])
def test_errors_name_json_path(d, path):
    with pytest.raises(DescriptorError) as info:
        parse_circular(d)
    assert info.value.path == path


def test_shorthand():
    assert load_text("cyclic_standard(n=3,unit=1)") == {"kind": "cyclic_standard", "n": 3, "unit": 1}
    assert load_text("std(3, 2)") == {"kind": "cyclic_standard", "n": 3, "unit": 2}
    assert load_text("secret(Z(2), [1, -1])") == {"kind": "secret_lex", "group": {"type": "free_abelian", "k": 2},
                                                  "signs": [1, -1]}
    assert load_text("product(Z(1), cyclic(3))") == {
        "type": "direct_product", "factors": [{"type": "free_abelian", "k": 1}, {"type": "cyclic", "n": 3}]}
    d = parse_circular("approx(4)")
    assert d((0,), (2,), (5,)) == -1
    assert parse_circular("constant(heisenberg)").descriptor["group"] == {"type": "heisenberg"}


@pytest.mark.parametrize("text", ["std(3", "std(3,,1)", "std(n=3, 1)", "unknown(1)", "std(3) extra", "{bad json"])
def test_shorthand_errors(text):
    with pytest.raises(DescriptorError):
        load_text(text)
