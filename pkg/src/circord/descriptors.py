"""JSON descriptors for groups, morphisms, orderings and elements, plus a call-style shorthand.

Every parse error is a :class:`DescriptorError` carrying the JSON path of the
offending node, e.g. ``$.of.group.n``.
"""

from __future__ import annotations

import json
import re
from typing import Any

from .groups import (Cyclic, DescriptorMismatch, DirectProduct, FreeAbelian, Group, Heisenberg, Morphism,
                     Tararin, TararinExt, heisenberg_to_z2, identity_morphism, inclusion_axis,
                     project_factor, scale, tararin_ext_to_cyclic)
from .orders import (ArrangementOrder, CircularOrder, CyclicStandard, LeftOrder, SecretOrder,
                     ConjugatedOrder, constant_order, lex_cone)


class DescriptorError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


# -- small typed accessors -------------------------------------------------

def _require(d: dict, key: str, path: str):
    if not isinstance(d, dict):
        raise DescriptorError(path, f"expected an object, got {type(d).__name__}")
    if key not in d:
        raise DescriptorError(f"{path}.{key}", "missing field")
    return d[key]


def _int(d: dict, key: str, path: str, default: Any = ..., minimum: int | None = None) -> int:
    if default is not ... and key not in d:
        return default
    v = _require(d, key, path)
    if not isinstance(v, int) or isinstance(v, bool):
        raise DescriptorError(f"{path}.{key}", f"expected an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise DescriptorError(f"{path}.{key}", f"must be >= {minimum}, got {v}")
    return v


def _int_list(d: dict, key: str, path: str, default: Any = ...) -> list[int]:
    if default is not ... and key not in d:
        return default
    v = _require(d, key, path)
    if not isinstance(v, list):
        raise DescriptorError(f"{path}.{key}", f"expected a list of integers, got {v!r}")
    for i, x in enumerate(v):
        if not isinstance(x, int) or isinstance(x, bool):
            raise DescriptorError(f"{path}.{key}[{i}]", f"expected an integer, got {x!r}")
    return list(v)


def _wrap(path: str, fn, *args):
    """Run a constructor and turn its ValueError into a located DescriptorError."""
    try:
        return fn(*args)
    except DescriptorError:
        raise
    except (ValueError, TypeError) as exc:
        raise DescriptorError(path, str(exc)) from exc


# -- groups ------------------------------------------------------------------

def parse_group(d: Any, path: str = "$") -> Group:
    d = _coerce(d, path)
    kind = _require(d, "type", path)
    if kind == "cyclic":
        return _wrap(f"{path}.n", Cyclic, _int(d, "n", path, minimum=1))
    if kind == "free_abelian":
        return _wrap(f"{path}.k", FreeAbelian, _int(d, "k", path, minimum=1))
    if kind == "tararin":
        return _wrap(f"{path}.k", Tararin, _int(d, "k", path, minimum=1))
    if kind == "tararin_ext":
        k, n = _int(d, "k", path, minimum=1), _int(d, "n", path, minimum=2)
        return _wrap(f"{path}.n", TararinExt, k, n)
    if kind == "heisenberg":
        return Heisenberg()
    if kind == "direct_product":
        factors = _require(d, "factors", path)
        if not isinstance(factors, list) or not factors:
            raise DescriptorError(f"{path}.factors", "expected a nonempty list of groups")
        return DirectProduct(tuple(parse_group(f, f"{path}.factors[{i}]") for i, f in enumerate(factors)))
    if kind == "central_quotient":
        from .construct import CentralQuotient
        datum = _datum(d, path)
        return CentralQuotient(datum, _int(d, "n", path, minimum=1))
    if kind == "lift":
        from .lift import LiftGroup
        return LiftGroup(parse_circular(_require(d, "of", path), f"{path}.of"))
    raise DescriptorError(f"{path}.type", f"unknown group type {kind!r}")


# -- morphisms -----------------------------------------------------------------

def parse_morphism(d: Any, path: str = "$", source: Group | None = None) -> Morphism:
    if isinstance(d, str):
        d = {"name": d}
    d = _coerce(d, path)
    name = _require(d, "name", path)
    if name == "identity":
        if source is None:
            raise DescriptorError(path, "identity morphism needs a known source group")
        return identity_morphism(source)
    if name == "inclusion_axis_i":
        return _wrap(path, inclusion_axis, _int(d, "i", path), _int(d, "k", path, minimum=1))
    if name == "scale":
        return _wrap(f"{path}.factor", scale, _int(d, "factor", path))
    if name == "heisenberg_to_z2":
        return heisenberg_to_z2()
    if name == "project_factor":
        if not isinstance(source, DirectProduct):
            raise DescriptorError(path, "project_factor needs a direct product source")
        idx = _int(d, "index", path, minimum=0)
        if idx >= len(source.factors):
            raise DescriptorError(f"{path}.index", f"no factor {idx}")
        return project_factor(source, idx)
    if name == "tararin_ext_to_cyclic":
        if not isinstance(source, TararinExt):
            raise DescriptorError(path, "tararin_ext_to_cyclic needs a tararin_ext source")
        return tararin_ext_to_cyclic(source)
    raise DescriptorError(f"{path}.name", f"unknown morphism {name!r}")


def _source_for(d: dict, path: str) -> Group | None:
    return parse_group(d["source"], f"{path}.source") if "source" in d else None


# -- elements --------------------------------------------------------------

def parse_element(G: Group, value: Any, path: str = "$"):
    """Accepts a flat integer list, a single integer, or text like '1', '1,0' or '[1, 0]'."""
    if isinstance(value, str):
        text = value.strip()
        try:
            value = json.loads(text) if text.startswith("[") else [int(t) for t in text.split(",") if t.strip()]
        except ValueError as exc:
            raise DescriptorError(path, f"cannot read element {text!r}") from exc
    if isinstance(value, int) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise DescriptorError(path, f"expected a list of integers, got {value!r}")
    try:
        return G.element_from_list(value)
    except DescriptorMismatch as exc:
        raise DescriptorError(path, str(exc)) from exc


# -- left orders ---------------------------------------------------------------

def parse_left(d: Any, path: str = "$") -> LeftOrder:
    d = _coerce(d, path)
    kind = _require(d, "kind", path)
    if kind in ("lex_cone", "secret_lex"):
        G = parse_group(_require(d, "group", path), f"{path}.group")
        priority = _int_list(d, "priority", path, default=None)
        signs = _int_list(d, "signs", path, default=None)
        if signs is None:
            from .orders import default_priority
            n_signs = len(priority) if priority is not None else len(_wrap(path, default_priority, G))
            signs = [1] * n_signs
        return _wrap(f"{path}.signs", lex_cone, G, signs, priority)
    if kind == "secret":
        return parse_left(_require(d, "of", path), f"{path}.of")
    if kind == "lift_cone":
        from .lift import lift_cone
        return lift_cone(parse_circular(_require(d, "of", path), f"{path}.of"))
    raise DescriptorError(f"{path}.kind", f"unknown left-order kind {kind!r}")


def _datum(d: dict, path: str):
    from .construct import CofinalCentralDatum, ConstructionError

    L = parse_left(_require(d, "h", path), f"{path}.h")
    z = parse_element(L.group, _require(d, "z", path), f"{path}.z")
    try:
        return CofinalCentralDatum(L, z).validate()
    except ConstructionError as exc:
        raise DescriptorError(f"{path}.z", str(exc)) from exc


# -- circular orders -------------------------------------------------------

def _cyclic_n(d: dict, path: str) -> int:
    if "group" in d:
        G = parse_group(d["group"], f"{path}.group")
        if not isinstance(G, Cyclic):
            raise DescriptorError(f"{path}.group", "expected a cyclic group")
        return G.n
    return _int(d, "n", path, minimum=1)


def parse_circular(d: Any, path: str = "$") -> CircularOrder:
    d = _coerce(d, path)
    kind = _require(d, "kind", path)
    if kind == "cyclic_standard":
        return _wrap(f"{path}.unit", CyclicStandard, _cyclic_n(d, path), _int(d, "unit", path, default=1))
    if kind == "cyclic_arrangement":
        return _wrap(f"{path}.arrangement", ArrangementOrder, _cyclic_n(d, path),
                     _int_list(d, "arrangement", path))
    if kind in ("secret_lex", "secret"):
        return SecretOrder(parse_left(d, path))
    if kind == "constant":
        G = parse_group(_require(d, "group", path), f"{path}.group")
        return constant_order(G, _int(d, "value", path, default=1))
    if kind == "conjugated":
        base = parse_circular(_require(d, "of", path), f"{path}.of")
        return ConjugatedOrder(base, parse_element(base.group, _require(d, "by", path), f"{path}.by"))
    if kind == "lex_ses":
        return _parse_lex(d, path)
    if kind == "quotient_mod_z":
        from .construct import quotient_circular
        return quotient_circular(_datum(d, path), _int(d, "n", path, minimum=1))
    if kind == "approx_dn":
        from .construct import approx_dn
        return approx_dn(_datum(d, path), _int(d, "n", path, minimum=1))
    if kind == "pullback":
        from .construct import ConstructionError, pullback
        base = parse_circular(_require(d, "of", path), f"{path}.of")
        phi = parse_morphism(_require(d, "phi", path), f"{path}.phi", source=_source_for(d, path) or base.group)
        try:
            return pullback(base, phi)
        except ConstructionError as exc:
            raise DescriptorError(f"{path}.phi", str(exc)) from exc
    raise DescriptorError(f"{path}.kind", f"unknown ordering kind {kind!r}")


def _parse_lex(d: dict, path: str):
    from .construct import ConstructionError, ShortExactSequence, lex_extend

    ses_d = _coerce(_require(d, "ses", path), f"{path}.ses")
    G = parse_group(_require(ses_d, "total", f"{path}.ses"), f"{path}.ses.total")
    phi = parse_morphism(_require(ses_d, "projection", f"{path}.ses"), f"{path}.ses.projection", source=G)
    if phi.source != G:
        raise DescriptorError(f"{path}.ses.projection", "projection source differs from the total group")
    if "quotient" in ses_d:
        H = parse_group(ses_d["quotient"], f"{path}.ses.quotient")
        if H != phi.target:
            raise DescriptorError(f"{path}.ses.quotient", "quotient differs from the projection target")
    ses = ShortExactSequence(G, phi.target, phi, {"total": G.to_json(), "quotient": phi.target.to_json(),
                                                  "projection": phi.to_json()})
    kernel = parse_left(_require(d, "kernel_order", path), f"{path}.kernel_order")
    if kernel.group != G:
        raise DescriptorError(f"{path}.kernel_order", "kernel order must be given on the total group")
    quotient = parse_circular(_require(d, "quotient_order", path), f"{path}.quotient_order")
    try:
        return lex_extend(ses, kernel, quotient)
    except ConstructionError as exc:
        raise DescriptorError(path, str(exc)) from exc


def parse_ordering(d: Any, path: str = "$"):
    """A circular ordering, or a left order when the kind names a cone."""
    d = _coerce(d, path)
    if isinstance(d, dict) and d.get("kind") in ("lex_cone", "lift_cone"):
        return parse_left(d, path)
    return parse_circular(d, path)


# -- text input: inline JSON or call-style shorthand -------------------------

def _coerce(d: Any, path: str):
    if isinstance(d, str):
        return load_text(d, path)
    return d


def load_text(text: str, path: str = "$"):
    text = text.strip()
    if text.startswith("{") or text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise DescriptorError(path, f"invalid JSON: {exc.msg} at offset {exc.pos}") from exc
    return _Shorthand(text, path).parse()


_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")

# name -> (descriptor key, value, positional parameter names)
_GROUPS = {
    "cyclic": ("type", "cyclic", ["n"]),
    "Zn": ("type", "cyclic", ["n"]),
    "Z": ("type", "free_abelian", ["k"]),
    "free_abelian": ("type", "free_abelian", ["k"]),
    "tararin": ("type", "tararin", ["k"]),
    "tararin_ext": ("type", "tararin_ext", ["k", "n"]),
    "heisenberg": ("type", "heisenberg", []),
    "product": ("type", "direct_product", None),
}
_ORDERS = {
    "std": ("kind", "cyclic_standard", ["n", "unit"]),
    "cyclic_standard": ("kind", "cyclic_standard", ["n", "unit"]),
    "arrangement": ("kind", "cyclic_arrangement", ["n", "arrangement"]),
    "cyclic_arrangement": ("kind", "cyclic_arrangement", ["n", "arrangement"]),
    "lex_cone": ("kind", "lex_cone", ["group", "signs", "priority"]),
    "secret_lex": ("kind", "secret_lex", ["group", "signs", "priority"]),
    "secret": ("kind", "secret_lex", ["group", "signs", "priority"]),
    "constant": ("kind", "constant", ["group", "value"]),
    "conjugated": ("kind", "conjugated", ["of", "by"]),
    "quotient_mod_z": ("kind", "quotient_mod_z", ["h", "z", "n"]),
    "approx_dn": ("kind", "approx_dn", ["n", "h", "z"]),
    "pullback": ("kind", "pullback", ["of", "phi", "source"]),
    "lift_cone": ("kind", "lift_cone", ["of"]),
}


class _Shorthand:
    """name(arg, key=value, ...) with integers, [lists] and nested calls as values."""

    def __init__(self, text: str, path: str):
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip() == "":
                continue
            num, ident, other = m.groups()
            self.tokens.append(("int", int(num)) if num is not None else
                               ("name", ident) if ident is not None else ("sym", other))
        self.i = 0
        self.text = text
        self.path = path

    def _fail(self, msg):
        raise DescriptorError(self.path, f"cannot parse {self.text!r}: {msg}")

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", None)

    def _next(self):
        tok = self._peek()
        self.i += 1
        return tok

    def _expect(self, sym):
        tok = self._next()
        if tok != ("sym", sym):
            self._fail(f"expected {sym!r}")

    def parse(self):
        value = self._value()
        if self._peek()[0] != "end":
            self._fail("trailing input")
        if isinstance(value, str) and _GROUPS.get(value, (0, 0, None))[2] == []:
            return self._build(value, [], {})
        return value

    def _value(self):
        kind, val = self._next()
        if kind == "int":
            return val
        if kind == "sym" and val == "[":
            items = []
            if self._peek() != ("sym", "]"):
                items.append(self._value())
                while self._peek() == ("sym", ","):
                    self._next()
                    items.append(self._value())
            self._expect("]")
            return items
        if kind == "name":
            if self._peek() != ("sym", "("):
                return val
            self._next()
            args, kwargs = [], {}
            if self._peek() != ("sym", ")"):
                self._arg(args, kwargs)
                while self._peek() == ("sym", ","):
                    self._next()
                    self._arg(args, kwargs)
            self._expect(")")
            return self._build(val, args, kwargs)
        self._fail(f"unexpected token {val!r}")

    def _arg(self, args, kwargs):
        if self._peek()[0] == "name" and self.tokens[self.i + 1:self.i + 2] == [("sym", "=")]:
            key = self._next()[1]
            self._next()
            kwargs[key] = self._value()
        else:
            if kwargs:
                self._fail("positional argument after keyword argument")
            args.append(self._value())

    def _build(self, name, args, kwargs):
        if name == "approx" or (name == "approx_dn" and "h" not in kwargs and len(args) < 2):
            return self._approx(args, kwargs)
        table = _GROUPS if name in _GROUPS else _ORDERS if name in _ORDERS else None
        if table is None:
            self._fail(f"unknown name {name!r}")
        key, value, params = table[name]
        out = {key: value}
        if params is None:  # variadic product
            out["factors"] = list(args)
            return out
        if len(args) > len(params):
            self._fail(f"{name} takes at most {len(params)} positional arguments")
        out.update(zip(params, args))
        out.update(kwargs)
        if isinstance(out.get("group"), int) and name in ("secret", "secret_lex", "lex_cone"):
            out["group"] = {"type": "free_abelian", "k": out["group"]}
        if name in ("secret", "secret_lex", "lex_cone", "constant") and isinstance(out.get("group"), str):
            out["group"] = _Shorthand(out["group"] + "()", self.path).parse()
        if isinstance(out.get("phi"), str):
            out["phi"] = {"name": out["phi"]}
        return out

    def _approx(self, args, kwargs):
        """approx(n, k=1): d_n on Z^k with the all-positive lex order and z the top generator."""
        n = kwargs.get("n", args[0] if args else None)
        k = kwargs.get("k", args[1] if len(args) > 1 else 1)
        if not isinstance(n, int) or not isinstance(k, int) or k < 1:
            self._fail("approx needs integer n and k >= 1")
        z = [0] * k
        z[-1] = 1
        return {"kind": "approx_dn", "h": {"kind": "lex_cone", "group": {"type": "free_abelian", "k": k},
                                           "signs": [1] * k}, "z": z, "n": n}
