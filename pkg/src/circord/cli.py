"""Batch command-line front end.

Exit codes: 0 success / CertifiedEqual / passed, 1 Refuted / validation
failure, 2 Inconclusive, 3 usage or descriptor error, 4 I/O error,
5 construction or enumeration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import re
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import construct, enumeration, orders, semiconj
from .descriptors import DescriptorError, load_text, parse_circular, parse_element, parse_left, parse_ordering
from .groups import Tararin

SCHEMA_VERSION = "1.0.0"

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_IO, EXIT_CONSTRUCTION = 0, 1, 2, 3, 4, 5

VERDICT_EXIT = {
    semiconj.VerdictKind.CERTIFIED_EQUAL: EXIT_OK,
    semiconj.VerdictKind.REFUTED: EXIT_FAIL,
    semiconj.VerdictKind.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


def report_schema_version() -> str:
    return SCHEMA_VERSION


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Report:
    """Collected output of one command: a JSON result plus optional flat rows for CSV."""

    def __init__(self, result: dict, rows: list[dict] | None = None, columns: Sequence[str] | None = None,
                 exit_code: int = EXIT_OK):
        self.result = result
        self.rows = rows
        self.columns = list(columns) if columns else None
        self.exit_code = exit_code


# -- input helpers -------------------------------------------------------------

def _read_descriptor(value: str, flag: str):
    """Inline JSON, shorthand, or a path to a JSON file (optionally prefixed with @)."""
    text = value
    forced = value.startswith("@")
    if forced:
        value = value[1:]
    if forced or (not value.lstrip().startswith(("{", "[")) and "(" not in value and os.path.exists(value)):
        try:
            with open(value, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"{flag}: cannot read {value}: {exc}") from exc
    return load_text(text, f"$[{flag}]")


def _ordering(value: str, flag: str):
    return parse_ordering(_read_descriptor(value, flag), f"$[{flag}]")


def _circular(value: str, flag: str):
    return parse_circular(_read_descriptor(value, flag), f"$[{flag}]")


def _left(value: str, flag: str):
    return parse_left(_read_descriptor(value, flag), f"$[{flag}]")


def _elements(G, values: Sequence[str] | None, flag: str):
    return [parse_element(G, v, f"$[{flag}]") for v in (values or [])]


def _frac(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


def _value_row(label: str, v) -> dict:
    return {"element": label, "path": v.path, "value_num": v.center.numerator, "value_den": v.center.denominator,
            "radius_num": v.radius.numerator, "radius_den": v.radius.denominator}


VALUE_COLUMNS = ("element", "path", "value_num", "value_den", "radius_num", "radius_den")


def _label(G, g) -> str:
    return ",".join(str(v) for v in G.element_to_list(g))


def _datum_from_args(args):
    L = _left(args.h, "--h")
    z = parse_element(L.group, args.z, "$[--z]")
    return construct.CofinalCentralDatum(L, z, bound=args.bound).validate()


# -- commands ------------------------------------------------------------------

def cmd_validate(args) -> Report:
    oracle = _ordering(args.ordering, "--ordering")
    exhaustive = {"auto": None, "on": True, "off": False}[args.exhaustive]
    rep = orders.validate(oracle, sample_radius=args.radius, sample_count=args.samples, seed=args.seed,
                          exhaustive=exhaustive)
    rows = [{"axiom": v.axiom, "elements": ";".join(_label(oracle.group, x) for x in v.elements)}
            for v in rep.violations]
    return Report({"ordering": oracle.descriptor, **rep.to_json(oracle.group)}, rows, ("axiom", "elements"),
                  EXIT_OK if rep.passed else EXIT_FAIL)


def cmd_rot(args) -> Report:
    c = _circular(args.ordering, "--ordering")
    G = c.group
    elements = _elements(G, args.element, "--element")
    if not elements:
        raise UsageError("rot needs at least one --element")
    values, rows = [], []
    code = EXIT_OK
    for g in elements:
        v = semiconj.rot_exact(c, g)
        if v is None:
            if args.exact:
                code = EXIT_INCONCLUSIVE
            v = semiconj.rot_estimate(c, g, args.n)
        values.append({"element": G.element_to_list(g), **semiconj.value_json(v)})
        rows.append(_value_row(_label(G, g), v))
    return Report({"ordering": c.descriptor, "n": args.n, "values": values}, rows, VALUE_COLUMNS, code)


def cmd_tau(args) -> Report:
    c = _circular(args.ordering, "--ordering")
    G = c.group
    g = parse_element(G, args.g, "$[--g]")
    h = parse_element(G, args.h, "$[--h]")
    v = semiconj.tau(c, g, h, args.n, exact=not args.estimate)
    label = f"{_label(G, g)};{_label(G, h)}"
    return Report({"ordering": c.descriptor, "g": G.element_to_list(g), "h": G.element_to_list(h),
                   **semiconj.value_json(v)}, [_value_row(label, v)], VALUE_COLUMNS)


def _verdict_report(verdict, extra: dict) -> Report:
    rows = [{"verdict": verdict.kind.value, "checked": verdict.checked,
             "witness": json.dumps(verdict.witness, sort_keys=True) if verdict.witness else ""}]
    return Report({**extra, **verdict.to_json()}, rows, ("verdict", "checked", "witness"),
                  VERDICT_EXIT[verdict.kind])


def cmd_secret(args) -> Report:
    c = _circular(args.ordering, "--ordering")
    cands = _elements(c.group, args.element, "--element")
    verdict = semiconj.is_secret(c, sample_radius=args.radius, n=args.n, candidates=cands, seed=args.seed,
                                 pair_cap=args.pair_cap)
    return _verdict_report(verdict, {"ordering": c.descriptor})


def cmd_semiconj(args) -> Report:
    a = _circular(args.a, "--a")
    b = _circular(args.b, "--b")
    if a.group != b.group:
        raise DescriptorError("$[--b]", "orderings live on different groups")
    gens = _elements(a.group, args.gens, "--gens")
    verdict = semiconj.semiconjugate(a, b, gens, n=args.n, radius=args.radius, seed=args.seed,
                                     pair_cap=args.pair_cap)
    return _verdict_report(verdict, {"a": a.descriptor, "b": b.descriptor})


def cmd_lex(args) -> Report:
    desc = {"kind": "lex_ses", "ses": _read_descriptor(args.ses, "--ses"),
            "kernel_order": _read_descriptor(args.kernel_order, "--kernel-order"),
            "quotient_order": _read_descriptor(args.quotient_order, "--quotient-order")}
    c = parse_circular(desc, "$")
    rep = orders.validate(c, sample_radius=args.radius, sample_count=args.samples, seed=args.seed)
    rows = _triple_rows(c, _elements(c.group, args.element, "--element"))
    result = {"ordering": c.descriptor, "validation": rep.to_json(c.group)}
    if rows:
        result["triples"] = rows
    return Report(result, rows, ("triple", "value"), EXIT_OK if rep.passed else EXIT_FAIL)


def _triple_rows(c, elements):
    G = c.group
    return [{"triple": ";".join(_label(G, x) for x in t), "value": c(*t)}
            for t in itertools.permutations(elements, 3)] if len(elements) >= 3 else []


def cmd_quotient(args) -> Report:
    datum = _datum_from_args(args)
    q = construct.quotient_circular(datum, args.n)
    Q = q.group
    reps = Q.ball(args.radius)
    rep = orders.validate(q, sample_radius=args.radius, sample_count=args.samples, seed=args.seed)
    rows = [{"representative": _label(Q, x), "order": Q.order(x) or ""} for x in reps]
    return Report({"ordering": q.descriptor, "datum": datum.witnesses,
                   "representatives": [Q.element_to_list(x) for x in reps],
                   "validation": rep.to_json(Q)}, rows, ("representative", "order"),
                  EXIT_OK if rep.passed else EXIT_FAIL)


def cmd_approx(args) -> Report:
    datum = _datum_from_args(args)
    G = datum.group
    elements = _elements(G, args.element, "--element") or [datum.z]
    values, rows = [], []
    for n in _int_list(args.ns, "--ns"):
        for g in elements:
            v = construct.approx_rot(datum, n, g)
            values.append({"n": n, "element": G.element_to_list(g), "residue": _frac(v.residue),
                           **semiconj.value_json(v)})
            rows.append({"n": n, **_value_row(_label(G, g), v)})
    return Report({"datum": datum.to_json(), "values": values}, rows, ("n",) + VALUE_COLUMNS)


def cmd_genuine(args) -> Report:
    from .descriptors import parse_group, parse_morphism

    G = parse_group(_read_descriptor(args.group, "--group"), "$[--group]")
    phi = parse_morphism(_read_descriptor(args.phi, "--phi"), "$[--phi]", source=G)
    kernel = _left(args.kernel_order, "--kernel-order")
    datum = _datum_from_args(args)
    members = construct.genuine_sequence(G, phi, kernel, datum, _int_list(args.ns, "--ns"))
    code = EXIT_OK
    out, rows = [], []
    for c in members:
        witness = G.element_from_list(c.provenance["witness"])
        v = semiconj.rot_exact(c, witness)
        verdict = semiconj.is_secret(c, sample_radius=args.radius, n=args.n, candidates=[witness],
                                     seed=args.seed, pair_cap=args.pair_cap)
        genuine = v is not None and v.residue != 0 and verdict.kind is semiconj.VerdictKind.REFUTED
        if not genuine:
            code = EXIT_FAIL
        out.append({"n": c.provenance["n"], "witness": c.provenance["witness"],
                    "rot": semiconj.value_json(v) if v else None, "is_secret": verdict.to_json(),
                    "genuine": genuine})
        rows.append({"n": c.provenance["n"], "witness": _label(G, witness),
                     "value_num": v.residue.numerator if v else "", "value_den": v.residue.denominator if v else "",
                     "verdict": verdict.kind.value})
    return Report({"group": G.to_json(), "phi": phi.to_json(), "kernel_order": kernel.descriptor,
                   "datum": datum.to_json(), "members": out}, rows,
                  ("n", "witness", "value_num", "value_den", "verdict"), code)


def cmd_enumerate(args) -> Report:
    start = time.perf_counter()
    if (args.cyclic is None) == (args.tararin is None):
        raise UsageError("enumerate needs exactly one of --cyclic N or --tararin K")
    if args.cyclic is not None:
        found = enumeration.enumerate_co_cyclic(args.cyclic)
        items = [c.descriptor for c in found]
        summary = {"n": args.cyclic, "count": len(found)}
        rows = [{"index": i, "arrangement": " ".join(map(str, c.arrangement))} for i, c in enumerate(found)]
        columns = ("index", "arrangement")
    else:
        G = Tararin(args.tararin)
        found = enumeration.enumerate_lo_ball(G, args.radius)
        items = [c.to_json(G) for c in found]
        summary = {"k": args.tararin, "radius": args.radius, "count": len(found)}
        rows = [{"index": i, "positive": " ".join(k for k, s in c.to_json(G)["signs"].items() if s > 0)}
                for i, c in enumerate(found)]
        columns = ("index", "positive")
    if args.timing:
        summary["elapsed_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return Report({"summary": summary, "items": items}, rows, columns)


def cmd_convergence(args) -> Report:
    datum = _datum_from_args(args)
    G = datum.group
    target = _circular(args.target, "--target") if args.target else orders.SecretOrder(datum.order)
    if target.group != G:
        raise DescriptorError("$[--target]", "target lives on a different group")
    ns = list(range(args.n_min, args.n_max + 1))
    sequence = [(n, construct.approx_dn(datum, n)) for n in ns]
    ball = G.ball(args.radius)
    triples = [t for t in itertools.product(ball, repeat=3) if len(set(t)) == 3] if not args.triple else \
        [tuple(parse_element(G, x, "$[--triple]") for x in t.split(";")) for t in args.triple]
    table = construct.convergence_table(target, sequence, triples)
    rows = [{"triple": ";".join(_label(G, x) for x in r.triple),
             "index": r.index if r.index is not None else "none"} for r in table]
    missing = sum(r.index is None for r in table)
    result = {"target": target.descriptor, "n_range": [ns[0], ns[-1]], "triples": len(table),
              "without_agreement": missing,
              "max_index": max((r.index for r in table if r.index is not None), default=None),
              "rows": rows}
    return Report(result, rows, ("triple", "index"), EXIT_OK if missing == 0 else EXIT_FAIL)


def _int_list(text: str, flag: str) -> list[int]:
    try:
        out = []
        for part in text.split(","):
            part = part.strip()
            if "..." in part or ".." in part:
                lo, hi = (int(x) for x in part.replace("...", "..").split(".."))
                out.extend(range(lo, hi + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        raise UsageError(f"{flag}: expected integers like 2,3,4 or 2..8, got {text!r}") from exc
    if not out:
        raise UsageError(f"{flag}: empty list")
    return out


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="circord", description="Circular orderings of groups: validation, rotation numbers, "
                                            "semiconjugacy and constructions.")
    p.add_argument("--version", action="version", version=f"circord report schema {SCHEMA_VERSION}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, radius=2):
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--radius", type=int, default=radius)
        sp.add_argument("--n", type=int, default=semiconj.DEFAULT_N, help="estimate depth")

    def datum(sp):
        sp.add_argument("--h", default="lex_cone(Z(1))", help="left order on H")
        sp.add_argument("--z", default="1", help="cofinal central element of H")
        sp.add_argument("--bound", type=int, default=64, help="cofinality witness bound")

    sp = sub.add_parser("validate", help="check the ordering axioms")
    sp.add_argument("--ordering", required=True)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--exhaustive", choices=("auto", "on", "off"), default="auto")
    common(sp, radius=3)

    sp = sub.add_parser("rot", help="rotation numbers")
    sp.add_argument("--ordering", required=True)
    sp.add_argument("--element", action="append")
    sp.add_argument("--exact", action="store_true", help="exit 2 when no exact path applies")
    common(sp)

    sp = sub.add_parser("tau", help="translation defect of a pair")
    sp.add_argument("--ordering", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--estimate", action="store_true", help="skip exact paths")
    common(sp)

    sp = sub.add_parser("secret", help="decide whether an ordering comes from a left order")
    sp.add_argument("--ordering", required=True)
    sp.add_argument("--element", action="append", help="extra candidate witnesses")
    sp.add_argument("--pair-cap", type=int, default=semiconj.DEFAULT_PAIR_CAP)
    common(sp)

    sp = sub.add_parser("semiconj", help="compare two orderings up to semiconjugacy")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--gens", nargs="+", required=True)
    sp.add_argument("--pair-cap", type=int, default=semiconj.DEFAULT_PAIR_CAP)
    common(sp)

    sp = sub.add_parser("lex", help="lexicographic extension along a projection")
    sp.add_argument("--ses", required=True, help='{"total": group, "projection": morphism}')
    sp.add_argument("--kernel-order", required=True)
    sp.add_argument("--quotient-order", required=True)
    sp.add_argument("--element", action="append", help="evaluate all triples of these elements")
    sp.add_argument("--samples", type=int, default=1000)
    common(sp)

    sp = sub.add_parser("quotient", help="circular order on H modulo a power of z")
    datum(sp)
    sp.add_argument("--n", type=int, required=True, dest="n")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--radius", type=int, default=3)

    sp = sub.add_parser("approx", help="exact rotation numbers of the approximating orderings d_n")
    datum(sp)
    sp.add_argument("--ns", default="2..8")
    sp.add_argument("--element", action="append")
    common(sp)

    sp = sub.add_parser("genuine", help="genuine approximation sequence through a projection")
    sp.add_argument("--group", required=True)
    sp.add_argument("--phi", required=True)
    sp.add_argument("--kernel-order", required=True)
    datum(sp)
    sp.add_argument("--ns", default="2..8")
    sp.add_argument("--pair-cap", type=int, default=2000)
    common(sp, radius=1)

    sp = sub.add_parser("enumerate", help="enumerate circular orders of Z/n or cone candidates")
    sp.add_argument("--cyclic", type=int)
    sp.add_argument("--tararin", type=int)
    sp.add_argument("--timing", action="store_true", help="include elapsed_ms (makes output nondeterministic)")
    common(sp)

    sp = sub.add_parser("convergence", help="agreement indices of d_n with a target ordering")
    datum(sp)
    sp.add_argument("--target", help="defaults to the secret ordering of H")
    sp.add_argument("--n-min", type=int, default=1)
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--triple", action="append", help="a;b;c; defaults to all distinct triples of ball(radius)")
    common(sp, radius=3)
    return p


COMMANDS = {
    "validate": cmd_validate, "rot": cmd_rot, "tau": cmd_tau, "secret": cmd_secret,
    "semiconj": cmd_semiconj, "lex": cmd_lex, "quotient": cmd_quotient, "approx": cmd_approx,
    "genuine": cmd_genuine, "enumerate": cmd_enumerate, "convergence": cmd_convergence,
}


def _config(args) -> dict:
    skip = {"out", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def render(report: Report, args) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        buf.write(f"# command={args.command} seed={args.seed} exit={report.exit_code}\n")
        if report.rows is not None and report.columns:
            w = csv.DictWriter(buf, fieldnames=report.columns, lineterminator="\n", extrasaction="ignore")
            w.writeheader()
            w.writerows(report.rows)
        return buf.getvalue()
    doc = {"schema_version": SCHEMA_VERSION, "command": args.command, "config": _config(args),
           "exit_code": report.exit_code, "result": report.result}
    return json.dumps(doc, indent=2, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, Fraction):
        return _frac(x)
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _where(path: str) -> str:
    """'$[--ordering].group.n' -> 'in --ordering at $.group.n'."""
    m = re.fullmatch(r"\$\[(--[\w-]+)\](.*)", path)
    return f"in {m.group(1)} at ${m.group(2)}" if m else f"at {path}"


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; choose one of " + ", ".join(COMMANDS))
        report = COMMANDS[args.command](args)
        text = render(report, args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DescriptorError as exc:
        print(f"descriptor error {_where(exc.path)}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (construct.ConstructionError, enumeration.EnumerationOverflow, orders.NotSecretError,
            ValueError) as exc:
        print(f"construction error: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    return report.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
