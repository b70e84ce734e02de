"""Command-line interface: .gea document parsing and report commands.

Document grammar (line oriented, ``#`` comments, identifiers
``[A-Za-z0-9_]+``)::

    elements: 0 a b 1
    zero: 0
    sum: a + b = 1
    relation merge: {a b}

Exit codes: 0 success / property holds, 1 violation or counterexample
found, 2 input error.  ``--json`` switches every command to a stable
machine-readable schema {command, inputs, results, witnesses}.
"""

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import catalog, congruence as cg, core, dimension as dm, theorems
from .errors import (
    AxiomViolation,
    ConflictingEquation,
    GeadimError,
    NotDer,
    ParseError,
    UnknownElement,
)

_IDENT = re.compile(r"^[A-Za-z0-9_]+$")
_SUM_RE = re.compile(
    r"^\s*(?P<a>[A-Za-z0-9_]+)\s*\+\s*(?P<b>[A-Za-z0-9_]+)\s*=\s*(?P<c>[A-Za-z0-9_]+)\s*$"
)


@dataclass
class GeaDocument:
    elements: list
    zero: str
    equations: list
    relations: dict = field(default_factory=dict)

    def build(self):
        E = core.build_gea(self.elements, self.zero, self.equations)
        rels = {
            name: cg.build_equiv(E, classes)
            for name, classes in self.relations.items()
        }
        return E, rels


def parse_gea_file(text):
    """Parse a .gea document; raises ParseError / ConflictingEquation /
    UnknownElement with positions."""
    elements = None
    zero = None
    equations = []
    pairs = {}
    relations = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(lineno, col, "expected 'directive: ...'")
        head = head.strip()
        if head == "elements":
            names = rest.split()
            if not names:
                raise ParseError(lineno, col, "empty element list")
            for name in names:
                if not _IDENT.match(name):
                    raise ParseError(lineno, col, f"bad identifier {name!r}")
            if len(set(names)) != len(names):
                raise ParseError(lineno, col, "duplicate element names")
            elements = names
        elif head == "zero":
            zero = rest.strip()
            if not _IDENT.match(zero):
                raise ParseError(lineno, col, f"bad identifier {zero!r}")
        elif head == "sum":
            m = _SUM_RE.match(rest)
            if not m:
                raise ParseError(lineno, col, "expected 'sum: a + b = c'")
            a, b, c = m.group("a"), m.group("b"), m.group("c")
            if elements is None:
                raise ParseError(lineno, col, "'elements:' must come first")
            for x in (a, b, c):
                if x not in elements:
                    raise UnknownElement(f"line {lineno}: {x!r}")
            key = tuple(sorted((a, b)))
            if key in pairs and pairs[key] != c:
                raise ConflictingEquation(
                    f"line {lineno}: {a} + {b} already equals {pairs[key]}"
                )
            pairs[key] = c
            equations.append((a, b, c))
        elif head.split(None, 1)[0] == "relation":
            name = head[len("relation"):].strip()
            if not _IDENT.match(name):
                raise ParseError(lineno, col, f"bad relation name {name!r}")
            if elements is None:
                raise ParseError(lineno, col, "'elements:' must come first")
            classes = []
            for group in re.findall(r"\{([^{}]*)\}", rest):
                members = group.split()
                for x in members:
                    if x not in elements:
                        raise UnknownElement(f"line {lineno}: {x!r}")
                if members:
                    classes.append(members)
            stripped = re.sub(r"\{[^{}]*\}", "", rest).strip()
            if stripped:
                raise ParseError(lineno, col, f"unexpected text {stripped!r}")
            relations[name] = classes
        else:
            raise ParseError(lineno, col, f"unknown directive {head!r}")
    if elements is None:
        raise ParseError(0, 0, "missing 'elements:' line")
    if zero is None:
        raise ParseError(0, 0, "missing 'zero:' line")
    if zero not in elements:
        raise ParseError(0, 0, f"zero {zero!r} is not an element")
    return GeaDocument(elements, zero, equations, relations)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _emit(out, payload, as_json):
    if as_json:
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write(payload["text"] + "\n")


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_gea_file(fh.read())


def _relation_or_fail(doc, rels, name):
    if name not in rels:
        known = ", ".join(sorted(rels)) or "none"
        raise GeadimError(f"unknown relation {name!r} (known: {known})")
    return rels[name]


def _map_repr(E, m):
    return {E.names[e]: E.names[m(e)] for e in range(E.n)}


def cmd_check(args, out):
    doc = _load(args.file)
    try:
        E, rels = doc.build()
    except AxiomViolation as exc:
        payload = {
            "command": "check",
            "inputs": {"file": args.file},
            "results": {"valid": False, "axiom": exc.axiom},
            "witnesses": [list(exc.witness)],
            "text": f"INVALID: {exc.axiom} fails at {exc.witness}",
        }
        _emit(out, payload, args.json)
        return 1
    flags = core.structure_predicates(E)
    results = {
        "valid": True,
        "elements": list(E.names),
        "directed": flags.directed,
        "orthogonally_ordered": flags.orthogonally_ordered,
        "is_ea": None if flags.is_ea is None else E.names[flags.is_ea],
        "lattice": flags.lattice,
        "atoms": [E.names[a] for a in E.atoms],
        "relations": sorted(rels),
    }
    text = [f"valid model with {E.n} elements"]
    for k in ("directed", "orthogonally_ordered", "is_ea", "lattice"):
        text.append(f"  {k}: {results[k]}")
    payload = {
        "command": "check",
        "inputs": {"file": args.file},
        "results": results,
        "witnesses": [],
        "text": "\n".join(text),
    }
    _emit(out, payload, args.json)
    return 0


def cmd_exocenter(args, out):
    from .exocenter import center, exocenter

    doc = _load(args.file)
    E, _ = doc.build()
    S = exocenter(E)
    cen = center(E, S)
    results = {
        "size": len(S),
        "maps": [_map_repr(E, m) for m in S],
        "center": [E.names[c] for c, _ in cen],
        "irreducible": len(S) == 2 or E.n == 1,
    }
    text = [f"exocenter has {len(S)} maps; center = {{{', '.join(results['center'])}}}"]
    for m in S:
        text.append("  " + " ".join(f"{E.names[e]}->{E.names[m(e)]}" for e in range(E.n)))
    payload = {
        "command": "exocenter",
        "inputs": {"file": args.file},
        "results": results,
        "witnesses": [],
        "text": "\n".join(text),
    }
    _emit(out, payload, args.json)
    return 0


def _sk_payload(E, R):
    report = cg.check_sk(E, R)
    sigma = None
    if report.sk:
        from .exocenter import exocenter

        sigma = cg.sigma_sim(E, R, exocenter(E))
        report = cg.check_der(E, R, sigma)
    axioms = {}
    for name, v in zip(
        ("SK1", "SK2", "SK3d", "SK3e", "SK4a", "SK4b", "SK4a'"),
        (report.sk1, report.sk2, report.sk3d, report.sk3e, report.sk4a,
         report.sk4b, report.sk4a_prime),
    ):
        if v is None:
            axioms[name] = {"holds": None, "witness": None}
        else:
            axioms[name] = {
                "holds": v.ok,
                "witness": None if v.witness is None else [E.names[w] for w in v.witness],
            }
    return report, sigma, axioms


def cmd_sk(args, out):
    doc = _load(args.file)
    E, rels = doc.build()
    R = _relation_or_fail(doc, rels, args.relation)
    report, sigma, axioms = _sk_payload(E, R)
    results = {
        "relation": args.relation,
        "classes": [[E.names[e] for e in c] for c in R.classes],
        "axioms": axioms,
        "sk": report.sk,
        "der": report.der if report.sk else None,
        "cross_checks": (
            ["separation-direct-vs-hull-meet", "splitting-four-way"]
            if report.sk
            else []
        ),
    }
    witnesses = [
        {"axiom": name, "witness": rec["witness"]}
        for name, rec in axioms.items()
        if rec["holds"] is False
    ]
    lines = [f"relation {args.relation}: congruence={report.sk}"]
    for name, rec in axioms.items():
        state = "?" if rec["holds"] is None else ("ok" if rec["holds"] else f"FAILS {rec['witness']}")
        lines.append(f"  {name}: {state}")
    if report.sk:
        lines.append(f"  dimension relation: {report.der}")
    payload = {
        "command": "sk",
        "inputs": {"file": args.file, "relation": args.relation},
        "results": results,
        "witnesses": witnesses,
        "text": "\n".join(lines),
    }
    _emit(out, payload, args.json)
    return 0 if report.sk else 1


def cmd_hull(args, out):
    doc = _load(args.file)
    E, rels = doc.build()
    R = _relation_or_fail(doc, rels, args.relation)
    report, sigma, axioms = _sk_payload(E, R)
    if not report.sk:
        name, witness = report.first_failure()
        payload = {
            "command": "hull",
            "inputs": {"file": args.file, "relation": args.relation},
            "results": {"sk": False, "failed_axiom": name},
            "witnesses": [{"axiom": name, "witness": [E.names[w] for w in witness]}],
            "text": f"not a congruence: {name} fails at "
                    f"{tuple(E.names[w] for w in witness)}",
        }
        _emit(out, payload, args.json)
        return 1
    H = cg.induced_hull(E, R, sigma)
    results = {
        "relation": args.relation,
        "splitting_maps": [_map_repr(E, m) for m in sigma],
        "hull": {E.names[e]: _map_repr(E, H.eta(e)) for e in range(E.n)},
        "divisible": None,
        "cross_checks": [
            "hull-axioms",
            "hull-maps-inside-splitting-algebra",
            "divisibility-direct-vs-dyad-criterion",
        ],
    }
    from . import hull as hull_mod

    results["divisible"] = hull_mod.is_divisible(E, H).divisible
    lines = [
        f"splitting algebra has {len(sigma)} maps; hull system "
        f"(divisible={results['divisible']}):"
    ]
    for e in range(E.n):
        img = " ".join(f"{E.names[x]}->{E.names[H.eta(e)(x)]}" for x in range(E.n))
        lines.append(f"  eta[{E.names[e]}]: {img}")
    payload = {
        "command": "hull",
        "inputs": {"file": args.file, "relation": args.relation},
        "results": results,
        "witnesses": [],
        "text": "\n".join(lines),
    }
    _emit(out, payload, args.json)
    return 0


def cmd_decompose(args, out):
    doc = _load(args.file)
    E, rels = doc.build()
    R = _relation_or_fail(doc, rels, args.relation)
    report, sigma, axioms = _sk_payload(E, R)
    if not report.sk or not report.der:
        name, witness = report.first_failure()
        payload = {
            "command": "decompose",
            "inputs": {"file": args.file, "relation": args.relation},
            "results": {"der": False, "failed_axiom": name},
            "witnesses": [
                {
                    "axiom": name,
                    "witness": None if witness is None
                    else [E.names[w] for w in witness],
                }
            ],
            "text": f"not a dimension relation: {name} fails",
        }
        _emit(out, payload, args.json)
        return 1
    dec = dm.decompose_types(E, R)
    type_label = dec.type_verdict
    if dec.type_verdict in ("I", "II") and dec.finite_type:
        type_label = dec.type_verdict + "_F"
    results = {
        "relation": args.relation,
        "type": type_label,
        "finite_type": dec.finite_type,
        "properly_non_finite": dec.properly_non_finite,
        "unit": None if dec.unit is None else E.names[dec.unit],
        "f_tilde": E.names[dec.f_tilde],
        "projections": {
            name: [E.names[e] for e in summand]
            for name, summand in sorted(dec.summands.items())
        },
        "cross_checks": list(dec.cross_checks),
    }
    lines = [f"type {type_label}; largest finite invariant element {results['f_tilde']}"]
    if dec.unit is not None:
        lines.append(f"finite type with unit {E.names[dec.unit]}")
    for name in ("I", "II", "III"):
        lines.append(f"  summand {name}: {{{', '.join(results['projections'][name])}}}")
    lines.append(f"cross-checked: {', '.join(dec.cross_checks)}")
    payload = {
        "command": "decompose",
        "inputs": {"file": args.file, "relation": args.relation},
        "results": results,
        "witnesses": [],
        "text": "\n".join(lines),
    }
    _emit(out, payload, args.json)
    return 0


def cmd_catalog(args, out):
    count = catalog.write_catalog(
        args.out, args.max_size, jobs=args.jobs, resume=args.resume
    )
    payload = {
        "command": "catalog",
        "inputs": {"max_size": args.max_size, "out": args.out},
        "results": {"models": count},
        "witnesses": [],
        "text": f"wrote {count} models up to size {args.max_size} to {args.out}",
    }
    _emit(out, payload, args.json)
    return 0


def cmd_verify(args, out):
    theorems_list = args.theorems.split(",") if args.theorems else None
    rep = theorems.run_theorem_suite(
        args.max_size, theorems=theorems_list, jobs=args.jobs, invert=args.invert
    )
    obj = rep.to_json_obj()
    obj["text"] = rep.to_text()
    payload = {
        "command": "verify",
        "inputs": {
            "max_size": args.max_size,
            "theorems": obj["theorems"],
            "invert": args.invert,
        },
        "results": {
            "models": obj["models"],
            "relations": obj["relations"],
            "properties": obj["properties"],
            "review": obj["review"],
            "status": obj["status"],
        },
        "witnesses": obj["witnesses"],
        "text": obj["text"],
    }
    _emit(out, payload, args.json)
    return 0 if rep.status == "ok" else 1


def cmd_search(args, out):
    hit = catalog.search_counterexample(args.property, args.max_size)
    results = {
        "property": args.property,
        "max_size": args.max_size,
        "found": hit is not None,
        "witness": hit,
    }
    text = (
        f"counterexample search '{args.property}' up to size {args.max_size}: "
        + (f"witness in model {hit['key']}" if hit else "exhausted, none found")
    )
    payload = {
        "command": "search",
        "inputs": {"property": args.property, "max_size": args.max_size},
        "results": results,
        "witnesses": [] if hit is None else [hit],
        "text": text,
    }
    _emit(out, payload, args.json)
    return 1 if hit is not None else 0


def make_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--json", action="store_true", help="machine-readable output"
    )
    p = argparse.ArgumentParser(
        prog="geadim",
        description="finite-model toolkit for generalized effect algebras "
        "with dimension relations",
        parents=[shared],
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", parents=[shared], help="validate a .gea model file")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("exocenter", parents=[shared],
                        help="exocenter maps and the center")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_exocenter)

    sp = sub.add_parser("hull", parents=[shared],
                        help="splitting algebra and induced hull system")
    sp.add_argument("file")
    sp.add_argument("--relation", required=True)
    sp.set_defaults(fn=cmd_hull)

    sp = sub.add_parser("sk", parents=[shared],
                        help="congruence axiom report for a relation")
    sp.add_argument("file")
    sp.add_argument("--relation", required=True)
    sp.set_defaults(fn=cmd_sk)

    sp = sub.add_parser("decompose", parents=[shared],
                        help="type I/II/III decomposition")
    sp.add_argument("file")
    sp.add_argument("--relation", required=True)
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("catalog", parents=[shared],
                        help="enumerate models to a catalog file")
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--resume", action="store_true")
    sp.set_defaults(fn=cmd_catalog)

    sp = sub.add_parser("verify", parents=[shared],
                        help="run the theorem suite over the catalog")
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--theorems", help="comma-separated property names")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--invert", help="negate one property (sanity control)")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("search", parents=[shared],
                        help="counterexample search over the catalog")
    sp.add_argument("--property", required=True)
    sp.add_argument("--max-size", type=int, required=True)
    sp.set_defaults(fn=cmd_search)
    return p


def run_command(argv, out=None):
    """Dispatch a command line; returns the exit code."""
    out = out if out is not None else sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except (GeadimError, OSError) as exc:
        out.write(f"error: {exc}\n")
        return 2


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
