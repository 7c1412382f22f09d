"""Command-line front end: ``titsmotive <subcommand> ...``.

Inputs are JSON, given as a file path or inline. Output is JSON (default) or
a short human-readable rendering with ``--format text``. Validation failures
exit with status 2 and print an error object; with ``--strict`` an unknown
verdict exits with status 1.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path
from typing import Sequence

from . import serialize as ser
from .brauer import ExtensionSim
from .diagram import DynkinDiagram, bourbaki_edges, flag_poincare, weyl_poincare
from .equiv import (
    equivalent_mod_p,
    levi_descriptor,
    motivically_equivalent,
    separating_registry,
)
from .errors import ValidationError
from .motive import calcul_sides, split_motive
from .qform import INF
from .rational import check_prime
from .titsindex import (
    Completion,
    SpecialLinear,
    SpecialOrthogonal,
    TitsIndex,
    higher_p_index,
    p_index,
    tits_index,
)

DEFAULT_SEED = 0
SEED_ENV = "TITSMOTIVE_SEED"


class _Fail(Exception):
    def __init__(self, status: int, payload: dict):
        super().__init__(payload)
        self.status = status
        self.payload = payload


def load_json(source: str):
    """A path to a JSON file, ``-`` for stdin, or an inline JSON text."""
    if source == "-":
        text = sys.stdin.read()
    else:
        path = Path(source)
        text = path.read_text() if not source.lstrip().startswith(("{", "[")) and path.is_file() else source
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {source[:40]!r}: {exc.msg}") from None


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}") from None


# ---------------------------------------------------------------------------
# rendering


def _edge_glyph(d: DynkinDiagram, u, v) -> str:
    b = d.bond(u, v)
    if b == 1:
        return "---"
    arrow = ">" if d.root_length(u) > d.root_length(v) else "<"
    return {2: f"={arrow}=", 3: f"-{arrow}{arrow}"}[b] if b in (2, 3) else "???"


def render_index(idx: TitsIndex) -> str:
    """ASCII diagram; distinguished vertices are circled as ``(k)``."""
    d = idx.diagram
    dist = idx.distinguished_vertices
    lines = []
    if not d.components:
        lines.append("A0 (empty diagram)")
    for c, (series, rank) in enumerate(d.components):
        verts = [v for v in d.vertices if v.comp == c]

        def name(v):
            return f"({v.k})" if v in dist else f" {v.k} "

        row = name(verts[0])
        for u, v in zip(verts, verts[1:]):
            row += _edge_glyph(d, u, v) if v in d.neighbors(u) else "   "
            row += name(v)
        lines.append(f"{series}{rank}: {row}")
        chain = {(k, k + 1) for k in range(1, rank)}
        for i, j in bourbaki_edges(series, rank):
            if (min(i, j), max(i, j)) not in chain:
                lines.append(f"    also {i} {_edge_glyph(d, verts[i - 1], verts[j - 1])} {j}")
    gens = [" ".join("(" + " ".join(d.format_vertex(v) for v in cyc) + ")" for cyc in idx.action.cycles(i))
            for i in range(len(idx.action.generators))]
    lines.append("star-action: " + ("; ".join(gens) if gens else "trivial"))
    orbs = [d.format_vertex_set(o) for o in idx.sorted_distinguished()]
    lines.append("distinguished: " + (" ".join(orbs) if orbs else "none"))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# registries


def default_registry(g, p: int, draws: int, seed: int) -> list[tuple[str, object]]:
    """Registry used by ``higher`` when none is given.

    SL: the extensions that keep one place at local degree p^j and kill the
    p-part elsewhere, then ``draws`` random local-degree patterns.
    SO: the completions at the real place and at every relevant prime.
    """
    if isinstance(g, SpecialLinear):
        entries = separating_registry([g.algebra], p)
        rng = random.Random(seed)
        places = list(g.algebra.places)
        for n in range(draws):
            degrees = {}
            for label in places:
                kind = g.algebra.kind(label)
                if kind == "real":
                    degrees[label] = [rng.choice([1, 2])]
                elif kind == "finite":
                    degrees[label] = [rng.choice([1, 2, 3, 4, 6, 8, 9]) for _ in range(rng.randint(1, 2))]
            entries.append((f"R{n}", ExtensionSim.make(degrees)))
        return entries
    if isinstance(g, SpecialOrthogonal):
        places = [INF, *sorted(g.form_class.relevant_primes)]
        return [(f"Q_{v}", Completion(v)) for v in places]
    return []


# ---------------------------------------------------------------------------
# subcommands


def _descriptor(args):
    return ser.decode_descriptor(load_json(args.input))


def _theta(d: DynkinDiagram, raw: str | None):
    return frozenset() if raw is None else d.parse_vertex_set(raw)


def cmd_index(args):
    idx = tits_index(_descriptor(args))
    return ser.encode_index(idx), render_index(idx)


def cmd_p_index(args):
    idx = p_index(_descriptor(args), args.prime)
    out = ser.encode_index(idx)
    out["prime"] = args.prime
    return out, f"{args.prime}-index\n" + render_index(idx)


def cmd_higher(args):
    g = _descriptor(args)
    if args.registry:
        registry = ser.decode_registry(load_json(args.registry))
    else:
        registry = default_registry(g, args.prime, args.draws, resolve_seed(args.seed))
    table = higher_p_index(g, args.prime, registry)
    out = ser.encode_table(table, args.prime)
    text = "\n".join(
        f"{label}: " + (" ".join(idx.diagram.format_vertex_set(o) for o in idx.sorted_distinguished()) or "none")
        for label, idx in table.entries
    )
    return out, text


def cmd_poincare(args):
    d = DynkinDiagram.parse(args.diagram)
    if args.theta is None:
        poly = weyl_poincare(d)
    else:
        poly = flag_poincare(d, _theta(d, args.theta))
    out = {"schema": ser.SCHEMA, "diagram": str(d), "coefficients": list(poly.coeffs)}
    if args.theta is not None:
        out["theta"] = ser.encode_vertex_set(d, _theta(d, args.theta))
    return out, " ".join(str(c) for c in poly.coeffs)


def cmd_motive_split(args):
    d = DynkinDiagram.parse(args.diagram)
    m = split_motive(d, _theta(d, args.theta))
    text = " + ".join(f"{n}*Tate[{s}]" if n > 1 else f"Tate[{s}]" for _, s, n in m)
    return {"schema": ser.SCHEMA, "motive": ser.encode_motive(m)}, text


def _verdict_output(v):
    out = {"schema": ser.SCHEMA, **v.to_json()}
    return out, json.dumps(v.to_json())


def cmd_equiv(args):
    if args.abstract:
        if args.prime is None:
            raise ValidationError("equiv --abstract needs -p")
        g = ser.abstract_from_document(load_json(args.first), args.prime)
        g2 = ser.abstract_from_document(load_json(args.second), args.prime)
    else:
        g = ser.decode_descriptor(load_json(args.first))
        g2 = ser.decode_descriptor(load_json(args.second))
    v = motivically_equivalent(g, g2) if args.all_primes else equivalent_mod_p(g, g2, args.prime)
    out, text = _verdict_output(v)
    if args.strict and v.is_unknown:
        raise _Fail(1, out)
    return out, text


def cmd_levi(args):
    g = _descriptor(args)
    factors = levi_descriptor(g, _theta(g.diagram, args.theta))
    out = {"schema": ser.SCHEMA, "factors": [ser.encode_descriptor(f, with_schema=False) for f in factors]}
    text = " x ".join(str(f.diagram) if isinstance(f, SpecialOrthogonal) else f"SL deg {f.degree}"
                      for f in factors)
    return out, text or "trivial"


def cmd_check_calcul(args):
    doc = load_json(args.input)
    mX = ser.decode_motive(ser._require(doc, "motive", "check-calcul input"))
    model = ser.decode_extension_model(ser._require(doc, "model", "check-calcul input"))
    y = ser.decode_label(ser._require(doc, "y", "check-calcul input"))
    i = ser._require(doc, "i", "check-calcul input")
    if isinstance(i, bool) or not isinstance(i, int):
        raise ValidationError("i must be an integer")
    lhs, rhs = calcul_sides(mX, model, y, i)
    out = {"schema": ser.SCHEMA, "result": lhs == rhs, "lhs": lhs, "rhs": rhs}
    return out, f"{'holds' if lhs == rhs else 'fails'}: {lhs} vs {rhs}"


# ---------------------------------------------------------------------------
# parser


def _prime(text: str) -> int:
    try:
        return check_prime(int(text))
    except (ValueError, ValidationError) as exc:
        raise argparse.ArgumentTypeError(f"not a prime: {text}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="titsmotive", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=None,
                        help=f"seed for random registry draws (default: ${SEED_ENV} or {DEFAULT_SEED})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="Tits index of a descriptor")
    p.add_argument("input")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("p-index", parents=[common], help="p-index of a descriptor")
    p.add_argument("input")
    p.add_argument("-p", "--prime", type=_prime, required=True)
    p.set_defaults(func=cmd_p_index)

    p = sub.add_parser("higher", parents=[common], help="higher p-index table over a registry")
    p.add_argument("input")
    p.add_argument("-p", "--prime", type=_prime, required=True)
    p.add_argument("--registry", help="registry JSON (path or inline); default depends on the descriptor")
    p.add_argument("--draws", type=int, default=0, help="random extensions added to the default SL registry")
    p.set_defaults(func=cmd_higher)

    p = sub.add_parser("poincare", parents=[common], help="Poincaré polynomial of G or G/P_Θ")
    p.add_argument("diagram")
    p.add_argument("--theta")
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("motive-split", parents=[common], help="motive of the split flag variety")
    p.add_argument("diagram")
    p.add_argument("--theta")
    p.set_defaults(func=cmd_motive_split)

    p = sub.add_parser("equiv", parents=[common], help="equivalence mod p of two descriptors")
    p.add_argument("first")
    p.add_argument("second")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("-p", "--prime", type=_prime)
    which.add_argument("--all-primes", action="store_true", help="motivic equivalence at every prime")
    p.add_argument("--abstract", action="store_true", help="read index/table documents as abstract groups")
    p.add_argument("--strict", action="store_true", help="exit 1 on an unknown verdict")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("levi", parents=[common], help="Levi factors of type Θ")
    p.add_argument("input")
    p.add_argument("--theta", required=True)
    p.set_defaults(func=cmd_levi)

    p = sub.add_parser("check-calcul", parents=[common], help="evaluate the reconstruction identity")
    p.add_argument("input")
    p.set_defaults(func=cmd_check_calcul)
    return parser


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    status = 0
    try:
        out, text = args.func(args)
    except _Fail as fail:
        out, text, status = fail.payload, json.dumps(fail.payload), fail.status
    except (ValidationError, ArithmeticError, OSError) as exc:
        err = {"schema": ser.SCHEMA, "error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(err), file=stdout)
        return 2
    print(json.dumps(out, indent=2) if args.format == "json" else text, file=stdout)
    return status


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
