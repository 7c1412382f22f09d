"""JSON encoding and decoding of descriptors, indices, tables, motives and verdicts.

Every top-level document carries ``"schema": "1"``. Decoders accept the
documents produced by the encoders, so ``index`` and ``higher`` outputs can
be fed back as abstract descriptors.
"""

from __future__ import annotations

from typing import Any, Mapping

from .brauer import CsaDescriptor, ExtensionSim
from .diagram import DynkinDiagram, StarAction, Vertex
from .errors import ValidationError
from .motive import ExtensionModel, Motive, UpperMotiveLabel
from .qform import FormClass, QuadraticForm
from .rational import format_rational
from .titsindex import (
    GROUND,
    Abstract,
    Completion,
    GroupDescriptor,
    HigherIndexTable,
    SpecialLinear,
    SpecialOrthogonal,
    TitsIndex,
)

SCHEMA = "1"


def _require(obj: Any, key: str, where: str):
    if not isinstance(obj, Mapping) or key not in obj:
        raise ValidationError(f"{where}: missing field {key!r}")
    return obj[key]


def _check_schema(obj: Mapping) -> None:
    if "schema" in obj and str(obj["schema"]) != SCHEMA:
        raise ValidationError(f"unsupported schema version {obj['schema']!r}")


# ---------------------------------------------------------------------------
# diagrams and actions


def encode_action(a: StarAction) -> list:
    d = a.diagram
    return [[[d.vertex_token(v) for v in cyc] for cyc in a.cycles(i)] for i in range(len(a.generators))]


def decode_action(d: DynkinDiagram, raw) -> StarAction:
    """``[]`` or ``null``: trivial. A list of cycles is one generator; a list of such lists is several."""
    if not raw:
        return StarAction.trivial(d)
    if not isinstance(raw, list):
        raise ValidationError("action must be a list")
    depth = 0
    probe = raw
    while isinstance(probe, list) and probe:
        depth += 1
        probe = probe[0]
    if depth == 2:
        raw = [raw]
    elif depth != 3:
        raise ValidationError("action must be a list of cycles or a list of generators")
    return StarAction.from_cycles(d, raw)


def encode_vertex_set(d: DynkinDiagram, theta) -> list:
    return [d.vertex_token(v) for v in sorted(theta)]


# ---------------------------------------------------------------------------
# indices and tables


def encode_index(idx: TitsIndex, with_schema: bool = True) -> dict:
    d = idx.diagram
    out = {"schema": SCHEMA} if with_schema else {}
    out.update({
        "diagram": str(d),
        "action": encode_action(idx.action),
        "distinguished": [encode_vertex_set(d, o) for o in idx.sorted_distinguished()],
    })
    return out


def _decode_distinguished(d: DynkinDiagram, a: StarAction, raw) -> TitsIndex:
    return TitsIndex(d, a, frozenset(d.parse_vertex_set(o) for o in raw))


def decode_index(obj: Mapping) -> TitsIndex:
    _check_schema(obj)
    d = DynkinDiagram.parse(str(_require(obj, "diagram", "index")))
    a = decode_action(d, obj.get("action"))
    return _decode_distinguished(d, a, _require(obj, "distinguished", "index"))


def encode_table(t: HigherIndexTable, p: int | None = None) -> dict:
    g = t.ground
    d = g.diagram
    out: dict = {"schema": SCHEMA}
    if p is not None:
        out["prime"] = p
    out.update({
        "diagram": str(d),
        "action": encode_action(g.action),
        "entries": {
            label: [encode_vertex_set(d, o) for o in idx.sorted_distinguished()]
            for label, idx in t.entries
        },
    })
    if t.order:
        out["order"] = [list(pair) for pair in t.order]
    return out


def decode_table(obj: Mapping) -> HigherIndexTable:
    """Accept a table document, or a single index document (ground entry only)."""
    _check_schema(obj)
    if "entries" not in obj:
        idx = decode_index(obj)
        return HigherIndexTable(((GROUND, idx),))
    d = DynkinDiagram.parse(str(_require(obj, "diagram", "table")))
    a = decode_action(d, obj.get("action"))
    entries = obj["entries"]
    if not isinstance(entries, Mapping):
        raise ValidationError("table entries must be an object")
    rows = tuple((str(k), _decode_distinguished(d, a, v)) for k, v in entries.items())
    order = tuple(tuple(pair) for pair in obj.get("order", ()))
    return HigherIndexTable(rows, order)


# ---------------------------------------------------------------------------
# descriptors


def encode_algebra(a: CsaDescriptor) -> dict:
    out: dict = {"degree": a.degree,
                 "inv": {k: format_rational(x) for k, x in a.invariants if x}}
    places = {k: kind for k, kind in a.kinds if kind != "finite"}
    if places:
        out["places"] = places
    if a.simulated:
        out["simulated"] = True
    return out


def decode_algebra(obj: Mapping) -> CsaDescriptor:
    degree = _require(obj, "degree", "SL descriptor")
    inv = obj.get("inv", obj.get("invariants")) or {}
    if not isinstance(inv, Mapping):
        raise ValidationError("SL invariants must be an object mapping places to rationals")
    return CsaDescriptor.make(degree, inv, obj.get("places") or {},
                              bool(obj.get("simulated", False)))


def encode_form_class(f: FormClass) -> dict:
    return {"dim": f.dim, "disc": f.disc, "hasse_minus": sorted(f.hasse_minus),
            "signature": list(f.signature)}


def encode_descriptor(g: GroupDescriptor, with_schema: bool = True) -> dict:
    out = {"schema": SCHEMA} if with_schema else {}
    if isinstance(g, SpecialLinear):
        out["kind"] = "SL"
        out.update(encode_algebra(g.algebra))
    elif isinstance(g, SpecialOrthogonal):
        out["kind"] = "SO"
        if isinstance(g.form, QuadraticForm):
            out["diag"] = [format_rational(c) for c in g.form.coeffs]
        else:
            out["class"] = encode_form_class(g.form)
    elif isinstance(g, Abstract):
        out.update({"kind": "abstract", "diagram": str(g.diagram), "action": encode_action(g.action)})
        if g.table is not None:
            out["table"] = encode_table(g.table)
        out["p_tables"] = {str(p): encode_table(t, p) for p, t in g.p_tables}
    else:
        raise ValidationError(f"not a group descriptor: {g!r}")
    return out


def _decode_form(obj: Mapping):
    if "diag" in obj or "form" in obj:
        coeffs = obj["diag"] if "diag" in obj else obj["form"]
        if not isinstance(coeffs, list):
            raise ValidationError("SO form must be a list of diagonal coefficients")
        return QuadraticForm(tuple(coeffs))
    if "gram" in obj:
        return QuadraticForm.from_gram(obj["gram"])
    c = _require(obj, "class", "SO descriptor")
    return FormClass(int(_require(c, "dim", "form class")), int(_require(c, "disc", "form class")),
                     frozenset(int(p) for p in c.get("hasse_minus", ())),
                     tuple(_require(c, "signature", "form class")))


def decode_descriptor(obj: Mapping) -> GroupDescriptor:
    if not isinstance(obj, Mapping):
        raise ValidationError("a descriptor must be a JSON object")
    _check_schema(obj)
    kind = str(_require(obj, "kind", "descriptor"))
    if kind in ("SL", "sl", "SpecialLinear"):
        return SpecialLinear(decode_algebra(obj))
    if kind in ("SO", "so", "SpecialOrthogonal"):
        return SpecialOrthogonal(_decode_form(obj))
    if kind in ("abstract", "Abstract"):
        d = DynkinDiagram.parse(str(_require(obj, "diagram", "abstract descriptor")))
        a = decode_action(d, obj.get("action"))
        table = decode_table(obj["table"]) if obj.get("table") else None
        p_tables = tuple((int(p), decode_table(t)) for p, t in (obj.get("p_tables") or {}).items())
        return Abstract(d, a, table, p_tables)
    raise ValidationError(f"unknown descriptor kind {kind!r}")


def abstract_from_document(obj: Mapping, p: int) -> Abstract:
    """Read an ``index``/``higher`` output (or an abstract descriptor) as an abstract group.

    Index and table documents are taken to be p-index data for ``p``.
    """
    if obj.get("kind") in ("abstract", "Abstract"):
        g = decode_descriptor(obj)
        if not isinstance(g, Abstract):
            raise ValidationError("expected an abstract descriptor")
        return g
    table = decode_table(obj)
    ground = table.ground
    return Abstract(ground.diagram, ground.action, None, ((p, table),))


# ---------------------------------------------------------------------------
# registries


def decode_registry(raw) -> list[tuple[str, object]]:
    """Registry entries: a bare label, ``{"label", "ext": {place: [degrees]}}``,
    or ``{"label", "completion": place}``."""
    if isinstance(raw, Mapping):
        raw = raw.get("entries", raw.get("registry"))
    if not isinstance(raw, list):
        raise ValidationError("registry must be a list of entries")
    out: list[tuple[str, object]] = []
    for entry in raw:
        if isinstance(entry, str):
            out.append((entry, None))
            continue
        label = str(_require(entry, "label", "registry entry"))
        if "ext" in entry:
            out.append((label, ExtensionSim.make(entry["ext"])))
        elif "completion" in entry:
            out.append((label, Completion(entry["completion"])))
        else:
            out.append((label, None))
    return out


def encode_registry(entries) -> list:
    out = []
    for label, spec in entries:
        if spec is None:
            out.append(label)
        elif isinstance(spec, ExtensionSim):
            out.append({"label": label, "ext": {k: list(v) for k, v in spec.degrees}})
        elif isinstance(spec, Completion):
            out.append({"label": label, "completion": str(spec.place)})
        else:
            raise ValidationError(f"cannot encode registry entry {label!r}")
    return out


# ---------------------------------------------------------------------------
# motives


def encode_label(lab: UpperMotiveLabel) -> dict:
    return {"group": lab.group, "theta": [v.k if v.comp == 0 else list(v) for v in lab.theta],
            "p": lab.p, "class": lab.cls}


def decode_label(obj: Mapping) -> UpperMotiveLabel:
    theta = []
    for t in obj.get("theta", ()):
        theta.append(Vertex(0, int(t)) if isinstance(t, int) else Vertex(*t))
    return UpperMotiveLabel(str(obj.get("group", "")), tuple(theta), int(obj.get("p", 0)),
                            str(_require(obj, "class", "label")))


def encode_motive(m: Motive) -> list:
    return [{"label": encode_label(lab), "shift": s, "mult": n} for lab, s, n in m]


def decode_motive(raw) -> Motive:
    if not isinstance(raw, list):
        raise ValidationError("a motive must be a list of summands")
    terms: dict = {}
    for item in raw:
        key = (decode_label(_require(item, "label", "summand")), _require(item, "shift", "summand"))
        terms[key] = terms.get(key, 0) + int(item.get("mult", 1))
    return Motive(terms)


def decode_extension_model(raw: Mapping) -> ExtensionModel:
    if not isinstance(raw, Mapping):
        raise ValidationError("an extension model maps class ids to motives")
    return ExtensionModel.from_mapping({str(k): decode_motive(v) for k, v in raw.items()})
