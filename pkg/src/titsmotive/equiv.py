"""Equivalence modulo p and motivic equivalence of group descriptors.

Verdicts are three-valued. ``not_equivalent`` always carries a witness that
can be re-checked: a place where p-adic orders differ, an extension over
which the indices differ, or a type mismatch.

For SL_1(A) the test is place-wise: A and B are equivalent mod p iff at every
place the p-adic valuations of the orders of the local invariants agree.
Extending scalars multiplies local invariants by local degrees, so these
valuations determine the p-index over every simulated extension; conversely
an extension of p-power degree at all other places isolates a differing
place. Function-field extensions are not part of this model.

For SO(q) only p = 2 matters. Witt indices over Q and its completions give
certificates of non-equivalence and similarity gives a certificate of
equivalence; anything else is reported as unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import prod
from typing import Iterable, Sequence

from sympy import primerange

from .brauer import CsaDescriptor, ExtensionSim, local_p_valuations
from .diagram import Vertex, is_star_stable, levi_type, star_stable_subsets
from .errors import ValidationError
from .motive import TATE_CLASS, UpperMotiveLabel
from .qform import INF, FormClass, is_local_square
from .rational import check_prime, prime_factors
from .titsindex import (
    GROUND,
    Abstract,
    Completion,
    GroupDescriptor,
    SpecialLinear,
    SpecialOrthogonal,
    higher_p_index,
    p_index,
    tits_index,
)

EQUIVALENT = "equivalent"
NOT_EQUIVALENT = "not_equivalent"
UNKNOWN = "unknown"

SIMILARITY_SEARCH_CAP = 4096
DISCRIMINANT_SEARCH_BOUND = 100_000


@dataclass(frozen=True)
class Verdict:
    kind: str
    prime: int | None = None
    witness: dict | None = field(default=None, hash=False)
    reason: str | None = None
    relative_to_registry: bool = False

    def __post_init__(self):
        if self.kind not in (EQUIVALENT, NOT_EQUIVALENT, UNKNOWN):
            raise ValidationError(f"unknown verdict kind {self.kind!r}")
        if self.kind == NOT_EQUIVALENT and not self.witness:
            raise ValidationError("a not_equivalent verdict needs a witness")

    @classmethod
    def equivalent(cls, prime=None, relative=False, reason=None) -> "Verdict":
        return cls(EQUIVALENT, prime, None, reason, relative)

    @classmethod
    def not_equivalent(cls, witness: dict, prime=None) -> "Verdict":
        return cls(NOT_EQUIVALENT, prime, witness)

    @classmethod
    def unknown(cls, reason: str, prime=None) -> "Verdict":
        return cls(UNKNOWN, prime, None, reason)

    @property
    def is_equivalent(self) -> bool:
        return self.kind == EQUIVALENT

    @property
    def is_not_equivalent(self) -> bool:
        return self.kind == NOT_EQUIVALENT

    @property
    def is_unknown(self) -> bool:
        return self.kind == UNKNOWN

    def to_json(self) -> dict:
        out: dict = {"verdict": self.kind}
        if self.prime is not None:
            out["prime"] = self.prime
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        if self.relative_to_registry:
            out["relative_to_registry"] = True
        return out


def _kind_of(g: GroupDescriptor) -> str:
    for cls, name in ((SpecialLinear, "SL"), (SpecialOrthogonal, "SO"), (Abstract, "abstract")):
        if isinstance(g, cls):
            return name
    raise ValidationError(f"not a group descriptor: {g!r}")


def _check_kinds(g: GroupDescriptor, g2: GroupDescriptor) -> str:
    k1, k2 = _kind_of(g), _kind_of(g2)
    if k1 != k2:
        raise ValidationError(f"cannot compare descriptors of kinds {k1} and {k2}")
    return k1


def _type_witness(g: GroupDescriptor, g2: GroupDescriptor) -> dict | None:
    if g.diagram != g2.diagram:
        return {"type": [str(g.diagram), str(g2.diagram)]}
    if g.action != g2.action:
        return {"type": [str(g.diagram), str(g2.diagram)], "star_action": "differs"}
    return None


# ---------------------------------------------------------------------------
# SL


def separating_extension(a: CsaDescriptor, b: CsaDescriptor, p: int, place: str) -> ExtensionSim:
    """Extension keeping ``place`` and killing the p-part everywhere else.

    Every other place gets a single place above it of local degree p^K with
    K the largest p-valuation in sight (degree 2 at real places when p = 2).
    """
    va, vb = local_p_valuations(a, p), local_p_valuations(b, p)
    top = max([0, *va.values(), *vb.values()])
    degrees = {}
    for label in set(a.places) | set(b.places):
        if label == place:
            continue
        kind = a.kind(label) if label in a.places else b.kind(label)
        if kind == "complex":
            continue
        if kind == "real":
            degrees[label] = 2 if p == 2 else 1
        else:
            degrees[label] = p**top
    return ExtensionSim.make(degrees)


def separating_registry(algebras: Iterable[CsaDescriptor], p: int) -> list[tuple[str, ExtensionSim]]:
    """Extensions of local degree p^j at one place and p^K at all the others.

    Over these the p-indices of SL_1(A) read off every local p-valuation of
    A, so the registry separates algebras with different place-wise data.
    """
    algebras = list(algebras)
    kinds: dict[str, str] = {}
    top = 0
    for a in algebras:
        for label in a.places:
            kinds.setdefault(label, a.kind(label))
        top = max([top, *local_p_valuations(a, p).values()])
    kill = {}
    for label, kind in kinds.items():
        if kind == "finite":
            kill[label] = p**top
        elif kind == "real":
            kill[label] = 2 if p == 2 and top else 1
    entries = []
    for label in sorted(kinds):
        if kinds[label] == "complex":
            continue
        jmax = min(top, 1) if kinds[label] == "real" else top
        if kinds[label] == "real" and p != 2:
            jmax = 0
        for j in range(jmax + 1):
            degrees = dict(kill)
            degrees[label] = p**j
            entries.append((f"keep:{label}:{j}", ExtensionSim.make(degrees)))
    return entries


def _sl_equivalent(a: CsaDescriptor, b: CsaDescriptor, p: int) -> Verdict:
    va, vb = local_p_valuations(a, p), local_p_valuations(b, p)
    for label in sorted(set(va) | set(vb)):
        x, y = va.get(label, 0), vb.get(label, 0)
        if x != y:
            return Verdict.not_equivalent({"place": label, "vp_orders": [x, y]}, p)
    return Verdict.equivalent(p)


# ---------------------------------------------------------------------------
# SO


def _local_places(f: FormClass, f2: FormClass) -> list:
    primes = sorted(f.relevant_primes | f2.relevant_primes)
    return [INF, *primes]


def _discriminant_place(f: FormClass, f2: FormClass) -> int | None:
    """First prime, unramified for both forms, where one signed discriminant is a square.

    Only even dimensions: there the local Witt index at an unramified prime is
    m or m - 1 according as the signed discriminant is a local square. Such a
    prime exists whenever the discriminants differ modulo squares.
    """
    if f.dim % 2 or f.signed_discriminant == f2.signed_discriminant:
        return None
    skip = f.relevant_primes | f2.relevant_primes
    for v in primerange(3, DISCRIMINANT_SEARCH_BOUND):
        if v in skip:
            continue
        if is_local_square(f.signed_discriminant, v) != is_local_square(f2.signed_discriminant, v):
            return v
    return None


def _similarity_factor(f: FormClass, f2: FormClass) -> int | None:
    primes = sorted(
        set(prime_factors(abs(f.disc))) | set(prime_factors(abs(f2.disc)))
        | f.relevant_primes | f2.relevant_primes
    )
    count = 0
    for r in range(len(primes) + 1):
        for subset in combinations(primes, r):
            base = prod(subset)
            for lam in (base, -base):
                count += 1
                if count > SIMILARITY_SEARCH_CAP:
                    return None
                if f.scaled(lam) == f2:
                    return lam
    return None


def _so_equivalent_2(g: SpecialOrthogonal, g2: SpecialOrthogonal) -> Verdict:
    f, f2 = g.form_class, g2.form_class
    w, w2 = f.witt_index(), f2.witt_index()
    if w != w2:
        return Verdict.not_equivalent({"extension": GROUND, "witt": [w, w2]}, 2)
    for v in _local_places(f, f2):
        lw, lw2 = f.local_witt_index(v), f2.local_witt_index(v)
        if lw != lw2:
            return Verdict.not_equivalent({"extension": f"Q_{v}", "witt": [lw, lw2]}, 2)
        reg = [(f"Q_{v}", Completion(v))]
        i1, i2 = higher_p_index(g, 2, reg)[f"Q_{v}"], higher_p_index(g2, 2, reg)[f"Q_{v}"]
        if i1.distinguished != i2.distinguished:
            return Verdict.not_equivalent({"extension": f"Q_{v}", "witt": [lw, lw2]}, 2)
    v = _discriminant_place(f, f2)
    if v is not None:
        return Verdict.not_equivalent(
            {"extension": f"Q_{v}", "witt": [f.local_witt_index(v), f2.local_witt_index(v)]}, 2
        )
    if f == f2:
        return Verdict.equivalent(2, reason="isometric")
    k, k2 = f.anisotropic_kernel(), f2.anisotropic_kernel()
    if k.dim <= 1:
        return Verdict.equivalent(2, reason="both split")
    if k.dim == 2:
        if k.disc == k2.disc:
            return Verdict.equivalent(2, reason="both quasi-split with equal discriminant")
        d = f.signed_discriminant
        return Verdict.not_equivalent(
            {"extension": f"Q(sqrt({d}))", "witt": [w + 1, w2]}, 2
        )
    lam = _similarity_factor(f, f2)
    if lam is not None:
        return Verdict.equivalent(2, reason=f"similar with factor {lam}")
    return Verdict.unknown(
        "the criterion quantifies over all field extensions; no certificate from ground data", 2
    )


# ---------------------------------------------------------------------------
# abstract


def _abstract_equivalent(g: Abstract, g2: Abstract, p: int) -> Verdict:
    t1, t2 = g.p_table(p), g2.p_table(p)
    common = [label for label in t1.labels if label in t2]
    for label in common:
        if t1[label].distinguished != t2[label].distinguished:
            return Verdict.not_equivalent({"extension": label, "p_index": "differs"}, p)
    return Verdict.equivalent(p, relative=True)


# ---------------------------------------------------------------------------
# public API


def equivalent_mod_p(g: GroupDescriptor, g2: GroupDescriptor, p: int) -> Verdict:
    check_prime(p)
    kind = _check_kinds(g, g2)
    if kind == "SO" and p == 2 and g.diagram == g2.diagram:
        w, w2 = g.form_class.witt_index(), g2.form_class.witt_index()
        if w != w2:
            return Verdict.not_equivalent({"extension": GROUND, "witt": [w, w2]}, 2)
    witness = _type_witness(g, g2)
    if witness:
        return Verdict.not_equivalent(witness, p)
    if kind == "SL":
        return _sl_equivalent(g.algebra, g2.algebra, p)
    if kind == "SO":
        if p != 2:
            return Verdict.equivalent(p, reason="both quasi-p-split")
        return _so_equivalent_2(g, g2)
    return _abstract_equivalent(g, g2, p)


def relevant_primes(g: GroupDescriptor, g2: GroupDescriptor) -> list[int]:
    kind = _check_kinds(g, g2)
    if kind == "SL":
        return sorted(set(prime_factors(g.algebra.index)) | set(prime_factors(g2.algebra.index)))
    if kind == "SO":
        return [2]
    return sorted(set(g.primes) | set(g2.primes))


def motivically_equivalent(g: GroupDescriptor, g2: GroupDescriptor) -> Verdict:
    kind = _check_kinds(g, g2)
    if kind == "SO":
        return equivalent_mod_p(g, g2, 2)
    witness = _type_witness(g, g2)
    if witness:
        return Verdict.not_equivalent(witness)
    pending = None
    relative = False
    for p in relevant_primes(g, g2):
        if kind == "abstract" and (p not in g.primes or p not in g2.primes):
            pending = pending or Verdict.unknown(f"no {p}-index data on one side", p)
            continue
        v = equivalent_mod_p(g, g2, p)
        if v.is_not_equivalent:
            return v
        if v.is_unknown:
            pending = pending or v
        relative = relative or v.relative_to_registry
    if pending:
        return pending
    return Verdict.equivalent(relative=relative)


# ---------------------------------------------------------------------------
# Levi reduction


def _blocks(cuts: Sequence[int], total: int) -> list[int]:
    edges = [0, *cuts, total]
    return [b - a for a, b in zip(edges, edges[1:])]


def levi_descriptor(g: GroupDescriptor, theta: Iterable[Vertex]) -> list[GroupDescriptor]:
    """Semisimple part of a Levi subgroup of type Θ, as a list of descriptors.

    SL_1(A) with Θ = {k1 < ... < kr}: blocks of degrees k1, k2 - k1, ...,
    n - kr, each carrying the invariants of A. SO(q) with Θ among 1..w:
    split SL blocks followed by SO of q minus kr hyperbolic planes, which is
    omitted when fewer than 3 dimensions remain. On D_m, the fork vertices
    m - 1 and m end the last block at m (one of them) or m - 1 (both).
    """
    if isinstance(g, Abstract):
        raise ValidationError("Levi reduction needs a classical descriptor")
    d = g.diagram
    theta = d.check_vertices(theta)
    if not is_star_stable(g.action, theta):
        raise ValidationError("Θ is not stable under the star-action")
    dist = tits_index(g).distinguished_vertices
    if not theta <= dist:
        bad = d.format_vertex_set(theta - dist)
        raise ValidationError(f"Θ is not distinguished: {bad} not in δ0")
    ks = sorted(v.k for v in theta)
    if isinstance(g, SpecialLinear):
        a = g.algebra
        return [SpecialLinear(a.with_degree(n)) for n in _blocks(ks, g.degree)]
    fc = g.form_class
    if d.components[0][0] == "D":
        m = d.rank
        fork = [k for k in ks if k >= m - 1]
        if fork:
            head = [k for k in ks if k < m - 1]
            last = m - 1 if len(fork) == 2 else m
            cuts = head + [last]
            return [SpecialLinear(CsaDescriptor.split(n)) for n in _blocks(cuts[:-1], last)]
    out: list[GroupDescriptor] = []
    top = ks[-1] if ks else 0
    out += [SpecialLinear(CsaDescriptor.split(n)) for n in _blocks(ks[:-1], top)] if ks else []
    rest = fc.strip(top)
    if rest.dim >= 3:
        out.append(SpecialOrthogonal(rest))
    return out


_NORMALISE = {("D", 2): [("A", 1), ("A", 1)], ("D", 3): [("A", 3)], ("B", 1): [("A", 1)],
              ("C", 1): [("A", 1)], ("D", 1): []}


def normalised_components(components: Iterable[tuple[str, int]]) -> list[tuple[str, int]]:
    """Components with low-rank coincidences rewritten in type A; A0 dropped."""
    out = []
    for series, rank in components:
        if rank == 0:
            continue
        out += _NORMALISE.get((series, rank), [(series, rank)])
    return sorted(out)


def levi_components(factors: Iterable[GroupDescriptor]) -> list[tuple[str, int]]:
    comps = []
    for f in factors:
        if isinstance(f, SpecialLinear):
            comps.append(("A", f.degree - 1))
        else:
            comps += list(f.diagram.components)
    return normalised_components(comps)


def expected_levi_components(g: GroupDescriptor, theta: Iterable[Vertex]) -> list[tuple[str, int]]:
    return normalised_components(levi_type(g.diagram, theta).diagram.components)


# ---------------------------------------------------------------------------
# upper-motive classes


@dataclass
class ClassAssignment:
    p: int
    ids: dict[tuple[int, frozenset[Vertex]], str]
    caveats: list[str] = field(default_factory=list)

    def __getitem__(self, key: tuple[int, Iterable[Vertex]]) -> str:
        i, theta = key
        return self.ids[(i, frozenset(Vertex(*v) for v in theta))]

    def label(self, i: int, theta: Iterable[Vertex], group_id: str | None = None) -> UpperMotiveLabel:
        theta = frozenset(Vertex(*v) for v in theta)
        return UpperMotiveLabel(group_id or f"G{i}", tuple(theta), self.p, self.ids[(i, theta)])


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


def _contains(idx, theta: frozenset[Vertex]) -> bool:
    return theta <= idx.distinguished_vertices


def assign_class_ids(groups: Sequence[GroupDescriptor], p: int, thetas: Iterable | None = None,
                     registry: Sequence = ()) -> ClassAssignment:
    """Class ids for the upper motives of X_{Θ,G} mod p.

    Both p-isotropic: the Tate class. Exactly one p-isotropic: distinct.
    Both p-anisotropic: shared when the groups are equivalent mod p, which
    for SL is also necessary. When a registry is given, Θ must moreover have
    the same p-index membership over every registry entry. Undecided
    comparisons keep distinct ids and add a caveat. Without ``thetas`` every
    star-stable subset is used, which is exponential in the rank.
    """
    check_prime(p)
    groups = list(groups)
    if not groups:
        return ClassAssignment(p, {})
    d, a = groups[0].diagram, groups[0].action
    for g in groups[1:]:
        if g.diagram != d or g.action != a:
            raise ValidationError("assign_class_ids needs groups of one type")
    if thetas is None:
        thetas = star_stable_subsets(a)
    thetas = [d.check_vertices(t) for t in thetas]
    ground = [p_index(g, p) for g in groups]
    tables = [higher_p_index(g, p, registry) for g in groups] if registry else None
    verdicts: dict[tuple[int, int], Verdict] = {}
    caveats: list[str] = []
    uf = _UnionFind()
    ids: dict = {}
    tate_keys: set = set()
    for theta in thetas:
        iso = [_contains(idx, theta) for idx in ground]
        for i in range(len(groups)):
            uf.find((i, theta))
            if iso[i]:
                tate_keys.add((i, theta))
        for i, j in combinations(range(len(groups)), 2):
            if iso[i] or iso[j]:
                continue
            if tables is not None and any(
                _contains(tables[i][lab], theta) != _contains(tables[j][lab], theta)
                for lab in tables[i].labels
            ):
                continue
            if (i, j) not in verdicts:
                verdicts[(i, j)] = equivalent_mod_p(groups[i], groups[j], p)
            v = verdicts[(i, j)]
            if v.is_equivalent:
                uf.union((i, theta), (j, theta))
                if v.relative_to_registry:
                    caveats.append(f"groups {i} and {j}: equivalence judged relative to the registry")
            elif v.is_unknown:
                caveats.append(f"groups {i} and {j}, Θ={d.format_vertex_set(theta)}: {v.reason}")
    names: dict = {}
    for key in sorted(uf.parent, key=lambda k: (sorted(k[1]), k[0])):
        if key in tate_keys:
            ids[key] = TATE_CLASS
            continue
        root = uf.find(key)
        if root not in names:
            names[root] = f"c{len(names)}"
        ids[key] = names[root]
    return ClassAssignment(p, ids, sorted(set(caveats)))

