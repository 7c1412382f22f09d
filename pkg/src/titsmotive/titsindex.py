"""Tits indices and p-indices of classical groups, and higher p-index tables.

Distinguished orbits are recorded as the set δ0 of star-orbits Θ whose flag
variety of type Θ has a rational point. For a prime p the p-index records
the orbits that become isotropic over some extension of degree prime to p.

Rules used for the classical descriptors:

* ``SL_1(A)`` with deg A = n: type A_{n-1}, inner; vertex k is
  distinguished iff ind(A) divides k, and p-distinguished iff the p-part
  d_p of ind(A) divides k.
* ``SO(q)``: type B_m (dim 2m+1) or D_m (dim 2m, inner iff the signed
  discriminant is a square); the distinguished vertices are 1..w(q), with
  the usual fork rule for D_m. 2 is the only torsion prime, so the 2-index
  is the classical index (Springer) and every odd p-index is quasi-split.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .brauer import CsaDescriptor, ExtensionSim, extend, p_valuation_index
from .diagram import DynkinDiagram, StarAction, Vertex, orbits
from .errors import InconsistentInputError, MissingDataError, ValidationError
from .qform import INF, FormClass, QuadraticForm, as_form_class, check_place, is_local_square
from .rational import check_prime

GROUND = "ground"


@dataclass(frozen=True)
class TitsIndex:
    diagram: DynkinDiagram
    action: StarAction
    distinguished: frozenset[frozenset[Vertex]]

    def __post_init__(self):
        if self.action.diagram != self.diagram:
            raise ValidationError("star-action belongs to another diagram")
        dist = frozenset(frozenset(Vertex(*v) for v in orb) for orb in self.distinguished)
        object.__setattr__(self, "distinguished", dist)
        orbs = set(self.action.orbits)
        for orb in dist:
            if orb not in orbs:
                names = self.diagram.format_vertex_set(orb)
                raise ValidationError(f"distinguished set {names} is not a star-orbit")
        _reject_triality(self.action)

    @property
    def orbits(self) -> tuple[frozenset[Vertex], ...]:
        return self.action.orbits

    @property
    def distinguished_vertices(self) -> frozenset[Vertex]:
        return frozenset().union(*self.distinguished) if self.distinguished else frozenset()

    def sorted_distinguished(self) -> list[frozenset[Vertex]]:
        return sorted(self.distinguished, key=lambda o: min(o))

    def contains(self, theta: Iterable[Vertex]) -> bool:
        """Θ lies in δ0, i.e. the flag variety of type Θ is isotropic."""
        return frozenset(theta) <= self.distinguished_vertices

    def is_quasi_split(self) -> bool:
        return len(self.distinguished) == len(self.orbits)

    def is_anisotropic(self) -> bool:
        return not self.distinguished

    def same_type(self, other: "TitsIndex") -> bool:
        return self.diagram == other.diagram and self.action == other.action


def _reject_triality(a: StarAction) -> None:
    d = a.diagram
    pos = {v: i for i, v in enumerate(d.vertices)}
    for c, (s, r) in enumerate(d.components):
        if (s, r) != ("D", 4):
            continue
        outer = [Vertex(c, 1), Vertex(c, 3), Vertex(c, 4)]
        for g in a.group:
            images = [g[pos[v]] for v in outer]
            if set(images) == set(outer) and all(images[i] != outer[i] for i in range(3)):
                raise ValidationError("trialitarian star-actions on D4 are not supported")


def _index_from_vertices(d: DynkinDiagram, a: StarAction, keep: Iterable[Vertex]) -> TitsIndex:
    keep = set(keep)
    return TitsIndex(d, a, frozenset(o for o in orbits(d, a) if o <= keep))


# ---------------------------------------------------------------------------
# group descriptors


@dataclass(frozen=True)
class SpecialLinear:
    """SL_1(A) for a central simple algebra A (inner type A_{deg-1}).

    Degree 1 is accepted and stands for the trivial group, which shows up as
    a Levi factor.
    """

    algebra: CsaDescriptor

    @property
    def degree(self) -> int:
        return self.algebra.degree

    @property
    def diagram(self) -> DynkinDiagram:
        return DynkinDiagram.simple("A", self.degree - 1)

    @property
    def action(self) -> StarAction:
        return StarAction.trivial(self.diagram)


@dataclass(frozen=True)
class SpecialOrthogonal:
    """SO(q); ``form`` may be an explicit diagonal form or an isometry class."""

    form: Union[QuadraticForm, FormClass]

    def __post_init__(self):
        if as_form_class(self.form).dim < 3:
            raise ValidationError("SO(q) needs dim q >= 3")

    @property
    def form_class(self) -> FormClass:
        return as_form_class(self.form)

    @property
    def dim(self) -> int:
        return self.form_class.dim

    @property
    def diagram(self) -> DynkinDiagram:
        n = self.dim
        return DynkinDiagram.simple("B", (n - 1) // 2) if n % 2 else DynkinDiagram.simple("D", n // 2)

    @property
    def action(self) -> StarAction:
        return _orthogonal_action(self.dim, self.form_class.signed_discriminant == 1)


@dataclass(frozen=True)
class HigherIndexTable:
    """Finite restriction of a higher index: extension label -> index.

    ``order`` lists pairs (smaller, larger) of labels with larger an
    extension of smaller; distinguished sets must grow along them.
    """

    entries: tuple[tuple[str, TitsIndex], ...]
    order: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        entries = dict(self.entries)
        if GROUND not in entries:
            raise ValidationError("a higher index table needs a ground entry")
        ground = entries[GROUND]
        for label, idx in entries.items():
            if not idx.same_type(ground):
                raise ValidationError(f"entry {label!r} has another diagram or star-action")
        for small, big in self.order:
            if small not in entries or big not in entries:
                raise ValidationError(f"order pair ({small}, {big}) names an unknown label")
            if not entries[small].distinguished <= entries[big].distinguished:
                raise InconsistentInputError(f"index shrinks from {small!r} to {big!r}")
        ordered = [(GROUND, ground)] + [(k, v) for k, v in self.entries if k != GROUND]
        object.__setattr__(self, "entries", tuple(ordered))
        object.__setattr__(self, "order", tuple(tuple(p) for p in self.order))

    @classmethod
    def from_mapping(cls, entries: Mapping[str, TitsIndex], order=()) -> "HigherIndexTable":
        return cls(tuple(entries.items()), tuple(order))

    def __getitem__(self, label: str) -> TitsIndex:
        return dict(self.entries)[label]

    def __contains__(self, label: str) -> bool:
        return label in dict(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> list[str]:
        return [k for k, _ in self.entries]

    @property
    def ground(self) -> TitsIndex:
        return self[GROUND]

    def as_dict(self) -> dict[str, TitsIndex]:
        return dict(self.entries)


@dataclass(frozen=True)
class Abstract:
    """A group known only through its type and index tables.

    ``table`` holds classical indices, ``p_tables`` maps primes to p-index tables.
    """

    diagram: DynkinDiagram
    action: StarAction
    table: HigherIndexTable | None = None
    p_tables: tuple[tuple[int, HigherIndexTable], ...] = ()

    def __post_init__(self):
        if self.action.diagram != self.diagram:
            raise ValidationError("star-action belongs to another diagram")
        _reject_triality(self.action)
        tables = {check_prime(p): t for p, t in dict(self.p_tables).items()}
        object.__setattr__(self, "p_tables", tuple(sorted(tables.items())))
        for t in ([self.table] if self.table else []) + list(tables.values()):
            if t.ground.diagram != self.diagram or t.ground.action != self.action:
                raise ValidationError("table entries disagree with the descriptor's type")
        if self.table:
            for p, t in tables.items():
                for label in t.labels:
                    if label in self.table and not (
                        self.table[label].distinguished <= t[label].distinguished
                    ):
                        raise InconsistentInputError(
                            f"classical index at {label!r} is not contained in its {p}-index"
                        )

    def p_table(self, p: int) -> HigherIndexTable:
        tables = dict(self.p_tables)
        if p not in tables:
            raise MissingDataError(f"abstract descriptor carries no {p}-index data")
        return tables[p]

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.p_tables]


GroupDescriptor = Union[SpecialLinear, SpecialOrthogonal, Abstract]


@dataclass(frozen=True)
class Completion:
    """Registry entry for SO: pass to the completion Q_v."""

    place: object

    def __post_init__(self):
        object.__setattr__(self, "place", check_place(self.place))


RegistrySpec = Union[None, ExtensionSim, Completion]


def group_type(g: GroupDescriptor) -> tuple[DynkinDiagram, StarAction]:
    return g.diagram, g.action


# ---------------------------------------------------------------------------
# indices


def _orthogonal_action(dim: int, square_disc: bool) -> StarAction:
    if dim % 2:
        return StarAction.trivial(DynkinDiagram.simple("B", (dim - 1) // 2))
    m = dim // 2
    d = DynkinDiagram.simple("D", m)
    if square_disc:
        return StarAction.trivial(d)
    return StarAction.from_mappings(d, [{Vertex(0, m - 1): Vertex(0, m), Vertex(0, m): Vertex(0, m - 1)}])


def orthogonal_index(dim: int, w: int, square_disc: bool) -> TitsIndex:
    """Index of SO(q) from dimension, Witt index and discriminant triviality."""
    a = _orthogonal_action(dim, square_disc)
    d = a.diagram
    if dim % 2:
        m = (dim - 1) // 2
        if w > m:
            raise InconsistentInputError(f"Witt index {w} exceeds rank {m}")
        return _index_from_vertices(d, a, [Vertex(0, k) for k in range(1, w + 1)])
    m = dim // 2
    if w > m:
        raise InconsistentInputError(f"Witt index {w} exceeds rank {m}")
    if square_disc:
        if w == m - 1:
            raise InconsistentInputError("inner D_m with Witt index m-1 cannot occur")
        return _index_from_vertices(d, a, [Vertex(0, k) for k in range(1, w + 1)])
    if w == m:
        raise InconsistentInputError("hyperbolic form with non-square discriminant")
    top = m if w == m - 1 else w
    return _index_from_vertices(d, a, [Vertex(0, k) for k in range(1, top + 1)])


def _sl_index(g: SpecialLinear, divisor: int) -> TitsIndex:
    d = g.diagram
    return _index_from_vertices(d, g.action, [Vertex(0, k) for k in range(1, g.degree) if k % divisor == 0])


def tits_index(g: GroupDescriptor) -> TitsIndex:
    if isinstance(g, SpecialLinear):
        return _sl_index(g, g.algebra.index)
    if isinstance(g, SpecialOrthogonal):
        fc = g.form_class
        return orthogonal_index(fc.dim, fc.witt_index(), fc.signed_discriminant == 1)
    if isinstance(g, Abstract):
        if g.table is None:
            raise MissingDataError("abstract descriptor carries no classical index table")
        return g.table.ground
    raise ValidationError(f"not a group descriptor: {g!r}")


def p_index(g: GroupDescriptor, p: int) -> TitsIndex:
    check_prime(p)
    if isinstance(g, SpecialLinear):
        return _sl_index(g, p ** p_valuation_index(g.algebra, p))
    if isinstance(g, SpecialOrthogonal):
        if p == 2:
            return tits_index(g)
        return _index_from_vertices(g.diagram, g.action, g.diagram.vertices)
    if isinstance(g, Abstract):
        return g.p_table(p).ground
    raise ValidationError(f"not a group descriptor: {g!r}")


def is_quasi_p_split(g: GroupDescriptor, p: int) -> bool:
    return p_index(g, p).is_quasi_split()


def is_p_anisotropic(g: GroupDescriptor, p: int) -> bool:
    return p_index(g, p).is_anisotropic()


def _local_orthogonal_index(g: SpecialOrthogonal, v, p: int) -> TitsIndex:
    """p-index of SO(q) over Q_v, written with the ground star-action.

    The discriminant may become a square over Q_v; the distinguished vertex
    set is then still a union of ground orbits, so tables stay homogeneous.
    """
    fc = g.form_class
    if p != 2:
        return _index_from_vertices(g.diagram, g.action, g.diagram.vertices)
    w = fc.local_witt_index(v)
    sd = fc.signed_discriminant
    square = sd > 0 if v == INF else is_local_square(sd, v)
    local = orthogonal_index(fc.dim, w, square)
    return _index_from_vertices(g.diagram, g.action, local.distinguished_vertices)


def _normalise_registry(registry) -> list[tuple[str, object]]:
    if isinstance(registry, Mapping):
        items = list(registry.items())
    else:
        items = []
        for entry in registry:
            if isinstance(entry, str):
                items.append((entry, None))
            else:
                label, spec = entry
                items.append((label, spec))
    labels = [label for label, _ in items]
    if len(set(labels)) != len(labels):
        raise ValidationError("duplicate labels in registry")
    return items


def higher_p_index(g: GroupDescriptor, p: int, registry: Sequence = ()) -> HigherIndexTable:
    """p-index over every registry extension; the ground field is always included.

    Registry entries are ``(label, spec)`` pairs (a mapping is accepted):
    an :class:`ExtensionSim` for SL, a :class:`Completion` for SO, and ``None``
    for the ground field or for abstract descriptors, whose entries are looked
    up by label.
    """
    check_prime(p)
    out: dict[str, TitsIndex] = {GROUND: p_index(g, p)}
    for label, spec in _normalise_registry(registry):
        if label == GROUND:
            if spec is not None:
                raise ValidationError("the ground label cannot carry an extension")
            continue
        if isinstance(g, Abstract):
            if spec is not None:
                raise ValidationError(f"registry entry {label!r}: abstract groups take labels only")
            table = g.p_table(p)
            if label not in table:
                raise MissingDataError(f"no {p}-index recorded for extension {label!r}")
            out[label] = table[label]
        elif isinstance(g, SpecialLinear):
            if spec is None:
                spec = ExtensionSim()
            if not isinstance(spec, ExtensionSim):
                raise ValidationError(f"registry entry {label!r} is not applicable to SL")
            out[label] = p_index(SpecialLinear(extend(g.algebra, spec)), p)
        elif isinstance(g, SpecialOrthogonal):
            if spec is None:
                out[label] = p_index(g, p)
                continue
            if not isinstance(spec, Completion):
                raise ValidationError(f"registry entry {label!r} is not applicable to SO")
            out[label] = _local_orthogonal_index(g, spec.place, p)
        else:
            raise ValidationError(f"not a group descriptor: {g!r}")
    return HigherIndexTable(tuple(out.items()))
