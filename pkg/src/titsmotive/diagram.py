"""Dynkin diagrams, star-actions, Levi surgery and Poincaré polynomials.

Vertices are numbered following Bourbaki, component by component:

* ``A_n``: the path 1 - 2 - ... - n.
* ``B_n`` / ``C_n``: the path 1 - ... - n with a double bond between n-1 and n;
  vertex n is short in ``B_n`` and long in ``C_n``.
* ``D_n``: the path 1 - ... - (n-2) with n-1 and n both attached to n-2.
  ``D_2`` has no edges, ``D_3`` is 2 - 1 - 3.
* ``E_n``: the path 1 - 3 - 4 - ... - n with 2 attached to 4.
* ``F_4``: 1 - 2 => 3 - 4, vertices 1 and 2 long.
* ``G_2``: a triple bond, vertex 1 short.

A parabolic of type Θ corresponds to the crossed vertices Θ, its Levi subgroup
keeps the complement. The Borel subgroup has type "all vertices".
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import ValidationError

SERIES = "ABCDEFG"

_DEGREES_EXCEPTIONAL = {
    ("E", 6): (2, 5, 6, 8, 9, 12),
    ("E", 7): (2, 6, 8, 10, 12, 14, 18),
    ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
    ("F", 4): (2, 6, 8, 12),
    ("G", 2): (2, 6),
}


class Vertex(NamedTuple):
    comp: int  # position of the component in the diagram, from 0
    k: int  # Bourbaki number inside the component, from 1


VertexSet = frozenset


def _check_rank(series: str, rank: int) -> None:
    if series not in SERIES:
        raise ValidationError(f"unknown series {series!r}")
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 1:
        raise ValidationError(f"bad rank {rank!r} for series {series}")
    ok = {
        "A": rank >= 1,
        "B": rank >= 1,
        "C": rank >= 1,
        "D": rank >= 2,
        "E": rank in (6, 7, 8),
        "F": rank == 4,
        "G": rank == 2,
    }[series]
    if not ok:
        raise ValidationError(f"{series}{rank} is not a Dynkin type")


def bourbaki_edges(series: str, n: int) -> list[tuple[int, int]]:
    """Edges of a simple component as pairs of Bourbaki numbers."""
    if series in "ABC" or (series in "FG"):
        return [(i, i + 1) for i in range(1, n)]
    if series == "D":
        edges = [(i, i + 1) for i in range(1, n - 2)]
        if n >= 3:
            edges += [(n - 2, n - 1), (n - 2, n)]
        return edges
    if series == "E":
        return [(1, 3), (2, 4)] + [(i, i + 1) for i in range(3, n)]
    raise ValidationError(series)


def root_lengths(series: str, n: int) -> list[int]:
    """Squared root lengths of the simple roots, shortest normalised to 1."""
    if series == "B" and n > 1:
        return [2] * (n - 1) + [1]
    if series == "C" and n > 1:
        return [1] * (n - 1) + [2]
    if series == "F":
        return [2, 2, 1, 1]
    if series == "G":
        return [1, 3]
    return [1] * n


def fundamental_degrees(series: str, n: int) -> tuple[int, ...]:
    _check_rank(series, n)
    if series == "A":
        return tuple(range(2, n + 2))
    if series in "BC":
        return tuple(range(2, 2 * n + 1, 2))
    if series == "D":
        return tuple(range(2, 2 * n - 1, 2)) + (n,)
    return _DEGREES_EXCEPTIONAL[(series, n)]


_COMPONENT_RE = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")


@dataclass(frozen=True)
class DynkinDiagram:
    """Disjoint union of simple components ``(series, rank)``."""

    components: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        comps = tuple((str(s).upper(), r) for s, r in self.components)
        for s, r in comps:
            _check_rank(s, r)
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, text: str) -> "DynkinDiagram":
        """Parse ``"A3"``, ``"D4+A1"``; ``"A0"`` (or the empty string) is the empty diagram."""
        text = text.strip()
        if text in ("", "A0"):
            return cls(())
        comps = []
        for part in text.split("+"):
            m = _COMPONENT_RE.match(part)
            if not m:
                raise ValidationError(f"cannot parse diagram component {part!r}")
            if int(m.group(2)) == 0:
                if m.group(1).upper() != "A":
                    raise ValidationError(f"{part.strip()} is not a Dynkin type")
                continue
            comps.append((m.group(1).upper(), int(m.group(2))))
        return cls(tuple(comps))

    @classmethod
    def simple(cls, series: str, rank: int) -> "DynkinDiagram":
        return cls(((series, rank),)) if rank > 0 else cls(())

    def __str__(self) -> str:
        if not self.components:
            return "A0"
        return "+".join(f"{s}{r}" for s, r in self.components)

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.components)

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        return tuple(Vertex(c, k) for c, (_, r) in enumerate(self.components) for k in range(1, r + 1))

    @cached_property
    def _lengths(self) -> dict[Vertex, int]:
        out = {}
        for c, (s, r) in enumerate(self.components):
            for k, ell in enumerate(root_lengths(s, r), start=1):
                out[Vertex(c, k)] = ell
        return out

    @cached_property
    def _adjacency(self) -> dict[Vertex, tuple[Vertex, ...]]:
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices}
        for c, (s, r) in enumerate(self.components):
            for i, j in bourbaki_edges(s, r):
                adj[Vertex(c, i)].append(Vertex(c, j))
                adj[Vertex(c, j)].append(Vertex(c, i))
        return {v: tuple(sorted(n)) for v, n in adj.items()}

    def series_of(self, v: Vertex) -> str:
        return self.components[v.comp][0]

    def root_length(self, v: Vertex) -> int:
        return self._lengths[v]

    def neighbors(self, v: Vertex) -> tuple[Vertex, ...]:
        return self._adjacency[v]

    def bond(self, u: Vertex, v: Vertex) -> int:
        """Number of bonds between two vertices (0 if not adjacent)."""
        if v not in self._adjacency[u]:
            return 0
        lu, lv = self._lengths[u], self._lengths[v]
        return max(lu, lv) // min(lu, lv)

    def cartan(self, u: Vertex, v: Vertex) -> int:
        """Cartan integer <u^vee, v>."""
        if u == v:
            return 2
        if v not in self._adjacency[u]:
            return 0
        lu, lv = self._lengths[u], self._lengths[v]
        return -(lv // lu) if lv > lu else -1

    def check_vertices(self, theta: Iterable[Vertex]) -> frozenset[Vertex]:
        theta = frozenset(Vertex(*v) for v in theta)
        stray = theta - set(self.vertices)
        if stray:
            raise ValidationError(f"vertices {sorted(stray)} are not in {self}")
        return theta

    # text syntax ---------------------------------------------------------

    def _component_names(self) -> list[str]:
        seen: dict[str, int] = {}
        names = []
        for s, r in self.components:
            base = f"{s}{r}"
            seen[base] = seen.get(base, 0) + 1
            names.append(base if seen[base] == 1 else f"{base}#{seen[base]}")
        return names

    def format_vertex(self, v: Vertex) -> str:
        return f"{self._component_names()[v.comp]}:{v.k}"

    def vertex_token(self, v: Vertex):
        """JSON token: a bare int for one-component diagrams, ``"A3:2"`` otherwise."""
        return v.k if len(self.components) == 1 else self.format_vertex(v)

    def parse_vertex(self, token) -> Vertex:
        if isinstance(token, Vertex):
            self.check_vertices([token])
            return token
        if isinstance(token, int) and not isinstance(token, bool):
            if len(self.components) != 1:
                raise ValidationError(f"bare vertex {token} is ambiguous in {self}")
            v = Vertex(0, token)
        elif isinstance(token, str) and token.strip().isdigit():
            return self.parse_vertex(int(token))
        elif isinstance(token, str) and ":" in token:
            name, _, num = token.strip().partition(":")
            name = name.strip().upper()
            if "#" not in name:
                name_full = name
            else:
                base, _, occ = name.partition("#")
                name_full = base if occ == "1" else name
            names = self._component_names()
            if name_full not in names:
                raise ValidationError(f"no component {name!r} in {self}")
            try:
                v = Vertex(names.index(name_full), int(num))
            except ValueError as exc:
                raise ValidationError(f"bad vertex {token!r}") from exc
        else:
            raise ValidationError(f"bad vertex {token!r}")
        if v not in self._lengths:
            raise ValidationError(f"vertex {token!r} is not in {self}")
        return v

    def parse_vertex_set(self, text) -> frozenset[Vertex]:
        """Accept ``"{A3:1,A3:3}"``, ``"1,3"`` or a list of vertex tokens."""
        if isinstance(text, str):
            body = text.strip().strip("{}").strip()
            tokens = [t for t in (s.strip() for s in body.split(",")) if t]
        else:
            tokens = list(text)
        return frozenset(self.parse_vertex(t) for t in tokens)

    def format_vertex_set(self, theta: Iterable[Vertex]) -> str:
        return "{" + ",".join(self.format_vertex(v) for v in sorted(theta)) + "}"


# ---------------------------------------------------------------------------
# star-actions


@dataclass(frozen=True)
class StarAction:
    """Group of diagram automorphisms given by generators.

    Each generator is stored as the tuple of images of ``diagram.vertices``.
    """

    diagram: DynkinDiagram
    generators: tuple[tuple[Vertex, ...], ...] = ()

    def __post_init__(self):
        d = self.diagram
        gens = []
        for g in self.generators:
            g = tuple(Vertex(*v) for v in g)
            _check_automorphism(d, dict(zip(d.vertices, g)))
            if g != d.vertices and g not in gens:
                gens.append(g)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def trivial(cls, d: DynkinDiagram) -> "StarAction":
        return cls(d, ())

    @classmethod
    def from_mappings(cls, d: DynkinDiagram, mappings: Iterable[Mapping[Vertex, Vertex]]) -> "StarAction":
        gens = []
        for m in mappings:
            m = {Vertex(*k): Vertex(*v) for k, v in m.items()}
            gens.append(tuple(m.get(v, v) for v in d.vertices))
        return cls(d, tuple(gens))

    @classmethod
    def from_cycles(cls, d: DynkinDiagram, generators: Iterable[Iterable[Sequence]]) -> "StarAction":
        """Each generator is a list of cycles of vertex tokens."""
        mappings = []
        for cycles in generators:
            m: dict[Vertex, Vertex] = {}
            for cyc in cycles:
                vs = [d.parse_vertex(t) for t in cyc]
                for a, b in zip(vs, vs[1:] + vs[:1]):
                    if a in m:
                        raise ValidationError(f"vertex {a} occurs twice in a generator")
                    m[a] = b
            mappings.append(m)
        return cls.from_mappings(d, mappings)

    def mapping(self, i: int) -> dict[Vertex, Vertex]:
        return dict(zip(self.diagram.vertices, self.generators[i]))

    def cycles(self, i: int) -> list[list[Vertex]]:
        m = self.mapping(i)
        seen: set[Vertex] = set()
        out = []
        for v in self.diagram.vertices:
            if v in seen or m[v] == v:
                continue
            cyc = [v]
            seen.add(v)
            w = m[v]
            while w != v:
                cyc.append(w)
                seen.add(w)
                w = m[w]
            out.append(cyc)
        return out

    @cached_property
    def group(self) -> frozenset[tuple[Vertex, ...]]:
        """All elements of the generated group, as image tuples."""
        verts = self.diagram.vertices
        pos = {v: i for i, v in enumerate(verts)}
        ident = tuple(verts)
        seen = {ident}
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for h in self.generators:
                gh = tuple(h[pos[g[i]]] for i in range(len(verts)))
                if gh not in seen:
                    seen.add(gh)
                    queue.append(gh)
        return frozenset(seen)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StarAction):
            return NotImplemented
        return self.diagram == other.diagram and self.group == other.group

    def __hash__(self) -> int:
        return hash((self.diagram, self.group))

    @cached_property
    def orbits(self) -> tuple[frozenset[Vertex], ...]:
        return tuple(orbits(self.diagram, self))


def _check_automorphism(d: DynkinDiagram, m: Mapping[Vertex, Vertex]) -> None:
    verts = set(d.vertices)
    if set(m) != verts or set(m.values()) != verts:
        raise ValidationError("star-action generator is not a permutation of the vertices")
    for u in d.vertices:
        mu = m[u]
        if d.components[u.comp] != d.components[mu.comp]:
            raise ValidationError(f"generator sends {d.format_vertex(u)} to a component of another type")
        for v in d.vertices:
            if d.cartan(u, v) != d.cartan(mu, m[v]):
                raise ValidationError(
                    f"generator is not a diagram automorphism at "
                    f"({d.format_vertex(u)}, {d.format_vertex(v)})"
                )


def orbits(d: DynkinDiagram, a: StarAction | None = None) -> list[frozenset[Vertex]]:
    """Partition of the vertices into star-orbits, sorted by least vertex."""
    if a is None:
        a = StarAction.trivial(d)
    if a.diagram != d:
        raise ValidationError("star-action belongs to another diagram")
    maps = [a.mapping(i) for i in range(len(a.generators))]
    seen: set[Vertex] = set()
    out = []
    for v in d.vertices:
        if v in seen:
            continue
        orb = {v}
        queue = deque([v])
        while queue:
            w = queue.popleft()
            for m in maps:
                x = m[w]
                if x not in orb:
                    orb.add(x)
                    queue.append(x)
        seen |= orb
        out.append(frozenset(orb))
    return out


def is_star_stable(a: StarAction, theta: Iterable[Vertex]) -> bool:
    theta = frozenset(theta)
    return all(frozenset(g[a.diagram.vertices.index(v)] for v in theta) == theta for g in a.generators)


# ---------------------------------------------------------------------------
# Levi surgery


class LeviType(NamedTuple):
    diagram: DynkinDiagram
    relabel: dict[Vertex, Vertex]


def levi_type(d: DynkinDiagram, theta: Iterable[Vertex]) -> LeviType:
    """Delete Θ and re-identify what is left, with canonical component order."""
    theta = d.check_vertices(theta)
    keep = [v for v in d.vertices if v not in theta]
    keep_set = set(keep)
    seen: set[Vertex] = set()
    found = []
    for v in keep:
        if v in seen:
            continue
        comp = {v}
        queue = deque([v])
        while queue:
            w = queue.popleft()
            for x in d.neighbors(w):
                if x in keep_set and x not in comp:
                    comp.add(x)
                    queue.append(x)
        seen |= comp
        series, rank, numbering = _identify(d, comp)
        found.append((series, rank, min(comp), numbering))
    found.sort(key=lambda t: (t[0], t[1], t[2]))
    relabel = {}
    for c, (_, _, _, numbering) in enumerate(found):
        for old, k in numbering.items():
            relabel[old] = Vertex(c, k)
    return LeviType(DynkinDiagram(tuple((s, r) for s, r, _, _ in found)), relabel)


def _walk(d: DynkinDiagram, start: Vertex, prev: Vertex, members: set[Vertex]) -> list[Vertex]:
    path = [start]
    while True:
        nxt = [x for x in d.neighbors(path[-1]) if x in members and x != prev]
        if not nxt:
            return path
        prev = path[-1]
        path.append(nxt[0])


def _identify(d: DynkinDiagram, comp: set[Vertex]) -> tuple[str, int, dict[Vertex, int]]:
    """Type and Bourbaki numbering of a connected subdiagram."""
    n = len(comp)
    if n == 1:
        (v,) = comp
        return "A", 1, {v: 1}
    deg = {v: sum(1 for x in d.neighbors(v) if x in comp) for v in comp}
    branch = [v for v in comp if deg[v] == 3]
    if branch:
        b = branch[0]
        arms = [_walk(d, x, b, comp) for x in d.neighbors(b) if x in comp]
        arms.sort(key=lambda arm: (len(arm), arm[0]))
        lens = tuple(len(arm) for arm in arms)
        if lens[:2] == (1, 1):
            # D_n: long arm is 1..n-3 read from the far end, the two leaves are n-1, n
            long_arm, leaf1, leaf2 = arms[2], arms[0], arms[1]
            if lens == (1, 1, 1):
                long_arm, leaf1, leaf2 = sorted(arms, key=lambda arm: arm[0])
            numbering = {v: i for i, v in enumerate(reversed(long_arm), start=1)}
            numbering[b] = n - 2
            numbering[leaf1[0]] = n - 1
            numbering[leaf2[0]] = n
            return "D", n, numbering
        if lens[:2] == (1, 2) and lens[2] in (2, 3, 4):
            short, mid, tail = arms
            numbering = {short[0]: 2, b: 4, mid[0]: 3, mid[1]: 1}
            for i, v in enumerate(tail, start=5):
                numbering[v] = i
            return "E", n, numbering
        raise ValidationError("subdiagram is not of finite type")
    ends = sorted(v for v in comp if deg[v] == 1)
    path = _walk(d, ends[0], ends[0], comp)
    bonds = [d.bond(path[i], path[i + 1]) for i in range(n - 1)]
    ambient = d.series_of(path[0])
    if max(bonds) == 1:
        return "A", n, {v: i for i, v in enumerate(path, start=1)}
    if max(bonds) == 3:
        if d.root_length(path[0]) > d.root_length(path[1]):
            path.reverse()
        return "G", 2, {path[0]: 1, path[1]: 2}
    pos = bonds.index(2)
    if n == 4 and pos == 1:
        if d.root_length(path[0]) < d.root_length(path[-1]):
            path.reverse()
        return "F", 4, {v: i for i, v in enumerate(path, start=1)}
    if n == 2:
        short_last = ambient != "C"
        if (d.root_length(path[1]) < d.root_length(path[0])) != short_last:
            path.reverse()
    elif pos == 0:
        path.reverse()
    series = "B" if d.root_length(path[-1]) < d.root_length(path[-2]) else "C"
    return series, n, {v: i for i, v in enumerate(path, start=1)}


# ---------------------------------------------------------------------------
# Poincaré polynomials


def _poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_divexact(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a = list(a)
    if len(b) > len(a):
        raise ArithmeticError("inexact polynomial division")
    lead = b[-1]
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c, r = divmod(a[i + len(b) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] -= c * y
    if any(a):
        raise ArithmeticError("inexact polynomial division")
    return q


@dataclass(frozen=True)
class PoincarePolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        if any(x < 0 for x in c):
            raise ValidationError("Poincaré polynomial with a negative coefficient")
        object.__setattr__(self, "coeffs", tuple(c))

    def __call__(self, q: int = 1) -> int:
        return sum(c * q**i for i, c in enumerate(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        return PoincarePolynomial(tuple(_poly_mul(self.coeffs, other.coeffs)))

    def __truediv__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        return PoincarePolynomial(tuple(_poly_divexact(self.coeffs, other.coeffs)))

    def __iter__(self):
        return iter(self.coeffs)


def weyl_poincare(d: DynkinDiagram) -> PoincarePolynomial:
    """Product of the q-integers [d_i] over all fundamental degrees."""
    coeffs = [1]
    for s, r in d.components:
        for deg in fundamental_degrees(s, r):
            coeffs = _poly_mul(coeffs, [1] * deg)
    return PoincarePolynomial(tuple(coeffs))


def flag_poincare(d: DynkinDiagram, theta: Iterable[Vertex]) -> PoincarePolynomial:
    """Betti numbers of the split flag variety of type Θ."""
    levi = levi_type(d, theta).diagram
    return weyl_poincare(d) / weyl_poincare(levi)


def star_stable_subsets(a: StarAction, nonempty: bool = True) -> list[frozenset[Vertex]]:
    """All unions of star-orbits, smallest first."""
    orbs = a.orbits
    out = []
    for mask in product((0, 1), repeat=len(orbs)):
        theta = frozenset().union(*(o for o, bit in zip(orbs, mask) if bit))
        if theta or not nonempty:
            out.append(theta)
    out.sort(key=lambda t: (len(t), sorted(t)))
    return out
