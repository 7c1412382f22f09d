"""Central simple algebras over a number field, described by local invariants.

This is a model, not an algebra presentation: a Brauer class is its vector of
local invariants in Q/Z (finitely many nonzero), and the index is the lcm of
the local orders. Scalar extension is simulated place by place: a place v
with invariant x splits into places w of local degrees n_w and each carries
n_w * x mod 1. Arbitrary local-degree patterns need not come from one global
extension, so simulated outputs are not required to satisfy the reciprocity
law sum(inv) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .errors import ValidationError
from .rational import check_prime, parse_rational, valuation

KINDS = ("finite", "real", "complex")


@dataclass(frozen=True)
class Place:
    label: str
    kind: str = "finite"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown place kind {self.kind!r}")


def _reduce(x) -> Fraction:
    x = parse_rational(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class CsaDescriptor:
    """Central simple algebra of a given degree with local invariants.

    ``invariants`` and ``kinds`` are stored as sorted tuples of pairs; use
    :meth:`inv` and :meth:`kind` to read them.
    """

    degree: int
    invariants: tuple[tuple[str, Fraction], ...] = ()
    kinds: tuple[tuple[str, str], ...] = ()
    simulated: bool = False

    def __post_init__(self):
        if isinstance(self.degree, bool) or not isinstance(self.degree, int) or self.degree < 1:
            raise ValidationError(f"degree must be a positive integer, got {self.degree!r}")
        inv = dict((str(k), _reduce(x)) for k, x in dict(self.invariants).items())
        kinds = {str(k): v for k, v in dict(self.kinds).items()}
        for label in inv:
            kinds.setdefault(label, "finite")
        for label, kind in kinds.items():
            Place(label, kind)
            inv.setdefault(label, Fraction(0))
        object.__setattr__(self, "invariants", tuple(sorted(inv.items())))
        object.__setattr__(self, "kinds", tuple(sorted(kinds.items())))
        for label, x in self.invariants:
            kind = kinds[label]
            if kind == "real" and x not in (0, Fraction(1, 2)):
                raise ValidationError(f"real place {label} carries {x}, expected 0 or 1/2")
            if kind == "complex" and x != 0:
                raise ValidationError(f"complex place {label} carries nonzero invariant {x}")
        if not self.simulated and sum(x for _, x in self.invariants) % 1 != 0:
            raise ValidationError("local invariants do not sum to 0 mod 1")
        if self.degree % self.index:
            raise ValidationError(f"index {self.index} does not divide degree {self.degree}")

    @classmethod
    def make(cls, degree: int, inv: Mapping[str, object] | None = None,
             places: Mapping[str, str] | None = None, simulated: bool = False) -> "CsaDescriptor":
        inv = {k: parse_rational(v) for k, v in (inv or {}).items()}
        return cls(degree, tuple(inv.items()), tuple((places or {}).items()), simulated)

    @classmethod
    def split(cls, degree: int) -> "CsaDescriptor":
        return cls(degree)

    def inv(self, label: str) -> Fraction:
        return dict(self.invariants).get(label, Fraction(0))

    def kind(self, label: str) -> str:
        return dict(self.kinds).get(label, "finite")

    @property
    def places(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.invariants)

    def order(self, label: str) -> int:
        """Order of the local invariant at a place."""
        return self.inv(label).denominator

    @property
    def index(self) -> int:
        return lcm(1, *(x.denominator for _, x in self.invariants))

    def opposite(self) -> "CsaDescriptor":
        return CsaDescriptor(self.degree, tuple((k, -x) for k, x in self.invariants),
                             self.kinds, self.simulated)

    def with_degree(self, degree: int) -> "CsaDescriptor":
        """Same Brauer class, matrix algebra of another degree."""
        return CsaDescriptor(degree, self.invariants, self.kinds, self.simulated)

    def same_class(self, other: "CsaDescriptor") -> bool:
        labels = set(self.places) | set(other.places)
        return all(self.inv(v) == other.inv(v) for v in labels)


@dataclass(frozen=True)
class ExtensionSim:
    """Local degrees of the places above each place of the ground field.

    Places not listed are treated as having a single place of degree 1 above.
    """

    degrees: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        out = {}
        for label, degs in dict(self.degrees).items():
            if isinstance(degs, int):
                degs = (degs,)
            degs = tuple(degs)
            if not degs:
                raise ValidationError(f"empty degree multiset at {label}")
            for n in degs:
                if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                    raise ValidationError(f"local degree must be a positive integer, got {n!r}")
            out[str(label)] = degs
        object.__setattr__(self, "degrees", tuple(sorted(out.items())))

    @classmethod
    def make(cls, degrees: Mapping[str, Iterable[int] | int] | None = None) -> "ExtensionSim":
        return cls(tuple((degrees or {}).items()))

    def at(self, label: str) -> tuple[int, ...]:
        return dict(self.degrees).get(label, (1,))


def index(a: CsaDescriptor) -> int:
    return a.index


def p_valuation_index(a: CsaDescriptor, p: int) -> int:
    """v_p(ind A); the largest power of p dividing the index is p ** result."""
    check_prime(p)
    return valuation(a.index, p)


def extend(a: CsaDescriptor, e: ExtensionSim) -> CsaDescriptor:
    """Simulated scalar extension; new places are labelled ``"<v>.<slot>"``."""
    inv = {}
    kinds = {}
    for label, x in a.invariants:
        kind = a.kind(label)
        for slot, n in enumerate(e.at(label), start=1):
            new_kind = kind
            if kind == "real" and n == 2:
                new_kind = "complex"
            elif kind == "real" and n != 1:
                raise ValidationError(f"real place {label} admits local degrees 1 or 2 only")
            elif kind == "complex" and n != 1:
                raise ValidationError(f"complex place {label} admits local degree 1 only")
            new = f"{label}.{slot}"
            inv[new] = n * x
            kinds[new] = new_kind
    return CsaDescriptor(a.degree, tuple(inv.items()), tuple(kinds.items()), simulated=True)


def p_primary_part(a: CsaDescriptor, p: int) -> CsaDescriptor:
    """Project every local invariant onto its p-primary component.

    For x = n / (p^k m) with p not dividing m, the p-part is c / p^k where
    c = n * m^{-1} mod p^k; the degree becomes p^(max k).
    """
    check_prime(p)
    inv = {}
    top = 0
    for label, x in a.invariants:
        d = x.denominator
        k = valuation(d, p)
        m = d // p**k
        if k == 0:
            inv[label] = Fraction(0)
            continue
        c = (x.numerator * pow(m, -1, p**k)) % p**k
        inv[label] = Fraction(c, p**k)
        top = max(top, k)
    return CsaDescriptor(p**top, tuple(inv.items()), a.kinds, a.simulated)


def local_p_valuations(a: CsaDescriptor, p: int) -> dict[str, int]:
    """v_p of the order of each local invariant."""
    return {label: valuation(x.denominator, p) for label, x in a.invariants}

