"""Symbolic Krull–Schmidt calculus for motives of flag varieties.

A motive is a finite multiset of shifted upper motives. Upper motives are
opaque labels; two labels with the same class id stand for isomorphic
motives, and class ids are handed out by :func:`titsmotive.equiv.assign_class_ids`.
Nothing here touches Chow groups.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .diagram import DynkinDiagram, Vertex, flag_poincare
from .errors import ValidationError

TATE_CLASS = "tate"


@dataclass(frozen=True, order=True)
class UpperMotiveLabel:
    """Upper motive of the flag variety of type Θ of a group, mod p."""

    group: str
    theta: tuple[Vertex, ...]
    p: int
    cls: str

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(sorted(Vertex(*v) for v in self.theta)))


TATE = UpperMotiveLabel("point", (), 0, TATE_CLASS)

_MODES = {
    ">=": lambda j, i: j >= i,
    "≥": lambda j, i: j >= i,
    "<=": lambda j, i: j <= i,
    "≤": lambda j, i: j <= i,
    ">": lambda j, i: j > i,
    "<": lambda j, i: j < i,
}


class Motive:
    """Immutable finite multiset of (label, shift) pairs."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[UpperMotiveLabel, int], int] | Iterable = ()):
        counts: Counter = Counter()
        items = terms.items() if isinstance(terms, Mapping) else ((t, 1) for t in terms)
        for (label, shift), mult in items:
            if not isinstance(label, UpperMotiveLabel):
                raise ValidationError(f"not an upper-motive label: {label!r}")
            if isinstance(shift, bool) or not isinstance(shift, int) or shift < 0:
                raise ValidationError(f"shift must be a nonnegative integer, got {shift!r}")
            if mult < 0:
                raise ValidationError("negative multiplicity")
            counts[(label, shift)] += mult
        self._terms = tuple(sorted((k, m) for k, m in counts.items() if m > 0))
        self._hash = None

    @classmethod
    def of(cls, *summands: tuple[UpperMotiveLabel, int]) -> "Motive":
        return cls(summands)

    def __iter__(self) -> Iterator[tuple[UpperMotiveLabel, int, int]]:
        for (label, shift), mult in self._terms:
            yield label, shift, mult

    def __len__(self) -> int:
        return sum(m for _, m in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Motive):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __add__(self, other: "Motive") -> "Motive":
        c = Counter(dict(self._terms))
        c.update(dict(other._terms))
        return Motive(c)

    def __repr__(self) -> str:
        parts = [f"{m}*{lab.cls}[{s}]" if m > 1 else f"{lab.cls}[{s}]" for (lab, s), m in self._terms]
        return "Motive(" + " + ".join(parts) + ")"

    def shifted(self, k: int) -> "Motive":
        return Motive({(lab, s + k): m for (lab, s), m in self._terms})

    def times(self, n: int) -> "Motive":
        return Motive({key: m * n for key, m in self._terms})

    def multiplicity(self, label: UpperMotiveLabel, shift: int) -> int:
        return dict(self._terms).get((label, shift), 0)

    @property
    def shifts(self) -> list[int]:
        return sorted({s for (_, s), _ in self._terms})

    @property
    def labels(self) -> list[UpperMotiveLabel]:
        return sorted({lab for (lab, _), _ in self._terms})


@dataclass(frozen=True)
class CharacteristicMap:
    """Finitely supported map (class id, shift) -> multiplicity."""

    values: tuple[tuple[tuple[str, int], int], ...] = ()

    def __post_init__(self):
        vals = Counter()
        for key, n in dict(self.values).items():
            if n < 0:
                raise ValidationError("characteristic maps take nonnegative values")
            vals[tuple(key)] += n
        object.__setattr__(self, "values", tuple(sorted((k, n) for k, n in vals.items() if n)))

    def __call__(self, cls: str, shift: int) -> int:
        return dict(self.values).get((cls, shift), 0)

    def __getitem__(self, key: tuple[str, int]) -> int:
        return self(*key)

    def __add__(self, other: "CharacteristicMap") -> "CharacteristicMap":
        c = Counter(dict(self.values))
        c.update(dict(other.values))
        return CharacteristicMap(tuple(c.items()))

    def as_dict(self) -> dict[tuple[str, int], int]:
        return dict(self.values)

    @property
    def support(self) -> list[tuple[str, int]]:
        return [k for k, _ in self.values]


def chi(m: Motive) -> CharacteristicMap:
    c: Counter = Counter()
    for label, shift, mult in m:
        c[(label.cls, shift)] += mult
    return CharacteristicMap(tuple(c.items()))


def slice(m: Motive, i: int, mode: str = ">=") -> Motive:  # noqa: A001 - the usual name of the operation
    """Summands whose shift j satisfies ``j <mode> i``."""
    try:
        keep = _MODES[mode]
    except KeyError:
        raise ValidationError(f"unknown slice mode {mode!r}") from None
    return Motive({(lab, s): n for lab, s, n in m if keep(s, i)})


def split_motive(d: DynkinDiagram, theta: Iterable[Vertex]) -> Motive:
    """Motive of the split flag variety of type Θ: Tate motives by Betti number."""
    poly = flag_poincare(d, theta)
    return Motive({(TATE, j): c for j, c in enumerate(poly.coeffs) if c})


@dataclass(frozen=True)
class ExtensionModel:
    """Images of upper motives after scalar extension, by class id.

    The image of ``cls`` is the motive of the extended upper motive at shift 0;
    :func:`restrict` extends it additively and shift-equivariantly. The Tate
    class always maps to the Tate motive.
    """

    images: tuple[tuple[str, Motive], ...]

    def __post_init__(self):
        imgs = dict(self.images)
        tate0 = Motive.of((TATE, 0))
        if imgs.setdefault(TATE_CLASS, tate0) != tate0:
            raise ValidationError("the Tate motive must map to itself")
        for cls, img in imgs.items():
            if not isinstance(img, Motive) or not img:
                raise ValidationError(f"image of class {cls!r} must be a nonempty motive")
        object.__setattr__(self, "images", tuple(sorted(imgs.items())))

    @classmethod
    def from_mapping(cls, images: Mapping[str, Motive]) -> "ExtensionModel":
        return cls(tuple(images.items()))

    @classmethod
    def identity(cls, labels: Iterable[UpperMotiveLabel]) -> "ExtensionModel":
        return cls(tuple((lab.cls, Motive.of((lab, 0))) for lab in labels if lab.cls != TATE_CLASS))

    def image(self, cls: str) -> Motive:
        imgs = dict(self.images)
        if cls not in imgs:
            raise ValidationError(f"extension model has no image for class {cls!r}")
        return imgs[cls]

    def upper_class(self, cls: str) -> str:
        """Class of the shift-0 part of the image, i.e. the upper motive over the extension."""
        bottom = [(lab, n) for lab, s, n in self.image(cls) if s == 0]
        if not bottom:
            raise ValidationError(f"image of {cls!r} has no shift-0 summand")
        if len(bottom) > 1 or bottom[0][1] != 1:
            raise ValidationError(f"image of {cls!r} has more than one shift-0 summand")
        return bottom[0][0].cls


def restrict(m: Motive, e: ExtensionModel) -> Motive:
    out = Motive()
    for label, shift, mult in m:
        out = out + e.image(label.cls).shifted(shift).times(mult)
    return out


def check_calcul(mX: Motive, e: ExtensionModel, y: UpperMotiveLabel, i: int) -> bool:
    """Compare chi_{M(X)}(U_Y, i) with chi_{M(X)_E}(U_{Y_E}, i) - chi_{(M(X)^{<i})_E}(U_{Y_E}, i)."""
    lhs, rhs = calcul_sides(mX, e, y, i)
    return lhs == rhs


def calcul_sides(mX: Motive, e: ExtensionModel, y: UpperMotiveLabel, i: int) -> tuple[int, int]:
    y_ext = e.upper_class(y.cls)
    lhs = chi(mX)(y.cls, i)
    rhs = chi(restrict(mX, e))(y_ext, i) - chi(restrict(slice(mX, i, "<"), e))(y_ext, i)
    return lhs, rhs


def is_weighted(e: ExtensionModel, classes: Iterable[str] | None = None) -> bool:
    """Sufficient symbolic test: distinct classes have distinct shift-0 image classes."""
    classes = [c for c, _ in e.images] if classes is None else list(classes)
    seen: dict[str, str] = {}
    for c in classes:
        try:
            up = e.upper_class(c)
        except ValidationError:
            return False
        if up in seen and seen[up] != c:
            return False
        seen[up] = c
    return True
