"""Nondegenerate quadratic forms over Q.

Forms are stored diagonally. Every invariant used downstream (dimension,
discriminant, Hasse invariants, signature) is computed exactly, and the
isometry class is kept as a :class:`FormClass`, which is what the Witt index
computation manipulates: a hyperbolic plane is split off by updating the
invariants, never by exhibiting an isotropic vector.

Hasse invariants follow the convention ``prod_{i<j} (a_i, a_j)_v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import ValidationError
from .rational import (
    check_prime,
    parse_rational,
    prime_factors,
    square_class,
    valuation,
)

INF = "inf"
Place = Union[int, str]


def check_place(v) -> Place:
    """Normalise a place of Q: the string ``"inf"`` or a prime."""
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "infinity", "oo", "∞", "r", "real"):
            return INF
        if s.isdigit():
            return check_prime(int(s))
        raise ValidationError(f"not a place of Q: {v!r}")
    return check_prime(v)


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _int_class(x) -> int:
    """Integer in the same square class as x (numerator times denominator)."""
    x = Fraction(x)
    if x == 0:
        raise ValidationError("zero has no square class")
    return x.numerator * x.denominator


def hilbert_symbol(a, b, v) -> int:
    """Hilbert symbol (a, b)_v of two nonzero rationals."""
    v = check_place(v)
    a, b = _int_class(parse_rational(a)), _int_class(parse_rational(b))
    if v == INF:
        return -1 if a < 0 and b < 0 else 1
    p = v
    alpha, beta = valuation(a, p), valuation(b, p)
    u, w = a // p**alpha, b // p**beta
    if p != 2:
        eps = ((p - 1) // 2) % 2
        s = -1 if (alpha * beta * eps) % 2 else 1
        if beta % 2:
            s *= _legendre(u, p)
        if alpha % 2:
            s *= _legendre(w, p)
        return s

    def e(x: int) -> int:
        return ((x - 1) // 2) % 2

    def om(x: int) -> int:
        return ((x * x - 1) // 8) % 2

    expo = e(u) * e(w) + alpha * om(w) + beta * om(u)
    return -1 if expo % 2 else 1


def is_local_square(x, v) -> bool:
    v = check_place(v)
    x = _int_class(parse_rational(x))
    if v == INF:
        return x > 0
    p = v
    a = valuation(x, p)
    if a % 2:
        return False
    u = x // p**a
    if p == 2:
        return u % 8 == 1
    return _legendre(u, p) == 1


def _hilbert_int(a: int, b: int, v: Place) -> int:
    return hilbert_symbol(a, b, v)


def _locally_isotropic(n: int, d: int, eps: int, p: int) -> bool:
    """Isotropy over Q_p of a form with dimension n, discriminant d, Hasse invariant eps."""
    if n < 2:
        return False
    if n == 2:
        return is_local_square(-d, p)
    if n == 3:
        return _hilbert_int(-1, -d, p) == eps
    if n == 4:
        return (not is_local_square(d, p)) or eps == _hilbert_int(-1, -1, p)
    return True


@dataclass(frozen=True)
class FormClass:
    """Isometry class of a nondegenerate rational quadratic form.

    By Hasse–Minkowski the class is determined by the dimension, the
    discriminant in Q*/Q*^2 (``disc``, the plain product of a diagonalisation,
    as a squarefree integer), the set of primes where the Hasse invariant is
    -1, and the real signature.
    """

    dim: int
    disc: int
    hasse_minus: frozenset[int]
    signature: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "hasse_minus", frozenset(self.hasse_minus))
        object.__setattr__(self, "signature", tuple(self.signature))
        pos, neg = self.signature
        if self.dim < 0 or pos < 0 or neg < 0 or pos + neg != self.dim:
            raise ValidationError("inconsistent signature")
        if self.dim and (self.disc < 0) != (neg % 2 == 1):
            raise ValidationError("discriminant sign disagrees with signature")

    @property
    def relevant_primes(self) -> frozenset[int]:
        """Primes outside which the class is unramified (unit discriminant, trivial Hasse)."""
        return frozenset({2}) | frozenset(prime_factors(self.disc)) | self.hasse_minus

    def hasse(self, v) -> int:
        v = check_place(v)
        if v == INF:
            neg = self.signature[1]
            return -1 if (neg * (neg - 1) // 2) % 2 else 1
        return -1 if v in self.hasse_minus else 1

    @property
    def signed_discriminant(self) -> int:
        n = self.dim
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * self.disc

    def is_isotropic_at(self, v) -> bool:
        v = check_place(v)
        n = self.dim
        if n < 2:
            return False
        if v == INF:
            return min(self.signature) > 0
        return _locally_isotropic(n, self.disc, self.hasse(v), v)

    def is_isotropic(self) -> bool:
        if self.dim < 2:
            return False
        if self.dim == 2:
            return self.disc == -1
        places: list[Place] = [INF] + sorted(self.relevant_primes)
        return all(self.is_isotropic_at(v) for v in places)

    def strip_hyperbolic(self) -> "FormClass":
        """Class of q' where q = H ⊥ q'. Caller guarantees q is isotropic."""
        if self.dim < 2 or min(self.signature) == 0:
            raise ValidationError("cannot split a hyperbolic plane off this class")
        new_disc = -self.disc
        primes = self.relevant_primes | frozenset(prime_factors(new_disc))
        minus = frozenset(p for p in primes if self.hasse(p) * _hilbert_int(-1, new_disc, p) == -1)
        pos, neg = self.signature
        return FormClass(self.dim - 2, new_disc, minus, (pos - 1, neg - 1))

    def add_hyperbolic(self, count: int = 1) -> "FormClass":
        out = self
        for _ in range(count):
            disc = -out.disc
            # eps(H ⊥ q) = eps(q) * (-1, d(q))
            primes = out.relevant_primes | {2}
            minus = frozenset(p for p in primes if out.hasse(p) * _hilbert_int(-1, out.disc, p) == -1)
            pos, neg = out.signature
            out = FormClass(out.dim + 2, disc, minus, (pos + 1, neg + 1))
        return out

    def witt_index(self) -> int:
        q, w = self, 0
        while q.is_isotropic():
            q = q.strip_hyperbolic()
            w += 1
        return w

    def anisotropic_kernel(self) -> "FormClass":
        q = self
        while q.is_isotropic():
            q = q.strip_hyperbolic()
        return q

    def strip(self, k: int) -> "FormClass":
        """Remove k hyperbolic planes; requires k <= witt_index."""
        q = self
        for _ in range(k):
            if not q.is_isotropic():
                raise ValidationError("Witt index smaller than requested split")
            q = q.strip_hyperbolic()
        return q

    def local_witt_index(self, v) -> int:
        """Witt index over the completion Q_v."""
        v = check_place(v)
        if v == INF:
            return min(self.signature)
        n, d, eps, w = self.dim, self.disc, self.hasse(v), 0
        while _locally_isotropic(n, d, eps, v):
            n, d = n - 2, -d
            eps *= _hilbert_int(-1, d, v)
            w += 1
        return w

    def scaled(self, lam) -> "FormClass":
        """Class of the form lam * q."""
        lam = square_class(parse_rational(lam))
        n = self.dim
        disc = square_class(Fraction(lam**n * self.disc))
        primes = self.relevant_primes | frozenset(prime_factors(lam))
        pairs = n * (n - 1) // 2
        minus = set()
        for p in primes:
            s = self.hasse(p)
            if pairs % 2:
                s *= _hilbert_int(lam, lam, p)
            if (n - 1) % 2:
                s *= _hilbert_int(lam, self.disc, p)
            if s == -1:
                minus.add(p)
        pos, neg = self.signature
        sig = (pos, neg) if lam > 0 else (neg, pos)
        return FormClass(n, disc, frozenset(minus), sig)


@dataclass(frozen=True)
class QuadraticForm:
    """Diagonal form <a_1, ..., a_n> with nonzero rational coefficients."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(parse_rational(c) for c in self.coeffs)
        if not cs:
            raise ValidationError("a quadratic form needs at least one coefficient")
        if any(c == 0 for c in cs):
            raise ValidationError("degenerate form: zero diagonal coefficient")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def diagonal(cls, *coeffs) -> "QuadraticForm":
        return cls(tuple(coeffs))

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence]) -> "QuadraticForm":
        """Diagonalise a symmetric Gram matrix by exact symmetric elimination."""
        m = [[parse_rational(x) for x in row] for row in gram]
        n = len(m)
        if n == 0 or any(len(row) != n for row in m):
            raise ValidationError("Gram matrix must be square and nonempty")
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
            raise ValidationError("Gram matrix is not symmetric")
        diag = []
        for k in range(n):
            if m[k][k] == 0:
                j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
                if j is not None:
                    m[k], m[j] = m[j], m[k]
                    for row in m:
                        row[k], row[j] = row[j], row[k]
                else:
                    j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                    if j is None:
                        raise ValidationError("degenerate Gram matrix")
                    # e_k <- e_k + e_j makes the pivot 2*b_kj != 0
                    for i in range(n):
                        m[k][i] += m[j][i]
                    for i in range(n):
                        m[i][k] += m[i][j]
            piv = m[k][k]
            diag.append(piv)
            for i in range(k + 1, n):
                f = m[i][k] / piv
                if f:
                    for j in range(k, n):
                        m[i][j] -= f * m[k][j]
            for i in range(k + 1, n):
                m[k][i] = Fraction(0)
        return cls(tuple(diag))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return self.dim

    def __neg__(self) -> "QuadraticForm":
        return QuadraticForm(tuple(-c for c in self.coeffs))

    def perp(self, other: "QuadraticForm") -> "QuadraticForm":
        """Orthogonal sum."""
        return QuadraticForm(self.coeffs + other.coeffs)

    __add__ = perp

    def scale(self, lam) -> "QuadraticForm":
        lam = parse_rational(lam)
        if lam == 0:
            raise ValidationError("cannot scale a form by 0")
        return QuadraticForm(tuple(lam * c for c in self.coeffs))

    def __call__(self, xs: Sequence) -> Fraction:
        return sum((c * Fraction(x) ** 2 for c, x in zip(self.coeffs, xs)), Fraction(0))

    @property
    def discriminant(self) -> int:
        """Plain determinant of the diagonalisation, as a squarefree integer."""
        prod = Fraction(1)
        for c in self.coeffs:
            prod *= c
        return square_class(prod)

    @property
    def signed_discriminant(self) -> int:
        return self.invariants().signed_discriminant

    @property
    def signature(self) -> tuple[int, int]:
        pos = sum(1 for c in self.coeffs if c > 0)
        return pos, self.dim - pos

    def relevant_primes(self) -> frozenset[int]:
        primes = {2}
        for c in self.coeffs:
            primes |= set(prime_factors(c.numerator)) | set(prime_factors(c.denominator))
        return frozenset(primes)

    def hasse_invariant(self, v) -> int:
        v = check_place(v)
        s = 1
        cs = self.coeffs
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                s *= hilbert_symbol(cs[i], cs[j], v)
        return s

    def invariants(self) -> FormClass:
        minus = frozenset(p for p in self.relevant_primes() if self.hasse_invariant(p) == -1)
        return FormClass(self.dim, self.discriminant, minus, self.signature)

    def is_isotropic(self, v=None) -> bool:
        if v is None:
            return self.invariants().is_isotropic()
        return self.invariants().is_isotropic_at(v)

    def witt_index(self) -> int:
        return self.invariants().witt_index()

    def is_isometric(self, other: "QuadraticForm | FormClass") -> bool:
        other_cls = other.invariants() if isinstance(other, QuadraticForm) else other
        return self.invariants() == other_cls


def hasse_invariant(q: QuadraticForm, v) -> int:
    return q.hasse_invariant(v)


def is_isotropic(q: QuadraticForm, v=None) -> bool:
    return q.is_isotropic(v)


def witt_index(q: "QuadraticForm | FormClass") -> int:
    return q.witt_index()


def as_form_class(q: "QuadraticForm | FormClass") -> FormClass:
    return q.invariants() if isinstance(q, QuadraticForm) else q


def hyperbolic(m: int = 1) -> QuadraticForm:
    return QuadraticForm(tuple([1, -1] * m))
