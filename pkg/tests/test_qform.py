from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from titsmotive.errors import ValidationError
from titsmotive.qform import (
    INF,
    FormClass,
    QuadraticForm,
    check_place,
    hasse_invariant,
    hilbert_symbol,
    hyperbolic,
    is_isotropic,
    is_local_square,
    witt_index,
)

Q = QuadraticForm.diagonal
PLACES = [INF, 2, 3, 5, 7, 11, 13, 17, 19, 23]

nonzero_small = st.integers(-12, 12).filter(bool)
rationals = st.builds(Fraction, st.integers(-30, 30).filter(bool), st.integers(1, 30))
forms = st.lists(nonzero_small, min_size=1, max_size=6).map(lambda cs: QuadraticForm(tuple(cs)))


def test_hilbert_examples():
    assert hilbert_symbol(2, 5, 5) == -1
    assert hilbert_symbol(-1, -1, INF) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(-1, -1, 3) == 1


@pytest.mark.parametrize("b", [-7, -1, 2, 3, Fraction(5, 6)])
@pytest.mark.parametrize("v", [INF, 2, 3, 5])
def test_hilbert_with_one_is_trivial(b, v):
    assert hilbert_symbol(1, b, v) == 1


@pytest.mark.parametrize("p", PLACES)
def test_hilbert_matches_search(p):
    values = [x for x in range(-20, 21) if x]
    for a in values:
        for b in values:
            assert hilbert_symbol(a, b, p) == oracles.hilbert_by_search(a, b, p), (a, b, p)


@settings(max_examples=300, deadline=None)
@given(rationals, rationals)
def test_product_formula(a, b):
    primes = [p for p in range(2, 32) if all(p % q for q in range(2, p))]
    total = 1
    for v in [INF, *primes]:
        total *= hilbert_symbol(a, b, v)
    assert total == 1


@settings(max_examples=200, deadline=None)
@given(rationals, rationals, rationals, st.sampled_from(PLACES[:6]))
def test_hilbert_bilinear_and_symmetric(a, b, c, v):
    assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
    assert hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v)
    assert hilbert_symbol(a, -a, v) == 1
    assert hilbert_symbol(a, b * b, v) == 1


def test_hilbert_rejects_zero_and_bad_place():
    with pytest.raises(ValidationError):
        hilbert_symbol(0, 1, 3)
    with pytest.raises(ValidationError):
        hilbert_symbol(1, 1, 4)


@pytest.mark.parametrize("text,expected", [("inf", INF), ("∞", INF), ("oo", INF), ("7", 7), (5, 5)])
def test_check_place(text, expected):
    assert check_place(text) == expected


@pytest.mark.parametrize("x,v,expected", [
    (17, 2, True), (5, 2, False), (-7, 2, True), (2, 7, True), (3, 7, False), (Fraction(4, 9), 3, True),
    (-1, INF, False), (3, INF, True), (12, 3, False),
])
def test_is_local_square(x, v, expected):
    assert is_local_square(x, v) is expected


@pytest.mark.parametrize("coeffs,v,expected", [
    ((1, 1, 1, 1), 7, 1),
    ((1, -1), 2, 1),
])
def test_hasse_examples(coeffs, v, expected):
    assert hasse_invariant(Q(*coeffs), v) == expected


@pytest.mark.parametrize("v", [INF, 2, 3, 5])
def test_hasse_matches_symbol_products(v):
    cs = (2, 5, -10)
    expected = 1
    for a, b in combinations(cs, 2):
        expected *= oracles.hilbert_by_search(a, b, v)
    assert hasse_invariant(Q(*cs), v) == expected


@pytest.mark.parametrize("coeffs,expected", [
    ((1, 1, -5), True),
    ((1, 1, 1, 1), False),
    ((1, 1, -7), False),
    ((1, -1), True),
    ((1, 1), False),
    ((3,), False),
    ((1, 1, 1, 1, -1), True),
    ((1, 1, 1, -7), False),
    ((1, 2, 3, 5, -7, 11), True),
])
def test_global_isotropy_examples(coeffs, expected):
    assert is_isotropic(Q(*coeffs)) is expected


def test_local_isotropy_casework():
    q = Q(1, 1, -7)
    assert not is_isotropic(q, 7) and not is_isotropic(q, 2)
    assert is_isotropic(q, 3) and is_isotropic(q, INF)
    assert is_isotropic(Q(1, 1, 1, 1, 1), 2)  # dim >= 5 at a finite place
    assert not is_isotropic(Q(1, 1, 1, 1, 1), INF)


@pytest.mark.parametrize("coeffs,w", [
    ((1, -1, 1, -1), 2),
    ((1, 1, 1, 1), 0),
    ((1, 1, -5, -5), 2),
    ((1, 1, 1, -7), 0),
    ((1, 1, 1, -1), 1),
    ((1, 1, 1, 1, -1), 1),
    ((1, 1, 1, -1, -1, -1), 3),
    ((1, 1, 1, 1, 1, 1, -1), 1),
])
def test_witt_examples(coeffs, w):
    assert witt_index(Q(*coeffs)) == w


def test_from_gram_diagonalises():
    q = QuadraticForm.from_gram([[0, 1], [1, 0]])
    assert q.dim == 2 and q.is_isometric(hyperbolic(1))
    q = QuadraticForm.from_gram([[2, 1, 0], [1, 2, 1], [0, 1, 2]])
    assert q.discriminant == 1  # det = 4, a square
    with pytest.raises(ValidationError):
        QuadraticForm.from_gram([[1, 2], [3, 1]])
    with pytest.raises(ValidationError):
        QuadraticForm.from_gram([[1, 1], [1, 1]])


def test_invalid_forms():
    with pytest.raises(ValidationError):
        Q(1, 0, 2)
    with pytest.raises(ValidationError):
        QuadraticForm(())
    with pytest.raises(ValidationError):
        Q(1.5, 2)


@settings(max_examples=150, deadline=None)
@given(forms)
def test_witt_adding_hyperbolic_plane(q):
    assert witt_index(q.perp(hyperbolic(1))) == witt_index(q) + 1


@settings(max_examples=150, deadline=None)
@given(forms)
def test_witt_of_q_minus_q(q):
    assert witt_index(q.perp(-q)) == q.dim


@settings(max_examples=150, deadline=None)
@given(forms, rationals)
def test_witt_invariant_under_scaling(q, lam):
    assert witt_index(q.scale(lam)) == witt_index(q)
    assert q.scale(lam).invariants() == q.invariants().scaled(lam)


@settings(max_examples=150, deadline=None)
@given(forms)
def test_kernel_and_witt_decomposition(q):
    fc = q.invariants()
    k = fc.anisotropic_kernel()
    assert k.dim == q.dim - 2 * fc.witt_index()
    assert not k.is_isotropic()
    assert k.add_hyperbolic(fc.witt_index()) == fc


@settings(max_examples=100, deadline=None)
@given(forms, st.permutations(range(6)))
def test_invariants_do_not_depend_on_order(q, perm):
    order = [i for i in perm if i < q.dim]
    q2 = QuadraticForm(tuple(q.coeffs[i] for i in order))
    assert q2.invariants() == q.invariants()


@settings(max_examples=100, deadline=None)
@given(forms)
def test_local_witt_index_bounds(q):
    fc = q.invariants()
    w = fc.witt_index()
    for v in [INF, 2, 3, 5, 7]:
        lw = fc.local_witt_index(v)
        assert w <= lw <= q.dim // 2
        if v != INF and q.dim >= 5:
            assert lw >= 1
    pos, neg = fc.signature
    assert fc.local_witt_index(INF) == min(pos, neg)


def test_form_class_validation():
    FormClass(2, 1, frozenset(), (2, 0))
    with pytest.raises(ValidationError):
        FormClass(2, 1, frozenset(), (1, 1))  # one negative entry forces a negative discriminant
    with pytest.raises(ValidationError):
        FormClass(3, -1, frozenset(), (3, 1))


def test_strip_definite_form_raises():
    with pytest.raises(ValidationError):
        Q(1, 1, 1).invariants().strip_hyperbolic()


@settings(max_examples=50, deadline=None)
@given(st.lists(nonzero_small, min_size=3, max_size=3))
def test_ternary_isotropy_matches_search(cs):
    q = QuadraticForm(tuple(cs))
    witness = oracles.find_zero(cs, box=25)
    if witness is not None:
        assert q.is_isotropic()
        assert q([Fraction(x) for x in witness]) == 0
    if not q.is_isotropic():
        assert witness is None
