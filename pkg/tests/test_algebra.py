"""Exterior algebra tests: worked expansions, products, codes, grading."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xtno.algebra import (
    CodeVector,
    Extensor,
    TruncatedPoly,
    ext_add,
    ext_sub,
    lift,
    lift_vectors,
    skew_mul,
    vandermonde,
    wedge_char2,
    wedge_naive,
    wedge_vectors,
)
from xtno.errors import CapabilityError
from xtno.fields import INTEGERS, field_new

GF16 = field_new(16)


def rand_extensor(rng, ring, dims, density=0.5, bound=4):
    coeffs = []
    for _ in range(1 << dims):
        if rng.random() < density:
            if ring.char == 2:
                coeffs.append(rng.randint(0, ring.order - 1))
            else:
                coeffs.append(rng.randint(-bound, bound))
        else:
            coeffs.append(0)
    return Extensor(ring, dims, tuple(coeffs))


def test_textbook_expansion():
    # e1 ^ (e5 - e2 + 3) ^ e3  ==  -e{1,3,5} - e{1,2,3} + 3 e{1,3}
    dims = 5
    mid = [0, -1, 0, 0, 1]  # e5 - e2, generator i stored at index i-1
    start = Extensor.basis(INTEGERS, dims, 0b00001)
    step = ext_add(
        skew_mul(start, CodeVector(INTEGERS, dims, tuple(mid))),
        start.scale(3),
    )
    out = skew_mul(step, CodeVector(INTEGERS, dims, (0, 0, 1, 0, 0)))
    expected = {0b10101: -1, 0b00111: -1, 0b00101: 3}
    for mask in range(1 << dims):
        assert out.coefficient(mask) == expected.get(mask, 0), bin(mask)


def test_mixed_square_doubles():
    # x = e1 + e2^e3 has x^x = 2 e1^e2^e3
    dims = 3
    x = Extensor(INTEGERS, dims, (0, 1, 0, 0, 0, 0, 1, 0))
    sq = wedge_naive(x, x)
    assert sq.coefficient(0b111) == 2
    assert all(sq.coefficient(m) == 0 for m in range(8) if m != 0b111)


def test_vector_squares_vanish():
    rng = random.Random(5)
    for _ in range(30):
        v = CodeVector(INTEGERS, 5, tuple(rng.randint(-4, 4) for _ in range(5)))
        assert skew_mul(v.as_extensor(), v).is_zero()


def test_vectors_anticommute():
    rng = random.Random(6)
    for _ in range(30):
        u = CodeVector(INTEGERS, 4, tuple(rng.randint(-4, 4) for _ in range(4)))
        v = CodeVector(INTEGERS, 4, tuple(rng.randint(-4, 4) for _ in range(4)))
        uv = skew_mul(u.as_extensor(), v)
        vu = skew_mul(v.as_extensor(), u)
        assert uv == ext_sub(Extensor.zero(INTEGERS, 4), vu)


def test_add_identities():
    rng = random.Random(7)
    x = rand_extensor(rng, GF16, 5)
    z = Extensor.zero(GF16, 5)
    assert ext_add(x, z) == x
    assert ext_add(x, x).is_zero()  # characteristic 2
    two = ext_add(Extensor.basis(GF16, 5, 0b1), Extensor.basis(GF16, 5, 0b10))
    assert two.support() == [0b1, 0b10]
    with pytest.raises(ValueError):
        ext_add(x, Extensor.zero(GF16, 4))


def test_scalar_times_vector():
    one = Extensor.scalar(INTEGERS, 3, 1)
    v = CodeVector(INTEGERS, 3, (2, -1, 5))
    assert skew_mul(one, v) == v.as_extensor()


def test_wedge_vectors_is_determinant():
    assert wedge_vectors(
        [CodeVector(INTEGERS, 2, (1, 0)), CodeVector(INTEGERS, 2, (0, 1))]
    ).top() == 1
    assert wedge_vectors(
        [CodeVector(INTEGERS, 2, (1, 1)), CodeVector(INTEGERS, 2, (1, 2))]
    ).top() == 1
    v = CodeVector(INTEGERS, 3, (1, 2, 3))
    assert wedge_vectors([v, CodeVector(INTEGERS, 3, (4, 5, 6)), v]).is_zero()


def cofactor_det(matrix) -> int:
    """Independent determinant for the cross-check."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * cofactor_det(minor)
        total += -term if j % 2 else term
    return total


@pytest.mark.parametrize("dims", [2, 3, 4, 5, 6])
def test_determinant_identity_random(dims):
    rng = random.Random(dims)
    for _ in range(25):
        vecs = [
            CodeVector(INTEGERS, dims, tuple(rng.randint(-5, 5) for _ in range(dims)))
            for _ in range(dims)
        ]
        got = wedge_vectors(vecs)
        det = cofactor_det([list(v.entries) for v in vecs])
        assert got.top() == det
        assert all(got.coefficient(m) == 0 for m in range((1 << dims) - 1))


def test_vandermonde_codes():
    assert vandermonde(2, 3).entries == (1, 2, 4)
    assert vandermonde(1, 4).entries == (1, 1, 1, 1)
    k = 4
    vecs = [vandermonde(i, k) for i in (1, 3, 5, 9)]
    assert wedge_vectors(vecs).top() != 0
    ring = field_new(16)
    fv = vandermonde(3, 3, ring)
    assert fv.entries == (1, 3, ring.mul(3, 3))
    with pytest.raises(CapabilityError):
        vandermonde(1 << 16, 2, ring)


def test_lift_shapes_and_signs():
    v = CodeVector(INTEGERS, 1, (7,))
    lifted = lift(v)
    assert lifted.coefficient(0b11) == 49
    assert lifted.degrees() == {2}

    # k=2: the top coefficient of two lifted Vandermonde codes is the
    # negated square of the plain determinant
    a, b = vandermonde(1, 2), vandermonde(2, 2)
    prod = wedge_naive(lift(a), lift(b))
    det = cofactor_det([[1, 1], [1, 2]])
    assert prod.coefficient(0b1111) == -(det**2)

    assert wedge_naive(lift(a), lift(a)).is_zero()


def test_lift_square_sign_general():
    # wedge of k distinct lifts = (-1)^(k choose 2) det^2 on the top lane
    for k in (2, 3):
        vecs = [vandermonde(i + 1, k) for i in range(k)]
        prod = Extensor.scalar(INTEGERS, 2 * k, 1)
        for v in vecs:
            lo, hi = lift_vectors(v)
            prod = skew_mul(skew_mul(prod, lo), hi)
        det = cofactor_det([list(v.entries) for v in vecs])
        sign = -1 if (k * (k - 1) // 2) % 2 else 1
        assert prod.top() == sign * det * det


@pytest.mark.parametrize("dims", list(range(4, 11)))
def test_char2_product_equals_naive(dims):
    rng = random.Random(dims * 11)
    for _ in range(20):
        x = rand_extensor(rng, GF16, dims)
        y = rand_extensor(rng, GF16, dims)
        assert wedge_char2(x, y) == wedge_naive(x, y)


def test_char2_product_rejects_integers():
    x = Extensor.scalar(INTEGERS, 3, 1)
    with pytest.raises(CapabilityError):
        wedge_char2(x, x)


def test_char2_identity_and_disjoint_singletons():
    x = Extensor.basis(GF16, 4, 0b0001, 3)
    one = Extensor.scalar(GF16, 4, 1)
    assert wedge_char2(x, one) == x
    e1 = Extensor.basis(GF16, 4, 0b01)
    e2 = Extensor.basis(GF16, 4, 0b10)
    assert wedge_char2(e1, e2) == Extensor.basis(GF16, 4, 0b11)


def test_degree_grading():
    rng = random.Random(9)
    for _ in range(20):
        dims = 6
        da, db = rng.randint(0, 3), rng.randint(0, 3)
        xa = [0] * (1 << dims)
        xb = [0] * (1 << dims)
        for m in range(1 << dims):
            if bin(m).count("1") == da and rng.random() < 0.4:
                xa[m] = rng.randint(-3, 3)
            if bin(m).count("1") == db and rng.random() < 0.4:
                xb[m] = rng.randint(-3, 3)
        prod = wedge_naive(
            Extensor(INTEGERS, dims, tuple(xa)), Extensor(INTEGERS, dims, tuple(xb))
        )
        assert prod.degrees() <= {da + db}


@pytest.mark.parametrize("ring", [INTEGERS, GF16])
def test_associativity(ring):
    rng = random.Random(10)
    for _ in range(35):
        dims = rng.randint(2, 6)
        x = rand_extensor(rng, ring, dims, density=0.4)
        y = rand_extensor(rng, ring, dims, density=0.4)
        z = rand_extensor(rng, ring, dims, density=0.4)
        assert wedge_naive(wedge_naive(x, y), z) == wedge_naive(x, wedge_naive(y, z))


def test_even_degree_extensors_commute():
    rng = random.Random(12)
    for _ in range(40):
        dims = rng.randint(2, 8)
        ev = [0] * (1 << dims)
        for m in range(1 << dims):
            if bin(m).count("1") % 2 == 0 and rng.random() < 0.35:
                ev[m] = rng.randint(-3, 3)
        x = Extensor(INTEGERS, dims, tuple(ev))
        y = rand_extensor(rng, INTEGERS, dims, density=0.4)
        assert wedge_naive(x, y) == wedge_naive(y, x)


def test_skew_matches_naive():
    rng = random.Random(13)
    for ring in (INTEGERS, GF16):
        for _ in range(30):
            dims = rng.randint(1, 7)
            x = rand_extensor(rng, ring, dims, density=0.5)
            v = CodeVector(
                ring, dims,
                tuple(
                    rng.randint(0, 9) if ring.char == 2 else rng.randint(-4, 4)
                    for _ in range(dims)
                ),
            )
            assert skew_mul(x, v) == wedge_naive(x, v.as_extensor())


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
@settings(max_examples=60, deadline=None)
def test_char2_bilinearity(a, b, c):
    xs = Extensor(GF16, 2, (a, b, c, a ^ c))
    ys = Extensor(GF16, 2, (c, a, b, 0))
    zs = Extensor(GF16, 2, (b, c, a, 1))
    lhs = wedge_char2(ext_add(xs, ys), zs)
    rhs = ext_add(wedge_char2(xs, zs), wedge_char2(ys, zs))
    assert lhs == rhs


def test_dimension_cap():
    with pytest.raises(CapabilityError):
        Extensor.zero(INTEGERS, 27)


def test_truncated_poly_shift_and_overflow():
    p = TruncatedPoly.one(INTEGERS, 2, 3)
    shifted = p.shift_z()
    assert shifted.coeffs[1].coefficient(0) == 1
    assert shifted.coeffs[0].is_zero()
    assert p.top_overflow().is_zero()
