"""Group ring, cyclotomic field, and embedding sanity checks."""

import cmath
from fractions import Fraction

import pytest

from mellinsys.rings import (cyclotomic_field, cyclotomic_polynomial,
                             get_cyclotomic_ring)


def _poly(*coeffs):
    return tuple(Fraction(c) for c in coeffs)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == _poly(-1, 1)
    assert cyclotomic_polynomial(2) == _poly(1, 1)
    assert cyclotomic_polynomial(3) == _poly(1, 1, 1)
    assert cyclotomic_polynomial(4) == _poly(1, 0, 1)
    assert cyclotomic_polynomial(6) == _poly(1, -1, 1)
    assert cyclotomic_polynomial(12) == _poly(1, 0, -1, 0, 1)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8])
def test_root_embeds_as_root_of_unity(m):
    ring = get_cyclotomic_ring(m)
    for k in range(m):
        got = ring.to_complex(ring.root(k))
        want = cmath.exp(2j * cmath.pi * k / m)
        assert abs(got - want) < 1e-12


def test_group_ring_multiplication_wraps():
    ring = get_cyclotomic_ring(3)
    e = ring.root
    assert ring.mul(e(2), e(2)) == e(4)  # == e(1)
    assert ring.mul_root(e(1), 2) == e(0)
    a = ring.add(e(0), ring.scale_rational(e(1), Fraction(2, 3)))
    z = ring.to_complex(a)
    assert abs(z - (1 + Fraction(2, 3) * cmath.exp(2j * cmath.pi / 3))) < 1e-12


def test_group_ring_zero_divisor_detected_in_field():
    # 1 + e is nonzero in Q[Z/2] but embeds to 1 + (-1) = 0
    ring = get_cyclotomic_ring(2)
    a = ring.add(ring.root(0), ring.root(1))
    assert not ring.is_zero(a)
    assert ring.is_zero_complex(a)
    # the full sum of all m-th roots vanishes for every m
    for m in (3, 4, 6):
        ring = get_cyclotomic_ring(m)
        total = ring.zero
        for k in range(m):
            total = ring.add(total, ring.root(k))
        assert ring.is_zero_complex(total)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_field_inverse(m):
    fld = cyclotomic_field(m)
    ring = get_cyclotomic_ring(m)
    samples = [
        ring.add(ring.root(0), ring.scale_rational(ring.root(1), Fraction(1, 2))),
        ring.add(ring.root(m - 1), ring.root(0)),
        ring.scale_rational(ring.root(1), Fraction(-3, 7)),
    ]
    for a in samples:
        fa = fld.from_group_ring(a)
        if fld.is_zero(fa):
            continue
        assert fld.mul(fa, fld.inv(fa)) == fld.one


def test_field_embedding_consistent():
    for m in (3, 4, 6):
        fld = cyclotomic_field(m)
        ring = get_cyclotomic_ring(m)
        a = ring.add(ring.root(1), ring.scale_rational(ring.root(2), Fraction(5, 3)))
        assert abs(fld.to_complex(fld.from_group_ring(a))
                   - ring.to_complex(a)) < 1e-12
