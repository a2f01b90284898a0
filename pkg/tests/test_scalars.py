import math
import random

import pytest

from garsidelab.scalars import ScalarRing, cyclotomic, minimal_polynomial_2cos


def _eval(poly, x):
    return sum(c * x ** k for k, c in enumerate(poly))


@pytest.mark.parametrize("m,expected", [
    (2, (0, 1)),
    (3, (-1, 1)),
    (4, (-2, 0, 1)),
    (5, (-1, -1, 1)),
    (6, (-3, 0, 1)),
])
def test_known_minimal_polynomials(m, expected):
    assert minimal_polynomial_2cos(m) == expected


@pytest.mark.parametrize("m", range(2, 19))
def test_minimal_polynomial_vanishes(m):
    poly = minimal_polynomial_2cos(m)
    assert poly[-1] == 1
    assert abs(_eval(poly, 2 * math.cos(math.pi / m))) < 1e-9


def test_cyclotomic_small():
    assert cyclotomic(1) == (-1, 1)
    assert cyclotomic(4) == (1, 0, 1)
    assert cyclotomic(6) == (1, -1, 1)
    assert cyclotomic(12) == (1, 0, -1, 0, 1)


def test_golden_ratio_identity():
    R = ScalarRing(5)
    c = R.generator
    assert c * c == c + 1
    assert (c * c - c - 1).is_zero()


def test_ring_is_singleton():
    assert ScalarRing(7) is ScalarRing(7)


@pytest.mark.parametrize("m", [5, 7, 8, 9, 12])
def test_arithmetic_matches_floats(m):
    rng = random.Random(m)
    R = ScalarRing(m)
    c = 2 * math.cos(math.pi / m)
    for _ in range(200):
        a = R(tuple(rng.randint(-5, 5) for _ in range(R.degree)))
        b = R(tuple(rng.randint(-5, 5) for _ in range(R.degree)))
        fa, fb = _eval(a.coeffs, c), _eval(b.coeffs, c)
        assert abs(_eval((a * b).coeffs, c) - fa * fb) < 1e-6
        assert abs(_eval((a - b).coeffs, c) - (fa - fb)) < 1e-9
        assert a * b == b * a


def test_mixed_rings_rejected():
    with pytest.raises(ValueError):
        ScalarRing(5).one + ScalarRing(7).one
