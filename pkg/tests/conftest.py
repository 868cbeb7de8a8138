import random
from fractions import Fraction

import pytest

from tracelab import FieldDesc, Mat2, QQ, QuadElem


def rand_fraction(rng: random.Random, num_max: int = 12, den_max: int = 12) -> Fraction:
    return Fraction(rng.randint(-num_max, num_max), rng.randint(1, den_max))


def rand_elem(rng: random.Random, field: FieldDesc = QQ,
              num_max: int = 12, den_max: int = 12) -> QuadElem:
    a = rand_fraction(rng, num_max, den_max)
    b = Fraction(0) if field.is_rational else rand_fraction(rng, num_max, den_max)
    return QuadElem(a, b, field)


def rand_mat(rng: random.Random, field: FieldDesc = QQ, factors: int = 4) -> Mat2:
    """Random determinant-1 matrix as a product of elementary shears."""
    m = Mat2.identity(field)
    for i in range(factors):
        x = rand_elem(rng, field, num_max=3, den_max=3)
        one = QuadElem.rational(1, field)
        zero = QuadElem.rational(0, field)
        if i % 2 == 0:
            m = m * Mat2(one, x, zero, one)
        else:
            m = m * Mat2(one, zero, x, one)
    return m


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
