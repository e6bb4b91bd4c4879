"""Shared helpers: seeded random elements of the coefficient field and of
the constant-divergence vector fields."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from planevec.scalars import Scalar
from planevec.vecfield import GradedForm, in_lattice


def random_scalar(rng: random.Random, surd: bool = True) -> Scalar:
    rat = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    surd_part = Fraction(rng.randint(-3, 3), rng.randint(1, 3)) if surd else Fraction(0)
    return Scalar(rat, surd_part)


def random_nonzero_scalar(rng: random.Random, surd: bool = True) -> Scalar:
    while True:
        c = random_scalar(rng, surd)
        if c:
            return c


def random_graded(rng: random.Random, max_weight: int = 10,
                  max_terms: int = 4, with_euler: bool = True) -> GradedForm:
    """Random element of Vec^c with support weights <= max_weight."""
    points = [(a, b) for a in range(-1, max_weight + 1)
              for b in range(-1, max_weight + 1)
              if in_lattice((a, b)) and a + b <= max_weight]
    chosen = rng.sample(points, rng.randint(1, max_terms))
    graded = {p: random_nonzero_scalar(rng) for p in chosen}
    euler = random_scalar(rng) if with_euler and rng.random() < 0.5 else Scalar()
    return GradedForm(euler, graded)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20260810)
