from fractions import Fraction

import pytest

from greenlem import polydisk, polyhedral_domain, weighted_ball
from greenlem.domains import MonomialConstraint


@pytest.fixture
def unit_polydisk():
    return polydisk([1.0, 1.0])


@pytest.fixture
def unit_ball():
    return weighted_ball(2.0, [1.0, 1.0])


@pytest.fixture
def example_polyhedron():
    """{|z1| < 1, |z2| < 1, |z1 z2| < 1/2}: one mixed facet on top of the polydisk."""
    return polyhedral_domain(
        [
            MonomialConstraint((Fraction(1), Fraction(0)), 1.0, Fraction(0)),
            MonomialConstraint((Fraction(0), Fraction(1)), 1.0, Fraction(0)),
            MonomialConstraint((Fraction(1), Fraction(1)), 0.5),
        ]
    )
