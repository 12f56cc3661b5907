"""Canonical example quivers, mirrored by the files under fixtures/."""

from .quiver import Quiver


def point():
    return Quiver(1, (), "point")


def kronecker():
    """Two vertices, double arrow 1 -> 0."""
    return Quiver(2, ((1, 0), (1, 0)), "k2")


def triangle():
    """Commutative triangle: 2 -> 1 -> 0 plus 2 -> 0."""
    return Quiver(3, ((1, 0), (2, 0), (2, 1)), "t3")


def diamond():
    """3 -> {1, 2} -> 0: unique source and sink, two middle vertices."""
    return Quiver(4, ((1, 0), (2, 0), (3, 1), (3, 2)), "d4")


def star4():
    """n = 4 double-star: double arrows 3 -> j for j = 0, 1, 2."""
    return Quiver(4, ((3, 0), (3, 0), (3, 1), (3, 1), (3, 2), (3, 2)), "c4")


ALL = {q.name: q for q in (point(), kronecker(), triangle(), diamond(), star4())}
