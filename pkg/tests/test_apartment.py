from fractions import Fraction

import pytest

from kmhecke.apartment import (
    AffineWeylElt, LocalChamber, SegmentGerm, codistance, is_true_wall, pr_germ, pr_point, star,
    w_distance, wall_parameter,
)
from kmhecke.errors import NotPreordered

from conftest import chamber, elt

F = Fraction


def test_w_distance_basic(A1, A2):
    C = chamber(A2, (0, 0))
    assert w_distance(C, C) == elt(A2)
    assert w_distance(C, chamber(A2, (1, 1))) == elt(A2, (1, 1))
    assert w_distance(chamber(A1, (0,)), chamber(A1, (1,), word=(1,))) == elt(A1, (1,), (1,))


def test_w_distance_chasles(AFF):
    Cx = chamber(AFF, (0, 0, 0))
    Cy = star(Cx, elt(AFF, (0, 0, 1), (1,)))
    Cz = star(Cy, elt(AFF, (1, 0, 1), (2,)))
    assert w_distance(Cx, Cz) == w_distance(Cx, Cy) * w_distance(Cy, Cz)


def test_w_distance_requires_order(AFF):
    with pytest.raises(NotPreordered):
        w_distance(chamber(AFF, (0, 0, 0)), chamber(AFF, (0, 0, -1)))


def test_codistance(A1, AFF):
    e = AFF.identity()
    C = LocalChamber((0, 0, 0), -1, AFF.from_word((1, 2)))
    assert codistance(C, C.opposite()) == e
    assert codistance(chamber(AFF, (0, 0, 0), -1), chamber(AFF, (0, 0, 0), 1, (1,))).word == (1,)
    D = chamber(AFF, (0, 0, 0), 1, (2, 1))
    assert codistance(C, D) == codistance(D, C).inverse()


def test_star(A2):
    C0 = chamber(A2, (0, 0))
    assert star(C0, elt(A2)) == C0
    assert star(C0, elt(A2, (1, -1), (1, 2))) == chamber(A2, (1, -1), 1, (1, 2))
    g = elt(A2, (2, 1), (2,))
    C = chamber(A2, (1, 0), 1, (1,))
    assert w_distance(C, star(C, g)) == g


def test_pr_point(A1):
    assert pr_point((0,), chamber(A1, (1,))) == chamber(A1, (0,))
    assert pr_point((0,), chamber(A1, (1,), -1)) == chamber(A1, (0,))
    C = chamber(A1, (1,), -1)
    assert pr_point((1,), C) is C


def test_pr_germ(A2):
    C = chamber(A2, (5, 3))
    # a regular germ picks its own chamber regardless of C
    for target in ((), (1,), (1, 2)):
        xi = A2.from_word(target).act((1, 1))
        assert pr_germ(SegmentGerm((0, 0), xi), C) == chamber(A2, (0, 0), 1, target)
    # the germ along the α_1 wall (ω_2 direction) from a dominant C
    assert pr_germ(SegmentGerm((0, 0), (1, 2)), C) == chamber(A2, (0, 0))


def test_wall_parameter_parity(A1):
    a = A1.simple_root(1)
    assert wall_parameter(a, 0, A1) == "Q1"
    assert wall_parameter(a, 1, A1) == "Qp1"
    assert wall_parameter(a, -2, A1) == "Q1"


def test_wall_parameter_identifications(A2, AFF):
    assert wall_parameter(A2.simple_root(2), 1, A2) == "Q1"
    assert wall_parameter(AFF.simple_root(2), 1, AFF) == "Q2"


def test_true_walls(A1):
    a = A1.simple_root(1)
    assert is_true_wall(a, (0,))
    assert not is_true_wall(a, (F(1, 4),))
    assert is_true_wall(a, (F(1, 2),))


def test_classical_sign_merge(A2):
    w0 = A2.from_word((1, 2, 1))
    assert LocalChamber((0, 0), -1, A2.identity()) == LocalChamber((0, 0), 1, w0)


def test_kac_moody_signs_distinct(AFF):
    assert chamber(AFF, (0, 0, 0), -1) != chamber(AFF, (0, 0, 0), 1)


def test_affine_elt_product(A2):
    g, h = elt(A2, (1, 0), (1,)), elt(A2, (0, 1), (2,))
    prod = g * h
    # (λ·w)(λ'·w') = (λ + wλ')·ww', and r_1(0,1) = (1,1) here
    assert prod == elt(A2, (2, 1), (1, 2))
    assert g * g.inverse() == elt(A2)
