from fractions import Fraction

import pytest

from kmhecke import AffineWeylElt, LocalChamber, StructurePoly, build_system, preset


@pytest.fixture(scope="session")
def A1():
    return preset("a1")


@pytest.fixture(scope="session")
def A2():
    return preset("a2")


@pytest.fixture(scope="session")
def AFF():
    return preset("a1_affine")


@pytest.fixture(scope="session")
def A1A1():
    return preset("a1xa1")


@pytest.fixture(scope="session")
def HYP():
    return preset("hyp23")


@pytest.fixture(scope="session")
def NSB():
    """Rank 3 with an affine A1 subdiagram: has a non-spherical boundary face."""
    return build_system({
        "name": "nsb3", "n": 3, "d": 3,
        "gcm": [[2, -2, 0], [-2, 2, -1], [0, -1, 2]],
        "coroots": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        "roots": [[2, -2, 0], [-2, 2, -1], [0, -1, 2]],
    })


def elt(system, lam=None, word=()):
    lam = tuple(lam) if lam is not None else tuple(0 for _ in range(system.d))
    return AffineWeylElt(lam, system.from_word(word))


def chamber(system, vertex, sign=1, word=()):
    return LocalChamber(tuple(Fraction(c) for c in vertex), sign, system.from_word(word))


def poly(system, text_terms):
    """{"Q1": 1, "": -1} style shorthand: variable name (or "" for the constant) -> coefficient."""
    out = StructurePoly.const(0, system)
    for var, c in text_terms.items():
        term = StructurePoly.const(c, system)
        if var:
            term = term * StructurePoly.var(system, var)
        out = out + term
    return out
