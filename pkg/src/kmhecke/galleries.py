"""Galleries of local chambers at a point, centrifugal folding and lifting counts.

A gallery of type ``(i_1, …, i_r)`` from a chamber ``(z, s, u)`` is encoded by a
fold vector ``c`` with ``c_j = 1`` when step j crosses its panel (chamber
multiplied on the right by r_{i_j}) and ``c_j = 0`` when it stays put.  This is
the same as left multiplication by reflections written in the start chamber's
own frame, so no global change of root basis is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .apartment import LocalChamber, interior_vector, is_true_wall, residue_distance, wall_parameter
from .errors import NotReduced, VertexMismatch
from .polynomial import StructurePoly
from .root_system import RealRoot, System, chosen_word

__all__ = [
    "GalleryStep", "FoldedGallery", "check_reduced", "minimal_gallery_type",
    "enumerate_folded", "folded_sum", "folded_end_sums", "minimal_lifting_count",
]

FOLD, AWAY, TOWARD, GHOST = "fold", "away", "toward", "ghost"


@dataclass(frozen=True)
class GalleryStep:
    chamber: LocalChamber
    root: RealRoot          # positive on ``chamber``, vanishing on the step's panel
    level: Fraction         # k with the panel in M(root, k)
    kind: str               # fold (J_1), away (J_2), toward, ghost (not a wall)
    param: str | None


@dataclass(frozen=True)
class FoldedGallery:
    base: tuple
    start: LocalChamber
    type: tuple
    folds: tuple            # c_j in {0, 1}; 1 = crossed
    steps: tuple

    @property
    def end(self) -> LocalChamber:
        return self.steps[-1].chamber if self.steps else self.start

    def monomial(self) -> StructurePoly:
        system = self.start.system
        out = StructurePoly.const(1, system)
        for st in self.steps:
            if st.kind == FOLD:
                out = out * (StructurePoly.var(system, st.param) - 1)
            elif st.kind == AWAY:
                out = out * StructurePoly.var(system, st.param)
        return out


def check_reduced(system: System, gtype: Sequence[int]) -> None:
    if system.from_word(gtype).length != len(gtype):
        raise NotReduced(f"type {tuple(gtype)} is not a reduced word")


def minimal_gallery_type(C: LocalChamber, D: LocalChamber) -> tuple[int, ...]:
    return chosen_word(residue_distance(C, D))


def _step(system: System, z, chamber: LocalChamber, i: int, omega_vec) -> tuple:
    """Root, level, wall flag and Ω-separation for the i-panel of ``chamber``."""
    beta = system.act_root(chamber.dir, system.simple_root(i))
    if chamber.sign < 0:
        beta = -beta
    level = -Fraction(beta(z))
    wall = is_true_wall(beta, z)
    separated = beta(omega_vec) < 0
    return beta, level, wall, separated


def _galleries(start: LocalChamber, omega: LocalChamber, gtype: tuple) -> Iterator[FoldedGallery]:
    system = start.system
    z = start.vertex
    omega_vec = interior_vector(omega)

    def rec(j, chamber, folds, steps):
        if j == len(gtype):
            yield FoldedGallery(z, start, gtype, tuple(folds), tuple(steps))
            return
        i = gtype[j]
        # c_j = 1 (fold) sorts before c_j = r (cross)
        beta, level, wall, sep = _step(system, z, chamber, i, omega_vec)
        if wall and sep:
            param = wall_parameter(beta, int(level), system)
            yield from rec(j + 1, chamber, folds + [0],
                           steps + [GalleryStep(chamber, beta, level, FOLD, param)])
        nxt = chamber.neighbour(i)
        beta, level, wall, sep = _step(system, z, nxt, i, omega_vec)
        if not wall:
            st = GalleryStep(nxt, beta, level, GHOST, None)
        elif sep:
            st = GalleryStep(nxt, beta, level, AWAY, wall_parameter(beta, int(level), system))
        else:
            st = GalleryStep(nxt, beta, level, TOWARD, None)
        yield from rec(j + 1, nxt, folds + [1], steps + [st])

    yield from rec(0, start, [], [])


def enumerate_folded(start: LocalChamber, omega: LocalChamber, gtype: Sequence[int],
                     end: LocalChamber | None = None) -> list[tuple[FoldedGallery, StructurePoly]]:
    """Galleries of the given type from ``start``, centrifugally folded w.r.t. Ω."""
    gtype = tuple(gtype)
    if omega.vertex != start.vertex or (end is not None and end.vertex != start.vertex):
        raise VertexMismatch("all chambers must share the base point")
    check_reduced(start.system, gtype)
    out = []
    for g in _galleries(start, omega, gtype):
        if end is None or g.end == end:
            out.append((g, g.monomial()))
    return out


def folded_end_sums(start: LocalChamber, omega: LocalChamber, gtype: Sequence[int]) -> dict:
    """Map end chamber -> sum of monomials of the folded galleries ending there."""
    gtype = tuple(gtype)
    system = start.system
    key = ("folded_ends", start.raw, omega.key, gtype)
    hit = system._memo.get(key)
    if hit is None:
        hit = {}
        for g, m in enumerate_folded(start, omega, gtype):
            hit[g.end] = hit.get(g.end, StructurePoly.const(0, system)) + m
        system._memo[key] = hit
    return hit


def folded_sum(start: LocalChamber, omega: LocalChamber, gtype: Sequence[int],
               end: LocalChamber) -> StructurePoly:
    if end.vertex != start.vertex:
        raise VertexMismatch("end chamber at another vertex")
    return folded_end_sums(start, omega, gtype).get(end, StructurePoly.const(0, start.system))


def minimal_lifting_count(start: LocalChamber, gtype: Sequence[int]) -> StructurePoly:
    """∏ Q over the true walls crossed by the minimal gallery of this type."""
    system = start.system
    check_reduced(system, gtype)
    out = StructurePoly.const(1, system)
    chamber = start
    for i in gtype:
        chamber = chamber.neighbour(i)
        beta = system.act_root(chamber.dir, system.simple_root(i))
        if is_true_wall(beta, start.vertex):
            out = out * StructurePoly.var(system, wall_parameter(beta, int(-beta(start.vertex)), system))
    return out
