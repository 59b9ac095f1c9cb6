"""The model apartment: local chambers, W-distances, projections, walls.

A local chamber ``(x, s, u)`` is the germ at x of ``x + s·u·C_f^v``.  Points are
tuples of ``int``/``Fraction``.  Anything that depends on which side of a
hyperplane a germ lies is decided exactly with *perturbed vectors*: a list of
vectors ``[v0, v1, ...]`` read as ``v0 + ε v1 + ε² v2 + …`` and compared
lexicographically, so ties on a wall are broken the way the germ breaks them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import _linalg as la
from .errors import (
    NotGeneric, NotPreordered, OrderViolation, SignMismatch, Undecidable, VertexMismatch,
)
from .root_system import DEFAULT_CAP, Cone, RealRoot, System, WeylElt

__all__ = [
    "AffineWeylElt", "ProductResult", "LocalChamber", "SegmentGerm", "Wall",
    "point", "is_classical", "w0", "chamber_of", "interior_vector",
    "w_distance", "codistance", "residue_distance", "star", "pr_point", "pr_germ",
    "wall_parameter", "is_true_wall", "root_sign",
]


def point(*coords) -> tuple:
    return la.normalize(tuple(Fraction(c) for c in coords))


def is_classical(system: System) -> bool:
    key = ("classical",)
    if key not in system._memo:
        system._memo[key] = system.is_finite_type(range(1, system.n + 1))
    return system._memo[key]


def w0(system: System) -> WeylElt:
    return system.longest_element(range(1, system.n + 1))


@dataclass(frozen=True)
class AffineWeylElt:
    """λ·w, the affine map v ↦ λ + w(v)."""

    lam: tuple
    w: WeylElt

    def __mul__(self, other: "AffineWeylElt") -> "AffineWeylElt":
        return AffineWeylElt(la.normalize(la.vadd(self.lam, self.w.act(other.lam))), self.w * other.w)

    def inverse(self) -> "AffineWeylElt":
        wi = self.w.inverse()
        return AffineWeylElt(la.normalize(la.vscale(-1, wi.act(self.lam))), wi)

    def act(self, v: Sequence) -> tuple:
        return la.normalize(la.vadd(self.lam, self.w.act(v)))

    @property
    def system(self) -> System:
        return self.w.system

    def sort_key(self):
        return (tuple(self.lam), len(self.w.word), self.w.word)

    def __repr__(self) -> str:
        lam = ",".join(str(c) for c in self.lam)
        return f"t[{lam}]*{self.w!r}"


@dataclass(frozen=True, eq=False)
class LocalChamber:
    vertex: tuple
    sign: int          # +1 or -1
    dir: WeylElt

    @property
    def system(self) -> System:
        return self.dir.system

    @cached_property
    def key(self):
        if self.sign < 0 and is_classical(self.system):
            return (self.vertex, 1, (self.dir * w0(self.system)).mat)
        return (self.vertex, self.sign, self.dir.mat)

    @property
    def raw(self):
        """Key that also remembers the chosen sign (panel types depend on it)."""
        return (self.vertex, self.sign, self.dir.mat)

    def __eq__(self, other):
        return isinstance(other, LocalChamber) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def opposite(self) -> "LocalChamber":
        return LocalChamber(self.vertex, -self.sign, self.dir)

    def with_sign(self, sign: int) -> "LocalChamber":
        """The same chamber written with the requested sign (classical case only)."""
        if sign == self.sign:
            return self
        if not is_classical(self.system):
            raise SignMismatch("positive and negative chambers never coincide here")
        return LocalChamber(self.vertex, sign, self.dir * w0(self.system))

    def neighbour(self, i: int) -> "LocalChamber":
        return LocalChamber(self.vertex, self.sign, self.dir * self.system.reflection(i))

    def translate(self, v: Sequence) -> "LocalChamber":
        return LocalChamber(la.normalize(la.vadd(self.vertex, v)), self.sign, self.dir)

    def at(self, p: Sequence) -> "LocalChamber":
        return LocalChamber(la.normalize(tuple(p)), self.sign, self.dir)

    def __repr__(self) -> str:
        v = ",".join(str(c) for c in self.vertex)
        return f"({v}|{'+' if self.sign > 0 else '-'}|{self.dir!r})"


@dataclass(frozen=True)
class SegmentGerm:
    vertex: tuple
    direction: tuple


@dataclass(frozen=True)
class Wall:
    """M(β, k) = {v : β(v) + k = 0}, stored with β positive."""

    root: RealRoot
    level: int

    @staticmethod
    def make(beta: RealRoot, k: int) -> "Wall":
        return Wall(beta, k) if beta.is_positive else Wall(-beta, -k)


# --- perturbed vectors --------------------------------------------------------

def _sign_of(form: Sequence, levels: Sequence[Sequence]) -> int:
    for v in levels:
        x = la.dot(form, v)
        if x:
            return 1 if x > 0 else -1
    return 0


def root_sign(beta: RealRoot, levels: Sequence[Sequence]) -> int:
    """Sign of β on the perturbed vector ``levels``."""
    return _sign_of(beta.form, levels)


def _walk_steps(system: System, levels: list):
    """Generator walking ``levels`` to the fundamental chamber.

    Yields None while walking; finishes by yielding w (with w·levels
    fundamental) or ``False`` when some simple root vanishes on every level.
    """
    w = system.identity()
    cur = [tuple(v) for v in levels]
    while True:
        i = next((i for i in range(1, system.n + 1)
                  if _sign_of(system.root_forms[i - 1], cur) <= 0), None)
        if i is None:
            yield w
            return
        if _sign_of(system.root_forms[i - 1], cur) == 0:
            yield False
            return
        r = system.reflection(i)
        cur = [r.act(v) for v in cur]
        w = r * w
        yield None


def chamber_of(system: System, x: Sequence, levels: Sequence[Sequence], cap: int = DEFAULT_CAP,
               sign: int | None = None) -> LocalChamber:
    """The local chamber at x containing the germ of ``x + ε·levels``.

    Both signs are walked in lockstep, so a germ in the negative Tits cone does
    not first exhaust the cap on the positive side.  In the classical case every
    chamber is both positive and negative; ``sign`` picks the representative
    (elsewhere it is only checked).
    """
    x = la.normalize(tuple(x))
    key = ("chamber_of", tuple(tuple(v) for v in levels))
    hit = system._memo.get(key)
    if hit is None:
        walks = {1: _walk_steps(system, list(levels)),
                 -1: _walk_steps(system, [la.vscale(-1, v) for v in levels])}
        for _ in range(cap + 1):
            for sgn in (1, -1):
                if sgn not in walks:
                    continue
                res = next(walks[sgn])
                if res is False:
                    del walks[sgn]
                elif res is not None:
                    hit = (sgn, res.inverse())
                    break
            if hit is not None or not walks:
                break
        if hit is None:
            raise Undecidable("direction is in neither Tits cone (or not generic)")
        system._memo[key] = hit
    C = LocalChamber(x, hit[0], hit[1])
    return C if sign is None else C.with_sign(sign)


def interior_vector(C: LocalChamber) -> tuple:
    """A vector v with ``vertex + εv`` inside C."""
    return la.vscale(C.sign, C.dir.act(C.system._height_vec))


# --- distances ----------------------------------------------------------------

def _preordered(system: System, v: Sequence) -> None:
    cone = system.classify_cone(v)
    if cone in (Cone.NEGATIVE, Cone.OUTSIDE):
        raise NotPreordered(f"{tuple(v)} is not in the Tits cone")
    if cone is Cone.UNDECIDED:
        raise Undecidable(f"cone membership of {tuple(v)} undecided")


def w_distance(Cx: LocalChamber, Cy: LocalChamber) -> AffineWeylElt:
    Cx, Cy = Cx.with_sign(1), Cy.with_sign(1)
    diff = la.vsub(Cy.vertex, Cx.vertex)
    _preordered(Cx.system, diff)
    ai = Cx.dir.inverse()
    return AffineWeylElt(ai.act(diff), ai * Cy.dir)


def codistance(C: LocalChamber, D: LocalChamber) -> WeylElt:
    if C.vertex != D.vertex:
        raise VertexMismatch(f"{C.vertex} vs {D.vertex}")
    D = D.with_sign(-C.sign)
    return C.dir.inverse() * D.dir


def residue_distance(C: LocalChamber, D: LocalChamber) -> WeylElt:
    if C.vertex != D.vertex:
        raise VertexMismatch(f"{C.vertex} vs {D.vertex}")
    D = D.with_sign(C.sign)
    return C.dir.inverse() * D.dir


def star(C: LocalChamber, g: AffineWeylElt) -> LocalChamber:
    C = C.with_sign(1)
    return LocalChamber(la.normalize(la.vadd(C.vertex, C.dir.act(g.lam))), 1, C.dir * g.w)


# --- projections --------------------------------------------------------------

def pr_point(x: Sequence, C: LocalChamber, sign: int | None = None) -> LocalChamber:
    """Projection of C onto x; ``sign`` as in :func:`chamber_of` (ignored when x is C's vertex)."""
    x = la.normalize(tuple(x))
    if x == C.vertex:
        return C
    try:
        return chamber_of(C.system, x, [la.vsub(C.vertex, x), interior_vector(C)], sign=sign)
    except Undecidable as exc:
        raise OrderViolation(str(exc)) from None


def pr_germ(delta: SegmentGerm, C: LocalChamber) -> LocalChamber:
    system = C.system
    xi = delta.direction
    if not (system.is_spherical(xi) or system.is_spherical(la.vscale(-1, xi))):
        raise NotGeneric(f"{xi} meets neither open Tits cone")
    base = pr_point(delta.vertex, C)
    return chamber_of(system, delta.vertex, [xi, interior_vector(base)])


# --- walls --------------------------------------------------------------------

def wall_parameter(beta: RealRoot, k: int, system: System) -> str:
    raw = f"Q{beta.orbit}" if k % 2 == 0 else f"Qp{beta.orbit}"
    return system.param_classes.canonical(raw)


def is_true_wall(beta: RealRoot, p: Sequence) -> bool:
    return Fraction(beta(p)).denominator == 1


@dataclass
class ProductResult:
    """T_w * T_v as an ordered map u -> a^u_{w,v} (zero terms never stored)."""

    terms: dict = field(default_factory=dict)

    def add(self, u: AffineWeylElt, poly) -> None:
        cur = self.terms.get(u)
        new = poly if cur is None else cur + poly
        if new.is_zero():
            self.terms.pop(u, None)
        else:
            self.terms[u] = new

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def __eq__(self, other):
        return isinstance(other, ProductResult) and self.terms == other.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({p})*T[{u!r}]" for u, p in self.sorted_items())
