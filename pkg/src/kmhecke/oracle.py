"""Brute-force Iwahori–Matsumoto multiplication for classical root data.

Completely independent of the path and gallery machinery: the affine Weyl
group is treated as a Coxeter group generated by the simple reflections r_i
and, for each irreducible component c, the reflection r_0^(c) in the far wall
{θ_c = 1} of the alcove germed by the fundamental local chamber at 0.  Products
are expanded one generator at a time with the quadratic relation.

Generator labels: ``i`` (1..n) for r_i, and ``1 - c`` (0, -1, -2, …) for the
affine reflection of component c.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _linalg as la
from .apartment import AffineWeylElt, ProductResult, wall_parameter
from .errors import NotClassical, NotCoroot
from .polynomial import StructurePoly
from .root_system import RealRoot, System

__all__ = ["AffineCoxeter", "affine_coxeter", "to_word", "im_product", "compare", "OracleDiff"]


@dataclass(frozen=True)
class _Gen:
    label: int
    root: RealRoot      # vector part of the affine simple root
    k: int              # constant part: a(v) = root(v) + k
    elt: AffineWeylElt  # the reflection itself
    param: str


class AffineCoxeter:
    def __init__(self, system: System):
        n, d = system.n, system.d
        if not system.is_finite_type(range(1, n + 1)):
            raise NotClassical(f"{system.name} is not of finite type")
        if d != n or abs(la.det(system.coroots)) != 1:
            raise NotCoroot("the oracle needs Y = Q^∨ (coroots a basis of ℤ^d)")
        self.system = system
        self.gens: list[_Gen] = []
        zero = tuple(0 for _ in range(d))
        for i in range(1, n + 1):
            a = system.simple_root(i)
            self.gens.append(_Gen(i, a, 0, AffineWeylElt(zero, system.reflection(i)),
                                  wall_parameter(a, 0, system)))
        for c, comp in enumerate(self._components(), start=1):
            theta = self._highest_root(comp)
            refl = system.reflection_in(theta)
            elt = AffineWeylElt(la.normalize(theta.coroot), refl)   # v ↦ v - (θ(v) - 1)θ^∨
            self.gens.append(_Gen(1 - c, -theta, 1, elt, wall_parameter(theta, -1, system)))
        self.by_label = {g.label: g for g in self.gens}

    def _components(self) -> list[list[int]]:
        n, M = self.system.n, self.system.gcm
        seen, comps = set(), []
        for s in range(1, n + 1):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(1, n + 1):
                    if j not in seen and M[i - 1][j - 1] != 0:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps

    def _highest_root(self, comp: list[int]) -> RealRoot:
        roots = self.system.positive_roots(10 ** 6)
        inside = [r for r in roots if all(r.coords[i - 1] == 0 for i in range(1, self.system.n + 1) if i not in comp)]
        return max(inside, key=lambda r: sum(r.coords))

    def check(self, g: AffineWeylElt) -> None:
        # Y = Q^∨ is enforced at construction, so every integral λ is a coroot combination
        if any(not isinstance(c, int) for c in g.lam):
            raise NotCoroot(f"{g.lam} is not in Q^∨")

    def is_descent(self, g: AffineWeylElt, label: int) -> bool:
        """ℓ(g r) < ℓ(g): the image of the affine simple root is negative."""
        gen = self.by_label[label]
        wb = self.system.act_root(g.w, gen.root)
        k = gen.k - wb(g.lam)
        return k < 0 or (k == 0 and not wb.is_positive)

    def word(self, g: AffineWeylElt) -> tuple[int, ...]:
        self.check(g)
        out = []
        cur = g
        while True:
            lab = next((x.label for x in self.gens if self.is_descent(cur, x.label)), None)
            if lab is None:
                break
            out.append(lab)
            cur = cur * self.by_label[lab].elt
        return tuple(reversed(out))

    def element(self, word) -> AffineWeylElt:
        zero = tuple(0 for _ in range(self.system.d))
        g = AffineWeylElt(zero, self.system.identity())
        for lab in word:
            g = g * self.by_label[lab].elt
        return g

    def product(self, w: AffineWeylElt, v: AffineWeylElt) -> ProductResult:
        self.check(w)
        self.check(v)
        system = self.system
        terms = {w: StructurePoly.const(1, system)}
        for lab in self.word(v):
            gen = self.by_label[lab]
            q = StructurePoly.var(system, gen.param)
            nxt: dict = {}
            for u, c in terms.items():
                ur = u * gen.elt
                if not self.is_descent(u, lab):
                    nxt[ur] = nxt.get(ur, 0) + c
                else:
                    nxt[ur] = nxt.get(ur, 0) + c * q
                    nxt[u] = nxt.get(u, 0) + c * (q - 1)
            terms = nxt
        res = ProductResult()
        for u, c in terms.items():
            if not c.is_zero():
                res.add(u, c)
        return res


def affine_coxeter(system: System) -> AffineCoxeter:
    key = ("oracle",)
    if key not in system._memo:
        system._memo[key] = AffineCoxeter(system)
    return system._memo[key]


def to_word(g: AffineWeylElt) -> tuple[int, ...]:
    return affine_coxeter(g.system).word(g)


def im_product(w: AffineWeylElt, v: AffineWeylElt) -> ProductResult:
    return affine_coxeter(w.system).product(w, v)


@dataclass
class OracleDiff:
    w: AffineWeylElt
    v: AffineWeylElt
    only_engine: dict
    only_oracle: dict
    different: dict

    @property
    def ok(self) -> bool:
        return not (self.only_engine or self.only_oracle or self.different)


def compare(w: AffineWeylElt, v: AffineWeylElt) -> OracleDiff:
    from .structure_constants import product
    eng = product(w, v).terms
    orc = im_product(w, v).terms
    return OracleDiff(
        w, v,
        {u: p for u, p in eng.items() if u not in orc},
        {u: p for u, p in orc.items() if u not in eng},
        {u: (eng[u], orc[u]) for u in eng if u in orc and eng[u] != orc[u]},
    )
