"""Structure constants a^u_{w,v} of the Iwahori–Hecke algebra, and full products.

Throughout, C_x is the fundamental positive local chamber at 0 and, for a
candidate u = ν·u, C_y = (ν, +, u) is the chamber with d^W(C_x, C_y) = u.
Three formulas are used depending on where the translation parts live:

* μ ∈ V_0: one folded-gallery sum at λ (no path).
* λ ∈ V_0, μ spherical: one folded-gallery sum at λ after three incidence checks.
* λ, μ spherical: a sum over decorated Hecke paths from λ to ν of products of
  folded-gallery sums, one per breakpoint.

For the path formula the part that does not involve u is tabulated once per
(w, v) as ν ↦ {C^*_y ↦ polynomial}, by a transfer-matrix sweep over the
decorations of consecutive segments.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _linalg as la
from .apartment import (AffineWeylElt, LocalChamber, ProductResult, chamber_of, codistance,
                        interior_vector, pr_point)
from .errors import NotInW, NotSpherical, OutsideProvenCases, SystemMismatch, Undecidable, WrongCase
from .galleries import folded_end_sums, folded_sum, minimal_gallery_type
from .hecke_path import DEFAULT_NODE_CAP, enumerate_paths, segment_decorations
from .polynomial import StructurePoly
from .root_system import Cone, Dominant, System, WeylElt, choices_randomized, chosen_word

__all__ = [
    "AffineWeylElt", "ProductResult", "structure_constant", "product",
    "constant_spherical", "constant_mu_zero", "constant_lambda_zero", "Settings", "settings",
]


@dataclass
class Settings:
    node_cap: int = DEFAULT_NODE_CAP


settings = Settings()


def _zero(system: System) -> StructurePoly:
    return StructurePoly.const(0, system)


def _base(system: System) -> LocalChamber:
    return LocalChamber(tuple(0 for _ in range(system.d)), 1, system.identity())


def _subword_products(system: System, word) -> list[WeylElt]:
    found = {system.identity().mat: system.identity()}
    for i in word:
        r = system.reflection(i)
        for g in list(found.values()):
            h = g * r
            found.setdefault(h.mat, h)
    return list(found.values())


def _memo(system: System, key, fn):
    # results are choice-independent, but under randomized choices we must recompute
    if choices_randomized():
        return fn()
    hit = system._memo.get(key)
    if hit is None:
        hit = system._memo[key] = fn()
    return hit


def _same_system(*elts: AffineWeylElt) -> System:
    system = elts[0].system
    if any(e.system is not system for e in elts):
        raise SystemMismatch("elements come from different root data")
    return system


def _orbit_data(system: System, v: AffineWeylElt):
    """(μ^{++}, J, w_0(J), w') with w' the minimal element making v^{-1}μ dominant."""
    dom = system.dominantize(v.w.inverse().act(v.lam))
    if not isinstance(dom, Dominant):
        raise Undecidable(f"cannot dominantize {v.lam}")
    if not system.is_finite_type(dom.J):
        raise NotSpherical(f"{v.lam} is not spherical")
    return la.normalize(dom.lam), dom.J, system.longest_element(dom.J), dom.w


# --- μ ∈ V_0 --------------------------------------------------------------------

def _mu_zero_setup(w: AffineWeylElt, v: AffineWeylElt):
    system = w.system
    Cx = _base(system)
    lam = w.lam
    if system.classify_cone(lam) is Cone.V0:
        Cm = pr_point(lam, Cx, sign=1)
        Cend = LocalChamber(lam, Cm.sign, Cm.dir * w.w)
    else:
        Cm = pr_point(lam, Cx, sign=-1)
        Cend = LocalChamber(lam, 1, Cm.with_sign(-1).dir * system.w_lambda_plus(lam) * w.w)
    return Cm, Cend, chosen_word(v.w.inverse())


def constant_mu_zero(w: AffineWeylElt, v: AffineWeylElt, u: AffineWeylElt) -> StructurePoly:
    system = _same_system(w, v, u)
    if system.classify_cone(v.lam) is not Cone.V0:
        raise WrongCase("the translation part of v is not in V_0")
    if la.normalize(u.lam) != la.normalize(la.vadd(w.lam, v.lam)):
        return _zero(system)
    Cm, Cend, word = _mu_zero_setup(w, v)
    Cy = LocalChamber(la.normalize(u.lam), 1, u.w)
    Cplus = pr_point(w.lam, Cy, sign=1)
    return folded_sum(Cplus, Cm, word, Cend)


def _mu_zero_candidates(w: AffineWeylElt, v: AffineWeylElt) -> set:
    system = w.system
    Cm, Cend, word = _mu_zero_setup(w, v)
    nu = la.normalize(la.vadd(w.lam, v.lam))
    # C^+_{z0} = (λ, +, u) must reach C' by a gallery of this type
    return {AffineWeylElt(nu, Cend.dir * s.inverse()) for s in _subword_products(system, word)}


# --- λ ∈ V_0, μ spherical ------------------------------------------------------

def _lambda_zero_setup(w: AffineWeylElt, v: AffineWeylElt):
    system = w.system
    Cx = _base(system)
    mu, J, w0J, wp = _orbit_data(system, v)
    Cm = pr_point(w.lam, Cx, sign=1)
    Cend = LocalChamber(w.lam, Cm.sign, Cm.dir * w.w)
    word = chosen_word(wp * v.w.inverse())
    return mu, w0J, wp, Cm, Cend, word


def constant_lambda_zero(w: AffineWeylElt, v: AffineWeylElt, u: AffineWeylElt) -> StructurePoly:
    system = _same_system(w, v, u)
    if system.classify_cone(w.lam) is not Cone.V0:
        raise WrongCase("the translation part of w is not in V_0")
    if not system.is_spherical(v.lam):
        raise WrongCase("the translation part of v is not spherical")
    mu, w0J, wp, Cm, Cend, word = _lambda_zero_setup(w, v)
    nu = la.normalize(u.lam)
    Cy = LocalChamber(nu, 1, u.w)
    Cplus = pr_point(w.lam, Cy, sign=1)
    if la.normalize(Cplus.dir.inverse().act(la.vsub(nu, w.lam))) != mu:
        return _zero(system)
    Cyy = pr_point(nu, Cplus, sign=-1)
    if codistance(Cyy, Cy).mat != (w0J * wp).mat:
        return _zero(system)
    return folded_sum(Cplus, Cm, word, Cend)


def _lambda_zero_candidates(w: AffineWeylElt, v: AffineWeylElt) -> set:
    system = w.system
    mu, w0J, wp, Cm, Cend, word = _lambda_zero_setup(w, v)
    out = set()
    for s in _subword_products(system, word):
        a = Cend.dir * s.inverse()
        nu = la.normalize(la.vadd(w.lam, a.act(mu)))
        Cyy = pr_point(nu, LocalChamber(w.lam, 1, a), sign=-1)
        out.add(AffineWeylElt(nu, Cyy.with_sign(-1).dir * w0J * wp))
    return out


# --- λ, μ spherical ------------------------------------------------------------

def _path_setup(w: AffineWeylElt, v: AffineWeylElt):
    system = w.system
    Cx = _base(system)
    mu, J, w0J, wp = _orbit_data(system, v)
    lam = la.normalize(w.lam)
    Cm0 = pr_point(lam, Cx, sign=-1)
    Cprime = LocalChamber(lam, 1, Cm0.with_sign(-1).dir * system.w_lambda_plus(lam) * w.w)
    word0 = chosen_word(wp * v.w.inverse())
    return Cx, mu, w0J, wp, lam, Cm0, Cprime, word0


def _table(w: AffineWeylElt, v: AffineWeylElt, end=None) -> dict:
    """ν ↦ {C^*_y ↦ Σ over decorated paths of the first factor times the interior factors}."""
    system = w.system
    Cx, mu, w0J, wp, lam, Cm0, Cprime, word0 = _path_setup(w, v)
    starts = folded_end_sums_reverse(Cprime, Cm0, word0)
    initial = {la.normalize(D.dir.act(mu)) for D in starts}
    paths = enumerate_paths(mu, lam, Cx, end=end, initial=initial, integral_end=True,
                            cap=settings.node_cap)
    table: dict = {}
    for path in paths:
        # weights over the decoration of the current segment
        weights = {}
        for D in segment_decorations(path, 0):
            a0 = starts.get(D)
            if a0 is not None and not a0.is_zero():
                weights[D] = a0
        for k in range(1, path.num_segments):
            if not weights:
                break
            q = path.breakpoints[k]
            Cm = pr_point(q, Cx, sign=-1)
            nxt_decs = segment_decorations(path, k)
            eta = path.directions[k]
            new: dict = {}
            for D, wt in weights.items():
                Cstar = chamber_of(system, q, [la.vscale(-1, path.directions[k - 1]), interior_vector(D)], sign=-1)
                gtype = minimal_gallery_type(Cm, Cstar)
                for E in nxt_decs:
                    tilde = chamber_of(system, q, [la.vscale(-1, eta), interior_vector(E)], sign=-1)
                    f = folded_sum(Cm, E, gtype, tilde)
                    if not f.is_zero():
                        new[E] = new.get(E, _zero(system)) + wt * f
            weights = {E: p for E, p in new.items() if not p.is_zero()}
        y = path.end
        bucket = table.setdefault(y, {})
        for D, wt in weights.items():
            Cstar = chamber_of(system, y, [la.vscale(-1, path.directions[-1]), interior_vector(D)], sign=-1)
            bucket[Cstar] = bucket.get(Cstar, _zero(system)) + wt
    return {nu: {c: p for c, p in b.items() if not p.is_zero()} for nu, b in table.items()}


def folded_end_sums_reverse(Cend: LocalChamber, omega: LocalChamber, word) -> dict:
    """Start chamber D ↦ Σ monomials of galleries of this type from D to Cend (folded w.r.t. Ω)."""
    system = Cend.system
    out = {}
    for s in _subword_products(system, word):
        D = LocalChamber(Cend.vertex, Cend.sign, Cend.dir * s.inverse())
        if D in out:
            continue
        f = folded_sum(D, omega, word, Cend)
        if not f.is_zero():
            out[D] = f
    return out


def _last_factor(nu, u_w: WeylElt, Cstar: LocalChamber, wp: WeylElt, w0J: WeylElt) -> StructurePoly:
    system = u_w.system
    Cm = pr_point(nu, _base(system), sign=-1)
    Cy = LocalChamber(nu, 1, u_w)
    tilde = LocalChamber(nu, -1, u_w * wp.inverse() * w0J)
    return folded_sum(Cm, Cy, minimal_gallery_type(Cm, Cstar), tilde)


def constant_spherical(w: AffineWeylElt, v: AffineWeylElt, u: AffineWeylElt) -> StructurePoly:
    system = _same_system(w, v, u)
    for e in (w, v):
        if system.classify_cone(e.lam) is not Cone.INTERIOR:
            raise NotSpherical(f"{e.lam} is not in the open Tits cone")
    nu = la.normalize(u.lam)
    if not system.is_spherical(nu):
        return _zero(system)
    mu, J, w0J, wp = _orbit_data(system, v)
    table = _memo(system, ("table", w, v, nu), lambda: _table(w, v, end=nu))
    total = _zero(system)
    for Cstar, wt in table.get(nu, {}).items():
        total = total + wt * _last_factor(nu, u.w, Cstar, wp, w0J)
    return total


def _spherical_product(w: AffineWeylElt, v: AffineWeylElt) -> ProductResult:
    system = w.system
    mu, J, w0J, wp = _orbit_data(system, v)
    table = _table(w, v)
    res = ProductResult()
    for nu, bucket in sorted(table.items()):
        Cm = pr_point(nu, _base(system), sign=-1)
        cands = {}
        for Cstar in bucket:
            for s in _subword_products(system, minimal_gallery_type(Cm, Cstar)):
                end = LocalChamber(nu, Cm.sign, Cm.dir * s).with_sign(-1)
                uw = end.dir * w0J * wp
                cands.setdefault(uw.mat, uw)
        for mat in sorted(cands):
            uw = cands[mat]
            total = _zero(system)
            for Cstar, wt in bucket.items():
                total = total + wt * _last_factor(nu, uw, Cstar, wp, w0J)
            res.add(AffineWeylElt(nu, uw), total)
    return res


# --- dispatch ------------------------------------------------------------------

def _case(system: System, w: AffineWeylElt, v: AffineWeylElt) -> str:
    cl, cm = system.classify_cone(w.lam), system.classify_cone(v.lam)
    for c, e in ((cl, w), (cm, v)):
        if c is Cone.UNDECIDED:
            raise Undecidable(f"cone of {e.lam} undecided within the cap")
        if c in (Cone.NEGATIVE, Cone.OUTSIDE):
            raise NotInW(f"{e.lam} is outside the Tits cone")
        if c is Cone.NON_SPHERICAL_BOUNDARY:
            raise OutsideProvenCases(f"{e.lam} is on a non-spherical face of the Tits cone")
    if cm is Cone.V0:
        return "mu_zero"
    if cl is Cone.V0:
        return "lambda_zero"
    return "spherical"


def structure_constant(w: AffineWeylElt, v: AffineWeylElt, u: AffineWeylElt) -> StructurePoly:
    system = _same_system(w, v, u)
    case = _case(system, w, v)
    if system.classify_cone(u.lam) in (Cone.NEGATIVE, Cone.OUTSIDE):
        return _zero(system)
    if case == "mu_zero":
        return constant_mu_zero(w, v, u)
    if case == "lambda_zero":
        return constant_lambda_zero(w, v, u)
    return constant_spherical(w, v, u)


def product(w: AffineWeylElt, v: AffineWeylElt) -> ProductResult:
    system = _same_system(w, v)
    return _memo(system, ("product", w, v), lambda: _product(system, w, v))


def _product(system: System, w: AffineWeylElt, v: AffineWeylElt) -> ProductResult:
    case = _case(system, w, v)
    if case == "spherical":
        return _spherical_product(w, v)
    cands = _mu_zero_candidates(w, v) if case == "mu_zero" else _lambda_zero_candidates(w, v)
    res = ProductResult()
    for u in sorted(cands, key=AffineWeylElt.sort_key):
        res.add(u, structure_constant(w, v, u))
    return res
