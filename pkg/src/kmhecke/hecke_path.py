"""Hecke paths of a spherical dominant shape with respect to a base local chamber.

A path is stored as its breakpoints together with one direction and one
duration per segment.  Breakpoints are exactly the wall events along the path
(points where a true wall is reached from the side opposite the base vertex),
so every direction change sits at a breakpoint but not every breakpoint is a
direction change.

Only finitely many roots can matter on a run from p in direction ξ: a root
used for folding is negative on ξ and (weakly) positive on p - x.  Both
vectors lie in the open Tits cone, so each side is a finite window computed
from a dominantizing element and the finite stabilizer of the dominant
representative.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian
from typing import Iterable, Sequence

from . import _linalg as la
from .apartment import LocalChamber, chamber_of, interior_vector, is_classical, pr_point
from .errors import (BasePointOnPath, ChainNotFound, NotLambdaPath, NotSpherical,
                     SearchBudgetExceeded)
from .galleries import folded_sum, minimal_gallery_type
from .polynomial import StructurePoly
from .root_system import Dominant, RealRoot, System, WeylElt

__all__ = [
    "HeckePath", "DecoratedHeckePath", "Chain", "validate_hecke", "fold_candidates",
    "enumerate_paths", "enumerate_decorations", "segment_lifting_count",
    "orbit", "DEFAULT_NODE_CAP",
]

DEFAULT_NODE_CAP = 1_000_000


@dataclass(frozen=True)
class Chain:
    """A folding chain at a breakpoint: ξ_0 → ξ_1 → … via reflections r_{β_j}."""

    xis: tuple
    betas: tuple


@dataclass(frozen=True)
class HeckePath:
    shape: tuple
    base_chamber: LocalChamber = field(compare=False)
    breakpoints: tuple
    directions: tuple
    durations: tuple
    chains: tuple = field(default=(), compare=False)   # one per interior breakpoint

    @property
    def system(self) -> System:
        return self.base_chamber.system

    @property
    def start(self) -> tuple:
        return self.breakpoints[0]

    @property
    def end(self) -> tuple:
        return self.breakpoints[-1]

    @property
    def num_segments(self) -> int:
        return len(self.directions)

    def fold_points(self) -> list[int]:
        return [k for k in range(1, self.num_segments) if self.directions[k - 1] != self.directions[k]]

    def sort_key(self):
        return (self.breakpoints, self.directions)

    def to_json(self) -> dict:
        return {
            "shape": list(_jsonvec(self.shape)),
            "breakpoints": [_jsonvec(p) for p in self.breakpoints],
            "directions": [_jsonvec(v) for v in self.directions],
            "durations": [str(s) for s in self.durations],
            "chains": [{"xis": [_jsonvec(v) for v in c.xis],
                        "betas": [list(b.coords) for b in c.betas]} for c in self.chains],
        }


@dataclass(frozen=True)
class DecoratedHeckePath:
    path: HeckePath
    decorations: tuple      # D_k: positive chamber at p_{k-1} whose closure holds ξ_k

    def plus(self, k: int) -> LocalChamber:
        """C^+ at p_k (k < ℓ): the decoration of the outgoing segment."""
        return self.decorations[k]

    def star(self, k: int) -> LocalChamber:
        """C^* at p_k (k ≥ 1): negative chamber of segment k holding the backward germ."""
        D = self.decorations[k - 1]
        xi = self.path.directions[k - 1]
        return chamber_of(D.system, self.path.breakpoints[k], [la.vscale(-1, xi), interior_vector(D)], sign=-1)

    def to_json(self) -> dict:
        out = self.path.to_json()
        out["decorations"] = [{"vertex": _jsonvec(D.vertex), "sign": D.sign, "dir": list(D.dir.word)}
                              for D in self.decorations]
        return out


def _jsonvec(v) -> list:
    return [x if isinstance(x, int) else str(x) for x in v]


# --- finite root windows -----------------------------------------------------

def _finite_positive_roots(system: System, J: frozenset) -> list[RealRoot]:
    key = ("phiJ", J)
    hit = system._memo.get(key)
    if hit is None:
        out = set()
        w0J = system.longest_element(J)
        for w in system.elements(w0J.length, J):
            for j in J:
                b = system.act_root(w, system.simple_root(j))
                if b.is_positive:
                    out.add(b)
        hit = sorted(out, key=lambda r: r.coords)
        system._memo[key] = hit
    return hit


def _nonpositive_window(system: System, v: Sequence) -> list[RealRoot]:
    """All positive roots γ with γ(v) ≤ 0, for v in the open Tits cone."""
    v = la.normalize(tuple(v))
    key = ("nonpos", v)
    hit = system._memo.get(key)
    if hit is None:
        dom = system.dominantize(v)
        if not isinstance(dom, Dominant) or not system.is_finite_type(dom.J):
            raise NotSpherical(f"{v} is not in the open Tits cone")
        a = dom.w                               # a·v dominant
        ainv = a.inverse()
        cands = set(system.inversion_set(ainv))  # γ > 0 with a·γ < 0
        for d in _finite_positive_roots(system, dom.J):
            g = system.act_root(ainv, d)
            if g.is_positive:
                cands.add(g)
        hit = sorted((g for g in cands if g(v) <= 0), key=lambda r: r.coords)
        system._memo[key] = hit
    return hit


def _fold_roots(system: System, rel: Sequence, xi: Sequence, strict: bool) -> list[RealRoot]:
    """Roots β with β(ξ) < 0 and β(rel) > 0 (``strict``) or ≥ 0."""
    out = []
    for g in _nonpositive_window(system, xi):
        if g(xi) < 0 and (g(rel) > 0 or (not strict and g(rel) == 0)):
            out.append(g)
    for g in _nonpositive_window(system, rel) if any(rel) else _all_roots_classical(system):
        if g(xi) > 0 and (g(rel) < 0 or (not strict and g(rel) == 0)):
            out.append(-g)
    return out


def _all_roots_classical(system: System) -> list[RealRoot]:
    return _finite_positive_roots(system, frozenset(range(1, system.n + 1)))


# --- base point checks -------------------------------------------------------

def _check_base(system: System, x: Sequence, p: Sequence) -> None:
    rel = la.vsub(p, x)
    if not any(rel):
        if is_classical(system):
            return
        raise BasePointOnPath(f"path meets the base vertex {tuple(x)}")
    if not system.is_spherical(rel):
        raise BasePointOnPath(f"{tuple(p)} is not strictly above the base vertex in the open order")


def _below(beta: RealRoot, q: Sequence, Cx: LocalChamber) -> bool:
    """The fold wall lies on the far side of q from x: β(C^-_q) < β(q), with C^-_q = pr_q(C_x)."""
    c = beta(la.vsub(Cx.vertex, q))
    if c:
        return c < 0
    return beta(interior_vector(Cx)) < 0


# --- folding at a point ------------------------------------------------------

def _one_step_folds(system: System, q: tuple, zeta: tuple, Cx: LocalChamber):
    rel = la.vsub(q, Cx.vertex)
    for beta in _fold_roots(system, rel, zeta, strict=False):
        if Fraction(beta(q)).denominator != 1:
            continue
        if not _below(beta, q, Cx):
            continue
        yield beta, la.normalize(system.reflection_in(beta).act(zeta))


def _fold_closure(system: System, q: tuple, xi: tuple, Cx: LocalChamber) -> dict:
    """BFS over one-step folds; maps each reachable direction to its parent link."""
    key = ("folds", q, xi, Cx.key)
    hit = system._memo.get(key)
    if hit is None:
        hit = {xi: None}
        queue = deque([xi])
        while queue:
            z = queue.popleft()
            for beta, nz in _one_step_folds(system, q, z, Cx):
                if nz not in hit:
                    hit[nz] = (z, beta)
                    queue.append(nz)
        system._memo[key] = hit
    return hit


def fold_candidates(p: Sequence, xi: Sequence, Cx: LocalChamber) -> set:
    system = Cx.system
    p, xi = la.normalize(tuple(p)), la.normalize(tuple(xi))
    _check_base(system, Cx.vertex, p)
    return set(_fold_closure(system, p, xi, Cx))


def _chain(system: System, q: tuple, xi_in: tuple, xi_out: tuple, Cx: LocalChamber) -> Chain:
    links = _fold_closure(system, q, xi_in, Cx)
    if xi_out not in links:
        raise ChainNotFound(f"no folding chain at {q} from {xi_in} to {xi_out}")
    xis, betas = [xi_out], []
    cur = xi_out
    while links[cur] is not None:
        cur, beta = links[cur]
        xis.append(cur)
        betas.append(beta)
    return Chain(tuple(reversed(xis)), tuple(reversed(betas)))


# --- events along a run ------------------------------------------------------

def _events(system: System, p: tuple, xi: tuple, tau: Fraction, Cx: LocalChamber) -> list[Fraction]:
    """Times s in (0, τ) at which the run p + sξ meets a wall from the far side."""
    rel = la.vsub(p, Cx.vertex)
    times = set()
    for beta in _fold_roots(system, rel, xi, strict=True):
        bp, bx, bxi = Fraction(beta(p)), Fraction(beta(Cx.vertex)), Fraction(-beta(xi))
        m = bp.__ceil__() - 1 if bp.denominator == 1 else bp.__floor__()
        lo = bx.__ceil__()
        while m >= lo:
            s = (bp - m) / bxi
            if s >= tau:
                break
            times.add(s)
            m -= 1
    return sorted(times)


def _point(p, xi, s) -> tuple:
    return la.normalize(la.vadd(p, la.vscale(s, xi)))


# --- orbit --------------------------------------------------------------------

def orbit(system: System, mu: Sequence, cap: int = 100_000) -> list[tuple]:
    mu = la.normalize(tuple(mu))
    seen = {mu}
    queue = deque([mu])
    while queue:
        v = queue.popleft()
        for i in range(1, system.n + 1):
            u = la.normalize(system.reflection(i).act(v))
            if u not in seen:
                if len(seen) >= cap:
                    raise SearchBudgetExceeded("W^v-orbit exceeds the cap; pass initial directions")
                seen.add(u)
                queue.append(u)
    return sorted(seen)


def _check_shape(system: System, mu: tuple) -> None:
    if any(system.pair(i, mu) < 0 for i in range(1, system.n + 1)):
        raise NotSpherical(f"shape {mu} is not dominant")
    if not system.is_spherical(mu):
        raise NotSpherical(f"shape {mu} is not spherical")


def _in_orbit(system: System, mu: tuple, xi: tuple) -> bool:
    dom = system.dominantize(xi)
    return isinstance(dom, Dominant) and la.normalize(dom.lam) == mu


# --- validation ---------------------------------------------------------------

def validate_hecke(shape: Sequence, start: Sequence, segments: Iterable[tuple], Cx: LocalChamber) -> HeckePath:
    """Check a λ-path given as (direction, duration) pieces and annotate it.

    Consecutive pieces with equal direction are merged, then the path is
    re-cut at every wall event.
    """
    system = Cx.system
    mu = la.normalize(tuple(shape))
    _check_shape(system, mu)
    pieces = []
    for xi, s in segments:
        xi, s = la.normalize(tuple(xi)), Fraction(s)
        if s <= 0:
            raise NotLambdaPath("durations must be positive")
        if not _in_orbit(system, mu, xi):
            raise NotLambdaPath(f"{xi} is not in the orbit of {mu}")
        if pieces and pieces[-1][0] == xi:
            pieces[-1] = (xi, pieces[-1][1] + s)
        else:
            pieces.append((xi, s))
    if sum(s for _, s in pieces) != 1:
        raise NotLambdaPath("durations must sum to 1")
    p = la.normalize(tuple(start))
    _check_base(system, Cx.vertex, p)
    pts, dirs, durs, chains = [p], [], [], []
    prev = None
    for xi, s in pieces:
        if prev is not None:
            chains.append(_chain(system, p, prev, xi, Cx))
        t = Fraction(0)
        for e in _events(system, p, xi, s, Cx) + [s]:
            q = _point(p, xi, e)
            _check_base(system, Cx.vertex, q)
            if e != s:
                pts.append(q)
                dirs.append(xi)
                durs.append(e - t)
                chains.append(Chain((xi,), ()))
                t = e
        dirs.append(xi)
        durs.append(s - t)
        p = _point(p, xi, s)
        pts.append(p)
        prev = xi
    return HeckePath(mu, Cx, tuple(pts), tuple(dirs), tuple(durs), tuple(chains))


# --- enumeration --------------------------------------------------------------

class _Budget:
    def __init__(self, cap: int):
        self.cap, self.used = cap, 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.cap:
            raise SearchBudgetExceeded(f"more than {self.cap} search nodes")


def _coroot_coords(system: System, v: Sequence):
    """Coordinates of v on the simple coroots, or None off their span."""
    key = ("coroot_dual",)
    if key not in system._memo:
        system._memo[key] = la.solve_dual(system.coroots)
    coeffs = [la.dot(g, v) for g in system._memo[key]]
    back = tuple(sum(c * system.coroots[i][k] for i, c in enumerate(coeffs)) for k in range(system.d))
    if la.normalize(back) != la.normalize(tuple(v)):
        return None
    return coeffs


def _reachable(system: System, mu: tuple, q: tuple, tau: Fraction, end: tuple | None) -> bool:
    # every direction is ≤ μ^{++} in dominance, so τμ^{++} - (end - q) ≥ 0 on coroots
    if end is None:
        return True
    coeffs = _coroot_coords(system, la.vsub(la.vscale(tau, mu), la.vsub(end, q)))
    return coeffs is not None and all(c >= 0 for c in coeffs)


def enumerate_paths(shape: Sequence, p0: Sequence, Cx: LocalChamber, end: Sequence | None = None,
                    initial: Iterable[Sequence] | None = None, integral_end: bool = False,
                    cap: int = DEFAULT_NODE_CAP) -> list[HeckePath]:
    """All Hecke paths of the given shape from p0, sorted by breakpoints.

    ``initial`` restricts the first direction (needed when the orbit of the
    shape is infinite); ``integral_end`` keeps only endpoints in Y.
    """
    system = Cx.system
    mu = la.normalize(tuple(shape))
    _check_shape(system, mu)
    p0 = la.normalize(tuple(p0))
    _check_base(system, Cx.vertex, p0)
    end = la.normalize(tuple(end)) if end is not None else None
    if initial is None:
        starts = orbit(system, mu)
    else:
        starts = sorted({la.normalize(tuple(x)) for x in initial})
        for xi in starts:
            if not _in_orbit(system, mu, xi):
                raise NotLambdaPath(f"{xi} is not in the orbit of {mu}")
    budget = _Budget(cap)
    out = []

    def finish(pts, dirs, durs, chains):
        q = pts[-1]
        if end is not None and q != end:
            return
        if integral_end and any(not isinstance(c, int) for c in q):
            return
        out.append(HeckePath(mu, Cx, tuple(pts), tuple(dirs), tuple(durs), tuple(chains)))

    def run(p, xi, tau, pts, dirs, durs, chains):
        budget.tick()
        if not _reachable(system, mu, p, tau, end):
            return
        events = _events(system, p, xi, tau, Cx)
        t = Fraction(0)
        pts, dirs, durs, chains = list(pts), list(dirs), list(durs), list(chains)
        for e in events:
            q = _point(p, xi, e)
            links = _fold_closure(system, q, xi, Cx)
            dirs.append(xi)
            durs.append(e - t)
            pts.append(q)
            for eta in sorted(links):
                if eta == xi:
                    continue
                run(q, eta, tau - e, pts, dirs, durs, chains + [_chain(system, q, xi, eta, Cx)])
            chains.append(Chain((xi,), ()))
            t = e
        q = _point(p, xi, tau)
        if end is None or _reachable(system, mu, q, Fraction(0), end):
            finish(pts + [q], dirs + [xi], durs + [tau - t], chains)

    for xi in starts:
        run(p0, xi, Fraction(1), [p0], [], [], [])
    out.sort(key=HeckePath.sort_key)
    return out


# --- decorations and lifting counts ------------------------------------------

def _stabilizer(system: System, mu: tuple) -> list[WeylElt]:
    J = frozenset(i for i in range(1, system.n + 1) if system.pair(i, mu) == 0)
    return list(system.elements(system.longest_element(J).length, J))


def segment_decorations(path: HeckePath, k: int) -> list[LocalChamber]:
    """Positive chambers at p_k whose closure contains the germ of direction ξ_{k+1}."""
    system = path.system
    xi = path.directions[k]
    b = system.dominantize(xi).w.inverse()
    return [LocalChamber(path.breakpoints[k], 1, b * s) for s in _stabilizer(system, path.shape)]


def enumerate_decorations(path: HeckePath) -> list[DecoratedHeckePath]:
    per = [segment_decorations(path, k) for k in range(path.num_segments)]
    return [DecoratedHeckePath(path, tuple(ds)) for ds in cartesian(*per)]


def interior_factor(dp: DecoratedHeckePath, k: int) -> StructurePoly:
    """Folded-gallery sum at the interior breakpoint p_k (1 ≤ k ≤ ℓ-1)."""
    path = dp.path
    Cm = pr_point(path.breakpoints[k], path.base_chamber, sign=-1)
    Cstar = dp.star(k)
    omega = dp.plus(k)
    eta = path.directions[k]
    tilde = chamber_of(path.system, path.breakpoints[k], [la.vscale(-1, eta), interior_vector(omega)], sign=-1)
    return folded_sum(Cm, omega, minimal_gallery_type(Cm, Cstar), tilde)


def segment_lifting_count(path: HeckePath) -> StructurePoly:
    """Number of segment germs retracting onto the path, for one lift of the end."""
    from .galleries import minimal_lifting_count
    system = path.system
    out = StructurePoly.const(1, system)
    l = path.num_segments
    for k in range(1, l):
        q = path.breakpoints[k]
        Cm = pr_point(q, path.base_chamber, sign=-1)
        xi, eta = path.directions[k - 1], path.directions[k]
        target = chamber_of(system, q, [la.vscale(-1, xi), interior_vector(Cm)], sign=-1)
        omega = chamber_of(system, q, [eta, interior_vector(Cm)], sign=1)
        gtype = minimal_gallery_type(Cm, target)
        total = StructurePoly.const(0, system)
        for D in _germ_chambers(system, q, la.vscale(-1, eta), -1):
            total = total + folded_sum(Cm, omega, gtype, D)
        out = out * total
    y = path.end
    Cy = pr_point(y, path.base_chamber, sign=-1)
    xi = path.directions[-1]
    target = chamber_of(system, y, [la.vscale(-1, xi), interior_vector(Cy)], sign=-1)
    return out * minimal_lifting_count(Cy, minimal_gallery_type(Cy, target))


def _germ_chambers(system: System, q: tuple, v: Sequence, sign: int) -> list[LocalChamber]:
    """All chambers of the given sign at q whose closure contains the germ q + εv."""
    dom = system.dominantize(la.vscale(sign, v))
    b = dom.w.inverse()
    J = dom.J
    return [LocalChamber(q, sign, b * s)
            for s in system.elements(system.longest_element(J).length, J)]
