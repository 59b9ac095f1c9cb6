"""Generalized Cartan matrices, their realizations and the vectorial Weyl group.

Coordinates are fixed so that the cocharacter lattice Y is exactly ℤ^d: a
vector of V is a tuple of ``int``/``Fraction`` of length d, a covector is a
tuple of the same length acting by the dot product.  Simple indices are
1-based throughout (words look like ``[1, 2, 1]``).
"""

from __future__ import annotations

import enum
import itertools
import os
import random
from collections import deque
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from . import _linalg as la
from .errors import BadGCM, NotFinite, NotFree, NotSpherical, PairingMismatch, YNotBetween

__all__ = [
    "System", "WeylElt", "RealRoot", "Cone", "Dominant", "Undecided",
    "build_system", "preset", "PRESETS", "DEFAULT_CAP",
    "chosen_word", "alternative_words",
]

DEFAULT_CAP = int(os.environ.get("KMHECKE_CONE_CAP", 10_000))   # dominance-walk steps

@dataclass
class WordChoices:
    rng: random.Random
    calls: int = 0
    changed: int = 0      # draws that differ from the canonical word


_word_rng: ContextVar = ContextVar("word_rng", default=None)


@contextmanager
def alternative_words(seed: int):
    """Within the block, every "fixed reduced word" choice is drawn at random.

    Yields a :class:`WordChoices` recording how many draws were non-canonical.
    """
    choices = WordChoices(random.Random(seed))
    token = _word_rng.set(choices)
    try:
        yield choices
    finally:
        _word_rng.reset(token)


def choices_randomized() -> bool:
    return _word_rng.get() is not None


def chosen_word(w: "WeylElt") -> tuple[int, ...]:
    """A reduced word for w: the canonical one, or a random one under alternative_words."""
    choices = _word_rng.get()
    if choices is None:
        return w.word
    rng = choices.rng
    system = w.system
    out = []
    cur = w.inverse()
    for _ in range(w.length):
        i = rng.choice([i for i in range(1, system.n + 1) if not system._image_positive(cur, i)])
        out.append(i)
        cur = cur * system.reflection(i)
    choices.calls += 1
    choices.changed += tuple(out) != w.word
    return tuple(out)


def _is_int(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


@dataclass(frozen=True)
class WeylElt:
    """Element of W^v, stored as its integer action matrix on ℤ^d."""

    mat: tuple
    inv: tuple = field(compare=False, repr=False)
    system: "System" = field(compare=False, repr=False)

    def __mul__(self, other: "WeylElt") -> "WeylElt":
        return WeylElt(la.matmul(self.mat, other.mat), la.matmul(other.inv, self.inv), self.system)

    def inverse(self) -> "WeylElt":
        return WeylElt(self.inv, self.mat, self.system)

    def act(self, v: Sequence) -> tuple:
        return la.normalize(la.matvec(self.mat, v))

    def act_form(self, f: Sequence) -> tuple:
        """The covector ``f ∘ w^{-1}``, i.e. w acting on V*."""
        return la.covec_mat(f, self.inv)

    @cached_property
    def word(self) -> tuple[int, ...]:
        return self.system.length_reduced(self)[1]

    @property
    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return self.mat == la.identity(len(self.mat))

    def __repr__(self) -> str:
        return "W" + (".".join(f"s{i}" for i in self.word) if self.word else "e")


@dataclass(frozen=True)
class RealRoot:
    """A real root; equality is decided by the simple-root coordinates."""

    coords: tuple
    form: tuple = field(compare=False)
    coroot: tuple = field(compare=False)
    orbit: int = field(compare=False)

    def __call__(self, v: Sequence):
        return la.dot(self.form, v)

    def __neg__(self) -> "RealRoot":
        return RealRoot(tuple(-c for c in self.coords), tuple(-c for c in self.form),
                        tuple(-c for c in self.coroot), self.orbit)

    @property
    def is_positive(self) -> bool:
        return sum(self.coords) > 0

    def positive(self) -> "RealRoot":
        return self if self.is_positive else -self

    def __repr__(self) -> str:
        return f"Root{self.coords}"


class Cone(enum.Enum):
    INTERIOR = "Interior"
    V0 = "V0"
    NON_SPHERICAL_BOUNDARY = "NonSphericalBoundary"
    NEGATIVE = "NegativeCone"
    OUTSIDE = "OutsideTitsCone"      # certified by an imaginary root
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Dominant:
    lam: tuple          # λ^{++}
    w: WeylElt          # minimal w_λ with w_λ·λ = λ^{++}
    J: frozenset        # {i : α_i(λ^{++}) = 0}


@dataclass(frozen=True)
class Undecided:
    cap: int


@dataclass(frozen=True)
class System:
    n: int
    gcm: tuple
    d: int
    coroots: tuple
    root_forms: tuple
    name: str = "custom"
    _memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # --- derived data -------------------------------------------------------

    @cached_property
    def _dual(self) -> list[tuple]:
        return la.solve_dual(self.root_forms)

    @cached_property
    def _height_vec(self) -> tuple:
        return la.normalize(tuple(sum(h[k] for h in self._dual) for k in range(self.d)))

    @cached_property
    def param_classes(self):
        from .polynomial import param_classes
        return param_classes(self)

    @cached_property
    def simple_orbit(self) -> tuple[int, ...]:
        """Least index of a simple root conjugate to α_i (entry i-1)."""
        parent = list(range(self.n + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.gcm[i][j] == -1 and self.gcm[j][i] == -1:
                    a, b = find(i + 1), find(j + 1)
                    parent[max(a, b)] = min(a, b)
        return tuple(find(i) for i in range(1, self.n + 1))

    # --- group elements -----------------------------------------------------

    def identity(self) -> WeylElt:
        e = la.identity(self.d)
        return WeylElt(e, e, self)

    def reflection(self, i: int) -> WeylElt:
        key = ("r", i)
        if key not in self._memo:
            self._memo[key] = self.reflection_in(self.simple_root(i))
        return self._memo[key]

    def reflection_in(self, beta: RealRoot) -> WeylElt:
        m = tuple(tuple((1 if a == b else 0) - beta.coroot[a] * beta.form[b]
                        for b in range(self.d)) for a in range(self.d))
        return WeylElt(m, m, self)

    def from_word(self, word: Iterable[int]) -> WeylElt:
        w = self.identity()
        for i in word:
            w = w * self.reflection(i)
        return w

    def act(self, w: WeylElt, v: Sequence) -> tuple:
        return w.act(v)

    # --- roots ----------------------------------------------------------------

    def simple_root(self, i: int) -> RealRoot:
        coords = tuple(1 if k == i - 1 else 0 for k in range(self.n))
        return RealRoot(coords, tuple(self.root_forms[i - 1]), tuple(self.coroots[i - 1]),
                        self.simple_orbit[i - 1])

    def root_coords(self, form: Sequence) -> tuple:
        return la.normalize(tuple(la.dot(form, h) for h in self._dual))

    def act_root(self, w: WeylElt, beta: RealRoot) -> RealRoot:
        form = w.act_form(beta.form)
        return RealRoot(self.root_coords(form), form, w.act(beta.coroot), beta.orbit)

    def _image_positive(self, w: WeylElt, i: int) -> bool:
        """Whether w(α_i) is a positive root."""
        return la.dot(self.root_forms[i - 1], la.matvec(w.inv, self._height_vec)) > 0

    def length_reduced(self, w: WeylElt) -> tuple[int, tuple[int, ...]]:
        key = ("len", w.mat)
        hit = self._memo.get(key)
        if hit is None:
            # greedy smallest left descent gives the lexicographically least word
            out = []
            cur = w.inverse()
            while True:
                i = next((i for i in range(1, self.n + 1) if not self._image_positive(cur, i)), None)
                if i is None:
                    break
                out.append(i)
                cur = cur * self.reflection(i)
            word = tuple(out)
            hit = (len(word), word)
            self._memo[key] = hit
        return hit

    def is_right_descent(self, w: WeylElt, i: int) -> bool:
        """ℓ(w r_i) < ℓ(w)."""
        return not self._image_positive(w, i)

    def inversion_set(self, w: WeylElt) -> frozenset:
        out = set()
        prefix = self.identity()
        for i in w.word:
            out.add(self.act_root(prefix, self.simple_root(i)))
            prefix = prefix * self.reflection(i)
        return frozenset(out)

    def elements(self, max_length: int, J: Iterable[int] | None = None) -> Iterator[WeylElt]:
        """All elements of W^v(J) of length ≤ max_length, by increasing length."""
        gens = sorted(J) if J is not None else list(range(1, self.n + 1))
        seen = {self.identity().mat}
        layer = [self.identity()]
        for _ in range(max_length + 1):
            nxt = []
            for w in layer:
                yield w
                for i in gens:
                    if self.is_right_descent(w, i):
                        continue
                    u = w * self.reflection(i)
                    if u.mat not in seen:
                        seen.add(u.mat)
                        nxt.append(u)
            layer = nxt
            if not layer:
                return

    def positive_roots(self, max_height: int) -> list[RealRoot]:
        """Positive real roots of height ≤ max_height (orbit closure)."""
        out = {self.simple_root(i) for i in range(1, self.n + 1)}
        queue = deque(out)
        while queue:
            b = queue.popleft()
            for i in range(1, self.n + 1):
                c = self.act_root(self.reflection(i), b)
                if c.is_positive and sum(c.coords) <= max_height and c not in out:
                    out.add(c)
                    queue.append(c)
        return sorted(out, key=lambda r: (sum(r.coords), r.coords))

    # --- dominance and cones ------------------------------------------------

    def pair(self, i: int, v: Sequence):
        return la.dot(self.root_forms[i - 1], v)

    def dominantize(self, lam: Sequence, cap: int = DEFAULT_CAP) -> Dominant | Undecided:
        lam = la.normalize(tuple(lam))
        key = ("dom", lam, cap)
        if key in self._memo:
            return self._memo[key]
        w = self.identity()
        cur = lam
        res: Dominant | Undecided | None = None
        for _ in range(cap + 1):
            i = next((i for i in range(1, self.n + 1) if self.pair(i, cur) < 0), None)
            if i is None:
                J = frozenset(i for i in range(1, self.n + 1) if self.pair(i, cur) == 0)
                res = Dominant(cur, w, J)
                break
            cur = self.reflection(i).act(cur)
            w = self.reflection(i) * w
        if res is None:
            res = Undecided(cap)
        self._memo[key] = res
        return res

    def classify_cone(self, lam: Sequence, cap: int = DEFAULT_CAP) -> Cone:
        if all(self.pair(i, lam) == 0 for i in range(1, self.n + 1)):
            return Cone.V0
        outside = self._certified_outside(lam)
        if not outside:
            dom = self.dominantize(lam, cap)
            if isinstance(dom, Dominant):
                return Cone.INTERIOR if self.is_finite_type(dom.J) else Cone.NON_SPHERICAL_BOUNDARY
        neg = la.vscale(-1, lam)
        if not self._certified_outside(neg) and isinstance(self.dominantize(neg, cap), Dominant):
            return Cone.NEGATIVE
        return Cone.OUTSIDE if outside else Cone.UNDECIDED

    def _certified_outside(self, lam: Sequence) -> bool:
        """Positive imaginary roots are ≥ 0 on the Tits cone; an affine δ is > 0 off V0."""
        for c, affine in self._imaginary_certificates():
            val = sum(ci * self.pair(i, lam) for i, ci in enumerate(c, start=1))
            if val < 0 or (val == 0 and affine):
                return True
        return False

    def _imaginary_certificates(self, bound: int = 3) -> list[tuple[tuple, bool]]:
        """Small c ≥ 0 with Σ c_i α_i in the fundamental imaginary set.

        The flag marks the null root of an indecomposable affine matrix.
        """
        key = ("imag", bound)
        if key in self._memo:
            return self._memo[key]
        n = self.n
        out = []
        if n <= 6:
            for c in itertools.product(range(bound + 1), repeat=n):
                supp = [i for i in range(n) if c[i]]
                if not supp or not self._connected(supp):
                    continue
                Ac = [sum(self.gcm[j][i] * c[i] for i in range(n)) for j in range(n)]
                if all(x <= 0 for x in Ac):
                    affine = (len(supp) == n and all(x == 0 for x in Ac)
                              and self.is_finite_type(range(1, n)))
                    out.append((c, affine))
        self._memo[key] = out
        return out

    def _connected(self, supp: list[int]) -> bool:
        seen, stack = {supp[0]}, [supp[0]]
        while stack:
            i = stack.pop()
            for j in supp:
                if j not in seen and self.gcm[i][j] != 0:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == len(supp)

    def is_spherical(self, lam: Sequence, cap: int = DEFAULT_CAP) -> bool:
        """λ ∈ T° (including λ with finite-type stabilizer in the center)."""
        dom = self.dominantize(lam, cap)
        return isinstance(dom, Dominant) and self.is_finite_type(dom.J)

    def is_finite_type(self, J: Iterable[int]) -> bool:
        J = sorted(J)
        return all(la.det([[self.gcm[a - 1][b - 1] for b in sub] for a in sub]) > 0
                   for sub in _subsets(J))

    def longest_element(self, J: Iterable[int]) -> WeylElt:
        J = frozenset(J)
        if not self.is_finite_type(J):
            raise NotFinite(f"W^v({sorted(J)}) is infinite")
        key = ("w0", J)
        if key not in self._memo:
            w = self.identity()
            while True:
                i = next((i for i in sorted(J) if not self.is_right_descent(w, i)), None)
                if i is None:
                    break
                w = w * self.reflection(i)
            self._memo[key] = w
        return self._memo[key]

    def w_lambda_plus(self, lam: Sequence, cap: int = DEFAULT_CAP) -> WeylElt:
        dom = self.dominantize(lam, cap)
        if not isinstance(dom, Dominant) or not self.is_finite_type(dom.J):
            raise NotSpherical(f"{tuple(lam)} is not spherical")
        return self.longest_element(dom.J) * dom.w


def _subsets(J: list[int]) -> Iterator[list[int]]:
    for mask in range(1, 1 << len(J)):
        yield [J[k] for k in range(len(J)) if mask >> k & 1]


def build_system(config: dict) -> System:
    """Validate a configuration dict (keys n, gcm, d, coroots, roots[, name])."""
    n = int(config["n"])
    M = tuple(tuple(int(x) for x in row) for row in config["gcm"])
    d = int(config["d"])
    if len(M) != n or any(len(r) != n for r in M):
        raise BadGCM("gcm must be n×n")
    for i in range(n):
        if M[i][i] != 2:
            raise BadGCM(f"M[{i + 1}][{i + 1}] must be 2")
        for j in range(n):
            if i != j and (M[i][j] > 0 or (M[i][j] == 0) != (M[j][i] == 0)):
                raise BadGCM(f"off-diagonal entries at ({i + 1},{j + 1}) violate the axioms")
    raw_co, raw_ro = config["coroots"], config["roots"]
    if len(raw_co) != n or len(raw_ro) != n or any(len(v) != d for v in [*raw_co, *raw_ro]):
        raise YNotBetween("need n coroots and n roots of length d")
    for v in [*raw_co, *raw_ro]:
        if not all(_is_int(Fraction(x)) for x in v):
            raise YNotBetween(f"{v} is not integral")
    coroots = tuple(tuple(int(x) for x in v) for v in raw_co)
    roots = tuple(tuple(int(x) for x in v) for v in raw_ro)
    if la.rank(coroots) != n:
        raise NotFree("coroots are linearly dependent")
    if la.rank(roots) != n:
        raise NotFree("roots are linearly dependent")
    for i in range(n):
        for j in range(n):
            if la.dot(roots[j], coroots[i]) != M[i][j]:
                raise PairingMismatch(f"α_{j + 1}(α_{i + 1}^∨) ≠ M[{i + 1}][{j + 1}]")
    return System(n, M, d, coroots, roots, str(config.get("name", "custom")))


PRESETS: dict[str, dict] = {
    "a1": dict(name="a1", n=1, gcm=[[2]], d=1, coroots=[[1]], roots=[[2]]),
    "a2": dict(name="a2", n=2, gcm=[[2, -1], [-1, 2]], d=2,
               coroots=[[1, 0], [0, 1]], roots=[[2, -1], [-1, 2]]),
    "a1xa1": dict(name="a1xa1", n=2, gcm=[[2, 0], [0, 2]], d=2,
                  coroots=[[1, 0], [0, 1]], roots=[[2, 0], [0, 2]]),
    "a1_affine": dict(name="a1_affine", n=2, gcm=[[2, -2], [-2, 2]], d=3,
                      coroots=[[1, 0, 0], [0, 1, 0]], roots=[[2, -2, 0], [-2, 2, 1]]),
    "hyp23": dict(name="hyp23", n=2, gcm=[[2, -3], [-3, 2]], d=2,
                  coroots=[[1, 0], [0, 1]], roots=[[2, -3], [-3, 2]]),
    # affine A2: the smallest Kac–Moody preset whose W^v has braid relations
    "a2_affine": dict(name="a2_affine", n=3, gcm=[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], d=4,
                      coroots=[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
                      roots=[[2, -1, -1, 0], [-1, 2, -1, 0], [-1, -1, 2, 1]]),
}

_PRESET_CACHE: dict[str, System] = {}


def preset(name: str) -> System:
    if name not in _PRESET_CACHE:
        _PRESET_CACHE[name] = build_system(PRESETS[name])
    return _PRESET_CACHE[name]
