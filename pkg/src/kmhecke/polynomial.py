"""Exact multivariate polynomials in the wall parameters.

Raw parameters are ``Q<i>`` and ``Qp<i>`` (the latter standing for Q'_i).  The
system identifies some of them; every polynomial is stored in canonical
variables only, each named after the least raw parameter of its class
(``Q1 < Q2 < … < Qp1 < Qp2 < …``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as cartesian
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import MissingVariable, SystemMismatch

if TYPE_CHECKING:
    from .root_system import System

__all__ = ["ParamClasses", "StructurePoly", "param_classes", "var_key", "poly_var"]

_VAR = re.compile(r"^Q(p?)(\d+)$")


def var_key(name: str) -> tuple[int, int]:
    m = _VAR.match(name)
    if not m:
        raise ValueError(f"bad variable name {name!r}")
    return (1 if m.group(1) else 0, int(m.group(2)))


@dataclass(frozen=True)
class ParamClasses:
    classes: tuple[frozenset, ...]      # each class sorted by var_key on output
    canon: Mapping[str, str]

    def canonical(self, raw: str) -> str:
        return self.canon[raw]

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.canon.values()), key=var_key))


def param_classes(system: "System") -> ParamClasses:
    """Union-find over {Q_i, Q'_i} with the three identification rules."""
    n = system.n
    raw = [f"Q{i}" for i in range(1, n + 1)] + [f"Qp{i}" for i in range(1, n + 1)]
    parent = {r: r for r in raw}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=var_key)
            parent[hi] = lo

    for i in range(1, n + 1):
        # conjugate simple roots share their parameters
        j = system.simple_orbit[i - 1]
        union(f"Q{i}", f"Q{j}")
        union(f"Qp{i}", f"Qp{j}")
        # α_i(Y) = ℤ forces Q_i = Q'_i
        if math.gcd(*system.root_forms[i - 1]) == 1:
            union(f"Q{i}", f"Qp{i}")
        for k in range(1, n + 1):
            if k != i and system.gcm[i - 1][k - 1] == -1 and system.gcm[k - 1][i - 1] == -1:
                for a in (f"Q{i}", f"Qp{i}"):
                    for b in (f"Q{k}", f"Qp{k}"):
                        union(a, b)
    groups: dict[str, set] = {}
    for r in raw:
        groups.setdefault(find(r), set()).add(r)
    canon = {r: min(groups[find(r)], key=var_key) for r in raw}
    classes = tuple(frozenset(g) for _, g in sorted(groups.items(), key=lambda kv: var_key(min(kv[1], key=var_key))))
    return ParamClasses(classes, canon)


Monomial = tuple  # sorted tuple of (var, exponent)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda t: var_key(t[0])))


def _canonical_mono(m: Monomial) -> Monomial:
    if all(e > 0 for _, e in m) and all(var_key(a[0]) < var_key(b[0]) for a, b in zip(m, m[1:])):
        return m
    return tuple((v, e) for v, e in _mono_mul(m, ()) if e)


def _mono_sort_key(m: Monomial):
    return (-sum(e for _, e in m), [(var_key(v), -e) for v, e in m])


@dataclass(frozen=True)
class StructurePoly:
    """Polynomial with integer coefficients; ``system`` None means a bare constant."""

    terms: tuple  # ((monomial, coeff), ...) sorted, no zero coefficients
    system: "System | None" = None

    @staticmethod
    def from_dict(d: Mapping, system=None) -> "StructurePoly":
        merged: dict = {}
        for m, c in d.items():
            m = _canonical_mono(m)
            merged[m] = merged.get(m, 0) + c
        items = [(m, c) for m, c in merged.items() if c != 0]
        items.sort(key=lambda t: _mono_sort_key(t[0]))
        return StructurePoly(tuple(items), system)

    @staticmethod
    def const(c: int, system=None) -> "StructurePoly":
        return StructurePoly.from_dict({(): c}, system)

    @staticmethod
    def var(system: "System", raw: str) -> "StructurePoly":
        return StructurePoly.from_dict({((system.param_classes.canonical(raw), 1),): 1}, system)

    def _coerce(self, other) -> "StructurePoly":
        if isinstance(other, int):
            return StructurePoly.const(other, self.system)
        if not isinstance(other, StructurePoly):
            return NotImplemented
        return other

    def _join(self, other: "StructurePoly"):
        if self.system is None:
            return other.system
        if other.system is None or other.system == self.system:
            return self.system
        raise SystemMismatch(f"{self.system.name} vs {other.system.name}")

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        sysm = self._join(other)
        d = self.as_dict()
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return StructurePoly.from_dict(d, sysm)

    __radd__ = __add__

    def __neg__(self):
        return StructurePoly(tuple((m, -c) for m, c in self.terms), self.system)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        sysm = self._join(other)
        d: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = _mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return StructurePoly.from_dict(d, sysm)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = StructurePoly.const(1, self.system)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = StructurePoly.const(other)
        if not isinstance(other, StructurePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def variables(self) -> set[str]:
        return {v for m, _ in self.terms for v, _ in m}

    def specialize(self, assignment: Mapping[str, int | Fraction]):
        total = Fraction(0)
        for m, c in self.terms:
            val = Fraction(c)
            for v, e in m:
                if v not in assignment:
                    raise MissingVariable(v)
                val *= Fraction(assignment[v]) ** e
            total += val
        return total.numerator if total.denominator == 1 else total

    def at_one(self):
        return self.specialize({v: 1 for v in self.variables()})

    def to_shifted(self) -> dict:
        """Coefficients in the basis of monomials in (Q_c - 1).

        Keys are monomials in the same variable names, read as Q_c - 1.
        """
        out: dict = {}
        for m, c in self.terms:
            # Q^e = Σ_k binom(e,k) (Q-1)^k
            choices = [[(v, k, math.comb(e, k)) for k in range(e + 1)] for v, e in m]
            for pick in cartesian(*choices):
                coeff = c
                mono = []
                for v, k, b in pick:
                    coeff *= b
                    if k:
                        mono.append((v, k))
                key = _canonical_mono(tuple(mono))
                out[key] = out.get(key, 0) + coeff
        return {k: v for k, v in sorted(out.items(), key=lambda t: _mono_sort_key(t[0])) if v}

    def is_shifted_positive(self) -> bool:
        return all(c >= 0 for c in self.to_shifted().values())

    def to_json(self) -> list[dict]:
        return [{"exp": {v: e for v, e in m}, "c": c} for m, c in self.terms]

    @staticmethod
    def from_json(data: Iterable[Mapping], system=None) -> "StructurePoly":
        d: dict = {}
        for t in data:
            m = tuple(sorted(((v, int(e)) for v, e in t["exp"].items() if e), key=lambda x: var_key(x[0])))
            d[m] = d.get(m, 0) + int(t["c"])
        return StructurePoly.from_dict(d, system)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {sgn} {s}" for sgn, s in parts[1:])

    def __repr__(self) -> str:
        return f"StructurePoly({self})"


def poly_var(system: "System", raw: str) -> StructurePoly:
    return StructurePoly.var(system, raw)
