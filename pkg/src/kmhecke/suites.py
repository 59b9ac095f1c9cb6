"""Named element suites and the verification checks run over them.

A suite is a deterministic list of W^{+g} elements for one preset.  Every
check returns a :class:`Report`; the CLI turns a failing report into exit 3.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .apartment import AffineWeylElt, LocalChamber, is_classical
from .galleries import folded_sum, folded_end_sums, minimal_lifting_count
from .polynomial import StructurePoly
from .root_system import Cone, System, alternative_words, preset
from .structure_constants import product

__all__ = [
    "SUITE_VERSION", "Report", "suite_elements", "suite_names", "ProductLog",
    "check_oracle", "check_assoc", "check_q1", "check_positivity", "check_partition",
    "check_choices", "check_support", "check_units", "CHECKS",
]

SUITE_VERSION = 1


@dataclass
class Report:
    kind: str
    system: str
    suite: str
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def to_json(self) -> dict:
        return {"kind": self.kind, "system": self.system, "suite": self.suite,
                "version": SUITE_VERSION, "checked": self.checked, "ok": self.ok,
                "failures": self.failures[:50], "failure_count": len(self.failures),
                "notes": self.notes}


# --- element lists ---------------------------------------------------------------

def _oracle_ball(system: System, max_len: int) -> list[AffineWeylElt]:
    from .oracle import affine_coxeter
    cox = affine_coxeter(system)
    labels = [g.label for g in cox.gens]
    zero = tuple(0 for _ in range(system.d))
    e = AffineWeylElt(zero, system.identity())
    seen = {e: ()}
    layer = [e]
    for _ in range(max_len):
        nxt = []
        for g in layer:
            for lab in labels:
                if cox.is_descent(g, lab):
                    continue
                h = g * cox.by_label[lab].elt
                if h not in seen:
                    seen[h] = seen[g] + (lab,)
                    nxt.append(h)
        layer = nxt
    return sorted(seen, key=lambda g: (len(seen[g]), seen[g]))


def _grid(system: System, lams: Iterable, max_wlen: int) -> list[AffineWeylElt]:
    out = []
    for lam in lams:
        if system.classify_cone(lam) not in (Cone.V0, Cone.INTERIOR):
            continue
        for w in system.elements(max_wlen):
            out.append(AffineWeylElt(tuple(lam), w))
    return out


# (preset, suite) -> element builder
_SUITES: dict[tuple[str, str], Callable[[System], list]] = {
    ("a1", "full"): lambda s: _oracle_ball(s, 8),
    ("a1", "small"): lambda s: _oracle_ball(s, 3),
    ("a2", "full"): lambda s: _oracle_ball(s, 4),
    ("a2", "small"): lambda s: _oracle_ball(s, 2),
    ("a1xa1", "full"): lambda s: _oracle_ball(s, 3),
    ("a1xa1", "small"): lambda s: _oracle_ball(s, 2),
    # λ-parts 0, d, d + α_1^∨, 2d with d the third basis vector
    ("a1_affine", "full"): lambda s: _grid(s, [(0, 0, 0), (0, 0, 1), (1, 0, 1), (0, 0, 2)], 2),
    ("a1_affine", "small"): lambda s: _grid(s, [(0, 0, 0), (0, 0, 1)], 1),
    ("hyp23", "full"): lambda s: _grid(s, [(0, 0), (-1, -1), (-2, -1)], 2),
    ("hyp23", "small"): lambda s: _grid(s, [(0, 0), (-1, -1)], 1),
    ("a2_affine", "full"): lambda s: _grid(s, [(0, 0, 0, 0), (0, 0, 0, 1)], 2),
    ("a2_affine", "small"): lambda s: _grid(s, [(0, 0, 0, 0), (0, 0, 0, 1)], 1),
}


def suite_names(system_name: str) -> list[str]:
    return sorted(n for (s, n) in _SUITES if s == system_name)


def suite_elements(system: System, suite: str = "full") -> list[AffineWeylElt]:
    build = _SUITES.get((system.name, suite))
    if build is None:
        if suite != "full" and suite != "small":
            raise KeyError(f"unknown suite {suite!r} for {system.name}")
        # custom systems: translation part 0 only
        zero = tuple(0 for _ in range(system.d))
        return _grid(system, [zero], 2 if suite == "full" else 1)
    return build(system)


# --- product bookkeeping --------------------------------------------------------

class ProductLog:
    """Computes products once and remembers every one it handed out."""

    def __init__(self, threads: int = 1):
        self.seen: dict = {}
        self.threads = max(1, threads)

    def __call__(self, w: AffineWeylElt, v: AffineWeylElt):
        key = (w, v)
        if key not in self.seen:
            self.seen[key] = product(w, v)
        return self.seen[key]

    def many(self, pairs: list) -> list:
        pairs = list(pairs)
        if self.threads > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                results = list(pool.map(lambda p: product(*p), pairs))
            for p, r in zip(pairs, results):
                self.seen.setdefault(p, r)
        return [self(*p) for p in pairs]

    def all_pairs(self, elements: list) -> list:
        return self.many(itertools.product(elements, elements))


def _mul(log: ProductLog, x: dict, y: dict) -> dict:
    out: dict = {}
    for a, pa in x.items():
        for b, pb in y.items():
            for u, p in log(a, b).terms.items():
                out[u] = out.get(u, StructurePoly.const(0, u.system)) + pa * pb * p
    return {u: p for u, p in out.items() if not p.is_zero()}


# --- checks -------------------------------------------------------------------------

def check_oracle(system: System, elements: list, log: ProductLog, suite: str = "") -> Report:
    from .oracle import im_product
    rep = Report("oracle", system.name, suite)
    log.all_pairs(elements)
    for w, v in itertools.product(elements, elements):
        rep.checked += 1
        if log(w, v) != im_product(w, v):
            rep.fail(f"{w!r} * {v!r}: engine {log(w, v)} vs oracle {im_product(w, v)}")
    return rep


def check_assoc(system: System, elements: list, log: ProductLog, suite: str = "") -> Report:
    rep = Report("assoc", system.name, suite)
    one = StructurePoly.const(1, system)
    log.all_pairs(elements)
    for w, v, t in itertools.product(elements, elements, elements):
        rep.checked += 1
        left = _mul(log, log(w, v).terms, {t: one})
        right = _mul(log, {w: one}, log(v, t).terms)
        if left != right:
            rep.fail(f"({w!r}, {v!r}, {t!r})")
    return rep


def _logged(log: ProductLog, elements: list) -> list:
    if not log.seen:
        log.all_pairs(elements)
    return sorted(log.seen.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))


def check_q1(system: System, elements: list, log: ProductLog, suite: str = "") -> Report:
    rep = Report("q1", system.name, suite)
    for (w, v), res in _logged(log, elements):
        wv = w * v
        for u, p in res.terms.items():
            rep.checked += 1
            if p.at_one() != (1 if u == wv else 0):
                rep.fail(f"{w!r} * {v!r} at {u!r}: {p} -> {p.at_one()}")
        if wv not in res.terms:
            rep.fail(f"{w!r} * {v!r}: thin product {wv!r} missing")
    return rep


def check_positivity(system: System, elements: list, log: ProductLog, suite: str = "") -> Report:
    rep = Report("positivity", system.name, suite)
    for (w, v), res in _logged(log, elements):
        for u, p in res.terms.items():
            rep.checked += 1
            if not p.is_shifted_positive():
                rep.fail(f"{w!r} * {v!r} at {u!r}: {p}")
    return rep


def check_support(system: System, elements: list, log: ProductLog, suite: str = "") -> Report:
    rep = Report("support", system.name, suite)
    for (w, v), res in _logged(log, elements):
        both = all(system.classify_cone(e.lam) is Cone.INTERIOR for e in (w, v))
        for u in res.terms:
            rep.checked += 1
            cone = system.classify_cone(u.lam)
            if both and not system.is_spherical(u.lam):
                rep.fail(f"{w!r} * {v!r}: non-spherical {u!r}")
            if cone not in (Cone.INTERIOR, Cone.V0):
                rep.fail(f"{w!r} * {v!r}: {u!r} outside W^+g")
    return rep


def check_units(system: System, elements: list, log: ProductLog, suite: str = "") -> Report:
    rep = Report("units", system.name, suite)
    e = AffineWeylElt(tuple(0 for _ in range(system.d)), system.identity())
    one = StructurePoly.const(1, system)
    for x in elements:
        rep.checked += 2
        if log(e, x).terms != {x: one}:
            rep.fail(f"e * {x!r} = {log(e, x)}")
        if log(x, e).terms != {x: one}:
            rep.fail(f"{x!r} * e = {log(x, e)}")
    return rep


def check_choices(system: System, elements: list, log: ProductLog, suite: str = "",
                  seed: int = 0, rounds: int = 3) -> Report:
    rep = Report("choices", system.name, suite, notes={"seed": seed, "rounds": rounds})
    base = {p: log(*p) for p in itertools.product(elements, elements)}
    rep.notes["non_canonical_choices"] = 0
    for r in range(rounds):
        with alternative_words(seed + r) as choices:
            for (w, v), res in base.items():
                rep.checked += 1
                again = product(w, v)
                if again != res:
                    rep.fail(f"round {r}: {w!r} * {v!r}: {again} vs {res}")
        rep.notes["non_canonical_choices"] += choices.changed
    return rep


def _partition_vertices(system: System) -> list[tuple]:
    zero = tuple(0 for _ in range(system.d))
    extra = {"a1": (Fraction(1, 4),), "a2": (Fraction(1, 2), 0),
             "a1xa1": (Fraction(1, 2), 0), "a1_affine": (Fraction(1, 2), 0, Fraction(1, 2)),
             "hyp23": (Fraction(1, 2), 0),
             "a2_affine": (Fraction(1, 2), 0, 0, Fraction(1, 2))}.get(system.name)
    return [zero] + ([extra] if extra is not None else [])


def _reduced_words(system: System, max_len: int) -> list[tuple]:
    words = {()}
    layer = [()]
    for _ in range(max_len):
        nxt = []
        for wd in layer:
            for i in range(1, system.n + 1):
                cand = wd + (i,)
                if system.from_word(cand).length == len(cand) and cand not in words:
                    words.add(cand)
                    nxt.append(cand)
        layer = nxt
    return sorted(words, key=lambda w: (len(w), w))


def check_partition(system: System, elements: list | None = None, log: ProductLog | None = None,
                    suite: str = "", max_type: int = 4, max_dir: int = 2) -> Report:
    """Σ over folded galleries of their monomials equals the minimal lifting count."""
    rep = Report("partition", system.name, suite)
    signs = (1, -1)
    dirs = list(system.elements(max_dir))
    types = _reduced_words(system, max_type)
    for z in _partition_vertices(system):
        chambers = [LocalChamber(z, s, d) for s in signs for d in dirs]
        for start, omega, gtype in itertools.product(chambers, chambers, types):
            rep.checked += 1
            total = sum(folded_end_sums(start, omega, gtype).values(), StructurePoly.const(0, system))
            if total != minimal_lifting_count(start, gtype):
                rep.fail(f"at {z}: start {start!r}, Ω {omega!r}, type {gtype}")
    return rep


CHECKS = {
    "oracle": check_oracle, "assoc": check_assoc, "q1": check_q1, "positivity": check_positivity,
    "partition": check_partition, "choices": check_choices, "support": check_support,
    "units": check_units,
}
