"""Randomized invariants across presets."""

import itertools
from fractions import Fraction

from hypothesis import assume, given, settings, strategies as st

from kmhecke.apartment import LocalChamber, codistance, star, w_distance, wall_parameter
from kmhecke.galleries import folded_end_sums, minimal_lifting_count
from kmhecke.oracle import affine_coxeter, im_product
from kmhecke.polynomial import StructurePoly
from kmhecke.root_system import Cone, preset
from kmhecke.structure_constants import product

from conftest import elt

NAMES = ["a1", "a2", "a1xa1", "a1_affine", "hyp23", "a2_affine"]
systems = st.sampled_from(NAMES).map(preset)
FAST = settings(max_examples=40, deadline=None)


@st.composite
def weyl(draw, system, max_len=6):
    word = draw(st.lists(st.integers(1, system.n), max_size=max_len))
    return system.from_word(word)


@st.composite
def system_and_weyl(draw):
    S = draw(systems)
    return S, draw(weyl(S))


vec = st.lists(st.fractions(-5, 5, max_denominator=4), min_size=4, max_size=4)


@FAST
@given(system_and_weyl(), vec)
def test_reflection_involution(sw, v):
    S, _ = sw
    v = tuple(v[: S.d])
    for i in range(1, S.n + 1):
        r = S.reflection(i)
        assert S.act(r, S.act(r, v)) == tuple(Fraction(x) for x in v)


@FAST
@given(system_and_weyl(), st.integers(1, 2))
def test_length_changes_by_one(sw, i):
    S, w = sw
    assume(i <= S.n)
    assert abs((w * S.reflection(i)).length - w.length) == 1
    assert len(S.inversion_set(w)) == w.length


@FAST
@given(system_and_weyl(), st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_dominantize_minimal(sw, lam):
    S, _ = sw
    lam = tuple(lam[: S.d])
    dom = S.dominantize(lam)
    assume(hasattr(dom, "w"))
    assert S.act(dom.w, lam) == dom.lam
    word = dom.w.word
    # reading right to left, every proper prefix of the walk leaves λ non-dominant
    for k in range(len(word)):
        part = S.from_word(word[len(word) - k:])
        v = S.act(part, lam)
        assert any(S.pair(i, v) < 0 for i in range(1, S.n + 1))


@FAST
@given(systems, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_v0_classification(S, lam):
    lam = tuple(lam[: S.d])
    zero = all(S.pair(i, lam) == 0 for i in range(1, S.n + 1))
    assert (S.classify_cone(lam) is Cone.V0) == zero


@st.composite
def w_plus(draw, system):
    """An element λ·w with λ in the Tits cone (integral)."""
    lam = draw(st.sampled_from(_cone_points(system)))
    return elt(system, lam, draw(weyl(system, 3)).word)


_POINTS: dict = {}


def _cone_points(S):
    if S.name not in _POINTS:
        box = itertools.product(range(-2, 3), repeat=S.d)
        _POINTS[S.name] = sorted(p for p in box if S.classify_cone(p) in (Cone.V0, Cone.INTERIOR))
    return _POINTS[S.name]


@FAST
@given(st.data())
def test_chasles_and_star(data):
    S = data.draw(systems)
    C = LocalChamber(tuple(0 for _ in range(S.d)), 1, data.draw(weyl(S, 3)))
    g, h = data.draw(w_plus(S)), data.draw(w_plus(S))
    Cy = star(C, g)
    Cz = star(Cy, h)
    assert w_distance(C, Cy) == g
    assert w_distance(C, Cz) == w_distance(C, Cy) * w_distance(Cy, Cz)


@FAST
@given(st.data())
def test_codistance_symmetry(data):
    S = data.draw(systems)
    z = tuple(0 for _ in range(S.d))
    C = LocalChamber(z, -1, data.draw(weyl(S)))
    D = LocalChamber(z, 1, data.draw(weyl(S)))
    assert codistance(C, D) == codistance(D, C).inverse()


@FAST
@given(st.data())
def test_wall_parameter_invariance(data):
    S = data.draw(systems)
    i = data.draw(st.integers(1, S.n))
    k = data.draw(st.integers(-4, 4))
    w = data.draw(weyl(S))
    beta = S.simple_root(i)
    assert wall_parameter(S.act_root(w, beta), k, S) == wall_parameter(beta, k, S)
    y = tuple(data.draw(st.integers(-3, 3)) for _ in range(S.d))
    assert wall_parameter(beta, k + beta(y), S) == wall_parameter(beta, k, S)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_partition_identity_random(data):
    S = data.draw(systems)
    half = Fraction(1, 2)
    z = data.draw(st.sampled_from([tuple(0 for _ in range(S.d)), tuple(half for _ in range(S.d))]))
    start = LocalChamber(z, data.draw(st.sampled_from([1, -1])), data.draw(weyl(S, 3)))
    omega = LocalChamber(z, data.draw(st.sampled_from([1, -1])), data.draw(weyl(S, 3)))
    word = S.from_word(data.draw(st.lists(st.integers(1, S.n), max_size=4))).word
    total = sum(folded_end_sums(start, omega, word).values(), StructurePoly.const(0, S))
    assert total == minimal_lifting_count(start, word)


@st.composite
def oracle_pair(draw):
    S = draw(st.sampled_from(["a1", "a2", "a1xa1"]).map(preset))
    cox = affine_coxeter(S)
    labels = [g.label for g in cox.gens]
    w = cox.element(draw(st.lists(st.sampled_from(labels), max_size=5)))
    v = cox.element(draw(st.lists(st.sampled_from(labels), max_size=5)))
    return w, v


@settings(max_examples=40, deadline=None)
@given(oracle_pair())
def test_engine_matches_oracle(pair):
    w, v = pair
    res = product(w, v)
    assert res == im_product(w, v)
    assert {u: p.at_one() for u, p in res.terms.items() if p.at_one()} == {w * v: 1}
    assert all(p.is_shifted_positive() for p in res.terms.values())


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_kac_moody_thin_and_positive(data):
    S = data.draw(st.sampled_from(["a1_affine", "hyp23"]).map(preset))
    w, v = data.draw(w_plus(S)), data.draw(w_plus(S))
    res = product(w, v)
    assert {u: p.at_one() for u, p in res.terms.items() if p.at_one()} == {w * v: 1}
    assert all(p.is_shifted_positive() for p in res.terms.values())
