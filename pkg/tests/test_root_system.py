from fractions import Fraction

import pytest

from kmhecke.errors import BadGCM, NotFree, NotFinite, PairingMismatch, YNotBetween
from kmhecke.root_system import Cone, Dominant, build_system, preset, chosen_word, alternative_words


def test_presets_validate(A1, AFF):
    assert A1.n == 1 and A1.d == 1 and A1.coroots == ((1,),)
    assert AFF.d == 3 and AFF.gcm == ((2, -2), (-2, 2))


def test_bad_gcm_rejected():
    with pytest.raises(BadGCM):
        build_system({"n": 2, "gcm": [[2, -1], [0, 2]], "d": 2,
                      "coroots": [[1, 0], [0, 1]], "roots": [[2, -1], [0, 2]]})


def test_dependent_coroots_rejected():
    with pytest.raises(NotFree):
        build_system({"n": 2, "gcm": [[2, 0], [0, 2]], "d": 2,
                      "coroots": [[1, 0], [1, 0]], "roots": [[2, 0], [0, 2]]})


def test_pairing_mismatch_rejected():
    with pytest.raises(PairingMismatch):
        build_system({"n": 1, "gcm": [[2]], "d": 1, "coroots": [[1]], "roots": [[3]]})


def test_non_integral_coroot_rejected():
    with pytest.raises(YNotBetween):
        build_system({"n": 1, "gcm": [[2]], "d": 1, "coroots": [["1/2"]], "roots": [[4]]})


def test_reflections(A1, AFF):
    assert A1.act(A1.reflection(1), (1,)) == (-1,)
    # r_1(α_2^∨) = α_2^∨ + 2α_1^∨
    assert AFF.act(AFF.reflection(1), (0, 1, 0)) == (2, 1, 0)
    assert A1.act(A1.identity(), (Fraction(1, 3),)) == (Fraction(1, 3),)


def test_length_reduced(A2, AFF):
    assert A2.length_reduced(A2.identity()) == (0, ())
    assert A2.length_reduced(A2.from_word((1, 2, 1))) == (3, (1, 2, 1))
    assert A2.length_reduced(A2.from_word((2, 1, 2))) == (3, (1, 2, 1))
    assert AFF.length_reduced(AFF.from_word((1, 2) * 3)) == (6, (1, 2, 1, 2, 1, 2))


def test_inversion_sets(A1, A2):
    assert A1.inversion_set(A1.identity()) == frozenset()
    assert A1.inversion_set(A1.reflection(1)) == {A1.simple_root(1)}
    got = {r.coords for r in A2.inversion_set(A2.from_word((1, 2)))}
    assert got == {(1, 0), (1, 1)}


def test_dominantize(A1, AFF):
    d = A1.dominantize((-1,))
    assert d.lam == (1,) and d.w.word == (1,) and d.J == frozenset()
    d = AFF.dominantize((1, 1, 0))
    assert d.lam == (1, 1, 0) and d.w.is_identity and d.J == {1, 2}


def test_classify_cone(AFF):
    assert AFF.classify_cone((1, 1, 0)) is Cone.V0
    assert AFF.classify_cone((0, 0, 1)) is Cone.INTERIOR
    assert AFF.dominantize((0, 0, 1)).J == {1}
    assert AFF.classify_cone((0, 0, -1)) is Cone.NEGATIVE
    # α_1^∨ never becomes dominant; the null root certifies it is outside the cone
    assert AFF.classify_cone((1, 0, 0)) is Cone.OUTSIDE


def test_classify_cone_undecided_with_tiny_cap(HYP):
    assert HYP.classify_cone((-1, -1), cap=0) is Cone.INTERIOR
    # r_1·(-1,-1) needs one step to dominate
    assert HYP.classify_cone((-2, -1), cap=0) is Cone.UNDECIDED
    assert HYP.classify_cone((-2, -1)) is Cone.INTERIOR


def test_non_spherical_boundary(NSB):
    assert NSB.classify_cone((-1, -1, 0)) is Cone.NON_SPHERICAL_BOUNDARY


def test_finite_type(A2, AFF):
    assert AFF.is_finite_type({1})
    assert not AFF.is_finite_type({1, 2})
    assert A2.is_finite_type({1, 2})


def test_longest_element(A1, A2, A1A1, AFF):
    assert A1.longest_element({1}).word == (1,)
    assert A2.longest_element({1, 2}).word == (1, 2, 1)
    assert A1A1.longest_element({1, 2}).word == (1, 2)
    with pytest.raises(NotFinite):
        AFF.longest_element({1, 2})


def test_w_lambda_plus(A2):
    assert A2.w_lambda_plus((1, 1)).is_identity
    assert A2.w_lambda_plus((0, 0)).word == (1, 2, 1)
    assert A2.w_lambda_plus((Fraction(2, 3), Fraction(1, 3))).word == (2,)


def test_finite_type_agrees_with_group_enumeration():
    for name in ("a1", "a2", "a1xa1", "a1_affine", "hyp23"):
        S = preset(name)
        for J in ({1}, {2}, {1, 2}):
            if max(J) > S.n:
                continue
            elts = list(S.elements(60, J))
            finite = len(elts) < 60 and all(w.length < 60 for w in elts)
            assert S.is_finite_type(J) == finite, (name, J)


def test_alternative_words_are_reduced(A2):
    w0 = A2.from_word((1, 2, 1))
    seen = set()
    for seed in range(10):
        with alternative_words(seed):
            word = chosen_word(w0)
        assert A2.from_word(word) == w0 and len(word) == 3
        seen.add(word)
    assert seen == {(1, 2, 1), (2, 1, 2)}
    assert chosen_word(w0) == (1, 2, 1)
