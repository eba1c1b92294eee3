import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_words, matrix, slow_reduce
from sftkit.errors import InputError
from sftkit.groups import (
    F2, FREE, LATTICE, GroupSpec, PatternCoding, ball, ball_layers, coding_consistent, fmul, format_element,
    inv, is_identity, is_reduced, mul, parse_element, reduce, standard_gens,
)

F2Z = GroupSpec(((FREE, 2), (LATTICE, 1)))
letters = st.text(alphabet="aAbB", max_size=20)


def test_reduce_examples():
    assert reduce(F2, "aA") == ("",)
    assert reduce(F2, "abBa") == ("aa",)
    w = "aabAAba"
    assert all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))
    assert reduce(F2, w) == (w,)


def test_reduce_unknown_letter():
    with pytest.raises(InputError):
        reduce(F2, "ax")
    with pytest.raises(InputError):
        reduce(F2, "c")


def test_mul_examples():
    assert mul(F2, ("ab",), ("BA",)) == ("",)
    assert mul(F2Z, ("a", (2,)), ("b", (-1,))) == ("ab", (1,))
    # concatenate then reduce: abA·aB -> ab·B -> a
    assert slow_reduce("abA" + "aB") == "a"
    assert mul(F2, ("abA",), ("aB",)) == ("a",)


def test_mul_rejects_foreign_elements():
    with pytest.raises(InputError):
        mul(F2, ("ab",), ("ab", (1,)))
    with pytest.raises(InputError):
        mul(F2, ("aA",), ("",))


def test_inv_examples():
    assert inv(F2, ("",)) == ("",)
    assert inv(F2, ("ab",)) == ("BA",)
    assert inv(GroupSpec(((FREE, 2), (LATTICE, 1))), ("aB", (3,))) == ("bA", (-3,))


def test_is_identity_examples():
    assert is_identity(F2, reduce(F2, "abBA"))
    assert not is_identity(F2, reduce(F2, "ab"))
    assert is_identity(F2Z, reduce(F2Z, "aA"))


def test_ball_examples():
    gens = standard_gens(F2)
    assert ball(F2, gens, 0) == {("",)}
    assert ball(F2, gens, 1) == {("",), ("a",), ("A",), ("b",), ("B",)}
    assert len(ball(F2, gens, 3)) == 1 + 4 + 12 + 36


def test_ball_matches_brute_force():
    assert {g[0] for g in ball(F2, standard_gens(F2), 5)} == set(all_words(5))


def test_ball_sizes():
    gens = standard_gens(F2)
    for r in range(9):
        assert len(ball(F2, gens, r)) == 2 * 3 ** r - 1


def test_ball_monotone_and_generated():
    gens = standard_gens(F2)
    layers = ball_layers(F2, gens, 5)
    for r in range(4):
        inner = set().union(*layers[: r + 1])
        outer = set().union(*layers[: r + 2])
        assert inner <= outer
        for x in outer:
            assert any(mul(F2, y, s) == x for y in inner for s in gens + [F2.identity()])


def test_associativity_exhaustive():
    gens = standard_gens(F2)
    b3 = sorted(ball(F2, gens, 3))
    b2 = sorted(ball(F2, gens, 2))
    for x, y in itertools.product(b3, b3):
        xy = mul(F2, x, y)
        for z in b2:
            assert mul(F2, xy, z) == mul(F2, x, mul(F2, y, z))
        assert mul(F2, F2.identity(), x) == x


@given(letters)
def test_reduce_idempotent(w):
    r = reduce(F2, w)
    assert reduce(F2, r[0]) == r
    assert is_reduced(r[0])
    assert r[0] == slow_reduce(w)


@given(letters, letters)
def test_fmul_agrees_with_matrices(x, y):
    x, y = slow_reduce(x), slow_reduce(y)
    assert matrix(fmul(x, y)) == matmul_words(x, y)


def matmul_words(x, y):
    return matrix(x + y)


@given(letters)
def test_inverse_cancels(w):
    x = reduce(F2, w)
    assert is_identity(F2, mul(F2, x, inv(F2, x)))
    assert is_identity(F2, mul(F2, inv(F2, x), x))


@given(st.text(alphabet="aAbBcC", max_size=15))
def test_text_round_trip(w):
    x = reduce(F2Z, w)
    assert parse_element(F2Z, format_element(F2Z, x)) == x


def test_group_spec_json():
    spec = GroupSpec.from_json({"factors": [{"free": 2}, {"lattice": 1}]})
    assert spec == F2Z
    assert spec.to_json() == {"factors": [{"free": 2}, {"lattice": 1}]}
    with pytest.raises(InputError):
        GroupSpec(())
    with pytest.raises(InputError):
        GroupSpec.from_json({"factors": [{"free": 0}]})


def test_letters_are_global():
    assert reduce(F2Z, "abc") == ("ab", (1,))
    assert reduce(F2Z, "cC") == ("", (0,))


def test_coding_consistency():
    assert not coding_consistent(PatternCoding.from_dict({"a": "0", "aAa": "1"}), F2)
    assert coding_consistent(PatternCoding.from_dict({"a": "0", "b": "0"}), F2)
    assert coding_consistent(PatternCoding.from_dict({"ab": "1", "abBb": "1"}), F2)


def test_coding_rejects_duplicates():
    with pytest.raises(InputError):
        PatternCoding((("a", "0"), ("a", "1")))
    c = PatternCoding.from_json([{"word": "ab", "symbol": "1"}])
    assert c.to_json() == [{"word": "ab", "symbol": "1"}]
