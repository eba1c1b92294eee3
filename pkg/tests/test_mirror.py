import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sftkit.errors import BudgetError, InputError
from sftkit.groups import finv, fmul
from sftkit.mirror import (
    STAR, MirrorPattern, boundary_image, coding_to_pattern, collision_search, counting_bound,
    enumerate_forbidden_codings, labeling, mirror_window, occurs_in, random_mirror, validate_mirror,
    verify_collision,
)


def rules_oracle(p):
    """Which of the three rules fail, evaluated straight from their statements."""
    c = p.cells
    bad = set()
    stars = [(g, n) for (g, n), s in c.items() if s == STAR]
    for g, n in stars:
        for h, m in stars:
            if m == n and h != g:
                bad.add("X1")
        for (h, m), s in c.items():
            if h == g and s != STAR:
                bad.add("X2")
        for (f, m), s in c.items():
            if m != n:
                continue
            h = fmul(finv(g), f)
            other = (fmul(g, finv(h)), n)
            if other in c and c[other] != s:
                bad.add("X3")
    return bad


def test_pillar_patch_is_valid():
    w = mirror_window(2, 2, range(-1, 2))
    p = random_mirror(2, w, "", seed=3)
    assert validate_mirror(p) == []
    assert p.cells[("a", 0)] == p.cells[("A", 0)]


def test_two_stars_one_level():
    p = MirrorPattern(2, {("", 0): STAR, ("a", 0): STAR})
    rep = validate_mirror(p)
    assert [v.kind for v in rep] == ["X1"]
    assert rep[0].at == (("", 0), ("a", 0))


def test_asymmetric_labels():
    p = MirrorPattern(2, {("", 0): STAR, ("a", 0): "0", ("A", 0): "1"})
    rep = validate_mirror(p)
    assert [(v.kind, v.at) for v in rep] == [("X3", (("", 0), "a"))]


def test_interrupted_pillar():
    p = MirrorPattern(1, {("", 0): STAR, ("", 1): "0"})
    assert [v.kind for v in validate_mirror(p)] == ["X2"]


def test_pattern_errors():
    with pytest.raises(InputError):
        MirrorPattern(1, {("b", 0): "0"})
    with pytest.raises(InputError):
        MirrorPattern(2, {("aA", 0): "0"})
    with pytest.raises(InputError):
        MirrorPattern(2, {("a", 0): "2"})
    with pytest.raises(InputError):
        MirrorPattern.from_json({"rank": 1, "cells": [{"g": "", "n": 0, "sym": "0"}] * 2})


def test_json_round_trip():
    p = random_mirror(2, mirror_window(2, 1, [0, 1]), "a", seed=1)
    assert MirrorPattern.from_json(p.to_json()).cells == p.cells


@given(st.dictionaries(
    st.tuples(st.sampled_from(["", "a", "A", "b", "B", "ab", "ba"]), st.integers(-1, 1)),
    st.sampled_from(["0", "1", STAR]), max_size=10,
))
def test_validator_matches_oracle(cells):
    p = MirrorPattern(2, cells)
    assert validate_mirror(p).kinds() == rules_oracle(p)


def test_budget_one_contains_x1():
    cs = enumerate_forbidden_codings(2, 1)
    pats = [coding_to_pattern(c, 2).cells for c in cs]
    assert {("", 0): STAR, ("a", 0): STAR} in pats


def test_codings_are_forbidden():
    for k in (1, 2):
        for c in enumerate_forbidden_codings(k, 2):
            assert validate_mirror(coding_to_pattern(c, k)) != []


def test_codings_prefix_stable():
    a, b = enumerate_forbidden_codings(2, 1), enumerate_forbidden_codings(2, 2)
    assert b[: len(a)] == a
    assert enumerate_forbidden_codings(2, 2) == b
    with pytest.raises(InputError):
        enumerate_forbidden_codings(2, -1)


def test_codings_cover_small_violations():
    # every invalid two-cell pattern near a star at the origin is caught
    cs = [coding_to_pattern(c, 2).cells for c in enumerate_forbidden_codings(2, 1)]
    for g in ["a", "A", "b", "B"]:
        assert {("", 0): STAR, (g, 0): STAR} in cs
    for m in (1, -1):
        for s in "01":
            assert {("", 0): STAR, ("", m): s} in cs


@pytest.mark.parametrize("seed", range(20))
def test_codings_never_occur_in_configurations(seed):
    w = mirror_window(2, 3, range(-2, 3))
    p = random_mirror(2, w, ["", "a", "bA", "B"][seed % 4], seed=seed)
    assert validate_mirror(p) == []
    for c in enumerate_forbidden_codings(2, 2):
        assert occurs_in(c, 2, p) == []


def test_big_window_valid():
    w = mirror_window(2, 4, range(-3, 4))
    assert validate_mirror(random_mirror(2, w, "b", seed=0)) == []
    assert validate_mirror(random_mirror(2, w, None, seed=0)) == []


def test_forbidden_coding_detected():
    p = random_mirror(1, mirror_window(1, 2, [0]), "", seed=0)
    q = p.replace({("a", 0): "1", ("A", 0): "0"})
    hits = [c for c in enumerate_forbidden_codings(1, 1) if occurs_in(c, 1, q)]
    assert hits


def test_counting_examples():
    r = counting_bound(7, 4, 1)
    assert (r["lhs"], r["rhs"], r["holds"], r["premise"]) == (128, 64, True, True)
    r = counting_bound(6, 4, 1)
    assert (r["lhs"], r["rhs"], r["holds"], r["premise"]) == (64, 64, False, False)
    with pytest.raises(InputError):
        counting_bound(0, 4, 1)


def test_premise_gives_conclusion():
    for N in range(1, 11):
        for a in range(1, 11):
            prem = counting_bound(N, a, 1)["premise"]
            for m in range(1, 11):
                r = counting_bound(N, a, m)
                if prem:
                    assert r["holds"]
                assert r["holds"] == (2 ** (N * m) > a ** (3 * m))


def test_counting_monotone():
    for N in range(1, 10):
        for a in range(1, 10):
            for m in range(1, 6):
                if counting_bound(N, a, m)["holds"]:
                    assert counting_bound(N + 1, a, m)["holds"]
                    if a > 1:
                        assert counting_bound(N, a - 1, m)["holds"]


def test_collision_example():
    c = collision_search(2, 4, 2)
    assert c is not None and verify_collision(c, 2, 4, 2)
    assert c.p != c.p2
    # exhaustive hashing oracle: first repeated image in enumeration order
    seen = {}
    for i in range(256):
        img = boundary_image(labeling(i, 8), 2, 2)
        if img in seen:
            assert (labeling(seen[img], 8), labeling(i, 8)) == (c.p, c.p2)
            break
        seen[img] = i
    assert len(c.D) == 8 and len(c.H) == 6


def test_no_collision_without_pigeonhole():
    assert collision_search(2, 1, 1) is None


def test_collision_budget():
    with pytest.raises(BudgetError):
        collision_search(4, 10, 5)


def test_verify_rejects_tampering():
    c = collision_search(2, 4, 2)

    assert not verify_collision(dataclasses.replace(c, p2=c.p), 2, 4, 2)
    flipped = (1 - c.p2[0],) + c.p2[1:]
    assert not verify_collision(dataclasses.replace(c, p2=flipped), 2, 4, 2) or boundary_image(flipped, 2, 2) == c.boundary
