import dataclasses
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import golden_rejects
from sftkit.errors import InputError, MembershipError
from sftkit.machine import (
    BLANK, SearchMachine, compile_tiles, diagram_to_patch, example_machine, full_set, golden_mean_set, run,
    tile2,
)
from sftkit.tilespace import (
    CompPatch, SyncPatch, build_comp, extract_boundary, sync_from_word, validate_comp, validate_search,
    validate_sync,
)

TM = example_machine()
G = golden_mean_set()

golden_words = st.lists(st.sampled_from(["0", "10"]), min_size=8, max_size=14).map("".join)


def sync_oracle(p):
    bad = set()
    for y in range(p.height - 1):
        for x in range(p.width - 1):
            if p.rows[y + 1][x] != p.rows[y][x + 1]:
                bad.add((x, y))
    return bad


def test_five_step_patch_is_valid():
    p = diagram_to_patch(run(TM, "", 5), TM, 7)
    assert validate_search(p, TM, compile_tiles(TM)) == []
    assert validate_search(p, TM) == []


def test_seed_violation():
    p = diagram_to_patch(run(TM, "", 5), TM, 7)
    q = p.replace(0, 0, tile2(BLANK))
    rep = validate_search(q, TM)
    assert [v for v in rep if v.kind == "seed"] == [("seed", (0, 0), "found tile2 tile")]


def test_single_vertical_mismatch():
    p = diagram_to_patch(run(TM, "", 5), TM, 7)
    # a tile whose south edge alone disagrees with the row below
    q = p.replace(5, 3, dataclasses.replace(p[5, 4], s=("light", None)))
    rep = [v for v in validate_search(q, TM, compile_tiles(TM)) if v.kind == "adjacency"]
    oracle = []
    for y in range(q.height):
        for x in range(q.width):
            if x + 1 < q.width and q[x, y].e != q[x + 1, y].w:
                oracle.append(((x, y), (x + 1, y)))
            if y + 1 < q.height and q[x, y].n != q[x, y + 1].s:
                oracle.append(((x, y), (x, y + 1)))
    assert sorted(v.at for v in rep) == sorted(oracle)
    assert oracle == [((5, 2), (5, 3))]


def test_final_state_forbidden():
    m = SearchMachine(G)
    d = run(m, m.input_word("0110"), 60)
    assert d.rows[-1].state == m.final
    p = diagram_to_patch(d, m, 8, crop=True)
    rep = validate_search(p, m)
    assert any(v.kind == "final" for v in rep)


def test_written_work_track_forbidden():
    g = golden_mean_set()
    c = build_comp("0100100", g, 4, 3)
    m = SearchMachine(g)
    tau = c.tau.replace(2, 0, tile2(("0", "1")))
    assert "blank" in validate_search(tau, m).kinds()


def test_sync_examples():
    y = "0110100"
    assert validate_sync(sync_from_word(y, 4, 4)) == []
    assert validate_sync(SyncPatch((("1",) * 3,) * 3)) == []


@given(st.integers(0, 4), st.integers(0, 3), st.integers(0, 2**16))
def test_sync_flip_matches_oracle(x, y, seed):
    rng = random.Random(seed)
    w = "".join(rng.choice("01") for _ in range(9))
    p = sync_from_word(w, 5, 4)
    q = p.replace(x, y, "1" if p[x, y] == "0" else "0")
    got = {v.at for v in validate_sync(q)}
    assert got == sync_oracle(q)
    # only the two checks that look at the flipped cell can fail
    assert got <= {(x - 1, y), (x, y - 1)}


def test_build_comp_example():
    c = build_comp("0100100101", G, 6, 4)
    assert [c.sigma[x, 0] for x in range(6)] == list("010010")
    assert [c.sigma[0, y] for y in range(4)] == list("0100")
    assert validate_comp(c, G) == []


def test_height_one():
    c = build_comp("010", G, 3, 1)
    assert c.tau.height == 1
    assert [t.kind for t in c.tau.rows[0]] == ["seed", "tile1", "tile2"]
    assert validate_comp(c, G) == []


def test_build_comp_errors():
    with pytest.raises(InputError):
        build_comp("0100", G, 4, 3)
    with pytest.raises(MembershipError):
        build_comp("0110100", G, 4, 3, budget=10)
    with pytest.raises(InputError):
        build_comp("0", G, 0, 1)


def test_coupling_violation():
    c = build_comp("01001001", G, 5, 3)
    s = c.sigma.replace(2, 0, "1")
    # keep sync intact away from row 0 by also updating the antidiagonal
    s = s.replace(1, 1, "1").replace(0, 2, "1")
    rep = validate_comp(CompPatch(c.tau, s), full_set())
    coup = [v for v in rep if v.kind == "coupling"]
    assert [v.at for v in coup] == [(2, 0)]


def test_effectiveness_violation():
    y = "0110100"
    c = CompPatch(build_comp(y, full_set(), 4, 3).tau, sync_from_word(y, 4, 3))
    eff = [v for v in validate_comp(c, G, budget=10) if v.kind == "effectiveness"]
    assert len(eff) == 1
    assert eff[0].at[1] == 0 and eff[0].at[0] <= 2


def test_shape_mismatch():
    c = build_comp("0100100", G, 4, 3)
    with pytest.raises(InputError):
        CompPatch(c.tau, sync_from_word("0100100", 3, 3))


def test_extract_boundary_one_cell():
    c = build_comp("0", G, 1, 1)
    assert extract_boundary(c) == (("0",), ("0",))


@given(golden_words, st.integers(1, 5), st.integers(1, 4))
def test_build_then_validate(y, w, h):
    if len(y) < w + h - 1:
        return
    c = build_comp(y, G, w, h)
    assert validate_comp(c, G) == []
    row, col = extract_boundary(c)
    assert "".join(row) == y[:w] and "".join(col) == y[:h]


@given(st.text("01", min_size=7, max_size=10), st.integers(0, 12))
def test_valid_implies_undecided(y, budget):
    c = CompPatch(build_comp(y, full_set(), 4, 4).tau, sync_from_word(y, 4, 4))
    rep = validate_comp(c, G, budget=budget)
    row, col = extract_boundary(c)
    assert row[:4] == col[:4]
    if not rep:
        assert not golden_rejects("".join(row)[: budget])
    if golden_rejects(y[:4]) and budget > 4:
        assert rep


def test_search_patch_is_seeded_run():
    c = build_comp("0100101001", G, 6, 5)
    m = SearchMachine(G)
    d = run(m, m.input_word("0100101001"), 4)
    assert c.tau == diagram_to_patch(d, m, 6, crop=True)
