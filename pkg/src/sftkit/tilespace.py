"""Seeded search tilings, synchronisation tilings, and their coupling.

Coordinates are (x, y) with (0, 0) at the bottom left; y is machine time.
"""
from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import InputError, MembershipError
from .machine import (
    REJECTED, EffectiveSet, SearchMachine, TilePatch, WangTile, diagram_to_patch,
    dovetail, is_machine_tile, run, seed_tile,
)
from .report import Report, Violation

DEFAULT_BUDGET = 20


def default_budget() -> int:
    try:
        return int(os.environ.get("SELFSIM_BUDGET", DEFAULT_BUDGET))
    except ValueError as e:
        raise InputError("SELFSIM_BUDGET must be an integer") from e


@dataclass(frozen=True)
class SyncPatch:
    rows: tuple  # rows[y][x]

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def height(self) -> int:
        return len(self.rows)

    def __getitem__(self, xy):
        x, y = xy
        return self.rows[y][x]

    def replace(self, x: int, y: int, v) -> "SyncPatch":
        rows = [list(r) for r in self.rows]
        rows[y][x] = v
        return SyncPatch(tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class CompPatch:
    tau: TilePatch
    sigma: SyncPatch

    def __post_init__(self):
        if (self.tau.width, self.tau.height) != (self.sigma.width, self.sigma.height):
            raise InputError("tau and sigma must have the same shape")

    @property
    def width(self) -> int:
        return self.tau.width

    @property
    def height(self) -> int:
        return self.tau.height


def _carries_final(t: WangTile, final) -> bool:
    for e in t.edges():
        lab = e[1] if isinstance(e, tuple) and len(e) == 2 else None
        if not isinstance(lab, tuple) or len(lab) < 2:
            continue
        if lab[0] == "head" and lab[1] == final:
            return True
        if lab[0] == "arrow" and len(lab) > 2 and lab[2] == final:
            return True
    return False


def validate_search(p: TilePatch, machine, tiles=None) -> Report:
    """Seed, edge matching, tile legitimacy, blank work tracks, no final state.

    ``tiles`` may be an explicit tileset; otherwise legitimacy is decided by
    rebuilding each tile from the machine.
    """
    out = Report()
    if p.height == 0 or p.width == 0:
        return out
    if p[0, 0] != seed_tile():
        out.append(Violation("seed", (0, 0), f"found {p[0, 0].kind or 'unknown'} tile"))
    work_blank = getattr(machine, "work_blank", None)
    for y in range(p.height):
        for x in range(p.width):
            t = p[x, y]
            ok = (t in tiles) if tiles is not None else is_machine_tile(machine, t)
            if not ok:
                out.append(Violation("tile", (x, y), f"{t.kind}{t.params} is not a tile of the machine"))
            if x + 1 < p.width:
                if t.e != p[x + 1, y].w:
                    out.append(Violation("adjacency", ((x, y), (x + 1, y)), "east/west edges differ"))
            else:
                out.skipped += 1
            if y + 1 < p.height:
                if t.n != p[x, y + 1].s:
                    out.append(Violation("adjacency", ((x, y), (x, y + 1)), "north/south edges differ"))
            else:
                out.skipped += 1
            if work_blank is not None and t.kind in ("tile1", "tile2"):
                a = t.params[0]
                if not (isinstance(a, tuple) and len(a) == 2 and a[1] == work_blank):
                    out.append(Violation("blank", (x, y), "input tile with a written work track"))
            if _carries_final(t, machine.final):
                out.append(Violation("final", (x, y), "tile carries the final state"))
    return out


def validate_sync(p: SyncPatch) -> Report:
    out = Report()
    for y in range(p.height):
        for x in range(p.width):
            if x + 1 < p.width and y + 1 < p.height:
                if p[x, y + 1] != p[x + 1, y]:
                    out.append(Violation("sync", (x, y), "antidiagonal not constant"))
            else:
                out.skipped += 1
    return out


def extract_boundary(p: CompPatch) -> tuple[tuple, tuple]:
    s = p.sigma
    return tuple(s[x, 0] for x in range(s.width)), tuple(s[0, y] for y in range(s.height))


def validate_comp(p: CompPatch, effset: EffectiveSet, budget: int | None = None) -> Report:
    if budget is None:
        budget = default_budget()
    machine = SearchMachine(effset)
    out = validate_search(p.tau, machine)
    out.merge(validate_sync(p.sigma))
    for y in range(p.height):
        for x in range(p.width - 1):
            t = p.tau[x + 1, y]
            if t.kind in ("tile1", "tile2") and is_machine_tile(machine, t):
                a, w = t.params[0]
                if w == machine.work_blank and p.sigma[x, y] != a:
                    out.append(Violation("coupling", (x, y), f"sigma={p.sigma[x, y]!r}, input tile reads {a!r}"))
    row, _ = extract_boundary(p)
    res = dovetail(effset, row, budget)
    if res.status == REJECTED:
        out.append(Violation("effectiveness", (max(res.length - 1, 0), 0), f"prefix of length {res.length} rejected at step {res.step}"))
    return out


def sync_from_word(y: Sequence, width: int, height: int) -> SyncPatch:
    if len(y) < width + height - 1:
        raise InputError(f"need {width + height - 1} symbols, got {len(y)}")
    return SyncPatch(tuple(tuple(y[x + k] for x in range(width)) for k in range(height)))


def search_patch(y: Sequence, effset: EffectiveSet, width: int, height: int) -> TilePatch:
    """Seeded run of the search machine on input (y_n, blank)."""
    machine = SearchMachine(effset)
    d = run(machine, machine.input_word(y), height - 1)
    if any(r.state == machine.final for r in d.rows):
        raise MembershipError("search machine reached its final state: the input is rejected")
    return diagram_to_patch(d, machine, width, crop=True)


def build_comp(y: Sequence, effset: EffectiveSet, width: int, height: int, budget: int | None = None) -> CompPatch:
    if width < 1 or height < 1:
        raise InputError("width and height must be positive")
    if budget is None:
        budget = default_budget()
    y = tuple(y)
    if len(y) < width + height - 1:
        raise InputError(f"need {width + height - 1} symbols, got {len(y)}")
    res = dovetail(effset, y, budget)
    if res.status == REJECTED:
        raise MembershipError(f"prefix of length {res.length} rejected at step {res.step}")
    return CompPatch(search_patch(y, effset, width, height), sync_from_word(y, width, height))
