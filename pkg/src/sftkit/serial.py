"""JSON encodings for every patch type.

Tuples become lists on the way out; ``tuplify`` undoes that on the way in,
which is enough because no payload uses lists as values of their own.
"""
from __future__ import annotations

import json
from collections.abc import Mapping

from .errors import InputError
from .groups import F2, F2xF2, parse_element
from .machine import MachineConfig, SpaceTimeDiagram, TilePatch, WangTile
from .paradox import ParadoxPatch, ParadoxSymbol
from .report import Report
from .selfsim import FinalPatch, S_ORDER, final_window, fmt, lift_pair
from .tilespace import CompPatch, SyncPatch


def tuplify(x):
    if isinstance(x, list):
        return tuple(tuplify(v) for v in x)
    return x


def jsonable(x):
    if isinstance(x, (tuple, list)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    return x


def load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def report_json(r: Report, limit: int = 200) -> dict:
    return {
        "status": "VIOLATIONS" if r else "OK",
        "count": len(r),
        "skipped": r.skipped,
        "violations": [{"kind": v.kind, "at": jsonable(v.at), "detail": v.detail} for v in r[:limit]],
    }


# ---------------------------------------------------------------------------
# machines and tiles


def diagram_json(d: SpaceTimeDiagram, blank) -> dict:
    return {
        "rows": [{"state": r.state, "tape": list(r.tape), "head": r.head} for r in d.rows],
        "text": d.text(blank).split("\n"),
    }


def diagram_from_json(obj) -> SpaceTimeDiagram:
    try:
        return SpaceTimeDiagram(tuple(
            MachineConfig(tuplify(r["state"]), tuplify(r["tape"]), int(r["head"])) for r in obj["rows"]
        ))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed diagram: {e}") from e


def tile_json(t: WangTile) -> dict:
    return {
        "kind": t.kind, "params": jsonable(t.params),
        "n": jsonable(t.n), "e": jsonable(t.e), "s": jsonable(t.s), "w": jsonable(t.w),
    }


def tile_from_json(obj) -> WangTile:
    try:
        return WangTile(
            tuplify(obj["n"]), tuplify(obj["e"]), tuplify(obj["s"]), tuplify(obj["w"]),
            obj.get("kind", ""), tuplify(obj.get("params", [])),
        )
    except (KeyError, TypeError, AttributeError) as e:
        raise InputError(f"malformed tile: {e}") from e


def tiles_json(p: TilePatch) -> list:
    return [[tile_json(t) for t in row] for row in p.rows]


def tiles_from_json(rows) -> TilePatch:
    try:
        out = TilePatch(tuple(tuple(tile_from_json(c) for c in row) for row in rows))
    except TypeError as e:
        raise InputError(f"malformed tile rows: {e}") from e
    if len({len(r) for r in out.rows}) > 1:
        raise InputError("tile rows have different lengths")
    return out


# ---------------------------------------------------------------------------
# paradox patches


def paradox_json(p: ParadoxPatch) -> dict:
    key = lambda g: (len(g), g)
    return {
        "moveset": sorted(p.moveset, key=key),
        "cells": [
            {"at": g, "lg": a.lg, "lb": a.lb, "r": a.r, "color": a.color}
            for g, a in sorted(p.cells.items(), key=lambda kv: key(kv[0]))
        ],
    }


def _f2(text: str) -> str:
    return parse_element(F2, text)[0] if text else ""


def paradox_from_json(obj) -> ParadoxPatch:
    try:
        cells = {}
        for c in obj["cells"]:
            g = _f2(c["at"])
            if g in cells:
                raise InputError(f"duplicate cell {g!r}")
            cells[g] = ParadoxSymbol(_f2(c["lg"]), _f2(c["lb"]), _f2(c["r"]), c["color"])
        return ParadoxPatch(frozenset(_f2(m) for m in obj["moveset"]), cells)
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed paradox patch: {e}") from e


# ---------------------------------------------------------------------------
# computation patches


def comp_json(p: CompPatch, set_name: str = "") -> dict:
    return {
        "set": set_name, "width": p.width, "height": p.height,
        "tau": tiles_json(p.tau), "sigma": jsonable(p.sigma.rows),
    }


def comp_from_json(obj) -> CompPatch:
    try:
        tau = tiles_from_json(obj["tau"])
        sigma = SyncPatch(tuplify(obj["sigma"]))
        p = CompPatch(tau, sigma)
        if (p.width, p.height) != (obj.get("width", p.width), obj.get("height", p.height)):
            raise InputError("declared size does not match the rows")
        return p
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed computation patch: {e}") from e


# ---------------------------------------------------------------------------
# final patches


def _vals(a: tuple) -> dict:
    return {fmt(s): int(v) for s, v in zip(S_ORDER, a)}


def _from_vals(d: Mapping) -> tuple:
    try:
        return tuple(str(d[fmt(s)]) for s in S_ORDER)
    except KeyError as e:
        raise InputError(f"sigma entry misses component {e}") from e


def final_json(z: FinalPatch, action: str = "") -> dict:
    order = sorted(z.window, key=lambda g: (len(g[0]) + len(g[1]), g))
    return {
        "window_radius": z.radius,
        "action": action,
        "rho_h": paradox_json(z.rho.factor_h()),
        "rho_v": paradox_json(z.rho.factor_v()),
        "tau": [{"at": fmt(g), "cell": tile_json(z.tau[g])} for g in order],
        "sigma": [{"at": fmt(g), "vals": _vals(z.sigma[g])} for g in order],
    }


def final_from_json(obj) -> FinalPatch:
    try:
        r = int(obj["window_radius"])
        window = final_window(r)
        rho = lift_pair(paradox_from_json(obj["rho_h"]), paradox_from_json(obj["rho_v"]), window)
        tau = {parse_element(F2xF2, c["at"]): tile_from_json(c["cell"]) for c in obj["tau"]}
        sigma = {parse_element(F2xF2, c["at"]): _from_vals(c["vals"]) for c in obj["sigma"]}
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed final patch: {e}") from e
    return FinalPatch(r, rho, tau, sigma)


def seward_json(p: ParadoxPatch, layer: Mapping) -> dict:
    key = lambda g: (len(g), g)
    return {"patch": paradox_json(p), "layer": [{"at": g, "sym": layer[g]} for g in sorted(layer, key=key)]}


def seward_from_json(obj):
    try:
        p = paradox_from_json(obj["patch"])
        layer = {_f2(c["at"]): str(c["sym"]) for c in obj["layer"]}
    except (KeyError, TypeError) as e:
        raise InputError(f"malformed layer file: {e}") from e
    if set(layer) != set(p.cells):
        raise InputError("layer and paradox patch have different windows")
    return p, layer
