"""Command-line entry point: ``sftkit <module> <command> ...``.

Everything prints one JSON object unless a render format is requested.
Exit codes: 0 for OK/UNDECIDED, 1 for VIOLATIONS/REJECTED, 2 for errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import machine as M
from . import mirror, paradox, selfsim, tilespace
from .errors import MembershipError, SftkitError
from .groups import F2xF2, parse_element
from .render import render
from .serial import (
    comp_from_json, comp_json, diagram_json, dumps, final_from_json, final_json, jsonable, load,
    paradox_from_json, paradox_json, report_json, seward_from_json, seward_json, tile_json, tiles_from_json,
    tiles_json,
)

EXIT = {"OK": 0, "UNDECIDED": 0, "VIOLATIONS": 1, "REJECTED": 1, "ERROR": 2}


class Done(Exception):
    def __init__(self, payload=None, raw: bytes | None = None):
        self.payload = payload
        self.raw = raw


def _read(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SftkitError(f"cannot read {path}: {e.strerror}") from e
    return load(text)


def _word(args, attr: str, alphabet="01"):
    w = getattr(args, attr)
    if w is None:
        if args.random is None:
            raise SftkitError(f"give --{attr} or --random LEN")
        rng = random.Random(args.seed)
        if getattr(args, "set", None) == "golden" or getattr(args, "action", "") == "trivial-golden":
            out = []
            for _ in range(args.random):
                out.append("0" if out and out[-1] == "1" else rng.choice(alphabet))
            return "".join(out)
        return "".join(rng.choice(alphabet) for _ in range(args.random))
    if any(c not in alphabet for c in w):
        raise SftkitError(f"--{attr} must be a word over {alphabet}")
    return w


def _budget(args) -> int:
    return tilespace.default_budget() if args.budget is None else args.budget


# ---------------------------------------------------------------------------
# tm


def _machine(path: str) -> M.TuringMachine:
    return M.TuringMachine.from_json(_read(path))


def cmd_tm_run(args):
    tm = _machine(args.file)
    d = M.run(tm, tuple(args.input), args.steps)
    return {"status": "OK", **diagram_json(d, tm.blank)}


def cmd_tm_compile(args):
    tm = _machine(args.file)
    tiles = sorted(M.compile_tiles(tm), key=lambda t: (t.kind, repr(t.params)))
    return {"status": "OK", "counts": M.tile_counts(tiles), "tiles": [tile_json(t) for t in tiles]}


def cmd_tm_tile(args):
    tm = _machine(args.file)
    d = M.run(tm, tuple(args.input), args.steps)
    # the seed column plus every cell the head can reach
    width = args.width or max(args.steps + 2, max(max(len(r.tape), r.head + 1) for r in d.rows) + 1)
    p = M.diagram_to_patch(d, tm, width)
    if args.render:
        raise Done(raw=render(p, args.render))
    rep = tilespace.validate_search(p, tm, M.compile_tiles(tm))
    return {"status": "OK" if not rep else "VIOLATIONS", "width": p.width, "height": p.height, "tau": tiles_json(p), "violations": len(rep)}


# ---------------------------------------------------------------------------
# paradox


def cmd_paradox_gen(args):
    window = paradox.k_ball(args.radius) if args.kball else paradox.standard_ball(args.radius)
    return {"status": "OK", **paradox_json(paradox.canonical_patch(window))}


def cmd_paradox_check(args):
    p = paradox_from_json(_read(args.file))
    return report_json(paradox.validate_local_rules(p))


def cmd_paradox_paths(args):
    p = paradox_from_json(_read(args.file))
    g = args.start if args.start not in ("ε", "e", "1") else ""
    if g not in p.cells:
        raise SftkitError(f"{args.start!r} is not in the window")
    nodes = paradox.path_nodes(g, p, args.steps - 1) if args.steps > 0 else []
    return {"status": "OK", "from": g, "nodes": nodes, "complete": len(nodes) == args.steps}


# ---------------------------------------------------------------------------
# tilespace


def cmd_tilespace_build(args):
    eff = M.named_set(args.set)
    y = _word(args, "y")
    p = tilespace.build_comp(tuple(y), eff, args.width, args.height, _budget(args))
    return {"status": "OK", **comp_json(p, args.set)}


def _comp_file(path):
    obj = _read(path)
    return comp_from_json(obj), obj.get("set") or "golden"


def cmd_tilespace_check(args):
    p, name = _comp_file(args.file)
    rep = tilespace.validate_comp(p, M.named_set(args.set or name), _budget(args))
    return report_json(rep)


def cmd_tilespace_render(args):
    obj = _read(args.file)
    tau = comp_from_json(obj).tau if "sigma" in obj else tiles_from_json(obj["tau"])
    raise Done(raw=render(tau, args.fmt))


# ---------------------------------------------------------------------------
# selfsim


def _final_file(path):
    obj = _read(path)
    return final_from_json(obj), selfsim.named_action(obj.get("action") or "trivial-golden")


def cmd_selfsim_build(args):
    action = selfsim.named_action(args.action)
    x = _word(args, "x")
    rho = selfsim.canonical_pair(args.radius)
    z = selfsim.build_final(tuple(x), action, rho, _budget(args))
    return {"status": "OK", **final_json(z, args.action)}


def cmd_selfsim_check(args):
    z, action = _final_file(args.file)
    return report_json(selfsim.validate_final(z, action, _budget(args)))


def cmd_selfsim_extract(args):
    z, _ = _final_file(args.file)
    return {"status": "OK", "phi": selfsim.factor_phi(z, args.len)}


def cmd_selfsim_equivariance(args):
    z, action = _final_file(args.file)
    s = parse_element(F2xF2, args.gen)
    if s not in selfsim.GENS:
        raise SftkitError(f"{args.gen!r} is not a standard generator; use forms like a| or |B")
    r = selfsim.check_equivariance(z, s, args.len, action)
    return {
        "status": "OK" if r.ok else "VIOLATIONS", "compared": r.compared,
        "lhs": r.lhs, "rhs": r.rhs, "counterexample": r.counterexample,
    }


def cmd_selfsim_seward_build(args):
    p = paradox.canonical_patch(args.radius)
    x = _word(args, "x")
    eff = M.named_set(args.set)
    res = M.dovetail(eff, tuple(x), _budget(args))
    if res.status == M.REJECTED:
        raise MembershipError(f"x rejected at length {res.length}")
    return {"status": "OK", "set": args.set, **seward_json(p, selfsim.copied_layer(p, x))}


def cmd_selfsim_seward_check(args):
    obj = _read(args.file)
    p, layer = seward_from_json(obj)
    rep = paradox.validate_local_rules(p)
    rep.merge(selfsim.validate_seward(p, layer, M.named_set(args.set or obj.get("set") or "golden"), _budget(args)))
    return report_json(rep)


# ---------------------------------------------------------------------------
# mirror


def cmd_mirror_check(args):
    return report_json(mirror.validate_mirror(mirror.MirrorPattern.from_json(_read(args.file))))


def cmd_mirror_gen(args):
    w = mirror.mirror_window(args.rank, args.radius, range(-args.levels, args.levels + 1))
    g0 = None if args.no_pillar else args.pillar
    return {"status": "OK", **mirror.random_mirror(args.rank, w, g0, args.seed).to_json()}


def cmd_mirror_forbid(args):
    cods = mirror.enumerate_forbidden_codings(args.rank, args.budget)
    return {"status": "OK", "count": len(cods), "codings": [c.to_json() for c in cods]}


def cmd_mirror_bound(args):
    return {"status": "OK", **mirror.counting_bound(args.N, args.alpha, args.m)}


def cmd_mirror_collide(args):
    c = mirror.collision_search(args.alpha, args.N, args.m)
    if c is None:
        return {"status": "OK", "collision": None}
    return {"status": "OK", "collision": c.to_json(), "verified": mirror.verify_collision(c, args.alpha, args.N, args.m)}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sftkit", description=__doc__.split("\n")[0])
    top = ap.add_subparsers(dest="module", required=True)

    def group(name, help_):
        return top.add_parser(name, help=help_).add_subparsers(dest="command", required=True)

    def add(sub, name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        return p

    def budget(p):
        p.add_argument("--budget", type=int, default=None, help="effectiveness budget (default: $SELFSIM_BUDGET or 20)")

    def word(p, name):
        p.add_argument(f"--{name}", default=None)
        p.add_argument("--random", type=int, default=None, metavar="LEN", help="draw a random word of this length")
        p.add_argument("--seed", type=int, default=0)

    tm = group("tm", "Turing machines and their tiles")
    p = add(tm, "run", cmd_tm_run, "space-time diagram")
    p.add_argument("file")
    p.add_argument("--input", default="")
    p.add_argument("--steps", type=int, required=True)
    p = add(tm, "compile", cmd_tm_compile, "tileset of a machine")
    p.add_argument("file")
    p = add(tm, "tile", cmd_tm_tile, "seeded tile patch of a run")
    p.add_argument("file")
    p.add_argument("--input", default="")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--render", choices=("text", "pgm", "svg"), default=None)

    px = group("paradox", "paradoxical configurations on F2")
    p = add(px, "gen", cmd_paradox_gen, "canonical patch on a ball")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--kball", action="store_true", help="use the ball of the move set instead of the standard ball")
    p = add(px, "check", cmd_paradox_check, "local rules")
    p.add_argument("file")
    p = add(px, "paths", cmd_paradox_paths, "nodes of one path")
    p.add_argument("file")
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--steps", type=int, required=True)

    ts = group("tilespace", "computation tilings")
    p = add(ts, "build", cmd_tilespace_build, "computation patch for a word")
    p.add_argument("--set", choices=("golden", "full"), default="golden")
    word(p, "y")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    budget(p)
    p = add(ts, "check", cmd_tilespace_check, "validate a computation patch")
    p.add_argument("file")
    p.add_argument("--set", choices=("golden", "full"), default=None)
    budget(p)
    p = add(ts, "render", cmd_tilespace_render, "draw the tile layer")
    p.add_argument("file")
    p.add_argument("--fmt", choices=("text", "pgm", "svg"), default="text")

    ss = group("selfsim", "the final SFT on F2 x F2")
    p = add(ss, "build", cmd_selfsim_build, "final patch over a point x")
    p.add_argument("--action", choices=("trivial-golden", "odometer"), default="trivial-golden")
    word(p, "x")
    p.add_argument("--radius", type=int, default=2)
    budget(p)
    p.set_defaults(set=None)
    p = add(ss, "check", cmd_selfsim_check, "validate a final patch")
    p.add_argument("file")
    budget(p)
    p = add(ss, "extract", cmd_selfsim_extract, "read off the factor point")
    p.add_argument("file")
    p.add_argument("--len", type=int, default=8)
    p = add(ss, "equivariance", cmd_selfsim_equivariance, "compare phi(s·z) with s·phi(z)")
    p.add_argument("file")
    p.add_argument("--gen", required=True, help="generator such as a| or |B")
    p.add_argument("--len", type=int, default=3)
    p = add(ss, "seward-build", cmd_selfsim_seward_build, "path-copied layer over a paradox patch")
    p.add_argument("--set", choices=("golden", "full"), default="golden")
    word(p, "x")
    p.add_argument("--radius", type=int, default=5)
    budget(p)
    p = add(ss, "seward-check", cmd_selfsim_seward_check, "validate a path-copied layer")
    p.add_argument("file")
    p.add_argument("--set", choices=("golden", "full"), default=None)
    budget(p)

    mr = group("mirror", "the mirror shift and its counting argument")
    p = add(mr, "check", cmd_mirror_check, "validate a mirror pattern")
    p.add_argument("file")
    p = add(mr, "gen", cmd_mirror_gen, "random configuration on a window")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--levels", type=int, default=1, help="levels -L..L")
    p.add_argument("--pillar", default="", help="position of the star pillar")
    p.add_argument("--no-pillar", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p = add(mr, "forbid", cmd_mirror_forbid, "forbidden pattern codings")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--budget", type=int, required=True)
    p = add(mr, "bound", cmd_mirror_bound, "the counting inequality")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p = add(mr, "collide", cmd_mirror_collide, "pigeonhole collision search")
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload = args.fn(args)
    except Done as d:
        if d.raw is not None:
            sys.stdout.buffer.write(d.raw)
            sys.stdout.flush()
            return 0
        payload = d.payload
    except MembershipError as e:
        payload = {"status": "REJECTED", "error": str(e)}
    except SftkitError as e:
        payload = {"status": "ERROR", "error": str(e)}
    sys.stdout.write(dumps(jsonable(payload)) + "\n")
    return EXIT[payload["status"]]


if __name__ == "__main__":
    sys.exit(main())
