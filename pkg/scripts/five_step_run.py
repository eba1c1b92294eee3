"""Run the example machine for five steps and write its tile patch as text, PGM and SVG."""
import argparse
from pathlib import Path

from sftkit.machine import compile_tiles, diagram_to_patch, example_machine, run, tile_counts
from sftkit.render import render
from sftkit.tilespace import validate_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=5)
    ap.add_argument("--out", default="out/five_step_run")
    args = ap.parse_args()

    tm = example_machine()
    d = run(tm, "", args.steps)
    print("space-time diagram, latest row last:")
    for line in d.text(tm.blank).split("\n"):
        print("  " + line)
    p = diagram_to_patch(d, tm, args.steps + 2)
    rep = validate_search(p, tm, compile_tiles(tm))
    print(f"patch {p.width}x{p.height}, violations: {len(rep)}, skipped edge checks: {rep.skipped}")
    print("tile families:", tile_counts(compile_tiles(tm)))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fmt in ("text", "pgm", "svg"):
        f = out / f"patch.{'txt' if fmt == 'text' else fmt}"
        f.write_bytes(render(p, fmt))
        print("wrote", f)


if __name__ == "__main__":
    main()
