"""Text, binary PGM and SVG pictures of tile patches.

Pictures put the last row (latest time) on top.  In PGM and SVG every tile
is split into four triangles by its diagonals, one per edge, shaded by the
edge's shade.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

from .errors import InputError
from .machine import DARK, LIGHT, MID, PLAIN, TilePatch

GREY = {DARK: 48, MID: 112, LIGHT: 176, PLAIN: 240}
FILL = {DARK: "#303030", MID: "#707070", LIGHT: "#b0b0b0", PLAIN: "#f0f0f0"}
PX = 12  # PGM pixels per tile side
SIDE = 60  # SVG units per tile side


def _short(a) -> str:
    if isinstance(a, tuple):
        return "".join(_short(v) for v in a)
    return str(a)


def label_text(label) -> str:
    if label is None:
        return ""
    if label[0] == "sym":
        return _short(label[1])
    if label[0] == "head":
        return f"({_short(label[1])},{_short(label[2])})"
    if label[0] == "arrow":
        return ("←" if label[1] == "L" else "→") + _short(label[2])
    return _short(label)


def cell_text(t) -> str:
    if t.kind == "seed":
        return "S"
    if t.kind == "wall":
        return "|"
    return label_text(t.n[1]) or "."


def render_text(p: TilePatch) -> str:
    cells = [[cell_text(t) for t in row] for row in p.rows]
    w = max((len(c) for row in cells for c in row), default=1)
    return "\n".join(" ".join(c.ljust(w) for c in row).rstrip() for row in reversed(cells)) + "\n"


def _quadrant(i: int, j: int, n: int) -> int:
    """0 = north, 1 = east, 2 = south, 3 = west for pixel (row i, col j)."""
    u, v = j + 0.5, i + 0.5
    above_main = v < u  # above the diagonal from the top left corner
    above_anti = v < n - u
    if above_main and above_anti:
        return 0
    if above_main:
        return 1
    if not above_anti:
        return 2
    return 3


def render_pgm(p: TilePatch) -> bytes:
    H, W = p.height, p.width
    quad = [[_quadrant(i, j, PX) for j in range(PX)] for i in range(PX)]
    data = bytearray()
    for y in reversed(range(H)):
        greys = [[GREY.get(e[0], 0) for e in p[x, y].edges()] for x in range(W)]
        for i in range(PX):
            for x in range(W):
                g = greys[x]
                data.extend(g[q] for q in quad[i])
    return f"P5\n{W * PX} {H * PX}\n255\n".encode() + bytes(data)


def render_svg(p: TilePatch) -> bytes:
    H, W = p.height, p.width
    s = SIDE
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W * s}" height="{H * s}" viewBox="0 0 {W * s} {H * s}">',
    ]
    for y in range(H):
        top = (H - 1 - y) * s
        for x in range(W):
            t = p[x, y]
            left = x * s
            cx, cy = left + s / 2, top + s / 2
            corners = [(left, top), (left + s, top), (left + s, top + s), (left, top + s)]
            tri = [(corners[0], corners[1]), (corners[1], corners[2]), (corners[2], corners[3]), (corners[3], corners[0])]
            for (a, b), edge in zip(tri, t.edges()):
                pts = f"{a[0]},{a[1]} {b[0]},{b[1]} {cx},{cy}"
                out.append(f'<polygon points="{pts}" fill="{FILL.get(edge[0], "#ff00ff")}" stroke="#000" stroke-width="0.5"/>')
            for (a, b), edge in zip(tri, t.edges()):
                txt = label_text(edge[1])
                if not txt:
                    continue
                tx = (a[0] + b[0] + cx) / 3
                ty = (a[1] + b[1] + cy) / 3
                out.append(
                    f'<text x="{tx:g}" y="{ty:g}" font-size="9" text-anchor="middle" '
                    f'dominant-baseline="middle">{escape(txt)}</text>'
                )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()


def render(p: TilePatch, fmt: str) -> bytes:
    if fmt == "text":
        return render_text(p).encode()
    if fmt == "pgm":
        return render_pgm(p)
    if fmt == "svg":
        return render_svg(p)
    raise InputError(f"unknown render format {fmt!r}")
