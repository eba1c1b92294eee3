"""Paradoxical configurations on F2.

Elements of F2 are handled here as bare reduced strings (the single
component of the F2 normal form).  A configuration assigns to each element
a symbol ``(lg, lb, r, color)``: the displacements to its green and blue
preimages, the displacement to its image, and its own color.
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import BoundaryError, InputError, PreconditionError
from .groups import F2, ball, fmul, finv, is_reduced, standard_gens
from .report import Report, Violation

GREEN = "G"
BLUE = "B"

P1, P2, WB_LOWER, WB_UPPER = "P1", "P2", "Wb", "WB"

# Symmetric closure of the displacements of phi and its two inverse branches.
CANONICAL_K = frozenset({"b", "B", "ab", "BA", "bb", "BB"})


class ParadoxSymbol(NamedTuple):
    lg: str
    lb: str
    r: str
    color: str

    def left(self, color: str) -> str:
        return self.lg if color == GREEN else self.lb


class _Out:
    """Sentinel for path queries that leave the window."""

    def __repr__(self):
        return "OutOfWindow"

    def __bool__(self):
        return False


OUT = _Out()


def opposite(color: str) -> str:
    return BLUE if color == GREEN else GREEN


@dataclass(frozen=True)
class ParadoxPatch:
    moveset: frozenset
    cells: Mapping[str, ParadoxSymbol] = field(hash=False)

    @property
    def window(self):
        return self.cells.keys()

    def __len__(self):
        return len(self.cells)

    def replace(self, updates: Mapping[str, ParadoxSymbol]) -> "ParadoxPatch":
        cells = dict(self.cells)
        cells.update(updates)
        return ParadoxPatch(self.moveset, cells)


def _check_f2(g) -> str:
    if isinstance(g, tuple) and len(g) == 1:
        g = g[0]
    if not isinstance(g, str) or not is_reduced(g) or any(c not in "aAbB" for c in g):
        raise InputError(f"{g!r} is not a reduced word of F2")
    return g


# ---------------------------------------------------------------------------
# the explicit 2-to-1 map


def _classify(g: str) -> str:
    last = g[-1:]
    if last == "a" or not last or g.count("A") == len(g):
        return P1
    return {"A": P2, "b": WB_LOWER, "B": WB_UPPER}[last]


def classify(g) -> str:
    return _classify(_check_f2(g))


def color_of(g: str) -> str:
    return GREEN if _classify(g) in (P1, P2) else BLUE


def _phi(g: str) -> str:
    piece = _classify(g)
    if piece == P2:
        g = fmul(g, "a")
    elif piece == WB_UPPER:
        g = fmul(g, "b")
    return fmul(g, "b")


def phi(g) -> str:
    return _phi(_check_f2(g))


def _preimage(g: str, color: str) -> str:
    h = fmul(g, "B")
    if color == GREEN:
        return h if _classify(h) == P1 else fmul(h, "A")
    return h if _classify(h) == WB_LOWER else fmul(h, "B")


def phi_preimages(g, color: str) -> str:
    if color not in (GREEN, BLUE):
        raise InputError(f"unknown color {color!r}")
    return _preimage(_check_f2(g), color)


_R_BY_PIECE = {P1: "b", P2: "ab", WB_LOWER: "b", WB_UPPER: "bb"}


def _canonical_rho(g: str) -> ParadoxSymbol:
    # closed form of (g⁻¹φ_G⁻¹(g), g⁻¹φ_B⁻¹(g), g⁻¹φ(g)); g·B only cancels
    # when g ends in b
    piece = _classify(g)
    if g[-1:] == "b":
        h = g[:-1]
        lg = "B" if _classify(h) == P1 else "BA"
        lb = "B" if h[-1:] == "b" else "BB"
    else:
        lg, lb = "BA", "BB"
    color = GREEN if piece in (P1, P2) else BLUE
    return ParadoxSymbol(lg, lb, _R_BY_PIECE[piece], color)


def canonical_rho(g) -> ParadoxSymbol:
    return _canonical_rho(_check_f2(g))


def standard_ball(r: int) -> set[str]:
    return {x[0] for x in ball(F2, standard_gens(F2), r)}


def k_ball(r: int, moves: Iterable[str] = CANONICAL_K) -> set[str]:
    """Ball of radius r for the word metric generated by a move set."""
    return {x[0] for x in ball(F2, [(m,) for m in moves], r)}


def canonical_patch(window: Iterable[str] | int) -> ParadoxPatch:
    """Canonical configuration on a window (an int means the standard ball)."""
    if isinstance(window, int):
        window = standard_ball(window)
    return ParadoxPatch(CANONICAL_K, {g: _canonical_rho(g) for g in window})


# ---------------------------------------------------------------------------
# local rules


def validate_local_rules(p: ParadoxPatch, K: Iterable[str] | None = None) -> Report:
    K = frozenset(p.moveset if K is None else K)
    cells = p.cells
    out = Report()
    for g, a in cells.items():
        for name, d in (("lg", a.lg), ("lb", a.lb), ("r", a.r)):
            if d not in K:
                out.append(Violation("moveset", g, f"{name}={d!r} not in K"))
        if a.color not in (GREEN, BLUE):
            out.append(Violation("color", g, f"unknown color {a.color!r}"))
        # the L_t neighbour has color t and points back
        for t, d, rule in ((GREEN, a.lg, "green-preimage"), (BLUE, a.lb, "blue-preimage")):
            h = fmul(g, d)
            b = cells.get(h)
            if b is None:
                out.skipped += 1
            elif b.color != t or b.r != finv(d):
                out.append(Violation(rule, g, f"neighbour {h or 'ε'} is {b.color} with r={b.r!r}"))
        # the image points back with the left arrow of this cell's color
        h = fmul(g, a.r)
        b = cells.get(h)
        if b is None:
            out.skipped += 1
        elif b.left(a.color) != finv(a.r):
            out.append(Violation("image", g, f"image {h or 'ε'} has L_{a.color}={b.left(a.color)!r}"))
    return out


# ---------------------------------------------------------------------------
# paths


def gamma(g: str, n: int, p: ParadoxPatch):
    """n-th node of the path of g, or OUT when the path leaves the window."""
    cells = p.cells
    a = cells.get(g)
    if a is None:
        return OUT
    tb = opposite(a.color)
    cur = fmul(g, a.left(tb))
    for _ in range(n):
        c = cells.get(cur)
        if c is None:
            return OUT
        cur = fmul(cur, c.left(tb))
    return cur if cur in cells else OUT


def path_nodes(g: str, p: ParadoxPatch, nmax: int) -> list[str]:
    """gamma(g, 0..) up to nmax or the first exit from the window."""
    cells = p.cells
    a = cells.get(g)
    if a is None:
        return []
    tb = opposite(a.color)
    out = []
    cur = fmul(g, a.left(tb))
    while len(out) <= nmax:
        c = cells.get(cur)
        if c is None:
            break
        out.append(cur)
        cur = fmul(cur, c.left(tb))
    return out


def check_path_injectivity(p: ParadoxPatch, gset: Iterable[str], nmax: int):
    """True, or a witness ``((g, n), (h, m), node)`` of two equal path values."""
    seen: dict[str, tuple[str, int]] = {}
    for g in sorted(gset, key=lambda w: (len(w), w)):
        for n, node in enumerate(path_nodes(g, p, nmax)):
            if node in seen:
                return (seen[node], (g, n), node)
            seen[node] = (g, n)
    return True


def rmap(p: ParadoxPatch, g: str) -> str:
    return fmul(g, p.cells[g].r)


def scan_monochromatic_cycles(p: ParadoxPatch) -> list[tuple[str, ...]]:
    """Cycles of g -> g·r(g) lying in the window whose nodes share a color."""
    cells = p.cells
    state: dict[str, int] = {}  # 1 = on current trail, 2 = finished
    cycles = []
    for start in sorted(cells, key=lambda w: (len(w), w)):
        if start in state:
            continue
        trail = []
        cur = start
        while cur in cells and cur not in state:
            state[cur] = 1
            trail.append(cur)
            cur = fmul(cur, cells[cur].r)
        if cur in cells and state.get(cur) == 1:
            cyc = trail[trail.index(cur):]
            if len({cells[x].color for x in cyc}) == 1:
                i = min(range(len(cyc)), key=lambda j: (len(cyc[j]), cyc[j]))
                cycles.append(tuple(cyc[i:] + cyc[:i]))
        for x in trail:
            state[x] = 2
    return cycles


def repair_swap(p: ParadoxPatch, h: str) -> ParadoxPatch:
    """Swap the colors of h and the other preimage of its image.

    The image's two left arrows are exchanged as well so the local rules
    keep holding inside the window.
    """
    if not any(h in cyc for cyc in scan_monochromatic_cycles(p)):
        raise PreconditionError(f"{h or 'ε'} is not on a monochromatic cycle")
    cells = p.cells
    a = cells[h]
    c = fmul(h, a.r)
    cs = cells[c]
    sib = fmul(c, cs.left(opposite(a.color)))
    if sib == h:
        raise PreconditionError(f"image of {h or 'ε'} does not point back to it")
    if sib not in cells:
        raise BoundaryError(f"sibling {sib or 'ε'} of {h or 'ε'} is outside the window")
    b = cells[sib]
    if b.color == a.color:
        raise PreconditionError(f"sibling {sib or 'ε'} already has the color of {h or 'ε'}")
    return p.replace({
        h: a._replace(color=b.color),
        sib: b._replace(color=a.color),
        c: cs._replace(lg=cs.lb, lb=cs.lg),
    })


def pathcover_from_patch(p: ParadoxPatch) -> dict[str, tuple[str, ...]]:
    """p_g = (g, gamma_g(0), gamma_g(1), ...) truncated at the window."""
    cap = len(p.cells)
    return {g: (g, *path_nodes(g, p, cap)) for g in p.cells}


def cover_multiplicity(cover: Mapping[str, tuple[str, ...]]) -> Counter:
    cnt: Counter = Counter()
    for path in cover.values():
        cnt.update(path)
    return cnt


def shift_patch(p: ParadoxPatch, g: str) -> ParadoxPatch:
    """The translate g·p: (g·p)(h) = p(g⁻¹h)."""
    return ParadoxPatch(p.moveset, {fmul(g, h): a for h, a in p.cells.items()})
