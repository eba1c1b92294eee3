"""The mirror shift on F_k x Z and the counting argument against soficity.

Cells are keyed by (g, n) with g a reduced word of F_k and n an int.
Symbols are "0", "1" and the star "*".
"""
from __future__ import annotations

import random
import string
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import BudgetError, InputError
from .groups import (
    FREE, LATTICE, GroupSpec, PatternCoding, ball, finv, fmul, free_gens, is_reduced,
    standard_gens,
)
from .report import Report, Violation

STAR = "*"
SYMBOLS = ("0", "1", STAR)
MAX_LABELINGS = 1 << 22


def mirror_group(k: int) -> GroupSpec:
    return GroupSpec(((FREE, k), (LATTICE, 1)))


def _key(h: str):
    return (len(h), h.swapcase())


@dataclass(frozen=True)
class MirrorPattern:
    rank: int
    cells: Mapping = field(hash=False)

    def __post_init__(self):
        letters = set(free_gens(self.rank))
        for (g, n), s in self.cells.items():
            if not isinstance(g, str) or not is_reduced(g) or any(c not in letters for c in g):
                raise InputError(f"{g!r} is not a reduced word of F_{self.rank}")
            if not isinstance(n, int):
                raise InputError(f"level {n!r} is not an int")
            if s not in SYMBOLS:
                raise InputError(f"unknown symbol {s!r}")

    @property
    def window(self):
        return self.cells.keys()

    def replace(self, updates: Mapping) -> "MirrorPattern":
        c = dict(self.cells)
        c.update(updates)
        return MirrorPattern(self.rank, c)

    @classmethod
    def from_json(cls, obj) -> "MirrorPattern":
        try:
            cells = {}
            for e in obj["cells"]:
                key = (e["g"], int(e["n"]))
                if key in cells:
                    raise InputError(f"duplicate cell {key}")
                cells[key] = str(e["sym"])
            return cls(int(obj["rank"]), cells)
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed mirror pattern: {e}") from e

    def to_json(self) -> dict:
        cells = sorted(self.cells.items(), key=lambda kv: (kv[0][1], _key(kv[0][0])))
        return {"rank": self.rank, "cells": [{"g": g, "n": n, "sym": s} for (g, n), s in cells]}


def validate_mirror(p: MirrorPattern) -> Report:
    out = Report()
    cells = p.cells
    stars: dict[int, list[str]] = {}
    columns: dict[str, list[int]] = {}
    for (g, n), s in cells.items():
        columns.setdefault(g, []).append(n)
        if s == STAR:
            stars.setdefault(n, []).append(g)
    for n, gs in sorted(stars.items()):
        gs.sort(key=_key)
        for i, g in enumerate(gs):
            for h in gs[i + 1:]:
                out.append(Violation("X1", ((g, n), (h, n)), "two stars on one level"))
    for n, gs in sorted(stars.items()):
        for g in gs:
            for m in sorted(columns[g]):
                if cells[g, m] != STAR:
                    out.append(Violation("X2", ((g, n), (g, m)), "star column interrupted"))
    for n, gs in sorted(stars.items()):
        for g in gs:
            seen = set()
            for (f, level) in cells:
                if level != n or f == g:
                    continue
                h = fmul(finv(g), f)
                hk = min(h, finv(h), key=_key)
                if hk in seen:
                    continue
                seen.add(hk)
                other = fmul(g, finv(h))
                if (other, n) in cells and cells[other, n] != cells[f, n]:
                    out.append(Violation("X3", ((g, n), hk), f"{f or 'ε'} and {other or 'ε'} differ"))
    return out


# ---------------------------------------------------------------------------
# effectiveness: forbidden pattern codings


def _word(k: int, g: str, n: int) -> str:
    z = string.ascii_lowercase[k]
    return g + (z * n if n >= 0 else z.upper() * -n)


def enumerate_forbidden_codings(k: int, budget: int) -> list[PatternCoding]:
    """Codings anchored at a star on (ε, 0), grouped by support radius.

    Every forbidden pattern of X with support in a ball of radius ``budget``
    contains a translate of one of these, so the list is a finite piece of
    the recursive enumeration witnessing effective closedness.
    """
    if budget < 0:
        raise InputError("budget must be >= 0")
    by_len: dict[int, list[str]] = {}
    for g in ball(GroupSpec.free(k), standard_gens(GroupSpec.free(k)), budget):
        by_len.setdefault(len(g[0]), []).append(g[0])
    out = []
    for r in range(1, budget + 1):
        words = sorted(by_len.get(r, []), key=_key)
        for h in words:
            out.append(PatternCoding(((_word(k, "", 0), STAR), (_word(k, h, 0), STAR))))
        for m in (r, -r):
            for s in ("0", "1"):
                out.append(PatternCoding(((_word(k, "", 0), STAR), (_word(k, "", m), s))))
        for h in words:
            if _key(h) > _key(finv(h)):
                continue
            for a in SYMBOLS:
                for b in SYMBOLS:
                    if a != b:
                        out.append(PatternCoding((
                            (_word(k, "", 0), STAR), (_word(k, h, 0), a), (_word(k, finv(h), 0), b),
                        )))
    return out


def coding_to_pattern(c: PatternCoding, k: int) -> MirrorPattern:
    sup = c.support(mirror_group(k))
    return MirrorPattern(k, {(g, n[0]): s for (g, n), s in sup.items()})


def occurs_in(c: PatternCoding, k: int, p: MirrorPattern) -> list:
    """Translates t with t·support inside the window where p shows the coding."""
    pat = coding_to_pattern(c, k).cells
    hits = []
    for (t, n0) in p.cells:
        ok = True
        for (g, n), s in pat.items():
            v = p.cells.get((fmul(t, g), n0 + n))
            if v != s:
                ok = False
                break
        if ok:
            hits.append((t, n0))
    return hits


# ---------------------------------------------------------------------------
# configurations


def mirror_window(k: int, r: int, levels: Iterable[int]) -> list[tuple[str, int]]:
    fb = sorted((g[0] for g in ball(GroupSpec.free(k), standard_gens(GroupSpec.free(k)), r)), key=_key)
    return [(g, n) for n in levels for g in fb]


def random_mirror(k: int, window: Iterable[tuple[str, int]], g0: str | None = "", seed: int | None = None) -> MirrorPattern:
    """A configuration of X restricted to the window.

    With a pillar at g0 the symbol at (g0·h, n) only depends on the
    unordered pair {h, h⁻¹} and on n; without a pillar the labels are free.
    """
    rng = random.Random(seed)
    labels: dict = {}
    cells = {}
    for g, n in sorted(window, key=lambda c: (c[1], _key(c[0]))):
        if g0 is not None:
            h = fmul(finv(g0), g)
            if h == "":
                cells[g, n] = STAR
                continue
            key = (min(h, finv(h), key=_key), n)
        else:
            key = (g, n)
        if key not in labels:
            labels[key] = rng.choice("01")
        cells[g, n] = labels[key]
    return MirrorPattern(k, cells)


# ---------------------------------------------------------------------------
# counting


def counting_bound(N: int, alpha: int, m: int) -> dict:
    """Both sides of 2^(Nm) > alpha^(3m), and the premise 2^N > alpha^3."""
    if min(N, alpha, m) < 1:
        raise InputError("N, alpha and m must be positive")
    lhs, rhs = 2 ** (N * m), alpha ** (3 * m)
    return {
        "N": N, "alpha": alpha, "m": m,
        "lhs": lhs, "rhs": rhs, "holds": lhs > rhs,
        "premise": 2 ** N > alpha ** 3,
    }


@dataclass(frozen=True)
class Collision:
    p: tuple  # D-labelings, bits in the order of ``D``
    p2: tuple
    boundary: tuple  # common H-coloring, in the order of ``H``
    D: tuple
    H: tuple

    def to_json(self) -> dict:
        return {
            "D": [list(d) for d in self.D], "H": [list(h) for h in self.H],
            "p": list(self.p), "p_prime": list(self.p2), "boundary": list(self.boundary),
        }


def collision_cells(N: int, m: int) -> tuple[tuple, tuple]:
    """D and H for the Z x Z case; the first coordinate is the power of a."""
    D = tuple((n, k) for n in range(1, N + 1) for k in range(m))
    H = tuple((0, k) for k in range(-m, 2 * m))
    return D, H


def labeling(index: int, size: int) -> tuple:
    """Bits of ``index``, most significant first."""
    return tuple((index >> (size - 1 - i)) & 1 for i in range(size))


def boundary_image(bits: tuple, alpha: int, m: int) -> tuple:
    """The compression map: the labeling read as an integer, mod alpha^(3m), in base alpha."""
    v = 0
    for b in bits:
        v = 2 * v + b
    v %= alpha ** (3 * m)
    digits = []
    for _ in range(3 * m):
        v, d = divmod(v, alpha)
        digits.append(d)
    return tuple(reversed(digits))


def collision_search(alpha: int, N: int, m: int):
    """First pair p < p' in enumeration order with equal boundary images, or None."""
    if min(alpha, N, m) < 1:
        raise InputError("alpha, N and m must be positive")
    total = 2 ** (N * m)
    needed = min(total, alpha ** (3 * m) + 1)
    if needed > MAX_LABELINGS:
        raise BudgetError(f"{needed} labelings exceed the limit of {MAX_LABELINGS}")
    D, H = collision_cells(N, m)
    seen: dict[tuple, int] = {}
    for i in range(total):
        bits = labeling(i, N * m)
        img = boundary_image(bits, alpha, m)
        j = seen.get(img)
        if j is not None:
            return Collision(labeling(j, N * m), bits, img, D, H)
        seen[img] = i
    return None


def verify_collision(c: Collision, alpha: int, N: int, m: int) -> bool:
    D, H = collision_cells(N, m)
    return (
        c.D == D and c.H == H and c.p != c.p2
        and len(c.p) == len(D) == len(c.p2)
        and boundary_image(c.p, alpha, m) == c.boundary == boundary_image(c.p2, alpha, m)
    )
