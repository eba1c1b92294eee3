"""Normal forms for free groups, integer lattices and their direct products.

An element of a product group is a plain tuple with one component per
factor.  A free component is a freely reduced string over the lowercase
letters ``a, b, ...`` (uppercase = inverse); a lattice component is a tuple
of ints.  Plain tuples keep hashing cheap, which matters because every
patch in the toolkit is a dict keyed by elements.
"""
from __future__ import annotations

import string
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError

FREE = "free"
LATTICE = "lattice"


# ---------------------------------------------------------------------------
# free group strings


def letter_inv(c: str) -> str:
    return c.swapcase()


def fmul(x: str, y: str) -> str:
    """Product of two reduced words."""
    i = 0
    n = min(len(x), len(y))
    lx = len(x)
    while i < n and x[lx - 1 - i] == y[i].swapcase():
        i += 1
    return x[: lx - i] + y[i:]


fmul_cached = lru_cache(maxsize=1 << 18)(fmul)


def finv(x: str) -> str:
    return x[::-1].swapcase()


finv_cached = lru_cache(maxsize=1 << 16)(finv)


def freduce(word: str) -> str:
    out: list[str] = []
    for c in word:
        if out and out[-1] == c.swapcase():
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def is_reduced(word: str) -> bool:
    return all(word[i] != word[i + 1].swapcase() for i in range(len(word) - 1))


def free_gens(k: int) -> list[str]:
    """a, A, b, B, ... for rank k."""
    out = []
    for c in string.ascii_lowercase[:k]:
        out += [c, c.upper()]
    return out


def free_sphere_size(r: int) -> int:
    return 1 if r == 0 else 4 * 3 ** (r - 1)


# ---------------------------------------------------------------------------
# group specs


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.factors:
            raise InputError("group needs at least one factor")
        for kind, n in self.factors:
            if kind not in (FREE, LATTICE) or not isinstance(n, int) or n < 1:
                raise InputError(f"bad factor {(kind, n)}")
        if self.n_letters > 26:
            raise InputError("at most 26 generators supported")

    @classmethod
    def free(cls, k: int) -> "GroupSpec":
        return cls(((FREE, k),))

    @classmethod
    def lattice(cls, d: int) -> "GroupSpec":
        return cls(((LATTICE, d),))

    @classmethod
    def from_json(cls, obj) -> "GroupSpec":
        try:
            facs = []
            for f in obj["factors"]:
                (kind, n), = f.items()
                facs.append((kind, int(n)))
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise InputError(f"malformed group spec: {obj!r}") from e
        return cls(tuple(facs))

    def to_json(self) -> dict:
        return {"factors": [{k: n} for k, n in self.factors]}

    @property
    def n_letters(self) -> int:
        return sum(n for _, n in self.factors)

    def letter_table(self) -> dict[str, tuple[int, int, int]]:
        """Global letter -> (factor index, local generator index, sign).

        Letters are handed out across factors in order, so F2 x Z uses
        a, b for the free factor and c for the lattice.
        """
        return _letter_table(self)

    def identity(self) -> tuple:
        return tuple("" if k == FREE else (0,) * n for k, n in self.factors)


@lru_cache(maxsize=None)
def _letter_table(spec: GroupSpec) -> dict[str, tuple[int, int, int]]:
    table = {}
    pos = 0
    for fi, (_, n) in enumerate(spec.factors):
        for j in range(n):
            c = string.ascii_lowercase[pos]
            table[c] = (fi, j, 1)
            table[c.upper()] = (fi, j, -1)
            pos += 1
    return table


F2 = GroupSpec.free(2)
F2xF2 = GroupSpec(((FREE, 2), (FREE, 2)))


# ---------------------------------------------------------------------------
# element operations


def check_element(spec: GroupSpec, x) -> None:
    if not isinstance(x, tuple) or len(x) != len(spec.factors):
        raise InputError(f"{x!r} is not an element of {spec}")
    for (kind, n), c in zip(spec.factors, x):
        if kind == FREE:
            if not isinstance(c, str) or not is_reduced(c):
                raise InputError(f"bad free component {c!r}")
            if any(ch.lower() not in string.ascii_lowercase[:n] for ch in c):
                raise InputError(f"letter out of range in {c!r}")
        elif not (isinstance(c, tuple) and len(c) == n and all(isinstance(v, int) for v in c)):
            raise InputError(f"bad lattice component {c!r}")


def reduce(spec: GroupSpec, word: str | Sequence[str]) -> tuple:
    """Normal form of a word over the global letters of ``spec``."""
    table = spec.letter_table()
    parts: list = [[] if k == FREE else [0] * n for k, n in spec.factors]
    for c in word:
        if c in " ·*":
            continue
        if c not in table:
            raise InputError(f"unknown letter {c!r}")
        fi, j, sign = table[c]
        if spec.factors[fi][0] == FREE:
            local = string.ascii_lowercase[j]
            local = local if sign > 0 else local.upper()
            p = parts[fi]
            if p and p[-1] == local.swapcase():
                p.pop()
            else:
                p.append(local)
        else:
            parts[fi][j] += sign
    return tuple("".join(p) if k == FREE else tuple(p) for (k, _), p in zip(spec.factors, parts))


def mul(spec: GroupSpec, x: tuple, y: tuple) -> tuple:
    check_element(spec, x)
    check_element(spec, y)
    return _mul(spec.factors, x, y)


def _mul(factors, x, y):
    return tuple(
        fmul(a, b) if k == FREE else tuple(u + v for u, v in zip(a, b))
        for (k, _), a, b in zip(factors, x, y)
    )


def inv(spec: GroupSpec, x: tuple) -> tuple:
    check_element(spec, x)
    return tuple(finv(a) if k == FREE else tuple(-v for v in a) for (k, _), a in zip(spec.factors, x))


def is_identity(spec: GroupSpec, x: tuple) -> bool:
    return x == spec.identity()


def standard_gens(spec: GroupSpec) -> list[tuple]:
    """Generators and their inverses, in global letter order."""
    return [reduce(spec, c) for c in spec.letter_table()]


def ball(spec: GroupSpec, gens: Iterable[tuple], r: int) -> set:
    return set().union(*ball_layers(spec, gens, r))


def ball_layers(spec: GroupSpec, gens: Iterable[tuple], r: int) -> list[set]:
    """Spheres 0..r of the word metric for ``gens`` (BFS)."""
    gens = list(gens)
    for g in gens:
        check_element(spec, g)
    e = spec.identity()
    seen = {e}
    layers = [{e}]
    frontier = [e]
    for _ in range(r):
        nxt = []
        for x in frontier:
            for s in gens:
                y = _mul(spec.factors, x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        layers.append(set(nxt))
        frontier = nxt
    return layers


def word_length(spec: GroupSpec, x: tuple) -> int:
    """Length for the standard generators (l1 over factors)."""
    return sum(len(c) if k == FREE else sum(abs(v) for v in c) for (k, _), c in zip(spec.factors, x))


# ---------------------------------------------------------------------------
# text form


def format_element(spec: GroupSpec, x: tuple) -> str:
    parts = []
    for (k, n), c in zip(spec.factors, x):
        if k == FREE:
            parts.append(c)
        else:
            parts.append(",".join(str(v) for v in c))
    return "|".join(parts)


def parse_element(spec: GroupSpec, text: str) -> tuple:
    """Inverse of format_element; free parts may be unreduced."""
    if text in ("ε", "e", "1") and len(spec.factors) == 1 and spec.factors[0][0] == FREE:
        return spec.identity()
    parts = text.split("|")
    if len(parts) != len(spec.factors):
        raise InputError(f"expected {len(spec.factors)} components in {text!r}")
    out = []
    for (k, n), p in zip(spec.factors, parts):
        p = p.strip()
        if k == FREE:
            if p in ("ε", "e", "1"):
                p = ""
            if any(ch.lower() not in string.ascii_lowercase[:n] for ch in p):
                raise InputError(f"bad free word {p!r}")
            out.append(freduce(p))
        else:
            try:
                vals = tuple(int(v) for v in p.split(",")) if p else (0,) * n
            except ValueError as e:
                raise InputError(f"bad lattice coordinate {p!r}") from e
            if len(vals) != n:
                raise InputError(f"expected {n} lattice coordinates in {p!r}")
            out.append(vals)
    return tuple(out)


# ---------------------------------------------------------------------------
# pattern codings


@dataclass(frozen=True)
class PatternCoding:
    """Finite map from words over the global letters to symbols."""

    entries: tuple[tuple[str, str], ...]

    def __post_init__(self):
        words = [w for w, _ in self.entries]
        if len(set(words)) != len(words):
            raise InputError("duplicate word in pattern coding")

    @classmethod
    def from_dict(cls, d: dict) -> "PatternCoding":
        return cls(tuple(d.items()))

    @classmethod
    def from_json(cls, obj) -> "PatternCoding":
        try:
            return cls(tuple((e["word"], str(e["symbol"])) for e in obj))
        except (KeyError, TypeError) as e:
            raise InputError("malformed pattern coding") from e

    def to_json(self) -> list:
        return [{"word": w, "symbol": s} for w, s in self.entries]

    def support(self, spec: GroupSpec) -> dict:
        """Element -> symbol; raises InputError when inconsistent."""
        out: dict = {}
        for w, s in self.entries:
            g = reduce(spec, w)
            if out.setdefault(g, s) != s:
                raise InputError(f"word {w!r} conflicts with an earlier entry")
        return out


def coding_consistent(c: PatternCoding, spec: GroupSpec) -> bool:
    try:
        c.support(spec)
    except InputError as e:
        if "unknown letter" in str(e):
            raise
        return False
    return True
