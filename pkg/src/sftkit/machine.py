"""Turing machines, their Wang-tile encoding, and the dovetailing searcher.

Tape cells are numbered from 0.  In a tile patch, column 0 holds the seed
and the wall above it, and column n+1 carries tape cell n.  Row 0 is the
seeded input row whose north edges spell the initial configuration; row
t >= 1 turns configuration t-1 (south edges) into configuration t (north
edges).
"""
from __future__ import annotations

import threading
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .errors import InputError, InternalError

BLANK = "_"
LEFT, STAY, RIGHT = -1, 0, 1

# edge shades, darkest first
DARK, MID, LIGHT, PLAIN = "dark", "mid", "light", "plain"


# ---------------------------------------------------------------------------
# machines


@dataclass(frozen=True)
class TuringMachine:
    states: tuple
    alphabet: tuple
    blank: Any
    initial: Any
    final: Any
    delta: Mapping = field(hash=False, compare=True)

    def __post_init__(self):
        if self.blank not in self.alphabet:
            raise InputError("blank is not in the tape alphabet")
        for q in (self.initial, self.final):
            if q not in self.states:
                raise InputError(f"state {q!r} is not declared")
        for q in self.states:
            if q == self.final:
                continue
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise InputError(f"delta undefined at ({q!r}, {a!r})")
                q2, b, d = self.delta[q, a]
                if q2 not in self.states or b not in self.alphabet or d not in (LEFT, STAY, RIGHT):
                    raise InputError(f"bad transition at ({q!r}, {a!r})")

    def transition(self, q, a):
        if q == self.final:
            return (q, a, STAY)
        return self.delta[q, a]

    def has_symbol(self, a) -> bool:
        return a in self.alphabet

    def has_state(self, q) -> bool:
        return q in self.states

    @classmethod
    def from_json(cls, obj) -> "TuringMachine":
        try:
            delta = {}
            for e in obj["delta"]:
                key = (e["state"], str(e["read"]))
                if key in delta:
                    raise InputError(f"duplicate transition at {key}")
                delta[key] = (e["next"], str(e["write"]), int(e["move"]))
            return cls(
                tuple(obj["states"]),
                tuple(str(a) for a in obj["tape_alphabet"]),
                str(obj.get("blank", BLANK)),
                obj["initial"],
                obj["final"],
                delta,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"malformed machine: {e}") from e

    def to_json(self) -> dict:
        return {
            "states": list(self.states),
            "tape_alphabet": list(self.alphabet),
            "blank": self.blank,
            "initial": self.initial,
            "final": self.final,
            "delta": [
                {"state": q, "read": a, "next": q2, "write": b, "move": d}
                for (q, a), (q2, b, d) in self.delta.items()
            ],
        }


def example_machine() -> TuringMachine:
    """Two-state machine over {0, 1, blank}; "F" is an unreachable final state."""
    d = {
        ("a", BLANK): ("b", "0", RIGHT),
        ("a", "0"): ("b", "1", RIGHT),
        ("a", "1"): ("a", "0", RIGHT),
        ("b", BLANK): ("a", "0", LEFT),
        ("b", "0"): ("b", "1", STAY),
        ("b", "1"): ("a", "0", RIGHT),
    }
    return TuringMachine(("a", "b", "F"), ("0", "1", BLANK), BLANK, "a", "F", d)


class MachineConfig(NamedTuple):
    state: Any
    tape: tuple
    head: int

    def read(self, blank):
        return self.tape[self.head] if self.head < len(self.tape) else blank


def make_config(state, tape: Iterable, head: int, blank=BLANK) -> MachineConfig:
    """Normalise: trailing blanks are implicit."""
    if head < 0:
        raise InputError("head position must be non-negative")
    t = list(tape)
    while t and t[-1] == blank:
        t.pop()
    return MachineConfig(state, tuple(t), head)


def step(tm, c: MachineConfig) -> MachineConfig:
    if c.state == tm.final:
        return c
    q2, b, d = tm.transition(c.state, c.read(tm.blank))
    if c.head + d < 0:
        return c
    tape = list(c.tape)
    if c.head >= len(tape):
        tape += [tm.blank] * (c.head + 1 - len(tape))
    tape[c.head] = b
    return make_config(q2, tape, c.head + d, tm.blank)


@dataclass(frozen=True)
class SpaceTimeDiagram:
    rows: tuple

    def __len__(self):
        return len(self.rows)

    def text(self, blank=BLANK, width: int | None = None) -> str:
        if width is None:
            width = max(max(len(r.tape), r.head + 1) for r in self.rows)
        lines = []
        for r in self.rows:
            cells = []
            for i in range(width):
                a = r.tape[i] if i < len(r.tape) else blank
                cells.append(f"({r.state},{a})" if i == r.head else str(a))
            lines.append(" ".join(cells))
        return "\n".join(lines)


def run(tm, word: Sequence, T: int) -> SpaceTimeDiagram:
    if T < 0:
        raise InputError("number of steps must be >= 0")
    c = make_config(tm.initial, word, 0, tm.blank)
    rows = [c]
    for _ in range(T):
        c = step(tm, c)
        rows.append(c)
    return SpaceTimeDiagram(tuple(rows))


# ---------------------------------------------------------------------------
# Wang tiles


@dataclass(frozen=True)
class WangTile:
    """Edges are ``(shade, label)`` pairs; ``kind``/``params`` are bookkeeping."""

    n: tuple
    e: tuple
    s: tuple
    w: tuple
    kind: str = field(default="", compare=False)
    params: tuple = field(default=(), compare=False)

    def edges(self):
        return (self.n, self.e, self.s, self.w)


def sym(a):
    return ("sym", a)


def head(q, a):
    return ("head", q, a)


def arrow(direction: str, q):
    return ("arrow", direction, q)


def _edge(shade, label=None):
    return (shade, label)


def seed_tile() -> WangTile:
    d = _edge(DARK)
    return WangTile(d, d, d, d, "seed")


def wall_tile() -> WangTile:
    d = _edge(DARK)
    return WangTile(d, _edge(PLAIN), d, d, "wall")


def tile1(q0, a) -> WangTile:
    return WangTile(_edge(LIGHT, head(q0, a)), _edge(MID), _edge(DARK), _edge(DARK), "tile1", (a,))


def tile2(a) -> WangTile:
    return WangTile(_edge(PLAIN, sym(a)), _edge(MID), _edge(DARK), _edge(MID), "tile2", (a,))


def transmit_tile(a) -> WangTile:
    p = _edge(PLAIN)
    return WangTile(_edge(PLAIN, sym(a)), p, _edge(PLAIN, sym(a)), p, "transmit", (a,))


def action_tile(tm, q, a) -> WangTile:
    """The tile under which the head in state q reads a."""
    q2, b, d = tm.transition(q, a)
    p = _edge(PLAIN)
    south = _edge(LIGHT, head(q, a))
    if q == tm.final:
        return WangTile(south, p, south, p, "frozen", (q, a))
    if d == STAY:
        return WangTile(_edge(LIGHT, head(q2, b)), p, south, p, "stay", (q, a))
    if d == LEFT:
        return WangTile(_edge(PLAIN, sym(b)), p, south, _edge(LIGHT, arrow("L", q2)), "left", (q, a))
    return WangTile(_edge(PLAIN, sym(b)), _edge(LIGHT, arrow("R", q2)), south, p, "right", (q, a))


def arrival_tile(q, a, came_from: str) -> WangTile:
    """Head in state q lands on a cell holding a; came_from is "left" or "right"."""
    p = _edge(PLAIN)
    n, s = _edge(LIGHT, head(q, a)), _edge(PLAIN, sym(a))
    if came_from == "left":
        return WangTile(n, p, s, _edge(LIGHT, arrow("R", q)), "from-left", (q, a))
    return WangTile(n, _edge(LIGHT, arrow("L", q)), s, p, "from-right", (q, a))


def compile_tiles(tm: TuringMachine) -> frozenset:
    tiles = {seed_tile(), wall_tile()}
    for a in tm.alphabet:
        tiles |= {tile1(tm.initial, a), tile2(a), transmit_tile(a)}
        for q in tm.states:
            tiles.add(action_tile(tm, q, a))
            tiles.add(arrival_tile(q, a, "left"))
            tiles.add(arrival_tile(q, a, "right"))
    return frozenset(tiles)


def tile_counts(tiles: Iterable[WangTile]) -> dict[str, int]:
    out: dict[str, int] = {}
    for t in tiles:
        out[t.kind] = out.get(t.kind, 0) + 1
    return out


def rebuild_tile(tm, kind: str, params: tuple) -> WangTile | None:
    """The legitimate tile of a family for tm, or None if params are invalid."""
    try:
        if kind in ("tile1", "tile2", "transmit") and not tm.has_symbol(params[0]):
            return None
        if kind in ("from-left", "from-right") and not (tm.has_state(params[0]) and tm.has_symbol(params[1])):
            return None
        if kind == "seed":
            return seed_tile()
        if kind == "wall":
            return wall_tile()
        if kind == "tile1":
            return tile1(tm.initial, *params)
        if kind == "tile2":
            return tile2(*params)
        if kind == "transmit":
            return transmit_tile(*params)
        if kind in ("stay", "left", "right", "frozen"):
            t = action_tile(tm, *params)
            return t if t.kind == kind else None
        if kind == "from-left":
            return arrival_tile(*params, "left")
        if kind == "from-right":
            return arrival_tile(*params, "right")
    except (KeyError, TypeError, IndexError, InputError):
        return None
    return None


def is_machine_tile(tm, t: WangTile) -> bool:
    """Membership in the (possibly infinite) tileset of tm."""
    ref = rebuild_tile(tm, t.kind, t.params)
    return ref is not None and ref == t


# ---------------------------------------------------------------------------
# patches


@dataclass(frozen=True)
class TilePatch:
    """Rectangular array of tiles; ``rows[y][x]``, y = 0 at the bottom."""

    rows: tuple

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def height(self) -> int:
        return len(self.rows)

    def __getitem__(self, xy):
        x, y = xy
        return self.rows[y][x]

    def replace(self, x: int, y: int, t: WangTile) -> "TilePatch":
        rows = [list(r) for r in self.rows]
        rows[y][x] = t
        return TilePatch(tuple(tuple(r) for r in rows))


def diagram_to_patch(d: SpaceTimeDiagram, tm, width: int, crop: bool = False) -> TilePatch:
    """Tile rows encoding the diagram; column 0 is seed/wall.

    With ``crop`` the tape may extend past the window (only cells
    0..width-2 are drawn); otherwise the window must cover every written
    cell and head position.
    """
    if width < 1:
        raise InputError("width must be >= 1")
    first = d.rows[0]
    if first.head != 0 or first.state != tm.initial:
        raise InputError("diagram must start in the initial state at cell 0")
    if not crop:
        need = max(max(len(r.tape), r.head + 1) for r in d.rows)
        if need > width - 1:
            raise InputError(f"width {width} does not cover {need} tape cells")
    blank = tm.blank
    base = [seed_tile()]
    for x in range(1, width):
        a = _cell(first, x - 1, blank)
        base.append(tile1(tm.initial, a) if x == 1 else tile2(a))
    rows = [tuple(base)]
    for t in range(1, len(d.rows)):
        prev, cur = d.rows[t - 1], d.rows[t]
        mv = STAY
        if prev.state != tm.final:
            _, _, mv = tm.transition(prev.state, prev.read(blank))
            if prev.head + mv < 0:
                raise InternalError(f"row {t}: left move off the tape has no tile")
        row = [wall_tile()]
        for x in range(1, width):
            pos = x - 1
            if pos == prev.head:
                tile = action_tile(tm, prev.state, prev.read(blank))
            elif mv != STAY and pos == prev.head + mv:
                tile = arrival_tile(cur.state, _cell(prev, pos, blank), "left" if mv == RIGHT else "right")
            else:
                tile = transmit_tile(_cell(prev, pos, blank))
            row.append(tile)
        rows.append(tuple(row))
    for t, (row, conf) in enumerate(zip(rows, d.rows)):
        if [c.n[1] for c in row[1:]] != _north_labels(conf, width, blank):
            raise InternalError(f"row {t} does not spell the diagram")
    return TilePatch(tuple(rows))


def _north_labels(c: MachineConfig, width: int, blank) -> list:
    return [
        head(c.state, _cell(c, pos, blank)) if pos == c.head else sym(_cell(c, pos, blank))
        for pos in range(width - 1)
    ]


def _cell(c: MachineConfig, pos: int, blank):
    return c.tape[pos] if pos < len(c.tape) else blank


def patch_to_diagram(p: TilePatch, tm) -> SpaceTimeDiagram:
    """Read configurations off the north edges of each row."""
    out = []
    for y, row in enumerate(p.rows):
        state, head_pos, tape = None, None, []
        for x in range(1, p.width):
            lab = row[x].n[1]
            if lab is None:
                raise InputError(f"tile at ({x},{y}) carries no tape symbol")
            if lab[0] == "head":
                if head_pos is not None:
                    raise InputError(f"two heads in row {y}")
                state, head_pos = lab[1], x - 1
                tape.append(lab[2])
            else:
                tape.append(lab[1])
        if head_pos is None:
            raise InputError(f"no head inside the window in row {y}")
        out.append(make_config(state, tape, head_pos, tm.blank))
    return SpaceTimeDiagram(tuple(out))


# ---------------------------------------------------------------------------
# effectively closed sets and dovetailing

EMPTY, UNKNOWN = "EMPTY", "UNKNOWN"
REJECTED, UNDECIDED = "REJECTED", "UNDECIDED"


class EffectiveSet:
    """Budgeted rejector for a closed set Y of one-sided sequences.

    ``rejector(word, k)`` returns EMPTY when it can certify within k steps
    that no point of Y starts with ``word``.  EMPTY answers are memoised so
    that the verdict is monotone in k even for careless rejectors.
    """

    def __init__(self, alphabet: Sequence, rejector: Callable[[tuple, int], str], name: str = ""):
        self.alphabet = tuple(alphabet)
        self._rejector = rejector
        self.name = name
        self._memo: dict[tuple, int] = {}
        self._dove: dict[tuple, DovetailResult] = {}
        self._lock = threading.Lock()

    def query(self, word: Sequence, k: int) -> str:
        word = tuple(word)
        hit = self._memo.get(word)
        if hit is not None and hit <= k:
            return EMPTY
        v = self._rejector(word, k)
        if v not in (EMPTY, UNKNOWN):
            v = EMPTY if v is True else UNKNOWN
        if v == EMPTY:
            with self._lock:
                self._memo[word] = min(k, self._memo.get(word, k))
        return v

    def __repr__(self):
        return f"EffectiveSet({self.name or '?'})"


class DovetailResult(NamedTuple):
    status: str
    step: int | None = None
    length: int | None = None

    def to_json(self) -> dict:
        return {"status": self.status, "step": self.step, "length": self.length}


def dovetail(effset: EffectiveSet, prefix: Sequence, budget: int) -> DovetailResult:
    """Run the search loop for k = 1..budget on the prefixes of ``prefix``.

    The loop queries every word of length <= k at step k; words that are not
    prefixes of ``prefix`` cannot reject it, so only those are queried.
    """
    if budget < 0:
        raise InputError("budget must be >= 0")
    prefix = tuple(prefix)
    key = (prefix, budget)
    hit = effset._dove.get(key)
    if hit is not None:
        return hit
    res = DovetailResult(UNDECIDED)
    for k in range(1, budget + 1):
        for j in range(0, min(k, len(prefix)) + 1):
            if effset.query(prefix[:j], k) == EMPTY:
                res = DovetailResult(REJECTED, k, j)
                break
        if res.status == REJECTED:
            break
    effset._dove[key] = res
    return res


def golden_mean_set() -> EffectiveSet:
    def rej(w, k):
        return EMPTY if any(w[i] == "1" == w[i + 1] for i in range(len(w) - 1)) else UNKNOWN

    return EffectiveSet(("0", "1"), rej, "golden")


def full_set(alphabet=("0", "1")) -> EffectiveSet:
    return EffectiveSet(alphabet, lambda w, k: UNKNOWN, "full")


def named_set(name: str) -> EffectiveSet:
    if name == "golden":
        return golden_mean_set()
    if name == "full":
        return full_set()
    raise InputError(f"unknown set {name!r}")


# ---------------------------------------------------------------------------
# the search machine


class SearchMachine:
    """The dovetailing loop as a lazily tabulated Turing machine.

    Tape symbols are pairs (y_n, work) with work in {"_", "#"}; "#" marks
    cell 0.  States: "init", ("scan", k, w), ("return", k) and the final
    state "F".  In scan state the head reads y one cell at a time and asks
    the rejector about the word read so far at budget k; after k cells it
    walks back to the marker and starts over with k + 1.
    """

    final = "F"
    initial = "init"
    work_blank = "_"

    def __init__(self, effset: EffectiveSet):
        self.effset = effset
        self.alphabet = tuple((a, w) for a in effset.alphabet for w in ("_", "#"))
        self.blank = ("?", "_")  # never read when the input covers the run
        self._symbols = frozenset(self.alphabet) | {self.blank}

    def has_symbol(self, a) -> bool:
        return a in self._symbols

    def has_state(self, q) -> bool:
        if q in (self.initial, self.final):
            return True
        if not isinstance(q, tuple) or not q:
            return False
        if q[0] == "scan":
            return len(q) == 3 and isinstance(q[1], int) and isinstance(q[2], tuple) and len(q[2]) < q[1]
        return q[0] == "return" and len(q) == 2 and isinstance(q[1], int)

    def transition(self, q, sym_):
        a, w = sym_
        if q == self.final:
            return (q, sym_, STAY)
        if a == "?":
            raise InputError("search machine ran past the end of its input")
        if q == "init":
            return (("scan", 1, ()), (a, "#"), STAY)
        if q[0] == "scan":
            _, k, word = q
            if not word and self.effset.query((), k) == EMPTY:
                return (self.final, sym_, STAY)
            word = word + (a,)
            if self.effset.query(word, k) == EMPTY:
                return (self.final, sym_, STAY)
            if len(word) < k:
                return (("scan", k, word), sym_, RIGHT)
            return (("return", k + 1), sym_, STAY)
        if q[0] == "return":
            if w == "#":
                return (("scan", q[1], ()), sym_, STAY)
            return (q, sym_, LEFT)
        raise InputError(f"unknown search state {q!r}")

    def input_word(self, y: Sequence) -> tuple:
        return tuple((a, self.work_blank) for a in y)
