"""The final subshift on F2 x F2 and its factor map onto an effective action.

Group elements of F2 x F2 are pairs ``(g1, g2)`` of reduced words.  The
two paradoxical layers are lifted from the factors, so the horizontal layer
only moves the first coordinate and the vertical layer only the second.
Every element h that lies on some grid gets a label (base, (n, n')) with
h = grid(base, (n, n')); the computation layers are copied from the
computation tiling of base⁻¹·y, and everything else gets the fill pair.

Symbols of A = {0,1}^S are tuples of "0"/"1" indexed by ``S_ORDER``
(identity first, then the eight standard generators).
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import product

from .errors import InputError, MembershipError
from .groups import finv_cached as finv, fmul_cached as fmul
from .machine import (
    EMPTY, REJECTED, UNKNOWN, EffectiveSet, SearchMachine, WangTile, dovetail,
    full_set, golden_mean_set, is_machine_tile, seed_tile, transmit_tile,
)
from .paradox import (
    BLUE, CANONICAL_K, GREEN, OUT, ParadoxPatch, canonical_patch, k_ball, opposite,
    path_nodes,
)
from .report import Report, Violation
from .tilespace import _carries_final, default_budget, search_patch

IDENTITY = ("", "")
H_GENS = [(c, "") for c in "aAbB"]
V_GENS = [("", c) for c in "aAbB"]
GENS = H_GENS + V_GENS
S_ORDER = [IDENTITY] + GENS
S_INDEX = {s: i for i, s in enumerate(S_ORDER)}
A0 = ("0",) * len(S_ORDER)


def gmul(x, y):
    return (fmul(x[0], y[0]), fmul(x[1], y[1]))


def ginv(x):
    return (finv(x[0]), finv(x[1]))


def fmt(g) -> str:
    return f"{g[0]}|{g[1]}"


# ---------------------------------------------------------------------------
# effective actions


@dataclass
class EffectiveAction:
    """An action of F2 x F2 on a closed X in {0,1}^N given by generator evaluators.

    ``evaluator(s, n, prefix)`` returns (s·x)_n or None when the prefix is
    too short to decide it.
    """

    xset: EffectiveSet
    evaluator: Callable[[tuple, int, tuple], str | None]
    name: str = ""
    gens: tuple = tuple(GENS)
    _memo: dict = field(default_factory=dict, repr=False)
    _yset: EffectiveSet | None = field(default=None, repr=False)

    def apply_gen(self, s, x: tuple) -> tuple:
        key = (s, x)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if s == IDENTITY:
            out = x
        else:
            vals = []
            for n in range(len(x)):
                v = self.evaluator(s, n, x)
                if v is None:
                    break
                vals.append(v)
            out = tuple(vals)
        self._memo[key] = out
        return out

    def apply(self, g, x: tuple) -> tuple:
        """g·x as far as the prefix determines it."""
        key = ("elem", g, x)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        letters = [(c, "") for c in g[0]] + [("", c) for c in g[1]]
        cur = x
        for s in reversed(letters):
            cur = self.apply_gen(s, cur)
        self._memo[key] = cur
        return cur

    def represent(self, x: Sequence) -> tuple:
        """The point y of the set representation over x, as far as defined."""
        x = tuple(x)
        cols = [self.apply_gen(s, x) for s in S_ORDER]
        n = min(len(c) for c in cols)
        return tuple(tuple(c[i] for c in cols) for i in range(n))

    @property
    def yset(self) -> EffectiveSet:
        """Set representation as an effective set over A."""
        if self._yset is None:
            def rej(w, k):
                xs = tuple(a[0] for a in w)
                if self.xset.query(xs, k) == EMPTY:
                    return EMPTY
                for i, s in enumerate(S_ORDER[1:], 1):
                    out = self.apply_gen(s, xs)
                    if any(out[n] != w[n][i] for n in range(len(out))):
                        return EMPTY
                return UNKNOWN

            alphabet = tuple(product("01", repeat=len(S_ORDER)))
            self._yset = EffectiveSet(alphabet, rej, f"Y[{self.name}]")
        return self._yset


def _trivial_eval(s, n, p):
    return p[n] if n < len(p) else None


def _odometer_eval(s, n, p):
    if n >= len(p):
        return None
    up = (s[0] or s[1]).islower()
    carry = "1" if up else "0"
    flip = all(p[i] == carry for i in range(n))
    return ("1" if p[n] == "0" else "0") if flip else p[n]


def trivial_golden_action() -> EffectiveAction:
    return EffectiveAction(golden_mean_set(), _trivial_eval, "trivial-golden")


def odometer_action() -> EffectiveAction:
    """Every standard generator adds one (little-endian binary), inverses subtract."""
    return EffectiveAction(full_set(), _odometer_eval, "odometer")


def named_action(name: str) -> EffectiveAction:
    if name == "trivial-golden":
        return trivial_golden_action()
    if name == "odometer":
        return odometer_action()
    raise InputError(f"unknown action {name!r}")


def set_representation_check(action: EffectiveAction, ypatch: Mapping[int, tuple] | Sequence, budget: int | None = None):
    """("CONSISTENT",) or ("VIOLATION", s, n)."""
    if budget is None:
        budget = default_budget()
    if isinstance(ypatch, Mapping):
        n = 0
        rows = []
        while n in ypatch:
            rows.append(tuple(ypatch[n]))
            n += 1
    else:
        rows = [tuple(r) for r in ypatch]
    xs = tuple(r[0] for r in rows)
    res = dovetail(action.xset, xs, budget)
    if res.status == REJECTED:
        return ("VIOLATION", IDENTITY, max(res.length - 1, 0))
    for i, s in enumerate(S_ORDER[1:], 1):
        out = action.apply_gen(s, xs)
        for n in range(len(out)):
            if rows[n][i] != out[n]:
                return ("VIOLATION", s, n)
    return ("CONSISTENT",)


# ---------------------------------------------------------------------------
# windows and lifted layers


def rule_moves(K: Iterable[str] = CANONICAL_K) -> list[tuple]:
    """(K ∪ {1}) x (K ∪ {1}) minus the identity: the neighbourhood of the rules."""
    ks = [""] + sorted(K)
    return [(a, b) for a in ks for b in ks if (a, b) != IDENTITY]


def final_window(r: int, K: Iterable[str] = CANONICAL_K) -> set[tuple]:
    """Ball of radius r for ``rule_moves``; it is the product of the K-balls."""
    fb = k_ball(r, K)
    return {(a, b) for a in fb for b in fb}


@dataclass(frozen=True)
class LiftedParadoxPair:
    rho_h: Mapping = field(hash=False)
    rho_v: Mapping = field(hash=False)
    moveset: frozenset = CANONICAL_K

    @property
    def window(self):
        return self.rho_h.keys()

    def factor_h(self) -> ParadoxPatch:
        return ParadoxPatch(self.moveset, {g[0]: a for g, a in self.rho_h.items() if g[1] == ""})

    def factor_v(self) -> ParadoxPatch:
        return ParadoxPatch(self.moveset, {g[1]: a for g, a in self.rho_v.items() if g[0] == ""})


def lift_pair(ph: ParadoxPatch, pv: ParadoxPatch, window: Iterable[tuple]) -> LiftedParadoxPair:
    rh, rv = {}, {}
    for g in window:
        if g[0] not in ph.cells or g[1] not in pv.cells:
            raise InputError(f"factor patches do not cover {fmt(g)}")
        rh[g] = ph.cells[g[0]]
        rv[g] = pv.cells[g[1]]
    return LiftedParadoxPair(rh, rv, frozenset(ph.moveset) | frozenset(pv.moveset))


def canonical_pair(r: int) -> LiftedParadoxPair:
    fb = k_ball(r)
    p = canonical_patch(fb)
    return lift_pair(p, p, final_window(r))


def _hmove(g, d):
    return (fmul(g[0], d), g[1])


def _vmove(g, d):
    return (g[0], fmul(g[1], d))


def lifted_gamma(layer: Mapping, g, n: int, horizontal: bool):
    """n-th node of the path of g in one lifted layer, or OUT."""
    mv = _hmove if horizontal else _vmove
    a = layer.get(g)
    if a is None:
        return OUT
    tb = opposite(a.color)
    cur = mv(g, a.left(tb))
    for _ in range(n):
        c = layer.get(cur)
        if c is None:
            return OUT
        cur = mv(cur, c.left(tb))
    return cur if cur in layer else OUT


def grid(gpair, u: tuple[int, int], rho: LiftedParadoxPair):
    """(gamma^H_{g1}(n), gamma^V_{g2}(n')) or OUT."""
    n, n2 = u
    h = lifted_gamma(rho.rho_h, gpair, n, True)
    v = lifted_gamma(rho.rho_v, gpair, n2, False)
    if h is OUT or v is OUT:
        return OUT
    pt = (h[0], v[1])
    return pt if pt in rho.rho_h else OUT


# ---------------------------------------------------------------------------
# final patches


@dataclass(frozen=True)
class FinalPatch:
    radius: int
    rho: LiftedParadoxPair
    tau: Mapping = field(hash=False)
    sigma: Mapping = field(hash=False)

    @property
    def window(self):
        return self.rho.window

    def replace(self, tau=None, sigma=None, rho=None) -> "FinalPatch":
        t = dict(self.tau)
        t.update(tau or {})
        s = dict(self.sigma)
        s.update(sigma or {})
        return FinalPatch(self.radius, rho or self.rho, t, s)


def fill_tile() -> WangTile:
    return transmit_tile((A0, "_"))


def _factor_labels(layer: Mapping, coords: Iterable[str], horizontal: bool) -> dict:
    """coord -> (base coord, n) by walking the image arrows back to the color change.

    Coordinates whose walk leaves the window or never changes color are
    left out (they get the fill pair).
    """
    key = (lambda c: (c, "")) if horizontal else (lambda c: ("", c))
    labels = {}
    for c in coords:
        cur = c
        a = layer[key(cur)]
        steps = 0
        limit = len(layer)
        while steps <= limit:
            prev = fmul(cur, a.r)
            b = layer.get(key(prev))
            if b is None:
                break
            if b.color != a.color:
                labels[c] = (prev, steps)
                break
            cur, a = prev, b
            steps += 1
    return labels


def check_pair(rho: LiftedParadoxPair) -> Report:
    """Fiber constancy and the local rules of both lifted layers."""
    out = Report()
    rh, rv = rho.rho_h, rho.rho_v
    K = rho.moveset
    skipped = 0
    for g in rh:
        g1, g2 = g
        base_h = rh.get((g1, ""))
        if base_h is None:
            skipped += 1
        elif rh[g] != base_h:
            out.append(Violation("fiber", g, "horizontal layer not constant along the vertical fiber"))
        base_v = rv.get(("", g2))
        if base_v is None:
            skipped += 1
        elif rv[g] != base_v:
            out.append(Violation("fiber", g, "vertical layer not constant along the horizontal fiber"))
        for layer, horizontal, name in ((rh, True, "H"), (rv, False, "V")):
            a = layer[g]
            if a.lg not in K or a.lb not in K or a.r not in K:
                out.append(Violation(f"paradox-{name}", g, "displacement not in K"))
            for t, d in ((GREEN, a.lg), (BLUE, a.lb)):
                b = layer.get((fmul(g1, d), g2) if horizontal else (g1, fmul(g2, d)))
                if b is None:
                    skipped += 1
                elif b.color != t or b.r != finv(d):
                    out.append(Violation(f"paradox-{name}", g, f"L_{t} neighbour does not point back"))
            d = a.r
            b = layer.get((fmul(g1, d), g2) if horizontal else (g1, fmul(g2, d)))
            if b is None:
                skipped += 1
            elif (b.lg if a.color == GREEN else b.lb) != finv(d):
                out.append(Violation(f"paradox-{name}", g, "image does not point back"))
    out.skipped += skipped
    return out


def build_final(x: Sequence, action: EffectiveAction, rho: LiftedParadoxPair, budget: int | None = None) -> FinalPatch:
    if budget is None:
        budget = default_budget()
    x = tuple(str(c) for c in x)
    if check_pair(rho):
        raise InputError("paradox layers are not valid on the window")
    res = dovetail(action.xset, x, budget)
    if res.status == REJECTED:
        raise MembershipError(f"x rejected: prefix of length {res.length} at step {res.step}")
    window = list(rho.window)
    hl = _factor_labels(rho.rho_h, {g[0] for g in window}, True)
    vl = _factor_labels(rho.rho_v, {g[1] for g in window}, False)
    reach = {}
    maxn = maxn2 = 0
    for g in window:
        a, b = hl.get(g[0]), vl.get(g[1])
        if a is not None and b is not None:
            reach[g] = ((a[0], b[0]), (a[1], b[1]))
            maxn, maxn2 = max(maxn, a[1]), max(maxn2, b[1])
    width, height = maxn + 1, maxn2 + 1
    need = width + height - 1
    yset = action.yset
    comp_cache: dict = {}

    def comp_for(base):
        xb = action.apply(ginv(base), x)
        hit = comp_cache.get(xb)
        if hit is None:
            yb = action.represent(xb)
            if len(yb) < need:
                raise InputError(f"x is too short: the window needs {need} symbols of every translate")
            r = dovetail(yset, yb[:need], budget)
            if r.status == REJECTED:
                raise MembershipError(f"translate {xb} is rejected")
            hit = (search_patch(yb[:need], yset, width, height), yb)
            comp_cache[xb] = hit
        return hit

    w0 = fill_tile()
    tau, sigma = {}, {}
    for g in window:
        lab = reach.get(g)
        if lab is None:
            tau[g], sigma[g] = w0, A0
            continue
        base, (n, n2) = lab
        patch, yb = comp_for(base)
        tau[g] = patch[n, n2]
        sigma[g] = yb[n + n2]
    return FinalPatch(_radius_of(window), rho, tau, sigma)


def _radius_of(window) -> int:
    fb = {g[0] for g in window}
    r = 0
    while len(k_ball(r)) < len(fb):
        r += 1
    return r


# ---------------------------------------------------------------------------
# validation


def validate_final(z: FinalPatch, action: EffectiveAction, budget: int | None = None) -> Report:
    if budget is None:
        budget = default_budget()
    yset = action.yset
    machine = SearchMachine(yset)
    rh, rv = z.rho.rho_h, z.rho.rho_v
    tau, sigma = z.tau, z.sigma
    # coherence only reads well-formed symbols; bad ones are reported below
    if not all(_well_formed(v) for v in sigma.values()):
        sigma_ok = {k: v for k, v in sigma.items() if _well_formed(v)}
    else:
        sigma_ok = sigma
    out = check_pair(z.rho)
    seed = seed_tile()
    legit: dict = {}

    for g in z.window:
        if g not in tau or g not in sigma:
            out.append(Violation("missing", g, "layer not total on the window"))
            continue
        t = tau[g]
        k = (t, t.kind, t.params)
        if k not in legit:
            ok = is_machine_tile(machine, t)
            legit[k] = ok
            if ok and t.kind in ("tile1", "tile2") and t.params[0][1] != machine.work_blank:
                legit[k] = False
            if _carries_final(t, machine.final):
                legit[k] = False
        if not legit[k]:
            out.append(Violation("tile", g, f"{t.kind} tile not allowed"))
        s_g = sigma[g]
        if not _well_formed(s_g):
            out.append(Violation("alphabet", g, "sigma symbol has the wrong shape"))
            continue
        hb, vb = rh[g], rv[g]
        g1, g2 = g
        # the grid origin carries the seed
        origin = (fmul(g1, hb.left(opposite(hb.color))), fmul(g2, vb.left(opposite(vb.color))))
        if origin in tau:
            if tau[origin] != seed:
                out.append(Violation("grid-seed", origin, f"grid origin of {fmt(g)} is not the seed"))
        else:
            out.skipped += 1
        right = (fmul(g1, hb.left(hb.color)), g2)
        up = (g1, fmul(g2, vb.left(vb.color)))
        rt, ut = tau.get(right), tau.get(up)
        # Wang matching along the grid
        if rt is None:
            out.skipped += 1
        elif t.e != rt.w:
            out.append(Violation("grid-horizontal", g, f"east edge does not match {fmt(right)}"))
        if ut is None:
            out.skipped += 1
        elif t.n != ut.s:
            out.append(Violation("grid-vertical", g, f"north edge does not match {fmt(up)}"))
        # constant antidiagonals and input coupling
        if rt is not None and ut is not None:
            if sigma[right] != sigma[up]:
                out.append(Violation("grid-sync", g, "sigma differs right and up"))
        else:
            out.skipped += 1
        if rt is not None:
            if rt.kind in ("tile1", "tile2") and legit.get((rt, rt.kind, rt.params), True):
                a = rt.params[0]
                if isinstance(a, tuple) and a[1] == machine.work_blank and s_g != a[0]:
                    out.append(Violation("grid-coupling", g, f"input tile at {fmt(right)} disagrees with sigma"))
        # coherence with the neighbouring grids
        lh = (origin[0], g2)
        lv = (g1, origin[1])
        sig_lh, sig_lv = sigma_ok.get(lh), sigma_ok.get(lv)
        for i, c in enumerate("aAbB", 1):
            ci = c.swapcase()
            gs = (fmul(g1, ci), g2)
            b = rh.get(gs)
            rhs = None if b is None else (fmul(gs[0], b.lb if b.color == GREEN else b.lg), g2)
            skipped = _coherence(out, sigma_ok, g, H_GENS[i - 1], i, lh, sig_lh, rhs)
            gs = (g1, fmul(g2, ci))
            b = rv.get(gs)
            rhs = None if b is None else (g1, fmul(gs[1], b.lb if b.color == GREEN else b.lg))
            skipped += _coherence(out, sigma_ok, g, V_GENS[i - 1], i + 4, lv, sig_lv, rhs)
            out.skipped += skipped

    # budgeted effectiveness of every grid's bottom row
    # rows are keyed by their first node, so each grid is checked once
    rows: dict = {}
    for g in z.window:
        start, word = _row_readout(z, g)
        if word:
            rows[start] = word
    verdicts: dict = {}
    for start, word in rows.items():
        res = verdicts.get(word)
        if res is None:
            res = verdicts[word] = dovetail(yset, word, budget)
        if res.status == REJECTED:
            out.append(Violation("effectiveness", start, f"grid row from {fmt(start)} rejected at length {res.length}, step {res.step}"))
    return out


def _well_formed(a) -> bool:
    return isinstance(a, tuple) and len(a) == len(S_ORDER)


def _coherence(out, sigma, g, s, idx, lhs, sig_lhs, rhs) -> int:
    sig_rhs = None if rhs is None else sigma.get(rhs)
    if sig_lhs is None or sig_rhs is None:
        return 1
    if sig_lhs[idx] != sig_rhs[0]:
        out.append(Violation("coherence", (g, s), f"component {fmt(s)} at {fmt(lhs)} vs identity component at {fmt(rhs)}"))
    return 0


def _row_readout(z: FinalPatch, g) -> tuple:
    """(grid(g, (0, 0)), sigma along grid(g, (n, 0)) while inside the window)."""
    rh, rv, sigma = z.rho.rho_h, z.rho.rho_v, z.sigma
    a, v = rh.get(g), rv.get(g)
    if a is None or v is None:
        return None, ()
    col = fmul(g[1], v.left(opposite(v.color)))
    tb = opposite(a.color)
    cur = (fmul(g[0], a.left(tb)), g[1])
    start = (cur[0], col)
    word = []
    while True:
        c = rh.get(cur)
        node = (cur[0], col)
        if c is None or node not in rh or node not in sigma:
            break
        word.append(sigma[node])
        cur = (fmul(cur[0], c.left(tb)), cur[1])
    return start, tuple(word)


# ---------------------------------------------------------------------------
# factor map and equivariance


def factor_phi(z: FinalPatch, m: int) -> str:
    out = []
    for n in range(m):
        node = grid(IDENTITY, (n, 0), z.rho)
        if node is OUT or node not in z.sigma:
            break
        out.append(z.sigma[node][S_INDEX[IDENTITY]])
    return "".join(out)


class ShiftedView(Mapping):
    """Read-only translate of a patch layer: view[h] = base[s⁻¹h]."""

    def __init__(self, base: Mapping, s):
        self._base = base
        self._s = s
        self._sinv = ginv(s)

    def __getitem__(self, h):
        return self._base[gmul(self._sinv, h)]

    def __contains__(self, h):
        return gmul(self._sinv, h) in self._base

    def get(self, h, default=None):
        return self._base.get(gmul(self._sinv, h), default)

    def __iter__(self):
        return (gmul(self._s, h) for h in self._base)

    def __len__(self):
        return len(self._base)


def shift_final(z: FinalPatch, s) -> FinalPatch:
    """s·z, with (s·z)(h) = z(s⁻¹h); the layers are lazy views."""
    rho = LiftedParadoxPair(ShiftedView(z.rho.rho_h, s), ShiftedView(z.rho.rho_v, s), z.rho.moveset)
    return FinalPatch(z.radius, rho, ShiftedView(z.tau, s), ShiftedView(z.sigma, s))


@dataclass(frozen=True)
class EquivarianceResult:
    ok: bool
    compared: int
    lhs: str
    rhs: str
    counterexample: int | None = None

    def __bool__(self):
        return self.ok


def check_equivariance(z: FinalPatch, s, m: int, action: EffectiveAction) -> EquivarianceResult:
    """Compare phi(s·z) with s·phi(z) on the coordinates both sides determine."""
    lhs = factor_phi(shift_final(z, s), m)
    base = factor_phi(z, 10 ** 6)
    rhs = "".join(action.apply_gen(s, tuple(base)))[:m]
    k = min(len(lhs), len(rhs))
    for i in range(k):
        if lhs[i] != rhs[i]:
            return EquivarianceResult(False, k, lhs, rhs, i)
    return EquivarianceResult(True, k, lhs, rhs)


# ---------------------------------------------------------------------------
# the one-dimensional extension over a single paradox layer


def path_labels(p: ParadoxPatch) -> dict:
    """h -> (base, n) with h = gamma_base(n), for every h whose walk back stays inside."""
    cells = p.cells
    labels = {}
    for c, a in cells.items():
        cur, steps = c, 0
        while steps <= len(cells):
            prev = fmul(cur, a.r)
            b = cells.get(prev)
            if b is None:
                break
            if b.color != a.color:
                labels[c] = (prev, steps)
                break
            cur, a = prev, b
            steps += 1
    return labels


def copied_layer(p: ParadoxPatch, x: Sequence, fill: str = "0") -> dict:
    """y(gamma_g(n)) = x_n for every labelled element, fill elsewhere."""
    labels = path_labels(p)
    out = {}
    for h in p.cells:
        lab = labels.get(h)
        out[h] = x[lab[1]] if lab is not None and lab[1] < len(x) else fill
    return out


def validate_seward(p: ParadoxPatch, layer: Mapping, effset: EffectiveSet, budget: int | None = None) -> Report:
    """Path words must survive the rejector; neighbouring paths must agree.

    For the trivial action the second constraint says the words read from
    g and from g·s are prefixes of one common point, i.e. they agree on
    their common length.
    """
    if budget is None:
        budget = default_budget()
    out = Report()
    words = {}
    for g in p.cells:
        nodes = path_nodes(g, p, len(p.cells))
        words[g] = tuple(layer[h] for h in nodes)
    for g, w in words.items():
        if not w:
            continue
        res = dovetail(effset, w, budget)
        if res.status == REJECTED:
            out.append(Violation("path", (g, res.length), f"word along the path of {g or 'ε'} rejected at length {res.length}"))
    for g, w in words.items():
        for s in "aAbB":
            h = fmul(g, s)
            v = words.get(h)
            if v is None:
                out.skipped += 1
                continue
            k = min(len(w), len(v))
            if w[:k] != v[:k]:
                i = next(j for j in range(k) if w[j] != v[j])
                out.append(Violation("compatibility", (g, s), f"paths of {g or 'ε'} and {h or 'ε'} differ at {i}"))
    return out
