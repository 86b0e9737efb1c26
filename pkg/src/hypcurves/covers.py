"""Finite covers as permutation representations, and simple lifts of curves.

A cover of degree d is a transitive action of the generators on sheets
0..d-1; closed surfaces additionally require the relator to act trivially.
A vertex v of the pants graph lifts to (v, s), reached from the base vertex
by the tree path on sheet s.  Crossing a dart applies its word.

Covers are enumerated as coset tables: entries are filled in a fixed order
and new sheets are numbered as they appear, so every subgroup of index d is
produced exactly once with sheet 0 as its base sheet.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .intersection import Inconclusive, RibbonPath
from .kernel import FenchelNielsenMetric, random_metric
from .spine import Spine, build_spine, invert_word, primitive_root, reduce_word
from .surface import CurveCycle, PantsGraph, StructureError, dart_edge, rev


class CeilingExceeded(RuntimeError):
    def __init__(self, ceiling: int):
        super().__init__(f"no simple lift found up to degree {ceiling}")
        self.ceiling = ceiling


def _col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


@dataclass(frozen=True)
class Cover:
    degree: int
    perms: tuple            # perms[i][s] is the image of sheet s under generator i + 1
    relator: tuple = ()

    def __post_init__(self):
        for p in self.perms:
            if sorted(p) != list(range(self.degree)):
                raise StructureError("cover images must be permutations")
        if not self.transitive():
            raise StructureError("cover is not transitive")
        if self.relator and any(self.act(self.relator, s) != s for s in range(self.degree)):
            raise StructureError("relator does not act trivially")

    @property
    def inverses(self) -> tuple:
        out = []
        for p in self.perms:
            q = [0] * self.degree
            for s, t in enumerate(p):
                q[t] = s
            out.append(tuple(q))
        return tuple(out)

    def act(self, word, s: int) -> int:
        inv = None
        for x in word:
            if x > 0:
                s = self.perms[x - 1][s]
            else:
                if inv is None:
                    inv = self.inverses
                s = inv[-x - 1][s]
        return s

    def permutation(self, word) -> tuple:
        return tuple(self.act(word, s) for s in range(self.degree))

    def transitive(self) -> bool:
        seen, todo = {0}, [0]
        while todo:
            s = todo.pop()
            for p in self.perms:
                for t in (p[s], p.index(s)):
                    if t not in seen:
                        seen.add(t)
                        todo.append(t)
        return len(seen) == self.degree

    def conjugate(self, sigma) -> "Cover":
        """Relabel sheet s as sigma[s]."""
        perms = []
        for p in self.perms:
            q = [0] * self.degree
            for s in range(self.degree):
                q[sigma[s]] = sigma[p[s]]
            perms.append(tuple(q))
        return Cover(self.degree, tuple(perms), self.relator)

    def to_json(self) -> dict:
        return {"degree": self.degree, "perms": [list(p) for p in self.perms]}


def _table_cover(table, d, rank, relator) -> Cover:
    return Cover(d, tuple(tuple(table[s][2 * i] for s in range(d)) for i in range(rank)),
                 relator)


def _trace(table, word_cols, s):
    for c in word_cols:
        s = table[s][c]
        if s < 0:
            return None
    return s


def _consistent(table, n_def, relator_cols, fix_cols) -> bool:
    if relator_cols:
        for s in range(n_def):
            t = _trace(table, relator_cols, s)
            if t is not None and t != s:
                return False
    if fix_cols:
        t = _trace(table, fix_cols, 0)
        if t is not None and t != 0:
            return False
    return True


def coset_tables(rank: int, d: int, relator=(), fix=()):
    """Complete coset tables of index ``d`` (sheet 0 = base), optionally
    containing the word ``fix`` in the subgroup."""
    cols = 2 * rank
    table = [[-1] * cols for _ in range(d)]
    rel = [_col(x) for x in relator]
    fx = [_col(x) for x in fix]

    def rec(n_def):
        for s in range(n_def):
            row = table[s]
            for c in range(cols):
                if row[c] < 0:
                    break
            else:
                continue
            break
        else:
            if n_def == d:
                yield [r[:] for r in table]
            return
        targets = list(range(n_def)) + ([n_def] if n_def < d else [])
        for t in targets:
            if table[t][c ^ 1] >= 0:
                continue
            table[s][c] = t
            table[t][c ^ 1] = s
            new = n_def + (1 if t == n_def else 0)
            if _consistent(table, new, rel, fx):
                yield from rec(new)
            table[s][c] = -1
            table[t][c ^ 1] = -1

    yield from rec(1)


def _canonical(table, d, cols, base):
    num = {base: 0}
    order = [base]
    out = []
    i = 0
    while i < len(order):
        s = order[i]
        for c in range(cols):
            t = table[s][c]
            if t not in num:
                num[t] = len(order)
                order.append(t)
            out.append(num[t])
        i += 1
    return tuple(out)


def enumerate_covers(rank: int, d: int, relator=()):
    """Transitive degree-``d`` actions up to relabelling of sheets, in a fixed order."""
    if d < 1:
        raise ValueError("degree must be positive")
    cols = 2 * rank
    for table in coset_tables(rank, d, relator):
        own = _canonical(table, d, cols, 0)
        if all(_canonical(table, d, cols, b) >= own for b in range(1, d)):
            yield _table_cover(table, d, rank, tuple(relator))


def covers_for(sp: Spine, d: int):
    return enumerate_covers(sp.rank, d, sp.relator)


def lift_closes(cover: Cover, word, sheet: int = 0) -> bool:
    return cover.act(word, sheet) == sheet


# -- lifting paths ---------------------------------------------------------------

def lift_path(sp: Spine, cover: Cover, darts, sheet: int) -> list[int]:
    """Sheet at the tail of each dart of the path starting at (tail, sheet)."""
    out = []
    s = sheet
    for d in darts:
        out.append(s)
        s = cover.act(sp.dart_words[d], s)
    out.append(s)
    return out


def reduce_lifted_cycle(sp: Spine, cover: Cover, darts, sheet: int):
    """Freely and cyclically reduce a closed lifted path; returns (darts, sheets)."""
    sheets = lift_path(sp, cover, darts, sheet)
    if sheets[-1] != sheet:
        raise StructureError("the lift does not close")
    out: list[tuple[int, int]] = []
    for d, s in zip(darts, sheets):
        if out and out[-1][0] == rev(d):
            out.pop()
        else:
            out.append((d, s))
    i, j = 0, len(out) - 1
    while i < j and out[i][0] == rev(out[j][0]):
        i += 1
        j -= 1
    out = out[i:j + 1]
    return [d for d, _ in out], [s for _, s in out]


@dataclass(frozen=True)
class LiftResult:
    simple: bool
    closes: bool
    primitive: bool = True
    k: int | None = None
    method: str = ""


def _lift_open(g: PantsGraph, sp: Spine, cover: Cover, word, sheet: int) -> LiftResult:
    w = reduce_word(word)
    u, p = primitive_root(w)
    if not w:
        raise StructureError("null-homotopic curve")
    loop = sp.word_path(w)
    darts, sheets = reduce_lifted_cycle(sp, cover, loop, sheet)
    n = len(darts)
    # the lift is primitive unless it closes after a proper divisor of the path
    m = n // p
    for q in range(1, p):
        if p % q == 0 and sheets[q * m] == sheets[0] and all(
                sheets[i] == sheets[i + q * m] for i in range(n - q * m)):
            return LiftResult(False, True, False, None, "combinatorial")
    edges = set(sp.tree) | set(sp.generators)
    rp = RibbonPath(g, edges, darts)

    def same(i, j, sign):
        jj = j if sign > 0 else (n - j) % n
        return sheets[i] == sheets[jj]

    pairs = rp.linked_pairs(same)
    k = len(pairs) // 2
    return LiftResult(k == 0, True, True, k, "combinatorial")


def _hexagon_word(sp: Spine, h, upto: int):
    out = []
    for d in h.darts[:upto]:
        out += list(sp.dart_words[d])
    return tuple(out)


def _transition(sp: Spine, tiling, h: int, k: int, x):
    """Word carrying the sheet of hexagon ``h`` across its side ``k`` at offset ``x``."""
    g = tiling.g
    h2, k2, _ = tiling.crossing(h, k, x)
    path = tiling.crossing_path(h, k, x)
    W = (_hexagon_word(sp, g.hexagons[h], k) + sp.path_word(path)
         + invert_word(_hexagon_word(sp, g.hexagons[h2], k2)))
    return h2, W


def _lift_closed(g: PantsGraph, sp: Spine, cover: Cover, darts, sheet: int,
                 metric: FenchelNielsenMetric) -> LiftResult:
    from .tracing import Chord, chord_crossings, trace_cycle

    sheets = lift_path(sp, cover, darts, sheet)
    if sheets[-1] != sheet:
        return LiftResult(False, False)
    seams = [i for i, d in enumerate(darts) if g.is_seam(d)]
    tr = trace_cycle(g, metric, CurveCycle(tuple(darts)))
    if tr.cuff is not None or not seams:
        p, q = _root_return(cover, sp.path_word(darts), sheet)
        return LiftResult(q == p, True, q == p, 0 if q == p else None, "geodesic")
    i0 = seams[0]
    s = sheets[i0]
    h0, k0 = next((hx.index, kk) for hx in g.hexagons
                  for kk, dd in enumerate(hx.darts) if dd == darts[i0])
    s = cover.act(invert_word(_hexagon_word(sp, g.hexagons[h0], k0)), s)
    for h, k, x in tr.walk:
        _, W = _transition(sp, tr.tiling, h, k, x)
        s = cover.act(W, s)
    chords = []
    for ch in tr.chords:
        h2, W = _transition(sp, tr.tiling, ch.hexagon, *ch.leave)
        nxt = cover.act(W, s)
        d = g.hexagons[ch.hexagon].darts[ch.leave[0]]
        chords.append(Chord(ch.hexagon, ch.enter, ch.leave, ch.t_in, ch.t_out, s, ch.exit_key,
                            s if d % 2 == 0 else nxt))
        s = nxt
    n = len(chords)
    if chords[0].sheet != s:
        raise Inconclusive("lifted geodesic does not match the lifted cycle")
    P = tr.period
    for q in range(1, tr.power):
        if tr.power % q == 0 and all(chords[i].sheet == chords[i + q * P].sheet
                                     for i in range(n - q * P)):
            return LiftResult(False, True, False, None, "geodesic")
    k = len(chord_crossings(tr, chords))
    return LiftResult(k == 0, True, True, k, "geodesic")


def _root_return(cover: Cover, w, s: int) -> tuple[int, int]:
    """(p, q): ``w`` is a p-th power of a primitive u, and the lift of u through
    the sheet matching ``s`` first closes after q rounds."""
    w = reduce_word(w)
    i = 0
    while i < len(w) - 1 - i and w[i] == -w[-1 - i]:
        i += 1
    x, v = w[:i], w[i:len(w) - i]
    u, p = primitive_root(v)
    t0 = cover.act(x, s)
    q, t = 1, cover.act(u, t0)
    while t != t0:
        t = cover.act(u, t)
        q += 1
    return p, q


def lift_metric(g: PantsGraph, seed: int = 0) -> FenchelNielsenMetric:
    """Generic twisted metric used for geodesic lift tests."""
    return random_metric(g.pd, np.random.default_rng(seed))


def is_simple_lift(cover: Cover, g: PantsGraph, curve, sheet: int = 0,
                   spine: Spine | None = None, metrics=None) -> LiftResult:
    """Whether the lift of ``curve`` through ``sheet`` closes and is simple.

    ``curve`` is a word in the spine generators (based at the base vertex) or a
    CurveCycle (based at the tail of its first dart).
    """
    sp = spine or build_spine(g)
    if isinstance(curve, CurveCycle):
        darts = list(curve.darts)
        word = sp.path_word(darts)
        # move the base to the base vertex: the tree path carries no sheet change
    else:
        word = reduce_word(curve)
        darts = sp.word_path(word)
    if not word:
        raise StructureError("null-homotopic curve")
    if not lift_closes(cover, word, sheet):
        return LiftResult(False, False)
    if not g.pd.topology().closed:
        return _lift_open(g, sp, cover, word, sheet)
    # closed surfaces: reduce in G, then follow the geodesic
    if not isinstance(curve, CurveCycle):
        red, sheets = reduce_lifted_cycle(sp, cover, darts, sheet)
        darts, sheet = red, sheets[0]
    last = None
    for m in metrics or [lift_metric(g, s) for s in range(3)]:
        try:
            return _lift_closed(g, sp, cover, darts, sheet, m)
        except Inconclusive as exc:
            last = exc
    raise last


# -- minimal degree -----------------------------------------------------------------

@dataclass(frozen=True)
class DegreeResult:
    deg: int
    cover: Cover
    sheet: int
    ceiling: int
    k: int | None = None
    checked: dict = field(default_factory=dict)   # degree -> covers examined
    upper_bound_only: bool = False

    def to_json(self) -> dict:
        return {"deg": self.deg, "k": self.k, "ceiling": self.ceiling,
                "cover": self.cover.to_json(), "sheet": self.sheet,
                "checked": {str(d): n for d, n in sorted(self.checked.items())},
                "upper_bound_only": self.upper_bound_only}


def minimal_degree(g: PantsGraph, curve, ceiling: int = 8, spine: Spine | None = None,
                   k: int | None = None) -> DegreeResult:
    """Smallest degree of a cover with a closed simple lift of ``curve``.

    Every subgroup of index d containing the curve's based word is examined,
    which covers every closed lift in every cover of that degree.
    """
    if ceiling < 1:
        raise ValueError("ceiling must be at least 1")
    sp = spine or build_spine(g)
    word = sp.path_word(curve.darts) if isinstance(curve, CurveCycle) else reduce_word(curve)
    if not word:
        raise StructureError("null-homotopic curve")
    checked = {}
    skipped = False
    for d in range(1, ceiling + 1):
        n = 0
        for table in coset_tables(sp.rank, d, sp.relator, word):
            cover = _table_cover(table, d, sp.rank, sp.relator)
            n += 1
            try:
                res = is_simple_lift(cover, g, word, 0, sp)
            except Inconclusive:
                skipped = True
                continue
            if res.simple:
                checked[d] = n
                return DegreeResult(d, cover, 0, ceiling, k, checked, skipped)
        checked[d] = n
    raise CeilingExceeded(ceiling)


def verify_minimality(g: PantsGraph, curve, result: DegreeResult, spine=None) -> bool:
    """Re-run every degree below ``result.deg`` over all covers and all sheets."""
    sp = spine or build_spine(g)
    word = sp.path_word(curve.darts) if isinstance(curve, CurveCycle) else reduce_word(curve)
    for d in range(1, result.deg):
        for cover in enumerate_covers(sp.rank, d, sp.relator):
            for s in range(d):
                if lift_closes(cover, word, s) and is_simple_lift(cover, g, word, s, sp).simple:
                    return False
    return True


@dataclass(frozen=True)
class SweepRow:
    k: int
    size: int
    max_deg: int | None
    witness: str | None
    lower_witnessed: bool | None
    exceeded: int = 0


def corpus_degree(g: PantsGraph, item, ceiling: int = 8, spine: Spine | None = None):
    """Minimal degree of a corpus curve, or None above the ceiling."""
    try:
        return minimal_degree(g, item.cycle, ceiling, spine, item.k).deg
    except CeilingExceeded:
        return None


def sweep_f_sigma(g: PantsGraph, corpus, k_max: int, ceiling: int = 8, degrees=None):
    """Per k: the largest degree over corpus curves with that k.

    ``degrees`` maps curve ids to precomputed results of ``corpus_degree``.
    """
    sp = build_spine(g)
    bins: dict[int, list] = {k: [] for k in range(k_max + 1)}
    for item in corpus:
        if item.k <= k_max:
            bins[item.k].append(item)
    rows = []
    for k in range(k_max + 1):
        best, wit, exceeded = None, None, 0
        for item in bins[k]:
            deg = degrees[item.id] if degrees is not None else corpus_degree(g, item, ceiling, sp)
            if deg is None:
                exceeded += 1
                continue
            if best is None or deg > best:
                best, wit = deg, item.id
        if exceeded:
            best = ceiling + 1
        rows.append(SweepRow(k, len(bins[k]), best if bins[k] else None, wit,
                             (best >= k + 1) if best is not None else None, exceeded))
    slopes = [r.max_deg / max(r.k, 1) for r in rows if r.max_deg is not None]
    return rows, (max(slopes) if slopes else math.nan)
