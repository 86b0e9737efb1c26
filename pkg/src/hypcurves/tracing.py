"""Trace closed geodesics through the hexagon tiling.

Every hexagon gets a model in the hyperboloid, with its corners developed
from corner 0 by sides and left quarter turns.  The axis of the holonomy of a
cycle is found in the model of one hexagon and then followed chord by chord
across hexagon sides, sliding along glued cuffs by their shears.  Two chords
in one hexagon cross exactly when their endpoints interleave on the boundary,
which counts the self-intersections of the closed geodesic without any
reference to the combinatorics of the cycle.

Symmetric surfaces (every one-holed torus, for one) force self-crossings onto
hexagon sides.  Side crossings are therefore recorded at a canonical position
on their seam or cuff, and strands passing through the same side point are
counted there instead of inside a hexagon.

The geodesic flow expands errors exponentially, so all of this runs in
mpmath with a precision sized to the lengths involved.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .frames import SO21, lorentz_cross, minkowski, mp_namespace
from .holonomy import develop, realize
from .intersection import Inconclusive, IntersectionResult, power_formula
from .kernel import FenchelNielsenMetric, GeometryError
from .surface import CurveCycle, PantsGraph, StructureError, dart_edge


@dataclass
class Chord:
    hexagon: int
    enter: tuple      # (side, distance from the side's first corner)
    leave: tuple
    t_in: object
    t_out: object
    sheet: int = 0
    exit_key: tuple = ()
    exit_sheet: int | None = None   # sheet of the canonical face at the exit side

    def perimeter(self, sides):
        return (self.enter[0] + float(self.enter[1] / sides[self.enter[0]]),
                self.leave[0] + float(self.leave[1] / sides[self.leave[0]]))


class HexagonTiling:
    def __init__(self, g: PantsGraph, metric: FenchelNielsenMetric, dps: int):
        self.g = g
        self.metric = metric
        self.num = mp_namespace(dps)
        self.b = SO21(self.num)
        self.rg = realize(g, metric, self.num)
        b = self.b
        self.face_of = {}
        self.frames = []
        self.sides = []
        self.normals = []
        self.corners = []
        origin = (self.num.one, self.num.zero, self.num.zero)
        left = (self.num.zero, self.num.zero, self.num.one)
        for h in g.hexagons:
            Ls = [self.rg.dart_length(d) for d in h.darts]
            F = b.identity()
            fr = []
            for k, d in enumerate(h.darts):
                self.face_of[d] = (h.index, k)
                fr.append(F)
                F = b.mul(b.mul(F, b.translate(Ls[k])), b.rotate(1))
            err = max(abs(x - y) for x, y in zip(F, b.identity()))
            if err > self.num.mpf(10) ** (-dps // 2):
                raise GeometryError(f"hexagon {h.index} does not close ({float(err):.2e})")
            self.frames.append(fr)
            self.sides.append(Ls)
            self.corners.append([b.apply(f, origin) for f in fr])
            self.normals.append([b.apply(f, left) for f in fr])
        self.partner = {}
        for cid, (c, cc) in g.cuff_edges.items():
            self.partner[c], self.partner[cc] = cc, c
            self.partner[c ^ 1], self.partner[cc ^ 1] = cc ^ 1, c ^ 1

    def crossing(self, h: int, k: int, x):
        """Hexagon across side ``k`` of ``h`` at distance ``x`` from corner ``k``,
        with the matrix taking its model coordinates to those of ``h``."""
        b = self.b
        d = self.g.hexagons[h].darts[k]
        e = self.g.edges[dart_edge(d)]
        L = self.sides[h][k]
        if e.kind == "seam":
            shift, dj = L, d
        else:
            cuff = self.g.cuffs[e.cuff]
            if not cuff.glued:
                raise GeometryError("geodesic reached a boundary cuff")
            sigma = self.rg.shear[e.cuff]
            j = int(self.num.ctx.floor((x - sigma) / L))
            dj = d if j % 2 == 0 else self.partner[d]
            shift = sigma + (j + 1) * L
        h2, k2 = self.face_of[dj ^ 1]
        N = b.mul(b.mul(b.mul(self.frames[h][k], b.translate(shift)), b.rotate(2)),
                  b.inv(self.frames[h2][k2]))
        return h2, k2, N

    def crossing_path(self, h: int, k: int, x) -> list[int]:
        """Darts of G from the tail of side ``k`` of ``h`` to the tail of the side
        it is glued to at distance ``x``, homotopic to a path through that point."""
        d = self.g.hexagons[h].darts[k]
        e = self.g.edges[dart_edge(d)]
        if e.kind == "seam":
            return [d]
        L = self.sides[h][k]
        m = int(self.num.ctx.floor((x - self.rg.shear[e.cuff]) / L)) + 1
        fwd = [d, self.partner[d]]
        if m >= 0:
            return [fwd[i % 2] for i in range(m)]
        back = [self.partner[d] ^ 1, d ^ 1]
        return [back[i % 2] for i in range(-m)]

    def side_key(self, h: int, k: int, x):
        """Canonical position of a boundary point of hexagon ``h``.

        Seam points are measured from the seam's tail; cuff points in the
        primary cuff direction from the primary foot, modulo the cuff length.
        """
        d = self.g.hexagons[h].darts[k]
        e = self.g.edges[dart_edge(d)]
        L = self.rg.edge_length[e.index]
        if e.kind == "seam":
            return ("s", e.index, x if d % 2 == 0 else L - x, None)
        c, cc = self.g.cuff_edges[e.cuff]
        ell = 2 * L
        sigma = self.rg.shear[e.cuff]
        if d == c:
            u = x
        elif d == cc:
            u = L + x
        elif d == cc ^ 1:
            u = ell + sigma - x
        else:
            u = L + sigma - x
        return ("c", e.cuff, u % ell, ell)

    def centroid(self, h: int):
        s = [sum(c[i] for c in self.corners[h]) for i in range(3)]
        r = self.num.sqrt(-minkowski(s, s))
        return tuple(x / r for x in s)


class Line:
    """Oriented geodesic with null endpoints, parametrized by arc length."""

    def __init__(self, em, ep, num):
        self.em, self.ep, self.num = em, ep, num
        self.scale = num.sqrt(-2 * minkowski(em, ep))

    def point(self, t):
        a, c = self.num.exp(-t), self.num.exp(t)
        return tuple((a * x + c * y) / self.scale for x, y in zip(self.em, self.ep))

    def moved(self, M, b):
        return Line(b.apply(M, self.em), b.apply(M, self.ep), self.num)


def _hits(tiling: HexagonTiling, h: int, line: Line, tol):
    num = tiling.num
    out = []
    ns = tiling.normals[h]
    for k in range(6):
        a = minkowski(ns[k], line.em)
        c = minkowski(ns[k], line.ep)
        if a * c >= 0:
            continue
        t = num.log(-a / c) / 2
        X = line.point(t)
        if minkowski(ns[k - 1], X) < -tol or minkowski(ns[(k + 1) % 6], X) < -tol:
            continue
        x = num.acosh(max(-minkowski(tiling.corners[h][k], X), num.one))
        out.append((t, k, x))
    out.sort()
    return out


def _on_side(tiling, h, line, tol):
    for k in range(6):
        a = minkowski(tiling.normals[h][k], line.em)
        c = minkowski(tiling.normals[h][k], line.ep)
        if abs(a) < tol and abs(c) < tol:
            return k
    return None


def _axis(b, g, num):
    tr = b.trace(g)
    ch = (tr - 1) / 2
    if ch <= 1:
        raise GeometryError("holonomy is not hyperbolic")
    ell = num.acosh(ch)
    lam = num.exp(ell)
    I = b.identity()

    def sub(M, s):
        return tuple(m - s * i for m, i in zip(M, I))

    Pp = b.mul(sub(g, num.one), sub(g, 1 / lam))
    Pm = b.mul(sub(g, num.one), sub(g, lam))
    for v in ((num.one, num.mpf("0.3"), num.mpf("0.7")), (num.one, num.mpf("-0.6"), num.mpf("0.2"))):
        ep, em = b.apply(Pp, v), b.apply(Pm, v)
        if abs(ep[0]) > num.mpf(10) ** -10 and abs(em[0]) > num.mpf(10) ** -10:
            break
    ep = tuple(x / ep[0] for x in ep)
    em = tuple(x / em[0] for x in em)
    return ell, Line(em, ep, num)


@dataclass
class Trace:
    length: float
    chords: list
    period: int          # chords in one traversal of the primitive geodesic
    power: int
    cuff: str | None     # set when the geodesic is a cuff
    tiling: HexagonTiling
    walk: tuple = ()     # (hexagon, side, offset) crossed on the way to the first chord


def trace_cycle(g: PantsGraph, metric: FenchelNielsenMetric, c: CurveCycle,
                dps: int | None = None, max_chords: int = 200000) -> Trace:
    darts = list(c.darts)
    seams = [i for i, d in enumerate(darts) if g.is_seam(d)]
    rg0 = realize(g, metric)
    if not seams:
        # a power of a cuff; the geodesic runs along hexagon sides
        cid = g.edge_of(darts[0]).cuff
        p = abs(sum(1 if g.quarter[d] == 0 else -1 for d in darts)) // 2
        return Trace(p * metric.lengths[cid], [], 0, p, cid, None)
    i0 = seams[0]
    darts = darts[i0:] + darts[:i0]
    lpath = rg0.path_length(darts)
    if dps is None:
        dps = 30 + int(2.2 * lpath / math.log(10))
    tiling = HexagonTiling(g, metric, dps)
    num, b = tiling.num, tiling.b
    X = develop(tiling.rg, b, darts)
    h0, k0 = tiling.face_of[darts[0]]
    F0 = tiling.frames[h0][k0]
    deck = b.mul(b.mul(F0, X), b.inv(F0))
    ell, axis = _axis(b, deck, num)
    tol = num.mpf(10) ** (-(dps // 3))

    # walk from the centre of h0 to the foot of the axis
    p = tiling.centroid(h0)
    a_, c_ = minkowski(p, axis.ep), minkowski(p, axis.em)
    q = tuple(a_ * y + c_ * x for x, y in zip(axis.ep, axis.em))
    r = num.sqrt(-minkowski(q, q))
    q = tuple(x / r for x in q)
    if q[0] < 0:
        q = tuple(-x for x in q)
    dist = num.acosh(max(-minkowski(p, q), num.one))
    h = h0
    walk = []
    if dist > tol:
        u = tuple(y + minkowski(p, q) * x for x, y in zip(p, q))
        un = num.sqrt(minkowski(u, u))
        u = tuple(x / un for x in u)
        seg = Line(tuple(x - y for x, y in zip(p, u)), tuple(x + y for x, y in zip(p, u)), num)
        for _ in range(100000):
            hits = _hits(tiling, h, seg, tol)
            if not hits:
                raise Inconclusive("lost the walk to the axis")
            t, k, x = hits[-1]
            if t >= dist - tol:
                break
            walk.append((h, k, x))
            h, _, N = tiling.crossing(h, k, x)
            Ni = b.inv(N)
            seg, axis = seg.moved(Ni, b), axis.moved(Ni, b)
        else:
            raise Inconclusive("walk to the axis did not terminate")

    side = _on_side(tiling, h, axis, tol)
    if side is not None:
        d = g.hexagons[h].darts[side]
        e = g.edges[dart_edge(d)]
        if e.kind != "boundary":
            raise Inconclusive("axis runs along a seam line")
        ellf = float(ell)
        pw = max(1, round(ellf / metric.lengths[e.cuff]))
        return Trace(ellf, [], 0, pw, e.cuff, tiling)

    hits = _hits(tiling, h, axis, tol)
    if len(hits) < 2:
        raise Inconclusive("axis does not cross its starting hexagon")
    chords = [Chord(h, hits[0][1:], hits[-1][1:], hits[0][0], hits[-1][0],
                    exit_key=tiling.side_key(h, *hits[-1][1:]))]
    t_start = hits[0][0]
    while True:
        last = chords[-1]
        h, k_in, N = tiling.crossing(last.hexagon, last.leave[0], last.leave[1])
        axis = axis.moved(b.inv(N), b)
        hits = _hits(tiling, h, axis, tol)
        if len(hits) < 2:
            raise Inconclusive("geodesic passes through a hexagon corner")
        if len(hits) > 2 and hits[1][0] - hits[0][0] < tol:
            raise Inconclusive("geodesic passes through a hexagon corner")
        ch = Chord(h, hits[0][1:], hits[-1][1:], hits[0][0], hits[-1][0],
                   exit_key=tiling.side_key(h, *hits[-1][1:]))
        if ch.t_in >= t_start + ell - num.mpf(10) ** -8:
            first = chords[0]
            if (ch.hexagon != first.hexagon or ch.enter[0] != first.enter[0]
                    or abs(ch.enter[1] - first.enter[1]) > num.mpf(10) ** -8
                    or abs(ch.t_in - t_start - ell) > num.mpf(10) ** -8):
                raise Inconclusive("traced geodesic does not close up")
            break
        chords.append(ch)
        if len(chords) > max_chords:
            raise Inconclusive("too many chords")
    n = len(chords)
    period = n
    for m in range(1, n):
        if n % m:
            continue
        if all(chords[i].hexagon == chords[i + m].hexagon
               and chords[i].enter[0] == chords[i + m].enter[0]
               and abs(chords[i].enter[1] - chords[i + m].enter[1]) < num.mpf(10) ** -8
               for i in range(n - m)):
            period = m
            break
    return Trace(float(ell), chords, period, n // period, None, tiling, tuple(walk))


SAME_POINT = 1e-20
AMBIGUOUS = 1e-11


def _close(a, b, period=None):
    d = abs(a - b)
    if period is not None:
        d = min(d % period, period - d % period)
    if d < SAME_POINT:
        return True
    if d < AMBIGUOUS:
        raise Inconclusive("two strands nearly meet on a hexagon side")
    return False


def chord_crossings(tr: Trace, chords=None):
    """Pairs of chord indices whose strands cross, among ``chords`` (default: one period).

    Crossings inside a hexagon are found by interleaving endpoints; crossings
    on a side are found by matching exit points.  Chords on different sheets
    never meet.
    """
    chords = tr.chords[:tr.period] if chords is None else chords
    pairs = set()
    by_hex: dict = {}
    for i, ch in enumerate(chords):
        by_hex.setdefault((ch.hexagon, ch.sheet), []).append(i)
    for (h, _), idx in by_hex.items():
        sides = [float(s) for s in tr.tiling.sides[h]]
        per = [chords[i].perimeter(sides) for i in idx]
        for a in range(len(idx)):
            ca = chords[idx[a]]
            a1, a2 = per[a]
            span = (a2 - a1) % 6
            for bb in range(a + 1, len(idx)):
                cb = chords[idx[bb]]
                shared = False
                for pa in (ca.enter, ca.leave):
                    for pb in (cb.enter, cb.leave):
                        if pa[0] == pb[0] and _close(pa[1], pb[1]):
                            shared = True
                if shared:
                    continue
                b1, b2 = per[bb]
                if (0 < (b1 - a1) % 6 < span) != (0 < (b2 - a1) % 6 < span):
                    pairs.add((idx[a], idx[bb]))
    events: dict = {}
    for i, ch in enumerate(chords):
        kind, ident, pos, period = ch.exit_key
        sheet = ch.sheet if ch.exit_sheet is None else ch.exit_sheet
        events.setdefault((kind, ident, sheet), []).append((pos, period, i))
    for evs in events.values():
        for a in range(len(evs)):
            for bb in range(a + 1, len(evs)):
                if _close(evs[a][0], evs[bb][0], evs[a][1]):
                    pairs.add(tuple(sorted((evs[a][2], evs[bb][2]))))
    return sorted(pairs)


def self_intersection_geodesic(g: PantsGraph, metric: FenchelNielsenMetric, c: CurveCycle,
                               dps: int | None = None) -> IntersectionResult:
    g.require_valid(c)
    tr = trace_cycle(g, metric, c, dps)
    if tr.cuff is not None:
        return IntersectionResult(power_formula(0, tr.power), "geodesic", 0, tr.power, (),
                                  {"length": tr.length, "cuff": tr.cuff})
    pairs = chord_crossings(tr)
    k_u = len(pairs)
    return IntersectionResult(power_formula(k_u, tr.power), "geodesic", k_u, tr.power,
                              tuple(pairs), {"length": tr.length, "chords": tr.period})
