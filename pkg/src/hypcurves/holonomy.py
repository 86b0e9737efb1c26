"""Realize a Fenchel-Nielsen metric on the pants graph and develop paths.

Seams are realized as common perpendiculars between cuffs and boundary edges
as half cuffs.  At a glued cuff the feet of the secondary pants' seams sit
``twist * length`` east of the primary feet, so a path that passes from one
side of the cuff to the other slides along the cuff by that amount.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import frames
from .frames import FLOAT, SL2, SO21, mp_namespace
from .kernel import FenchelNielsenMetric, GeometryError
from .spine import Spine, build_spine, canonical_cyclic, cyclic_reduce, invert_word
from .surface import CurveCycle, PantsGraph, StructureError, dart_edge, rev


def _acosh_safe(num, x):
    return num.acosh(x)


@dataclass(frozen=True)
class RealizedGraph:
    """Edge lengths and cuff shears of ``metric`` on ``graph``, in one number system."""
    graph: PantsGraph
    metric: FenchelNielsenMetric
    num: object
    edge_length: tuple
    shear: dict

    def dart_length(self, d: int):
        return self.edge_length[dart_edge(d)]

    def path_length(self, darts) -> float:
        return float(sum(self.dart_length(d) for d in darts))


def _seam(num, l1, l2, l3):
    h = num.mpf(2)
    c = (num.cosh(l3 / h) + num.cosh(l1 / h) * num.cosh(l2 / h)) / (
        num.sinh(l1 / h) * num.sinh(l2 / h))
    return num.acosh(c)


def realize(g: PantsGraph, metric: FenchelNielsenMetric, num=FLOAT) -> RealizedGraph:
    metric.check(g.pd)
    slot_cuff = {}
    for cf in g.pd.cuffs:
        slot_cuff[cf.primary] = cf.id
        if cf.secondary is not None:
            slot_cuff[cf.secondary] = cf.id
    L = {c: num.mpf(v) for c, v in metric.lengths.items()}
    lengths = []
    for e in g.edges:
        if e.kind == "boundary":
            lengths.append(L[e.cuff] / 2)
        else:
            p, i = e.pants, e.slot
            lengths.append(_seam(num, L[slot_cuff[(p, i)]], L[slot_cuff[(p, (i + 1) % 3)]],
                                 L[slot_cuff[(p, (i + 2) % 3)]]))
    shear = {c: num.mpf(metric.twists.get(c, 0)) * L[c] for c in L}
    return RealizedGraph(g, metric, num, tuple(lengths), shear)


def side(g: PantsGraph, d: int) -> int:
    return g.side.get(d, 0)


def turn(rg: RealizedGraph, backend, d_in: int, d_out: int):
    """Frame change at the vertex between consecutive darts ``d_in`` and ``d_out``."""
    g = rg.graph
    arrive = rev(d_in)
    heading = (g.quarter[arrive] + 2) % 4
    s_in, s_out = side(g, arrive), side(g, d_out)
    if s_in == s_out:
        return backend.rotate(g.quarter[d_out] - heading)
    sigma = rg.shear[g.vertex_cuff[g.tail(d_out)]]
    if s_in == 1:
        sigma = -sigma
    return frames.product(backend, (
        backend.rotate(-heading), backend.translate(sigma), backend.rotate(g.quarter[d_out])))


def develop(rg: RealizedGraph, backend, darts, closed: bool = True, start=None, end=None):
    """Frame change along ``darts``.

    ``start``/``end`` are reference darts at the first and last vertex; the
    frame is turned from ``start`` onto the first dart and from the last dart
    onto ``end``.  For a closed path without references the result is the
    holonomy of the cycle, conjugated into the frame heading along ``darts[0]``.
    """
    mats = []
    if start is not None:
        mats.append(turn(rg, backend, rev(start), darts[0]) if darts else backend.identity())
    for i, d in enumerate(darts):
        if i:
            mats.append(turn(rg, backend, darts[i - 1], d))
        mats.append(backend.translate(rg.dart_length(d)))
    if end is not None:
        mats.append(turn(rg, backend, darts[-1], end))
    elif closed and darts:
        mats.append(turn(rg, backend, darts[-1], darts[0]))
    return frames.product(backend, mats)


def digits_for(path_length: float, extra: int = 20) -> int:
    """Working precision that absorbs cancellation along a developed path."""
    return extra + int(path_length / (2 * math.log(10))) + 1


@dataclass(frozen=True)
class Holonomy:
    """Generator matrices of pi_1 in PSL(2, R), from the spine of the pants graph."""
    realized: RealizedGraph
    spine: Spine
    backend: object
    matrices: tuple

    @property
    def graph(self) -> PantsGraph:
        return self.realized.graph

    def word_matrix(self, w):
        b = self.backend
        out = b.identity()
        for x in w:
            m = self.matrices[abs(x) - 1]
            out = b.mul(out, m if x > 0 else b.inv(m))
        return out

    def trace(self, w):
        return self.backend.trace(self.word_matrix(w))

    def as_dict(self) -> dict:
        return {f"g{i + 1}": [float(x) for x in m] for i, m in enumerate(self.matrices)}


def build_holonomy(g: PantsGraph, metric: FenchelNielsenMetric, dps: int | None = None,
                   spine: Spine | None = None, check: bool = True) -> Holonomy:
    spine = spine or build_spine(g)
    if dps is None:
        rg0 = realize(g, metric)
        longest = max(rg0.path_length(spine.generator_loop(i)) for i in range(spine.rank))
        dps = digits_for(6 * longest)
    num = mp_namespace(dps)
    rg = realize(g, metric, num)
    b = SL2(num)
    ref = g.rotation[spine.base][0]
    mats = []
    for i in range(spine.rank):
        loop = spine.generator_loop(i)
        mats.append(develop(rg, b, loop, start=rev(ref), end=ref))
    h = Holonomy(rg, spine, b, tuple(mats))
    if check:
        for cf in g.pd.cuffs:
            t = abs(h.trace(spine.cuff_word(cf.id)))
            want = 2 * num.cosh(num.mpf(metric.lengths[cf.id]) / 2)
            if abs(t - want) > 1e-9 * want:
                raise GeometryError(f"cuff {cf.id}: trace {float(t)} != {float(want)}")
    return h


def geodesic_length(h: Holonomy, word) -> float:
    w = cyclic_reduce(word)
    if not w:
        raise GeometryError("trivial word has no geodesic")
    t = abs(h.trace(w)) / 2
    if t <= 1:
        raise GeometryError(f"word {w} is not hyperbolic (|trace|/2 = {float(t)})")
    return float(2 * h.backend.num.acosh(t))


def cycle_length(g: PantsGraph, metric: FenchelNielsenMetric, c: CurveCycle,
                 dps: int | None = None) -> float:
    """Length of the closed geodesic freely homotopic to ``c``, developed directly."""
    rg0 = realize(g, metric)
    if dps is None:
        dps = digits_for(rg0.path_length(c.darts))
    num = mp_namespace(dps)
    rg = realize(g, metric, num)
    b = SL2(num)
    m = develop(rg, b, c.darts)
    t = abs(b.trace(m)) / 2
    if t <= 1:
        raise GeometryError("cycle is not hyperbolic")
    return float(2 * num.acosh(t))


def cyclic_words(rank: int, max_len: int):
    """Cyclically reduced words up to ``max_len``, one per class up to rotation and inversion."""
    letters = [i for k in range(1, rank + 1) for i in (k, -k)]
    seen = set()
    for n in range(1, max_len + 1):
        for w in itertools.product(letters, repeat=n):
            if any(w[i] == -w[i + 1] for i in range(n - 1)) or (n > 1 and w[0] == -w[-1]):
                continue
            c = canonical_cyclic(w)
            if c not in seen:
                seen.add(c)
                yield c


@dataclass(frozen=True)
class SystoleResult:
    length: float
    word: tuple
    cutoff: int
    candidates: int


def systole(h: Holonomy, cutoff: int = 4) -> SystoleResult:
    """Shortest closed geodesic among words up to ``cutoff`` letters and all cuffs.

    This is an upper bound on the true systole; cuff curves are always included
    because short cuffs may need long words in the spine generators.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be positive")
    best = (math.inf, ())
    count = 0
    words = list(cyclic_words(h.spine.rank, cutoff))
    words += [h.spine.cuff_word(cf.id) for cf in h.graph.pd.cuffs]
    for w in words:
        count += 1
        t = abs(h.trace(w)) / 2
        if t <= 1:
            continue
        ell = float(2 * h.backend.num.acosh(t))
        if ell < best[0]:
            best = (ell, tuple(w))
    return SystoleResult(best[0], best[1], cutoff, count)


def word_inverse(w):
    return invert_word(w)
