"""Self-intersection numbers: linked pairs on a ribbon graph, and geodesic chords.

The combinatorial count works on the spine (spanning tree plus generator
edges), a ribbon graph onto which an open surface retracts.  A reduced cyclic
path there is the unique reduced representative of its free homotopy class,
and two strands are forced to cross exactly when they arrive at a common
segment from one side and leave it to the other.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .spine import Spine, build_spine, cyclic_reduce, primitive_root
from .surface import CurveCycle, PantsGraph, StructureError, dart_edge, rev


class UnsupportedMethod(StructureError):
    pass


class Inconclusive(RuntimeError):
    pass


@dataclass(frozen=True)
class IntersectionResult:
    k: int
    method: str
    primitive_k: int = 0
    power: int = 1
    witnesses: tuple = field(default=(), compare=False)
    info: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"k": self.k, "method": self.method, "power": self.power,
                "primitive_k": self.primitive_k, **self.info}


def power_formula(k_root: int, p: int) -> int:
    """Self-intersection of the p-th power of a primitive curve."""
    return p * p * k_root + p - 1


class RibbonPath:
    """A reduced cyclic path in a ribbon graph given by restricted rotations."""

    def __init__(self, g: PantsGraph, edges, darts):
        self.g = g
        self.darts = tuple(darts)
        self.n = len(self.darts)
        pos = {}
        deg = {}
        for v in range(g.n_vertices):
            rot = [d for d in g.rotation[v] if dart_edge(d) in edges]
            deg[v] = len(rot)
            for k, d in enumerate(rot):
                pos[d] = k
        self.pos, self.deg = pos, deg
        n = self.n
        self.vert = [g.tail(d) for d in self.darts]
        self.out = list(self.darts)
        self.inn = [rev(self.darts[i - 1]) for i in range(n)]
        # the reversed path, indexed so that visit j sits at forward visit (n - j) % n
        self.rout = [self.inn[(n - j) % n] for j in range(n)]
        self.rinn = [self.out[(n - j) % n] for j in range(n)]

    def _before(self, v, c, x, y) -> bool:
        """``x`` comes before ``y`` going counterclockwise from ``c`` at ``v``."""
        k = self.deg[v]
        p = self.pos
        return (p[x] - p[c]) % k < (p[y] - p[c]) % k

    def _interleave(self, v, a, b, c, d) -> bool:
        k = self.deg[v]
        p = self.pos

        def inside(x):
            return 0 < (p[x] - p[a]) % k < (p[b] - p[a]) % k

        return inside(c) != inside(d)

    def linked_pairs(self, same_sheet=None):
        """Ordered linked pairs ``(i, j, sign)``; each crossing appears twice.

        ``same_sheet(i, j, sign)`` filters pairs of visits, for counting in a cover.
        """
        n = self.n
        out, inn, vert = self.out, self.inn, self.vert
        by_vertex: dict[int, list[int]] = {}
        for i in range(n):
            by_vertex.setdefault(vert[i], []).append(i)
        found = []
        for sign in (1, -1):
            qout, qinn = (out, inn) if sign > 0 else (self.rout, self.rinn)
            for v, visits in by_vertex.items():
                for i in visits:
                    for jj in visits:
                        j = jj if sign > 0 else (n - jj) % n
                        if sign > 0 and i == j:
                            continue
                        if inn[i] == qinn[j]:
                            continue
                        if same_sheet is not None and not same_sheet(i, j, sign):
                            continue
                        if out[i] != qout[j]:
                            if sign < 0:
                                continue
                            chords = {inn[i], out[i]}
                            if chords & {inn[j], out[j]}:
                                continue
                            if self._interleave(v, inn[i], out[i], inn[j], out[j]):
                                found.append((i, j, sign))
                            continue
                        l = 1
                        while out[(i + l) % n] == qout[(j + l) % n]:
                            l += 1
                            if l > 2 * n:
                                raise StructureError("path is not primitive")
                        a = self._before(v, out[i], inn[i], qinn[j])
                        w = vert[(i + l) % n]
                        b = self._before(w, inn[(i + l) % n], out[(i + l) % n], qout[(j + l) % n])
                        if a == b:
                            found.append((i, j, sign))
        return found


def spine_path(sp: Spine, c: CurveCycle) -> tuple[tuple, int, tuple]:
    """Reduced spine cycle of the primitive root of ``c``, with the power and root word."""
    w = sp.cycle_word(c)
    if not w:
        raise StructureError("curve is null-homotopic")
    u, p = primitive_root(w)
    return sp.word_cycle(u).darts, p, u


def self_intersection_combinatorial(g: PantsGraph, c: CurveCycle,
                                    spine: Spine | None = None) -> IntersectionResult:
    if g.pd.topology().closed:
        raise UnsupportedMethod("combinatorial count needs a surface with boundary or cusps;"
                                " use the geodesic method")
    sp = spine or build_spine(g)
    darts, p, u = spine_path(sp, c)
    edges = set(sp.tree) | set(sp.generators)
    rp = RibbonPath(g, edges, darts)
    pairs = rp.linked_pairs()
    if len(pairs) % 2:
        raise StructureError("unbalanced linked pair count")
    k_u = len(pairs) // 2
    return IntersectionResult(power_formula(k_u, p), "combinatorial", k_u, p, tuple(pairs),
                              {"word": list(u)})
