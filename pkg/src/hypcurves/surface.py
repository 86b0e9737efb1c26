"""Surfaces, pants decompositions and the embedded pants graph.

Each pair of pants carries a graph whose complement is two right-angled
hexagons.  Every cuff is a 2-cycle of boundary edges, seam edges join
distinct cuffs.  Gluing pants identifies the boundary 2-cycles, which gives a
ribbon graph on the surface with valence 4 inside and valence 3 on the
boundary.

Darts are integers: ``2*e`` runs edge ``e`` from tail to head, ``2*e + 1``
runs it backwards.  Every dart carries a direction at its tail vertex, in
counterclockwise quarter turns, measured in the frame of the *primary* pants
at that cuff (the lexicographically smaller slot of a gluing):

* ``0`` -- along the cuff, in the primary cuff direction ("east"),
* ``1`` -- seam into the primary pants ("north"),
* ``2`` -- along the cuff, backwards,
* ``3`` -- seam into the secondary pants ("south"), glued cuffs only.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class StructureError(ValueError):
    """Raised for malformed surfaces, decompositions or curves."""


def dart(edge: int, forward: bool = True) -> int:
    return 2 * edge + (0 if forward else 1)


def rev(d: int) -> int:
    return d ^ 1


def dart_edge(d: int) -> int:
    return d >> 1


def dart_forward(d: int) -> bool:
    return not (d & 1)


@dataclass(frozen=True)
class SurfaceTopology:
    genus: int
    boundary_count: int = 0
    cusp_count: int = 0

    def __post_init__(self):
        if min(self.genus, self.boundary_count, self.cusp_count) < 0:
            raise StructureError("topology counts must be non-negative")
        if self.euler_characteristic >= 0:
            raise StructureError(
                f"Euler characteristic {self.euler_characteristic} is not negative")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.boundary_count - self.cusp_count

    @property
    def n_pants(self) -> int:
        return -self.euler_characteristic

    @property
    def n_interior_cuffs(self) -> int:
        return 3 * self.genus - 3 + self.boundary_count + self.cusp_count

    @property
    def closed(self) -> bool:
        return self.boundary_count + self.cusp_count == 0

    @property
    def free_rank(self) -> int:
        """Rank of the fundamental group (free when the surface is open)."""
        if self.closed:
            return 2 * self.genus
        return 1 - self.euler_characteristic


@dataclass(frozen=True)
class FreeSlot:
    pants: int
    slot: int
    kind: str = "boundary"

    def __post_init__(self):
        if self.kind not in ("boundary", "cusp"):
            raise StructureError(f"free slot kind must be boundary or cusp, got {self.kind!r}")


@dataclass(frozen=True)
class Cuff:
    id: str
    kind: str  # "interior", "boundary" or "cusp"
    primary: tuple[int, int]
    secondary: tuple[int, int] | None = None

    @property
    def glued(self) -> bool:
        return self.secondary is not None


@dataclass(frozen=True)
class PantsDecomposition:
    n_pants: int
    gluings: tuple = ()
    free: tuple = ()

    def __post_init__(self):
        glue = []
        for pair in self.gluings:
            a, b = (tuple(int(v) for v in s) for s in pair)
            glue.append(tuple(sorted((a, b))))
        object.__setattr__(self, "gluings", tuple(sorted(glue)))
        free = tuple(sorted(
            (f if isinstance(f, FreeSlot) else FreeSlot(*f) for f in self.free),
            key=lambda f: (f.pants, f.slot)))
        object.__setattr__(self, "free", free)
        self._validate()

    def _validate(self):
        if self.n_pants < 1:
            raise StructureError("need at least one pair of pants")
        seen: dict[tuple[int, int], str] = {}

        def claim(slot, what):
            p, s = slot
            if not (0 <= p < self.n_pants and 0 <= s < 3):
                raise StructureError(f"slot {slot} out of range")
            if slot in seen:
                raise StructureError(f"slot {slot} used twice ({seen[slot]} and {what})")
            seen[slot] = what

        for a, b in self.gluings:
            if a == b:
                raise StructureError(f"slot {a} glued to itself")
            claim(a, "gluing")
            claim(b, "gluing")
        for f in self.free:
            claim((f.pants, f.slot), "free")
        missing = [(p, s) for p in range(self.n_pants) for s in range(3) if (p, s) not in seen]
        if missing:
            raise StructureError(f"slot {missing[0]} is neither glued nor free")
        # connectivity of the pants adjacency
        adj = {p: set() for p in range(self.n_pants)}
        for (p, _), (q, _) in self.gluings:
            adj[p].add(q)
            adj[q].add(p)
        reached = {0}
        todo = [0]
        while todo:
            for q in adj[todo.pop()]:
                if q not in reached:
                    reached.add(q)
                    todo.append(q)
        if len(reached) != self.n_pants:
            raise StructureError("pants decomposition is disconnected")
        self.topology()

    def topology(self) -> SurfaceTopology:
        b = sum(1 for f in self.free if f.kind == "boundary")
        c = sum(1 for f in self.free if f.kind == "cusp")
        twice_genus = 2 + self.n_pants - b - c
        if twice_genus % 2:
            raise StructureError("gluing data gives a non-integral genus")
        return SurfaceTopology(twice_genus // 2, b, c)

    @property
    def cuffs(self) -> tuple[Cuff, ...]:
        out = [Cuff(f"c{i}", "interior", a, b) for i, (a, b) in enumerate(self.gluings)]
        off = len(out)
        out += [Cuff(f"c{off + i}", f.kind, (f.pants, f.slot)) for i, f in enumerate(self.free)]
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "pants": self.n_pants,
            "gluings": [[list(a), list(b)] for a, b in self.gluings],
            "free": [{"pants": f.pants, "slot": f.slot, "kind": f.kind} for f in self.free],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PantsDecomposition":
        return cls(
            int(data["pants"]),
            tuple((tuple(a), tuple(b)) for a, b in data.get("gluings", [])),
            tuple(FreeSlot(int(f["pants"]), int(f["slot"]), f.get("kind", "boundary"))
                  for f in data.get("free", [])),
        )


def standard_decomposition(topology: SurfaceTopology) -> PantsDecomposition:
    """A fixed pants decomposition realizing ``topology``.

    Pants are chained: genus handles are self-glued pants, then the chain
    carries the remaining boundary components and cusps.
    """
    g, b, c = topology.genus, topology.boundary_count, topology.cusp_count
    kinds = ["boundary"] * b + ["cusp"] * c
    n = topology.n_pants
    if n == 1:
        if g == 1:
            return PantsDecomposition(1, (((0, 0), (0, 1)),), (FreeSlot(0, 2, kinds[0]),))
        return PantsDecomposition(1, (), tuple(FreeSlot(0, s, k) for s, k in enumerate(kinds)))
    if g == 2 and not kinds:
        return PantsDecomposition(2, (((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 2), (1, 2))))
    gluings = []
    free = []
    # chain: pants i slot 2 glued to pants i+1 slot 0
    for i in range(n - 1):
        gluings.append(((i, 2), (i + 1, 0)))
    open_slots = [(0, 0), (0, 1)] + [(i, 1) for i in range(1, n - 1)] + [(n - 1, 1), (n - 1, 2)]
    handles = g
    slots = list(open_slots)
    while handles:
        if len(slots) < 2:
            raise StructureError("cannot realize topology")
        # pants with two open slots become handles first
        a, b_ = slots[0], slots[1]
        if a[0] == b_[0]:
            gluings.append((a, b_))
            slots = slots[2:]
        else:
            gluings.append((a, slots[-1]))
            slots = slots[1:-1]
        handles -= 1
    if len(slots) != len(kinds):
        raise StructureError("cannot realize topology")
    free = [FreeSlot(p, s, k) for (p, s), k in zip(slots, kinds)]
    return PantsDecomposition(n, tuple(gluings), tuple(free))


def one_holed_torus() -> PantsDecomposition:
    return standard_decomposition(SurfaceTopology(1, 1))


def four_holed_sphere() -> PantsDecomposition:
    return standard_decomposition(SurfaceTopology(0, 4))


def genus_two() -> PantsDecomposition:
    return standard_decomposition(SurfaceTopology(2))


@dataclass(frozen=True)
class Edge:
    index: int
    kind: str  # "seam" or "boundary"
    tail: int
    head: int
    pants: int
    cuff: str | None = None
    slot: int = -1  # seams: slot of the tail cuff; boundary edges: owning slot

    @property
    def name(self) -> str:
        return f"e{self.index}"


@dataclass(frozen=True)
class Hexagon:
    index: int
    pants: int
    side: str  # "front" or "back"
    darts: tuple[int, ...]  # counterclockwise boundary, alternating cuff / seam


@dataclass(frozen=True)
class CurveCycle:
    """A closed edge path, given as darts (see the module docstring)."""
    darts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "darts", tuple(int(d) for d in self.darts))
        if not self.darts:
            raise StructureError("a curve needs at least one step")

    def __len__(self):
        return len(self.darts)

    @classmethod
    def from_steps(cls, steps: Iterable) -> "CurveCycle":
        out = []
        for i, step in enumerate(steps):
            try:
                name, sign = step
                if not (isinstance(name, str) and name.startswith("e") and sign in ("+", "-")):
                    raise ValueError
                out.append(dart(int(name[1:]), sign == "+"))
            except (TypeError, ValueError):
                raise StructureError(f"malformed step {i}: {step!r}") from None
        return cls(tuple(out))

    def steps(self) -> list[list[str]]:
        return [[f"e{dart_edge(d)}", "+" if dart_forward(d) else "-"] for d in self.darts]

    def inverse(self) -> "CurveCycle":
        return CurveCycle(tuple(rev(d) for d in reversed(self.darts)))

    def rotate(self, k: int) -> "CurveCycle":
        k %= len(self.darts)
        return CurveCycle(self.darts[k:] + self.darts[:k])

    def power(self, p: int) -> "CurveCycle":
        return CurveCycle(self.darts * p)

    def to_json(self) -> dict:
        return {"steps": self.steps()}


@dataclass(frozen=True)
class CycleDiagnostics:
    valid: bool
    reducible: bool = False
    step: int | None = None
    message: str = "ok"

    def __bool__(self):
        return self.valid


@dataclass(frozen=True)
class PantsGraph:
    pd: PantsDecomposition
    edges: tuple[Edge, ...]
    n_vertices: int
    rotation: tuple[tuple[int, ...], ...]   # counterclockwise darts at each vertex
    quarter: dict = field(repr=False)        # dart -> direction at its tail, in quarter turns
    side: dict = field(repr=False)           # seam dart at cuff vertex -> 0 primary / 1 secondary
    vertex_cuff: tuple[str, ...]             # cuff carrying each vertex
    cuff_edges: dict = field(repr=False)     # cuff id -> (dart, dart): the 2-cycle, primary direction
    hexagons: tuple[Hexagon, ...]

    # -- basic queries -------------------------------------------------
    @property
    def cuffs(self) -> dict[str, Cuff]:
        return {c.id: c for c in self.pd.cuffs}

    def tail(self, d: int) -> int:
        e = self.edges[dart_edge(d)]
        return e.tail if dart_forward(d) else e.head

    def head(self, d: int) -> int:
        return self.tail(rev(d))

    def edge_of(self, d: int) -> Edge:
        return self.edges[dart_edge(d)]

    def is_seam(self, d: int) -> bool:
        return self.edges[dart_edge(d)].kind == "seam"

    def valence(self, v: int) -> int:
        return len(self.rotation[v])

    @property
    def n_darts(self) -> int:
        return 2 * len(self.edges)

    @property
    def seam_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.kind == "seam"]

    @property
    def boundary_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.kind == "boundary"]

    def face_successor(self, d: int) -> int:
        """Next dart of the face lying to the left of ``d``."""
        rot = self.rotation[self.head(d)]
        i = rot.index(rev(d))
        return rot[i - 1]

    def faces(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for d in range(self.n_darts):
            if d in seen:
                continue
            face = []
            x = d
            while x not in seen:
                seen.add(x)
                face.append(x)
                x = self.face_successor(x)
            out.append(tuple(face))
        return out

    def face_census(self) -> dict[int, int]:
        census: dict[int, int] = {}
        for f in self.faces():
            census[len(f)] = census.get(len(f), 0) + 1
        return census

    def cuff_of(self, v: int) -> Cuff:
        return self.cuffs[self.vertex_cuff[v]]

    # -- curves --------------------------------------------------------
    def validate_cycle(self, c: CurveCycle) -> CycleDiagnostics:
        n = len(c.darts)
        for i, d in enumerate(c.darts):
            if not 0 <= d < self.n_darts:
                return CycleDiagnostics(False, step=i, message=f"step {i}: unknown edge e{dart_edge(d)}")
        for i, d in enumerate(c.darts):
            nxt = c.darts[(i + 1) % n]
            if self.head(d) != self.tail(nxt):
                return CycleDiagnostics(
                    False, step=(i + 1) % n,
                    message=f"step {(i + 1) % n} does not start where step {i} ends")
        for i, d in enumerate(c.darts):
            nxt = c.darts[(i + 1) % n]
            if nxt == rev(d):
                return CycleDiagnostics(
                    False, reducible=True, step=(i + 1) % n,
                    message=f"step {(i + 1) % n} backtracks along step {i}")
        return CycleDiagnostics(True)

    def require_valid(self, c: CurveCycle) -> None:
        diag = self.validate_cycle(c)
        if not diag.valid:
            raise StructureError(diag.message)

    def cuff_cycle(self, cuff_id: str, power: int = 1) -> CurveCycle:
        d0, d1 = self.cuff_edges[cuff_id]
        if power < 0:
            d0, d1 = rev(d1), rev(d0)
        return CurveCycle((d0, d1) * abs(power))

    def shortest_path(self, u: int, v: int, avoid_first: int | None = None) -> list[int]:
        """BFS dart path from ``u`` to ``v`` (empty when ``u == v``)."""
        if u == v:
            return []
        prev = {u: None}
        todo = deque([u])
        while todo:
            x = todo.popleft()
            for d in self.rotation[x]:
                if x == u and d == avoid_first:
                    continue
                y = self.head(d)
                if y not in prev:
                    prev[y] = d
                    if y == v:
                        path = []
                        while y != u:
                            path.append(prev[y])
                            y = self.tail(prev[y])
                        return path[::-1]
                    todo.append(y)
        raise StructureError("graph is disconnected")


def _slot_key(p: int, i: int):
    return (p, i)


def build_pants_graph(pd: PantsDecomposition) -> PantsGraph:
    """Assemble the ribbon graph G of ``pd`` with deterministic labels."""
    owner: dict[tuple[int, int], tuple[int, int]] = {}
    cuff_of_slot: dict[tuple[int, int], Cuff] = {}
    for cf in pd.cuffs:
        cuff_of_slot[cf.primary] = cf
        owner[cf.primary] = cf.primary
        if cf.secondary is not None:
            if cf.secondary in owner:
                raise StructureError(f"slot {cf.secondary} used twice")
            owner[cf.secondary] = cf.primary
            cuff_of_slot[cf.secondary] = cf

    # vertices: (slot, '-') and (slot, '+') of primary slots, in slot order
    vid: dict[tuple, int] = {}
    vertex_cuff = []
    for p in range(pd.n_pants):
        for i in range(3):
            if owner[(p, i)] == (p, i):
                for s in "-+":
                    vid[((p, i), s)] = len(vid)
                    vertex_cuff.append(cuff_of_slot[(p, i)].id)

    def vertex(p, i, s):
        return vid[(owner[(p, i)], s)]

    edges: list[Edge] = []
    local: dict[tuple, int] = {}  # ('c'|'cc'|'s', p, i) -> global dart
    for p in range(pd.n_pants):
        for i in range(3):
            cf = cuff_of_slot[(p, i)]
            if owner[(p, i)] == (p, i):
                for name, (t, h) in (("c", ("-", "+")), ("cc", ("+", "-"))):
                    e = Edge(len(edges), "boundary", vertex(p, i, t), vertex(p, i, h), p, cf.id, i)
                    edges.append(e)
                    local[(name, p, i)] = dart(e.index)
        for i in range(3):
            j = (i + 1) % 3
            e = Edge(len(edges), "seam", vertex(p, i, "+"), vertex(p, j, "-"), p, None, i)
            edges.append(e)
            local[("s", p, i)] = dart(e.index)
    # secondary cuff edges are the primary ones reversed
    for cf in pd.cuffs:
        if cf.secondary is not None:
            q, j = cf.secondary
            p, i = cf.primary
            local[("c", q, j)] = rev(local[("cc", p, i)])
            local[("cc", q, j)] = rev(local[("c", p, i)])

    quarter: dict[int, int] = {}
    side: dict[int, int] = {}
    rotation: list[list[tuple[int, int]]] = [[] for _ in vid]
    for cf in pd.cuffs:
        p, i = cf.primary
        c, cc = local[("c", p, i)], local[("cc", p, i)]
        vp, vm = vertex(p, i, "+"), vertex(p, i, "-")
        entries = {
            vp: [(0, cc), (1, local[("s", p, i)]), (2, rev(c))],
            vm: [(0, c), (1, rev(local[("s", p, (i - 1) % 3)])), (2, rev(cc))],
        }
        for d in (local[("s", p, i)], rev(local[("s", p, (i - 1) % 3)])):
            side[d] = 0
        if cf.secondary is not None:
            q, j = cf.secondary
            s_plus, s_minus = local[("s", q, j)], rev(local[("s", q, (j - 1) % 3)])
            entries[vp].append((3, s_plus))
            entries[vm].append((3, s_minus))
            side[s_plus] = 1
            side[s_minus] = 1
        for v, lst in entries.items():
            for a, d in lst:
                quarter[d] = a
            rotation[v] = sorted(lst)

    hexagons = []
    for p in range(pd.n_pants):
        front = []
        for i in range(3):
            front += [local[("c", p, i)], local[("s", p, i)]]
        back = [rev(local[("s", p, 0)]), local[("cc", p, 0)],
                rev(local[("s", p, 2)]), local[("cc", p, 2)],
                rev(local[("s", p, 1)]), local[("cc", p, 1)]]
        hexagons.append(Hexagon(len(hexagons), p, "front", tuple(front)))
        hexagons.append(Hexagon(len(hexagons), p, "back", tuple(back)))

    cuff_edges = {cf.id: (local[("c",) + cf.primary], local[("cc",) + cf.primary]) for cf in pd.cuffs}
    g = PantsGraph(
        pd=pd,
        edges=tuple(edges),
        n_vertices=len(vid),
        rotation=tuple(tuple(d for _, d in r) for r in rotation),
        quarter=quarter,
        side=side,
        vertex_cuff=tuple(vertex_cuff),
        cuff_edges=cuff_edges,
        hexagons=tuple(hexagons),
    )
    for h in hexagons:
        for k, d in enumerate(h.darts):
            if g.face_successor(d) != h.darts[(k + 1) % 6]:
                raise StructureError("hexagon boundary inconsistent with ribbon structure")
    return g


def crossing_counts(g: PantsGraph, c: CurveCycle) -> dict[str, int]:
    """Number of times ``c`` crosses each cuff (seam arrival and departure on opposite sides)."""
    counts = {cf.id: 0 for cf in g.pd.cuffs}
    n = len(c.darts)
    seam_pos = [i for i, d in enumerate(c.darts) if g.is_seam(d)]
    for idx, i in enumerate(seam_pos):
        j = seam_pos[(idx + 1) % len(seam_pos)]
        arrive, leave = rev(c.darts[i]), c.darts[j]
        if g.side.get(arrive, 0) != g.side.get(leave, 0):
            counts[g.vertex_cuff[g.head(c.darts[i])]] += 1
    del n
    return counts


def choose_balanced_pants(candidates: Sequence[tuple[PantsGraph, CurveCycle]]) -> int:
    """Index of the candidate whose worst cuff is crossed the fewest times.

    Each candidate is a pants graph together with the curve re-encoded in it.
    Ties go to the earliest candidate.
    """
    if not candidates:
        raise StructureError("no candidate pants decompositions")
    best, best_val = 0, None
    for i, (g, c) in enumerate(candidates):
        val = max(crossing_counts(g, c).values(), default=0)
        if best_val is None or val < best_val:
            best, best_val = i, val
    return best
