"""Tree-cotree spine of the pants graph and free-group words for cycles.

A spanning tree T of G and a spanning tree T* of the dual (hexagons plus one
node standing for all boundary faces, or rooted at hexagon 0 when the surface
is closed) leave exactly rank(pi_1) edges; those are the generators.  Every
dart then has a word: empty on T, a generator on the leftover edges, and for a
dual-tree edge the word of the rest of its hexagon, read backwards.

Words are tuples of nonzero integers, ``+i`` for generator ``i - 1`` and
``-i`` for its inverse.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .surface import CurveCycle, PantsGraph, StructureError, dart_edge, rev


def reduce_word(w) -> tuple[int, ...]:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w) -> tuple[int, ...]:
    w = list(reduce_word(w))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def invert_word(w) -> tuple[int, ...]:
    return tuple(-x for x in reversed(w))


def canonical_cyclic(w) -> tuple[int, ...]:
    """Least rotation of the cyclically reduced word or of its inverse."""
    w = cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for v in (w, invert_word(w)):
        cands += [v[i:] + v[:i] for i in range(len(v))]
    return min(cands)


def primitive_root(w) -> tuple[tuple, int]:
    """(u, p) with w = u^p and p maximal; w must be cyclically reduced."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == tuple(w):
            return tuple(w[:d]), n // d
    return tuple(w), 1


@dataclass(frozen=True)
class Spine:
    graph: PantsGraph
    base: int
    tree: frozenset            # edge indices of T
    cotree: frozenset          # edge indices of T*
    generators: tuple          # edge indices, generator i is edge generators[i]
    dart_words: dict           # dart -> word
    relator: tuple             # closed surfaces: product of the root hexagon, else ()
    parent: dict               # vertex -> dart from its parent in T

    @property
    def rank(self) -> int:
        return len(self.generators)

    def tree_path(self, v: int) -> list[int]:
        """Darts of T from the base vertex to ``v``."""
        path = []
        while v != self.base:
            d = self.parent[v]
            path.append(d)
            v = self.graph.tail(d)
        return path[::-1]

    def path_word(self, darts) -> tuple[int, ...]:
        out: list[int] = []
        for d in darts:
            out.extend(self.dart_words[d])
        return reduce_word(out)

    def cycle_word(self, c: CurveCycle) -> tuple[int, ...]:
        """Cyclically reduced word of the free homotopy class of ``c``."""
        return cyclic_reduce(self.path_word(c.darts))

    def generator_loop(self, i: int) -> list[int]:
        e = self.generators[i]
        d = 2 * e
        g = self.graph
        return (self.tree_path(g.tail(d)) + [d]
                + [rev(x) for x in reversed(self.tree_path(g.head(d)))])

    def word_path(self, w) -> list[int]:
        """Based loop at the base vertex reading ``w`` (not reduced)."""
        out: list[int] = []
        for x in w:
            loop = self.generator_loop(abs(x) - 1)
            out += loop if x > 0 else [rev(d) for d in reversed(loop)]
        return out

    def word_cycle(self, w) -> CurveCycle:
        """A reduced cycle in the spine carrying the cyclic word ``w``."""
        return CurveCycle(tuple(reduce_cyclic_path(self.word_path(cyclic_reduce(w)))))

    def cuff_word(self, cuff_id: str) -> tuple[int, ...]:
        return self.cycle_word(self.graph.cuff_cycle(cuff_id))


def reduce_cyclic_path(darts) -> list[int]:
    out: list[int] = []
    for d in darts:
        if out and out[-1] == rev(d):
            out.pop()
        else:
            out.append(d)
    i, j = 0, len(out) - 1
    while i < j and out[i] == rev(out[j]):
        i += 1
        j -= 1
    return out[i:j + 1]


def build_spine(g: PantsGraph, base: int = 0) -> Spine:
    # spanning tree by BFS in rotation order
    parent: dict[int, int] = {}
    seen = {base}
    todo = deque([base])
    tree = set()
    while todo:
        v = todo.popleft()
        for d in g.rotation[v]:
            w = g.head(d)
            if w not in seen:
                seen.add(w)
                parent[w] = d
                tree.add(dart_edge(d))
                todo.append(w)
    if len(seen) != g.n_vertices:
        raise StructureError("pants graph is disconnected")

    # faces: hexagon index, or -1 for every boundary face
    face_of: dict[int, tuple[int, int]] = {}
    for h in g.hexagons:
        for k, d in enumerate(h.darts):
            face_of[d] = (h.index, k)
    closed = g.pd.topology().closed
    root = 0 if closed else -1

    def node(d):
        return face_of[d][0] if d in face_of else -1

    cotree_parent: dict[int, int] = {}  # face -> dart on that face crossing to its parent
    order = [root]
    reached = {root}
    todo = deque([root])
    adj: dict[int, list[int]] = {}
    for d in range(g.n_darts):
        if dart_edge(d) not in tree:
            adj.setdefault(node(d), []).append(d)
    cotree = set()
    while todo:
        f = todo.popleft()
        for d in sorted(adj.get(f, [])):
            e = dart_edge(d)
            if e in cotree:
                continue
            nb = node(rev(d))
            if nb not in reached:
                reached.add(nb)
                cotree.add(e)
                cotree_parent[nb] = rev(d)
                order.append(nb)
                todo.append(nb)
    if len(reached) != len(g.hexagons) + (0 if closed else 1):
        raise StructureError("dual graph is disconnected")

    gens = tuple(sorted(e for e in range(len(g.edges)) if e not in tree and e not in cotree))
    words: dict[int, tuple] = {}
    for e in tree:
        words[2 * e] = ()
        words[2 * e + 1] = ()
    for i, e in enumerate(gens):
        words[2 * e] = (i + 1,)
        words[2 * e + 1] = (-(i + 1),)

    relator: tuple = ()
    # children before parents: each hexagon resolves the dart toward its parent
    for f in reversed(order):
        if f == -1:
            continue
        hexd = g.hexagons[f].darts
        if f == root:
            relator = reduce_word([x for d in hexd for x in words[d]])
            continue
        up = cotree_parent[f]
        k = hexd.index(up)
        rest = hexd[k + 1:] + hexd[:k]
        # up * rest is trivial, so up = rest^-1
        w = invert_word(reduce_word([x for d in rest for x in words[d]]))
        words[up] = w
        words[rev(up)] = invert_word(w)
    expected = g.pd.topology().free_rank
    if len(gens) != expected:
        raise StructureError(f"spine has {len(gens)} generators, expected {expected}")
    return Spine(g, base, frozenset(tree), frozenset(cotree), gens, words, relator, parent)
