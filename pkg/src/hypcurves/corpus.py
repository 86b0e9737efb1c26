"""Seeded corpora of closed curves on the pants graph."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernel import FenchelNielsenMetric, GeometryError, random_metric
from .spine import build_spine, reduce_cyclic_path
from .surface import CurveCycle, PantsGraph, rev


def shortcut_hexagons(g: PantsGraph, darts: list[int]) -> list[int]:
    """Replace runs of four or more sides of one hexagon by the other way round."""
    succ = {}
    for h in g.hexagons:
        for k, d in enumerate(h.darts):
            succ[d] = (h, k)
    changed = True
    darts = list(darts)
    while changed and darts:
        changed = False
        for flip in (False, True):
            seq = [rev(d) for d in reversed(darts)] if flip else darts
            n = len(seq)
            for i in range(n):
                if seq[i] not in succ:
                    continue
                h, k = succ[seq[i]]
                r = 1
                while r < min(n, 6) and seq[(i + r) % n] == h.darts[(k + r) % 6]:
                    r += 1
                if r >= 4 and r < n:
                    other = [rev(h.darts[(k - 1 - s) % 6]) for s in range(6 - r)]
                    rest = [seq[(i + r + s) % n] for s in range(n - r)]
                    seq = reduce_cyclic_path(other + rest)
                    changed = True
                    break
            darts = [rev(d) for d in reversed(seq)] if flip else seq
            if changed:
                break
    return darts


def random_cycle(g: PantsGraph, rng: np.random.Generator, steps: int) -> CurveCycle | None:
    v0 = int(rng.integers(g.n_vertices))
    v, prev, darts = v0, None, []
    for _ in range(steps):
        opts = [d for d in g.rotation[v] if prev is None or d != rev(prev)]
        d = opts[int(rng.integers(len(opts)))]
        darts.append(d)
        prev, v = d, g.head(d)
    darts += g.shortest_path(v, v0)
    darts = shortcut_hexagons(g, reduce_cyclic_path(darts))
    if not darts:
        return None
    return CurveCycle(tuple(darts))


@dataclass(frozen=True)
class CorpusCurve:
    id: str
    cycle: CurveCycle
    k: int


def intersection_oracle(g: PantsGraph, seed: int = 0):
    """k for cycles on ``g``: combinatorial on open surfaces, geodesic on closed ones."""
    from .intersection import self_intersection_combinatorial
    from .tracing import self_intersection_geodesic

    if g.pd.topology().closed:
        metric = random_metric(g.pd, np.random.default_rng(seed))

        def k_of(c):
            return self_intersection_geodesic(g, metric, c).k
    else:
        sp = build_spine(g)

        def k_of(c):
            return self_intersection_combinatorial(g, c, sp).k
    return k_of


def generate_corpus(g: PantsGraph, seed: int, size: int, k_min: int = 1, k_max: int = 200,
                    min_steps: int = 4, max_steps: int = 40, prefix: str = "c",
                    max_tries: int | None = None) -> list[CorpusCurve]:
    """``size`` distinct free homotopy classes with oracle k in [k_min, k_max]."""
    from .intersection import Inconclusive

    rng = np.random.default_rng(seed)
    k_of = intersection_oracle(g, seed)
    sp = build_spine(g)
    seen = set()
    out: list[CorpusCurve] = []
    tries = 0
    max_tries = max_tries or 200 * size
    while len(out) < size and tries < max_tries:
        tries += 1
        steps = int(rng.integers(min_steps, max_steps + 1))
        c = random_cycle(g, rng, steps)
        if c is None or not g.validate_cycle(c).valid:
            continue
        from .spine import canonical_cyclic
        key = canonical_cyclic(sp.cycle_word(c))
        if not key or key in seen:
            continue
        try:
            k = k_of(c)
        except (Inconclusive, GeometryError):
            # on closed surfaces a reduced spine word can still be null-homotopic
            continue
        if not k_min <= k <= k_max:
            continue
        seen.add(key)
        out.append(CorpusCurve(f"{prefix}{len(out):03d}", c, k))
    return out


def thick_metrics(g: PantsGraph, seed: int, count: int = 3) -> list[FenchelNielsenMetric]:
    rng = np.random.default_rng(seed)
    return [random_metric(g.pd, rng) for _ in range(count)]
