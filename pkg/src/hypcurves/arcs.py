"""Cut a cycle at seam points into tau- and beta-arcs; Dehn twists about cuffs.

Every seam edge carries one seam point, so an arc runs from the middle of a
seam edge down to a cuff, along some boundary edges of that cuff and up the
next seam edge.  An arc that leaves the cuff on the other side from where it
arrived crosses the cuff (a beta-arc); otherwise it is a tau-arc.

Orientation convention: a beta-arc's twist counts boundary edges positively
when they turn left relative to the crossing, i.e. east when crossing from
the primary (north) side to the secondary (south) side and west when crossing
the other way.  A positive Dehn twist adds one full turn to the left at every
crossing, which adds 2 to each beta twist.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .surface import CurveCycle, PantsGraph, StructureError, rev


@dataclass(frozen=True)
class SeamPoint:
    edge: int

    @property
    def name(self) -> str:
        return f"e{self.edge}/2"


@dataclass(frozen=True)
class Arc:
    cuff: str
    kind: str            # "tau" or "beta"
    twist: int           # t >= 0 for tau, signed b for beta
    start: SeamPoint | None = None
    end: SeamPoint | None = None
    seam_in: int | None = None    # dart arriving at the cuff
    seam_out: int | None = None   # dart leaving the cuff
    run: tuple = ()               # boundary darts between them
    flags: tuple = ()


@dataclass(frozen=True)
class ArcDecomposition:
    arcs: tuple                      # in cyclic order along the curve
    cuffs: tuple                     # every cuff id of the surface
    cuff_curve: str | None = None    # set when the cycle is a power of a cuff
    cuff_power: int = 0
    graph: PantsGraph | None = field(default=None, compare=False, repr=False)

    def beta(self, cuff: str) -> list[int]:
        return sorted(a.twist for a in self.arcs if a.cuff == cuff and a.kind == "beta")

    def tau(self, cuff: str) -> list[int]:
        return sorted((a.twist for a in self.arcs if a.cuff == cuff and a.kind == "tau"),
                      reverse=True)

    def n(self, cuff: str) -> int:
        return sum(1 for a in self.arcs if a.cuff == cuff and a.kind == "beta")

    def m(self, cuff: str) -> int:
        return sum(1 for a in self.arcs if a.cuff == cuff and a.kind == "tau")

    @property
    def flags(self) -> list[str]:
        return sorted({f for a in self.arcs for f in a.flags})

    def to_json(self) -> dict:
        out = {c: {"beta": self.beta(c), "tau": self.tau(c)} for c in self.cuffs}
        if self.cuff_curve is not None:
            out["cuff_curve"] = {"cuff": self.cuff_curve, "power": self.cuff_power}
        return out

    @classmethod
    def from_twists(cls, data: dict) -> "ArcDecomposition":
        """Bare decomposition from per-cuff twist lists, without a cycle behind it."""
        arcs = []
        for c in sorted(data):
            arcs += [Arc(c, "beta", int(b)) for b in data[c].get("beta", [])]
            arcs += [Arc(c, "tau", int(t)) for t in data[c].get("tau", [])]
        return cls(tuple(arcs), tuple(sorted(data)))

    def to_cycle(self) -> CurveCycle:
        if self.graph is None:
            raise StructureError("decomposition has no underlying graph")
        if self.cuff_curve is not None:
            return self.graph.cuff_cycle(self.cuff_curve, self.cuff_power)
        darts = []
        for a in self.arcs:
            darts += list(a.run) + [a.seam_out]
        # arcs start after a seam dart; rotate so the cycle starts at a seam
        return CurveCycle(tuple([darts[-1]] + darts[:-1]))


def _cuff_step(g: PantsGraph, v: int, q: int) -> int:
    for d in g.rotation[v]:
        if g.quarter[d] == q and not g.is_seam(d):
            return d
    raise StructureError(f"no boundary dart at vertex {v} heading {q}")


def _beta_sign(g: PantsGraph, seam_in: int) -> int:
    # +1 when crossing north to south
    return 1 if g.side.get(rev(seam_in), 0) == 0 else -1


def _run_for(g: PantsGraph, v: int, left_quarter: int, b: int) -> tuple:
    q = left_quarter if b >= 0 else (left_quarter + 2) % 4
    run = []
    for _ in range(abs(b)):
        d = _cuff_step(g, v, q)
        run.append(d)
        v = g.head(d)
    return tuple(run)


def decompose(g: PantsGraph, c: CurveCycle) -> ArcDecomposition:
    diag = g.validate_cycle(c)
    if not diag.valid and not diag.reducible:
        raise StructureError(diag.message)
    cuff_ids = tuple(cf.id for cf in g.pd.cuffs)
    darts = c.darts
    seams = [i for i, d in enumerate(darts) if g.is_seam(d)]
    if not seams:
        cid = g.edge_of(darts[0]).cuff
        east = sum(1 if g.quarter[d] == 0 else -1 for d in darts)
        return ArcDecomposition((), cuff_ids, cid, east // 2, g)
    arcs = []
    n = len(darts)
    for k, i in enumerate(seams):
        j = seams[(k + 1) % len(seams)]
        run = tuple(darts[(i + 1 + s) % n] for s in range((j - i - 1) % n))
        d_in, d_out = darts[i], darts[j]
        v = g.head(d_in)
        cid = g.vertex_cuff[v]
        s_in, s_out = g.side.get(rev(d_in), 0), g.side.get(d_out, 0)
        flags = ()
        if s_in != s_out:
            east = sum(1 if g.quarter[d] == 0 else -1 for d in run)
            b = east * _beta_sign(g, d_in)
            arc = Arc(cid, "beta", b, SeamPoint(d_in >> 1), SeamPoint(d_out >> 1),
                      d_in, d_out, run)
        else:
            if not run:
                flags = ("tau-arc without twisting (backtrack at a seam)",)
            arc = Arc(cid, "tau", len(run), SeamPoint(d_in >> 1), SeamPoint(d_out >> 1),
                      d_in, d_out, run, flags)
        arcs.append(arc)
    return ArcDecomposition(tuple(arcs), cuff_ids, None, 0, g)


def apply_dehn_twist(d: ArcDecomposition, cuff: str, power: int) -> ArcDecomposition:
    """Twist ``power`` times about ``cuff``; each beta twist there changes by 2 * power."""
    if cuff not in d.cuffs:
        raise StructureError(f"unknown cuff {cuff}")
    if power == 0:
        return d
    g = d.graph
    arcs = []
    for a in d.arcs:
        if a.cuff != cuff or a.kind != "beta":
            arcs.append(a)
            continue
        b = a.twist + 2 * power
        if g is None or a.seam_in is None:
            arcs.append(replace(a, twist=b))
            continue
        left = 0 if _beta_sign(g, a.seam_in) > 0 else 2
        arcs.append(replace(a, twist=b, run=_run_for(g, g.head(a.seam_in), left, b)))
    return replace(d, arcs=tuple(arcs))


@dataclass(frozen=True)
class TwistNormalization:
    powers: dict

    def to_json(self) -> dict:
        return dict(sorted(self.powers.items()))


def normalizing_power(total: int, n: int) -> int:
    """The p with 0 < total + 2 n p <= 2 n."""
    return -math.floor((total - 1) / (2 * n))


def normalize_twists(d: ArcDecomposition) -> tuple[ArcDecomposition, TwistNormalization]:
    powers = {}
    out = d
    for c in d.cuffs:
        n = d.n(c)
        if n == 0:
            continue
        p = normalizing_power(sum(d.beta(c)), n)
        powers[c] = p
        out = apply_dehn_twist(out, c, p)
    return out, TwistNormalization(powers)


def twist_cycle(g: PantsGraph, c: CurveCycle, cuff: str, power: int) -> CurveCycle:
    """The cycle of the Dehn-twisted curve."""
    d = decompose(g, c)
    if d.cuff_curve is not None:
        return c
    return apply_dehn_twist(d, cuff, power).to_cycle()


def crossings(d: ArcDecomposition) -> dict[str, int]:
    return {c: d.n(c) for c in d.cuffs}
