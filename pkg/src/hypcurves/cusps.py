"""Cusps, half-collars, and opening cusps into short geodesic boundaries.

A cusp is the length-zero limit of a boundary cuff.  Cusped lengths are
evaluated at a boundary length of ``CUSP_LENGTH``, far below anything that
can be seen at the working precision of the comparisons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .holonomy import cycle_length
from .kernel import FenchelNielsenMetric, GeometryError
from .surface import CurveCycle, PantsGraph, StructureError

CUSP_LENGTH = 1e-60


def horocycle_distance(a: float) -> float:
    """Signed distance from the length-2 horocycle to the one of length 2/a."""
    if not a > 0:
        raise GeometryError("a must be positive")
    return math.log(a)


def half_collar_width(l: float) -> float:
    if not l > 0:
        raise GeometryError("length must be positive")
    return math.asinh(1 / math.sinh(l / 2))


def opened_collar_exceeds(L: float) -> bool:
    """The half-collar about a boundary of length e^{-L/2} is wider than L/2,
    in both the chart form and the form with sinh(e^{-L/2})."""
    l = math.exp(-L / 2)
    return half_collar_width(l) > L / 2 and math.asinh(1 / math.sinh(l)) > L / 2


def metric_tensor_comparison(r: float) -> tuple[float, float]:
    if not r > 0:
        raise GeometryError("r must be positive")
    a, b = math.cosh(r) ** 2, math.exp(2 * r)
    if not a < b:
        raise ArithmeticError(f"cosh^2({r}) >= e^(2 {r})")
    return a, b


def cusp_tensor(l_h0: float, rho: float) -> float:
    return l_h0 ** 2 * math.exp(2 * rho)


def collar_tensor(l_eta: float, rho: float) -> float:
    return l_eta ** 2 * math.cosh(rho) ** 2


def tensor_grid_check(L: float, points: int = 100) -> bool:
    """Collar tensor below the cusp tensor on the shared chart.

    The cusp chart is taken from the horocycle of length e^{-L/2}, the collar
    chart from the boundary geodesic of the same length; both run outward for
    the smaller of the half-collar width and the distance to the length-2
    horocycle.
    """
    l = math.exp(-L / 2)
    top = min(half_collar_width(l), math.log(2) + L / 2)
    for i in range(points + 1):
        rho = top * i / points
        if collar_tensor(l, rho) > cusp_tensor(l, rho):
            return False
    return True


@dataclass(frozen=True)
class OpenedSurface:
    source: dict             # {"lengths": ..., "twists": ...} with zeros at cusps
    L: float
    metric: FenchelNielsenMetric
    cusps: tuple

    def to_json(self) -> dict:
        return {"L": self.L, "cusps": list(self.cusps), "metric": self.metric.to_json()}


def open_cusps(source: dict, L: float) -> OpenedSurface:
    """Replace each zero length with e^{-L/2}; everything else is kept as is."""
    if L < 0:
        raise ValueError("L must be non-negative")
    lengths = dict(source["lengths"])
    cusps = tuple(sorted(c for c, v in lengths.items() if v == 0))
    if not cusps:
        raise StructureError("no cusps (zero lengths) to open")
    new = math.exp(-L / 2)
    for c in cusps:
        lengths[c] = new
    return OpenedSurface(source, L, FenchelNielsenMetric(lengths, dict(source.get("twists", {}))),
                         cusps)


def cusped_metric(source: dict) -> FenchelNielsenMetric:
    lengths = {c: (v if v else CUSP_LENGTH) for c, v in source["lengths"].items()}
    return FenchelNielsenMetric(lengths, dict(source.get("twists", {})))


def cusp_source(g: PantsGraph, metric: FenchelNielsenMetric) -> dict:
    """``metric`` with the cusp cuffs of ``g`` set to length 0."""
    cusps = {c.id for c in g.pd.cuffs if c.kind == "cusp"}
    data = metric.to_json()
    for c in cusps:
        data["lengths"][c] = 0.0
    return data


def reference_metric(g: PantsGraph) -> FenchelNielsenMetric:
    """The fixed thick metric: every cuff of length 1, no twist."""
    return FenchelNielsenMetric.uniform(g.pd)


@dataclass(frozen=True)
class CuspComparison:
    L: float
    l_cusped: float
    l_opened: float
    excess: float
    reference_ratio: float

    def row(self) -> list:
        return [self.L, self.l_cusped, self.l_opened, self.excess, self.reference_ratio]


def compare_lengths(g: PantsGraph, curve: CurveCycle, source: dict, L: float,
                    l_cusped: float | None = None, l_reference: float | None = None
                    ) -> CuspComparison:
    if l_cusped is None:
        l_cusped = cycle_length(g, cusped_metric(source), curve)
    if l_cusped > L:
        raise ValueError(f"curve has cusped length {l_cusped:.6g} > L = {L}")
    opened = open_cusps(source, L)
    l_open = cycle_length(g, opened.metric, curve)
    if l_reference is None:
        l_reference = cycle_length(g, reference_metric(g), curve)
    return CuspComparison(L, l_cusped, l_open, l_open - L,
                          l_reference / (L * math.exp(L / 2)))


def cusp_sweep(g: PantsGraph, curve: CurveCycle, source: dict, Ls) -> list[CuspComparison]:
    """Comparisons at every L in ``Ls`` that is at least the cusped length."""
    lc = cycle_length(g, cusped_metric(source), curve)
    lr = cycle_length(g, reference_metric(g), curve)
    return [compare_lengths(g, curve, source, L, lc, lr) for L in Ls if L >= lc]


def non_increasing(values, tol: float = 1e-12) -> bool:
    return all(b <= a + tol for a, b in zip(values, values[1:]))


def hyperbolic_in_cusped(g: PantsGraph, curves, source: dict) -> list:
    """Drop curves that are parallel to a cusp (parabolic in the cusped metric)."""
    m = cusped_metric(source)
    out = []
    for c in curves:
        cyc = getattr(c, "cycle", c)
        try:
            cycle_length(g, m, cyc)
        except GeometryError:
            continue
        out.append(c)
    return out
