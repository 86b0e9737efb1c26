"""Closed-form hyperbolic geometry of pants, collars and equidistant curves."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .surface import PantsDecomposition, StructureError


class GeometryError(ValueError):
    pass


def _positive(*xs):
    for x in xs:
        if not x > 0:
            raise GeometryError(f"length must be positive, got {x}")


def hexagon_seam_length(l1: float, l2: float, l3: float) -> float:
    """Seam between cuffs 1 and 2 of the pants with cuff lengths ``l1, l2, l3``."""
    _positive(l1, l2, l3)
    c = (math.cosh(l3 / 2) + math.cosh(l1 / 2) * math.cosh(l2 / 2)) / (
        math.sinh(l1 / 2) * math.sinh(l2 / 2))
    return math.acosh(c)


def equidistant_length(l: float, L: float) -> float:
    return l * math.cosh(L)


def collar_width(l: float) -> float:
    _positive(l)
    # log coth(l/2), written to stay positive for long geodesics
    return math.log1p(2 / math.expm1(l))


def radial_arc_length(eps: float, T: float) -> float:
    """Length of the radial arc between the equidistant curves of lengths 1 and ``T``
    around a geodesic of length ``eps``."""
    if not (0 < eps <= T <= 1):
        raise GeometryError(f"need 0 < eps <= T <= 1, got eps={eps}, T={T}")
    return math.acosh(1 / eps) - math.acosh(T / eps)


def seam_point_offset(la: float, lb: float, lc: float) -> float:
    """Distance along the seam between cuffs a and b from cuff a to the seam point.

    The orthogeodesic from cuff c to itself cuts the front hexagon into two
    right-angled pentagons; the offset is a side of the pentagon touching a.
    """
    _positive(la, lb, lc)
    s_ca = hexagon_seam_length(lc, la, lb)
    h = math.acosh(math.sinh(s_ca) * math.sinh(la / 2))
    return math.asinh(math.cosh(s_ca) / math.sinh(h))


def seam_split(la: float, lb: float, lc: float) -> tuple[float, float]:
    """Offsets of the seam point from both ends of the a-b seam."""
    return seam_point_offset(la, lb, lc), seam_point_offset(lb, la, lc)


def _seam_gap(C, la, lb, lc):
    return abs(seam_point_offset(la, lb, lc) - math.acosh(C / la))


@lru_cache(maxsize=None)
def seam_to_equidistant_bound(C: float, levels: int = 5, n: int = 9) -> float:
    """Upper bound D(C) on the distance from a seam point to the equidistant
    curve of length ``C`` about either cuff at the ends of its seam, over all
    pants with cuff lengths in (0, C].

    The search runs on a log-spaced grid reaching down to ``C * 1e-8`` and
    refines around the best cell.  Both ends of the seam are covered because
    the offset is not symmetric in the two adjacent cuffs.  The returned value
    adds the largest change seen inside a refined cell, as slack.
    """
    _positive(C)
    lo = math.log(C * 1e-8)
    hi = math.log(C)
    box = [(lo, hi)] * 3
    best = 0.0
    slack = 0.0
    for _ in range(levels):
        axes = [np.exp(np.linspace(a, b, n)) for a, b in box]
        vals = np.empty((n, n, n))
        for i, a in enumerate(axes[0]):
            for j, b in enumerate(axes[1]):
                for k, c in enumerate(axes[2]):
                    a_, b_, c_ = min(a, C), min(b, C), min(c, C)
                    vals[i, j, k] = max(_seam_gap(C, a_, b_, c_), _seam_gap(C, b_, a_, c_))
        idx = np.unravel_index(np.argmax(vals), vals.shape)
        best = max(best, float(vals[idx]))
        # slack: spread of values in the neighbouring cells
        sl = tuple(slice(max(i - 1, 0), i + 2) for i in idx)
        slack = float(vals[sl].max() - vals[sl].min())
        box = []
        for ax, i in zip(axes, idx):
            la, lb = math.log(ax[max(i - 1, 0)]), math.log(ax[min(i + 1, n - 1)])
            box.append((la, lb))
    return best + slack


def seam_constant(C: float = 1.0) -> float:
    """The per-arc constant 2 D(C) + 1 used in the explicit length bounds."""
    return 2 * seam_to_equidistant_bound(C) + 1


@dataclass(frozen=True)
class FenchelNielsenMetric:
    """Cuff lengths and twists.  One unit of twist slides by the full cuff length."""
    lengths: dict
    twists: dict = field(default_factory=dict)

    def __post_init__(self):
        for cid, l in self.lengths.items():
            if not (isinstance(l, (int, float)) or hasattr(l, "real")) or not l > 0:
                raise GeometryError(f"cuff {cid}: length must be positive, got {l}")
        tw = {c: 0.0 for c in self.lengths}
        for cid, t in self.twists.items():
            if cid not in self.lengths:
                raise GeometryError(f"twist given for unknown cuff {cid}")
            tw[cid] = t
        object.__setattr__(self, "twists", tw)

    def check(self, pd: PantsDecomposition) -> None:
        ids = {c.id for c in pd.cuffs}
        if set(self.lengths) != ids:
            missing = sorted(ids - set(self.lengths))
            extra = sorted(set(self.lengths) - ids)
            raise StructureError(f"metric cuffs mismatch: missing {missing}, unknown {extra}")

    @property
    def convenient(self) -> bool:
        return all(float(2 * t).is_integer() for t in self.twists.values())

    def shear(self, cid: str):
        return self.twists[cid] * self.lengths[cid]

    def with_lengths(self, **changes) -> "FenchelNielsenMetric":
        return FenchelNielsenMetric({**self.lengths, **changes}, self.twists)

    def replace(self, lengths=None, twists=None) -> "FenchelNielsenMetric":
        return FenchelNielsenMetric(
            {**self.lengths, **(lengths or {})}, {**self.twists, **(twists or {})})

    def to_json(self) -> dict:
        return {"lengths": {k: float(v) for k, v in sorted(self.lengths.items())},
                "twists": {k: float(v) for k, v in sorted(self.twists.items())}}

    @classmethod
    def from_json(cls, data: dict) -> "FenchelNielsenMetric":
        return cls({k: float(v) for k, v in data["lengths"].items()},
                   {k: float(v) for k, v in data.get("twists", {}).items()})

    @classmethod
    def uniform(cls, pd: PantsDecomposition, length: float = 1.0, twist: float = 0.0):
        return cls({c.id: length for c in pd.cuffs},
                   {c.id: twist for c in pd.cuffs if c.glued})


def random_metric(pd: PantsDecomposition, rng, lo: float = 0.6, hi: float = 1.6,
                  twisted: bool = True) -> FenchelNielsenMetric:
    """A thick metric with generic lengths and, optionally, generic twists."""
    lengths = {c.id: float(rng.uniform(lo, hi)) for c in pd.cuffs}
    twists = {c.id: (float(rng.uniform(-0.5, 0.5)) if twisted else 0.0)
              for c in pd.cuffs if c.glued}
    return FenchelNielsenMetric(lengths, twists)
