"""Twist-number inequalities, the twist polygon, and the sums-to-products bound."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .arcs import ArcDecomposition


def _require_k(k: int):
    if k < 1:
        raise ValueError("ratios need k >= 1")


def beta_spread(b) -> int:
    """Sum over i > j of b_i - b_j for sorted ``b``, by the double sum."""
    return sum(b[i] - b[j] for i in range(len(b)) for j in range(i))


def weighted_tau(t, threshold: int = 4) -> int:
    """Sum of i * t_i over t_i >= threshold, with t sorted descending and i from 1."""
    return sum(i * x for i, x in enumerate(t, start=1) if x >= threshold)


@dataclass(frozen=True)
class CuffRatios:
    arcs: float                  # (n + m) / sqrt k
    beta_sum: float              # sum b / sqrt k
    beta_sum_positive: bool | None
    tau_weighted: float          # sum_{t_i >= 4} i t_i / k
    beta_spread: float           # sum_{i > j} (b_i - b_j) / k
    n_tau: float                 # n sum t / k

    @property
    def max(self) -> float:
        return max(self.arcs, abs(self.beta_sum), self.tau_weighted, self.beta_spread, self.n_tau)


def check_sapir_inequalities(d: ArcDecomposition, k: int) -> dict[str, CuffRatios]:
    _require_k(k)
    root = math.sqrt(k)
    out = {}
    for c in d.cuffs:
        b, t = d.beta(c), d.tau(c)
        n, m = len(b), len(t)
        out[c] = CuffRatios(
            (n + m) / root,
            sum(b) / root,
            (sum(b) > 0) if n else None,
            weighted_tau(t) / k,
            beta_spread(b) / k,
            n * sum(t) / k,
        )
    return out


# -- the twist polygon --------------------------------------------------------

def _require_sorted(b):
    if any(b[i] > b[i + 1] for i in range(len(b) - 1)):
        raise ValueError("twists must be sorted ascending")


@dataclass(frozen=True)
class TwistPolygon:
    b: tuple

    def __post_init__(self):
        _require_sorted(self.b)

    @property
    def partial_sums(self) -> list[int]:
        out, s = [0], 0
        for x in self.b:
            s += x
            out.append(s)
        return out

    @property
    def vertices(self) -> list[tuple[int, int]]:
        B = self.partial_sums
        n = len(self.b)
        lower = [(i, B[i]) for i in range(n + 1)]
        upper = [(n - i, B[n] - B[i]) for i in range(1, n)]
        return lower + upper

    def doubled_triangle_area(self, i: int) -> int:
        """Twice the area of the triangle (0,0), (i, B_i), (i+1, B_{i+1})."""
        B = self.partial_sums
        return abs(i * B[i + 1] - (i + 1) * B[i])

    def doubled_shoelace(self) -> int:
        v = self.vertices
        s = sum(v[i][0] * v[(i + 1) % len(v)][1] - v[(i + 1) % len(v)][0] * v[i][1]
                for i in range(len(v)))
        return abs(s)

    def is_convex(self) -> bool:
        v = self.vertices
        n = len(v)
        if n < 3:
            return True
        signs = set()
        for i in range(n):
            (x0, y0), (x1, y1), (x2, y2) = v[i], v[(i + 1) % n], v[(i + 2) % n]
            cr = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1)
            if cr:
                signs.add(cr > 0)
        return len(signs) <= 1


def polygon_area(b) -> int:
    """Area of the twist polygon, checked three ways in integer arithmetic."""
    b = tuple(int(x) for x in b)
    poly = TwistPolygon(b)
    double = beta_spread(b)
    n = len(b)
    # each T_i has doubled area (b_{i+1} - b_1) + ... + (b_{i+1} - b_i)
    tri_formula = sum(sum(b[i] - b[j] for j in range(i)) for i in range(1, n))
    tri_geom = sum(poly.doubled_triangle_area(i) for i in range(1, n))
    if not double == tri_formula == tri_geom:
        raise ArithmeticError(f"polygon area mismatch: {double}, {tri_formula}, {tri_geom}")
    # the triangles cover half of P, so the doubled triangle sum is the area itself
    shoelace = Fraction(poly.doubled_shoelace(), 2)
    if n >= 2 and shoelace != double:
        raise ArithmeticError(f"shoelace area {shoelace} != {double}")
    return double


@dataclass(frozen=True)
class TwistBound:
    holds: bool
    slack: float            # bound minus sum |b_i|
    intermediate: bool      # n * sum_{b_i <= 0} |b_i| <= Area(P)
    area: int
    negative_mass: int


def check_abs_twist_bound(b, k: int, C: float) -> TwistBound:
    """Check sum |b_i| <= 2 C k / n + C sqrt k for the sorted beta twists of one cuff."""
    _require_k(k)
    b = sorted(int(x) for x in b)
    n = len(b)
    if n == 0:
        raise ValueError("the bound needs at least one beta-arc (n != 0)")
    area = polygon_area(b)
    neg = sum(-x for x in b if x <= 0)
    bound = 2 * C * k / n + C * math.sqrt(k)
    total = sum(abs(x) for x in b)
    return TwistBound(total <= bound, bound - total, n * neg <= area, area, neg)


def check_abs_twist_bound_cuff(d: ArcDecomposition, cuff: str, k: int, C: float) -> TwistBound:
    return check_abs_twist_bound(d.beta(cuff), k, C)


# -- sums to products ---------------------------------------------------------

def sums_to_products_check(x, K: float) -> bool:
    x = [float(v) for v in x]
    if not x or any(v <= 0 for v in x):
        raise ValueError("need positive x_j")
    load = sum(j * v for j, v in enumerate(x, start=1))
    if load > K * (1 + 1e-12):
        raise ValueError(f"infeasible: sum j x_j = {load} > K = {K}")
    return sum(math.log(v) for v in x) <= 2 * math.sqrt(K / math.e) + 1e-12


@dataclass(frozen=True)
class LagrangeOptimum:
    value: float
    maximizer: tuple
    bound: float


def lagrange_optimum(K: float, n: int) -> LagrangeOptimum:
    """Maximum of log prod x_j subject to sum j x_j = K."""
    if K <= 0 or n < 1:
        raise ValueError("need K > 0 and n >= 1")
    value = n * math.log(K) - n * math.log(n) - math.lgamma(n + 1)
    x = tuple(K / (n * j) for j in range(1, n + 1))
    bound = 2 * math.sqrt(K / math.e)
    if value > bound + 1e-12:
        raise ArithmeticError(f"optimum {value} exceeds {bound}")
    return LagrangeOptimum(value, x, bound)


def random_feasible(rng, n: int, K: float):
    """A random point with sum j x_j = K and all x_j > 0."""
    w = rng.dirichlet([1.0] * n)
    return [K * w[j] / (j + 1) for j in range(n)]


# -- empirical constants ----------------------------------------------------------

@dataclass
class ConstantsLedger:
    """Corpus maxima standing in for the unquantified constants."""
    entries: dict = field(default_factory=dict)

    def record(self, name: str, surface: str, value: float, witness: str, run: str):
        if not value > 0:
            raise ValueError(f"{name}: constants must be positive, got {value}")
        key = f"{name}/{surface}"
        old = self.entries.get(key)
        if old is None or value > old["value"]:
            self.entries[key] = {"value": float(value), "witness": witness, "run": run}

    def get(self, name: str, surface: str) -> float:
        return self.entries[f"{name}/{surface}"]["value"]

    def to_json(self) -> str:
        return json.dumps(self.entries, sort_keys=True, indent=2)
