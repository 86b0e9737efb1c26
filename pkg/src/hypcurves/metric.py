"""Short metrics for a curve with k self-intersections.

Each cuff gets length min(n/sqrt k, 1), where n counts the curve's crossings
of that cuff (1/sqrt k when it never crosses).  After the twists are
normalized the curve has an explicit representative made of seam legs, cuff
segments and equidistant shortcuts, whose length gives an O(sqrt k) bound.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .arcs import ArcDecomposition, decompose, normalize_twists
from .holonomy import build_holonomy, cycle_length, systole
from .kernel import FenchelNielsenMetric, GeometryError, seam_constant, seam_point_offset
from .surface import CurveCycle, PantsDecomposition, PantsGraph, StructureError, build_pants_graph

SYSTOLE_TOL = 1e-6


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class CuffChoice:
    eps: dict           # cuff id -> length in (0, 1]
    branch: dict        # cuff id -> "crossed" or "uncrossed"
    k: int

    def length(self, cid: str) -> float:
        return self.eps.get(cid, 1.0)

    def to_json(self) -> dict:
        return {c: {"eps": self.eps[c], "branch": self.branch[c]} for c in sorted(self.eps)}


def choose_cuff_lengths(d: ArcDecomposition, k: int) -> CuffChoice:
    if k < 1:
        raise ValueError("k must be at least 1; simple curves (k = 0) need no construction:"
                         " use degree 1 and any thick metric")
    root = math.sqrt(k)
    eps, branch = {}, {}
    for c in d.cuffs:
        n = d.n(c)
        if n:
            eps[c], branch[c] = min(n / root, 1.0), "crossed"
        else:
            eps[c], branch[c] = 1 / root, "uncrossed"
    return CuffChoice(eps, branch, k)


def build_convenient_metric(pd: PantsDecomposition, choice: CuffChoice,
                            boundary_length: float = 1.0) -> FenchelNielsenMetric:
    """Lengths from ``choice``, twists 0.  Cuffs missing from the choice must be
    boundary cuffs and get ``boundary_length``."""
    lengths = {}
    for cf in pd.cuffs:
        if cf.id in choice.eps:
            lengths[cf.id] = float(choice.eps[cf.id])
        elif not cf.glued:
            lengths[cf.id] = float(boundary_length)
        else:
            raise StructureError(f"no length chosen for interior cuff {cf.id}")
    return FenchelNielsenMetric(lengths, {cf.id: 0.0 for cf in pd.cuffs if cf.glued})


def shrink_boundary(metric: FenchelNielsenMetric, pd: PantsDecomposition, subset,
                    eps_new: float, k: int | None = None) -> FenchelNielsenMetric:
    """Give the boundary cuffs in ``subset`` the length ``eps_new``."""
    glued = {cf.id for cf in pd.cuffs if cf.glued}
    bad = sorted(set(subset) & glued)
    if bad:
        raise StructureError(f"cannot shrink interior cuffs {bad}")
    unknown = sorted(set(subset) - {cf.id for cf in pd.cuffs})
    if unknown:
        raise StructureError(f"unknown cuffs {unknown}")
    if k is not None and not eps_new < 1 / math.sqrt(k):
        raise GeometryError(f"shrunk length must be below 1/sqrt(k) = {1 / math.sqrt(k)}")
    if not subset:
        return metric
    return metric.replace(lengths={c: float(eps_new) for c in subset})


# -- explicit representative ------------------------------------------------

@dataclass(frozen=True)
class Leg:
    kind: str       # "seam", "cuff" or "equidistant"
    cuff: str
    length: float


@dataclass(frozen=True)
class Representative:
    legs: tuple
    arcs: tuple     # per arc: (cuff, kind, twist, length, branch)

    @property
    def length(self) -> float:
        return sum(l.length for l in self.legs)


def _slot_lengths(g: PantsGraph, metric: FenchelNielsenMetric):
    slot_cuff = {}
    for cf in g.pd.cuffs:
        slot_cuff[cf.primary] = cf.id
        if cf.secondary is not None:
            slot_cuff[cf.secondary] = cf.id
    return lambda p, i: metric.lengths[slot_cuff[(p, i % 3)]]


def seam_offset_at(g: PantsGraph, metric: FenchelNielsenMetric, d_in: int) -> float:
    """Distance from the seam point of seam dart ``d_in`` to the cuff at its head."""
    e = g.edge_of(d_in)
    L = _slot_lengths(g, metric)
    p, i = e.pants, e.slot
    a = i + 1 if d_in % 2 == 0 else i
    b = i if d_in % 2 == 0 else i + 1
    return seam_point_offset(L(p, a), L(p, b), L(p, i + 2))


def arc_legs(kind: str, twist: int, eps: float, x1: float, x2: float, cuff: str = ""):
    """Legs of one arc between seam points at distances ``x1``, ``x2`` from a cuff
    of length ``eps``, and the branch taken."""
    if kind == "beta":
        return [Leg("seam", cuff, x1), Leg("cuff", cuff, abs(twist) * eps / 2),
                Leg("seam", cuff, x2)], "cross"
    t = twist
    if t == 0:
        r = min(x1, x2)
        return [Leg("seam", cuff, x1 - r), Leg("seam", cuff, x2 - r)], "turn"
    if t <= 2 / eps:
        # run along the equidistant curve of length 2/t, or as close as the seam allows
        r = min(x1, x2, math.acosh(2 / (t * eps)))
        return [Leg("seam", cuff, x1 - r), Leg("equidistant", cuff, math.cosh(r) * t * eps / 2),
                Leg("seam", cuff, x2 - r)], "shortcut"
    return [Leg("seam", cuff, x1), Leg("cuff", cuff, t * eps / 2),
            Leg("seam", cuff, x2)], "descend"


def arc_bound(kind: str, twist: int, eps: float, c: float | None = None) -> float:
    """The per-arc share of the explicit length bound."""
    c = seam_constant(1.0) if c is None else c
    if kind == "beta":
        return eps / 2 * abs(twist) + 2 * math.log(2 / eps) + c
    return max(1.0, eps * twist / 2) + (2 * math.log(twist) if twist > 0 else 0.0) + c


def construct_representative(d: ArcDecomposition, metric: FenchelNielsenMetric) -> Representative:
    g = d.graph
    if g is None:
        raise StructureError("decomposition has no underlying graph")
    try:
        metric.check(g.pd)
    except StructureError as exc:
        raise StructureError(f"metric does not match the decomposition: {exc}") from exc
    if any(metric.twists.get(c, 0) for c in metric.twists):
        raise StructureError("representative needs a metric with zero twists")
    if d.cuff_curve is not None:
        ln = abs(d.cuff_power) * metric.lengths[d.cuff_curve]
        return Representative((Leg("cuff", d.cuff_curve, ln),),
                              ((d.cuff_curve, "cuff", d.cuff_power, ln, "cuff"),))
    legs, arcs = [], []
    for a in d.arcs:
        eps = metric.lengths[a.cuff]
        x1 = seam_offset_at(g, metric, a.seam_in)
        x2 = seam_offset_at(g, metric, a.seam_out ^ 1)
        part, branch = arc_legs(a.kind, a.twist, eps, x1, x2, a.cuff)
        legs += part
        arcs.append((a.cuff, a.kind, a.twist, sum(l.length for l in part), branch))
    return Representative(tuple(legs), tuple(arcs))


# -- analytic bound -----------------------------------------------------------

@dataclass(frozen=True)
class CuffBound:
    eps: float
    n: int
    m: int
    beta: float
    twist_log: float
    tau_linear: float
    tau_log: float
    constants: float

    @property
    def total(self) -> float:
        return self.beta + self.twist_log + self.tau_linear + self.tau_log + self.constants


@dataclass(frozen=True)
class LengthBoundBreakdown:
    cuffs: dict
    c_beta: float
    c_tau: float
    checklist: dict     # cuff -> seven term values divided by sqrt k
    cuff_curve: float = 0.0

    @property
    def total(self) -> float:
        return self.cuff_curve + sum(b.total for b in self.cuffs.values())

    def to_json(self) -> dict:
        return {"total": self.total, "c_beta": self.c_beta, "c_tau": self.c_tau,
                "cuff_curve": self.cuff_curve,
                "cuffs": {c: {**vars(b), "total": b.total} for c, b in sorted(self.cuffs.items())},
                "checklist": self.checklist}


def checklist_terms(eps: float, n: int, ts, k: int) -> dict:
    """The seven terms that the choice of eps keeps O(sqrt k), each divided by sqrt k."""
    root = math.sqrt(k)
    ts = sorted(ts, reverse=True)
    m = len(ts)
    pos = [t for t in ts if t > 0]
    return {
        "1_eps_k_over_n": (eps * k / n) / root if n else 0.0,
        "2_eps_sqrt_k": eps * root / root,
        "3_n_log": (n * math.log(2 * root / n)) / root if n else 0.0,
        "4_n": n / root,
        "5_eps_sum_t": (eps / 2 * sum(ts)) / root,
        "6_sum_log_t": sum(math.log(t) for t in pos) / root,
        "7_m": m / root,
    }


def length_bound(d: ArcDecomposition, choice: CuffChoice) -> LengthBoundBreakdown:
    c = seam_constant(1.0)
    if d.cuff_curve is not None:
        ln = abs(d.cuff_power) * choice.length(d.cuff_curve)
        return LengthBoundBreakdown({}, c, c, {}, ln)
    out, check = {}, {}
    for cid in d.cuffs:
        eps = choice.length(cid)
        bs, ts = d.beta(cid), d.tau(cid)
        n, m = len(bs), len(ts)
        out[cid] = CuffBound(
            eps, n, m,
            beta=eps / 2 * sum(abs(b) for b in bs),
            twist_log=2 * n * math.log(2 / eps),
            tau_linear=sum(max(1.0, eps * t / 2) for t in ts),
            tau_log=2 * sum(math.log(t) for t in ts if t > 0),
            constants=c * n + c * m,
        )
        check[cid] = checklist_terms(eps, n, ts, choice.k)
    return LengthBoundBreakdown(out, c, c, check)


# -- full pipeline --------------------------------------------------------------

@dataclass(frozen=True)
class VerificationReport:
    k: int
    exact_length: float
    analytic_bound: float
    representative_length: float
    systole: float
    systole_word: tuple
    twist_powers: dict
    metric: FenchelNielsenMetric
    original_metric: FenchelNielsenMetric
    choice: CuffChoice | None
    breakdown: LengthBoundBreakdown | None
    k_source: str = "oracle"
    trivial: bool = False
    notes: tuple = field(default=())

    @property
    def ratio(self) -> float:
        return self.exact_length / math.sqrt(self.k) if self.k else math.nan

    @property
    def systole_scaled(self) -> float:
        return self.systole * 2 * math.sqrt(self.k) if self.k else math.inf

    @property
    def ok(self) -> bool:
        if self.trivial:
            return True
        return (self.exact_length <= self.analytic_bound
                and self.systole >= 1 / (2 * math.sqrt(self.k)) - SYSTOLE_TOL)

    def to_json(self) -> dict:
        return {
            "k": self.k, "k_source": self.k_source, "trivial": self.trivial,
            "exact_length": self.exact_length,
            "analytic_bound": None if self.trivial else self.analytic_bound,
            "representative_length": None if self.trivial else self.representative_length,
            "ratio": None if self.trivial else self.ratio,
            "systole": self.systole, "systole_word": list(self.systole_word),
            "systole_times_2_sqrt_k": None if self.trivial else self.systole_scaled,
            "twist_powers": dict(sorted(self.twist_powers.items())),
            "metric": self.metric.to_json(), "metric_for_curve": self.original_metric.to_json(),
            "choice": self.choice.to_json() if self.choice else None,
            "breakdown": self.breakdown.to_json() if self.breakdown else None,
            "ok": self.ok, "notes": list(self.notes),
        }


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except PipelineError:
        raise
    except (StructureError, GeometryError, ValueError, ArithmeticError) as exc:
        raise PipelineError(name, exc) from exc


def _oracle_k(g: PantsGraph, c: CurveCycle) -> int:
    from .intersection import self_intersection_combinatorial
    from .kernel import random_metric
    from .tracing import self_intersection_geodesic
    import numpy as np

    if g.pd.topology().closed:
        metric = random_metric(g.pd, np.random.default_rng(0))
        return self_intersection_geodesic(g, metric, c).k
    return self_intersection_combinatorial(g, c).k


def verify_theorem1(curve: CurveCycle, g: PantsGraph | None = None,
                    pd: PantsDecomposition | None = None, k: int | None = None,
                    cutoff: int = 4, boundary_length: float | None = None,
                    k_source: str = "supplied") -> VerificationReport:
    """Build the short metric for ``curve`` and check its length and systole.

    With ``boundary_length`` None, boundary cuffs get the uncrossed choice 1/sqrt k.
    A ``k`` computed elsewhere by an oracle can be passed with ``k_source="oracle"``.
    """
    if g is None:
        if pd is None:
            raise ValueError("need a pants graph or a decomposition")
        g = build_pants_graph(pd)
    _stage("validate", g.require_valid, curve)
    source = "oracle"
    notes = []
    if k is None:
        k = _stage("intersection", _oracle_k, g, curve)
    else:
        source = k_source
        if source != "oracle":
            warnings.warn("using a supplied self-intersection number; the bound is relative to it")
    d = _stage("decompose", decompose, g, curve)
    nd, norm = _stage("normalize", normalize_twists, d)
    twist = {c: float(p) for c, p in norm.powers.items()}

    if k == 0:
        metric = FenchelNielsenMetric.uniform(g.pd)
        h = _stage("systole", build_holonomy, g, metric)
        sy = systole(h, cutoff)
        ln = _stage("length", cycle_length, g, metric, curve)
        return VerificationReport(0, ln, math.inf, math.nan, sy.length, sy.word, {}, metric,
                                  metric, None, None, source, True,
                                  ("simple curve: degree 1, thick metric",))

    choice = _stage("choose", choose_cuff_lengths, nd, k)
    if boundary_length is not None:
        choice = CuffChoice({c: e for c, e in choice.eps.items()
                             if c in {cf.id for cf in g.pd.cuffs if cf.glued}},
                            choice.branch, k)
    metric = _stage("build", build_convenient_metric, g.pd, choice,
                    boundary_length if boundary_length is not None else 1.0)
    rep = _stage("construct", construct_representative, nd, metric)
    bound = _stage("bound", length_bound, nd, choice)
    ln = _stage("length", cycle_length, g, metric, nd.to_cycle())
    h = _stage("systole", build_holonomy, g, metric)
    sy = systole(h, cutoff)
    original = metric.replace(twists={c: float(p) for c, p in norm.powers.items()
                                      if c in metric.twists})
    if ln > rep.length + 1e-9:
        notes.append("geodesic longer than its representative")
    report = VerificationReport(k, ln, bound.total, rep.length, sy.length, sy.word, twist,
                                metric, original, choice, bound, source, False, tuple(notes))
    return report
