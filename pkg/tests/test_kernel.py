import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcurves.arcs import twist_cycle
from hypcurves.frames import FLOAT, SL2
from hypcurves.holonomy import (Holonomy, build_holonomy, cycle_length, geodesic_length,
                                systole)
from hypcurves.kernel import (FenchelNielsenMetric, GeometryError, collar_width,
                              equidistant_length, hexagon_seam_length, radial_arc_length,
                              random_metric, seam_constant, seam_point_offset, seam_split,
                              seam_to_equidistant_bound)
from hypcurves.spine import build_spine
from hypcurves.surface import SurfaceTopology, build_pants_graph, standard_decomposition

from conftest import word_cycle


def _seam_mp(l1, l2, l3):
    mpmath.mp.dps = 40
    h = [mpmath.mpf(x) / 2 for x in (l1, l2, l3)]
    return mpmath.acosh((mpmath.cosh(h[2]) + mpmath.cosh(h[0]) * mpmath.cosh(h[1]))
                        / (mpmath.sinh(h[0]) * mpmath.sinh(h[1])))


def test_hexagon_seam_symmetric():
    want = math.acosh((math.cosh(1) + math.cosh(1) ** 2) / math.sinh(1) ** 2)
    assert hexagon_seam_length(2, 2, 2) == pytest.approx(want, abs=1e-12)
    assert hexagon_seam_length(2, 2, 2) == pytest.approx(float(_seam_mp(2, 2, 2)), abs=1e-12)


def test_hexagon_seam_limits():
    l = 1.3
    lim = math.acosh((1 + math.cosh(l / 2) ** 2) / math.sinh(l / 2) ** 2)
    assert hexagon_seam_length(l, l, 1e-9) == pytest.approx(lim, abs=1e-9)
    assert hexagon_seam_length(1e-8, 1, 1) > 15
    with pytest.raises(GeometryError):
        hexagon_seam_length(0, 1, 1)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 5), st.floats(0.05, 5), st.floats(0.05, 5))
def test_seam_against_mp(l1, l2, l3):
    assert hexagon_seam_length(l1, l2, l3) == pytest.approx(float(_seam_mp(l1, l2, l3)),
                                                            rel=1e-9, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 4), st.floats(0.05, 4), st.floats(0.05, 4))
def test_seam_point_splits_the_seam(la, lb, lc):
    xa, xb = seam_split(la, lb, lc)
    assert xa > 0 and xb > 0
    assert xa + xb == pytest.approx(hexagon_seam_length(la, lb, lc), rel=1e-9)


def test_seam_point_symmetric_case():
    s = hexagon_seam_length(1.1, 1.1, 0.7)
    assert seam_point_offset(1.1, 1.1, 0.7) == pytest.approx(s / 2, rel=1e-12)


@pytest.mark.parametrize("l,L,out", [(1, 0, 1), (0.5, math.acosh(2), 1.0),
                                     (2, 1, 2 * math.cosh(1))])
def test_equidistant_length(l, L, out):
    assert equidistant_length(l, L) == pytest.approx(out, abs=1e-12)


def test_collar_width_examples():
    assert collar_width(1) == pytest.approx(math.log(1 / math.tanh(0.5)), abs=1e-12)
    assert collar_width(1) > 0.5
    assert collar_width(2 * math.atanh(1 / math.e)) == pytest.approx(1, abs=1e-12)
    assert 0 < collar_width(40) < 1e-15


@settings(max_examples=100, deadline=None)
@given(st.floats(1e-3, 20))
def test_equidistant_collar_identity(l):
    # cosh(log coth(l/2)) = coth(l)
    assert equidistant_length(l, collar_width(l)) == pytest.approx(l / math.tanh(l), rel=1e-9)


def test_radial_arc_examples():
    eps = 0.3
    assert radial_arc_length(eps, eps) == pytest.approx(math.acosh(1 / eps))
    assert radial_arc_length(1, 1) == 0
    assert radial_arc_length(0.1, 0.2) == pytest.approx(math.acosh(10) - math.acosh(2))
    assert radial_arc_length(0.1, 0.2) == pytest.approx(1.6763, abs=1e-4)
    assert radial_arc_length(0.5, 0.5) == pytest.approx(1.3170, abs=1e-4)
    with pytest.raises(GeometryError):
        radial_arc_length(0.5, 0.4)
    with pytest.raises(GeometryError):
        radial_arc_length(0.5, 1.5)


def test_radial_arc_grid():
    for j in range(1, 21):
        eps = 2.0 ** -j
        for T in np.linspace(eps, 1, 100):
            assert radial_arc_length(eps, T) <= math.log(2 / T) + 1e-12


def test_seam_bound_dominates_samples(rng):
    for C in (0.5, 1.0, 2.0):
        D = seam_to_equidistant_bound(C)
        sym = abs(seam_point_offset(C, C, C) - math.acosh(1.0))
        assert D >= sym
        for _ in range(300):
            la, lb, lc = np.exp(rng.uniform(math.log(C * 1e-6), math.log(C), 3))
            for a, b in ((la, lb), (lb, la)):
                gap = abs(seam_point_offset(a, b, lc) - math.acosh(C / a))
                assert gap <= D + 1e-9


def test_seam_bound_golden():
    assert seam_to_equidistant_bound(1.0) == pytest.approx(1.47068, abs=1e-4)
    assert seam_constant(1.0) == pytest.approx(2 * seam_to_equidistant_bound(1.0) + 1)
    # the supremum shrinks as C grows: both the short-cuff blowup and the
    # distance to the equidistant curve get smaller
    vals = [seam_to_equidistant_bound(C) for C in (0.5, 1.0, 2.0)]
    assert vals[0] > vals[1] > vals[2] > 0


def _float_mats(h):
    return [np.array([[float(m[0]), float(m[1])], [float(m[2]), float(m[3])]])
            for m in h.matrices]


def _word(mats, w):
    out = np.eye(2)
    for x in w:
        m = mats[abs(x) - 1]
        out = out @ (m if x > 0 else np.linalg.inv(m))
    return out


def _axis_distance(A, B):
    tA, tB, tAB = np.trace(A), np.trace(B), np.trace(A @ B)
    return math.acosh(abs(2 * tAB - tA * tB) / math.sqrt((tA ** 2 - 4) * (tB ** 2 - 4)))


def test_seam_matches_axis_distance_on_random_pants(rng):
    pd = standard_decomposition(SurfaceTopology(0, 3, 0))
    g = build_pants_graph(pd)
    sp = build_spine(g)
    conj = [w for n in range(0, 4) for w in itertools.product([1, -1, 2, -2], repeat=n)]
    for _ in range(50):
        ls = rng.uniform(0.2, 3.0, 3)
        m = FenchelNielsenMetric({"c0": ls[0], "c1": ls[1], "c2": ls[2]})
        mats = _float_mats(build_holonomy(g, m, spine=sp))
        A = _word(mats, sp.cuff_word("c0"))
        B = _word(mats, sp.cuff_word("c1"))
        best = min(_axis_distance(A, _word(mats, c) @ B @ np.linalg.inv(_word(mats, c)))
                   for c in conj)
        assert best == pytest.approx(hexagon_seam_length(ls[0], ls[1], ls[2]), abs=1e-6)


def test_reference_punctured_torus_representation():
    A = (1.0, 1.0, 1.0, 2.0)
    B = (1.0, -1.0, -1.0, 2.0)
    h = Holonomy(None, None, SL2(FLOAT), (A, B))
    assert h.trace((1, 2, -1, -2)) == pytest.approx(-2, abs=1e-12)
    assert geodesic_length(h, (1,)) == pytest.approx(2 * math.acosh(1.5), abs=1e-12)
    assert geodesic_length(h, (1,)) == pytest.approx(1.9248, abs=1e-4)
    with pytest.raises(GeometryError):
        geodesic_length(h, (1, 2, -1, -2))


def test_cuff_traces_and_lengths(genus2, rng):
    m = random_metric(genus2.pd, rng)
    h = build_holonomy(genus2, m)
    for cf in genus2.pd.cuffs:
        w = h.spine.cuff_word(cf.id)
        assert float(abs(h.trace(w))) == pytest.approx(2 * math.cosh(m.lengths[cf.id] / 2),
                                                       rel=1e-9)
        assert geodesic_length(h, w) == pytest.approx(m.lengths[cf.id], rel=1e-9)


def test_cuff_length_point_eight(torus):
    m = FenchelNielsenMetric({"c0": 0.8, "c1": 1.2}, {"c0": 0.3})
    h = build_holonomy(torus, m)
    assert geodesic_length(h, h.spine.cuff_word("c0")) == pytest.approx(0.8, abs=1e-9)


def test_length_invariances(genus2, rng):
    h = build_holonomy(genus2, random_metric(genus2.pd, rng))
    for _ in range(20):
        n = int(rng.integers(2, 7))
        w = tuple(int(x) * int(s) for x, s in zip(rng.integers(1, 5, n), rng.choice([-1, 1], n)))
        try:
            ell = geodesic_length(h, w)
        except GeometryError:
            continue
        shifted = w[1:] + w[:1]
        inverse = tuple(-x for x in reversed(w))
        assert geodesic_length(h, shifted) == pytest.approx(ell, abs=1e-12)
        assert geodesic_length(h, inverse) == pytest.approx(ell, abs=1e-12)
        for p in (2, 3):
            assert geodesic_length(h, w * p) == pytest.approx(p * ell, abs=1e-9)


def test_cycle_length_agrees_with_holonomy(small_corpora):
    g, corpus = small_corpora["torus"]
    m = FenchelNielsenMetric({"c0": 0.9, "c1": 1.4}, {"c0": 0.2})
    h = build_holonomy(g, m)
    for item in corpus:
        assert cycle_length(g, m, item.cycle) == pytest.approx(
            geodesic_length(h, h.spine.cycle_word(item.cycle)), rel=1e-9)


def test_full_twist_is_a_mapping_class(torus, small_corpora):
    _, corpus = small_corpora["torus"]
    m0 = FenchelNielsenMetric({"c0": 1.1, "c1": 0.9}, {"c0": 0.15})
    m1 = m0.replace(twists={"c0": 1.15})
    for item in corpus[:6]:
        lengths = sorted(cycle_length(torus, m0, twist_cycle(torus, item.cycle, "c0", p))
                         for p in (-1, 1))
        got = cycle_length(torus, m1, item.cycle)
        assert min(abs(got - x) for x in lengths) < 1e-9
    for cid in ("c0", "c1"):
        assert cycle_length(torus, m1, torus.cuff_cycle(cid)) == pytest.approx(m0.lengths[cid])


def test_systole_short_cuff(genus2):
    m = FenchelNielsenMetric({"c0": 0.05, "c1": 1.0, "c2": 1.0})
    s = systole(build_holonomy(genus2, m), 4)
    assert s.length == pytest.approx(0.05, abs=1e-9)


def test_systole_cutoff_two_torus(torus):
    m = FenchelNielsenMetric({"c0": 1.3, "c1": 1.0}, {"c0": 0.1})
    h = build_holonomy(torus, m)
    s = systole(h, 2)
    cands = [(1,), (2,), (1, 2), (1, -2)] + [h.spine.cuff_word(c) for c in ("c0", "c1")]
    assert s.length == pytest.approx(min(geodesic_length(h, w) for w in cands), abs=1e-12)


def test_systole_under_doubling(genus2, rng):
    for _ in range(5):
        m = random_metric(genus2.pd, rng)
        big = FenchelNielsenMetric({c: 2 * v for c, v in m.lengths.items()}, m.twists)
        a = systole(build_holonomy(genus2, m), 3).length
        b = systole(build_holonomy(genus2, big), 3).length
        assert b >= a - 1e-9


def test_metric_json_and_convenience(torus):
    m = FenchelNielsenMetric({"c0": 0.5, "c1": 1.0}, {"c0": 1.5})
    assert FenchelNielsenMetric.from_json(m.to_json()) == m
    assert m.convenient
    assert not m.replace(twists={"c0": 0.3}).convenient
    with pytest.raises(GeometryError):
        FenchelNielsenMetric({"c0": 0.0})
