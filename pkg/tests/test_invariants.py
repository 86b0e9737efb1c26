import pytest

from hypcurves.arcs import decompose, normalize_twists
from hypcurves.corpus import generate_corpus, thick_metrics
from hypcurves.holonomy import cycle_length
from hypcurves.intersection import (UnsupportedMethod, power_formula,
                                    self_intersection_combinatorial)
from hypcurves.kernel import FenchelNielsenMetric, GeometryError
from hypcurves.spine import build_spine
from hypcurves.tracing import self_intersection_geodesic

from conftest import word_cycle


def test_cuff_is_simple(torus, genus2):
    m = FenchelNielsenMetric.uniform(torus.pd)
    c = torus.cuff_cycle("c0")
    assert self_intersection_combinatorial(torus, c).k == 0
    assert self_intersection_geodesic(torus, m, c).k == 0
    assert self_intersection_geodesic(genus2, thick_metrics(genus2, 0, 1)[0],
                                      genus2.cuff_cycle("c1")).k == 0


def test_figure_eight_in_pants(pants):
    sp = build_spine(pants)
    a, b = sp.cuff_word("c0"), sp.cuff_word("c1")
    eight = sp.word_cycle(a + tuple(-x for x in reversed(b)))
    assert self_intersection_combinatorial(pants, eight).k == 1
    m = FenchelNielsenMetric({"c0": 1.0, "c1": 1.0, "c2": 1.0})
    assert self_intersection_geodesic(pants, m, eight).k == 1
    # the other product is the third cuff, which is simple
    assert self_intersection_combinatorial(pants, sp.word_cycle(a + b)).k == 0


def test_square_of_simple_curve(torus):
    c = word_cycle(torus, (1, 1))
    assert self_intersection_combinatorial(torus, c).k == 1
    m = FenchelNielsenMetric({"c0": 1.0, "c1": 1.0}, {"c0": 0.2})
    assert self_intersection_geodesic(torus, m, c).k == 1


@pytest.mark.parametrize("k,p,out", [(0, 1, 0), (0, 2, 1), (0, 3, 2), (1, 2, 5), (2, 3, 20)])
def test_power_formula(k, p, out):
    assert power_formula(k, p) == out


def test_power_formula_against_methods(torus):
    m = thick_metrics(torus, 3, 1)[0]
    for w in [(1, 2, -1, -2, -2), (1, 1, 2)]:
        u = word_cycle(torus, w)
        ku = self_intersection_combinatorial(torus, u).k
        for p in (2, 3):
            c = word_cycle(torus, w * p)
            assert self_intersection_combinatorial(torus, c).k == power_formula(ku, p)
            assert self_intersection_geodesic(torus, m, c).k == power_formula(ku, p)


def test_closed_surface_needs_geodesic_method(genus2):
    with pytest.raises(UnsupportedMethod):
        self_intersection_combinatorial(genus2, genus2.cuff_cycle("c0"))


def test_methods_agree_and_metrics_agree(small_corpora):
    for name in ("torus", "sphere4"):
        g, corpus = small_corpora[name]
        metrics = thick_metrics(g, 7, 3)
        for item in corpus:
            comb = self_intersection_combinatorial(g, item.cycle).k
            geo = {self_intersection_geodesic(g, m, item.cycle).k for m in metrics}
            assert geo == {comb}


def test_genus_two_metric_independence(small_corpora):
    g, corpus = small_corpora["genus2"]
    metrics = thick_metrics(g, 9, 3)
    for item in corpus:
        assert {self_intersection_geodesic(g, m, item.cycle).k for m in metrics} == {item.k}


def test_invariant_under_cyclic_shift_and_inverse(small_corpora):
    g, corpus = small_corpora["sphere4"]
    for item in corpus:
        for c in (item.cycle.rotate(3), item.cycle.inverse()):
            assert self_intersection_combinatorial(g, c).k == item.k


def test_twist_normalization_invariance(small_corpora):
    for name in ("torus", "genus2"):
        g, corpus = small_corpora[name]
        m = thick_metrics(g, 4, 1)[0]
        for item in corpus[:8]:
            nd, _ = normalize_twists(decompose(g, item.cycle))
            assert self_intersection_geodesic(g, m, nd.to_cycle()).k == item.k


def test_peripheral_curve_is_not_hyperbolic_at_a_cusp(punctured_torus):
    from hypcurves.cusps import cusped_metric, cusp_source
    src = cusp_source(punctured_torus, FenchelNielsenMetric.uniform(punctured_torus.pd))
    with pytest.raises(GeometryError):
        cycle_length(punctured_torus, cusped_metric(src), punctured_torus.cuff_cycle("c1"))


def test_length_grows_with_k(sphere4):
    corpus = generate_corpus(sphere4, 21, 60, 0, 12, max_steps=24)
    m = FenchelNielsenMetric.uniform(sphere4.pd)
    best = {}
    for item in corpus:
        ell = cycle_length(sphere4, m, item.cycle)
        best[item.k] = min(best.get(item.k, ell), ell)
    ks = sorted(best)
    # empirical c_rho: min length / sqrt(k) over the bins
    assert min(best[k] / k ** 0.5 for k in ks if k) > 0
    mins = [best[k] for k in ks]
    assert all(b >= a - 1e-9 for a, b in zip(mins, mins[1:]))
