import math

import numpy as np
import pytest

from hypcurves.corpus import generate_corpus
from hypcurves.cusps import (CUSP_LENGTH, collar_tensor, compare_lengths, cusp_source, cusp_sweep,
                             cusp_tensor, cusped_metric, half_collar_width, horocycle_distance,
                             hyperbolic_in_cusped, metric_tensor_comparison, non_increasing,
                             open_cusps, opened_collar_exceeds, tensor_grid_check)
from hypcurves.holonomy import cycle_length
from hypcurves.kernel import FenchelNielsenMetric, GeometryError
from hypcurves.surface import StructureError

LS = [4, 6, 8, 10]


@pytest.fixture(scope="module")
def source(punctured_torus):
    return cusp_source(punctured_torus, FenchelNielsenMetric.uniform(punctured_torus.pd))


def test_horocycle_distance():
    assert horocycle_distance(1) == 0
    assert horocycle_distance(math.e) == pytest.approx(1)
    for L in (1, 4, 10):
        assert horocycle_distance(2 * math.exp(L / 2)) == pytest.approx(math.log(2) + L / 2)
    with pytest.raises(GeometryError):
        horocycle_distance(0)


def test_half_collar_width():
    assert half_collar_width(math.exp(-2)) == pytest.approx(3.39, abs=5e-3)
    s = 2 * math.asinh(1)
    assert half_collar_width(s) == pytest.approx(math.asinh(1), rel=1e-14)
    assert half_collar_width(60) < 1e-12
    for L in (1, 2, 4, 8, 16):
        assert half_collar_width(math.exp(-L / 2)) > L / 2
        assert opened_collar_exceeds(L)
    with pytest.raises(GeometryError):
        half_collar_width(0)


def test_half_collar_identity():
    # l cosh(w) = l coth(l/2) for the half collar
    for l in np.linspace(0.05, 5, 40):
        w = half_collar_width(l)
        assert l * math.cosh(w) == pytest.approx(l / math.tanh(l / 2), rel=1e-12)


def test_metric_tensor_comparison():
    a, b = metric_tensor_comparison(1.0)
    assert a == pytest.approx(2.381, abs=1e-3)
    assert b == pytest.approx(7.389, abs=1e-3)
    for r in np.linspace(0.1, 10, 100):
        a, b = metric_tensor_comparison(float(r))
        assert a < b
    a, b = metric_tensor_comparison(1e-8)
    assert a == pytest.approx(1) and b == pytest.approx(1)
    with pytest.raises(GeometryError):
        metric_tensor_comparison(0)


def test_tensor_grid():
    for L in (1, 2, 4, 8, 16):
        assert tensor_grid_check(L)
    l = math.exp(-2)
    assert collar_tensor(l, 0.0) == pytest.approx(l ** 2)
    assert cusp_tensor(l, 0.0) == pytest.approx(l ** 2)


def test_open_cusps(source):
    op = open_cusps(source, 4)
    assert op.cusps == ("c1",)
    assert op.metric.lengths["c1"] == pytest.approx(0.1353, abs=1e-4)
    assert open_cusps(source, 0).metric.lengths["c1"] == 1.0
    assert op.metric.lengths["c0"] == source["lengths"]["c0"]
    tw = {"lengths": {"c0": 1.3, "c1": 0.0}, "twists": {"c0": 0.1 + 0.2, "c1": 0.0}}
    assert open_cusps(tw, 6).metric.twists["c0"] == tw["twists"]["c0"]
    with pytest.raises(StructureError):
        open_cusps({"lengths": {"c0": 1.0}}, 4)
    with pytest.raises(ValueError):
        open_cusps(source, -1)


def test_cusped_metric_uses_tiny_length(source):
    assert cusped_metric(source).lengths["c1"] == CUSP_LENGTH


def test_cuff_parallel_curve_unchanged(punctured_torus, source):
    c = punctured_torus.cuff_cycle("c0")
    for r in cusp_sweep(punctured_torus, c, source, [8, 10, 12]):
        assert abs(r.l_opened - r.l_cusped) < 1e-4


def test_peripheral_curve_filtered(punctured_torus, source):
    peripheral = punctured_torus.cuff_cycle("c1")
    with pytest.raises(GeometryError):
        cycle_length(punctured_torus, cusped_metric(source), peripheral)
    assert hyperbolic_in_cusped(punctured_torus, [peripheral], source) == []


def test_precondition(punctured_torus, source):
    corpus = hyperbolic_in_cusped(
        punctured_torus, generate_corpus(punctured_torus, 5, 10, 1, 12, max_steps=16), source)
    long = max(corpus, key=lambda it: cycle_length(punctured_torus, cusped_metric(source), it.cycle))
    with pytest.raises(ValueError):
        compare_lengths(punctured_torus, long.cycle, source, 0.01)


def test_excess_non_increasing(punctured_torus, source):
    corpus = hyperbolic_in_cusped(
        punctured_torus, generate_corpus(punctured_torus, 5, 30, 1, 12, max_steps=16), source)
    swept = 0
    for it in corpus:
        rows = cusp_sweep(punctured_torus, it.cycle, source, LS)
        assert non_increasing([r.excess for r in rows])
        assert all(r.l_cusped <= r.L for r in rows)
        swept += len(rows) > 1
    assert swept > 0


def test_non_increasing():
    assert non_increasing([3, 2, 2, 1])
    assert not non_increasing([1, 2])
