import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcurves.arcs import ArcDecomposition, decompose, normalize_twists
from hypcurves.inequalities import (ConstantsLedger, TwistPolygon, beta_spread,
                                    check_abs_twist_bound, check_abs_twist_bound_cuff,
                                    check_sapir_inequalities, lagrange_optimum, polygon_area,
                                    random_feasible, sums_to_products_check, weighted_tau)


def test_sapir_example():
    d = ArcDecomposition.from_twists({"a": {"beta": [-1, 0, 2], "tau": [5, 4, 1]}, "z": {}})
    r = check_sapir_inequalities(d, 10)
    assert r["a"].beta_spread * 10 == 6
    assert r["a"].tau_weighted * 10 == 13
    assert r["a"].arcs == pytest.approx(6 / math.sqrt(10))
    assert r["a"].n_tau == pytest.approx(3 * 10 / 10)
    z = r["z"]
    assert (z.arcs, z.beta_sum, z.tau_weighted, z.beta_spread, z.n_tau) == (0, 0, 0, 0, 0)
    assert z.beta_sum_positive is None
    with pytest.raises(ValueError):
        check_sapir_inequalities(d, 0)


def test_weighted_tau_brute_force():
    t = [9, 7, 4, 3, 1]
    assert weighted_tau(t) == sum(i * x for i, x in enumerate(t, 1) if x >= 4)


def test_normalized_sum_bullet(small_corpora):
    for g, corpus in small_corpora.values():
        for item in corpus:
            nd, _ = normalize_twists(decompose(g, item.cycle))
            r = check_sapir_inequalities(nd, item.k)
            for c in nd.cuffs:
                n = nd.n(c)
                if n:
                    assert 0 < sum(nd.beta(c)) <= 2 * n
                    assert r[c].beta_sum_positive


@pytest.mark.parametrize("b,area", [((0, 0, 0), 0), ((-1, 0, 2), 6), ((1, 2), 1),
                                    ((-3, 1, 4), 14)])
def test_polygon_examples(b, area):
    assert polygon_area(b) == area


def test_polygon_rejects_unsorted():
    with pytest.raises(ValueError):
        polygon_area((2, 1))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=20))
def test_polygon_identity_and_convexity(b):
    b = sorted(b)
    area = polygon_area(b)
    brute = sum(b[i] - b[j] for i in range(len(b)) for j in range(len(b)) if i > j)
    assert area == brute == beta_spread(b)
    poly = TwistPolygon(tuple(b))
    assert poly.is_convex()
    if len(b) >= 2:
        assert Fraction(poly.doubled_shoelace(), 2) == area


def test_twist_bound_examples():
    r = check_abs_twist_bound([1, 2, 3], 4, 1.0)
    assert r.negative_mass == 0 and r.intermediate
    r = check_abs_twist_bound([-3, 1, 4], 9, 3.0)
    assert r.area == 14 and r.negative_mass == 3 and r.intermediate
    with pytest.raises(ValueError):
        check_abs_twist_bound([], 4, 1.0)


def test_twist_bound_on_corpus(small_corpora):
    ledger = ConstantsLedger()
    rows = []
    for name, (g, corpus) in small_corpora.items():
        for item in corpus:
            nd, _ = normalize_twists(decompose(g, item.cycle))
            for c in nd.cuffs:
                n = nd.n(c)
                if n:
                    total = sum(abs(x) for x in nd.beta(c))
                    need = total / (2 * item.k / n + math.sqrt(item.k))
                    ledger.record("C", name, max(need, 1e-9), item.id, "test")
                    rows.append((name, nd, c, item.k))
    for name, nd, c, k in rows:
        r = check_abs_twist_bound_cuff(nd, c, k, ledger.get("C", name))
        assert r.holds and r.intermediate


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-50, 50), min_size=1, max_size=20))
def test_intermediate_bound(b):
    if sum(b) <= 0:
        return
    r = check_abs_twist_bound(b, 100, 1.0)
    assert r.intermediate


def test_sums_to_products_examples():
    assert sums_to_products_check([1, 1, 1], 6)
    assert sums_to_products_check([math.e], math.e)
    with pytest.raises(ValueError):
        sums_to_products_check([5, 5], 10)
    with pytest.raises(ValueError):
        sums_to_products_check([-1], 10)


def test_sums_to_products_random(rng):
    for _ in range(1000):
        n = int(rng.integers(1, 15))
        K = float(rng.uniform(0.1, 500))
        x = random_feasible(rng, n, K)
        assert sum(j * v for j, v in enumerate(x, 1)) == pytest.approx(K)
        assert sums_to_products_check(x, K)


def test_lagrange_examples():
    opt = lagrange_optimum(4, 2)
    assert opt.value == pytest.approx(math.log(2), abs=1e-12)
    assert opt.bound == pytest.approx(2 * math.sqrt(4 / math.e))
    assert lagrange_optimum(7.5, 1).value == pytest.approx(math.log(7.5))
    assert opt.maximizer == (2.0, 1.0)


def test_lagrange_dominates_samples(rng):
    for K in (1.0, 10.0, 100.0):
        for n in (1, 2, 5, 9):
            opt = lagrange_optimum(K, n)
            assert opt.value == pytest.approx(
                math.log(K ** n / (n ** n * math.factorial(n))), abs=1e-9)
            for _ in range(100):
                x = random_feasible(rng, n, K)
                assert sum(math.log(v) for v in x) <= opt.value + 1e-9


def test_lagrange_best_n():
    for K in (10.0, 100.0):
        n0 = max(1, round(math.sqrt(K / math.e)))
        v = lagrange_optimum(K, n0).value
        for n in (n0 - 1, n0 + 1):
            if n >= 1:
                assert v >= lagrange_optimum(K, n).value


def test_constants_ledger():
    led = ConstantsLedger()
    led.record("C3", "torus", 2.0, "c001", "run1")
    led.record("C3", "torus", 1.0, "c002", "run1")
    led.record("C3", "torus", 3.0, "c003", "run2")
    assert led.get("C3", "torus") == 3.0
    data = json.loads(led.to_json())
    assert data["C3/torus"]["witness"] == "c003"
    with pytest.raises(ValueError):
        led.record("C4", "torus", 0.0, "x", "r")
