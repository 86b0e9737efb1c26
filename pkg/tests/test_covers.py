import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypcurves.corpus import CorpusCurve
from hypcurves.covers import (CeilingExceeded, Cover, enumerate_covers, is_simple_lift,
                              lift_closes, minimal_degree, sweep_f_sigma, verify_minimality)
from hypcurves.spine import build_spine
from hypcurves.surface import StructureError

from conftest import word_cycle

G2_RELATOR = None


def _brute_force_count(rank, d):
    perms = list(itertools.permutations(range(d)))
    seen, orbits = set(), 0
    for combo in itertools.product(perms, repeat=rank):
        try:
            c = Cover(d, combo)
        except StructureError:
            continue
        if combo in seen:
            continue
        orbits += 1
        for sigma in perms:
            seen.add(c.conjugate(sigma).perms)
    return orbits


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_cover_counts_match_brute_force(d):
    assert len(list(enumerate_covers(2, d))) == _brute_force_count(2, d)


def test_small_counts():
    assert len(list(enumerate_covers(2, 1))) == 1
    assert len(list(enumerate_covers(2, 2))) == 3
    assert len(list(enumerate_covers(3, 2))) == 7


def test_closed_surface_covers(genus2):
    sp = build_spine(genus2)
    covers = list(enumerate_covers(sp.rank, 2, sp.relator))
    # every nonzero homomorphism to Z/2
    assert len(covers) == 2 ** 4 - 1
    for c in covers:
        assert c.permutation(sp.relator) == tuple(range(2))


def test_enumeration_is_deterministic():
    a = [c.perms for c in enumerate_covers(2, 4)]
    b = [c.perms for c in enumerate_covers(2, 4)]
    assert a == b


def test_cover_validation():
    with pytest.raises(StructureError):
        Cover(2, ((0, 1), (0, 1)))
    with pytest.raises(StructureError):
        Cover(2, ((0, 0), (1, 0)))
    with pytest.raises(StructureError):
        Cover(2, ((1, 0), (0, 1)), relator=(1,))


def test_lift_closes_examples():
    triv = Cover(1, ((0,), (0,)))
    assert lift_closes(triv, (1, -2, 2, 1))
    c = Cover(2, ((1, 0), (0, 1)))
    assert not lift_closes(c, (1,))
    assert lift_closes(c, (1, 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=12), st.integers(0, 20))
def test_lift_closes_against_matrices(w, idx):
    covers = list(enumerate_covers(2, 3))
    c = covers[idx % len(covers)]
    mats = []
    for p in c.perms:
        m = np.zeros((3, 3), dtype=int)
        for s, t in enumerate(p):
            m[t, s] = 1
        mats.append(m)
    v = np.array([1, 0, 0])
    for x in w:
        m = mats[abs(x) - 1]
        v = (m if x > 0 else m.T) @ v
    assert lift_closes(c, w) == (v[0] == 1)


def test_simple_curves_have_simple_preimages(torus, genus2):
    for g, words in ((torus, [(1,), (2,), (1, 2), (1, -2)]),
                     (genus2, None)):
        sp = build_spine(g)
        if words is None:
            words = [sp.cuff_word(cf.id) for cf in g.pd.cuffs]
        for w in words:
            for d in (1, 2, 3):
                for cover in enumerate_covers(sp.rank, d, sp.relator):
                    for s in range(d):
                        if lift_closes(cover, w, s):
                            assert is_simple_lift(cover, g, w, s, sp).simple


def test_square_unwraps_in_degree_two(torus):
    sp = build_spine(torus)
    unwrap = Cover(2, ((1, 0), (0, 1)))
    assert is_simple_lift(unwrap, torus, (1, 1), 0, sp).simple
    triv = Cover(1, ((0,), (0,)))
    assert not is_simple_lift(triv, torus, (1, 1), 0, sp).simple


def test_minimal_degree_examples(torus):
    simple = minimal_degree(torus, torus.cuff_cycle("c0"), 4)
    assert simple.deg == 1
    sq = minimal_degree(torus, word_cycle(torus, (1, 1)), 4)
    assert sq.deg == 2 and not sq.upper_bound_only
    assert verify_minimality(torus, word_cycle(torus, (1, 1)), sq)
    with pytest.raises(CeilingExceeded):
        minimal_degree(torus, word_cycle(torus, (1, 1)), 1)


def test_degree_is_a_class_invariant(small_corpora):
    g, corpus = small_corpora["sphere4"]
    for item in corpus[:5]:
        base = minimal_degree(g, item.cycle, 6).deg
        assert minimal_degree(g, item.cycle.rotate(2), 6).deg == base
        assert minimal_degree(g, item.cycle.inverse(), 6).deg == base


def test_minimality_certificates(small_corpora):
    for name in ("torus", "genus2"):
        g, corpus = small_corpora[name]
        for item in [x for x in corpus if x.k <= 2][:3]:
            res = minimal_degree(g, item.cycle, 6)
            assert res.deg >= 2
            assert verify_minimality(g, item.cycle, res)


def test_conjugate_covers_agree(torus):
    sp = build_spine(torus)
    rng = np.random.default_rng(3)
    covers = list(enumerate_covers(2, 3))
    for w in [(1, 1, 2), (1, -2, -2), (1, 2, 1, 2)]:
        for cover in covers:
            sigma = tuple(int(x) for x in rng.permutation(3))
            other = cover.conjugate(sigma)
            for s in range(3):
                a = is_simple_lift(cover, torus, w, s, sp)
                b = is_simple_lift(other, torus, w, sigma[s], sp)
                assert (a.closes, a.simple) == (b.closes, b.simple)


def test_sweep(torus):
    corpus = [CorpusCurve("a", torus.cuff_cycle("c0"), 0),
              CorpusCurve("b", word_cycle(torus, (1, 2)), 0),
              CorpusCurve("sq", word_cycle(torus, (1, 1)), 1)]
    rows, slope = sweep_f_sigma(torus, corpus, 2, 4)
    assert rows[0].max_deg == 1 and rows[0].size == 2
    assert rows[1].max_deg >= 2 and rows[1].lower_witnessed and rows[1].witness == "sq"
    assert rows[2].size == 0 and rows[2].max_deg is None
    assert slope == pytest.approx(2.0)
