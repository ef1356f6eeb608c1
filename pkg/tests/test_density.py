from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coherent_frames.density import (beurling_density, density_theorem_check,
                                     frame_measure,
                                     fundamental_identity_report)
from coherent_frames.errors import NotAFrame
from coherent_frames.frames import analyze, frame_bounds, make_system
from coherent_frames.groups import (box_window, canonical_windows,
                                    full_window, make_cyclic_product,
                                    make_window)
from coherent_frames.reps import (gabor_rep, heisenberg_schroedinger_rep,
                                  random_unit_vector)


def random_frame(seed):
    rng = np.random.default_rng(seed)
    rep = gabor_rep(int(rng.integers(2, 6))) if rng.random() < 0.6 else \
        heisenberg_schroedinger_rep(int(rng.integers(2, 4)))
    n = rep.group.order
    while True:
        g = random_unit_vector(rep.dim, rng)
        lam = rng.choice(n, size=int(rng.integers(rep.dim, n + 1)), replace=False)
        sys = make_system(rep, g, lam)
        if frame_bounds(sys)[2]:
            return sys, rng


frames = st.integers(0, 2 ** 31).map(random_frame)


# Beurling density

def test_density_full_group():
    G = make_cyclic_product([6, 6])
    rep = beurling_density(G, range(36))
    assert set(rep.inf) == set(rep.sup) == {1.0}


def test_density_lattice():
    G = make_cyclic_product([4, 4])
    lam = [G.encode((2 * a, 2 * b)) for a in range(2) for b in range(2)]
    box = make_window(G, [G.encode(p) for p in product(range(2), repeat=2)])
    rep = beurling_density(G, lam, [box, full_window(G)])
    assert rep.inf == rep.sup == (0.25, 0.25)
    assert rep.sizes == (4, 16)


def test_density_single_point():
    G = make_cyclic_product([16])
    rep = beurling_density(G, [0], [make_window(G, range(4))])
    assert (rep.D_minus, rep.D_plus) == (0.0, 0.25)


def test_density_enumeration_oracle():
    G = make_cyclic_product([4, 4])
    lam = {0, 1, 5, 10, 11}
    K = box_window(G, 1)
    ratios = [len({G.mul(x, k) for k in K} & lam) / len(K) for x in range(16)]
    rep = beurling_density(G, sorted(lam), [K])
    assert (rep.D_minus, rep.D_plus) == (min(ratios), max(ratios))


@given(st.integers(0, 2 ** 31))
def test_density_translation_invariant(seed):
    rng = np.random.default_rng(seed)
    G = [make_cyclic_product([5, 4]), heisenberg_schroedinger_rep(3).group][seed % 2]
    lam = np.flatnonzero(rng.random(G.order) < 0.4).tolist() or [0]
    x = int(rng.integers(G.order))
    moved = sorted(G.mul(x, l) for l in lam)
    a = beurling_density(G, lam)
    b = beurling_density(G, moved)
    assert a == b


@given(st.integers(0, 2 ** 31))
def test_density_monotone(seed):
    rng = np.random.default_rng(seed)
    G = make_cyclic_product([6, 6])
    lam = np.flatnonzero(rng.random(36) < 0.3).tolist() or [0]
    more = sorted(set(lam) | {int(rng.integers(36))})
    a = beurling_density(G, lam)
    b = beurling_density(G, more)
    assert all(x <= y for x, y in zip(a.inf, b.inf))
    assert all(x <= y for x, y in zip(a.sup, b.sup))


# frame measure

def test_measure_tight(tight2):
    m = frame_measure(analyze(tight2), tight2.group)
    assert np.allclose(m.inf, 0.5) and np.allclose(m.sup, 0.5)


def test_measure_onb(onb2):
    m = frame_measure(analyze(onb2), onb2.group)
    assert np.allclose((m.M_minus, m.M_plus), (1, 1))


@given(frames)
def test_measure_full_window(data):
    sys, _ = data
    an = analyze(sys)
    m = frame_measure(an, sys.group, [full_window(sys.group)])
    assert np.isclose(m.M_minus, sys.dim / len(sys.lam), rtol=1e-12)
    assert m.M_minus == m.M_plus
    assert 0 < min(m.inf) and max(m.sup) <= 1 + 1e-10


@given(frames)
def test_full_window_values_do_not_depend_on_sequence(data):
    sys, _ = data
    an = analyze(sys)
    G = sys.group
    seqs = [None, [full_window(G)], [make_window(G, [G.identity]), full_window(G)]]
    ds = {(beurling_density(G, sys.lam, w).D_minus, beurling_density(G, sys.lam, w).D_plus)
          for w in seqs}
    ms = {(frame_measure(an, G, w).M_minus, frame_measure(an, G, w).M_plus) for w in seqs}
    assert len(ds) == 1 and len(ms) == 1


@given(frames)
def test_measure_translation(data):
    sys, rng = data
    G = sys.group
    x = int(rng.integers(G.order))
    moved = make_system(sys.rep, sys.g, [G.mul(x, l) for l in sys.lam])
    a = frame_measure(analyze(sys), G)
    b = frame_measure(analyze(moved), G)
    assert np.allclose(a.inf, b.inf, atol=1e-10) and np.allclose(a.sup, b.sup, atol=1e-10)


# fundamental identity and density theorem

def test_identity_examples(tight2, onb2):
    r = fundamental_identity_report(tight2)
    assert r.measure.M_plus == pytest.approx(0.5)
    assert r.r1 <= 1e-12 and r.r2 <= 1e-12
    r = fundamental_identity_report(onb2)
    assert r.density.D_plus == 0.5 and r.measure.M_plus == pytest.approx(1)
    assert max(r.residuals) <= 1e-12


@given(frames)
def test_identity_full_window(data):
    sys, _ = data
    r = fundamental_identity_report(sys)
    assert max(r.residuals) <= 1e-9
    assert np.isclose(r.measure.M_plus * r.density.D_minus, sys.d_pi, atol=1e-9)
    assert np.isclose(r.measure.M_minus * r.density.D_plus, sys.d_pi, atol=1e-9)


def test_density_theorem_examples(gabor2, tight2, onb2):
    r = density_theorem_check(tight2)
    assert np.allclose(r.sandwich, (2, 2, 2, 2))
    assert r.passed and r.tight_ok
    r = density_theorem_check(onb2)
    assert r.riesz_ok and r.passed and r.D_plus == 0.5
    with pytest.raises(NotAFrame):
        density_theorem_check(make_system(gabor2, [1, 0], [0]))


@given(frames)
def test_density_theorem_property(data):
    sys, _ = data
    assert density_theorem_check(sys).passed


def test_canonical_windows_default():
    G = make_cyclic_product([4, 4])
    assert beurling_density(G, range(4)).sizes == tuple(len(w) for w in canonical_windows(G))
