from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from coherent_frames.errors import OrderTooLarge, WrongGroupKind
from coherent_frames.groups import (FiniteGroup, ball_window, box_window,
                                    canonical_windows, folner_defect,
                                    full_window, generating_set,
                                    identity_window, index_set, is_U_dense,
                                    make_cyclic_product, make_heisenberg,
                                    make_window, packing_cover_bound,
                                    relative_separation, symmetrize,
                                    validate_group, window_sequence)


def heis_law(N):
    def mul(p, q):
        a, b, c = p
        x, y, z = q
        return ((a + x) % N, (b + y) % N, (c + z + a * y) % N)
    return mul


def all_subsets(n):
    for mask in range(1 << n):
        yield [i for i in range(n) if mask >> i & 1]


def symmetric_unit_neighborhoods(G):
    """Every symmetric subset of G that contains the identity."""
    orbits = sorted({tuple(sorted({x, G.inv(x)})) for x in range(G.order) if x != G.identity})
    for k in range(len(orbits) + 1):
        for pick in combinations(orbits, k):
            yield make_window(G, {G.identity}.union(*pick))


# construction

def test_z2xz2():
    G = make_cyclic_product([2, 2])
    assert G.order == 4 and G.is_abelian()
    assert all(G.mul(x, x) == G.identity for x in range(4))
    assert G.decode(3) == (1, 1) and G.encode((1, 0)) == 1


def test_trivial_group():
    G = make_cyclic_product([1])
    assert G.order == 1 and G.identity == 0 and G.inv(0) == 0


def test_z4xz4_element_order():
    G = make_cyclic_product([4, 4])
    assert G.order == 16 and G.is_abelian()
    assert G.element_order(G.encode((1, 0))) == 4
    assert G.element_order(G.encode((2, 2))) == 2
    assert G.identity == G.encode((0, 0))


def test_cyclic_table_against_coordinates():
    moduli = (3, 4, 2)
    G = make_cyclic_product(moduli)
    for x, y in product(range(G.order), repeat=2):
        s = tuple((a + b) % m for a, b, m in zip(G.decode(x), G.decode(y), moduli))
        assert G.mul(x, y) == G.encode(s)


def test_order_cap():
    with pytest.raises(OrderTooLarge):
        make_cyclic_product([65, 65])
    with pytest.raises(OrderTooLarge):
        make_heisenberg(17)


def test_heisenberg_products():
    G = make_heisenberg(2)
    assert G.order == 8 and not G.is_abelian()
    e = G.encode
    assert G.mul(e((1, 0, 0)), e((0, 1, 0))) == e((1, 1, 1))
    assert G.mul(e((0, 1, 0)), e((1, 0, 0))) == e((1, 1, 0))
    assert G.inv(e((1, 1, 0))) == e((1, 1, 1))
    assert len(G.center()) == 2


@pytest.mark.parametrize("N", [2, 3, 4])
def test_heisenberg_table_against_law(N):
    G = make_heisenberg(N)
    mul = heis_law(N)
    for x, y in product(range(G.order), repeat=2):
        assert G.decode(G.mul(x, y)) == mul(G.decode(x), G.decode(y))
    assert sorted(G.center()) == sorted(G.encode((0, 0, c)) for c in range(N))


# validation

def test_validate_good_tables():
    assert validate_group(make_cyclic_product([4])).ok
    assert validate_group(make_heisenberg(2)).ok
    assert validate_group(make_heisenberg(3)).ok


def test_validate_broken_associativity():
    G = make_cyclic_product([4])
    T = G.cayley.copy()
    T[1, 2], T[1, 3] = T[1, 3], T[1, 2]
    bad = FiniteGroup(4, T, G.inverse, G.identity)
    rep = validate_group(bad)
    assert not rep.ok
    triples = [v[1] for v in rep.violations if v[0] == "associativity"]
    assert triples
    x, y, z = triples[0]
    assert T[T[x, y], z] != T[x, T[y, z]]


def test_validate_sampled_path():
    G = make_cyclic_product([17, 17])
    assert G.order > 256
    assert validate_group(G).ok
    T = G.cayley.copy()
    T[5, 7], T[5, 8] = T[5, 8], T[5, 7]
    rep = validate_group(FiniteGroup(G.order, T, G.inverse, G.identity))
    assert any(v[0] == "associativity" for v in rep.violations)


def test_from_table_rejects_no_identity():
    with pytest.raises(ValueError):
        FiniteGroup.from_table([[1, 0], [0, 0]])


# windows

def test_box_windows():
    Z16 = make_cyclic_product([16])
    assert box_window(Z16, 1).elements == (0, 1, 15)
    Z44 = make_cyclic_product([4, 4])
    assert len(box_window(Z44, 1)) == 9
    assert len(box_window(Z44, 2)) == 16
    with pytest.raises(WrongGroupKind):
        box_window(make_heisenberg(2), 1)


def test_ball_windows():
    G = make_heisenberg(2)
    gens = generating_set(G)
    assert ball_window(G, gens, 0).elements == (G.identity,)
    assert len(ball_window(G, gens, 10)) == 8
    # over Z2 the generators are their own inverses, so the radius-1 ball has 3 elements
    assert len(ball_window(G, gens, 1)) == 3
    H = make_heisenberg(3)
    assert len(ball_window(H, generating_set(H), 1)) == 5


def test_ball_matches_bfs_on_coordinates():
    N = 3
    G = make_heisenberg(N)
    mul = heis_law(N)
    steps = [(1, 0, 0), (N - 1, 0, 0), (0, 1, 0), (0, N - 1, 0)]
    ball = {(0, 0, 0)}
    for r in range(1, 5):
        ball = ball | {mul(p, s) for p in ball for s in steps}
        assert set(ball_window(G, generating_set(G), r).elements) == {G.encode(p) for p in ball}


@pytest.mark.parametrize("G", [make_cyclic_product([6]), make_cyclic_product([4, 4]),
                               make_heisenberg(2), make_heisenberg(3)])
def test_canonical_windows_nested(G):
    ws = canonical_windows(G)
    assert window_sequence(ws) == ws
    assert len(ws[0]) == 1 and len(ws[-1]) == G.order
    assert all(w.symmetric and w.contains_identity for w in ws)


def test_window_sequence_rejects_non_nested():
    G = make_cyclic_product([4])
    with pytest.raises(ValueError):
        window_sequence([make_window(G, [0, 1]), make_window(G, [0, 2, 3])])


def test_index_set_duplicates():
    G = make_cyclic_product([4])
    with pytest.raises(ValueError):
        index_set(G, [1, 1])
    assert index_set(G, [3, 0]) == (0, 3)


def test_symmetrize():
    G = make_cyclic_product([8])
    assert symmetrize(G, [1]).elements == (0, 1, 7)


# counting geometry

def test_folner_defect():
    Z16 = make_cyclic_product([16])
    K = box_window(Z16, 1)
    assert folner_defect(Z16, full_window(Z16), K) == 0
    assert folner_defect(Z16, range(8), K) == Fraction(4, 8)
    assert folner_defect(Z16, range(8), identity_window(Z16)) == 0


def test_folner_defect_by_enumeration():
    Z16 = make_cyclic_product([16])
    Kn = set(range(8))
    K = {15, 0, 1}
    inner = {(a + b) % 16 for a in Kn for b in K}
    outer = {(a + b) % 16 for a in set(range(16)) - Kn for b in K}
    assert folner_defect(Z16, Kn, K) == Fraction(len(inner & outer), 8)


def lattice(G):
    return [G.encode((2 * a, 2 * b)) for a in range(2) for b in range(2)]


def test_relative_separation():
    G = make_cyclic_product([4, 4])
    Q = box_window(G, 1)
    assert relative_separation(G, range(16), identity_window(G)) == 1
    assert relative_separation(G, range(16), full_window(G)) == 16
    lam = lattice(G)
    counts = []
    for x in range(16):
        xQ = {G.mul(x, q) for q in Q}
        counts.append(len(xQ & set(lam)))
    assert relative_separation(G, lam, Q) == max(counts) == 4
    assert relative_separation(G, [], Q) == 0


def test_is_U_dense():
    G = make_cyclic_product([4, 4])
    assert is_U_dense(G, range(16), identity_window(G))
    assert not is_U_dense(G, [G.identity], identity_window(G))
    assert is_U_dense(G, lattice(G), box_window(G, 1))


def test_packing_cover_examples():
    G = make_cyclic_product([4, 4])
    e = identity_window(G)
    assert packing_cover_bound(G, range(16), e, e) == (1, 1)
    box2 = make_window(G, [G.encode(p) for p in product(range(2), repeat=2)])
    assert packing_cover_bound(G, lattice(G), box2, e) == (1, 4)
    Z4 = make_cyclic_product([4])
    K = make_window(Z4, [3, 0, 1])
    # Rel = 3, #(UK) = 4, bound = 3/3 * 4
    assert packing_cover_bound(Z4, range(4), range(4), K) == (4, 4)


@pytest.mark.parametrize("G", [make_cyclic_product([4]), make_cyclic_product([2, 2]),
                               make_cyclic_product([6]), make_cyclic_product([5])])
def test_packing_cover_exhaustive_small(G):
    subsets = list(all_subsets(G.order))
    for K in symmetric_unit_neighborhoods(G):
        for lam in subsets:
            for U in subsets:
                count, bound = packing_cover_bound(G, lam, U, K)
                assert count <= bound


def test_packing_cover_exhaustive_heisenberg():
    G = make_heisenberg(2)
    K = ball_window(G, generating_set(G), 1)
    subsets = list(all_subsets(8))
    for lam in subsets:
        for U in subsets:
            count, bound = packing_cover_bound(G, lam, U, K)
            assert count <= bound


ORDER8 = [make_cyclic_product([8]), make_cyclic_product([2, 4]),
          make_cyclic_product([2, 2, 2]), make_heisenberg(2)]


@given(st.sampled_from(ORDER8), st.integers(0, 255), st.integers(0, 255), st.data())
def test_packing_cover_order8(G, lam_mask, U_mask, data):
    Ks = list(symmetric_unit_neighborhoods(G))
    K = Ks[data.draw(st.integers(0, len(Ks) - 1))]
    lam = [i for i in range(8) if lam_mask >> i & 1]
    U = [i for i in range(8) if U_mask >> i & 1]
    count, bound = packing_cover_bound(G, lam, U, K)
    assert count <= bound


@given(st.sampled_from(ORDER8), st.integers(1, 255), st.data())
def test_rel_monotone_and_density_monotone(G, lam_mask, data):
    Ks = list(symmetric_unit_neighborhoods(G))
    i = data.draw(st.integers(0, len(Ks) - 1))
    j = data.draw(st.integers(0, len(Ks) - 1))
    Q1, Q2 = Ks[i], Ks[j]
    lam = [k for k in range(8) if lam_mask >> k & 1]
    if set(Q1) <= set(Q2):
        assert 1 <= relative_separation(G, lam, Q1) <= relative_separation(G, lam, Q2)
        if is_U_dense(G, lam, Q1):
            assert is_U_dense(G, lam, Q2)
    extra = data.draw(st.integers(0, 7))
    if is_U_dense(G, lam, Q1):
        assert is_U_dense(G, sorted(set(lam) | {extra}), Q1)


@pytest.mark.parametrize("G", [make_cyclic_product([8]), make_heisenberg(2), make_heisenberg(3)])
def test_folner_defect_zero_at_full_window(G):
    for K in canonical_windows(G):
        defects = [folner_defect(G, W, K) for W in canonical_windows(G)]
        assert defects[-1] == 0
        assert all(d >= 0 for d in defects)
