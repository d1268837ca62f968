import itertools
import random

import numpy as np
import pytest

from posrel.poset import (
    AntisymmetryViolation,
    FinPoset,
    MonotoneMap,
    NotMonotone,
    all_monotone_maps,
    are_isomorphic,
    classify_map,
    coinserter,
    comma,
    equalizer,
    equalizer_via_inserters,
    find_order_iso,
    hom_poset,
    image_factorize,
    inserter,
    is_coinserter,
    is_comma_square,
    is_comma_square_by_cones,
    is_pullback_square,
    jointly_order_mono,
    kernel_congruence,
    make_poset,
    pair_into_product,
    poset_reflection,
    power,
    power_via_inserters,
    product,
    pullback,
    subposet,
    terminal,
    transitive_closure,
)


C2 = FinPoset.chain(2)
C3 = FinPoset.chain(3)
D2 = FinPoset.discrete(2)
DIAMOND = make_poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


def random_poset(rng, n):
    mat = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                mat[i, j] = True
    return FinPoset(transitive_closure(mat))


def random_monotone(rng, X, Y):
    maps = all_monotone_maps(X, Y)
    return maps[rng.randrange(len(maps))]


def test_make_poset_chain():
    P = make_poset(["a", "b"], [("a", "b")])
    assert P.n == 2
    assert (P.leq == np.array([[1, 1], [0, 1]], dtype=bool)).all()
    assert P.labels == ("a", "b")


def test_make_poset_closes_transitively():
    P = make_poset("xyz", [("x", "y"), ("y", "z")])
    assert P.leq[0, 2]


def test_make_poset_rejects_cycle():
    with pytest.raises(AntisymmetryViolation):
        make_poset("ab", [("a", "b"), ("b", "a")])


def test_order_matrix_is_frozen():
    with pytest.raises(ValueError):
        C2.leq[0, 1] = False


def test_monotone_map_rejects_order_breaking():
    with pytest.raises(NotMonotone):
        MonotoneMap(C2, C2, [1, 0])


def test_classify_discrete_onto_chain():
    f = MonotoneMap(D2, C2, [0, 1])
    c = classify_map(f)
    assert not c.is_ff and c.is_so and not c.is_iso


def test_classify_embedding():
    f = MonotoneMap(C2, C3, [0, 2])
    c = classify_map(f)
    assert c.is_ff and not c.is_so


def test_classify_iso():
    f = MonotoneMap(C2, C2, [0, 1])
    assert classify_map(f).is_iso


def test_ff_implies_injective():
    # order-reflection forces injectivity; verify over a sample
    rng = random.Random(7)
    for _ in range(50):
        X = random_poset(rng, rng.randrange(1, 5))
        Y = random_poset(rng, rng.randrange(1, 5))
        maps = all_monotone_maps(X, Y)
        if not maps:
            continue
        f = maps[rng.randrange(len(maps))]
        if classify_map(f).is_ff:
            assert len(set(f.assign)) == X.n


def test_product_of_chains_is_diamond():
    P, p0, p1 = product(C2, C2)
    assert P.n == 4
    assert are_isomorphic(P, DIAMOND)
    assert jointly_order_mono(p0, p1)


def test_product_universal_property():
    P, p0, p1 = product(C2, C3)
    for u0 in all_monotone_maps(DIAMOND, C2):
        for u1 in all_monotone_maps(DIAMOND, C3):
            h = pair_into_product(P, p0, p1, u0, u1)
            assert h.then(p0) == u0 and h.then(p1) == u1


def test_inserter_of_identity_pair_is_everything():
    i = MonotoneMap.identity(C3)
    m = inserter(i, i)
    assert m.dom == C3 and m.assign == (0, 1, 2)


def test_inserter_picks_out_below_diagonal():
    f = MonotoneMap(C3, C3, [0, 1, 2])
    g = MonotoneMap(C3, C3, [1, 1, 1])
    m = inserter(f, g)
    # f(x) <= g(x) fails only at x = 2
    assert m.assign == (0, 1)
    assert classify_map(m).is_ff


def test_equalizer_via_inserters_matches_direct():
    rng = random.Random(11)
    for _ in range(60):
        X = random_poset(rng, rng.randrange(0, 5))
        Y = random_poset(rng, rng.randrange(1, 5))
        f = random_monotone(rng, X, Y)
        g = random_monotone(rng, X, Y)
        direct = equalizer(f, g)
        double = equalizer_via_inserters(f, g)
        assert set(direct.assign) == set(double.assign)
        assert are_isomorphic(direct.dom, double.dom)


def test_power_chain_by_chain():
    # monotone maps C2 -> C2 under pointwise order form a 3-chain
    P, maps = power(C2, C2)
    assert P.n == 3
    assert are_isomorphic(P, C3)
    assert [m.assign for m in maps] == [(0, 0), (0, 1), (1, 1)]


def test_power_via_inserters_agrees():
    rng = random.Random(3)
    for _ in range(25):
        X = random_poset(rng, rng.randrange(1, 4))
        P = random_poset(rng, rng.randrange(1, 4))
        direct, _ = power(X, P)
        built = power_via_inserters(X, P)
        assert are_isomorphic(direct, built)


def test_hom_poset_discrete_domain_is_product():
    H, _ = hom_poset(D2, C2)
    Prod, _, _ = product(C2, C2)
    assert are_isomorphic(H, Prod)


def test_comma_of_identities_on_chain():
    i = MonotoneMap.identity(C2)
    C, c0, c1 = comma(i, i)
    pts = {(c0.assign[k], c1.assign[k]) for k in range(C.n)}
    assert pts == {(0, 0), (0, 1), (1, 1)}
    assert is_comma_square(i, i, c0, c1)


def test_kernel_congruence_of_collapse():
    f = MonotoneMap(D2, terminal(), [0, 0])
    K, k0, k1 = kernel_congruence(f)
    pts = {(k0.assign[k], k1.assign[k]) for k in range(K.n)}
    assert pts == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_comma_square_checker_agrees_with_cone_enumeration():
    rng = random.Random(5)
    stages = [terminal(), C2, D2]
    for _ in range(12):
        X = random_poset(rng, rng.randrange(1, 4))
        Y = random_poset(rng, rng.randrange(1, 4))
        Z = random_poset(rng, rng.randrange(1, 4))
        f = random_monotone(rng, X, Z)
        g = random_monotone(rng, Y, Z)
        C, c0, c1 = comma(f, g)
        assert is_comma_square(f, g, c0, c1)
        assert is_comma_square_by_cones(f, g, c0, c1, stages)


def test_pullback_of_chain_over_point():
    f = MonotoneMap(C2, terminal(), [0, 0])
    P, p0, p1 = pullback(f, f)
    assert P.n == 4
    assert is_pullback_square(f, f, p0, p1)
    Prod, _, _ = product(C2, C2)
    assert are_isomorphic(P, Prod)


def test_image_factorize_collapse_then_embed():
    f = MonotoneMap(D2, C2, [0, 1])
    e, m = image_factorize(f)
    assert classify_map(m).is_ff
    assert e.is_surjective()
    assert e.then(m) == f
    # the image carries the codomain order, not the domain's
    assert e.cod.leq[0, 1]


def test_image_factorize_random_roundtrip():
    rng = random.Random(17)
    for _ in range(60):
        X = random_poset(rng, rng.randrange(1, 5))
        Y = random_poset(rng, rng.randrange(1, 5))
        f = random_monotone(rng, X, Y)
        e, m = image_factorize(f)
        assert e.then(m) == f
        assert e.is_surjective()
        assert classify_map(m).is_ff


def test_poset_reflection_of_symmetric_pair():
    pre = np.array([[1, 1], [1, 1]], dtype=bool)
    Q, class_of = poset_reflection(pre)
    assert Q.n == 1 and class_of == [0, 0]


def test_coinserter_inserting_order_on_discrete():
    pt = terminal()
    f0 = MonotoneMap(pt, D2, [0])
    f1 = MonotoneMap(pt, D2, [1])
    q = coinserter(f0, f1)
    assert q.cod == C2
    assert q.assign == (0, 1)
    assert is_coinserter(f0, f1, q, [C2, D2, C3])


def test_coinserter_collapsing_chain():
    pt = terminal()
    f0 = MonotoneMap(pt, C2, [1])
    f1 = MonotoneMap(pt, C2, [0])
    q = coinserter(f0, f1)
    assert q.cod.n == 1


def test_coinserter_universal_property_random():
    rng = random.Random(23)
    pool = [terminal(), C2, D2, C3]
    for _ in range(20):
        W = random_poset(rng, rng.randrange(1, 3))
        X = random_poset(rng, rng.randrange(1, 4))
        f0 = random_monotone(rng, W, X)
        f1 = random_monotone(rng, W, X)
        q = coinserter(f0, f1)
        assert is_coinserter(f0, f1, q, pool)


def test_subposet_inclusion_is_ff():
    S, incl = subposet(DIAMOND, [0, 3])
    assert classify_map(incl).is_ff
    assert are_isomorphic(S, C2)


def test_find_order_iso_positive_and_negative():
    iso = find_order_iso(DIAMOND, DIAMOND)
    assert iso is not None and classify_map(iso).is_iso
    assert find_order_iso(C3, DIAMOND) is None
    P, _, _ = product(C2, C2)
    assert find_order_iso(P, DIAMOND) is not None


def test_all_monotone_maps_counts():
    assert len(all_monotone_maps(C2, C2)) == 3
    assert len(all_monotone_maps(D2, D2)) == 4
    assert len(all_monotone_maps(C3, C2)) == 4
    assert len(all_monotone_maps(FinPoset.discrete(0), C2)) == 1


def test_empty_poset_everywhere():
    E = FinPoset.discrete(0)
    P, _, _ = product(E, C2)
    assert P.n == 0
    f = MonotoneMap(E, C2, [])
    e, m = image_factorize(f)
    assert e.cod.n == 0
    assert classify_map(f).is_ff and not classify_map(f).is_so
