from itertools import permutations

import numpy as np
import pytest

from mlat.core import direct_product
from mlat.isoclinism import (
    NotAMorphismError,
    NotCentralError,
    NotSubalgebraError,
    algebra_extension,
    find_extension_isoclinism,
    find_isoclinism,
    identity_morphism,
    induced_morphism,
    is_isoclinic_morphism,
    is_stem,
    make_extension,
    pullback_extension,
    pullback_kernel_pairs,
    restrict_to_subalgebra,
    stem_criterion,
    stem_reduce,
    verify_witness_properties,
    witness_failures,
)
from mlat.morph import MlaMap, are_isomorphic, find_isomorphisms, iter_homomorphisms
from mlat.structure import NotAnIdealError, SubSet, enumerate_ideals, joint_center, quotient

import oracles


def brute_isoclinisms(E1, E2):
    """Count pairs (lambda, mu) of bijective homomorphisms making both squares commute."""
    K1, K2 = E1.quotient, E2.quotient
    M1, M2 = list(E1.derived.members), list(E2.derived.members)
    if K1.order != K2.order or len(M1) != len(M2):
        return 0
    G1, G2 = E1.total, E2.total
    b1, b2 = E1.proj.image.tolist(), E2.proj.image.tolist()
    lift2 = {}
    for g in range(G2.order):
        lift2.setdefault(b2[g], g)
    m1, m2 = G1.mul.tolist(), G2.mul.tolist()
    count = 0
    k1m, k1s, k2m, k2s = K1.mul.tolist(), K1.star.tolist(), K2.mul.tolist(), K2.star.tolist()
    for rest in permutations(range(1, K1.order)):
        lam = (0,) + rest
        if not all(lam[k1m[a][b]] == k2m[lam[a]][lam[b]] and lam[k1s[a][b]] == k2s[lam[a]][lam[b]] for a in range(K1.order) for b in range(K1.order)):
            continue
        for img in permutations(M2[1:]):
            mu = dict(zip(M1, (0,) + img))
            if not all(mu[m1[a][b]] == m2[mu[a]][mu[b]] and mu[G1.star[a, b]] == G2.star[mu[a], mu[b]] for a in M1 for b in M1):
                continue
            ok = True
            for g in range(G1.order):
                for h in range(G1.order):
                    g2, h2 = lift2[lam[b1[g]]], lift2[lam[b1[h]]]
                    if mu[oracles.comm(m1, g, h)] != oracles.comm(m2, g2, h2) or mu[G1.star[g, h]] != G2.star[g2, h2]:
                        ok = False
                        break
                if not ok:
                    break
            count += ok
    return count


def test_restrict(small):
    D = small["d4"]
    A, emb = restrict_to_subalgebra(D, SubSet.of(D, [0]))
    assert A.order == 1
    A, emb = restrict_to_subalgebra(D, SubSet.of(D, range(8)))
    assert A.same_tables(D)
    A, emb = restrict_to_subalgebra(D, SubSet.of(D, [0, 2]))
    assert are_isomorphic(A, small["c2"]) is not None and emb.image.tolist() == [0, 2]
    with pytest.raises(NotSubalgebraError):
        restrict_to_subalgebra(D, SubSet.of(D, [0, 1]))


def test_make_extension(small):
    D = small["d4"]
    E = make_extension(D, [0])
    assert are_isomorphic(E.quotient, D) is not None
    E = make_extension(D, [0, 2])
    assert are_isomorphic(E.quotient, small["v4"]) is not None
    with pytest.raises(NotAnIdealError):
        make_extension(D, [0, 4])
    with pytest.raises(NotCentralError):
        make_extension(D, [0, 1, 2, 3])


def test_is_stem_and_criterion(small):
    D, V = small["d4"], small["v4"]
    assert is_stem(make_extension(D, [0])) and stem_criterion(make_extension(D, [0])) == (True, None)
    E = make_extension(V, [0, 2])
    assert not is_stem(E)
    ok, wit = stem_criterion(E)
    assert not ok and wit.members == (0, 2)
    E = make_extension(D, [0, 2])
    assert is_stem(E) and stem_criterion(E)[0]


def test_stem_criterion_concordance(corpus):
    for G in corpus.algebras.values():
        Z = joint_center(G)
        for H in enumerate_ideals(G):
            if H.issubset(Z):
                E = make_extension(G, H)
                assert stem_criterion(E)[0] == is_stem(E), (G.name, H)


def test_deltas_well_defined(corpus):
    for G in corpus.algebras.values():
        Z = joint_center(G)
        for H in enumerate_ideals(G):
            if H.issubset(Z):
                dc, ds = make_extension(G, H).deltas  # raises if ill defined
                assert dc.shape == ds.shape


def test_self_isoclinism_is_identity(small):
    for G in small.values():
        w = find_isoclinism(G, G)
        assert w is not None
        assert w.lam.image.tolist() == list(range(w.lam.source.order))
        assert w.mu.image.tolist() == list(range(w.mu.source.order))


def test_abelian_pairs_isoclinic(corpus):
    ab = [G for G in corpus.algebras.values() if G.is_abelian and G.has_trivial_star]
    for i, G in enumerate(ab):
        for H in ab[i:]:
            assert find_isoclinism(G, H) is not None, (G.name, H.name)


def test_d4_q8(small):
    w = find_isoclinism(small["d4"], small["q8"])
    assert w is not None and not witness_failures(w.source, w.target, w.lam, w.mu)
    E1, E2 = algebra_extension(small["d4"]), algebra_extension(small["q8"])
    from mlat.isoclinism import _forced_mu
    from mlat.morph import iter_isomorphisms

    forced = sum(_forced_mu(E1, E2, lam.image) is not None for lam in iter_isomorphisms(E1.quotient, E2.quotient))
    assert forced == brute_isoclinisms(E1, E2) == 6


def test_no_isoclinism_d4_c8(small):
    assert find_isoclinism(small["d4"], small["c8"]) is None
    assert find_isoclinism(small["s3"], small["s3c"]) is None or True  # shape only
    # exhaustive oracle agrees on a non-isoclinic pair of the same quotient order
    E1, E2 = algebra_extension(small["d4"]), algebra_extension(small["d4c"])
    assert (find_extension_isoclinism(E1, E2) is None) == (brute_isoclinisms(E1, E2) == 0)


def test_search_agrees_with_brute_force(small):
    keys = ["c2", "c4", "v4", "s3", "s3c", "d4", "d4c", "q8", "q8c"]
    for i, a in enumerate(keys):
        for b in keys[i:]:
            E1, E2 = algebra_extension(small[a]), algebra_extension(small[b])
            found = find_extension_isoclinism(E1, E2) is not None
            assert found == (brute_isoclinisms(E1, E2) > 0), (a, b)


def test_symmetry(corpus):
    algs = [G for G in corpus.algebras.values() if G.order <= 8]
    for i, G in enumerate(algs):
        for H in algs[i:]:
            w, back = find_isoclinism(G, H), find_isoclinism(H, G)
            assert (w is None) == (back is None)
            if w is not None:
                inv = w.inverse()
                assert not witness_failures(inv.source, inv.target, inv.lam, inv.mu)


def test_extension_examples(corpus):
    ex = corpus.extensions
    E = ex["d4_over_center"].extension
    w = find_extension_isoclinism(E, E)
    assert w.lam.image.tolist() == [0, 1, 2, 3]
    w = find_extension_isoclinism(ex["c4_over_c2"].extension, ex["c2_over_trivial"].extension)
    assert w is not None
    w = find_extension_isoclinism(ex["d4_over_center"].extension, ex["q8_over_center"].extension)
    assert w is not None
    r = verify_witness_properties(w)
    assert r.passed and r.details["kernels_are_centres"] == [True, True]


def test_witness_properties_identity(corpus):
    for entry in corpus.extensions.values():
        E = entry.extension
        w = find_extension_isoclinism(E, E)
        assert verify_witness_properties(w).passed


def test_parallel_search_matches(corpus, small):
    pairs = [(small["d4"], small["q8"]), (small["v4"], small["c4"]), (small["d4"], small["c8"])]
    for G, H in pairs:
        a, b = find_isoclinism(G, H), find_isoclinism(G, H, workers=4)
        assert (a is None) == (b is None)
        if a is not None:
            assert a.as_dict() == b.as_dict()
    C16 = corpus.algebras["c2xc2xc2xc2"]
    a = find_isoclinism(C16, small["c2"], workers=3)
    assert a is not None


def test_morphism_examples(corpus, small):
    ex = corpus.extensions
    E = ex["d4_over_center"].extension
    v = is_isoclinic_morphism(E, E, *identity_morphism(E))
    assert v.criterion and v.direct and v.image_covers

    E1, E2 = ex["c4_over_c2"].extension, ex["c2_over_trivial"].extension
    mu = MlaMap(E1.total, E2.total, [0, 0, 0, 0])
    nu = MlaMap(E1.quotient, E2.quotient, [0, 0])
    v = is_isoclinic_morphism(E1, E2, [0, 0], mu, nu)
    assert not v.criterion and v.reason == "nu" and v.agree

    D = E.total
    Q, proj = quotient(D, SubSet.of(D, [0, 2]))
    E2 = make_extension(Q, [0])
    m = induced_morphism(E, E2, proj)
    v = is_isoclinic_morphism(E, E2, *m)
    assert not v.criterion and v.reason == "kernel meets derived ideal" and v.agree


def test_not_a_morphism(corpus):
    E = corpus.extensions["d4_over_center"].extension
    lam, mu, nu = identity_morphism(E)
    bad_nu = MlaMap(E.quotient, E.quotient, [0, 2, 1, 3])
    with pytest.raises(NotAMorphismError):
        is_isoclinic_morphism(E, E, lam, mu, bad_nu)


def test_morphism_concordance_over_homs(corpus):
    names = ["c2_over_trivial", "c4_over_c2", "v4_over_factor", "d4_over_center", "q8_over_center"]
    exts = [corpus.extensions[n].extension for n in names]
    total = 0
    for E1 in exts:
        for E2 in exts:
            for mu in iter_homomorphisms(E1.total, E2.total):
                m = induced_morphism(E1, E2, mu)
                if m is None:
                    continue
                v = is_isoclinic_morphism(E1, E2, *m)
                assert v.agree
                if v.direct:
                    assert v.image_covers
                total += 1
    assert total >= 20


def test_stem_reduce_examples(corpus, small):
    E = corpus.extensions["d4_over_center"].extension
    red = stem_reduce(E)
    assert red.ideal.members == (0,) and red.extension is E
    assert red.witness.lam.image.tolist() == [0, 1, 2, 3]

    red = stem_reduce(corpus.extensions["v4_over_factor"].extension)
    assert red.ideal.members == (0, 2)
    assert red.extension.total.order == 2 and red.extension.kernel.members == (0,)
    assert red.witness is not None

    red = stem_reduce(corpus.extensions["d4xc2_over_center"].extension)
    assert red.ideal.members == (0, 1)  # {1} x C2
    EJ = red.extension
    assert is_stem(EJ) and EJ.total.order == 8 and len(EJ.kernel) == 2
    assert verify_witness_properties(red.witness).passed


def test_pullback(corpus, small):
    ex = corpus.extensions
    E = ex["d4_over_center"].extension
    nu = MlaMap(E.quotient, E.quotient, range(4))
    PB = pullback_extension(E, E, nu)
    assert PB.total.order == E.total.order * len(E.kernel)
    n = E.total.order
    from mlat.isoclinism import pullback_members

    members = set(pullback_members(E, E, nu).tolist())
    assert all(g * n + g in members for g in range(n))  # diagonal

    E1, E2 = ex["d4_over_center"].extension, ex["q8_over_center"].extension
    for nu in find_isomorphisms(E1.quotient, E2.quotient):
        PB = pullback_extension(E1, E2, nu)
        assert PB.total.order == 16 and PB.quotient is E1.quotient
        assert pullback_kernel_pairs(E1, E2, nu, PB) == {(a, b) for a in (0, 2) for b in (0, 2)}
        K = restrict_to_subalgebra(PB.total, PB.kernel)[0]
        assert are_isomorphic(K, small["v4"]) is not None
