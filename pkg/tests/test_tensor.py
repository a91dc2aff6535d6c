import numpy as np
import pytest

from mlat import groups
from mlat.coset import BudgetExceeded, EnumeratedGroup, renumber
from mlat.core import OrderBoundError, validate_axioms
from mlat.morph import are_isomorphic
from mlat.structure import SubSet, enumerate_ideals, joint_center
from mlat.tensor import (
    PreconditionError,
    abelian_tensor_snf,
    check_capability_condition,
    check_center_containments,
    check_tensor_isoclinism,
    check_tensor_quotient_iso,
    extend_star,
    pair_ideal,
    relation_defects,
    tensor_presentation,
    tensor_square,
)

from conftest import triv
import oracles


def literal_relation_failures(T):
    """The five defining relations, evaluated one tuple at a time with plain loops."""
    G, A = T.base, T.algebra
    m, s = G.mul.tolist(), G.star.tolist()
    M = A.mul.tolist()
    S = A.star.tolist()
    t = T.gen_map.tolist()
    n = len(m)
    inv = lambda x: oracles.inverse(m, x)
    Inv = lambda x: oracles.inverse(M, x)
    cj = lambda a, b: oracles.conj(m, a, b)
    bad = set()
    for x in range(n):
        for x2 in range(n):
            for y in range(n):
                y2 = x2
                if t[x][m[y][y2]] != M[t[x][y]][t[cj(y, x)][cj(y, y2)]]:
                    bad.add(1)
                if t[m[x][x2]][y] != M[t[cj(x, x2)][cj(x, y)]][t[x][y]]:
                    bad.add(2)
                p = t[s[x][x2]][cj(x2, y)]
                q = Inv(t[cj(y, x)][s[x2][y]])
                r = Inv(t[cj(x, x2)][inv(s[x][y])])
                if M[M[p][q]][r] != 0:
                    bad.add(3)
                p = t[cj(y2, x)][s[y][y2]]
                q = Inv(t[inv(s[y][x])][cj(y, y2)])
                r = Inv(t[s[y2][x]][cj(x, y)])
                if M[M[p][q]][r] != 0:
                    bad.add(4)
    for x in range(n):
        for y in range(n):
            for x2 in range(n):
                for y2 in range(n):
                    if S[t[x][y]][t[x2][y2]] != t[inv(s[y][x])][s[x2][y2]]:
                        bad.add(5)
    return bad


def _cyclic_of(n):
    return triv(groups.cyclic(n), f"c{n}")


def test_presentation_counts(small):
    P = tensor_presentation(small["c2"])
    assert P.generator_count == 4
    assert P.raw_relator_count == 32 and len(P.relators) <= 32
    P6 = tensor_presentation(small["s3c"])
    assert P6.raw_relator_count == 4 * 6 ** 3


def test_presentation_is_deterministic(small):
    for key in ("s3c", "d4"):
        a = tensor_presentation(small[key])
        b = tensor_presentation(small[key])
        assert a.relators == b.relators
        assert np.array_equal(a.star_on_generators, b.star_on_generators)
        for r in a.relators:
            assert all(1 <= abs(t) <= a.generator_count for t in r)


def test_trivial_star_presentation_star_table(small):
    P = tensor_presentation(small["d4"])
    # every generator star is the symbol 1⊗1
    assert (P.star_on_generators == 0).all()


def test_tensor_bound(corpus):
    with pytest.raises(OrderBoundError):
        tensor_presentation(corpus.algebras["d8"])


def test_extend_star_trivial():
    mul, _ = groups.klein_four()
    group = renumber(mul, np.array([1, 2]))
    G = extend_star(group, np.full((2, 2), -1))  # -1 is the identity
    assert G.has_trivial_star and validate_axioms(G).valid


def test_extend_star_single_generator():
    mul, _ = groups.cyclic(3)
    group = renumber(mul, np.array([1]))
    G = extend_star(group, np.full((1, 1), -1))
    assert validate_axioms(G).valid


def test_snf_examples(small):
    assert abelian_tensor_snf(small["c2"]).algebra.order == 2
    T = abelian_tensor_snf(small["v4"])
    assert T.algebra.order == 16 and T.algebra.element_orders.max() == 2
    T = abelian_tensor_snf(small["c6"])
    assert are_isomorphic(T.algebra, small["c6"]) is not None


def test_snf_precondition(small):
    with pytest.raises(PreconditionError):
        abelian_tensor_snf(small["d4"])
    with pytest.raises(PreconditionError):
        tensor_square(small["s3"], method="snf")


@pytest.mark.parametrize("n", range(2, 10))
def test_cyclic_squares_snf(n):
    G = _cyclic_of(n)
    T = tensor_square(G)
    assert T.method == "snf"
    assert are_isomorphic(T.algebra, G) is not None


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_cyclic_squares_enumeration(n):
    G = _cyclic_of(n)
    T = tensor_square(G, method="enumeration")
    assert T.method == "enumeration"
    assert are_isomorphic(T.algebra, tensor_square(G, method="snf").algebra) is not None


def test_methods_agree_on_abelian_corpus(corpus):
    for G in corpus.algebras.values():
        if G.is_abelian and G.has_trivial_star and G.order <= 9:
            a = tensor_square(G, method="snf")
            b = tensor_square(G, method="enumeration")
            assert are_isomorphic(a.algebra, b.algebra) is not None, G.name


def test_classical_squares(small):
    # with trivial star these are the classical non-abelian tensor squares
    assert tensor_square(small["s3"]).algebra.order == 6
    assert tensor_square(small["d4"]).algebra.order == 32
    assert tensor_square(small["q8"]).algebra.order == 64


def test_relations_hold_verbatim(small):
    for key, G in small.items():
        T = tensor_square(G)
        assert relation_defects(T) == [], key
        if G.order <= 6:
            assert literal_relation_failures(T) == set(), key


def test_squares_validate_and_identity_slots(small):
    for G in small.values():
        T = tensor_square(G)
        assert validate_axioms(T.algebra).valid
        assert (T.gen_map[0] == 0).all() and (T.gen_map[:, 0] == 0).all()


def test_commutator_of_symbols(small):
    # [g⊗h, g'⊗h'] = [g,h] ⊗ [g',h']
    for G in small.values():
        T = tensor_square(G)
        t, C, c = T.gen_map, T.algebra.comm, G.comm
        lhs = C[t[:, :, None, None], t[None, None, :, :]]
        rhs = t[c[:, :, None, None], c[None, None, :, :]]
        assert (lhs == rhs).all(), G.name


def test_v4_example(small):
    V = small["v4"]
    T = tensor_square(V)
    assert T.algebra.order == 16
    assert joint_center(T.algebra).members == pair_ideal(T, joint_center(V)).members
    assert len(pair_ideal(T, joint_center(V))) == 16


def test_pair_ideal_extremes(small):
    for G in small.values():
        T = tensor_square(G)
        assert pair_ideal(T, SubSet.of(G, [0])).members == (0,)
        assert len(pair_ideal(T, SubSet.of(G, range(G.order)))) == T.algebra.order


def test_quotient_iso_examples(small):
    V = small["v4"]
    r = check_tensor_quotient_iso(V, SubSet.of(V, [0]))
    assert r.passed
    r = check_tensor_quotient_iso(V, SubSet.of(V, range(4)))
    assert r.passed
    for I in enumerate_ideals(V):
        if len(I) == 2:
            r = check_tensor_quotient_iso(V, I)
            assert r.passed and (r.details["left_order"], r.details["right_order"]) == (2, 2)


def test_quotient_iso_all_small(small):
    for G in small.values():
        if G.order > 6:
            continue
        for I in enumerate_ideals(G):
            assert check_tensor_quotient_iso(G, I).passed, (G.name, I)


def test_center_containments(small, corpus):
    r = check_center_containments(small["c1"])
    assert r.passed
    r = check_center_containments(small["v4"])
    assert r.passed and r.details["clauses"]["joint-center"]["equal"]
    assert check_center_containments(small["c6"]).passed
    for G in small.values():
        assert check_center_containments(G).passed, G.name


def test_capability(small):
    for n in range(1, 9):
        G = triv(groups.cyclic(n) if n > 1 else groups.abelian(), f"c{n}")
        r = check_capability_condition(G)
        assert r.details["premise"] and r.passed
    r = check_capability_condition(small["v4"])
    assert r.details["premise"] and r.passed


def test_tensor_isoclinism_examples(small):
    r = check_tensor_isoclinism(small["d4"], small["d4"])
    assert r.status in ("pass", "not-applicable")
    assert r.details["isoclinic"]
    r = check_tensor_isoclinism(small["c2"], small["c4"])
    assert r.passed and r.details["orders"] == [2, 4]
    r = check_tensor_isoclinism(small["v4"], small["c2"])
    assert r.passed and r.details["orders"] == [16, 2]


def test_budget_exceeded(small):
    with pytest.raises(BudgetExceeded):
        tensor_square(small["d4"], method="enumeration", budget=20)
