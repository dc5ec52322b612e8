import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mengerkit.algebra import AlgebraTable, algebra_from_functions, check_axioms, check_representability
from mengerkit.binrel import BinaryRelation
from mengerkit.errors import PreconditionError
from mengerkit.nfun import is_included
from mengerkit.relations import (
    DeterminingPair,
    OrderedAlgebra,
    check_image_inclusion,
    check_orbit_condition,
    decompose_rep,
    eh_wh,
    inclusion_order,
    is_l_ideal,
    one_step_maps,
    order_represent,
    ordered_from_functions,
    pair_orbit,
    polynomial_orbit,
    relation_properties,
    simplest_rep,
    verify_determining_pair,
)
from mengerkit.represent import embedding_rep, formal_star, verify_faithful, zeta_of_rep

from conftest import C0, C1, I1, I2, abstract_algebras, fn, function_algebras


def constant_zero_algebra(size=3, n=2):
    return AlgebraTable(n, size, np.zeros((size,) * (n + 1), dtype=int), np.zeros((n, size, size), dtype=int))


# --- regularity -----------------------------------------------------------------


def test_identity_and_full_relations_are_stable():
    for alg in abstract_algebras(2):
        for rho in (BinaryRelation.identity(alg.size), BinaryRelation.full(alg.size)):
            assert relation_properties(alg, rho).ok


def test_empty_relation_is_vacuously_regular(g2):
    alg, _ = g2
    assert relation_properties(alg, BinaryRelation.empty(alg.size)).ok


def _quasi_orders(size):
    for bits in itertools.product((False, True), repeat=size * size):
        rho = BinaryRelation(np.array(bits).reshape(size, size))
        if rho.is_quasi_order():
            yield rho


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_stable_iff_both_regularities_for_quasi_orders(seed):
    algs = abstract_algebras(3)
    alg = algs[seed % len(algs)]
    rng = np.random.default_rng(seed)
    orders = list(_quasi_orders(alg.size))
    rho = orders[rng.integers(len(orders))]
    props = relation_properties(alg, rho)
    assert props.stable.passed == (props.v_regular.passed and props.l_regular.passed)


def test_inclusion_order_is_stable():
    for alg, images in function_algebras():
        assert relation_properties(alg, inclusion_order(images)).ok


def test_regularity_counterexample_is_reported(g2):
    alg, images = g2
    rho = BinaryRelation.from_pairs(2, [(0, 0), (1, 1), (0, 1)])
    props = relation_properties(alg, rho)
    assert not props.ok
    failed = [c for c in (props.v_regular, props.l_regular, props.stable) if not c.passed]
    assert all(c.counterexample is not None for c in failed)


def test_l_ideal_examples(g2):
    alg, images = g2
    assert is_l_ideal(alg, range(alg.size)).passed
    empty = is_l_ideal(alg, [])
    assert empty.passed and empty.note == "empty"
    only = is_l_ideal(alg, [images.index(I1)])
    assert not only.passed and only.counterexample is not None


def test_l_ideal_matches_definition():
    for alg in abstract_algebras(2):
        for r in range(alg.size + 1):
            for W in itertools.combinations(range(alg.size), r):
                Ws = set(W)
                direct = all(
                    alg.sup[(g, *xs)] in Ws
                    for g in range(alg.size)
                    for xs in itertools.product(range(alg.size), repeat=alg.n)
                    if Ws & set(xs)
                ) and all(alg.binops[i][g, w] in Ws for i in range(alg.n) for g in range(alg.size) for w in Ws)
                assert is_l_ideal(alg, W).passed == direct


# --- orbits and E_H, W_H ------------------------------------------------------------


def test_orbit_examples(g2):
    alg, _ = g2
    assert polynomial_orbit(alg, 0) == frozenset({0, 1})
    assert pair_orbit(alg, 0, 1) == frozenset({(0, 1), (0, 0), (1, 1)})
    zero = constant_zero_algebra()
    assert polynomial_orbit(zero, 2) == frozenset({0, 2})
    assert pair_orbit(zero, 1, 2) == frozenset({(1, 2), (0, 0)})


def test_eh_wh_examples(g2):
    alg, images = g2
    E, W = eh_wh(alg, [images.index(I1)])
    assert E == BinaryRelation.identity(2) and W == frozenset()
    E, W = eh_wh(alg, range(2))
    assert E == BinaryRelation.full(2) and W == frozenset()
    E, W = eh_wh(alg, [])
    assert E == BinaryRelation.full(2) and W == frozenset({0, 1})


def _eh_wh_oracle(alg, H):
    H = set(H)
    s = alg.size
    E = np.array(
        [[all((u in H) == (v in H) for u, v in pair_orbit(alg, x, y)) for y in range(s)] for x in range(s)]
    )
    W = frozenset(x for x in range(s) if not polynomial_orbit(alg, x) & H)
    return BinaryRelation(E), W


def test_eh_wh_matches_orbit_definition():
    for alg in abstract_algebras(3)[::7]:
        for r in range(alg.size + 1):
            for H in itertools.combinations(range(alg.size), r):
                assert eh_wh(alg, H) == _eh_wh_oracle(alg, H)


# --- determining pairs and simplest representations -------------------------------------


def _full_pair(alg):
    star = formal_star(alg)
    return DeterminingPair(star, BinaryRelation.full(star.size), frozenset())


def test_full_relation_is_a_determining_pair(g2):
    alg, _ = g2
    pair = _full_pair(alg)
    assert verify_determining_pair(alg, pair).ok
    P = simplest_rep(alg, pair)
    assert P.m == 1 and P.verified
    assert all(f.table == (0,) for f in P.images)


def test_missing_selector_is_reported(g2):
    alg, _ = g2
    star = formal_star(alg)
    E = BinaryRelation.from_pairs(star.size, [(0, 0), (1, 1)])
    rep = verify_determining_pair(alg, DeterminingPair(star, E, frozenset()))
    assert not rep["covers_generators"].passed
    assert rep["covers_generators"].counterexample in star.selectors


def test_selector_tuple_condition_failure(g2):
    alg, images = g2
    star = formal_star(alg)
    i1 = images.index(I1)
    # keep the base apart but glue the selectors to the other base element
    blocks = [{i1, star.selectors[1]}, {1 - i1, star.selectors[0]}]
    E = BinaryRelation.from_partition(star.size, blocks)
    rep = verify_determining_pair(alg, DeterminingPair(star, E, frozenset()))
    assert not rep["selector_tuple_image"].passed
    assert rep["selector_tuple_image"].counterexample[0] in (0, 1)


def test_selector_in_w_is_reported(g2):
    alg, _ = g2
    star = formal_star(alg)
    pair = DeterminingPair(star, BinaryRelation.full(star.size), frozenset(range(star.size)))
    rep = verify_determining_pair(alg, pair)
    assert not rep["selectors_outside_w"].passed


def test_simplest_rep_of_identity_pair_is_faithful(g2):
    alg, _ = g2
    star = formal_star(alg)
    pair = DeterminingPair(star, BinaryRelation.identity(star.size), frozenset())
    P = simplest_rep(alg, pair)
    assert P.verified and verify_faithful(alg, P)


def test_simplest_rep_rejects_bad_pair(g2):
    alg, _ = g2
    star = formal_star(alg)
    pair = DeterminingPair(star, BinaryRelation.empty(star.size), frozenset())
    with pytest.raises(PreconditionError):
        simplest_rep(alg, pair)


def test_decompose_projector_algebra(g2):
    alg, images = g2
    P = embedding_rep(alg, images)
    D = decompose_rep(alg, P)
    assert len(D.parts) == 4 and D.union_matches
    assert D.union.images == P.images
    for part in D.parts:
        assert part.report.ok and part.rep.verified and part.rep.m == 2


def test_decompose_partial_algebra():
    alg, images = algebra_from_functions([fn("1---"), I1, I2])
    D = decompose_rep(alg, embedding_rep(alg, images))
    assert D.union_matches


def test_image_inclusion_on_decomposition_parts(g2):
    alg, images = g2
    D = decompose_rep(alg, embedding_rep(alg, images))
    for part in D.parts:
        for g1, g2_ in itertools.product(range(alg.size), repeat=2):
            direct = is_included(part.rep[g1], part.rep[g2_])
            assert check_image_inclusion(alg, part.pair, g1, g2_) == direct


# --- orders ---------------------------------------------------------------------------


def test_orbit_condition_holds_for_inclusion():
    for alg, images in function_algebras():
        assert check_orbit_condition(alg, inclusion_order(images)).passed


def test_orbit_condition_violation():
    alg = constant_zero_algebra()
    assert check_axioms(alg).ok and check_representability(alg).ok
    zeta = BinaryRelation.from_pairs(3, [(0, 0), (1, 1), (2, 0), (2, 2)])
    assert zeta.is_order() and relation_properties(alg, zeta).ok
    check = check_orbit_condition(alg, zeta)
    assert not check.passed
    assert check.counterexample == (0, 2, 0, 0, 2)
    with pytest.raises(PreconditionError, match="orbit condition"):
        order_represent(OrderedAlgebra(alg, zeta))


def test_inclusion_order_example():
    z = inclusion_order([fn("1---"), C1, C0, I1])
    assert z.pairs() == [(0, 0), (0, 1), (1, 1), (2, 2), (3, 3)]
    assert z.is_order()


def test_order_represent_round_trip():
    for alg, images in function_algebras()[::5]:
        zeta = inclusion_order(images)
        P = order_represent(OrderedAlgebra(alg, zeta))
        assert verify_faithful(alg, P) and zeta_of_rep(alg, P) == zeta


def test_order_represent_partial_functions():
    oalg, images = ordered_from_functions([fn("1---"), C1, I1, I2])
    P = order_represent(oalg)
    assert zeta_of_rep(oalg.alg, P) == oalg.zeta
    assert oalg.zeta != BinaryRelation.identity(oalg.alg.size)


def test_order_represent_preconditions(g2):
    alg, _ = g2
    with pytest.raises(PreconditionError, match="antisymmetric"):
        order_represent(OrderedAlgebra(alg, BinaryRelation.full(2)))
    with pytest.raises(PreconditionError, match="reflexive"):
        order_represent(OrderedAlgebra(alg, BinaryRelation.empty(2)))
