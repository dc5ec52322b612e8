import itertools

import pytest

from mengerkit.algebra import AlgebraTable, algebra_from_functions, check_embedding, find_selectors
from mengerkit.errors import ConstructionError, PreconditionError, UnionConflictError
from mengerkit.nfun import PartialFunctionTable, complete_function, constant, projector
from mengerkit.represent import (
    Representation,
    completion_of_rep,
    embedding_rep,
    formal_star,
    rep_general,
    rep_unitary,
    sum_reps,
    union_reps,
    unitary_extension,
    verify_faithful,
    verify_representation,
    zeta_of_rep,
)

from conftest import C0, C1, I1, I2, XOR, abstract_algebras, fn, function_algebras


def test_embedding_passes(g2):
    alg, images = g2
    P = embedding_rep(alg, images)
    assert P.verified and verify_faithful(alg, P)


def test_constant_image_on_trivial_algebra():
    alg = AlgebraTable.trivial(2)
    P = Representation(alg, 2, (constant(2, 2, 1),), "unitary")
    assert verify_representation(alg, P).ok


def test_perturbed_image_is_located():
    alg, images = algebra_from_functions([XOR, I1, I2])
    k = images.index(XOR)
    bad = list(images)
    bad[k] = fn("0111")
    report = verify_representation(alg, Representation(alg, 2, tuple(bad), "embedding"))
    assert not report.ok
    assert not report["bracket"].passed
    x, *ys = report["bracket"].counterexample
    assert k in (x, *ys)


def test_rep_unitary(g2):
    alg, images = g2
    P = rep_unitary(alg, find_selectors(alg))
    assert P.m == alg.size
    assert P[images.index(I1)] == projector(2, 2, 1)
    triv = rep_unitary(AlgebraTable.trivial(2))
    assert triv.images == (PartialFunctionTable(2, 1, (0,)),)
    consts, _ = algebra_from_functions([C0, C1])
    with pytest.raises(PreconditionError):
        rep_unitary(consts)


def test_rep_unitary_on_function_algebras():
    for alg, _ in function_algebras():
        P = rep_unitary(alg)
        assert verify_faithful(alg, P)
        for g in range(alg.size):
            sel = find_selectors(alg)
            assert P[g](*sel) == g


def test_rep_general(g2):
    alg, images = g2
    P = rep_general(alg)
    i1, i2 = images.index(I1), images.index(I2)
    e1, e2 = alg.size, alg.size + 1
    assert P.m == alg.size + 2
    for g in range(alg.size):
        assert P[g](e1, e2) == g
    # o_1 I2 has mu*-tuple (I2, e2)
    assert P[i1](i2, e2) == i2
    assert verify_faithful(alg, P)


def test_rep_general_requires_representability():
    import numpy as np

    binops = np.array([[[0, 0], [0, 0]], [[1, 0], [0, 1]]])
    alg = AlgebraTable(2, 2, np.zeros((2, 2, 2), dtype=int), binops)
    with pytest.raises(PreconditionError):
        rep_general(alg)


def test_formal_star_consistency():
    for alg in abstract_algebras(2):
        star = formal_star(alg)
        s = alg.size
        assert (star.table[(slice(0, s),) * 3] == alg.sup).all()
        for g in range(s):
            assert star.bracket(g, star.selectors) == g


def test_completion_of_rep():
    alg, images = algebra_from_functions([fn("1---"), I1, I2])
    P = embedding_rep(alg, images)
    C = completion_of_rep(P)
    assert C.m == 3 and C.verified
    assert C[0] == complete_function(fn("1---"))
    assert str(C[0]) == "122222222"
    full_alg, full_images = algebra_from_functions([XOR, I1, I2])
    F = completion_of_rep(embedding_rep(full_alg, full_images))
    for f, g in zip(full_images, F.images):
        assert all(g(*a) == f(*a) for a in itertools.product(range(2), repeat=2))


def test_unitary_extension_examples():
    levels = unitary_extension([C0])
    assert set(levels.closure) == {C0, I1, I2}
    assert set(unitary_extension([I1]).closure) == {I1, I2}
    closed = unitary_extension([C0, I1, I2])
    assert closed.k_star == 0
    with pytest.raises(PreconditionError):
        unitary_extension([fn("1---")])


def test_extension_levels_grow_and_contain_inputs():
    levels = unitary_extension([XOR, fn("0001")])
    sizes = [len(level) for level in levels.levels]
    assert sizes == sorted(sizes)
    for small, big in zip(levels.levels, levels.levels[1:]):
        assert set(small) <= set(big)
    closure_alg = levels.algebra()
    assert find_selectors(closure_alg) is not None


def test_completion_then_extension_contains_original(g2):
    alg, _ = g2
    C = completion_of_rep(rep_general(alg))
    levels = unitary_extension(C.images, from_completion=True)
    big = levels.algebra()
    assert check_embedding(alg, big, list(range(alg.size))).ok


def test_union_and_sum(g2):
    alg, images = g2
    P = embedding_rep(alg, images)
    U = union_reps([P, P])
    assert U.images == P.images and U.verified
    S = sum_reps([P, P])
    assert S.m == 4 and S.verified and verify_faithful(alg, S)
    assert S.meta["offsets"] == [0, 2]


def test_union_conflict(g2):
    alg, images = g2
    P = embedding_rep(alg, images)
    swapped = Representation(alg, 2, (images[1], images[0]), "embedding")
    with pytest.raises(UnionConflictError):
        union_reps([P, swapped])


def test_zeta_of_rep():
    alg, images = algebra_from_functions([XOR, I1, I2])
    P = embedding_rep(alg, images)
    assert zeta_of_rep(alg, P) == zeta_of_rep(alg, P).identity(alg.size)
    alg, images = algebra_from_functions([fn("1---"), C1, I1, I2])
    P = embedding_rep(alg, images)
    z = zeta_of_rep(alg, P)
    assert z.is_order()
    assert (images.index(fn("1---")), images.index(C1)) in z


def test_zeta_of_sum_is_intersection():
    for alg, images in function_algebras()[::4]:
        P = embedding_rep(alg, images)
        Q = rep_general(alg)
        S = sum_reps([P, Q])
        assert zeta_of_rep(alg, S) == zeta_of_rep(alg, P) & zeta_of_rep(alg, Q)


def test_rep_general_on_abstract_algebras():
    for alg in abstract_algebras(3)[::50]:
        P = rep_general(alg)
        assert P.verified and verify_faithful(alg, P)
        assert zeta_of_rep(alg, P).is_order()
