import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mengerkit.errors import DimensionError
from mengerkit.nfun import (
    FunctionSet,
    PartialFunctionTable,
    all_tuples,
    complete_function,
    constant,
    is_included,
    mann_compose,
    nowhere_defined,
    projector,
    projectors,
    restrict_to,
    superpose,
    tuple_index,
)

from conftest import C0, C1, I1, I2, XOR, fn


def direct_superpose(f, gs):
    """Pointwise oracle for the bracket."""
    out = []
    for a in all_tuples(f.m, f.n):
        vals = [g(*a) for g in gs]
        out.append(None if None in vals else f(*vals))
    return PartialFunctionTable(f.n, f.m, tuple(out))


def direct_mann(f, g, i):
    out = []
    for a in all_tuples(f.m, f.n):
        v = g(*a)
        if v is None:
            out.append(None)
            continue
        b = list(a)
        b[i - 1] = v
        out.append(f(*b))
    return PartialFunctionTable(f.n, f.m, tuple(out))


def partial_tables(m, n):
    vals = list(range(m)) + [None]
    return [PartialFunctionTable(n, m, t) for t in itertools.product(vals, repeat=m**n)]


@st.composite
def functions(draw, m, n, partial=True):
    vals = st.one_of(st.none(), st.integers(0, m - 1)) if partial else st.integers(0, m - 1)
    return PartialFunctionTable(n, m, tuple(draw(st.lists(vals, min_size=m**n, max_size=m**n))))


def test_row_major_index():
    assert tuple_index((0, 1), 2) == 1
    assert tuple_index((1, 0), 2) == 2
    assert tuple_index((2, 1), 3) == 7
    assert list(all_tuples(2, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_projector_tables():
    assert str(projector(2, 2, 1)) == "0011"
    assert str(projector(2, 2, 2)) == "0101"
    assert str(projector(3, 2, 1)) == "000111222"
    with pytest.raises(DimensionError):
        projector(2, 2, 3)


def test_superpose_examples():
    assert superpose(XOR, [I2, I1]) == fn("0110")
    f = fn("1-0-")
    assert superpose(f, [I1, I2]) == f
    assert superpose(I1, [C1, fn("1---")]) == fn("1---")


def test_mann_compose_examples():
    assert mann_compose(XOR, C0, 1) == I2
    assert mann_compose(fn("1---"), C0, 2) == fn("11--")
    assert mann_compose(XOR, I1, 1) == XOR
    assert mann_compose(XOR, I2, 2) == XOR
    with pytest.raises(DimensionError):
        mann_compose(XOR, C0, 0)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        superpose(XOR, [I1])
    with pytest.raises(DimensionError):
        mann_compose(XOR, projector(3, 2, 1), 1)


def test_inclusion_and_restriction():
    assert is_included(fn("1---"), C1)
    assert not is_included(C1, fn("1---"))
    assert is_included(XOR, XOR)
    assert restrict_to(C1, [(0, 0)]) == fn("1---")
    assert restrict_to(XOR, all_tuples(2, 2)) == XOR
    assert restrict_to(fn("1---"), []) == nowhere_defined(2, 2)


def test_completion_examples():
    c = complete_function(fn("1---"))
    assert c.m == 3 and str(c) == "122222222"
    full = complete_function(XOR)
    assert full.table[:2] == (0, 1) and full(2, 0) == 2 and full(1, 0) == 1
    assert complete_function(nowhere_defined(2, 2)) == constant(3, 2, 2)


def test_function_set_rejects_duplicates_and_mixtures():
    with pytest.raises(ValueError):
        FunctionSet((XOR, XOR))
    with pytest.raises(ValueError):
        FunctionSet((XOR, projector(3, 2, 1)))
    with pytest.raises(ValueError):
        FunctionSet(())


def test_engine_matches_pointwise_oracle_on_all_partial_tables():
    tables = partial_tables(2, 2)
    for f, g in itertools.product(tables[::7], tables[::5]):
        assert superpose(f, [g, I1]) == direct_superpose(f, [g, I1])
        for i in (1, 2):
            assert mann_compose(f, g, i) == direct_mann(f, g, i)


@settings(max_examples=60, deadline=None)
@given(functions(3, 2), functions(3, 2), functions(3, 2), functions(3, 2))
def test_random_ops_match_oracle(f, g, h, k):
    assert superpose(f, [g, h]) == direct_superpose(f, [g, h])
    assert mann_compose(f, k, 2) == direct_mann(f, k, 2)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_superassociativity_random(data):
    m, n = 3, 2
    x = data.draw(functions(m, n))
    ys = [data.draw(functions(m, n)) for _ in range(n)]
    zs = [data.draw(functions(m, n)) for _ in range(n)]
    assert superpose(superpose(x, ys), zs) == superpose(x, [superpose(y, zs) for y in ys])


@settings(max_examples=60, deadline=None)
@given(functions(2, 3), functions(2, 3), functions(2, 3), functions(2, 3))
def test_projector_law(g1, g2, g3, _):
    gs = [g1, g2, g3]
    common = frozenset.intersection(*(g.domain for g in gs))
    for i, p in enumerate(projectors(2, 3)):
        assert superpose(p, gs) == restrict_to(gs[i], common)


@settings(max_examples=60, deadline=None)
@given(functions(2, 2), functions(2, 2), functions(2, 2))
def test_completion_preserves_operations(f, g, h):
    c = complete_function
    assert c(superpose(f, [g, h])) == superpose(c(f), [c(g), c(h)])
    for i in (1, 2):
        assert c(mann_compose(f, g, i)) == mann_compose(c(f), c(g), i)


@settings(max_examples=40, deadline=None)
@given(st.lists(functions(2, 2), min_size=1, max_size=6))
def test_inclusion_is_a_partial_order(fs):
    fs = list(dict.fromkeys(fs))
    for f in fs:
        assert is_included(f, f)
    for f, g in itertools.product(fs, repeat=2):
        if is_included(f, g) and is_included(g, f):
            assert f == g
    for f, g, h in itertools.product(fs, repeat=3):
        if is_included(f, g) and is_included(g, h):
            assert is_included(f, h)


def test_from_string_round_trip():
    for text in ("1---", "0110", "-0-1"):
        assert str(fn(text)) == text
