"""Enumeration and random generation of small algebras, used as test oracles."""

from __future__ import annotations

import itertools
from collections.abc import Iterator

import numpy as np

from ._engine import FunctionPool
from .algebra import (
    AlgebraTable,
    check_axioms,
    check_representability,
    reachable_mu_states,
)
from .errors import MengerError
from .nfun import FunctionSet, PartialFunctionTable, projectors


# --- associative binary tables ----------------------------------------------


def _assoc_ok(T: np.ndarray, s: int) -> bool:
    """No associativity violation among triples whose products are all known (-1 = unknown)."""
    ext = np.full((s + 1, s + 1), s, dtype=np.int64)
    sub = np.where(T < 0, s, T)
    ext[:s, :s] = sub
    x, y, z = np.ix_(range(s), range(s), range(s))
    lhs = ext[ext[x, y], z]
    rhs = ext[x, ext[y, z]]
    return not ((lhs < s) & (rhs < s) & (lhs != rhs)).any()


def _assoc_search(s: int, order) -> Iterator[np.ndarray]:
    T = np.full((s, s), -1, dtype=np.int64)
    cells = [(a, b) for a in range(s) for b in range(s)]

    def rec(k):
        if k == len(cells):
            yield T.copy()
            return
        for v in order(k):
            T[cells[k]] = v
            if _assoc_ok(T, s):
                yield from rec(k + 1)
        T[cells[k]] = -1

    yield from rec(0)


def associative_tables(s: int) -> list[np.ndarray]:
    """Every associative operation on {0..s-1}, in lexicographic order of the flat table."""
    return list(_assoc_search(s, lambda k: range(s)))


def random_associative_table(s: int, rng: np.random.Generator) -> np.ndarray:
    return next(_assoc_search(s, lambda k: rng.permutation(s).tolist()))


# --- bracket tables ------------------------------------------------------------


class _BracketSearch:
    """Backtracking over the (n+1)-ary table for fixed compositions.

    Constraints: superassociativity and the two identities tying the bracket
    to the compositions.  Cells forced by words that cover every slot are
    fixed before the search; a binop tuple whose word values already clash
    has no valid bracket and yields nothing.
    """

    def __init__(self, binops: np.ndarray, node_limit: int | None = None):
        self.binops = np.asarray(binops, dtype=np.int64)
        self.n, s = self.binops.shape[0], self.binops.shape[1]
        self.s = s
        self.node_limit = node_limit
        self.nodes = 0
        n = self.n
        self.shape = (s,) * (n + 1)
        stub = AlgebraTable(n, s, np.zeros(self.shape, dtype=np.int64), self.binops)
        self.reach = reachable_mu_states(stub)
        self.feasible = not self.reach.collisions
        self.forced = np.full(self.shape, -1, dtype=np.int64)
        ar = np.arange(s)
        for state in self.reach.full_states():
            vec = np.asarray(self.reach.states[state])
            cur = self.forced[(ar, *state)]
            if ((cur >= 0) & (cur != vec)).any():
                self.feasible = False
            self.forced[(ar, *state)] = vec
        g = [np.arange(s).reshape([s if k == j else 1 for k in range(2 * n + 1)]) for j in range(2 * n + 1)]
        self._x, self._ys, self._zs = g[0], g[1 : n + 1], g[n + 1 :]

    def consistent(self, table: np.ndarray) -> bool:
        s, n = self.s, self.n
        ext = np.full((s + 1,) * (n + 1), s, dtype=np.int64)
        ext[(slice(0, s),) * (n + 1)] = np.where(table < 0, s, table)
        Bx = np.full((n, s + 1, s + 1), s, dtype=np.int64)
        Bx[:, :s, :s] = self.binops

        def clash(a, b):
            return ((a < s) & (b < s) & (a != b)).any()

        x, ys, zs = self._x, self._ys, self._zs
        # superassociativity
        if clash(ext[(ext[(x, *ys)], *zs)], ext[(x, *(ext[(y, *zs)] for y in ys))]):
            return False
        y0, z0 = ys[0], zs[0]
        for i in range(n):
            # [x o_i y, z..] = [x, z.., [y, z..] at i, ..]
            inner = list(zs)
            inner[i] = ext[(y0, *zs)]
            if clash(ext[(Bx[i][x, y0], *zs)], ext[(x, *inner)]):
                return False
            # [x, y..] o_i z = [x, y_1 o_i z, ..]
            if clash(Bx[i][ext[(x, *ys)], z0], ext[(x, *(Bx[i][y, z0] for y in ys))]):
                return False
        return True

    def solutions(self, order=None) -> Iterator[np.ndarray]:
        if not self.feasible:
            return
        table = self.forced.copy()
        if not self.consistent(table):
            return
        free = [tuple(int(v) for v in c) for c in np.argwhere(table < 0)]
        s = self.s
        order = order or (lambda k: range(s))

        def rec(k):
            if k == len(free):
                yield table.copy()
                return
            for v in order(k):
                self.nodes += 1
                if self.node_limit is not None and self.nodes > self.node_limit:
                    return
                table[free[k]] = v
                if self.consistent(table):
                    yield from rec(k + 1)
            table[free[k]] = -1

        yield from rec(0)


# --- isomorphism helpers ---------------------------------------------------------


def _relabel_binops(binops: np.ndarray, perm: np.ndarray) -> np.ndarray:
    inv = np.argsort(perm)
    return perm[binops[:, inv][:, :, inv]]


def _binop_automorphisms(binops: np.ndarray) -> list[np.ndarray] | None:
    """Permutations fixing ``binops``, or None if some relabelling is smaller."""
    s = binops.shape[1]
    flat = tuple(binops.ravel().tolist())
    autos = []
    for p in itertools.permutations(range(s)):
        p = np.array(p)
        other = tuple(_relabel_binops(binops, p).ravel().tolist())
        if other < flat:
            return None
        if other == flat:
            autos.append(p)
    return autos


def _sup_is_least(sup: np.ndarray, autos: list[np.ndarray]) -> bool:
    flat = tuple(sup.ravel().tolist())
    n1 = sup.ndim
    for p in autos:
        inv = np.argsort(p)
        other = p[sup[np.ix_(*([inv] * n1))]]
        if tuple(other.ravel().tolist()) < flat:
            return False
    return True


# --- public generators -------------------------------------------------------------


def enumerate_abstract(n: int, size: int, up_to_iso: bool = True, limit: int | None = None) -> Iterator[AlgebraTable]:
    """Every algebra of the given size passing the axioms and the representability checks.

    Order: lexicographic in the flat binop tables, then in the flat bracket
    table.  With ``up_to_iso`` only the representative with the least
    (binops, bracket) key in its isomorphism class is produced.
    """
    assoc = associative_tables(size)
    count = 0
    for combo in itertools.product(range(len(assoc)), repeat=n):
        binops = np.stack([assoc[c] for c in combo])
        autos = None
        if up_to_iso:
            autos = _binop_automorphisms(binops)
            if autos is None:
                continue
        search = _BracketSearch(binops)
        for sup in search.solutions():
            if up_to_iso and not _sup_is_least(sup, autos):
                continue
            alg = AlgebraTable(n, size, sup, binops)
            if not (check_axioms(alg).ok and check_representability(alg).ok):
                raise AssertionError(f"search produced an invalid algebra {alg.key()}")
            yield alg
            count += 1
            if limit is not None and count >= limit:
                return


def random_algebra(n: int, size: int, seed: int, max_tries: int = 1000, node_limit: int = 20000) -> AlgebraTable:
    """A representable algebra drawn by rejection sampling; same seed, same result."""
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        binops = np.stack([random_associative_table(size, rng) for _ in range(n)])
        search = _BracketSearch(binops, node_limit=node_limit)
        sup = next(search.solutions(lambda k: rng.permutation(size).tolist()), None)
        if sup is None:
            continue
        alg = AlgebraTable(n, size, sup, binops)
        if check_axioms(alg).ok and check_representability(alg).ok:
            return alg
    raise MengerError(f"no representable algebra found in {max_tries} tries")


def function_universe(m: int, n: int, partial: bool = False) -> FunctionSet:
    """All full (or all partial) n-place functions on {0..m-1}, in table order."""
    values = list(range(m)) + ([None] if partial else [])
    return FunctionSet(tuple(PartialFunctionTable(n, m, t) for t in itertools.product(values, repeat=m**n)))


class _ClosureOperator:
    def __init__(self, universe: FunctionSet):
        pool = FunctionPool(universe.m, universe.n, [f.array for f in universe])
        if len(pool) != len(universe):
            raise ValueError("universe has duplicate functions")
        self.sup, self.binops = pool.operation_tables()
        self.size = len(universe)

    def close(self, mask: np.ndarray) -> np.ndarray:
        mask = mask.copy()
        while True:
            idx = np.nonzero(mask)[0]
            hit = np.zeros_like(mask)
            hit[self.sup[np.ix_(idx, *([idx] * (self.sup.ndim - 1)))].ravel()] = True
            hit[self.binops[:, idx][:, :, idx].ravel()] = True
            if (hit <= mask).all():
                return mask
            mask |= hit


def enumerate_function_algebras(m: int, n: int, partial: bool = False, limit: int | None = None) -> Iterator[FunctionSet]:
    """Closed sets of functions on {0..m-1} that contain the projectors.

    Uses next-closure over the universe of all full (or partial) functions,
    so sets come out in lectic order of their universe indicator vectors.
    """
    universe = function_universe(m, n, partial)
    op = _ClosureOperator(universe)
    N = op.size
    base = np.zeros(N, dtype=bool)
    for p in projectors(m, n):
        base[universe.index(p)] = True
    A = op.close(base)
    count = 0
    while True:
        yield FunctionSet(tuple(universe[i] for i in np.nonzero(A)[0]))
        count += 1
        if limit is not None and count >= limit or A.all():
            return
        for i in range(N - 1, -1, -1):
            if A[i]:
                continue
            seed = A.copy()
            seed[i:] = False
            seed[i] = True
            B = op.close(seed | base)
            new = B & ~A
            if not new[:i].any():
                A = B
                break
