"""Finite Menger (2,n)-semigroups given by operation tables.

An algebra on G = {0, ..., size-1} carries one total (n+1)-ary operation
``[x, y_1, ..., y_n]`` (the *bracket*) and n total binary operations
``x o_i y``.  Slot indices ``i`` are 1-based throughout the public API.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ._engine import FunctionPool
from .errors import DimensionError
from .nfun import FunctionSet, PartialFunctionTable
from .report import Report

DEFAULT_CAP = 512

EMPTY = None  # marks an empty slot of a MuState


def closure_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("MENGERKIT_CAP")
    return int(env) if env else DEFAULT_CAP


class AlgebraTable:
    """Operation tables of a finite algebra (G, [ ], o_1, ..., o_n)."""

    def __init__(self, n: int, size: int, sup, binops):
        if n < 1:
            raise DimensionError(f"arity must be positive, got {n}")
        if size < 1:
            raise DimensionError("an algebra needs at least one element")
        sup = np.array(sup, dtype=np.int64)
        binops = np.array(binops, dtype=np.int64)
        if sup.size != size ** (n + 1):
            raise DimensionError(f"bracket table has {sup.size} entries, expected {size ** (n + 1)}")
        if binops.size != n * size * size:
            raise DimensionError(f"binary tables have {binops.size} entries, expected {n * size * size}")
        sup = sup.reshape((size,) * (n + 1))
        binops = binops.reshape(n, size, size)
        for t in (sup, binops):
            if t.size and (t.min() < 0 or t.max() >= size):
                raise DimensionError("table entry outside the carrier")
            t.flags.writeable = False
        self.n = n
        self.size = size
        self.sup = sup
        self.binops = binops

    def bracket(self, x: int, ys: Sequence[int]) -> int:
        return int(self.sup[(x, *ys)])

    def compose(self, x: int, i: int, y: int) -> int:
        return int(self.binops[i - 1, x, y])

    @property
    def elements(self) -> range:
        return range(self.size)

    def key(self) -> tuple:
        return (self.n, self.size, *self.binops.ravel().tolist(), *self.sup.ravel().tolist())

    def __eq__(self, other):
        return isinstance(other, AlgebraTable) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"AlgebraTable(n={self.n}, size={self.size})"

    def relabel(self, perm: Sequence[int]) -> AlgebraTable:
        """Isomorphic copy in which element x is renamed perm[x]."""
        p = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(p)
        sup = p[self.sup[np.ix_(*([inv] * (self.n + 1)))]]
        binops = p[self.binops[:, inv][:, :, inv]]
        return AlgebraTable(self.n, self.size, sup, binops)

    def canonical(self) -> AlgebraTable:
        """Least relabelling under the ordering by ``key()`` (naive, for small sizes)."""
        best = None
        for perm in itertools.permutations(range(self.size)):
            cand = self.relabel(perm)
            if best is None or cand.key() < best.key():
                best = cand
        return best

    @classmethod
    def trivial(cls, n: int) -> AlgebraTable:
        return cls(n, 1, [0], [0] * n)


def _grid(size: int, k: int, offset: int = 0, total: int | None = None) -> list[np.ndarray]:
    total = k + offset if total is None else total
    out = []
    for j in range(offset, offset + k):
        shape = [1] * total
        shape[j] = size
        out.append(np.arange(size).reshape(shape))
    return out


def _first(mask: np.ndarray):
    bad = np.argwhere(mask)
    if len(bad) == 0:
        return None
    return tuple(int(v) for v in bad[0])


def check_axioms(alg: AlgebraTable) -> Report:
    """Associativity of every o_i and superassociativity of the bracket.

    Counterexamples are (x, y, z) for associativity and
    (x, y_1..y_n, z_1..z_n) for superassociativity.
    """
    n, s = alg.n, alg.size
    rep = Report("axioms")
    x, y, z = _grid(s, 3)
    for i in range(n):
        B = alg.binops[i]
        rep.add(f"associative_{i + 1}", _first(B[B[x, y], z] != B[x, B[y, z]]))
    S = alg.sup
    ys = _grid(s, n, 1, 2 * n + 1)
    zs = _grid(s, n, n + 1, 2 * n + 1)
    found = None
    for x0 in range(s):
        xv = np.full([1] * (2 * n + 1), x0)
        lhs = S[(S[(xv, *ys)], *zs)]
        rhs = S[(xv, *(S[(yj, *zs)] for yj in ys))]
        cx = _first(lhs != rhs)
        if cx is not None:
            found = (x0, *cx[1:])
            break
    rep.add("superassociative", found)
    return rep


@dataclass(frozen=True)
class SelectorSet:
    e: tuple[int, ...]

    def __iter__(self):
        return iter(self.e)

    def __getitem__(self, i):
        return self.e[i]

    def __len__(self):
        return len(self.e)


def _selector_ok(alg: AlgebraTable, e: Sequence[int]) -> bool:
    n, s, S = alg.n, alg.size, alg.sup
    ar = np.arange(s)
    if not np.array_equal(S[(ar, *e)], ar):
        return False
    coords = _grid(s, n)
    for i in range(n):
        if not np.all(S[e[i]] == coords[i]):
            return False
    for i in range(n):
        idx = [np.full(1, v)[:, None] for v in e]
        idx[i] = ar[None, :]
        if not np.array_equal(S[(ar[:, None], *idx)], alg.binops[i]):
            return False
    return True


def find_selectors(alg: AlgebraTable) -> SelectorSet | None:
    """The selector tuple (e_1..e_n) of a unitary algebra, or None.

    Raises RuntimeError if two different tuples pass, which cannot happen
    in a well-formed table.
    """
    s = alg.size
    fixes = np.all(alg.sup == np.arange(s).reshape((s,) + (1,) * alg.n), axis=0)
    found = []
    for e in np.argwhere(fixes):
        e = tuple(int(v) for v in e)
        if _selector_ok(alg, e):
            found.append(e)
    if len(found) > 1:
        raise RuntimeError(f"inconsistent algebra: several selector tuples {found}")
    return SelectorSet(found[0]) if found else None


# --- composition words ------------------------------------------------------

Word = tuple  # of (slot, element) pairs, slot 1-based


def _check_word(alg: AlgebraTable, word):
    for j, y in word:
        if not 1 <= j <= alg.n:
            raise DimensionError(f"slot {j} outside 1..{alg.n}")
        if not 0 <= y < alg.size:
            raise DimensionError(f"element {y} outside the carrier")


def mu_step(alg: AlgebraTable, state: tuple, j: int, y: int) -> tuple:
    """State after appending o_j y to a word whose mu-values are ``state``."""
    B = alg.binops[j - 1]
    out = list(state)
    for i, t in enumerate(state):
        if t is EMPTY:
            if i == j - 1:
                out[i] = y
        else:
            out[i] = int(B[t, y])
    return tuple(out)


def mu_state(alg: AlgebraTable, word) -> tuple:
    _check_word(alg, word)
    state = (EMPTY,) * alg.n
    for j, y in word:
        state = mu_step(alg, state, j, y)
    return state


def mu(alg: AlgebraTable, word, i: int):
    """Suffix of the word starting at the first occurrence of slot i, or None."""
    if not 1 <= i <= alg.n:
        raise DimensionError(f"slot {i} outside 1..{alg.n}")
    return mu_state(alg, word)[i - 1]


def mu_star(alg: AlgebraTable, word, i: int, selectors: Sequence[int] | None = None) -> int:
    """Like ``mu`` but an empty slot yields the i-th selector.

    With ``selectors`` given (a unitary algebra) the selector element is
    returned; otherwise the formal selector is numbered ``alg.size + i - 1``.
    """
    v = mu(alg, word, i)
    if v is not EMPTY:
        return v
    return selectors[i - 1] if selectors is not None else alg.size + i - 1


def eval_word(alg: AlgebraTable, g: int, word) -> int:
    """Left fold g o_{i1} y_1 ... o_{is} y_s."""
    _check_word(alg, word)
    for j, y in word:
        g = int(alg.binops[j - 1, g, y])
    return g


def render_state(state: tuple, size: int) -> tuple[int, ...]:
    """MuState with the empty slot i written as the formal selector ``size + i - 1``."""
    return tuple(size + i if t is EMPTY else t for i, t in enumerate(state))


@dataclass
class MuReachability:
    """Every MuState reachable from the empty word, with the value vector g -> g o w."""

    n: int
    size: int
    states: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    collisions: list = field(default_factory=list)

    def full_states(self):
        """States with no empty slot, i.e. words mentioning every slot."""
        return [s for s in self.states if EMPTY not in s]

    def rendered(self):
        """(rendered state, value vector) pairs in discovery order."""
        return [(render_state(s, self.size), v) for s, v in self.states.items()]


def reachable_mu_states(alg: AlgebraTable) -> MuReachability:
    """Breadth-first closure of the mu-state transition over all steps (j, y).

    A state reached along two words with different value vectors is a
    collision; the first one found is recorded and not expanded further.
    """
    n, s = alg.n, alg.size
    start = (EMPTY,) * n
    reach = MuReachability(n, s)
    reach.states[start] = tuple(range(s))
    reach.witness[start] = ()
    queue = deque([start])
    while queue:
        state = queue.popleft()
        vec = np.asarray(reach.states[state])
        word = reach.witness[state]
        for j in range(1, n + 1):
            B = alg.binops[j - 1]
            for y in range(s):
                nxt = mu_step(alg, state, j, y)
                nvec = tuple(B[vec, y].tolist())
                known = reach.states.get(nxt)
                if known is None:
                    reach.states[nxt] = nvec
                    reach.witness[nxt] = word + ((j, y),)
                    queue.append(nxt)
                elif known != nvec and not reach.collisions:
                    reach.collisions.append((nxt, reach.witness[nxt], word + ((j, y),)))
    return reach


def check_representability(alg: AlgebraTable, reach: MuReachability | None = None) -> Report:
    """The identities and the implication characterizing algebras of partial functions.

    Checks, each with its first counterexample:

    * ``bracket_of_composition``: [x o_i y, z..] = [x, z_1..[y, z..]..z_n], cex (i, x, y, z..)
    * ``composition_of_bracket``: [x, y..] o_i z = [x, y_1 o_i z, ...], cex (i, x, y.., z)
    * ``word_as_bracket``: x o w = [x, mu_1(w)..mu_n(w)] for words covering every slot,
      cex (x, *state)
    * ``word_determined_by_mu``: words with equal mu-values act equally, cex
      (state, word_a, word_b)
    """
    n, s = alg.n, alg.size
    S = alg.sup
    rep = Report("representability")
    x, y = _grid(s, 2, 0, n + 2)
    zs = _grid(s, n, 2, n + 2)
    found = None
    for i in range(n):
        B = alg.binops[i]
        lhs = S[(B[x, y], *zs)]
        inner = list(zs)
        inner[i] = S[(y, *zs)]
        rhs = S[(x, *inner)]
        cx = _first(lhs != rhs)
        if cx is not None:
            found = (i + 1, *cx)
            break
    rep.add("bracket_of_composition", found)

    xg = _grid(s, 1, 0, n + 2)[0]
    ys = _grid(s, n, 1, n + 2)
    z = _grid(s, 1, n + 1, n + 2)[0]
    found = None
    for i in range(n):
        B = alg.binops[i]
        lhs = B[S[(xg, *ys)], z]
        rhs = S[(xg, *(B[yj, z] for yj in ys))]
        cx = _first(lhs != rhs)
        if cx is not None:
            found = (i + 1, *cx)
            break
    rep.add("composition_of_bracket", found)

    reach = reach if reach is not None else reachable_mu_states(alg)
    found = None
    ar = np.arange(s)
    for state in reach.full_states():
        vec = np.asarray(reach.states[state])
        bad = np.nonzero(vec != S[(ar, *state)])[0]
        if len(bad):
            found = (int(bad[0]), *state)
            break
    rep.add("word_as_bracket", found)
    rep.add("word_determined_by_mu", reach.collisions[0] if reach.collisions else None)
    return rep


def algebra_from_functions(fs, cap: int | None = None) -> tuple[AlgebraTable, FunctionSet]:
    """Close a set of partial functions under all operations.

    Returns the abstract algebra and the function represented by each element.
    Input functions come first (in input order), closure products after, in
    discovery order.  Raises ClosureCapError past ``cap`` elements.
    """
    fs = fs if isinstance(fs, FunctionSet) else FunctionSet(tuple(fs))
    pool = FunctionPool(fs.m, fs.n, [f.array for f in fs], cap=closure_cap(cap))
    pool.close()
    sup, binops = pool.operation_tables()
    alg = AlgebraTable(fs.n, len(pool), sup, binops)
    images = FunctionSet(tuple(PartialFunctionTable.from_array(r, fs.m, fs.n) for r in pool.T))
    return alg, images


def check_embedding(small: AlgebraTable, big: AlgebraTable, embed: Sequence[int]) -> Report:
    """Whether x -> embed[x] is an injective homomorphism of ``small`` into ``big``.

    Counterexamples: (x, y) for injectivity, (x, y..) for the bracket,
    (i, x, y) for compositions.
    """
    if small.n != big.n or len(embed) != small.size:
        raise DimensionError("embedding does not match the algebras")
    e = np.asarray(embed, dtype=np.int64)
    rep = Report("embedding")
    dup = None
    seen: dict[int, int] = {}
    for x, v in enumerate(e.tolist()):
        if v in seen:
            dup = (seen[v], x)
            break
        seen[v] = x
    rep.add("injective", dup)
    grid = np.ix_(*([np.arange(small.size)] * (small.n + 1)))
    lhs = e[small.sup[grid]]
    rhs = big.sup[np.ix_(*([e] * (small.n + 1)))]
    rep.add("bracket", _first(lhs != rhs))
    found = None
    for i in range(small.n):
        cx = _first(e[small.binops[i]] != big.binops[i][np.ix_(e, e)])
        if cx is not None:
            found = (i + 1, *cx)
            break
    rep.add("composition", found)
    return rep
