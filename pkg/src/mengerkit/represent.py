"""Representations of finite Menger (2,n)-semigroups by n-place functions."""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from ._engine import Evaluator, FunctionPool
from .algebra import (
    AlgebraTable,
    MuReachability,
    SelectorSet,
    check_representability,
    closure_cap,
    find_selectors,
    reachable_mu_states,
)
from .binrel import BinaryRelation
from .errors import ConstructionError, DimensionError, PreconditionError, UnionConflictError
from .nfun import (
    FunctionSet,
    PartialFunctionTable,
    all_tuples,
    complete_function,
    projectors,
    tuple_index,
)
from .report import Report


@dataclass(frozen=True)
class Representation:
    """Images P(g) of every element g of ``source``, all on the carrier {0..m-1}."""

    source: AlgebraTable
    m: int
    images: tuple[PartialFunctionTable, ...]
    kind: str
    verified: bool = False
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != self.source.size:
            raise DimensionError(f"{len(images)} images for {self.source.size} elements")
        for f in images:
            if f.n != self.source.n or f.m != self.m:
                raise DimensionError("image arity or carrier does not match")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return self.source.n

    def __getitem__(self, g: int) -> PartialFunctionTable:
        return self.images[g]

    def evaluator(self) -> Evaluator:
        return Evaluator(self.m, self.n, [f.array for f in self.images])


def verify_representation(alg: AlgebraTable, P: Representation) -> Report:
    """Exhaustively test P([x, y..]) = [P(x), P(y)..] and P(x o_i y) = P(x) o_i P(y).

    Counterexamples: (x, y_1..y_n) for the bracket, (i, x, y) for compositions.
    """
    n, s = alg.n, alg.size
    if P.source.size != s or P.n != n:
        raise DimensionError("representation does not match the algebra")
    ev = P.evaluator()
    rep = Report("representation")
    found = None
    for ys in itertools.product(range(s), repeat=n):
        got = ev.superpose(ys)
        want = ev.T[alg.sup[(slice(None), *ys)]]
        bad = np.nonzero((got != want).any(axis=1))[0]
        if len(bad):
            found = (int(bad[0]), *ys)
            break
    rep.add("bracket", found)
    found = None
    for i in range(1, n + 1):
        for y in range(s):
            got = ev.mann(y, i)
            want = ev.T[alg.binops[i - 1, :, y]]
            bad = np.nonzero((got != want).any(axis=1))[0]
            if len(bad):
                found = (i, int(bad[0]), y)
                break
        if found:
            break
    rep.add("composition", found)
    return rep


def verify_faithful(alg: AlgebraTable, P: Representation) -> bool:
    return len(set(P.images)) == alg.size


def _verified(alg: AlgebraTable, P: Representation, faithful: bool = False) -> Representation:
    report = verify_representation(alg, P)
    if not report.ok:
        raise ConstructionError(f"{P.kind} representation failed verification:\n{report}")
    if faithful and not verify_faithful(alg, P):
        raise ConstructionError(f"{P.kind} representation is not faithful")
    return replace(P, verified=True)


def embedding_rep(alg: AlgebraTable, functions: Sequence[PartialFunctionTable]) -> Representation:
    """The identity representation of an algebra built by ``algebra_from_functions``."""
    fs = tuple(functions)
    return _verified(alg, Representation(alg, fs[0].m, fs, "embedding"))


def rep_unitary(alg: AlgebraTable, sel: SelectorSet | None = None) -> Representation:
    """g -> lambda_g with lambda_g(x..) = [g, x..], full functions on G itself."""
    sel = sel if sel is not None else find_selectors(alg)
    if sel is None:
        raise PreconditionError("algebra has no selectors")
    s, n = alg.size, alg.n
    images = tuple(PartialFunctionTable(n, s, tuple(alg.sup[g].ravel().tolist())) for g in range(s))
    P = _verified(alg, Representation(alg, s, images, "unitary"), faithful=True)
    for i, e in enumerate(sel, start=1):
        if images[e] != PartialFunctionTable(n, s, tuple(a[i - 1] for a in all_tuples(s, n))):
            raise ConstructionError(f"selector e_{i} is not sent to the projector")
    return P


@dataclass(frozen=True)
class StarContext:
    """A finite stand-in for the extension of G by selectors e_1..e_n.

    ``table[x, t_1..t_n]`` is the bracket on star elements, -1 where it is not
    realized.  ``embed[g]`` is the star element standing for g in G and
    ``selectors[i-1]`` the one standing for e_i.  Two flavours exist:

    * formal: star = G followed by e_1..e_n; [g, t..] is known on G^n, at
      (e_1..e_n), and at the mu*-tuples of composition words;
    * concrete: star = a total unitary algebra of functions (see
      ``relations.decompose_rep``), with every bracket known.
    """

    base: AlgebraTable
    table: np.ndarray
    embed: tuple[int, ...]
    selectors: tuple[int, ...]
    reach: MuReachability
    kind: str

    @property
    def size(self) -> int:
        return self.table.shape[0]

    @property
    def n(self) -> int:
        return self.base.n

    def bracket(self, x: int, ys: Sequence[int]):
        v = int(self.table[(x, *ys)])
        return None if v < 0 else v

    def compose(self, x: int, i: int, y: int):
        ys = list(self.selectors)
        ys[i - 1] = y
        return self.bracket(x, ys)

    def word_points(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """(mu*-tuple, star images of g o w for each g) for every reachable state."""
        out = []
        for state, vec in self.reach.states.items():
            tup = tuple(
                self.selectors[i] if t is None else self.embed[t] for i, t in enumerate(state)
            )
            out.append((tup, tuple(self.embed[v] for v in vec)))
        return out

    def base_image(self) -> frozenset[int]:
        return frozenset(self.embed)


def formal_star(alg: AlgebraTable, reach: MuReachability | None = None) -> StarContext:
    """Star on G + {e_1..e_n}: base elements keep their index, e_i is size+i-1."""
    reach = reach if reach is not None else reachable_mu_states(alg)
    s, n = alg.size, alg.n
    N = s + n
    sel = tuple(range(s, N))
    table = np.full((N,) * (n + 1), -1, dtype=np.int64)
    table[(slice(0, s),) * (n + 1)] = alg.sup
    ar = np.arange(s)
    table[(ar, *sel)] = ar
    for state, vec in reach.states.items():
        tup = tuple(sel[i] if t is None else t for i, t in enumerate(state))
        vec = np.asarray(vec)
        cur = table[(ar, *tup)]
        if ((cur >= 0) & (cur != vec)).any():
            raise ConstructionError(f"word value disagrees with the bracket at {tup}")
        table[(ar, *tup)] = vec
    # selectors pick out their own coordinate
    for i, e in enumerate(sel):
        shape = [1] * n
        shape[i] = N
        table[e] = np.broadcast_to(np.arange(N).reshape(shape), (N,) * n)
    return StarContext(alg, table, tuple(range(s)), sel, reach, "formal")


def rep_general(alg: AlgebraTable) -> Representation:
    """Faithful representation of any representable algebra on G + {e_1..e_n}.

    lambda*_g is [g, x..] on G^n, g at (e_1..e_n), g o w at the mu*-tuple of
    every composition word w, and undefined elsewhere.
    """
    reach = reachable_mu_states(alg)
    report = check_representability(alg, reach)
    if not report.ok:
        raise PreconditionError("algebra is not representable", report)
    star = formal_star(alg, reach)
    N, n = star.size, alg.n
    images = tuple(
        PartialFunctionTable(n, N, tuple(None if v < 0 else v for v in star.table[g].ravel().tolist()))
        for g in range(alg.size)
    )
    P = Representation(alg, N, images, "general", meta={"star_size": N})
    return _verified(alg, P, faithful=True)


def completion_of_rep(P: Representation) -> Representation:
    """Replace every image by its completion on {0..m}, where m is the new sink value."""
    images = tuple(complete_function(f) for f in P.images)
    if len(set(images)) != len(set(P.images)):
        raise ConstructionError("completion merged distinct images")
    out = Representation(P.source, P.m + 1, images, "completed", meta={"sink": P.m})
    return _verified(P.source, out, faithful=verify_faithful(P.source, P))


@dataclass(frozen=True)
class ExtensionLevels:
    """Nested function sets F_0 <= F_1 <= ... <= F_k* = F_{k*+1}."""

    levels: tuple[FunctionSet, ...]
    projector_indices: tuple[int, ...]
    input_count: int

    @property
    def k_star(self) -> int:
        return len(self.levels) - 1

    @property
    def closure(self) -> FunctionSet:
        return self.levels[-1]

    def algebra(self) -> AlgebraTable:
        fs = self.closure
        pool = FunctionPool(fs.m, fs.n, [f.array for f in fs])
        sup, binops = pool.operation_tables()
        return AlgebraTable(fs.n, len(fs), sup, binops)


def unitary_extension(fs, from_completion: bool = False, cap: int | None = None) -> ExtensionLevels:
    """Levels F_k generated from full functions ``fs`` together with the projectors.

    F_0 is fs plus the projectors; F_{k+1} adds every bracket and composition
    of members of F_k.  ``from_completion`` asserts that no projector was
    among the inputs, which holds for completed images.
    """
    fs = fs if isinstance(fs, FunctionSet) else FunctionSet(tuple(fs))
    if not all(f.is_full for f in fs):
        raise PreconditionError("unitary extension needs full functions")
    projs = projectors(fs.m, fs.n)
    if from_completion and set(projs) & set(fs):
        raise ConstructionError("a completed image coincides with a projector")
    pool = FunctionPool(fs.m, fs.n, [f.array for f in fs], cap=closure_cap(cap))
    proj_idx = tuple(pool.add_rows(np.stack([p.array for p in projs])))
    sizes = pool.close()
    funcs = [PartialFunctionTable.from_array(r, fs.m, fs.n) for r in pool.T]
    levels = tuple(FunctionSet(tuple(funcs[:k])) for k in sizes)
    return ExtensionLevels(levels, proj_idx, len(fs))


def union_reps(Ps: Sequence[Representation]) -> Representation:
    """Graph-wise union; carriers {0..m_i-1} are read as subsets of {0..max m_i - 1}.

    Raises UnionConflictError when two members disagree at a point.  The
    result carries the verification report in ``meta``; it need not be a
    representation.
    """
    Ps = list(Ps)
    alg = Ps[0].source
    if any(P.source != alg for P in Ps):
        raise PreconditionError("union of representations of different algebras")
    n = alg.n
    M = max(P.m for P in Ps)
    images = []
    for g in range(alg.size):
        table: list = [None] * M**n
        for P in Ps:
            f = P.images[g]
            for k, v in enumerate(f.table):
                if v is None:
                    continue
                point = _unindex(k, P.m, n)
                j = tuple_index(point, M)
                if table[j] is not None and table[j] != v:
                    raise UnionConflictError(g, point, (table[j], v))
                table[j] = v
        images.append(PartialFunctionTable(n, M, tuple(table)))
    out = Representation(alg, M, tuple(images), "union")
    report = verify_representation(alg, out)
    return replace(out, verified=report.ok, meta={"report": report.to_dict()})


def _unindex(k: int, m: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        k, r = divmod(k, m)
        out.append(r)
    return tuple(reversed(out))


def sum_reps(Ps: Sequence[Representation]) -> Representation:
    """Disjoint union: member j is shifted onto the block starting at offsets[j]."""
    Ps = list(Ps)
    alg = Ps[0].source
    if any(P.source != alg for P in Ps):
        raise PreconditionError("sum of representations of different algebras")
    n = alg.n
    offsets = list(itertools.accumulate([0] + [P.m for P in Ps[:-1]]))
    M = sum(P.m for P in Ps)
    place = M ** np.arange(n - 1, -1, -1)
    rows = np.full((alg.size, M**n), M, dtype=np.int64)
    for P, off in zip(Ps, offsets):
        pts = np.array(list(all_tuples(P.m, n)), dtype=np.int64).reshape(-1, n)
        dest = (pts + off) @ place
        for g in range(alg.size):
            src = P.images[g].array
            rows[g, dest] = np.where(src == P.m, M, src + off)
    images = tuple(PartialFunctionTable.from_array(r, M, n) for r in rows)
    out = Representation(alg, M, images, "sum", meta={"offsets": offsets})
    return _verified(alg, out)


def zeta_of_rep(alg: AlgebraTable, P: Representation) -> BinaryRelation:
    """(g1, g2) is related iff P(g1) is a restriction of P(g2)."""
    T = np.stack([f.array for f in P.images])
    undef = T == P.m
    mat = (undef[:, None, :] | (T[:, None, :] == T[None, :, :])).all(axis=2)
    return BinaryRelation(mat)
