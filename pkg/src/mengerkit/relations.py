"""Regular relations, determining pairs, simplest representations and ordered algebras."""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from ._engine import FunctionPool
from .algebra import (
    AlgebraTable,
    algebra_from_functions,
    check_representability,
    closure_cap,
    reachable_mu_states,
)
from .binrel import BinaryRelation
from .errors import ConstructionError, PreconditionError
from .nfun import FunctionSet, PartialFunctionTable, complete_function, is_included, projectors
from .report import Check, Report
from .represent import (
    Representation,
    StarContext,
    formal_star,
    sum_reps,
    union_reps,
    verify_faithful,
    verify_representation,
    zeta_of_rep,
)

# --- regularity ----------------------------------------------------------------


@dataclass(frozen=True)
class RegularityReport:
    v_regular: Check
    l_regular: Check
    stable: Check

    @property
    def ok(self) -> bool:
        return self.v_regular.passed and self.l_regular.passed and self.stable.passed

    def to_dict(self) -> dict:
        return {c.name: c.to_dict() for c in (self.v_regular, self.l_regular, self.stable)}


def _pair_tuples(pairs: np.ndarray, n: int):
    """Left and right coordinate grids over all n-tuples of related pairs."""
    k = len(pairs)
    combo = np.array(list(itertools.product(range(k), repeat=n)), dtype=np.int64).reshape(-1, n)
    return pairs[combo, 0], pairs[combo, 1]


def relation_properties(alg: AlgebraTable, rho: BinaryRelation) -> RegularityReport:
    """Exhaustive test of v-regularity, l-regularity and stability.

    Counterexamples: v-regular (g, x.., y..) for the bracket or (i, g, x, y);
    l-regular (x, y, z..) or (i, x, y, z); stable (x, y, x.., y..) or
    (i, x1, y1, x2, y2).
    """
    n, s, S, R = alg.n, alg.size, alg.sup, rho.matrix
    pairs = np.array(rho.pairs(), dtype=np.int64).reshape(-1, 2)
    X, Y = _pair_tuples(pairs, n)
    xs, ys = pairs[:, 0], pairs[:, 1]

    def first_bad(mask):
        bad = np.argwhere(mask)
        return None if len(bad) == 0 else tuple(int(v) for v in bad[0])

    # v-regular
    cex = None
    for g in range(s):
        if cex is not None or len(X) == 0:
            break
        bad = first_bad(~R[S[(g, *X.T)], S[(g, *Y.T)]])
        if bad is not None:
            cex = (g, *X[bad[0]].tolist(), *Y[bad[0]].tolist())
    for i in range(n):
        if cex is not None or len(pairs) == 0:
            break
        B = alg.binops[i]
        bad = first_bad(~R[B[:, xs], B[:, ys]])
        if bad is not None:
            g, k = bad
            cex = (i + 1, g, int(xs[k]), int(ys[k]))
    v_reg = Check("v_regular", cex is None, cex)

    # l-regular
    cex = None
    zs = np.array(list(itertools.product(range(s), repeat=n)), dtype=np.int64).reshape(-1, n)
    if len(pairs):
        lhs = S[(xs[:, None], *(zs[None, :, j] for j in range(n)))]
        rhs = S[(ys[:, None], *(zs[None, :, j] for j in range(n)))]
        bad = first_bad(~R[lhs, rhs])
        if bad is not None:
            k, zk = bad
            cex = (int(xs[k]), int(ys[k]), *zs[zk].tolist())
        for i in range(n):
            if cex is not None:
                break
            B = alg.binops[i]
            bad = first_bad(~R[B[xs], B[ys]])
            if bad is not None:
                k, z = bad
                cex = (i + 1, int(xs[k]), int(ys[k]), z)
    l_reg = Check("l_regular", cex is None, cex)

    # stable
    cex = None
    if len(pairs):
        for k in range(len(pairs)):
            x, y = pairs[k]
            bad = first_bad(~R[S[(x, *X.T)], S[(y, *Y.T)]])
            if bad is not None:
                cex = (int(x), int(y), *X[bad[0]].tolist(), *Y[bad[0]].tolist())
                break
        for i in range(n):
            if cex is not None:
                break
            B = alg.binops[i]
            bad = first_bad(~R[B[np.ix_(xs, xs)], B[np.ix_(ys, ys)]])
            if bad is not None:
                a, b = bad
                cex = (i + 1, int(xs[a]), int(ys[a]), int(xs[b]), int(ys[b]))
    stable = Check("stable", cex is None, cex)
    return RegularityReport(v_reg, l_reg, stable)


def is_l_ideal(alg: AlgebraTable, W: Iterable[int]) -> Check:
    """W absorbs every bracket slot and the right argument of every composition.

    Counterexample: (i, g, w.., x) with x in W at slot i, or (i, g, x).
    """
    W = sorted(set(W))
    if not W:
        return Check("l_ideal", True, None, "empty")
    n, s = alg.n, alg.size
    inW = np.zeros(s, dtype=bool)
    inW[W] = True
    Wa = np.array(W)
    for i in range(n):
        sub = np.take(alg.sup, Wa, axis=i + 1)
        bad = np.argwhere(~inW[sub])
        if len(bad):
            idx = bad[0].tolist()
            idx[i + 1] = W[idx[i + 1]]
            return Check("l_ideal", False, (i + 1, *idx))
    for i in range(n):
        bad = np.argwhere(~inW[alg.binops[i][:, Wa]])
        if len(bad):
            g, k = bad[0]
            return Check("l_ideal", False, (i + 1, int(g), W[k]))
    return Check("l_ideal", True, None)


# --- polynomial orbits -------------------------------------------------------------


def one_step_maps(alg: AlgebraTable) -> np.ndarray:
    """Row k is the unary map u -> t_k(u) of the k-th one-step polynomial.

    Rows cover u -> [g, w.., u at slot i, .., w] and u -> g o_i u.
    """
    n, s = alg.n, alg.size
    rows = [np.moveaxis(alg.sup, i + 1, -1).reshape(-1, s) for i in range(n)]
    rows += [alg.binops[i] for i in range(n)]
    return np.unique(np.vstack(rows), axis=0)


def polynomial_orbit(alg: AlgebraTable, x: int, maps: np.ndarray | None = None) -> frozenset[int]:
    """{t(x) : t a polynomial}, by breadth-first closure."""
    maps = one_step_maps(alg) if maps is None else maps
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = set(np.unique(maps[:, frontier]).tolist()) - seen
        seen |= nxt
        frontier = sorted(nxt)
    return frozenset(seen)


def pair_orbit(alg: AlgebraTable, x: int, y: int, maps: np.ndarray | None = None) -> frozenset[tuple[int, int]]:
    """{(t(x), t(y)) : t a polynomial}."""
    maps = one_step_maps(alg) if maps is None else maps
    seen = {(x, y)}
    queue = deque([(x, y)])
    while queue:
        u, v = queue.popleft()
        for p in zip(maps[:, u].tolist(), maps[:, v].tolist()):
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return frozenset(seen)


def eh_wh(alg: AlgebraTable, H: Iterable[int]) -> tuple[BinaryRelation, frozenset[int]]:
    """The relation "no polynomial separates x and y with respect to H" and the
    set of elements no polynomial sends into H.

    E_H is the coarsest partition refining membership in H that every
    one-step map respects (partition refinement); W_H is the complement of
    the set backward-reachable from H.
    """
    s = alg.size
    maps = one_step_maps(alg)
    inH = np.zeros(s, dtype=bool)
    inH[list(H)] = True
    block = inH.astype(np.int64)
    while True:
        sig = np.vstack([block[None, :], block[maps]]).T
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.ravel()
        if len(np.unique(new)) == len(np.unique(block)):
            break
        block = new
    E = BinaryRelation(block[:, None] == block[None, :])
    hits = inH.copy()
    while True:
        more = hits | hits[maps].any(axis=0)
        if (more == hits).all():
            break
        hits = more
    W = frozenset(int(x) for x in np.nonzero(~hits)[0])
    return E, W


# --- determining pairs -----------------------------------------------------------------


@dataclass(frozen=True)
class DeterminingPair:
    star: StarContext
    E: BinaryRelation
    W: frozenset[int]

    def class_of(self, x: int) -> frozenset[int]:
        return self.E.class_of(x)


def _image(star: StarContext, g: int, classes: Sequence[Iterable[int]]) -> np.ndarray:
    """Defined values of [g, x_1..x_n] over x_i in classes[i]."""
    vals = star.table[g][np.ix_(*[sorted(c) for c in classes])].ravel()
    return np.unique(vals[vals >= 0])


def _first_outside(star: StarContext, g: int, classes, target: frozenset[int]):
    cls = [sorted(c) for c in classes]
    vals = star.table[g][np.ix_(*cls)]
    for idx in np.argwhere(vals >= 0):
        v = int(vals[tuple(idx)])
        if v not in target:
            return tuple(cls[i][j] for i, j in enumerate(idx))
    return None


def verify_determining_pair(alg: AlgebraTable, pair: DeterminingPair) -> Report:
    """The determining-pair conditions, each with a counterexample.

    * ``symmetric_transitive``: cex (x, y) with (x, y) in E but (y, x) not, or a broken chain
    * ``covers_generators``: cex = a base element or selector outside dom E
    * ``selectors_outside_w``: cex = selector in W
    * ``selector_tuple_image``: cex (g, x..)
    * ``word_tuple_image``: cex (g, mu*-tuple.., x..)
    * ``v_regular_on_image``: multipliers are the base elements; cex
      (g, x..) for the bracket or (i, g, x, y) for a composition
    * ``w_class_ideal``: cex = element of W breaking the class, or the
      l-ideal counterexample
    """
    star, E, W = pair.star, pair.E, pair.W
    n = star.n
    rep = Report("determining_pair")
    M = E.matrix
    cex = None
    if not E.is_symmetric():
        x, y = np.argwhere(M != M.T)[0]
        cex = (int(x), int(y))
    elif not E.is_transitive():
        m2 = (M.astype(np.int64) @ M.astype(np.int64)) > 0
        x, y = np.argwhere(m2 & ~M)[0]
        cex = (int(x), int(y))
    rep.add("symmetric_transitive", cex)
    dom = E.domain()
    gens = list(dict.fromkeys(list(star.embed) + list(star.selectors)))
    missing = [x for x in gens if x not in dom]
    rep.add("covers_generators", missing[0] if missing else None)
    inside = [e for e in star.selectors if e in W]
    rep.add("selectors_outside_w", inside[0] if inside else None)
    if missing or not rep["symmetric_transitive"].passed:
        for name in ("selector_tuple_image", "word_tuple_image", "v_regular_on_image", "w_class_ideal"):
            rep.add(name, None, "skipped: E is not usable")
        return rep

    sel_classes = [E.class_of(e) for e in star.selectors]
    cex = None
    for g in range(alg.size):
        bad = _first_outside(star, star.embed[g], sel_classes, E.class_of(star.embed[g]))
        if bad is not None:
            cex = (g, *bad)
            break
    rep.add("selector_tuple_image", cex)

    cex = None
    for tup, vec in star.word_points():
        classes = [E.class_of(t) for t in tup]
        for g in range(alg.size):
            bad = _first_outside(star, star.embed[g], classes, E.class_of(vec[g]))
            if bad is not None:
                cex = (g, *tup, *bad)
                break
        if cex:
            break
    rep.add("word_tuple_image", cex)
    rep.add("v_regular_on_image", _v_regular_on_image(alg, pair))

    cex = None
    if W:
        w0 = min(W)
        if not W <= dom or E.class_of(w0) != W:
            cex = ("class", w0)
        else:
            base_w = [g for g in range(alg.size) if star.embed[g] in W]
            ideal = is_l_ideal(alg, base_w)
            if not ideal.passed:
                cex = ("l_ideal", *ideal.counterexample)
    rep.add("w_class_ideal", cex)
    return rep


def _v_regular_on_image(alg: AlgebraTable, pair: DeterminingPair):
    """v-regularity of E restricted to the E-image of the base, multipliers from the base.

    For a symmetric transitive relation this means: every bracket over a
    tuple of restricted classes, and every composition with one restricted
    class, lands (where defined) inside a single restricted class.
    """
    star, E = pair.star, pair.E
    image = E.image(star.embed)
    classes = [c for c in E.classes() if c & image]
    where = np.full(star.size, -1, dtype=np.int64)
    for k, c in enumerate(classes):
        where[sorted(c)] = k
    n = star.n
    for g in sorted(set(star.embed)):
        for combo in itertools.product(classes, repeat=n):
            vals = _image(star, g, combo)
            if len(vals) and (len(np.unique(where[vals])) > 1 or (where[vals] < 0).any()):
                return (g, *(min(c) for c in combo))
        for i in range(1, n + 1):
            for c in classes:
                vals = np.array([star.compose(g, i, y) for y in sorted(c)], dtype=object)
                vals = np.array([v for v in vals if v is not None], dtype=np.int64)
                if len(vals) and (len(np.unique(where[vals])) > 1 or (where[vals] < 0).any()):
                    return (i, g, min(c))
    return None


# --- simplest representations ------------------------------------------------------------


@dataclass(frozen=True)
class ClassIndexing:
    """Classes H_a with their labels a, in label order."""

    classes: tuple[frozenset[int], ...]
    labels: tuple[int, ...]

    def label_of(self, x: int):
        for c, a in zip(self.classes, self.labels):
            if x in c:
                return a
        return None

    def class_for(self, a: int) -> frozenset[int]:
        return self.classes[self.labels.index(a)]


def class_indexing(pair: DeterminingPair, label_of: Sequence[int] | None = None) -> ClassIndexing:
    """Classes other than W that meet the base or the selectors.

    Labels default to 0, 1, ... in order of least member; ``label_of`` maps
    each star element to the label of its class instead.
    """
    star, E, W = pair.star, pair.E, pair.W
    gens = set(star.embed) | set(star.selectors)
    classes = [c for c in E.classes() if c != W and c & gens]
    if label_of is None:
        return ClassIndexing(tuple(classes), tuple(range(len(classes))))
    labels = []
    for c in classes:
        vals = {int(label_of[x]) for x in c}
        if len(vals) != 1:
            raise ConstructionError(f"class {sorted(c)} carries several labels {sorted(vals)}")
        labels.append(vals.pop())
    if len(set(labels)) != len(labels):
        raise ConstructionError("two classes share a label")
    order = sorted(range(len(classes)), key=lambda k: labels[k])
    return ClassIndexing(tuple(classes[k] for k in order), tuple(labels[k] for k in order))


def tuple_set(alg: AlgebraTable, pair: DeterminingPair, index: ClassIndexing) -> frozenset[tuple[int, ...]]:
    """Label tuples of: base element tuples, the selector tuple, and every mu*-tuple."""
    star = pair.star
    out = set()

    def add(elems):
        labels = tuple(index.label_of(x) for x in elems)
        if None not in labels:
            out.add(labels)

    for gs in itertools.product(range(alg.size), repeat=alg.n):
        add([star.embed[g] for g in gs])
    add(star.selectors)
    for tup, _ in star.word_points():
        add(tup)
    return frozenset(out)


def simplest_rep(
    alg: AlgebraTable,
    pair: DeterminingPair,
    label_of: Sequence[int] | None = None,
    carrier: int | None = None,
) -> Representation:
    """P(g)(a..) = b iff a.. is an admissible label tuple and [g, H_a1, .., H_an] lies in H_b.

    Brackets are taken elementwise over class members; undefined members of
    a finite star contribute nothing, and an empty image leaves P(g)
    undefined there.  The domain rule, the remark that H_b meets the base,
    and the homomorphism equations are all asserted.
    """
    report = verify_determining_pair(alg, pair)
    if not report.ok:
        raise PreconditionError("not a determining pair", report)
    star, W = pair.star, pair.W
    index = class_indexing(pair, label_of)
    tuples = tuple_set(alg, pair, index)
    size = carrier if carrier is not None else len(index.classes)
    if index.labels and max(index.labels) >= size:
        raise ConstructionError("label outside the carrier")
    n = alg.n
    base = set(star.embed)
    tables = []
    for g in range(alg.size):
        table: list = [None] * size**n
        for labels in sorted(tuples):
            vals = _image(star, star.embed[g], [index.class_for(a) for a in labels])
            vals_set = set(vals.tolist())
            value = None
            for c, b in zip(index.classes, index.labels):
                if vals_set and vals_set <= c:
                    value = b
                    break
            if (value is not None) != (bool(vals_set) and not vals_set & W):
                raise ConstructionError(f"domain rule fails for element {g} at {labels}")
            if value is not None and not index.class_for(value) & base:
                raise ConstructionError(f"value class of {g} at {labels} misses the base")
            idx = 0
            for a in labels:
                idx = idx * size + a
            table[idx] = value
        tables.append(table)
    images = tuple(PartialFunctionTable(n, size, tuple(t)) for t in tables)
    meta = {
        "classes": [sorted(c) for c in index.classes],
        "labels": list(index.labels),
        "tuples": sorted(tuples),
        "W": sorted(W),
    }
    P = Representation(alg, size, images, "simplest", meta=meta)
    check = verify_representation(alg, P)
    if not check.ok:
        raise ConstructionError(f"simplest representation is not a homomorphism:\n{check}")
    return Representation(alg, size, images, "simplest", verified=True, meta=meta)


# --- decomposition into simplest representations ------------------------------------------


@dataclass(frozen=True)
class DecompositionPart:
    point: tuple[int, ...]
    pair: DeterminingPair
    report: Report
    rep: Representation


@dataclass(frozen=True)
class Decomposition:
    star: StarContext
    parts: tuple[DecompositionPart, ...]
    union: Representation
    union_matches: bool


def concrete_star(alg: AlgebraTable, P: Representation, cap: int | None = None):
    """Closure of the completed images and the projectors on {0..m}.

    Returns the star context and the pool of star functions (rows over
    {0..m}^n, m being the extra value).
    """
    n, m = alg.n, P.m
    rows = [complete_function(f).array for f in P.images]
    pool = FunctionPool(m + 1, n, [], cap=closure_cap(cap))
    embed = tuple(pool.add_rows(np.stack(rows)))
    sel = tuple(pool.add_rows(np.stack([p.array for p in projectors(m + 1, n)])))
    pool.close()
    sup, _ = pool.operation_tables()
    reach = reachable_mu_states(alg)
    return StarContext(alg, sup, embed, sel, reach, "concrete"), pool


def decompose_rep(alg: AlgebraTable, P: Representation, cap: int | None = None) -> Decomposition:
    """Split P into the simplest representations given by the values at each point.

    For a point a.. of {0..m-1}^n, star elements are grouped by their value
    there; E keeps the groups meeting the base or the selectors, and W is the
    part of dom E taking the extra value.  Simplest representations are
    labelled by those values, so they live on the carrier of P.
    """
    check = verify_representation(alg, P)
    if not check.ok:
        raise PreconditionError("input is not a representation", check)
    n, m = alg.n, P.m
    star, pool = concrete_star(alg, P, cap)
    gens = sorted(set(star.embed) | set(star.selectors))
    parts = []
    for point in itertools.product(range(m), repeat=n):
        idx = 0
        for a in point:
            idx = idx * (m + 1) + a
        vals = pool.T[:, idx]
        keep = np.isin(vals, vals[gens])
        E = BinaryRelation((vals[:, None] == vals[None, :]) & keep[:, None] & keep[None, :])
        W = frozenset(int(x) for x in np.nonzero(keep & (vals == m))[0])
        pair = DeterminingPair(star, E, W)
        report = verify_determining_pair(alg, pair)
        if not report.ok:
            raise ConstructionError(f"point {point} gives no determining pair:\n{report}")
        rep = simplest_rep(alg, pair, label_of=vals, carrier=m)
        parts.append(DecompositionPart(point, pair, report, rep))
    union = union_reps([p.rep for p in parts])
    return Decomposition(star, tuple(parts), union, union.images == P.images)


# --- inclusion of simplest images ---------------------------------------------------------


def check_image_inclusion(alg: AlgebraTable, pair: DeterminingPair, g1: int, g2: int) -> bool:
    """Whether g1, g2 agree, modulo E, wherever g1's value avoids W.

    Tested at the base tuples, the selector tuple, and every composition
    word; for a determining pair this matches inclusion of simplest images.
    """
    star, E, W = pair.star, pair.E.matrix, pair.W
    e1, e2 = star.embed[g1], star.embed[g2]
    points = [tuple(star.embed[x] for x in xs) for xs in itertools.product(range(alg.size), repeat=alg.n)]
    points.append(tuple(star.selectors))
    for xs in points:
        u, v = star.bracket(e1, xs), star.bracket(e2, xs)
        if u is not None and u not in W and (v is None or not E[u, v]):
            return False
    for vec in star.reach.states.values():
        u, v = star.embed[vec[g1]], star.embed[vec[g2]]
        if u not in W and not E[u, v]:
            return False
    return True


# --- ordered algebras ----------------------------------------------------------------------


def check_orbit_condition(alg: AlgebraTable, zeta: BinaryRelation) -> Check:
    """For (g1, g2) in zeta and any g with some t1(g1) above g: every t2 with
    t2(g2) above g also has t2(g1) above g.

    Counterexample: (g, g1, g2, t2(g2), t2(g1)).
    """
    maps = one_step_maps(alg)
    Z = zeta.matrix
    orbits = [polynomial_orbit(alg, x, maps) for x in range(alg.size)]
    for g1, g2 in zeta.pairs():
        porb = sorted(pair_orbit(alg, g2, g1, maps))
        for g in range(alg.size):
            if not any(Z[g, x] for x in orbits[g1]):
                continue
            for v2, v1 in porb:
                if Z[g, v2] and not Z[g, v1]:
                    return Check("orbit_condition", False, (g, g1, g2, v2, v1))
    return Check("orbit_condition", True, None)


def inclusion_order(fs) -> BinaryRelation:
    fs = list(fs)
    return BinaryRelation([[is_included(f, g) for g in fs] for f in fs])


@dataclass(frozen=True)
class OrderedAlgebra:
    alg: AlgebraTable
    zeta: BinaryRelation

    def __post_init__(self):
        if self.zeta.size != self.alg.size:
            raise ValueError("order size does not match the algebra")


def order_represent(oalg: OrderedAlgebra) -> Representation:
    """Faithful representation whose inclusion order is the given order.

    Sum over g of the simplest representations of (E_H plus selector loops,
    W_H) with H the up-set of g.
    """
    alg, zeta = oalg.alg, oalg.zeta
    reach = reachable_mu_states(alg)
    rep = check_representability(alg, reach)
    if not rep.ok:
        raise PreconditionError("algebra is not representable", rep)
    if not zeta.is_reflexive():
        raise PreconditionError("order is not reflexive")
    if not zeta.is_transitive():
        raise PreconditionError("order is not transitive")
    if not zeta.is_antisymmetric():
        raise PreconditionError("order is not antisymmetric")
    props = relation_properties(alg, zeta)
    if not props.stable.passed:
        raise PreconditionError(f"order is not stable: {props.stable.counterexample}")
    orbit = check_orbit_condition(alg, zeta)
    if not orbit.passed:
        raise PreconditionError(f"orbit condition fails: {orbit.counterexample}")
    star = formal_star(alg, reach)
    s, N = alg.size, star.size
    parts = []
    for g in range(s):
        E_H, W_H = eh_wh(alg, zeta.class_of(g))
        mat = np.zeros((N, N), dtype=bool)
        mat[:s, :s] = E_H.matrix
        for e in star.selectors:
            mat[e, e] = True
        pair = DeterminingPair(star, BinaryRelation(mat), W_H)
        parts.append(simplest_rep(alg, pair))
    P = sum_reps(parts)
    if not verify_faithful(alg, P):
        raise ConstructionError("ordered representation is not faithful")
    if zeta_of_rep(alg, P) != zeta:
        raise ConstructionError("inclusion order of the representation differs from the given order")
    return P


def ordered_from_functions(fs, cap: int | None = None) -> tuple[OrderedAlgebra, FunctionSet]:
    alg, images = algebra_from_functions(fs, cap)
    return OrderedAlgebra(alg, inclusion_order(images)), images
