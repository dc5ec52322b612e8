"""Partial n-place functions on a finite carrier {0, ..., m-1}.

A function is stored as a flat table of length m**n.  The entry for the
argument tuple (a_1, ..., a_n) sits at index sum(a_k * m**(n-k)), i.e. row-major
with a_1 most significant.  Undefined entries hold ``None``.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError

UNDEF = None


def tuple_index(args: Sequence[int], m: int) -> int:
    idx = 0
    for a in args:
        idx = idx * m + a
    return idx


def index_tuple(idx: int, m: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for k in range(n - 1, -1, -1):
        idx, out[k] = divmod(idx, m)
    return tuple(out)


def all_tuples(m: int, n: int) -> Iterator[tuple[int, ...]]:
    """Every n-tuple over range(m), in table index order."""
    return itertools.product(range(m), repeat=n)


@dataclass(frozen=True)
class PartialFunctionTable:
    n: int
    m: int
    table: tuple

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError(f"arity must be positive, got {self.n}")
        if self.m < 1:
            raise DimensionError(f"carrier size must be positive, got {self.m}")
        table = tuple(None if v is None else int(v) for v in self.table)
        if len(table) != self.m**self.n:
            raise DimensionError(
                f"table length {len(table)} != {self.m}**{self.n}"
            )
        for v in table:
            if v is not None and not 0 <= v < self.m:
                raise DimensionError(f"table entry {v} outside carrier of size {self.m}")
        object.__setattr__(self, "table", table)

    @classmethod
    def from_string(cls, text: str, m: int, n: int) -> PartialFunctionTable:
        """Parse a compact table such as ``"1---"``; ``-`` marks an undefined entry."""
        return cls(n, m, tuple(None if ch == "-" else int(ch) for ch in text))

    @classmethod
    def from_callable(cls, fn, m: int, n: int) -> PartialFunctionTable:
        return cls(n, m, tuple(fn(*args) for args in all_tuples(m, n)))

    @classmethod
    def from_array(cls, arr, m: int, n: int) -> PartialFunctionTable:
        """Build from an integer array that uses ``m`` as the undefined sentinel."""
        return cls(n, m, tuple(None if v == m else int(v) for v in arr))

    def __str__(self):
        if self.m <= 10:
            return "".join("-" if v is None else str(v) for v in self.table)
        return " ".join("-" if v is None else str(v) for v in self.table)

    def __call__(self, *args: int):
        return self.table[tuple_index(args, self.m)]

    @property
    def is_full(self) -> bool:
        return all(v is not None for v in self.table)

    @property
    def domain(self) -> frozenset[tuple[int, ...]]:
        return frozenset(
            index_tuple(i, self.m, self.n)
            for i, v in enumerate(self.table)
            if v is not None
        )

    @cached_property
    def array(self) -> np.ndarray:
        """Table as an int array with ``m`` standing in for undefined."""
        arr = np.array([self.m if v is None else v for v in self.table], dtype=np.int64)
        arr.flags.writeable = False
        return arr


def _check_same(fs: Iterable[PartialFunctionTable]) -> tuple[int, int]:
    fs = list(fs)
    n, m = fs[0].n, fs[0].m
    for f in fs[1:]:
        if f.n != n or f.m != m:
            raise DimensionError(
                f"mismatched functions: (n={n}, m={m}) vs (n={f.n}, m={f.m})"
            )
    return n, m


def _check_slot(i: int, n: int):
    if not 1 <= i <= n:
        raise DimensionError(f"slot index {i} outside 1..{n}")


def superpose(f: PartialFunctionTable, gs: Sequence[PartialFunctionTable]) -> PartialFunctionTable:
    """[f, g_1, ..., g_n](a) = f(g_1(a), ..., g_n(a)); undefined if any step is."""
    if len(gs) != f.n:
        raise DimensionError(f"superposition needs {f.n} inner functions, got {len(gs)}")
    n, m = _check_same([f, *gs])
    out = []
    for k in range(m**n):
        inner = [g.table[k] for g in gs]
        if None in inner:
            out.append(None)
        else:
            out.append(f.table[tuple_index(inner, m)])
    return PartialFunctionTable(n, m, tuple(out))


def mann_compose(f: PartialFunctionTable, g: PartialFunctionTable, i: int) -> PartialFunctionTable:
    """(f o_i g)(a) = f(a_1, ..., a_{i-1}, g(a), a_{i+1}, ..., a_n)."""
    n, m = _check_same([f, g])
    _check_slot(i, n)
    out = []
    for k, args in enumerate(all_tuples(m, n)):
        v = g.table[k]
        if v is None:
            out.append(None)
            continue
        args = list(args)
        args[i - 1] = v
        out.append(f.table[tuple_index(args, m)])
    return PartialFunctionTable(n, m, tuple(out))


def projector(m: int, n: int, i: int) -> PartialFunctionTable:
    _check_slot(i, n)
    return PartialFunctionTable(n, m, tuple(a[i - 1] for a in all_tuples(m, n)))


def projectors(m: int, n: int) -> tuple[PartialFunctionTable, ...]:
    return tuple(projector(m, n, i) for i in range(1, n + 1))


def constant(m: int, n: int, c: int) -> PartialFunctionTable:
    return PartialFunctionTable(n, m, (c,) * m**n)


def nowhere_defined(m: int, n: int) -> PartialFunctionTable:
    return PartialFunctionTable(n, m, (None,) * m**n)


def is_included(f: PartialFunctionTable, g: PartialFunctionTable) -> bool:
    """True when f is a restriction of g."""
    _check_same([f, g])
    return all(a is None or a == b for a, b in zip(f.table, g.table))


def restrict_to(f: PartialFunctionTable, points: Iterable[Sequence[int]]) -> PartialFunctionTable:
    keep = {tuple_index(p, f.m) for p in points}
    return PartialFunctionTable(
        f.n, f.m, tuple(v if k in keep else None for k, v in enumerate(f.table))
    )


def complete_function(f: PartialFunctionTable) -> PartialFunctionTable:
    """Full function on {0..m}: agrees with f on its domain, sends everything else to m."""
    m, n = f.m, f.n
    c = m
    out = []
    for args in all_tuples(m + 1, n):
        if c in args:
            out.append(c)
        else:
            v = f.table[tuple_index(args, m)]
            out.append(c if v is None else v)
    return PartialFunctionTable(n, m + 1, tuple(out))


@dataclass(frozen=True)
class FunctionSet(Sequence):
    """An ordered collection of distinct partial functions sharing arity and carrier."""

    functions: tuple[PartialFunctionTable, ...]
    n: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        fs = tuple(self.functions)
        if not fs:
            raise DimensionError("a function set needs at least one function")
        n, m = _check_same(fs)
        if len(set(fs)) != len(fs):
            raise DimensionError("duplicate functions in function set")
        object.__setattr__(self, "functions", fs)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)

    def __getitem__(self, i):
        return self.functions[i]

    def __len__(self):
        return len(self.functions)

    def index(self, f, *args) -> int:
        return self.functions.index(f, *args)
