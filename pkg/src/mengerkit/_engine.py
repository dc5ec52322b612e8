"""Vectorized evaluation of superposition and Mann composition over many functions.

Functions are rows of an int array of length m**n, with ``m`` marking an
undefined entry.  Each row is also kept in an extended form of length
(m+1)**n in which every argument tuple containing ``m`` maps to ``m``; looking
up an extended row at indices built from inner results then propagates
undefinedness without branching.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import ClosureCapError

_rng = np.random.default_rng(0x5EED)
_WEIGHTS: dict[int, np.ndarray] = {}
_FLUSH = 20000


def _weights(length: int) -> np.ndarray:
    w = _WEIGHTS.get(length)
    if w is None:
        w = _rng.integers(1, 2**63 - 1, size=length, dtype=np.uint64) | np.uint64(1)
        _WEIGHTS[length] = w
    return w


def row_keys(rows: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return (rows.astype(np.uint64) * _weights(rows.shape[-1])).sum(axis=-1)


class Evaluator:
    """Fixed list of function rows with vectorized bracket and composition."""

    def __init__(self, m: int, n: int, rows=()):
        self.m, self.n = m, n
        self.length = m**n
        base = m + 1
        coords = np.array(list(itertools.product(range(m), repeat=n)), dtype=np.int64)
        coords = coords.reshape(self.length, n)
        self._place = base ** np.arange(n - 1, -1, -1, dtype=np.int64)
        # extended index of each plain tuple, and of each tuple with slot i blanked
        self._lift = coords @ self._place
        self._blank = [self._lift - coords[:, i] * self._place[i] for i in range(n)]
        ext_coords = np.array(list(itertools.product(range(base), repeat=n)), dtype=np.int64)
        ext_coords = ext_coords.reshape(base**n, n)
        self._ext_plain = np.all(ext_coords < m, axis=1)
        self._ext_src = (ext_coords[self._ext_plain] * (m ** np.arange(n - 1, -1, -1))).sum(axis=1)
        rows = np.asarray(list(rows), dtype=np.int64).reshape(-1, self.length)
        self.T = rows
        self.E = self._extend(rows)

    def __len__(self):
        return self.T.shape[0]

    def _extend(self, rows: np.ndarray) -> np.ndarray:
        ext = np.full((rows.shape[0], (self.m + 1) ** self.n), self.m, dtype=np.int64)
        ext[:, self._ext_plain] = rows[:, self._ext_src]
        return ext

    def superpose_rows(self, inner: np.ndarray, f_rows=None) -> np.ndarray:
        """[f, g_1..g_n] for every pool f (or the given f rows), with inner rows g_i."""
        idx = inner.T @ self._place if inner.ndim == 2 else inner
        E = self.E if f_rows is None else self.E[f_rows]
        return E[:, idx]

    def superpose(self, gs, f_rows=None) -> np.ndarray:
        return self.superpose_rows(self.T[list(gs)], f_rows)

    def superpose_last(self, prefix, lasts, f_rows=None) -> np.ndarray:
        """[f, g_1..g_{n-1}, h] for fixed prefix g and every h in ``lasts``; rows f-major."""
        lasts = np.asarray(lasts, dtype=np.int64)
        base = np.zeros(self.length, dtype=np.int64)
        for j, g in enumerate(prefix):
            base = base + self.T[g] * self._place[j]
        idx = base[None, :] + self.T[lasts] * self._place[self.n - 1]
        E = self.E if f_rows is None else self.E[f_rows]
        return E[:, idx].reshape(-1, self.length)

    def mann_row(self, g_row: np.ndarray, i: int, f_rows=None) -> np.ndarray:
        """f o_i g for every pool f; i is 1-based."""
        idx = self._blank[i - 1] + g_row * self._place[i - 1]
        E = self.E if f_rows is None else self.E[f_rows]
        return E[:, idx]

    def mann(self, g: int, i: int, f_rows=None) -> np.ndarray:
        return self.mann_row(self.T[g], i, f_rows)


class FunctionPool(Evaluator):
    """Append-only pool of distinct functions."""

    def __init__(self, m: int, n: int, rows=(), cap: int | None = None):
        super().__init__(m, n)
        self.cap = cap
        self._index: dict[int, int] = {}
        self._sorted = None
        self.add_rows(np.asarray(list(rows), dtype=np.int64).reshape(-1, self.length))

    def add_rows(self, rows: np.ndarray) -> list[int]:
        """Append rows not yet present; return the pool index of every input row."""
        if rows.shape[0] == 0:
            return []
        keys, first, inverse = np.unique(row_keys(rows), return_index=True, return_inverse=True)
        inverse = inverse.ravel()
        if not np.array_equal(rows, rows[first[inverse]]):
            raise RuntimeError("row hash collision")
        get = self._index.get
        idx = np.fromiter((get(k, -1) for k in keys.tolist()), dtype=np.int64, count=len(keys))
        hit = idx >= 0
        if hit.any() and not np.array_equal(self.T[idx[hit]], rows[first[hit]]):
            raise RuntimeError("row hash collision")
        # fresh rows keep their order of first appearance
        fresh = np.nonzero(~hit)[0]
        fresh = fresh[np.argsort(first[fresh], kind="stable")]
        start = len(self)
        for off, k in enumerate(fresh.tolist()):
            idx[k] = start + off
            self._index[int(keys[k])] = start + off
        if len(fresh):
            self._sorted = None
            new = rows[first[fresh]]
            self.T = np.vstack([self.T, new])
            self.E = np.vstack([self.E, self._extend(new)])
            if self.cap is not None and len(self) > self.cap:
                raise ClosureCapError(self.cap)
        return idx[inverse].tolist()

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        """Pool index of every row; -1 where absent."""
        keys = row_keys(rows)
        if self._sorted is None:
            known = np.fromiter(self._index.keys(), dtype=np.uint64, count=len(self._index))
            where = np.fromiter(self._index.values(), dtype=np.int64, count=len(self._index))
            order = np.argsort(known)
            self._sorted = (known[order], where[order])
        known, where = self._sorted
        if len(known) == 0:
            return np.full(len(keys), -1, dtype=np.int64)
        pos = np.searchsorted(known, keys).clip(max=len(known) - 1)
        hit = known[pos] == keys
        idx = np.where(hit, where[pos], -1)
        if hit.any() and not np.array_equal(self.T[idx[hit]], rows[hit]):
            raise RuntimeError("row hash collision")
        return idx

    def close(self) -> list[int]:
        """Close the pool under all operations.

        Each round applies every operation to the snapshot taken at its start,
        so the pool sizes after each round are the nested levels of the
        closure.  Returns those sizes (first entry: the starting size).
        """
        levels = [len(self)]
        prev = 0
        while True:
            cur = len(self)
            if cur == prev:
                break
            new_f = np.arange(prev, cur)
            batches, pending = [], 0

            def push(rows):
                nonlocal pending
                batches.append(rows)
                pending += len(rows)
                if pending >= _FLUSH:
                    self.add_rows(np.vstack(batches))
                    batches.clear()
                    pending = 0

            # rows appended mid-round sit past ``cur`` and wait for the next round
            for pre in itertools.product(range(cur), repeat=self.n - 1):
                if pre and max(pre) >= prev:
                    push(self.superpose_last(pre, np.arange(cur), slice(0, cur)))
                    continue
                if prev:
                    push(self.superpose_last(pre, np.arange(prev), new_f))
                push(self.superpose_last(pre, np.arange(prev, cur), slice(0, cur)))
            for i in range(1, self.n + 1):
                for g in range(cur):
                    push(self.mann(g, i, new_f if g < prev else slice(0, cur)))
            if batches:
                self.add_rows(np.vstack(batches))
            prev = cur
            levels.append(len(self))
        levels.pop()
        return levels

    def operation_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Abstract (super, binops) tables over the pool; the pool must be closed."""
        N, n = len(self), self.n
        sup = np.empty((N,) * (n + 1), dtype=np.int64)
        for pre in itertools.product(range(N), repeat=n - 1):
            idx = self.lookup(self.superpose_last(pre, np.arange(N)))
            if (idx < 0).any():
                raise ValueError("pool is not closed under superposition")
            sup[(slice(None), *pre)] = idx.reshape(N, N)
        binops = np.empty((n, N, N), dtype=np.int64)
        for i in range(1, n + 1):
            for g in range(N):
                idx = self.lookup(self.mann(g, i))
                if (idx < 0).any():
                    raise ValueError("pool is not closed under composition")
                binops[i - 1, :, g] = idx
        return sup, binops
