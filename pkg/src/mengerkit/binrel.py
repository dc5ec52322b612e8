"""Binary relations on {0, ..., size-1} stored as boolean matrices."""

from __future__ import annotations

from collections.abc import Iterable

import numpy as np


class BinaryRelation:
    def __init__(self, matrix):
        mat = np.array(matrix, dtype=bool)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("relation matrix must be square")
        mat.flags.writeable = False
        self.matrix = mat

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> BinaryRelation:
        mat = np.zeros((size, size), dtype=bool)
        for x, y in pairs:
            mat[x, y] = True
        return cls(mat)

    @classmethod
    def identity(cls, size: int) -> BinaryRelation:
        return cls(np.eye(size, dtype=bool))

    @classmethod
    def full(cls, size: int) -> BinaryRelation:
        return cls(np.ones((size, size), dtype=bool))

    @classmethod
    def empty(cls, size: int) -> BinaryRelation:
        return cls(np.zeros((size, size), dtype=bool))

    @classmethod
    def from_partition(cls, size: int, blocks: Iterable[Iterable[int]]) -> BinaryRelation:
        mat = np.zeros((size, size), dtype=bool)
        for block in blocks:
            b = list(block)
            mat[np.ix_(b, b)] = True
        return cls(mat)

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool(self.matrix[x, y])

    def __eq__(self, other):
        return isinstance(other, BinaryRelation) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __or__(self, other):
        return BinaryRelation(self.matrix | other.matrix)

    def __and__(self, other):
        return BinaryRelation(self.matrix & other.matrix)

    def __repr__(self):
        return f"BinaryRelation(size={self.size}, pairs={self.pairs()})"

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(self.matrix)]

    def is_reflexive(self) -> bool:
        return bool(self.matrix.diagonal().all())

    def is_symmetric(self) -> bool:
        return bool((self.matrix == self.matrix.T).all())

    def is_transitive(self) -> bool:
        m = self.matrix.astype(np.int64)
        return bool(((m @ m > 0) <= self.matrix).all())

    def is_antisymmetric(self) -> bool:
        both = self.matrix & self.matrix.T
        return bool((both <= np.eye(self.size, dtype=bool)).all())

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def is_quasi_order(self) -> bool:
        return self.is_reflexive() and self.is_transitive()

    def is_order(self) -> bool:
        return self.is_quasi_order() and self.is_antisymmetric()

    def domain(self) -> frozenset[int]:
        return frozenset(int(x) for x in np.nonzero(self.matrix.any(axis=1))[0])

    def image(self, subset: Iterable[int]) -> frozenset[int]:
        sub = list(subset)
        if not sub:
            return frozenset()
        return frozenset(int(y) for y in np.nonzero(self.matrix[sub].any(axis=0))[0])

    def class_of(self, x: int) -> frozenset[int]:
        """{y : (x, y) in the relation}; the class of x for an equivalence-like relation."""
        return frozenset(int(y) for y in np.nonzero(self.matrix[x])[0])

    def classes(self) -> list[frozenset[int]]:
        """Distinct classes of domain elements, ordered by least member."""
        seen, out = set(), []
        for x in sorted(self.domain()):
            if x in seen:
                continue
            c = self.class_of(x)
            seen |= c
            out.append(c)
        return out

    def restrict(self, subset: Iterable[int]) -> BinaryRelation:
        keep = np.zeros(self.size, dtype=bool)
        keep[list(subset)] = True
        return BinaryRelation(self.matrix & keep[:, None] & keep[None, :])
