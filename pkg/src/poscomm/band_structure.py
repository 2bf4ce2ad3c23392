"""Absolute kernels, band decompositions and triangularizing orders.

In R^n with the coordinatewise order the bands are exactly the coordinate
subspaces, so a band is an index set and a band projection is a 0/1
diagonal matrix.  For a nonnegative matrix the absolute kernel is the span
of its zero columns.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Sequence

from .errors import NotNilpotentError, PreconditionError
from .exact_linalg import Matrix, boolean_product, require_square_nonnegative, support_masks


@dataclass(frozen=True)
class BandDecomposition:
    parts: tuple[tuple[int, ...], ...]
    permutation: tuple[int, ...]
    source: str = "C"

    def __post_init__(self):
        flat = [i for part in self.parts for i in part]
        if tuple(flat) != tuple(self.permutation):
            raise ValueError("permutation must list the parts in sequence")
        if sorted(flat) != list(range(len(flat))):
            raise ValueError("parts must be disjoint and cover 0..n-1")
        if any(not part for part in self.parts[:-1]):
            raise ValueError("interior parts must be nonempty")

    @classmethod
    def from_parts(cls, parts: Sequence[Sequence[int]], source="C") -> "BandDecomposition":
        parts = tuple(tuple(p) for p in parts)
        return cls(parts, tuple(i for p in parts for i in p), source)

    @classmethod
    def singletons(cls, order: Sequence[int], source="C") -> "BandDecomposition":
        return cls.from_parts([(i,) for i in order], source)

    @property
    def dim(self):
        return len(self.permutation)

    def part_of(self) -> list[int]:
        """Map coordinate -> index of the part containing it."""
        where = [0] * self.dim
        for b, part in enumerate(self.parts):
            for i in part:
                where[i] = b
        return where

    def to_json(self) -> dict:
        return {"parts": [list(p) for p in self.parts], "permutation": list(self.permutation)}

    @classmethod
    def from_json(cls, obj: dict, source="C") -> "BandDecomposition":
        dec = cls.from_parts(obj["parts"], source)
        if "permutation" in obj and list(obj["permutation"]) != list(dec.permutation):
            raise ValueError("permutation does not match parts")
        return dec


@dataclass(frozen=True)
class SuperTriangularReport:
    order: tuple[int, ...]
    max_k: int
    block_sizes: tuple[int, ...] = field(default=())


def _zero_columns(masks: list[int], n: int) -> frozenset:
    used = 0
    for m in masks:
        used |= m
    return frozenset(j for j in range(n) if not (used >> j) & 1)


def absolute_kernel(c: Matrix) -> frozenset:
    """Indices of the zero columns of a nonnegative square matrix."""
    require_square_nonnegative(c)
    return _zero_columns(support_masks(c), c.rows)


def kernel_chain(c: Matrix) -> list[frozenset]:
    """Absolute kernels of ``C, C^2, ...`` up to the first that is everything.

    Stops after ``n`` powers; a chain that never reaches the full index set
    means ``C`` is not nilpotent.
    """
    require_square_nonnegative(c)
    n = c.rows
    base = support_masks(c)
    cur = base
    chain = []
    for _ in range(n):
        ker = _zero_columns(cur, n)
        chain.append(ker)
        if len(ker) == n:
            break
        cur = boolean_product(cur, base)
    return chain


def band_decomposition(c: Matrix, source="C") -> BandDecomposition:
    """Parts ``N(C^i) minus N(C^(i-1))``; their count is the nilpotency index."""
    require_square_nonnegative(c, source)
    n = c.rows
    chain = kernel_chain(c)
    if not chain or len(chain[-1]) != n:
        if n == 0:
            return BandDecomposition((), (), source)
        raise NotNilpotentError(source)
    parts = []
    prev: frozenset = frozenset()
    for ker in chain:
        parts.append(tuple(sorted(ker - prev)))
        prev = ker
    return BandDecomposition.from_parts(parts, source)


def triangularizing_order(c: Matrix) -> tuple[int, ...]:
    """Topological order of ``i -> j`` (``c_ij > 0``), smallest index first on ties.

    Conjugating ``C`` by the result gives a strictly upper-triangular matrix.
    """
    require_square_nonnegative(c)
    n = c.rows
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for i, j, _ in c.nonzeros():
        succ[i].append(j)
        indeg[j] += 1
    heap = [i for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(heap, j)
    if len(order) != n:
        raise NotNilpotentError("C", "support digraph has a cycle")
    return tuple(order)


def super_index(c: Matrix, decomposition: BandDecomposition) -> SuperTriangularReport:
    """Largest ``k`` with ``C_ij = 0`` (blockwise) whenever ``j - i < k``.

    The zero matrix gets ``k = n``, matching the convention that it is
    n-super upper-triangular.
    """
    if decomposition.dim != c.rows or not c.is_square():
        raise PreconditionError("decomposition does not match the matrix dimension")
    where = decomposition.part_of()
    gaps = [where[j] - where[i] for i, j, _ in c.nonzeros()]
    max_k = c.rows if not gaps else max(0, min(gaps))
    return SuperTriangularReport(
        decomposition.permutation, max_k, tuple(len(p) for p in decomposition.parts))


def is_block_strictly_upper(c: Matrix, decomposition: BandDecomposition) -> bool:
    return super_index(c, decomposition).max_k >= 1
