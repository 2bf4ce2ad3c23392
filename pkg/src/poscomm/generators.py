"""Seeded random inputs for the property harness and the demo scripts.

Every function takes an explicit :class:`random.Random`; nothing here
touches global state.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .exact_linalg import Matrix
from .pelczynski import BlockPartition, TruncatedBlockOperator


def random_rational(rng: random.Random, max_num: int = 9, max_den: int = 5) -> Fraction:
    """Strictly positive rational with small numerator and denominator."""
    return Fraction(rng.randint(1, max_num), rng.randint(1, max_den))


def random_permutation(rng: random.Random, n: int) -> list[int]:
    order = list(range(n))
    rng.shuffle(order)
    return order


def random_strictly_upper(rng: random.Random, n: int, density: float) -> Matrix:
    entries = {(i, j): random_rational(rng) for i in range(n) for j in range(i + 1, n)
               if rng.random() < density}
    return Matrix.from_entries(n, n, entries)


def random_nilpotent(rng: random.Random, n: int, density: float | None = None) -> Matrix:
    """Nonnegative nilpotent matrix: strictly upper-triangular, then permuted."""
    if density is None:
        density = rng.uniform(0.1, 0.9)
    return random_strictly_upper(rng, n, density).permuted(random_permutation(rng, n))


def random_non_nilpotent(rng: random.Random, n: int) -> Matrix:
    """Nonnegative matrix with a cycle in its support (diagonal entry or longer loop)."""
    m = random_strictly_upper(rng, n, rng.uniform(0.0, 0.6))
    entries = {(i, j): v for i, j, v in m.nonzeros()}
    if n == 1 or rng.random() < 0.3:
        k = rng.randrange(n)
        entries[(k, k)] = random_rational(rng)
    else:
        length = rng.randint(2, n)
        cyc = rng.sample(range(n), length)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            entries[(a, b)] = random_rational(rng)
    return Matrix.from_entries(n, n, entries).permuted(random_permutation(rng, n))


def random_k_super(rng: random.Random, n: int, k: int, density: float | None = None) -> Matrix:
    """Nonnegative matrix vanishing on the diagonal and the first k-1 superdiagonals."""
    if density is None:
        density = rng.uniform(0.2, 1.0)
    entries = {(i, j): random_rational(rng) for i in range(n) for j in range(i + k, n)
               if rng.random() < density}
    return Matrix.from_entries(n, n, entries)


def random_nonnegative(rng: random.Random, n: int, density: float) -> Matrix:
    entries = {(i, j): Fraction(rng.randint(1, 4))
               for i in range(n) for j in range(n) if rng.random() < density}
    return Matrix.from_entries(n, n, entries)


def random_block_operator(rng: random.Random, m: int, q: int, K: int, p,
                          support: int | None = None, density: float = 0.7
                          ) -> TruncatedBlockOperator:
    """Rational nonnegative block operator supported on block indices ``<= support``."""
    part = BlockPartition(m, q, K, p)
    support = K - 2 if support is None else support
    sizes = part.sizes
    blocks = {}
    for i in range(support + 1):
        for j in range(support + 1):
            if rng.random() < density:
                blocks[(i, j)] = Matrix.from_rows(
                    [[random_rational(rng) if rng.random() < 0.7 else 0 for _ in range(sizes[j])]
                     for _ in range(sizes[i])])
    return TruncatedBlockOperator(part, blocks)
