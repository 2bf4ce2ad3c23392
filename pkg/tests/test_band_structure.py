import random

import pytest
from hypothesis import given

from poscomm import generators as gen
from poscomm.band_structure import (
    BandDecomposition,
    absolute_kernel,
    band_decomposition,
    is_block_strictly_upper,
    kernel_chain,
    super_index,
    triangularizing_order,
)
from poscomm.errors import NegativeEntryError, NotNilpotentError
from poscomm.exact_linalg import Matrix, nilpotency_index

from strategies import nonnegative_nilpotent

E12 = Matrix.from_rows([[0, 1], [0, 0]])


def test_absolute_kernel_examples():
    assert absolute_kernel(E12) == {0}
    assert absolute_kernel(Matrix.zeros(3)) == {0, 1, 2}
    assert absolute_kernel(Matrix.from_entries(3, 3, {(0, 2): 1})) == {0, 1}


def test_absolute_kernel_rejects_negative():
    with pytest.raises(NegativeEntryError):
        absolute_kernel(Matrix.from_rows([[0, -1], [0, 0]]))


def test_band_decomposition_examples():
    assert band_decomposition(E12).parts == ((0,), (1,))
    assert band_decomposition(Matrix.zeros(3)).parts == ((0, 1, 2),)
    assert band_decomposition(Matrix.jordan(3)).parts == ((0,), (1,), (2,))


def test_band_decomposition_not_nilpotent():
    with pytest.raises(NotNilpotentError):
        band_decomposition(Matrix.from_rows([[0, 1], [1, 0]]))


def test_triangularizing_order_examples():
    lower = Matrix.from_rows([[0, 0, 0], [1, 0, 0], [1, 1, 0]])
    assert triangularizing_order(lower) == (2, 1, 0)
    assert triangularizing_order(Matrix.from_rows([[0, 0], [1, 0]])) == (1, 0)
    cyc = Matrix.from_entries(3, 3, {(0, 1): 1, (1, 2): 1, (1, 0): 1})
    with pytest.raises(NotNilpotentError):
        triangularizing_order(cyc)


def test_triangularizing_order_ties_ascending():
    assert triangularizing_order(Matrix.zeros(4)) == (0, 1, 2, 3)


def test_super_index_examples():
    c = Matrix.from_entries(4, 4, {(0, 3): 1})
    assert super_index(c, BandDecomposition.singletons(range(4))).max_k == 3
    assert super_index(Matrix.jordan(4), band_decomposition(Matrix.jordan(4))).max_k >= 1
    assert super_index(Matrix.diag([1, 0]), BandDecomposition.singletons(range(2))).max_k == 0


def test_decomposition_json_round_trip():
    dec = band_decomposition(Matrix.jordan(4))
    assert BandDecomposition.from_json(dec.to_json()) == dec


def test_decomposition_validation():
    with pytest.raises(ValueError):
        BandDecomposition.from_parts([[0], [0, 1]])
    with pytest.raises(ValueError):
        BandDecomposition.from_parts([[0], [], [1]])


@given(nonnegative_nilpotent(max_n=10))
def test_band_permutation_block_triangularizes(c):
    dec = band_decomposition(c)
    assert len(dec.parts) == nilpotency_index(c)
    assert is_block_strictly_upper(c, dec)
    assert super_index(c, dec).max_k >= 1


@given(nonnegative_nilpotent(max_n=10))
def test_kernel_chain_increases_then_stabilises(c):
    chain = kernel_chain(c)
    k = nilpotency_index(c)
    for a, b in zip(chain, chain[1:]):
        assert a < b
    assert len(chain) == k
    assert chain[-1] == frozenset(range(c.rows))
    assert frozenset(absolute_kernel(c.power(k + 1))) == chain[-1]


@given(nonnegative_nilpotent(max_n=10))
def test_triangularizing_order_gives_strict_upper(c):
    order = triangularizing_order(c)
    assert c.permuted(order).is_strictly_upper()


def test_order_exists_iff_nilpotent_on_sparse_15():
    rng = random.Random(15)
    seen = {True: 0, False: 0}
    for _ in range(200):
        c = gen.random_nonnegative(rng, 15, rng.uniform(0.01, 0.08))
        nil = nilpotency_index(c) is not None
        try:
            triangularizing_order(c)
            ordered = True
        except NotNilpotentError:
            ordered = False
        assert ordered == nil
        seen[nil] += 1
    assert seen[True] > 10 and seen[False] > 10
