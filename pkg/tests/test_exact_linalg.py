import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from poscomm.errors import NegativeEntryError, ShapeError
from poscomm.exact_linalg import (
    Matrix,
    commutator,
    exact_root,
    exact_sqrt,
    matmul,
    nilpotency_index,
    norm_1,
    norm_inf,
    norms,
    operator_norm,
    parse_p,
    spectral_radius_bound,
)

from strategies import matrices, nonnegative_nilpotent, same_size_pair, small_fractions

E12 = Matrix.from_rows([[0, 1], [0, 0]])


def unit(n, i, j):
    return Matrix.from_entries(n, n, {(i, j): 1})


# -- matmul / commutator examples ------------------------------------------------


def test_identity_product():
    m = Matrix.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, Fraction(1, 3)]])
    assert Matrix.identity(3) @ m == m
    assert m @ Matrix.identity(3) == m


def test_nilpotent_square_is_zero():
    assert (E12 @ E12).is_zero()


def test_jordan_square():
    assert matmul(Matrix.jordan(3), Matrix.jordan(3)) == unit(3, 0, 2)


def test_matmul_shape_mismatch():
    with pytest.raises(ShapeError):
        Matrix.zeros(2, 3) @ Matrix.zeros(2, 3)


def test_matmul_kinds():
    f = Matrix.from_rows([[0.5, 0.0], [0.0, 1.0]])
    assert (f @ E12).kind == "float"
    assert (E12 @ E12).kind == "exact"


def test_self_commutator_vanishes():
    m = Matrix.from_rows([[1, 2], [3, 4]])
    assert commutator(m, m).is_zero()


def test_commutator_projection_example():
    assert commutator(Matrix.diag([1, 0]), E12) == E12


def test_commutator_diag_221():
    assert commutator(Matrix.diag([2, 2, 1]), unit(3, 0, 2)) == unit(3, 0, 2)


def test_commutator_needs_square():
    with pytest.raises(ShapeError):
        commutator(Matrix.zeros(2, 3), Matrix.zeros(2, 3))


# -- norms ---------------------------------------------------------------------


def test_norms_diagonal():
    r = norms(Matrix.diag([3, -4]))
    assert r.norm_1 == 4 and r.norm_inf == 4


def test_norms_single_entry():
    for p in (1, 1.5, 2, 3, math.inf):
        r = norms(E12, p)
        assert r.norm_1 == r.norm_inf == 1
        assert r.norm_p_upper == pytest.approx(1.0)


def test_parse_p():
    assert parse_p("inf") == math.inf
    assert parse_p("2") == 2 and isinstance(parse_p(2.0), int)
    assert parse_p("3/2") == 1.5
    with pytest.raises(ValueError):
        parse_p(0.5)


def test_norm_2_estimate_on_random_nonnegative():
    rng = np.random.default_rng(5)
    for _ in range(20):
        x = rng.integers(0, 5, size=(5, 5))
        m = Matrix.from_rows(x.tolist())
        r = norms(m, 2)
        assert r.norm_2_estimate <= r.norm_p_upper + 1e-8
        assert r.norm_2_estimate == pytest.approx(np.linalg.norm(x, 2), rel=1e-6)


@given(matrices(max_n=12, elements=small_fractions))
def test_norm_2_estimate_below_interpolation_bound(m):
    r = norms(m, 2)
    assert r.norm_2_estimate <= r.norm_p_upper + 1e-8


def test_norm_2_estimate_large():
    rng = np.random.default_rng(50)
    x = rng.random((50, 50)) * (rng.random((50, 50)) < 0.2)
    m = Matrix.from_rows(x.tolist())
    r = norms(m, 2)
    assert r.norm_2_estimate <= r.norm_p_upper + 1e-8


@given(matrices(max_n=6))
def test_operator_norm_exact_endpoints(m):
    x = np.array(m.data, dtype=float)
    assert float(operator_norm(m, 1)) == pytest.approx(np.abs(x).sum(axis=0).max())
    assert float(operator_norm(m, "inf")) == pytest.approx(np.abs(x).sum(axis=1).max())
    assert operator_norm(m, 2) == pytest.approx(np.linalg.norm(x, 2), abs=1e-12)


def test_float_norm_sum_is_order_independent():
    vals = [0.1, 1e16, 0.3, -1e16, 0.2]
    row = Matrix.from_rows([vals])
    col = Matrix.from_rows([[v] for v in reversed(vals)])
    assert norm_inf(row) == norm_1(col) == math.fsum(abs(v) for v in vals)


# -- nilpotency ------------------------------------------------------------------


def test_nilpotency_examples():
    assert nilpotency_index(Matrix.jordan(4)) == 4
    assert nilpotency_index(Matrix.zeros(3)) == 1
    assert nilpotency_index(Matrix.from_rows([[1, 0], [0, 0]])) is None


def test_nilpotency_signed_cancellation():
    # [[1, 1], [-1, -1]] squares to zero although its support graph has loops
    assert nilpotency_index(Matrix.from_rows([[1, 1], [-1, -1]])) == 2


@given(matrices(max_n=5, elements=st.builds(Fraction, st.integers(-2, 2))))
def test_nilpotency_index_definition(m):
    k = nilpotency_index(m)
    if k is None:
        assert not m.power(m.rows).is_zero()
    else:
        assert m.power(k).is_zero()
        assert k == 1 or not m.power(k - 1).is_zero()


@given(nonnegative_nilpotent(max_n=9))
def test_nonnegative_nilpotent_index(m):
    k = nilpotency_index(m)
    assert k is not None and m.power(k).is_zero()
    assert k == 1 or not m.power(k - 1).is_zero()


# -- commutator invariants -------------------------------------------------------


@given(same_size_pair())
def test_commutator_antisymmetric_and_traceless(pair):
    a, b = pair
    assert commutator(a, b) == -commutator(b, a)
    assert commutator(a, b).trace() == 0


# -- spectral radius -------------------------------------------------------------


def test_spectral_radius_examples():
    assert spectral_radius_bound(Matrix.diag([5, 2])) == 5
    assert spectral_radius_bound(Matrix.jordan(3)) == 1
    assert spectral_radius_bound(Matrix.from_rows([[0, 4], [1, 0]])) == 4


def test_spectral_radius_rejects_negative():
    with pytest.raises(NegativeEntryError):
        spectral_radius_bound(Matrix.from_rows([[0, -1], [0, 0]]))


def test_spectral_radius_dominates_eigenvalues():
    rng = np.random.default_rng(10)
    for _ in range(30):
        x = rng.integers(0, 6, size=(10, 10)) * (rng.random((10, 10)) < 0.4)
        bound = spectral_radius_bound(Matrix.from_rows(x.tolist()))
        # power iteration on a nonnegative matrix approaches the Perron root from the ones vector
        v = np.ones(10)
        for _ in range(500):
            w = x @ v
            if not w.any():
                break
            v = w / np.linalg.norm(w)
        rho = float(np.linalg.norm(x @ v)) if w.any() else 0.0
        assert rho <= float(bound) + 1e-9
        assert max(abs(np.linalg.eigvals(x))) <= float(bound) + 1e-9


# -- exact roots, JSON, csv -----------------------------------------------------


def test_exact_roots():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(2)) is None
    assert exact_root(8, 3) == 2 and exact_root(5, 2) is None
    assert exact_root(7, 1) == 7 and exact_root(4, math.inf) is None


def test_json_round_trip():
    m = Matrix.from_rows([[Fraction(1, 3), 0], [2, Fraction(-5, 7)]])
    obj = m.to_json()
    assert obj["data"][0][0] == "1/3"
    assert Matrix.from_json(obj) == m
    f = m.astype("float")
    assert Matrix.from_json(f.to_json()) == f


def test_json_rejects_floats_in_exact_kind():
    with pytest.raises(ValueError):
        Matrix.from_json({"kind": "exact", "rows": 1, "cols": 1, "data": [[0.5]]})


def test_json_rejects_wrong_shape():
    with pytest.raises(ValueError):
        Matrix.from_json({"kind": "exact", "rows": 2, "cols": 1, "data": [["1"]]})


def test_csv_is_float():
    m = Matrix.from_csv("0,1\n0,0\n")
    assert m.kind == "float" and m[0, 1] == 1.0


@given(matrices(max_n=6), st.permutations(range(6)))
def test_permute_round_trip(m, perm):
    order = [i for i in perm if i < m.rows]
    assert m.permuted(order).unpermuted(order) == m
