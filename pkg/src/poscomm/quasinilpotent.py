"""Diagonal-times-compact factorizations and weighted-shift obstructions.

For a nonnegative ``C`` whose support digraph is acyclic, choose a total
order with ``c_ij = 0`` unless ``i`` precedes ``j``, nonnegative row weights
``d`` and the tail sums ``a_k = sum_{i >= k} d_i``.  Then ``A = diag(a)`` and
``b_ij = c_ij / (a_i - a_j)`` satisfy ``AB - BA = C`` entrywise.  With the
default weights ``d_i = sum_j sqrt(c_ij)`` every ``b_ij <= sqrt(c_ij)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .band_structure import triangularizing_order
from .certificate import CommutatorCertificate, make_certificate
from .errors import PreconditionError
from .exact_linalg import (
    EXACT,
    FLOAT,
    Matrix,
    exact_sqrt,
    nilpotency_index,
    norm_inf,
    norms,
    require_square_nonnegative,
    to_fraction,
)

FLOAT_TOLERANCE = 1e-10
BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class WeightData:
    order: tuple[int, ...]
    d: tuple
    a: tuple
    mode: str = EXACT

    @classmethod
    def from_d(cls, d: Sequence, order: Sequence[int]) -> "WeightData":
        mode = FLOAT if any(isinstance(x, float) for x in d) else EXACT
        d = tuple(float(x) if mode == FLOAT else to_fraction(x) for x in d)
        if any(x < 0 for x in d):
            raise PreconditionError("weights must be nonnegative", "negative weight")
        if sorted(order) != list(range(len(d))):
            raise PreconditionError("order must be a permutation of the weight indices")
        a = [0] * len(d)
        acc = Fraction(0) if mode == EXACT else 0.0
        for i in reversed(order):
            acc = acc + d[i]
            a[i] = acc
        return cls(tuple(order), d, tuple(a), mode)

    def gap(self, i: int, j: int):
        """``sum_{i <= k < j} d_k`` in the order, i.e. ``a_i - a_j``."""
        return self.a[i] - self.a[j]


def root_row_sums(c: Matrix) -> tuple[tuple, str]:
    """``d_i = sum_j sqrt(c_ij)``; exact when every root is rational."""
    roots = {}
    exact = c.kind == EXACT
    for i, j, v in c.nonzeros():
        r = exact_sqrt(v) if exact else None
        if r is None:
            exact = False
        roots[(i, j)] = r if r is not None else math.sqrt(v)
    d = []
    for i in range(c.rows):
        vals = [roots[(i, j)] for j in range(c.cols) if (i, j) in roots]
        if exact:
            d.append(sum(vals, Fraction(0)))
        else:
            d.append(math.fsum(float(x) for x in vals))
    return tuple(d), EXACT if exact else FLOAT


def default_weights(c: Matrix, order: Sequence[int] | None = None) -> WeightData:
    if order is None:
        order = triangularizing_order(c)
    d, _ = root_row_sums(c)
    return WeightData.from_d(d, order)


def _check_order(c: Matrix, order: Sequence[int]):
    pos = {i: t for t, i in enumerate(order)}
    for i, j, _ in c.nonzeros():
        if pos[i] >= pos[j]:
            raise PreconditionError(
                f"order does not triangularize C: c[{i},{j}] != 0", "order not triangularizing")


def construct_diagonal_quasi(c: Matrix, weights: WeightData | Sequence | None = None,
                             tolerance: float = FLOAT_TOLERANCE) -> CommutatorCertificate:
    """``C = AB - BA`` with ``A`` diagonal and ``B`` supported where ``C`` is.

    ``weights`` may be a :class:`WeightData`, a bare sequence ``d`` (the
    triangularizing order is then computed), or ``None`` for root weights.
    Bound attestations are recorded only for the default weights.
    """
    require_square_nonnegative(c)
    order = triangularizing_order(c)
    default = weights is None
    if default:
        w = default_weights(c, order)
    elif isinstance(weights, WeightData):
        _check_order(c, weights.order)
        w = weights
    else:
        w = WeightData.from_d(list(weights), order)
    if len(w.d) != c.rows:
        raise PreconditionError("weight vector length differs from the dimension")
    for i, row in enumerate(c.data):
        if any(row) and not w.d[i] > 0:
            raise PreconditionError(f"zero weight on active row {i}", "zero weight on an active row")

    kind = EXACT if (w.mode == EXACT and c.kind == EXACT) else FLOAT
    entries = {(i, j): v / w.gap(i, j) for i, j, v in c.nonzeros()}
    B = Matrix.from_entries(c.rows, c.cols, entries, kind)
    A = Matrix.diag(list(w.a), kind=kind)
    extras = {"order": list(w.order), "default_weights": default}
    if default:
        stats = summability_stats(c, B)
        extras.update({
            "root_sum": stats.root_sum,
            "b_sum": stats.b_sum,
            "b_sum_le_root_sum": stats.holds,
            "entrywise_b_le_root": all(
                float(v) <= math.sqrt(c.data[i][j]) + 1e-12 for i, j, v in B.nonzeros()),
            "norm_upper_le_root_sum": {
                str(p): norms(B, p).norm_p_upper <= stats.root_sum + BOUND_SLACK
                for p in (1, 2, "inf")},
        })
    return make_certificate(A, B, c, "diagonal_quasi", tolerance=tolerance, extras=extras)


@dataclass(frozen=True)
class ZeroDiagonalVerdict:
    passed: bool
    offending_index: int | None
    nilpotent: bool


def zero_diagonal_check(s: Matrix) -> ZeroDiagonalVerdict:
    """A nonnegative nilpotent matrix has zero diagonal.

    A positive diagonal entry ``s_kk`` forces ``(S^n)_kk >= s_kk^n > 0``, so the
    returned index certifies that ``S`` is not nilpotent.
    """
    require_square_nonnegative(s, "S")
    nilpotent = nilpotency_index(s) is not None
    bad = next((k for k, v in enumerate(s.diagonal()) if v), None)
    if nilpotent:
        assert bad is None, f"nilpotent nonnegative matrix with s[{bad},{bad}] != 0"
    return ZeroDiagonalVerdict(bad is None, bad, nilpotent)


@dataclass(frozen=True)
class ShiftSpec:
    weights: tuple
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise PreconditionError("shift needs N >= 2")
        w = self.weights
        if len(w) < self.n - 1:
            raise PreconditionError(f"need {self.n - 1} weights, got {len(w)}")
        if any(x <= 0 for x in w[: self.n - 1]):
            raise PreconditionError("shift weights must be positive", "nonpositive weight")
        if any(w[i + 1] >= w[i] for i in range(self.n - 2)):
            raise PreconditionError("shift weights must be decreasing", "nondecreasing weights")

    @property
    def used(self):
        return self.weights[: self.n - 1]


def harmonic(n_weights: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(1, i) for i in range(1, n_weights + 1))


def weighted_shift(spec: ShiftSpec) -> Matrix:
    """``N x N`` matrix with ``w_i`` at ``(i, i+1)``."""
    n = spec.n
    return Matrix.from_entries(n, n, {(i, i + 1): w for i, w in enumerate(spec.used)},
                               FLOAT if any(isinstance(w, float) for w in spec.used) else EXACT)


def diag_factorization_lower_bound(spec: ShiftSpec) -> float:
    """``sum_{i < N} w_i``, a lower bound for ``||A|| ||B||`` over diagonal factorizations.

    From ``w_i = b_{i,i+1}(a_i - a_{i+1}) <= ||B|| (a_i - a_{i+1})`` and telescoping.
    """
    w = spec.used
    if all(isinstance(x, (int, Fraction)) for x in w):
        return float(sum(w, Fraction(0)))
    return math.fsum(float(x) for x in w)


@dataclass(frozen=True)
class SummabilityReport:
    root_sum: float
    b_sum: float
    holds: bool


def summability_stats(c: Matrix, b: Matrix | None = None) -> SummabilityReport:
    """``sum sqrt(c_ij)`` against ``sum b_ij`` for the default-weight ``B``."""
    if not c.is_nonnegative():
        raise PreconditionError("C has a negative entry")
    root_sum = math.fsum(math.sqrt(v) for _, _, v in c.nonzeros())
    if b is None:
        if c.is_zero():
            b_sum = 0.0
        else:
            order = triangularizing_order(c)
            w = default_weights(c, order)
            b_sum = math.fsum(float(v / w.gap(i, j)) for i, j, v in c.nonzeros())
    else:
        b_sum = math.fsum(float(v) for _, _, v in b.nonzeros())
    return SummabilityReport(root_sum, b_sum, b_sum <= root_sum + BOUND_SLACK)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    weight_sum: float
    product: float
    norm_c_inf: float


def shift_growth_table(weights: Sequence, sizes: Sequence[int], p=2) -> list[GrowthRow]:
    """For each ``N``: the lower bound and ``||A||_inf * ||B||_p-upper`` of the constructed pair."""
    rows = []
    for n in sizes:
        spec = ShiftSpec(tuple(weights[: n - 1]), n)
        c = weighted_shift(spec)
        cert = construct_diagonal_quasi(c)
        prod = float(norm_inf(cert.A)) * norms(cert.B, p).norm_p_upper
        rows.append(GrowthRow(n, diag_factorization_lower_bound(spec), prod, float(norm_inf(c))))
    return rows

