"""Dense matrices over the rationals, with a binary64 escape hatch.

Entries of an ``exact`` matrix are :class:`fractions.Fraction`; arithmetic
never rounds.  A ``float`` matrix stores Python floats and callers compare
it with an explicit tolerance.  Mixing the two kinds promotes to float.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NegativeEntryError, PreconditionError, ShapeError

EXACT = "exact"
FLOAT = "float"

POWER_ITERATION_RTOL = 1e-10
POWER_ITERATION_CAP = 10_000


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a matrix entry")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite entry {value!r}")
        return Fraction(value)
    return Fraction(value)


def _coerce(value, kind):
    if kind == EXACT:
        return to_fraction(value)
    return float(value)


@dataclass(frozen=True)
class Matrix:
    """Immutable row-major matrix.  Use the constructors, not the raw fields."""

    rows: int
    cols: int
    data: tuple
    kind: str = EXACT

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ShapeError(f"entries do not form a {self.rows}x{self.cols} grid")
        if self.kind not in (EXACT, FLOAT):
            raise ValueError(f"unknown matrix kind {self.kind!r}")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], kind: str | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if kind is None:
            flat = [x for r in rows for x in r]
            kind = FLOAT if any(isinstance(x, float) for x in flat) else EXACT
        data = tuple(tuple(_coerce(x, kind) for x in r) for r in rows)
        ncols = len(data[0]) if data else 0
        return cls(len(data), ncols, data, kind)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, kind: str = EXACT) -> "Matrix":
        cols = rows if cols is None else cols
        z = Fraction(0) if kind == EXACT else 0.0
        return cls(rows, cols, tuple((z,) * cols for _ in range(rows)), kind)

    @classmethod
    def identity(cls, n: int, kind: str = EXACT) -> "Matrix":
        return cls.diag([1] * n, kind=kind)

    @classmethod
    def diag(cls, values: Sequence, kind: str | None = None) -> "Matrix":
        n = len(values)
        if kind is None:
            kind = FLOAT if any(isinstance(v, float) for v in values) else EXACT
        z = Fraction(0) if kind == EXACT else 0.0
        data = tuple(
            tuple(_coerce(values[i], kind) if i == j else z for j in range(n)) for i in range(n)
        )
        return cls(n, n, data, kind)

    @classmethod
    def jordan(cls, n: int) -> "Matrix":
        """n x n matrix with ones on the first superdiagonal."""
        return cls.from_rows([[1 if j == i + 1 else 0 for j in range(n)] for i in range(n)], EXACT)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: dict, kind: str = EXACT) -> "Matrix":
        """Build from a sparse ``{(i, j): value}`` map (0-based)."""
        grid = [[0] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            grid[i][j] = v
        return cls.from_rows(grid, kind)

    # -- basic access -----------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_exact(self):
        return self.kind == EXACT

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __iter__(self):
        return iter(self.data)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix<{self.kind} {self.rows}x{self.cols}>[{body}]"

    @property
    def T(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else (), self.kind)

    def diagonal(self) -> list:
        return [self.data[i][i] for i in range(min(self.rows, self.cols))]

    def trace(self):
        return sum(self.diagonal(), self._zero())

    def _zero(self):
        return Fraction(0) if self.kind == EXACT else 0.0

    def nonzeros(self):
        """Yield ``(i, j, value)`` for every nonzero entry."""
        for i, row in enumerate(self.data):
            for j, v in enumerate(row):
                if v:
                    yield i, j, v

    def max_entry(self):
        return max((x for r in self.data for x in r), default=self._zero())

    def max_abs(self):
        return max((abs(x) for r in self.data for x in r), default=self._zero())

    # -- predicates -------------------------------------------------------

    def is_square(self):
        return self.rows == self.cols

    def is_zero(self):
        return not any(x for r in self.data for x in r)

    def is_nonnegative(self):
        return all(x >= 0 for r in self.data for x in r)

    def is_diagonal(self):
        return all(not v or i == j for i, j, v in self.nonzeros())

    def is_strictly_upper(self):
        return all(j > i for i, j, _ in self.nonzeros())

    # -- arithmetic -------------------------------------------------------

    def _binary(self, other, op):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")
        kind = EXACT if self.kind == other.kind == EXACT else FLOAT
        a = self if self.kind == kind else self.astype(kind)
        b = other if other.kind == kind else other.astype(kind)
        data = tuple(tuple(op(x, y) for x, y in zip(r, s)) for r, s in zip(a.data, b.data))
        return Matrix(self.rows, self.cols, data, kind)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self):
        return Matrix(self.rows, self.cols, tuple(tuple(-x for x in r) for r in self.data), self.kind)

    def __matmul__(self, other):
        return matmul(self, other)

    def scale(self, factor) -> "Matrix":
        kind = self.kind if (self.kind == FLOAT or not isinstance(factor, float)) else FLOAT
        m = self if kind == self.kind else self.astype(kind)
        f = _coerce(factor, kind)
        return Matrix(m.rows, m.cols, tuple(tuple(x * f for x in r) for r in m.data), kind)

    def astype(self, kind: str) -> "Matrix":
        if kind == self.kind:
            return self
        return Matrix(self.rows, self.cols,
                      tuple(tuple(_coerce(x, kind) for x in r) for r in self.data), kind)

    def power(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ShapeError("power of a non-square matrix")
        result = Matrix.identity(self.rows, self.kind)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    # -- reindexing -------------------------------------------------------

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        data = tuple(tuple(self.data[i][j] for j in cols) for i in rows)
        return Matrix(len(rows), len(cols), data, self.kind)

    def permuted(self, order: Sequence[int]) -> "Matrix":
        """Return ``P M P^T`` where row ``t`` of the result is row ``order[t]`` of ``M``."""
        return self.submatrix(order, order)

    def unpermuted(self, order: Sequence[int]) -> "Matrix":
        """Inverse of :meth:`permuted`."""
        inv = [0] * len(order)
        for t, i in enumerate(order):
            inv[i] = t
        return self.submatrix(inv, inv)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.data], dtype=float).reshape(
            self.rows, self.cols)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == EXACT:
            data = [[str(x) for x in r] for r in self.data]
        else:
            data = [[float(x) for x in r] for r in self.data]
        return {"kind": self.kind, "rows": self.rows, "cols": self.cols, "data": data}

    @classmethod
    def from_json(cls, obj: dict) -> "Matrix":
        try:
            kind = obj.get("kind", EXACT)
            rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed matrix JSON: {exc}") from exc
        if kind == EXACT and any(isinstance(x, float) for r in data for x in r):
            raise ValueError("exact matrix entries must be fraction strings or integers")
        m = cls.from_rows(data, kind)
        if m.rows != rows or (rows and m.cols != cols):
            raise ShapeError(f"declared shape {rows}x{cols} does not match data")
        if rows == 0:
            m = cls(0, cols, (), kind)
        return m

    @classmethod
    def from_csv(cls, text: str) -> "Matrix":
        """Float-kind matrix from comma separated text."""
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        return cls.from_rows([[float(c) for c in r] for r in rows], FLOAT)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Product ``a @ b``; skips zero entries, so sparse operands are cheap."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    kind = EXACT if a.kind == b.kind == EXACT else FLOAT
    a = a.astype(kind)
    b = b.astype(kind)
    zero = Fraction(0) if kind == EXACT else 0.0
    brows = [[(j, v) for j, v in enumerate(row) if v] for row in b.data]
    out = []
    for row in a.data:
        acc = [zero] * b.cols
        for k, x in enumerate(row):
            if x:
                for j, v in brows[k]:
                    acc[j] += x * v
        out.append(tuple(acc))
    return Matrix(a.rows, b.cols, tuple(out), kind)


def commutator(a: Matrix, b: Matrix) -> Matrix:
    """``AB - BA``."""
    if not (a.is_square() and b.is_square()) or a.shape != b.shape:
        raise ShapeError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def parse_p(p) -> float | int:
    """Normalise a norm exponent: ints stay ints, 'inf' becomes ``math.inf``."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "oo", "∞"):
            return math.inf
        p = float(Fraction(s))
    if isinstance(p, Fraction):
        p = float(p)
    if p != p or p < 1:
        raise ValueError(f"norm exponent must be >= 1, got {p!r}")
    if p != math.inf and float(p).is_integer():
        return int(p)
    return p


def p_to_str(p) -> str:
    return "inf" if p == math.inf else str(p)


@dataclass(frozen=True)
class NormReport:
    norm_1: Fraction | float
    norm_inf: Fraction | float
    norm_2_estimate: float
    norm_p_upper: float
    p: float | int


def _abs_sum(values, zero):
    # fsum is correctly rounded, so float sums do not depend on summation order
    if isinstance(zero, float):
        return math.fsum(abs(x) for x in values)
    return sum((abs(x) for x in values), zero)


def norm_1(m: Matrix):
    """Max absolute column sum."""
    return max((_abs_sum(col, m._zero()) for col in zip(*m.data)), default=m._zero())


def norm_inf(m: Matrix):
    """Max absolute row sum."""
    return max((_abs_sum(row, m._zero()) for row in m.data), default=m._zero())


def interpolation_bound(n1, ninf, p) -> float:
    if p == 1:
        return float(n1)
    if p == math.inf:
        return float(ninf)
    theta = 1.0 / p
    return float(n1) ** theta * float(ninf) ** (1.0 - theta)


def power_iteration_norm2(m: Matrix) -> float:
    """Estimate of the spectral norm from power iteration on ``M^T M``.

    Starts at the all-ones vector.  The returned value is the square root of a
    Rayleigh quotient, so it never exceeds the true spectral norm.
    """
    x = m.to_numpy()
    if x.size == 0 or not x.any():
        return 0.0
    g = x.T @ x
    v = np.ones(g.shape[0])
    v /= np.linalg.norm(v)
    lam = float(v @ g @ v)
    for _ in range(POWER_ITERATION_CAP):
        w = g @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            break
        v = w / nw
        new = float(v @ g @ v)
        if abs(new - lam) <= POWER_ITERATION_RTOL * abs(new):
            lam = new
            break
        lam = new
    return math.sqrt(max(lam, 0.0))


def norms(m: Matrix, p=2) -> NormReport:
    p = parse_p(p)
    n1, ninf = norm_1(m), norm_inf(m)
    return NormReport(n1, ninf, power_iteration_norm2(m), interpolation_bound(n1, ninf, p), p)


def operator_norm(m: Matrix, p):
    """Induced p-norm: exact for p in {1, inf}, SVD for p = 2, interpolation bound otherwise."""
    p = parse_p(p)
    if p == 1:
        return norm_1(m)
    if p == math.inf:
        return norm_inf(m)
    if p == 2:
        if m.rows == 0 or m.cols == 0 or m.is_zero():
            return 0.0
        return float(np.linalg.norm(m.to_numpy(), 2))
    return interpolation_bound(norm_1(m), norm_inf(m), p)


def support_masks(m: Matrix) -> list[int]:
    """Row ``i`` as a bitmask of its nonzero columns."""
    masks = []
    for row in m.data:
        mask = 0
        for j, v in enumerate(row):
            if v:
                mask |= 1 << j
        masks.append(mask)
    return masks


def boolean_product(a: list[int], b: list[int]) -> list[int]:
    out = []
    for mask in a:
        acc = 0
        while mask:
            low = mask & -mask
            acc |= b[low.bit_length() - 1]
            mask ^= low
        out.append(acc)
    return out


def nilpotency_index(m: Matrix) -> int | None:
    """Least ``k <= n`` with ``M^k = 0``, or ``None``.

    For entrywise nonnegative matrices no cancellation can occur, so the
    support pattern decides; signed matrices fall back to exact powers.
    """
    if not m.is_square():
        raise ShapeError("nilpotency index of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    if m.is_nonnegative():
        base = support_masks(m)
        cur = base
        for k in range(1, n + 1):
            if not any(cur):
                return k
            cur = boolean_product(cur, base)
        return None
    cur = m
    for k in range(1, n + 1):
        if cur.is_zero():
            return k
        cur = cur @ m
    return None


def spectral_radius_bound(m: Matrix):
    """``min(||M||_1, ||M||_inf)``, an upper bound for the spectral radius."""
    if not m.is_nonnegative():
        raise NegativeEntryError("M")
    if not m.is_square():
        raise ShapeError("spectral radius of a non-square matrix")
    return min(norm_1(m), norm_inf(m))


def require_square_nonnegative(m: Matrix, name="C"):
    if not m.is_square():
        raise PreconditionError(f"{name} is not square", f"{name} is not square")
    if not m.is_nonnegative():
        raise NegativeEntryError(name)


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Rational square root of ``x`` when it exists."""
    if x < 0:
        return None
    num, den = x.numerator, x.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def exact_root(n: int, p) -> Fraction | None:
    """Rational ``n**(1/p)`` for positive integer ``n`` and integer ``p``, else None."""
    if p == math.inf or not float(p).is_integer():
        return None
    p = int(p)
    r = round(n ** (1.0 / p))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** p == n:
            return Fraction(cand)
    return None
