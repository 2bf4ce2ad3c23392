"""Positive nilpotent matrices as commutators of positive matrices.

Three constructions live here:

* :func:`construct_central_nilpotent` writes a nonnegative nilpotent ``C`` as
  ``AB - BA`` with ``A`` diagonal and ``B`` nonnegative nilpotent, by
  recursion along the band decomposition of ``C``.
* :func:`construct_jordan` handles k-super upper-triangular ``C`` with
  ``B`` a power of the Jordan block.
* :func:`necessity_two_super` computes the 2-super form that any commutator
  of nonnegative nilpotents must have.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .band_structure import (
    BandDecomposition,
    SuperTriangularReport,
    absolute_kernel,
    band_decomposition,
    super_index,
    triangularizing_order,
)
from .certificate import CommutatorCertificate, make_certificate
from .errors import NegativeEntryError, NotNilpotentError, PreconditionError
from .exact_linalg import Matrix, commutator, nilpotency_index, require_square_nonnegative

EXHAUSTIVE_LIMIT = 16


def _central_pair(c: Matrix) -> tuple[list[Fraction], dict]:
    """Diagonal of ``A`` and sparse ``B`` (as ``{(i, j): b}``) with ``AB - BA = C``.

    Index 1 (``C = 0``): ``A = I, B = 0``.  Index 2: ``A`` is the band
    projection onto the absolute kernel and ``B = C``.  Higher index:
    recurse on the compression to the complement of the kernel.
    """
    n = c.rows
    if c.is_zero():
        return [Fraction(1)] * n, {}
    kernel = absolute_kernel(c)
    rest = [j for j in range(n) if j not in kernel]
    compressed = c.submatrix(rest, rest)
    if compressed.is_zero():
        a = [Fraction(1) if i in kernel else Fraction(0) for i in range(n)]
        return a, {(i, j): v for i, j, v in c.nonzeros()}

    a_sub, b_sub = _central_pair(compressed)
    alpha = max(a_sub) + 1
    a = [alpha] * n
    for t, j in enumerate(rest):
        a[j] = a_sub[t]
    b = {(rest[s], rest[t]): v for (s, t), v in b_sub.items()}
    # B' = P C (I - P) (alpha I - A~)^-1 ; only kernel rows carry it
    for t, j in enumerate(rest):
        scale = alpha - a_sub[t]
        for i in kernel:
            v = c.data[i][j]
            if v:
                b[(i, j)] = v / scale
    return a, b


def construct_central_nilpotent(c: Matrix) -> CommutatorCertificate:
    """``C = AB - BA`` with ``A`` diagonal nonnegative and ``B >= 0`` nilpotent."""
    require_square_nonnegative(c)
    c = c.astype("exact")
    if nilpotency_index(c) is None:
        raise NotNilpotentError("C")
    a, b = _central_pair(c)
    A = Matrix.diag(a, kind="exact")
    B = Matrix.from_entries(c.rows, c.cols, b)
    return make_certificate(A, B, c, "central_nilpotent",
                            extras={"bands": len(band_decomposition(c).parts)})


def is_k_super(c: Matrix, k: int) -> bool:
    """Entrywise: ``c_ij = 0`` whenever ``j - i < k``."""
    return all(j - i >= k for i, j, _ in c.nonzeros())


def construct_jordan(c: Matrix, k: int) -> CommutatorCertificate:
    """``C = AB - BA`` with ``B = J_n^(k-1)`` and ``A`` strictly upper-triangular.

    ``A = sum_m J^(m(k-1)) C (J^T)^((m+1)(k-1))``, stopping when the shift
    exceeds ``n``.
    """
    n = c.rows
    if not c.is_square():
        raise PreconditionError("C is not square")
    if n < 3:
        raise PreconditionError(f"need n >= 3, got n = {n}", "n < 3")
    if not 2 <= k <= n:
        raise PreconditionError(f"need 2 <= k <= n, got k = {k}", "k out of range")
    if not c.is_nonnegative():
        raise NegativeEntryError("C")
    if not is_k_super(c, k):
        raise PreconditionError(f"C is not {k}-super upper-triangular",
                                f"C is not {k}-super upper-triangular")
    c = c.astype("exact")
    step = k - 1
    J = Matrix.jordan(n)
    B = J.power(step)
    Bt = B.T
    A = Matrix.zeros(n)
    left = Matrix.identity(n)
    right = Bt
    m = 0
    while m * step < n:
        A = A + left @ c @ right
        left = left @ B
        right = right @ Bt
        m += 1
    return make_certificate(A, B, c, "jordan", extras={"k": k})


def necessity_two_super(a: Matrix, b: Matrix) -> SuperTriangularReport:
    """Super index of ``AB - BA`` under the band decomposition of ``A + B``."""
    require_square_nonnegative(a, "A")
    require_square_nonnegative(b, "B")
    if a.shape != b.shape:
        raise PreconditionError("A and B differ in size")
    if nilpotency_index(a) is None:
        raise NotNilpotentError("A")
    if nilpotency_index(b) is None:
        raise NotNilpotentError("B")
    c = commutator(a, b)
    if not c.is_nonnegative():
        raise PreconditionError("AB - BA has a negative entry", "AB - BA is not positive")
    d = a + b
    # nilpotency of A + B follows from the hypotheses; failing here is a bug upstream
    assert nilpotency_index(d) is not None, "A + B is not nilpotent despite AB - BA >= 0"
    report = super_index(c, band_decomposition(d, source="D"))
    assert report.max_k >= 2 or c.rows < 2, "commutator is not 2-super under D's bands"
    return report


@dataclass(frozen=True)
class Obstruction:
    reason: str
    best_max_k: int
    determined: bool = True

    def to_json(self) -> dict:
        return {"obstruction": self.reason, "best_max_k": self.best_max_k,
                "determined": self.determined}


def _two_super_order(c: Matrix) -> tuple[int, ...] | None:
    """An order under which every edge ``i -> j`` has ``pos(j) >= pos(i) + 2``.

    Exact search over (placed set, last placed) states.
    """
    n = c.rows
    preds = [0] * n
    for i, j, _ in c.nonzeros():
        preds[j] |= 1 << i
    full = (1 << n) - 1
    dead: set[tuple[int, int]] = set()

    def extend(placed: int, last: int, order: list[int]):
        if placed == full:
            return True
        if (placed, last) in dead:
            return False
        for v in range(n):
            bit = 1 << v
            if placed & bit or preds[v] & ~placed:
                continue
            if last >= 0 and (preds[v] >> last) & 1:
                continue
            order.append(v)
            if extend(placed | bit, v, order):
                return True
            order.pop()
        dead.add((placed, last))
        return False

    order: list[int] = []
    return tuple(order) if extend(0, -1, order) else None


def _entrywise_k(c: Matrix, order) -> int:
    return super_index(c, BandDecomposition.singletons(order)).max_k


def characterize_nilpotent_pair(c: Matrix, exhaustive_limit: int = EXHAUSTIVE_LIMIT):
    """Certificate with both factors nilpotent, or an :class:`Obstruction`.

    Such a pair exists iff ``C`` is permutation similar to a 2-super
    strictly upper-triangular matrix.  Candidate orders: the band order of
    ``C``, the reversed band order of ``C^T``, then an exact search when
    ``n <= exhaustive_limit``.  Larger inputs that fail the first two give
    an undetermined obstruction.
    """
    require_square_nonnegative(c)
    c = c.astype("exact")
    n = c.rows
    if nilpotency_index(c) is None:
        return Obstruction("C is not nilpotent", 0)
    if c.is_zero() and n < 3:
        z = Matrix.zeros(n)
        return make_certificate(z, z, c, "jordan", extras={"k": 2, "order": list(range(n))})
    if n < 3:
        return Obstruction("no 2-super form found", _entrywise_k(c, triangularizing_order(c)))

    candidates = [
        band_decomposition(c).permutation,
        tuple(reversed(band_decomposition(c.T).permutation)),
        triangularizing_order(c),
    ]
    best = 0
    found = None
    for order in candidates:
        k = _entrywise_k(c, order)
        best = max(best, k)
        if k >= 2:
            found = order
            break
    if found is None:
        if n > exhaustive_limit:
            return Obstruction("undetermined: search limit exceeded", best, determined=False)
        found = _two_super_order(c)
        if found is None:
            return Obstruction("no 2-super form found", best)

    inner = construct_jordan(c.permuted(found), 2)
    A = inner.A.unpermuted(found)
    B = inner.B.unpermuted(found)
    return make_certificate(A, B, c, "jordan", extras={"k": 2, "order": list(found)})
