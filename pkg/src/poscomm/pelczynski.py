"""Block-operator commutators on truncated l^p direct sums ``(Y + X + X + ...)_p``.

Block 0 is ``Y`` (dimension ``m``); blocks ``1..K`` are ``q``-dimensional
stand-ins for copies of ``X``.  Given positive ``S: Y -> X`` and
``T: X -> Y`` with ``TS = I``, the shift-like ``B`` (``S`` then identities
down the subdiagonal) and the block matrix ``A`` built from ``C`` satisfy
``AB - BA = C`` on every block row and on block columns ``0..K-1``.  That
window is where the truncation leaves the identity intact; column ``K`` of
``AB`` would need a column ``K + 1`` of ``A``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .certificate import CommutatorCertificate, make_certificate
from .errors import (
    PreconditionError,
    ScheduleUnreachableError,
    ShapeError,
    VerificationError,
)
from .exact_linalg import (
    EXACT,
    FLOAT,
    Matrix,
    exact_root,
    interpolation_bound,
    norm_1,
    norm_inf,
    operator_norm,
    p_to_str,
    parse_p,
)

FLOAT_TOLERANCE = 1e-12
DOMINATION_SLACK = 1e-8


# -- partitions and block operators ---------------------------------------


@dataclass(frozen=True)
class BlockPartition:
    y_dim: int
    x_dim: int
    count: int
    p: float | int = 2

    def __post_init__(self):
        object.__setattr__(self, "p", parse_p(self.p))
        if self.count < 2:
            raise PreconditionError(f"need at least 2 X blocks, got {self.count}")
        if self.y_dim < 1 or self.x_dim < 1:
            raise PreconditionError("block dimensions must be positive")

    @property
    def sizes(self) -> list[int]:
        return [self.y_dim] + [self.x_dim] * self.count

    @property
    def offsets(self) -> list[int]:
        out = [0]
        for s in self.sizes:
            out.append(out[-1] + s)
        return out

    @property
    def dim(self) -> int:
        return self.y_dim + self.count * self.x_dim

    def block_range(self, i: int) -> range:
        off = self.offsets
        return range(off[i], off[i + 1])

    def to_json(self) -> dict:
        return {"y_dim": self.y_dim, "x_dim": self.x_dim, "count": self.count,
                "p": p_to_str(self.p)}

    @classmethod
    def from_json(cls, obj: dict) -> "BlockPartition":
        return cls(int(obj["y_dim"]), int(obj["x_dim"]), int(obj["count"]), obj.get("p", "2"))


@dataclass(frozen=True)
class TruncatedBlockOperator:
    partition: BlockPartition
    blocks: dict = field(default_factory=dict)

    def __post_init__(self):
        sizes = self.partition.sizes
        kept = {}
        for (i, j), m in self.blocks.items():
            if not (0 <= i < len(sizes) and 0 <= j < len(sizes)):
                raise ShapeError(f"block index {(i, j)} outside 0..{self.partition.count}")
            if m.shape != (sizes[i], sizes[j]):
                raise ShapeError(f"block {(i, j)} has shape {m.shape}, expected {(sizes[i], sizes[j])}")
            if not m.is_zero():
                kept[(i, j)] = m
        object.__setattr__(self, "blocks", kept)

    @property
    def K(self) -> int:
        return self.partition.count

    def block(self, i: int, j: int) -> Matrix | None:
        """Stored block, or ``None`` when it is zero or out of range."""
        return self.blocks.get((i, j))

    def zero_block(self, i: int, j: int) -> Matrix:
        sizes = self.partition.sizes
        return Matrix.zeros(sizes[i], sizes[j])

    def full_block(self, i: int, j: int) -> Matrix:
        return self.blocks.get((i, j)) or self.zero_block(i, j)

    @property
    def kind(self) -> str:
        return FLOAT if any(m.kind == FLOAT for m in self.blocks.values()) else EXACT

    def flatten(self) -> Matrix:
        n = self.partition.dim
        off = self.partition.offsets
        zero = Fraction(0) if self.kind == EXACT else 0.0
        grid = [[zero] * n for _ in range(n)]
        for (i, j), m in self.blocks.items():
            for r, row in enumerate(m.data):
                gr = grid[off[i] + r]
                for s, v in enumerate(row):
                    gr[off[j] + s] = v
        return Matrix.from_rows(grid, self.kind)

    @classmethod
    def from_dense(cls, partition: BlockPartition, m: Matrix) -> "TruncatedBlockOperator":
        if m.shape != (partition.dim, partition.dim):
            raise ShapeError(f"dense matrix {m.shape} does not fit partition of dim {partition.dim}")
        n_blocks = partition.count + 1
        rng = [partition.block_range(i) for i in range(n_blocks)]
        blocks = {}
        for i in range(n_blocks):
            for j in range(n_blocks):
                blk = m.submatrix(rng[i], rng[j])
                if not blk.is_zero():
                    blocks[(i, j)] = blk
        return cls(partition, blocks)

    def support_extent(self) -> int:
        """Largest block index (row or column) carrying a nonzero block; -1 if none."""
        return max((max(i, j) for i, j in self.blocks), default=-1)

    def is_nonnegative(self) -> bool:
        return all(m.is_nonnegative() for m in self.blocks.values())

    def to_json(self) -> dict:
        return {"partition": self.partition.to_json(),
                "blocks": {f"{i},{j}": m.to_json() for (i, j), m in sorted(self.blocks.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> "TruncatedBlockOperator":
        part = BlockPartition.from_json(obj["partition"])
        blocks = {}
        for key, mj in obj.get("blocks", {}).items():
            i, j = (int(t) for t in key.split(","))
            blocks[(i, j)] = Matrix.from_json(mj)
        return cls(part, blocks)


def block_norm(m: Matrix | None, p):
    if m is None:
        return Fraction(0) if p in (1, math.inf) else 0.0
    return operator_norm(m, p)


# -- embeddings ------------------------------------------------------------


@dataclass(frozen=True)
class EmbeddingPair:
    """Positive ``S: Y -> X`` (q x m) and ``T: X -> Y`` (m x q) with ``TS = I``.

    ``cell_measure`` weights the X coordinates in the p-norm; it is 1 for
    coordinate blocks and ``1/M`` for step functions on ``M`` cells.
    """

    S: Matrix
    T: Matrix
    cell_measure: Fraction = Fraction(1)

    @property
    def m(self) -> int:
        return self.S.cols

    @property
    def q(self) -> int:
        return self.S.rows

    def validate(self, tolerance: float = FLOAT_TOLERANCE) -> "EmbeddingPair":
        if self.T.shape != (self.m, self.q):
            raise ShapeError(f"T has shape {self.T.shape}, expected {(self.m, self.q)}")
        if not (self.S.is_nonnegative() and self.T.is_nonnegative()):
            raise PreconditionError("S and T must be positive", "embedding not positive")
        ts = self.T @ self.S
        eye = Matrix.identity(self.m)
        if ts.kind == EXACT:
            if ts != eye:
                raise PreconditionError("TS is not the identity", "TS != I")
        elif (ts - eye).max_abs() > tolerance:
            raise PreconditionError("TS deviates from the identity", "TS != I")
        return self

    def padded(self, q_new: int) -> "EmbeddingPair":
        """Extend X by zero coordinates to dimension ``q_new``."""
        extra = q_new - self.q
        if extra < 0:
            raise ShapeError("cannot shrink an embedding")
        if extra == 0:
            return self
        zs = [[0] * self.m for _ in range(extra)]
        S = Matrix.from_rows([list(r) for r in self.S.data] + zs, self.S.kind)
        T = Matrix.from_rows([list(r) + [0] * extra for r in self.T.data], self.T.kind)
        return EmbeddingPair(S, T, self.cell_measure)

    def column_norms(self, p) -> list:
        """``||S e_i||_p`` in the weighted norm; exact when the data allow it."""
        p = parse_p(p)
        out = []
        for col in zip(*self.S.data):
            if p == math.inf:
                out.append(max(col))
            elif self.S.kind == EXACT and isinstance(p, int):
                total = sum((abs(x) ** p for x in col), Fraction(0)) * self.cell_measure
                root = _rational_root(total, p)
                out.append(root if root is not None else float(total) ** (1.0 / p))
            else:
                total = math.fsum(abs(float(x)) ** p for x in col) * float(self.cell_measure)
                out.append(total ** (1.0 / p))
        return out

    def to_json(self) -> dict:
        return {"S": self.S.to_json(), "T": self.T.to_json(),
                "cell_measure": str(self.cell_measure)}

    @classmethod
    def from_json(cls, obj: dict) -> "EmbeddingPair":
        return cls(Matrix.from_json(obj["S"]), Matrix.from_json(obj["T"]),
                   Fraction(obj.get("cell_measure", "1")))


def _rational_root(x: Fraction, p: int) -> Fraction | None:
    num = exact_root(x.numerator, p)
    den = exact_root(x.denominator, p)
    if num is None or den is None:
        return None
    return num / den


def auto_embedding(m: int, q: int) -> EmbeddingPair:
    """Coordinate inclusion ``Y -> X`` and the matching projection."""
    if m > q:
        raise PreconditionError(f"Y (dim {m}) does not embed in X (dim {q})", "dim Y > dim X")
    S = Matrix.from_rows([[1 if r == c else 0 for c in range(m)] for r in range(q)], EXACT)
    return EmbeddingPair(S, S.T)


def lp_embedding(n: int, p, grid: int) -> EmbeddingPair:
    """``l^p_n -> L^p[0,1]`` on ``grid`` uniform cells, and its left inverse.

    ``S e_i = n^(1/p)`` on the cells of ``[(i-1)/n, i/n)``; ``T`` integrates
    over those cells and scales by ``n^((p-1)/p)``.  Rational whenever
    ``n^(1/p)`` is.
    """
    p = parse_p(p)
    if p == math.inf:
        raise PreconditionError("lp_embedding needs finite p")
    if n < 1 or grid < 1 or grid % n:
        raise PreconditionError(f"grid size {grid} is not divisible by n = {n}",
                                "grid not divisible by n")
    per = grid // n
    root = exact_root(n, p)
    if root is not None:
        s_val, t_val, kind = root, Fraction(n) / root / grid, EXACT
    else:
        s_val = n ** (1.0 / p)
        t_val = n ** ((p - 1.0) / p) / grid
        kind = FLOAT
    S = Matrix.from_rows([[s_val if c // per == i else 0 for i in range(n)] for c in range(grid)], kind)
    T = Matrix.from_rows([[t_val if c // per == i else 0 for c in range(grid)] for i in range(n)], kind)
    return EmbeddingPair(S, T, Fraction(1, grid))


# -- the construction -------------------------------------------------------


def build_B(pair: EmbeddingPair, partition: BlockPartition) -> TruncatedBlockOperator:
    """``S`` at block (1, 0) and identities at ``(i, i-1)`` for ``2 <= i <= K``."""
    if pair.S.shape != (partition.x_dim, partition.y_dim):
        raise ShapeError(f"S has shape {pair.S.shape}, partition wants "
                         f"{(partition.x_dim, partition.y_dim)}")
    eye = Matrix.identity(partition.x_dim)
    blocks = {(1, 0): pair.S}
    for i in range(2, partition.count + 1):
        blocks[(i, i - 1)] = eye
    return TruncatedBlockOperator(partition, blocks)


def _check_window_support(c: TruncatedBlockOperator):
    if c.support_extent() >= c.K:
        raise PreconditionError(
            f"C touches block {c.K}; support must lie in blocks 0..{c.K - 1}",
            "support of C too wide for the truncation window")


def build_A(c: TruncatedBlockOperator, pair: EmbeddingPair) -> TruncatedBlockOperator:
    """The block matrix ``A`` for ``C``, columns ``0..K``.

    A_i0 = 0;  A_i1 = C_i0 T;  A_0j = C_0,j-1 (j >= 2);
    A_ij = sum_{k=1..i} C_{i-k+1,j-k} + S C_{0,j-i-1} [T when j = i + 1]   (1 <= i < j);
    A_ij = sum_{k=1..j-1} C_{i-k+1,j-k} + C_{i-j+1,0} T                   (i >= j >= 2).
    The trailing ``T`` for ``j = i + 1`` makes ``S C_00`` map X to X.
    """
    _check_window_support(c)
    S, T = pair.S, pair.T
    K = c.K
    get = c.block
    blocks = {}

    def total(terms, i, j):
        terms = [t for t in terms if t is not None]
        if not terms:
            return None
        acc = terms[0]
        for t in terms[1:]:
            acc = acc + t
        if acc.shape != (c.partition.sizes[i], c.partition.sizes[j]):
            raise ShapeError(f"A block {(i, j)} came out with shape {acc.shape}")
        return acc

    def then_T(x):
        return None if x is None else x @ T

    for i in range(K + 1):
        for j in range(1, K + 1):
            if j == 1:
                terms = [then_T(get(i, 0))]
            elif i == 0:
                terms = [get(0, j - 1)]
            elif i < j:
                terms = [get(i - k + 1, j - k) for k in range(1, i + 1)]
                tail = get(0, j - i - 1)
                if tail is not None:
                    tail = S @ tail
                    if j == i + 1:
                        tail = tail @ T
                terms.append(tail)
            else:
                terms = [get(i - k + 1, j - k) for k in range(1, j)]
                terms.append(then_T(get(i - j + 1, 0)))
            blk = total(terms, i, j)
            if blk is not None:
                blocks[(i, j)] = blk
    return TruncatedBlockOperator(c.partition, blocks)


@dataclass(frozen=True)
class WindowVerdict:
    ok: bool
    block_rows: int
    block_cols: int
    flat_window: tuple[int, int]
    offending_block: tuple[int, int] | None = None
    residual: Fraction | float = 0


def window_shape(partition: BlockPartition) -> tuple[int, int]:
    """Flat ``(rows, cols)`` of block rows ``0..K`` by block columns ``0..K-1``."""
    return partition.dim, partition.offsets[partition.count]


def verify_commutator_window(a: TruncatedBlockOperator, b: TruncatedBlockOperator,
                             c: TruncatedBlockOperator, tolerance: float = FLOAT_TOLERANCE
                             ) -> WindowVerdict:
    """Compare ``AB - BA`` with ``C`` block by block on the truncation window."""
    part = c.partition
    if a.partition != part or b.partition != part:
        raise ShapeError("A, B, C must share one partition")
    A, B, C = a.flatten(), b.flatten(), c.flatten()
    diff = A @ B - B @ A - C
    exact = diff.kind == EXACT
    off = part.offsets
    worst = Fraction(0) if exact else 0.0
    bad = None
    for i in range(part.count + 1):
        for j in range(part.count):
            for r in range(off[i], off[i + 1]):
                row = diff.data[r]
                for s in range(off[j], off[j + 1]):
                    v = abs(row[s])
                    if v > worst:
                        worst = v
                        if bad is None and (exact or v > tolerance * (float(C.max_abs()) or 1.0)):
                            bad = (i, j)
    ok = bad is None
    return WindowVerdict(ok, part.count + 1, part.count, window_shape(part), bad, worst)


# -- norm bookkeeping --------------------------------------------------------


@dataclass(frozen=True)
class DominatingMatrix:
    """Diagonal sums ``c_i`` (offset ``j - i = idx - 1``) and the Toeplitz ``U``.

    ``U`` has size ``2K + 2`` so that one column meets every diagonal and its
    1- and inf-norms equal ``sum_i c_i``; its leading ``(K+1) x (K+1)``
    corner dominates the block norms of ``A``.
    """

    c: dict
    U: Matrix
    K: int

    @property
    def total(self):
        if self.U.kind == EXACT:
            return sum(self.c.values(), Fraction(0))
        return math.fsum(self.c.values())

    @property
    def U_window(self) -> Matrix:
        idx = range(self.K + 1)
        return self.U.submatrix(idx, idx)

    def u(self, i: int, j: int):
        return self.c.get(j - i, 0)


def dominating_matrix_U(c: TruncatedBlockOperator) -> DominatingMatrix:
    p = c.partition.p
    K = c.K
    exact = p in (1, math.inf) and c.kind == EXACT
    zero = Fraction(0) if exact else 0.0
    seq = {i: zero for i in range(-K, K + 2)}
    for (r, s), blk in c.blocks.items():
        nrm = block_norm(blk, p)
        seq[s - r + 1] += nrm if exact else float(nrm)
    size = 2 * K + 2
    U = Matrix.from_rows([[seq.get(j - i, zero) for j in range(size)] for i in range(size)],
                         EXACT if exact else FLOAT)
    return DominatingMatrix(seq, U, K)


def domination_report(a: TruncatedBlockOperator, dom: DominatingMatrix, factor) -> tuple[bool, object]:
    """Check ``||A_ij|| <= factor * u_ij`` for every stored block; return (ok, worst excess)."""
    p = a.partition.p
    exact = dom.U.kind == EXACT and not isinstance(factor, float)
    worst = None
    ok = True
    for (i, j), blk in a.blocks.items():
        lhs = block_norm(blk, p)
        rhs = factor * dom.u(i, j)
        excess = lhs - rhs if exact else float(lhs) - float(rhs)
        worst = excess if worst is None or excess > worst else worst
        if (excess > 0) if exact else (excess > DOMINATION_SLACK):
            ok = False
    return ok, worst


def band_projection_decay(c: TruncatedBlockOperator) -> list[tuple[int, object, object]]:
    """``(n, ||C P_n||, ||P_n C||)`` for ``n = 1..K``; ``P_n`` keeps blocks ``>= n``."""
    flat = c.flatten()
    p = c.partition.p
    off = c.partition.offsets
    everything = range(flat.rows)
    out = []
    for n in range(1, c.K + 1):
        tail = range(off[n], flat.rows)
        out.append((n, operator_norm(flat.submatrix(everything, tail), p),
                    operator_norm(flat.submatrix(tail, everything), p)))
    return out


# -- epsilon schedules and regrouping ----------------------------------------


@dataclass(frozen=True)
class EpsilonSchedule:
    """Decreasing ``eps_n`` (n >= 2) with ``sum (2n+1) eps_n`` finite.

    Built-in rules are geometric, ``eps_n = r**n``, for which the series has a
    closed form.  A custom rule must name a dominating geometric tail
    ``eps_n <= const * ratio**n``; it is checked on every index used.
    """

    rule: str
    ratio: Fraction = Fraction(1, 2)
    custom: Callable[[int], Fraction] | None = None
    dominating: tuple[Fraction, Fraction] | None = None

    def __post_init__(self):
        if not 0 < self.ratio < 1:
            raise PreconditionError("geometric ratio must lie in (0, 1)")
        if self.custom is not None:
            if self.dominating is None:
                raise PreconditionError("custom schedule needs a dominating geometric tail",
                                        "schedule lacks convergence certificate")
            const, r = self.dominating
            if not (const > 0 and 0 < r < 1):
                raise PreconditionError("dominating tail must have const > 0 and 0 < ratio < 1")

    @classmethod
    def parse(cls, text: str) -> "EpsilonSchedule":
        text = text.strip().lower()
        if text == "pow2":
            return cls("pow2", Fraction(1, 2))
        if text.startswith("geometric:"):
            return cls(text, Fraction(text.split(":", 1)[1]))
        raise PreconditionError(f"unknown epsilon rule {text!r}", "unknown epsilon rule")

    def eps(self, n: int):
        if n < 2:
            raise ValueError("epsilon schedule starts at n = 2")
        if self.custom is None:
            return self.ratio ** n
        value = self.custom(n)
        const, r = self.dominating
        if not 0 < value <= const * r ** n:
            raise PreconditionError(f"custom eps_{n} = {value} escapes its dominating tail",
                                    "schedule lacks convergence certificate")
        if n > 2 and value > self.custom(n - 1):
            raise PreconditionError("custom schedule is not decreasing")
        return value

    def series_limit(self) -> Fraction:
        """``sum_{n>=2} (2n+1) r^n = (1+r)/(1-r)^2 - 1 - 3r`` for the governing ratio."""
        r = self.ratio if self.custom is None else self.dominating[1]
        total = (1 + r) / (1 - r) ** 2 - 1 - 3 * r
        return total if self.custom is None else total * self.dominating[0]

    def partial_sum(self, upto: int) -> Fraction:
        return sum((Fraction(2 * n + 1) * self.eps(n) for n in range(2, upto + 1)), Fraction(0))


@dataclass(frozen=True)
class RegroupResult:
    n_seq: tuple[int, ...]            # n_1 = 0 < n_2 < ... < n_{K'+1} = K
    superblocks: tuple[tuple[int, ...], ...]
    operator: TruncatedBlockOperator
    coordinate_map: tuple[int, ...]   # original flat coordinate -> regrouped coordinate
    schedule: EpsilonSchedule

    @property
    def merged(self) -> bool:
        return any(len(sb) > 1 for sb in self.superblocks)


def regroup_blocks(c: TruncatedBlockOperator, schedule: EpsilonSchedule | None = None
                   ) -> RegroupResult:
    """Merge X blocks into superblocks so that ``||C P_n||, ||P_n C|| < eps_n`` for ``n >= 2``.

    ``n_k`` is the smallest admissible index after ``n_{k-1}`` (greedy);
    superblock ``k`` is ``X_{n_k+1} + ... + X_{n_{k+1}}``.  Superblocks of
    unequal size are padded with zero coordinates to a common width.
    """
    schedule = schedule or EpsilonSchedule("pow2")
    K = c.K
    decay = {n: max(cp, pc) for n, cp, pc in band_projection_decay(c)}
    extent = c.support_extent()
    seq = [0]
    k = 2
    while seq[-1] < K:
        eps = schedule.eps(k)
        nxt = next((n for n in range(seq[-1] + 1, K + 1) if decay[n] < eps), None)
        if nxt is None:
            raise ScheduleUnreachableError(extent + 2)
        seq.append(nxt)
        k += 1
    supers = tuple(tuple(range(seq[t] + 1, seq[t + 1] + 1)) for t in range(len(seq) - 1))
    new_count = len(supers)
    where = {}
    for t, sb in enumerate(supers, start=1):
        for b in sb:
            where[b] = t
    if new_count < 2 or (extent >= 1 and where[extent] >= new_count):
        raise ScheduleUnreachableError(extent + 2)

    part = c.partition
    q = part.x_dim
    width = q * max(len(sb) for sb in supers)
    new_part = BlockPartition(part.y_dim, width, new_count, part.p)
    cmap = list(range(part.y_dim))
    for t, sb in enumerate(supers, start=1):
        base = part.y_dim + (t - 1) * width
        for pos, _ in enumerate(sb):
            cmap.extend(base + pos * q + r for r in range(q))

    if width == q:
        op = TruncatedBlockOperator(new_part, dict(c.blocks))
    else:
        flat = c.flatten()
        zero = Fraction(0) if flat.kind == EXACT else 0.0
        grid = [[zero] * new_part.dim for _ in range(new_part.dim)]
        for r, row in enumerate(flat.data):
            gr = grid[cmap[r]]
            for s, v in enumerate(row):
                if v:
                    gr[cmap[s]] = v
        op = TruncatedBlockOperator.from_dense(new_part, Matrix.from_rows(grid, flat.kind))
    return RegroupResult(tuple(seq), supers, op, tuple(cmap), schedule)


def schedule_holds(c: TruncatedBlockOperator, schedule: EpsilonSchedule) -> bool:
    """``max(||C P_n||, ||P_n C||) < eps_n`` for every ``n = 2..K``."""
    return all(max(cp, pc) < schedule.eps(n) for n, cp, pc in band_projection_decay(c) if n >= 2)


def dominance_pattern_holds(c: TruncatedBlockOperator, schedule: EpsilonSchedule) -> bool:
    """``||C_ij|| < eps_max(i,j)`` whenever ``max(i, j) >= 2``."""
    p = c.partition.p
    return all(block_norm(blk, p) < schedule.eps(max(i, j))
               for (i, j), blk in c.blocks.items() if max(i, j) >= 2)


# -- pipeline ---------------------------------------------------------------


def end_to_end(c: TruncatedBlockOperator | Matrix, partition: BlockPartition | None = None,
               pair: EmbeddingPair | None = None, schedule: EpsilonSchedule | None = None,
               tolerance: float = FLOAT_TOLERANCE) -> CommutatorCertificate:
    """Regroup, build ``B`` and ``A``, verify the window identity, attest the norm bounds.

    The certificate's ``C`` is the regrouped (possibly zero-padded) operator;
    ``extras['coordinate_map']`` sends original coordinates into it.
    """
    if isinstance(c, Matrix):
        if partition is None:
            raise PreconditionError("a dense C needs a partition")
        c = TruncatedBlockOperator.from_dense(partition, c)
    if not c.is_nonnegative():
        raise PreconditionError("C has a negative entry", "C is not positive")
    _check_window_support(c)
    p = c.partition.p
    pair = (pair or auto_embedding(c.partition.y_dim, c.partition.x_dim)).validate(tolerance)
    if pair.q != c.partition.x_dim or pair.m != c.partition.y_dim:
        raise ShapeError("embedding pair does not match the partition")

    regroup = regroup_blocks(c, schedule)
    op = regroup.operator
    work_pair = pair.padded(op.partition.x_dim)
    B = build_B(work_pair, op.partition)
    A = build_A(op, work_pair)
    verdict = verify_commutator_window(A, B, op, tolerance)
    if not verdict.ok:
        raise VerificationError(f"window identity fails at block {verdict.offending_block}",
                                verdict.offending_block)

    dom = dominating_matrix_U(op)
    s_norm = operator_norm(work_pair.S, p)
    t_norm = operator_norm(work_pair.T, p)
    factor = max(s_norm, 1) * t_norm
    dominated, worst = domination_report(A, dom, factor)
    flat_A = A.flatten()
    chain = None
    if p in (1, math.inf, 2):
        u1, uinf = norm_1(dom.U), norm_inf(dom.U)
        u_upper = u1 if p == 1 else uinf if p == math.inf else interpolation_bound(u1, uinf, 2)
        a_norm = operator_norm(flat_A, p)
        slack = 0 if (p != 2 and flat_A.kind == EXACT and dom.U.kind == EXACT) else DOMINATION_SLACK
        chain = bool(a_norm <= factor * u_upper + slack)

    def num(x):
        return str(x) if isinstance(x, Fraction) else float(x)

    extras = {
        "p": p_to_str(p),
        "n_seq": list(regroup.n_seq),
        "superblocks": [list(sb) for sb in regroup.superblocks],
        "coordinate_map": list(regroup.coordinate_map),
        "partition": op.partition.to_json(),
        "window_blocks": [verdict.block_rows, verdict.block_cols],
        "schedule": regroup.schedule.rule,
        "S_norm": num(s_norm),
        "T_norm": num(t_norm),
        "c_total": num(dom.total),
        "U_norm_1": num(norm_1(dom.U)),
        "U_norm_inf": num(norm_inf(dom.U)),
        "domination_holds": dominated,
        "domination_worst_excess": num(worst) if worst is not None else None,
        "norm_chain_holds": chain,
    }
    return make_certificate(A.flatten(), B.flatten(), op.flatten(), "pelczynski",
                            window=verdict.flat_window, tolerance=tolerance, extras=extras)
