"""Commutator certificates and their independent re-check.

A certificate carries full matrices so that :func:`verify_certificate`
needs nothing but matrix multiplication to confirm ``AB - BA = C``.
Nothing in this module imports a construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import VerificationError
from .exact_linalg import EXACT, Matrix, nilpotency_index

METHODS = ("central_nilpotent", "jordan", "diagonal_quasi", "pelczynski")
DEFAULT_FLOAT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class CommutatorCertificate:
    A: Matrix
    B: Matrix
    C: Matrix
    method: str
    exact: bool
    residual_inf: Fraction | float
    A_diagonal: bool
    A_central_bound: Fraction | float | None
    B_nilpotency_index: int | None
    B_compact: bool = True
    # identity asserted on rows [0, window[0]) x cols [0, window[1]); None = everywhere
    window: tuple[int, int] | None = None
    tolerance: float = DEFAULT_FLOAT_TOLERANCE
    extras: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        res = str(self.residual_inf) if isinstance(self.residual_inf, Fraction) else self.residual_inf
        bound = self.A_central_bound
        if isinstance(bound, Fraction):
            bound = str(bound)
        return {
            "method": self.method,
            "exact": self.exact,
            "residual_inf": res,
            "tolerance": self.tolerance,
            "window": list(self.window) if self.window else None,
            "attestations": {
                "A_diagonal": self.A_diagonal,
                "A_central_bound": bound,
                "B_nilpotency_index": self.B_nilpotency_index,
                "B_compact": self.B_compact,
            },
            "extras": self.extras,
            "A": self.A.to_json(),
            "B": self.B.to_json(),
            "C": self.C.to_json(),
        }

    def dumps(self) -> str:
        return dumps(self.to_json())


def dumps(obj) -> str:
    """Canonical JSON text; identical inputs give identical bytes."""
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def _residual(a: Matrix, b: Matrix, c: Matrix, window):
    diff = a @ b - b @ a - c
    rows, cols = window if window else diff.shape
    worst = Fraction(0) if diff.kind == EXACT else 0.0
    where = None
    for i in range(rows):
        for j in range(cols):
            v = abs(diff.data[i][j])
            if v > worst:
                worst, where = v, (i, j)
    return worst, where


def make_certificate(A: Matrix, B: Matrix, C: Matrix, method: str, *, window=None,
                     tolerance: float = DEFAULT_FLOAT_TOLERANCE, extras=None,
                     check_nilpotency=True) -> CommutatorCertificate:
    """Assemble a certificate, computing residual and attestations.

    Raises :class:`VerificationError` if the identity fails; a construction
    that reaches this point with a bad pair has a bug.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if not (A.is_nonnegative() and B.is_nonnegative()):
        raise VerificationError(f"{method}: A or B has a negative entry")
    exact = A.kind == B.kind == C.kind == EXACT
    residual, where = _residual(A, B, C, window)
    if exact and residual != 0:
        raise VerificationError(f"{method}: AB - BA != C at {where}", where)
    scale = float(C.max_abs()) or 1.0
    if not exact and residual > tolerance * scale:
        raise VerificationError(f"{method}: residual {residual} exceeds tolerance at {where}", where)
    diag = A.is_diagonal()
    bound = max(A.diagonal(), default=A._zero()) if diag else None
    return CommutatorCertificate(
        A=A, B=B, C=C, method=method, exact=exact, residual_inf=residual,
        A_diagonal=diag, A_central_bound=bound,
        B_nilpotency_index=nilpotency_index(B) if check_nilpotency else None,
        window=tuple(window) if window else None, tolerance=tolerance,
        extras=dict(extras or {}),
    )


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    message: str
    location: tuple[int, int] | None = None


def verify_certificate(obj: dict, tolerance: float | None = None) -> VerifyResult:
    """Re-check a serialized certificate from its stored matrices alone.

    ``tolerance`` overrides the stored one and only matters for float data.
    """
    try:
        A = Matrix.from_json(obj["A"])
        B = Matrix.from_json(obj["B"])
        C = Matrix.from_json(obj["C"])
    except (KeyError, TypeError, ValueError) as exc:
        return VerifyResult(False, f"malformed certificate: {exc}")
    if not (A.is_square() and A.shape == B.shape == C.shape):
        return VerifyResult(False, "A, B, C must be square of equal size")
    for name, m in (("A", A), ("B", B)):
        for i, j, v in m.nonzeros():
            if v < 0:
                return VerifyResult(False, f"{name} has negative entry at {(i, j)}", (i, j))
    window = obj.get("window")
    if window is not None:
        window = (int(window[0]), int(window[1]))
        if not (0 <= window[0] <= C.rows and 0 <= window[1] <= C.cols):
            return VerifyResult(False, f"window {window} outside the matrix")
    exact = A.kind == B.kind == C.kind == EXACT
    tol = tolerance if tolerance is not None else float(obj.get("tolerance", DEFAULT_FLOAT_TOLERANCE))
    residual, where = _residual(A, B, C, window)
    if exact:
        if residual != 0:
            return VerifyResult(False, f"AB - BA differs from C at entry {where}", where)
    elif residual > tol * (float(C.max_abs()) or 1.0):
        return VerifyResult(False, f"residual {residual:.3e} exceeds tolerance at entry {where}", where)
    if bool(obj.get("exact")) and not exact:
        return VerifyResult(False, "certificate claims exactness but stores float matrices")
    att = obj.get("attestations", {})
    if att.get("A_diagonal") and not A.is_diagonal():
        return VerifyResult(False, "A is claimed diagonal but is not")
    idx = att.get("B_nilpotency_index")
    if idx is not None and nilpotency_index(B) != idx:
        return VerifyResult(False, f"B nilpotency index is not {idx}")
    span = f" on window {window}" if window else ""
    return VerifyResult(True, f"verified{span}: residual {residual}")


def load_certificate(obj: dict) -> CommutatorCertificate:
    att = obj.get("attestations", {})
    res = obj["residual_inf"]
    bound = att.get("A_central_bound")
    return CommutatorCertificate(
        A=Matrix.from_json(obj["A"]), B=Matrix.from_json(obj["B"]), C=Matrix.from_json(obj["C"]),
        method=obj["method"], exact=bool(obj["exact"]),
        residual_inf=Fraction(res) if isinstance(res, str) else float(res),
        A_diagonal=bool(att.get("A_diagonal")),
        A_central_bound=Fraction(bound) if isinstance(bound, str) else bound,
        B_nilpotency_index=att.get("B_nilpotency_index"),
        B_compact=bool(att.get("B_compact", True)),
        window=tuple(obj["window"]) if obj.get("window") else None,
        tolerance=float(obj.get("tolerance", DEFAULT_FLOAT_TOLERANCE)),
        extras=obj.get("extras", {}),
    )
