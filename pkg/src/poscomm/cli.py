"""``poscomm`` command line.

Exit codes: 0 success, 1 unparsable input, 2 violated precondition,
3 certificate rejected.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import generators
from .band_structure import band_decomposition
from .certificate import dumps, verify_certificate
from .errors import PoscommError, PreconditionError, VerificationError
from .exact_linalg import Matrix, parse_p
from .nilpotent import Obstruction, characterize_nilpotent_pair, construct_central_nilpotent, construct_jordan
from .pelczynski import (
    BlockPartition,
    EmbeddingPair,
    EpsilonSchedule,
    TruncatedBlockOperator,
    end_to_end,
    lp_embedding,
)
from .quasinilpotent import WeightData, construct_diagonal_quasi, harmonic, shift_growth_table

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 1, 2, 3
DEFAULT_MAX_DIM = 512

METHOD_NAMES = {
    "central-nilpotent": "central_nilpotent",
    "jordan": "jordan",
    "diagonal-quasi": "diagonal_quasi",
    "pelczynski": "pelczynski",
}


@dataclass
class RunConfig:
    subcommand: str
    method: str | None = None
    input: str | None = None
    output: str | None = None
    p: str | None = None
    tolerance: float | None = None
    seed: int = 0
    k: int | None = None
    weights: str | None = None
    embedding: str = "auto"
    eps: str = "pow2"
    n: int | None = None
    grid: int | None = None
    demo: str | None = None


class ParseError(PoscommError):
    pass


def _max_dim() -> int:
    return int(os.environ.get("POSCOMM_MAX_DIM", DEFAULT_MAX_DIM))


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_matrix(path: str) -> Matrix:
    try:
        if path.endswith(".csv"):
            m = Matrix.from_csv(Path(path).read_text())
        else:
            m = Matrix.from_json(_read_json(path))
    except ParseError:
        raise
    except (OSError, ValueError, TypeError) as exc:
        raise ParseError(f"cannot parse matrix {path}: {exc}") from exc
    if max(m.rows, m.cols) > _max_dim():
        raise PreconditionError(f"dimension {max(m.shape)} exceeds POSCOMM_MAX_DIM={_max_dim()}",
                                "dimension cap exceeded")
    return m


def _load_blocks(path: str) -> TruncatedBlockOperator:
    try:
        op = TruncatedBlockOperator.from_json(_read_json(path))
    except ParseError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"cannot parse block operator {path}: {exc}") from exc
    if op.partition.dim > _max_dim():
        raise PreconditionError(f"dimension {op.partition.dim} exceeds POSCOMM_MAX_DIM",
                                "dimension cap exceeded")
    return op


def _load_weights(path: str, n: int):
    obj = _read_json(path)
    try:
        d = obj["d"] if isinstance(obj, dict) else obj
        if isinstance(obj, dict) and "order" in obj:
            return WeightData.from_d(d, [int(i) for i in obj["order"]])
        return [Fraction(x) if not isinstance(x, float) else x for x in d]
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(f"cannot parse weights {path}: {exc}") from exc


def _emit(text: str, output: str | None):
    if output and output != "-":
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _construct(cfg: RunConfig) -> str:
    method = METHOD_NAMES.get(cfg.method or "")
    if method is None:
        raise ParseError(f"unknown method {cfg.method!r}")
    if method == "pelczynski":
        op = _load_blocks(cfg.input)
        if cfg.p is not None:
            part = op.partition
            op = TruncatedBlockOperator(BlockPartition(part.y_dim, part.x_dim, part.count, cfg.p),
                                        op.blocks)
        pair = None
        if cfg.embedding and cfg.embedding != "auto":
            try:
                pair = EmbeddingPair.from_json(_read_json(cfg.embedding))
            except (KeyError, ValueError, TypeError) as exc:
                raise ParseError(f"cannot parse embedding pair: {exc}") from exc
        tol = cfg.tolerance if cfg.tolerance is not None else 1e-12
        cert = end_to_end(op, pair=pair, schedule=EpsilonSchedule.parse(cfg.eps), tolerance=tol)
        return cert.dumps()

    c = _load_matrix(cfg.input)
    if method == "central_nilpotent":
        cert = construct_central_nilpotent(c)
    elif method == "jordan":
        if cfg.k is not None:
            cert = construct_jordan(c, cfg.k)
        else:
            cert = characterize_nilpotent_pair(c)
            if isinstance(cert, Obstruction):
                raise PreconditionError(cert.reason, cert.reason)
    else:
        weights = _load_weights(cfg.weights, c.rows) if cfg.weights else None
        kwargs = {"tolerance": cfg.tolerance} if cfg.tolerance is not None else {}
        cert = construct_diagonal_quasi(c, weights, **kwargs)
    return cert.dumps()


def _demo(cfg: RunConfig) -> str:
    if cfg.demo == "weighted-shift":
        n = cfg.n or 101
        if n < 2:
            raise PreconditionError("--n must be at least 2")
        kind = (cfg.weights or "harmonic").lower()
        if kind == "harmonic":
            w = harmonic(n - 1)
        elif kind == "inv-sqrt":
            w = tuple(i ** -0.5 for i in range(1, n))
        else:
            raise ParseError(f"unknown weight family {cfg.weights!r}")
        sizes = sorted({min(2 ** t, n) for t in range(1, n.bit_length() + 1)} | {n})
        sizes = [s for s in sizes if s >= 2]
        rows = shift_growth_table(w, sizes, parse_p(cfg.p or "2"))
        lines = ["N,sum_w,normA_inf_times_normB_upper,normC_inf"]
        lines += [f"{r.n},{r.weight_sum!r},{r.product!r},{r.norm_c_inf!r}" for r in rows]
        return "\n".join(lines) + "\n"
    if cfg.demo == "random-nilpotent":
        rng = random.Random(cfg.seed)
        m = generators.random_nilpotent(rng, cfg.n or 6)
        return dumps(m.to_json())
    raise ParseError(f"unknown demo {cfg.demo!r}")


def run(cfg: RunConfig) -> int:
    try:
        if cfg.subcommand == "decompose":
            dec = band_decomposition(_load_matrix(cfg.input))
            _emit(dumps(dec.to_json()), cfg.output)
        elif cfg.subcommand == "construct":
            _emit(_construct(cfg), cfg.output)
        elif cfg.subcommand == "verify":
            result = verify_certificate(_read_json(cfg.input), cfg.tolerance)
            print(("OK " if result.ok else "REJECTED ") + result.message,
                  file=sys.stdout if result.ok else sys.stderr)
            return EXIT_OK if result.ok else EXIT_VERIFY
        elif cfg.subcommand == "demo":
            _emit(_demo(cfg), cfg.output)
        elif cfg.subcommand == "embed":
            if cfg.n is None or cfg.grid is None:
                raise ParseError("embed needs --n and --grid")
            pair = lp_embedding(cfg.n, cfg.p or "2", cfg.grid).validate()
            out = pair.to_json()
            out.update({"n": cfg.n, "p": cfg.p or "2", "grid": cfg.grid})
            _emit(dumps(out), cfg.output)
        else:
            raise ParseError(f"unknown subcommand {cfg.subcommand!r}")
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition violated: {exc.hypothesis}: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poscomm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp, need_input=True):
        if need_input:
            sp.add_argument("--input", required=True)
        sp.add_argument("--output")
        sp.add_argument("--tolerance", type=float)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--p")

    common(sub.add_parser("decompose", help="band decomposition of a nilpotent matrix"))
    sp = sub.add_parser("construct", help="build and emit a commutator certificate")
    common(sp)
    sp.add_argument("--method", required=True, choices=sorted(METHOD_NAMES))
    sp.add_argument("--k", type=int)
    sp.add_argument("--weights")
    sp.add_argument("--embedding", default="auto")
    sp.add_argument("--eps", default="pow2")
    common(sub.add_parser("verify", help="re-check a certificate from its stored matrices"))
    sp = sub.add_parser("demo", help="demonstration tables")
    sp.add_argument("demo", choices=["weighted-shift", "random-nilpotent"])
    common(sp, need_input=False)
    sp.add_argument("--weights", default="harmonic")
    sp.add_argument("--n", type=int)
    sp = sub.add_parser("embed", help="l^p_n -> L^p[0,1] embedding pair on a grid")
    common(sp, need_input=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--grid", type=int, required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
