"""Growth of ||A|| ||B|| for diagonal factorizations of truncated weighted shifts.

    python3 scripts/weighted_shift_growth.py --n 1025 --family harmonic --out shift.csv
"""

import argparse
import csv
import sys
from dataclasses import dataclass

from poscomm.quasinilpotent import harmonic, shift_growth_table


@dataclass
class GrowthConfig:
    n: int = 1025
    family: str = "harmonic"
    p: str = "2"
    out: str | None = None


def weights(family, count):
    if family == "harmonic":
        return harmonic(count)
    if family == "inv-sqrt":
        return tuple(i ** -0.5 for i in range(1, count + 1))
    raise SystemExit(f"unknown family {family}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=GrowthConfig.n)
    ap.add_argument("--family", default=GrowthConfig.family, choices=["harmonic", "inv-sqrt"])
    ap.add_argument("--p", default=GrowthConfig.p)
    ap.add_argument("--out")
    cfg = GrowthConfig(**vars(ap.parse_args(argv)))

    sizes = sorted({2 ** t for t in range(1, cfg.n.bit_length()) if 2 ** t <= cfg.n} | {cfg.n})
    rows = shift_growth_table(weights(cfg.family, cfg.n - 1), sizes, cfg.p)
    fh = open(cfg.out, "w", newline="") if cfg.out else sys.stdout
    w = csv.writer(fh)
    w.writerow(["N", "sum_w", "normA_inf_times_normB_upper", "normC_inf"])
    for r in rows:
        w.writerow([r.n, repr(r.weight_sum), repr(r.product), repr(r.norm_c_inf)])
    if cfg.out:
        fh.close()


if __name__ == "__main__":
    main()
