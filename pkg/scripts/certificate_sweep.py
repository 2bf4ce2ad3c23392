"""Build certificates for a seeded batch of random inputs and tally the outcomes.

Every certificate is re-checked by the independent verifier before it is
counted.  Example:

    python3 scripts/certificate_sweep.py --count 200 --max-n 12 --seed 0
"""

import argparse
import json
import random
import time
from collections import Counter
from dataclasses import dataclass

from poscomm import generators as gen
from poscomm.certificate import verify_certificate
from poscomm.nilpotent import Obstruction, characterize_nilpotent_pair, construct_central_nilpotent
from poscomm.pelczynski import end_to_end
from poscomm.quasinilpotent import construct_diagonal_quasi


@dataclass
class SweepConfig:
    count: int = 200
    max_n: int = 12
    seed: int = 0


def sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    tally = Counter()
    t0 = time.perf_counter()
    for _ in range(cfg.count):
        c = gen.random_nilpotent(rng, rng.randint(2, cfg.max_n))
        for cert in (construct_central_nilpotent(c), construct_diagonal_quasi(c)):
            tally[cert.method] += verify_certificate(json.loads(cert.dumps())).ok
        pair = characterize_nilpotent_pair(c)
        if isinstance(pair, Obstruction):
            tally["obstruction" if pair.determined else "undetermined"] += 1
        else:
            tally["jordan"] += verify_certificate(json.loads(pair.dumps())).ok
        K = rng.randint(2, 6)
        op = gen.random_block_operator(rng, 1, 2, K, rng.choice([1, 2, "inf"]),
                                       support=rng.randint(0, K - 2))
        tally["pelczynski"] += verify_certificate(json.loads(end_to_end(op).dumps())).ok
    return {"seconds": round(time.perf_counter() - t0, 2), **dict(sorted(tally.items()))}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=SweepConfig.count)
    ap.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    args = ap.parse_args(argv)
    print(json.dumps(sweep(SweepConfig(args.count, args.max_n, args.seed)), indent=1))


if __name__ == "__main__":
    main()
