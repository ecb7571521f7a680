"""Run the acceptance criteria and print one line per criterion.

    python scripts/run_acceptance.py [--only 9 11] [--seed N]
"""

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from oddkh.verify import CRITERIA, DEFAULT_SEED, run_criterion


@dataclass
class Config:
    seed: int = DEFAULT_SEED
    truncation: Fraction = Fraction(64)
    only: list[int] = field(default_factory=list)


def main() -> int:
    p = argparse.ArgumentParser()
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--truncation", type=Fraction, default=Fraction(64))
    p.add_argument("--only", type=int, nargs="*", default=[])
    cfg = Config(**vars(p.parse_args()))

    numbers = cfg.only or [num for num, *_ in CRITERIA]
    failed = 0
    for num in numbers:
        r = run_criterion(num, cfg.seed, cfg.truncation)
        print(r.line(), flush=True)
        failed += not r.passed
    print(f"{len(numbers) - failed}/{len(numbers)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
