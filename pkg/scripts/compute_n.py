"""Evaluate n on popped 2-knot movies.

    python scripts/compute_n.py                      # bundled movies
    python scripts/compute_n.py path/to/a.movie ...
"""

import sys
import time
from pathlib import Path

from oddkh.cobordism import ComplexCache
from oddkh.corpus import corpus_root
from oddkh.twoknot import TwoKnotError, load_popped_movie, two_knot_record


def main(argv: list[str]) -> int:
    paths = [Path(a) for a in argv] or sorted((corpus_root() / "movies").glob("*.movie"))
    bad = 0
    for path in paths:
        try:
            m = load_popped_movie(path)
        except TwoKnotError:
            continue  # closed surfaces and other shapes
        t0 = time.perf_counter()
        rec = two_knot_record(m, ComplexCache())
        dt = time.perf_counter() - t0
        oracle = "-" if rec["oracle"] is None else rec["oracle"]
        print(f"{rec['movie']:<20} n = {rec['n']:<3} oracle {oracle:<3} "
              f"frames <= {m.movie.max_crossings()} crossings  {dt:.2f}s"
              + ("" if rec["match"] else "  MISMATCH"))
        bad += not rec["match"]
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
