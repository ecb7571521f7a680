"""Command line: ``oddkh {homology,jones,movie,n-invariant,verify}``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .cobordism import CobordismError, ComplexCache, compose, induced_homology_map, movie_maps
from .corpus import corpus_root
from .diagram import DiagramError, parse_pd
from .khcomplex import build_complex, graded_euler, khovanov_homology
from .laurent import LaurentPoly
from .movie import MovieError, parse_movie
from .twoknot import TwoKnotError, kauffman_jones, load_popped_movie, two_knot_record
from .verify import DEFAULT_SEED, run_all


class UsageError(Exception):
    pass


def _resolve(path: str, kind: str) -> Path:
    """A file path, or a bare corpus name such as ``trefoil``."""
    p = Path(path)
    if p.exists():
        return p
    sub, suffix = ("diagrams", ".pd") if kind == "pd" else ("movies", ".movie")
    for cand in (corpus_root() / sub / f"{path}{suffix}", corpus_root() / "pairs" / f"{path}{suffix}"):
        if cand.exists():
            return cand
    raise UsageError(f"no such file or corpus entry: {path}")


def _fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("truncation must be positive")
    return value


def _emit(args, records, text: str) -> None:
    print(json.dumps(records, indent=2) if args.json else text)


def cmd_homology(args) -> int:
    d = parse_pd(_resolve(args.input, "pd").read_text())
    table = khovanov_homology(d, reduced=args.reduced, modulus=2 if args.mod2 else 0, seed=args.seed)
    text = str(table).replace("Z^", "F2^") if args.mod2 else str(table)
    _emit(args, table.records(), text)
    return 0


def cmd_jones(args) -> int:
    d = parse_pd(_resolve(args.input, "pd").read_text())
    euler = graded_euler(build_complex(d, reduced=args.reduced))
    oracle = kauffman_jones(d)
    if args.reduced:
        # the reduced Euler characteristic times (q + 1/q) is the unreduced one
        match = euler * LaurentPoly({1: 1, -1: 1}) == oracle
    else:
        match = euler == oracle
    _emit(args, {"euler": str(euler), "kauffman": str(oracle), "match": match},
          f"graded Euler characteristic: {euler}\nKauffman bracket:           {oracle}\n"
          f"match: {'yes' if match else 'NO'}")
    return 0 if match else 1


def cmd_movie(args) -> int:
    path = _resolve(args.input, "movie")
    movie = parse_movie(path.read_text(), path.stem)
    cache = ComplexCache()
    maps = movie_maps(movie.moves, cache)
    if not maps:
        raise UsageError("movie has no moves")
    f = compose(maps)
    ind = induced_homology_map(f)
    records = []
    lines = [f"{movie.name}: {len(maps)} moves, degree {f.degree}, chi = {movie.euler_characteristic}"]
    for hq, m in sorted(ind.free.items()):
        rows = [[m.entries.get(i, {}).get(j, 0) for j in range(m.cols)] for i in range(m.rows)]
        records.append({"h": hq[0], "q": hq[1], "matrix": rows,
                        "torsion": ind.torsion.get(hq, [])})
        lines.append(f"  source (h, q) = {hq}: {rows}")
    for hq, t in sorted(ind.torsion.items()):
        if hq not in ind.free:
            records.append({"h": hq[0], "q": hq[1], "matrix": [], "torsion": t})
            lines.append(f"  source (h, q) = {hq}: torsion {t}")
    _emit(args, {"movie": movie.name, "degree": list(f.degree), "blocks": records}, "\n".join(lines))
    return 0


def cmd_n_invariant(args) -> int:
    rec = two_knot_record(load_popped_movie(_resolve(args.input, "movie")))
    oracle = "none" if rec["oracle"] is None else rec["oracle"]
    _emit(args, rec, f"{rec['movie']}: n = {rec['n']} (oracle {oracle}, "
                     f"{'match' if rec['match'] else 'MISMATCH'})")
    return 0 if rec["match"] else 1


def cmd_verify(args) -> int:
    results = run_all(seed=args.seed, truncation=args.truncation)
    ok = all(r.passed for r in results)
    _emit(args, [r.record() for r in results],
          "\n".join(r.line() for r in results) + f"\n{sum(r.passed for r in results)}/{len(results)} passed")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oddkh", description="Odd Khovanov homology and the 2-knot invariant n.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable records")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized choices (default %(default)s)")
    sub = p.add_subparsers(dest="verb", required=True)

    h = sub.add_parser("homology", parents=[common], help="homology table of a .pd file")
    h.add_argument("input")
    h.add_argument("--reduced", action="store_true")
    h.add_argument("--mod2", action="store_true", help="coefficients in F2")
    h.set_defaults(func=cmd_homology)

    j = sub.add_parser("jones", parents=[common], help="Euler characteristic vs Kauffman bracket")
    j.add_argument("input")
    j.add_argument("--reduced", action="store_true")
    j.set_defaults(func=cmd_jones)

    m = sub.add_parser("movie", parents=[common], help="induced map of a movie on homology")
    m.add_argument("input")
    m.set_defaults(func=cmd_movie)

    n = sub.add_parser("n-invariant", parents=[common], help="n of a popped 2-knot movie")
    n.add_argument("input")
    n.set_defaults(func=cmd_n_invariant)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance suite on the corpus")
    v.add_argument("--truncation", type=_fraction, default=Fraction(64),
                   help="Novikov truncation cutoff (default %(default)s)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DiagramError, MovieError, TwoKnotError, CobordismError, OSError) as e:
        kind = type(e).__name__
        if getattr(args, "json", False):
            print(json.dumps({"error": kind, "message": str(e)}), file=sys.stderr)
        else:
            print(f"oddkh {args.verb}: {kind}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
