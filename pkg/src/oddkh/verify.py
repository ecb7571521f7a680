"""The acceptance suite, runnable from the CLI and from pytest."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .cobordism import ComplexCache, compose, induced_homology_map, mapping_cone, move_map, movie_maps
from .corpus import load_diagrams, load_movie, load_pairs, movie_path
from .khcomplex import (Cube, build_complex, even_f2_complex, graded_euler, homology,
                        khovanov_homology, solve_edge_assignment)
from .movie import inverse_move
from .novikov import NovikovElement, novikov_invert
from .pfh_model import compare_move, elementary_cobordisms
from .twoknot import closed_surface_value, goeritz_det, kauffman_jones, load_popped_movie, n_invariant

DEFAULT_SEED = 20240611


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:>2}. {self.title}: {self.detail} ({self.seconds:.2f}s)"

    def record(self) -> dict:
        return {"criterion": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


def _timed(number: int, title: str, limit: float | None, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as e:  # a crash is a failed criterion, not a crashed suite
        ok, detail = False, f"{type(e).__name__}: {e}"
    dt = time.perf_counter() - t0
    if limit is not None and dt >= limit:
        ok, detail = False, f"{detail}; took {dt:.1f}s, limit {limit:g}s"
    return CriterionResult(number, title, ok, detail, dt)


# ---------------------------------------------------------------------------


def unknot_homology() -> tuple[bool, str]:
    d = load_diagrams()["unknot"]
    table = khovanov_homology(d)
    want = {(0, 1): 1, (0, -1): 1}
    ok = table.poincare() == want and not any(g.torsion for g in table.entries.values())
    return ok, f"Kh = {table.poincare()}"


def d_squared(max_crossings: int = 8) -> tuple[bool, str]:
    bad = []
    ds = load_diagrams(max_crossings)
    for name, d in ds.items():
        if not build_complex(d).check_d_squared():
            bad.append(name)
    return not bad, f"{len(ds)} diagrams" + (f", d^2 != 0 on {bad}" if bad else "")


def _same_complex(a, b) -> bool:
    if {hq: sorted(ks) for hq, ks in a.gens.items() if ks} != {hq: sorted(ks) for hq, ks in b.gens.items() if ks}:
        return False
    for hq in a.gens:
        src = a.gens[hq]
        tgt = a.gens.get((hq[0] + 1, hq[1]), [])
        for k in src:
            ea = {t: v % 2 for t, v in a.out[k].items() if v % 2}
            eb = {t: v % 2 for t, v in b.out[k].items() if v % 2}
            if ea != eb:
                return False
        del src, tgt
    return True


def mod2_agreement() -> tuple[bool, str]:
    bad = []
    ds = load_diagrams()
    for name, d in ds.items():
        if not _same_complex(build_complex(d, modulus=2), even_f2_complex(d)):
            bad.append(name)
    return not bad, f"{len(ds)} diagrams" + (f", differ on {bad}" if bad else "")


def jones_oracle() -> tuple[bool, str]:
    bad = [name for name, d in load_diagrams().items()
           if graded_euler(build_complex(d)) != kauffman_jones(d)]
    return not bad, "all match" if not bad else f"mismatch on {bad}"


def reidemeister_invariance() -> tuple[bool, str]:
    notes = []
    ok = True
    pairs = load_pairs()
    for name, movie in pairs.items():
        cache = ComplexCache()
        fwd = movie.moves[0]
        bwd = inverse_move(fwd)
        f, g = move_map(fwd, cache), move_map(bwd, cache)
        same = homology(f.source) == homology(f.target)
        cone = homology(mapping_cone(f))
        acyclic = not cone.entries
        trip = induced_homology_map(compose([f, g])).is_identity_up_to_sign()
        good = same and acyclic and trip != 0
        ok &= good
        if not good:
            notes.append(f"{name}: same={same} acyclic={acyclic} round-trip={trip}")
    return ok, f"{len(pairs)} pairs" + ("" if ok else "; " + "; ".join(notes))


def assignment_independence(seed: int = DEFAULT_SEED) -> tuple[bool, str]:
    bad, skipped = [], []
    rng = random.Random(seed)
    ds = load_diagrams()
    for name, d in ds.items():
        cube = Cube(d)
        base = solve_edge_assignment(cube)
        other = None
        for _ in range(32):
            cand = solve_edge_assignment(cube, seed=rng.randrange(1 << 30))
            if cand.signs != base.signs:
                other = cand
                break
        if other is None:
            skipped.append(name)  # no edges: the assignment is unique
            continue
        h1 = homology(build_complex(d, assignment=base, cube=cube))
        h2 = homology(build_complex(d, assignment=other, cube=cube))
        if h1 != h2:
            bad.append(name)
    detail = f"{len(ds) - len(skipped)} diagrams with two assignments"
    if skipped:
        detail += f" (unique assignment: {skipped})"
    if bad:
        detail += f"; differ on {bad}"
    return not bad, detail


def closed_surfaces() -> tuple[bool, str]:
    s = closed_surface_value(load_movie("sphere_closed"))
    t = closed_surface_value(load_movie("torus_closed"))
    return s == 0 and t == 0, f"sphere -> {s}, torus -> {t}"


def unknotted_sphere() -> tuple[bool, str]:
    plain = n_invariant(load_popped_movie(movie_path("sphere")))
    padded = n_invariant(load_popped_movie(movie_path("sphere_r1_padded")))
    return plain == 1 and padded == 1, f"n = {plain}, with RI padding n = {padded}"


def spun_trefoil() -> tuple[bool, str]:
    m = load_popped_movie(movie_path("spun_trefoil"))
    n = n_invariant(m)
    oracle = goeritz_det(m.spun)
    big = m.movie.max_crossings()
    ok = n == oracle == 3 and big <= 10
    return ok, f"n = {n}, det(3_1) = {oracle}, largest frame {big} crossings"


def pfh_model(max_components: int = 5) -> tuple[bool, str]:
    moves = elementary_cobordisms(max_components)
    cache = ComplexCache()
    units = {}
    for kind, n, arrow in moves:
        for family in (False, True):
            u = compare_move(kind, n, arrow, family, cache).unit
            units[str(u)] = units.get(str(u), 0) + 1
    ok = set(units) <= {"1", "-1", "c", "-c"}
    return ok, f"{2 * len(moves)} comparisons, units {dict(sorted(units.items()))}"


def random_unit(rng: random.Random, cutoff: Fraction) -> NovikovElement:
    terms = {Fraction(0): rng.choice((1, -1))}
    for _ in range(rng.randint(1, 6)):
        e = Fraction(rng.randint(1, 40), rng.randint(1, 6))
        if e < cutoff:
            terms[e] = terms.get(e, 0) + rng.randint(-9, 9)
    return NovikovElement(terms, cutoff)


def novikov_inversion(seed: int = DEFAULT_SEED, count: int = 100,
                      truncation: Fraction = Fraction(64)) -> tuple[bool, str]:
    rng = random.Random(seed)
    one = NovikovElement.one(truncation)
    bad = 0
    for _ in range(count):
        a = random_unit(rng, truncation)
        if a * novikov_invert(a) != one:
            bad += 1
    return bad == 0, f"{count} units at truncation {truncation}, {bad} failures"


def reduced_relation() -> tuple[bool, str]:
    bad = []
    ds = load_diagrams()
    for name, d in ds.items():
        if not d.n and not d.loops:
            continue
        un = khovanov_homology(d).poincare()
        red = khovanov_homology(d, reduced=True).poincare()
        conv: dict[tuple[int, int], int] = {}
        for (h, q), r in red.items():
            for s in (1, -1):
                conv[(h, q + s)] = conv.get((h, q + s), 0) + r
        if {k: v for k, v in conv.items() if v} != un:
            bad.append(name)
    return not bad, f"{len(ds)} diagrams" + (f", fails on {bad}" if bad else "")


CRITERIA: list[tuple[int, str, float | None, Callable[..., tuple[bool, str]]]] = [
    (1, "unknot homology", 1.0, unknot_homology),
    (2, "d^2 = 0 up to 8 crossings", 30.0, d_squared),
    (3, "mod-2 agreement with even theory", None, mod2_agreement),
    (4, "Euler characteristic = Kauffman bracket", None, jones_oracle),
    (5, "Reidemeister invariance", 60.0, reidemeister_invariance),
    (6, "edge-assignment independence", None, assignment_independence),
    (7, "closed sphere and torus", None, closed_surfaces),
    (8, "unknotted sphere", None, unknotted_sphere),
    (9, "spun trefoil", 300.0, spun_trefoil),
    (10, "PFH unlink model", None, pfh_model),
    (11, "Novikov inversion", None, novikov_inversion),
    (12, "reduced/unreduced ranks over Q", None, reduced_relation),
]


def run_criterion(number: int, seed: int = DEFAULT_SEED, truncation: Fraction = Fraction(64)) -> CriterionResult:
    for num, title, limit, fn in CRITERIA:
        if num == number:
            if fn is assignment_independence:
                return _timed(num, title, limit, lambda: fn(seed))
            if fn is novikov_inversion:
                return _timed(num, title, limit, lambda: fn(seed, truncation=truncation))
            return _timed(num, title, limit, fn)
    raise KeyError(number)


def run_all(seed: int = DEFAULT_SEED, truncation: Fraction = Fraction(64)) -> list[CriterionResult]:
    return [run_criterion(num, seed, truncation) for num, *_ in CRITERIA]
