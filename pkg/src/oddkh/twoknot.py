"""The 2-knot invariant n and its classical oracles."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .cobordism import ComplexCache, compose, movie_maps
from .diagram import Diagram, DiagramError, _UnionFind, parse_pd, writhe_data
from .intmatrix import det
from .laurent import LaurentPoly
from .movie import Movie, MovieError, parse_movie


class TwoKnotError(ValueError):
    pass


@dataclass(frozen=True)
class PoppedMovie:
    """A disk ∅ -> unknot presenting a 2-knot with a small disk removed.

    ``spun`` optionally names the classical knot the 2-knot is spun from;
    its Goeritz determinant is the oracle for n.
    """

    movie: Movie
    name: str = "movie"
    expected: int | None = None
    spun: Diagram | None = None

    def __post_init__(self) -> None:
        frames = self.movie.frames
        if frames[0].n or frames[0].loops:
            raise TwoKnotError(f"{self.name}: first frame is not empty")
        last = frames[-1]
        if last.n or len(last.loops) != 1:
            raise TwoKnotError(f"{self.name}: last frame is not a crossingless unknot")


_META = re.compile(r"#\s*(expected|spun)\s*:\s*(.*)$")


def read_movie_metadata(text: str) -> dict[str, str]:
    out = {}
    for ln in text.splitlines():
        m = _META.match(ln.strip())
        if m:
            out[m.group(1)] = m.group(2).strip()
    return out


def load_popped_movie(path: str | Path, name: str | None = None) -> PoppedMovie:
    """Read a ``.movie`` file; ``# expected: N`` and ``# spun: <PD>`` lines are metadata."""
    path = Path(path)
    text = path.read_text()
    meta = read_movie_metadata(text)
    name = name or path.stem
    movie = parse_movie(text, name)
    return PoppedMovie(movie, name,
                       int(meta["expected"]) if "expected" in meta else None,
                       parse_pd(meta["spun"]) if "spun" in meta else None)


def _composite_on_one(movie: Movie, cache: ComplexCache | None = None) -> tuple[dict, object]:
    cache = cache or ComplexCache()
    maps = movie_maps(movie.moves, cache)
    start = cache(movie.frames[0])
    if not maps:
        return {(0, 0): 1}, start
    f = compose(maps)
    return f({(0, 0): 1}), f.target


def n_invariant(m: PoppedMovie, cache: ComplexCache | None = None) -> int:
    """|coefficient of 1| after pushing 1 in Kh(∅) through the popped movie."""
    image, target = _composite_on_one(m.movie, cache)
    for key, val in image.items():
        if target.degree_of(key) != (0, 1):
            raise TwoKnotError(f"{m.name}: composite lands in bidegree {target.degree_of(key)}, expected (0, 1)")
    return abs(image.get((0, 0), 0))


def closed_surface_value(movie: Movie, cache: ComplexCache | None = None) -> int:
    """The integer a closed-surface movie (∅ -> ∅) multiplies 1 by."""
    for fr in (movie.frames[0], movie.frames[-1]):
        if fr.n or fr.loops:
            raise TwoKnotError(f"{movie.name}: closed-surface movies start and end empty")
    image, _ = _composite_on_one(movie, cache)
    return image.get((0, 0), 0)


def two_knot_record(m: PoppedMovie, cache: ComplexCache | None = None) -> dict:
    n = n_invariant(m, cache)
    oracle = goeritz_det(m.spun) if m.spun is not None else m.expected
    match = oracle is None or n == oracle
    if m.expected is not None:
        match = match and n == m.expected
    return {"movie": m.name, "n": n, "oracle": oracle, "match": match}


def kauffman_jones(d: Diagram) -> LaurentPoly:
    """Unnormalised Jones polynomial from the Kauffman state sum.

    ⟨D⟩ = Σ_s A^{#A - #B} (-A^2 - A^-2)^{circles(s)} with the A-smoothing
    joining slots (0,1),(2,3); then (-A^3)^{-w}⟨D⟩ with A^2 -> -q^{-1}.
    Circles are counted with a private union-find so this stays independent
    of the cube code.
    """
    n = d.n
    loop = LaurentPoly({2: -1, -2: -1})
    arcs = sorted({a for x in d.crossings for a in x.slots})
    bracket = LaurentPoly()
    for s in range(1 << n):
        uf = _UnionFind(arcs)
        na = 0
        for c, x in enumerate(d.crossings):
            b = (s >> c) & 1
            pairs = ((0, 3), (1, 2)) if b else ((0, 1), (2, 3))
            na += 1 - b
            for p, q in pairs:
                uf.union(x.slots[p], x.slots[q])
        circles = len({uf.find(a) for a in arcs}) + len(d.loops)
        bracket = bracket + LaurentPoly.monomial(na - (n - na)) * loop ** circles
    npos, nneg = writhe_data(d) if n else (0, 0)
    w = npos - nneg
    # (-A^3)^{-w}
    norm = LaurentPoly.monomial(-3 * w, (-1) ** (w % 2))
    poly = norm * bracket
    out: dict[int, int] = {}
    for e, c in poly.coeffs.items():
        if e % 2:
            raise ArithmeticError("odd power of A in the normalised bracket")
        k = e // 2  # A^{2k} = (-q)^{-k}
        out[-k] = out.get(-k, 0) + c * (-1) ** (k % 2)
    return LaurentPoly(out)


def checkerboard(d: Diagram) -> tuple[list[int], dict[int, int]]:
    """Two-colour the faces of a connected diagram.

    Returns the colour of each face (indexed as in ``d.faces``) and the
    face index of every corner. Faces at corners 0 and 2 of a crossing share
    a colour, those at 1 and 3 get the other.
    """
    face_of: dict[tuple[int, int], int] = {}
    for i, f in enumerate(d.faces):
        for corner in f:
            face_of[corner] = i
    colour: dict[int, int] = {}
    stack = [(face_of[(0, 0)], 0)]
    while stack:
        f, col = stack.pop()
        if f in colour:
            if colour[f] != col:
                raise DiagramError("faces admit no checkerboard colouring")
            continue
        colour[f] = col
        for c, s in d.faces[f]:
            for t in range(4):
                stack.append((face_of[(c, t)], col ^ ((t - s) % 2)))
    if len(colour) != len(d.faces):
        raise DiagramError("disconnected checkerboard data")
    return [colour[i] for i in range(len(d.faces))], face_of


def goeritz_matrix(d: Diagram) -> list[list[int]]:
    """Unreduced Goeritz matrix on the colour-0 faces.

    A crossing adds η = +1 between its two colour-0 faces when they sit at
    corners 0 and 2 (going counterclockwise from an under-strand to the
    over-strand), and −1 when they sit at corners 1 and 3.
    """
    colour, face_of = checkerboard(d)
    white = [i for i, col in enumerate(colour) if col == 0]
    pos = {f: k for k, f in enumerate(white)}
    g = [[0] * len(white) for _ in white]
    for c in range(d.n):
        a, b = (0, 2) if colour[face_of[(c, 0)]] == 0 else (1, 3)
        fa, fb = face_of[(c, a)], face_of[(c, b)]
        if fa == fb:
            continue  # nugatory
        eta = 1 if a == 0 else -1
        i, j = pos[fa], pos[fb]
        g[i][j] -= eta
        g[j][i] -= eta
        g[i][i] += eta
        g[j][j] += eta
    return g


def goeritz_det(d: Diagram) -> int:
    """|H_1| of the branched double cover of S^3 along the link (0 if infinite)."""
    if d.n == 0:
        return 1 if len(d.loops) == 1 else 0
    if d.loops or len(d.projection_components) > 1:
        return 0  # split link
    g = goeritz_matrix(d)
    minor = [row[1:] for row in g[1:]]
    return abs(det(minor))
