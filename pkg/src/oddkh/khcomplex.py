"""The odd Khovanov complex of a decorated diagram.

Vertices of the cube are integers whose bit ``n-1-c`` is the smoothing of
crossing ``c`` (crossing 0 is the most significant bit). Generators are
pairs ``(vertex, monomial)`` where the monomial is a bitmask over the circles
of that resolution.

The reduced complex uses the basis ``e_S = ∧_{i in S} (a_i - a_0)`` for sets S
avoiding the reference circle 0, the circle through the smallest arc.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable

from .diagram import Diagram, Resolution, writhe_data
from .exterior import merge_sign, monomial_from_indices, monomial_indices, popcount
from .intmatrix import IntMatrix, invariant_factors
from .laurent import LaurentPoly

Key = Hashable
LinearMap = Callable[[int], dict[int, int]]


class EdgeAssignmentError(RuntimeError):
    pass


class ChainComplexError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# the cube
# ---------------------------------------------------------------------------


def state_tuple(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> (n - 1 - c)) & 1 for c in range(n))


def crossing_bit(c: int, n: int) -> int:
    return 1 << (n - 1 - c)


@dataclass(frozen=True)
class EdgeMap:
    """Unsigned TQFT map along one cube edge, as images of every monomial."""

    kind: str  # "merge" or "split"
    images: tuple[dict[int, int], ...]

    def __call__(self, m: int) -> dict[int, int]:
        return self.images[m]


class Cube:
    """Resolutions and unsigned edge maps of a diagram, computed lazily."""

    def __init__(self, diagram: Diagram) -> None:
        self.diagram = diagram
        self.n = diagram.n
        self._res: dict[int, Resolution] = {}
        self._edges: dict[tuple[int, int], EdgeMap] = {}

    def resolution(self, v: int) -> Resolution:
        r = self._res.get(v)
        if r is None:
            r = self.diagram.resolve(state_tuple(v, self.n))
            self._res[v] = r
        return r

    def circles(self, v: int) -> int:
        return len(self.resolution(v).circles)

    def edge(self, v: int, c: int) -> EdgeMap:
        key = (v, c)
        e = self._edges.get(key)
        if e is None:
            e = self._compute_edge(v, c)
            self._edges[key] = e
        return e

    def _compute_edge(self, v: int, c: int) -> EdgeMap:
        bit = crossing_bit(c, self.n)
        if v & bit:
            raise ValueError(f"crossing {c} is already 1-smoothed at vertex {v}")
        w = v | bit
        rv, rw = self.resolution(v), self.resolution(w)
        x = self.diagram.crossings[c]
        # where each v-circle goes in w
        image = [rw.circle_of[min(circ)] for circ in rv.circles]
        nv = len(rv.circles)
        if len(rw.circles) < nv:
            images = []
            for m in range(1 << nv):
                s, mask = monomial_from_indices(image[i] for i in monomial_indices(m))
                images.append({mask: s} if s else {})
            return EdgeMap("merge", tuple(images))
        tail = rw.circle_of[x.slots[0]]
        head = rw.circle_of[x.slots[2]]
        if x.arrow == -1:
            head, tail = tail, head
        split = rv.circle_of[x.slots[0]]
        image[split] = tail
        images = []
        for m in range(1 << nv):
            s, mask = monomial_from_indices(image[i] for i in monomial_indices(m))
            out: dict[int, int] = {}
            if s:
                for g, coeff in ((head, 1), (tail, -1)):
                    t = merge_sign(1 << g, mask)
                    if t:
                        out[mask | (1 << g)] = out.get(mask | (1 << g), 0) + coeff * s * t
            images.append({k: val for k, val in out.items() if val})
        return EdgeMap("split", tuple(images))

    def edges(self) -> Iterable[tuple[int, int]]:
        for v in range(1 << self.n):
            for c in range(self.n):
                if not v & crossing_bit(c, self.n):
                    yield v, c

    def edge_index(self, v: int, c: int) -> int:
        return v * self.n + c

    def faces(self) -> Iterable[tuple[int, int, int]]:
        n = self.n
        for v in range(1 << n):
            for c1 in range(n):
                if v & crossing_bit(c1, n):
                    continue
                for c2 in range(c1 + 1, n):
                    if not v & crossing_bit(c2, n):
                        yield v, c1, c2


def _apply(f: LinearMap, vec: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for m, c in vec.items():
        for m2, c2 in f(m).items():
            out[m2] = out.get(m2, 0) + c * c2
    return {k: v for k, v in out.items() if v}


def _traverse(d: Diagram, state: tuple[int, ...], start: tuple[int, int]) -> list[tuple[int, int, int]]:
    """Walk the resolution circle through a smoothing passage.

    Returns passages ``(crossing, from_slot, to_slot)`` in traversal order,
    starting with the passage that enters crossing ``start[0]`` at slot ``start[1]``.
    """
    out = []
    c, s = start
    while True:
        x = d.crossings[c]
        pair = next(p for p in x.pairs(state[c]) if s in p)
        t = pair[1] if pair[0] == s else pair[0]
        out.append((c, s, t))
        c, s = d.other_end(c, t)
        if (c, s) == start:
            return out


def ladybug_type(d: Diagram, v: int, c1: int, c2: int) -> int:
    """Binary invariant of a face whose two composites vanish.

    Orient the circle as the boundary of the region holding the first chord
    and report whether the second chord's tail lies on the way from the first
    chord's tail to its head. Symmetric in the two chords.
    """
    n = d.n
    state = state_tuple(v, n)
    path = _traverse(d, state, (c1, 0))
    pos: dict[tuple[int, frozenset[int]], int] = {}
    left1 = None
    for i, (c, s, t) in enumerate(path):
        pos[(c, frozenset((s, t)))] = i
        if c == c1:
            here = t == (s + 1) % 4
            if left1 is not None and here != left1:
                raise EdgeAssignmentError(f"chord at crossing {c1} is not planar")
            left1 = here

    def where(c: int, pair: tuple[int, int]) -> int:
        key = (c, frozenset(pair))
        if key not in pos:
            raise EdgeAssignmentError("zero face is not a ladybug configuration")
        return pos[key]

    t1, h1 = where(c1, (0, 1)), where(c1, (2, 3))
    t2, h2 = where(c2, (0, 1)), where(c2, (2, 3))
    if d.crossings[c1].arrow == -1:
        t1, h1 = h1, t1
    if d.crossings[c2].arrow == -1:
        t2, h2 = h2, t2
    L = len(path)
    if not left1:
        t1, h1, t2, h2 = (L - p for p in (t1, h1, t2, h2))
    return int(0 < (t2 - t1) % L < (h1 - t1) % L)


FACE_COMMUTE, FACE_ANTI, FACE_ZERO = "commute", "anticommute", "zero"


def classify_face(cube: Cube, v: int, c1: int, c2: int) -> str:
    n = cube.n
    b1, b2 = crossing_bit(c1, n), crossing_bit(c2, n)
    e1a, e1b = cube.edge(v, c1), cube.edge(v | b1, c2)
    e2a, e2b = cube.edge(v, c2), cube.edge(v | b2, c1)
    zero = True
    relation = None
    for m in range(1 << cube.circles(v)):
        p = _apply(e1b, e1a(m))
        q = _apply(e2b, e2a(m))
        if not p and not q:
            continue
        zero = False
        if p == q:
            r = FACE_COMMUTE
        elif p == {k: -val for k, val in q.items()}:
            r = FACE_ANTI
        else:
            raise EdgeAssignmentError(f"face at vertex {v}, crossings {c1},{c2} neither commutes nor anticommutes")
        if relation is None:
            relation = r
        elif relation != r:
            raise EdgeAssignmentError(f"face at vertex {v} mixes commuting and anticommuting generators")
    return FACE_ZERO if zero else relation  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# F2 linear algebra for the sign solve
# ---------------------------------------------------------------------------


class F2System:
    """Incremental row reduction over F2 with bitset rows; pivot = highest column."""

    def __init__(self) -> None:
        self.pivots: dict[int, tuple[int, int]] = {}

    def add(self, mask: int, rhs: int) -> bool:
        while mask:
            top = mask.bit_length() - 1
            row = self.pivots.get(top)
            if row is None:
                self.pivots[top] = (mask, rhs)
                return True
            mask ^= row[0]
            rhs ^= row[1]
        if rhs:
            raise EdgeAssignmentError("inconsistent F2 system")
        return False

    def solve(self, nvars: int, free: Callable[[int], int] | None = None) -> list[int]:
        """Lexicographically smallest solution, or the one with given free values."""
        assigned = 0
        for j in range(nvars):
            if j in self.pivots:
                mask, rhs = self.pivots[j]
                val = rhs ^ (popcount(mask & assigned & ~(1 << j)) & 1)
            else:
                val = free(j) if free else 0
            if val:
                assigned |= 1 << j
        return [(assigned >> j) & 1 for j in range(nvars)]


def f2_rank(m: IntMatrix) -> int:
    sys_ = F2System()
    r = 0
    for row in m.entries.values():
        mask = 0
        for j, val in row.items():
            if val % 2:
                mask |= 1 << j
        try:
            r += sys_.add(mask, 0)
        except EdgeAssignmentError:  # pragma: no cover - rhs is always 0
            raise
    return r


# ---------------------------------------------------------------------------
# edge assignment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeAssignment:
    n: int
    signs: tuple[int, ...]  # indexed by v * n + c

    def sign(self, v: int, c: int) -> int:
        return self.signs[v * self.n + c]


# parity of the edge-sign product demanded by each face type: 1 means an odd
# number of -1 signs. Ladybug faces are resolved by their binary type.
LADYBUG_PARITY = (0, 1)


def face_parities(cube: Cube, ladybug: tuple[int, int] = LADYBUG_PARITY) -> list[tuple[int, int, int, int]]:
    d = cube.diagram
    out = []
    for v, c1, c2 in cube.faces():
        kind = classify_face(cube, v, c1, c2)
        if kind == FACE_COMMUTE:
            p = 1
        elif kind == FACE_ANTI:
            p = 0
        else:
            p = ladybug[ladybug_type(d, v, c1, c2)]
        out.append((v, c1, c2, p))
    return out


def _face_mask(cube: Cube, v: int, c1: int, c2: int) -> int:
    n = cube.n
    b1, b2 = crossing_bit(c1, n), crossing_bit(c2, n)
    idx = cube.edge_index
    return (1 << idx(v, c1)) | (1 << idx(v | b1, c2)) | (1 << idx(v, c2)) | (1 << idx(v | b2, c1))


def solve_edge_assignment(d: Diagram | Cube, seed: int | None = None,
                          ladybug: tuple[int, int] = LADYBUG_PARITY) -> EdgeAssignment:
    """Signs making every face anticommute.

    With ``seed=None`` the lexicographically smallest solution in the order
    of ``v * n + c`` is returned; otherwise free variables are drawn at random.
    """
    cube = d if isinstance(d, Cube) else Cube(d)
    n = cube.n
    system = F2System()
    for v, c1, c2, p in face_parities(cube, ladybug):
        system.add(_face_mask(cube, v, c1, c2), p)
    nvars = n << n if n else 0
    rng = random.Random(seed)
    bits = system.solve(nvars, None if seed is None else (lambda j: rng.randrange(2)))
    return EdgeAssignment(n, tuple(-1 if b else 1 for b in bits))


# ---------------------------------------------------------------------------
# graded complexes
# ---------------------------------------------------------------------------


@dataclass
class GradedComplex:
    """Bigraded free complex with differential of degree (1, 0).

    ``gens[(h, q)]`` lists generator keys; ``diff[(h, q)]`` maps block
    ``(h, q)`` to ``(h + 1, q)`` (rows: target, columns: source).
    """

    gens: dict[tuple[int, int], list[Key]]
    diff: dict[tuple[int, int], IntMatrix]
    modulus: int = 0
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        self.index: dict[Key, tuple[tuple[int, int], int]] = {}
        for hq, keys in self.gens.items():
            for i, k in enumerate(keys):
                self.index[k] = (hq, i)

    def dim(self, hq: tuple[int, int]) -> int:
        return len(self.gens.get(hq, ()))

    def rank(self) -> int:
        return len(self.index)

    def d(self, hq: tuple[int, int]) -> IntMatrix:
        m = self.diff.get(hq)
        if m is None:
            return IntMatrix.zeros(self.dim((hq[0] + 1, hq[1])), self.dim(hq))
        return m

    def qdegrees(self) -> list[int]:
        return sorted({q for _, q in self.gens})

    def hdegrees(self, q: int) -> list[int]:
        return sorted(h for h, qq in self.gens if qq == q)

    def check_d_squared(self) -> bool:
        for (h, q), m in self.diff.items():
            nxt = self.diff.get((h + 1, q))
            if nxt is None:
                continue
            prod = nxt @ m
            if self.modulus:
                prod = prod.mod(self.modulus)
            if not prod.is_zero():
                return False
        return True

    @cached_property
    def out(self) -> dict[Key, dict[Key, int]]:
        """Sparse differential as ``{source: {target: coefficient}}``."""
        out: dict[Key, dict[Key, int]] = {k: {} for k in self.index}
        for (h, q), m in self.diff.items():
            src, tgt = self.gens[(h, q)], self.gens[(h + 1, q)]
            for i, row in m.entries.items():
                for j, val in row.items():
                    out[src[j]][tgt[i]] = val
        return out

    def boundary(self, vec: dict[Key, int]) -> dict[Key, int]:
        res: dict[Key, int] = {}
        out = self.out
        for k, c in vec.items():
            for k2, val in out[k].items():
                res[k2] = res.get(k2, 0) + c * val
        if self.modulus:
            return {k: v % self.modulus for k, v in res.items() if v % self.modulus}
        return {k: v for k, v in res.items() if v}

    def degree_of(self, key: Key) -> tuple[int, int]:
        return self.index[key][0]

    def restrict(self, keep: Callable[[tuple[int, int]], bool]) -> "GradedComplex":
        gens = {hq: ks for hq, ks in self.gens.items() if keep(hq)}
        diff = {hq: m for hq, m in self.diff.items() if keep(hq) and keep((hq[0] + 1, hq[1]))}
        return GradedComplex(gens, diff, self.modulus, dict(self.meta))


def complex_from_entries(gens: dict[tuple[int, int], list[Key]],
                         entries: Iterable[tuple[Key, Key, int]], modulus: int = 0,
                         meta: dict | None = None) -> GradedComplex:
    """Assemble a complex from ``(source, target, coefficient)`` triples."""
    c = GradedComplex(gens, {}, modulus, meta or {})
    diff: dict[tuple[int, int], IntMatrix] = {}
    for src, tgt, val in entries:
        (hq, i) = c.index[src]
        (hq2, j) = c.index[tgt]
        if hq2 != (hq[0] + 1, hq[1]):
            raise ChainComplexError(f"differential entry {src} -> {tgt} has degree {hq} -> {hq2}")
        m = diff.get(hq)
        if m is None:
            m = diff[hq] = IntMatrix.zeros(c.dim(hq2), c.dim(hq))
        m.add_to(j, i, val)
    if modulus:
        diff = {hq: m.mod(modulus) for hq, m in diff.items()}
    c.diff = {hq: m for hq, m in diff.items() if not m.is_zero()}
    return c


def generator_degree(circles: int, k: int, weight: int, npos: int, nneg: int, reduced: bool) -> tuple[int, int]:
    h = weight - nneg
    q = circles - 2 * k + weight + npos - 2 * nneg - (1 if reduced else 0)
    return h, q


def reduced_basis_element(S: int) -> dict[int, int]:
    """Expand ``e_S = ∧_{i in S} (a_i - a_0)`` in monomials (circle 0 is the reference)."""
    vec = {0: 1}
    for i in monomial_indices(S):
        nxt: dict[int, int] = {}
        for m, c in vec.items():
            for g, coeff in ((i, 1), (0, -1)):
                s = merge_sign(m, 1 << g)  # append a generator on the right
                if s:
                    key = m | (1 << g)
                    nxt[key] = nxt.get(key, 0) + s * c * coeff
        vec = {m: c for m, c in nxt.items() if c}
    return vec


def build_complex(d: Diagram, reduced: bool = False, modulus: int = 0,
                  assignment: EdgeAssignment | None = None,
                  qrange: Iterable[int] | None = None,
                  cube: Cube | None = None) -> GradedComplex:
    """Odd Khovanov complex; ``modulus`` is 0 (integers) or 2.

    ``qrange`` restricts to the given quantum degrees (useful for chain maps
    that only need one grading).
    """
    if modulus not in (0, 2):
        raise ValueError("coefficients must be Z (0) or F2 (2)")
    cube = cube or Cube(d)
    if assignment is None:
        assignment = solve_edge_assignment(cube)
    npos, nneg = writhe_data(d) if d.n else (0, 0)

    def grading(v: int, nc: int, k: int) -> tuple[int, int]:
        return generator_degree(nc, k, popcount(v), npos, nneg, reduced)

    c = cube_complex(cube, assignment, range(1 << d.n), grading, qrange, reduced, modulus)
    c.meta.update({"diagram": d, "npos": npos, "nneg": nneg})
    return c


def cube_complex(cube: Cube, assignment: EdgeAssignment, vertices: Iterable[int],
                 grading: Callable[[int, int, int], tuple[int, int]],
                 qrange: Iterable[int] | None = None, reduced: bool = False,
                 modulus: int = 0) -> GradedComplex:
    """Complex spanned by the given cube vertices, with edges among them.

    ``grading(v, circles, monomial_length)`` gives the bidegree of a generator.
    """
    n = cube.n
    verts = sorted(set(vertices))
    vset = set(verts)
    qset = set(qrange) if qrange is not None else None
    gens: dict[tuple[int, int], list[Key]] = {}
    for v in verts:
        nc = cube.circles(v)
        for m in (range(0, 1 << nc, 2) if reduced else range(1 << nc)):
            hq = grading(v, nc, popcount(m))
            if qset is None or hq[1] in qset:
                gens.setdefault(hq, []).append((v, m))
    for ks in gens.values():
        ks.sort()
    present = {k for ks in gens.values() for k in ks}

    def entries():
        for v in verts:
            for c in range(n):
                bit = crossing_bit(c, n)
                if v & bit or (v | bit) not in vset:
                    continue
                w = v | bit
                e = cube.edge(v, c)
                eps = assignment.sign(v, c)
                for m in (range(0, 1 << cube.circles(v), 2) if reduced else range(1 << cube.circles(v))):
                    if (v, m) not in present:
                        continue
                    if reduced:
                        img = _apply(e, reduced_basis_element(m))
                        # triangular read-off: monomials avoiding circle 0
                        for m2, val in img.items():
                            if not m2 & 1:
                                yield (v, m), (w, m2), eps * val
                    else:
                        for m2, val in e(m).items():
                            yield (v, m), (w, m2), eps * val

    meta = {"reduced": reduced, "assignment": assignment, "cube": cube}
    return complex_from_entries(gens, entries(), modulus, meta)


def reduced_is_closed(d: Diagram, cube: Cube | None = None) -> bool:
    """Check that every edge map sends the reduced sub-basis into its span."""
    cube = cube or Cube(d)
    for v, c in cube.edges():
        e = cube.edge(v, c)
        for S in range(0, 1 << cube.circles(v), 2):
            img = _apply(e, reduced_basis_element(S))
            rebuilt: dict[int, int] = {}
            for m2, val in img.items():
                if not m2 & 1:
                    for m3, v3 in reduced_basis_element(m2).items():
                        rebuilt[m3] = rebuilt.get(m3, 0) + val * v3
            if {k: x for k, x in rebuilt.items() if x} != img:
                return False
    return True


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    rank: int
    torsion: tuple[int, ...] = ()

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion


@dataclass(frozen=True)
class HomologyTable:
    entries: dict[tuple[int, int], HomologyGroup]

    def __getitem__(self, hq: tuple[int, int]) -> HomologyGroup:
        return self.entries.get(hq, HomologyGroup(0))

    def total_rank(self) -> int:
        return sum(g.rank for g in self.entries.values())

    def poincare(self) -> dict[tuple[int, int], int]:
        return {hq: g.rank for hq, g in self.entries.items() if g.rank}

    def records(self) -> list[dict]:
        return [{"h": h, "q": q, "rank": g.rank, "torsion": list(g.torsion)}
                for (h, q), g in sorted(self.entries.items())]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return self.entries == other.entries

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        lines = []
        for (h, q), g in sorted(self.entries.items()):
            parts = [f"Z^{g.rank}"] if g.rank else []
            parts += [f"Z/{t}" for t in g.torsion]
            lines.append(f"h={h:>3} q={q:>3}  " + " + ".join(parts))
        return "\n".join(lines)


def _matrix_rank(m: IntMatrix, modulus: int) -> tuple[int, list[int]]:
    if m.is_zero():
        return 0, []
    if modulus == 2:
        return f2_rank(m), []
    inv = invariant_factors(m)
    return len(inv), [x for x in inv if x > 1]


def homology(c: GradedComplex, check: bool = True) -> HomologyTable:
    if check and not c.check_d_squared():
        raise ChainComplexError("d^2 != 0")
    entries: dict[tuple[int, int], HomologyGroup] = {}
    for q in c.qdegrees():
        hs = c.hdegrees(q)
        ranks: dict[int, tuple[int, list[int]]] = {}
        for h in hs:
            ranks[h] = _matrix_rank(c.d((h, q)), c.modulus)
        for h in hs:
            rk_out = ranks[h][0]
            rk_in, tors = ranks.get(h - 1, (0, []))
            free = c.dim((h, q)) - rk_out - rk_in
            g = HomologyGroup(free, tuple(tors))
            if not g.is_zero():
                entries[(h, q)] = g
    return HomologyTable(entries)


def graded_euler(c: GradedComplex) -> LaurentPoly:
    out: dict[int, int] = {}
    for (h, q), keys in c.gens.items():
        out[q] = out.get(q, 0) + (-1) ** (h % 2) * len(keys)
    return LaurentPoly(out)


def khovanov_homology(d: Diagram, reduced: bool = False, modulus: int = 0,
                      seed: int | None = None) -> HomologyTable:
    cube = Cube(d)
    asg = solve_edge_assignment(cube, seed=seed)
    return homology(build_complex(d, reduced, modulus, asg, cube=cube))


# ---------------------------------------------------------------------------
# the even theory over F2
# ---------------------------------------------------------------------------


def even_f2_complex(d: Diagram) -> GradedComplex:
    """Even Khovanov complex mod 2 on the subset-of-circles basis.

    Built without the exterior algebra: a subset S stands for the product of
    the marked generators x_i, i in S.
    """
    n = d.n
    npos, nneg = writhe_data(d) if n else (0, 0)
    res = [d.resolve(state_tuple(v, n)) for v in range(1 << n)]
    gens: dict[tuple[int, int], list[Key]] = {}
    for v in range(1 << n):
        nc = len(res[v].circles)
        for S in range(1 << nc):
            hq = generator_degree(nc, popcount(S), popcount(v), npos, nneg, False)
            gens.setdefault(hq, []).append((v, S))
    for ks in gens.values():
        ks.sort()

    def entries():
        for v in range(1 << n):
            rv = res[v]
            for c in range(n):
                bit = crossing_bit(c, n)
                if v & bit:
                    continue
                w = v | bit
                rw = res[w]
                x = d.crossings[c]
                img = [rw.circle_of[min(circ)] for circ in rv.circles]
                nc = len(rv.circles)
                merging = len(rw.circles) < nc
                if not merging:
                    p, q = rw.circle_of[x.slots[0]], rw.circle_of[x.slots[2]]
                    old = rv.circle_of[x.slots[0]]
                for S in range(1 << nc):
                    T = 0
                    dead = False
                    for i in monomial_indices(S):
                        if merging and T & (1 << img[i]):
                            dead = True
                        T |= 1 << img[i]
                    if dead:
                        continue
                    if merging:
                        yield (v, S), (w, T), 1
                    elif S >> old & 1:
                        yield (v, S), (w, T | (1 << p) | (1 << q)), 1
                    else:
                        yield (v, S), (w, T | (1 << p)), 1
                        yield (v, S), (w, T | (1 << q)), 1

    return complex_from_entries(gens, entries(), modulus=2, meta={"diagram": d})
