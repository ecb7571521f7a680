"""Planar link diagrams in PD notation.

Slot convention: ``X(i, j, k, l)`` lists the four arcs counterclockwise,
starting from the incoming under-strand. The 0-smoothing (the A-smoothing
of the Kauffman bracket) joins slots (0,1) and (2,3); the 1-smoothing joins
(0,3) and (1,2). A crossing is
positive when the over-strand runs from slot 3 to slot 1 (left to right
across the under-strand).

Each crossing carries an arrow: +1 means the arrow points from the
smoothing arc through slot 0 towards the one through slot 2, −1 reverses it.
Crossingless components are free loops, each with its own arc id.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Sequence

ZERO_PAIRS = ((0, 1), (2, 3))
ONE_PAIRS = ((0, 3), (1, 2))


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    slots: tuple[int, int, int, int]
    arrow: int = 1
    sign: int = 0  # 0 until orientations are known

    def pairs(self, bit: int) -> tuple[tuple[int, int], tuple[int, int]]:
        return ONE_PAIRS if bit else ZERO_PAIRS


@dataclass(frozen=True)
class Resolution:
    state: tuple[int, ...]
    circles: tuple[frozenset[int], ...]
    circle_of: dict[int, int] = field(compare=False, repr=False)

    def circle_count(self) -> int:
        return len(self.circles)

    def incidence(self, diagram: "Diagram", c: int) -> tuple[int, int]:
        """Circles touched by the two smoothing arcs of crossing ``c``."""
        x = diagram.crossings[c]
        p, q = x.pairs(self.state[c])
        return self.circle_of[x.slots[p[0]]], self.circle_of[x.slots[q[0]]]


class _UnionFind:
    def __init__(self, items: Iterable[int]) -> None:
        self.parent = {i: i for i in items}

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...] = ()
    loops: tuple[int, ...] = ()

    # -- structure ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def arcs(self) -> tuple[int, ...]:
        return tuple(sorted({a for x in self.crossings for a in x.slots} | set(self.loops)))

    @cached_property
    def ends(self) -> dict[int, tuple[tuple[int, int], ...]]:
        """arc -> the (crossing, slot) positions where it ends."""
        out: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(self.crossings):
            for s, a in enumerate(x.slots):
                out.setdefault(a, []).append((ci, s))
        return {a: tuple(v) for a, v in out.items()}

    def other_end(self, c: int, s: int) -> tuple[int, int]:
        a = self.crossings[c].slots[s]
        e = self.ends[a]
        return e[1] if e[0] == (c, s) else e[0]

    def validate(self) -> None:
        for a in self.loops:
            if a in self.ends:
                raise DiagramError(f"loop arc {a} also used at a crossing")
        if len(set(self.loops)) != len(self.loops):
            raise DiagramError("repeated loop arc id")
        for a, e in self.ends.items():
            if len(e) != 2:
                where = ", ".join(f"crossing {c + 1}" for c, _ in e)
                raise DiagramError(f"arc {a} used {len(e)} times ({where}); expected 2")
        for ci, x in enumerate(self.crossings):
            if x.arrow not in (1, -1):
                raise DiagramError(f"crossing {ci + 1}: arrow must be ±1")
        genus = self.genus_defect()
        if genus:
            raise DiagramError(f"slot data is not planar (Euler characteristic defect {genus})")

    # -- planarity -----------------------------------------------------------

    @cached_property
    def faces(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Faces as cycles of corners ``(crossing, k)``; corner k lies between slots k and k+1."""
        seen: set[tuple[int, int]] = set()
        faces = []
        for c in range(self.n):
            for s in range(4):
                if (c, s) in seen:
                    continue
                cyc = []
                d = (c, s)
                while d not in seen:
                    seen.add(d)
                    c2, s2 = self.other_end(*d)
                    cyc.append((c2, s2))
                    d = (c2, (s2 + 1) % 4)
                faces.append(tuple(cyc))
        return tuple(faces)

    def face_arcs(self, face: Sequence[tuple[int, int]]) -> list[int]:
        return [self.crossings[c].slots[s] for c, s in face]

    @cached_property
    def projection_components(self) -> tuple[frozenset[int], ...]:
        """Connected components of the crossing graph, as sets of crossing indices."""
        uf = _UnionFind(range(self.n))
        for a, e in self.ends.items():
            uf.union(e[0][0], e[1][0])
        groups: dict[int, set[int]] = {}
        for c in range(self.n):
            groups.setdefault(uf.find(c), set()).add(c)
        return tuple(frozenset(g) for g in sorted(groups.values(), key=min))

    def genus_defect(self) -> int:
        """Σ over projection components of (2 − V + E − F); zero iff planar."""
        comp_of = {}
        for k, comp in enumerate(self.projection_components):
            for c in comp:
                comp_of[c] = k
        nfaces = [0] * len(self.projection_components)
        for f in self.faces:
            nfaces[comp_of[f[0][0]]] += 1
        return sum(2 - len(comp) + 2 * len(comp) - nfaces[k]
                   for k, comp in enumerate(self.projection_components))

    # -- orientation -------------------------------------------------------

    @cached_property
    def link_components(self) -> tuple[tuple[int, ...], ...]:
        """Arc cycles of the link, each listed in traversal order (oriented)."""
        return tuple(comp for comp, _ in self._orient())

    @cached_property
    def heads(self) -> dict[int, tuple[int, int]]:
        """arc -> the (crossing, slot) it runs into."""
        out = {}
        for _, h in self._orient():
            out.update(h)
        return out

    def _orient(self) -> list[tuple[tuple[int, ...], dict[int, tuple[int, int]]]]:
        remaining = set(self.ends)
        result = []
        while remaining:
            start = min(remaining)
            # collect the cycle unoriented first
            comp = []
            a = start
            c, s = self.ends[a][0]
            prev_end = self.ends[a][1]
            # walk: from end (c,s) of arc a, go straight through crossing
            cycle_ends: list[tuple[int, tuple[int, int], tuple[int, int]]] = []
            tail, head = prev_end, (c, s)
            while True:
                comp.append(a)
                cycle_ends.append((a, tail, head))
                hc, hs = head
                nxt_tail = (hc, (hs + 2) % 4)
                a = self.crossings[hc].slots[nxt_tail[1]]
                e = self.ends[a]
                head = e[1] if e[0] == nxt_tail else e[0]
                tail = nxt_tail
                if a == start:
                    break
            # decide direction from any under-slot
            forward = None
            for _, t, h in cycle_ends:
                if h[1] == 0 or t[1] == 2:
                    forward = True
                    break
                if h[1] == 2 or t[1] == 0:
                    forward = False
                    break
            if forward is None:
                # never under: orient the over-strand 3 -> 1 at its first crossing
                first = min(cycle_ends, key=lambda x: (x[2][0], x[1][0]))
                forward = first[2][1] == 3
            if not forward:
                cycle_ends = [(a, h, t) for a, t, h in reversed(cycle_ends)]
            heads = {}
            for a, t, h in cycle_ends:
                if h[1] == 2 or t[1] == 0:
                    raise DiagramError(f"crossing {h[0] + 1}: under-strand orientation is inconsistent")
                heads[a] = h
            remaining -= set(comp)
            result.append((tuple(a for a, _, _ in cycle_ends), heads))
        return result

    def crossing_sign(self, c: int) -> int:
        x = self.crossings[c]
        h = self.heads[x.slots[3]]
        return 1 if h == (c, 3) else -1

    def signed(self) -> "Diagram":
        """Copy with crossing signs filled in from the orientation."""
        xs = tuple(replace(x, sign=self.crossing_sign(c)) for c, x in enumerate(self.crossings))
        return Diagram(xs, self.loops)

    def component_count(self) -> int:
        return len(self.link_components) + len(self.loops)

    # -- resolutions -------------------------------------------------------

    def resolve(self, state: Sequence[int]) -> Resolution:
        if len(state) != self.n:
            raise DiagramError(f"state has {len(state)} entries for {self.n} crossings")
        uf = _UnionFind(self.arcs)
        for bit, x in zip(state, self.crossings):
            for p, q in x.pairs(bit):
                uf.union(x.slots[p], x.slots[q])
        groups: dict[int, set[int]] = {}
        for a in self.arcs:
            groups.setdefault(uf.find(a), set()).add(a)
        circles = tuple(frozenset(g) for g in sorted(groups.values(), key=min))
        circle_of = {a: i for i, g in enumerate(circles) for a in g}
        return Resolution(tuple(state), circles, circle_of)

    def with_arrow(self, c: int, arrow: int) -> "Diagram":
        xs = list(self.crossings)
        xs[c] = replace(xs[c], arrow=arrow)
        return Diagram(tuple(xs), self.loops)

    def to_pd(self) -> str:
        parts = []
        if self.loops:
            parts.append("loops=" + ",".join(map(str, self.loops)))
        parts += ["X({},{},{},{})".format(*x.slots) for x in self.crossings]
        parts += [f"arrow c{c + 1}=-" for c, x in enumerate(self.crossings) if x.arrow == -1]
        return " ".join(parts)


def writhe_data(d: Diagram) -> tuple[int, int]:
    signs = [d.crossing_sign(c) for c in range(d.n)]
    return signs.count(1), signs.count(-1)


_TOKEN = re.compile(
    r"circles=(?P<circles>\d+)"
    r"|X\(\s*(?P<x>-?\d+\s*,\s*-?\d+\s*,\s*-?\d+\s*,\s*-?\d+)\s*\)"
    r"|arrow\s+c(?P<ac>\d+)\s*=\s*(?P<av>[+-])"
    r"|loops=(?P<loops>\d+(?:,\d+)*)"
)


def parse_pd(text: str) -> Diagram:
    """Parse PD text; see the module docstring for the slot convention.

    ``circles=k`` adds k free loops with fresh arc ids; ``loops=7,9`` names
    them explicitly. ``arrow cN=-`` flips the arrow of crossing N (1-based).
    """
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    crossings: list[tuple[int, int, int, int]] = []
    arrows: dict[int, int] = {}
    nloops = 0
    named_loops: list[int] = []
    stripped = re.sub(r"\s*([(),=])\s*", r"\1", body)
    stripped = re.sub(r"arrow\s+c", "arrow c", stripped)
    i = 0
    while i < len(stripped):
        if stripped[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(stripped, i)
        if not m:
            snippet = stripped[i:i + 20].split()[0] if stripped[i:].split() else stripped[i:]
            raise DiagramError(f"malformed token {snippet!r}")
        if m.group("circles") is not None:
            nloops += int(m.group("circles"))
        elif m.group("x") is not None:
            crossings.append(tuple(int(v) for v in m.group("x").split(",")))  # type: ignore[arg-type]
        elif m.group("ac") is not None:
            arrows[int(m.group("ac"))] = 1 if m.group("av") == "+" else -1
        else:
            named_loops += [int(v) for v in m.group("loops").split(",")]
        i = m.end()
    for c in arrows:
        if not 1 <= c <= len(crossings):
            raise DiagramError(f"arrow override for missing crossing c{c}")
    top = max([a for x in crossings for a in x] + named_loops + [0])
    loops = tuple(named_loops) + tuple(range(top + 1, top + 1 + nloops))
    d = Diagram(
        tuple(Crossing(x, arrows.get(c + 1, 1)) for c, x in enumerate(crossings)),
        loops,
    )
    d.validate()
    return d.signed()


def braid_closure(word: Sequence[int], strands: int) -> Diagram:
    """Closure of a braid word; letter ``±i`` is σ_i^{±1} (1-based).

    Strands run upward. σ_i is a positive crossing. Strands that never cross
    become free loops.
    """
    labels = list(range(1, strands + 1))
    nxt = strands + 1
    raw = []
    for letter in word:
        i = abs(letter) - 1
        if not 0 <= i < strands - 1:
            raise DiagramError(f"braid letter {letter} out of range for {strands} strands")
        bl, br = labels[i], labels[i + 1]
        tl, tr = nxt, nxt + 1
        nxt += 2
        if letter > 0:
            # over strand runs bottom-left to top-right
            raw.append((br, tr, tl, bl))
        else:
            raw.append((bl, br, tr, tl))
        labels[i], labels[i + 1] = tl, tr
    close = {top: bottom for bottom, top in zip(range(1, strands + 1), labels)}
    crossings = tuple(Crossing(tuple(close.get(a, a) for a in x)) for x in raw)  # type: ignore[misc]
    used = {a for x in crossings for a in x.slots}
    loops = tuple(a for a in range(1, strands + 1) if a not in used)
    d = Diagram(crossings, loops)
    d.validate()
    return d.signed()
