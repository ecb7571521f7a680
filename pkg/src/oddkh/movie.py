"""Movies: sequences of elementary moves between PD frames.

Grammar (one move per line, ``#`` starts a comment)::

    start <PD text, may continue on following lines>
    birth
    death cK              # K = arc id of a crossingless circle
    saddle A B +|-        # band between arcs A and B, arrow decoration
    r1+ A +|-             # kink of the given sign on arc A
    r1- C                 # remove the kink at crossing C
    r2+ A B               # push arc A over arc B
    r2- C1 C2
    r3 C1 C2 C3
    relabel 5:1 6:2       # rename arcs

Arc ids persist from frame to frame. Crossing ids are 1-based positions in
the current frame; new crossings are appended, removed ones close the gap.
Any move whose local picture is ambiguous accepts a trailing ``@k`` choosing
the k-th admissible placement (default 0).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .diagram import Crossing, Diagram, DiagramError, _UnionFind, parse_pd

ArcMap = dict[int, "int | None"]


class MovieError(ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class MoveResult:
    """One move applied to a frame.

    ``arcs_before`` / ``arcs_after`` send arcs of each frame to common labels
    (``None`` marks arcs that only exist inside the move's local picture).
    For Reidemeister moves ``local`` lists the crossings that appear or
    vanish (indices in the frame that has them); for RIII it lists the
    triangle, which sits at the same indices on both sides. A saddle also
    carries ``band``, the frame with the band crossing appended, and arc maps
    from it to both sides.
    """

    kind: str
    before: Diagram
    after: Diagram
    arcs_before: ArcMap
    arcs_after: ArcMap
    local: tuple[int, ...] = ()
    band: Diagram | None = None
    band_to_before: ArcMap = field(default_factory=dict)
    band_to_after: ArcMap = field(default_factory=dict)
    arrow: int = 1
    line: int = 0

    @property
    def text(self) -> str:
        return self.kind


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _fresh(d: Diagram, k: int) -> list[int]:
    top = max(d.arcs, default=0)
    return list(range(top + 1, top + 1 + k))


def _build(slots: Sequence[Sequence[int]], arrows: Sequence[int], loops: Iterable[int]) -> Diagram:
    d = Diagram(tuple(Crossing(tuple(s), a) for s, a in zip(slots, arrows)), tuple(sorted(loops)))  # type: ignore[arg-type]
    d.validate()
    return d.signed()


def _try(slots, arrows, loops) -> Diagram | None:
    try:
        return _build(slots, arrows, loops)
    except DiagramError:
        return None


def _identity(d: Diagram) -> ArcMap:
    return {a: a for a in d.arcs}


def _tail_end(d: Diagram, a: int) -> tuple[int, int]:
    h = d.heads[a]
    e = d.ends[a]
    return e[1] if e[0] == h else e[0]


def _has_face(d: Diagram, corners: set[int], size: int) -> bool:
    for f in d.faces:
        if len(f) == size and {c for c, _ in f} == corners:
            return True
    return False


def _pick(cands: list, index: int, what: str):
    if not cands:
        raise DiagramError(f"no admissible placement for {what}")
    if not 0 <= index < len(cands):
        raise DiagramError(f"{what}: placement @{index} requested, only {len(cands)} admissible")
    return cands[index]


def _split_arc(d: Diagram, a: int, new: int, slots: list[list[int]]) -> None:
    """Give the head end of arc ``a`` the new id (in place on ``slots``)."""
    c, s = d.heads[a]
    slots[c][s] = new


def reorient(d: Diagram, prefer: dict[tuple[int, int], bool] | None = None,
             strict: bool = False) -> Diagram:
    """Rebuild slot data so every under-strand enters at slot 0.

    Each component is traversed once; its direction follows the majority of
    ``prefer`` (end -> True when that end should be a head), defaulting to the
    first consistent choice. Rotating a crossing by two slots keeps both
    smoothings; the arrow is flipped so it keeps pointing at the same arc.
    With ``strict`` a component whose preferences disagree is an error.
    """
    prefer = prefer or {}
    slots = [list(x.slots) for x in d.crossings]
    arrows = [x.arrow for x in d.crossings]
    ends = d.ends
    seen: set[int] = set()
    head_of: dict[int, tuple[int, int]] = {}
    for start in sorted(ends):
        if start in seen:
            continue
        cyc = []
        a = start
        tail, head = ends[a][1], ends[a][0]
        while True:
            cyc.append((a, tail, head))
            seen.add(a)
            hc, hs = head
            nt = (hc, (hs + 2) % 4)
            a = d.crossings[hc].slots[nt[1]]
            e = ends[a]
            head = e[1] if e[0] == nt else e[0]
            tail = nt
            if a == start:
                break
        votes = [1 if prefer[h] else -1 for _, _, h in cyc if h in prefer]
        votes += [-1 if prefer[t] else 1 for _, t, _ in cyc if t in prefer]
        if strict and len(set(votes)) > 1:
            raise DiagramError("band is not coherent with the link orientation")
        vote = sum(votes)
        if vote < 0:
            cyc = [(a, h, t) for a, t, h in cyc]
        elif vote == 0:
            # keep the direction that needs the fewest rotations
            bad = sum(1 for _, t, h in cyc if h[1] == 2 or t[1] == 0)
            good = sum(1 for _, t, h in cyc if h[1] == 0 or t[1] == 2)
            if bad > good:
                cyc = [(a, h, t) for a, t, h in cyc]
        for a, _, h in cyc:
            head_of[a] = h
    for c, x in enumerate(d.crossings):
        under_in = x.slots[0]
        if head_of.get(under_in) != (c, 0):
            s = slots[c]
            slots[c] = [s[2], s[3], s[0], s[1]]
            arrows[c] = -arrows[c]
    return _build(slots, arrows, d.loops)


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------


def birth(d: Diagram) -> MoveResult:
    (new,) = _fresh(d, 1)
    after = Diagram(d.crossings, tuple(sorted(d.loops + (new,))))
    return MoveResult("birth", d, after, _identity(d), _identity(after))


def death(d: Diagram, loop: int) -> MoveResult:
    if loop not in d.loops:
        raise DiagramError(f"c{loop} is not a crossingless circle of the frame")
    after = Diagram(d.crossings, tuple(a for a in d.loops if a != loop))
    return MoveResult("death", d, after, _identity(d), _identity(after))


def relabel(d: Diagram, mapping: dict[int, int]) -> MoveResult:
    full = {a: mapping.get(a, a) for a in d.arcs}
    if len(set(full.values())) != len(full):
        raise DiagramError("relabel is not injective")
    xs = tuple(replace(x, slots=tuple(full[a] for a in x.slots)) for x in d.crossings)  # type: ignore[arg-type]
    after = Diagram(xs, tuple(sorted(full[a] for a in d.loops)))
    after.validate()
    after = after.signed()
    return MoveResult("relabel", d, after, _identity(d), {full[a]: a for a in d.arcs})


def r1_add(d: Diagram, a: int, sign: int, index: int = 0) -> MoveResult:
    if a not in d.arcs:
        raise DiagramError(f"arc {a} not in frame")
    base = [list(x.slots) for x in d.crossings]
    arrows = [x.arrow for x in d.crossings]
    if a in d.loops:
        (loop,) = _fresh(d, 1)
        a2 = a
        loops = [x for x in d.loops if x != a]
    else:
        a2, loop = _fresh(d, 2)
        _split_arc(d, a, a2, base)
        loops = list(d.loops)
    shapes = [(a, loop, loop, a2), (a, a2, loop, loop), (loop, a, a2, loop), (loop, loop, a2, a)]
    cands = []
    for shape in shapes:
        nd = _try(base + [list(shape)], arrows + [1], loops)
        if nd is not None and nd.crossing_sign(nd.n - 1) == sign:
            cands.append(nd)
    after = _pick(cands, index, f"r1+ on arc {a}")
    amap: ArcMap = {x: x for x in d.arcs}
    amap.update({a2: a, loop: None})
    return MoveResult("r1+", d, after, _identity(d), amap, local=(after.n - 1,))


def _merge_and_drop(d: Diagram, drop: Sequence[int], joins: Sequence[Sequence[int]], local: set[int]):
    """Remove crossings and glue arcs; returns (new diagram, arc map of d)."""
    uf = _UnionFind(d.arcs)
    for group in joins:
        for x in group[1:]:
            uf.union(group[0], x)
    classes: dict[int, list[int]] = {}
    for a in d.arcs:
        classes.setdefault(uf.find(a), []).append(a)
    rep = {}
    for members in classes.values():
        keep = [a for a in members if a not in local]
        r = min(keep) if keep else None
        for a in members:
            rep[a] = r
    dropset = set(drop)
    xs = [x for c, x in enumerate(d.crossings) if c not in dropset]
    used = {rep[a] for x in xs for a in x.slots}
    slots = [[rep[a] for a in x.slots] for x in xs]
    loops = set(rep[a] for a in d.loops)
    for members in classes.values():
        r = rep[members[0]]
        if r is not None and r not in used:
            loops.add(r)
    nd = _build(slots, [x.arrow for x in xs], loops)
    amap: ArcMap = {a: (None if a in local else rep[a]) for a in d.arcs}
    return nd, amap


def r1_remove(d: Diagram, c: int) -> MoveResult:
    x = d.crossings[c]
    kinks = {x.slots[s] for s in range(4) if x.slots[s] == x.slots[(s + 1) % 4]}
    if not kinks:
        raise DiagramError(f"crossing {c + 1} is not a kink")
    # a lone figure-eight curve has two kink loops; the smaller id survives
    loop = max(kinks)
    others = [a for a in x.slots if a != loop]
    after, amap = _merge_and_drop(d, [c], [others], {loop})
    return MoveResult("r1-", d, after, amap, _identity(after), local=(c,))


def _strand_pieces(d: Diagram, a: int, fresh: list[int], base: list[list[int]]) -> tuple[int, int, int]:
    """(tail piece, middle piece, head piece) for pushing a finger along arc a."""
    mid = fresh.pop(0)
    if a in d.loops:
        return a, mid, a
    end = fresh.pop(0)
    _split_arc(d, a, end, base)
    return a, mid, end


def r2_add(d: Diagram, over: int, under: int, index: int = 0) -> MoveResult:
    for a in (over, under):
        if a not in d.arcs:
            raise DiagramError(f"arc {a} not in frame")
    if over == under:
        raise DiagramError("r2+ needs two different arcs")
    base = [list(x.slots) for x in d.crossings]
    arrows = [x.arrow for x in d.crossings]
    fresh = _fresh(d, 4)
    o_in, o_mid, o_out = _strand_pieces(d, over, fresh, base)
    u_in, u_mid, u_out = _strand_pieces(d, under, fresh, base)
    loops = [x for x in d.loops if x not in (over, under)]
    n = d.n
    cands = []
    for order, flip1, flip2 in itertools.product((0, 1), (0, 1), (0, 1)):
        over_at = [(o_in, o_mid), (o_mid, o_out)]
        if order:
            over_at.reverse()
        xs = []
        for k, (ui, uo), flip in ((0, (u_in, u_mid), flip1), (1, (u_mid, u_out), flip2)):
            oi, oo = over_at[k]
            xs.append([ui, oo, uo, oi] if flip else [ui, oi, uo, oo])
        nd = _try(base + xs, arrows + [1, 1], loops)
        if nd is None or not _has_face(nd, {n, n + 1}, 2):
            continue
        if any(nd.other_end(n, s)[0] == n + 1 and nd.crossings[n].slots[s] == o_mid for s in (1, 3)):
            cands.append(nd)
    after = _pick(cands, index, f"r2+ of arc {over} over arc {under}")
    amap: ArcMap = {x: x for x in d.arcs}
    amap.update({o_out: over, u_out: under, o_mid: None, u_mid: None})
    return MoveResult("r2+", d, after, _identity(d), amap, local=(n, n + 1))


def r2_remove(d: Diagram, c1: int, c2: int) -> MoveResult:
    if c1 == c2:
        raise DiagramError("r2- needs two different crossings")
    mids = []
    for s in range(4):
        a = d.crossings[c1].slots[s]
        oc, os_ = d.other_end(c1, s)
        if oc == c2 and os_ % 2 == s % 2:
            mids.append((a, s, os_))
    over = [m for m in mids if m[1] % 2 == 1]
    under = [m for m in mids if m[1] % 2 == 0]
    pairs = []
    for f in d.faces:
        if len(f) != 2 or {c for c, _ in f} != {c1, c2}:
            continue
        arcs = {d.crossings[c].slots[(s + 1) % 4] for c, s in f}
        for o in over:
            for u in under:
                if {o[0], u[0]} == arcs:
                    pairs.append((o[0] + u[0], o, u))
    if not pairs:
        raise DiagramError(f"crossings {c1 + 1} and {c2 + 1} do not bound a Reidemeister II bigon")
    # two circles crossing twice bound several bigons; remove the newest arcs
    _, o, u = max(pairs)
    over, under = [o], [u]
    joins = []
    for a, s, t in (over[0], under[0]):
        joins.append([a, d.crossings[c1].slots[(s + 2) % 4], d.crossings[c2].slots[(t + 2) % 4]])
    local = {over[0][0], under[0][0]}
    after, amap = _merge_and_drop(d, [c1, c2], joins, local)
    return MoveResult("r2-", d, after, amap, _identity(after), local=tuple(sorted((c1, c2))))


def _boundary_ring(d: Diagram, tri: set[int], inner: set[int]) -> list[tuple[int, bool]] | None:
    """Outer arc ends around the triangle bounded by ``inner``, in planar order."""
    face = next((f for f in d.faces if len(f) == 3 and {c for c, _ in f} == tri
                 and {d.crossings[c].slots[(s + 1) % 4] for c, s in f} == inner), None)
    if face is None:
        return None
    ring = []
    for c, s in face:
        for t in (s + 3, s + 2):
            a = d.crossings[c].slots[t % 4]
            ring.append((a, d.heads[a] == (c, t % 4)))
    return ring


def _same_ring(x: list | None, y: list) -> bool:
    return len(x) == len(y) and any(x == y[k:] + y[:k] for k in range(len(y)))


def r3(d: Diagram, cs: Sequence[int], index: int = 0) -> MoveResult:
    tri = set(cs)
    if len(tri) != 3:
        raise DiagramError("r3 needs three different crossings")
    face = next((f for f in d.faces if len(f) == 3 and {c for c, _ in f} == tri), None)
    if face is None:
        raise DiagramError(f"crossings {', '.join(str(c + 1) for c in cs)} do not bound a triangle")
    inner = {d.crossings[c].slots[(s + 1) % 4] for c, s in face}
    # strands through the triangle: (first crossing, entry slot, second crossing, exit slot)
    strands = []
    for m in inner:
        (ca, sa), (cb, sb) = d.ends[m]
        if d.heads[m] == (ca, sa):
            (ca, sa), (cb, sb) = (cb, sb), (ca, sa)
        # m runs from (ca, sa) to (cb, sb)
        strands.append({"mid": m, "first": ca, "in": d.crossings[ca].slots[(sa + 2) % 4],
                        "second": cb, "out": d.crossings[cb].slots[(sb + 2) % 4],
                        "over_first": sa % 2 == 1, "over_second": sb % 2 == 1})
    heights = sorted(s["over_first"] + s["over_second"] for s in strands)
    if heights != [0, 1, 2]:
        raise DiagramError("triangle is not a Reidemeister III configuration")
    # each triangle crossing: which two strands meet there
    meet: dict[int, list[dict]] = {c: [] for c in tri}
    for s in strands:
        meet[s["first"]].append(s)
        meet[s["second"]].append(s)
    new_arcs: dict[int, dict[int, tuple[int, int]]] = {c: {} for c in tri}
    for s in strands:
        # after the move the strand meets its partners in the opposite order
        new_arcs[s["second"]][id(s)] = (s["in"], s["mid"])
        new_arcs[s["first"]][id(s)] = (s["mid"], s["out"])
    base = [list(x.slots) for x in d.crossings]
    arrows = [x.arrow for x in d.crossings]
    order = sorted(tri)
    options = []
    for c in order:
        pair = meet[c]
        s_under = next(s for s in pair if not (s["over_first"] if s["first"] == c else s["over_second"]))
        s_over = next(s for s in pair if s is not s_under)
        ui, uo = new_arcs[c][id(s_under)]
        oi, oo = new_arcs[c][id(s_over)]
        options.append(([ui, oi, uo, oo], [ui, oo, uo, oi]))
    ring = _boundary_ring(d, tri, inner)
    cands = []
    for choice in itertools.product((0, 1), repeat=3):
        slots = [list(s) for s in base]
        for c, opt, k in zip(order, options, choice):
            slots[c] = opt[k]
        nd = _try(slots, arrows, d.loops)
        if nd is None or not all(nd.crossing_sign(c) == d.crossing_sign(c) for c in tri):
            continue
        other = _boundary_ring(nd, tri, inner)
        if other is not None and _same_ring(other, ring):
            cands.append(nd)
    after = _pick(cands, index, "r3")
    amap = {a: (None if a in inner else a) for a in d.arcs}
    return MoveResult("r3", d, after, amap, dict(amap), local=tuple(order))


def saddle(d: Diagram, a: int, b: int, arrow: int = 1, index: int = 0) -> MoveResult:
    """Band move between arcs a and b.

    The band frame appends one crossing whose 0-smoothing is ``d`` and whose
    1-smoothing is the next frame.
    """
    for x in (a, b):
        if x not in d.arcs:
            raise DiagramError(f"arc {x} not in frame")
    base = [list(x.slots) for x in d.crossings]
    arrows = [x.arrow for x in d.crossings]
    loops = set(d.loops)
    la, lb = a in loops, b in loops
    fresh = _fresh(d, 2)
    to_before: ArcMap = {x: x for x in d.arcs}
    if la and lb and a == b:
        a2 = fresh[0]
        shapes = [[a, a2, a2, a]]
        loops -= {a}
        to_before[a2] = a
    elif la and lb:
        shapes = [[a, a, b, b]]
        loops -= {a, b}
    elif la or lb:
        p, s = (a, b) if la else (b, a)
        s2 = fresh[0]
        _split_arc(d, s, s2, base)
        shapes = [[s, s2, p, p], [s2, s, p, p]]
        loops -= {p}
        to_before[s2] = s
    elif a == b:
        raise DiagramError("a band from an arc to itself is not supported; put a kink on it first")
    else:
        a2, b2 = fresh
        _split_arc(d, a, a2, base)
        _split_arc(d, b, b2, base)
        shapes = [[p, q, r, s] for p, q in ((a, a2), (a2, a)) for r, s in ((b, b2), (b2, b))]
        to_before.update({a2: a, b2: b})
    cands = []
    for shape in shapes:
        raw = Diagram(tuple(Crossing(tuple(s), w) for s, w in zip(base + [shape], arrows + [arrow])),  # type: ignore[arg-type]
                      tuple(sorted(loops)))
        try:
            raw.validate()
        except DiagramError:
            continue
        cands.append(raw)
    band = _pick(cands, index, f"saddle between arcs {a} and {b}")
    X = band.crossings[-1].slots
    # next frame: 1-smooth the band crossing
    uf = _UnionFind(band.arcs)
    uf.union(X[0], X[3])
    uf.union(X[1], X[2])
    classes: dict[int, list[int]] = {}
    for x in band.arcs:
        classes.setdefault(uf.find(x), []).append(x)
    rep = {x: min(m) for m in classes.values() for x in m}
    xs = band.crossings[:-1]
    slots = [[rep[x] for x in c.slots] for c in xs]
    used = {x for s in slots for x in s}
    new_loops = {rep[x] for x in band.loops} | {rep[x] for x in X if rep[x] not in used}
    raw_after = Diagram(tuple(Crossing(tuple(s), c.arrow) for s, c in zip(slots, xs)), tuple(sorted(new_loops)))  # type: ignore[arg-type]
    raw_after.validate()
    # prefer the orientation inherited from the frame before the band
    prefer = {}
    for arc, (hc, hs) in d.heads.items():
        prefer[(hc, hs)] = True
        tc, ts = _tail_end(d, arc)
        prefer[(tc, ts)] = False
    after = reorient(raw_after, prefer, strict=True)
    # orientation fixes may rotate crossings; track arcs through ids only
    to_after: ArcMap = {x: rep[x] for x in band.arcs}
    return MoveResult("saddle", d, after, _identity(d), _identity(after), band=band,
                      band_to_before=to_before, band_to_after=to_after, arrow=arrow)


# ---------------------------------------------------------------------------
# movies
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Movie:
    name: str
    frames: tuple[Diagram, ...]
    moves: tuple[MoveResult, ...]

    @property
    def euler_characteristic(self) -> int:
        chi = 0
        for m in self.moves:
            chi += {"birth": 1, "death": 1, "saddle": -1}.get(m.kind, 0)
        return chi

    def max_crossings(self) -> int:
        return max(max((f.n for f in self.frames), default=0),
                   max((m.band.n for m in self.moves if m.band is not None), default=0))


_MOVE_WORDS = ("birth", "death", "saddle", "r1+", "r1-", "r2+", "r2-", "r3", "relabel")


def _ints(tokens: Sequence[str], k: int, line: int, word: str) -> list[int]:
    if len(tokens) != k:
        raise MovieError(line, f"{word} expects {k} integer argument(s), got {len(tokens)}")
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise MovieError(line, f"{word}: non-integer argument in {' '.join(tokens)!r}") from None


def _sign(tok: str, line: int) -> int:
    if tok not in ("+", "-"):
        raise MovieError(line, f"expected + or -, got {tok!r}")
    return 1 if tok == "+" else -1


def _crossing(d: Diagram, c: int, line: int) -> int:
    if not 1 <= c <= d.n:
        raise MovieError(line, f"crossing {c} not in frame with {d.n} crossings")
    return c - 1


def apply_move(d: Diagram, text: str, line: int = 0) -> MoveResult:
    tokens = text.split()
    index = 0
    if tokens and tokens[-1].startswith("@"):
        try:
            index = int(tokens.pop()[1:])
        except ValueError:
            raise MovieError(line, "placement index must look like @0, @1, ...") from None
    word, args = tokens[0], tokens[1:]
    try:
        if word == "birth":
            _ints(args, 0, line, word)
            res = birth(d)
        elif word == "death":
            joined = "".join(args)
            m = re.fullmatch(r"c(\d+)", joined)
            if not m:
                raise MovieError(line, "death expects cK")
            res = death(d, int(m.group(1)))
        elif word == "saddle":
            if len(args) != 3:
                raise MovieError(line, "saddle expects two arcs and an arrow sign")
            x, y = _ints(args[:2], 2, line, word)
            res = saddle(d, x, y, _sign(args[2], line), index)
        elif word == "r1+":
            if len(args) != 2:
                raise MovieError(line, "r1+ expects an arc and a sign")
            (x,) = _ints(args[:1], 1, line, word)
            res = r1_add(d, x, _sign(args[1], line), index)
        elif word == "r1-":
            (c,) = _ints(args, 1, line, word)
            res = r1_remove(d, _crossing(d, c, line))
        elif word == "r2+":
            x, y = _ints(args, 2, line, word)
            res = r2_add(d, x, y, index)
        elif word == "r2-":
            c1, c2 = _ints(args, 2, line, word)
            res = r2_remove(d, _crossing(d, c1, line), _crossing(d, c2, line))
        elif word == "r3":
            cs = _ints(args, 3, line, word)
            res = r3(d, [_crossing(d, c, line) for c in cs], index)
        elif word == "relabel":
            mapping = {}
            for tok in args:
                m = re.fullmatch(r"(\d+):(\d+)", tok)
                if not m:
                    raise MovieError(line, f"bad relabel pair {tok!r}")
                mapping[int(m.group(1))] = int(m.group(2))
            res = relabel(d, mapping)
        else:
            raise MovieError(line, f"unknown move {word!r}")
    except DiagramError as e:
        raise MovieError(line, str(e)) from None
    return replace(res, line=line)


def parse_movie(text: str, name: str = "movie") -> Movie:
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in lines if ln]
    if not lines or not lines[0][1].startswith("start"):
        raise MovieError(lines[0][0] if lines else 1, "movie must begin with 'start'")
    pd_parts = [lines[0][1][len("start"):]]
    k = 1
    while k < len(lines) and lines[k][1].split()[0] not in _MOVE_WORDS:
        pd_parts.append(lines[k][1])
        k += 1
    try:
        frame = parse_pd("\n".join(pd_parts))
    except DiagramError as e:
        raise MovieError(lines[0][0], f"start frame: {e}") from None
    frames = [frame]
    moves = []
    for line, text_ in lines[k:]:
        res = apply_move(frames[-1], text_, line)
        moves.append(res)
        frames.append(res.after)
    return Movie(name, tuple(frames), tuple(moves))


def inverse_move(m: MoveResult) -> MoveResult:
    """The move taking ``m.after`` back to ``m.before`` (additions and RIII only)."""
    d = m.after
    if m.kind == "r1+":
        return r1_remove(d, m.local[0])
    if m.kind == "r2+":
        return r2_remove(d, *m.local)
    if m.kind == "r3":
        for index in itertools.count():
            back = r3(d, m.local, index)  # raises once the candidates run out
            if back.after == m.before:
                return back
    raise DiagramError(f"no inverse recorded for {m.kind}")
