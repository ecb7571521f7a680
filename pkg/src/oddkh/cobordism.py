"""Chain maps between odd Khovanov complexes.

Morse moves (birth, death, saddle) act vertex by vertex on the cube; their
vertex signs are fixed so the result is a chain map. Reidemeister maps come
from Gaussian elimination: the larger complex is cancelled down along unit
entries of the local edges until what is left is a signed relabelling of the
smaller complex.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

from .diagram import Diagram
from .exterior import monomial_from_indices, monomial_indices, popcount
from .intmatrix import IntMatrix, smith_normal_form
from .khcomplex import (FACE_ANTI, FACE_COMMUTE, LADYBUG_PARITY, Cube, GradedComplex,
                        build_complex, classify_face, complex_from_entries, crossing_bit,
                        ladybug_type, solve_edge_assignment)
from .movie import MoveResult

Key = Hashable
Vec = dict


class CobordismError(RuntimeError):
    pass


def _clean(vec: dict, modulus: int = 0) -> dict:
    if modulus:
        return {k: v % modulus for k, v in vec.items() if v % modulus}
    return {k: v for k, v in vec.items() if v}


def _axpy(acc: dict, vec: dict, a: int = 1) -> None:
    for k, v in vec.items():
        acc[k] = acc.get(k, 0) + a * v


# ---------------------------------------------------------------------------
# chain maps
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class ChainMap:
    """Linear map given on generators, with its bidegree and chain sign.

    ``f ∘ d = chain_sign · d ∘ f``. Images are cached per generator.
    """

    source: GradedComplex
    target: GradedComplex
    func: Callable[[Key], dict]
    degree: tuple[int, int] = (0, 0)
    chain_sign: int = 1
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    def image(self, key: Key) -> dict:
        out = self._cache.get(key)
        if out is None:
            out = _clean(self.func(key), self.target.modulus)
            self._cache[key] = out
        return out

    def __call__(self, vec: dict) -> dict:
        acc: dict = {}
        for k, c in vec.items():
            if c:
                _axpy(acc, self.image(k), c)
        return _clean(acc, self.target.modulus)

    def blocks(self) -> dict[tuple[int, int], IntMatrix]:
        dh, dq = self.degree
        out = {}
        for (h, q), keys in self.source.gens.items():
            tgt_keys = self.target.gens.get((h + dh, q + dq), [])
            pos = {k: i for i, k in enumerate(tgt_keys)}
            m = IntMatrix.zeros(len(tgt_keys), len(keys))
            for j, k in enumerate(keys):
                for t, v in self.image(k).items():
                    if t not in pos:
                        raise CobordismError(f"{self.name}: image of {k} leaves bidegree {(h + dh, q + dq)}")
                    m.add_to(pos[t], j, v)
            if not m.is_zero():
                out[(h, q)] = m
        return out

    def check(self) -> None:
        """Verify the chain condition and the bidegree on every generator."""
        src, tgt = self.source, self.target
        dh, dq = self.degree
        for k, (hq, _) in src.index.items():
            img = self.image(k)
            for t in img:
                if t not in tgt.index:
                    raise CobordismError(f"{self.name}: image of {k} contains {t}, not a target generator")
                if tgt.degree_of(t) != (hq[0] + dh, hq[1] + dq):
                    raise CobordismError(f"{self.name}: {k} in {hq} maps to {t} in {tgt.degree_of(t)}")
            lhs = self(src.boundary({k: 1}))
            rhs = _clean({t: self.chain_sign * v for t, v in tgt.boundary(img).items()}, tgt.modulus)
            if lhs != rhs:
                raise CobordismError(f"{self.name}: chain condition fails on generator {k}")


def identity_map(c: GradedComplex) -> ChainMap:
    return ChainMap(c, c, lambda k: {k: 1}, (0, 0), 1, "identity")


def compose(maps: Sequence[ChainMap], complex: GradedComplex | None = None) -> ChainMap:
    """``maps[-1] ∘ … ∘ maps[0]``; an empty list needs ``complex`` and gives its identity."""
    if not maps:
        if complex is None:
            raise ValueError("composing no maps needs the complex to act on")
        return identity_map(complex)
    for a, b in zip(maps, maps[1:]):
        if a.target is not b.source and a.target.gens != b.source.gens:
            raise CobordismError(f"cannot compose {a.name!r} into {b.name!r}: complexes differ")
    ms = list(maps)

    def func(k):
        vec = {k: 1}
        for m in ms:
            vec = m(vec)
            if not vec:
                break
        return vec

    degree = (sum(m.degree[0] for m in ms), sum(m.degree[1] for m in ms))
    sign = 1
    for m in ms:
        sign *= m.chain_sign
    return ChainMap(ms[0].source, ms[-1].target, func, degree, sign, " ; ".join(m.name for m in ms))


def mapping_cone(f: ChainMap) -> GradedComplex:
    """Cone of f, graded so that f becomes degree preserving.

    A source generator in bidegree (h, q) sits in (h + Δh − 1, q + Δq).
    """
    src, tgt = f.source, f.target
    dh, dq = f.degree
    gens: dict[tuple[int, int], list] = {}
    for (h, q), keys in src.gens.items():
        gens.setdefault((h + dh - 1, q + dq), []).extend(("s", k) for k in keys)
    for hq, keys in tgt.gens.items():
        gens.setdefault(hq, []).extend(("t", k) for k in keys)
    s_sign = -1 if f.chain_sign == 1 else 1

    def entries():
        for k, row in src.out.items():
            for k2, v in row.items():
                yield ("s", k), ("s", k2), s_sign * v
            for t, v in f.image(k).items():
                yield ("s", k), ("t", t), v
        for k, row in tgt.out.items():
            for k2, v in row.items():
                yield ("t", k), ("t", k2), v

    return complex_from_entries(gens, entries(), tgt.modulus, {"cone_of": f.name})


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------


class Elimination:
    """Cancel unit entries of a complex, keeping the homotopy equivalence.

    After cancelling ``b -> b'`` (coefficient λ = ±1) the differential on the
    rest picks up the zigzag ``x -> b' <- b -> y``. ``project`` and
    ``include`` are the chain maps to and from the smaller complex.
    """

    def __init__(self, c: GradedComplex) -> None:
        self.complex = c
        self.modulus = c.modulus
        self.out: dict = {k: dict(row) for k, row in c.out.items()}
        self.inn: dict = {k: {} for k in self.out}
        for k, row in self.out.items():
            for k2, v in row.items():
                self.inn[k2][k] = v
        self.steps: list[tuple] = []
        self.step_of: dict = {}
        self.row_steps: dict = {}

    def alive(self, k: Key) -> bool:
        return k in self.out

    def eliminate(self, b: Key, b2: Key) -> None:
        out, inn = self.out, self.inn
        if b not in out or b2 not in out:
            raise CobordismError(f"cannot cancel {b} -> {b2}: generator already cancelled")
        lam = out[b].get(b2, 0)
        if self.modulus:
            lam %= self.modulus
        if lam not in (1, -1):
            raise CobordismError(f"cannot cancel {b} -> {b2}: coefficient {lam} is not a unit")
        col = {y: v for y, v in out[b].items() if y != b2}
        row = {x: v for x, v in inn[b2].items() if x != b}
        for x, rx in row.items():
            ox = out[x]
            for y, cy in col.items():
                nv = ox.get(y, 0) - rx * lam * cy
                if self.modulus:
                    nv %= self.modulus
                if nv:
                    ox[y] = nv
                    inn[y][x] = nv
                else:
                    ox.pop(y, None)
                    inn[y].pop(x, None)
        for g in (b, b2):
            for y in out[g]:
                inn[y].pop(g, None)
            for x in inn[g]:
                out[x].pop(g, None)
        for g in (b, b2):
            del out[g]
            del inn[g]
        j = len(self.steps)
        self.steps.append((b, b2, lam, col, row))
        self.step_of[b] = j
        self.step_of[b2] = j
        for x in row:
            self.row_steps.setdefault(x, []).append(j)

    def cancel_units(self, order: Iterable[Key] | None = None) -> int:
        """Greedily cancel every remaining unit entry; returns the number of pairs."""
        count = 0
        changed = True
        while changed:
            changed = False
            for x in list(order if order is not None else self.out):
                if x not in self.out:
                    continue
                best = None
                for y, v in self.out[x].items():
                    if v in (1, -1) or (self.modulus and v % self.modulus):
                        size = len(self.inn[y])
                        if best is None or size < best[0]:
                            best = (size, y)
                if best is not None:
                    self.eliminate(x, best[1])
                    count += 1
                    changed = True
        return count

    def project(self, vec: dict) -> dict:
        vec = dict(vec)
        heap = sorted({self.step_of[k] for k in vec if k in self.step_of})
        queued = set(heap)
        while heap:
            j = heapq.heappop(heap)
            b, b2, lam, col, _ = self.steps[j]
            vec.pop(b, None)
            c = vec.pop(b2, 0)
            if c:
                for y, v in col.items():
                    vec[y] = vec.get(y, 0) - lam * c * v
                    s = self.step_of.get(y)
                    if s is not None and s not in queued:
                        queued.add(s)
                        heapq.heappush(heap, s)
        return _clean(vec, self.modulus)

    def include(self, vec: dict) -> dict:
        vec = dict(vec)
        heap: list[int] = []
        queued: set[int] = set()

        def push(k):
            for s in self.row_steps.get(k, ()):
                if s not in queued:
                    queued.add(s)
                    heapq.heappush(heap, -s)

        for k in vec:
            push(k)
        while heap:
            j = -heapq.heappop(heap)
            b, b2, lam, col, row = self.steps[j]
            add = sum(vec.get(x, 0) * rx for x, rx in row.items())
            if add:
                vec[b] = vec.get(b, 0) - lam * add
                push(b)
        return _clean(vec, self.modulus)

    def remainder(self) -> GradedComplex:
        c = self.complex
        gens: dict = {}
        for hq, keys in c.gens.items():
            ks = [k for k in keys if k in self.out]
            if ks:
                gens[hq] = ks
        entries = ((k, k2, v) for k, row in self.out.items() for k2, v in row.items())
        return complex_from_entries(gens, entries, c.modulus, dict(c.meta))


# ---------------------------------------------------------------------------
# homology with bases
# ---------------------------------------------------------------------------


def _dense(m: IntMatrix) -> list[list[int]]:
    return m.to_dense()


def _unimodular_inverse(a: list[list[int]]) -> list[list[int]]:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    out = [[int(x) for x in row[n:]] for row in m]
    return out


def _matvec(a: list[list[int]], x: list[int]) -> list[int]:
    return [sum(r[j] * x[j] for j in range(len(x)) if x[j]) for r in a]


@dataclass
class _Slot:
    """Homology of one bigrading of a reduced complex, with adapted coordinates."""

    keys: list
    vinv: list[list[int]]  # inverse of the kernel-adapting column transform
    rank_out: int
    p: list[list[int]]  # SNF row transform of the boundary lattice inside the kernel
    diag: list[int]  # invariant factors of the boundary lattice
    free_reps: list[dict]
    torsion_reps: list[tuple[int, dict]]

    @property
    def free_rank(self) -> int:
        return len(self.free_reps)

    def coordinates(self, vec: dict) -> tuple[list[int], list[int]]:
        x = [vec.get(k, 0) for k in self.keys]
        c = _matvec(self.vinv, x)
        if any(c[: self.rank_out]):
            raise CobordismError("vector is not a cycle")
        c = _matvec(self.p, c[self.rank_out:]) if self.p else []
        r = len(self.diag)
        tors = [c[i] % self.diag[i] for i in range(r) if self.diag[i] > 1]
        return c[r:], tors


class HomologyBasis:
    """Homology of a complex in Smith-adapted bases, computed on its unit-reduced model."""

    def __init__(self, c: GradedComplex) -> None:
        if c.modulus:
            raise CobordismError("homology bases are only implemented over Z")
        self.complex = c
        self.elim = Elimination(c)
        self.elim.cancel_units()
        self.reduced = self.elim.remainder()
        self.slots: dict[tuple[int, int], _Slot] = {}
        r = self.reduced
        for hq, keys in r.gens.items():
            h, q = hq
            dout = _dense(r.d(hq)) if r.dim((h + 1, q)) else []
            din = _dense(r.d((h - 1, q))) if r.dim((h - 1, q)) else []
            n = len(keys)
            if dout and dout[0]:
                _, dd, v = smith_normal_form(IntMatrix.from_dense(dout, n))
                rank_out = sum(1 for i in range(min(dd.rows, dd.cols)) if dd[i, i])
                vd = _dense(v)
            else:
                rank_out, vd = 0, [[int(i == j) for j in range(n)] for i in range(n)]
            vinv = _unimodular_inverse(vd)
            k = n - rank_out
            # boundaries in kernel coordinates
            if din and k:
                cols = [[row[j] for row in din] for j in range(len(din[0]))]
                mk = [[0] * len(cols) for _ in range(k)]
                for j, col in enumerate(cols):
                    cc = _matvec(vinv, col)
                    for i in range(k):
                        mk[i][j] = cc[rank_out + i]
                pu, pd, _ = smith_normal_form(IntMatrix.from_dense(mk, len(cols)))
                diag = [pd[i, i] for i in range(min(pd.rows, pd.cols)) if pd[i, i]]
                p = _dense(pu)
            else:
                diag, p = [], [[int(i == j) for j in range(k)] for i in range(k)]
            pinv = _unimodular_inverse(p) if k else []
            basis = []
            for j in range(k):
                # kernel vector V[:, rank_out + i] combined by column j of P^{-1}
                coeffs = [pinv[i][j] for i in range(k)]
                vec = [0] * n
                for i, a in enumerate(coeffs):
                    if a:
                        for t in range(n):
                            vec[t] += a * vd[t][rank_out + i]
                basis.append({keys[t]: x for t, x in enumerate(vec) if x})
            rdiag = len(diag)
            free = [self.elim.include(b) for b in basis[rdiag:]]
            tors = [(diag[i], self.elim.include(basis[i])) for i in range(rdiag) if diag[i] > 1]
            self.slots[hq] = _Slot(keys, vinv, rank_out, p, diag, free, tors)

    def free_rank(self, hq: tuple[int, int]) -> int:
        s = self.slots.get(hq)
        return s.free_rank if s else 0

    def torsion(self, hq: tuple[int, int]) -> list[int]:
        s = self.slots.get(hq)
        return [d for d, _ in s.torsion_reps] if s else []

    def coordinates(self, vec: dict, hq: tuple[int, int]) -> tuple[list[int], list[int]]:
        """Free and torsion coordinates of the class of a cycle of bidegree hq."""
        s = self.slots.get(hq)
        if s is None:
            return [], []
        return s.coordinates(self.elim.project(vec))


@dataclass
class InducedMap:
    free: dict[tuple[int, int], IntMatrix]
    torsion: dict[tuple[int, int], list[list[int]]]
    degree: tuple[int, int]

    def is_identity_up_to_sign(self) -> int:
        """+1 or -1 if every free block is ±(the same) identity, else 0."""
        signs = set()
        for m in self.free.values():
            if m.rows != m.cols:
                return 0
            if m == IntMatrix.identity(m.rows):
                signs.add(1)
            elif m == IntMatrix.identity(m.rows).scale(-1):
                signs.add(-1)
            else:
                return 0
        if len(signs) > 1:
            return 0
        return signs.pop() if signs else 1


def induced_homology_map(f: ChainMap, source_basis: HomologyBasis | None = None,
                         target_basis: HomologyBasis | None = None) -> InducedMap:
    hs = source_basis or HomologyBasis(f.source)
    ht = target_basis or HomologyBasis(f.target)
    dh, dq = f.degree
    free: dict = {}
    tors: dict = {}
    for hq, slot in hs.slots.items():
        thq = (hq[0] + dh, hq[1] + dq)
        cols = []
        for rep in slot.free_reps:
            cols.append(ht.coordinates(f(rep), thq)[0])
        nrows = ht.free_rank(thq)
        if slot.free_reps or nrows:
            m = IntMatrix.zeros(nrows, len(cols))
            for j, col in enumerate(cols):
                for i, v in enumerate(col):
                    m.add_to(i, j, v)
            free[hq] = m
        if slot.torsion_reps:
            tors[hq] = [ht.coordinates(f(rep), thq)[1] for _, rep in slot.torsion_reps]
    return InducedMap(free, tors, f.degree)


# ---------------------------------------------------------------------------
# circle bookkeeping
# ---------------------------------------------------------------------------


def _labels(cube: Cube, v: int, arcmap: dict) -> list[frozenset | None]:
    out = []
    for circ in cube.resolution(v).circles:
        lab = frozenset(arcmap[a] for a in circ if arcmap.get(a) is not None)
        out.append(lab or None)
    return out


def _circle_map(cube_a: Cube, va: int, map_a: dict, cube_b: Cube, vb: int, map_b: dict) -> list[int | None]:
    """Index in b of the circle matching each circle of a (None when it has no partner)."""
    where = {}
    for j, lab in enumerate(_labels(cube_b, vb, map_b)):
        for x in lab or ():
            where[x] = j
    out = []
    for lab in _labels(cube_a, va, map_a):
        js = {where[x] for x in lab or () if x in where}
        if len(js) > 1:
            raise CobordismError("circle correspondence is not one-to-one")
        out.append(js.pop() if js else None)
    return out


def _relabel(m: int, idx: list[int | None]) -> tuple[int, int]:
    return monomial_from_indices(idx[i] for i in monomial_indices(m))  # type: ignore[misc]


def _perm_sign(seq: list) -> int:
    s = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                s = -s
    return s


# ---------------------------------------------------------------------------
# vertexwise maps
# ---------------------------------------------------------------------------


class _ParityUF:
    def __init__(self) -> None:
        self.parent: dict = {}
        self.par: dict = {}

    def find(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.par[x] = 0
            return x, 0
        p = 0
        root = x
        path = []
        while self.parent[root] != root:
            path.append(root)
            p ^= self.par[root]
            root = self.parent[root]
        # compress
        acc = p
        for node in path:
            nxt = acc ^ self.par[node]
            self.parent[node] = root
            self.par[node] = acc
            acc = nxt
        return root, p

    def union(self, a, b, parity: int) -> bool:
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == parity
        self.parent[rb] = ra
        self.par[rb] = pa ^ pb ^ parity
        return True

    def sign(self, x) -> int:
        return -1 if self.find(x)[1] else 1


def _edge_signs_by_comparison(src: GradedComplex, tgt: GradedComplex,
                              local: Callable[[int, int], dict]) -> _ParityUF:
    """Vertex signs making a vertexwise map commute with the differentials.

    ``local(v, m)`` is the map on monomials at cube vertex v (same vertex
    numbering on both sides). For each cube edge the two composites are
    compared; they must agree up to one sign.
    """
    cs, ct = src.meta["cube"], tgt.meta["cube"]
    es, et = src.meta["assignment"], tgt.meta["assignment"]
    n = cs.n
    uf = _ParityUF()
    for v in range(1 << n):
        uf.find(v)
    for u in range(1 << n):
        for c in range(n):
            bit = crossing_bit(c, n)
            if u & bit:
                continue
            w = u | bit
            rel = 0
            for m in range(1 << cs.circles(u)):
                p: dict = {}
                for m2, val in cs.edge(u, c)(m).items():
                    _axpy(p, local(w, m2), val * es.sign(u, c))
                q: dict = {}
                for m2, val in local(u, m).items():
                    _axpy(q, ct.edge(u, c)(m2), val * et.sign(u, c))
                p, q = _clean(p), _clean(q)
                if not p and not q:
                    continue
                if p == q:
                    r = 1
                elif p == {k: -x for k, x in q.items()}:
                    r = -1
                else:
                    raise CobordismError(f"vertexwise map does not intertwine edge ({u}, {c}) up to sign")
                if rel and r != rel:
                    raise CobordismError(f"inconsistent signs along edge ({u}, {c})")
                rel = r
            if rel and not uf.union(u, w, 0 if rel == 1 else 1):
                raise CobordismError("no consistent vertex signs")
    return uf


def _vertexwise_map(src: GradedComplex, tgt: GradedComplex, local: Callable[[int, int], dict],
                    signs: Callable[[int], int], degree: tuple[int, int], name: str,
                    chain_sign: int = 1, check: bool = True) -> ChainMap:
    def func(k):
        v, m = k
        s = signs(v)
        return {(v, m2): s * val for m2, val in local(v, m).items()}

    f = ChainMap(src, tgt, func, degree, chain_sign, name)
    if check:
        f.check()
    return f


def _complex(d: Diagram, modulus: int = 0) -> GradedComplex:
    cube = Cube(d)
    return build_complex(d, False, modulus, solve_edge_assignment(cube), cube=cube)


def birth_map(src: GradedComplex, tgt: GradedComplex, check: bool = True) -> ChainMap:
    d, d2 = src.meta["diagram"], tgt.meta["diagram"]
    new = set(d2.loops) - set(d.loops)
    if len(new) != 1 or d.crossings != d2.crossings:
        raise CobordismError("birth: target frame is not the source plus one free circle")
    ident = {a: a for a in d2.arcs}
    cs, ct = src.meta["cube"], tgt.meta["cube"]
    cache: dict = {}

    def local(v, m):
        idx = cache.get(v)
        if idx is None:
            idx = cache[v] = _circle_map(cs, v, ident, ct, v, ident)
        s, mask = _relabel(m, idx)
        return {mask: s} if s else {}

    uf = _edge_signs_by_comparison(src, tgt, local)
    return _vertexwise_map(src, tgt, local, uf.sign, (0, 1), "birth", check=check)


def death_map(src: GradedComplex, tgt: GradedComplex, loop: int | None = None, check: bool = True) -> ChainMap:
    d, d2 = src.meta["diagram"], tgt.meta["diagram"]
    gone = set(d.loops) - set(d2.loops)
    if len(gone) != 1 or d.crossings != d2.crossings:
        raise CobordismError("death: target frame is not the source minus one free circle")
    (o,) = gone
    if loop is not None and loop != o:
        raise CobordismError(f"death: circle {loop} is not the one removed")
    ident = {a: a for a in d.arcs}
    cs, ct = src.meta["cube"], tgt.meta["cube"]
    cache: dict = {}

    def local(v, m):
        got = cache.get(v)
        if got is None:
            idx = _circle_map(cs, v, {a: a for a in d.arcs if a != o}, ct, v, ident)
            j = cs.resolution(v).circle_of[o]
            got = cache[v] = (idx, j)
        idx, j = got
        if not m >> j & 1:
            return {}
        pos = sum(1 for i in monomial_indices(m) if i < j)
        s, mask = _relabel(m & ~(1 << j), idx)
        return {mask: s * (-1) ** pos} if s else {}

    uf = _edge_signs_by_comparison(src, tgt, local)
    return _vertexwise_map(src, tgt, local, uf.sign, (0, 1), "death", check=check)


def relabel_map(src: GradedComplex, tgt: GradedComplex, arcs_before: dict, arcs_after: dict,
                check: bool = True) -> ChainMap:
    cs, ct = src.meta["cube"], tgt.meta["cube"]
    cache: dict = {}

    def local(v, m):
        idx = cache.get(v)
        if idx is None:
            idx = cache[v] = _circle_map(cs, v, arcs_before, ct, v, arcs_after)
        s, mask = _relabel(m, idx)
        return {mask: s} if s else {}

    uf = _edge_signs_by_comparison(src, tgt, local)
    return _vertexwise_map(src, tgt, local, uf.sign, (0, 0), "relabel", check=check)


def saddle_map(src: GradedComplex, tgt: GradedComplex, move: MoveResult, check: bool = True) -> ChainMap:
    """Band map, read off the edge of the band crossing in the larger cube.

    Relative vertex signs come from the square rule of that cube, including
    ladybug squares where both composites vanish.
    """
    band = move.band
    if band is None:
        raise CobordismError("saddle move without band data")
    n = band.n - 1
    X = n
    cb = Cube(band)
    cs, ct = src.meta["cube"], tgt.meta["cube"]
    es, et = src.meta["assignment"], tgt.meta["assignment"]
    to_b, to_a = move.band_to_before, move.band_to_after
    ident_s = {a: a for a in move.before.arcs}
    ident_t = {a: a for a in move.after.arcs}
    cache: dict = {}

    def local(v, m):
        got = cache.get(v)
        if got is None:
            v0 = v << 1
            into = _circle_map(cs, v, ident_s, cb, v0, to_b)
            out = _circle_map(cb, v0 | 1, to_a, ct, v, ident_t)
            got = cache[v] = (into, out, cb.edge(v0, X))
        into, out, edge = got
        s, mono = _relabel(m, into)
        if not s:
            return {}
        res: dict = {}
        for m2, val in edge(mono).items():
            s2, mask = _relabel(m2, out)
            if s2:
                res[mask] = res.get(mask, 0) + s * s2 * val
        return _clean(res)

    # s_u s_w = (-1)^{face parity} ε(u,c) ε'(u,c) for each square (u, c, band)
    uf = _ParityUF()
    for u in range(1 << n):
        uf.find(u)
    for u in range(1 << n):
        for c in range(n):
            bit = crossing_bit(c, n)
            if u & bit:
                continue
            kind = classify_face(cb, u << 1, c, X)
            if kind == FACE_COMMUTE:
                p = 1
            elif kind == FACE_ANTI:
                p = 0
            else:
                p = LADYBUG_PARITY[ladybug_type(band, u << 1, c, X)]
            prod = es.sign(u, c) * et.sign(u, c)
            parity = p ^ (0 if prod == 1 else 1)
            if not uf.union(u, u | bit, parity):
                raise CobordismError("saddle: vertex signs are inconsistent")

    # the band edges anticommute with the rest of the cube; (-1)^|v| makes a chain map
    def signs(v):
        return uf.sign(v) * (-1) ** popcount(v)

    return _vertexwise_map(src, tgt, local, signs, (0, -1), "saddle", check=check)


# ---------------------------------------------------------------------------
# Reidemeister maps
# ---------------------------------------------------------------------------


def _local_circle(cube: Cube, v: int, arcmap: dict) -> int | None:
    labs = _labels(cube, v, arcmap)
    loc = [i for i, lab in enumerate(labs) if lab is None]
    if len(loc) > 1:
        raise CobordismError("more than one local circle")
    return loc[0] if loc else None


def _vertices(n: int, fixed: dict[int, int]) -> list[int]:
    out = []
    for v in range(1 << n):
        if all(((v >> (n - 1 - c)) & 1) == b for c, b in fixed.items()):
            out.append(v)
    return out


def _bit(v: int, c: int, n: int) -> int:
    return (v >> (n - 1 - c)) & 1


def _cancel_kink(el: Elimination, cube: Cube, k: int, arcmap: dict) -> tuple[set[int], str, int]:
    """Cancel the local edges of a kink; returns (remaining local states, mode, O-side)."""
    n = cube.n
    bit = crossing_bit(k, n)
    v0 = 0
    o_side = 0 if _local_circle(cube, v0, arcmap) is not None else 1
    if o_side == 1 and _local_circle(cube, v0 | bit, arcmap) is None:
        raise CobordismError("kink crossing has no local circle")
    for v in _vertices(n, {k: 0}):
        w = v | bit
        e = cube.edge(v, k)
        if o_side == 0:
            o = _local_circle(cube, v, arcmap)
            for m in range(1 << cube.circles(v)):
                if m >> o & 1:
                    continue
                (m2,) = e(m).keys()
                el.eliminate((v, m), (w, m2))
        else:
            o = _local_circle(cube, w, arcmap)
            for m in range(1 << cube.circles(v)):
                m2 = next(t for t in e(m) if t >> o & 1)
                el.eliminate((v, m), (w, m2))
    return ({0} if o_side == 0 else {1}), ("contract" if o_side == 0 else "drop"), o_side


def _bigon_state(cube: Cube, p1: int, p2: int, fixed: dict[int, int], arcmap: dict) -> int | None:
    """Which of the mixed states (p1, p2) = (1, 0) / (0, 1) carries the local circle."""
    n = cube.n
    base = 0
    for c, b in fixed.items():
        if b:
            base |= crossing_bit(c, n)
    hits = []
    for which, c in ((0, p1), (1, p2)):
        if _local_circle(cube, base | crossing_bit(c, n), arcmap) is not None:
            hits.append(which)
    if len(hits) != 1:
        return None
    return hits[0]


def _cancel_bigon(el: Elimination, cube: Cube, p1: int, p2: int, fixed: dict[int, int], arcmap: dict) -> int:
    """Cancel the RII-like part of the cube; returns the crossing that is 1 in the surviving state."""
    n = cube.n
    which = _bigon_state(cube, p1, p2, fixed, arcmap)
    if which is None:
        raise CobordismError("crossings do not form a bigon")
    c_on, c_off = (p1, p2) if which == 0 else (p2, p1)
    b_on, b_off = crossing_bit(c_on, n), crossing_bit(c_off, n)
    for v in _vertices(n, {**fixed, p1: 0, p2: 0}):
        w = v | b_on
        o = _local_circle(cube, w, arcmap)
        e = cube.edge(v, c_on)
        for m in range(1 << cube.circles(v)):
            m2 = next(t for t in e(m) if t >> o & 1)
            el.eliminate((v, m), (w, m2))
    for v in _vertices(n, {**fixed, c_on: 1, c_off: 0}):
        o = _local_circle(cube, v, arcmap)
        e = cube.edge(v, c_off)
        for m in range(1 << cube.circles(v)):
            if m >> o & 1:
                continue
            (m2,) = e(m).keys()
            el.eliminate((v, m), (v | b_off, m2))
    return c_off


@dataclass
class _Side:
    complex: GradedComplex
    arcmap: dict
    ext: list[int]  # crossings outside the local picture, in common order
    mode: str = "keep"
    tangle: tuple[int, ...] = ()  # when set, key states by the tangle's boundary matching

    def matching(self, v: int) -> frozenset:
        """How the smoothed tangle pairs up its boundary points.

        A boundary point is an outer arc end, named by the arc and whether
        the arc runs into the tangle there.
        """
        d = self.complex.meta["diagram"]
        n = d.n
        inside = set(self.tangle)
        pairs = []
        seen = set()
        for c in self.tangle:
            for s in range(4):
                a = d.crossings[c].slots[s]
                if self.arcmap.get(a) is None or (c, s) in seen:
                    continue
                start = (a, d.heads[a] == (c, s))
                cc, ss = c, s
                while True:
                    seen.add((cc, ss))
                    x = d.crossings[cc]
                    for p, q in x.pairs(_bit(v, cc, n)):
                        if ss in (p, q):
                            ss2 = q if ss == p else p
                            break
                    seen.add((cc, ss2))
                    b = x.slots[ss2]
                    if self.arcmap.get(b) is not None:
                        pairs.append(frozenset((start, (b, d.heads[b] == (cc, ss2)))))
                        break
                    cc, ss = d.other_end(cc, ss2)
                    if cc not in inside:
                        raise CobordismError("inner arc leaves the tangle")
        return frozenset(pairs)

    def canonical(self, key) -> tuple[tuple, int]:
        v, m = key
        cube = self.complex.meta["cube"]
        n = cube.n
        labs = _labels(cube, v, self.arcmap)
        idx = monomial_indices(m)
        sign = 1
        locs = [i for i, lab in enumerate(labs) if lab is None]
        if self.mode == "contract":
            for o in locs:
                if o not in idx:
                    raise CobordismError(f"generator {key} lacks the local circle")
                sign *= (-1) ** idx.index(o)
                idx.remove(o)
        elif self.mode == "drop":
            if any(o in idx for o in locs):
                raise CobordismError(f"generator {key} contains the local circle")
        elif len(locs) > 1:
            raise CobordismError("ambiguous local circles")
        keep_locs = self.mode == "keep"
        rank = [(0,) if labs[i] is None else (1, min(labs[i])) for i in idx]
        sign *= _perm_sign(rank)
        ext = tuple(_bit(v, c, n) for c in self.ext)
        if self.tangle:
            circles = self.matching(v)
        else:
            circles = frozenset(lab for lab in labs if lab is not None)
        key2 = (ext, circles, len(locs) if keep_locs else 0, tuple(sorted(rank)))
        return key2, sign


def _match(a: dict, side_a: _Side, b: GradedComplex, side_b: _Side) -> dict:
    """Signed bijection S from the surviving part ``a`` (sparse differential) onto ``b``.

    Returns ``{a_key: (b_key, sign)}`` with S d_a = d_b S.
    """
    canon_b: dict = {}
    sign_b: dict = {}
    for k in b.index:
        ck, s = side_b.canonical(k)
        if ck in canon_b:
            raise CobordismError(f"ambiguous generator labels in the smaller complex: {ck}")
        canon_b[ck] = k
        sign_b[k] = s
    pi: dict = {}
    t: dict = {}
    for k in a:
        ck, s = side_a.canonical(k)
        if ck not in canon_b:
            raise CobordismError(f"no partner for generator {k}")
        pi[k] = canon_b.pop(ck)
        t[k] = s * sign_b[pi[k]]
    if canon_b:
        raise CobordismError(f"{len(canon_b)} generators of the smaller complex were not matched")
    uf = _ParityUF()
    bout = b.out
    for x, row in a.items():
        bx = bout[pi[x]]
        if len(row) != len(bx):
            raise CobordismError(f"differential of {x} does not match")
        for y, val in row.items():
            bv = bx.get(pi[y])
            if bv is None or abs(bv) != abs(val):
                raise CobordismError(f"entry {x} -> {y} does not match")
            r = val * t[x] * t[y] * bv
            if not uf.union(x[0], y[0], 0 if r > 0 else 1):
                raise CobordismError("no consistent vertex signs for the matching")
    return {k: (pi[k], t[k] * uf.sign(k[0])) for k in a}


def _ext(n: int, local: Iterable[int]) -> list[int]:
    loc = set(local)
    return [c for c in range(n) if c not in loc]


def _kink_or_bigon(big: GradedComplex, local: tuple[int, ...], arcmap: dict) -> tuple[Elimination, str]:
    cube = big.meta["cube"]
    el = Elimination(big)
    if len(local) == 1:
        _, mode, _ = _cancel_kink(el, cube, local[0], arcmap)
    else:
        _cancel_bigon(el, cube, local[0], local[1], {}, arcmap)
        mode = "drop"
    return el, mode


def reidemeister_map(src: GradedComplex, tgt: GradedComplex, move: MoveResult, check: bool = True) -> ChainMap:
    kind = move.kind
    if kind in ("r1+", "r2+", "r1-", "r2-"):
        adding = kind.endswith("+")
        big, small = (tgt, src) if adding else (src, tgt)
        big_map = move.arcs_after if adding else move.arcs_before
        small_map = move.arcs_before if adding else move.arcs_after
        el, mode = _kink_or_bigon(big, move.local, big_map)
        side_a = _Side(big, big_map, _ext(big.meta["cube"].n, move.local), mode)
        side_b = _Side(small, small_map, list(range(small.meta["cube"].n)))
        S = _match(el.out, side_a, small, side_b)
        if adding:
            inv = {bk: (ak, s) for ak, (bk, s) in S.items()}

            def func(k):
                ak, s = inv[k]
                return el.include({ak: s})
        else:
            def func(k):
                res: dict = {}
                for ak, val in el.project({k: 1}).items():
                    bk, s = S[ak]
                    res[bk] = res.get(bk, 0) + s * val
                return res
        f = ChainMap(src, tgt, func, (0, 0), 1, kind)
    elif kind == "r3":
        f = _r3_map(src, tgt, move)
    else:
        raise CobordismError(f"{kind} is not a Reidemeister move")
    if check:
        f.check()
    return f


def _r3_map(src: GradedComplex, tgt: GradedComplex, move: MoveResult) -> ChainMap:
    tri = list(move.local)
    n = src.meta["cube"].n
    ext = _ext(n, tri)
    errors = []
    for c in tri:
        for r in (0, 1):
            others = [x for x in tri if x != c]
            sides = []
            try:
                for cx, amap in ((src, move.arcs_before), (tgt, move.arcs_after)):
                    cube = cx.meta["cube"]
                    if _bigon_state(cube, others[0], others[1], {c: r}, amap) is None:
                        raise CobordismError("not a bigon")
                    el = Elimination(cx)
                    _cancel_bigon(el, cube, others[0], others[1], {c: r}, amap)
                    sides.append((el, _Side(cx, amap, ext, "keep", tuple(tri))))
                (ea, sa), (eb, sb) = sides
                rem_b = eb.remainder()
                S = _match(ea.out, sa, rem_b, sb)
            except CobordismError as e:
                errors.append(f"central crossing {c + 1}, smoothing {r}: {e}")
                continue

            def func(k, ea=ea, eb=eb, S=S):
                mid: dict = {}
                for ak, val in ea.project({k: 1}).items():
                    bk, s = S[ak]
                    mid[bk] = mid.get(bk, 0) + s * val
                return eb.include(_clean(mid))

            return ChainMap(src, tgt, func, (0, 0), 1, "r3")
    raise CobordismError("r3: no cancellation pattern matched; " + "; ".join(errors))


# ---------------------------------------------------------------------------
# moves and movies
# ---------------------------------------------------------------------------


class ComplexCache:
    """One complex per frame, shared by the maps into and out of it."""

    def __init__(self, modulus: int = 0) -> None:
        self.modulus = modulus
        self._store: dict[Diagram, GradedComplex] = {}

    def __call__(self, d: Diagram) -> GradedComplex:
        c = self._store.get(d)
        if c is None:
            c = self._store[d] = _complex(d, self.modulus)
        return c


def move_map(move: MoveResult, cache: ComplexCache | None = None, check: bool = True) -> ChainMap:
    cache = cache or ComplexCache()
    src, tgt = cache(move.before), cache(move.after)
    kind = move.kind
    if kind == "birth":
        f = birth_map(src, tgt, check)
    elif kind == "death":
        f = death_map(src, tgt, check=check)
    elif kind == "saddle":
        f = saddle_map(src, tgt, move, check)
    elif kind == "relabel":
        f = relabel_map(src, tgt, move.arcs_before, move.arcs_after, check)
    else:
        f = reidemeister_map(src, tgt, move, check)
    if move.line:
        f.name = f"{f.name} (line {move.line})"
    return f


def movie_maps(moves: Sequence[MoveResult], cache: ComplexCache | None = None,
               check: bool = True) -> list[ChainMap]:
    cache = cache or ComplexCache()
    return [move_map(m, cache, check) for m in moves]
