"""Sparse integer matrices, Smith normal form and integer ranks.

Entries are Python ints, so pivots never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


@dataclass
class IntMatrix:
    rows: int
    cols: int
    entries: dict[int, dict[int, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[int, dict[int, int]] = {}
        for i, row in self.entries.items():
            r = {j: v for j, v in row.items() if v}
            for j in r:
                if not (0 <= i < self.rows and 0 <= j < self.cols):
                    raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            if r:
                clean[i] = r
        self.entries = clean

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, {})

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, dense: Iterable[Iterable[int]], cols: int | None = None) -> "IntMatrix":
        dense = [list(r) for r in dense]
        ncols = cols if cols is not None else (len(dense[0]) if dense else 0)
        return cls(len(dense), ncols, {i: {j: v for j, v in enumerate(r) if v} for i, r in enumerate(dense)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, row in self.entries.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries.get(i, {}).get(j, 0)

    def add_to(self, i: int, j: int, v: int) -> None:
        if not v:
            return
        row = self.entries.setdefault(i, {})
        nv = row.get(j, 0) + v
        if nv:
            row[j] = nv
        else:
            del row[j]
            if not row:
                del self.entries[i]

    def nnz(self) -> int:
        return sum(len(r) for r in self.entries.values())

    def is_zero(self) -> bool:
        return not self.entries

    def transpose(self) -> "IntMatrix":
        out: dict[int, dict[int, int]] = {}
        for i, row in self.entries.items():
            for j, v in row.items():
                out.setdefault(j, {})[i] = v
        return IntMatrix(self.cols, self.rows, out)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out: dict[int, dict[int, int]] = {}
        for i, row in self.entries.items():
            acc: dict[int, int] = {}
            for k, v in row.items():
                orow = other.entries.get(k)
                if orow:
                    for j, w in orow.items():
                        acc[j] = acc.get(j, 0) + v * w
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return IntMatrix(self.rows, other.cols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        out = {i: dict(r) for i, r in self.entries.items()}
        res = IntMatrix(self.rows, self.cols, out)
        for i, row in other.entries.items():
            for j, v in row.items():
                res.add_to(i, j, v)
        return res

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, {i: {j: k * v for j, v in r.items()} for i, r in self.entries.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def mod(self, p: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, {i: {j: v % p for j, v in r.items()} for i, r in self.entries.items()})

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        """Multiply by a sparse column vector given as ``{index: value}``."""
        out: dict[int, int] = {}
        cols = self.transpose().entries if len(vec) * 4 < self.nnz() else None
        if cols is not None:
            for j, x in vec.items():
                for i, v in cols.get(j, {}).items():
                    out[i] = out.get(i, 0) + v * x
        else:
            for i, row in self.entries.items():
                s = sum(v * vec.get(j, 0) for j, v in row.items())
                if s:
                    out[i] = s
        return {i: v for i, v in out.items() if v}

    def _same_shape(self, other: "IntMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------


def _swap_rows(a: list[list[int]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: list[list[int]], i: int, j: int) -> None:
    for row in a:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D``, U and V unimodular.

    D is diagonal with non-negative entries and ``D[i,i] | D[i+1,i+1]``.
    Pivot is the smallest nonzero absolute entry; afterwards the diagonal is
    fixed up for divisibility.
    """
    r, c = m.rows, m.cols
    a = m.to_dense()
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def row_op(i: int, j: int, k: int) -> None:
        # row_i += k * row_j, mirrored on U
        if k:
            ai, aj = a[i], a[j]
            for t in range(c):
                ai[t] += k * aj[t]
            ui, uj = u[i], u[j]
            for t in range(r):
                ui[t] += k * uj[t]

    def col_op(i: int, j: int, k: int) -> None:
        # col_i += k * col_j, mirrored on V
        if k:
            for row in a:
                row[i] += k * row[j]
            for row in v:
                row[i] += k * row[j]

    t = 0
    while t < min(r, c):
        # find smallest nonzero entry in the trailing block
        best = None
        for i in range(t, r):
            for j in range(t, c):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        _swap_rows(a, t, pi)
        _swap_rows(u, t, pi)
        _swap_cols(a, t, pj)
        _swap_cols(v, t, pj)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, r):
                if a[i][t]:
                    row_op(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, c):
                if a[t][j]:
                    col_op(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if done:
                break
            # a remainder smaller than the pivot survived; move it to the pivot
            best = None
            for i in range(t, r):
                if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                    best = (abs(a[i][t]), i, t)
            for j in range(t, c):
                if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                    best = (abs(a[t][j]), t, j)
            _, pi, pj = best
            if pi != t:
                _swap_rows(a, t, pi)
                _swap_rows(u, t, pi)
            if pj != t:
                _swap_cols(a, t, pj)
                _swap_cols(v, t, pj)
        # divisibility against the rest of the trailing block
        p = a[t][t]
        bad = None
        for i in range(t + 1, r):
            for j in range(t + 1, c):
                if a[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            row_op(t, bad, 1)
            continue
        if p < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return IntMatrix.from_dense(u, r), IntMatrix.from_dense(a, c), IntMatrix.from_dense(v, c)


def _dense_invariants(a: list[list[int]]) -> list[int]:
    if not a or not a[0]:
        return []
    _, d, _ = smith_normal_form(IntMatrix.from_dense(a))
    return [d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i]]


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero Smith invariants of ``m`` in divisibility order.

    Unit pivots are eliminated sparsely first; only the leftover block goes
    through the dense algorithm.
    """
    rows = {i: dict(r) for i, r in m.entries.items()}
    cols: dict[int, set[int]] = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        pivot = None
        # prefer short rows to limit fill-in
        for i in sorted(rows, key=lambda k: len(rows[k])):
            for j, x in rows[i].items():
                if x in (1, -1):
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        prow = rows.pop(pi)
        x = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols.get(pj, ())):
            row = rows[i]
            f = row[pj] * x  # x is ±1, so x^{-1} == x
            for j, w in prow.items():
                nv = row.get(j, 0) - f * w
                if nv:
                    if j not in row:
                        cols.setdefault(j, set()).add(i)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            if not row:
                del rows[i]
        cols.pop(pj, None)
        units += 1
    if not rows:
        return [1] * units
    keys_r = sorted(rows)
    keys_c = sorted({j for r in rows.values() for j in r})
    ci = {j: k for k, j in enumerate(keys_c)}
    dense = [[0] * len(keys_c) for _ in keys_r]
    for a, i in enumerate(keys_r):
        for j, w in rows[i].items():
            dense[a][ci[j]] = w
    return [1] * units + _dense_invariants(dense)


def rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))


def det(dense: list[list[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(dense)
    if n == 0:
        return 1
    a = [list(r) for r in dense]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
