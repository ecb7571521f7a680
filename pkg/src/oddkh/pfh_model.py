"""Unlink-level model of plane Floer homology and its comparison with odd Kh.

For the standard unlink U_n with components K_1..K_n the state space is
Λ*(H̃⁰(U_n)) on v_1..v_{n-1}, where v_i is 1 on K_i and -1 on K_n. Inside the
odd Khovanov algebra Λ*(a_1..a_n) of the crossingless diagram this is the
subalgebra generated by v_i = a_i - a_n, so Khovanov maps can be read back
in the v basis and compared move by move.

Code indices are 0-based: generator ``i`` is v_{i+1} and component ``i`` is
K_{i+1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cobordism import ComplexCache, move_map
from .diagram import Diagram
from .exterior import ExteriorElement, contract, monomial_indices, popcount, wedge
from .khcomplex import Cube
from .movie import MoveResult, birth, death, saddle
from .novikov import DEFAULT_CUTOFF, NovikovElement, c_unit

KINDS = ("birth", "death", "merge", "split")


class ModelMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class UnlinkState:
    n: int
    element: ExteriorElement

    def __post_init__(self) -> None:
        if self.element.generator_count != max(self.n - 1, 0):
            raise ValueError(f"U_{self.n} carries {max(self.n - 1, 0)} generators, "
                             f"element has {self.element.generator_count}")

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int]) -> "UnlinkState":
        return cls(n, ExteriorElement.monomial(max(n - 1, 0), indices))

    def basis(self) -> dict[int, int]:
        return dict(self.element.terms)


@dataclass(frozen=True)
class FormalUnit:
    """±1 or ±c, with c the truncated series of the family-of-metrics map."""

    sign: int = 1
    uses_c: bool = False
    cutoff: Fraction = DEFAULT_CUTOFF

    @property
    def value(self) -> NovikovElement:
        base = c_unit(self.cutoff) if self.uses_c else NovikovElement.one(self.cutoff)
        return base if self.sign == 1 else -base

    def __mul__(self, other: "FormalUnit") -> "FormalUnit":
        if self.uses_c and other.uses_c:
            raise ValueError("c^2 is outside the unit set {±1, ±c}")
        return FormalUnit(self.sign * other.sign, self.uses_c or other.uses_c, self.cutoff)

    def __str__(self) -> str:
        return ("-" if self.sign < 0 else "") + ("c" if self.uses_c else "1")


@dataclass(frozen=True)
class Scaled:
    unit: FormalUnit
    state: UnlinkState


# ---------------------------------------------------------------------------
# L_n
# ---------------------------------------------------------------------------


def l_n(x: ExteriorElement, n: int) -> UnlinkState:
    """x_{i1}∧…∧x_{ik} -> (-1)^{k(n-1)} v_{i1}∧…∧v_{ik}."""
    if x.generator_count != max(n - 1, 0):
        raise IndexError(f"U_{n} has {max(n - 1, 0)} torus classes, got {x.generator_count}")
    terms = {m: c * (-1) ** ((popcount(m) * (n - 1)) % 2) for m, c in x.terms.items()}
    return UnlinkState(n, ExteriorElement(x.generator_count, terms))


def l_n_inverse(s: UnlinkState) -> ExteriorElement:
    # the sign is an involution
    return l_n(s.element, s.n).element


# ---------------------------------------------------------------------------
# the elementary maps
# ---------------------------------------------------------------------------


def _counts(kind: str, n: int) -> int:
    """Component count after the move on U_n."""
    if kind not in KINDS:
        raise ValueError(f"unknown elementary cobordism {kind!r}")
    return n + 1 if kind in ("birth", "split") else n - 1


def pfh_elementary_map(kind: str, s: UnlinkState, arrow: int = 1, family: bool = False,
                       cutoff: Fraction = DEFAULT_CUTOFF) -> Scaled:
    """The standard birth C_n, death C̄_n, split P_n or merge P̄_n applied to ``s``.

    Births and deaths add K_n next to the reference component K_{n+1}; splits
    separate K_n from K_{n+1}. ``arrow`` picks the sign of v_n for splits and
    ``family`` attaches the unit c to births and deaths.
    """
    n = s.n
    m = _counts(kind, n)
    if m < 0 or (kind in ("death", "merge") and n < 2) or (kind == "split" and n < 1):
        raise ValueError(f"{kind} does not apply to U_{n}")
    unit = FormalUnit(1, family and kind in ("birth", "death"), cutoff)
    g_new = max(m - 1, 0)
    x = s.element
    if kind == "birth":
        out = ExteriorElement(g_new, dict(x.terms))
    elif kind == "split":
        vn = ExteriorElement.generator(g_new, n - 1)
        out = arrow * wedge(vn, ExteriorElement(g_new, dict(x.terms)))
    elif kind == "merge":
        # v_n -> 0; the other generators keep their index
        last = n - 2
        out = ExteriorElement(g_new, {mm: c for mm, c in x.terms.items() if not mm >> last & 1})
    else:
        out = contract(x, n - 2)
    return Scaled(unit, UnlinkState(m, out))


# ---------------------------------------------------------------------------
# the Khovanov side on crossingless diagrams
# ---------------------------------------------------------------------------


def standard_unlink(n: int) -> Diagram:
    return Diagram((), tuple(range(1, n + 1)))


@dataclass
class KhMove:
    """A crossingless move with the component order on both ends.

    ``order_before[i]`` is the loop id playing K_{i+1}.
    """

    move: MoveResult
    order_before: list[int]
    order_after: list[int]


def kh_move(kind: str, n: int, arrow: int = 1) -> KhMove:
    """The Khovanov counterpart of the standard move on U_n."""
    u = standard_unlink(n)
    order = list(u.loops)
    if kind == "birth":
        mv = birth(u)
        (new,) = set(mv.after.loops) - set(order)
        after = order[:-1] + [new] + order[-1:] if n else [new]
    elif kind == "death":
        mv = death(u, order[-2])
        after = order[:-2] + order[-1:]
    elif kind == "split":
        mv = saddle(u, order[-1], order[-1], arrow)
        (new,) = set(mv.after.loops) - set(order)
        after = order[:-1] + [order[-1], new]
    elif kind == "merge":
        mv = saddle(u, order[-2], order[-1], arrow)
        after = order[:-2] + [min(order[-2:])]
    else:
        raise ValueError(f"unknown elementary cobordism {kind!r}")
    return KhMove(mv, order, after)


def _circle_index(d: Diagram) -> dict[int, int]:
    res = Cube(d).resolution(0)
    return {a: i for i, circ in enumerate(res.circles) for a in circ}


def embed(s: UnlinkState, d: Diagram, order: Sequence[int]) -> dict[tuple[int, int], int]:
    """v_i -> a_i - a_n, as a chain of the crossingless diagram ``d``."""
    idx = _circle_index(d)
    n = len(order)
    amb = len(idx)
    ref = idx[order[-1]] if n else None
    vec = ExteriorElement(amb, {})
    for m, c in s.element.terms.items():
        term = ExteriorElement.one(amb)
        for i in monomial_indices(m):
            gi = ExteriorElement.generator(amb, idx[order[i]]) - ExteriorElement.generator(amb, ref)
            term = wedge(term, gi)
        vec = vec + c * term
    return {(0, mm): c for mm, c in vec.terms.items()}


def read_back(vec: dict[tuple[int, int], int], d: Diagram, order: Sequence[int]) -> UnlinkState:
    """Inverse of :func:`embed`: kill a_n, rename a_i -> v_i, then check."""
    idx = _circle_index(d)
    n = len(order)
    pos = {idx[a]: i for i, a in enumerate(order)}
    ref = idx[order[-1]] if n else None
    terms: dict[int, int] = {}
    for (v, m), c in vec.items():
        if v != 0:
            raise ModelMismatch("chain lives off the crossingless vertex")
        if ref is not None and m >> ref & 1:
            continue
        ids = [pos[g] for g in monomial_indices(m)]
        el = ExteriorElement.monomial(max(n - 1, 0), ids)
        for mm, cc in el.terms.items():
            terms[mm] = terms.get(mm, 0) + c * cc
    s = UnlinkState(n, ExteriorElement(max(n - 1, 0), terms))
    if embed(s, d, order) != {k: c for k, c in vec.items() if c}:
        raise ModelMismatch("Khovanov image leaves the reduced subalgebra")
    return s


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------


@dataclass
class MoveComparison:
    kind: str
    n: int
    unit: FormalUnit
    checked: int


@dataclass
class ComparisonReport:
    moves: list[MoveComparison] = field(default_factory=list)

    @property
    def total_unit(self) -> FormalUnit:
        out = FormalUnit()
        for m in self.moves:
            out = out * m.unit
        return out

    @property
    def ok(self) -> bool:
        return all(str(m.unit).lstrip("-") in ("1", "c") for m in self.moves)


def _torus_basis(n: int) -> list[ExteriorElement]:
    g = max(n - 1, 0)
    return [ExteriorElement(g, {m: 1}) for m in range(1 << g)]


def compare_move(kind: str, n: int, arrow: int = 1, family: bool = False,
                 cache: ComplexCache | None = None) -> MoveComparison:
    """Check PFH(move) = unit · L-transported odd Khovanov map on every basis element.

    Both sides are compared in torus coordinates: x -> L_n -> map -> L_m^{-1}.
    """
    km = kh_move(kind, n, arrow)
    f = move_map(km.move, cache)
    sign = 0
    unit = FormalUnit()
    for x in _torus_basis(n):
        v = l_n(x, n)
        pf = pfh_elementary_map(kind, v, arrow, family)
        unit = pf.unit
        kh = read_back(f(embed(v, km.move.before, km.order_before)), km.move.after, km.order_after)
        lhs = l_n_inverse(pf.state).terms
        rhs = l_n_inverse(kh).terms
        if not lhs and not rhs:
            continue
        for t in (1, -1):
            if lhs == {m: t * c for m, c in rhs.items()}:
                break
        else:
            raise ModelMismatch(f"{kind} on U_{n}: generator {x!r} gives PFH {pf.state.element!r} "
                                f"but Khovanov {kh.element!r}")
        if sign and t != sign:
            raise ModelMismatch(f"{kind} on U_{n}: sign changes between generators (at {x!r})")
        sign = t
    return MoveComparison(kind, n, FormalUnit(sign or 1, unit.uses_c), 1 << max(n - 1, 0))


def compare_with_kh(moves: Sequence[tuple[str, int] | tuple[str, int, int]], family: bool = False) -> ComparisonReport:
    """Compare a sequence of standard elementary moves ``(kind, n[, arrow])``."""
    report = ComparisonReport()
    cache = ComplexCache()
    for mv in moves:
        kind, n, *rest = mv
        report.moves.append(compare_move(kind, n, rest[0] if rest else 1, family, cache))
    return report


def elementary_cobordisms(max_components: int = 5) -> list[tuple[str, int, int]]:
    """Every standard move whose larger end has at most ``max_components`` circles."""
    out = []
    for n in range(0, max_components):
        out.append(("birth", n, 1))
        if n >= 1:
            out += [("split", n, 1), ("split", n, -1)]
    for n in range(2, max_components + 1):
        out += [("death", n, 1), ("merge", n, 1)]
    return out
