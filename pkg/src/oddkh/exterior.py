"""Integer exterior algebra on an ordered set of generators.

Monomials are stored as bitmasks: bit ``i`` set means generator ``a_i`` is a
factor, always in increasing index order. The empty mask is the unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping


def popcount(x: int) -> int:
    return bin(x).count("1")


def merge_sign(x: int, y: int) -> int:
    """Sign of sorting the concatenation ``x ∧ y`` of two monomials.

    Counts pairs (i in x, j in y) with i > j. Returns 0 if they share a factor.
    """
    if x & y:
        return 0
    inversions = 0
    while y:
        low = y & -y
        # factors of x strictly above this factor of y
        inversions += popcount(x & ~((low << 1) - 1))
        y ^= low
    return -1 if inversions & 1 else 1


def monomial_indices(m: int) -> list[int]:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return out


def monomial_from_indices(indices: Iterable[int]) -> tuple[int, int]:
    """Return ``(sign, mask)`` for the wedge of generators in the given order."""
    mask = 0
    sign = 1
    for i in indices:
        bit = 1 << i
        if mask & bit:
            return 0, 0
        # moving a_i past the already present larger factors
        if popcount(mask & ~((bit << 1) - 1)) & 1:
            sign = -sign
        mask |= bit
    return sign, mask


@dataclass(frozen=True)
class ExteriorElement:
    """An element of Λ*(Z^n) written in the monomial basis."""

    generator_count: int
    terms: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {m: c for m, c in self.terms.items() if c}
        for m in clean:
            if m >> self.generator_count:
                raise ValueError(f"monomial {m:b} outside {self.generator_count} generators")
        object.__setattr__(self, "terms", clean)

    @classmethod
    def one(cls, n: int) -> "ExteriorElement":
        return cls(n, {0: 1})

    @classmethod
    def generator(cls, n: int, i: int) -> "ExteriorElement":
        if not 0 <= i < n:
            raise IndexError(f"generator {i} out of range for {n}")
        return cls(n, {1 << i: 1})

    @classmethod
    def monomial(cls, n: int, indices: Iterable[int]) -> "ExteriorElement":
        sign, mask = monomial_from_indices(indices)
        return cls(n, {mask: sign} if sign else {})

    def degrees(self) -> set[int]:
        return {popcount(m) for m in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        _check_ambient(self, other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ExteriorElement(self.generator_count, out)

    def __neg__(self) -> "ExteriorElement":
        return ExteriorElement(self.generator_count, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "ExteriorElement":
        return ExteriorElement(self.generator_count, {m: k * c for m, c in self.terms.items()})

    def __xor__(self, other: "ExteriorElement") -> "ExteriorElement":
        return wedge(self, other)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (popcount(m), m)):
            name = "∧".join(f"a{i + 1}" for i in monomial_indices(m)) or "1"
            parts.append(f"{self.terms[m]:+d}·{name}")
        return " ".join(parts)


def _check_ambient(x: ExteriorElement, y: ExteriorElement) -> None:
    if x.generator_count != y.generator_count:
        raise ValueError(
            f"ambient mismatch: {x.generator_count} vs {y.generator_count} generators"
        )


def wedge(x: ExteriorElement, y: ExteriorElement) -> ExteriorElement:
    _check_ambient(x, y)
    out: dict[int, int] = {}
    for mx, cx in x.terms.items():
        for my, cy in y.terms.items():
            s = merge_sign(mx, my)
            if s:
                m = mx | my
                out[m] = out.get(m, 0) + s * cx * cy
    return ExteriorElement(x.generator_count, out)


def contract_monomial(m: int, g: int) -> tuple[int, int]:
    """Interior product ι_g on a monomial, without renumbering.

    Returns ``(sign, mask)``; sign 0 when ``a_g`` is not a factor.
    """
    bit = 1 << g
    if not m & bit:
        return 0, 0
    sign = -1 if popcount(m & (bit - 1)) & 1 else 1
    return sign, m ^ bit


def drop_generator(m: int, g: int) -> int:
    """Renumber a monomial not containing ``a_g`` into the basis without ``a_g``."""
    low = m & ((1 << g) - 1)
    high = m >> (g + 1)
    return low | (high << g)


def insert_generator(m: int, g: int) -> int:
    """Inverse of :func:`drop_generator`: open an empty slot at index ``g``."""
    low = m & ((1 << g) - 1)
    high = m >> g
    return low | (high << (g + 1))


def contract(x: ExteriorElement, g: int) -> ExteriorElement:
    """ι_g, a derivation of degree −1; the ambient basis loses ``a_g``."""
    if not 0 <= g < x.generator_count:
        raise IndexError(f"generator {g} out of range for {x.generator_count}")
    out: dict[int, int] = {}
    for m, c in x.terms.items():
        s, rest = contract_monomial(m, g)
        if s:
            r = drop_generator(rest, g)
            out[r] = out.get(r, 0) + s * c
    return ExteriorElement(x.generator_count - 1, out)
