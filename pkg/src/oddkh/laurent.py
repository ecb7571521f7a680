"""Laurent polynomials with integer coefficients in a single variable."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping


@dataclass(frozen=True)
class LaurentPoly:
    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", {e: c for e, c in self.coeffs.items() if c})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: other * c for e, c in self.coeffs.items()})
        out: dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            raise ValueError("negative powers of a general Laurent polynomial are not defined")
        out = LaurentPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.coeffs.items())))

    def substitute_power(self, k: int) -> "LaurentPoly":
        """Replace the variable ``x`` by ``x**k``."""
        return LaurentPoly({k * e: c for e, c in self.coeffs.items()})

    def evaluate(self, x):
        return sum(c * x**e for e, c in self.coeffs.items())

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            if e == 0:
                parts.append(f"{c:+d}")
            else:
                coef = {1: "+", -1: "-"}.get(c, f"{c:+d}*")
                parts.append(f"{coef}q^{e}" if e != 1 else f"{coef}q")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s


Q = LaurentPoly.monomial(1)
Q_INV = LaurentPoly.monomial(-1)
UNKNOT = Q + Q_INV
