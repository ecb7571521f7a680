"""Truncated Novikov ring: finite sums Σ a_i u^{q_i} with rational exponents.

Every element carries a cutoff; terms with exponent at or above it are
dropped, which makes the quotient ring computable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

DEFAULT_CUTOFF = Fraction(64)


class NotInvertible(ArithmeticError):
    pass


@dataclass(frozen=True)
class NovikovElement:
    terms: Mapping[Fraction, int] = field(default_factory=dict)
    cutoff: Fraction = DEFAULT_CUTOFF

    def __post_init__(self) -> None:
        cutoff = Fraction(self.cutoff)
        clean: dict[Fraction, int] = {}
        for e, c in self.terms.items():
            e = Fraction(e)
            if c and e < cutoff:
                clean[e] = clean.get(e, 0) + c
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if c})
        object.__setattr__(self, "cutoff", cutoff)

    @classmethod
    def monomial(cls, exp, coeff: int = 1, cutoff=DEFAULT_CUTOFF) -> "NovikovElement":
        return cls({Fraction(exp): coeff}, cutoff)

    @classmethod
    def one(cls, cutoff=DEFAULT_CUTOFF) -> "NovikovElement":
        return cls.monomial(0, 1, cutoff)

    def _check(self, other: "NovikovElement") -> None:
        if self.cutoff != other.cutoff:
            raise ValueError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")

    def __add__(self, other: "NovikovElement") -> "NovikovElement":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return NovikovElement(out, self.cutoff)

    def __neg__(self) -> "NovikovElement":
        return NovikovElement({e: -c for e, c in self.terms.items()}, self.cutoff)

    def __sub__(self, other: "NovikovElement") -> "NovikovElement":
        return self + (-other)

    def __mul__(self, other: "NovikovElement") -> "NovikovElement":
        return novikov_mul(self, other)

    def is_zero(self) -> bool:
        return not self.terms

    def valuation(self) -> Fraction:
        if not self.terms:
            raise ValueError("zero has no valuation")
        return min(self.terms)

    def leading_coefficient(self) -> int:
        return self.terms[self.valuation()]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}·u^{e}" for e, c in sorted(self.terms.items()))


def novikov_mul(a: NovikovElement, b: NovikovElement) -> NovikovElement:
    a._check(b)
    out: dict[Fraction, int] = {}
    cutoff = a.cutoff
    for e1, c1 in a.terms.items():
        for e2, c2 in b.terms.items():
            e = e1 + e2
            if e < cutoff:
                out[e] = out.get(e, 0) + c1 * c2
    return NovikovElement(out, cutoff)


def novikov_invert(a: NovikovElement, allow_shift: bool = False) -> NovikovElement:
    """Inverse up to the cutoff.

    The lowest term must have coefficient ±1. A nonzero lowest exponent is a
    monomial factor ``u^{q0}``; it is only divided out when ``allow_shift``.
    """
    if a.is_zero():
        raise NotInvertible("zero is not invertible")
    q0 = a.valuation()
    lead = a.terms[q0]
    if lead not in (1, -1):
        raise NotInvertible(f"leading coefficient {lead} is not a unit of Z")
    if q0 != 0 and not allow_shift:
        raise NotInvertible(f"lowest exponent {q0} != 0; enable monomial shift to invert")
    # a = lead·u^{q0}·(1 + r), every exponent of r positive; then
    # (1 + r)^{-1} has b_0 = 1 and b_e = -Σ_f r_f b_{e-f}
    work_cutoff = a.cutoff + max(q0, 0)
    r = {e - q0: lead * c for e, c in a.terms.items() if e != q0}
    exps = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for e in frontier:
            for f in r:
                g = e + f
                if g < work_cutoff and g not in exps:
                    exps.add(g)
                    nxt.append(g)
        frontier = nxt
    b: dict[Fraction, int] = {}
    for e in sorted(exps):
        if e == 0:
            b[e] = 1
            continue
        b[e] = -sum(c * b.get(e - f, 0) for f, c in r.items() if f <= e)
    return NovikovElement({e - q0: lead * c for e, c in b.items()}, a.cutoff)


def c_unit(cutoff=DEFAULT_CUTOFF, signs: str = "one-sided") -> NovikovElement:
    """Truncation of Σ ±(2k+1) u^{(2k+1)^2}.

    Only the one-sided reading ``u + 3u^9 + 5u^25 + …`` (k ≥ 0, all signs +)
    is implemented; pairing k with −k−1 would double coefficients and the
    result is not a unit over Z.
    """
    if signs != "one-sided":
        raise ValueError(f"unknown sign reading {signs!r}")
    terms: dict[Fraction, int] = {}
    k = 0
    while Fraction((2 * k + 1) ** 2) < Fraction(cutoff):
        terms[Fraction((2 * k + 1) ** 2)] = 2 * k + 1
        k += 1
    return NovikovElement(terms, cutoff)
