from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddkh.exterior import ExteriorElement, contract, wedge
from oddkh.intmatrix import IntMatrix, det, invariant_factors, rank, smith_normal_form
from oddkh.laurent import LaurentPoly
from oddkh.novikov import NotInvertible, NovikovElement, c_unit, novikov_invert, novikov_mul

CUT = Fraction(40)


def gen(n, i):
    return ExteriorElement.generator(n, i)


def u(exp, coeff=1):
    return NovikovElement.monomial(exp, coeff, CUT)


# -- exterior algebra ---------------------------------------------------------


def test_wedge_examples():
    a1, a2 = gen(2, 0), gen(2, 1)
    assert wedge(a1, a2) == ExteriorElement(2, {0b11: 1})
    assert wedge(a2, a1) == ExteriorElement(2, {0b11: -1})
    assert wedge(a1 - a2, a1 - a2).is_zero()


def test_contract_examples():
    a = gen(1, 0)
    assert contract(a, 0) == ExteriorElement.one(0)
    assert contract(ExteriorElement.one(1), 0).is_zero()
    b_a = wedge(gen(2, 0), gen(2, 1))  # b ∧ a with b = a_1, a = a_2
    assert contract(b_a, 1) == -ExteriorElement.generator(1, 0)


def test_contract_bad_index():
    with pytest.raises(IndexError):
        contract(ExteriorElement.one(2), 2)


def test_monomial_with_repeat_is_zero():
    assert ExteriorElement.monomial(3, [1, 1]).is_zero()
    assert ExteriorElement.monomial(3, [2, 0]) == ExteriorElement(3, {0b101: -1})


def test_ambient_mismatch():
    with pytest.raises(ValueError):
        gen(2, 0) + gen(3, 0)


N = 4
elements = st.dictionaries(st.integers(0, (1 << N) - 1), st.integers(-5, 5), max_size=6).map(
    lambda t: ExteriorElement(N, t))


def _homogeneous(draw, k):
    masks = [m for m in range(1 << N) if bin(m).count("1") == k]
    terms = draw(st.dictionaries(st.sampled_from(masks), st.integers(-5, 5), max_size=4))
    return ExteriorElement(N, terms)


@given(elements, elements, elements)
def test_wedge_associative(x, y, z):
    assert wedge(wedge(x, y), z) == wedge(x, wedge(y, z))


@given(st.integers(0, N), st.integers(0, N), st.data())
def test_graded_commutative(j, k, data):
    x = _homogeneous(data.draw, j)
    y = _homogeneous(data.draw, k)
    assert wedge(x, y) == (-1) ** (j * k) * wedge(y, x)


@given(st.integers(0, N - 1), st.integers(0, N), elements, st.data())
def test_contraction_is_a_derivation(g, j, y, data):
    x = _homogeneous(data.draw, j)
    lhs = contract(wedge(x, y), g)
    # a_g-terms cancel between the two summands, so both are compared without a_g
    rhs = wedge_lowered(contract(x, g), y, g) + (-1) ** j * wedge_lowered_right(x, contract(y, g), g)
    assert lhs == rhs


def _drop(x, g):
    """Forget a_g when it does not occur; used to compare in the smaller ambient."""
    out = {}
    for m, c in x.terms.items():
        if m >> g & 1:
            raise AssertionError("a_g still present")
        low, high = m & ((1 << g) - 1), m >> (g + 1)
        out[low | high << g] = c
    return ExteriorElement(x.generator_count - 1, out)


def _kill(y, g):
    return ExteriorElement(y.generator_count, {m: c for m, c in y.terms.items() if not m >> g & 1})


def wedge_lowered(cx, y, g):
    return wedge(cx, _drop(_kill(y, g), g))


def wedge_lowered_right(x, cy, g):
    return wedge(_drop(_kill(x, g), g), cy)


# -- integer matrices ----------------------------------------------------------


def test_snf_examples():
    _, d, _ = smith_normal_form(IntMatrix.identity(2))
    assert d == IntMatrix.identity(2)
    _, d, _ = smith_normal_form(IntMatrix.from_dense([[2, 0], [0, 3]]))
    assert d.to_dense() == [[1, 0], [0, 6]]
    _, d, _ = smith_normal_form(IntMatrix.zeros(1, 1))
    assert d.is_zero()


def test_invariant_factors_and_rank():
    m = IntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert invariant_factors(m) == [2, 6, 12]
    assert rank(m) == 3
    assert det([[2, 1], [1, 2]]) == 3


matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(matrices)
def test_snf_factorisation(dense):
    m = IntMatrix.from_dense(dense)
    u_, d, v = smith_normal_form(m)
    assert u_ @ m @ v == d
    assert abs(det(u_.to_dense())) == abs(det(v.to_dense())) == 1
    diag = [d[i, i] for i in range(min(d.rows, d.cols))]
    assert all(x >= 0 for x in diag)
    assert sum(1 for i, row in d.entries.items() for j in row if i != j) == 0
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert nz == invariant_factors(m)


# -- Laurent polynomials -----------------------------------------------------------


def test_laurent_arithmetic():
    q = LaurentPoly.monomial(1)
    qi = LaurentPoly.monomial(-1)
    assert (q + qi) ** 2 == LaurentPoly({2: 1, 0: 2, -2: 1})
    assert q * qi == LaurentPoly.constant(1)
    assert (q - q) == LaurentPoly()


# -- Novikov ring ---------------------------------------------------------------------


def test_novikov_mul_examples():
    assert novikov_mul(u(1), u(1)) == u(2)
    geometric = NovikovElement({k: (-1) ** k for k in range(40)}, CUT)
    assert (u(0) + u(1)) * geometric == u(0)
    x = u(1) + u(9, 3)
    assert x * x == u(2) + u(10, 6) + u(18, 9)


def test_novikov_invert_examples():
    assert novikov_invert(u(0)) == u(0)
    assert novikov_invert(u(0) - u(1)) == NovikovElement({k: 1 for k in range(40)}, CUT)


def test_monomial_shift():
    x = u(1) + u(9, 3)
    with pytest.raises(NotInvertible):
        novikov_invert(x)
    inv = novikov_invert(x, allow_shift=True)
    assert inv.valuation() == -1
    assert inv.terms[Fraction(7)] == -3
    assert inv.terms[Fraction(15)] == 9
    # the product is 1 up to the truncation, shifted down by the valuation
    prod = x * inv
    assert all(e >= CUT - 2 for e in prod.terms if e != 0)
    assert prod.terms[Fraction(0)] == 1


def test_non_unit_leading_coefficient():
    with pytest.raises(NotInvertible):
        novikov_invert(u(0, 2) + u(1))
    with pytest.raises(NotInvertible):
        novikov_invert(NovikovElement({}, CUT))


def test_c_unit_terms():
    c = c_unit(Fraction(50))
    assert c.terms == {Fraction(1): 1, Fraction(9): 3, Fraction(25): 5, Fraction(49): 7}


def test_cutoff_mismatch():
    with pytest.raises(ValueError):
        u(0) + NovikovElement.one(Fraction(10))


exps = st.fractions(min_value=0, max_value=30, max_denominator=4)
novikov = st.dictionaries(exps, st.integers(-4, 4), max_size=4).map(lambda t: NovikovElement(t, CUT))
units = st.tuples(st.sampled_from((1, -1)),
                  st.dictionaries(st.fractions(min_value=Fraction(1, 4), max_value=30, max_denominator=4),
                                  st.integers(-4, 4), max_size=4)).map(
    lambda p: NovikovElement({0: p[0], **p[1]}, CUT))


@given(novikov, novikov, novikov)
def test_novikov_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(novikov, novikov, novikov)
def test_truncation_commutes_with_products(a, b, c):
    # every product truncates, so this checks that the order of evaluation is irrelevant
    assert (a * b) * c == a * (b * c)


@given(novikov, novikov)
def test_novikov_commutative(a, b):
    assert a * b == b * a


@given(units)
def test_novikov_inverse(a):
    assert a * novikov_invert(a) == NovikovElement.one(CUT)
