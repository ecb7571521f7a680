import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddkh.cobordism import compose, move_map, movie_maps
from oddkh.exterior import ExteriorElement
from oddkh.movie import parse_movie
from oddkh.pfh_model import (FormalUnit, ModelMismatch, UnlinkState, compare_move, compare_with_kh,
                             elementary_cobordisms, embed, kh_move, l_n, l_n_inverse,
                             pfh_elementary_map, read_back)


def el(g, terms):
    return ExteriorElement(g, terms)


def state(n, *indices):
    return UnlinkState.monomial(n, indices)


def test_l_n_examples():
    assert l_n(ExteriorElement.one(3), 4).element == ExteriorElement.one(3)
    assert l_n(el(1, {0b1: 1}), 2).element == el(1, {0b1: -1})
    assert l_n(el(2, {0b11: 1}), 3).element == el(2, {0b11: 1})


def test_l_n_range():
    with pytest.raises(IndexError):
        l_n(el(3, {}), 3)


def test_state_size_checked():
    with pytest.raises(ValueError):
        UnlinkState(3, el(3, {}))


@given(st.integers(1, 6), st.data())
def test_l_n_is_an_involution(n, data):
    g = n - 1
    terms = data.draw(st.dictionaries(st.integers(0, (1 << g) - 1), st.integers(-9, 9), max_size=5))
    x = el(g, terms)
    assert l_n_inverse(l_n(x, n)) == x


def test_merge_drops_the_last_generator():
    s = UnlinkState(3, el(2, {0b01: 2, 0b11: 5, 0b10: 1, 0: 4}))
    out = pfh_elementary_map("merge", s).state
    assert out.n == 2 and out.element == el(1, {0b1: 2, 0: 4})


def test_death_contracts():
    v2_v1 = UnlinkState(3, ExteriorElement.monomial(2, [1, 0]))
    assert pfh_elementary_map("death", v2_v1).state.element == el(1, {0b1: 1})
    assert pfh_elementary_map("death", state(3, 0)).state.element.is_zero()


def test_split_wedges_the_new_generator():
    s = state(2, 0)
    out = pfh_elementary_map("split", s).state
    # v_2 ∧ v_1 = -v_1 ∧ v_2
    assert out.element == el(2, {0b11: -1})
    assert pfh_elementary_map("split", s, arrow=-1).state.element == el(2, {0b11: 1})


def test_birth_is_inclusion_with_optional_c():
    s = state(2, 0)
    plain = pfh_elementary_map("birth", s)
    fam = pfh_elementary_map("birth", s, family=True)
    assert plain.state.element == el(2, {0b01: 1})
    assert str(plain.unit) == "1" and str(fam.unit) == "c"
    assert fam.unit.value.valuation() == 1


def test_bad_moves():
    with pytest.raises(ValueError):
        pfh_elementary_map("merge", state(1))
    with pytest.raises(ValueError):
        pfh_elementary_map("twist", state(2))


def test_formal_unit_products():
    c = FormalUnit(1, True)
    assert str(FormalUnit(-1) * c) == "-c"
    with pytest.raises(ValueError):
        c * c


def test_birth_on_empty_matches():
    r = compare_move("birth", 0)
    assert str(r.unit) in ("1", "-1")


def test_split_on_one_circle_matches():
    km = kh_move("split", 1)
    image = move_map(km.move)(embed(state(1), km.move.before, km.order_before))
    back = read_back(image, km.move.after, km.order_after)
    assert back.element in (el(1, {1: 1}), el(1, {1: -1}))
    assert str(compare_move("split", 1).unit).lstrip("-") == "1"


def test_merge_after_split_vanishes_in_both_models():
    pf = pfh_elementary_map("merge", pfh_elementary_map("split", state(1)).state).state
    assert pf.element.is_zero()
    m = parse_movie("start circles=1\nsaddle 1 1 +\nsaddle 1 2 +")
    f = compose(movie_maps(m.moves))
    assert f({(0, 0): 1}) == {}


def test_death_after_birth_vanishes_in_both_models():
    s = state(2, 0)
    assert pfh_elementary_map("death", pfh_elementary_map("birth", s).state).state.element.is_zero()
    m = parse_movie("start circles=2\nbirth\ndeath c3")
    f = compose(movie_maps(m.moves))
    assert all(not f.image(k) for k in f.source.index)


def test_all_elementary_cobordisms_agree():
    moves = elementary_cobordisms(4)
    for family in (False, True):
        report = compare_with_kh(moves, family)
        assert report.ok
        for mc in report.moves:
            expected = "c" if family and mc.kind in ("birth", "death") else "1"
            assert str(mc.unit).lstrip("-") == expected


def test_read_back_rejects_leaks():
    km = kh_move("merge", 2)
    with pytest.raises(ModelMismatch):
        # a_1 alone is not in the subalgebra generated by a_1 - a_2
        read_back({(0, 0b01): 1}, km.move.before, km.order_before)


def test_move_list():
    moves = elementary_cobordisms(5)
    assert len(moves) == 21
    assert {k for k, *_ in moves} == {"birth", "death", "merge", "split"}
